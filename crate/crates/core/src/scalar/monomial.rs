use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use super::ScalarError;

/// A named indeterminate. Names match `[a-zA-Z][a-zA-Z0-9_]*`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Variable(Arc<str>);

impl Variable {
    pub fn new(name: &str) -> Result<Self, ScalarError> {
        if is_valid_name(name) {
            Ok(Variable(Arc::from(name)))
        } else {
            Err(ScalarError::InvalidVariable(name.to_string()))
        }
    }

    /// Builds a variable from a name known to be valid.
    ///
    /// # Panics
    /// Panics if `name` is not a valid variable name.
    pub fn named(name: &str) -> Self {
        Self::new(name).unwrap_or_else(|_| panic!("invalid variable name {name:?}"))
    }

    /// `prefix_ij` for single-digit indices, `prefix_i_j` otherwise.
    pub fn indexed(prefix: &str, idx: &[usize]) -> Self {
        let sep = if idx.iter().all(|&i| i < 10) { "" } else { "_" };
        let parts: Vec<String> = idx.iter().map(usize::to_string).collect();
        Self::named(&format!("{prefix}_{}", parts.join(sep)))
    }

    pub fn name(&self) -> &str {
        &self.0
    }
}

pub fn is_valid_name(name: &str) -> bool {
    let mut chars = name.chars();
    match chars.next() {
        Some(c) if c.is_ascii_alphabetic() => {}
        _ => return false,
    }
    chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

impl fmt::Debug for Variable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl fmt::Display for Variable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

/// A Laurent monomial: a finite product of variables raised to nonzero
/// integer powers, stored sorted by variable.
///
/// The total order is lexicographic: variables are visited in name order and
/// the first differing exponent decides. It is compatible with
/// multiplication.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Monomial {
    exps: Vec<(Variable, i64)>,
}

impl Monomial {
    pub fn one() -> Self {
        Monomial { exps: Vec::new() }
    }

    pub fn var(v: Variable) -> Self {
        Monomial { exps: vec![(v, 1)] }
    }

    pub fn power(v: Variable, e: i64) -> Self {
        if e == 0 {
            Self::one()
        } else {
            Monomial { exps: vec![(v, e)] }
        }
    }

    /// Collects `(variable, exponent)` pairs, merging repeats and dropping
    /// zero exponents.
    pub fn from_pairs<I: IntoIterator<Item = (Variable, i64)>>(pairs: I) -> Self {
        let mut acc: BTreeMap<Variable, i64> = BTreeMap::new();
        for (v, e) in pairs {
            *acc.entry(v).or_insert(0) += e;
        }
        Monomial {
            exps: acc.into_iter().filter(|(_, e)| *e != 0).collect(),
        }
    }

    pub fn is_one(&self) -> bool {
        self.exps.is_empty()
    }

    pub fn exponent(&self, v: &Variable) -> i64 {
        match self.exps.binary_search_by(|(w, _)| w.cmp(v)) {
            Ok(i) => self.exps[i].1,
            Err(_) => 0,
        }
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Variable, i64)> + '_ {
        self.exps.iter().map(|(v, e)| (v, *e))
    }

    pub fn variables(&self) -> impl Iterator<Item = &Variable> + '_ {
        self.exps.iter().map(|(v, _)| v)
    }

    pub fn len(&self) -> usize {
        self.exps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.exps.is_empty()
    }

    /// True when every exponent is non-negative.
    pub fn is_polynomial(&self) -> bool {
        self.exps.iter().all(|(_, e)| *e > 0)
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        self.merge(other, |a, b| a + b)
    }

    pub fn div(&self, other: &Monomial) -> Monomial {
        self.merge(other, |a, b| a - b)
    }

    pub fn inv(&self) -> Monomial {
        Monomial {
            exps: self.exps.iter().map(|(v, e)| (v.clone(), -e)).collect(),
        }
    }

    pub fn pow(&self, k: i64) -> Monomial {
        if k == 0 {
            return Self::one();
        }
        Monomial {
            exps: self.exps.iter().map(|(v, e)| (v.clone(), e * k)).collect(),
        }
    }

    /// Componentwise minimum, treating absent variables as exponent 0.
    pub fn min_exponents(&self, other: &Monomial) -> Monomial {
        self.merge(other, |a, b| a.min(b))
    }

    /// Componentwise maximum, treating absent variables as exponent 0.
    pub fn max_exponents(&self, other: &Monomial) -> Monomial {
        self.merge(other, |a, b| a.max(b))
    }

    /// For polynomial monomials: does `self` divide `other`?
    pub fn divides(&self, other: &Monomial) -> bool {
        self.exps.iter().all(|(v, e)| other.exponent(v) >= *e)
    }

    /// Removes a variable, returning its exponent and the remainder.
    pub fn split_off(&self, v: &Variable) -> (i64, Monomial) {
        let mut rest = self.clone();
        match rest.exps.binary_search_by(|(w, _)| w.cmp(v)) {
            Ok(i) => {
                let (_, e) = rest.exps.remove(i);
                (e, rest)
            }
            Err(_) => (0, rest),
        }
    }

    /// Keeps only the variables accepted by `keep`.
    pub fn restrict<F: Fn(&Variable) -> bool>(&self, keep: F) -> Monomial {
        Monomial {
            exps: self.exps.iter().filter(|(v, _)| keep(v)).cloned().collect(),
        }
    }

    fn merge(&self, other: &Monomial, op: impl Fn(i64, i64) -> i64) -> Monomial {
        let mut out = Vec::with_capacity(self.exps.len() + other.exps.len());
        let (mut i, mut j) = (0, 0);
        let (a, b) = (&self.exps, &other.exps);
        while i < a.len() || j < b.len() {
            let (v, ea, eb) = match (a.get(i), b.get(j)) {
                (Some((va, ea)), Some((vb, eb))) => match va.cmp(vb) {
                    Ordering::Less => {
                        i += 1;
                        (va, *ea, 0)
                    }
                    Ordering::Greater => {
                        j += 1;
                        (vb, 0, *eb)
                    }
                    Ordering::Equal => {
                        i += 1;
                        j += 1;
                        (va, *ea, *eb)
                    }
                },
                (Some((va, ea)), None) => {
                    i += 1;
                    (va, *ea, 0)
                }
                (None, Some((vb, eb))) => {
                    j += 1;
                    (vb, 0, *eb)
                }
                (None, None) => unreachable!(),
            };
            let e = op(ea, eb);
            if e != 0 {
                out.push((v.clone(), e));
            }
        }
        Monomial { exps: out }
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        let (a, b) = (&self.exps, &other.exps);
        let (mut i, mut j) = (0, 0);
        loop {
            let (ea, eb) = match (a.get(i), b.get(j)) {
                (None, None) => return Ordering::Equal,
                (Some((_, ea)), None) => {
                    i += 1;
                    (*ea, 0)
                }
                (None, Some((_, eb))) => {
                    j += 1;
                    (0, *eb)
                }
                (Some((va, ea)), Some((vb, eb))) => match va.cmp(vb) {
                    Ordering::Less => {
                        i += 1;
                        (*ea, 0)
                    }
                    Ordering::Greater => {
                        j += 1;
                        (0, *eb)
                    }
                    Ordering::Equal => {
                        i += 1;
                        j += 1;
                        (*ea, *eb)
                    }
                },
            };
            match ea.cmp(&eb) {
                Ordering::Equal => continue,
                ord => return ord,
            }
        }
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.exps.is_empty() {
            return f.write_str("1");
        }
        for (k, (v, e)) in self.exps.iter().enumerate() {
            if k > 0 {
                f.write_str("*")?;
            }
            if *e == 1 {
                write!(f, "{v}")?;
            } else {
                write!(f, "{v}^{e}")?;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(pairs: &[(&str, i64)]) -> Monomial {
        Monomial::from_pairs(pairs.iter().map(|(v, e)| (Variable::named(v), *e)))
    }

    #[test]
    fn names_are_validated() {
        assert!(Variable::new("p_12").is_ok());
        assert!(Variable::new("qr").is_ok());
        assert!(Variable::new("1x").is_err());
        assert!(Variable::new("").is_err());
        assert!(Variable::new("a-b").is_err());
    }

    #[test]
    fn zero_exponents_vanish() {
        assert!(m(&[("q", 2), ("q", -2)]).is_one());
        assert_eq!(m(&[("y", 1), ("x", 2)]).to_string(), "x^2*y");
    }

    #[test]
    fn lex_order_is_multiplicative() {
        let a = m(&[("x", 1)]);
        let b = m(&[("y", 5)]);
        assert!(a > b);
        let c = m(&[("x", -1), ("z", 3)]);
        assert_eq!(a.cmp(&b), a.mul(&c).cmp(&b.mul(&c)));
        assert!(Monomial::one() < m(&[("q", 1)]));
        assert!(Monomial::one() > m(&[("q", -1)]));
    }

    #[test]
    fn min_max_divides() {
        let a = m(&[("x", 2), ("y", -1)]);
        let b = m(&[("x", 1), ("z", 3)]);
        assert_eq!(a.min_exponents(&b), m(&[("x", 1), ("y", -1)]));
        assert_eq!(a.max_exponents(&b), m(&[("x", 2), ("z", 3)]));
        assert!(m(&[("x", 1)]).divides(&m(&[("x", 2), ("y", 1)])));
        assert!(!m(&[("z", 1)]).divides(&m(&[("x", 2)])));
    }
}
