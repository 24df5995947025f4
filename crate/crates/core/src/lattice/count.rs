//! Parameter counts and substitution of solved constraints.

use std::collections::BTreeSet;

use super::integer::integer_rank;
use super::{LatticeError, SolutionLattice};
use crate::scalar::{Monomial, Scalar, Variable};
use crate::Matrix;

/// One plus the integer rank of the exponent vectors (over `base`) of the
/// monomial parts of all nonzero entries of `r`. Every entry must be a
/// Laurent polynomial in `q` (or `qr`) times a monomial in `base`.
pub fn count_parameters(r: &Matrix, base: &[Variable]) -> Result<usize, LatticeError> {
    let base_set: BTreeSet<&Variable> = base.iter().collect();
    let known = [Variable::named("q"), Variable::named("qr")];
    let mut rows = Vec::new();
    for (row, col, value) in r.iter() {
        let fail = || LatticeError::NonFactorableEntry {
            row: row.clone(),
            col: col.clone(),
            value: value.to_string(),
        };
        if value
            .variables()
            .iter()
            .any(|v| !base_set.contains(v) && !known.contains(v))
        {
            return Err(fail());
        }
        if value
            .denominator()
            .variables()
            .iter()
            .any(|v| base_set.contains(v))
        {
            return Err(fail());
        }
        let mut part: Option<Monomial> = None;
        for (m, _) in value.numerator().terms() {
            let b = m.restrict(|v| base_set.contains(v));
            match &part {
                None => part = Some(b),
                Some(p) if *p == b => {}
                Some(_) => return Err(fail()),
            }
        }
        if let Some(p) = part {
            rows.push(base.iter().map(|v| p.exponent(v)).collect::<Vec<i64>>());
        }
    }
    Ok(1 + integer_rank(&rows))
}

/// Rewrites every constrained unknown of `lattice` occurring in `s`.
pub fn reduce_scalar(s: &Scalar, lattice: &SolutionLattice) -> Result<Scalar, LatticeError> {
    let map = lattice.substitution();
    let out = s.subs_monomial(&map);
    if let Some(v) = out.variables().iter().find(|v| map.contains_key(*v)) {
        return Err(LatticeError::UncoveredVariable(v.name().to_string()));
    }
    Ok(out)
}

/// [`reduce_scalar`] applied entrywise.
pub fn reduce_by_constraints(
    m: &Matrix,
    lattice: &SolutionLattice,
) -> Result<Matrix, LatticeError> {
    m.try_map(|s| reduce_scalar(s, lattice))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::MonomialConstraintSystem;
    use crate::LeggedMatrix;

    fn v(n: &str) -> Variable {
        Variable::named(n)
    }

    fn s(text: &str) -> Scalar {
        text.parse().unwrap()
    }

    fn diag(entries: &[&str]) -> Matrix {
        let n = (entries.len() as f64).sqrt() as usize;
        LeggedMatrix::diagonal2(n, |i, j| s(entries[(i - 1) * n + (j - 1)]))
    }

    #[test]
    fn counts_include_q() {
        let m = diag(&["q", "a", "a^-1", "q"]);
        assert_eq!(count_parameters(&m, &[v("a")]).unwrap(), 2);
        let m = diag(&["q", "a*b", "a^2*b^2*(q-q^-1)", "q"]);
        assert_eq!(count_parameters(&m, &[v("a"), v("b")]).unwrap(), 2);
    }

    #[test]
    fn invariant_under_q_factor_and_relabeling() {
        let m = diag(&["a*b", "b", "a^-1", "q"]);
        let scaled = m.scale(&s("(q^2+1)/(q-1)"));
        let base = [v("a"), v("b")];
        let c = count_parameters(&m, &base).unwrap();
        assert_eq!(count_parameters(&scaled, &base).unwrap(), c);
        let relabeled = m.map(|x| {
            x.subs_monomial(
                &[
                    (v("a"), Monomial::var(v("c"))),
                    (v("b"), Monomial::var(v("a"))),
                ]
                .into_iter()
                .collect(),
            )
        });
        assert_eq!(count_parameters(&relabeled, &[v("c"), v("a")]).unwrap(), c);
    }

    #[test]
    fn non_factorable_entries_are_rejected() {
        let m = diag(&["a+b", "1", "1", "1"]);
        assert!(matches!(
            count_parameters(&m, &[v("a"), v("b")]),
            Err(LatticeError::NonFactorableEntry { .. })
        ));
        let m = diag(&["c", "1", "1", "1"]);
        assert!(count_parameters(&m, &[v("a")]).is_err());
        let m = diag(&["1/(a+q)", "1", "1", "1"]);
        assert!(count_parameters(&m, &[v("a")]).is_err());
    }

    #[test]
    fn reduction_substitutes_and_is_idempotent() {
        let mut sys = MonomialConstraintSystem::new(vec![v("p_13"), v("p_12"), v("p_23")]);
        sys.add(
            Monomial::var(v("p_13")),
            Monomial::from_pairs([(v("q"), 1), (v("p_12"), 1), (v("p_23"), 1)]),
        );
        let lat = sys.solve().unwrap();
        let m = diag(&["q", "p_13", "p_12", "p_13^-1*p_23"]);
        let once = reduce_by_constraints(&m, &lat).unwrap();
        assert_eq!(once.entry(&[1, 2], &[1, 2]), s("q*p_12*p_23"));
        assert_eq!(reduce_by_constraints(&once, &lat).unwrap(), once);
        let id = SolutionLattice::identity(&[v("p_13")]);
        assert_eq!(reduce_by_constraints(&m, &id).unwrap(), m);
    }

    #[test]
    fn chained_assignments_are_uncovered() {
        let lat = SolutionLattice {
            free: vec![v("c")],
            assignment: [
                (v("a"), Monomial::var(v("b"))),
                (v("b"), Monomial::var(v("c"))),
            ]
            .into_iter()
            .chain([(v("c"), Monomial::var(v("c")))])
            .collect(),
            rank: 1,
            relation_rank: 2,
        };
        assert!(matches!(
            reduce_scalar(&s("a"), &lat),
            Err(LatticeError::UncoveredVariable(n)) if n == "b"
        ));
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        fn monomial(exps: &[i64], names: &[&str], qexp: i64) -> Scalar {
            let mut m = Scalar::var(v("q")).pow(qexp).unwrap();
            for (e, n) in exps.iter().zip(names) {
                m = &m * &Scalar::var(v(n)).pow(*e).unwrap();
            }
            m
        }

        proptest! {
            #[test]
            fn count_is_invariant(
                exps in prop::collection::vec(prop::collection::vec(-2i64..=2, 3), 4),
                qexps in prop::collection::vec(-2i64..=2, 4),
                scale in -2i64..=2,
            ) {
                let names = ["a", "b", "c"];
                let renamed = ["x", "y", "z"];
                let build = |ns: &[&str]| {
                    LeggedMatrix::diagonal2(2, |i, j| {
                        let k = (i - 1) * 2 + (j - 1);
                        monomial(&exps[k], ns, qexps[k])
                    })
                };
                let m = build(&names);
                let base: Vec<Variable> = names.iter().map(|n| v(n)).collect();
                let c = count_parameters(&m, &base).unwrap();
                prop_assert!(c <= 4);
                let scaled = m.scale(&(&Scalar::var(v("q")).pow(scale).unwrap() * &s("q+1")));
                prop_assert_eq!(count_parameters(&scaled, &base).unwrap(), c);
                let rbase: Vec<Variable> = renamed.iter().map(|n| v(n)).collect();
                prop_assert_eq!(count_parameters(&build(&renamed), &rbase).unwrap(), c);
            }
        }
    }
}
