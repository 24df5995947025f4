//! Sparse matrices on tensor powers of an `n`-dimensional space.
//!
//! A matrix on `k` legs has rows and columns labelled by `k`-tuples of
//! indices in `1..=n`. Rows carry the lower indices and columns the upper
//! ones, so `A_{ij}^{st}` sits at row `(i, j)`, column `(s, t)`, and
//! products contract `(AB)_I^K = sum_J A_I^J B_J^K`.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::field::Field;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TensorError {
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),
    #[error("matrix is singular: elimination found rank {rank} of {size}")]
    Singular { rank: usize, size: usize },
    #[error("leg positions {0:?} are not one of (1,2), (1,3), (2,3)")]
    BadPositions((usize, usize)),
    #[error("index {0:?} out of range")]
    IndexOutOfRange(Vec<usize>),
    #[error("bad matrix entry: {0}")]
    BadEntry(String),
}

/// A sparse square matrix on `legs` tensor factors of a `dim`-dimensional
/// space. Explicit zeros are never stored, so `==` compares matrices.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct LeggedMatrix<T> {
    dim: usize,
    legs: usize,
    entries: BTreeMap<(usize, usize), T>,
}

impl<T: Field> LeggedMatrix<T> {
    /// The zero matrix.
    ///
    /// # Panics
    /// Panics if `dim` or `legs` is zero.
    pub fn zero(dim: usize, legs: usize) -> Self {
        assert!(
            dim >= 1 && legs >= 1,
            "dimension and leg count must be positive"
        );
        LeggedMatrix {
            dim,
            legs,
            entries: BTreeMap::new(),
        }
    }

    pub fn identity(dim: usize, legs: usize) -> Self {
        let mut m = Self::zero(dim, legs);
        for k in 0..m.size() {
            m.entries.insert((k, k), T::one());
        }
        m
    }

    /// Diagonal 2-leg matrix with entry `f(i, j)` at row and column `(i, j)`.
    pub fn diagonal2<F: FnMut(usize, usize) -> T>(dim: usize, mut f: F) -> Self {
        let mut m = Self::zero(dim, 2);
        for i in 1..=dim {
            for j in 1..=dim {
                m.set(&[i, j], &[i, j], f(i, j));
            }
        }
        m
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn legs(&self) -> usize {
        self.legs
    }

    /// Number of rows, `dim^legs`.
    pub fn size(&self) -> usize {
        self.dim.pow(self.legs as u32)
    }

    pub fn nnz(&self) -> usize {
        self.entries.len()
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    /// Flat position of a multi-index.
    pub fn flat(&self, idx: &[usize]) -> Result<usize, TensorError> {
        if idx.len() != self.legs || idx.iter().any(|&i| i == 0 || i > self.dim) {
            return Err(TensorError::IndexOutOfRange(idx.to_vec()));
        }
        Ok(idx.iter().fold(0, |acc, &i| acc * self.dim + (i - 1)))
    }

    /// Multi-index of a flat position.
    pub fn multi(&self, mut k: usize) -> Vec<usize> {
        let mut out = vec![0; self.legs];
        for slot in out.iter_mut().rev() {
            *slot = k % self.dim + 1;
            k /= self.dim;
        }
        out
    }

    pub fn get(&self, row: &[usize], col: &[usize]) -> Option<&T> {
        let r = self.flat(row).ok()?;
        let c = self.flat(col).ok()?;
        self.entries.get(&(r, c))
    }

    /// Entry value, zero when absent.
    pub fn entry(&self, row: &[usize], col: &[usize]) -> T {
        self.get(row, col).cloned().unwrap_or_else(T::zero)
    }

    /// Sets an entry; zero removes it.
    ///
    /// # Panics
    /// Panics on an out-of-range multi-index.
    pub fn set(&mut self, row: &[usize], col: &[usize], value: T) {
        self.try_set(row, col, value).expect("index in range");
    }

    pub fn try_set(&mut self, row: &[usize], col: &[usize], value: T) -> Result<(), TensorError> {
        let r = self.flat(row)?;
        let c = self.flat(col)?;
        self.set_flat(r, c, value);
        Ok(())
    }

    fn set_flat(&mut self, r: usize, c: usize, value: T) {
        if value.is_zero() {
            self.entries.remove(&(r, c));
        } else {
            self.entries.insert((r, c), value);
        }
    }

    /// Nonzero entries as `(row, col, value)` with multi-indices, in row
    /// order.
    pub fn iter(&self) -> impl Iterator<Item = (Vec<usize>, Vec<usize>, &T)> + '_ {
        self.entries
            .iter()
            .map(|(&(r, c), v)| (self.multi(r), self.multi(c), v))
    }

    /// Nonzero entries with flat positions.
    pub fn iter_flat(&self) -> impl Iterator<Item = (usize, usize, &T)> + '_ {
        self.entries.iter().map(|(&(r, c), v)| (r, c, v))
    }

    fn row(&self, r: usize) -> impl Iterator<Item = (usize, &T)> + '_ {
        self.entries
            .range((r, 0)..(r + 1, 0))
            .map(|(&(_, c), v)| (c, v))
    }

    fn same_shape(&self, other: &Self, what: &str) -> Result<(), TensorError> {
        if self.dim != other.dim || self.legs != other.legs {
            return Err(TensorError::ShapeMismatch(format!(
                "{what}: dim {} legs {} against dim {} legs {}",
                self.dim, self.legs, other.dim, other.legs
            )));
        }
        Ok(())
    }

    pub fn mul(&self, other: &Self) -> Result<Self, TensorError> {
        self.same_shape(other, "product")?;
        let mut acc: BTreeMap<(usize, usize), T> = BTreeMap::new();
        for (&(r, m), a) in &self.entries {
            for (c, b) in other.row(m) {
                let t = a.mul_ref(b);
                match acc.get_mut(&(r, c)) {
                    Some(v) => *v = v.add_ref(&t),
                    None => {
                        acc.insert((r, c), t);
                    }
                }
            }
        }
        acc.retain(|_, v| !v.is_zero());
        Ok(LeggedMatrix {
            dim: self.dim,
            legs: self.legs,
            entries: acc,
        })
    }

    /// Product of a nonempty sequence, left to right.
    pub fn product(factors: &[&Self]) -> Result<Self, TensorError> {
        let (first, rest) = factors
            .split_first()
            .ok_or_else(|| TensorError::ShapeMismatch("empty product".into()))?;
        rest.iter().try_fold((*first).clone(), |acc, m| acc.mul(m))
    }

    pub fn sub(&self, other: &Self) -> Result<Self, TensorError> {
        self.same_shape(other, "difference")?;
        let mut out = self.clone();
        for (&k, v) in &other.entries {
            let d = match out.entries.get(&k) {
                Some(a) => a.sub_ref(v),
                None => v.neg_ref(),
            };
            out.set_flat(k.0, k.1, d);
        }
        Ok(out)
    }

    pub fn scale(&self, c: &T) -> Self {
        self.map(|v| v.mul_ref(c))
    }

    /// Applies `f` to every stored entry, dropping results that are zero.
    pub fn map<U: Field, F: FnMut(&T) -> U>(&self, mut f: F) -> LeggedMatrix<U> {
        self.try_map(|v| Ok::<U, std::convert::Infallible>(f(v)))
            .unwrap_or_else(|e| match e {})
    }

    pub fn try_map<U: Field, E, F: FnMut(&T) -> Result<U, E>>(
        &self,
        mut f: F,
    ) -> Result<LeggedMatrix<U>, E> {
        let mut entries = BTreeMap::new();
        for (&k, v) in &self.entries {
            let u = f(v)?;
            if !u.is_zero() {
                entries.insert(k, u);
            }
        }
        Ok(LeggedMatrix {
            dim: self.dim,
            legs: self.legs,
            entries,
        })
    }

    /// Inverse by sparse Gauss-Jordan elimination. Each column pivots on the
    /// candidate row with the fewest nonzeros, then the lightest pivot.
    pub fn inv(&self) -> Result<Self, TensorError> {
        let size = self.size();
        let mut rows: Vec<BTreeMap<usize, T>> = vec![BTreeMap::new(); size];
        let mut aug: Vec<BTreeMap<usize, T>> =
            (0..size).map(|k| BTreeMap::from([(k, T::one())])).collect();
        for (&(r, c), v) in &self.entries {
            rows[r].insert(c, v.clone());
        }
        let mut used = vec![false; size];
        let mut pivot_of = vec![usize::MAX; size];
        let mut rank = 0;
        for col in 0..size {
            let pick = (0..size)
                .filter(|&r| !used[r])
                .filter_map(|r| rows[r].get(&col).map(|v| (rows[r].len(), v.weight(), r)))
                .min();
            let Some((_, _, p)) = pick else {
                continue;
            };
            used[p] = true;
            pivot_of[col] = p;
            rank += 1;
            let inv = rows[p][&col].try_inv().expect("pivot is nonzero");
            scale_row(&mut rows[p], &inv);
            scale_row(&mut aug[p], &inv);
            let prow = rows[p].clone();
            let paug = aug[p].clone();
            for r in 0..size {
                if r == p {
                    continue;
                }
                let Some(factor) = rows[r].get(&col).cloned() else {
                    continue;
                };
                axpy(&mut rows[r], &factor, &prow);
                axpy(&mut aug[r], &factor, &paug);
            }
        }
        if rank < size {
            return Err(TensorError::Singular { rank, size });
        }
        let mut out = Self::zero(self.dim, self.legs);
        for (col, &p) in pivot_of.iter().enumerate() {
            for (&c, v) in &aug[p] {
                out.entries.insert((col, c), v.clone());
            }
        }
        Ok(out)
    }

    /// Swaps the two tensor factors: `(F21)_{ij}^{st} = F_{ji}^{ts}`.
    pub fn transpose21(&self) -> Result<Self, TensorError> {
        if self.legs != 2 {
            return Err(TensorError::ShapeMismatch(format!(
                "transpose21 needs 2 legs, got {}",
                self.legs
            )));
        }
        let n = self.dim;
        let swap = |k: usize| (k % n) * n + k / n;
        Ok(LeggedMatrix {
            dim: n,
            legs: 2,
            entries: self
                .entries
                .iter()
                .map(|(&(r, c), v)| ((swap(r), swap(c)), v.clone()))
                .collect(),
        })
    }

    /// Places a 2-leg matrix on factors `positions` of a 3-fold tensor
    /// power, with the identity on the remaining factor. Positions are
    /// 1-based: `(1, 3)` gives `(A13)_{ijk}^{abc} = A_{ik}^{ac} delta_j^b`.
    pub fn embed(&self, positions: (usize, usize)) -> Result<Self, TensorError> {
        if self.legs != 2 {
            return Err(TensorError::ShapeMismatch(format!(
                "leg embedding needs 2 legs, got {}",
                self.legs
            )));
        }
        let other = match positions {
            (1, 2) => 3,
            (1, 3) => 2,
            (2, 3) => 1,
            p => return Err(TensorError::BadPositions(p)),
        };
        let n = self.dim;
        let mut out = Self::zero(n, 3);
        let place = |a: usize, b: usize, k: usize| {
            let mut idx = [0usize; 3];
            idx[positions.0 - 1] = a;
            idx[positions.1 - 1] = b;
            idx[other - 1] = k;
            (idx[0] * n + idx[1]) * n + idx[2]
        };
        for (&(r, c), v) in &self.entries {
            let (r1, r2, c1, c2) = (r / n, r % n, c / n, c % n);
            for k in 0..n {
                out.entries
                    .insert((place(r1, r2, k), place(c1, c2, k)), v.clone());
            }
        }
        Ok(out)
    }
}

fn scale_row<T: Field>(row: &mut BTreeMap<usize, T>, c: &T) {
    for v in row.values_mut() {
        *v = v.mul_ref(c);
    }
}

/// `row -= factor * pivot`.
fn axpy<T: Field>(row: &mut BTreeMap<usize, T>, factor: &T, pivot: &BTreeMap<usize, T>) {
    for (&c, p) in pivot {
        let t = factor.mul_ref(p);
        let v = match row.get(&c) {
            Some(a) => a.sub_ref(&t),
            None => t.neg_ref(),
        };
        if v.is_zero() {
            row.remove(&c);
        } else {
            row.insert(c, v);
        }
    }
}

/// Structural equality: same shape and identical canonical entries.
pub fn mat_eq<T: Field>(a: &LeggedMatrix<T>, b: &LeggedMatrix<T>) -> bool {
    a == b
}

/// Serialized form of a matrix; entry values use the scalar grammar.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MatrixJson {
    pub dim: usize,
    pub legs: usize,
    pub entries: Vec<EntryJson>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EntryJson {
    pub row: Vec<usize>,
    pub col: Vec<usize>,
    pub value: String,
}

impl<T: Field> LeggedMatrix<T> {
    pub fn to_json(&self) -> MatrixJson {
        MatrixJson {
            dim: self.dim,
            legs: self.legs,
            entries: self
                .iter()
                .map(|(row, col, v)| EntryJson {
                    row,
                    col,
                    value: v.to_string(),
                })
                .collect(),
        }
    }
}

impl<T> LeggedMatrix<T>
where
    T: Field + FromStr,
    T::Err: fmt::Display,
{
    /// Builds a matrix from its serialized form. Repeated positions are
    /// rejected.
    pub fn from_json(json: &MatrixJson) -> Result<Self, TensorError> {
        if json.dim == 0 || json.legs == 0 {
            return Err(TensorError::ShapeMismatch(
                "dim and legs must be positive".into(),
            ));
        }
        let mut m = Self::zero(json.dim, json.legs);
        for e in &json.entries {
            let r = m.flat(&e.row)?;
            let c = m.flat(&e.col)?;
            if m.entries.contains_key(&(r, c)) {
                return Err(TensorError::BadEntry(format!(
                    "duplicate entry at {:?} {:?}",
                    e.row, e.col
                )));
            }
            let v = e
                .value
                .parse::<T>()
                .map_err(|err| TensorError::BadEntry(format!("{:?} {:?}: {err}", e.row, e.col)))?;
            m.set_flat(r, c, v);
        }
        Ok(m)
    }
}

impl<T: Field> fmt::Debug for LeggedMatrix<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "LeggedMatrix(dim {}, legs {}) {{", self.dim, self.legs)?;
        for (row, col, v) in self.iter() {
            writeln!(f, "  {row:?} -> {col:?}: {v}")?;
        }
        write!(f, "}}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Scalar;
    use num_rational::BigRational;
    use proptest::prelude::*;

    type Q = BigRational;

    fn s(t: &str) -> Scalar {
        t.parse().unwrap()
    }

    fn q(n: i64) -> Q {
        Q::from_integer(n.into())
    }

    fn standard(n: usize) -> LeggedMatrix<Scalar> {
        let mut r = LeggedMatrix::zero(n, 2);
        for i in 1..=n {
            for j in 1..=n {
                r.set(
                    &[i, j],
                    &[i, j],
                    if i == j { s("q") } else { Scalar::one() },
                );
                if i < j {
                    r.set(&[i, j], &[j, i], s("q - q^-1"));
                }
            }
        }
        r
    }

    #[test]
    fn identity_shapes() {
        let i2 = LeggedMatrix::<Q>::identity(2, 1);
        assert_eq!(i2.nnz(), 2);
        let i3 = LeggedMatrix::<Q>::identity(2, 3);
        assert_eq!(i3.nnz(), 8);
        assert!(i3.iter().all(|(r, c, v)| r == c && *v == q(1)));
        let r = standard(3);
        let id = LeggedMatrix::identity(3, 2);
        assert_eq!(id.mul(&r).unwrap(), r);
        assert_eq!(r.mul(&id).unwrap(), r);
    }

    #[test]
    fn diagonal_products() {
        let f = LeggedMatrix::diagonal2(2, |i, j| s(&format!("f_{i}{j}")));
        let g = LeggedMatrix::diagonal2(2, |i, j| s(&format!("g_{i}{j}")));
        let fg = LeggedMatrix::diagonal2(2, |i, j| s(&format!("f_{i}{j}*g_{i}{j}")));
        assert_eq!(f.mul(&g).unwrap(), fg);
    }

    #[test]
    fn diagonal_twist_convention() {
        let f = LeggedMatrix::diagonal2(3, |i, j| s(&format!("f_{i}{j}")));
        let r = standard(3);
        let t = f
            .transpose21()
            .unwrap()
            .mul(&r)
            .unwrap()
            .mul(&f.inv().unwrap())
            .unwrap();
        for (row, col, v) in r.iter() {
            let expect = v.clone() * s(&format!("f_{}{}", row[1], row[0]))
                / s(&format!("f_{}{}", col[0], col[1]));
            assert_eq!(t.entry(&row, &col), expect);
        }
        assert_eq!(t.nnz(), r.nnz());
    }

    #[test]
    fn inverse_examples() {
        let id = LeggedMatrix::<Scalar>::identity(3, 2);
        assert_eq!(id.inv().unwrap(), id);
        let f = LeggedMatrix::diagonal2(2, |i, j| s(&format!("f_{i}{j}")));
        let fi = LeggedMatrix::diagonal2(2, |i, j| s(&format!("f_{i}{j}^-1")));
        assert_eq!(f.inv().unwrap(), fi);
        let r = standard(3);
        let ri = r.inv().unwrap();
        assert_eq!(r.mul(&ri).unwrap(), LeggedMatrix::identity(3, 2));
        assert_eq!(ri.mul(&r).unwrap(), LeggedMatrix::identity(3, 2));
    }

    #[test]
    fn singular_reports_rank() {
        let mut m = LeggedMatrix::<Q>::identity(2, 2);
        m.set(&[2, 2], &[2, 2], q(0));
        assert_eq!(m.inv(), Err(TensorError::Singular { rank: 3, size: 4 }));
    }

    #[test]
    fn transpose21_examples() {
        let id = LeggedMatrix::<Q>::identity(3, 2);
        assert_eq!(id.transpose21().unwrap(), id);
        let f = LeggedMatrix::diagonal2(3, |i, j| s(&format!("f_{i}{j}")));
        let ft = LeggedMatrix::diagonal2(3, |i, j| s(&format!("f_{j}{i}")));
        assert_eq!(f.transpose21().unwrap(), ft);
        let r = standard(2);
        assert_eq!(
            r.transpose21().unwrap().entry(&[2, 1], &[1, 2]),
            s("q - q^-1")
        );
        assert!(LeggedMatrix::<Q>::identity(2, 3).transpose21().is_err());
    }

    #[test]
    fn embedding_examples() {
        let id = LeggedMatrix::<Q>::identity(3, 2);
        assert_eq!(id.embed((1, 2)).unwrap(), LeggedMatrix::identity(3, 3));
        let f = LeggedMatrix::diagonal2(2, |i, j| s(&format!("f_{i}{j}")));
        let f13 = f.embed((1, 3)).unwrap();
        for i in 1..=2 {
            for j in 1..=2 {
                for k in 1..=2 {
                    assert_eq!(f13.entry(&[i, j, k], &[i, j, k]), s(&format!("f_{i}{k}")));
                }
            }
        }
        let r12 = standard(2).embed((1, 2)).unwrap();
        for k in 1..=2 {
            assert_eq!(r12.entry(&[1, 2, k], &[2, 1, k]), s("q - q^-1"));
        }
        assert_eq!(
            standard(2).embed((2, 1)),
            Err(TensorError::BadPositions((2, 1)))
        );
        assert!(LeggedMatrix::<Q>::identity(2, 3).embed((1, 2)).is_err());
    }

    #[test]
    fn shape_mismatch() {
        let a = LeggedMatrix::<Q>::identity(2, 2);
        let b = LeggedMatrix::<Q>::identity(3, 2);
        assert!(matches!(a.mul(&b), Err(TensorError::ShapeMismatch(_))));
    }

    #[test]
    fn equality_is_entrywise() {
        let a = LeggedMatrix::diagonal2(2, |_, _| s("q"));
        let b = LeggedMatrix::diagonal2(2, |_, _| s("q^-1"));
        assert!(mat_eq(&a, &a));
        assert!(!mat_eq(&a, &b));
    }

    #[test]
    fn json_round_trip() {
        let r = standard(3);
        let j = r.to_json();
        let text = serde_json::to_string(&j).unwrap();
        let back: MatrixJson = serde_json::from_str(&text).unwrap();
        assert_eq!(LeggedMatrix::<Scalar>::from_json(&back).unwrap(), r);
        let mut bad = j.clone();
        bad.entries[0].value = "q +".into();
        assert!(LeggedMatrix::<Scalar>::from_json(&bad).is_err());
        let mut dup = j;
        let first = dup.entries[0].clone();
        dup.entries.push(first);
        assert!(LeggedMatrix::<Scalar>::from_json(&dup).is_err());
    }

    fn rational() -> impl Strategy<Value = Q> {
        (-4i64..=4, 1i64..=3).prop_map(|(a, b)| Q::new(a.into(), b.into()))
    }

    fn sparse(legs: usize) -> impl Strategy<Value = LeggedMatrix<Q>> {
        let size = 2usize.pow(legs as u32);
        prop::collection::vec((0..size, 0..size, rational()), 0..(2 * size)).prop_map(move |es| {
            let mut m = LeggedMatrix::zero(2, legs);
            for (r, c, v) in es {
                m.set_flat(r, c, v);
            }
            m
        })
    }

    /// Dense brute-force product over multi-indices.
    fn brute_mul(a: &LeggedMatrix<Q>, b: &LeggedMatrix<Q>) -> LeggedMatrix<Q> {
        let size = a.size();
        let mut out = LeggedMatrix::zero(a.dim, a.legs);
        for r in 0..size {
            for c in 0..size {
                let mut acc = q(0);
                for m in 0..size {
                    let x = a.entries.get(&(r, m)).cloned().unwrap_or_else(|| q(0));
                    let y = b.entries.get(&(m, c)).cloned().unwrap_or_else(|| q(0));
                    acc += x * y;
                }
                out.set_flat(r, c, acc);
            }
        }
        out
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(48))]

        #[test]
        fn product_is_associative(a in sparse(2), b in sparse(2), c in sparse(2)) {
            let l = a.mul(&b).unwrap().mul(&c).unwrap();
            let r = a.mul(&b.mul(&c).unwrap()).unwrap();
            prop_assert_eq!(l, r);
        }

        #[test]
        fn product_matches_brute_force(a in sparse(2), b in sparse(2)) {
            prop_assert_eq!(a.mul(&b).unwrap(), brute_mul(&a, &b));
        }

        #[test]
        fn embedded_product_matches_contraction(a in sparse(2), b in sparse(2)) {
            let lhs = a.embed((1, 2)).unwrap().mul(&b.embed((2, 3)).unwrap()).unwrap();
            for i in 1..=2 { for j in 1..=2 { for k in 1..=2 {
                for x in 1..=2 { for y in 1..=2 { for z in 1..=2 {
                    let mut acc = q(0);
                    for m in 1..=2 {
                        acc += a.entry(&[i, j], &[x, m]) * b.entry(&[m, k], &[y, z]);
                    }
                    prop_assert_eq!(lhs.entry(&[i, j, k], &[x, y, z]), acc);
                }}}
            }}}
        }

        #[test]
        fn transpose21_is_an_involution(a in sparse(2)) {
            prop_assert_eq!(a.transpose21().unwrap().transpose21().unwrap(), a);
        }

        #[test]
        fn transpose21_is_multiplicative(a in sparse(2), b in sparse(2)) {
            let lhs = a.transpose21().unwrap().mul(&b.transpose21().unwrap()).unwrap();
            prop_assert_eq!(lhs, a.mul(&b).unwrap().transpose21().unwrap());
        }

        #[test]
        fn inverse_is_two_sided(a in sparse(2)) {
            if let Ok(ai) = a.inv() {
                let id = LeggedMatrix::identity(2, 2);
                prop_assert_eq!(ai.mul(&a).unwrap(), id.clone());
                prop_assert_eq!(a.mul(&ai).unwrap(), id);
            }
        }
    }
}
