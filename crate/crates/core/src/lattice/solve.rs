//! Solving monomial systems.
//!
//! Unknowns are first eliminated one at a time through relations in which
//! they occur with exponent ±1, in preference order; the free generators
//! are then the surviving unknowns under their own names. Whatever is left
//! is handled by integer echelon forms: row reduction exposes
//! inconsistencies, and a column reduction of the remaining full-rank block
//! yields a unimodular change of variables onto fresh generators.

use std::collections::{BTreeMap, BTreeSet};

use super::integer::{echelon, identity};
use super::{Certificate, LatticeError, MonomialConstraintSystem, SolutionLattice};
use crate::scalar::{Monomial, Variable};

struct Row {
    exps: Vec<i64>,
    rhs: Monomial,
    combo: Vec<i64>,
}

impl Row {
    /// `self -= k * other`.
    fn sub_multiple(&mut self, k: i64, other: &Row) {
        for (a, b) in self.exps.iter_mut().zip(&other.exps) {
            *a -= k * b;
        }
        for (a, b) in self.combo.iter_mut().zip(&other.combo) {
            *a -= k * b;
        }
        self.rhs = self.rhs.div(&other.rhs.pow(k));
    }

    fn certificate(&self) -> Certificate {
        Certificate {
            combination: self
                .combo
                .iter()
                .enumerate()
                .filter(|(_, c)| **c != 0)
                .map(|(k, c)| (k, *c))
                .collect(),
            residual: self.rhs.clone(),
        }
    }
}

pub(super) fn solve(sys: &MonomialConstraintSystem) -> Result<SolutionLattice, LatticeError> {
    let unknowns = sys.unknowns();
    let k = unknowns.len();
    let m = sys.relations().len();
    let mut rows: Vec<Row> = sys
        .relation_matrix()
        .into_iter()
        .enumerate()
        .map(|(i, exps)| Row {
            exps,
            rhs: sys.known_rhs(i),
            combo: (0..m).map(|j| i64::from(i == j)).collect(),
        })
        .collect();

    // Unit-pivot elimination. Each pivot reads u^c * prod v^e = rhs with c = ±1.
    let mut pivots: Vec<(usize, Vec<i64>, Monomial)> = Vec::new();
    for u in 0..k {
        let Some(p) = rows.iter().position(|r| r.exps[u].abs() == 1) else {
            continue;
        };
        let row = rows.remove(p);
        let c = row.exps[u];
        for r in rows.iter_mut() {
            let a = r.exps[u];
            if a != 0 {
                r.sub_multiple(a * c, &row);
            }
        }
        // u = rhs^c * prod v^{-c e_v}
        let expr: Vec<i64> = row
            .exps
            .iter()
            .enumerate()
            .map(|(v, &e)| if v == u { 0 } else { -c * e })
            .collect();
        pivots.push((u, expr, row.rhs.pow(c)));
    }

    for r in &rows {
        if r.exps.iter().all(|&e| e == 0) && !r.rhs.is_one() {
            return Err(LatticeError::Inconsistent(r.certificate()));
        }
    }
    rows.retain(|r| r.exps.iter().any(|&e| e != 0));

    let pivoted: BTreeSet<usize> = pivots.iter().map(|(u, _, _)| *u).collect();
    let mut value: BTreeMap<usize, Monomial> = BTreeMap::new();
    let mut free: Vec<Variable> = Vec::new();
    let mut relation_rank = pivots.len();

    // Unknowns still tied by non-unit relations.
    let tied: Vec<usize> = (0..k)
        .filter(|u| !pivoted.contains(u) && rows.iter().any(|r| r.exps[*u] != 0))
        .collect();
    for (u, name) in unknowns.iter().enumerate().take(k) {
        if !pivoted.contains(&u) && !tied.contains(&u) {
            free.push(name.clone());
            value.insert(u, Monomial::var(name.clone()));
        }
    }
    if !tied.is_empty() {
        let (vals, gens, rank) = solve_tied(sys, &rows, &tied)?;
        relation_rank += rank;
        free.extend(gens);
        value.extend(vals);
    }

    // Back-substitution in reverse pivot order: each pivot only involves
    // unknowns that were still live when it was chosen.
    for (u, expr, rhs) in pivots.iter().rev() {
        let mut mono = rhs.clone();
        for (v, &e) in expr.iter().enumerate() {
            if e != 0 {
                mono = mono.mul(&value[&v].pow(e));
            }
        }
        value.insert(*u, mono);
    }

    let assignment = value
        .into_iter()
        .map(|(u, mono)| (unknowns[u].clone(), mono))
        .collect();
    Ok(SolutionLattice {
        rank: k - relation_rank,
        free,
        assignment,
        relation_rank,
    })
}

type Tied = (BTreeMap<usize, Monomial>, Vec<Variable>, usize);

fn solve_tied(
    sys: &MonomialConstraintSystem,
    rows: &[Row],
    tied: &[usize],
) -> Result<Tied, LatticeError> {
    let mut mat: Vec<Vec<i64>> = rows
        .iter()
        .map(|r| tied.iter().map(|&u| r.exps[u]).collect())
        .collect();
    let mut combos: Vec<Vec<i64>> = rows.iter().map(|r| r.combo.clone()).collect();
    let rhs_of = |combo: &[i64]| -> Monomial {
        combo
            .iter()
            .enumerate()
            .filter(|(_, c)| **c != 0)
            .fold(Monomial::one(), |acc, (j, &c)| {
                acc.mul(&sys.known_rhs(j).pow(c))
            })
    };
    let piv = echelon(&mut mat, &mut combos);
    let rank = piv.len();
    for combo in &combos[rank..] {
        let residual = rhs_of(combo);
        if !residual.is_one() {
            let row = Row {
                exps: Vec::new(),
                rhs: residual,
                combo: combo.clone(),
            };
            return Err(LatticeError::Inconsistent(row.certificate()));
        }
    }
    let e: Vec<Vec<i64>> = mat[..rank].to_vec();
    let b: Vec<Monomial> = combos[..rank].iter().map(|c| rhs_of(c)).collect();

    // Column reduction: V * E^T = H^T with V unimodular, so E * V^T = H,
    // lower triangular in its first `rank` columns.
    let w = tied.len();
    let mut et: Vec<Vec<i64>> = (0..w).map(|j| e.iter().map(|r| r[j]).collect()).collect();
    let mut v = identity(w);
    echelon(&mut et, &mut v);
    // x = V^T y; H y = b fixes y_0..y_{rank-1}, the rest are free.
    let mut y: Vec<Monomial> = Vec::with_capacity(rank);
    for i in 0..rank {
        let mut acc = b[i].clone();
        for (j, yj) in y.iter().enumerate() {
            acc = acc.div(&yj.pow(et[j][i]));
        }
        let d = et[i][i];
        let root = exact_root(&acc, d).ok_or_else(|| LatticeError::Torsion {
            unknown: format!("y{i}"),
            degree: d,
            value: acc.clone(),
        })?;
        y.push(root);
    }
    let names = fresh_names(sys, w - rank);
    for t in &names {
        y.push(Monomial::var(t.clone()));
    }
    let mut vals = BTreeMap::new();
    for (col, &u) in tied.iter().enumerate() {
        let mut mono = Monomial::one();
        for (j, yj) in y.iter().enumerate() {
            let c = v[j][col];
            if c != 0 {
                mono = mono.mul(&yj.pow(c));
            }
        }
        vals.insert(u, mono);
    }
    Ok((vals, names, rank))
}

fn exact_root(m: &Monomial, d: i64) -> Option<Monomial> {
    let mut pairs = Vec::new();
    for (v, e) in m.iter() {
        if e % d != 0 {
            return None;
        }
        pairs.push((v.clone(), e / d));
    }
    Some(Monomial::from_pairs(pairs))
}

/// Generator names `t_1, t_2, ...` avoiding every variable of the system.
fn fresh_names(sys: &MonomialConstraintSystem, count: usize) -> Vec<Variable> {
    let mut taken: BTreeSet<String> = sys
        .unknowns()
        .iter()
        .map(|v| v.name().to_string())
        .collect();
    for r in sys.relations() {
        for v in r.lhs.variables().chain(r.rhs.variables()) {
            taken.insert(v.name().to_string());
        }
    }
    let mut out = Vec::new();
    let mut k = 1;
    while out.len() < count {
        let name = format!("t_{k}");
        if !taken.contains(&name) {
            out.push(Variable::named(&name));
        }
        k += 1;
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Scalar;
    use proptest::prelude::*;

    fn v(name: &str) -> Variable {
        Variable::named(name)
    }

    fn mono(pairs: &[(&str, i64)]) -> Monomial {
        Monomial::from_pairs(pairs.iter().map(|(n, e)| (v(n), *e)))
    }

    fn check(sys: &MonomialConstraintSystem, sol: &SolutionLattice) {
        let map = sol.substitution();
        for r in sys.relations() {
            let l = Scalar::monomial(r.lhs.clone()).subs_monomial(&map);
            let h = Scalar::monomial(r.rhs.clone()).subs_monomial(&map);
            assert_eq!(l, h, "relation {r} fails under {map:?}");
        }
        assert_eq!(sol.rank + sol.relation_rank, sys.unknowns().len());
        assert_eq!(sol.free.len(), sol.rank);
    }

    #[test]
    fn empty_system_is_identity() {
        let sys = MonomialConstraintSystem::new(vec![v("a"), v("b"), v("c")]);
        let sol = sys.solve().unwrap();
        assert_eq!(sol, SolutionLattice::identity(&[v("a"), v("b"), v("c")]));
        assert_eq!(sol.rank, 3);
    }

    #[test]
    fn preference_order_decides_the_pivot() {
        let mut sys = MonomialConstraintSystem::new(vec![v("p_13"), v("p_12"), v("p_23")]);
        sys.add(
            mono(&[("p_13", 1)]),
            mono(&[("q", 1), ("p_12", 1), ("p_23", 1)]),
        );
        let sol = sys.solve().unwrap();
        assert_eq!(
            sol.get(&v("p_13")),
            Some(&mono(&[("q", 1), ("p_12", 1), ("p_23", 1)]))
        );
        assert_eq!(sol.free, vec![v("p_12"), v("p_23")]);
        check(&sys, &sol);
    }

    #[test]
    fn non_unit_relations_use_fresh_generators() {
        let mut sys = MonomialConstraintSystem::new(vec![v("a"), v("b")]);
        sys.add(mono(&[("a", 2), ("b", 3)]), Monomial::one());
        let sol = sys.solve().unwrap();
        assert_eq!(sol.rank, 1);
        assert_eq!(sol.free.len(), 1);
        assert!(sol.free[0].name().starts_with("t_"));
        check(&sys, &sol);
    }

    #[test]
    fn torsion_is_reported() {
        let mut sys = MonomialConstraintSystem::new(vec![v("a")]);
        sys.add(mono(&[("a", 2)]), mono(&[("q", 1)]));
        assert!(matches!(
            sys.solve(),
            Err(LatticeError::Torsion { degree: 2, .. })
        ));
    }

    #[test]
    fn inconsistency_has_a_certificate() {
        let mut sys = MonomialConstraintSystem::new(vec![v("a"), v("b")]);
        sys.add(mono(&[("a", 1)]), mono(&[("b", 1)]));
        sys.add(mono(&[("a", 1)]), mono(&[("b", 1), ("q", 1)]));
        match sys.solve() {
            Err(LatticeError::Inconsistent(c)) => {
                let mut total = Monomial::one();
                for (k, e) in &c.combination {
                    total = total.mul(&sys.relations()[*k].quotient().pow(*e));
                }
                assert_eq!(total.inv(), c.residual);
                assert!(!c.residual.is_one());
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn inconsistency_after_lattice_reduction() {
        let mut sys = MonomialConstraintSystem::new(vec![v("a"), v("b")]);
        sys.add(mono(&[("a", 2), ("b", 2)]), Monomial::one());
        sys.add(mono(&[("a", 4), ("b", 4)]), mono(&[("q", 1)]));
        assert!(matches!(sys.solve(), Err(LatticeError::Inconsistent(_))));
    }

    proptest! {
        #[test]
        fn random_homogeneous_systems_solve(
            rels in prop::collection::vec(prop::collection::vec(-3i64..=3, 4), 0..4),
            qexp in prop::collection::vec(-2i64..=2, 4),
        ) {
            let names = ["a", "b", "c", "d"];
            let mut sys = MonomialConstraintSystem::new(names.iter().map(|n| v(n)).collect());
            for (r, qe) in rels.iter().zip(&qexp) {
                let lhs = Monomial::from_pairs(names.iter().zip(r).map(|(n, e)| (v(n), *e)));
                sys.add(lhs, mono(&[("q", *qe)]));
            }
            match sys.solve() {
                Ok(sol) => {
                    check(&sys, &sol);
                    prop_assert_eq!(sol.relation_rank, sys.relation_rank());
                }
                Err(LatticeError::Inconsistent(_)) | Err(LatticeError::Torsion { .. }) => {}
                Err(e) => prop_assert!(false, "unexpected {e}"),
            }
        }
    }
}
