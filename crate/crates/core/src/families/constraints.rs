//! The multiplicative constraints of each family.
//!
//! The order of unknowns in each system is the elimination preference:
//! dependent parameters come first, so that the survivors are the ones the
//! displays are written in.

use super::{pm, q_mono, reflect, FFamily, Family, FamilyError, FamilySpec, RFamily};
use crate::lattice::MonomialConstraintSystem;
use crate::scalar::{Monomial, Variable};

pub fn family_constraints(spec: &FamilySpec) -> Result<MonomialConstraintSystem, FamilyError> {
    spec.validate()?;
    let n = spec.size;
    Ok(match spec.family {
        Family::R(RFamily::StandardMulti) => MonomialConstraintSystem::new(p_by_span("p", n)),
        Family::R(RFamily::Ek { .. }) => MonomialConstraintSystem::new(p_by_span("pt", n)),
        Family::R(RFamily::FgGeneralized) => fg_parameter_system(n),
        Family::R(RFamily::NsGl4) => ns_gamma(),
        Family::R(_) => MonomialConstraintSystem::new(Vec::new()),
        Family::F(FFamily::Diagonal) => MonomialConstraintSystem::new(all_f("f", n)),
        Family::F(FFamily::AppendixA) => {
            MonomialConstraintSystem::new(["x", "y", "z", "w"].map(Variable::named).to_vec())
        }
        Family::F(FFamily::SimpleRoot { k, l }) => simple_root(n, k, &[l]),
        Family::F(FFamily::CompositeSimpleRoot { k }) => {
            let ls: Vec<usize> = (k + 1..n).collect();
            simple_root(n, k, &ls)
        }
        Family::F(FFamily::FgCocycle) => fg_cocycle(n),
        Family::F(FFamily::EkCocycle { eta }) => ek_cocycle(n, eta),
        Family::F(FFamily::Gl4Second) => gl4_second(),
    })
}

fn ix(prefix: &str, i: usize, j: usize) -> Variable {
    Variable::indexed(prefix, &[i, j])
}

fn m(prefix: &str, i: usize, j: usize) -> Monomial {
    Monomial::var(ix(prefix, i, j))
}

/// `prefix_ij` for `i < j`, widest spans first.
fn p_by_span(prefix: &str, n: usize) -> Vec<Variable> {
    let mut out = Vec::new();
    for span in (1..n).rev() {
        for i in 1..=n - span {
            out.push(ix(prefix, i, i + span));
        }
    }
    out
}

fn all_f(prefix: &str, n: usize) -> Vec<Variable> {
    let mut out = Vec::new();
    for i in 1..=n {
        for j in 1..=n {
            out.push(ix(prefix, i, j));
        }
    }
    out
}

/// Moves `last` to the end of `vars`.
fn with_last(mut vars: Vec<Variable>, last: &Variable) -> Vec<Variable> {
    vars.retain(|v| v != last);
    vars.push(last.clone());
    vars
}

/// `p_{ji'} = q p_{jN} p_{Ni'}` and
/// `p_ij / (p_iN p_Nj) = p_{i'j'} / (p_{i'N} p_{Nj'})` for `0 < i, j < N`,
/// on the `p_ij`, `i < j`, of dimension `2N - 1`.
pub fn fg_parameter_system(big_n: usize) -> MonomialConstraintSystem {
    let q = q_mono();
    let dim = 2 * big_n - 1;
    let pr = |i| reflect(big_n, i);
    let p = |i, j| pm("p", i, j, &q);
    let mut unknowns = Vec::new();
    for j in 1..big_n {
        for i in (1..big_n).rev() {
            unknowns.push(ix("p", j, pr(i)));
        }
    }
    for a in big_n + 1..=dim {
        for b in a + 1..=dim {
            unknowns.push(ix("p", a, b));
        }
    }
    for v in p_by_span("p", dim) {
        if !unknowns.contains(&v) {
            unknowns.push(v);
        }
    }
    let mut sys = MonomialConstraintSystem::new(unknowns);
    for j in 1..big_n {
        for i in 1..big_n {
            sys.add(p(j, pr(i)), q.mul(&p(j, big_n)).mul(&p(big_n, pr(i))));
        }
    }
    for i in 1..big_n {
        for j in 1..big_n {
            if i != j {
                sys.add(
                    p(i, j).mul(&p(pr(i), big_n)).mul(&p(big_n, pr(j))),
                    p(pr(i), pr(j)).mul(&p(i, big_n)).mul(&p(big_n, j)),
                );
            }
        }
    }
    sys
}

/// `g_12 g_23 = q g_24`, `g_24 g_34 = q g_14`, `g_23 g_34 = q g_13`.
fn ns_gamma() -> MonomialConstraintSystem {
    let q = q_mono();
    let g = |i, j| m("g", i, j);
    let mut unknowns = vec![ix("g", 2, 4), ix("g", 1, 4), ix("g", 1, 3)];
    unknowns.extend([
        ix("g", 1, 2),
        ix("g", 2, 3),
        ix("g", 3, 4),
        Variable::named("rho"),
    ]);
    let mut sys = MonomialConstraintSystem::new(unknowns);
    sys.add(g(1, 2).mul(&g(2, 3)), q.mul(&g(2, 4)));
    sys.add(g(2, 4).mul(&g(3, 4)), q.mul(&g(1, 4)));
    sys.add(g(2, 3).mul(&g(3, 4)), q.mul(&g(1, 3)));
    sys
}

/// `f_{i,k} = f_{i,k+1}`, `f_{l,i} = f_{l+1,i}`,
/// `p_{i,k} f_{i,l} = p_{i,k+1} f_{i,l+1}` and
/// `p_{l,i} f_{k,i} = p_{l+1,i} f_{k+1,i}` for every `l` in `ls`.
fn simple_root(n: usize, k: usize, ls: &[usize]) -> MonomialConstraintSystem {
    let q = q_mono();
    let f = |i, j| m("f", i, j);
    let p = |i, j| pm("p", i, j, &q);
    let last = ix("f", k + 1, ls.iter().copied().max().unwrap_or(k));
    let mut unknowns = with_last(all_f("f", n), &last);
    unknowns.extend(p_by_span("p", n));
    let mut sys = MonomialConstraintSystem::new(unknowns);
    for &l in ls {
        for i in 1..=n {
            sys.add(f(i, k), f(i, k + 1));
            sys.add(f(l, i), f(l + 1, i));
            sys.add(p(i, k).mul(&f(i, l)), p(i, k + 1).mul(&f(i, l + 1)));
            sys.add(p(l, i).mul(&f(k, i)), p(l + 1, i).mul(&f(k + 1, i)));
        }
    }
    sys
}

/// The four-case formula for `f_ij` in terms of `f_NN`, together with
/// the FG parameter relations on the `p_ij`.
fn fg_cocycle(big_n: usize) -> MonomialConstraintSystem {
    let q = q_mono();
    let dim = 2 * big_n - 1;
    let pr = |i| reflect(big_n, i);
    let p = |i, j| pm("p", i, j, &q);
    let f_nn = m("f", big_n, big_n);
    let p_sys = fg_parameter_system(big_n);
    let mut unknowns = with_last(all_f("f", dim), &ix("f", big_n, big_n));
    unknowns.extend(p_sys.unknowns().iter().cloned());
    let mut sys = MonomialConstraintSystem::new(unknowns);
    for i in 1..=dim {
        for j in 1..=dim {
            let value = if i <= big_n && j <= big_n {
                q.inv().mul(&p(pr(i), big_n))
            } else if i <= big_n {
                p(pr(i), j).mul(&p(j, pr(j)))
            } else if j <= big_n {
                Monomial::one()
            } else {
                q.inv().mul(&p(big_n, pr(j)))
            };
            sys.add(m("f", i, j), value.mul(&f_nn));
        }
    }
    sys.extend(&p_sys);
    sys
}

/// `f_ηη = f_{η+1,η+1}`, `f_{η,η+1} = q^{-1} p_{η,η+1} f_ηη`,
/// `f_{η+1,η} = q^{-1} p_{η+1,η} f_ηη`, and for `i ≠ η, η+1`
/// `f_{i,η+1} = p_{i,η+1} p_{η,i} f_{iη}`, `f_{η+1,i} = p_{η+1,i} p_{i,η} f_{ηi}`.
fn ek_cocycle(n: usize, eta: usize) -> MonomialConstraintSystem {
    let q = q_mono();
    let (e, e1) = (eta, eta + 1);
    let f = |i, j| m("f", i, j);
    let p = |i, j| pm("p", i, j, &q);
    let others: Vec<usize> = (1..=n).filter(|&i| i != e && i != e1).collect();
    let mut unknowns = vec![ix("f", e1, e1), ix("f", e, e1), ix("f", e1, e)];
    for &i in &others {
        unknowns.push(ix("f", i, e1));
        unknowns.push(ix("f", e1, i));
    }
    for v in all_f("f", n) {
        if !unknowns.contains(&v) {
            unknowns.push(v);
        }
    }
    unknowns.extend(p_by_span("p", n));
    let mut sys = MonomialConstraintSystem::new(unknowns);
    sys.add(f(e1, e1), f(e, e));
    sys.add(f(e, e1), q.inv().mul(&p(e, e1)).mul(&f(e, e)));
    sys.add(f(e1, e), q.inv().mul(&p(e1, e)).mul(&f(e, e)));
    for &i in &others {
        sys.add(f(i, e1), p(i, e1).mul(&p(e, i)).mul(&f(i, e)));
        sys.add(f(e1, i), p(e1, i).mul(&p(i, e)).mul(&f(e, i)));
    }
    sys
}

/// `h_i1 = h_i3`, `h_2i = h_4i`, `pt_i1 h_i2 = pt_i3 h_i4`,
/// `pt_4i h_3i = pt_2i h_1i`.
fn gl4_second() -> MonomialConstraintSystem {
    let q = q_mono();
    let h = |i, j| m("h", i, j);
    let p = |i, j| pm("pt", i, j, &q);
    let mut unknowns = all_f("h", 4);
    unknowns.extend(p_by_span("pt", 4));
    let mut sys = MonomialConstraintSystem::new(unknowns);
    for i in 1..=4 {
        sys.add(h(i, 1), h(i, 3));
        sys.add(h(2, i), h(4, i));
        sys.add(p(i, 1).mul(&h(i, 2)), p(i, 3).mul(&h(i, 4)));
        sys.add(p(4, i).mul(&h(3, i)), p(2, i).mul(&h(1, i)));
    }
    sys
}
