use super::*;
use crate::families::{build_f, build_r, build_r_constrained, FFamily, FamilySpec, RFamily};
use crate::lattice::reduce_by_constraints;
use crate::scalar::{Scalar, Variable};
use crate::Matrix;

fn s(text: &str) -> Scalar {
    text.parse().unwrap()
}

fn r(fam: RFamily, n: usize) -> Matrix {
    build_r(&FamilySpec::r(fam, n).unwrap()).unwrap()
}

fn f(fam: FFamily, n: usize) -> Matrix {
    build_f(&FamilySpec::f(fam, n).unwrap()).unwrap()
}

/// STANDARD_MULTI(n) reduced by the constraints of the F family.
fn reduced_multi(fam: FFamily, n: usize) -> Matrix {
    let lat = FamilySpec::f(fam, n).unwrap().lattice().unwrap();
    reduce_by_constraints(&r(RFamily::StandardMulti, n), &lat).unwrap()
}

#[test]
fn qybe_small_cases() {
    assert!(check_qybe(&Matrix::identity(3, 2)).unwrap().passed);
    assert!(check_qybe(&r(RFamily::Standard, 2)).unwrap().passed);
    assert!(check_qybe(&r(RFamily::Cg, 3)).unwrap().passed);
}

#[test]
fn qybe_detects_a_broken_entry() {
    let mut m = r(RFamily::Standard, 2);
    m.set(&[1, 2], &[2, 1], s("q"));
    let rep = check_qybe(&m).unwrap();
    assert!(!rep.passed);
    assert_eq!(rep.count("R12R13R23=R23R13R12"), rep.violations.len());
    assert!(rep
        .violations
        .iter()
        .all(|v| v.row.len() == 3 && v.residual != "0"));
}

#[test]
fn shape_errors() {
    let three = Matrix::identity(2, 3);
    assert!(matches!(
        check_qybe(&three),
        Err(TensorError::ShapeMismatch(_))
    ));
    let a = Matrix::identity(2, 2);
    let b = Matrix::identity(3, 2);
    assert!(check_system(ConditionSystem::NewCocycle, &a, &b).is_err());
    assert!(matches!(
        twist(&a, &Matrix::zero(2, 2)),
        Err(TensorError::Singular { .. })
    ));
}

#[test]
fn reshetikhin_diagonal_on_standard() {
    let rep = check_system(
        ConditionSystem::Reshetikhin,
        &r(RFamily::Standard, 3),
        &f(FFamily::Diagonal, 3),
    )
    .unwrap();
    assert!(rep.passed, "{rep}");
}

#[test]
fn simple_root_needs_its_constraints() {
    let fam = FFamily::SimpleRoot { k: 1, l: 2 };
    let fm = f(fam, 3);
    let generic = check_system(
        ConditionSystem::NewCocycle,
        &r(RFamily::StandardMulti, 3),
        &fm,
    )
    .unwrap();
    assert!(!generic.passed);
    let rep = check_system(ConditionSystem::NewCocycle, &reduced_multi(fam, 3), &fm).unwrap();
    assert!(rep.passed, "{rep}");
}

#[test]
fn fg_cocycle_on_reduced_multi() {
    let fam = FFamily::FgCocycle;
    let lat = FamilySpec::f(fam, 2).unwrap().lattice().unwrap();
    let rm = reduce_by_constraints(&r(RFamily::StandardMulti, 3), &lat).unwrap();
    let rep = check_system(ConditionSystem::NewCocycle, &rm, &f(fam, 2)).unwrap();
    assert!(rep.passed, "{rep}");
}

#[test]
fn diagonal_twist_of_standard() {
    let n = 3;
    let twisted = twist(&r(RFamily::Standard, n), &f(FFamily::Diagonal, n)).unwrap();
    let mut spec = FamilySpec::r(RFamily::StandardMulti, n).unwrap();
    for i in 1..=n {
        for j in i + 1..=n {
            spec = spec
                .bind(&format!("p_{i}{j}"), s(&format!("f_{j}{i}/f_{i}{j}")))
                .unwrap();
        }
    }
    assert_eq!(twisted, build_r(&spec).unwrap());
}

#[test]
fn simple_root_twist_matches_display() {
    let fam = FFamily::SimpleRoot { k: 1, l: 2 };
    let twisted = twist(&reduced_multi(fam, 3), &f(fam, 3)).unwrap();
    assert_eq!(twisted, crate::suite::simple_root_display());
    assert!(check_qybe(&twisted).unwrap().passed);

    let spec = FamilySpec::f(fam, 3)
        .unwrap()
        .bind("f_22", s("-p_12*p_23/lam"))
        .unwrap()
        .bind("mu", s("q^-1*(q - q^-1)"))
        .unwrap();
    let fb = build_f(&spec).unwrap();
    let cg = FamilySpec::r(RFamily::CgGeneralized, 3)
        .unwrap()
        .bind("p", s("p_12*p_23"))
        .unwrap();
    let cg = build_r(&cg).unwrap();
    assert_eq!(twist(&reduced_multi(fam, 3), &fb).unwrap(), cg);
    assert_eq!(untwist(&cg, &fb).unwrap(), reduced_multi(fam, 3));
}

#[test]
fn untwist_round_trips() {
    let rm = r(RFamily::Standard, 2);
    let fm = f(FFamily::Diagonal, 2);
    assert_eq!(untwist(&twist(&rm, &fm).unwrap(), &fm).unwrap(), rm);
    assert_eq!(twist(&untwist(&rm, &fm).unwrap(), &fm).unwrap(), rm);
    let id = Matrix::identity(2, 2);
    assert_eq!(twist(&rm, &id).unwrap(), rm);
    assert_eq!(untwist(&rm, &id).unwrap(), rm);
}

#[test]
fn diagonal_twists_compose() {
    let rm = r(RFamily::Cg, 3);
    let diag =
        |prefix: &str| Matrix::diagonal2(3, |i, j| Scalar::var(Variable::indexed(prefix, &[i, j])));
    let (a, b) = (diag("a"), diag("b"));
    let ab = a.mul(&b).unwrap();
    let lhs = twist(&twist(&rm, &a).unwrap(), &b).unwrap();
    assert_eq!(lhs, twist(&rm, &ab).unwrap());
    for i in 1..=3 {
        assert_eq!(lhs.entry(&[i, i], &[i, i]), rm.entry(&[i, i], &[i, i]));
    }
}

#[test]
fn ek_first_stage_matches_display() {
    let (first, pt) = ek_first_stage().unwrap();
    let ek = r(RFamily::Ek { eta: 2 }, 4);
    assert_eq!(ek.try_map(|x| x.subs(&pt)).unwrap(), first);
    assert!(check_qybe(&ek).unwrap().passed);
}

#[test]
fn double_twist_is_the_ns_display() {
    let m = double_twist_gl4().unwrap();
    let ns = build_r_constrained(&FamilySpec::r(RFamily::NsGl4, 4).unwrap()).unwrap();
    assert_eq!(m, ns);
    assert_eq!(m.entry(&[1, 4], &[3, 2]), s("g_12*g_23*g_34*q^-2*rho"));
    assert_eq!(m.entry(&[4, 1], &[2, 3]), s("-g_23*rho"));
}

#[test]
fn second_cocycle_needs_the_first_twist() {
    let gl4 = FamilySpec::f(FFamily::Gl4Second, 4).unwrap();
    let lat = gl4.lattice().unwrap();
    let fm = build_f(&gl4).unwrap();
    let ek = reduce_by_constraints(&r(RFamily::Ek { eta: 2 }, 4), &lat).unwrap();
    assert!(
        check_system(ConditionSystem::NewCocycle, &ek, &fm)
            .unwrap()
            .passed
    );
    let renamed: std::collections::BTreeMap<_, _> = (1..=4)
        .flat_map(|i| (i + 1..=4).map(move |j| (i, j)))
        .map(|(i, j)| {
            (
                Variable::indexed("p", &[i, j]),
                Scalar::var(Variable::indexed("pt", &[i, j])),
            )
        })
        .collect();
    let sm = r(RFamily::StandardMulti, 4)
        .try_map(|x| x.subs(&renamed))
        .unwrap();
    let sm = reduce_by_constraints(&sm, &lat).unwrap();
    assert!(
        !check_system(ConditionSystem::NewCocycle, &sm, &fm)
            .unwrap()
            .passed
    );
}

#[test]
fn report_json_shape() {
    let mut m = r(RFamily::Standard, 2);
    m.set(&[1, 1], &[1, 1], s("2*q"));
    let rep = check_qybe(&m).unwrap();
    let v: serde_json::Value = serde_json::from_str(&rep.to_json()).unwrap();
    assert_eq!(v["system"], "QYBE");
    assert_eq!(v["passed"], false);
    assert!(v["violations"][0]["eq"].is_string());
    assert!(v["violations"][0]["row"].is_array());
    assert_eq!(ConditionReport::from_json(&rep.to_json()).unwrap(), rep);
    assert_eq!(
        "new-cocycle".parse::<ConditionSystem>().unwrap(),
        ConditionSystem::NewCocycle
    );
}

#[test]
fn twists_preserve_qybe() {
    let rm = r(RFamily::Standard, 3);
    let twisted = twist(&rm, &f(FFamily::Diagonal, 3)).unwrap();
    assert!(check_qybe(&twisted).unwrap().passed);
    let fam = FFamily::SimpleRoot { k: 1, l: 2 };
    let base = reduced_multi(fam, 3);
    assert!(check_qybe(&base).unwrap().passed);
    assert!(
        check_qybe(&twist(&base, &f(fam, 3)).unwrap())
            .unwrap()
            .passed
    );
}

mod props {
    use super::*;
    use crate::{Rational, RationalMatrix};
    use proptest::prelude::*;

    fn rational() -> impl Strategy<Value = Rational> {
        (-5i64..=5, 1i64..=4).prop_map(|(a, b)| Rational::new(a.into(), b.into()))
    }

    fn nonzero() -> impl Strategy<Value = Rational> {
        rational().prop_filter("nonzero", |x| *x != Rational::from_integer(0.into()))
    }

    fn pairs() -> Vec<(usize, usize)> {
        (1..=2).flat_map(|i| (1..=2).map(move |j| (i, j))).collect()
    }

    fn dense() -> impl Strategy<Value = RationalMatrix> {
        prop::collection::vec(rational(), 16).prop_map(|vs| {
            let mut m = RationalMatrix::zero(2, 2);
            let idx = pairs();
            for (k, v) in vs.into_iter().enumerate() {
                let (r, c) = (idx[k / 4], idx[k % 4]);
                m.set(&[r.0, r.1], &[c.0, c.1], v);
            }
            m
        })
    }

    /// Unitriangular plus a nonzero diagonal, so always invertible.
    fn invertible() -> impl Strategy<Value = RationalMatrix> {
        (
            prop::collection::vec(nonzero(), 4),
            prop::collection::vec(rational(), 6),
        )
            .prop_map(|(d, upper)| {
                let mut m = RationalMatrix::zero(2, 2);
                let idx = pairs();
                let mut u = upper.into_iter();
                for a in 0..4 {
                    m.set(&[idx[a].0, idx[a].1], &[idx[a].0, idx[a].1], d[a].clone());
                    for b in a + 1..4 {
                        m.set(
                            &[idx[a].0, idx[a].1],
                            &[idx[b].0, idx[b].1],
                            u.next().unwrap(),
                        );
                    }
                }
                m
            })
    }

    fn diagonal() -> impl Strategy<Value = RationalMatrix> {
        prop::collection::vec(nonzero(), 4).prop_map(|d| {
            let mut m = RationalMatrix::zero(2, 2);
            for ((i, j), v) in pairs().into_iter().zip(d) {
                m.set(&[i, j], &[i, j], v);
            }
            m
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn twist_and_untwist_are_inverse(rm in dense(), fm in invertible()) {
            prop_assert_eq!(untwist(&twist(&rm, &fm).unwrap(), &fm).unwrap(), rm.clone());
            prop_assert_eq!(twist(&untwist(&rm, &fm).unwrap(), &fm).unwrap(), rm);
        }

        #[test]
        fn diagonal_twists_compose_and_fix_ii(rm in dense(), a in diagonal(), b in diagonal()) {
            let twice = twist(&twist(&rm, &a).unwrap(), &b).unwrap();
            prop_assert_eq!(&twice, &twist(&rm, &a.mul(&b).unwrap()).unwrap());
            for i in 1..=2 {
                prop_assert_eq!(twice.entry(&[i, i], &[i, i]), rm.entry(&[i, i], &[i, i]));
            }
        }
    }
}
