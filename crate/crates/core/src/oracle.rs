//! Seeded exact-rational spot checks of the symbolic identities.

use std::collections::{BTreeMap, BTreeSet};

use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::lattice::SolutionLattice;
use crate::scalar::{ScalarError, Variable};
use crate::tensor::{LeggedMatrix, TensorError};
use crate::twist::{check_system, ConditionReport, ConditionSystem, Violation};
use crate::{Matrix, RationalMatrix};

/// Redraws allowed per trial before giving up on a degenerate family.
const MAX_ATTEMPTS: u64 = 64;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OracleError {
    #[error("no value for variable {0}")]
    MissingVariable(String),
    #[error("denominator vanishes at row {row:?}, col {col:?}")]
    DenominatorVanishes { row: Vec<usize>, col: Vec<usize> },
    #[error("trials must be at least 1")]
    NoTrials,
    #[error("no admissible point after {attempts} draws for trial {trial}")]
    Degenerate { trial: usize, attempts: u64 },
    #[error(transparent)]
    Tensor(#[from] TensorError),
}

/// A rational point, the seed that produced it and the lattice it honours.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Assignment {
    pub values: BTreeMap<Variable, BigRational>,
    pub seed: u64,
    pub note: String,
}

impl Assignment {
    /// Values as printable strings, keyed by variable name.
    pub fn to_strings(&self) -> BTreeMap<String, String> {
        self.values
            .iter()
            .map(|(v, x)| (v.name().to_string(), x.to_string()))
            .collect()
    }
}

fn is_deformation(v: &Variable) -> bool {
    matches!(v.name(), "q" | "qr")
}

fn draw(rng: &mut ChaCha8Rng, v: &Variable) -> BigRational {
    loop {
        let a: i64 = rng.gen_range(1..=23) * if rng.gen_bool(0.5) { 1 } else { -1 };
        let b: i64 = rng.gen_range(1..=23);
        let x = BigRational::new(a.into(), b.into());
        if is_deformation(v) && x.abs().is_one() {
            continue;
        }
        return x;
    }
}

/// Draws every free variable among `vars` (and every variable the lattice
/// needs to evaluate the constrained ones), then fills in the constrained
/// variables through the lattice.
pub fn sample_assignment(
    vars: &[Variable],
    lattice: Option<&SolutionLattice>,
    seed: u64,
) -> Assignment {
    let constrained = lattice
        .map(SolutionLattice::constrained)
        .unwrap_or_default();
    let mut base: BTreeSet<Variable> = BTreeSet::new();
    for v in vars {
        match lattice
            .and_then(|l| l.get(v))
            .filter(|_| constrained.contains(v))
        {
            Some(m) => base.extend(m.variables().cloned()),
            None => {
                base.insert(v.clone());
            }
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut values: BTreeMap<Variable, BigRational> = base
        .into_iter()
        .map(|v| {
            let x = draw(&mut rng, &v);
            (v, x)
        })
        .collect();
    if let Some(l) = lattice {
        for v in vars {
            if constrained.contains(v) {
                let m = l.get(v).expect("constrained variables are in the lattice");
                let mut x = BigRational::one();
                for (g, e) in m.iter() {
                    let b = &values[g];
                    let p = num_traits::pow(b.clone(), e.unsigned_abs() as usize);
                    x *= if e < 0 { p.recip() } else { p };
                }
                values.insert(v.clone(), x);
            }
        }
    }
    Assignment {
        values,
        seed,
        note: if lattice.is_some() {
            "lattice".into()
        } else {
            "free".into()
        },
    }
}

/// Substitutes `a` into every entry.
pub fn specialize(m: &Matrix, a: &Assignment) -> Result<RationalMatrix, OracleError> {
    let mut out = LeggedMatrix::zero(m.dim(), m.legs());
    for (row, col, s) in m.iter() {
        let x = s.substitute(&a.values).map_err(|e| match e {
            ScalarError::MissingVariable(v) => OracleError::MissingVariable(v),
            _ => OracleError::DenominatorVanishes {
                row: row.clone(),
                col: col.clone(),
            },
        })?;
        if !x.is_zero() {
            out.set(&row, &col, x);
        }
    }
    Ok(out)
}

/// One failing trial, with everything needed to replay it.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TrialFailure {
    pub trial: usize,
    pub seed: u64,
    pub point: BTreeMap<String, String>,
    pub violations: Vec<Violation>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OracleReport {
    pub system: ConditionSystem,
    pub passed: bool,
    pub trials: usize,
    pub seed: u64,
    pub failures: Vec<TrialFailure>,
}

impl OracleReport {
    /// The failing components of every trial, as one condition report.
    pub fn condition_report(&self) -> ConditionReport {
        let violations: Vec<Violation> = self
            .failures
            .iter()
            .flat_map(|f| f.violations.clone())
            .collect();
        ConditionReport {
            system: self.system,
            passed: violations.is_empty(),
            violations,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

/// Seed of attempt `attempt` of trial `trial`.
pub fn trial_seed(seed: u64, trial: usize, attempt: u64) -> u64 {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial as u64);
    rng.set_word_pos(u128::from(attempt) * 2);
    rng.gen()
}

fn variables_of(ms: &[&Matrix]) -> Vec<Variable> {
    let mut out = BTreeSet::new();
    for m in ms {
        for (_, _, s) in m.iter() {
            out.extend(s.variables());
        }
    }
    out.into_iter().collect()
}

fn run_trial(
    system: ConditionSystem,
    r: &Matrix,
    f: Option<&Matrix>,
    vars: &[Variable],
    lattice: Option<&SolutionLattice>,
    seed: u64,
    trial: usize,
) -> Result<Option<TrialFailure>, OracleError> {
    for attempt in 0..MAX_ATTEMPTS {
        let s = trial_seed(seed, trial, attempt);
        let a = sample_assignment(vars, lattice, s);
        let rr = match specialize(r, &a) {
            Ok(m) => m,
            Err(OracleError::DenominatorVanishes { .. }) => continue,
            Err(e) => return Err(e),
        };
        let ff = match f.map(|f| specialize(f, &a)).transpose() {
            Ok(m) => m,
            Err(OracleError::DenominatorVanishes { .. }) => continue,
            Err(e) => return Err(e),
        };
        let ff = ff.unwrap_or_else(|| LeggedMatrix::identity(rr.dim(), 2));
        if system != ConditionSystem::Qybe && ff.inv().is_err() {
            continue;
        }
        let rep = check_system(system, &rr, &ff)?;
        if rep.passed {
            return Ok(None);
        }
        return Ok(Some(TrialFailure {
            trial,
            seed: s,
            point: a.to_strings(),
            violations: rep.violations,
        }));
    }
    Err(OracleError::Degenerate {
        trial,
        attempts: MAX_ATTEMPTS,
    })
}

/// Checks `system` at `trials` seeded points. Trials run in parallel and
/// are reported in trial order, so equal seeds give equal reports.
pub fn stochastic_check(
    system: ConditionSystem,
    r: &Matrix,
    f: Option<&Matrix>,
    lattice: Option<&SolutionLattice>,
    trials: usize,
    seed: u64,
) -> Result<OracleReport, OracleError> {
    if trials == 0 {
        return Err(OracleError::NoTrials);
    }
    if system != ConditionSystem::Qybe && f.is_none() {
        return Err(TensorError::ShapeMismatch(format!("{system} needs an F matrix")).into());
    }
    let mut ms = vec![r];
    ms.extend(f);
    let vars = variables_of(&ms);
    let workers = std::thread::available_parallelism()
        .map_or(1, |n| n.get())
        .min(trials);
    let results: Vec<Result<Option<TrialFailure>, OracleError>> = std::thread::scope(|scope| {
        let handles: Vec<_> = (0..workers)
            .map(|w| {
                let vars = &vars;
                scope.spawn(move || {
                    (w..trials)
                        .step_by(workers)
                        .map(|t| (t, run_trial(system, r, f, vars, lattice, seed, t)))
                        .collect::<Vec<_>>()
                })
            })
            .collect();
        let mut all: Vec<_> = handles
            .into_iter()
            .flat_map(|h| h.join().expect("trial panicked"))
            .collect();
        all.sort_by_key(|(t, _)| *t);
        all.into_iter().map(|(_, r)| r).collect()
    });
    let mut failures = Vec::new();
    for r in results {
        failures.extend(r?);
    }
    Ok(OracleReport {
        system,
        passed: failures.is_empty(),
        trials,
        seed,
        failures,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families::{build_f, build_r, FFamily, FamilySpec, RFamily};
    use crate::lattice::reduce_by_constraints;
    use crate::twist::twist;
    use proptest::prelude::*;

    fn rat(a: i64, b: i64) -> BigRational {
        BigRational::new(a.into(), b.into())
    }

    fn point(pairs: &[(&str, BigRational)]) -> Assignment {
        Assignment {
            values: pairs
                .iter()
                .map(|(n, x)| (Variable::named(n), x.clone()))
                .collect(),
            seed: 0,
            note: String::new(),
        }
    }

    #[test]
    fn sampling_is_deterministic_and_bounded() {
        let vars: Vec<Variable> = ["q", "a", "b"].map(Variable::named).to_vec();
        let a = sample_assignment(&vars, None, 42);
        assert_eq!(a, sample_assignment(&vars, None, 42));
        assert_eq!(a.values.len(), 3);
        for x in a.values.values() {
            assert!(!x.is_zero());
            assert!(x.numer().abs() <= 23.into() && x.denom() <= &23.into());
        }
        assert!(!a.values[&Variable::named("q")].abs().is_one());
        assert!(sample_assignment(&[], None, 1).values.is_empty());
    }

    #[test]
    fn lattice_values_satisfy_relations() {
        let spec = FamilySpec::f(FFamily::SimpleRoot { k: 1, l: 2 }, 3).unwrap();
        let lat = spec.lattice().unwrap();
        let vars: Vec<Variable> = ["p_12", "p_23", "p_13", "q"].map(Variable::named).to_vec();
        for seed in 0..20 {
            let a = sample_assignment(&vars, Some(&lat), seed);
            let v = |n: &str| a.values[&Variable::named(n)].clone();
            assert_eq!(v("p_13"), v("q") * v("p_12") * v("p_23"));
        }
    }

    #[test]
    fn specialize_examples() {
        let st = build_r(&FamilySpec::r(RFamily::Standard, 2).unwrap()).unwrap();
        let at_one = specialize(&st, &point(&[("q", rat(1, 1))])).unwrap();
        assert_eq!(at_one, LeggedMatrix::identity(2, 2));
        let at_two = specialize(&st, &point(&[("q", rat(2, 1))])).unwrap();
        assert_eq!(at_two.entry(&[1, 2], &[2, 1]), rat(3, 2));
        let cg = build_r(&FamilySpec::r(RFamily::Cg, 3).unwrap()).unwrap();
        let cg1 = specialize(&cg, &point(&[("qr", rat(1, 1))])).unwrap();
        assert_eq!(cg1, LeggedMatrix::identity(3, 2));
        assert!(matches!(
            specialize(&cg, &point(&[])),
            Err(OracleError::MissingVariable(_))
        ));
    }

    #[test]
    fn qybe_trials() {
        let st = build_r(&FamilySpec::r(RFamily::Standard, 4).unwrap()).unwrap();
        let rep = stochastic_check(ConditionSystem::Qybe, &st, None, None, 100, 7).unwrap();
        assert!(rep.passed);
        let id = LeggedMatrix::identity(2, 2);
        assert!(
            stochastic_check(ConditionSystem::Qybe, &id, None, None, 1, 0)
                .unwrap()
                .passed
        );
        assert!(matches!(
            stochastic_check(ConditionSystem::Qybe, &id, None, None, 0, 0),
            Err(OracleError::NoTrials)
        ));
    }

    #[test]
    fn generic_simple_root_fails() {
        let sm = build_r(&FamilySpec::r(RFamily::StandardMulti, 3).unwrap()).unwrap();
        let f = build_f(&FamilySpec::f(FFamily::SimpleRoot { k: 1, l: 2 }, 3).unwrap()).unwrap();
        let rep =
            stochastic_check(ConditionSystem::NewCocycle, &sm, Some(&f), None, 20, 3).unwrap();
        assert!(!rep.passed);
        let first = &rep.failures[0];
        assert!(first.point.contains_key("p_13"));
        assert_eq!(
            rep,
            stochastic_check(ConditionSystem::NewCocycle, &sm, Some(&f), None, 20, 3).unwrap()
        );
        assert!(!rep.condition_report().passed);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(16))]

        #[test]
        fn specialization_commutes_with_twist(seed in any::<u64>()) {
            let fam = FFamily::SimpleRoot { k: 1, l: 2 };
            let spec = FamilySpec::f(fam, 3).unwrap();
            let lat = spec.lattice().unwrap();
            let f = build_f(&spec).unwrap();
            let r = reduce_by_constraints(
                &build_r(&FamilySpec::r(RFamily::StandardMulti, 3).unwrap()).unwrap(),
                &lat,
            ).unwrap();
            let t = twist(&r, &f).unwrap();
            let vars = variables_of(&[&r, &f, &t]);
            let a = sample_assignment(&vars, None, seed);
            let (rs, fs, ts) = (specialize(&r, &a), specialize(&f, &a), specialize(&t, &a));
            if let (Ok(rs), Ok(fs), Ok(ts)) = (rs, fs, ts) {
                prop_assert_eq!(twist(&rs, &fs).unwrap(), ts);
            }
        }
    }
}
