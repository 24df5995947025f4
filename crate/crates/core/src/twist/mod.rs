//! Condition checks on the triple tensor power and the matrix-level twist.

mod gl4;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::field::Field;
use crate::tensor::{LeggedMatrix, TensorError};

pub use gl4::{double_twist_gl4, ek_first_stage, gamma_images, DoubleTwistError};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum ConditionSystem {
    #[serde(rename = "QYBE")]
    Qybe,
    #[serde(rename = "RESHETIKHIN")]
    Reshetikhin,
    #[serde(rename = "NEW_COCYCLE")]
    NewCocycle,
}

impl ConditionSystem {
    pub const ALL: [ConditionSystem; 3] = [Self::Qybe, Self::Reshetikhin, Self::NewCocycle];

    /// The CLI spelling.
    pub fn cli_name(self) -> &'static str {
        match self {
            Self::Qybe => "qybe",
            Self::Reshetikhin => "reshetikhin",
            Self::NewCocycle => "new-cocycle",
        }
    }

    pub fn tag(self) -> &'static str {
        match self {
            Self::Qybe => "QYBE",
            Self::Reshetikhin => "RESHETIKHIN",
            Self::NewCocycle => "NEW_COCYCLE",
        }
    }

    /// The equations of the system, each a pair of factor lists.
    pub fn equations(self) -> &'static [Equation] {
        match self {
            Self::Qybe => &QYBE,
            Self::Reshetikhin => &RESHETIKHIN,
            Self::NewCocycle => &NEW_COCYCLE,
        }
    }
}

impl fmt::Display for ConditionSystem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

impl FromStr for ConditionSystem {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Self::ALL
            .into_iter()
            .find(|c| c.cli_name() == s || c.tag() == s)
            .ok_or_else(|| {
                format!("unknown condition system {s:?} (qybe, reshetikhin, new-cocycle)")
            })
    }
}

/// Which matrix a factor is, and on which legs it sits.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Factor {
    R(usize, usize),
    F(usize, usize),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Equation {
    pub id: &'static str,
    pub lhs: &'static [Factor],
    pub rhs: &'static [Factor],
}

use Factor::{F, R};

const QYBE: [Equation; 1] = [Equation {
    id: "R12R13R23=R23R13R12",
    lhs: &[R(1, 2), R(1, 3), R(2, 3)],
    rhs: &[R(2, 3), R(1, 3), R(1, 2)],
}];

const RESHETIKHIN: [Equation; 3] = [
    Equation {
        id: "F12F13F23=F23F13F12",
        lhs: &[F(1, 2), F(1, 3), F(2, 3)],
        rhs: &[F(2, 3), F(1, 3), F(1, 2)],
    },
    Equation {
        id: "R12F13F23=F23F13R12",
        lhs: &[R(1, 2), F(1, 3), F(2, 3)],
        rhs: &[F(2, 3), F(1, 3), R(1, 2)],
    },
    Equation {
        id: "R23F13F12=F12F13R23",
        lhs: &[R(2, 3), F(1, 3), F(1, 2)],
        rhs: &[F(1, 2), F(1, 3), R(2, 3)],
    },
];

const NEW_COCYCLE: [Equation; 3] = [
    Equation {
        id: "F12F23=F23F12",
        lhs: &[F(1, 2), F(2, 3)],
        rhs: &[F(2, 3), F(1, 2)],
    },
    Equation {
        id: "R12F23F13=F13F23R12",
        lhs: &[R(1, 2), F(2, 3), F(1, 3)],
        rhs: &[F(1, 3), F(2, 3), R(1, 2)],
    },
    Equation {
        id: "R23F12F13=F13F12R23",
        lhs: &[R(2, 3), F(1, 2), F(1, 3)],
        rhs: &[F(1, 3), F(1, 2), R(2, 3)],
    },
];

/// One nonzero component of `lhs - rhs`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Violation {
    pub eq: String,
    pub row: Vec<usize>,
    pub col: Vec<usize>,
    pub residual: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConditionReport {
    pub system: ConditionSystem,
    pub passed: bool,
    pub violations: Vec<Violation>,
}

impl ConditionReport {
    fn from_violations(system: ConditionSystem, violations: Vec<Violation>) -> Self {
        ConditionReport {
            system,
            passed: violations.is_empty(),
            violations,
        }
    }

    /// Number of violated components of equation `id`.
    pub fn count(&self, id: &str) -> usize {
        self.violations.iter().filter(|v| v.eq == id).count()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn from_json(text: &str) -> Result<Self, serde_json::Error> {
        serde_json::from_str(text)
    }
}

impl fmt::Display for ConditionReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let verdict = if self.passed { "passed" } else { "FAILED" };
        writeln!(
            f,
            "{}: {} ({} violations)",
            self.system,
            verdict,
            self.violations.len()
        )?;
        for v in &self.violations {
            writeln!(f, "  {} {:?} -> {:?}: {}", v.eq, v.row, v.col, v.residual)?;
        }
        Ok(())
    }
}

fn check_two_legs<T: Field>(what: &str, m: &LeggedMatrix<T>) -> Result<(), TensorError> {
    if m.legs() != 2 {
        return Err(TensorError::ShapeMismatch(format!(
            "{what} must have 2 legs, got {}",
            m.legs()
        )));
    }
    Ok(())
}

/// Every nonzero component of `lhs - rhs` for one equation.
fn residuals<T: Field>(
    eq: &Equation,
    r: &[LeggedMatrix<T>; 3],
    f: Option<&[LeggedMatrix<T>; 3]>,
) -> Result<Vec<Violation>, TensorError> {
    let pick = |factor: &Factor| -> Result<&LeggedMatrix<T>, TensorError> {
        let (set, legs) = match *factor {
            Factor::R(a, b) => (Some(r), (a, b)),
            Factor::F(a, b) => (f, (a, b)),
        };
        let set = set.ok_or_else(|| TensorError::ShapeMismatch("equation needs F".into()))?;
        Ok(match legs {
            (1, 2) => &set[0],
            (1, 3) => &set[1],
            _ => &set[2],
        })
    };
    let side = |fs: &[Factor]| -> Result<LeggedMatrix<T>, TensorError> {
        let ms = fs.iter().map(pick).collect::<Result<Vec<_>, _>>()?;
        LeggedMatrix::product(&ms)
    };
    let diff = side(eq.lhs)?.sub(&side(eq.rhs)?)?;
    Ok(diff
        .iter()
        .map(|(row, col, v)| Violation {
            eq: eq.id.to_string(),
            row,
            col,
            residual: v.to_string(),
        })
        .collect())
}

fn embeddings<T: Field>(m: &LeggedMatrix<T>) -> Result<[LeggedMatrix<T>; 3], TensorError> {
    Ok([m.embed((1, 2))?, m.embed((1, 3))?, m.embed((2, 3))?])
}

/// `R12 R13 R23 - R23 R13 R12`, component by component.
pub fn check_qybe<T: Field>(r: &LeggedMatrix<T>) -> Result<ConditionReport, TensorError> {
    check_two_legs("R", r)?;
    let rs = embeddings(r)?;
    let v = residuals(&QYBE[0], &rs, None)?;
    Ok(ConditionReport::from_violations(ConditionSystem::Qybe, v))
}

/// Checks every equation of `system`; for `Qybe` the matrix `f` is ignored.
/// The equations run on separate threads and their violations are merged
/// in equation order.
pub fn check_system<T: Field>(
    system: ConditionSystem,
    r: &LeggedMatrix<T>,
    f: &LeggedMatrix<T>,
) -> Result<ConditionReport, TensorError> {
    if system == ConditionSystem::Qybe {
        return check_qybe(r);
    }
    check_two_legs("R", r)?;
    check_two_legs("F", f)?;
    if r.dim() != f.dim() {
        return Err(TensorError::ShapeMismatch(format!(
            "R has dimension {} but F has dimension {}",
            r.dim(),
            f.dim()
        )));
    }
    let rs = embeddings(r)?;
    let fs = embeddings(f)?;
    let results: Vec<Result<Vec<Violation>, TensorError>> = std::thread::scope(|scope| {
        let handles: Vec<_> = system
            .equations()
            .iter()
            .map(|eq| {
                let (rs, fs) = (&rs, &fs);
                scope.spawn(move || residuals(eq, rs, Some(fs)))
            })
            .collect();
        handles
            .into_iter()
            .map(|h| h.join().expect("equation check panicked"))
            .collect()
    });
    let mut violations = Vec::new();
    for r in results {
        violations.extend(r?);
    }
    Ok(ConditionReport::from_violations(system, violations))
}

fn same_shape<T: Field>(r: &LeggedMatrix<T>, f: &LeggedMatrix<T>) -> Result<(), TensorError> {
    check_two_legs("R", r)?;
    check_two_legs("F", f)?;
    if r.dim() != f.dim() {
        return Err(TensorError::ShapeMismatch(format!(
            "R has dimension {} but F has dimension {}",
            r.dim(),
            f.dim()
        )));
    }
    Ok(())
}

/// `F21 R F^{-1}`.
pub fn twist<T: Field>(
    r: &LeggedMatrix<T>,
    f: &LeggedMatrix<T>,
) -> Result<LeggedMatrix<T>, TensorError> {
    same_shape(r, f)?;
    let f_inv = f.inv()?;
    LeggedMatrix::product(&[&f.transpose21()?, r, &f_inv])
}

/// `F21^{-1} R F`, the inverse of [`twist`].
pub fn untwist<T: Field>(
    r_twisted: &LeggedMatrix<T>,
    f: &LeggedMatrix<T>,
) -> Result<LeggedMatrix<T>, TensorError> {
    same_shape(r_twisted, f)?;
    let f21_inv = f.inv()?.transpose21()?;
    LeggedMatrix::product(&[&f21_inv, r_twisted, f])
}

#[cfg(test)]
mod tests;
