//! Builders for the R-matrix and twisting-matrix families, together with
//! the multiplicative constraints each family imposes on its parameters.

mod constraints;
mod fmat;
mod rmat;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::lattice::{reduce_by_constraints, LatticeError, SolutionLattice};
use crate::scalar::{Monomial, Scalar, Variable};
use crate::Matrix;

pub use constraints::{family_constraints, fg_parameter_system};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FamilyError {
    #[error("size {size} is not valid for {family}: {reason}")]
    BadSize {
        family: String,
        size: usize,
        reason: String,
    },
    #[error("parameter {0} has no binding")]
    UnboundParameter(String),
    #[error("{family} has no parameter {name}")]
    UnknownParameter { family: String, name: String },
    #[error("parameter {0} is fixed by the family constraints and cannot be bound")]
    ConstrainedParameter(String),
    #[error("bad root indices: {0}")]
    BadRootIndices(String),
    #[error("binding {name} = {value} is degenerate: {reason}")]
    BadBinding {
        name: String,
        value: String,
        reason: String,
    },
    #[error("family constraints have no solution: {0}")]
    Inconsistent(LatticeError),
    #[error("unknown family {0:?}")]
    UnknownFamily(String),
}

/// R-matrix families.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum RFamily {
    Standard,
    StandardMulti,
    Cg,
    CgGeneralized,
    Fg,
    FgGeneralized,
    Ek { eta: usize },
    NsGl4,
}

/// Twisting-matrix families.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum FFamily {
    Diagonal,
    AppendixA,
    SimpleRoot { k: usize, l: usize },
    CompositeSimpleRoot { k: usize },
    FgCocycle,
    EkCocycle { eta: usize },
    Gl4Second,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Family {
    R(RFamily),
    F(FFamily),
}

impl RFamily {
    pub const NAMES: [&'static str; 8] = [
        "standard",
        "standard-multi",
        "cg",
        "cg-gen",
        "fg",
        "fg-gen",
        "ek",
        "ns-gl4",
    ];

    pub fn name(&self) -> &'static str {
        match self {
            RFamily::Standard => "standard",
            RFamily::StandardMulti => "standard-multi",
            RFamily::Cg => "cg",
            RFamily::CgGeneralized => "cg-gen",
            RFamily::Fg => "fg",
            RFamily::FgGeneralized => "fg-gen",
            RFamily::Ek { .. } => "ek",
            RFamily::NsGl4 => "ns-gl4",
        }
    }

    /// Parses a family name; `eta` is used by `ek`.
    pub fn parse(name: &str, eta: Option<usize>) -> Result<Self, FamilyError> {
        Ok(match name {
            "standard" => RFamily::Standard,
            "standard-multi" => RFamily::StandardMulti,
            "cg" => RFamily::Cg,
            "cg-gen" => RFamily::CgGeneralized,
            "fg" => RFamily::Fg,
            "fg-gen" => RFamily::FgGeneralized,
            "ek" => RFamily::Ek {
                eta: eta.unwrap_or(1),
            },
            "ns-gl4" => RFamily::NsGl4,
            _ => return Err(FamilyError::UnknownFamily(name.to_string())),
        })
    }

    /// Families indexed by `N` with dimension `2N - 1`.
    pub fn is_fg(&self) -> bool {
        matches!(self, RFamily::Fg | RFamily::FgGeneralized)
    }
}

impl FFamily {
    pub const NAMES: [&'static str; 7] = [
        "diag",
        "appendix-a",
        "simple-root",
        "composite-root",
        "fg-cocycle",
        "ek-cocycle",
        "gl4-second",
    ];

    pub fn name(&self) -> &'static str {
        match self {
            FFamily::Diagonal => "diag",
            FFamily::AppendixA => "appendix-a",
            FFamily::SimpleRoot { .. } => "simple-root",
            FFamily::CompositeSimpleRoot { .. } => "composite-root",
            FFamily::FgCocycle => "fg-cocycle",
            FFamily::EkCocycle { .. } => "ek-cocycle",
            FFamily::Gl4Second => "gl4-second",
        }
    }

    /// Parses a family name with its optional integer arguments.
    pub fn parse(
        name: &str,
        k: Option<usize>,
        l: Option<usize>,
        eta: Option<usize>,
    ) -> Result<Self, FamilyError> {
        let need = |v: Option<usize>, what: &str| {
            v.ok_or_else(|| FamilyError::BadRootIndices(format!("{name} needs {what}")))
        };
        Ok(match name {
            "diag" => FFamily::Diagonal,
            "appendix-a" => FFamily::AppendixA,
            "simple-root" => FFamily::SimpleRoot {
                k: need(k, "k")?,
                l: need(l, "l")?,
            },
            "composite-root" => FFamily::CompositeSimpleRoot { k: need(k, "k")? },
            "fg-cocycle" => FFamily::FgCocycle,
            "ek-cocycle" => FFamily::EkCocycle {
                eta: eta.unwrap_or(1),
            },
            "gl4-second" => FFamily::Gl4Second,
            _ => return Err(FamilyError::UnknownFamily(name.to_string())),
        })
    }
}

impl Family {
    pub fn name(&self) -> &'static str {
        match self {
            Family::R(r) => r.name(),
            Family::F(f) => f.name(),
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Family::R(RFamily::Ek { eta }) | Family::F(FFamily::EkCocycle { eta }) => {
                write!(f, "{}(eta={eta})", self.name())
            }
            Family::F(FFamily::SimpleRoot { k, l }) => write!(f, "{}(k={k},l={l})", self.name()),
            Family::F(FFamily::CompositeSimpleRoot { k }) => write!(f, "{}(k={k})", self.name()),
            _ => f.write_str(self.name()),
        }
    }
}

/// A family, its size (`n`, or `N` for the FG families), and a binding for
/// every parameter. Fresh specs bind each parameter to its own variable.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FamilySpec {
    pub family: Family,
    pub size: usize,
    pub bindings: BTreeMap<Variable, Scalar>,
}

impl FamilySpec {
    pub fn new(family: Family, size: usize) -> Result<Self, FamilyError> {
        let mut spec = FamilySpec {
            family,
            size,
            bindings: BTreeMap::new(),
        };
        spec.validate()?;
        spec.bindings = spec
            .parameters()?
            .into_iter()
            .map(|v| (v.clone(), Scalar::var(v)))
            .collect();
        Ok(spec)
    }

    pub fn r(family: RFamily, size: usize) -> Result<Self, FamilyError> {
        Self::new(Family::R(family), size)
    }

    pub fn f(family: FFamily, size: usize) -> Result<Self, FamilyError> {
        Self::new(Family::F(family), size)
    }

    /// Binds a parameter to a value.
    pub fn bind(mut self, name: &str, value: Scalar) -> Result<Self, FamilyError> {
        let v = Variable::new(name).map_err(|_| self.unknown(name))?;
        match self.bindings.get_mut(&v) {
            Some(slot) => *slot = value,
            None => return Err(self.unknown(name)),
        }
        Ok(self)
    }

    fn unknown(&self, name: &str) -> FamilyError {
        FamilyError::UnknownParameter {
            family: self.family.to_string(),
            name: name.to_string(),
        }
    }

    /// Dimension of the underlying space.
    pub fn dim(&self) -> usize {
        match self.family {
            Family::R(r) if r.is_fg() => 2 * self.size - 1,
            Family::F(FFamily::FgCocycle) => 2 * self.size - 1,
            _ => self.size,
        }
    }

    fn bad_size(&self, reason: &str) -> FamilyError {
        FamilyError::BadSize {
            family: self.family.to_string(),
            size: self.size,
            reason: reason.to_string(),
        }
    }

    pub fn validate(&self) -> Result<(), FamilyError> {
        let n = self.size;
        let roots = |msg: String| Err(FamilyError::BadRootIndices(msg));
        match self.family {
            Family::R(RFamily::NsGl4) | Family::F(FFamily::Gl4Second) if n != 4 => {
                Err(self.bad_size("size must be 4"))
            }
            _ if n < 2 => Err(self.bad_size("size must be at least 2")),
            Family::R(RFamily::Ek { eta }) | Family::F(FFamily::EkCocycle { eta })
                if eta == 0 || eta >= n =>
            {
                roots(format!("need 0 < eta < {n}, got eta = {eta}"))
            }
            Family::F(FFamily::SimpleRoot { k, l }) if !(0 < k && k < l && l < n) => {
                roots(format!("need 0 < k < l < {n}, got k = {k}, l = {l}"))
            }
            Family::F(FFamily::CompositeSimpleRoot { k }) if !(0 < k && k < n) => {
                roots(format!("need 0 < k < {n}, got k = {k}"))
            }
            _ => Ok(()),
        }
    }

    /// The symbols of the family's display, before constraints.
    pub fn parameters(&self) -> Result<Vec<Variable>, FamilyError> {
        self.validate()?;
        let raw = self.raw()?;
        let mut vars: BTreeSet<Variable> = BTreeSet::new();
        for (_, _, s) in raw.iter() {
            vars.extend(s.variables());
        }
        vars.extend(family_constraints(self)?.unknowns().iter().cloned());
        Ok(vars.into_iter().collect())
    }

    fn raw(&self) -> Result<Matrix, FamilyError> {
        match self.family {
            Family::R(r) => Ok(rmat::build(r, self.size)),
            Family::F(f) => Ok(fmat::build(f, self.size)),
        }
    }

    /// The solution of the family constraints.
    pub fn lattice(&self) -> Result<SolutionLattice, FamilyError> {
        family_constraints(self)?
            .solve()
            .map_err(FamilyError::Inconsistent)
    }

    fn apply_bindings(
        &self,
        m: &Matrix,
        lattice: Option<&SolutionLattice>,
    ) -> Result<Matrix, FamilyError> {
        let params = self.parameters()?;
        for p in &params {
            if !self.bindings.contains_key(p) {
                return Err(FamilyError::UnboundParameter(p.name().to_string()));
            }
        }
        let constrained = lattice
            .map(SolutionLattice::constrained)
            .unwrap_or_default();
        let mut map = BTreeMap::new();
        for (v, value) in &self.bindings {
            if !params.contains(v) {
                return Err(self.unknown(v.name()));
            }
            if *value == Scalar::var(v.clone()) {
                continue;
            }
            if constrained.contains(v) {
                return Err(FamilyError::ConstrainedParameter(v.name().to_string()));
            }
            map.insert(v.clone(), value.clone());
        }
        if map.is_empty() {
            return Ok(m.clone());
        }
        m.try_map(|s| {
            s.subs(&map).map_err(|e| FamilyError::BadBinding {
                name: map.keys().map(Variable::name).collect::<Vec<_>>().join(","),
                value: map
                    .values()
                    .map(Scalar::to_string)
                    .collect::<Vec<_>>()
                    .join(","),
                reason: e.to_string(),
            })
        })
    }
}

/// The exact matrix of an R-family display, with bindings applied.
pub fn build_r(spec: &FamilySpec) -> Result<Matrix, FamilyError> {
    let Family::R(r) = spec.family else {
        return Err(FamilyError::UnknownFamily(format!(
            "{} is not an R family",
            spec.family
        )));
    };
    spec.validate()?;
    let m = rmat::build(r, spec.size);
    spec.apply_bindings(&m, None)
}

/// [`build_r`] with the family constraints substituted before the bindings.
pub fn build_r_constrained(spec: &FamilySpec) -> Result<Matrix, FamilyError> {
    let Family::R(r) = spec.family else {
        return Err(FamilyError::UnknownFamily(format!(
            "{} is not an R family",
            spec.family
        )));
    };
    spec.validate()?;
    let lattice = spec.lattice()?;
    let m = reduce(&rmat::build(r, spec.size), &lattice)?;
    spec.apply_bindings(&m, Some(&lattice))
}

/// The twisting matrix of an F-family, with the family constraints solved
/// and substituted and then the bindings applied.
pub fn build_f(spec: &FamilySpec) -> Result<Matrix, FamilyError> {
    let Family::F(f) = spec.family else {
        return Err(FamilyError::UnknownFamily(format!(
            "{} is not an F family",
            spec.family
        )));
    };
    spec.validate()?;
    let lattice = spec.lattice()?;
    let m = reduce(&fmat::build(f, spec.size), &lattice)?;
    spec.apply_bindings(&m, Some(&lattice))
}

/// The raw twisting-matrix display with bindings applied and no
/// constraints solved.
pub fn build_f_unconstrained(spec: &FamilySpec) -> Result<Matrix, FamilyError> {
    let Family::F(f) = spec.family else {
        return Err(FamilyError::UnknownFamily(format!(
            "{} is not an F family",
            spec.family
        )));
    };
    spec.validate()?;
    spec.apply_bindings(&fmat::build(f, spec.size), None)
}

fn reduce(m: &Matrix, lattice: &SolutionLattice) -> Result<Matrix, FamilyError> {
    reduce_by_constraints(m, lattice).map_err(FamilyError::Inconsistent)
}

/// `i' = 2N - i`.
pub fn reflect(n_mid: usize, i: usize) -> usize {
    2 * n_mid - i
}

pub(crate) fn var(name: &str) -> Variable {
    Variable::named(name)
}

/// `prefix_ij`, with `prefix_ii = q` and `prefix_ji = prefix_ij^{-1}`.
pub(crate) fn pm(prefix: &str, i: usize, j: usize, q: &Monomial) -> Monomial {
    use std::cmp::Ordering;
    match i.cmp(&j) {
        Ordering::Equal => q.clone(),
        Ordering::Less => Monomial::var(Variable::indexed(prefix, &[i, j])),
        Ordering::Greater => Monomial::power(Variable::indexed(prefix, &[j, i]), -1),
    }
}

pub(crate) fn q_mono() -> Monomial {
    Monomial::var(var("q"))
}

/// `q - q^{-1}` for `q` given as a monomial.
pub(crate) fn qdiff(q: &Monomial) -> Scalar {
    Scalar::monomial(q.clone()).sub_ref(&Scalar::monomial(q.inv()))
}

impl FromStr for Family {
    type Err = FamilyError;

    /// Parses a bare family name with default arguments.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        RFamily::parse(s, None)
            .map(Family::R)
            .or_else(|_| FFamily::parse(s, Some(1), Some(2), None).map(Family::F))
    }
}
