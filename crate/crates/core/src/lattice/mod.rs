//! Multiplicative constraint systems over named unknowns, solved on the
//! integer lattice of their exponents.

mod appendix;
mod count;
pub(crate) mod integer;
mod solve;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::scalar::{Monomial, Scalar, Variable};

pub use appendix::{
    appendix_a_closed_form, appendix_a_system, cg_normal_form, verify_appendix_a, CgNormalForm,
};
pub use count::{count_parameters, reduce_by_constraints, reduce_scalar};
pub use integer::integer_rank;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LatticeError {
    #[error("inconsistent system: {0}")]
    Inconsistent(Certificate),
    #[error("no monomial solution: {unknown}^{degree} is forced to equal {value}")]
    Torsion {
        unknown: String,
        degree: i64,
        value: Monomial,
    },
    #[error("variable {0} is constrained but has no assignment")]
    UncoveredVariable(String),
    #[error("entry at {row:?} {col:?} does not factor over the base: {value}")]
    NonFactorableEntry {
        row: Vec<usize>,
        col: Vec<usize>,
        value: String,
    },
    #[error("bad constraint input: {0}")]
    BadInput(String),
    #[error("{0}")]
    AssertionFailure(String),
}

/// A combination of relations whose unknown parts cancel while the known
/// parts leave a nontrivial monomial: `prod_k rel_k^{c_k}` reads `1 = residual`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Certificate {
    pub combination: Vec<(usize, i64)>,
    pub residual: Monomial,
}

impl fmt::Display for Certificate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .combination
            .iter()
            .map(|(k, c)| format!("rel{k}^{c}"))
            .collect();
        write!(f, "{} gives 1 = {}", parts.join(" * "), self.residual)
    }
}

impl Serialize for Monomial {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

/// One multiplicative relation `lhs = rhs` between monomials.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Relation {
    pub lhs: Monomial,
    pub rhs: Monomial,
}

impl Relation {
    pub fn new(lhs: Monomial, rhs: Monomial) -> Self {
        Relation { lhs, rhs }
    }

    /// `lhs / rhs`, the monomial the relation sets to 1.
    pub fn quotient(&self) -> Monomial {
        self.lhs.div(&self.rhs)
    }
}

impl fmt::Display for Relation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} = {}", self.lhs, self.rhs)
    }
}

/// Relations among `unknowns`; any other variable that occurs (such as
/// `q`) is treated as a known constant.
///
/// The order of `unknowns` is the elimination preference: earlier unknowns
/// are expressed through later ones when there is a choice.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct MonomialConstraintSystem {
    unknowns: Vec<Variable>,
    relations: Vec<Relation>,
}

impl MonomialConstraintSystem {
    pub fn new(unknowns: Vec<Variable>) -> Self {
        let mut seen = BTreeSet::new();
        let unknowns = unknowns
            .into_iter()
            .filter(|v| seen.insert(v.clone()))
            .collect();
        MonomialConstraintSystem {
            unknowns,
            relations: Vec::new(),
        }
    }

    pub fn unknowns(&self) -> &[Variable] {
        &self.unknowns
    }

    pub fn relations(&self) -> &[Relation] {
        &self.relations
    }

    pub fn is_unknown(&self, v: &Variable) -> bool {
        self.unknowns.contains(v)
    }

    /// Adds `lhs = rhs`, skipping relations that hold trivially or repeat
    /// an earlier one (up to inversion).
    pub fn add(&mut self, lhs: Monomial, rhs: Monomial) {
        let rel = Relation::new(lhs, rhs);
        let quo = rel.quotient();
        if quo.is_one() {
            return;
        }
        let dup = self.relations.iter().any(|r| {
            let o = r.quotient();
            o == quo || o == quo.inv()
        });
        if !dup {
            self.relations.push(rel);
        }
    }

    /// Appends the relations and unknowns of `other`.
    pub fn extend(&mut self, other: &MonomialConstraintSystem) {
        for u in &other.unknowns {
            if !self.unknowns.contains(u) {
                self.unknowns.push(u.clone());
            }
        }
        for r in &other.relations {
            self.add(r.lhs.clone(), r.rhs.clone());
        }
    }

    pub fn without_relation(&self, index: usize) -> Self {
        let mut out = self.clone();
        out.relations.remove(index);
        out
    }

    /// Exponent vector of each relation over the unknowns.
    pub fn relation_matrix(&self) -> Vec<Vec<i64>> {
        self.relations
            .iter()
            .map(|r| {
                let q = r.quotient();
                self.unknowns.iter().map(|u| q.exponent(u)).collect()
            })
            .collect()
    }

    pub fn relation_rank(&self) -> usize {
        integer_rank(&self.relation_matrix())
    }

    /// Known part of relation `k`: the monomial in non-unknowns that the
    /// unknown part must equal.
    pub(crate) fn known_rhs(&self, k: usize) -> Monomial {
        self.relations[k]
            .quotient()
            .restrict(|v| !self.is_unknown(v))
            .inv()
    }

    pub fn solve(&self) -> Result<SolutionLattice, LatticeError> {
        solve::solve(self)
    }

    /// Does substituting the lattice assignment make every relation an
    /// identity of monomials?
    pub fn satisfied_by(&self, lattice: &SolutionLattice) -> bool {
        let sub = |m: &Monomial| {
            m.iter().fold(Monomial::one(), |acc, (v, e)| {
                acc.mul(
                    &lattice
                        .get(v)
                        .cloned()
                        .unwrap_or_else(|| Monomial::var(v.clone()))
                        .pow(e),
                )
            })
        };
        self.relations.iter().all(|r| sub(&r.lhs) == sub(&r.rhs))
    }

    /// Does `assignment` satisfy every relation identically?
    pub fn holds_under(&self, assignment: &BTreeMap<Variable, Scalar>) -> bool {
        self.relations.iter().all(|r| {
            let l = Scalar::monomial(r.lhs.clone()).subs(assignment);
            let h = Scalar::monomial(r.rhs.clone()).subs(assignment);
            matches!((l, h), (Ok(a), Ok(b)) if a == b)
        })
    }

    pub fn to_json(&self) -> ConstraintFileJson {
        let map = |m: &Monomial| m.iter().map(|(v, e)| (v.name().to_string(), e)).collect();
        ConstraintFileJson::Full {
            unknowns: self.unknowns.iter().map(|v| v.name().to_string()).collect(),
            relations: self
                .relations
                .iter()
                .map(|r| RelationJson {
                    lhs: map(&r.lhs),
                    rhs: map(&r.rhs),
                })
                .collect(),
        }
    }

    /// Reads a constraint file. A bare list of relations treats every
    /// variable except `q` and `qr` as unknown, in order of appearance.
    pub fn from_json(json: &ConstraintFileJson) -> Result<Self, LatticeError> {
        let (declared, rels) = match json {
            ConstraintFileJson::Full {
                unknowns,
                relations,
            } => (Some(unknowns), relations),
            ConstraintFileJson::Bare(relations) => (None, relations),
        };
        let var =
            |name: &str| Variable::new(name).map_err(|e| LatticeError::BadInput(e.to_string()));
        let mono = |m: &BTreeMap<String, i64>| -> Result<Monomial, LatticeError> {
            let pairs: Result<Vec<_>, _> = m.iter().map(|(k, &e)| Ok((var(k)?, e))).collect();
            Ok(Monomial::from_pairs(pairs?))
        };
        let mut parsed = Vec::new();
        for r in rels {
            parsed.push((mono(&r.lhs)?, mono(&r.rhs)?));
        }
        let unknowns: Vec<Variable> = match declared {
            Some(names) => names.iter().map(|n| var(n)).collect::<Result<_, _>>()?,
            None => {
                let mut out: Vec<Variable> = Vec::new();
                for (l, h) in &parsed {
                    for v in l.variables().chain(h.variables()) {
                        if v.name() != "q" && v.name() != "qr" && !out.contains(v) {
                            out.push(v.clone());
                        }
                    }
                }
                out
            }
        };
        let mut sys = MonomialConstraintSystem::new(unknowns);
        for (l, h) in parsed {
            sys.relations.push(Relation::new(l, h));
        }
        Ok(sys)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RelationJson {
    pub lhs: BTreeMap<String, i64>,
    pub rhs: BTreeMap<String, i64>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ConstraintFileJson {
    Bare(Vec<RelationJson>),
    Full {
        unknowns: Vec<String>,
        relations: Vec<RelationJson>,
    },
}

/// The general solution of a constraint system: every unknown as a monomial
/// in free generators and known variables.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SolutionLattice {
    /// Free generators. Unknowns that stay free keep their own names;
    /// generators introduced by lattice reduction are fresh.
    pub free: Vec<Variable>,
    /// Every unknown of the system, free ones mapped to themselves.
    pub assignment: BTreeMap<Variable, Monomial>,
    /// Dimension of the solution torus.
    pub rank: usize,
    /// Rank of the relation matrix.
    pub relation_rank: usize,
}

impl SolutionLattice {
    /// The solution of the empty system on `unknowns`.
    pub fn identity(unknowns: &[Variable]) -> Self {
        SolutionLattice {
            free: unknowns.to_vec(),
            assignment: unknowns
                .iter()
                .map(|v| (v.clone(), Monomial::var(v.clone())))
                .collect(),
            rank: unknowns.len(),
            relation_rank: 0,
        }
    }

    /// Unknowns that are not free generators.
    pub fn constrained(&self) -> BTreeSet<Variable> {
        let free: BTreeSet<&Variable> = self.free.iter().collect();
        self.assignment
            .keys()
            .filter(|v| !free.contains(v))
            .cloned()
            .collect()
    }

    pub fn get(&self, v: &Variable) -> Option<&Monomial> {
        self.assignment.get(v)
    }

    /// The substitution map for the constrained unknowns.
    pub fn substitution(&self) -> BTreeMap<Variable, Monomial> {
        self.assignment
            .iter()
            .filter(|(v, m)| **m != Monomial::var((*v).clone()))
            .map(|(v, m)| (v.clone(), m.clone()))
            .collect()
    }

    pub fn to_json(&self) -> SolutionLatticeJson {
        SolutionLatticeJson {
            free: self.free.iter().map(|v| v.name().to_string()).collect(),
            assignment: self
                .assignment
                .iter()
                .map(|(v, m)| (v.name().to_string(), m.to_string()))
                .collect(),
            rank: Some(self.rank),
            relation_rank: Some(self.relation_rank),
        }
    }

    pub fn from_json(json: &SolutionLatticeJson) -> Result<Self, LatticeError> {
        let bad = |e: String| LatticeError::BadInput(e);
        let free: Vec<Variable> = json
            .free
            .iter()
            .map(|n| Variable::new(n).map_err(|e| bad(e.to_string())))
            .collect::<Result<_, _>>()?;
        let mut assignment = BTreeMap::new();
        for (k, text) in &json.assignment {
            let v = Variable::new(k).map_err(|e| bad(e.to_string()))?;
            let s: Scalar = text
                .parse()
                .map_err(|e: crate::ScalarError| bad(e.to_string()))?;
            let m = s
                .as_monomial()
                .ok_or_else(|| bad(format!("assignment of {k} is not a monomial: {text}")))?;
            assignment.insert(v, m);
        }
        for v in &free {
            assignment
                .entry(v.clone())
                .or_insert_with(|| Monomial::var(v.clone()));
        }
        let rank = json.rank.unwrap_or(free.len());
        let relation_rank = json
            .relation_rank
            .unwrap_or(assignment.len().saturating_sub(rank));
        Ok(SolutionLattice {
            free,
            assignment,
            rank,
            relation_rank,
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SolutionLatticeJson {
    pub free: Vec<String>,
    pub assignment: BTreeMap<String, String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rank: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub relation_rank: Option<usize>,
}
