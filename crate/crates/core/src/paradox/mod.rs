//! GHZ paradoxes: sets of eigen-relations `X^L |ψ⟩ = s_L |ψ⟩` whose
//! element-of-reality consequences multiply to `+1 = −1`.
//!
//! A set of relations is a paradox when the observables share a common
//! eigenstate (concurrency) and a subset of relations covers every
//! `(site, local observable)` pair an even number of times while its signs
//! multiply to −1 (a contradiction certificate). It is reducible when some
//! biseparable state already satisfies every relation.

mod certificates;
mod reduce;

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::quantum::{
    eigenspace, intersect, is_eigenrelation, schmidt_coefficients, Bipartition, GlobalObservable, Ket,
    LocalKey, Subspace,
};

pub use certificates::{find_contradictions, CertificateSearch, ContradictionCertificate, DEFAULT_CERTIFICATE_CAP};
pub use reduce::{
    reducibility_scan, BipartitionRecord, ReducibilityOptions, ReducibilityReport, ReductionMethod, Verdict,
    REDUCIBLE_THRESHOLD,
};

/// Tolerance for re-checking relations on witness and candidate states.
pub const RELATION_TOL: f64 = 1e-7;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(into = "i8", try_from = "i8")]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn value(self) -> f64 {
        match self {
            Sign::Plus => 1.0,
            Sign::Minus => -1.0,
        }
    }

    pub fn is_minus(self) -> bool {
        self == Sign::Minus
    }
}

impl From<Sign> for i8 {
    fn from(s: Sign) -> i8 {
        match s {
            Sign::Plus => 1,
            Sign::Minus => -1,
        }
    }
}

impl TryFrom<i8> for Sign {
    type Error = String;

    fn try_from(v: i8) -> std::result::Result<Self, String> {
        match v {
            1 => Ok(Sign::Plus),
            -1 => Ok(Sign::Minus),
            other => Err(format!("sign must be +1 or -1, got {other}")),
        }
    }
}

impl fmt::Display for Sign {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(if self.is_minus() { "-1" } else { "+1" })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Relation {
    pub observable: GlobalObservable,
    pub sign: Sign,
}

impl Relation {
    pub fn new(observable: GlobalObservable, sign: Sign) -> Self {
        Self { observable, sign }
    }
}

impl fmt::Display for Relation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} = {}", self.observable, self.sign)
    }
}

/// A named list of claimed simultaneous eigen-relations.
#[derive(Debug, Clone, PartialEq)]
pub struct ParadoxSpec {
    pub name: String,
    pub n_qubits: usize,
    pub relations: Vec<Relation>,
}

impl ParadoxSpec {
    pub fn new(name: impl Into<String>, n_qubits: usize, relations: Vec<Relation>) -> Result<Self> {
        if n_qubits == 0 || n_qubits > crate::quantum::MAX_QUBITS {
            return Err(Error::Size(format!("n_qubits {n_qubits} out of range")));
        }
        if relations.is_empty() {
            return Err(Error::Invalid("a paradox needs at least one relation".into()));
        }
        if let Some((i, r)) = relations.iter().enumerate().find(|(_, r)| r.observable.n_qubits() != n_qubits) {
            return Err(Error::Invalid(format!(
                "relation {} spans {} sites, expected {n_qubits}",
                i + 1,
                r.observable.n_qubits()
            )));
        }
        Ok(Self { name: name.into(), n_qubits, relations })
    }

    /// Convenience constructor from Pauli strings such as `("ZXYY", +1)`.
    pub fn from_paulis(name: impl Into<String>, rows: &[(&str, i8)]) -> Result<Self> {
        let relations = rows
            .iter()
            .map(|&(labels, sign)| {
                let sign = Sign::try_from(sign).map_err(Error::Invalid)?;
                Ok(Relation::new(GlobalObservable::paulis(labels)?, sign))
            })
            .collect::<Result<Vec<_>>>()?;
        let n = relations.first().map(|r| r.observable.n_qubits()).unwrap_or(0);
        Self::new(name, n, relations)
    }

    pub fn len(&self) -> usize {
        self.relations.len()
    }

    pub fn is_empty(&self) -> bool {
        self.relations.is_empty()
    }

    /// Pairs `(i, j)`, `i < j`, of relations that are the same setting with the
    /// same sign.
    pub fn duplicate_relations(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for i in 0..self.relations.len() {
            for j in i + 1..self.relations.len() {
                let (a, b) = (&self.relations[i], &self.relations[j]);
                if a.sign == b.sign && a.observable.same_setting(&b.observable) {
                    out.push((i, j));
                }
            }
        }
        out
    }

    /// Common eigenspace `∩_L eigenspace(X^L, s_L)`.
    pub fn common_eigenspace(&self) -> Result<Subspace> {
        let spaces = self
            .relations
            .iter()
            .map(|r| eigenspace(&r.observable, r.sign.value()))
            .collect::<Result<Vec<_>>>()?;
        intersect(&spaces)
    }
}

/// Result of the concurrency check.
#[derive(Debug, Clone)]
pub struct ConcurrencyReport {
    pub eigenspace_dim: usize,
    pub witness_state: Option<Ket>,
}

impl ConcurrencyReport {
    pub fn is_concurrent(&self) -> bool {
        self.eigenspace_dim >= 1
    }
}

/// Dimension of the common eigenspace plus a witness state from it.
pub fn verify_concurrency(spec: &ParadoxSpec) -> Result<ConcurrencyReport> {
    let common = spec.common_eigenspace()?;
    let eigenspace_dim = common.dim();
    if eigenspace_dim == 0 {
        return Ok(ConcurrencyReport { eigenspace_dim, witness_state: None });
    }
    let witness = Ket::normalized(spec.n_qubits, common.vector(0))?.with_canonical_phase();
    let checks = verify_relations(spec, &witness, RELATION_TOL)?;
    if let Some(bad) = checks.iter().position(|ok| !ok) {
        return Err(Error::Numerical(format!(
            "witness state fails relation {} after intersection",
            bad + 1
        )));
    }
    Ok(ConcurrencyReport { eigenspace_dim, witness_state: Some(witness) })
}

/// Occurrence counts of every `(site, local observable)` pair.
#[derive(Debug, Clone, PartialEq)]
pub struct MultiplicityReport {
    /// Keyed by 1-based site and canonical observable identity.
    pub counts: BTreeMap<(usize, LocalKey), usize>,
    pub pass: bool,
}

impl MultiplicityReport {
    pub fn singletons(&self) -> Vec<(usize, LocalKey)> {
        self.counts.iter().filter(|(_, &c)| c == 1).map(|(&k, _)| k).collect()
    }
}

/// Passes iff no local observable occurs exactly once. Identity sites are not
/// counted.
pub fn check_multiplicity(spec: &ParadoxSpec) -> MultiplicityReport {
    let mut counts = BTreeMap::new();
    for r in &spec.relations {
        for (site, key) in r.observable.keys().into_iter().enumerate() {
            if let Some(key) = key {
                *counts.entry((site + 1, key)).or_insert(0usize) += 1;
            }
        }
    }
    let pass = counts.values().all(|&c| c != 1);
    MultiplicityReport { counts, pass }
}

/// Per-relation eigen-relation check on `s`.
pub fn verify_relations(spec: &ParadoxSpec, s: &Ket, tol: f64) -> Result<Vec<bool>> {
    if s.n_qubits() != spec.n_qubits {
        return Err(Error::DimensionMismatch { expected: spec.n_qubits, actual: s.n_qubits() });
    }
    Ok(spec
        .relations
        .iter()
        .map(|r| is_eigenrelation(&r.observable, r.sign.value(), s, tol))
        .collect())
}

/// Outcome of checking a candidate biseparable state.
#[derive(Debug, Clone)]
pub struct CandidateCheck {
    pub bipartition: Bipartition,
    pub leading_schmidt: f64,
    pub is_product: bool,
    pub relations: Vec<bool>,
}

impl CandidateCheck {
    pub fn passed(&self) -> bool {
        self.is_product && self.relations.iter().all(|&b| b)
    }
}

/// Detailed form of [`verify_candidate`].
pub fn check_candidate(spec: &ParadoxSpec, state: &Ket, part: &Bipartition) -> Result<CandidateCheck> {
    let coeffs = schmidt_coefficients(state, part)?;
    let leading = coeffs[0];
    Ok(CandidateCheck {
        bipartition: part.clone(),
        leading_schmidt: leading,
        is_product: (leading - 1.0).abs() <= RELATION_TOL,
        relations: verify_relations(spec, state, RELATION_TOL)?,
    })
}

/// True iff `state` is a product across `part` and satisfies every relation.
pub fn verify_candidate(spec: &ParadoxSpec, state: &Ket, part: &Bipartition) -> Result<bool> {
    Ok(check_candidate(spec, state, part)?.passed())
}
