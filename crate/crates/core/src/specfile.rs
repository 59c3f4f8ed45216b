//! JSON paradox files.
//!
//! ```json
//! {
//!   "name": "mermin-3q",
//!   "n_qubits": 3,
//!   "relations": [
//!     {"sites": [{"pauli": "X"}, {"pauli": "X"}, {"phase": 0.0}], "sign": 1}
//!   ],
//!   "candidates": [
//!     {"state": [[0.7071, 0.0], ...], "bipartition": [[1], [2, 3]], "label": "as printed"}
//!   ]
//! }
//! ```
//!
//! Candidate states are normalized on load.

use std::fs;
use std::path::Path;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::paradox::{ParadoxSpec, Relation, Sign};
use crate::quantum::{Bipartition, CVector, GlobalObservable, Ket, LocalObservable, Pauli, C64};

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
#[serde(rename_all = "lowercase", deny_unknown_fields)]
enum SiteJson {
    Phase(f64),
    Pauli(Pauli),
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RelationJson {
    sites: Vec<SiteJson>,
    sign: Sign,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct CandidateJson {
    state: Vec<[f64; 2]>,
    bipartition: [Vec<usize>; 2],
    #[serde(default, skip_serializing_if = "Option::is_none")]
    label: Option<String>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct SpecFileJson {
    name: String,
    n_qubits: usize,
    relations: Vec<RelationJson>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    candidates: Vec<CandidateJson>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    notes: Option<String>,
}

/// A biseparable state proposed to reproduce the relations.
#[derive(Debug, Clone)]
pub struct Candidate {
    pub state: Ket,
    pub bipartition: Bipartition,
    pub label: Option<String>,
}

/// Parsed contents of a paradox file.
#[derive(Debug, Clone)]
pub struct SpecFile {
    pub spec: ParadoxSpec,
    pub candidates: Vec<Candidate>,
    pub notes: Option<String>,
}

impl SpecFile {
    pub fn new(spec: ParadoxSpec) -> Self {
        Self { spec, candidates: Vec::new(), notes: None }
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let text = fs::read_to_string(path.as_ref())?;
        text.parse()
    }

    pub fn to_json(&self) -> Result<String> {
        let doc = SpecFileJson {
            name: self.spec.name.clone(),
            n_qubits: self.spec.n_qubits,
            relations: self
                .spec
                .relations
                .iter()
                .map(|r| RelationJson {
                    sites: r
                        .observable
                        .sites
                        .iter()
                        .map(|s| match *s {
                            LocalObservable::Phase(t) => SiteJson::Phase(t),
                            LocalObservable::Pauli(p) => SiteJson::Pauli(p),
                        })
                        .collect(),
                    sign: r.sign,
                })
                .collect(),
            candidates: self
                .candidates
                .iter()
                .map(|c| CandidateJson {
                    state: c.state.to_pairs(),
                    bipartition: [c.bipartition.block_a().to_vec(), c.bipartition.block_b().to_vec()],
                    label: c.label.clone(),
                })
                .collect(),
            notes: self.notes.clone(),
        };
        Ok(serde_json::to_string_pretty(&doc)?)
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        fs::write(path, self.to_json()? + "\n")?;
        Ok(())
    }
}

impl FromStr for SpecFile {
    type Err = Error;

    fn from_str(text: &str) -> Result<Self> {
        let doc: SpecFileJson = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        let n = doc.n_qubits;
        let relations = doc
            .relations
            .into_iter()
            .enumerate()
            .map(|(i, r)| {
                let sites = r
                    .sites
                    .into_iter()
                    .map(|s| match s {
                        SiteJson::Phase(t) if t.is_finite() => Ok(LocalObservable::Phase(t)),
                        SiteJson::Phase(t) => Err(Error::Parse(format!("relation {}: non-finite angle {t}", i + 1))),
                        SiteJson::Pauli(p) => Ok(LocalObservable::Pauli(p)),
                    })
                    .collect::<Result<Vec<_>>>()?;
                Ok(Relation::new(GlobalObservable::new(sites), r.sign))
            })
            .collect::<Result<Vec<_>>>()?;
        let spec = ParadoxSpec::new(doc.name, n, relations)?;
        let candidates = doc
            .candidates
            .into_iter()
            .map(|c| {
                let amps = CVector::from_iterator(c.state.len(), c.state.iter().map(|&[re, im]| C64::new(re, im)));
                Ok(Candidate {
                    state: Ket::normalized(n, amps)?,
                    bipartition: Bipartition::new(n, &c.bipartition[0], &c.bipartition[1])?,
                    label: c.label,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Self { spec, candidates, notes: doc.notes })
    }
}
