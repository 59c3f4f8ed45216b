//! Contradiction certificates over GF(2).
//!
//! Row `L` of the incidence matrix has a 1 in every `(site, observable)`
//! column that relation `L` touches. A subset of relations is a certificate
//! when its rows sum to zero (every element of reality appears an even number
//! of times, so the product of their values is +1) while the product of its
//! signs is −1. Such subsets form an affine slice of the left null space.

use std::collections::BTreeMap;

use super::ParadoxSpec;
use crate::quantum::LocalKey;

pub const DEFAULT_CERTIFICATE_CAP: usize = 1024;

/// Largest null-space dimension enumerated exhaustively.
const MAX_ENUMERATED_DIM: usize = 20;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
struct BitRow(Vec<u64>);

impl BitRow {
    fn zeros(bits: usize) -> Self {
        BitRow(vec![0; bits.div_ceil(64).max(1)])
    }

    fn get(&self, i: usize) -> bool {
        self.0[i / 64] >> (i % 64) & 1 == 1
    }

    fn set(&mut self, i: usize) {
        self.0[i / 64] |= 1 << (i % 64);
    }

    fn flip(&mut self, i: usize) {
        self.0[i / 64] ^= 1 << (i % 64);
    }

    fn xor_with(&mut self, other: &BitRow) {
        for (a, b) in self.0.iter_mut().zip(&other.0) {
            *a ^= b;
        }
    }

    fn is_zero(&self) -> bool {
        self.0.iter().all(|&w| w == 0)
    }

    fn and_parity(&self, other: &BitRow) -> bool {
        self.0.iter().zip(&other.0).map(|(a, b)| (a & b).count_ones()).sum::<u32>() % 2 == 1
    }

    fn ones(&self, len: usize) -> Vec<usize> {
        (0..len).filter(|&i| self.get(i)).collect()
    }
}

/// Subset of relations whose element-of-reality product contradicts the
/// product of their signs. Indices are 0-based.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct ContradictionCertificate {
    pub relation_indices: Vec<usize>,
}

impl ContradictionCertificate {
    pub fn weight(&self) -> usize {
        self.relation_indices.len()
    }

    /// Re-checks both defining properties directly against `spec`.
    pub fn is_valid_for(&self, spec: &ParadoxSpec) -> bool {
        if self.relation_indices.is_empty() || self.relation_indices.iter().any(|&i| i >= spec.len()) {
            return false;
        }
        let mut counts: BTreeMap<(usize, LocalKey), usize> = BTreeMap::new();
        let mut minus = 0;
        for &i in &self.relation_indices {
            let r = &spec.relations[i];
            if r.sign.is_minus() {
                minus += 1;
            }
            for (site, key) in r.observable.keys().into_iter().enumerate() {
                if let Some(key) = key {
                    *counts.entry((site, key)).or_default() += 1;
                }
            }
        }
        minus % 2 == 1 && counts.values().all(|c| c % 2 == 0)
    }
}

#[derive(Debug, Clone)]
pub struct CertificateSearch {
    /// Dimension of the left null space of the incidence matrix.
    pub nullspace_dim: usize,
    /// Sorted by weight, then lexicographically.
    pub certificates: Vec<ContradictionCertificate>,
    pub min_weight: Option<usize>,
    /// The list was cut at the cap (minimal-weight entries are always kept).
    pub truncated: bool,
    /// False when the null space was too large to enumerate completely.
    pub exhaustive: bool,
}

impl CertificateSearch {
    pub fn minimal(&self) -> impl Iterator<Item = &ContradictionCertificate> {
        let w = self.min_weight;
        self.certificates.iter().filter(move |c| Some(c.weight()) == w)
    }

    pub fn is_empty(&self) -> bool {
        self.certificates.is_empty()
    }
}

/// Column index of each `(site, observable)` pair, in sorted order.
fn incidence_columns(spec: &ParadoxSpec) -> BTreeMap<(usize, LocalKey), usize> {
    let mut cols = BTreeMap::new();
    for r in &spec.relations {
        for (site, key) in r.observable.keys().into_iter().enumerate() {
            if let Some(key) = key {
                cols.entry((site, key)).or_insert(0);
            }
        }
    }
    for (i, v) in cols.values_mut().enumerate() {
        *v = i;
    }
    cols
}

/// Enumerates contradiction certificates, keeping at most `cap` of them
/// beyond the minimal-weight ones.
pub fn find_contradictions(spec: &ParadoxSpec, cap: usize) -> CertificateSearch {
    let r = spec.len();
    let cols = incidence_columns(spec);
    let k = cols.len();

    // Augmented rows [incidence | identity]; elimination leaves the left null
    // space in the identity half of rows whose incidence half vanished.
    let mut rows: Vec<(BitRow, BitRow)> = spec
        .relations
        .iter()
        .enumerate()
        .map(|(i, rel)| {
            let mut inc = BitRow::zeros(k);
            for (site, key) in rel.observable.keys().into_iter().enumerate() {
                if let Some(key) = key {
                    inc.flip(cols[&(site, key)]);
                }
            }
            let mut id = BitRow::zeros(r);
            id.set(i);
            (inc, id)
        })
        .collect();

    let mut rank = 0;
    for c in 0..k {
        let Some(p) = (rank..r).find(|&i| rows[i].0.get(c)) else {
            continue;
        };
        rows.swap(rank, p);
        let (pivot_inc, pivot_id) = rows[rank].clone();
        for (i, row) in rows.iter_mut().enumerate() {
            if i != rank && row.0.get(c) {
                row.0.xor_with(&pivot_inc);
                row.1.xor_with(&pivot_id);
            }
        }
        rank += 1;
    }
    let basis: Vec<BitRow> = rows[rank..]
        .iter()
        .filter(|(inc, _)| inc.is_zero())
        .map(|(_, id)| id.clone())
        .collect();
    let nullspace_dim = basis.len();

    let mut minus = BitRow::zeros(r);
    for (i, rel) in spec.relations.iter().enumerate() {
        if rel.sign.is_minus() {
            minus.set(i);
        }
    }

    let enumerated = nullspace_dim.min(MAX_ENUMERATED_DIM);
    let mut found = Vec::new();
    let mut current = BitRow::zeros(r);
    for step in 1u64..(1u64 << enumerated) {
        current.xor_with(&basis[step.trailing_zeros() as usize]);
        if current.and_parity(&minus) {
            found.push(ContradictionCertificate { relation_indices: current.ones(r) });
        }
    }
    found.sort_by(|a, b| a.weight().cmp(&b.weight()).then_with(|| a.cmp(b)));

    let min_weight = found.first().map(ContradictionCertificate::weight);
    let minimal_count = found.iter().take_while(|c| Some(c.weight()) == min_weight).count();
    let keep = cap.max(minimal_count);
    let truncated = found.len() > keep;
    found.truncate(keep);

    CertificateSearch {
        nullspace_dim,
        certificates: found,
        min_weight,
        truncated,
        exhaustive: enumerated == nullspace_dim,
    }
}
