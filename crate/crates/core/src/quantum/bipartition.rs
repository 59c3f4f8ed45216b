use std::fmt;

use nalgebra::SVD;
use serde::{Deserialize, Serialize};

use super::state::Ket;
use super::{CMatrix, CVector};
use crate::error::{Error, Result};

/// Split of sites `1..=n` into two non-empty blocks. Canonical form keeps
/// site 1 in `block_a`; both blocks are sorted.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Bipartition {
    block_a: Vec<usize>,
    block_b: Vec<usize>,
}

impl Bipartition {
    /// Sites are 1-based.
    pub fn new(n_qubits: usize, a: &[usize], b: &[usize]) -> Result<Self> {
        if a.is_empty() || b.is_empty() {
            return Err(Error::InvalidBipartition("both blocks must be non-empty".into()));
        }
        let mut seen = vec![false; n_qubits + 1];
        for &s in a.iter().chain(b) {
            if s == 0 || s > n_qubits {
                return Err(Error::InvalidBipartition(format!("site {s} outside 1..={n_qubits}")));
            }
            if seen[s] {
                return Err(Error::InvalidBipartition(format!("site {s} listed twice")));
            }
            seen[s] = true;
        }
        if seen[1..].iter().any(|x| !x) {
            return Err(Error::InvalidBipartition("blocks do not cover every site".into()));
        }
        let mut a = a.to_vec();
        let mut b = b.to_vec();
        a.sort_unstable();
        b.sort_unstable();
        if !a.contains(&1) {
            std::mem::swap(&mut a, &mut b);
        }
        Ok(Self { block_a: a, block_b: b })
    }

    /// Every canonical bipartition of `n` sites, `2^(n−1) − 1` of them, ordered
    /// by the bitmask of `block_b`.
    pub fn all(n_qubits: usize) -> Vec<Bipartition> {
        if n_qubits < 2 {
            return Vec::new();
        }
        (1usize..(1 << (n_qubits - 1)))
            .map(|mask| {
                let mut a = vec![1];
                let mut b = Vec::new();
                for site in 2..=n_qubits {
                    if mask & (1 << (site - 2)) != 0 {
                        b.push(site);
                    } else {
                        a.push(site);
                    }
                }
                Bipartition { block_a: a, block_b: b }
            })
            .collect()
    }

    pub fn n_qubits(&self) -> usize {
        self.block_a.len() + self.block_b.len()
    }

    pub fn block_a(&self) -> &[usize] {
        &self.block_a
    }

    pub fn block_b(&self) -> &[usize] {
        &self.block_b
    }

    pub fn dims(&self) -> (usize, usize) {
        (1 << self.block_a.len(), 1 << self.block_b.len())
    }

    /// Global basis index for block indices `(ia, ib)`; each block index reads
    /// its sites in ascending order, most significant first.
    pub fn global_index(&self, ia: usize, ib: usize) -> usize {
        let n = self.n_qubits();
        let mut idx = 0usize;
        let place = |block: &[usize], local: usize, idx: &mut usize| {
            let k = block.len();
            for (pos, &site) in block.iter().enumerate() {
                let bit = (local >> (k - 1 - pos)) & 1;
                *idx |= bit << (n - site);
            }
        };
        place(&self.block_a, ia, &mut idx);
        place(&self.block_b, ib, &mut idx);
        idx
    }

    /// Reshapes a state vector into a `dim_a × dim_b` matrix.
    pub fn reshape(&self, v: &CVector) -> Result<CMatrix> {
        let (da, db) = self.dims();
        if v.len() != da * db {
            return Err(Error::DimensionMismatch { expected: da * db, actual: v.len() });
        }
        Ok(CMatrix::from_fn(da, db, |ia, ib| v[self.global_index(ia, ib)]))
    }

    /// `φ_A ⊗ φ_B` laid out in the global index order.
    pub fn embed(&self, phi_a: &CVector, phi_b: &CVector) -> CVector {
        let (da, db) = self.dims();
        let mut out = CVector::zeros(da * db);
        for ia in 0..da {
            for ib in 0..db {
                out[self.global_index(ia, ib)] = phi_a[ia] * phi_b[ib];
            }
        }
        out
    }
}

impl fmt::Display for Bipartition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let join = |b: &[usize]| b.iter().map(|s| s.to_string()).collect::<Vec<_>>().join(",");
        write!(f, "{{{}}}|{{{}}}", join(&self.block_a), join(&self.block_b))
    }
}

/// Schmidt decomposition across a bipartition.
#[derive(Debug, Clone)]
pub struct Schmidt {
    /// Descending, `min(dim_a, dim_b)` values.
    pub coefficients: Vec<f64>,
    /// Product state `u₁ ⊗ v₁` attaining the largest coefficient.
    pub leading_product: CVector,
}

pub fn schmidt_decomposition(s: &Ket, part: &Bipartition) -> Result<Schmidt> {
    if part.n_qubits() != s.n_qubits() {
        return Err(Error::InvalidBipartition(format!(
            "bipartition covers {} sites, state has {}",
            part.n_qubits(),
            s.n_qubits()
        )));
    }
    let m = part.reshape(s.amplitudes())?;
    let svd = SVD::new(m, true, true);
    let u = svd.u.expect("requested U");
    let v_t = svd.v_t.expect("requested V^T");
    let mut order: Vec<usize> = (0..svd.singular_values.len()).collect();
    order.sort_by(|&i, &j| svd.singular_values[j].total_cmp(&svd.singular_values[i]));
    let coefficients: Vec<f64> = order.iter().map(|&i| svd.singular_values[i]).collect();
    let top = order[0];
    let phi_a = u.column(top).into_owned();
    // M = U Σ V†, so the B factor of the leading term is row `top` of V†.
    let phi_b = CVector::from_iterator(v_t.ncols(), v_t.row(top).iter().cloned());
    let leading_product = part.embed(&phi_a, &phi_b);
    Ok(Schmidt { coefficients, leading_product })
}

/// Descending Schmidt coefficients of `s` across `part`.
pub fn schmidt_coefficients(s: &Ket, part: &Bipartition) -> Result<Vec<f64>> {
    Ok(schmidt_decomposition(s, part)?.coefficients)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quantum::state::ghz_state;
    use crate::quantum::C64;
    use std::f64::consts::FRAC_1_SQRT_2;

    #[test]
    fn canonical_form_and_validation() {
        let p = Bipartition::new(4, &[2, 3, 4], &[1]).unwrap();
        assert_eq!(p.block_a(), &[1]);
        assert_eq!(p.to_string(), "{1}|{2,3,4}");
        assert!(Bipartition::new(4, &[1, 2], &[3]).is_err());
        assert!(Bipartition::new(4, &[1, 2], &[2, 3, 4]).is_err());
        assert!(Bipartition::new(4, &[], &[1, 2, 3, 4]).is_err());
        assert!(Bipartition::new(4, &[1, 5], &[2, 3, 4]).is_err());
    }

    #[test]
    fn enumeration_counts() {
        assert_eq!(Bipartition::all(4).len(), 7);
        assert_eq!(Bipartition::all(8).len(), 127);
        assert!(Bipartition::all(1).is_empty());
    }

    #[test]
    fn ghz_schmidt_one_vs_rest() {
        let p = Bipartition::new(4, &[1], &[2, 3, 4]).unwrap();
        let c = schmidt_coefficients(&ghz_state(4).unwrap(), &p).unwrap();
        assert_eq!(c.len(), 2);
        assert!((c[0] - FRAC_1_SQRT_2).abs() < 1e-12 && (c[1] - FRAC_1_SQRT_2).abs() < 1e-12);
    }

    #[test]
    fn ghz_schmidt_two_vs_two() {
        let p = Bipartition::new(4, &[1, 2], &[3, 4]).unwrap();
        let c = schmidt_coefficients(&ghz_state(4).unwrap(), &p).unwrap();
        let expected = [FRAC_1_SQRT_2, FRAC_1_SQRT_2, 0.0, 0.0];
        for (a, b) in c.iter().zip(expected) {
            assert!((a - b).abs() < 1e-12);
        }
        let sq: f64 = c.iter().map(|x| x * x).sum();
        assert!((sq - 1.0).abs() < 1e-9);
    }

    #[test]
    fn product_state_has_rank_one() {
        let zero4 = Ket::basis(4, 0).unwrap();
        for p in Bipartition::all(4) {
            let c = schmidt_coefficients(&zero4, &p).unwrap();
            assert!((c[0] - 1.0).abs() < 1e-12);
            assert!(c[1..].iter().all(|x| x.abs() < 1e-12));
        }
    }

    #[test]
    fn leading_product_overlap_is_top_coefficient_squared() {
        let v = CVector::from_fn(8, |i, _| C64::new((i as f64 * 0.37).sin(), (i as f64 * 0.91).cos()));
        let k = Ket::normalized(3, v).unwrap();
        let p = Bipartition::new(3, &[1, 3], &[2]).unwrap();
        let s = schmidt_decomposition(&k, &p).unwrap();
        let ov = k.amplitudes().dotc(&s.leading_product).norm_sqr();
        assert!((ov - s.coefficients[0].powi(2)).abs() < 1e-12);
    }

    #[test]
    fn wrong_size_bipartition() {
        let p = Bipartition::new(3, &[1], &[2, 3]).unwrap();
        assert!(schmidt_coefficients(&ghz_state(4).unwrap(), &p).is_err());
    }

    #[test]
    fn reshape_and_embed_round_trip() {
        let p = Bipartition::new(4, &[1, 3], &[2, 4]).unwrap();
        let a = CVector::from_fn(4, |i, _| C64::new(i as f64 + 1.0, 0.0));
        let b = CVector::from_fn(4, |i, _| C64::new(0.0, i as f64 - 1.5));
        let v = p.embed(&a, &b);
        let m = p.reshape(&v).unwrap();
        assert!((m - &a * b.transpose()).norm() < 1e-12);
    }
}
