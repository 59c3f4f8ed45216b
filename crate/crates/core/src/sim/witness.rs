//! Fidelity with GHZ₄ from five settings, using
//!
//! `|GHZ⟩⟨GHZ| = ½(|0000⟩⟨0000| + |1111⟩⟨1111|)
//!              + ⅛(X⊗⁴ + Y⊗⁴ − X(−π/4)⊗⁴ − X(π/4)⊗⁴)`
//!
//! and the witness `W = ½·I − |GHZ⟩⟨GHZ|`. A fidelity above ½ certifies
//! genuine four-partite entanglement.

use std::f64::consts::FRAC_PI_4;

use serde::Serialize;

use super::{CountsTable, Estimate};
use crate::error::{Error, Result};
use crate::quantum::{ghz_state, CMatrix, GlobalObservable, LocalObservable, Pauli, C64};

const N: usize = 4;

/// Settings in the order `witness_value` expects: Z, X, Y, X(−π/4), X(π/4),
/// each on all four sites.
pub fn witness_settings() -> [GlobalObservable; 5] {
    let all = |o| GlobalObservable::uniform(o, N);
    [
        all(LocalObservable::Pauli(Pauli::Z)),
        all(LocalObservable::Pauli(Pauli::X)),
        all(LocalObservable::Pauli(Pauli::Y)),
        all(LocalObservable::Phase(-FRAC_PI_4)),
        all(LocalObservable::Phase(FRAC_PI_4)),
    ]
}

/// Weights of the four correlation terms in the decomposition.
pub fn decomposition_terms() -> Vec<(GlobalObservable, f64)> {
    let s = witness_settings();
    vec![
        (s[1].clone(), 0.125),
        (s[2].clone(), 0.125),
        (s[3].clone(), -0.125),
        (s[4].clone(), -0.125),
    ]
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct WitnessResult {
    pub witness: Estimate,
    pub fidelity: Estimate,
    /// Fidelity above ½.
    pub exceeds_threshold: bool,
}

impl WitnessResult {
    /// Standard deviations by which the fidelity exceeds ½.
    pub fn sigma_distance(&self) -> f64 {
        self.fidelity.sigmas_from(0.5)
    }
}

pub fn witness_value(tables: &[CountsTable]) -> Result<WitnessResult> {
    let settings = witness_settings();
    if tables.len() != settings.len() {
        return Err(Error::SettingMismatch(format!("witness needs 5 tables, got {}", tables.len())));
    }
    for (i, (t, g)) in tables.iter().zip(&settings).enumerate() {
        if !t.setting.same_setting(g) {
            return Err(Error::SettingMismatch(format!("table {} is [{}], expected [{g}]", i + 1, t.setting)));
        }
    }

    let z = &tables[0];
    let nz = z.total();
    if nz == 0 {
        return Err(Error::UndefinedVisibility);
    }
    let k = z.counts[0] + z.counts[(1 << N) - 1];
    let (kf, nf) = (k as f64, nz as f64);
    let pop = kf / nf;
    let mut value = 0.5 * pop;
    let mut var = 0.25 * kf * (nf - kf) / (nf * nf * nf);

    for (t, (_, w)) in tables[1..].iter().zip(decomposition_terms()) {
        let e = super::correlation_estimate(t)?;
        value += w * e.value;
        var += w * w * e.sigma * e.sigma;
    }
    let sigma = var.sqrt();
    Ok(WitnessResult {
        witness: Estimate::new(0.5 - value, sigma),
        fidelity: Estimate::new(value, sigma),
        exceeds_threshold: value > 0.5,
    })
}

/// Max entrywise difference between `|GHZ⟩⟨GHZ|` and
/// `½(|0000⟩⟨0000| + |1111⟩⟨1111|) + Σ w·G` for the given terms.
pub fn decomposition_residual(terms: &[(GlobalObservable, f64)]) -> f64 {
    let g = ghz_state(N).expect("four qubits");
    let v = g.amplitudes();
    let target = v * v.adjoint();
    let dim = 1 << N;
    let mut rhs = CMatrix::zeros(dim, dim);
    rhs[(0, 0)] = C64::new(0.5, 0.0);
    rhs[(dim - 1, dim - 1)] = C64::new(0.5, 0.0);
    for (obs, w) in terms {
        rhs += obs.matrix().scale(*w);
    }
    (target - rhs).iter().map(|z| z.norm()).fold(0.0, f64::max)
}

pub fn decomposition_check() -> f64 {
    decomposition_residual(&decomposition_terms())
}
