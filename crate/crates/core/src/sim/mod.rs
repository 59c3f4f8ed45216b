//! Noisy photon-counting experiments: outcome distributions, white noise,
//! counts, and the estimators built on them.

mod counts;
mod estimators;
mod sampling;
mod witness;

use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::quantum::{CMatrix, GlobalObservable, QuantumState, C64};

pub use counts::{read_csv, write_csv, CountsTable};
pub use estimators::{
    bell_estimate, correlation_estimate, lr_fraction_test, parity_support, visibility_estimate, Estimate,
    FractionTest,
};
pub use sampling::{expected_counts, sample_counts, sample_counts_with, IntegrationMode};
pub use witness::{
    decomposition_check, decomposition_residual, decomposition_terms, witness_settings, witness_value, WitnessResult,
};

/// Per-setting visibilities measured for `X^I … X^VI`.
pub const EXPERIMENT_VISIBILITIES: [f64; 6] = [0.733, 0.730, 0.704, 0.711, 0.727, 0.733];
/// Fourfold coincidence rate.
pub const EXPERIMENT_RATE_HZ: f64 = 6.8;
/// Integration time per outcome configuration.
pub const EXPERIMENT_DURATION_S: f64 = 180.0;

/// White-noise visibility per setting; a single entry applies to all.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct NoiseModel {
    visibilities: Vec<f64>,
}

impl NoiseModel {
    pub fn uniform(v: f64) -> Result<Self> {
        Self::per_setting(vec![v])
    }

    pub fn per_setting(visibilities: Vec<f64>) -> Result<Self> {
        if visibilities.is_empty() {
            return Err(Error::Invalid("noise model needs at least one visibility".into()));
        }
        if let Some(v) = visibilities.iter().find(|v| !(0.0..=1.0).contains(*v)) {
            return Err(Error::Invalid(format!("visibility {v} outside [0, 1]")));
        }
        Ok(Self { visibilities })
    }

    pub fn visibility(&self, setting: usize) -> f64 {
        if self.visibilities.len() == 1 {
            self.visibilities[0]
        } else {
            self.visibilities[setting]
        }
    }

    pub fn visibilities(&self) -> &[f64] {
        &self.visibilities
    }

    fn check_len(&self, settings: usize) -> Result<()> {
        if self.visibilities.len() != 1 && self.visibilities.len() != settings {
            return Err(Error::Invalid(format!(
                "{} visibilities for {settings} settings",
                self.visibilities.len()
            )));
        }
        Ok(())
    }
}

/// Joint measurement basis: row `ε` is `⊗ ⟨e_{ε_k}|`.
fn measurement_basis(g: &GlobalObservable) -> Result<CMatrix> {
    let mut u = CMatrix::from_element(1, 1, C64::new(1.0, 0.0));
    for (site, o) in g.sites.iter().enumerate() {
        let [plus, minus] = o.eigenbasis().ok_or(Error::NoEigenbasis(site + 1))?;
        let local = CMatrix::from_fn(2, 2, |r, c| if r == 0 { plus[c].conj() } else { minus[c].conj() });
        u = u.kronecker(&local);
    }
    Ok(u)
}

/// `p(ε) = |⟨ε|s⟩|²` (or `⟨ε|ρ|ε⟩`) over joint eigenvectors of `g`.
pub fn ideal_distribution<S: QuantumState + ?Sized>(g: &GlobalObservable, s: &S) -> Result<Vec<f64>> {
    if g.n_qubits() != s.n_qubits() {
        return Err(Error::DimensionMismatch { expected: s.n_qubits(), actual: g.n_qubits() });
    }
    let u = measurement_basis(g)?;
    let mut p: Vec<f64> = s.rotated_populations(&u).into_iter().map(|x| x.max(0.0)).collect();
    let sum: f64 = p.iter().sum();
    for x in &mut p {
        *x /= sum;
    }
    Ok(p)
}

/// `V·p + (1 − V)/2^n`.
pub fn apply_noise(p: &[f64], v: f64) -> Result<Vec<f64>> {
    if !(0.0..=1.0).contains(&v) {
        return Err(Error::Invalid(format!("visibility {v} outside [0, 1]")));
    }
    let flat = (1.0 - v) / p.len() as f64;
    Ok(p.iter().map(|&x| v * x + flat).collect())
}

/// How counts are produced from probabilities.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum CountMode {
    /// Expected counts, rounded with the total preserved.
    Deterministic,
    /// Random counts; setting `i` uses stream `i` of the seeded generator.
    Sampled { seed: u64, integration: IntegrationMode },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CountModel {
    pub rate_hz: f64,
    pub duration_s: f64,
    pub mode: CountMode,
}

impl CountModel {
    pub fn deterministic(rate_hz: f64, duration_s: f64) -> Self {
        Self { rate_hz, duration_s, mode: CountMode::Deterministic }
    }

    pub fn sampled(rate_hz: f64, duration_s: f64, seed: u64, integration: IntegrationMode) -> Self {
        Self { rate_hz, duration_s, mode: CountMode::Sampled { seed, integration } }
    }

    /// 6.8 Hz for three minutes.
    pub fn experiment(mode: CountMode) -> Self {
        Self { rate_hz: EXPERIMENT_RATE_HZ, duration_s: EXPERIMENT_DURATION_S, mode }
    }

    pub fn counts(&self, setting: &GlobalObservable, p: &[f64], index: usize) -> Result<CountsTable> {
        match self.mode {
            CountMode::Deterministic => expected_counts(setting, p, self.rate_hz, self.duration_s),
            CountMode::Sampled { seed, integration } => {
                let mut rng = ChaCha20Rng::seed_from_u64(seed);
                rng.set_stream(index as u64);
                sample_counts_with(setting, p, self.rate_hz, self.duration_s, integration, &mut rng)
            }
        }
    }
}

/// One table per setting for `state` under white noise.
pub fn simulate_tables<S: QuantumState + ?Sized>(
    settings: &[GlobalObservable],
    state: &S,
    noise: &NoiseModel,
    model: &CountModel,
) -> Result<Vec<CountsTable>> {
    noise.check_len(settings.len())?;
    settings
        .iter()
        .enumerate()
        .map(|(i, g)| {
            let p = apply_noise(&ideal_distribution(g, state)?, noise.visibility(i))?;
            model.counts(g, &p, i)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::assets;
    use crate::lhv::bell_from_paradox;
    use crate::quantum::{ghz_state, DensityOperator, Ket, LocalObservable, Pauli};

    fn four_qubit_settings() -> Vec<GlobalObservable> {
        assets::paper_4q().relations.into_iter().map(|r| r.observable).collect()
    }

    #[test]
    fn ghz_supports_follow_signs() {
        let ghz = ghz_state(4).unwrap();
        let s = four_qubit_settings();
        let p1 = ideal_distribution(&s[0], &ghz).unwrap();
        let p6 = ideal_distribution(&s[5], &ghz).unwrap();
        for i in 0..16usize {
            let even = i.count_ones() % 2 == 0;
            assert!((p1[i] - if even { 0.125 } else { 0.0 }).abs() < 1e-12);
            assert!((p6[i] - if even { 0.0 } else { 0.125 }).abs() < 1e-12);
        }
        for g in &s[..5] {
            let p = ideal_distribution(g, &ghz).unwrap();
            assert_eq!(p.iter().map(|&x| x > 1e-12).collect::<Vec<_>>(), parity_support(4, 1.0));
        }
    }

    #[test]
    fn x_on_zero_is_uniform() {
        let p = ideal_distribution(&GlobalObservable::paulis("XXXX").unwrap(), &Ket::basis(4, 0).unwrap()).unwrap();
        assert!(p.iter().all(|&x| (x - 1.0 / 16.0).abs() < 1e-12));
    }

    #[test]
    fn identity_site_has_no_basis() {
        let g = GlobalObservable::new(vec![LocalObservable::Pauli(Pauli::X), LocalObservable::Pauli(Pauli::I)]);
        assert!(matches!(ideal_distribution(&g, &ghz_state(2).unwrap()), Err(Error::NoEigenbasis(2))));
    }

    #[test]
    fn noise_bars() {
        let p = apply_noise(&ideal_distribution(&four_qubit_settings()[0], &ghz_state(4).unwrap()).unwrap(), 0.733).unwrap();
        assert!((p[0] - 0.1083125).abs() < 1e-12);
        assert!((p[1] - 0.0166875).abs() < 1e-12);
        assert_eq!(apply_noise(&p, 1.0).unwrap(), p);
        assert!(apply_noise(&p, 0.0).unwrap().iter().all(|&x| (x - 0.0625).abs() < 1e-15));
        assert!(apply_noise(&p, 1.5).is_err());
    }

    #[test]
    fn white_noise_state_matches_noisy_distribution() {
        let ghz = ghz_state(4).unwrap();
        let rho = DensityOperator::white_noise(&ghz, 0.6).unwrap();
        for g in four_qubit_settings() {
            let a = ideal_distribution(&g, &rho).unwrap();
            let b = apply_noise(&ideal_distribution(&g, &ghz).unwrap(), 0.6).unwrap();
            assert!(a.iter().zip(&b).all(|(x, y)| (x - y).abs() < 1e-12));
        }
    }

    #[test]
    fn ideal_counts_give_six() {
        let expr = bell_from_paradox(&assets::paper_4q());
        let tables = simulate_tables(
            &four_qubit_settings(),
            &ghz_state(4).unwrap(),
            &NoiseModel::uniform(1.0).unwrap(),
            &CountModel::experiment(CountMode::Deterministic),
        )
        .unwrap();
        let b = bell_estimate(&expr, &tables).unwrap();
        assert_eq!((b.value, b.sigma), (6.0, 0.0));
        let f = lr_fraction_test(&expr, &tables).unwrap();
        assert_eq!((f.allowed_max.value, f.observed.value), (0.0, 1.0));
    }

    #[test]
    fn noise_model_validation() {
        assert!(NoiseModel::uniform(-0.1).is_err());
        assert!(NoiseModel::per_setting(vec![]).is_err());
        let m = NoiseModel::per_setting(vec![0.5, 0.6]).unwrap();
        assert!(m.check_len(6).is_err());
    }
}
