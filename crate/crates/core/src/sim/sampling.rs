//! Photon-counting models. Generator: ChaCha20 (`rand_chacha`), seeded with
//! `seed_from_u64`, one stream per setting.

use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;
use rand_distr::{Binomial, Distribution, Poisson};
use serde::Serialize;

use super::CountsTable;
use crate::error::{Error, Result};
use crate::quantum::GlobalObservable;

/// How `duration_s` is spent on one setting.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum IntegrationMode {
    /// All outcomes are recorded together for `duration_s`: the total is
    /// `Poisson(rate·duration)`, split multinomially.
    PerSetting,
    /// Each outcome configuration is integrated for `duration_s` on its own:
    /// independent `Poisson(rate·duration·p(ε))` per outcome.
    #[default]
    PerOutcome,
}

fn check_rate(rate_hz: f64, duration_s: f64) -> Result<f64> {
    if !(rate_hz > 0.0 && duration_s > 0.0 && (rate_hz * duration_s).is_finite()) {
        return Err(Error::Invalid(format!("rate {rate_hz} Hz and duration {duration_s} s must be positive")));
    }
    Ok(rate_hz * duration_s)
}

fn check_probabilities(p: &[f64], n_qubits: usize) -> Result<()> {
    if p.len() != 1 << n_qubits {
        return Err(Error::DimensionMismatch { expected: 1 << n_qubits, actual: p.len() });
    }
    let sum: f64 = p.iter().sum();
    if p.iter().any(|&x| x.is_nan() || x < 0.0) || (sum - 1.0).abs() > 1e-9 {
        return Err(Error::Invalid(format!("not a probability vector (sum {sum})")));
    }
    Ok(())
}

fn poisson(mean: f64, rng: &mut ChaCha20Rng) -> Result<u64> {
    if mean <= 0.0 {
        return Ok(0);
    }
    let d = Poisson::new(mean).map_err(|e| Error::Invalid(format!("Poisson mean {mean}: {e}")))?;
    Ok(d.sample(rng) as u64)
}

/// Multinomial split of `total` by conditional binomials.
fn multinomial(total: u64, p: &[f64], rng: &mut ChaCha20Rng) -> Result<Vec<u64>> {
    let mut out = vec![0; p.len()];
    let mut left = total;
    let mut mass = 1.0;
    for (i, &pi) in p.iter().enumerate() {
        if left == 0 {
            break;
        }
        if i == p.len() - 1 {
            out[i] = left;
            break;
        }
        let q = if mass > 0.0 { (pi / mass).clamp(0.0, 1.0) } else { 0.0 };
        let k = Binomial::new(left, q)
            .map_err(|e| Error::Invalid(format!("binomial({left}, {q}): {e}")))?
            .sample(rng);
        out[i] = k;
        left -= k;
        mass -= pi;
    }
    Ok(out)
}

/// Draws counts from `p` with the supplied generator.
pub fn sample_counts_with(
    setting: &GlobalObservable,
    p: &[f64],
    rate_hz: f64,
    duration_s: f64,
    mode: IntegrationMode,
    rng: &mut ChaCha20Rng,
) -> Result<CountsTable> {
    let mean = check_rate(rate_hz, duration_s)?;
    check_probabilities(p, setting.n_qubits())?;
    let counts = match mode {
        IntegrationMode::PerSetting => multinomial(poisson(mean, rng)?, p, rng)?,
        IntegrationMode::PerOutcome => p.iter().map(|&pi| poisson(mean * pi, rng)).collect::<Result<_>>()?,
    };
    CountsTable::new(setting.clone(), counts, duration_s, rate_hz)
}

/// Draws counts from `p`; identical seeds give identical tables.
pub fn sample_counts(
    setting: &GlobalObservable,
    p: &[f64],
    rate_hz: f64,
    duration_s: f64,
    mode: IntegrationMode,
    seed: u64,
) -> Result<CountsTable> {
    sample_counts_with(setting, p, rate_hz, duration_s, mode, &mut ChaCha20Rng::seed_from_u64(seed))
}

/// Counts equal to the expected values, rounded by largest remainder so the
/// total is `round(rate·duration)`. Ties go to the lower outcome index.
pub fn expected_counts(setting: &GlobalObservable, p: &[f64], rate_hz: f64, duration_s: f64) -> Result<CountsTable> {
    let total = check_rate(rate_hz, duration_s)?.round();
    check_probabilities(p, setting.n_qubits())?;
    let exact: Vec<f64> = p.iter().map(|&x| x * total).collect();
    let mut counts: Vec<u64> = exact.iter().map(|x| x.floor() as u64).collect();
    let assigned: u64 = counts.iter().sum();
    let mut order: Vec<usize> = (0..p.len()).collect();
    order.sort_by(|&a, &b| {
        let ra = exact[a] - exact[a].floor();
        let rb = exact[b] - exact[b].floor();
        rb.total_cmp(&ra).then(a.cmp(&b))
    });
    for &i in order.iter().take((total as u64).saturating_sub(assigned) as usize) {
        counts[i] += 1;
    }
    CountsTable::new(setting.clone(), counts, duration_s, rate_hz)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn setting() -> GlobalObservable {
        GlobalObservable::paulis("XXXX").unwrap()
    }

    fn noisy_ghz(v: f64) -> Vec<f64> {
        (0..16)
            .map(|i: u32| if i.count_ones().is_multiple_of(2) { v / 8.0 + (1.0 - v) / 16.0 } else { (1.0 - v) / 16.0 })
            .collect()
    }

    #[test]
    fn point_mass_lands_in_outcome_zero() {
        let mut p = vec![0.0; 16];
        p[0] = 1.0;
        for mode in [IntegrationMode::PerSetting, IntegrationMode::PerOutcome] {
            let t = sample_counts(&setting(), &p, 6.8, 180.0, mode, 3).unwrap();
            assert_eq!(t.counts[0], t.total());
            assert!(t.total() > 1000);
        }
    }

    #[test]
    fn fixed_seed_is_reproducible() {
        let p = noisy_ghz(0.733);
        for mode in [IntegrationMode::PerSetting, IntegrationMode::PerOutcome] {
            let a = sample_counts(&setting(), &p, 6.8, 180.0, mode, 42).unwrap();
            let b = sample_counts(&setting(), &p, 6.8, 180.0, mode, 42).unwrap();
            let c = sample_counts(&setting(), &p, 6.8, 180.0, mode, 43).unwrap();
            assert_eq!(a, b);
            assert_ne!(a, c);
        }
    }

    #[test]
    fn expected_counts_preserve_total() {
        let t = expected_counts(&setting(), &noisy_ghz(0.733), 6.8, 180.0).unwrap();
        assert_eq!(t.total(), 1224);
        // 1224·(1+V)/16 = 132.57 on the even outcomes, 20.43 on the odd ones.
        for (i, &c) in t.counts.iter().enumerate() {
            let even = (i as u32).count_ones().is_multiple_of(2);
            assert_eq!(c, if even { 133 } else { 20 });
        }
    }

    #[test]
    fn rejects_bad_inputs() {
        let p = noisy_ghz(0.5);
        assert!(sample_counts(&setting(), &p, 0.0, 180.0, IntegrationMode::PerSetting, 0).is_err());
        assert!(sample_counts(&setting(), &p[..8], 6.8, 180.0, IntegrationMode::PerSetting, 0).is_err());
        let mut bad = p.clone();
        bad[0] += 0.5;
        assert!(expected_counts(&setting(), &bad, 6.8, 180.0).is_err());
    }
}
