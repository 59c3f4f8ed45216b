//! Estimators with first-order Poisson error propagation. For two disjoint
//! count groups `a`, `b` with `N = a + b`:
//!
//! * `(a − b)/N` has variance `4ab/N³`;
//! * the fraction `a/N` has variance `ab/N³`.

use serde::Serialize;

use super::CountsTable;
use crate::error::{Error, Result};
use crate::lhv::BellExpression;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Estimate {
    pub value: f64,
    pub sigma: f64,
}

impl Estimate {
    pub fn new(value: f64, sigma: f64) -> Self {
        Self { value, sigma }
    }

    /// `(value − reference)/sigma`.
    pub fn sigmas_from(&self, reference: f64) -> f64 {
        (self.value - reference) / self.sigma
    }
}

fn contrast(a: u64, b: u64) -> Result<Estimate> {
    let n = (a + b) as f64;
    if n == 0.0 {
        return Err(Error::UndefinedVisibility);
    }
    let (a, b) = (a as f64, b as f64);
    Ok(Estimate::new((a - b) / n, (4.0 * a * b / (n * n * n)).sqrt()))
}

fn fraction(k: u64, total: u64) -> Result<Estimate> {
    if total == 0 {
        return Err(Error::UndefinedVisibility);
    }
    let (k, n) = (k as f64, total as f64);
    Ok(Estimate::new(k / n, (k * (n - k) / (n * n * n)).sqrt()))
}

/// Outcomes whose eigenvalue product `Π ε` equals `sign`; the ideal support
/// of an eigen-relation with that sign.
pub fn parity_support(n_qubits: usize, sign: f64) -> Vec<bool> {
    let want_odd = sign < 0.0;
    (0..1usize << n_qubits).map(|i| (i.count_ones() % 2 == 1) == want_odd).collect()
}

/// `(N_max − N_min)/(N_max + N_min)`, `N_max` summed over `tall_set`.
pub fn visibility_estimate(c: &CountsTable, tall_set: &[bool]) -> Result<Estimate> {
    let dim = c.counts.len();
    if tall_set.len() != dim {
        return Err(Error::DimensionMismatch { expected: dim, actual: tall_set.len() });
    }
    let tall = tall_set.iter().filter(|&&t| t).count();
    if tall != dim / 2 {
        return Err(Error::Invalid(format!("tall set has {tall} outcomes, expected {}", dim / 2)));
    }
    let n_max = c.sum_where(|i| tall_set[i]);
    contrast(n_max, c.total() - n_max)
}

/// `Σ_ε (Π ε)·counts(ε) / total`.
pub fn correlation_estimate(c: &CountsTable) -> Result<Estimate> {
    let even = c.sum_where(|i| i.count_ones() % 2 == 0);
    contrast(even, c.total() - even)
}

fn check_settings(expr: &BellExpression, tables: &[CountsTable]) -> Result<()> {
    if tables.len() != expr.len() {
        return Err(Error::SettingMismatch(format!("{} tables for {} terms", tables.len(), expr.len())));
    }
    for (i, (t, term)) in tables.iter().zip(&expr.terms).enumerate() {
        if !t.setting.same_setting(&term.observable) {
            return Err(Error::SettingMismatch(format!(
                "table {} is [{}], term {} is [{}]",
                i + 1,
                t.setting,
                i + 1,
                term.observable
            )));
        }
    }
    Ok(())
}

/// `Σ c_L E_L` with `σ = √(Σ σ_L²)`. Tables must follow the term order.
pub fn bell_estimate(expr: &BellExpression, tables: &[CountsTable]) -> Result<Estimate> {
    check_settings(expr, tables)?;
    let mut value = 0.0;
    let mut var = 0.0;
    for (t, term) in tables.iter().zip(&expr.terms) {
        let e = correlation_estimate(t)?;
        value += term.coefficient.value() * e.value;
        var += e.sigma * e.sigma;
    }
    Ok(Estimate::new(value, var.sqrt()))
}

/// Local realism fixes the last relation's value from the others, so any
/// event reaching its ideal support must come from a spurious event in one
/// of the other settings.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FractionTest {
    /// Sum over the other settings of the fraction outside their ideal support.
    pub allowed_max: Estimate,
    /// Fraction of last-setting counts inside its ideal support.
    pub observed: Estimate,
    /// `(observed − allowed)/√(σ²_obs + σ²_allowed)`.
    pub sigma_distance: f64,
}

impl FractionTest {
    pub fn violated(&self) -> bool {
        self.observed.value > self.allowed_max.value
    }
}

pub fn lr_fraction_test(expr: &BellExpression, tables: &[CountsTable]) -> Result<FractionTest> {
    check_settings(expr, tables)?;
    let Some((last, rest)) = tables.split_last() else {
        return Err(Error::Invalid("fraction test needs at least one table".into()));
    };
    let support = |t: &CountsTable, sign: f64| parity_support(t.n_qubits(), sign);
    let mut allowed = 0.0;
    let mut var = 0.0;
    for (t, term) in rest.iter().zip(&expr.terms) {
        let s = support(t, term.coefficient.value());
        let outside = t.sum_where(|i| !s[i]);
        let f = fraction(outside, t.total())?;
        allowed += f.value;
        var += f.sigma * f.sigma;
    }
    let s = support(last, expr.terms[expr.len() - 1].coefficient.value());
    let observed = fraction(last.sum_where(|i| s[i]), last.total())?;
    let allowed_max = Estimate::new(allowed, var.sqrt());
    let sigma_distance = (observed.value - allowed) / (observed.sigma.powi(2) + var).sqrt();
    Ok(FractionTest { allowed_max, observed, sigma_distance })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::assets;
    use crate::lhv::bell_from_paradox;
    use crate::quantum::GlobalObservable;

    fn table(counts: Vec<u64>) -> CountsTable {
        CountsTable::new(GlobalObservable::paulis("XXXX").unwrap(), counts, 180.0, 6.8).unwrap()
    }

    #[test]
    fn visibility_extremes() {
        let even = parity_support(4, 1.0);
        let ideal = table((0..16u32).map(|i| if i.count_ones() % 2 == 0 { 10 } else { 0 }).collect());
        assert_eq!(visibility_estimate(&ideal, &even).unwrap(), Estimate::new(1.0, 0.0));
        let flat = table(vec![7; 16]);
        assert_eq!(visibility_estimate(&flat, &even).unwrap().value, 0.0);
        assert!(matches!(visibility_estimate(&table(vec![0; 16]), &even), Err(Error::UndefinedVisibility)));
        assert!(visibility_estimate(&flat, &[true; 16]).is_err());
    }

    #[test]
    fn contrast_sigma_matches_finite_difference() {
        let (a, b) = (900.0f64, 300.0f64);
        let f = |a: f64, b: f64| (a - b) / (a + b);
        let h = 1e-3;
        let da = (f(a + h, b) - f(a - h, b)) / (2.0 * h);
        let db = (f(a, b + h) - f(a, b - h)) / (2.0 * h);
        let sigma = (da * da * a + db * db * b).sqrt();
        assert!((contrast(900, 300).unwrap().sigma - sigma).abs() < 1e-9);
    }

    #[test]
    fn correlation_parity() {
        let odd = table((0..16u32).map(|i| if i.count_ones() % 2 == 1 { 5 } else { 0 }).collect());
        assert_eq!(correlation_estimate(&odd).unwrap().value, -1.0);
    }

    #[test]
    fn bell_rejects_wrong_settings() {
        let expr = bell_from_paradox(&assets::paper_4q());
        let tables = vec![table(vec![1; 16]); 6];
        assert!(matches!(bell_estimate(&expr, &tables), Err(Error::SettingMismatch(_))));
        assert!(matches!(bell_estimate(&expr, &tables[..2]), Err(Error::SettingMismatch(_))));
    }
}
