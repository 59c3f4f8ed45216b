//! Bell-GHZ expressions and their local-hidden-variable bounds.
//!
//! A deterministic strategy fixes a ±1 value for every distinct local setting
//! at every site. Mixed strategies are convex combinations of these, so the
//! exhaustive maximum over deterministic ones is the LHV bound.

use std::collections::BTreeMap;
use std::fmt;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::paradox::{verify_concurrency, ParadoxSpec, Relation, Sign};
use crate::quantum::{expectation, DensityOperator, GlobalObservable, LocalKey, QuantumState};

/// Largest number of `(site, setting)` pairs enumerated.
pub const MAX_SETTINGS: usize = 24;

const CHUNK_BITS: u32 = 12;

#[derive(Debug, Clone, PartialEq)]
pub struct BellTerm {
    pub observable: GlobalObservable,
    pub coefficient: Sign,
}

/// `Σ_L c_L X^L` with `c_L = ±1`.
#[derive(Debug, Clone, PartialEq)]
pub struct BellExpression {
    pub n_qubits: usize,
    pub terms: Vec<BellTerm>,
}

impl BellExpression {
    pub fn new(n_qubits: usize, terms: Vec<BellTerm>) -> Result<Self> {
        if terms.is_empty() {
            return Err(Error::Invalid("a Bell expression needs at least one term".into()));
        }
        if let Some(t) = terms.iter().find(|t| t.observable.n_qubits() != n_qubits) {
            return Err(Error::DimensionMismatch { expected: n_qubits, actual: t.observable.n_qubits() });
        }
        Ok(Self { n_qubits, terms })
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Distinct settings used at each site (0-based), sorted.
    pub fn settings_per_site(&self) -> Vec<Vec<LocalKey>> {
        let mut out = vec![Vec::new(); self.n_qubits];
        for t in &self.terms {
            for (site, key) in t.observable.keys().into_iter().enumerate() {
                if let Some(key) = key {
                    out[site].push(key);
                }
            }
        }
        for s in &mut out {
            s.sort();
            s.dedup();
        }
        out
    }

    pub fn setting_count(&self) -> usize {
        self.settings_per_site().iter().map(Vec::len).sum()
    }

    pub fn is_traceless(&self) -> bool {
        self.terms.iter().all(|t| t.observable.is_traceless())
    }

    /// The relations `X^L = c_L` the expression is built from.
    pub fn as_paradox(&self, name: &str) -> Result<ParadoxSpec> {
        let relations = self.terms.iter().map(|t| Relation::new(t.observable.clone(), t.coefficient)).collect();
        ParadoxSpec::new(name, self.n_qubits, relations)
    }
}

impl fmt::Display for BellExpression {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, t) in self.terms.iter().enumerate() {
            let sign = if t.coefficient.is_minus() { "-" } else { "+" };
            if i == 0 && sign == "+" {
                write!(f, "[{}]", t.observable)?;
            } else if i == 0 {
                write!(f, "-[{}]", t.observable)?;
            } else {
                write!(f, " {sign} [{}]", t.observable)?;
            }
        }
        Ok(())
    }
}

/// Coefficients are the relation signs, so the concurrent state attains the
/// number of terms.
pub fn bell_from_paradox(spec: &ParadoxSpec) -> BellExpression {
    BellExpression {
        n_qubits: spec.n_qubits,
        terms: spec
            .relations
            .iter()
            .map(|r| BellTerm { observable: r.observable.clone(), coefficient: r.sign })
            .collect(),
    }
}

/// A ±1 value for every setting used at each site.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DeterministicStrategy {
    pub assignments: Vec<BTreeMap<LocalKey, i8>>,
}

impl DeterministicStrategy {
    /// Strategy number `index` in the enumeration order of `lhv_bound`: the
    /// `(site, setting)` pairs, sorted by site and then setting, are read as
    /// the bits of `index` from most to least significant, 0 meaning +1.
    pub fn from_index(settings: &[Vec<LocalKey>], index: u64) -> Self {
        let total: usize = settings.iter().map(Vec::len).sum();
        let mut j = 0;
        let assignments = settings
            .iter()
            .map(|keys| {
                keys.iter()
                    .map(|&k| {
                        let bit = index >> (total - 1 - j) & 1;
                        j += 1;
                        (k, if bit == 0 { 1 } else { -1 })
                    })
                    .collect()
            })
            .collect();
        Self { assignments }
    }

    /// Value of `expr` under this strategy; identity sites contribute +1.
    pub fn evaluate(&self, expr: &BellExpression) -> Result<i64> {
        let mut total = 0i64;
        for t in &expr.terms {
            let mut product = 1i64;
            for (site, key) in t.observable.keys().into_iter().enumerate() {
                let Some(key) = key else { continue };
                let v = self
                    .assignments
                    .get(site)
                    .and_then(|m| m.get(&key))
                    .ok_or_else(|| Error::Invalid(format!("strategy has no value for {key} at site {}", site + 1)))?;
                product *= i64::from(*v);
            }
            total += if t.coefficient.is_minus() { -product } else { product };
        }
        Ok(total)
    }
}

#[derive(Debug, Clone)]
pub struct LhvBoundResult {
    pub max_value: i64,
    pub min_value: i64,
    pub argmax: DeterministicStrategy,
    pub argmin: DeterministicStrategy,
    pub strategies: u64,
}

#[derive(Debug, Clone, Copy)]
struct Extremes {
    max: (i64, u64),
    min: (i64, u64),
}

impl Extremes {
    fn merge(self, other: Extremes) -> Extremes {
        let pick_max = |a: (i64, u64), b: (i64, u64)| if b.0 > a.0 || (b.0 == a.0 && b.1 < a.1) { b } else { a };
        let pick_min = |a: (i64, u64), b: (i64, u64)| if b.0 < a.0 || (b.0 == a.0 && b.1 < a.1) { b } else { a };
        Extremes { max: pick_max(self.max, other.max), min: pick_min(self.min, other.min) }
    }
}

/// Exhaustive maximum and minimum over all deterministic strategies.
/// Ties resolve to the lowest strategy index, whatever the thread count.
pub fn lhv_bound(expr: &BellExpression) -> Result<LhvBoundResult> {
    let settings = expr.settings_per_site();
    let total: usize = settings.iter().map(Vec::len).sum();
    if total > MAX_SETTINGS {
        return Err(Error::TooLarge { settings: total, limit: MAX_SETTINGS });
    }
    let mut bit_of = BTreeMap::new();
    for (site, keys) in settings.iter().enumerate() {
        for &k in keys {
            let j = bit_of.len();
            bit_of.insert((site, k), total - 1 - j);
        }
    }
    let terms: Vec<(u64, i64)> = expr
        .terms
        .iter()
        .map(|t| {
            let mask = t
                .observable
                .keys()
                .into_iter()
                .enumerate()
                .filter_map(|(site, key)| key.map(|k| 1u64 << bit_of[&(site, k)]))
                .fold(0, |a, b| a ^ b);
            (mask, if t.coefficient.is_minus() { -1 } else { 1 })
        })
        .collect();
    let value = |m: u64| -> i64 {
        terms
            .iter()
            .map(|&(mask, c)| if (m & mask).count_ones().is_multiple_of(2) { c } else { -c })
            .sum()
    };

    let count = 1u64 << total;
    let chunk = 1u64 << CHUNK_BITS;
    let chunks = count.div_ceil(chunk);
    let ext = (0..chunks)
        .into_par_iter()
        .map(|c| {
            let start = c * chunk;
            let end = (start + chunk).min(count);
            let v0 = value(start);
            let mut e = Extremes { max: (v0, start), min: (v0, start) };
            for m in start + 1..end {
                let v = value(m);
                if v > e.max.0 {
                    e.max = (v, m);
                }
                if v < e.min.0 {
                    e.min = (v, m);
                }
            }
            e
        })
        .reduce_with(Extremes::merge)
        .expect("at least one strategy");

    Ok(LhvBoundResult {
        max_value: ext.max.0,
        min_value: ext.min.0,
        argmax: DeterministicStrategy::from_index(&settings, ext.max.1),
        argmin: DeterministicStrategy::from_index(&settings, ext.min.1),
        strategies: count,
    })
}

/// `Σ c_L ⟨X^L⟩`.
pub fn quantum_value<S: QuantumState + ?Sized>(expr: &BellExpression, s: &S) -> Result<f64> {
    expr.terms.iter().try_fold(0.0, |acc, t| {
        Ok(acc + t.coefficient.value() * expectation(&t.observable, s)?)
    })
}

/// Value on a common eigenstate of all `(X^L, c_L)`.
pub fn concurrent_value(expr: &BellExpression) -> Result<f64> {
    let witness = verify_concurrency(&expr.as_paradox("bell")?)?
        .witness_state
        .ok_or(Error::EmptyParadox)?;
    quantum_value(expr, &witness)
}

/// Smallest white-noise visibility at which the concurrent state violates the
/// LHV bound: `max_LHV / q`. Requires traceless terms.
pub fn threshold_visibility(expr: &BellExpression) -> Result<f64> {
    if let Some(t) = expr.terms.iter().find(|t| !t.observable.is_traceless()) {
        return Err(Error::UnsupportedExpression(format!(
            "term [{}] is not traceless; use affine_threshold_visibility",
            t.observable
        )));
    }
    Ok(lhv_bound(expr)?.max_value as f64 / concurrent_value(expr)?)
}

/// `(max_LHV − c₀)/(q − c₀)`, `c₀` the value on the maximally mixed state.
/// Agrees with `threshold_visibility` when every term is traceless.
pub fn affine_threshold_visibility(expr: &BellExpression) -> Result<f64> {
    let c0 = quantum_value(expr, &DensityOperator::maximally_mixed(expr.n_qubits)?)?;
    let q = concurrent_value(expr)?;
    if (q - c0).abs() < 1e-12 {
        return Err(Error::Domain("quantum value equals the white-noise offset".into()));
    }
    Ok((lhv_bound(expr)?.max_value as f64 - c0) / (q - c0))
}

/// `q / max_LHV`.
pub fn violation_factor(expr: &BellExpression) -> Result<f64> {
    let max = lhv_bound(expr)?.max_value;
    if max == 0 {
        return Err(Error::Domain("LHV bound is zero".into()));
    }
    Ok(concurrent_value(expr)? / max as f64)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::assets;
    use crate::quantum::{ghz_state, Ket};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha20Rng;

    fn single(labels: &str, sign: i8) -> BellExpression {
        bell_from_paradox(&ParadoxSpec::from_paulis("one", &[(labels, sign)]).unwrap())
    }

    #[test]
    fn four_qubit_expression_bounds() {
        let expr = bell_from_paradox(&assets::paper_4q());
        assert_eq!(expr.setting_count(), 12);
        let b = lhv_bound(&expr).unwrap();
        assert_eq!(b.strategies, 4096);
        assert_eq!((b.max_value, b.min_value), (4, -4));
        assert_eq!(b.argmax.evaluate(&expr).unwrap(), 4);
        assert_eq!(b.argmin.evaluate(&expr).unwrap(), -4);
        assert!((quantum_value(&expr, &ghz_state(4).unwrap()).unwrap() - 6.0).abs() < 1e-12);
        assert!((threshold_visibility(&expr).unwrap() - 2.0 / 3.0).abs() < 1e-12);
        assert!((violation_factor(&expr).unwrap() - 1.5).abs() < 1e-12);
    }

    #[test]
    fn four_qubit_expression_text() {
        let expr = bell_from_paradox(&assets::paper_4q());
        let minus = expr.terms.iter().filter(|t| t.coefficient.is_minus()).count();
        assert_eq!((expr.len(), minus), (6, 1));
        assert!(expr.terms[5].coefficient.is_minus());
    }

    #[test]
    fn single_term() {
        let expr = single("XXX", -1);
        assert!(expr.terms[0].coefficient.is_minus());
        assert_eq!(lhv_bound(&expr).unwrap().max_value, 1);
        assert!((threshold_visibility(&expr).unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn duplicated_terms_keep_threshold() {
        let mut expr = bell_from_paradox(&assets::paper_4q());
        let copy = expr.terms.clone();
        expr.terms.extend(copy);
        assert_eq!(lhv_bound(&expr).unwrap().max_value, 8);
        assert!((threshold_visibility(&expr).unwrap() - 2.0 / 3.0).abs() < 1e-12);
    }

    #[test]
    fn five_qubit_bound_matches_reversed_sites() {
        let expr = bell_from_paradox(&assets::load("table-s1-5q").unwrap().spec);
        let plus = expr.terms.iter().filter(|t| !t.coefficient.is_minus()).count();
        assert_eq!((plus, expr.len() - plus), (3, 1));
        let mut reversed = expr.clone();
        for t in &mut reversed.terms {
            t.observable.sites.reverse();
        }
        let a = lhv_bound(&expr).unwrap();
        let b = lhv_bound(&reversed).unwrap();
        assert_eq!((a.max_value, a.min_value), (b.max_value, b.min_value));
        assert_eq!(a.max_value, 2);
    }

    #[test]
    fn random_strategies_never_exceed_bound() {
        let expr = bell_from_paradox(&assets::paper_4q());
        let settings = expr.settings_per_site();
        let mut rng = ChaCha20Rng::seed_from_u64(11);
        for _ in 0..100_000 {
            let s = DeterministicStrategy::from_index(&settings, rng.random_range(0..4096));
            assert!(s.evaluate(&expr).unwrap().abs() <= 4);
        }
    }

    #[test]
    fn identity_terms_need_affine_formula() {
        let expr = bell_from_paradox(&ParadoxSpec::from_paulis("id", &[("II", 1), ("ZZ", 1)]).unwrap());
        assert!(matches!(threshold_visibility(&expr), Err(Error::UnsupportedExpression(_))));
        // bound 2, q = 2, c0 = 1.
        assert!((affine_threshold_visibility(&expr).unwrap() - 1.0).abs() < 1e-12);
        let four = bell_from_paradox(&assets::paper_4q());
        let a = affine_threshold_visibility(&four).unwrap();
        assert!((a - threshold_visibility(&four).unwrap()).abs() < 1e-12);
    }

    #[test]
    fn guard_rejects_large_spaces() {
        // 25 sites with one setting each.
        let term = BellTerm { observable: GlobalObservable::paulis(&"X".repeat(25)).unwrap(), coefficient: Sign::Plus };
        let expr = BellExpression::new(25, vec![term]).unwrap();
        assert!(matches!(lhv_bound(&expr), Err(Error::TooLarge { settings: 25, .. })));
    }

    #[test]
    fn maximally_mixed_gives_zero() {
        let expr = bell_from_paradox(&assets::paper_4q());
        let rho = DensityOperator::maximally_mixed(4).unwrap();
        assert!(quantum_value(&expr, &rho).unwrap().abs() < 1e-12);
        let noisy = DensityOperator::white_noise(&ghz_state(4).unwrap(), 0.723).unwrap();
        assert!((quantum_value(&expr, &noisy).unwrap() - 4.338).abs() < 1e-12);
        let zero = Ket::basis(4, 0).unwrap();
        assert!(quantum_value(&expr, &zero).unwrap().abs() <= 6.0);
    }
}
