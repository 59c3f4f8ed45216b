//! Dichotomic single-site observables and their tensor products.
//!
//! The phase family is `X(θ) = e^{iθ}|0⟩⟨1| + e^{-iθ}|1⟩⟨0|`, so that
//! `X(0) = X`, `X(-π/2) = Y`, `X(-π/4) = (X+Y)/√2` and `X(π/4) = (X-Y)/√2`.
//! Its ±1 eigenvectors are `(±e^{iθ}|0⟩ + |1⟩)/√2`.

use std::f64::consts::{FRAC_1_SQRT_2, PI};
use std::fmt;
use std::str::FromStr;

use nalgebra::{DMatrix, Matrix2, Vector2};
use serde::{Deserialize, Serialize};

use super::{CMatrix, CVector, C64};
use crate::error::{Error, Result};

/// Angles closer than this are treated as the same setting.
const ANGLE_RESOLUTION: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Pauli {
    I,
    X,
    Y,
    Z,
}

impl Pauli {
    pub fn label(self) -> &'static str {
        match self {
            Pauli::I => "I",
            Pauli::X => "X",
            Pauli::Y => "Y",
            Pauli::Z => "Z",
        }
    }
}

impl FromStr for Pauli {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "I" | "i" => Ok(Pauli::I),
            "X" | "x" => Ok(Pauli::X),
            "Y" | "y" => Ok(Pauli::Y),
            "Z" | "z" => Ok(Pauli::Z),
            other => Err(Error::Parse(format!("unknown Pauli label {other:?}"))),
        }
    }
}

/// Wraps an angle into `(-π, π]`.
pub fn canonical_angle(theta: f64) -> f64 {
    let two_pi = 2.0 * PI;
    let mut t = theta.rem_euclid(two_pi);
    if t > PI {
        t -= two_pi;
    }
    if t <= -PI + ANGLE_RESOLUTION {
        t += two_pi;
    }
    t
}

/// A single-site observable.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum LocalObservable {
    Phase(f64),
    Pauli(Pauli),
}

/// Identity of a non-trivial local observable, shared by every description
/// of the same operator: `Pauli(X)` and `Phase(0)` map to the same key, as do
/// `Pauli(Y)` and `Phase(-π/2)`, and phases differing by 2π.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum LocalKey {
    /// Pauli Z.
    Z,
    /// Phase observable with its canonical angle in units of `ANGLE_RESOLUTION`.
    Phase(i64),
}

impl LocalKey {
    pub fn angle(self) -> Option<f64> {
        match self {
            LocalKey::Z => None,
            LocalKey::Phase(q) => Some(q as f64 * ANGLE_RESOLUTION),
        }
    }

    pub fn observable(self) -> LocalObservable {
        match self {
            LocalKey::Z => LocalObservable::Pauli(Pauli::Z),
            LocalKey::Phase(q) => LocalObservable::Phase(q as f64 * ANGLE_RESOLUTION),
        }
    }
}

impl fmt::Display for LocalKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LocalKey::Z => write!(f, "Z"),
            LocalKey::Phase(q) => write!(f, "X({:.6})", *q as f64 * ANGLE_RESOLUTION),
        }
    }
}

impl LocalObservable {
    pub fn phase(theta: f64) -> Self {
        LocalObservable::Phase(theta)
    }

    pub const fn pauli(p: Pauli) -> Self {
        LocalObservable::Pauli(p)
    }

    pub fn is_identity(&self) -> bool {
        matches!(self, LocalObservable::Pauli(Pauli::I))
    }

    /// Canonical identity, or `None` for the identity operator.
    pub fn key(&self) -> Option<LocalKey> {
        let theta = match *self {
            LocalObservable::Pauli(Pauli::I) => return None,
            LocalObservable::Pauli(Pauli::Z) => return Some(LocalKey::Z),
            LocalObservable::Pauli(Pauli::X) => 0.0,
            LocalObservable::Pauli(Pauli::Y) => -PI / 2.0,
            LocalObservable::Phase(t) => t,
        };
        let q = (canonical_angle(theta) / ANGLE_RESOLUTION).round() as i64;
        Some(LocalKey::Phase(q))
    }

    /// The 2×2 matrix in the {|0⟩, |1⟩} basis.
    pub fn matrix(&self) -> Matrix2<C64> {
        let zero = C64::new(0.0, 0.0);
        let one = C64::new(1.0, 0.0);
        match *self {
            LocalObservable::Phase(theta) => {
                Matrix2::new(zero, C64::from_polar(1.0, theta), C64::from_polar(1.0, -theta), zero)
            }
            LocalObservable::Pauli(Pauli::I) => Matrix2::new(one, zero, zero, one),
            LocalObservable::Pauli(Pauli::X) => Matrix2::new(zero, one, one, zero),
            LocalObservable::Pauli(Pauli::Y) => {
                Matrix2::new(zero, C64::new(0.0, -1.0), C64::new(0.0, 1.0), zero)
            }
            LocalObservable::Pauli(Pauli::Z) => Matrix2::new(one, zero, zero, -one),
        }
    }

    /// Eigenvectors for eigenvalues +1 and -1, in that order.
    pub fn eigenbasis(&self) -> Option<[Vector2<C64>; 2]> {
        let h = C64::new(FRAC_1_SQRT_2, 0.0);
        let theta = match *self {
            LocalObservable::Pauli(Pauli::I) => return None,
            LocalObservable::Pauli(Pauli::Z) => {
                return Some([
                    Vector2::new(C64::new(1.0, 0.0), C64::new(0.0, 0.0)),
                    Vector2::new(C64::new(0.0, 0.0), C64::new(1.0, 0.0)),
                ])
            }
            LocalObservable::Pauli(Pauli::X) => 0.0,
            LocalObservable::Pauli(Pauli::Y) => -PI / 2.0,
            LocalObservable::Phase(t) => t,
        };
        let e = C64::from_polar(FRAC_1_SQRT_2, theta);
        Some([Vector2::new(e, h), Vector2::new(-e, h)])
    }
}

impl fmt::Display for LocalObservable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LocalObservable::Pauli(p) => f.write_str(p.label()),
            LocalObservable::Phase(theta) => write!(f, "P({theta})"),
        }
    }
}

impl FromStr for LocalObservable {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if let Some(inner) = s.strip_prefix("P(").and_then(|r| r.strip_suffix(')')) {
            let theta: f64 = inner
                .trim()
                .parse()
                .map_err(|_| Error::Parse(format!("bad phase angle in {s:?}")))?;
            return Ok(LocalObservable::Phase(theta));
        }
        s.parse::<Pauli>().map(LocalObservable::Pauli)
    }
}

/// Ordered tensor product of local observables; site 1 first.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GlobalObservable {
    pub sites: Vec<LocalObservable>,
}

impl GlobalObservable {
    pub fn new(sites: Vec<LocalObservable>) -> Self {
        Self { sites }
    }

    /// `op ⊗ op ⊗ … ⊗ op` on `n` sites.
    pub fn uniform(op: LocalObservable, n: usize) -> Self {
        Self { sites: vec![op; n] }
    }

    pub fn phases(thetas: &[f64]) -> Self {
        Self { sites: thetas.iter().map(|&t| LocalObservable::Phase(t)).collect() }
    }

    pub fn paulis(labels: &str) -> Result<Self> {
        let sites = labels
            .chars()
            .filter(|c| !c.is_whitespace())
            .map(|c| c.to_string().parse::<Pauli>().map(LocalObservable::Pauli))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self { sites })
    }

    pub fn n_qubits(&self) -> usize {
        self.sites.len()
    }

    pub fn keys(&self) -> Vec<Option<LocalKey>> {
        self.sites.iter().map(LocalObservable::key).collect()
    }

    /// Same operator site by site, up to the canonical identity of each site.
    pub fn same_setting(&self, other: &GlobalObservable) -> bool {
        self.n_qubits() == other.n_qubits() && self.keys() == other.keys()
    }

    pub fn is_traceless(&self) -> bool {
        self.sites.iter().any(|s| !s.is_identity())
    }

    /// Dense `2^n × 2^n` matrix, site 1 as the most significant factor.
    pub fn matrix(&self) -> CMatrix {
        let mut out = DMatrix::from_element(1, 1, C64::new(1.0, 0.0));
        for site in &self.sites {
            let m = site.matrix();
            let local = DMatrix::from_fn(2, 2, |r, c| m[(r, c)]);
            out = out.kronecker(&local);
        }
        out
    }

    /// `G·v` by applying each local factor in place.
    pub fn apply(&self, v: &CVector) -> Result<CVector> {
        let n = self.n_qubits();
        let dim = 1usize << n;
        if v.len() != dim {
            return Err(Error::DimensionMismatch { expected: dim, actual: v.len() });
        }
        let mut out = v.clone();
        for (site, op) in self.sites.iter().enumerate() {
            if op.is_identity() {
                continue;
            }
            apply_local(&mut out, n, site, &op.matrix());
        }
        Ok(out)
    }
}

impl fmt::Display for GlobalObservable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, s) in self.sites.iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            write!(f, "{s}")?;
        }
        Ok(())
    }
}

impl FromStr for GlobalObservable {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let sites = s
            .split_whitespace()
            .map(str::parse)
            .collect::<Result<Vec<LocalObservable>>>()?;
        if sites.is_empty() {
            return Err(Error::Parse("empty setting".into()));
        }
        Ok(Self { sites })
    }
}

/// Applies a 2×2 operator to `site` (0-based, site 0 = most significant bit).
pub(crate) fn apply_local(v: &mut CVector, n: usize, site: usize, m: &Matrix2<C64>) {
    let stride = 1usize << (n - 1 - site);
    let dim = v.len();
    let mut base = 0;
    while base < dim {
        for i in base..base + stride {
            let a0 = v[i];
            let a1 = v[i + stride];
            v[i] = m[(0, 0)] * a0 + m[(0, 1)] * a1;
            v[i + stride] = m[(1, 0)] * a0 + m[(1, 1)] * a1;
        }
        base += 2 * stride;
    }
}
