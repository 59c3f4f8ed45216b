use std::f64::consts::FRAC_1_SQRT_2;

use nalgebra::SymmetricEigen;

use super::observable::GlobalObservable;
use super::{CMatrix, CVector, C64};
use crate::error::{Error, Result};

pub const MAX_QUBITS: usize = 10;

const STATE_TOL: f64 = 1e-9;

fn check_qubits(n: usize) -> Result<usize> {
    if n == 0 || n > MAX_QUBITS {
        return Err(Error::Size(format!("n_qubits must be in 1..={MAX_QUBITS}, got {n}")));
    }
    Ok(1usize << n)
}

/// Normalized pure state on `n` qubits. Index bit convention: qubit 1 is the
/// most significant bit, `|H⟩ ≡ |0⟩`, `|V⟩ ≡ |1⟩`.
#[derive(Debug, Clone, PartialEq)]
pub struct Ket {
    n_qubits: usize,
    amplitudes: CVector,
}

impl Ket {
    /// Fails unless the vector has length `2^n` and unit norm.
    pub fn new(n_qubits: usize, amplitudes: CVector) -> Result<Self> {
        let dim = check_qubits(n_qubits)?;
        if amplitudes.len() != dim {
            return Err(Error::DimensionMismatch { expected: dim, actual: amplitudes.len() });
        }
        let norm2 = amplitudes.norm_squared();
        if (norm2 - 1.0).abs() > STATE_TOL {
            return Err(Error::Numerical(format!("squared norm {norm2} is not 1")));
        }
        Ok(Self { n_qubits, amplitudes })
    }

    /// Rescales to unit norm. Fails on the zero vector.
    pub fn normalized(n_qubits: usize, amplitudes: CVector) -> Result<Self> {
        let dim = check_qubits(n_qubits)?;
        if amplitudes.len() != dim {
            return Err(Error::DimensionMismatch { expected: dim, actual: amplitudes.len() });
        }
        let norm = amplitudes.norm();
        if norm < 1e-300 {
            return Err(Error::Numerical("cannot normalize the zero vector".into()));
        }
        Ok(Self { n_qubits, amplitudes: amplitudes.unscale(norm) })
    }

    /// Computational basis state `|index⟩`.
    pub fn basis(n_qubits: usize, index: usize) -> Result<Self> {
        let dim = check_qubits(n_qubits)?;
        if index >= dim {
            return Err(Error::Size(format!("basis index {index} out of range for {n_qubits} qubits")));
        }
        let mut v = CVector::zeros(dim);
        v[index] = C64::new(1.0, 0.0);
        Ok(Self { n_qubits, amplitudes: v })
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn amplitudes(&self) -> &CVector {
        &self.amplitudes
    }

    pub fn into_amplitudes(self) -> CVector {
        self.amplitudes
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    /// `|⟨self|other⟩|²`.
    pub fn overlap(&self, other: &Ket) -> f64 {
        self.amplitudes.dotc(&other.amplitudes).norm_sqr()
    }

    /// Multiplies by a global phase so the largest amplitude is real and positive.
    pub fn with_canonical_phase(mut self) -> Self {
        let (idx, _) = self
            .amplitudes
            .iter()
            .enumerate()
            .fold((0, -1.0), |best, (i, a)| if a.norm() > best.1 + 1e-12 { (i, a.norm()) } else { best });
        let a = self.amplitudes[idx];
        if a.norm() > 0.0 {
            let phase = a.conj() / a.norm();
            self.amplitudes = self.amplitudes.map(|z| z * phase);
        }
        self
    }

    /// Amplitudes as `[re, im]` pairs.
    pub fn to_pairs(&self) -> Vec<[f64; 2]> {
        self.amplitudes.iter().map(|z| [z.re, z.im]).collect()
    }
}

/// `(|0…0⟩ + |1…1⟩)/√2` on `n` qubits.
pub fn ghz_state(n: usize) -> Result<Ket> {
    let dim = check_qubits(n)?;
    let mut v = CVector::zeros(dim);
    v[0] = C64::new(FRAC_1_SQRT_2, 0.0);
    v[dim - 1] = C64::new(FRAC_1_SQRT_2, 0.0);
    Ok(Ket { n_qubits: n, amplitudes: v })
}

/// Mixed state on `n` qubits.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityOperator {
    n_qubits: usize,
    matrix: CMatrix,
}

impl DensityOperator {
    /// Validates Hermiticity, unit trace and positivity, each within 1e-9.
    pub fn new(n_qubits: usize, matrix: CMatrix) -> Result<Self> {
        let dim = check_qubits(n_qubits)?;
        if matrix.nrows() != dim || matrix.ncols() != dim {
            return Err(Error::DimensionMismatch { expected: dim, actual: matrix.nrows() });
        }
        let herm_err = (&matrix - matrix.adjoint()).iter().map(|z| z.norm()).fold(0.0, f64::max);
        if herm_err > STATE_TOL {
            return Err(Error::Numerical(format!("matrix is not Hermitian (error {herm_err:e})")));
        }
        let tr = matrix.trace();
        if (tr.re - 1.0).abs() > STATE_TOL || tr.im.abs() > STATE_TOL {
            return Err(Error::Numerical(format!("trace {tr} is not 1")));
        }
        let eig = SymmetricEigen::new(matrix.clone());
        let min = eig.eigenvalues.iter().cloned().fold(f64::INFINITY, f64::min);
        if min < -STATE_TOL {
            return Err(Error::Numerical(format!("negative eigenvalue {min:e}")));
        }
        Ok(Self { n_qubits, matrix })
    }

    pub fn pure(ket: &Ket) -> Self {
        let v = ket.amplitudes();
        Self { n_qubits: ket.n_qubits(), matrix: v * v.adjoint() }
    }

    pub fn maximally_mixed(n_qubits: usize) -> Result<Self> {
        let dim = check_qubits(n_qubits)?;
        let matrix = CMatrix::identity(dim, dim).unscale(dim as f64);
        Ok(Self { n_qubits, matrix })
    }

    /// `v·|ψ⟩⟨ψ| + (1 − v)·I/2^n`.
    pub fn white_noise(ket: &Ket, visibility: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&visibility) {
            return Err(Error::Invalid(format!("visibility {visibility} outside [0, 1]")));
        }
        let pure = Self::pure(ket);
        let mixed = Self::maximally_mixed(ket.n_qubits())?;
        Ok(Self {
            n_qubits: ket.n_qubits(),
            matrix: pure.matrix.scale(visibility) + mixed.matrix.scale(1.0 - visibility),
        })
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    /// `⟨ψ|ρ|ψ⟩`.
    pub fn fidelity_with(&self, ket: &Ket) -> Result<f64> {
        if ket.dim() != self.dim() {
            return Err(Error::DimensionMismatch { expected: self.dim(), actual: ket.dim() });
        }
        let v = ket.amplitudes();
        Ok(v.dotc(&(&self.matrix * v)).re)
    }
}

/// Anything an observable can be evaluated on.
pub trait QuantumState {
    fn n_qubits(&self) -> usize;

    /// Raw (possibly complex) `⟨G⟩`.
    fn raw_expectation(&self, g: &GlobalObservable) -> Result<C64>;

    /// Probability of each basis state after applying the unitary `u`
    /// (rows of `u` are the measurement bras).
    fn rotated_populations(&self, u: &CMatrix) -> Vec<f64>;
}

impl QuantumState for Ket {
    fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    fn raw_expectation(&self, g: &GlobalObservable) -> Result<C64> {
        let gv = g.apply(&self.amplitudes)?;
        Ok(self.amplitudes.dotc(&gv))
    }

    fn rotated_populations(&self, u: &CMatrix) -> Vec<f64> {
        (u * &self.amplitudes).iter().map(|z| z.norm_sqr()).collect()
    }
}

impl QuantumState for DensityOperator {
    fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    fn raw_expectation(&self, g: &GlobalObservable) -> Result<C64> {
        if g.n_qubits() != self.n_qubits {
            return Err(Error::DimensionMismatch { expected: self.n_qubits, actual: g.n_qubits() });
        }
        Ok((&self.matrix * g.matrix()).trace())
    }

    fn rotated_populations(&self, u: &CMatrix) -> Vec<f64> {
        let r = u * &self.matrix * u.adjoint();
        (0..r.nrows()).map(|i| r[(i, i)].re).collect()
    }
}

/// `⟨s|G|s⟩` or `tr(ρG)`; fails if the imaginary part is not negligible.
pub fn expectation<S: QuantumState + ?Sized>(g: &GlobalObservable, s: &S) -> Result<f64> {
    if g.n_qubits() != s.n_qubits() {
        return Err(Error::DimensionMismatch { expected: s.n_qubits(), actual: g.n_qubits() });
    }
    let z = s.raw_expectation(g)?;
    if z.im.abs() > STATE_TOL {
        return Err(Error::Numerical(format!("expectation has imaginary part {:e}", z.im)));
    }
    Ok(z.re)
}

/// True iff `‖G s − sign·s‖ ≤ tol`.
pub fn is_eigenrelation(g: &GlobalObservable, sign: f64, s: &Ket, tol: f64) -> bool {
    match g.apply(s.amplitudes()) {
        Ok(gs) => (gs - s.amplitudes().scale(sign)).norm() <= tol,
        Err(_) => false,
    }
}
