//! Dense complex linear algebra for small qubit registers.

mod bipartition;
mod observable;
mod state;
mod subspace;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex;

pub type C64 = Complex<f64>;
pub type CMatrix = DMatrix<C64>;
pub type CVector = DVector<C64>;

pub use bipartition::{schmidt_coefficients, schmidt_decomposition, Bipartition, Schmidt};
pub use observable::{canonical_angle, GlobalObservable, LocalKey, LocalObservable, Pauli};
pub use state::{expectation, ghz_state, is_eigenrelation, DensityOperator, Ket, QuantumState, MAX_QUBITS};
pub use subspace::{eigenspace, intersect, is_involution, null_space, Subspace, RANK_TOL};
