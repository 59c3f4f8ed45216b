use nalgebra::SVD;

use super::observable::GlobalObservable;
use super::{CMatrix, CVector, C64};
use crate::error::{Error, Result};

/// Relative singular-value threshold for rank decisions.
pub const RANK_TOL: f64 = 1e-7;

const INVOLUTION_TOL: f64 = 1e-9;

/// Subspace of `C^dim` given by an orthonormal basis (the columns of `basis`).
#[derive(Debug, Clone)]
pub struct Subspace {
    dim_ambient: usize,
    basis: CMatrix,
}

impl Subspace {
    /// Wraps columns already known to be orthonormal.
    pub fn from_orthonormal(dim_ambient: usize, basis: CMatrix) -> Result<Self> {
        if basis.nrows() != dim_ambient {
            return Err(Error::DimensionMismatch { expected: dim_ambient, actual: basis.nrows() });
        }
        let gram = basis.adjoint() * &basis;
        let err = (&gram - CMatrix::identity(gram.nrows(), gram.ncols()))
            .iter()
            .map(|z| z.norm())
            .fold(0.0, f64::max);
        if err > 1e-9 {
            return Err(Error::Numerical(format!("basis is not orthonormal (error {err:e})")));
        }
        Ok(Self { dim_ambient, basis })
    }

    pub fn full(dim_ambient: usize) -> Self {
        Self { dim_ambient, basis: CMatrix::identity(dim_ambient, dim_ambient) }
    }

    pub fn dim(&self) -> usize {
        self.basis.ncols()
    }

    pub fn dim_ambient(&self) -> usize {
        self.dim_ambient
    }

    pub fn basis(&self) -> &CMatrix {
        &self.basis
    }

    pub fn vector(&self, i: usize) -> CVector {
        self.basis.column(i).into_owned()
    }

    /// Orthogonal projector onto the subspace.
    pub fn projector(&self) -> CMatrix {
        &self.basis * self.basis.adjoint()
    }

    /// `I − P`.
    pub fn complement_projector(&self) -> CMatrix {
        CMatrix::identity(self.dim_ambient, self.dim_ambient) - self.projector()
    }

    /// `‖P v‖²` for a unit vector `v`.
    pub fn weight_of(&self, v: &CVector) -> f64 {
        (self.basis.adjoint() * v).norm_squared()
    }
}

/// Orthonormal basis of the null space of `a`, using singular values below
/// `RANK_TOL × σ_max` as zero.
pub fn null_space(a: &CMatrix) -> CMatrix {
    let n = a.ncols();
    let padded;
    let a = if a.nrows() < n {
        padded = a.clone().resize_vertically(n, C64::new(0.0, 0.0));
        &padded
    } else {
        a
    };
    let svd = SVD::new(a.clone(), false, true);
    let v_t = svd.v_t.expect("SVD was asked for V^T");
    let sigma_max = svd.singular_values.iter().cloned().fold(0.0, f64::max);
    if sigma_max == 0.0 {
        return CMatrix::identity(n, n);
    }
    let thr = RANK_TOL * sigma_max;
    let keep: Vec<usize> = (0..svd.singular_values.len()).filter(|&i| svd.singular_values[i] <= thr).collect();
    let mut out = CMatrix::zeros(n, keep.len());
    for (col, &row) in keep.iter().enumerate() {
        for j in 0..n {
            out[(j, col)] = v_t[(row, j)].conj();
        }
    }
    out
}

/// Checks `‖G² − I‖_max` against the involution tolerance.
pub fn is_involution(m: &CMatrix) -> bool {
    let sq = m * m;
    let err = (&sq - CMatrix::identity(m.nrows(), m.ncols())).iter().map(|z| z.norm()).fold(0.0, f64::max);
    err < INVOLUTION_TOL
}

/// The `sign`-eigenspace of an involutive global observable.
pub fn eigenspace(g: &GlobalObservable, sign: f64) -> Result<Subspace> {
    let m = g.matrix();
    if !is_involution(&m) {
        return Err(Error::Domain(format!("observable {g} is not an involution")));
    }
    if sign != 1.0 && sign != -1.0 {
        return Err(Error::Domain(format!("eigenvalue sign must be ±1, got {sign}")));
    }
    let dim = m.nrows();
    let shifted = m - CMatrix::identity(dim, dim).scale(sign);
    Ok(Subspace { dim_ambient: dim, basis: null_space(&shifted) })
}

/// Intersection of subspaces, computed as the null space of the stacked
/// complement projectors.
pub fn intersect(spaces: &[Subspace]) -> Result<Subspace> {
    let Some(first) = spaces.first() else {
        return Err(Error::Invalid("cannot intersect an empty list of subspaces".into()));
    };
    let dim = first.dim_ambient;
    if let Some(bad) = spaces.iter().find(|s| s.dim_ambient != dim) {
        return Err(Error::DimensionMismatch { expected: dim, actual: bad.dim_ambient });
    }
    if spaces.iter().any(|s| s.dim() == 0) {
        return Ok(Subspace { dim_ambient: dim, basis: CMatrix::zeros(dim, 0) });
    }
    let mut stacked = CMatrix::zeros(dim * spaces.len(), dim);
    for (k, s) in spaces.iter().enumerate() {
        stacked.view_mut((k * dim, 0), (dim, dim)).copy_from(&s.complement_projector());
    }
    let basis = null_space(&stacked);
    Ok(Subspace { dim_ambient: dim, basis })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quantum::observable::{LocalObservable, Pauli};
    use crate::quantum::state::ghz_state;

    fn z() -> GlobalObservable {
        GlobalObservable::uniform(LocalObservable::Pauli(Pauli::Z), 1)
    }

    #[test]
    fn x_plus_eigenspace() {
        let s = eigenspace(&GlobalObservable::phases(&[0.0]), 1.0).unwrap();
        assert_eq!(s.dim(), 1);
        let v = s.vector(0);
        assert!((v[0].norm() - v[1].norm()).abs() < 1e-12);
        assert!((v[0] - v[1]).norm() < 1e-12);
    }

    #[test]
    fn z_minus_is_one() {
        let s = eigenspace(&z(), -1.0).unwrap();
        assert_eq!(s.dim(), 1);
        assert!(s.vector(0)[0].norm() < 1e-12);
        assert!((s.vector(0)[1].norm() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn four_qubit_traceless_involution_splits_in_half() {
        let g = GlobalObservable::phases(&[0.0; 4]);
        assert_eq!(eigenspace(&g, 1.0).unwrap().dim(), 8);
        assert_eq!(eigenspace(&g, -1.0).unwrap().dim(), 8);
    }

    #[test]
    fn orthogonal_spaces_intersect_trivially() {
        let plus = eigenspace(&z(), 1.0).unwrap();
        let minus = eigenspace(&z(), -1.0).unwrap();
        assert_eq!(intersect(&[plus.clone(), minus]).unwrap().dim(), 0);
        let alone = intersect(std::slice::from_ref(&plus)).unwrap();
        assert_eq!(alone.dim(), 1);
        assert!((alone.projector() - plus.projector()).norm() < 1e-9);
    }

    #[test]
    fn ambient_mismatch() {
        let a = Subspace::full(2);
        let b = Subspace::full(4);
        assert!(matches!(intersect(&[a, b]), Err(Error::DimensionMismatch { .. })));
    }

    #[test]
    fn ghz_lies_in_xxxx_plus() {
        let s = eigenspace(&GlobalObservable::phases(&[0.0; 4]), 1.0).unwrap();
        let ghz = ghz_state(4).unwrap();
        assert!((s.weight_of(ghz.amplitudes()) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn non_involution_rejected() {
        // diag(2, 1) squares to diag(4, 1).
        let mut m = CMatrix::identity(2, 2);
        m[(0, 0)] = C64::new(2.0, 0.0);
        assert!(!is_involution(&m));
    }
}
