//! Dense Hermitian operators on a composite space.

use nalgebra::{DMatrix, DVector};

use crate::{Error, Result, TensorSpace, C64};

pub type CMatrix = DMatrix<C64>;
pub type CVector = DVector<C64>;

/// Relative Hermiticity gate applied at construction.
pub const HERMITIAN_TOL: f64 = 1e-12;

/// A Hermitian matrix tied to the [`TensorSpace`] it acts on.
///
/// Construction symmetrizes `M <- (M + M†)/2` when the input is Hermitian up
/// to [`HERMITIAN_TOL`] (relative to `max(1, max|M_ij|)`) and rejects it
/// otherwise. Values are immutable afterwards.
#[derive(Debug, Clone, PartialEq)]
pub struct HermitianOp {
    space: TensorSpace,
    matrix: CMatrix,
}

impl HermitianOp {
    pub fn new(space: TensorSpace, matrix: CMatrix) -> Result<Self> {
        let n = space.total();
        if matrix.nrows() != n || matrix.ncols() != n {
            return Err(Error::mismatch(
                format!("{n}x{n} matrix for {space}"),
                format!("{}x{}", matrix.nrows(), matrix.ncols()),
            ));
        }
        let scale = matrix.iter().map(|z| z.norm()).fold(1.0_f64, f64::max);
        let mut deviation = 0.0_f64;
        for i in 0..n {
            for j in i..n {
                deviation = deviation.max((matrix[(i, j)] - matrix[(j, i)].conj()).norm());
            }
        }
        let tolerance = HERMITIAN_TOL * scale;
        if deviation > tolerance {
            return Err(Error::NotHermitian { deviation, tolerance });
        }
        let mut sym = matrix;
        for i in 0..n {
            for j in i..n {
                let avg = (sym[(i, j)] + sym[(j, i)].conj()) * 0.5;
                // `x + 0.0` maps -0.0 to +0.0
                sym[(i, j)] = C64::new(avg.re + 0.0, avg.im + 0.0);
                sym[(j, i)] = C64::new(avg.re + 0.0, -avg.im + 0.0);
            }
        }
        Ok(Self { space, matrix: sym })
    }

    /// Wraps a matrix already known to be exactly Hermitian.
    pub(crate) fn from_exact(space: TensorSpace, matrix: CMatrix) -> Self {
        debug_assert_eq!(matrix.nrows(), space.total());
        Self { space, matrix }
    }

    /// Builds from a row-major slice of real entries.
    pub fn from_real(space: TensorSpace, entries: &[f64]) -> Result<Self> {
        let n = space.total();
        if entries.len() != n * n {
            return Err(Error::mismatch(n * n, entries.len()));
        }
        let m = CMatrix::from_row_iterator(n, n, entries.iter().map(|&x| C64::new(x, 0.0)));
        Self::new(space, m)
    }

    pub fn zeros(space: TensorSpace) -> Self {
        let n = space.total();
        Self::from_exact(space, CMatrix::zeros(n, n))
    }

    pub fn identity(space: TensorSpace) -> Self {
        let n = space.total();
        Self::from_exact(space, CMatrix::identity(n, n))
    }

    /// Unit-trace maximally mixed state `I / total`.
    pub fn maximally_mixed(space: TensorSpace) -> Self {
        let n = space.total() as f64;
        Self::identity(space).scale(1.0 / n)
    }

    /// Rank-one operator `|v⟩⟨v|` (no normalization applied).
    pub fn outer(space: TensorSpace, v: &CVector) -> Result<Self> {
        if v.len() != space.total() {
            return Err(Error::mismatch(space.total(), v.len()));
        }
        let m = v * v.adjoint();
        Self::new(space, m)
    }

    pub fn space(&self) -> &TensorSpace {
        &self.space
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    pub fn into_matrix(self) -> CMatrix {
        self.matrix
    }

    pub fn dim(&self) -> usize {
        self.space.total()
    }

    pub fn trace(&self) -> f64 {
        self.matrix.diagonal().iter().map(|z| z.re).sum()
    }

    pub fn scale(&self, factor: f64) -> Self {
        Self::from_exact(self.space.clone(), self.matrix.map(|z| z * factor))
    }

    fn check_same_space(&self, other: &Self) -> Result<()> {
        if self.space != other.space {
            return Err(Error::mismatch(&self.space, &other.space));
        }
        Ok(())
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        self.check_same_space(other)?;
        Ok(Self::from_exact(self.space.clone(), &self.matrix + &other.matrix))
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self> {
        self.check_same_space(other)?;
        Ok(Self::from_exact(self.space.clone(), &self.matrix - &other.matrix))
    }

    /// `self + factor * other`.
    pub fn try_add_scaled(&self, other: &Self, factor: f64) -> Result<Self> {
        self.check_same_space(other)?;
        let m = &self.matrix + other.matrix.map(|z| z * factor);
        Ok(Self::from_exact(self.space.clone(), m))
    }

    /// Full (global) transpose, equal to the partial transpose on every factor.
    pub fn transpose(&self) -> Self {
        Self::from_exact(self.space.clone(), self.matrix.transpose())
    }

    /// `self ⊗ other` on the concatenated space.
    pub fn kron(&self, other: &Self) -> Self {
        Self::from_exact(
            self.space.tensor(&other.space),
            crate::linalg::kron(&self.matrix, &other.matrix),
        )
    }

    /// Largest entrywise modulus of `self - other`.
    pub fn max_abs_diff(&self, other: &Self) -> Result<f64> {
        self.check_same_space(other)?;
        Ok(self
            .matrix
            .iter()
            .zip(other.matrix.iter())
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max))
    }

    /// Operator block `(i, j)` of a bipartite operator: rows `i*d2..`, cols `j*d2..`.
    pub fn block(&self, i: usize, j: usize) -> Result<CMatrix> {
        if !self.space.is_bipartite() {
            return Err(Error::NotBipartite(self.space.parties()));
        }
        let d2 = self.space.dims()[1];
        Ok(self.matrix.view((i * d2, j * d2), (d2, d2)).into_owned())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn space(d: usize) -> TensorSpace {
        TensorSpace::bipartite(d, d).unwrap()
    }

    #[test]
    fn real_input_keeps_positive_zero_imaginary_parts() {
        let space = TensorSpace::new(vec![2]).unwrap();
        let op = HermitianOp::from_real(space, &[1.0, 0.5, 0.5, 0.0]).unwrap();
        assert!(op.matrix().iter().all(|z| z.im.to_bits() == 0));
    }

    #[test]
    fn symmetrizes_near_hermitian_input() {
        let mut m = CMatrix::identity(4, 4);
        m[(0, 1)] = C64::new(1.0, 1e-14);
        m[(1, 0)] = C64::new(1.0, 0.0);
        let op = HermitianOp::new(space(2), m).unwrap();
        assert_eq!(op.matrix()[(0, 1)], op.matrix()[(1, 0)].conj());
    }

    #[test]
    fn rejects_non_hermitian() {
        let mut m = CMatrix::identity(4, 4);
        m[(0, 1)] = C64::new(1.0, 0.0);
        assert!(matches!(HermitianOp::new(space(2), m), Err(Error::NotHermitian { .. })));
    }

    #[test]
    fn rejects_wrong_shape() {
        let m = CMatrix::identity(3, 3);
        assert!(matches!(
            HermitianOp::new(space(2), m),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn arithmetic_checks_spaces() {
        let a = HermitianOp::identity(space(2));
        let b = HermitianOp::identity(space(3));
        assert!(a.try_add(&b).is_err());
        let c = a.try_add_scaled(&a, 2.0).unwrap();
        assert_eq!(c.trace(), 12.0);
        assert!((HermitianOp::maximally_mixed(space(3)).trace() - 1.0).abs() < 1e-15);
    }
}
