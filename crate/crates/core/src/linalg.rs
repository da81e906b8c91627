//! Kronecker products, partial transposition and spectral checks.

use nalgebra::linalg::SymmetricEigen;
use serde::{Deserialize, Serialize};

use crate::{CMatrix, CVector, Error, HermitianOp, Result, SigmaVector, TensorSpace, C64};

/// Default relative PSD tolerance: `min eig >= -PSD_TOL * max(1, ‖M‖₂)`.
pub const PSD_TOL: f64 = 1e-10;

/// Maximum imaginary part tolerated in `Tr(W rho)` for Hermitian inputs.
pub const TRACE_IMAG_TOL: f64 = 1e-10;

const EIGEN_MAX_ITERS: usize = 100_000;

/// Kronecker product, consistent with row-major composite indexing.
pub fn kron(a: &CMatrix, b: &CMatrix) -> CMatrix {
    a.kronecker(b)
}

/// Cyclic shift on `C^d` with `S e_i = e_{i+1 mod d}`.
pub fn shift_operator(d: usize) -> CMatrix {
    let mut s = CMatrix::zeros(d, d);
    for i in 0..d {
        s[((i + 1) % d, i)] = C64::new(1.0, 0.0);
    }
    s
}

/// Diagonal part `ε(x) = Σ x_ii e_ii`.
pub fn pinch(x: &CMatrix) -> CMatrix {
    assert!(x.is_square(), "pinch requires a square matrix");
    CMatrix::from_diagonal(&x.diagonal())
}

/// Applies `τ^σ` to a raw matrix on `space`: for every transposed factor `k`
/// the local row and column digits `i_k`, `j_k` are swapped.
pub fn partial_transpose_matrix(space: &TensorSpace, m: &CMatrix, sigma: &SigmaVector) -> Result<CMatrix> {
    sigma.check_against(space)?;
    let n = space.total();
    if m.nrows() != n || m.ncols() != n {
        return Err(Error::mismatch(
            format!("{n}x{n}"),
            format!("{}x{}", m.nrows(), m.ncols()),
        ));
    }
    let strides = space.strides();
    let dims = space.dims();
    let mut out = CMatrix::zeros(n, n);
    for r in 0..n {
        for c in 0..n {
            let (mut r2, mut c2) = (r, c);
            for (k, &flip) in sigma.bits().iter().enumerate() {
                if flip {
                    let ri = r / strides[k] % dims[k];
                    let ci = c / strides[k] % dims[k];
                    r2 = r2 - ri * strides[k] + ci * strides[k];
                    c2 = c2 - ci * strides[k] + ri * strides[k];
                }
            }
            out[(r2, c2)] = m[(r, c)];
        }
    }
    Ok(out)
}

/// `τ^σ op`. The result is Hermitian and has the same trace.
pub fn partial_transpose(op: &HermitianOp, sigma: &SigmaVector) -> Result<HermitianOp> {
    let m = partial_transpose_matrix(op.space(), op.matrix(), sigma)?;
    Ok(HermitianOp::from_exact(op.space().clone(), m))
}

/// Eigenvalues of a Hermitian operator, sorted ascending.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Spectrum {
    eigenvalues: Vec<f64>,
}

impl Spectrum {
    fn from_unsorted(mut eigenvalues: Vec<f64>) -> Self {
        eigenvalues.sort_by(f64::total_cmp);
        Self { eigenvalues }
    }

    pub fn eigenvalues(&self) -> &[f64] {
        &self.eigenvalues
    }

    pub fn min(&self) -> f64 {
        self.eigenvalues[0]
    }

    pub fn max(&self) -> f64 {
        *self.eigenvalues.last().expect("spectrum is never empty")
    }

    /// Spectral norm `max |λ|`.
    pub fn spectral_norm(&self) -> f64 {
        self.min().abs().max(self.max().abs())
    }
}

fn eigen(m: &CMatrix) -> Result<SymmetricEigen<C64, nalgebra::Dyn>> {
    SymmetricEigen::try_new(m.clone(), f64::EPSILON, EIGEN_MAX_ITERS).ok_or_else(|| {
        Error::Numeric(format!(
            "Hermitian eigensolver did not converge on a {}x{} matrix",
            m.nrows(),
            m.ncols()
        ))
    })
}

/// Spectrum of a Hermitian matrix.
pub fn spectrum_of(m: &CMatrix) -> Result<Spectrum> {
    let e = eigen(m)?;
    Ok(Spectrum::from_unsorted(e.eigenvalues.iter().copied().collect()))
}

/// Smallest eigenvalue of a Hermitian matrix and a unit eigenvector for it.
pub fn min_eigenpair(m: &CMatrix) -> Result<(f64, CVector)> {
    let e = eigen(m)?;
    let (idx, &val) = e
        .eigenvalues
        .iter()
        .enumerate()
        .min_by(|a, b| a.1.total_cmp(b.1))
        .ok_or_else(|| Error::Numeric("empty matrix".into()))?;
    Ok((val, e.eigenvectors.column(idx).into_owned()))
}

impl HermitianOp {
    pub fn spectrum(&self) -> Result<Spectrum> {
        spectrum_of(self.matrix())
    }
}

/// PSD verdict with the full spectrum as evidence. `tol` is relative:
/// the operator passes iff `min eig >= -tol * max(1, ‖op‖₂)`.
pub fn is_psd(op: &HermitianOp, tol: f64) -> Result<(bool, Spectrum)> {
    let spec = op.spectrum()?;
    let ok = spec.min() >= -psd_cutoff(&spec, tol);
    Ok((ok, spec))
}

/// Absolute cutoff implied by a relative PSD tolerance.
pub fn psd_cutoff(spec: &Spectrum, tol: f64) -> f64 {
    tol * spec.spectral_norm().max(1.0)
}

/// Neumaier-compensated sum; cancellations between exactly representable
/// terms come out exact.
pub(crate) fn compensated_sum(terms: impl IntoIterator<Item = f64>) -> f64 {
    let mut sum = 0.0_f64;
    let mut comp = 0.0_f64;
    for x in terms {
        let t = sum + x;
        if sum.abs() >= x.abs() {
            comp += (sum - t) + x;
        } else {
            comp += (x - t) + sum;
        }
        sum = t;
    }
    sum + comp
}

/// `Re Tr(W rho)`; errors if the imaginary part exceeds [`TRACE_IMAG_TOL`].
pub fn trace_pair(w: &HermitianOp, rho: &HermitianOp) -> Result<f64> {
    if w.space() != rho.space() {
        return Err(Error::mismatch(w.space(), rho.space()));
    }
    let (a, b) = (w.matrix(), rho.matrix());
    let n = w.dim();
    let products = || (0..n).flat_map(move |i| (0..n).map(move |j| a[(i, j)] * b[(j, i)]));
    let re = compensated_sum(products().map(|z| z.re));
    let im = compensated_sum(products().map(|z| z.im));
    if im.abs() > TRACE_IMAG_TOL {
        return Err(Error::Numeric(format!("Tr(W rho) has imaginary part {im:e}")));
    }
    Ok(re)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::TensorSpace;

    fn c(x: f64) -> C64 {
        C64::new(x, 0.0)
    }

    #[test]
    fn kron_of_identities() {
        let i2 = CMatrix::identity(2, 2);
        assert_eq!(kron(&i2, &i2), CMatrix::identity(4, 4));
    }

    #[test]
    fn kron_basis_bookkeeping() {
        let mut e00 = CMatrix::zeros(3, 3);
        e00[(0, 0)] = c(1.0);
        let mut e11 = CMatrix::zeros(3, 3);
        e11[(1, 1)] = c(1.0);
        let k = kron(&e00, &e11);
        let nonzero: Vec<_> = (0..9)
            .flat_map(|i| (0..9).map(move |j| (i, j)))
            .filter(|&(i, j)| k[(i, j)] != c(0.0))
            .collect();
        assert_eq!(nonzero, vec![(1, 1)]);
    }

    #[test]
    fn shift_operator_conventions() {
        let s2 = shift_operator(2);
        assert_eq!(s2, CMatrix::from_row_slice(2, 2, &[c(0.0), c(1.0), c(1.0), c(0.0)]));
        for d in 2..6 {
            let s = shift_operator(d);
            let mut p = CMatrix::identity(d, d);
            for _ in 0..d {
                p = &s * p;
            }
            assert_eq!(p, CMatrix::identity(d, d));
            // S e_0 = e_1 and S e_{d-1} = e_0
            assert_eq!(s[(1, 0)], c(1.0));
            assert_eq!(s[(0, d - 1)], c(1.0));
        }
    }

    #[test]
    fn pinch_examples() {
        let d = CMatrix::from_diagonal(&CVector::from_vec(vec![c(1.0), c(2.0), c(3.0)]));
        assert_eq!(pinch(&d), d);
        let ones = CMatrix::from_element(3, 3, c(1.0));
        assert_eq!(pinch(&ones), CMatrix::identity(3, 3));
        assert_eq!(pinch(&pinch(&ones)), pinch(&ones));
    }

    #[test]
    fn psd_examples() {
        let s = TensorSpace::new(vec![2]).unwrap();
        let (ok, spec) = is_psd(&HermitianOp::identity(s.clone()), PSD_TOL).unwrap();
        assert!(ok);
        assert!(spec.eigenvalues().iter().all(|&x| (x - 1.0).abs() < 1e-15));
        let m = HermitianOp::from_real(s, &[1.0, 0.0, 0.0, -0.5]).unwrap();
        let (ok, spec) = is_psd(&m, PSD_TOL).unwrap();
        assert!(!ok);
        assert_eq!(spec.min(), -0.5);
        assert_eq!(spec.eigenvalues().len(), 2);
    }

    #[test]
    fn trace_pair_identity() {
        let s = TensorSpace::bipartite(3, 3).unwrap();
        let v = trace_pair(&HermitianOp::identity(s.clone()), &HermitianOp::maximally_mixed(s)).unwrap();
        assert!((v - 1.0).abs() < 1e-15);
    }

    #[test]
    fn trace_pair_rejects_mismatch() {
        let a = HermitianOp::identity(TensorSpace::bipartite(2, 2).unwrap());
        let b = HermitianOp::identity(TensorSpace::bipartite(2, 3).unwrap());
        assert!(trace_pair(&a, &b).is_err());
    }

    #[test]
    fn partial_transpose_all_false_is_identity_map() {
        let s = TensorSpace::bipartite(2, 3).unwrap();
        let m = HermitianOp::from_real(
            s.clone(),
            &(0..36).map(|x| ((x % 6) * (x / 6)) as f64).collect::<Vec<_>>(),
        )
        .unwrap();
        let pt = partial_transpose(&m, &SigmaVector::uniform(2, false)).unwrap();
        assert_eq!(pt, m);
        let full = partial_transpose(&m, &SigmaVector::uniform(2, true)).unwrap();
        assert_eq!(full, m.transpose());
        assert!(partial_transpose(&m, &SigmaVector::uniform(3, true)).is_err());
    }

    #[test]
    fn compensated_sum_cancels_exactly() {
        let ninth = 1.0 / 9.0;
        let terms = [
            ninth, ninth, -ninth, ninth, ninth, ninth, -ninth, -ninth, -ninth, ninth, -ninth, -ninth,
        ];
        assert_eq!(compensated_sum(terms), 0.0);
    }
}
