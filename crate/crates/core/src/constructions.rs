//! Concrete witnesses, states, projectors and the Choi-Jamiołkowski map.
//!
//! Witnesses are kept unnormalized with integer entries so the `d = 3`
//! matrices come out exactly; states are unit trace. All local indices are
//! zero-based and index shifts wrap mod `d`.

use serde::{Deserialize, Serialize};

use crate::linalg::{is_psd, pinch, shift_operator, PSD_TOL};
use crate::{CMatrix, CVector, Error, HermitianOp, Result, TensorSpace, C64};

const ONE: C64 = C64 { re: 1.0, im: 0.0 };

/// Tolerance for Hermiticity preservation of a map table.
pub const MAP_HERMITIAN_TOL: f64 = 1e-12;

/// Tolerance for convex weights summing to one.
pub const WEIGHT_SUM_TOL: f64 = 1e-12;

fn check_dk(d: usize, k: usize) -> Result<()> {
    if d < 3 {
        return Err(Error::InvalidParameter(format!("d = {d} must be >= 3")));
    }
    if k < 1 || k > d - 1 {
        return Err(Error::InvalidParameter(format!(
            "k = {k} must satisfy 1 <= k <= d-1 = {}",
            d - 1
        )));
    }
    Ok(())
}

/// Identifies `W_{d,k} + λP + μQ`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WitnessFamilyParams {
    d: usize,
    k: usize,
    lambda: f64,
    mu: f64,
}

impl WitnessFamilyParams {
    pub fn new(d: usize, k: usize, lambda: f64, mu: f64) -> Result<Self> {
        check_dk(d, k)?;
        for (name, v) in [("lambda", lambda), ("mu", mu)] {
            if !v.is_finite() || v < 0.0 {
                return Err(Error::InvalidParameter(format!("{name} = {v} must be finite and >= 0")));
            }
        }
        Ok(Self { d, k, lambda, mu })
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    pub fn mu(&self) -> f64 {
        self.mu
    }

    /// Whether `W_{d,k}` is covered by the cited atomicity result (`k <= d-2`).
    pub fn atomicity_recorded(&self) -> bool {
        self.k + 2 <= self.d
    }
}

/// `(d, γ)` with the derived coefficients of the state family `ρ_γ`:
/// `a_γ = (γ² + d - 1)/d`, `b_γ = (γ⁻² + d - 1)/d`, `N_γ = d² - 2 + γ² + γ⁻²`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StateFamilyParams {
    d: usize,
    gamma: f64,
    a_gamma: f64,
    b_gamma: f64,
    n_gamma: f64,
}

impl StateFamilyParams {
    pub fn new(d: usize, gamma: f64) -> Result<Self> {
        if d < 3 {
            return Err(Error::InvalidParameter(format!("d = {d} must be >= 3")));
        }
        if !gamma.is_finite() || gamma <= 0.0 {
            return Err(Error::InvalidParameter(format!("gamma = {gamma} must be > 0")));
        }
        let (a_gamma, b_gamma, n_gamma) = Self::coefficients(d, gamma);
        Ok(Self {
            d,
            gamma,
            a_gamma,
            b_gamma,
            n_gamma,
        })
    }

    fn coefficients(d: usize, gamma: f64) -> (f64, f64, f64) {
        let df = d as f64;
        let g2 = gamma * gamma;
        let inv = 1.0 / g2;
        ((g2 + df - 1.0) / df, (inv + df - 1.0) / df, df * df - 2.0 + g2 + inv)
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    pub fn a_gamma(&self) -> f64 {
        self.a_gamma
    }

    pub fn b_gamma(&self) -> f64 {
        self.b_gamma
    }

    pub fn n_gamma(&self) -> f64 {
        self.n_gamma
    }

    /// Recomputes the derived fields and compares them to 1e-14.
    pub fn is_consistent(&self) -> bool {
        let (a, b, n) = Self::coefficients(self.d, self.gamma);
        (a - self.a_gamma).abs() <= 1e-14
            && (b - self.b_gamma).abs() <= 1e-14
            && (n - self.n_gamma).abs() <= 1e-14 * n.max(1.0)
    }

    /// `(γ² - 1)/N_γ`, the pairing of `ρ_γ` with `W_{d,k}` for `k <= d-2`.
    pub fn witness_pairing(&self) -> f64 {
        (self.gamma * self.gamma - 1.0) / self.n_gamma
    }
}

/// A linear map `M_{d_in} -> M_{d_out}` tabulated on matrix units:
/// `images[i * d_in + j] = φ(e_ij)`.
#[derive(Debug, Clone, PartialEq)]
pub struct LinearMapTable {
    d_in: usize,
    d_out: usize,
    images: Vec<CMatrix>,
}

impl LinearMapTable {
    /// Validates shapes and Hermiticity preservation `φ(e_ij)† = φ(e_ji)`.
    pub fn new(d_in: usize, d_out: usize, images: Vec<CMatrix>) -> Result<Self> {
        if d_in < 2 || d_out < 2 {
            return Err(Error::InvalidMap(format!("dimensions {d_in} -> {d_out} must be >= 2")));
        }
        if images.len() != d_in * d_in {
            return Err(Error::InvalidMap(format!(
                "expected {} images, got {}",
                d_in * d_in,
                images.len()
            )));
        }
        if let Some(m) = images.iter().find(|m| m.nrows() != d_out || m.ncols() != d_out) {
            return Err(Error::InvalidMap(format!(
                "image of shape {}x{}, expected {d_out}x{d_out}",
                m.nrows(),
                m.ncols()
            )));
        }
        for i in 0..d_in {
            for j in i..d_in {
                let dev = (&images[i * d_in + j].adjoint() - &images[j * d_in + i])
                    .iter()
                    .map(|z| z.norm())
                    .fold(0.0, f64::max);
                if dev > MAP_HERMITIAN_TOL {
                    return Err(Error::InvalidMap(format!(
                        "not Hermiticity-preserving: φ(e_{i}{j})† differs from φ(e_{j}{i}) by {dev:e}"
                    )));
                }
            }
        }
        Ok(Self { d_in, d_out, images })
    }

    /// Tabulates `f` on the matrix units of `M_{d_in}`.
    pub fn from_fn(d_in: usize, d_out: usize, f: impl Fn(&CMatrix) -> CMatrix) -> Result<Self> {
        let images = (0..d_in * d_in)
            .map(|idx| f(&matrix_unit(d_in, idx / d_in, idx % d_in)))
            .collect();
        Self::new(d_in, d_out, images)
    }

    pub fn identity(d: usize) -> Result<Self> {
        Self::from_fn(d, d, |x| x.clone())
    }

    pub fn transpose_map(d: usize) -> Result<Self> {
        Self::from_fn(d, d, |x| x.transpose())
    }

    pub fn d_in(&self) -> usize {
        self.d_in
    }

    pub fn d_out(&self) -> usize {
        self.d_out
    }

    pub fn images(&self) -> &[CMatrix] {
        &self.images
    }

    pub fn image(&self, i: usize, j: usize) -> &CMatrix {
        &self.images[i * self.d_in + j]
    }

    /// Linear extension `φ(x) = Σ x_ij φ(e_ij)`.
    pub fn apply(&self, x: &CMatrix) -> CMatrix {
        let mut out = CMatrix::zeros(self.d_out, self.d_out);
        for i in 0..self.d_in {
            for j in 0..self.d_in {
                out += self.image(i, j) * x[(i, j)];
            }
        }
        out
    }
}

/// `e_ij` in `M_d`.
pub fn matrix_unit(d: usize, i: usize, j: usize) -> CMatrix {
    let mut m = CMatrix::zeros(d, d);
    m[(i, j)] = ONE;
    m
}

/// `W_{d,k} = Σ e_ij ⊗ X_ij` with `X_ii = (d-k-1) e_ii + Σ_{l=1..k} e_{i+l,i+l}`
/// and `X_ij = -e_ij` off the diagonal. For `(3, 1)` this is the witness of
/// the Choi map.
pub fn witness_dk(d: usize, k: usize) -> Result<HermitianOp> {
    check_dk(d, k)?;
    let space = TensorSpace::bipartite(d, d)?;
    let mut m = CMatrix::zeros(d * d, d * d);
    for i in 0..d {
        let base = i * d;
        m[(base + i, base + i)] += C64::new((d - k - 1) as f64, 0.0);
        for l in 1..=k {
            let p = (i + l) % d;
            m[(base + p, base + p)] += ONE;
        }
        for j in (0..d).filter(|&j| j != i) {
            m[(i * d + i, j * d + j)] = C64::new(-1.0, 0.0);
        }
    }
    Ok(HermitianOp::from_exact(space, m))
}

/// The positive map `τ_{d,k}(x) = (d-k) ε(x) + Σ_{l=1..k} ε(S^l x S^{*l}) - x`.
pub fn choi_map(d: usize, k: usize) -> Result<LinearMapTable> {
    check_dk(d, k)?;
    let s = shift_operator(d);
    let powers: Vec<CMatrix> = std::iter::successors(Some(s.clone()), |p| Some(&s * p))
        .take(k)
        .collect();
    LinearMapTable::from_fn(d, d, |x| {
        let mut out = pinch(x) * C64::new((d - k) as f64, 0.0);
        for sl in &powers {
            out += pinch(&(sl * x * sl.adjoint()));
        }
        out - x
    })
}

/// `W_φ = Σ e_ij ⊗ φ(e_ij)` on `(d_in, d_out)`.
pub fn jamiolkowski(map: &LinearMapTable) -> Result<HermitianOp> {
    let (din, dout) = (map.d_in(), map.d_out());
    let space = TensorSpace::bipartite(din, dout)?;
    let mut m = CMatrix::zeros(din * dout, din * dout);
    for i in 0..din {
        for j in 0..din {
            m.view_mut((i * dout, j * dout), (dout, dout))
                .copy_from(map.image(i, j));
        }
    }
    HermitianOp::new(space, m)
}

/// Inverse of [`jamiolkowski`]: `φ(e_ij)` is block `(i, j)` of `w`.
pub fn dejamiolkowski(w: &HermitianOp) -> Result<LinearMapTable> {
    if !w.space().is_bipartite() {
        return Err(Error::NotBipartite(w.space().parties()));
    }
    let (d1, d2) = (w.space().dims()[0], w.space().dims()[1]);
    let images = (0..d1 * d1)
        .map(|idx| w.block(idx / d1, idx % d1))
        .collect::<Result<Vec<_>>>()?;
    LinearMapTable::new(d1, d2, images)
}

/// The unit-trace state `ρ_γ = (1/N_γ) Σ e_ij ⊗ A_ij` with `A_ij = e_ij`
/// off the diagonal and diagonal blocks `S^i diag(1, a_γ, 1, …, 1, b_γ) S^{*i}`.
pub fn ha_state(params: &StateFamilyParams) -> Result<HermitianOp> {
    let d = params.d();
    let space = TensorSpace::bipartite(d, d)?;
    let mut first = vec![1.0; d];
    first[1] = params.a_gamma();
    first[d - 1] = params.b_gamma();
    let norm = params.n_gamma();
    let mut m = CMatrix::zeros(d * d, d * d);
    for i in 0..d {
        for (l, &x) in first.iter().enumerate() {
            let p = (l + i) % d;
            m[(i * d + p, i * d + p)] = C64::new(x / norm, 0.0);
        }
        for j in (0..d).filter(|&j| j != i) {
            m[(i * d + i, j * d + j)] = C64::new(1.0 / norm, 0.0);
        }
    }
    Ok(HermitianOp::from_exact(space, m))
}

fn cyclic_projector(d: usize, offset: usize) -> Result<HermitianOp> {
    if d < 3 {
        return Err(Error::InvalidParameter(format!("d = {d} must be >= 3")));
    }
    let space = TensorSpace::bipartite(d, d)?;
    let mut v = CVector::zeros(d * d);
    for i in 0..d {
        v[i * d + (i + offset) % d] = ONE;
    }
    Ok(HermitianOp::from_exact(space, &v * v.adjoint()))
}

/// `P = d |ψ⟩⟨ψ|` with `ψ = d^{-1/2} Σ e_i ⊗ e_{i-1 mod d}`.
pub fn projector_p(d: usize) -> Result<HermitianOp> {
    cyclic_projector(d, d - 1)
}

/// `Q = d |φ⟩⟨φ|` with `φ = d^{-1/2} Σ e_i ⊗ e_{i+1 mod d}`.
pub fn projector_q(d: usize) -> Result<HermitianOp> {
    cyclic_projector(d, 1)
}

/// Unit-trace maximally entangled state `|Φ⁺⟩⟨Φ⁺|`, `Φ⁺ = d^{-1/2} Σ e_i ⊗ e_i`.
pub fn maximally_entangled(d: usize) -> Result<HermitianOp> {
    let space = TensorSpace::bipartite(d, d)?;
    let amp = 1.0 / d as f64;
    let mut m = CMatrix::zeros(d * d, d * d);
    for i in 0..d {
        for j in 0..d {
            m[(i * d + i, j * d + j)] = C64::new(amp, 0.0);
        }
    }
    Ok(HermitianOp::from_exact(space, m))
}

/// `W_{λ,μ} = W_{d,k} + λ P + μ Q`.
pub fn perturbed_witness(params: &WitnessFamilyParams) -> Result<HermitianOp> {
    let d = params.d();
    let w = witness_dk(d, params.k())?;
    let w = if params.lambda() != 0.0 {
        w.try_add_scaled(&projector_p(d)?, params.lambda())?
    } else {
        w
    };
    if params.mu() != 0.0 {
        w.try_add_scaled(&projector_q(d)?, params.mu())
    } else {
        Ok(w)
    }
}

/// `Σ p_i op_i` for weights `p_i >= 0` summing to one.
pub fn convex_combination(ops: &[HermitianOp], weights: &[f64]) -> Result<HermitianOp> {
    if ops.is_empty() || ops.len() != weights.len() {
        return Err(Error::InvalidParameter(format!(
            "{} operators with {} weights",
            ops.len(),
            weights.len()
        )));
    }
    if let Some(w) = weights.iter().find(|w| !w.is_finite() || **w < 0.0) {
        return Err(Error::InvalidParameter(format!("weight {w} is negative or not finite")));
    }
    let total: f64 = weights.iter().sum();
    if (total - 1.0).abs() > WEIGHT_SUM_TOL {
        return Err(Error::InvalidParameter(format!("weights sum to {total}, not 1")));
    }
    let mut acc = HermitianOp::zeros(ops[0].space().clone());
    for (op, &w) in ops.iter().zip(weights) {
        acc = acc.try_add_scaled(op, w)?;
    }
    Ok(acc)
}

/// `W = Q - P` for PSD `Q`, `P`. Block-positivity is not established here;
/// see [`crate::certification::blockpos_scan`].
#[derive(Debug, Clone, PartialEq)]
pub struct WitnessCandidate {
    op: HermitianOp,
}

impl WitnessCandidate {
    pub fn op(&self) -> &HermitianOp {
        &self.op
    }

    pub fn into_op(self) -> HermitianOp {
        self.op
    }
}

pub fn witness_from_difference(q: &HermitianOp, p: &HermitianOp) -> Result<WitnessCandidate> {
    for op in [q, p] {
        let (ok, spec) = is_psd(op, PSD_TOL)?;
        if !ok {
            return Err(Error::NotPsd {
                min_eigenvalue: spec.min(),
            });
        }
    }
    Ok(WitnessCandidate { op: q.try_sub(p)? })
}
