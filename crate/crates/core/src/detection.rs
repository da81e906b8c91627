//! Detection thresholds and the two convex families grown from a seed pair.
//!
//! Given `Tr(W0 rho0) < 0`, linearity of the trace gives both suprema in
//! closed form:
//!
//! * mixing `rho_alpha = (1-alpha) rho0 + alpha sigma` stays detected for
//!   `alpha < -T0 / (-T0 + Tsigma)`;
//! * perturbing `W_lambda = W0 + lambda P` keeps detecting `rho0` for
//!   `lambda < -T0 / Tr(P rho0)`.
//!
//! Thresholds are exclusive bounds; samplers reject parameters equal to them.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::constructions::{ha_state, perturbed_witness, StateFamilyParams, WitnessFamilyParams};
use crate::linalg::{is_psd, partial_transpose, trace_pair, PSD_TOL};
use crate::{CMatrix, Error, HermitianOp, Result, SigmaVector, TensorSpace, C64};

/// Absolute zero for denominators and for the strict detection test.
pub const ZERO_TOL: f64 = 1e-12;

/// A declared-separable state may pair with a witness down to `-SEPARABLE_TOL`.
pub const SEPARABLE_TOL: f64 = 1e-10;

/// Unit-trace tolerance for states entering a family.
pub const TRACE_TOL: f64 = 1e-10;

/// Why a threshold does not exist.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum NoneReason {
    /// `Tr(W rho0) >= 0`: the seed pair does not detect, the sup is empty.
    NotDetected,
    /// `Tr(W sigma) < 0` for a state declared separable.
    SeparableDetected,
    /// `Tr(W_lambda rho0) >= 0`: lambda is at or above its own threshold.
    LambdaOutOfRange,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Threshold {
    Finite(f64),
    Infinite,
    None(NoneReason),
}

impl Threshold {
    pub fn finite(&self) -> Option<f64> {
        match *self {
            Threshold::Finite(t) => Some(t),
            _ => None,
        }
    }

    pub fn is_none(&self) -> bool {
        matches!(self, Threshold::None(_))
    }

    /// Whether `x` lies in the open interval `[0, threshold)`.
    pub fn admits(&self, x: f64) -> bool {
        x.is_finite()
            && x >= 0.0
            && match *self {
                Threshold::Finite(t) => x < t,
                Threshold::Infinite => true,
                Threshold::None(_) => false,
            }
    }

    fn bound_for_error(&self) -> f64 {
        match *self {
            Threshold::Finite(t) => t,
            Threshold::Infinite => f64::INFINITY,
            Threshold::None(_) => 0.0,
        }
    }
}

fn require_psd(op: &HermitianOp) -> Result<()> {
    let (ok, spec) = is_psd(op, PSD_TOL)?;
    if ok {
        Ok(())
    } else {
        Err(Error::NotPsd {
            min_eigenvalue: spec.min(),
        })
    }
}

fn require_state(op: &HermitianOp) -> Result<()> {
    if (op.trace() - 1.0).abs() > TRACE_TOL {
        return Err(Error::InvalidParameter(format!(
            "state has trace {}, not 1",
            op.trace()
        )));
    }
    require_psd(op)
}

/// `sup {alpha in [0,1] | Tr(W rho_alpha) < 0}` in closed form.
///
/// Returns `1` when `Tr(W sigma)` is (numerically) zero, since the pairing
/// then stays negative on all of `[0, 1)`.
pub fn alpha_threshold(w: &HermitianOp, rho0: &HermitianOp, sigma: &HermitianOp) -> Result<Threshold> {
    let t0 = trace_pair(w, rho0)?;
    if t0 >= -ZERO_TOL {
        return Ok(Threshold::None(NoneReason::NotDetected));
    }
    let ts = trace_pair(w, sigma)?;
    if ts < -SEPARABLE_TOL {
        return Ok(Threshold::None(NoneReason::SeparableDetected));
    }
    if ts <= ZERO_TOL {
        return Ok(Threshold::Finite(1.0));
    }
    Ok(Threshold::Finite(-t0 / (-t0 + ts)))
}

/// `sup {lambda >= 0 | Tr((W0 + lambda P) rho0) < 0}` in closed form.
pub fn lambda_threshold(w0: &HermitianOp, p: &HermitianOp, rho0: &HermitianOp) -> Result<Threshold> {
    require_psd(p)?;
    let t0 = trace_pair(w0, rho0)?;
    if t0 >= -ZERO_TOL {
        return Ok(Threshold::None(NoneReason::NotDetected));
    }
    let tp = trace_pair(p, rho0)?;
    if tp <= ZERO_TOL {
        return Ok(Threshold::Infinite);
    }
    Ok(Threshold::Finite(-t0 / tp))
}

/// Bound on `mu` in `W0 + lambda P + mu Q` for a fixed admissible `lambda`.
pub fn mu_threshold(
    w0: &HermitianOp,
    p: &HermitianOp,
    q: &HermitianOp,
    lambda: f64,
    rho0: &HermitianOp,
) -> Result<Threshold> {
    if !lambda.is_finite() || lambda < 0.0 {
        return Err(Error::InvalidParameter(format!(
            "lambda = {lambda} must be finite and >= 0"
        )));
    }
    require_psd(p)?;
    require_psd(q)?;
    let t0 = trace_pair(w0, rho0)?;
    if t0 >= -ZERO_TOL {
        return Ok(Threshold::None(NoneReason::NotDetected));
    }
    let t_lambda = t0 + lambda * trace_pair(p, rho0)?;
    if t_lambda >= -ZERO_TOL {
        return Ok(Threshold::None(NoneReason::LambdaOutOfRange));
    }
    let tq = trace_pair(q, rho0)?;
    if tq <= ZERO_TOL {
        return Ok(Threshold::Infinite);
    }
    Ok(Threshold::Finite(-t_lambda / tq))
}

/// Where a state declared separable came from. The toolkit cannot decide
/// separability; library-built entries are separable by construction.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SeparableProvenance {
    MaximallyMixed,
    ProductState,
    /// `rho_{gamma=1}` at `d = 3`, a known separable state.
    HaBoundary,
    CallerDeclared,
}

/// A unit-trace PSD state carrying a separability declaration.
#[derive(Debug, Clone, PartialEq)]
pub struct SeparableState {
    op: HermitianOp,
    provenance: SeparableProvenance,
}

impl SeparableState {
    pub fn maximally_mixed(space: TensorSpace) -> Self {
        Self {
            op: HermitianOp::maximally_mixed(space),
            provenance: SeparableProvenance::MaximallyMixed,
        }
    }

    /// `rho_1 ⊗ … ⊗ rho_N` from single-party states.
    pub fn product(factors: &[HermitianOp]) -> Result<Self> {
        let (first, rest) = factors
            .split_first()
            .ok_or_else(|| Error::InvalidParameter("product of zero factors".into()))?;
        for f in factors {
            require_state(f)?;
        }
        let op = rest.iter().fold(first.clone(), |acc, f| acc.kron(f));
        Ok(Self {
            op,
            provenance: SeparableProvenance::ProductState,
        })
    }

    /// The pure product basis state `|i_1 … i_N⟩⟨i_1 … i_N|`.
    pub fn basis_product(space: TensorSpace, local: &[usize]) -> Result<Self> {
        if local.len() != space.parties() || local.iter().zip(space.dims()).any(|(i, d)| i >= d) {
            return Err(Error::InvalidParameter(format!(
                "basis label {local:?} invalid for {space}"
            )));
        }
        let idx = space.compose(local);
        let n = space.total();
        let mut m = CMatrix::zeros(n, n);
        m[(idx, idx)] = C64::new(1.0, 0.0);
        Ok(Self {
            op: HermitianOp::new(space, m)?,
            provenance: SeparableProvenance::ProductState,
        })
    }

    /// `rho_{gamma=1}` on `3 ⊗ 3`.
    pub fn ha_boundary() -> Result<Self> {
        Ok(Self {
            op: ha_state(&StateFamilyParams::new(3, 1.0)?)?,
            provenance: SeparableProvenance::HaBoundary,
        })
    }

    /// Caller asserts separability; only trace and positivity are checked.
    pub fn declared(op: HermitianOp) -> Result<Self> {
        require_state(&op)?;
        Ok(Self {
            op,
            provenance: SeparableProvenance::CallerDeclared,
        })
    }

    pub fn op(&self) -> &HermitianOp {
        &self.op
    }

    pub fn provenance(&self) -> &SeparableProvenance {
        &self.provenance
    }
}

/// `rho_alpha = (1-alpha) rho0 + alpha sigma_sep` together with the witness
/// that detects `rho0` and the resulting alpha threshold.
#[derive(Debug, Clone)]
pub struct MixingFamily {
    witness: HermitianOp,
    rho0: HermitianOp,
    sigma_sep: SeparableState,
    ppt_pattern: SigmaVector,
    alpha_threshold: Threshold,
}

impl MixingFamily {
    /// Bipartite families check PPT-ness under `(1 ⊗ τ)`; use
    /// [`MixingFamily::with_pattern`] for other transposition patterns.
    pub fn new(witness: HermitianOp, rho0: HermitianOp, sigma_sep: SeparableState) -> Result<Self> {
        let pattern = SigmaVector::new(
            (0..rho0.space().parties())
                .map(|k| k + 1 == rho0.space().parties())
                .collect(),
        );
        Self::with_pattern(witness, rho0, sigma_sep, pattern)
    }

    pub fn with_pattern(
        witness: HermitianOp,
        rho0: HermitianOp,
        sigma_sep: SeparableState,
        ppt_pattern: SigmaVector,
    ) -> Result<Self> {
        require_state(&rho0)?;
        if sigma_sep.op().space() != rho0.space() {
            return Err(Error::mismatch(rho0.space(), sigma_sep.op().space()));
        }
        ppt_pattern.check_against(rho0.space())?;
        let alpha_threshold = alpha_threshold(&witness, &rho0, sigma_sep.op())?;
        Ok(Self {
            witness,
            rho0,
            sigma_sep,
            ppt_pattern,
            alpha_threshold,
        })
    }

    pub fn witness(&self) -> &HermitianOp {
        &self.witness
    }

    pub fn rho0(&self) -> &HermitianOp {
        &self.rho0
    }

    pub fn sigma_sep(&self) -> &SeparableState {
        &self.sigma_sep
    }

    pub fn ppt_pattern(&self) -> &SigmaVector {
        &self.ppt_pattern
    }

    pub fn alpha_threshold(&self) -> Threshold {
        self.alpha_threshold
    }

    /// `(1-alpha) rho0 + alpha sigma_sep`, without range checks.
    pub fn state_at(&self, alpha: f64) -> HermitianOp {
        self.rho0
            .scale(1.0 - alpha)
            .try_add_scaled(self.sigma_sep.op(), alpha)
            .expect("spaces checked at construction")
    }
}

/// Members of the PPT family detected by the seed witness. Every returned
/// state is verified PSD, unit trace, PPT under the family pattern and
/// detected.
pub fn sample_sppt(family: &MixingFamily, alphas: &[f64]) -> Result<Vec<HermitianOp>> {
    let threshold = family.alpha_threshold();
    alphas
        .iter()
        .map(|&alpha| {
            if !threshold.admits(alpha) {
                return Err(Error::OutOfRange {
                    value: alpha,
                    threshold: threshold.bound_for_error(),
                });
            }
            let rho = family.state_at(alpha);
            let t = trace_pair(family.witness(), &rho)?;
            if t >= 0.0 {
                return Err(Error::Postcondition(format!(
                    "alpha = {alpha}: Tr(W rho) = {t} not negative"
                )));
            }
            require_state(&rho)?;
            let pt = partial_transpose(&rho, family.ppt_pattern())?;
            let (ppt, spec) = is_psd(&pt, PSD_TOL)?;
            if !ppt {
                return Err(Error::Postcondition(format!(
                    "alpha = {alpha}: state is not PPT (min eigenvalue {:e})",
                    spec.min()
                )));
            }
            Ok(rho)
        })
        .collect()
}

/// `W_lambda = W0 + lambda P` with the lambda threshold for a fixed `rho0`.
#[derive(Debug, Clone)]
pub struct PerturbationFamily {
    w0: HermitianOp,
    p: HermitianOp,
    rho0: HermitianOp,
    lambda_threshold: Threshold,
}

impl PerturbationFamily {
    pub fn new(w0: HermitianOp, p: HermitianOp, rho0: HermitianOp) -> Result<Self> {
        let lambda_threshold = lambda_threshold(&w0, &p, &rho0)?;
        Ok(Self {
            w0,
            p,
            rho0,
            lambda_threshold,
        })
    }

    pub fn w0(&self) -> &HermitianOp {
        &self.w0
    }

    pub fn p(&self) -> &HermitianOp {
        &self.p
    }

    pub fn rho0(&self) -> &HermitianOp {
        &self.rho0
    }

    pub fn lambda_threshold(&self) -> Threshold {
        self.lambda_threshold
    }

    pub fn witness_at(&self, lambda: f64) -> HermitianOp {
        self.w0
            .try_add_scaled(&self.p, lambda)
            .expect("spaces checked by lambda_threshold")
    }
}

/// Witnesses of the perturbation family that still detect `rho0`.
pub fn sample_wind(family: &PerturbationFamily, lambdas: &[f64]) -> Result<Vec<HermitianOp>> {
    let threshold = family.lambda_threshold();
    lambdas
        .iter()
        .map(|&lambda| {
            if !threshold.admits(lambda) {
                return Err(Error::OutOfRange {
                    value: lambda,
                    threshold: threshold.bound_for_error(),
                });
            }
            let w = family.witness_at(lambda);
            let t = trace_pair(&w, family.rho0())?;
            if t >= 0.0 {
                return Err(Error::Postcondition(format!(
                    "lambda = {lambda}: Tr(W rho0) = {t} not negative"
                )));
            }
            Ok(w)
        })
        .collect()
}

/// A witness with a state it detects, usable as the seed of new families.
#[derive(Debug, Clone)]
pub struct SeedPair {
    pub witness: HermitianOp,
    pub state: HermitianOp,
    pub alpha: f64,
}

/// Pairs `w_new` with the family member at half of its own alpha bound.
/// Returns `None` when `w_new` does not detect `rho0`.
pub fn chain_pair(w_new: &HermitianOp, family: &MixingFamily) -> Result<Option<SeedPair>> {
    match alpha_threshold(w_new, family.rho0(), family.sigma_sep().op())? {
        Threshold::Finite(t) => {
            let alpha = t / 2.0;
            Ok(Some(SeedPair {
                witness: w_new.clone(),
                state: family.state_at(alpha),
                alpha,
            }))
        }
        Threshold::Infinite | Threshold::None(_) => Ok(None),
    }
}

/// One tabulated pairing. `detected == (trace < 0)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub gamma: Option<f64>,
    pub lambda: Option<f64>,
    pub mu: Option<f64>,
    pub alpha: Option<f64>,
    pub trace: f64,
    pub detected: bool,
}

impl SweepRow {
    fn new(gamma: Option<f64>, lambda: Option<f64>, mu: Option<f64>, alpha: Option<f64>, trace: f64) -> Self {
        Self {
            gamma,
            lambda,
            mu,
            alpha,
            trace,
            detected: trace < 0.0,
        }
    }
}

/// `Tr(W_{λ,μ} ρ_γ)` over a grid; rows ordered γ outer, λ middle, μ inner.
pub fn sweep(d: usize, k: usize, gammas: &[f64], lambdas: &[f64], mus: &[f64]) -> Result<Vec<SweepRow>> {
    WitnessFamilyParams::new(d, k, 0.0, 0.0)?;
    let states = gammas
        .iter()
        .map(|&g| ha_state(&StateFamilyParams::new(d, g)?))
        .collect::<Result<Vec<_>>>()?;
    let witnesses = lambdas
        .iter()
        .flat_map(|&l| mus.iter().map(move |&m| (l, m)))
        .map(|(l, m)| perturbed_witness(&WitnessFamilyParams::new(d, k, l, m)?).map(|w| (l, m, w)))
        .collect::<Result<Vec<_>>>()?;
    let per_gamma = witnesses.len();
    (0..states.len() * per_gamma)
        .into_par_iter()
        .map(|idx| {
            let (gi, wi) = (idx / per_gamma, idx % per_gamma);
            let (l, m, w) = &witnesses[wi];
            let t = trace_pair(w, &states[gi])?;
            Ok(SweepRow::new(Some(gammas[gi]), Some(*l), Some(*m), None, t))
        })
        .collect()
}

/// `Tr(W rho_alpha)` along the mixing segment, in grid order.
pub fn sweep_alpha(w: &HermitianOp, rho0: &HermitianOp, sigma: &HermitianOp, alphas: &[f64]) -> Result<Vec<SweepRow>> {
    alphas
        .par_iter()
        .map(|&a| {
            let rho = rho0.scale(1.0 - a).try_add_scaled(sigma, a)?;
            Ok(SweepRow::new(None, None, None, Some(a), trace_pair(w, &rho)?))
        })
        .collect()
}
