//! σ-PPT generalization to `N` parties.
//!
//! A state is σ-PPT when `τ^σ ρ = (τ^{σ_1} ⊗ … ⊗ τ^{σ_N}) ρ >= 0`. A witness
//! of the form `Q1 + τ^σ Q2` with `Q1, Q2 >= 0` cannot detect such a state,
//! so a detected σ-PPT state certifies σ-indecomposability. Thresholds are
//! dimension agnostic and delegate to [`crate::detection`]; for `N = 2` and
//! `σ = (0, 1)` every function here returns exactly its bipartite result.

use crate::certification::{certify_indecomposable, certify_ppt, Certificate};
use crate::detection::{
    alpha_threshold, lambda_threshold, MixingFamily, PerturbationFamily, SeparableState, Threshold,
};
use crate::{Error, HermitianOp, Result, SigmaVector};

/// Seed pair `(W0, rho0)` together with the transposition pattern.
#[derive(Debug, Clone)]
pub struct MultipartitePair {
    w0: HermitianOp,
    rho0: HermitianOp,
    sigma: SigmaVector,
}

impl MultipartitePair {
    pub fn new(w0: HermitianOp, rho0: HermitianOp, sigma: SigmaVector) -> Result<Self> {
        if w0.space() != rho0.space() {
            return Err(Error::mismatch(w0.space(), rho0.space()));
        }
        sigma.check_against(w0.space())?;
        Ok(Self { w0, rho0, sigma })
    }

    pub fn w0(&self) -> &HermitianOp {
        &self.w0
    }

    pub fn rho0(&self) -> &HermitianOp {
        &self.rho0
    }

    pub fn sigma(&self) -> &SigmaVector {
        &self.sigma
    }

    /// `rho_alpha = (1-alpha) rho0 + alpha sigma_sep`, checked against this
    /// pair's pattern when sampled.
    pub fn mixing_family(&self, sigma_sep: SeparableState) -> Result<MixingFamily> {
        MixingFamily::with_pattern(self.w0.clone(), self.rho0.clone(), sigma_sep, self.sigma.clone())
    }

    pub fn perturbation_family(&self, p: HermitianOp) -> Result<PerturbationFamily> {
        PerturbationFamily::new(self.w0.clone(), p, self.rho0.clone())
    }
}

/// PSD verdict on `τ^σ rho`.
pub fn sigma_ppt_check(rho: &HermitianOp, sigma: &SigmaVector) -> Result<Certificate> {
    certify_ppt(rho, sigma)
}

/// σ-PPT state detected by the pair's witness.
pub fn sigma_indecomposable_certificate(pair: &MultipartitePair) -> Result<Certificate> {
    certify_indecomposable(&pair.w0, &pair.rho0, &pair.sigma)
}

pub fn multipartite_alpha_threshold(w: &HermitianOp, rho0: &HermitianOp, sigma_sep: &HermitianOp) -> Result<Threshold> {
    alpha_threshold(w, rho0, sigma_sep)
}

pub fn multipartite_lambda_threshold(w0: &HermitianOp, p: &HermitianOp, rho0: &HermitianOp) -> Result<Threshold> {
    lambda_threshold(w0, p, rho0)
}
