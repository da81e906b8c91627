//! Machine-checkable certificates.
//!
//! Every certificate stores the numbers it was decided on, so a reader holding
//! the operators can recompute them with [`Certificate::revalidate`].
//! Indecomposability is certified by a sufficient condition only (a PPT state
//! the witness detects); a negative verdict means "not certified", never
//! "decomposable". Atomicity is always conditional on an external Schmidt
//! number fact recorded in `assumptions`.

use nalgebra::linalg::SVD;
use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;
use rand_distr::{Distribution, StandardNormal};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::detection::ZERO_TOL;
use crate::linalg::{is_psd, min_eigenpair, partial_transpose, psd_cutoff, trace_pair, PSD_TOL};
use crate::{CMatrix, CVector, Error, HermitianOp, Result, SigmaVector, TensorSpace, C64};

/// Values of the block-positivity objective below this are violations.
pub const NEGATIVITY_CUTOFF: f64 = -1e-8;

/// Relative agreement required when re-deriving stored evidence.
const REVALIDATE_TOL: f64 = 1e-12;

/// Default assumption recorded by atomicity certificates for the `ρ_γ` family.
pub const HA_SCHMIDT_ASSUMPTION: &str =
    "SN(rho) <= 2 and SN((1 x T) rho) <= 2 for the detected state (Ha's result on rho_gamma; not verified here)";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CertificateKind {
    Ppt,
    Detection,
    Indecomposable,
    AtomicConditional,
    BlockposScan,
    CompletelyCopositive,
}

/// How much a `true` verdict means.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Qualifier {
    /// Decided by eigenvalue and trace inequalities on the stored operators.
    Exact,
    /// Holds provided the recorded assumptions hold.
    Conditional,
    /// Result of a randomized local search; a pass is not a proof.
    Heuristic,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct Evidence {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sigma: Option<SigmaVector>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub trace: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub detection_cutoff: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub min_eigenvalue: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub psd_tolerance: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub psd_cutoff: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub scan: Option<ScanEvidence>,
}

/// Outcome of [`blockpos_scan`]: the best product vector `x ⊗ y` found.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScanEvidence {
    pub minimum: f64,
    pub negativity_cutoff: f64,
    pub restarts: usize,
    pub max_iters: usize,
    pub conv_tol: f64,
    pub seed: u64,
    pub best_restart: usize,
    pub total_iterations: usize,
    /// `[re, im]` amplitudes of the minimizing local vectors.
    pub x: Vec<[f64; 2]>,
    pub y: Vec<[f64; 2]>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Certificate {
    pub kind: CertificateKind,
    pub verdict: bool,
    pub qualifier: Qualifier,
    pub evidence: Evidence,
    pub assumptions: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
}

impl Certificate {
    fn exact(kind: CertificateKind, verdict: bool, evidence: Evidence) -> Self {
        Self {
            kind,
            verdict,
            qualifier: Qualifier::Exact,
            evidence,
            assumptions: Vec::new(),
            seed: None,
        }
    }

    /// Recomputes the stored evidence from the operators and checks that the
    /// verdict follows from it. Operands: `[rho]` for `ppt`, `[w]` for
    /// `completely-copositive` and `blockpos-scan`, `[w, rho]` otherwise.
    pub fn revalidate(&self, operands: &[&HermitianOp]) -> Result<bool> {
        let expect = match self.kind {
            CertificateKind::Ppt | CertificateKind::CompletelyCopositive | CertificateKind::BlockposScan => 1,
            _ => 2,
        };
        if operands.len() != expect {
            return Err(Error::InvalidParameter(format!(
                "{:?} certificate needs {expect} operands, got {}",
                self.kind,
                operands.len()
            )));
        }
        let ev = &self.evidence;
        let ppt_ok = |op: &HermitianOp| -> Result<Option<bool>> {
            let (Some(sigma), Some(stored), Some(tol), Some(cutoff)) =
                (&ev.sigma, ev.min_eigenvalue, ev.psd_tolerance, ev.psd_cutoff)
            else {
                return Ok(None);
            };
            let pt = partial_transpose(op, sigma)?;
            let spec = pt.spectrum()?;
            let scale = spec.spectral_norm().max(1.0);
            if (spec.min() - stored).abs() > REVALIDATE_TOL * scale
                || (psd_cutoff(&spec, tol) - cutoff).abs() > REVALIDATE_TOL * scale
            {
                return Ok(None);
            }
            Ok(Some(stored >= -cutoff))
        };
        let trace_ok = |w: &HermitianOp, rho: &HermitianOp| -> Result<Option<bool>> {
            let (Some(stored), Some(cutoff)) = (ev.trace, ev.detection_cutoff) else {
                return Ok(None);
            };
            let t = trace_pair(w, rho)?;
            if (t - stored).abs() > REVALIDATE_TOL * stored.abs().max(1.0) {
                return Ok(None);
            }
            Ok(Some(stored < -cutoff))
        };
        let derived = match self.kind {
            CertificateKind::Ppt | CertificateKind::CompletelyCopositive => ppt_ok(operands[0])?,
            CertificateKind::Detection => trace_ok(operands[0], operands[1])?,
            CertificateKind::Indecomposable | CertificateKind::AtomicConditional => {
                match (ppt_ok(operands[1])?, trace_ok(operands[0], operands[1])?) {
                    (Some(p), Some(t)) => Some(p && t),
                    _ => None,
                }
            }
            CertificateKind::BlockposScan => match &ev.scan {
                Some(scan) => {
                    let x = from_pairs(&scan.x);
                    let y = from_pairs(&scan.y);
                    let value = product_expectation(operands[0], &x, &y)?;
                    if (value - scan.minimum).abs() > REVALIDATE_TOL * operands[0].matrix().norm().max(1.0) {
                        None
                    } else {
                        Some(scan.minimum >= scan.negativity_cutoff)
                    }
                }
                None => None,
            },
        };
        Ok(derived == Some(self.verdict))
    }
}

fn ppt_evidence(op: &HermitianOp, sigma: &SigmaVector) -> Result<(bool, Evidence)> {
    let pt = partial_transpose(op, sigma)?;
    let (ok, spec) = is_psd(&pt, PSD_TOL)?;
    Ok((
        ok,
        Evidence {
            sigma: Some(sigma.clone()),
            min_eigenvalue: Some(spec.min()),
            psd_tolerance: Some(PSD_TOL),
            psd_cutoff: Some(psd_cutoff(&spec, PSD_TOL)),
            ..Evidence::default()
        },
    ))
}

fn require_state(rho: &HermitianOp) -> Result<()> {
    if (rho.trace() - 1.0).abs() > crate::detection::TRACE_TOL {
        return Err(Error::InvalidParameter(format!(
            "state has trace {}, not 1",
            rho.trace()
        )));
    }
    let (ok, spec) = is_psd(rho, PSD_TOL)?;
    if !ok {
        return Err(Error::NotPsd {
            min_eigenvalue: spec.min(),
        });
    }
    Ok(())
}

/// PSD verdict on `τ^σ rho` for a unit-trace PSD `rho`.
pub fn certify_ppt(rho: &HermitianOp, sigma: &SigmaVector) -> Result<Certificate> {
    sigma.check_against(rho.space())?;
    require_state(rho)?;
    let (ok, ev) = ppt_evidence(rho, sigma)?;
    Ok(Certificate::exact(CertificateKind::Ppt, ok, ev))
}

/// `Tr(W rho) < -1e-12`.
pub fn certify_detection(w: &HermitianOp, rho: &HermitianOp) -> Result<Certificate> {
    let t = trace_pair(w, rho)?;
    let ev = Evidence {
        trace: Some(t),
        detection_cutoff: Some(ZERO_TOL),
        ..Evidence::default()
    };
    Ok(Certificate::exact(CertificateKind::Detection, t < -ZERO_TOL, ev))
}

fn detection_and_ppt(w: &HermitianOp, rho: &HermitianOp, sigma: &SigmaVector) -> Result<(bool, Evidence)> {
    let t = trace_pair(w, rho)?;
    let (ppt, mut ev) = ppt_evidence(rho, sigma)?;
    ev.trace = Some(t);
    ev.detection_cutoff = Some(ZERO_TOL);
    Ok((ppt && t < -ZERO_TOL, ev))
}

/// Certifies `w` indecomposable by exhibiting the σ-PPT state `rho` it detects.
pub fn certify_indecomposable(w: &HermitianOp, rho: &HermitianOp, sigma: &SigmaVector) -> Result<Certificate> {
    let (ok, ev) = detection_and_ppt(w, rho, sigma)?;
    Ok(Certificate::exact(CertificateKind::Indecomposable, ok, ev))
}

/// Atomicity conditional on `assumption` (a Schmidt-number bound on `rho`
/// and its partial transpose that is not checked here). The numeric part
/// requires `rho` to be PPT and detected by `w`.
pub fn certify_atomic_conditional(w: &HermitianOp, rho: &HermitianOp, assumption: &str) -> Result<Certificate> {
    if assumption.trim().is_empty() {
        return Err(Error::InvalidParameter(
            "atomicity certificates need a stated assumption".into(),
        ));
    }
    if !w.space().is_bipartite() {
        return Err(Error::NotBipartite(w.space().parties()));
    }
    let (ok, ev) = detection_and_ppt(w, rho, &SigmaVector::second_of_two())?;
    Ok(Certificate {
        kind: CertificateKind::AtomicConditional,
        verdict: ok,
        qualifier: Qualifier::Conditional,
        evidence: ev,
        assumptions: vec![assumption.to_string()],
        seed: None,
    })
}

/// PSD verdict on `(1 ⊗ τ) w`: the map behind `w` is completely copositive.
pub fn certify_completely_copositive(w: &HermitianOp) -> Result<Certificate> {
    if !w.space().is_bipartite() {
        return Err(Error::NotBipartite(w.space().parties()));
    }
    let (ok, ev) = ppt_evidence(w, &SigmaVector::second_of_two())?;
    Ok(Certificate::exact(CertificateKind::CompletelyCopositive, ok, ev))
}

/// Schmidt rank of a unit vector on `d1 ⊗ d2`: the number of singular values
/// of its `d1 x d2` reshaping above `tol * s_max`.
pub fn schmidt_rank(v: &CVector, space: &TensorSpace, tol: f64) -> Result<usize> {
    if !space.is_bipartite() {
        return Err(Error::NotBipartite(space.parties()));
    }
    if v.len() != space.total() {
        return Err(Error::mismatch(space.total(), v.len()));
    }
    let norm = v.norm();
    if (norm - 1.0).abs() > 1e-10 {
        return Err(Error::NonUnitVector(norm));
    }
    let (d1, d2) = (space.dims()[0], space.dims()[1]);
    let m = CMatrix::from_fn(d1, d2, |i, j| v[i * d2 + j]);
    let svd = SVD::try_new(m, false, false, f64::EPSILON, 10_000)
        .ok_or_else(|| Error::Numeric("SVD did not converge".into()))?;
    let smax = svd.singular_values.max();
    Ok(svd.singular_values.iter().filter(|&&s| s > tol * smax).count())
}

/// Settings of the block-positivity scan.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ScanConfig {
    pub restarts: usize,
    pub max_iters: usize,
    pub conv_tol: f64,
    pub seed: u64,
}

impl Default for ScanConfig {
    fn default() -> Self {
        Self {
            restarts: 100,
            max_iters: 500,
            conv_tol: 1e-12,
            seed: 0,
        }
    }
}

impl ScanConfig {
    pub fn with_seed(seed: u64) -> Self {
        Self {
            seed,
            ..Self::default()
        }
    }

    fn validate(&self) -> Result<()> {
        if self.restarts < 1 || self.max_iters < 1 {
            return Err(Error::InvalidParameter("restarts and max_iters must be >= 1".into()));
        }
        if !self.conv_tol.is_finite() || self.conv_tol <= 0.0 {
            return Err(Error::InvalidParameter(format!(
                "conv_tol = {} must be > 0",
                self.conv_tol
            )));
        }
        Ok(())
    }
}

/// Certificate plus the per-restart objective trajectories.
#[derive(Debug, Clone)]
pub struct ScanOutcome {
    pub certificate: Certificate,
    /// Objective after the random start and after each accepted iteration.
    pub trajectories: Vec<Vec<f64>>,
}

struct RestartResult {
    value: f64,
    x: CVector,
    y: CVector,
    trajectory: Vec<f64>,
}

fn to_pairs(v: &CVector) -> Vec<[f64; 2]> {
    v.iter().map(|z| [z.re, z.im]).collect()
}

fn from_pairs(p: &[[f64; 2]]) -> CVector {
    CVector::from_iterator(p.len(), p.iter().map(|[re, im]| C64::new(*re, *im)))
}

/// `⟨x ⊗ y| W |x ⊗ y⟩`.
pub fn product_expectation(w: &HermitianOp, x: &CVector, y: &CVector) -> Result<f64> {
    if !w.space().is_bipartite() {
        return Err(Error::NotBipartite(w.space().parties()));
    }
    let (d1, d2) = (w.space().dims()[0], w.space().dims()[1]);
    if x.len() != d1 || y.len() != d2 {
        return Err(Error::mismatch(
            format!("{d1}, {d2}"),
            format!("{}, {}", x.len(), y.len()),
        ));
    }
    let v = crate::linalg::kron(
        &CMatrix::from_column_slice(d1, 1, x.as_slice()),
        &CMatrix::from_column_slice(d2, 1, y.as_slice()),
    );
    Ok((v.adjoint() * w.matrix() * &v)[(0, 0)].re)
}

/// `M[i,i'] = y† W_{(i,·),(i',·)} y`, the form seen by `x` with `y` fixed.
fn contract_second(w: &CMatrix, d1: usize, d2: usize, y: &CVector) -> CMatrix {
    let mut m = CMatrix::zeros(d1, d1);
    for i in 0..d1 {
        for ip in 0..d1 {
            let block = w.view((i * d2, ip * d2), (d2, d2));
            m[(i, ip)] = y.dotc(&(block * y));
        }
    }
    hermitize(m)
}

/// `M[j,j'] = Σ conj(x_i) x_i' W_{(i,j),(i',j')}`, the form seen by `y`.
fn contract_first(w: &CMatrix, d1: usize, d2: usize, x: &CVector) -> CMatrix {
    let mut m = CMatrix::zeros(d2, d2);
    for i in 0..d1 {
        for ip in 0..d1 {
            let coeff = x[i].conj() * x[ip];
            if coeff != C64::new(0.0, 0.0) {
                m += w.view((i * d2, ip * d2), (d2, d2)) * coeff;
            }
        }
    }
    hermitize(m)
}

fn hermitize(m: CMatrix) -> CMatrix {
    (&m + m.adjoint()) * C64::new(0.5, 0.0)
}

fn haar_vector(rng: &mut ChaCha20Rng, d: usize) -> CVector {
    let v = CVector::from_fn(d, |_, _| {
        C64::new(StandardNormal.sample(rng), StandardNormal.sample(rng))
    });
    let n = v.norm();
    v / C64::new(n, 0.0)
}

fn run_restart(w: &HermitianOp, config: &ScanConfig, restart: usize) -> Result<RestartResult> {
    let (d1, d2) = (w.space().dims()[0], w.space().dims()[1]);
    let mut rng = ChaCha20Rng::seed_from_u64(config.seed);
    rng.set_stream(restart as u64);
    let mut x = haar_vector(&mut rng, d1);
    let mut y = haar_vector(&mut rng, d2);
    let mut value = product_expectation(w, &x, &y)?;
    let mut trajectory = vec![value];
    for _ in 0..config.max_iters {
        let start = value;
        let (_, x_new) = min_eigenpair(&contract_second(w.matrix(), d1, d2, &y))?;
        let vx = product_expectation(w, &x_new, &y)?;
        if vx <= value {
            x = x_new;
            value = vx;
        }
        let (_, y_new) = min_eigenpair(&contract_first(w.matrix(), d1, d2, &x))?;
        let vy = product_expectation(w, &x, &y_new)?;
        if vy <= value {
            y = y_new;
            value = vy;
        }
        trajectory.push(value);
        if start - value < config.conv_tol {
            break;
        }
    }
    Ok(RestartResult {
        value,
        x,
        y,
        trajectory,
    })
}

/// Heuristic search for a product vector with `⟨x⊗y|W|x⊗y⟩ < 0`.
///
/// Alternating minimization: with `y` fixed the objective is a Hermitian
/// form in `x` minimized by its lowest eigenvector, and symmetrically for `y`.
/// Each restart starts from Haar-random local vectors seeded by
/// `(config.seed, restart index)`, so results are reproducible and
/// independent of scheduling.
pub fn blockpos_scan_detailed(w: &HermitianOp, config: &ScanConfig) -> Result<ScanOutcome> {
    if !w.space().is_bipartite() {
        return Err(Error::NotBipartite(w.space().parties()));
    }
    config.validate()?;
    let results = (0..config.restarts)
        .into_par_iter()
        .map(|r| run_restart(w, config, r))
        .collect::<Result<Vec<_>>>()?;
    let (best_restart, best) = results
        .iter()
        .enumerate()
        .min_by(|a, b| a.1.value.total_cmp(&b.1.value).then(a.0.cmp(&b.0)))
        .expect("at least one restart");
    let scan = ScanEvidence {
        minimum: best.value,
        negativity_cutoff: NEGATIVITY_CUTOFF,
        restarts: config.restarts,
        max_iters: config.max_iters,
        conv_tol: config.conv_tol,
        seed: config.seed,
        best_restart,
        total_iterations: results.iter().map(|r| r.trajectory.len() - 1).sum(),
        x: to_pairs(&best.x),
        y: to_pairs(&best.y),
    };
    let certificate = Certificate {
        kind: CertificateKind::BlockposScan,
        verdict: best.value >= NEGATIVITY_CUTOFF,
        qualifier: Qualifier::Heuristic,
        evidence: Evidence {
            scan: Some(scan),
            ..Evidence::default()
        },
        assumptions: Vec::new(),
        seed: Some(config.seed),
    };
    Ok(ScanOutcome {
        certificate,
        trajectories: results.into_iter().map(|r| r.trajectory).collect(),
    })
}

pub fn blockpos_scan(w: &HermitianOp, config: &ScanConfig) -> Result<Certificate> {
    blockpos_scan_detailed(w, config).map(|o| o.certificate)
}
