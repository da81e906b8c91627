//! Toolkit for manufacturing entanglement witnesses and PPT-entangled states.
//!
//! Starting from a seed pair `(W0, rho0)` where the witness `W0` detects the
//! state `rho0` (`Tr(W0 rho0) < 0`), the crate builds two open convex
//! families:
//!
//! * states `rho_alpha = (1 - alpha) rho0 + alpha sigma_sep` that `W0` still
//!   detects, for `alpha` below a closed-form threshold;
//! * witnesses `W_lambda = W0 + lambda P` (with `P >= 0`) that still detect
//!   `rho0`, for `lambda` below a closed-form threshold.
//!
//! When `rho0` is PPT, every detected mixture is a PPT-entangled state and
//! every perturbed witness is indecomposable. The modules are layered:
//!
//! * [`space`], [`hermitian`], [`linalg`]: composite-space index arithmetic,
//!   the Hermitian operator carrier, partial transposition and spectra.
//! * [`constructions`]: the `W_{d,k}` witness family, its positive maps
//!   `tau_{d,k}`, the one-parameter state family `rho_gamma`, the cyclic
//!   projectors `P`, `Q` and the Choi-Jamiolkowski correspondence.
//! * [`detection`]: thresholds, samplers, seed-pair chaining and sweeps.
//! * [`certification`]: PPT / detection / indecomposability certificates,
//!   pure-state Schmidt rank and a heuristic block-positivity scan.
//! * [`multipartite`]: the sigma-PPT generalization to `N` parties.

#![forbid(unsafe_code)]

pub mod certification;
pub mod constructions;
pub mod detection;
mod error;
pub mod hermitian;
pub mod linalg;
pub mod multipartite;
pub mod space;

pub use error::{Error, Result};
pub use hermitian::{CMatrix, CVector, HermitianOp};
pub use linalg::Spectrum;
pub use nalgebra::Complex;
pub use space::{SigmaVector, TensorSpace};

/// Complex scalar used throughout.
pub type C64 = Complex<f64>;
