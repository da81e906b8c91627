//! Composite Hilbert-space shapes and transposition patterns.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// Shape of `H_1 ⊗ ... ⊗ H_N`.
///
/// Basis vectors `e_{i_1} ⊗ ... ⊗ e_{i_N}` (zero-based local indices) map to
/// the row-major mixed-radix composite index `sum_k i_k * prod_{m>k} d_m`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "Vec<usize>", into = "Vec<usize>")]
pub struct TensorSpace {
    dims: Vec<usize>,
    strides: Vec<usize>,
    total: usize,
}

impl TensorSpace {
    pub fn new(dims: Vec<usize>) -> Result<Self> {
        if dims.is_empty() {
            return Err(Error::InvalidDims("at least one subsystem is required".into()));
        }
        if let Some(d) = dims.iter().find(|&&d| d < 2) {
            return Err(Error::InvalidDims(format!("local dimension {d} < 2")));
        }
        let mut strides = vec![1; dims.len()];
        for k in (0..dims.len() - 1).rev() {
            strides[k] = strides[k + 1] * dims[k + 1];
        }
        let total = strides[0] * dims[0];
        Ok(Self { dims, strides, total })
    }

    pub fn bipartite(d1: usize, d2: usize) -> Result<Self> {
        Self::new(vec![d1, d2])
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn total(&self) -> usize {
        self.total
    }

    pub fn parties(&self) -> usize {
        self.dims.len()
    }

    pub fn is_bipartite(&self) -> bool {
        self.dims.len() == 2
    }

    /// Row-major stride of each subsystem.
    pub fn strides(&self) -> &[usize] {
        &self.strides
    }

    /// Composite index of a tuple of local indices.
    pub fn compose(&self, local: &[usize]) -> usize {
        debug_assert_eq!(local.len(), self.dims.len());
        local.iter().zip(&self.strides).map(|(i, s)| i * s).sum()
    }

    /// Local digits of a composite index, written into `out`.
    pub fn decompose_into(&self, mut index: usize, out: &mut [usize]) {
        debug_assert_eq!(out.len(), self.dims.len());
        for (k, s) in self.strides.iter().enumerate() {
            out[k] = index / s;
            index %= s;
        }
    }

    pub fn decompose(&self, index: usize) -> Vec<usize> {
        let mut out = vec![0; self.dims.len()];
        self.decompose_into(index, &mut out);
        out
    }

    /// Concatenation `self ⊗ other`.
    pub fn tensor(&self, other: &TensorSpace) -> TensorSpace {
        let mut dims = self.dims.clone();
        dims.extend_from_slice(&other.dims);
        TensorSpace::new(dims).expect("concatenation of valid spaces is valid")
    }
}

impl TryFrom<Vec<usize>> for TensorSpace {
    type Error = Error;

    fn try_from(dims: Vec<usize>) -> Result<Self> {
        Self::new(dims)
    }
}

impl From<TensorSpace> for Vec<usize> {
    fn from(space: TensorSpace) -> Self {
        space.dims
    }
}

impl fmt::Display for TensorSpace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.dims.iter().map(|d| d.to_string()).collect();
        write!(f, "{}", parts.join("⊗"))
    }
}

/// Which subsystems a partial transposition acts on; `bits[k] == true`
/// transposes subsystem `k`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct SigmaVector {
    bits: Vec<bool>,
}

impl SigmaVector {
    pub fn new(bits: Vec<bool>) -> Self {
        Self { bits }
    }

    /// The usual bipartite partial transpose `(1 ⊗ τ)`.
    pub fn second_of_two() -> Self {
        Self::new(vec![false, true])
    }

    pub fn uniform(parties: usize, value: bool) -> Self {
        Self::new(vec![value; parties])
    }

    pub fn bits(&self) -> &[bool] {
        &self.bits
    }

    pub fn len(&self) -> usize {
        self.bits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_empty()
    }

    pub fn complement(&self) -> Self {
        Self::new(self.bits.iter().map(|b| !b).collect())
    }

    /// All `2^n` patterns in binary-counting order.
    pub fn all_patterns(parties: usize) -> impl Iterator<Item = SigmaVector> {
        (0..1usize << parties)
            .map(move |mask| SigmaVector::new((0..parties).map(|k| mask >> (parties - 1 - k) & 1 == 1).collect()))
    }

    pub(crate) fn check_against(&self, space: &TensorSpace) -> Result<()> {
        if self.bits.len() != space.parties() {
            return Err(Error::mismatch(
                format!("sigma of length {}", space.parties()),
                format!("length {}", self.bits.len()),
            ));
        }
        Ok(())
    }
}

impl fmt::Display for SigmaVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<&str> = self.bits.iter().map(|&b| if b { "1" } else { "0" }).collect();
        write!(f, "{}", parts.join(","))
    }
}

impl std::str::FromStr for SigmaVector {
    type Err = Error;

    /// Parses comma-separated bits such as `0,1,0`.
    fn from_str(s: &str) -> Result<Self> {
        s.split(',')
            .map(|t| match t.trim() {
                "0" | "false" => Ok(false),
                "1" | "true" => Ok(true),
                other => Err(Error::InvalidParameter(format!("sigma bit `{other}` is not 0 or 1"))),
            })
            .collect::<Result<Vec<_>>>()
            .map(SigmaVector::new)
    }
}
