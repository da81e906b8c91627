//! File formats: operators and map tables as JSON, numbers formatted for
//! stdout.

use std::fs;
use std::path::Path;

use ewkit::constructions::LinearMapTable;
use ewkit::{CMatrix, HermitianOp, TensorSpace, C64};
use serde::{Deserialize, Serialize};
use serde_json::{Map, Value};

use crate::error::{CliError, CliResult};

/// Largest magnitude below which every integer is exactly representable.
const EXACT_INT: f64 = 9_007_199_254_740_992.0;

/// A Hermitian operator on disk: dense row-major real and imaginary parts.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OperatorFile {
    pub dims: Vec<usize>,
    pub re: Vec<Vec<f64>>,
    #[serde(default)]
    pub im: Vec<Vec<f64>>,
    #[serde(default)]
    pub meta: Map<String, Value>,
}

/// One `φ(e_ij)` entry of a map table.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MatrixEntry {
    pub re: Vec<Vec<f64>>,
    #[serde(default)]
    pub im: Vec<Vec<f64>>,
}

/// Integer-valued floats become JSON integers; everything else is written
/// as the shortest decimal that parses back to the same `f64`.
fn number(x: f64) -> CliResult<Value> {
    if !x.is_finite() {
        return Err(CliError::usage(format!("cannot serialize non-finite value {x}")));
    }
    if x.fract() == 0.0 && x.abs() < EXACT_INT && !(x == 0.0 && x.is_sign_negative()) {
        return Ok(Value::from(x as i64));
    }
    Ok(Value::from(x))
}

fn row_json(row: &[f64]) -> CliResult<String> {
    let values = row.iter().map(|&x| number(x)).collect::<CliResult<Vec<_>>>()?;
    Ok(serde_json::to_string(&values).expect("numbers always serialize"))
}

fn matrix_json(rows: &[Vec<f64>], indent: &str) -> CliResult<String> {
    if rows.is_empty() {
        return Ok("[]".into());
    }
    let lines = rows
        .iter()
        .map(|r| row_json(r).map(|s| format!("{indent}  {s}")))
        .collect::<CliResult<Vec<_>>>()?;
    Ok(format!("[\n{}\n{indent}]", lines.join(",\n")))
}

fn split(m: &CMatrix) -> (Vec<Vec<f64>>, Vec<Vec<f64>>) {
    let rows = |f: fn(&C64) -> f64| -> Vec<Vec<f64>> {
        (0..m.nrows())
            .map(|i| (0..m.ncols()).map(|j| f(&m[(i, j)])).collect())
            .collect()
    };
    (rows(|z| z.re), rows(|z| z.im))
}

/// Rebuilds a square complex matrix, treating a missing `im` as zero.
fn join(re: &[Vec<f64>], im: &[Vec<f64>], n: usize, what: &str) -> Result<CMatrix, String> {
    let square = |rows: &[Vec<f64>]| rows.len() == n && rows.iter().all(|r| r.len() == n);
    if !square(re) {
        return Err(format!("{what}: `re` must be {n}x{n}"));
    }
    if !im.is_empty() && !square(im) {
        return Err(format!("{what}: `im` must be {n}x{n} or omitted"));
    }
    Ok(CMatrix::from_fn(n, n, |i, j| {
        C64::new(re[i][j], if im.is_empty() { 0.0 } else { im[i][j] })
    }))
}

fn read_text(path: &Path) -> CliResult<String> {
    fs::read_to_string(path).map_err(|e| CliError::file(path, e))
}

/// Writes to `path`, or to stdout when `path` is `None`.
pub fn write_output(path: Option<&Path>, text: &str) -> CliResult<()> {
    match path {
        Some(p) => fs::write(p, text).map_err(|e| CliError::file(p, e)),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

impl OperatorFile {
    pub fn from_op(op: &HermitianOp, meta: Map<String, Value>) -> Self {
        let (re, im) = split(op.matrix());
        Self {
            dims: op.space().dims().to_vec(),
            re,
            im,
            meta,
        }
    }

    /// Parses and validates shape and Hermiticity.
    pub fn parse(text: &str) -> Result<(HermitianOp, Map<String, Value>), String> {
        let file: OperatorFile = serde_json::from_str(text).map_err(|e| e.to_string())?;
        let op = file.to_op()?;
        Ok((op, file.meta))
    }

    pub fn to_op(&self) -> Result<HermitianOp, String> {
        let space = TensorSpace::new(self.dims.clone()).map_err(|e| e.to_string())?;
        let m = join(&self.re, &self.im, space.total(), "operator")?;
        HermitianOp::new(space, m).map_err(|e| e.to_string())
    }

    pub fn read(path: &Path) -> CliResult<(HermitianOp, Map<String, Value>)> {
        Self::parse(&read_text(path)?).map_err(|e| CliError::file(path, e))
    }

    pub fn to_json(&self) -> CliResult<String> {
        let dims = serde_json::to_string(&self.dims).expect("dims serialize");
        let meta = serde_json::to_string(&self.meta).expect("meta serializes");
        Ok(format!(
            "{{\n  \"dims\": {dims},\n  \"re\": {},\n  \"im\": {},\n  \"meta\": {meta}\n}}\n",
            matrix_json(&self.re, "  ")?,
            matrix_json(&self.im, "  ")?
        ))
    }
}

/// Serializes a map table as a JSON array of `d_in²` matrices, `φ(e_ij)` at
/// position `i * d_in + j`.
pub fn map_to_json(map: &LinearMapTable) -> CliResult<String> {
    let entries = map
        .images()
        .iter()
        .map(|m| {
            let (re, im) = split(m);
            Ok(format!(
                "  {{\n    \"re\": {},\n    \"im\": {}\n  }}",
                matrix_json(&re, "    ")?,
                matrix_json(&im, "    ")?
            ))
        })
        .collect::<CliResult<Vec<_>>>()?;
    Ok(format!("[\n{}\n]\n", entries.join(",\n")))
}

/// Reads a map table. Shape problems are file errors; a map that fails to
/// preserve Hermiticity is a parameter error.
pub fn read_map(path: &Path) -> CliResult<LinearMapTable> {
    let entries: Vec<MatrixEntry> = serde_json::from_str(&read_text(path)?).map_err(|e| CliError::file(path, e))?;
    let d_in = (entries.len() as f64).sqrt().round() as usize;
    if d_in < 2 || d_in * d_in != entries.len() {
        return Err(CliError::file(
            path,
            format!("map table needs d² >= 4 entries, found {}", entries.len()),
        ));
    }
    let d_out = entries[0].re.len();
    let images = entries
        .iter()
        .enumerate()
        .map(|(idx, e)| join(&e.re, &e.im, d_out, &format!("entry {idx}")))
        .collect::<Result<Vec<_>, _>>()
        .map_err(|e| CliError::file(path, e))?;
    Ok(LinearMapTable::new(d_in, d_out, images)?)
}

/// Six decimals with trailing zeros removed; negative zero prints as `0`.
pub fn fixed6_trimmed(x: f64) -> String {
    let s = format!("{x:.6}");
    let s = s.trim_end_matches('0').trim_end_matches('.');
    if s == "-0" {
        "0".into()
    } else {
        s.to_string()
    }
}

/// Six decimals, keeping trailing zeros.
pub fn fixed6(x: f64) -> String {
    let s = format!("{x:.6}");
    if s == "-0.000000" {
        "0.000000".into()
    } else {
        s
    }
}
