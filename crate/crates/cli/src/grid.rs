use crate::error::{CliError, CliResult};

/// Parses `start:stop:step` (start included, stop excluded) or a single
/// value. Grid points are rounded to 12 decimals so that `0.1:1.0:0.1`
/// yields `0.3`, not `0.30000000000000004`.
pub fn parse_grid(spec: &str) -> CliResult<Vec<f64>> {
    let spec = spec.trim();
    if spec.is_empty() {
        return Ok(Vec::new());
    }
    let number = |s: &str| -> CliResult<f64> {
        let x: f64 = s
            .trim()
            .parse()
            .map_err(|_| CliError::usage(format!("grid `{spec}`: `{s}` is not a number")))?;
        if x.is_finite() {
            Ok(x)
        } else {
            Err(CliError::usage(format!("grid `{spec}`: `{s}` is not finite")))
        }
    };
    let parts: Vec<&str> = spec.split(':').collect();
    match parts.as_slice() {
        [single] => Ok(vec![number(single)?]),
        [start, stop, step] => {
            let (start, stop, step) = (number(start)?, number(stop)?, number(step)?);
            if step <= 0.0 {
                return Err(CliError::usage(format!("grid `{spec}`: step must be > 0")));
            }
            if stop <= start {
                return Ok(Vec::new());
            }
            let count = ((stop - start) / step - 1e-9).ceil() as usize;
            Ok((0..count)
                .map(|i| ((start + i as f64 * step) * 1e12).round() / 1e12)
                .collect())
        }
        _ => Err(CliError::usage(format!(
            "grid `{spec}`: expected `start:stop:step` or a single value"
        ))),
    }
}
