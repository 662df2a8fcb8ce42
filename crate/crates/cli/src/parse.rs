//! Input parsing and file loading with the CLI's exit-code semantics:
//! unreadable files and malformed flags are usage errors (exit 2), content
//! that fails domain validation is a validation error (exit 1).

use std::fmt::Display;
use std::path::Path;

use num_complex::Complex64;
use serde::de::DeserializeOwned;

use opclt::algebra::{ComplexScalar, Scalar};

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Validation(String),
}

impl CliError {
    pub fn validation(e: impl Display) -> Self {
        CliError::Validation(e.to_string())
    }
}

pub fn read_json_file<T: DeserializeOwned>(path: &Path) -> Result<T, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Usage(format!("cannot read {}: {e}", path.display())))?;
    serde_json::from_str(&text)
        .map_err(|e| CliError::Validation(format!("invalid content in {}: {e}", path.display())))
}

/// Parses a scalar flag: exact rational-complex literals (`"1/2"`, `"i/1"`,
/// `"-1/2+2/3i"`) stay exact; float forms (`"0.5"`, `"0,0.7071"`) become
/// float scalars.
pub fn parse_exact_or_float(s: &str) -> Result<Scalar, CliError> {
    let t = s.trim();
    if let Ok(z) = t.parse::<ComplexScalar>() {
        return Ok(Scalar::Exact(z));
    }
    parse_c64(t).map(Scalar::Float)
}

/// Parses a float-complex flag: `"re,im"`, a plain float, or a rational
/// complex literal (converted).
pub fn parse_c64(s: &str) -> Result<Complex64, CliError> {
    let t = s.trim();
    if let Some((re, im)) = t.split_once(',') {
        let re = re.trim().parse::<f64>();
        let im = im.trim().parse::<f64>();
        if let (Ok(re), Ok(im)) = (re, im) {
            return Ok(Complex64::new(re, im));
        }
    }
    if let Ok(x) = t.parse::<f64>() {
        return Ok(Complex64::new(x, 0.0));
    }
    if let Ok(z) = t.parse::<ComplexScalar>() {
        return Ok(z.to_c64());
    }
    Err(CliError::Usage(format!(
        "cannot parse {s:?} as a number (expected \"re,im\", a float, or a rational literal)"
    )))
}
