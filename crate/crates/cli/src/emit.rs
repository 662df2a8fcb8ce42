//! Report emission helpers.

use serde::Serialize;

/// Pretty JSON to stdout with a trailing newline; byte-identical across runs
/// for the same input (all report types use ordered fields and vectors).
pub fn print_json<T: Serialize>(value: &T) {
    println!("{}", serde_json::to_string_pretty(value).expect("reports serialize"));
}

/// Floats in CSV carry 17 significant digits, enough to round-trip f64.
pub fn csv_float(x: f64) -> String {
    format!("{x:.16e}")
}
