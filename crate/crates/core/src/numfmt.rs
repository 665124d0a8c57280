//! Decimal rendering shared by the CSV, JSON and circuit text outputs.

/// Rounds to 12 significant digits.
pub fn round_sig12(x: f64) -> f64 {
    if x == 0.0 || !x.is_finite() {
        return if x == 0.0 { 0.0 } else { x };
    }
    format!("{x:.11e}").parse().expect("formatted float parses")
}

/// Shortest round-trip decimal of `x` rounded to 12 significant digits.
/// Negative zero renders as `0`.
pub fn format_sig12(x: f64) -> String {
    let r = round_sig12(x);
    if r == 0.0 {
        "0".to_string()
    } else {
        format!("{r}")
    }
}
