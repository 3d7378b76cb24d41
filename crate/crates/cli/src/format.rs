//! Number rendering shared by the JSON, CSV and table emitters.

pub const SIGNIFICANT_DIGITS: usize = 12;

/// Rounds to [`SIGNIFICANT_DIGITS`] significant digits.
pub fn round_sig(x: f64) -> f64 {
    if !x.is_finite() || x == 0.0 {
        return x;
    }
    format!("{:.*e}", SIGNIFICANT_DIGITS - 1, x)
        .parse()
        .expect("scientific rendering of a finite float parses")
}

/// Shortest text that parses back to `round_sig(x)`.
pub fn number(x: f64) -> String {
    let r = round_sig(x);
    let magnitude = r.abs();
    if r == 0.0 || (1e-5..1e15).contains(&magnitude) {
        format!("{r}")
    } else {
        format!("{r:e}")
    }
}

pub fn json_number(x: f64) -> serde_json::Value {
    serde_json::Number::from_f64(round_sig(x))
        .map(serde_json::Value::Number)
        .unwrap_or(serde_json::Value::Null)
}

pub fn optional(x: Option<f64>) -> String {
    x.map(number).unwrap_or_default()
}
