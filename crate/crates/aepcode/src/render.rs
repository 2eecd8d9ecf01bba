//! Float rendering shared by reports and sweep outputs.

/// Formats with exactly `sig` significant digits in scientific notation.
/// Non-finite values render as `inf`, `-inf`, or `nan`.
pub(crate) fn format_significant(x: f64, sig: usize) -> String {
    if x.is_nan() {
        return "nan".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    format!("{:.*e}", sig.saturating_sub(1), x)
}

/// JSON value for a float: a number when finite, a marker string otherwise
/// (JSON has no infinities).
pub(crate) fn json_float(x: f64) -> serde_json::Value {
    if x.is_finite() {
        serde_json::json!(x)
    } else {
        serde_json::Value::String(format_significant(x, 1))
    }
}
