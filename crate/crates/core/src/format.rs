//! Number formatting shared by the CSV writers.

/// 17 significant digits, enough to round-trip any `f64`.
pub fn fmt_f64(v: f64) -> String {
    if v == 0.0 {
        // normalizes -0.0 as well
        return "0".to_string();
    }
    format!("{v:.16e}")
}

/// Empty field for undefined values.
pub fn fmt_opt(v: Option<f64>) -> String {
    v.filter(|x| x.is_finite()).map(fmt_f64).unwrap_or_default()
}
