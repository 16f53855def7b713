//! JSON report helpers shared by the commands.

use serde::Serializer;

/// Serializes non-finite reals as the strings `"inf"`, `"-inf"` or `"nan"`.
pub fn real<S: Serializer>(v: &f64, s: S) -> std::result::Result<S::Ok, S::Error> {
    if v.is_finite() {
        s.serialize_f64(*v)
    } else if v.is_nan() {
        s.serialize_str("nan")
    } else if *v > 0.0 {
        s.serialize_str("inf")
    } else {
        s.serialize_str("-inf")
    }
}

/// Rounds to 12 significant digits so reports do not depend on the last ulp
/// of parallel reductions.
pub fn round12(v: f64) -> f64 {
    if !v.is_finite() || v == 0.0 {
        return v;
    }
    let mag = v.abs().log10().floor() as i32;
    let scale = 10f64.powi(11 - mag);
    (v * scale).round() / scale
}

/// [`real`] for optional values; `None` serializes as null.
pub fn opt_real<S: Serializer>(v: &Option<f64>, s: S) -> std::result::Result<S::Ok, S::Error> {
    match v {
        Some(x) => real(x, s),
        None => s.serialize_none(),
    }
}
