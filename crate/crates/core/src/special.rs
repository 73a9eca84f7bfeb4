//! Hyperbolic cotangent evaluated without cancellation at small arguments.

/// Below this the Laurent series is used.
const SERIES_CUTOFF: f64 = 1e-4;

/// `coth(x)` for `x > 0`.
///
/// Uses `1 + 2/expm1(2x)` above `1e-4` and the Laurent series
/// `1/x + x/3 - x^3/45` below, which keeps the relative error near one ulp
/// over `[1e-12, 700]`. For `x ≳ 19` the result rounds to exactly `1.0`.
pub fn coth(x: f64) -> f64 {
    if x > SERIES_CUTOFF {
        1.0 + 2.0 / (2.0 * x).exp_m1()
    } else {
        let x2 = x * x;
        1.0 / x + x * (1.0 / 3.0 - x2 / 45.0)
    }
}

/// `coth(a) - coth(b)` for `a, b > 0`, keeping the exponentially small
/// difference when both values round to one.
pub fn coth_difference(a: f64, b: f64) -> f64 {
    2.0 / (2.0 * a).exp_m1() - 2.0 / (2.0 * b).exp_m1()
}
