//! Gaussian tail function and its inverse.

use std::f64::consts::{PI, SQRT_2};

use statrs::function::erf::erfc;

use crate::error::{invalid, Result};

/// Standard normal upper tail, `Q(x) = P(Z > x)`.
pub fn q_function(x: f64) -> f64 {
    0.5 * erfc(x / SQRT_2)
}

/// Inverse of [`q_function`] on `(0, 0.5)`.
///
/// Bracketed Newton iteration on the complementary error function: every Newton
/// step that would leave the current bracket is replaced by bisection, so the
/// iteration cannot diverge even deep in the tail.
pub fn q_inverse(eps: f64) -> Result<f64> {
    if !(eps > 0.0 && eps < 0.5) {
        return Err(invalid(format!("tail probability {eps} must lie in (0, 0.5)")));
    }
    // Q is decreasing: Q(lo) > eps > Q(hi).
    let (mut lo, mut hi) = (0.0f64, 1.0f64);
    while q_function(hi) > eps {
        lo = hi;
        hi *= 2.0;
    }
    let mut x = 0.5 * (lo + hi);
    for _ in 0..200 {
        let resid = q_function(x) - eps;
        if resid > 0.0 {
            lo = x;
        } else {
            hi = x;
        }
        let density = (-0.5 * x * x).exp() / (2.0 * PI).sqrt();
        let newton = x + resid / density;
        let next = if newton > lo && newton < hi { newton } else { 0.5 * (lo + hi) };
        if (next - x).abs() <= 1e-15 * x.abs().max(1.0) || hi - lo <= f64::EPSILON * hi {
            return Ok(next);
        }
        x = next;
    }
    Ok(x)
}
