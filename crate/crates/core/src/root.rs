//! Bisection on monotone scalar functions.

use crate::error::{Error, Result};

/// Final bracket of a bisection: `g(lo) < 0 ≤ g(hi)` and `hi - lo ≤ tol`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Bracket {
    pub lo: f64,
    pub hi: f64,
}

/// Bisects a non-decreasing `g` on `[lo, hi]` with `g(lo) < 0 ≤ g(hi)`.
///
/// Fails with [`Error::BisectionFailure`] when the endpoints do not bracket a
/// sign change, which for the norm-based callers means the function was not
/// monotone.
pub fn bisect(mut g: impl FnMut(f64) -> f64, lo: f64, hi: f64, tol: f64) -> Result<Bracket> {
    let (mut lo, mut hi) = (lo, hi);
    let g_lo = g(lo);
    let g_hi = g(hi);
    if !(g_lo < 0.0 && g_hi >= 0.0) {
        return Err(Error::BisectionFailure(format!(
            "no sign change on [{lo}, {hi}]: g(lo) = {g_lo}, g(hi) = {g_hi}"
        )));
    }
    // 200 halvings exhaust f64 resolution on any finite interval.
    for _ in 0..200 {
        if hi - lo <= tol {
            break;
        }
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if g(mid) < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(Bracket { lo, hi })
}
