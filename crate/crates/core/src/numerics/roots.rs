//! Bracketed root finding.

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
#[error("no sign change on [{lo}, {hi}]: f(lo) = {f_lo:e}, f(hi) = {f_hi:e}")]
pub struct NoSignChange {
    pub lo: f64,
    pub hi: f64,
    pub f_lo: f64,
    pub f_hi: f64,
}

/// Midpoint bisection until the bracket is no wider than `tol`.
pub fn bisect_root(
    f: impl Fn(f64) -> f64,
    mut lo: f64,
    mut hi: f64,
    tol: f64,
) -> Result<f64, NoSignChange> {
    let mut f_lo = f(lo);
    let f_hi = f(hi);
    if f_lo == 0.0 {
        return Ok(lo);
    }
    if f_hi == 0.0 {
        return Ok(hi);
    }
    if f_lo.signum() == f_hi.signum() {
        return Err(NoSignChange { lo, hi, f_lo, f_hi });
    }
    while hi - lo > tol {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        let f_mid = f(mid);
        if f_mid == 0.0 {
            return Ok(mid);
        }
        if f_mid.signum() == f_lo.signum() {
            lo = mid;
            f_lo = f_mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}
