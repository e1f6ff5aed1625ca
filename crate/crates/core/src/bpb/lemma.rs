use serde::Serialize;

use crate::error::{Error, Result};

/// Rounding slack on the weight sums.
const SLACK: f64 = 1e-12;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ConvexSeries {
    /// `A = {i : cᵢ > r}`.
    pub indices: Vec<usize>,
    /// `Σ_{i∈A} αᵢ`.
    pub mass: f64,
    /// `1 − η/(1 − r)`.
    pub threshold: f64,
    pub ok: bool,
}

/// If `Σ αᵢ cᵢ > 1 − η` for convex weights `α` and `|cᵢ| ≤ 1`, the weight
/// carried by `{cᵢ > r}` is at least `1 − η/(1 − r)`.
pub fn convex_series_bound(c: &[f64], alpha: &[f64], eta: f64, r: f64) -> Result<ConvexSeries> {
    if c.len() != alpha.len() {
        return Err(Error::DimensionMismatch { expected: c.len(), found: alpha.len() });
    }
    if !(eta > 0.0) {
        return Err(Error::PremiseViolation(format!("η = {eta} must be positive")));
    }
    if !(r > 0.0 && r < 1.0) {
        return Err(Error::PremiseViolation(format!("r = {r} must lie in (0, 1)")));
    }
    if c.iter().any(|v| !(v.abs() <= 1.0)) {
        return Err(Error::PremiseViolation("coefficients must satisfy |cᵢ| ≤ 1".into()));
    }
    if alpha.iter().any(|a| !(*a >= 0.0)) || (alpha.iter().sum::<f64>() - 1.0).abs() > 1e-9 {
        return Err(Error::PremiseViolation("α must be convex weights".into()));
    }
    let average: f64 = c.iter().zip(alpha).map(|(c, a)| c * a).sum();
    if average <= 1.0 - eta {
        return Err(Error::PremiseViolation(format!("Σ αᵢcᵢ = {average} ≤ 1 − η")));
    }
    let indices: Vec<usize> = (0..c.len()).filter(|&i| c[i] > r).collect();
    let mass = indices.iter().map(|&i| alpha[i]).sum::<f64>();
    let threshold = 1.0 - eta / (1.0 - r);
    Ok(ConvexSeries { ok: mass >= threshold - SLACK, indices, mass, threshold })
}
