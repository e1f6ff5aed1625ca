use serde::Serialize;

use crate::error::{Error, Result};
use crate::root::bisect;
use crate::space::{DualElement, PrimalVector};

/// Slack allowed on `‖x‖ = 1`, `‖f‖ = 1` and `g(y) = 1`.
pub const UNIT_TOL: f64 = 1e-9;

// Grid resolution of the fallback scan along the path.
const SCAN_POINTS: usize = 1000;
const COMPASS_ROUNDS: usize = 400;

/// How the witness pair was found.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
#[serde(tag = "strategy", rename_all = "lowercase")]
pub enum BpbStrategy {
    /// `y` is the norming point of `f` and `g = f`.
    Direct,
    /// Bisection along `y(s) = normalize((1 − s)x + s·y_f)`, `g = J(y(s))`.
    Path { s: f64 },
    /// Uniform scan of the same path.
    Scan { s: f64 },
    /// Compass search on the sphere, started from the best scan point.
    Compass,
}

/// Output of [`bpb_point`].
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BpbPoint {
    pub y: PrimalVector,
    pub g: DualElement,
    pub strategy: BpbStrategy,
    /// `‖x − y‖`.
    pub point_distance: f64,
    /// `‖f − g‖`.
    pub functional_distance: f64,
}

/// Given unit `x`, `f` with `f(x) > 1 − ε²/4`, find unit `y`, `g` with
/// `g(y) = 1`, `‖x − y‖ < ε` and `‖f − g‖ < ε`.
///
/// The space must be smooth at the points visited (duality images are taken
/// in strict mode), which holds for `ℓ_p` with `1 < p < ∞`.
pub fn bpb_point(x: &PrimalVector, f: &DualElement, eps: f64) -> Result<BpbPoint> {
    if !(eps > 0.0 && eps < 1.0) {
        return Err(Error::InvalidArgument(format!("epsilon must lie in (0, 1), got {eps}")));
    }
    if x.space() != f.space() {
        return Err(Error::SpaceMismatch);
    }
    let space = x.space();
    for (what, n) in [("x", x.norm()), ("f", f.norm())] {
        if (n - 1.0).abs() > UNIT_TOL {
            return Err(Error::PremiseViolation(format!("‖{what}‖ = {n}, expected 1")));
        }
    }
    let value = f.pair(x)?;
    if value <= 1.0 - eps * eps / 4.0 {
        return Err(Error::PremiseViolation(format!("f(x) = {value} ≤ 1 − ε²/4")));
    }

    let accept = |y: &PrimalVector, g: &DualElement, strategy| -> Result<Option<BpbPoint>> {
        let point_distance = x.distance(y)?;
        let functional_distance = f.distance(g)?;
        let exact = (g.pair(y)? - 1.0).abs() <= UNIT_TOL && (y.norm() - 1.0).abs() <= UNIT_TOL;
        Ok((exact && point_distance < eps && functional_distance < eps).then(|| BpbPoint {
            y: y.clone(),
            g: g.clone(),
            strategy,
            point_distance,
            functional_distance,
        }))
    };

    let y_f = space.norming_point_strict(f)?;
    if let Some(out) = accept(&y_f, f, BpbStrategy::Direct)? {
        return Ok(out);
    }

    let along = |s: f64| -> Result<(PrimalVector, DualElement)> {
        let y = x.scaled(1.0 - s).add_scaled(s, &y_f)?.normalized();
        let g = space.duality_map(&y, true)?;
        Ok((y, g))
    };
    let mut failure = None;
    let gap = |s: f64| match along(s) {
        Ok((y, _)) => x.distance(&y).unwrap_or(f64::INFINITY) - eps,
        Err(e) => {
            failure = Some(e);
            1.0
        }
    };
    let bracket = bisect(gap, 0.0, 1.0, 1e-12);
    if let Some(e) = failure {
        return Err(e);
    }
    if let Ok(b) = bracket {
        let (y, g) = along(b.lo)?;
        if let Some(out) = accept(&y, &g, BpbStrategy::Path { s: b.lo })? {
            return Ok(out);
        }
    }

    let score = |y: &PrimalVector, g: &DualElement| -> Result<f64> { Ok(x.distance(y)?.max(f.distance(g)?)) };
    let mut best: Option<(f64, PrimalVector)> = None;
    for k in 0..=SCAN_POINTS {
        let s = k as f64 / SCAN_POINTS as f64;
        let (y, g) = along(s)?;
        if let Some(out) = accept(&y, &g, BpbStrategy::Scan { s })? {
            return Ok(out);
        }
        let v = score(&y, &g)?;
        if best.as_ref().is_none_or(|(b, _)| v < *b) {
            best = Some((v, y));
        }
    }

    let (mut value, mut y) = best.expect("scan visits at least one point");
    let mut step = 0.1;
    for _ in 0..COMPASS_ROUNDS {
        let mut improved = false;
        for j in 0..y.dim() {
            for sign in [1.0, -1.0] {
                let mut c = y.coords().to_vec();
                c[j] += sign * step;
                let trial = y.with_coords(c)?;
                if trial.norm() == 0.0 {
                    continue;
                }
                let trial = trial.normalized();
                let g = space.duality_map(&trial, true)?;
                if let Some(out) = accept(&trial, &g, BpbStrategy::Compass)? {
                    return Ok(out);
                }
                let v = score(&trial, &g)?;
                if v < value {
                    value = v;
                    y = trial;
                    improved = true;
                }
            }
        }
        if !improved {
            step *= 0.5;
        }
    }
    Err(Error::SearchExhausted)
}
