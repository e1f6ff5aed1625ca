//! Radial and truncation retractions onto the dual unit ball.

use crate::error::{Error, Result};
use crate::moduli::is_uniformly_monotone;
use crate::root::bisect;
use crate::space::{DualElement, SpaceSpec};

/// Bisection tolerance for the scaling roots `t` and `λ`.
pub const ROOT_TOL: f64 = 1e-12;

/// `f` on the ball, `f / ‖f‖` outside.
pub fn radial_retract(f: &DualElement) -> DualElement {
    let n = f.norm();
    if n <= 1.0 {
        f.clone()
    } else {
        f.scaled(1.0 / n)
    }
}

/// Result of a truncation retraction with its crossing data.
#[derive(Clone, Debug, PartialEq)]
pub struct Truncated {
    pub value: DualElement,
    /// 0-based crossing index `n`; `None` when the input was already in the ball.
    pub crossing: Option<usize>,
    /// Scale applied to coordinate `n` (1 inside the ball).
    pub t: f64,
}

/// Truncation retraction `Σ_{j<n} f(j) e_j* + t f(n) e_n*`.
///
/// Requires the dual norm to be uniformly monotone in the coordinate lattice.
pub fn truncation_retract(f: &DualElement) -> Result<DualElement> {
    Ok(truncation_retract_detailed(f)?.value)
}

pub fn truncation_retract_detailed(f: &DualElement) -> Result<Truncated> {
    let dual = f.space().dual_spec();
    if !is_uniformly_monotone(dual) {
        return Err(Error::NotUniformlyMonotone);
    }
    let order: Vec<usize> = (0..f.dim()).collect();
    truncate_in_order(dual, f, &order)
}

/// Truncation along an arbitrary coordinate order. `order` must list every
/// coordinate exactly once.
pub(crate) fn truncate_in_order(dual: &SpaceSpec, f: &DualElement, order: &[usize]) -> Result<Truncated> {
    if f.norm() <= 1.0 {
        return Ok(Truncated { value: f.clone(), crossing: None, t: 1.0 });
    }
    let a = f.coords();
    let mut partial = vec![0.0; a.len()];
    let mut crossing = None;
    for (pos, &j) in order.iter().enumerate() {
        partial[j] = a[j];
        if dual.norm_of(&partial) >= 1.0 {
            crossing = Some((pos, j));
            break;
        }
    }
    let (pos, j) = crossing.ok_or_else(|| {
        Error::BisectionFailure("dual norm exceeds 1 but no partial sum reaches 1".into())
    })?;
    let t = {
        let mut trial = partial.clone();
        let mut g = |t: f64| {
            trial[j] = t * a[j];
            dual.norm_of(&trial) - 1.0
        };
        if g(1.0) == 0.0 {
            1.0
        } else {
            // The lower end keeps the output inside the closed ball.
            bisect(g, 0.0, 1.0, ROOT_TOL)?.lo
        }
    };
    partial[j] = t * a[j];
    Ok(Truncated { value: f.with_coords(partial)?, crossing: Some(pos), t })
}
