use serde::Serialize;

use super::functional::{bpb_point, BpbPoint, UNIT_TOL};
use super::operator::OperatorIntoC0;
use crate::error::{Error, Result};
use crate::retract::{radial_retract, RetractionHandle};
use crate::space::{DualElement, PrimalVector};

/// Weights `f₀: K → [0, 1]` with `f₀(t₀) = 1`.
#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "bump", content = "values", rename_all = "lowercase")]
pub enum Bump {
    /// `1` at `t₀`, `0` elsewhere.
    Indicator,
    /// `1` everywhere.
    Ones,
    /// Explicit values, one per point.
    Values(Vec<f64>),
}

impl Bump {
    fn weights(&self, len: usize, t0: usize) -> Result<Vec<f64>> {
        match self {
            Bump::Indicator => Ok((0..len).map(|i| if i == t0 { 1.0 } else { 0.0 }).collect()),
            Bump::Ones => Ok(vec![1.0; len]),
            Bump::Values(v) => {
                if v.len() != len {
                    return Err(Error::BumpInvalid(format!("{} values for {len} points", v.len())));
                }
                if let Some(b) = v.iter().find(|b| !(0.0..=1.0).contains(*b)) {
                    return Err(Error::BumpInvalid(format!("value {b} outside [0, 1]")));
                }
                if v[t0] != 1.0 {
                    return Err(Error::BumpInvalid(format!("value {} at the witness point, expected 1", v[t0])));
                }
                Ok(v.clone())
            }
        }
    }
}

/// Everything needed to replay a perturbation.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PerturbationCertificate {
    pub epsilon: f64,
    /// Premise threshold: `‖Tx₀‖ > 1 − η`.
    pub eta_used: f64,
    /// `‖T‖` before normalization; `T/scale` is the operator perturbed.
    pub scale: f64,
    pub new_operator: OperatorIntoC0,
    pub attaining_point: PrimalVector,
    pub attaining_functional: DualElement,
    pub witness_label: String,
    pub witness_index: usize,
    /// `−1` when `⟨φ(t₀), x₀⟩ < 0` and the functional step ran on `−φ(t₀)`.
    pub sign: f64,
    /// `‖S − T/scale‖`.
    pub distance: f64,
    pub bound: f64,
    /// `‖x₀ − x₁‖`.
    pub point_distance: f64,
    pub bpb: BpbPoint,
}

impl PerturbationCertificate {
    /// `‖S‖` and `‖Sx₁‖`.
    pub fn attained_norms(&self) -> Result<(f64, f64)> {
        Ok((self.new_operator.operator_norm()?, self.new_operator.image_norm(&self.attaining_point)?))
    }

    /// `‖S‖ = ‖Sx₁‖ = 1` within `tol`.
    pub fn attains(&self, tol: f64) -> bool {
        self.attained_norms().is_ok_and(|(s, sx)| (s - 1.0).abs() <= tol && (sx - 1.0).abs() <= tol)
    }

    /// Attainment within `tol` and `distance ≤ bound`.
    pub fn verify(&self, tol: f64) -> bool {
        self.attains(tol) && self.distance <= self.bound
    }
}

struct Prepared {
    normalized: OperatorIntoC0,
    scale: f64,
    t0: usize,
    sign: f64,
    bpb: BpbPoint,
    /// `x₁*`, already carrying the sign of `⟨φ(t₀), x₀⟩`.
    functional: DualElement,
}

// Normalizes T, checks ‖Tx₀‖ > 1 − η, picks t₀ and runs the functional step at `bpb_eps`.
fn prepare(t: &OperatorIntoC0, x0: &PrimalVector, eta: f64, bpb_eps: f64) -> Result<Prepared> {
    if x0.space() != t.domain() {
        return Err(Error::SpaceMismatch);
    }
    if (x0.norm() - 1.0).abs() > UNIT_TOL {
        return Err(Error::PremiseViolation(format!("‖x₀‖ = {}, expected 1", x0.norm())));
    }
    let scale = t.operator_norm()?;
    if scale == 0.0 {
        return Err(Error::PremiseViolation("T = 0".into()));
    }
    let normalized = t.scaled(1.0 / scale);
    let values = normalized.apply(x0)?;
    // Lowest index among maximizers.
    let t0 = values
        .iter()
        .enumerate()
        .fold(0, |best, (i, v)| if v.abs() > values[best].abs() { i } else { best });
    let attained = values[t0].abs();
    if attained <= 1.0 - eta {
        return Err(Error::PremiseViolation(format!("‖Tx₀‖ = {attained} ≤ 1 − {eta}")));
    }
    let sign = if values[t0] < 0.0 { -1.0 } else { 1.0 };
    let row = &normalized.rows()[t0];
    let target = row.scaled(sign / row.norm());
    let bpb = bpb_point(x0, &target, bpb_eps)?;
    let functional = bpb.g.scaled(sign);
    Ok(Prepared { normalized, scale, t0, sign, bpb, functional })
}

fn certificate(p: Prepared, rows: Vec<DualElement>, epsilon: f64, eta: f64, bound: f64, x0: &PrimalVector) -> Result<PerturbationCertificate> {
    let new_operator = p.normalized.with_rows(rows)?;
    let distance = new_operator.distance(&p.normalized)?;
    Ok(PerturbationCertificate {
        epsilon,
        eta_used: eta,
        scale: p.scale,
        witness_label: p.normalized.points()[p.t0].clone(),
        witness_index: p.t0,
        sign: p.sign,
        distance,
        bound,
        point_distance: x0.distance(&p.bpb.y)?,
        attaining_point: p.bpb.y.clone(),
        attaining_functional: p.functional,
        new_operator,
        bpb: p.bpb,
    })
}

/// Compact-operator perturbation with premise `‖Tx₀‖ > 1 − ε²/64`.
///
/// The functional step runs at scale `ε/4` and every row becomes
/// `r(φ(t) + x₁* − φ(t₀))` with `r` the radial retraction, so
/// `‖S − T‖ ≤ 2(ε/4) + ‖x₁* − φ(t₀)‖ ≤ ε`; that is the recorded bound.
pub fn perturb_compact(t: &OperatorIntoC0, x0: &PrimalVector, eps: f64) -> Result<PerturbationCertificate> {
    if !(eps > 0.0 && eps < 1.0) {
        return Err(Error::InvalidArgument(format!("epsilon must lie in (0, 1), got {eps}")));
    }
    let eta = eps * eps / 64.0;
    let p = prepare(t, x0, eta, eps / 4.0)?;
    let shift = p.functional.sub(&p.normalized.rows()[p.t0])?;
    let rows = p.normalized.rows().iter().map(|r| Ok(radial_retract(&r.add(&shift)?))).collect::<Result<Vec<_>>>()?;
    certificate(p, rows, eps, eta, eps, x0)
}

/// General perturbation with premise `‖Tx₀‖ > 1 − ε²/4`: rows become
/// `r(φ(t) + f₀(t)(x₁* − φ(t₀)))` for the handle `r`, and
/// `‖S − T‖ ≤ 4ε + f(2ε)` with `f` the handle's nearest-point bound.
pub fn perturb_general(
    t: &OperatorIntoC0,
    x0: &PrimalVector,
    eps: f64,
    handle: &RetractionHandle,
    bump: &Bump,
) -> Result<PerturbationCertificate> {
    if !(eps > 0.0 && eps < 1.0) {
        return Err(Error::InvalidArgument(format!("epsilon must lie in (0, 1), got {eps}")));
    }
    if handle.space() != t.domain() {
        return Err(Error::SpaceMismatch);
    }
    let eta = eps * eps / 4.0;
    let p = prepare(t, x0, eta, eps)?;
    let weights = bump.weights(t.len(), p.t0)?;
    let shift = p.functional.sub(&p.normalized.rows()[p.t0])?;
    let rows = p
        .normalized
        .rows()
        .iter()
        .zip(&weights)
        .map(|(r, &w)| if w == 0.0 { handle.apply(r) } else { handle.apply(&r.add_scaled(w, &shift)?) })
        .collect::<Result<Vec<_>>>()?;
    let bound = 4.0 * eps + handle.nearest_point_bound(2.0 * eps);
    certificate(p, rows, eps, eta, bound, x0)
}
