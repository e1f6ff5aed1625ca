//! Retractions of a dual space onto its unit ball.
//!
//! A [`RetractionHandle`] bundles the map with two certificate functions: an
//! upper bound for its modulus of continuity `ω_φ(t)` and the nearest-point
//! defect bound `f(d)`, meaning `‖x* − φ(x*)‖ ≤ d + f(d)` for
//! `d = d(x*, B_{X*})`.

mod chain;
mod omega;
mod truncation;

pub use chain::{c0_sum_retract, c0_sum_retract_detailed, chain_index, hahn_banach_min_extension, ChainStep, SubspaceChain};
pub use omega::omega_estimate;
pub use truncation::{radial_retract, truncation_retract, truncation_retract_detailed, Truncated, ROOT_TOL};

pub(crate) use truncation::truncate_in_order;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::moduli::{default_t_grid, monotonicity_modulus, ModulusCurve, MonotonicityModulus};
use crate::space::{DualElement, Space, SpaceSpec};

/// Which construction a handle runs.
#[derive(Clone, Debug, PartialEq)]
pub enum RetractionKind {
    Radial,
    Truncation { monotonicity: MonotonicityModulus },
    L1Sum { children: Vec<RetractionHandle> },
    C0SumChain { chain: SubspaceChain },
    /// Lifted from `C(L ∪ {∞})*` to `C₀(L)*` by zero extension and restriction.
    Transferred { inner: Box<RetractionHandle> },
}

#[derive(Clone, Debug, PartialEq)]
pub struct RetractionHandle {
    space: Space,
    kind: RetractionKind,
    modulus: ModulusCurve,
}

// Largest modulus value at the finest grid point still accepted as "tending to 0".
const UNIFORMITY_CUTOFF: f64 = 0.5;

impl RetractionHandle {
    fn build(space: Space, kind: RetractionKind) -> Result<Self> {
        let mut handle = RetractionHandle { space, kind, modulus: ModulusCurve::new(vec![1.0], vec![0.0])? };
        let grid = default_t_grid();
        handle.modulus = ModulusCurve::tabulate(&grid, |t| handle.modulus_bound(t))?;
        Ok(handle)
    }

    /// `x* ↦ x*/max(1, ‖x*‖)`; works on every space.
    pub fn radial(space: &Space) -> Self {
        Self::build(space.clone(), RetractionKind::Radial).expect("radial modulus is a valid curve")
    }

    /// Truncation retraction; the dual lattice must be uniformly monotone.
    pub fn truncation(space: &Space) -> Result<Self> {
        let monotonicity = monotonicity_modulus(space.dual_spec());
        if !monotonicity.is_uniform() {
            return Err(Error::NotUniformlyMonotone);
        }
        Self::build(space.clone(), RetractionKind::Truncation { monotonicity })
    }

    /// Componentwise retraction on the dual of the ℓ₁-sum of the children's spaces.
    ///
    /// Fails unless the pointwise sup of the children's moduli is small at the
    /// finest grid point.
    pub fn l1_sum(children: Vec<RetractionHandle>) -> Result<Self> {
        let specs: Vec<SpaceSpec> = children.iter().map(|c| c.space.spec().clone()).collect();
        let space = Space::new(SpaceSpec::l1_sum(specs)?)?;
        let handle = Self::build(space, RetractionKind::L1Sum { children })?;
        let t = handle.modulus.grid()[0];
        let sup = handle.modulus_bound(t);
        if !(sup.is_finite() && sup < UNIFORMITY_CUTOFF) {
            return Err(Error::InvalidArgument(format!(
                "children moduli are not uniformly small: sup ω({t}) = {sup}"
            )));
        }
        Ok(handle)
    }

    /// Chain retraction on the dual of a c₀-sum of leaves with uniformly
    /// convex duals.
    pub fn c0_chain(space: &Space) -> Result<Self> {
        let chain = SubspaceChain::new(space)?;
        Self::build(space.clone(), RetractionKind::C0SumChain { chain })
    }

    /// Transfer of `inner` (a handle on `ℓ_∞^{|L|+1}`, the last coordinate
    /// playing `∞`) to `ℓ_∞^{|L|}`.
    pub fn transferred(inner: RetractionHandle) -> Result<Self> {
        let SpaceSpec::Sup { dim } = *inner.space.spec() else {
            return Err(Error::UnsupportedSpace(format!("transfer needs a sup-norm space, got {}", inner.space.spec())));
        };
        if dim < 2 {
            return Err(Error::InvalidArgument("transfer needs at least one finite point".into()));
        }
        let space = Space::new(SpaceSpec::sup(dim - 1)?)?;
        Self::build(space, RetractionKind::Transferred { inner: Box::new(inner) })
    }

    pub fn space(&self) -> &Space {
        &self.space
    }

    pub fn kind(&self) -> &RetractionKind {
        &self.kind
    }

    /// Claimed modulus of continuity, tabulated on the default `t` grid.
    pub fn modulus(&self) -> &ModulusCurve {
        &self.modulus
    }

    pub fn kind_name(&self) -> &'static str {
        match self.kind {
            RetractionKind::Radial => "radial",
            RetractionKind::Truncation { .. } => "truncation",
            RetractionKind::L1Sum { .. } => "l1sum",
            RetractionKind::C0SumChain { .. } => "c0chain",
            RetractionKind::Transferred { .. } => "transferred",
        }
    }

    pub fn apply(&self, f: &DualElement) -> Result<DualElement> {
        if f.space() != &self.space {
            return Err(Error::SpaceMismatch);
        }
        match &self.kind {
            RetractionKind::Radial => Ok(radial_retract(f)),
            RetractionKind::Truncation { .. } => {
                let order: Vec<usize> = (0..f.dim()).collect();
                Ok(truncate_in_order(self.space.dual_spec(), f, &order)?.value)
            }
            RetractionKind::L1Sum { children } => {
                let mut out = Vec::with_capacity(f.dim());
                for (child, block) in children.iter().zip(self.space.blocks()) {
                    let part = child.space.dual(f.coords()[block.clone()].to_vec())?;
                    out.extend_from_slice(child.apply(&part)?.coords());
                }
                self.space.dual(out)
            }
            RetractionKind::C0SumChain { chain } => c0_sum_retract(chain, f),
            RetractionKind::Transferred { inner } => {
                let mut lifted = f.coords().to_vec();
                lifted.push(0.0);
                let mut image = inner.apply(&inner.space.dual(lifted)?)?.into_coords();
                image.pop();
                self.space.dual(image)
            }
        }
    }

    /// Upper bound for `ω_φ(t)` (never above the ball diameter 2).
    ///
    /// Radial: `2t`. Truncation: `2M⁻¹(t)`. ℓ₁-sum: sup of the children.
    /// Chain: `ε + 9δ(ε)² + 2δ(ε)` at the smallest admissible `ε`. Transfer:
    /// the inner bound, since zero extension and restriction do not expand.
    pub fn modulus_bound(&self, t: f64) -> f64 {
        if t <= 0.0 {
            return 0.0;
        }
        let raw = match &self.kind {
            RetractionKind::Radial => 2.0 * t,
            RetractionKind::Truncation { monotonicity } => 2.0 * monotonicity.inverse(t),
            RetractionKind::L1Sum { children } => children.iter().map(|c| c.modulus_bound(t)).fold(0.0, f64::max),
            RetractionKind::C0SumChain { chain } => chain.continuity_bound(t).unwrap_or(2.0),
            RetractionKind::Transferred { inner } => inner.modulus_bound(t),
        };
        raw.min(2.0)
    }

    /// Nearest-point defect bound `f(d)`, so that `‖x* − φ(x*)‖ ≤ d + f(d)`.
    ///
    /// Radial retraction onto any ball is exact (`f ≡ 0`); truncation gives
    /// `M⁻¹(d) − d`. A chain handle falls back on `ω_φ(d)`, which bounds
    /// `‖φ(x*/‖x*‖) − φ(x*)‖`.
    pub fn nearest_point_bound(&self, d: f64) -> f64 {
        if d <= 0.0 {
            return 0.0;
        }
        let raw = match &self.kind {
            RetractionKind::Radial => 0.0,
            RetractionKind::Truncation { monotonicity } => (monotonicity.inverse(d) - d).max(0.0),
            RetractionKind::L1Sum { children } => {
                children.iter().map(|c| c.nearest_point_bound(d)).fold(0.0, f64::max)
            }
            RetractionKind::C0SumChain { .. } => self.modulus_bound(d),
            RetractionKind::Transferred { inner } => inner.nearest_point_bound(d),
        };
        raw.min(2.0)
    }

    /// `‖f − φ(f)‖ − d(f, B)`.
    pub fn nearest_point_defect(&self, f: &DualElement) -> Result<f64> {
        let image = self.apply(f)?;
        Ok(f.distance(&image)? - (f.norm() - 1.0).max(0.0))
    }

    pub fn descriptor(&self) -> HandleDescriptor {
        match &self.kind {
            RetractionKind::Radial => HandleDescriptor::Radial { space: self.space.spec().clone() },
            RetractionKind::Truncation { .. } => HandleDescriptor::Truncation { space: self.space.spec().clone() },
            RetractionKind::L1Sum { children } => {
                HandleDescriptor::L1Sum { children: children.iter().map(Self::descriptor).collect() }
            }
            RetractionKind::C0SumChain { .. } => HandleDescriptor::C0Chain { space: self.space.spec().clone() },
            RetractionKind::Transferred { inner } => HandleDescriptor::Transferred { inner: Box::new(inner.descriptor()) },
        }
    }

    pub fn from_descriptor(descriptor: &HandleDescriptor) -> Result<Self> {
        match descriptor {
            HandleDescriptor::Radial { space } => Ok(Self::radial(&Space::new(space.clone())?)),
            HandleDescriptor::Truncation { space } => Self::truncation(&Space::new(space.clone())?),
            HandleDescriptor::L1Sum { children } => {
                Self::l1_sum(children.iter().map(Self::from_descriptor).collect::<Result<_>>()?)
            }
            HandleDescriptor::C0Chain { space } => Self::c0_chain(&Space::new(space.clone())?),
            HandleDescriptor::Transferred { inner } => Self::transferred(Self::from_descriptor(inner)?),
        }
    }
}

/// JSON form of a handle, nested like [`SpaceSpec`].
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum HandleDescriptor {
    Radial { space: SpaceSpec },
    Truncation { space: SpaceSpec },
    L1Sum { children: Vec<HandleDescriptor> },
    C0Chain { space: SpaceSpec },
    Transferred { inner: Box<HandleDescriptor> },
}

impl Serialize for RetractionHandle {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        self.descriptor().serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for RetractionHandle {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let d = HandleDescriptor::deserialize(deserializer)?;
        RetractionHandle::from_descriptor(&d).map_err(serde::de::Error::custom)
    }
}

/// Componentwise retraction of `f` on an ℓ₁-sum dual.
pub fn l1_sum_retract(children: &[RetractionHandle], f: &DualElement) -> Result<DualElement> {
    let components = f
        .space()
        .spec()
        .components()
        .filter(|_| matches!(f.space().spec(), SpaceSpec::L1Sum { .. }))
        .ok_or_else(|| Error::ComponentMismatch(format!("{} is not an l1-sum", f.space().spec())))?;
    if components.len() != children.len() {
        return Err(Error::ComponentMismatch(format!(
            "{} components but {} child retractions",
            components.len(),
            children.len()
        )));
    }
    if let Some(i) = components.iter().zip(children).position(|(c, h)| c != h.space.spec()) {
        return Err(Error::ComponentMismatch(format!("component {i} is {} but its retraction acts on {}", components[i], children[i].space.spec())));
    }
    RetractionHandle::l1_sum(children.to_vec())?.apply(f)
}
