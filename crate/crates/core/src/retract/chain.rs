//! Retraction on the dual of a finite c₀-sum of `ℓ_p` leaves, built from the
//! diagonal chain of coordinate subspaces `E_0 ⊂ E_1 ⊂ … ⊂ E_K`.
//!
//! Step `k = (i+j−1)(i+j−2)/2 + j` adds coordinate `j` of component `i`; steps
//! that fall outside the finite components are skipped, so `E_k` grows by one
//! coordinate at a time until it is the whole space.

use crate::error::{Error, Result};
use crate::moduli::modulus_convexity;
use crate::root::bisect;
use crate::space::{DualElement, Space, SpaceSpec};

use super::truncation::ROOT_TOL;

/// Diagonal enumeration `(i, j) ↦ (i+j−1)(i+j−2)/2 + j` for `i, j ≥ 1`.
pub fn chain_index(i: u64, j: u64) -> u64 {
    assert!(i >= 1 && j >= 1, "chain_index is defined for positive integers");
    let s = i + j;
    (s - 1) * (s - 2) / 2 + j
}

/// One coordinate added to the chain.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ChainStep {
    /// Diagonal enumeration value of `(component, coordinate)`.
    pub enumeration: u64,
    /// 1-based component index `i`.
    pub component: usize,
    /// 1-based coordinate `j` inside the component.
    pub coordinate: usize,
    /// Flat 0-based coordinate index.
    pub flat: usize,
}

/// Subspace chain of a c₀-sum whose component duals are uniformly convex.
#[derive(Clone, Debug)]
pub struct SubspaceChain {
    space: Space,
    component_dims: Vec<usize>,
    component_duals: Vec<SpaceSpec>,
    steps: Vec<ChainStep>,
    order: Vec<usize>,
}

impl PartialEq for SubspaceChain {
    fn eq(&self, other: &Self) -> bool {
        self.space == other.space
    }
}

// ε values at which each component dual must show a positive δ.
const DELTA_PROBES: [f64; 5] = [0.05, 0.25, 0.5, 0.75, 0.95];

impl SubspaceChain {
    pub fn new(space: &Space) -> Result<Self> {
        let components = match space.spec() {
            SpaceSpec::C0Sum { components } => components,
            other => return Err(Error::UnsupportedSpace(format!("c0-sum chain needs a c0-sum, got {other}"))),
        };
        let mut component_duals = Vec::with_capacity(components.len());
        for c in components {
            if !matches!(c, SpaceSpec::Lp { .. } | SpaceSpec::Sup { .. }) {
                return Err(Error::UnsupportedSpace(format!("c0-sum components must be leaves, got {c}")));
            }
            let dual = c.dual();
            for eps in DELTA_PROBES {
                match modulus_convexity(&dual, eps) {
                    Ok(d) if d > 0.0 => {}
                    _ => return Err(Error::PreconditionModulus(format!("{dual} at epsilon {eps}"))),
                }
            }
            component_duals.push(dual);
        }
        let component_dims: Vec<usize> = components.iter().map(SpaceSpec::dim).collect();
        let offsets: Vec<usize> = space.blocks().iter().map(|r| r.start).collect();
        let total = space.dim();
        let count = component_dims.len();
        let widest = *component_dims.iter().max().expect("non-empty");

        let mut steps = Vec::with_capacity(total);
        // Diagonal s = i + j, j increasing: enumeration values come out in order.
        'diagonals: for s in 2..=(count + widest) {
            for j in 1..s {
                let i = s - j;
                if i <= count && j <= component_dims[i - 1] {
                    steps.push(ChainStep {
                        enumeration: chain_index(i as u64, j as u64),
                        component: i,
                        coordinate: j,
                        flat: offsets[i - 1] + j - 1,
                    });
                    if steps.len() == total {
                        break 'diagonals;
                    }
                }
            }
        }
        let order = steps.iter().map(|s| s.flat).collect();
        Ok(SubspaceChain { space: space.clone(), component_dims, component_duals, steps, order })
    }

    pub fn space(&self) -> &Space {
        &self.space
    }

    pub fn component_dims(&self) -> &[usize] {
        &self.component_dims
    }

    pub fn steps(&self) -> &[ChainStep] {
        &self.steps
    }

    /// Number of nontrivial subspaces `K` (equals the dimension).
    pub fn len(&self) -> usize {
        self.order.len()
    }

    pub fn is_empty(&self) -> bool {
        self.order.is_empty()
    }

    /// Coordinates spanning `E_k`, `0 ≤ k ≤ K`.
    pub fn subspace(&self, k: usize) -> &[usize] {
        &self.order[..k]
    }

    /// Flat coordinates in the order the chain adds them.
    pub fn order(&self) -> &[usize] {
        &self.order
    }

    /// Common lower modulus `inf_i δ_i(ε)` of the component duals.
    pub fn lower_delta(&self, eps: f64) -> Result<f64> {
        self.component_duals
            .iter()
            .map(|d| modulus_convexity(d, eps))
            .try_fold(f64::INFINITY, |m, d| d.map(|d| m.min(d)))
    }

    /// Upper bound on `‖φ(x*) − φ(y*)‖` for `‖x* − y*‖ ≤ t`: the smallest
    /// `ε + 9δ(ε)² + 2δ(ε)` over `ε ∈ (0, 1)` with `δ(ε)² > t`, capped at the
    /// ball diameter 2.
    pub fn continuity_bound(&self, t: f64) -> Result<f64> {
        if t <= 0.0 {
            return Ok(0.0);
        }
        let hi = 1.0 - 1e-12;
        let d_hi = self.lower_delta(hi)?;
        if d_hi * d_hi <= t {
            return Ok(2.0);
        }
        let mut failure = None;
        let mut g = |e: f64| match self.lower_delta(e) {
            Ok(d) => d * d - t,
            Err(err) => {
                failure = Some(err);
                1.0
            }
        };
        let b = bisect(&mut g, 1e-12, hi, 1e-13)?;
        if let Some(err) = failure {
            return Err(err);
        }
        let eps = b.hi;
        let d = self.lower_delta(eps)?;
        Ok((eps + 9.0 * d * d + 2.0 * d).min(2.0))
    }
}

/// Minimum-norm (Hahn-Banach) extension of a functional on the coordinate
/// subspace spanned by `support` (values listed in `support` order).
///
/// Every supported dual norm is a monotone lattice norm, so zero padding is a
/// minimizer and its norm equals the norm of `g` on the subspace. Uniqueness
/// holds exactly when every nonzero perturbation on the free coordinates
/// strictly increases the dual norm; otherwise this returns
/// [`Error::NonUniqueExtension`].
pub fn hahn_banach_min_extension(space: &Space, support: &[usize], values: &[f64]) -> Result<DualElement> {
    if support.len() != values.len() {
        return Err(Error::DimensionMismatch { expected: support.len(), found: values.len() });
    }
    let d = space.dim();
    let mut coords = vec![0.0; d];
    let mut free = vec![true; d];
    for (&j, &v) in support.iter().zip(values) {
        if j >= d {
            return Err(Error::IndexOutOfRange { index: j, len: d });
        }
        if !free[j] {
            return Err(Error::InvalidArgument(format!("coordinate {j} listed twice")));
        }
        free[j] = false;
        coords[j] = v;
    }
    if !strictly_increasing_on(space.dual_spec(), &coords, &free) {
        return Err(Error::NonUniqueExtension);
    }
    space.dual(coords)
}

// Does every nonzero change on the `free` coordinates strictly raise the norm?
fn strictly_increasing_on(spec: &SpaceSpec, a: &[f64], free: &[bool]) -> bool {
    if !free.iter().any(|&f| f) {
        return true;
    }
    match spec {
        SpaceSpec::Lp { .. } => true,
        SpaceSpec::Sup { .. } => a.iter().zip(free).all(|(&x, &f)| f || x == 0.0),
        SpaceSpec::L1Sum { components } => {
            let mut start = 0;
            components.iter().all(|c| {
                let r = start..start + c.dim();
                start = r.end;
                strictly_increasing_on(c, &a[r.clone()], &free[r])
            })
        }
        SpaceSpec::C0Sum { components } => {
            let mut start = 0;
            let blocks: Vec<_> = components
                .iter()
                .map(|c| {
                    let r = start..start + c.dim();
                    start = r.end;
                    (c, c.norm_of(&a[r.clone()]), r)
                })
                .collect();
            let total = blocks.iter().fold(0.0_f64, |m, b| m.max(b.1));
            blocks.iter().all(|(c, norm, r)| {
                !free[r.clone()].iter().any(|&f| f)
                    || (strictly_increasing_on(c, &a[r.clone()], &free[r.clone()]) && *norm == total)
            })
        }
    }
}

/// Blended retraction on the c₀-sum dual.
///
/// With `n = min{k : ‖R_k* f‖ ≥ 1}`: for `n = 1` return `H_1(R_1* f / ‖R_1* f‖)`;
/// otherwise find `λ ∈ (0, 1]` with `‖λ R_n* f + (1 − λ) ψ_{n−1}(R_{n−1}* f)‖ = 1`
/// and return `H_n` of that blend.
pub fn c0_sum_retract(chain: &SubspaceChain, f: &DualElement) -> Result<DualElement> {
    Ok(c0_sum_retract_detailed(chain, f)?.0)
}

/// Also returns `(n, λ)` for inputs outside the ball.
pub fn c0_sum_retract_detailed(chain: &SubspaceChain, f: &DualElement) -> Result<(DualElement, Option<(usize, f64)>)> {
    if f.space() != chain.space() {
        return Err(Error::SpaceMismatch);
    }
    if f.norm() <= 1.0 {
        return Ok((f.clone(), None));
    }
    let space = chain.space();
    let restrict = |k: usize| f.restrict(chain.subspace(k));
    let mut n = None;
    for k in 1..=chain.len() {
        if restrict(k)?.norm() >= 1.0 {
            n = Some(k);
            break;
        }
    }
    let n = n.ok_or_else(|| Error::BisectionFailure("dual norm exceeds 1 but no R_k* f reaches 1".into()))?;
    let extend = |k: usize, g: &DualElement| {
        let support = chain.subspace(k);
        let values: Vec<f64> = support.iter().map(|&j| g.coords()[j]).collect();
        hahn_banach_min_extension(space, support, &values)
    };
    if n == 1 {
        let r1 = restrict(1)?;
        let out = extend(1, &r1.scaled(1.0 / r1.norm()))?;
        return Ok((out, Some((1, 1.0))));
    }
    let current = restrict(n)?;
    let previous = extend(n - 1, &restrict(n - 1)?)?.restrict(chain.subspace(n))?;
    let blend = |lambda: f64| -> Result<DualElement> { previous.scaled(1.0 - lambda).add_scaled(lambda, &current) };
    let mut failure = None;
    let g = |lambda: f64| match blend(lambda) {
        Ok(b) => b.norm() - 1.0,
        Err(e) => {
            failure = Some(e);
            1.0
        }
    };
    let lambda = if current.norm() == 1.0 { 1.0 } else { bisect(g, 0.0, 1.0, ROOT_TOL)?.lo };
    if let Some(e) = failure {
        return Err(e);
    }
    let out = extend(n, &blend(lambda)?)?;
    Ok((out, Some((n, lambda))))
}
