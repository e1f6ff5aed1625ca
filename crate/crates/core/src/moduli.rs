//! Moduli of monotonicity, convexity and continuity.
//!
//! `M(ε) = inf{‖|x| + |y|‖ − 1 : ‖x‖ = 1, ‖y‖ ≥ ε}` and
//! `δ(ε) = inf{1 − ‖(x + y)/2‖ : x, y ∈ S, ‖x − y‖ ≥ ε}`.

use std::io::Write;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::root::bisect;
use crate::space::SpaceSpec;

/// Tabulated `ε ↦ value` data.
///
/// Evaluation interpolates linearly, anchored at `(0, 0)` on the left and
/// clamped to the last value on the right.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawCurve")]
pub struct ModulusCurve {
    grid: Vec<f64>,
    values: Vec<f64>,
}

#[derive(Deserialize)]
struct RawCurve {
    grid: Vec<f64>,
    values: Vec<f64>,
}

impl TryFrom<RawCurve> for ModulusCurve {
    type Error = Error;

    fn try_from(raw: RawCurve) -> Result<Self> {
        ModulusCurve::new(raw.grid, raw.values)
    }
}

impl ModulusCurve {
    pub fn new(grid: Vec<f64>, values: Vec<f64>) -> Result<Self> {
        if grid.is_empty() {
            return Err(Error::EmptyCurve);
        }
        if grid.len() != values.len() {
            return Err(Error::InvalidCurve(format!(
                "{} grid points but {} values",
                grid.len(),
                values.len()
            )));
        }
        if !grid.iter().chain(&values).all(|v| v.is_finite()) {
            return Err(Error::InvalidCurve("non-finite entry".into()));
        }
        if grid[0] <= 0.0 || grid.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::InvalidCurve("grid must be positive and strictly increasing".into()));
        }
        Ok(ModulusCurve { grid, values })
    }

    pub fn tabulate(grid: &[f64], f: impl FnMut(f64) -> f64) -> Result<Self> {
        let values = grid.iter().copied().map(f).collect();
        ModulusCurve::new(grid.to_vec(), values)
    }

    pub fn tabulate_fallible(grid: &[f64], mut f: impl FnMut(f64) -> Result<f64>) -> Result<Self> {
        let values = grid.iter().map(|&x| f(x)).collect::<Result<Vec<_>>>()?;
        ModulusCurve::new(grid.to_vec(), values)
    }

    pub fn grid(&self) -> &[f64] {
        &self.grid
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.grid.len()
    }

    pub fn is_empty(&self) -> bool {
        self.grid.is_empty()
    }

    pub fn max_grid(&self) -> f64 {
        *self.grid.last().expect("non-empty")
    }

    pub fn is_non_decreasing(&self) -> bool {
        self.values.first().is_some_and(|&v| v >= 0.0) && self.values.windows(2).all(|w| w[1] >= w[0])
    }

    pub fn eval(&self, x: f64) -> f64 {
        if x <= 0.0 {
            return 0.0;
        }
        let i = self.grid.partition_point(|&g| g < x);
        if i == self.grid.len() {
            return *self.values.last().expect("non-empty");
        }
        let (x0, y0) = if i == 0 { (0.0, 0.0) } else { (self.grid[i - 1], self.values[i - 1]) };
        let (x1, y1) = (self.grid[i], self.values[i]);
        y0 + (x - x0) * (y1 - y0) / (x1 - x0)
    }

    /// `sup{ε ∈ [0, max_grid] : curve(ε) ≤ t}` for a non-decreasing curve.
    ///
    /// Binary search locates the last tabulated point at or below `t`; the
    /// crossing inside the following segment is solved exactly.
    pub fn inverse(&self, t: f64) -> Result<f64> {
        if !self.is_non_decreasing() {
            return Err(Error::InvalidCurve("inverse needs a non-decreasing curve".into()));
        }
        if t < 0.0 {
            return Ok(0.0);
        }
        let count = self.values.partition_point(|&v| v <= t);
        if count == self.values.len() {
            return Ok(self.max_grid());
        }
        let (x0, y0) = if count == 0 { (0.0, 0.0) } else { (self.grid[count - 1], self.values[count - 1]) };
        let (x1, y1) = (self.grid[count], self.values[count]);
        Ok(x0 + (t - y0) * (x1 - x0) / (y1 - y0))
    }

    /// Pointwise maximum, tabulated on this curve's grid.
    pub fn pointwise_max(&self, other: &ModulusCurve) -> ModulusCurve {
        let values = self.grid.iter().zip(&self.values).map(|(&x, &v)| v.max(other.eval(x))).collect();
        ModulusCurve { grid: self.grid.clone(), values }
    }

    /// Two-column CSV export.
    pub fn write_csv<W: Write>(&self, writer: W, x_name: &str, y_name: &str) -> Result<()> {
        let mut w = csv::Writer::from_writer(writer);
        w.write_record([x_name, y_name])?;
        for (x, y) in self.grid.iter().zip(&self.values) {
            w.write_record([x.to_string(), y.to_string()])?;
        }
        w.flush()?;
        Ok(())
    }
}

/// `modulus_inverse(M, t) = sup{ε ≥ 0 : M(ε) ≤ t}` on a tabulated curve.
pub fn modulus_inverse(curve: &ModulusCurve, t: f64) -> Result<f64> {
    curve.inverse(t)
}

/// `ε = 0.01, 0.02, …, 1.00`.
pub fn default_epsilon_grid() -> Vec<f64> {
    (1..=100).map(|k| k as f64 / 100.0).collect()
}

/// 200 points on `(0, 2]`, quadratically denser near zero.
pub fn default_t_grid() -> Vec<f64> {
    (1..=200).map(|k| 2.0 * (k as f64 / 200.0).powi(2)).collect()
}

/// Modulus of monotonicity of a coordinate lattice.
#[derive(Clone, Debug, PartialEq)]
pub enum MonotonicityModulus {
    /// `M(ε) = (1 + ε^p)^{1/p} − 1`; `p = 1` is the identity modulus.
    Power { p: f64 },
    /// `M ≡ 0`: the lattice is not uniformly monotone.
    Degenerate,
    Tabulated(ModulusCurve),
}

impl MonotonicityModulus {
    pub fn eval(&self, eps: f64) -> f64 {
        if eps <= 0.0 {
            return 0.0;
        }
        match self {
            MonotonicityModulus::Power { p } if *p == 1.0 => eps,
            MonotonicityModulus::Power { p } => ((eps.powf(*p)).ln_1p() / p).exp_m1(),
            MonotonicityModulus::Degenerate => 0.0,
            MonotonicityModulus::Tabulated(c) => c.eval(eps),
        }
    }

    /// `M⁻¹(t) = sup{ε ≥ 0 : M(ε) ≤ t}`; infinite for a degenerate modulus.
    pub fn inverse(&self, t: f64) -> f64 {
        if t < 0.0 {
            return 0.0;
        }
        match self {
            MonotonicityModulus::Power { p } if *p == 1.0 => t,
            MonotonicityModulus::Power { p } => (p * t.ln_1p()).exp_m1().powf(1.0 / p),
            MonotonicityModulus::Degenerate => f64::INFINITY,
            MonotonicityModulus::Tabulated(c) => c.inverse(t).expect("tabulated moduli are non-decreasing"),
        }
    }

    pub fn is_uniform(&self) -> bool {
        !matches!(self, MonotonicityModulus::Degenerate)
    }

    pub fn tabulate(&self, grid: &[f64]) -> Result<ModulusCurve> {
        ModulusCurve::tabulate(grid, |e| self.eval(e))
    }
}

/// Closed-form modulus of monotonicity of the lattice `spec`.
///
/// A leaf `ℓ_p^n` with `n ≥ 2` has `M(ε) = (1 + ε^p)^{1/p} − 1`, realized by
/// disjointly supported `x`, `y` (superadditivity of `s ↦ s^p`). One-dimensional
/// leaves behave like `p = 1`. For an ℓ₁-sum, splitting `x`, `y` into blocks of
/// norms `α_c`, `β_c` gives `‖|x| + |y|‖ ≥ Σ_c ‖(α_c, β_c)‖_{p_c} ≥ ‖(1, ε)‖_{p_max}`,
/// which is attained inside the block of largest exponent. A c₀-sum of two or
/// more blocks, or `ℓ_∞^n` with `n ≥ 2`, has `M ≡ 0`.
pub fn monotonicity_modulus(spec: &SpaceSpec) -> MonotonicityModulus {
    match effective_exponent(spec) {
        Some(p) => MonotonicityModulus::Power { p },
        None => MonotonicityModulus::Degenerate,
    }
}

fn effective_exponent(spec: &SpaceSpec) -> Option<f64> {
    match spec {
        SpaceSpec::Lp { dim: 1, .. } | SpaceSpec::Sup { dim: 1 } => Some(1.0),
        SpaceSpec::Lp { p, .. } => Some(*p),
        SpaceSpec::Sup { .. } => None,
        SpaceSpec::L1Sum { components } => {
            components.iter().map(effective_exponent).try_fold(1.0_f64, |m, p| p.map(|p| m.max(p)))
        }
        SpaceSpec::C0Sum { components } if components.len() == 1 => effective_exponent(&components[0]),
        SpaceSpec::C0Sum { .. } => None,
    }
}

pub fn is_uniformly_monotone(spec: &SpaceSpec) -> bool {
    effective_exponent(spec).is_some()
}

/// `M(ε)` of the lattice `spec` (pass the dual spec to get the modulus of a dual).
pub fn modulus_monotonicity(spec: &SpaceSpec, eps: f64) -> Result<f64> {
    if !(eps > 0.0 && eps.is_finite()) {
        return Err(Error::InvalidArgument(format!("epsilon must be positive, got {eps}")));
    }
    Ok(monotonicity_modulus(spec).eval(eps))
}

/// Sample sizes for the numeric moduli.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SamplingConfig {
    /// Random starts per coordinate.
    pub samples_per_dim: usize,
    /// Rounds of compass-search refinement.
    pub refinement_iters: usize,
    pub seed: u64,
}

impl Default for SamplingConfig {
    fn default() -> Self {
        SamplingConfig { samples_per_dim: 64, refinement_iters: 20, seed: 0 }
    }
}

/// Numeric `M(ε)`: coarse sampling over nonnegative pairs, then compass-search
/// refinement of the best starts. Returns an upper estimate of the infimum.
pub fn sampled_monotonicity(spec: &SpaceSpec, eps: f64, config: &SamplingConfig) -> Result<f64> {
    if !(eps > 0.0 && eps.is_finite()) {
        return Err(Error::InvalidArgument(format!("epsilon must be positive, got {eps}")));
    }
    let d = spec.dim();
    let objective = |u: &[f64], v: &[f64]| -> f64 {
        let nu = spec.norm_of(u);
        let nv = spec.norm_of(v);
        if nu == 0.0 || nv == 0.0 {
            return f64::INFINITY;
        }
        let w: Vec<f64> = u.iter().zip(v).map(|(a, b)| a / nu + eps * b / nv).collect();
        spec.norm_of(&w) - 1.0
    };

    let mut starts: Vec<(f64, Vec<f64>, Vec<f64>)> = Vec::new();
    for i in 0..d {
        for j in 0..d {
            let mut u = vec![0.0; d];
            let mut v = vec![0.0; d];
            u[i] = 1.0;
            v[j] = 1.0;
            starts.push((objective(&u, &v), u, v));
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    for _ in 0..config.samples_per_dim * d {
        // Sparse supports make disjoint configurations reachable.
        let u: Vec<f64> = (0..d).map(|_| if rng.random_bool(0.5) { rng.random::<f64>() } else { 0.0 }).collect();
        let v: Vec<f64> = (0..d).map(|_| if rng.random_bool(0.5) { rng.random::<f64>() } else { 0.0 }).collect();
        let value = objective(&u, &v);
        if value.is_finite() {
            starts.push((value, u, v));
        }
    }
    starts.sort_by(|a, b| a.0.total_cmp(&b.0));
    starts.truncate(4);

    let mut best = f64::INFINITY;
    for (mut value, mut u, mut v) in starts {
        let mut step = 0.25;
        for _ in 0..config.refinement_iters {
            let mut improved = false;
            for k in 0..2 * d {
                for sign in [1.0, -1.0] {
                    let (mut u2, mut v2) = (u.clone(), v.clone());
                    let slot = if k < d { &mut u2[k] } else { &mut v2[k - d] };
                    *slot = (*slot + sign * step).max(0.0);
                    let trial = objective(&u2, &v2);
                    if trial < value {
                        value = trial;
                        u = u2;
                        v = v2;
                        improved = true;
                    }
                }
            }
            if !improved {
                step *= 0.5;
            }
        }
        best = best.min(value);
    }
    Ok(best.max(0.0))
}

/// `δ(ε)` of `spec` for `ε ∈ (0, 2)`.
///
/// For `ℓ_p`, `p ≥ 2`: `1 − (1 − (ε/2)^p)^{1/p}`; for `1 < p < 2` the root of
/// `(1 − δ + ε/2)^p + |1 − δ − ε/2|^p = 2`. Both are realized in two dimensions.
pub fn modulus_convexity(spec: &SpaceSpec, eps: f64) -> Result<f64> {
    if !(eps > 0.0 && eps < 2.0) {
        return Err(Error::InvalidArgument(format!("epsilon must lie in (0, 2), got {eps}")));
    }
    match spec {
        // The unit sphere is {±1}: only antipodal pairs qualify.
        SpaceSpec::Lp { dim: 1, .. } | SpaceSpec::Sup { dim: 1 } => Ok(1.0),
        SpaceSpec::Lp { p, .. } if *p == 1.0 => Err(Error::NotUniformlyConvex),
        SpaceSpec::Sup { .. } => Err(Error::NotUniformlyConvex),
        SpaceSpec::Lp { p, .. } if *p >= 2.0 => {
            let s = (eps / 2.0).powf(*p);
            Ok(-((-s).ln_1p() / p).exp_m1())
        }
        SpaceSpec::Lp { p, .. } => {
            let half = eps / 2.0;
            let g = |delta: f64| 2.0 - (1.0 - delta + half).powf(*p) - (1.0 - delta - half).abs().powf(*p);
            let b = bisect(g, 0.0, 1.0, 1e-15)?;
            Ok(0.5 * (b.lo + b.hi))
        }
        SpaceSpec::L1Sum { components } | SpaceSpec::C0Sum { components } if components.len() == 1 => {
            modulus_convexity(&components[0], eps)
        }
        SpaceSpec::L1Sum { .. } | SpaceSpec::C0Sum { .. } => Err(Error::NotUniformlyConvex),
    }
}
