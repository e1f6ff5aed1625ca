//! Desk-scale sequence spaces: `ℓ_p^n` leaves and finite ℓ₁/c₀ sums of them.
//!
//! Every space is a coordinate lattice. Vectors of nested sums are stored flat,
//! component blocks laid out left to right, and the dual of a spec uses the same
//! layout, so a primal vector and a dual element pair by a plain dot product.

use std::fmt;
use std::ops::Range;
use std::sync::Arc;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// Declarative description of a finite-dimensional Banach space.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", try_from = "RawSpec")]
pub enum SpaceSpec {
    /// `ℓ_p^dim` with `1 ≤ p < ∞`.
    Lp { p: f64, dim: usize },
    /// `ℓ_∞^dim`, kept as its own leaf rather than a limit of `p`.
    Sup { dim: usize },
    /// ℓ₁-sum of the components.
    L1Sum { components: Vec<SpaceSpec> },
    /// c₀-sum (sup of component norms) of the components.
    C0Sum { components: Vec<SpaceSpec> },
}

// Mirror type so deserialized specs go through validation.
#[derive(Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
enum RawSpec {
    Lp { p: f64, dim: usize },
    Sup { dim: usize },
    L1Sum { components: Vec<SpaceSpec> },
    C0Sum { components: Vec<SpaceSpec> },
}

impl TryFrom<RawSpec> for SpaceSpec {
    type Error = Error;

    fn try_from(raw: RawSpec) -> Result<Self> {
        let spec = match raw {
            RawSpec::Lp { p, dim } => SpaceSpec::Lp { p, dim },
            RawSpec::Sup { dim } => SpaceSpec::Sup { dim },
            RawSpec::L1Sum { components } => SpaceSpec::L1Sum { components },
            RawSpec::C0Sum { components } => SpaceSpec::C0Sum { components },
        };
        spec.validate()?;
        Ok(spec)
    }
}

impl SpaceSpec {
    pub fn lp(p: f64, dim: usize) -> Result<Self> {
        let spec = SpaceSpec::Lp { p, dim };
        spec.validate()?;
        Ok(spec)
    }

    pub fn sup(dim: usize) -> Result<Self> {
        let spec = SpaceSpec::Sup { dim };
        spec.validate()?;
        Ok(spec)
    }

    pub fn l1_sum(components: Vec<SpaceSpec>) -> Result<Self> {
        let spec = SpaceSpec::L1Sum { components };
        spec.validate()?;
        Ok(spec)
    }

    pub fn c0_sum(components: Vec<SpaceSpec>) -> Result<Self> {
        let spec = SpaceSpec::C0Sum { components };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            SpaceSpec::Lp { p, dim } => {
                if !(p.is_finite() && *p >= 1.0) {
                    return Err(Error::InvalidSpec(format!("p must be finite and >= 1, got {p}")));
                }
                if *dim == 0 {
                    return Err(Error::InvalidSpec("dim must be positive".into()));
                }
            }
            SpaceSpec::Sup { dim } => {
                if *dim == 0 {
                    return Err(Error::InvalidSpec("dim must be positive".into()));
                }
            }
            SpaceSpec::L1Sum { components } | SpaceSpec::C0Sum { components } => {
                if components.is_empty() {
                    return Err(Error::InvalidSpec("sum with no components".into()));
                }
                for c in components {
                    c.validate()?;
                }
            }
        }
        Ok(())
    }

    /// Total number of coordinates.
    pub fn dim(&self) -> usize {
        match self {
            SpaceSpec::Lp { dim, .. } | SpaceSpec::Sup { dim } => *dim,
            SpaceSpec::L1Sum { components } | SpaceSpec::C0Sum { components } => {
                components.iter().map(SpaceSpec::dim).sum()
            }
        }
    }

    /// The dual spec. `ℓ_p ↦ ℓ_q`, `ℓ₁ ↦ ℓ_∞`, `ℓ_∞ ↦ ℓ₁`, and the two sum
    /// kinds swap.
    pub fn dual(&self) -> SpaceSpec {
        match self {
            SpaceSpec::Lp { p, dim } if *p == 1.0 => SpaceSpec::Sup { dim: *dim },
            SpaceSpec::Lp { p, dim } => SpaceSpec::Lp { p: conjugate_exponent(*p), dim: *dim },
            SpaceSpec::Sup { dim } => SpaceSpec::Lp { p: 1.0, dim: *dim },
            SpaceSpec::L1Sum { components } => SpaceSpec::C0Sum {
                components: components.iter().map(SpaceSpec::dual).collect(),
            },
            SpaceSpec::C0Sum { components } => SpaceSpec::L1Sum {
                components: components.iter().map(SpaceSpec::dual).collect(),
            },
        }
    }

    pub fn components(&self) -> Option<&[SpaceSpec]> {
        match self {
            SpaceSpec::L1Sum { components } | SpaceSpec::C0Sum { components } => Some(components),
            _ => None,
        }
    }

    /// Coordinate ranges of the top-level components; a leaf is one block.
    pub fn blocks(&self) -> Vec<Range<usize>> {
        match self.components() {
            None => std::iter::once(0..self.dim()).collect(),
            Some(components) => {
                let mut start = 0;
                components
                    .iter()
                    .map(|c| {
                        let r = start..start + c.dim();
                        start = r.end;
                        r
                    })
                    .collect()
            }
        }
    }

    /// Norm of a flat coordinate array. The caller guarantees the length.
    pub fn norm_of(&self, coords: &[f64]) -> f64 {
        debug_assert_eq!(coords.len(), self.dim());
        match self {
            SpaceSpec::Lp { p, .. } => lp_norm(*p, coords),
            SpaceSpec::Sup { .. } => coords.iter().fold(0.0, |m, a| m.max(a.abs())),
            SpaceSpec::L1Sum { components } => {
                let mut start = 0;
                components
                    .iter()
                    .map(|c| {
                        let end = start + c.dim();
                        let n = c.norm_of(&coords[start..end]);
                        start = end;
                        n
                    })
                    .sum()
            }
            SpaceSpec::C0Sum { components } => {
                let mut start = 0;
                components.iter().fold(0.0, |m, c| {
                    let end = start + c.dim();
                    let n = c.norm_of(&coords[start..end]);
                    start = end;
                    m.max(n)
                })
            }
        }
    }

    /// Unit vector `u` of the dual spec with `⟨u, a⟩ = ‖a‖`.
    ///
    /// Ties are broken canonically: the lowest maximizing index or component
    /// wins, and coordinates the norm does not see get zero weight. With
    /// `strict` set, any tie makes this fail with [`Error::NonSmoothPoint`].
    pub fn norming_vector(&self, coords: &[f64], strict: bool) -> Result<Vec<f64>> {
        if coords.iter().all(|&a| a == 0.0) {
            return Err(Error::ZeroFunctional);
        }
        let mut out = vec![0.0; coords.len()];
        let unique = self.norming_into(coords, &mut out);
        if strict && !unique {
            return Err(Error::NonSmoothPoint);
        }
        Ok(out)
    }

    // Writes a norming vector of a nonzero block into `out`; returns uniqueness.
    fn norming_into(&self, a: &[f64], out: &mut [f64]) -> bool {
        match self {
            SpaceSpec::Lp { p, .. } if *p == 1.0 => {
                let mut unique = true;
                for (o, &x) in out.iter_mut().zip(a) {
                    if x == 0.0 {
                        unique = false;
                        *o = 0.0;
                    } else {
                        *o = x.signum();
                    }
                }
                unique || a.len() == 1
            }
            SpaceSpec::Lp { p, .. } => {
                let norm = lp_norm(*p, a);
                for (o, &x) in out.iter_mut().zip(a) {
                    *o = x.signum() * (x.abs() / norm).powf(p - 1.0);
                    if x == 0.0 {
                        *o = 0.0;
                    }
                }
                true
            }
            SpaceSpec::Sup { .. } => {
                let (best, count) = argmax_abs(a.iter().copied());
                out.iter_mut().for_each(|o| *o = 0.0);
                out[best] = a[best].signum();
                count == 1
            }
            SpaceSpec::L1Sum { components } => {
                let mut start = 0;
                let mut unique = true;
                for c in components {
                    let end = start + c.dim();
                    let block = &a[start..end];
                    if block.iter().all(|&x| x == 0.0) {
                        out[start..end].iter_mut().for_each(|o| *o = 0.0);
                        unique = false;
                    } else {
                        unique &= c.norming_into(block, &mut out[start..end]);
                    }
                    start = end;
                }
                unique
            }
            SpaceSpec::C0Sum { components } => {
                let mut start = 0;
                let mut norms = Vec::with_capacity(components.len());
                let mut ranges = Vec::with_capacity(components.len());
                for c in components {
                    let end = start + c.dim();
                    norms.push(c.norm_of(&a[start..end]));
                    ranges.push(start..end);
                    start = end;
                }
                let (best, count) = argmax_abs(norms.iter().copied());
                out.iter_mut().for_each(|o| *o = 0.0);
                let r = ranges[best].clone();
                let inner = components[best].norming_into(&a[r.clone()], &mut out[r]);
                inner && count == 1
            }
        }
    }
}

impl fmt::Display for SpaceSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SpaceSpec::Lp { p, dim } => write!(f, "l{p}^{dim}"),
            SpaceSpec::Sup { dim } => write!(f, "linf^{dim}"),
            SpaceSpec::L1Sum { components } | SpaceSpec::C0Sum { components } => {
                let tag = if matches!(self, SpaceSpec::L1Sum { .. }) { "l1" } else { "c0" };
                write!(f, "{tag}[")?;
                for (i, c) in components.iter().enumerate() {
                    if i > 0 {
                        write!(f, ", ")?;
                    }
                    write!(f, "{c}")?;
                }
                write!(f, "]")
            }
        }
    }
}

/// `q` with `1/p + 1/q = 1`; infinite for `p = 1`.
pub fn conjugate_exponent(p: f64) -> f64 {
    if p == 1.0 {
        f64::INFINITY
    } else {
        p / (p - 1.0)
    }
}

fn lp_norm(p: f64, a: &[f64]) -> f64 {
    if p == 1.0 {
        return a.iter().map(|x| x.abs()).sum();
    }
    let scale = a.iter().fold(0.0_f64, |m, x| m.max(x.abs()));
    if scale == 0.0 {
        return 0.0;
    }
    if p == 2.0 {
        let s: f64 = a.iter().map(|x| (x / scale).powi(2)).sum();
        return scale * s.sqrt();
    }
    let s: f64 = a.iter().map(|x| (x.abs() / scale).powf(p)).sum();
    scale * s.powf(1.0 / p)
}

// Index of the first maximal |value| and how many entries tie with it.
fn argmax_abs(values: impl Iterator<Item = f64>) -> (usize, usize) {
    let mut best = 0;
    let mut best_val = f64::NEG_INFINITY;
    let mut count = 0;
    for (i, v) in values.enumerate() {
        let v = v.abs();
        if v > best_val {
            best = i;
            best_val = v;
            count = 1;
        } else if v == best_val {
            count += 1;
        }
    }
    (best, count)
}

#[derive(Debug)]
struct SpaceData {
    spec: SpaceSpec,
    dual: SpaceSpec,
    dim: usize,
    blocks: Vec<Range<usize>>,
}

/// A validated, shareable space. Cloning is cheap.
#[derive(Clone, Debug)]
pub struct Space(Arc<SpaceData>);

impl PartialEq for Space {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || self.0.spec == other.0.spec
    }
}

impl Space {
    pub fn new(spec: SpaceSpec) -> Result<Self> {
        spec.validate()?;
        let dual = spec.dual();
        let dim = spec.dim();
        let blocks = spec.blocks();
        Ok(Space(Arc::new(SpaceData { spec, dual, dim, blocks })))
    }

    pub fn spec(&self) -> &SpaceSpec {
        &self.0.spec
    }

    pub fn dual_spec(&self) -> &SpaceSpec {
        &self.0.dual
    }

    pub fn dim(&self) -> usize {
        self.0.dim
    }

    /// Top-level component blocks (one block for a leaf).
    pub fn blocks(&self) -> &[Range<usize>] {
        &self.0.blocks
    }

    /// The space whose dual is the dual of this one, i.e. swap roles.
    pub fn dual_space(&self) -> Space {
        Space::new(self.0.dual.clone()).expect("dual of a valid spec is valid")
    }

    pub fn primal(&self, coords: Vec<f64>) -> Result<PrimalVector> {
        self.check_len(coords.len())?;
        Ok(PrimalVector { space: self.clone(), coords })
    }

    pub fn dual(&self, coords: Vec<f64>) -> Result<DualElement> {
        self.check_len(coords.len())?;
        Ok(DualElement { space: self.clone(), coords })
    }

    pub fn zero_dual(&self) -> DualElement {
        DualElement { space: self.clone(), coords: vec![0.0; self.dim()] }
    }

    /// Unit basis vector `e_j` (0-based).
    pub fn basis(&self, j: usize) -> Result<PrimalVector> {
        let mut coords = vec![0.0; self.dim()];
        *coords.get_mut(j).ok_or(Error::IndexOutOfRange { index: j, len: self.dim() })? = 1.0;
        Ok(PrimalVector { space: self.clone(), coords })
    }

    /// Biorthogonal functional `e_j*` (0-based).
    pub fn dual_basis(&self, j: usize) -> Result<DualElement> {
        let e = self.basis(j)?;
        Ok(DualElement { space: self.clone(), coords: e.coords })
    }

    pub fn norm(&self, v: &PrimalVector) -> Result<f64> {
        self.check_same(&v.space)?;
        Ok(v.norm())
    }

    pub fn dual_norm(&self, f: &DualElement) -> Result<f64> {
        self.check_same(&f.space)?;
        Ok(f.norm())
    }

    /// Unit `x` with `f(x) = ‖f‖`, with canonical tie-breaking.
    pub fn norming_point(&self, f: &DualElement) -> Result<PrimalVector> {
        self.check_same(&f.space)?;
        let coords = self.0.dual.norming_vector(&f.coords, false)?;
        Ok(PrimalVector { space: self.clone(), coords })
    }

    /// Like [`Space::norming_point`], but fails unless the point is unique.
    pub fn norming_point_strict(&self, f: &DualElement) -> Result<PrimalVector> {
        self.check_same(&f.space)?;
        let coords = self.0.dual.norming_vector(&f.coords, true)?;
        Ok(PrimalVector { space: self.clone(), coords })
    }

    /// Unit functional `g` with `g(x) = ‖x‖` (the duality map).
    pub fn duality_map(&self, x: &PrimalVector, strict: bool) -> Result<DualElement> {
        self.check_same(&x.space)?;
        let coords = self.0.spec.norming_vector(&x.coords, strict)?;
        Ok(DualElement { space: self.clone(), coords })
    }

    fn check_len(&self, found: usize) -> Result<()> {
        if found != self.dim() {
            return Err(Error::DimensionMismatch { expected: self.dim(), found });
        }
        Ok(())
    }

    fn check_same(&self, other: &Space) -> Result<()> {
        if self != other {
            return Err(Error::SpaceMismatch);
        }
        Ok(())
    }
}

impl Serialize for Space {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        self.0.spec.serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for Space {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let spec = SpaceSpec::deserialize(deserializer)?;
        Space::new(spec).map_err(serde::de::Error::custom)
    }
}

#[derive(Serialize, Deserialize)]
struct TaggedCoords {
    space: Space,
    coords: Vec<f64>,
}

macro_rules! tagged_vector {
    ($name:ident) => {
        impl $name {
            pub fn space(&self) -> &Space {
                &self.space
            }

            pub fn coords(&self) -> &[f64] {
                &self.coords
            }

            pub fn into_coords(self) -> Vec<f64> {
                self.coords
            }

            pub fn dim(&self) -> usize {
                self.coords.len()
            }

            pub fn scaled(&self, c: f64) -> Self {
                $name { space: self.space.clone(), coords: self.coords.iter().map(|a| c * a).collect() }
            }

            pub fn add(&self, other: &Self) -> Result<Self> {
                self.zip_with(other, |a, b| a + b)
            }

            pub fn sub(&self, other: &Self) -> Result<Self> {
                self.zip_with(other, |a, b| a - b)
            }

            /// `self + c·other`.
            pub fn add_scaled(&self, c: f64, other: &Self) -> Result<Self> {
                self.zip_with(other, |a, b| a + c * b)
            }

            pub fn distance(&self, other: &Self) -> Result<f64> {
                Ok(self.sub(other)?.norm())
            }

            /// Replace the coordinates, keeping the space tag.
            pub fn with_coords(&self, coords: Vec<f64>) -> Result<Self> {
                self.space.check_len(coords.len())?;
                Ok($name { space: self.space.clone(), coords })
            }

            fn zip_with(&self, other: &Self, op: impl Fn(f64, f64) -> f64) -> Result<Self> {
                self.space.check_same(&other.space)?;
                let coords = self.coords.iter().zip(&other.coords).map(|(&a, &b)| op(a, b)).collect();
                Ok($name { space: self.space.clone(), coords })
            }
        }

        impl Serialize for $name {
            fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
                TaggedCoords { space: self.space.clone(), coords: self.coords.clone() }.serialize(serializer)
            }
        }

        impl<'de> Deserialize<'de> for $name {
            fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
                let raw = TaggedCoords::deserialize(deserializer)?;
                raw.space.check_len(raw.coords.len()).map_err(serde::de::Error::custom)?;
                Ok($name { space: raw.space, coords: raw.coords })
            }
        }
    };
}

/// A vector of the primal space.
#[derive(Clone, Debug, PartialEq)]
pub struct PrimalVector {
    space: Space,
    coords: Vec<f64>,
}

/// A functional on the primal space, measured in the dual norm.
#[derive(Clone, Debug, PartialEq)]
pub struct DualElement {
    space: Space,
    coords: Vec<f64>,
}

tagged_vector!(PrimalVector);
tagged_vector!(DualElement);

impl PrimalVector {
    pub fn norm(&self) -> f64 {
        self.space.spec().norm_of(&self.coords)
    }

    /// `x / ‖x‖`; a zero vector is returned unchanged.
    pub fn normalized(&self) -> Self {
        let n = self.norm();
        if n == 0.0 {
            self.clone()
        } else {
            self.scaled(1.0 / n)
        }
    }
}

impl DualElement {
    /// Dual norm.
    pub fn norm(&self) -> f64 {
        self.space.dual_spec().norm_of(&self.coords)
    }

    pub fn pair(&self, v: &PrimalVector) -> Result<f64> {
        self.space.check_same(&v.space)?;
        Ok(self.coords.iter().zip(&v.coords).map(|(a, b)| a * b).sum())
    }

    /// `P_n* f`: keep the first `n` coordinates, zero the rest.
    pub fn truncate(&self, n: usize) -> Result<Self> {
        if n > self.dim() {
            return Err(Error::IndexOutOfRange { index: n, len: self.dim() });
        }
        let mut coords = self.coords.clone();
        coords[n..].iter_mut().for_each(|a| *a = 0.0);
        Ok(DualElement { space: self.space.clone(), coords })
    }

    /// Keep only the listed coordinates (restriction to a coordinate subspace,
    /// represented by zero padding).
    pub fn restrict(&self, support: &[usize]) -> Result<Self> {
        let mut coords = vec![0.0; self.dim()];
        for &j in support {
            let a = self.coords.get(j).ok_or(Error::IndexOutOfRange { index: j, len: self.dim() })?;
            coords[j] = *a;
        }
        Ok(DualElement { space: self.space.clone(), coords })
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(|&a| a == 0.0)
    }
}
