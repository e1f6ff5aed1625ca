//! One-point compactification `K = L ∪ {∞}` for a finite discrete `L`.
//!
//! `C₀(L) = ℓ_∞^{|L|}` and `C(K) = ℓ_∞^{|L|+1}`, with `∞` stored as the last
//! coordinate. Measures on `L` are signed point masses, `M(L) = ℓ₁(L)`.

use std::fmt;

use serde::de::{MapAccess, Visitor};
use serde::ser::SerializeMap;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::retract::RetractionHandle;
use crate::space::{DualElement, Space, SpaceSpec};

/// Label of the point at infinity.
pub const INFINITY_LABEL: &str = "∞";

/// Signed point masses on labelled points; serializes as an ordered
/// `{label: mass}` map.
#[derive(Clone, Debug, PartialEq)]
pub struct FiniteMeasure {
    points: Vec<String>,
    masses: Vec<f64>,
}

impl FiniteMeasure {
    pub fn new(points: Vec<String>, masses: Vec<f64>) -> Result<Self> {
        if points.len() != masses.len() {
            return Err(Error::DimensionMismatch { expected: points.len(), found: masses.len() });
        }
        for (i, p) in points.iter().enumerate() {
            if points[..i].contains(p) {
                return Err(Error::LabelCollision(p.clone()));
            }
        }
        if let Some(m) = masses.iter().find(|m| !m.is_finite()) {
            return Err(Error::InvalidArgument(format!("mass {m} is not finite")));
        }
        Ok(FiniteMeasure { points, masses })
    }

    /// Masses on the points `"1"`, `"2"`, ….
    pub fn numbered(masses: Vec<f64>) -> Self {
        let points = (1..=masses.len()).map(|i| i.to_string()).collect();
        FiniteMeasure { points, masses }
    }

    pub fn points(&self) -> &[String] {
        &self.points
    }

    pub fn masses(&self) -> &[f64] {
        &self.masses
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn mass(&self, label: &str) -> Option<f64> {
        self.points.iter().position(|p| p == label).map(|i| self.masses[i])
    }

    /// Total variation `Σ|mᵢ|`.
    pub fn norm(&self) -> f64 {
        self.masses.iter().map(|m| m.abs()).sum()
    }

    /// The space `C₀(L)` whose dual this measure lives in.
    pub fn base_space(&self) -> Result<Space> {
        Space::new(SpaceSpec::sup(self.len())?)
    }

    pub fn to_dual(&self) -> Result<DualElement> {
        self.base_space()?.dual(self.masses.clone())
    }

    pub fn with_masses(&self, masses: Vec<f64>) -> Result<Self> {
        FiniteMeasure::new(self.points.clone(), masses)
    }
}

/// `μ̃(E) = μ(E \ {∞})`: the same masses on `L`, zero at `∞`.
pub fn extend_measure(mu: &FiniteMeasure) -> Result<FiniteMeasure> {
    if mu.points.iter().any(|p| p == INFINITY_LABEL) {
        return Err(Error::LabelCollision(INFINITY_LABEL.into()));
    }
    let mut points = mu.points.clone();
    points.push(INFINITY_LABEL.into());
    let mut masses = mu.masses.clone();
    masses.push(0.0);
    Ok(FiniteMeasure { points, masses })
}

/// `ψ(μ) = φ_K(μ̃)` restricted to `L`, with `φ_K` a handle on `C(K)*`.
pub fn transfer_retract(phi_k: &RetractionHandle, mu: &FiniteMeasure) -> Result<FiniteMeasure> {
    let extended = extend_measure(mu)?;
    let expected = SpaceSpec::sup(extended.len())?;
    if phi_k.space().spec() != &expected {
        return Err(Error::ComponentMismatch(format!(
            "retraction acts on the dual of {}, measure needs {expected}",
            phi_k.space().spec()
        )));
    }
    let image = phi_k.apply(&phi_k.space().dual(extended.masses)?)?;
    let mut masses = image.into_coords();
    masses.pop();
    mu.with_masses(masses)
}

impl Serialize for FiniteMeasure {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let mut map = serializer.serialize_map(Some(self.len()))?;
        for (p, m) in self.points.iter().zip(&self.masses) {
            map.serialize_entry(p, m)?;
        }
        map.end()
    }
}

struct MeasureVisitor;

impl<'de> Visitor<'de> for MeasureVisitor {
    type Value = FiniteMeasure;

    fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
        f.write_str("a map from point labels to masses")
    }

    fn visit_map<A: MapAccess<'de>>(self, mut access: A) -> std::result::Result<FiniteMeasure, A::Error> {
        let mut points = Vec::new();
        let mut masses = Vec::new();
        while let Some((p, m)) = access.next_entry::<String, f64>()? {
            points.push(p);
            masses.push(m);
        }
        FiniteMeasure::new(points, masses).map_err(serde::de::Error::custom)
    }
}

impl<'de> Deserialize<'de> for FiniteMeasure {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        deserializer.deserialize_map(MeasureVisitor)
    }
}
