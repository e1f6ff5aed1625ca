use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::space::{DualElement, PrimalVector, Space, SpaceSpec};

/// Operator `T: X → C₀(K)` for a finite `K`, stored as the rows
/// `φ(s) = T*(δ_s)`, so that `(Tx)(s) = ⟨φ(s), x⟩` and `‖T‖ = max_s ‖φ(s)‖`.
#[derive(Clone, Debug, PartialEq)]
pub struct OperatorIntoC0 {
    domain: Space,
    points: Vec<String>,
    rows: Vec<DualElement>,
}

impl OperatorIntoC0 {
    pub fn new(domain: &Space, points: Vec<String>, rows: Vec<Vec<f64>>) -> Result<Self> {
        if points.len() != rows.len() {
            return Err(Error::DimensionMismatch { expected: points.len(), found: rows.len() });
        }
        for (i, p) in points.iter().enumerate() {
            if points[..i].contains(p) {
                return Err(Error::LabelCollision(p.clone()));
            }
        }
        let rows = rows.into_iter().map(|r| domain.dual(r)).collect::<Result<_>>()?;
        Ok(OperatorIntoC0 { domain: domain.clone(), points, rows })
    }

    /// Rows labelled `"1"`, `"2"`, ….
    pub fn numbered(domain: &Space, rows: Vec<Vec<f64>>) -> Result<Self> {
        let points = (1..=rows.len()).map(|i| i.to_string()).collect();
        Self::new(domain, points, rows)
    }

    pub fn domain(&self) -> &Space {
        &self.domain
    }

    pub fn points(&self) -> &[String] {
        &self.points
    }

    pub fn rows(&self) -> &[DualElement] {
        &self.rows
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn operator_norm(&self) -> Result<f64> {
        if self.rows.is_empty() {
            return Err(Error::EmptyK);
        }
        Ok(self.rows.iter().map(DualElement::norm).fold(0.0, f64::max))
    }

    /// `Tx` as the list of values `(Tx)(s)`.
    pub fn apply(&self, x: &PrimalVector) -> Result<Vec<f64>> {
        self.rows.iter().map(|r| r.pair(x)).collect()
    }

    /// `‖Tx‖_∞`.
    pub fn image_norm(&self, x: &PrimalVector) -> Result<f64> {
        Ok(self.apply(x)?.into_iter().fold(0.0, |m, v| m.max(v.abs())))
    }

    pub fn scaled(&self, c: f64) -> Self {
        OperatorIntoC0 {
            domain: self.domain.clone(),
            points: self.points.clone(),
            rows: self.rows.iter().map(|r| r.scaled(c)).collect(),
        }
    }

    pub fn with_rows(&self, rows: Vec<DualElement>) -> Result<Self> {
        if rows.len() != self.rows.len() {
            return Err(Error::DimensionMismatch { expected: self.rows.len(), found: rows.len() });
        }
        if rows.iter().any(|r| r.space() != &self.domain) {
            return Err(Error::SpaceMismatch);
        }
        Ok(OperatorIntoC0 { domain: self.domain.clone(), points: self.points.clone(), rows })
    }

    /// `‖S − T‖ = max_s ‖φ_S(s) − φ_T(s)‖`.
    pub fn distance(&self, other: &OperatorIntoC0) -> Result<f64> {
        if self.points != other.points {
            return Err(Error::InvalidArgument("operators are defined on different point sets".into()));
        }
        self.rows.iter().zip(&other.rows).try_fold(0.0_f64, |m, (a, b)| Ok(m.max(a.distance(b)?)))
    }
}

/// Whether some unit `x` attains `max_s |(Tx)(s)| = ‖T‖` within `tol`.
///
/// In finite dimensions the norming point of a row of maximal norm always
/// works; the witness is that point (any basis vector for the zero operator).
/// An operator with no points is reported as not attaining.
pub fn is_norm_attaining(t: &OperatorIntoC0, tol: f64) -> (bool, Option<PrimalVector>) {
    let Ok(norm) = t.operator_norm() else {
        return (false, None);
    };
    let best = t.rows.iter().position(|r| r.norm() == norm).expect("a row has maximal norm");
    let witness = match t.domain.norming_point(&t.rows[best]) {
        Ok(x) => x,
        Err(_) => t.domain.basis(0).expect("spaces have dimension at least 1"),
    };
    let attained = t.image_norm(&witness).is_ok_and(|v| (v - norm).abs() <= tol);
    (attained, Some(witness))
}

#[derive(Serialize, Deserialize)]
struct OperatorRepr {
    domain: SpaceSpec,
    points: Vec<String>,
    rows: Vec<Vec<f64>>,
}

impl Serialize for OperatorIntoC0 {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        OperatorRepr {
            domain: self.domain.spec().clone(),
            points: self.points.clone(),
            rows: self.rows.iter().map(|r| r.coords().to_vec()).collect(),
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for OperatorIntoC0 {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let repr = OperatorRepr::deserialize(deserializer)?;
        let domain = Space::new(repr.domain).map_err(serde::de::Error::custom)?;
        OperatorIntoC0::new(&domain, repr.points, repr.rows).map_err(serde::de::Error::custom)
    }
}
