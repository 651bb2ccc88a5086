//! Competitor double bubbles as labeled meridian networks.
//!
//! A surface of revolution about the `x` axis is described by its generating
//! curves in the closed upper half-plane `y ≥ 0`. Each edge is a circular arc or
//! segment carrying the labels of the regions on its left and right.

mod measure;
mod network;
mod validate;

use serde::{Deserialize, Serialize};

pub use measure::{edge_area, AreaBreakdown, JunctionResidual};
pub use network::{Cycle, FaceId, Faces, HalfEdge, Node, Topology};
pub use validate::{Violation, ViolationKind};

use crate::curve::{Curve, Vec2};
use crate::error::{domain, Error, Result};
use crate::sphere::Dimension;

/// Tolerance for weight equalities in [`WeightTriple::classify`], relative to
/// the largest weight.
pub const WEIGHT_TIE_TOL: f64 = 1e-12;

/// Surface tensions of the interface and the two exterior pieces.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "[f64; 3]", into = "[f64; 3]")]
pub struct WeightTriple {
    pub w0: f64,
    pub w1: f64,
    pub w2: f64,
}

/// Which inequality is tight for a boundary weight triple.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Binding {
    Interface,
    Nested1,
    Nested2,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum WeightClass {
    Strict,
    InterfaceDominant,
    Nested1,
    Nested2,
    Boundary(Binding),
}

impl std::fmt::Display for WeightClass {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            Self::Strict => "STRICT",
            Self::InterfaceDominant => "INTERFACE_DOMINANT",
            Self::Nested1 => "NESTED_1",
            Self::Nested2 => "NESTED_2",
            Self::Boundary(Binding::Interface) => "BOUNDARY(INTERFACE)",
            Self::Boundary(Binding::Nested1) => "BOUNDARY(NESTED_1)",
            Self::Boundary(Binding::Nested2) => "BOUNDARY(NESTED_2)",
        };
        f.write_str(s)
    }
}

impl WeightTriple {
    pub fn new(w0: f64, w1: f64, w2: f64) -> Result<Self> {
        for w in [w0, w1, w2] {
            if !w.is_finite() || w < 0.0 {
                return domain(format!("weights must be finite and nonnegative, got {w}"));
            }
        }
        if w0 == 0.0 && w1 == 0.0 && w2 == 0.0 {
            return domain("weights are all zero");
        }
        Ok(Self { w0, w1, w2 })
    }

    pub fn unit() -> Self {
        Self { w0: 1.0, w1: 1.0, w2: 1.0 }
    }

    pub fn as_array(&self) -> [f64; 3] {
        [self.w0, self.w1, self.w2]
    }

    pub fn max(&self) -> f64 {
        self.w0.max(self.w1).max(self.w2)
    }

    pub fn scaled(&self, s: f64) -> Self {
        Self { w0: self.w0 * s, w1: self.w1 * s, w2: self.w2 * s }
    }

    /// The weights with the roles of bubbles 1 and 2 exchanged.
    pub fn swapped(&self) -> Self {
        Self { w0: self.w0, w1: self.w2, w2: self.w1 }
    }

    /// Weight of a surface piece separating the two labeled regions.
    pub fn for_pair(&self, a: RegionLabel, b: RegionLabel) -> Option<f64> {
        PieceKind::of(a, b).map(|k| self.for_piece(k))
    }

    pub fn for_piece(&self, k: PieceKind) -> f64 {
        match k {
            PieceKind::Interface => self.w0,
            PieceKind::Ext1 => self.w1,
            PieceKind::Ext2 => self.w2,
        }
    }

    /// Position of the triple relative to the triangle inequalities.
    ///
    /// Strict dominance is checked first; among ties the order is interface,
    /// then bubble 1, then bubble 2.
    pub fn classify(&self) -> WeightClass {
        let tol = WEIGHT_TIE_TOL * self.max();
        let [w0, w1, w2] = self.as_array();
        let gaps = [
            (w0 - (w1 + w2), WeightClass::InterfaceDominant, Binding::Interface),
            (w1 - (w0 + w2), WeightClass::Nested1, Binding::Nested1),
            (w2 - (w0 + w1), WeightClass::Nested2, Binding::Nested2),
        ];
        for (g, class, _) in gaps {
            if g > tol {
                return class;
            }
        }
        for (g, _, b) in gaps {
            if g >= -tol {
                return WeightClass::Boundary(b);
            }
        }
        WeightClass::Strict
    }
}

impl TryFrom<[f64; 3]> for WeightTriple {
    type Error = Error;
    fn try_from(a: [f64; 3]) -> Result<Self> {
        Self::new(a[0], a[1], a[2])
    }
}

impl From<WeightTriple> for [f64; 3] {
    fn from(w: WeightTriple) -> Self {
        w.as_array()
    }
}

/// Volumes enclosed by bubbles 1 and 2.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "[f64; 2]", into = "[f64; 2]")]
pub struct VolumePair {
    pub v1: f64,
    pub v2: f64,
}

impl VolumePair {
    pub fn new(v1: f64, v2: f64) -> Result<Self> {
        for v in [v1, v2] {
            if !v.is_finite() || v < 0.0 {
                return domain(format!("volumes must be finite and nonnegative, got {v}"));
            }
        }
        if v1 == 0.0 && v2 == 0.0 {
            return domain("volumes are both zero");
        }
        Ok(Self { v1, v2 })
    }

    pub fn max(&self) -> f64 {
        self.v1.max(self.v2)
    }

    pub fn swapped(&self) -> Self {
        Self { v1: self.v2, v2: self.v1 }
    }

    pub fn scaled(&self, s: f64) -> Self {
        Self { v1: self.v1 * s, v2: self.v2 * s }
    }
}

impl TryFrom<[f64; 2]> for VolumePair {
    type Error = Error;
    fn try_from(a: [f64; 2]) -> Result<Self> {
        Self::new(a[0], a[1])
    }
}

impl From<VolumePair> for [f64; 2] {
    fn from(v: VolumePair) -> Self {
        [v.v1, v.v2]
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum RegionLabel {
    B1,
    B2,
    #[serde(rename = "EXT")]
    Ext,
}

impl std::fmt::Display for RegionLabel {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Self::B1 => "B1",
            Self::B2 => "B2",
            Self::Ext => "EXT",
        })
    }
}

impl RegionLabel {
    pub fn swapped(self) -> Self {
        match self {
            Self::B1 => Self::B2,
            Self::B2 => Self::B1,
            Self::Ext => Self::Ext,
        }
    }
}

/// The three kinds of surface piece, by the regions they separate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PieceKind {
    Interface,
    Ext1,
    Ext2,
}

impl PieceKind {
    pub fn of(a: RegionLabel, b: RegionLabel) -> Option<Self> {
        use RegionLabel::*;
        match (a, b) {
            (B1, B2) | (B2, B1) => Some(Self::Interface),
            (B1, Ext) | (Ext, B1) => Some(Self::Ext1),
            (B2, Ext) | (Ext, B2) => Some(Self::Ext2),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum EdgeKind {
    Arc,
    Segment,
}

/// One generating curve with the labels of the regions to its left and right
/// when traversed from `p` to `q`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MeridianEdge {
    pub kind: EdgeKind,
    pub p: Vec2,
    pub q: Vec2,
    pub curvature: f64,
    pub left: RegionLabel,
    pub right: RegionLabel,
}

impl MeridianEdge {
    /// Edge following `c`; a zero curvature becomes a segment.
    pub fn from_curve(c: Curve, left: RegionLabel, right: RegionLabel) -> Self {
        Self {
            kind: if c.kappa == 0.0 { EdgeKind::Segment } else { EdgeKind::Arc },
            p: c.p,
            q: c.q,
            curvature: c.kappa,
            left,
            right,
        }
    }

    pub fn curve(&self) -> Curve {
        Curve::new(self.p, self.q, self.curvature)
    }

    pub fn reversed(&self) -> Self {
        Self {
            kind: self.kind,
            p: self.q,
            q: self.p,
            curvature: -self.curvature,
            left: self.right,
            right: self.left,
        }
    }

    pub fn piece(&self) -> Option<PieceKind> {
        PieceKind::of(self.left, self.right)
    }

    /// Whether `label` is on this edge's left (+1), right (−1) or neither (0).
    pub fn side_of(&self, label: RegionLabel) -> f64 {
        if self.left == label {
            1.0
        } else if self.right == label {
            -1.0
        } else {
            0.0
        }
    }

    /// The same edge with `B1` and `B2` exchanged.
    pub fn label_swapped(&self) -> Self {
        Self { left: self.left.swapped(), right: self.right.swapped(), ..*self }
    }

    /// Image under `(x, y) ↦ (−x, y)`; orientation-reversing, so the labels swap sides.
    pub fn mirrored(&self) -> Self {
        let m = |v: Vec2| Vec2::new(-v.x, v.y);
        Self { p: m(self.p), q: m(self.q), curvature: -self.curvature, ..*self }
            .with_sides(self.right, self.left)
    }

    fn with_sides(mut self, left: RegionLabel, right: RegionLabel) -> Self {
        self.left = left;
        self.right = right;
        self
    }
}

/// A competitor surface of revolution in `ℝⁿ`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GeneratingNetwork {
    pub dimension: Dimension,
    pub edges: Vec<MeridianEdge>,
}

/// On-disk form of a network, optionally carrying the weights it is scored with.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NetworkFile {
    pub dimension: Dimension,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub weights: Option<WeightTriple>,
    pub edges: Vec<MeridianEdge>,
}

impl GeneratingNetwork {
    pub fn new(dimension: Dimension, edges: Vec<MeridianEdge>) -> Self {
        Self { dimension, edges }
    }

    pub fn from_json(s: &str) -> Result<(Self, Option<WeightTriple>)> {
        let f: NetworkFile = serde_json::from_str(s)?;
        Ok((Self::new(f.dimension, f.edges), f.weights))
    }

    pub fn to_json(&self, weights: Option<WeightTriple>) -> Result<String> {
        let f = NetworkFile { dimension: self.dimension, weights, edges: self.edges.clone() };
        Ok(serde_json::to_string_pretty(&f)?)
    }

    /// Dilate every coordinate by `s > 0`.
    pub fn scaled(&self, s: f64) -> Self {
        let edges = self
            .edges
            .iter()
            .map(|e| MeridianEdge { p: e.p * s, q: e.q * s, curvature: e.curvature / s, ..*e })
            .collect();
        Self::new(self.dimension, edges)
    }

    /// Translate along the axis.
    pub fn shifted(&self, dx: f64) -> Self {
        let d = Vec2::new(dx, 0.0);
        let edges =
            self.edges.iter().map(|e| MeridianEdge { p: e.p + d, q: e.q + d, ..*e }).collect();
        Self::new(self.dimension, edges)
    }

    pub fn mirrored(&self) -> Self {
        Self::new(self.dimension, self.edges.iter().map(MeridianEdge::mirrored).collect())
    }

    pub fn label_swapped(&self) -> Self {
        Self::new(self.dimension, self.edges.iter().map(MeridianEdge::label_swapped).collect())
    }

    /// Largest coordinate magnitude; sets the scale of geometric tolerances.
    pub fn scale(&self) -> f64 {
        self.edges
            .iter()
            .flat_map(|e| [e.p.x.abs(), e.p.y.abs(), e.q.x.abs(), e.q.y.abs()])
            .fold(0.0, f64::max)
            .max(f64::MIN_POSITIVE)
    }

    /// Every violated structural invariant; empty for a valid network.
    pub fn validate(&self) -> Vec<Violation> {
        validate::validate(self)
    }

    /// Error unless [`validate`](Self::validate) is empty.
    pub fn ensure_valid(&self) -> Result<()> {
        let v = self.validate();
        if v.is_empty() {
            Ok(())
        } else {
            Err(Error::InvalidNetwork(v))
        }
    }

    /// Enclosed volume of the regions carrying `label`.
    pub fn volume(&self, label: RegionLabel) -> Result<f64> {
        measure::volume(self, label)
    }

    pub fn weighted_area(&self, w: &WeightTriple) -> Result<AreaBreakdown> {
        measure::weighted_area(self, w)
    }

    pub fn junction_residual(&self, w: &WeightTriple) -> Result<Vec<JunctionResidual>> {
        measure::junction_residual(self, w)
    }

    pub fn topology(&self) -> Topology {
        Topology::build(self)
    }
}

/// Free-function form of [`WeightTriple::classify`].
pub fn classify_weights(w: &WeightTriple) -> WeightClass {
    w.classify()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(a: f64, b: f64, c: f64) -> WeightTriple {
        WeightTriple::new(a, b, c).unwrap()
    }

    #[test]
    fn classification_examples() {
        assert_eq!(w(1.0, 1.0, 1.0).classify(), WeightClass::Strict);
        assert_eq!(w(2.5, 1.0, 1.0).classify(), WeightClass::InterfaceDominant);
        assert_eq!(w(0.5, 2.0, 1.0).classify(), WeightClass::Nested1);
        assert_eq!(w(0.5, 1.0, 2.0).classify(), WeightClass::Nested2);
        assert_eq!(w(2.0, 1.0, 1.0).classify(), WeightClass::Boundary(Binding::Interface));
        assert_eq!(w(1.0, 2.0, 1.0).classify(), WeightClass::Boundary(Binding::Nested1));
        assert_eq!(w(0.1 + 0.2, 0.3, 0.0).classify(), WeightClass::Boundary(Binding::Interface));
        assert!(WeightTriple::new(0.0, 0.0, 0.0).is_err());
        assert!(WeightTriple::new(-1.0, 1.0, 1.0).is_err());
    }

    #[test]
    fn json_round_trip() {
        let e = MeridianEdge::from_curve(
            Curve::new(Vec2::new(1.0, 0.0), Vec2::new(-1.0, 0.0), 1.0),
            RegionLabel::B1,
            RegionLabel::Ext,
        );
        let net = GeneratingNetwork::new(Dimension::new(3).unwrap(), vec![e]);
        let s = net.to_json(Some(WeightTriple::unit())).unwrap();
        assert!(s.contains("\"EXT\"") && s.contains("\"ARC\""));
        let (back, wt) = GeneratingNetwork::from_json(&s).unwrap();
        assert_eq!(back, net);
        assert_eq!(wt, Some(WeightTriple::unit()));
        assert!(GeneratingNetwork::from_json("{\"dimension\": 2, \"edges\": []}").is_err());
    }
}
