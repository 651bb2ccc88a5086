use serde::{Deserialize, Serialize};

use super::{GeneratingNetwork, PieceKind, RegionLabel, Topology, WeightTriple};
use crate::curve::{Curve, Vec2};
use crate::error::{domain, Error, Result};
use crate::sphere::{alpha, Dimension};

/// Unweighted areas of the three piece kinds and the weighted total.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AreaBreakdown {
    pub a_ext1: f64,
    pub a_ext2: f64,
    pub a_int: f64,
    pub q: f64,
}

impl AreaBreakdown {
    pub fn get(&self, k: PieceKind) -> f64 {
        match k {
            PieceKind::Interface => self.a_int,
            PieceKind::Ext1 => self.a_ext1,
            PieceKind::Ext2 => self.a_ext2,
        }
    }

    pub fn from_pieces(a_ext1: f64, a_ext2: f64, a_int: f64, w: &WeightTriple) -> Self {
        Self { a_ext1, a_ext2, a_int, q: w.w1 * a_ext1 + w.w2 * a_ext2 + w.w0 * a_int }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct JunctionResidual {
    pub node: usize,
    pub point: Vec2,
    pub residual: f64,
}

fn ymax(c: &Curve) -> f64 {
    c.bbox().1.y.max(0.0)
}

/// Area `(n−1)α_{n−1}∫ y^{n−2} ds` of the surface swept by one curve.
///
/// For `n ≥ 3` the integrand vanishes on the axis, so curves ending there
/// need no special treatment.
pub fn edge_area(n: Dimension, c: &Curve) -> Result<f64> {
    let k = n.exp() - 2;
    let scale = ymax(c).powi(k);
    let i = c.integrate(|p, _| p.y.max(0.0).powi(k), scale)?;
    Ok((n.as_f64() - 1.0) * alpha(n.get() - 1) * i)
}

/// `∫ y^{n−1} dx` along one curve.
fn edge_volume_flux(n: Dimension, c: &Curve) -> Result<f64> {
    let k = n.exp() - 1;
    let scale = ymax(c).powi(k);
    c.integrate(|p, t| p.y.max(0.0).powi(k) * t.x, scale)
}

pub(super) fn volume(net: &GeneratingNetwork, label: RegionLabel) -> Result<f64> {
    if label == RegionLabel::Ext {
        return domain("the exterior region has infinite volume");
    }
    let mut sum = 0.0;
    for e in &net.edges {
        let s = e.side_of(label);
        if s != 0.0 {
            sum += s * edge_volume_flux(net.dimension, &e.curve())?;
        }
    }
    // Green: the region on the left of a counterclockwise boundary has
    // ∮ y^{n−1} dx = −(n−1)∬ y^{n−2} dA.
    Ok(-alpha(net.dimension.get() - 1) * sum)
}

pub(super) fn weighted_area(net: &GeneratingNetwork, w: &WeightTriple) -> Result<AreaBreakdown> {
    let (mut e1, mut e2, mut int) = (0.0, 0.0, 0.0);
    for (i, e) in net.edges.iter().enumerate() {
        let a = edge_area(net.dimension, &e.curve())?;
        match e.piece() {
            Some(PieceKind::Ext1) => e1 += a,
            Some(PieceKind::Ext2) => e2 += a,
            Some(PieceKind::Interface) => int += a,
            None => return domain(format!("edge {i} separates {} from itself", e.left)),
        }
    }
    Ok(AreaBreakdown::from_pieces(e1, e2, int, w))
}

pub(super) fn junction_residual(
    net: &GeneratingNetwork,
    w: &WeightTriple,
) -> Result<Vec<JunctionResidual>> {
    let topo = Topology::build(net);
    let mut out = Vec::new();
    for (i, node) in topo.nodes.iter().enumerate() {
        if node.on_axis || node.degree() < 3 {
            continue;
        }
        if node.degree() > 3 {
            return Err(Error::Structural(format!(
                "{} curves meet at ({:.6}, {:.6}); junctions must be triple",
                node.degree(),
                node.pos.x,
                node.pos.y
            )));
        }
        let mut sum = Vec2::default();
        for h in &node.out {
            let e = &net.edges[h.edge];
            let wt = w.for_pair(e.left, e.right).ok_or_else(|| {
                Error::Domain(format!("edge {} separates {} from itself", h.edge, e.left))
            })?;
            sum += h.curve(net).start_tangent() * wt;
        }
        out.push(JunctionResidual { node: i, point: node.pos, residual: sum.norm() });
    }
    Ok(out)
}
