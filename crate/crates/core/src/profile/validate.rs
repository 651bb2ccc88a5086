use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use super::network::{FaceId, Faces, Topology};
use super::{EdgeKind, GeneratingNetwork, RegionLabel};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum ViolationKind {
    Empty,
    DegenerateEdge,
    ArcInconsistent,
    LabelsEqual,
    BelowAxis,
    EdgeOnAxis,
    DanglingEndpoint,
    FourWayJunction,
    EdgesCross,
    LabelInconsistent,
    UnboundedNotExt,
    ExtDisconnected,
}

impl std::fmt::Display for ViolationKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = serde_json::to_value(self).ok();
        f.write_str(s.as_ref().and_then(|v| v.as_str()).unwrap_or("?"))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Violation {
    pub kind: ViolationKind,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub edge: Option<usize>,
    pub detail: String,
}

impl std::fmt::Display for Violation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self.edge {
            Some(i) => write!(f, "{} (edge {i}): {}", self.kind, self.detail),
            None => write!(f, "{}: {}", self.kind, self.detail),
        }
    }
}

fn v(kind: ViolationKind, edge: Option<usize>, detail: impl Into<String>) -> Violation {
    Violation { kind, edge, detail: detail.into() }
}

pub(super) fn validate(net: &GeneratingNetwork) -> Vec<Violation> {
    use ViolationKind::*;
    let mut out = Vec::new();
    if net.edges.is_empty() {
        out.push(v(Empty, None, "network has no edges"));
        return out;
    }
    let scale = net.scale();
    let tol = super::network::NODE_MERGE_REL * scale;

    let mut edge_ok = true;
    for (i, e) in net.edges.iter().enumerate() {
        let c = e.curve();
        if !c.p.is_finite() || !c.q.is_finite() || !c.kappa.is_finite() || c.chord() <= tol {
            out.push(v(DegenerateEdge, Some(i), "endpoints coincide or are not finite"));
            edge_ok = false;
            continue;
        }
        match e.kind {
            EdgeKind::Segment if e.curvature != 0.0 => {
                out.push(v(ArcInconsistent, Some(i), "segment with nonzero curvature"));
                edge_ok = false;
            }
            EdgeKind::Arc if e.curvature == 0.0 => {
                out.push(v(ArcInconsistent, Some(i), "arc with zero curvature"));
                edge_ok = false;
            }
            EdgeKind::Arc if !c.is_consistent(1e-9) => {
                out.push(v(
                    ArcInconsistent,
                    Some(i),
                    format!("chord {:.6e} exceeds the diameter {:.6e}", c.chord(), 2.0 * c.radius()),
                ));
                edge_ok = false;
                continue;
            }
            _ => {}
        }
        if e.left == e.right {
            out.push(v(LabelsEqual, Some(i), format!("both sides labeled {}", e.left)));
        }
        let lo = c.bbox().0;
        if lo.y < -tol {
            out.push(v(BelowAxis, Some(i), format!("reaches y = {:.6e}", lo.y)));
            edge_ok = false;
        }
        if e.kind == EdgeKind::Segment && c.p.y.abs() <= tol && c.q.y.abs() <= tol {
            out.push(v(EdgeOnAxis, Some(i), "segment lies along the axis"));
            edge_ok = false;
        }
    }
    if !edge_ok {
        return out;
    }

    let topo = Topology::build(net);
    let mut nodes_ok = true;
    for n in &topo.nodes {
        if n.on_axis {
            continue;
        }
        match n.degree() {
            1 => {
                out.push(v(
                    DanglingEndpoint,
                    Some(n.out[0].edge),
                    format!("free end at ({:.6}, {:.6})", n.pos.x, n.pos.y),
                ));
                nodes_ok = false;
            }
            d if d >= 4 => {
                out.push(v(
                    FourWayJunction,
                    None,
                    format!("{d} curves meet at ({:.6}, {:.6})", n.pos.x, n.pos.y),
                ));
                nodes_ok = false;
            }
            _ => {}
        }
    }

    let near = 1e-6 * scale;
    let mut crossing = false;
    let boxes: Vec<_> = net.edges.iter().map(|e| e.curve().bbox()).collect();
    for i in 0..net.edges.len() {
        for j in i + 1..net.edges.len() {
            let (a, b) = (boxes[i], boxes[j]);
            if a.1.x < b.0.x - near || b.1.x < a.0.x - near || a.1.y < b.0.y - near || b.1.y < a.0.y - near
            {
                continue;
            }
            let (ci, cj) = (net.edges[i].curve(), net.edges[j].curve());
            let shared: Vec<_> = [topo.ends[i].0, topo.ends[i].1]
                .into_iter()
                .filter(|n| *n == topo.ends[j].0 || *n == topo.ends[j].1)
                .map(|n| topo.nodes[n].pos)
                .collect();
            let hit = ci.intersections(&cj, near).into_iter().find(|x| {
                shared.iter().all(|s| s.dist(*x) > near)
            });
            if let Some(x) = hit {
                out.push(v(
                    EdgesCross,
                    Some(i),
                    format!("meets edge {j} at ({:.6}, {:.6}) away from a shared node", x.x, x.y),
                ));
                crossing = true;
            }
        }
    }
    if !nodes_ok || crossing {
        return out;
    }

    let faces = match Faces::trace(net, &topo) {
        Ok(f) => f,
        Err(e) => {
            out.push(v(LabelInconsistent, None, e.to_string()));
            return out;
        }
    };
    let mut ext_faces = 0;
    for f in faces.ids() {
        let labels: BTreeSet<RegionLabel> =
            faces.half_edges_of(f).iter().map(|h| h.left(net)).collect();
        let name = match f {
            FaceId::Unbounded => "the unbounded face".to_string(),
            FaceId::Bounded(k) => format!("face {k}"),
        };
        if labels.len() > 1 {
            let l: Vec<String> = labels.iter().map(|l| l.to_string()).collect();
            out.push(v(LabelInconsistent, None, format!("{name} is labeled {}", l.join(" and "))));
            continue;
        }
        let Some(&label) = labels.iter().next() else { continue };
        if f == FaceId::Unbounded && label != RegionLabel::Ext {
            out.push(v(UnboundedNotExt, None, format!("the unbounded face is labeled {label}")));
        }
        if label == RegionLabel::Ext {
            ext_faces += 1;
        }
    }
    if ext_faces > 1 {
        out.push(v(
            ExtDisconnected,
            None,
            format!("exterior splits into {ext_faces} faces; a hollow is enclosed"),
        ));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curve::{arc_from_center, Curve, Vec2};
    use crate::profile::MeridianEdge;
    use crate::sphere::Dimension;
    use std::f64::consts::PI;
    use RegionLabel::*;

    fn net(edges: Vec<MeridianEdge>) -> GeneratingNetwork {
        GeneratingNetwork::new(Dimension::new(3).unwrap(), edges)
    }

    fn semicircle(cx: f64, r: f64, inside: RegionLabel, outside: RegionLabel) -> MeridianEdge {
        let c = arc_from_center(Vec2::new(cx, 0.0), r, 0.0, PI).unwrap();
        MeridianEdge::from_curve(c, inside, outside)
    }

    fn kinds(n: &GeneratingNetwork) -> Vec<ViolationKind> {
        n.validate().into_iter().map(|v| v.kind).collect()
    }

    #[test]
    fn single_and_disjoint_spheres_are_valid() {
        assert!(net(vec![semicircle(0.0, 1.0, B1, Ext)]).validate().is_empty());
        let two = net(vec![semicircle(0.0, 1.0, B1, Ext), semicircle(3.0, 1.0, B2, Ext)]);
        assert!(two.validate().is_empty());
        let nested = net(vec![semicircle(0.0, 1.0, B1, B2), semicircle(0.0, 2.0, B2, Ext)]);
        assert!(nested.validate().is_empty(), "{:?}", nested.validate());
    }

    #[test]
    fn floating_torus_is_valid() {
        // a circle lifted off the axis, split in two arcs
        let c = Vec2::new(0.0, 3.0);
        let a = arc_from_center(c, 1.0, 0.0, PI).unwrap();
        let b = arc_from_center(c, 1.0, PI, PI).unwrap();
        let n = net(vec![
            MeridianEdge::from_curve(a, B1, Ext),
            MeridianEdge::from_curve(b, B1, Ext),
        ]);
        assert!(n.validate().is_empty(), "{:?}", n.validate());
        assert!((n.volume(B1).unwrap() - PI * 2.0 * PI * 3.0).abs() < 1e-10);
    }

    #[test]
    fn structural_violations() {
        assert_eq!(kinds(&net(vec![])), vec![ViolationKind::Empty]);
        let mut e = semicircle(0.0, 1.0, B1, Ext);
        e.right = B1;
        assert!(kinds(&net(vec![e])).contains(&ViolationKind::LabelsEqual));
        // whole circle below and above the axis
        let below = arc_from_center(Vec2::new(0.0, 0.0), 1.0, PI, PI).unwrap();
        let e = MeridianEdge::from_curve(below, Ext, B1);
        assert_eq!(kinds(&net(vec![e])), vec![ViolationKind::BelowAxis]);
        let d = MeridianEdge::from_curve(
            Curve::segment(Vec2::new(0.0, 1.0), Vec2::new(1.0, 2.0)),
            B1,
            Ext,
        );
        assert!(kinds(&net(vec![d])).contains(&ViolationKind::DanglingEndpoint));
        let mut bad = semicircle(0.0, 1.0, B1, Ext);
        bad.curvature = 5.0;
        assert_eq!(kinds(&net(vec![bad])), vec![ViolationKind::ArcInconsistent]);
        let inverted = net(vec![semicircle(0.0, 1.0, Ext, B1)]);
        assert!(kinds(&inverted).contains(&ViolationKind::UnboundedNotExt));
    }

    #[test]
    fn crossing_edges() {
        let n = net(vec![semicircle(0.0, 1.0, B1, Ext), semicircle(1.0, 1.0, B2, Ext)]);
        assert!(kinds(&n).contains(&ViolationKind::EdgesCross));
    }

    #[test]
    fn trapped_exterior_bubble() {
        // B1 and B2 side by side with an EXT pocket on the axis between them:
        // outer semicircle of radius 3, with two semicircles separating the inside
        let outer_l = arc_from_center(Vec2::new(0.0, 0.0), 3.0, PI / 2.0, PI / 2.0).unwrap();
        let outer_r = arc_from_center(Vec2::new(0.0, 0.0), 3.0, 0.0, PI / 2.0).unwrap();
        let top = Vec2::new(0.0, 3.0);
        let wall = Curve::segment(top, Vec2::new(0.0, 1.0));
        let pocket = arc_from_center(Vec2::new(0.0, 0.0), 1.0, 0.0, PI).unwrap();
        // pocket split at its top so the wall meets it at a junction
        let (pr, pl) = pocket.split(pocket.length() / 2.0);
        let n = net(vec![
            MeridianEdge::from_curve(outer_r, B2, Ext),
            MeridianEdge::from_curve(outer_l, B1, Ext),
            MeridianEdge::from_curve(wall, B2, B1),
            MeridianEdge::from_curve(pr, Ext, B2),
            MeridianEdge::from_curve(pl, Ext, B1),
        ]);
        assert_eq!(kinds(&n), vec![ViolationKind::ExtDisconnected], "{:?}", n.validate());
    }

    #[test]
    fn inconsistent_face_labels() {
        let a = arc_from_center(Vec2::default(), 1.0, 0.0, PI / 2.0).unwrap();
        let b = arc_from_center(Vec2::default(), 1.0, PI / 2.0, PI / 2.0).unwrap();
        let n = net(vec![MeridianEdge::from_curve(a, B1, Ext), MeridianEdge::from_curve(b, B2, Ext)]);
        assert!(kinds(&n).contains(&ViolationKind::LabelInconsistent));
    }
}
