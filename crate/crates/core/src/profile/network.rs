//! Node/half-edge structure of a meridian network and its faces in the
//! half-plane.
//!
//! The axis `y = 0` bounds the half-plane, so faces are traced as if the
//! axis were an extra edge running in `+x`: a face walk that reaches an axis
//! node with nothing further clockwise continues along the axis to the next
//! axis node, and past the rightmost one wraps round through infinity.

use std::collections::HashMap;

use super::{GeneratingNetwork, RegionLabel};
use crate::curve::{Curve, Vec2};
use crate::error::{Error, Result};

/// Coordinates closer than this multiple of the network scale are one node.
pub(crate) const NODE_MERGE_REL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct HalfEdge {
    pub edge: usize,
    pub forward: bool,
}

impl HalfEdge {
    pub fn twin(self) -> Self {
        Self { edge: self.edge, forward: !self.forward }
    }

    /// The edge's curve in this half-edge's direction.
    pub fn curve(self, net: &GeneratingNetwork) -> Curve {
        let c = net.edges[self.edge].curve();
        if self.forward {
            c
        } else {
            c.reversed()
        }
    }

    /// Label of the region on this half-edge's left.
    pub fn left(self, net: &GeneratingNetwork) -> RegionLabel {
        let e = &net.edges[self.edge];
        if self.forward {
            e.left
        } else {
            e.right
        }
    }
}

#[derive(Debug, Clone)]
pub struct Node {
    pub pos: Vec2,
    pub on_axis: bool,
    /// Outgoing half-edges in counterclockwise order of their initial direction.
    pub out: Vec<HalfEdge>,
}

impl Node {
    pub fn degree(&self) -> usize {
        self.out.len()
    }
}

#[derive(Debug, Clone)]
pub struct Topology {
    pub nodes: Vec<Node>,
    /// `(start node, end node)` for each edge.
    pub ends: Vec<(usize, usize)>,
    pub tol: f64,
}

fn out_angle(c: &Curve, on_axis: bool) -> f64 {
    let a = c.start_tangent().angle();
    if on_axis {
        // keep directions just below horizontal next to 0, not next to 2π
        if a < -std::f64::consts::FRAC_PI_2 {
            a + std::f64::consts::TAU
        } else {
            a
        }
    } else if a < 0.0 {
        a + std::f64::consts::TAU
    } else {
        a
    }
}

impl Topology {
    pub fn build(net: &GeneratingNetwork) -> Self {
        let tol = NODE_MERGE_REL * net.scale();
        let mut nodes: Vec<Node> = Vec::new();
        let find = |p: Vec2, nodes: &mut Vec<Node>| -> usize {
            if let Some(i) = nodes.iter().position(|n| n.pos.dist(p) <= tol) {
                return i;
            }
            nodes.push(Node { pos: p, on_axis: p.y.abs() <= tol, out: Vec::new() });
            nodes.len() - 1
        };
        let mut ends = Vec::with_capacity(net.edges.len());
        for (i, e) in net.edges.iter().enumerate() {
            let a = find(e.p, &mut nodes);
            let b = find(e.q, &mut nodes);
            ends.push((a, b));
            nodes[a].out.push(HalfEdge { edge: i, forward: true });
            nodes[b].out.push(HalfEdge { edge: i, forward: false });
        }
        for n in &mut nodes {
            let on_axis = n.on_axis;
            let mut keyed: Vec<(f64, f64, HalfEdge)> = n
                .out
                .iter()
                .map(|h| {
                    let c = h.curve(net);
                    (out_angle(&c, on_axis), c.kappa, *h)
                })
                .collect();
            keyed.sort_by(|a, b| {
                if (a.0 - b.0).abs() <= 1e-10 {
                    // same direction: the curve bending left lies counterclockwise
                    a.1.total_cmp(&b.1)
                } else {
                    a.0.total_cmp(&b.0)
                }
            });
            n.out = keyed.into_iter().map(|k| k.2).collect();
        }
        Self { nodes, ends, tol }
    }

    pub fn origin(&self, h: HalfEdge) -> usize {
        let (a, b) = self.ends[h.edge];
        if h.forward {
            a
        } else {
            b
        }
    }

    pub fn target(&self, h: HalfEdge) -> usize {
        self.origin(h.twin())
    }

    /// Axis nodes sorted by `x`.
    pub fn axis_nodes(&self) -> Vec<usize> {
        let mut v: Vec<usize> = (0..self.nodes.len()).filter(|&i| self.nodes[i].on_axis).collect();
        v.sort_by(|&a, &b| self.nodes[a].pos.x.total_cmp(&self.nodes[b].pos.x));
        v
    }

    /// Next half-edge around the face on the left of `h`, and whether the step
    /// passed through infinity along the axis.
    fn next(&self, h: HalfEdge, axis: &[usize]) -> (HalfEdge, bool) {
        let v = self.target(h);
        let node = &self.nodes[v];
        let twin = h.twin();
        let pos = node.out.iter().position(|&x| x == twin).expect("twin is incident");
        if pos > 0 {
            return (node.out[pos - 1], false);
        }
        if !node.on_axis {
            return (*node.out.last().expect("non-empty"), false);
        }
        let k = axis.iter().position(|&a| a == v).expect("axis node listed");
        if k + 1 < axis.len() {
            (*self.nodes[axis[k + 1]].out.last().expect("non-empty"), false)
        } else {
            (*self.nodes[axis[0]].out.last().expect("non-empty"), true)
        }
    }
}

/// One closed boundary walk with its face on the left.
#[derive(Debug, Clone)]
pub struct Cycle {
    pub half_edges: Vec<HalfEdge>,
    /// Signed area including axis stretches; negative for a walk that
    /// surrounds its face from inside (a hole boundary or the outer envelope).
    pub signed_area: f64,
    pub through_infinity: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum FaceId {
    Bounded(usize),
    Unbounded,
}

#[derive(Debug, Clone)]
pub struct Faces {
    pub cycles: Vec<Cycle>,
    pub face_of_cycle: Vec<FaceId>,
    pub cycle_of: HashMap<HalfEdge, usize>,
    pub bounded_count: usize,
}

impl Faces {
    pub fn face_of(&self, h: HalfEdge) -> FaceId {
        self.face_of_cycle[self.cycle_of[&h]]
    }

    /// All face ids, the unbounded face first.
    pub fn ids(&self) -> Vec<FaceId> {
        let mut v = vec![FaceId::Unbounded];
        v.extend((0..self.bounded_count).map(FaceId::Bounded));
        v
    }

    pub fn half_edges_of(&self, f: FaceId) -> Vec<HalfEdge> {
        self.cycles
            .iter()
            .zip(&self.face_of_cycle)
            .filter(|(_, id)| **id == f)
            .flat_map(|(c, _)| c.half_edges.iter().copied())
            .collect()
    }

    /// Trace every face of a network whose nodes all have degree at least 2
    /// off the axis and whose edges do not cross.
    pub fn trace(net: &GeneratingNetwork, topo: &Topology) -> Result<Self> {
        let axis = topo.axis_nodes();
        let total = 2 * net.edges.len();
        let mut cycle_of: HashMap<HalfEdge, usize> = HashMap::with_capacity(total);
        let mut cycles = Vec::new();
        for e in 0..net.edges.len() {
            for forward in [true, false] {
                let start = HalfEdge { edge: e, forward };
                if cycle_of.contains_key(&start) {
                    continue;
                }
                let id = cycles.len();
                let mut hs = Vec::new();
                let mut inf = false;
                let mut h = start;
                loop {
                    if hs.len() > total || cycle_of.insert(h, id).is_some() {
                        return Err(Error::Structural(format!(
                            "face walk from edge {e} does not close"
                        )));
                    }
                    hs.push(h);
                    let (n, through) = topo.next(h, &axis);
                    inf |= through;
                    h = n;
                    if h == start {
                        break;
                    }
                }
                let o = Vec2::default();
                let signed_area = hs.iter().map(|h| 0.5 * h.curve(net).cross_integral(o)).sum();
                cycles.push(Cycle { half_edges: hs, signed_area, through_infinity: inf });
            }
        }

        // Union-find: a walk that surrounds its face from inside hangs off the
        // face directly above its highest point.
        let mut parent: Vec<Option<usize>> = vec![None; cycles.len()];
        let mut outer_unbounded = vec![false; cycles.len()];
        let scale = net.scale();
        for (i, c) in cycles.iter().enumerate() {
            if c.signed_area > 0.0 && !c.through_infinity {
                continue;
            }
            let top = top_point(c, net);
            match ray_up(net, top, scale) {
                Some(h) => parent[i] = Some(cycle_of[&h]),
                None => outer_unbounded[i] = true,
            }
        }
        let root = |mut i: usize| {
            let mut steps = 0;
            while let Some(p) = parent[i] {
                i = p;
                steps += 1;
                if steps > parent.len() {
                    break;
                }
            }
            i
        };
        let mut face_of_cycle = vec![FaceId::Unbounded; cycles.len()];
        let mut ids: HashMap<usize, usize> = HashMap::new();
        for i in 0..cycles.len() {
            let r = root(i);
            face_of_cycle[i] = if outer_unbounded[r] {
                FaceId::Unbounded
            } else {
                let n = ids.len();
                FaceId::Bounded(*ids.entry(r).or_insert(n))
            };
        }
        Ok(Self { cycles, face_of_cycle, cycle_of, bounded_count: ids.len() })
    }
}

fn top_point(c: &Cycle, net: &GeneratingNetwork) -> Vec2 {
    let up = Vec2::new(0.0, 1.0);
    let mut best = Vec2::new(0.0, f64::NEG_INFINITY);
    for h in &c.half_edges {
        let cv = h.curve(net);
        let mut pts = vec![cv.p, cv.q];
        pts.extend(cv.tangent_extrema(up).into_iter().map(|s| cv.point(s)));
        for p in pts {
            if p.y > best.y {
                best = p;
            }
        }
    }
    best
}

/// Half-edge whose left face lies directly above `from`, found by casting a
/// vertical ray; `None` if the ray escapes.
fn ray_up(net: &GeneratingNetwork, from: Vec2, scale: f64) -> Option<HalfEdge> {
    // nudge off the exact abscissa of the top point so the ray avoids nodes
    let x = from.x + 0.754_877_666 * 1e-8 * scale;
    let floor = from.y + 1e-9 * scale;
    let mut best: Option<(f64, HalfEdge)> = None;
    for (i, e) in net.edges.iter().enumerate() {
        let c = e.curve();
        let (lo, hi) = c.bbox();
        if x < lo.x || x > hi.x || hi.y <= floor {
            continue;
        }
        for s in c.line_crossings(Vec2::new(1.0, 0.0), x) {
            let p = c.point(s);
            if p.y > floor && best.is_none_or(|b| p.y < b.0) {
                let t = c.tangent(s);
                // the face below a leftward-moving curve is on its left
                let h = HalfEdge { edge: i, forward: t.x < 0.0 };
                best = Some((p.y, h));
            }
        }
    }
    best.map(|b| b.1)
}
