//! Competitor families built from a standard bubble.
//!
//! * `RADIAL_BUMP` pushes the middle half of one exterior cap outward or
//!   inward by `ε·R`, using two C¹ biarcs.
//! * `JUNCTION_SLIDE` raises or lowers the junction by the factor `1 + ε`
//!   and redraws every cap through the new junction and its old axis point.
//! * `EXTRA_SLEEVE` cuts one exterior cap at polar angle `επ` from its pole
//!   and hangs a small lens of the other bubble there, with a balanced
//!   junction, giving a second cuff.
//!
//! [`lens_chain`] builds the symmetric `B1 | B2 | B1` competitors with a lens
//! at each end of a sphere.
//!
//! None of these preserve volumes; a competitor is scored in the class of
//! its own measured volumes.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::curve::{Curve, Vec2};
use crate::error::{domain, Error, Result};
use crate::profile::{GeneratingNetwork, MeridianEdge, PieceKind, RegionLabel, WeightTriple};
use crate::sphere::Dimension;
use crate::standard::StandardBubbleGeometry;

const SPLIT_SWEEP: f64 = 0.75 * PI;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum PerturbationKind {
    RadialBump,
    JunctionSlide,
    ExtraSleeve,
}

impl PerturbationKind {
    pub const ALL: [Self; 3] = [Self::RadialBump, Self::JunctionSlide, Self::ExtraSleeve];

    pub fn name(self) -> &'static str {
        match self {
            Self::RadialBump => "RADIAL_BUMP",
            Self::JunctionSlide => "JUNCTION_SLIDE",
            Self::ExtraSleeve => "EXTRA_SLEEVE",
        }
    }
}

impl std::fmt::Display for PerturbationKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

impl std::str::FromStr for PerturbationKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|k| k.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| Error::Domain(format!("unknown perturbation family {s:?}")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PerturbationFamily {
    pub kind: PerturbationKind,
    pub amplitude: f64,
    /// Dilate each competitor so its larger volume matches the instance.
    pub volume_restoration: bool,
}

impl PerturbationFamily {
    pub fn new(kind: PerturbationKind, amplitude: f64) -> Self {
        Self { kind, amplitude, volume_restoration: true }
    }

    /// Every competitor of this family around `m`: both signs and every
    /// applicable piece. Empty when the family needs a junction and `m` has
    /// none.
    pub fn competitors(&self, m: &StandardBubbleGeometry) -> Result<Vec<GeneratingNetwork>> {
        let eps = self.amplitude;
        if !(eps.is_finite() && eps > 0.0) {
            return domain(format!("amplitude must be positive, got {eps}"));
        }
        let net = m.network();
        let strict = m.conormal_angles.is_some();
        let mut out = Vec::new();
        match self.kind {
            PerturbationKind::RadialBump => {
                for piece in [PieceKind::Ext1, PieceKind::Ext2] {
                    if circle_chain(&net, piece).is_some() {
                        for s in [1.0, -1.0] {
                            out.push(radial_bump(&net, piece, s * eps)?);
                        }
                    }
                }
            }
            PerturbationKind::JunctionSlide if strict => {
                for s in [1.0, -1.0] {
                    out.push(junction_slide(m, s * eps)?);
                }
            }
            PerturbationKind::ExtraSleeve if strict => {
                for piece in [PieceKind::Ext1, PieceKind::Ext2] {
                    out.push(extra_sleeve(m, piece, eps)?);
                }
            }
            _ => {}
        }
        if self.volume_restoration {
            let target = m.volumes.max();
            out = out
                .into_iter()
                .map(|c| {
                    let v = c.volume(RegionLabel::B1)?.max(c.volume(RegionLabel::B2)?);
                    Ok(c.scaled((target / v).powf(1.0 / m.dimension.as_f64())))
                })
                .collect::<Result<_>>()?;
        }
        Ok(out)
    }
}

fn split(c: Curve) -> Vec<Curve> {
    let k = (c.sweep().abs() / SPLIT_SWEEP).ceil().max(1.0) as usize;
    if k == 1 {
        return vec![c];
    }
    let len = c.length();
    (0..k).map(|i| c.sub(len * i as f64 / k as f64, len * (i + 1) as f64 / k as f64)).collect()
}

fn push(out: &mut Vec<MeridianEdge>, c: Curve, left: RegionLabel, right: RegionLabel) {
    out.extend(split(c).into_iter().map(|c| MeridianEdge::from_curve(c, left, right)));
}

/// Arc from `p` leaving along unit `t`, ending at `q`.
fn arc_from_tangent(p: Vec2, t: Vec2, q: Vec2) -> Curve {
    let d = q - p;
    Curve::new(p, q, 2.0 * t.cross(d) / d.dot(d))
}

/// Equal-tangent-length biarc from `(p0, t0)` to `(p1, t1)`.
pub fn biarc(p0: Vec2, t0: Vec2, p1: Vec2, t1: Vec2) -> [Curve; 2] {
    let d = p1 - p0;
    let t = t0 + t1;
    let c = t0.dot(t1);
    let dt = d.dot(t);
    let a = if (1.0 - c).abs() < 1e-14 {
        d.dot(d) / (2.0 * dt)
    } else {
        (dt - (dt * dt + 2.0 * (1.0 - c) * d.dot(d)).sqrt()) / (2.0 * (c - 1.0))
    };
    let j = ((p0 + t0 * a) + (p1 - t1 * a)) * 0.5;
    let second = arc_from_tangent(p1, -t1, j).reversed();
    [arc_from_tangent(p0, t0, j), second]
}

/// Arc from `q` leaving along `u` on the circle centred on the axis, ending
/// where it meets the axis.
pub fn axis_arc(q: Vec2, u: Vec2) -> Result<Curve> {
    if !(q.y > 0.0) {
        return domain("axis arcs start above the axis");
    }
    if u.x.abs() < 1e-14 {
        if u.y < 0.0 {
            return Ok(Curve::segment(q, Vec2::new(q.x, 0.0)));
        }
        return domain("vertical upward tangent never meets the axis");
    }
    let s = q.y / u.x;
    let c = Vec2::new(q.x + s * u.y, 0.0);
    let r = s.abs();
    if u.cross(c - q) > 0.0 {
        Ok(Curve::new(q, Vec2::new(c.x - r, 0.0), 1.0 / r))
    } else {
        Ok(Curve::new(q, Vec2::new(c.x + r, 0.0), -1.0 / r))
    }
}

/// Edges of one piece, in order, lying on one axis-centred circle.
struct Chain {
    edges: Vec<usize>,
    center: Vec2,
    radius: f64,
    start: Vec2,
    end: Vec2,
    left: RegionLabel,
    right: RegionLabel,
    kappa: f64,
}

impl Chain {
    fn angle(&self, p: Vec2) -> f64 {
        let d = p - self.center;
        d.y.abs().atan2(d.x)
    }

    fn at(&self, a: f64) -> Vec2 {
        self.center + Vec2::from_angle(a) * self.radius
    }

    /// Unit tangent in the direction of travel at angle `a`.
    fn tangent(&self, a: f64) -> Vec2 {
        Vec2::from_angle(a).perp() * self.kappa.signum()
    }

    fn arc(&self, a: f64, b: f64) -> Curve {
        Curve::new(self.at(a), self.at(b), self.kappa)
    }
}

fn circle_chain(net: &GeneratingNetwork, piece: PieceKind) -> Option<Chain> {
    let edges: Vec<usize> = (0..net.edges.len()).filter(|&i| net.edges[i].piece() == Some(piece)).collect();
    let first = net.edges.get(*edges.first()?)?;
    let c0 = first.curve();
    let center = c0.center()?;
    let scale = c0.radius();
    if center.y.abs() > 1e-9 * scale {
        return None;
    }
    for w in edges.windows(2) {
        if net.edges[w[0]].q.dist(net.edges[w[1]].p) > 1e-9 * scale {
            return None;
        }
    }
    for &e in &edges {
        let c = net.edges[e].curve();
        if c.center().is_none_or(|x| x.dist(center) > 1e-9 * scale) || (c.kappa - c0.kappa).abs() > 1e-9 / scale {
            return None;
        }
        let (l, r) = (net.edges[e].left, net.edges[e].right);
        if l != first.left || r != first.right {
            return None;
        }
    }
    Some(Chain {
        start: first.p,
        end: net.edges[*edges.last()?].q,
        edges,
        center: Vec2::new(center.x, 0.0),
        radius: scale,
        left: first.left,
        right: first.right,
        kappa: c0.kappa,
    })
}

fn replace_chain(net: &GeneratingNetwork, chain: &Chain, new: Vec<MeridianEdge>) -> GeneratingNetwork {
    let mut edges: Vec<MeridianEdge> =
        (0..net.edges.len()).filter(|i| !chain.edges.contains(i)).map(|i| net.edges[i]).collect();
    edges.extend(new);
    GeneratingNetwork::new(net.dimension, edges)
}

/// Displace the middle half of an exterior cap radially by `eps·R` at its
/// centre (outward for `eps > 0`).
pub fn radial_bump(net: &GeneratingNetwork, piece: PieceKind, eps: f64) -> Result<GeneratingNetwork> {
    if !(eps.abs() < 0.5) {
        return domain(format!("bump amplitude {eps} too large"));
    }
    let ch = circle_chain(net, piece)
        .ok_or_else(|| Error::Domain(format!("{piece:?} is not a single circular arc")))?;
    let a0 = ch.angle(ch.start);
    let a1 = ch.angle(ch.end);
    let d = a1 - a0;
    let (aa, am, ab) = (a0 + 0.25 * d, a0 + 0.5 * d, a0 + 0.75 * d);
    let apex = ch.center + Vec2::from_angle(am) * (ch.radius * (1.0 + eps));
    let mut out = Vec::new();
    let (l, r) = (ch.left, ch.right);
    push(&mut out, Curve::new(ch.start, ch.at(aa), ch.kappa), l, r);
    for c in biarc(ch.at(aa), ch.tangent(aa), apex, ch.tangent(am)) {
        push(&mut out, c, l, r);
    }
    for c in biarc(apex, ch.tangent(am), ch.at(ab), ch.tangent(ab)) {
        push(&mut out, c, l, r);
    }
    push(&mut out, Curve::new(ch.at(ab), ch.end, ch.kappa), l, r);
    Ok(replace_chain(net, &ch, out))
}

/// Move the junction of a strict standard bubble to height `(1 + eps)·y_J`,
/// keeping every cap's axis point.
pub fn junction_slide(m: &StandardBubbleGeometry, eps: f64) -> Result<GeneratingNetwork> {
    if m.conormal_angles.is_none() {
        return domain("junction slide needs a bubble with a junction");
    }
    if !(eps > -0.5 && eps < 0.5) {
        return domain(format!("slide amplitude {eps} too large"));
    }
    let net = m.network();
    let j = Vec2::new(0.0, m.junction_radius * (1.0 + eps));
    let mut edges = Vec::new();
    for piece in [PieceKind::Ext1, PieceKind::Ext2, PieceKind::Interface] {
        let idx: Vec<usize> = (0..net.edges.len()).filter(|&i| net.edges[i].piece() == Some(piece)).collect();
        let first = &net.edges[idx[0]];
        let p = net.edges[*idx.last().expect("every piece has an edge")].q;
        let c = if (j.x - p.x).abs() < 1e-12 * m.junction_radius {
            Curve::segment(j, p)
        } else {
            let cx = (j.dot(j) - p.x * p.x) / (2.0 * (j.x - p.x));
            let r = (p.x - cx).abs();
            Curve::new(j, p, if p.x > cx { -1.0 / r } else { 1.0 / r })
        };
        push(&mut edges, c, first.left, first.right);
    }
    Ok(GeneratingNetwork::new(net.dimension, edges))
}

/// Junction angles for a sleeve of weight `ws`, an interface of weight `w0`
/// and a lens cap of weight `wl`: (sleeve–interface, interface–cap).
fn lens_angles(ws: f64, w0: f64, wl: f64) -> Result<(f64, f64)> {
    if !(ws < w0 + wl && w0 < ws + wl && wl < ws + w0) {
        return domain("lens junction needs strictly triangular weights");
    }
    let ang = |opp: f64, a: f64, b: f64| ((opp * opp - a * a - b * b) / (2.0 * a * b)).clamp(-1.0, 1.0).acos();
    Ok((ang(wl, ws, w0), ang(ws, w0, wl)))
}

/// Interface and cap of a lens hung at `q`, where `u` is the tangent
/// pointing back along the sleeve. `right` places the lens on the side of
/// increasing `x`.
fn attach_lens(
    out: &mut Vec<MeridianEdge>,
    q: Vec2,
    u: Vec2,
    right: bool,
    sleeve: RegionLabel,
    lens: RegionLabel,
    w: &WeightTriple,
) -> Result<()> {
    use RegionLabel::*;
    let w_of = |l| if l == B1 { w.w1 } else { w.w2 };
    let (a, b) = lens_angles(w_of(sleeve), w.w0, w_of(lens))?;
    let s = if right { 1.0 } else { -1.0 };
    let ui = u.rotate(s * a);
    let uc = ui.rotate(s * b);
    if right {
        push(out, axis_arc(q, ui)?, lens, sleeve);
        push(out, axis_arc(q, uc)?, Ext, lens);
    } else {
        push(out, axis_arc(q, ui)?, sleeve, lens);
        push(out, axis_arc(q, uc)?, lens, Ext);
    }
    Ok(())
}

/// Cut the exterior cap `piece` of a strict standard bubble at polar angle
/// `eps·π` from its pole and hang a balanced lens of the other bubble there.
pub fn extra_sleeve(m: &StandardBubbleGeometry, piece: PieceKind, eps: f64) -> Result<GeneratingNetwork> {
    if m.conormal_angles.is_none() {
        return domain("extra sleeve needs a bubble with a junction");
    }
    let (sleeve, lens) = match piece {
        PieceKind::Ext1 => (RegionLabel::B1, RegionLabel::B2),
        PieceKind::Ext2 => (RegionLabel::B2, RegionLabel::B1),
        PieceKind::Interface => return domain("extra sleeves hang off an exterior cap"),
    };
    let net = m.network();
    let ch = circle_chain(&net, piece).ok_or_else(|| Error::Domain("cap is not a circular arc".into()))?;
    let a0 = ch.angle(ch.start);
    let a1 = ch.angle(ch.end);
    let cut = eps * PI;
    if !(cut > 0.0 && cut < 0.5 * (a1 - a0).abs()) {
        return domain(format!("cut angle {cut} outside the cap"));
    }
    let aq = a1 - (a1 - a0).signum() * cut;
    let q = ch.at(aq);
    let mut out = Vec::new();
    push(&mut out, ch.arc(a0, aq), ch.left, ch.right);
    let right = piece == PieceKind::Ext2;
    attach_lens(&mut out, q, -ch.tangent(aq), right, sleeve, lens, &m.weights)?;
    Ok(replace_chain(&net, &ch, out))
}

/// A sphere of bubble 2 with radius `r` centred at the origin, with balanced
/// lenses of bubble 1 hung at polar angles `beta_left` and `beta_right` from
/// its two poles.
pub fn lens_chain(n: Dimension, w: &WeightTriple, r: f64, beta_left: f64, beta_right: f64) -> Result<GeneratingNetwork> {
    if !(beta_left > 0.0 && beta_right > 0.0 && beta_left + beta_right < PI && r > 0.0) {
        return domain("lens positions must lie strictly inside the upper semicircle");
    }
    use RegionLabel::*;
    let qr = Vec2::from_angle(beta_right) * r;
    let ql = Vec2::from_angle(PI - beta_left) * r;
    let mut out = Vec::new();
    push(&mut out, Curve::new(qr, ql, 1.0 / r), B2, Ext);
    let t = |a: f64| Vec2::from_angle(a).perp();
    attach_lens(&mut out, qr, t(beta_right), true, B2, B1, w)?;
    attach_lens(&mut out, ql, -t(PI - beta_left), false, B2, B1, w)?;
    Ok(GeneratingNetwork::new(n, out))
}
