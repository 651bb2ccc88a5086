//! The standard weighted double bubble for given volumes and weights.
//!
//! In the meridian half-plane the three caps are circular arcs (or a segment)
//! through a common junction point, centred on the axis. Working in the frame
//! where the junction sits at `(0, 1)`, the conormal of piece `i` points in
//! direction `φᵢ`; its circle has centre `tan φᵢ`, radius `1/|cos φᵢ|` and
//! curvature `κᵢ = cos φᵢ`, so `Σ wᵢκᵢ = 0` is the horizontal part of the
//! conormal balance. The whole family is a rotation `ψ = φ₂` of one rigid
//! frame of conormals; the volume ratio is monotone in `ψ`, and a final
//! dilation fixes the volumes.
//!
//! Orientation: bubble 1 lies to the left (smaller `x`) of bubble 2. Every
//! edge of the exported network runs from the junction to the axis.

use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI};

use serde::{Deserialize, Serialize};

use crate::curve::{Curve, Vec2};
use crate::error::{domain, Error, Result};
use crate::profile::{
    AreaBreakdown, Binding, GeneratingNetwork, MeridianEdge, PieceKind, RegionLabel, VolumePair,
    WeightClass, WeightTriple,
};
use crate::sphere::{ball_radius, cap_with_unit_rim, sphere_area, Dimension};
use crate::unification::ProblemInstance;

/// Arcs turning more than this are exported as two halves, keeping the
/// endpoint/curvature representation well conditioned.
const SPLIT_SWEEP: f64 = 0.75 * PI;

/// Conormal directions of a strict weight triple.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct JunctionAngles {
    /// `φ₀, φ₁, φ₂` in the canonical rotation `φ₀ = 0`.
    pub phi: [f64; 3],
    /// Angle between `u₁` and `u₂`.
    pub theta12: f64,
    /// Angle between `u₀` and `u₁`.
    pub theta01: f64,
    /// Angle between `u₀` and `u₂`.
    pub theta02: f64,
}

impl JunctionAngles {
    /// Width of the overlap of the two exterior Gauss images at the junction.
    pub fn cuff_width(&self) -> f64 {
        PI - self.theta12
    }
}

fn law_of_cosines(opposite: f64, a: f64, b: f64) -> f64 {
    ((opposite * opposite - a * a - b * b) / (2.0 * a * b)).clamp(-1.0, 1.0).acos()
}

/// Directions of three conormals with lengths `w` summing to zero.
pub fn junction_angles(w: &WeightTriple) -> Result<JunctionAngles> {
    let class = w.classify();
    if class != WeightClass::Strict {
        return Err(Error::DegenerateWeights { weights: w.as_array(), class: class.to_string() });
    }
    let theta12 = law_of_cosines(w.w0, w.w1, w.w2);
    let theta01 = law_of_cosines(w.w2, w.w0, w.w1);
    let theta02 = law_of_cosines(w.w1, w.w0, w.w2);
    // counterclockwise at the junction: u₂, (exterior), u₁, (bubble 1), u₀, (bubble 2)
    let phi = [0.0, -theta01, -theta01 - theta12];
    Ok(JunctionAngles { phi, theta12, theta01, theta02 })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum DegenerateKind {
    None,
    Disjoint,
    Nested,
    Single,
}

/// Measured quantities of a standard bubble.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Measured {
    pub a_ext1: f64,
    pub a_ext2: f64,
    pub a_int: f64,
    pub v1: f64,
    pub v2: f64,
    pub q: f64,
    pub h_ext1: f64,
    pub h_ext2: f64,
    pub h_int: f64,
}

impl Measured {
    pub fn areas(&self) -> AreaBreakdown {
        AreaBreakdown { a_ext1: self.a_ext1, a_ext2: self.a_ext2, a_int: self.a_int, q: self.q }
    }

    pub fn area(&self, k: PieceKind) -> f64 {
        self.areas().get(k)
    }

    pub fn mean_curvature(&self, k: PieceKind) -> f64 {
        match k {
            PieceKind::Interface => self.h_int,
            PieceKind::Ext1 => self.h_ext1,
            PieceKind::Ext2 => self.h_ext2,
        }
    }
}

/// One spherical piece of a standard bubble (a cap, or a whole sphere in the
/// degenerate cases) in physical coordinates.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Piece {
    pub kind: PieceKind,
    /// Axial coordinate of the sphere centre; `None` for a flat disk.
    pub center: Option<f64>,
    /// Curvature `1/R` with the sign convention of [`StandardBubbleGeometry::curvatures`].
    pub curvature: f64,
    pub area: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StandardBubbleGeometry {
    pub dimension: Dimension,
    pub weights: WeightTriple,
    pub volumes: VolumePair,
    pub class: WeightClass,
    pub degenerate_kind: DegenerateKind,
    /// Conormal directions `φ₀, φ₁, φ₂` in the normalized frame; `None` for
    /// degenerate geometries.
    pub conormal_angles: Option<[f64; 3]>,
    /// Signed curvatures `κᵢ = cos φᵢ / λ`. Positive `κ₀` bends the interface
    /// into bubble 2; `κ₁ < 0 < κ₂` for the exterior caps. In degenerate
    /// geometries `κᵢ` is `±1/rᵢ` for each sphere present and 0 otherwise.
    pub curvatures: [f64; 3],
    pub junction_radius: f64,
    pub dilation: f64,
    /// Which bubble is enclosed, for nested geometries.
    pub inner: Option<RegionLabel>,
    pub pieces: Vec<Piece>,
    pub measured: Measured,
    network: Vec<MeridianEdge>,
}

impl StandardBubbleGeometry {
    pub fn measured(&self) -> Measured {
        self.measured
    }

    /// Radii `1/|κᵢ|`, infinite for a flat interface or a missing piece.
    pub fn radii(&self) -> [f64; 3] {
        self.curvatures.map(|k| 1.0 / k.abs())
    }

    /// Axial distance between the centres of the two exterior spheres.
    pub fn center_distance(&self) -> f64 {
        let c = |k| {
            self.pieces.iter().find(|p| p.kind == k).and_then(|p| p.center).unwrap_or(0.0)
        };
        (c(PieceKind::Ext1) - c(PieceKind::Ext2)).abs()
    }

    /// `|Σ wᵢ u(φᵢ)|`, zero for an exact junction.
    pub fn conormal_residual(&self) -> f64 {
        let Some(phi) = self.conormal_angles else { return 0.0 };
        let w = self.weights.as_array();
        (0..3).fold(Vec2::default(), |s, i| s + Vec2::from_angle(phi[i]) * w[i]).norm()
    }

    /// `|Σ wᵢκᵢ|` in the normalized frame.
    pub fn curvature_balance(&self) -> f64 {
        if self.conormal_angles.is_none() {
            return 0.0;
        }
        let w = self.weights.as_array();
        (0..3).map(|i| w[i] * self.curvatures[i] * self.dilation).sum::<f64>().abs()
    }

    /// Bubble pressures `pᵢ = wᵢ·Hᵢ` of the exterior caps.
    pub fn pressures(&self) -> [f64; 2] {
        let m = self.measured;
        [self.weights.w1 * m.h_ext1, self.weights.w2 * m.h_ext2]
    }

    pub fn network(&self) -> GeneratingNetwork {
        GeneratingNetwork::new(self.dimension, self.network.clone())
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }
}

/// Cap volume and area in the normalized frame for conormal direction `φ`.
fn cap_of(n: Dimension, phi: f64) -> (f64, f64) {
    let theta = phi.cos().abs().atan2(-phi.sin());
    cap_with_unit_rim(n, theta).expect("polar angle below π inside the admissible range")
}

/// `(V₁, V₂)` of the normalized configuration with `φ₂ = ψ`.
fn volumes_at(n: Dimension, ang: &JunctionAngles, psi: f64) -> (f64, f64) {
    let [p0, p1, p2] = rotate(ang, psi);
    let (v0, _) = cap_of(n, p0);
    let (v1, _) = cap_of(n, p1);
    let (v2, _) = cap_of(n, p2);
    let s0 = interface_side(p0);
    (v1 + s0 * v0, v2 - s0 * v0)
}

/// +1 when the interface cap bulges into bubble 2, −1 into bubble 1, 0 when flat.
fn interface_side(phi0: f64) -> f64 {
    let c = phi0.cos();
    if c == 0.0 {
        0.0
    } else {
        c.signum()
    }
}

fn rotate(ang: &JunctionAngles, psi: f64) -> [f64; 3] {
    [psi + ang.theta12 + ang.theta01, psi + ang.theta12, psi]
}

/// Admissible range of `ψ = φ₂`: both exterior caps stay below hemispheres'
/// complements, i.e. `φ₂ < π/2 < φ₁`.
pub fn psi_range(w: &WeightTriple) -> Result<(f64, f64)> {
    let ang = junction_angles(w)?;
    Ok((FRAC_PI_2 - ang.theta12, FRAC_PI_2))
}

/// `V₁/V₂` of the normalized configuration at `ψ`.
pub fn volume_ratio_at(n: Dimension, w: &WeightTriple, psi: f64) -> Result<f64> {
    let ang = junction_angles(w)?;
    let (a, b) = psi_range(w)?;
    if !(psi > a && psi < b) {
        return domain(format!("ψ = {psi} outside ({a}, {b})"));
    }
    let (v1, v2) = volumes_at(n, &ang, psi);
    Ok(v1 / v2)
}

fn solve_psi(n: Dimension, ang: &JunctionAngles, ratio: f64) -> Result<f64> {
    let (a, b) = (FRAC_PI_2 - ang.theta12, FRAC_PI_2);
    let width = b - a;
    let target = ratio.ln();
    let g = |psi: f64| {
        let (v1, v2) = volumes_at(n, ang, psi);
        v1.ln() - v2.ln() - target
    };
    let mut eps = 1e-2;
    let (mut lo, mut hi);
    loop {
        lo = a + eps * width;
        hi = b - eps * width;
        if g(lo) > 0.0 && g(hi) < 0.0 {
            break;
        }
        eps *= 0.1;
        if eps < 1e-15 {
            return Err(Error::Numerical(format!(
                "could not bracket the volume ratio {ratio:e} on ψ ∈ ({a}, {b})"
            )));
        }
    }
    let mut glo = g(lo);
    let mut ghi = g(hi);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        let gm = g(mid);
        if gm == 0.0 {
            return Ok(mid);
        }
        if gm > 0.0 {
            lo = mid;
            glo = gm;
        } else {
            hi = mid;
            ghi = gm;
        }
    }
    // secant polish inside the final bracket
    if ghi != glo {
        let s = lo - glo * (hi - lo) / (ghi - glo);
        if s >= lo && s <= hi {
            return Ok(s);
        }
    }
    Ok(0.5 * (lo + hi))
}

/// Split a piece ending on the axis at the point of its carrier circle
/// halfway round from the junction. The circle's centre `(λ tan φ, 0)` is
/// used directly: near a semicircle the centre implied by the chord and
/// curvature drifts off the axis.
fn split_arc(c: Curve, phi: f64, lam: f64) -> Vec<Curve> {
    if c.sweep().abs() <= SPLIT_SWEEP {
        return vec![c];
    }
    let o = Vec2::new(lam * phi.tan(), 0.0);
    let r = c.p.dist(o);
    let a0 = (c.p - o).angle();
    let a1 = if c.q.x >= o.x { 0.0 } else { PI };
    let mut sweep = a1 - a0;
    if c.kappa > 0.0 && sweep < 0.0 {
        sweep += 2.0 * PI;
    } else if c.kappa < 0.0 && sweep > 0.0 {
        sweep -= 2.0 * PI;
    }
    let m = o + Vec2::from_angle(a0 + 0.5 * sweep) * r;
    vec![Curve::new(c.p, m, c.kappa), Curve::new(m, c.q, c.kappa)]
}

/// Minor arc through `j` leaving in direction `φ`, ending on the axis, dilated by `lam`.
fn piece_curve(phi: f64, lam: f64) -> Vec<Curve> {
    let j = Vec2::new(0.0, lam);
    let x = lam * (FRAC_PI_4 + 0.5 * phi).tan();
    let k = -phi.cos() / lam;
    if phi.cos() == 0.0 {
        vec![Curve::segment(j, Vec2::new(x, 0.0))]
    } else {
        split_arc(Curve::new(j, Vec2::new(x, 0.0), k), phi, lam)
    }
}

fn push_edges(out: &mut Vec<MeridianEdge>, c: Vec<Curve>, left: RegionLabel, right: RegionLabel) {
    out.extend(c.into_iter().map(|c| MeridianEdge::from_curve(c, left, right)));
}

/// Upper half of the sphere `|x − c| = r`, counterclockwise, as two quarter arcs.
fn semicircle(c: f64, r: f64, inside: RegionLabel, outside: RegionLabel) -> Vec<MeridianEdge> {
    let a = Curve::new(Vec2::new(c + r, 0.0), Vec2::new(c, r), 1.0 / r);
    let b = Curve::new(Vec2::new(c, r), Vec2::new(c - r, 0.0), 1.0 / r);
    vec![MeridianEdge::from_curve(a, inside, outside), MeridianEdge::from_curve(b, inside, outside)]
}

/// Build the standard bubble, dispatching to the degenerate forms as needed.
pub fn construct(alpha: &ProblemInstance) -> Result<StandardBubbleGeometry> {
    let v = alpha.volumes;
    if v.v1 > 0.0 && v.v2 > 0.0 && alpha.weights.classify() == WeightClass::Strict {
        construct_strict(alpha)
    } else {
        construct_degenerate(alpha)
    }
}

fn construct_strict(alpha: &ProblemInstance) -> Result<StandardBubbleGeometry> {
    let n = alpha.dimension;
    let w = alpha.weights;
    let vols = alpha.volumes;
    let ang = junction_angles(&w)?;
    let psi = solve_psi(n, &ang, vols.v1 / vols.v2)?;
    let phi = rotate(&ang, psi);
    let caps = phi.map(|p| cap_of(n, p));
    let s0 = interface_side(phi[0]);
    let nv1 = caps[1].0 + s0 * caps[0].0;
    let nv2 = caps[2].0 - s0 * caps[0].0;
    // dilate using the larger volume for accuracy
    let nf = n.as_f64();
    let lam = if vols.v1 >= vols.v2 {
        (vols.v1 / nv1).powf(1.0 / nf)
    } else {
        (vols.v2 / nv2).powf(1.0 / nf)
    };
    let ln = lam.powi(n.exp());
    let la = lam.powi(n.exp() - 1);
    let curv = phi.map(|p| p.cos() / lam);
    let area = caps.map(|c| c.1 * la);
    let h = curv.map(|k| (nf - 1.0) * k.abs());
    let measured = Measured {
        a_ext1: area[1],
        a_ext2: area[2],
        a_int: area[0],
        v1: nv1 * ln,
        v2: nv2 * ln,
        q: w.w0 * area[0] + w.w1 * area[1] + w.w2 * area[2],
        h_ext1: h[1],
        h_ext2: h[2],
        h_int: h[0],
    };
    let kinds = [PieceKind::Interface, PieceKind::Ext1, PieceKind::Ext2];
    let pieces = (0..3)
        .map(|i| Piece {
            kind: kinds[i],
            center: (phi[i].cos() != 0.0).then(|| lam * phi[i].tan()),
            curvature: curv[i],
            area: area[i],
        })
        .collect();
    let mut edges = Vec::new();
    use RegionLabel::*;
    push_edges(&mut edges, piece_curve(phi[1], lam), B1, Ext);
    push_edges(&mut edges, piece_curve(phi[2], lam), Ext, B2);
    push_edges(&mut edges, piece_curve(phi[0], lam), B2, B1);
    Ok(StandardBubbleGeometry {
        dimension: n,
        weights: w,
        volumes: vols,
        class: WeightClass::Strict,
        degenerate_kind: DegenerateKind::None,
        conormal_angles: Some(phi),
        curvatures: curv,
        junction_radius: lam,
        dilation: lam,
        inner: None,
        pieces,
        measured,
        network: edges,
    })
}

/// Closed-form standard bubble for non-strict weights or a zero volume:
/// two disjoint spheres, one sphere inside another, or a single sphere.
pub fn construct_degenerate(alpha: &ProblemInstance) -> Result<StandardBubbleGeometry> {
    let n = alpha.dimension;
    let w = alpha.weights;
    let v = alpha.volumes;
    let class = w.classify();
    let nf = n.as_f64();
    let area = |vol: f64| sphere_area(n.get(), ball_radius(n, vol)).expect("positive radius");
    use RegionLabel::*;

    let mk = |kind, curvatures: [f64; 3], inner, pieces: Vec<Piece>, m: Measured, edges| {
        Ok(StandardBubbleGeometry {
            dimension: n,
            weights: w,
            volumes: v,
            class,
            degenerate_kind: kind,
            conormal_angles: None,
            curvatures,
            junction_radius: 0.0,
            dilation: 1.0,
            inner,
            pieces,
            measured: m,
            network: edges,
        })
    };

    if v.v1 == 0.0 || v.v2 == 0.0 {
        let (vol, label, piece, wi) =
            if v.v2 == 0.0 { (v.v1, B1, PieceKind::Ext1, w.w1) } else { (v.v2, B2, PieceKind::Ext2, w.w2) };
        let r = ball_radius(n, vol);
        let a = area(vol);
        let hh = (nf - 1.0) / r;
        let (a1, a2, h1, h2) = if label == B1 { (a, 0.0, hh, 0.0) } else { (0.0, a, 0.0, hh) };
        let m = Measured {
            a_ext1: a1, a_ext2: a2, a_int: 0.0, v1: v.v1, v2: v.v2, q: wi * a,
            h_ext1: h1, h_ext2: h2, h_int: 0.0,
        };
        let k = if label == B1 { [0.0, -1.0 / r, 0.0] } else { [0.0, 0.0, 1.0 / r] };
        let pieces = vec![Piece { kind: piece, center: Some(0.0), curvature: k[if label == B1 { 1 } else { 2 }], area: a }];
        return mk(DegenerateKind::Single, k, None, pieces, m, semicircle(0.0, r, label, Ext));
    }

    match class {
        WeightClass::Strict => domain(
            "strict weights with two positive volumes have a non-degenerate standard bubble",
        ),
        WeightClass::InterfaceDominant | WeightClass::Boundary(Binding::Interface) => {
            let (r1, r2) = (ball_radius(n, v.v1), ball_radius(n, v.v2));
            let (a1, a2) = (area(v.v1), area(v.v2));
            let gap = 0.25 * (r1 + r2);
            let (c1, c2) = (-(r1 + 0.5 * gap), r2 + 0.5 * gap);
            let m = Measured {
                a_ext1: a1, a_ext2: a2, a_int: 0.0, v1: v.v1, v2: v.v2,
                q: w.w1 * a1 + w.w2 * a2,
                h_ext1: (nf - 1.0) / r1, h_ext2: (nf - 1.0) / r2, h_int: 0.0,
            };
            let k = [0.0, -1.0 / r1, 1.0 / r2];
            let pieces = vec![
                Piece { kind: PieceKind::Ext1, center: Some(c1), curvature: k[1], area: a1 },
                Piece { kind: PieceKind::Ext2, center: Some(c2), curvature: k[2], area: a2 },
            ];
            let mut edges = semicircle(c1, r1, B1, Ext);
            edges.extend(semicircle(c2, r2, B2, Ext));
            mk(DegenerateKind::Disjoint, k, None, pieces, m, edges)
        }
        WeightClass::Nested1
        | WeightClass::Nested2
        | WeightClass::Boundary(Binding::Nested1)
        | WeightClass::Boundary(Binding::Nested2) => {
            // the bubble whose exterior weight dominates hides inside the other
            let inner_is_1 =
                matches!(class, WeightClass::Nested1 | WeightClass::Boundary(Binding::Nested1));
            let (vin, inner, outer, w_out) =
                if inner_is_1 { (v.v1, B1, B2, w.w2) } else { (v.v2, B2, B1, w.w1) };
            let vout = v.v1 + v.v2;
            let (ri, ro) = (ball_radius(n, vin), ball_radius(n, vout));
            let (ai, ao) = (area(vin), area(vout));
            let (hi, ho) = ((nf - 1.0) / ri, (nf - 1.0) / ro);
            let (a1, a2, h1, h2) = if inner_is_1 { (0.0, ao, 0.0, ho) } else { (ao, 0.0, ho, 0.0) };
            let m = Measured {
                a_ext1: a1, a_ext2: a2, a_int: ai, v1: v.v1, v2: v.v2,
                q: w.w0 * ai + w_out * ao,
                h_ext1: h1, h_ext2: h2, h_int: hi,
            };
            // the interface bends into the outer bubble
            let k0 = if inner_is_1 { 1.0 / ri } else { -1.0 / ri };
            let k = if inner_is_1 { [k0, 0.0, 1.0 / ro] } else { [k0, -1.0 / ro, 0.0] };
            let out_kind = if inner_is_1 { PieceKind::Ext2 } else { PieceKind::Ext1 };
            let pieces = vec![
                Piece { kind: PieceKind::Interface, center: Some(0.0), curvature: k0, area: ai },
                Piece { kind: out_kind, center: Some(0.0), curvature: if inner_is_1 { k[2] } else { k[1] }, area: ao },
            ];
            let mut edges = semicircle(0.0, ri, inner, outer);
            edges.extend(semicircle(0.0, ro, outer, Ext));
            mk(DegenerateKind::Nested, k, Some(inner), pieces, m, edges)
        }
    }
}

/// Central-difference sensitivities of the shape descriptors.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Sensitivity {
    pub h: f64,
    /// Parameters in column order.
    pub parameters: [&'static str; 5],
    /// Descriptors in row order. The interface is described by its
    /// curvature, which stays finite through the flat configuration.
    pub descriptors: [&'static str; 4],
    /// `quotients[d][p]` = ∂descriptor d / ∂parameter p.
    pub quotients: [[f64; 5]; 4],
}

fn descriptors(g: &StandardBubbleGeometry) -> [f64; 4] {
    let r = g.radii();
    [g.curvatures[0], r[1], r[2], g.center_distance()]
}

/// Finite-difference estimates of how `κ₀, R₁, R₂` and the centre distance
/// respond to each of `V₁, V₂, w₀, w₁, w₂`.
pub fn sensitivity(alpha: &ProblemInstance, h: f64) -> Result<Sensitivity> {
    if !(h > 0.0) {
        return domain("step must be positive");
    }
    let mut q = [[0.0; 5]; 4];
    for p in 0..5 {
        let shifted = |s: f64| -> Result<ProblemInstance> {
            let mut v = [alpha.volumes.v1, alpha.volumes.v2];
            let mut w = alpha.weights.as_array();
            if p < 2 {
                v[p] += s;
            } else {
                w[p - 2] += s;
            }
            let a = ProblemInstance::new(
                VolumePair::new(v[0], v[1])?,
                WeightTriple::new(w[0], w[1], w[2])?,
                alpha.dimension,
            );
            if a.volumes.v1 <= 0.0 || a.volumes.v2 <= 0.0 || a.weights.classify() != WeightClass::Strict {
                return domain("perturbation leaves the strict region");
            }
            Ok(a)
        };
        let plus = descriptors(&construct_strict(&shifted(h)?)?);
        let minus = descriptors(&construct_strict(&shifted(-h)?)?);
        for d in 0..4 {
            q[d][p] = (plus[d] - minus[d]) / (2.0 * h);
        }
    }
    Ok(Sensitivity {
        h,
        parameters: ["V1", "V2", "w0", "w1", "w2"],
        descriptors: ["kappa0", "R1", "R2", "center_distance"],
        quotients: q,
    })
}
