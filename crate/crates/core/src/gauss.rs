//! Gauss images of revolved exterior surfaces: sleeves, cuffs and antennae,
//! the zone-area monotonicity facts they rest on, and the calibration audit.
//!
//! The Gauss image of a surface of revolution about the `x` axis is a union
//! of zones `{polar angle ∈ [t₁, t₂]}` of the unit sphere, polar angle being
//! measured from `+x`. A smooth exterior component contributes one zone (a
//! sleeve); where two exterior components meet at a junction their sleeves
//! overlap in a cuff.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::curve::{Curve, Vec2};
use crate::error::{domain, Error, Result};
use crate::profile::{GeneratingNetwork, PieceKind, RegionLabel, Topology, WeightTriple};
use crate::sphere::{alpha, sin_power_integral, unit_sphere_area, zone_area, Dimension};
use crate::standard::{construct, StandardBubbleGeometry};
use crate::unification::ProblemInstance;

/// Largest junction residual, relative to the largest weight, accepted as
/// force balance.
pub const BALANCE_TOL: f64 = 1e-8;

/// Exponent convention for the latitude measure `f(t) = (n−1)α_{n−1} sinᵏ t`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum SinExponent {
    /// `k = n − 2`: the true measure of the latitude `(n−2)`-sphere.
    #[default]
    NMinus2,
    /// `k = n − 1`.
    NMinus1,
}

impl SinExponent {
    pub fn k(self, n: Dimension) -> u32 {
        match self {
            Self::NMinus2 => n.get() - 2,
            Self::NMinus1 => n.get() - 1,
        }
    }
}

fn check_t(t: f64) -> Result<f64> {
    if !t.is_finite() || t < -1e-12 || t > PI + 1e-12 {
        return domain(format!("polar angle {t} outside [0, π]"));
    }
    Ok(t.clamp(0.0, PI))
}

/// Measure of the latitude sphere at polar angle `t` on the unit sphere.
pub fn f(n: Dimension, t: f64) -> Result<f64> {
    f_with(n, t, SinExponent::NMinus2)
}

pub fn f_with(n: Dimension, t: f64, e: SinExponent) -> Result<f64> {
    let t = check_t(t)?;
    Ok((n.as_f64() - 1.0) * alpha(n.get() - 1) * t.sin().powi(e.k(n) as i32))
}

/// `∫_a^b f` under either exponent convention.
pub fn f_integral(n: Dimension, a: f64, b: f64, e: SinExponent) -> Result<f64> {
    Ok((n.as_f64() - 1.0) * alpha(n.get() - 1) * sin_power_integral(e.k(n), a, b)?)
}

/// Cuff area per unit inner perimeter, `∫_t^{t+β} f / f(t)`.
pub fn h(n: Dimension, t: f64, beta: f64) -> Result<f64> {
    h_with(n, t, beta, SinExponent::NMinus2)
}

pub fn h_with(n: Dimension, t: f64, beta: f64, e: SinExponent) -> Result<f64> {
    if !(beta > 0.0) || t < 0.0 || t + beta > PI + 1e-12 {
        return domain(format!("need t ≥ 0, β > 0, t + β ≤ π; got t = {t}, β = {beta}"));
    }
    let ft = f_with(n, t, e)?;
    if ft == 0.0 {
        return domain("f vanishes at the poles, h is undefined there");
    }
    Ok(f_integral(n, t, (t + beta).min(PI), e)? / ft)
}

/// Overlap zone `[t, t + β]` of two sleeves, reflected so that `t ≤ π − (t + β)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Cuff {
    pub t: f64,
    pub beta: f64,
    pub inner_perimeter: f64,
}

impl Cuff {
    pub fn new(n: Dimension, t: f64, beta: f64) -> Result<Self> {
        if !(beta > 0.0) || t < -1e-12 || t + beta > PI + 1e-12 {
            return domain(format!("cuff [{t}, {}] is not inside [0, π]", t + beta));
        }
        let t = t.max(0.0);
        let t = if t > PI - (t + beta) { (PI - t - beta).max(0.0) } else { t };
        Ok(Self { t, beta, inner_perimeter: f(n, t)? })
    }

    /// Upper end of the normalized zone.
    pub fn u(&self) -> f64 {
        self.t + self.beta
    }
}

/// Area of a cuff, a zone of the unit sphere.
pub fn cuff_area(n: Dimension, c: &Cuff) -> Result<f64> {
    zone_area(n, c.t, c.u().min(PI))
}

/// Least boundary measure of a region of the unit sphere with the given
/// area: the latitude sphere of the polar cap with that area.
pub fn cap_perimeter_for_area(n: Dimension, area: f64) -> Result<f64> {
    let total = unit_sphere_area(n);
    if !(area > 0.0 && area < total) {
        return domain(format!("area {area} outside (0, {total})"));
    }
    let (mut lo, mut hi) = (0.0f64, PI);
    for _ in 0..200 {
        let m = 0.5 * (lo + hi);
        if m <= lo || m >= hi {
            break;
        }
        if zone_area(n, 0.0, m)? < area {
            lo = m;
        } else {
            hi = m;
        }
    }
    f(n, 0.5 * (lo + hi))
}

/// Gauss image of one smooth exterior component.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Sleeve {
    pub t_start: f64,
    pub t_end: f64,
    /// Network edges making up the component.
    pub source_edges: Vec<usize>,
    pub piece: PieceKind,
    pub is_end_sleeve: bool,
    pub area: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Pointing {
    Left,
    Right,
    Vertical,
}

/// Bisector of the exterior angle at a junction.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Antenna {
    pub junction: usize,
    pub point: Vec2,
    pub direction: Vec2,
    pub steepness: f64,
    pub pointing: Pointing,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CuffRecord {
    pub cuff: Cuff,
    pub junction: usize,
    /// Indices of the two overlapping sleeves.
    pub sleeves: [usize; 2],
    pub area: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SleeveDecomposition {
    pub sleeves: Vec<Sleeve>,
    pub cuffs: Vec<CuffRecord>,
    pub antennae: Vec<Antenna>,
}

impl SleeveDecomposition {
    pub fn total_sleeve_area(&self) -> f64 {
        self.sleeves.iter().map(|s| s.area).sum()
    }

    pub fn total_cuff_area(&self) -> f64 {
        self.cuffs.iter().map(|c| c.area).sum()
    }

    /// Measure of the union of all sleeves.
    pub fn union_area(&self, n: Dimension) -> f64 {
        let mut iv: Vec<(f64, f64)> = self.sleeves.iter().map(|s| (s.t_start, s.t_end)).collect();
        iv.sort_by(|a, b| a.0.total_cmp(&b.0));
        let mut total = 0.0;
        let mut cur: Option<(f64, f64)> = None;
        for (a, b) in iv {
            cur = match cur {
                Some((ca, cb)) if a <= cb => Some((ca, cb.max(b))),
                Some((ca, cb)) => {
                    total += zone_area(n, ca, cb).unwrap_or(0.0);
                    Some((a, b))
                }
                None => Some((a, b)),
            };
        }
        if let Some((ca, cb)) = cur {
            total += zone_area(n, ca, cb).unwrap_or(0.0);
        }
        total
    }

    /// Sleeves adjacent to at least two cuffs.
    pub fn double_cuffed(&self) -> Vec<usize> {
        (0..self.sleeves.len()).filter(|&s| self.cuffs_of(s).len() >= 2).collect()
    }

    pub fn cuffs_of(&self, sleeve: usize) -> Vec<usize> {
        (0..self.cuffs.len()).filter(|&c| self.cuffs[c].sleeves.contains(&sleeve)).collect()
    }
}

/// Outward normal sign of an exterior edge: +1 if EXT is on the left.
fn outward_sign(net: &GeneratingNetwork, e: usize) -> f64 {
    if net.edges[e].left == RegionLabel::Ext {
        1.0
    } else {
        -1.0
    }
}

fn polar(v: Vec2) -> f64 {
    v.y.abs().atan2(v.x)
}

/// Range of normal polar angles along a curve with normal `sign·T.perp()`.
fn normal_polar_range(c: &Curve, sign: f64) -> (f64, f64) {
    let n0 = c.start_tangent().perp() * sign;
    let a0 = n0.angle();
    let sweep = c.kappa * c.length();
    let t0 = polar(n0);
    let t1 = polar(c.end_tangent().perp() * sign);
    let (mut lo, mut hi) = (t0.min(t1), t0.max(t1));
    let (a, b) = if sweep >= 0.0 { (a0, a0 + sweep) } else { (a0 + sweep, a0) };
    for m in -3i32..=3 {
        let x = m as f64 * PI;
        if x > a && x < b {
            if m % 2 == 0 {
                lo = 0.0;
            } else {
                hi = PI;
            }
        }
    }
    (lo, hi)
}

fn exterior_piece(net: &GeneratingNetwork, e: usize) -> Option<PieceKind> {
    match net.edges[e].piece() {
        Some(k @ (PieceKind::Ext1 | PieceKind::Ext2)) => Some(k),
        _ => None,
    }
}

fn check_balance(net: &GeneratingNetwork, w: &WeightTriple) -> Result<()> {
    let res = net.junction_residual(w)?;
    let tol = BALANCE_TOL * w.max();
    if let Some(j) = res.iter().find(|j| j.residual > tol) {
        return Err(Error::Precondition(format!(
            "junction at ({:.6}, {:.6}) is out of balance by {:.3e}",
            j.point.x, j.point.y, j.residual
        )));
    }
    Ok(())
}

/// Sleeves, cuffs and antennae of a valid competitor in force balance.
pub fn sleeves_and_cuffs(net: &GeneratingNetwork, w: &WeightTriple) -> Result<SleeveDecomposition> {
    net.ensure_valid()?;
    check_balance(net, w)?;
    let n = net.dimension;
    let topo = Topology::build(net);
    let m = net.edges.len();

    // chain exterior edges through degree-2 nodes
    let mut parent: Vec<usize> = (0..m).collect();
    fn find(p: &mut [usize], mut i: usize) -> usize {
        while p[i] != i {
            p[i] = p[p[i]];
            i = p[i];
        }
        i
    }
    for node in &topo.nodes {
        if node.degree() == 2 && !node.on_axis {
            let (a, b) = (node.out[0].edge, node.out[1].edge);
            if exterior_piece(net, a).is_some() && exterior_piece(net, a) == exterior_piece(net, b) {
                let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
                parent[ra] = rb;
            }
        }
    }
    let mut sleeves: Vec<Sleeve> = Vec::new();
    let mut sleeve_of = vec![usize::MAX; m];
    let mut root_to_sleeve = std::collections::HashMap::new();
    for e in 0..m {
        let Some(piece) = exterior_piece(net, e) else { continue };
        let r = find(&mut parent, e);
        let (lo, hi) = normal_polar_range(&net.edges[e].curve(), outward_sign(net, e));
        let idx = *root_to_sleeve.entry(r).or_insert_with(|| {
            sleeves.push(Sleeve {
                t_start: lo,
                t_end: hi,
                source_edges: Vec::new(),
                piece,
                is_end_sleeve: false,
                area: 0.0,
            });
            sleeves.len() - 1
        });
        let s = &mut sleeves[idx];
        s.t_start = s.t_start.min(lo);
        s.t_end = s.t_end.max(hi);
        s.source_edges.push(e);
        sleeve_of[e] = idx;
    }
    for s in &mut sleeves {
        s.is_end_sleeve = s.t_start <= 1e-9 || s.t_end >= PI - 1e-9;
        s.area = zone_area(n, s.t_start, s.t_end)?;
    }

    let mut cuffs = Vec::new();
    let mut antennae = Vec::new();
    for (ni, node) in topo.nodes.iter().enumerate() {
        if node.on_axis || node.degree() != 3 {
            continue;
        }
        let ext: Vec<_> = node.out.iter().filter(|h| exterior_piece(net, h.edge).is_some()).collect();
        if ext.len() != 2 {
            continue;
        }
        let t: Vec<f64> = ext
            .iter()
            .map(|h| {
                let c = h.curve(net);
                // outward normal of the oriented half-edge: EXT on its left?
                let sign = if h.left(net) == RegionLabel::Ext { 1.0 } else { -1.0 };
                polar(c.start_tangent().perp() * sign)
            })
            .collect();
        let (lo, hi) = (t[0].min(t[1]), t[0].max(t[1]));
        if hi - lo > 0.0 {
            let cuff = Cuff::new(n, lo, hi - lo)?;
            cuffs.push(CuffRecord {
                cuff,
                junction: ni,
                sleeves: [sleeve_of[ext[0].edge], sleeve_of[ext[1].edge]],
                area: cuff_area(n, &cuff)?,
            });
        }
        // exterior sector: from the outgoing half-edge with EXT on its left,
        // counterclockwise to the next one
        let k = node.out.iter().position(|h| h.left(net) == RegionLabel::Ext).expect("an exterior side");
        let a = node.out[k].curve(net).start_tangent().angle();
        let b = node.out[(k + 1) % 3].curve(net).start_tangent().angle();
        let mut width = b - a;
        if width <= 0.0 {
            width += 2.0 * PI;
        }
        let d = Vec2::from_angle(a + 0.5 * width);
        let pointing = if d.x < -1e-12 {
            Pointing::Left
        } else if d.x > 1e-12 {
            Pointing::Right
        } else {
            Pointing::Vertical
        };
        antennae.push(Antenna { junction: ni, point: node.pos, direction: d, steepness: polar(d), pointing });
    }
    Ok(SleeveDecomposition { sleeves, cuffs, antennae })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum AntennaCase {
    SameSide,
    BothWays,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum SubArgument {
    /// One cuff is at least as high as the standard cuff, so it alone has at
    /// least as much area.
    HigherCuff,
    /// Both cuffs are lower; the comparison then rests on their inner
    /// perimeters together exceeding that of the standard cuff.
    PerimeterSum,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "SCREAMING_SNAKE_CASE")]
pub enum OverlapExcess {
    Applicable(OverlapReport),
    NotApplicable { violated: String },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OverlapReport {
    pub case: AntennaCase,
    pub sub_argument: SubArgument,
    /// Index of the double-cuffed sleeve carrying the witness.
    pub witness_sleeve: usize,
    pub competitor_cuff_areas: [f64; 2],
    pub standard_cuff_area: f64,
    pub excess: f64,
    /// `f(t₁) + f(t₂)` for the witness cuffs.
    pub inner_perimeter_sum: f64,
    /// Inner perimeter of the standard cuff, which bounds the larger
    /// standard sleeve.
    pub standard_inner_perimeter: f64,
    /// Whether the equator lies inside the witness sleeve, in which case no
    /// great sphere misses its image and the reduction step has no footing.
    pub great_sphere_in_witness: bool,
    /// Competitor exterior pieces each having no more area than the
    /// corresponding standard piece; reported, not required.
    pub less_weighted_area: bool,
}

/// Area of the overlap created by the extra junctions of a competitor,
/// compared with the single cuff of the standard bubble `m`.
pub fn overlap_excess(net: &GeneratingNetwork, w: &WeightTriple, m: &StandardBubbleGeometry) -> Result<OverlapExcess> {
    let dc = sleeves_and_cuffs(net, w)?;
    let dm = sleeves_and_cuffs(&m.network(), &m.weights)?;
    let na = |v: &str| Ok(OverlapExcess::NotApplicable { violated: v.to_string() });
    if dc.cuffs.len() < 2 {
        return na("competitor has fewer than two cuffs");
    }
    let Some(km) = dm.cuffs.first() else {
        return na("the standard bubble has no cuff");
    };
    let y_area = dm.sleeves.iter().map(|s| s.area).fold(0.0, f64::max);
    let tol = 1e-9 * unit_sphere_area(net.dimension);
    if dc.sleeves.iter().any(|s| s.area > y_area + tol) {
        return na("a competitor sleeve is larger than the larger standard sleeve");
    }
    let witness = dc
        .double_cuffed()
        .into_iter()
        .map(|s| {
            let cs = dc.cuffs_of(s);
            let mut areas: Vec<(f64, usize)> = cs.iter().map(|&c| (dc.cuffs[c].area, c)).collect();
            areas.sort_by(|a, b| b.0.total_cmp(&a.0));
            (s, areas[0].1, areas[1].1, areas[0].0 + areas[1].0)
        })
        .max_by(|a, b| a.3.total_cmp(&b.3));
    let Some((ws, c1, c2, total)) = witness else {
        return na("no sleeve carries two cuffs");
    };
    let any = |p: Pointing| dc.antennae.iter().all(|a| a.pointing == p || a.pointing == Pointing::Vertical);
    let case = if any(Pointing::Left) || any(Pointing::Right) { AntennaCase::SameSide } else { AntennaCase::BothWays };
    let (k1, k2) = (dc.cuffs[c1].cuff, dc.cuffs[c2].cuff);
    let sub_argument = if k1.t >= km.cuff.t - 1e-12 || k2.t >= km.cuff.t - 1e-12 {
        SubArgument::HigherCuff
    } else {
        SubArgument::PerimeterSum
    };
    let s = &dc.sleeves[ws];
    let a = net.weighted_area(w)?;
    let ma = m.measured;
    Ok(OverlapExcess::Applicable(OverlapReport {
        case,
        sub_argument,
        witness_sleeve: ws,
        competitor_cuff_areas: [dc.cuffs[c1].area, dc.cuffs[c2].area],
        standard_cuff_area: km.area,
        excess: total - km.area,
        inner_perimeter_sum: k1.inner_perimeter + k2.inner_perimeter,
        standard_inner_perimeter: km.cuff.inner_perimeter,
        great_sphere_in_witness: s.t_start < PI / 2.0 && s.t_end > PI / 2.0,
        less_weighted_area: a.a_ext1 <= ma.a_ext1 * (1.0 + 1e-12) && a.a_ext2 <= ma.a_ext2 * (1.0 + 1e-12),
    }))
}

/// How the audit obtains the per-piece ratios.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "mode", content = "mu0", rename_all = "SCREAMING_SNAKE_CASE")]
pub enum AuditMode {
    /// Ratios measured on the competitor.
    Measured,
    /// Every area and curvature ratio set to `μ₀`, as a competitor with
    /// relative area `μ₀` would have to satisfy.
    Assume(f64),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Verdict {
    Consistent,
    Contradiction,
    NotDominated,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PieceAudit {
    pub piece: PieceKind,
    pub area_competitor: f64,
    pub area_standard: f64,
    pub area_ratio: f64,
    /// Largest `|H|` over the competitor's piece.
    pub h_competitor: f64,
    pub h_standard: f64,
    pub curvature_ratio: f64,
    /// `H` constant along every edge of the piece to `1e-8`.
    pub h_constant: bool,
    /// `∫|K| dA`, the Gauss image counted with multiplicity.
    pub gauss_image: f64,
    /// `∫ (|H|/(n−1))^{n−1} dA`, which bounds it from above when the
    /// principal curvatures share a sign.
    pub amgm_bound: f64,
    /// Gauss image area of the corresponding standard piece.
    pub gauss_image_standard: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AuditReport {
    pub mode: AuditMode,
    pub pieces: Vec<PieceAudit>,
    pub sleeve_area: f64,
    pub total_overlap: f64,
    pub union_coverage: f64,
    pub sphere_area: f64,
    /// `Σ area_ratio · curvature_ratio^{n−1} · G(M) − overlap`.
    pub hypothetical_coverage: f64,
    pub coverage_deficit: f64,
    pub dominated: bool,
    pub verdict: Verdict,
}

/// `(H, |K|·dA/ds, (|H|/(n−1))^{n−1}·dA/ds)` at arclength `s` with outward sign.
fn curvature_terms(n: Dimension, c: &Curve, sign: f64, s: f64) -> (f64, f64, f64) {
    let nf = n.as_f64();
    let p = c.point(s);
    let nrm = c.tangent(s).perp() * sign;
    let km = -c.kappa * sign;
    let y = p.y.max(1e-300);
    let kl = nrm.y / y;
    let hh = km + (nf - 2.0) * kl;
    let da = (nf - 1.0) * alpha(n.get() - 1);
    let k_da = da * c.kappa.abs() * nrm.y.abs().powi(n.exp() - 2);
    let amgm = da * (hh.abs() / (nf - 1.0)).powi(n.exp() - 1) * y.powi(n.exp() - 2);
    (hh, k_da, amgm)
}

struct EdgeCurvature {
    h_min: f64,
    h_max: f64,
    h_abs_max: f64,
    gauss: f64,
    amgm: f64,
}

fn edge_curvature(n: Dimension, c: &Curve, sign: f64) -> Result<EdgeCurvature> {
    let len = c.length();
    let mut h_min = f64::INFINITY;
    let mut h_max = f64::NEG_INFINITY;
    let mut h_abs_max: f64 = 0.0;
    for k in 1..16 {
        let s = len * k as f64 / 16.0;
        if c.point(s).y <= 1e-9 * c.chord() {
            continue;
        }
        let (hh, _, _) = curvature_terms(n, c, sign, s);
        h_min = h_min.min(hh);
        h_max = h_max.max(hh);
        h_abs_max = h_abs_max.max(hh.abs());
    }
    let scale = c.bbox().1.y.max(1e-300);
    let gauss = crate::quadrature::quad(|s| curvature_terms(n, c, sign, s).1, 0.0, len)?;
    let amgm = crate::quadrature::integrate(
        |s| curvature_terms(n, c, sign, s).2,
        0.0,
        len,
        &crate::quadrature::QuadratureConfig {
            abs_tol: 1e-13 * scale.powi(n.exp() - 2) * len,
            ..Default::default()
        },
    )?
    .value;
    Ok(EdgeCurvature { h_min, h_max, h_abs_max, gauss, amgm })
}

/// Run the Gauss-image calibration on a competitor of the class `alpha`.
pub fn calibration_audit(net: &GeneratingNetwork, alpha_: &ProblemInstance, mode: AuditMode) -> Result<AuditReport> {
    let w = alpha_.weights;
    let n = net.dimension;
    let dc = sleeves_and_cuffs(net, &w)?;
    let m = construct(alpha_)?;
    let dm = sleeves_and_cuffs(&m.network(), &m.weights)?;
    let mm = m.measured;
    let areas = net.weighted_area(&w)?;
    let total = unit_sphere_area(n);
    let nf = n.as_f64();

    let mut pieces = Vec::new();
    for piece in [PieceKind::Ext1, PieceKind::Ext2] {
        let a_s = mm.area(piece);
        let a_c = areas.get(piece);
        if a_s == 0.0 && a_c == 0.0 {
            continue;
        }
        let mut h_abs: f64 = 0.0;
        let mut constant = true;
        let (mut gauss, mut amgm) = (0.0, 0.0);
        for (e, edge) in net.edges.iter().enumerate() {
            if edge.piece() != Some(piece) {
                continue;
            }
            let ec = edge_curvature(n, &edge.curve(), outward_sign(net, e))?;
            h_abs = h_abs.max(ec.h_abs_max);
            if ec.h_max.is_finite() && ec.h_max - ec.h_min > 1e-8 * ec.h_abs_max.max(1.0) {
                constant = false;
            }
            gauss += ec.gauss;
            amgm += ec.amgm;
        }
        let h_s = mm.mean_curvature(piece);
        let g_s: f64 = dm.sleeves.iter().filter(|s| s.piece == piece).map(|s| s.area).sum();
        let ratio = |a: f64, b: f64| if b == 0.0 { if a == 0.0 { 0.0 } else { f64::INFINITY } } else { a / b };
        pieces.push(PieceAudit {
            piece,
            area_competitor: a_c,
            area_standard: a_s,
            area_ratio: ratio(a_c, a_s),
            h_competitor: h_abs,
            h_standard: h_s,
            curvature_ratio: ratio(h_abs, h_s),
            h_constant: constant,
            gauss_image: gauss,
            amgm_bound: amgm,
            gauss_image_standard: g_s,
        });
    }
    let total_overlap = dc.total_cuff_area();
    let hypothetical: f64 = pieces
        .iter()
        .map(|p| {
            let (ar, cr) = match mode {
                AuditMode::Measured => (p.area_ratio, p.curvature_ratio),
                AuditMode::Assume(mu) => (mu, mu),
            };
            if p.gauss_image_standard == 0.0 {
                0.0
            } else {
                ar * cr.powf(nf - 1.0) * p.gauss_image_standard
            }
        })
        .sum::<f64>()
        - total_overlap;
    let deficit = total - hypothetical;
    let dominated = match mode {
        AuditMode::Measured => pieces.iter().all(|p| p.area_ratio <= 1.0 + 1e-9 && p.curvature_ratio <= 1.0 + 1e-9),
        AuditMode::Assume(mu) => mu <= 1.0,
    };
    let verdict = if !dominated {
        Verdict::NotDominated
    } else if deficit > 1e-9 * total {
        Verdict::Contradiction
    } else {
        Verdict::Consistent
    };
    Ok(AuditReport {
        mode,
        pieces,
        sleeve_area: dc.total_sleeve_area(),
        total_overlap,
        union_coverage: dc.union_area(n),
        sphere_area: total,
        hypothetical_coverage: hypothetical,
        coverage_deficit: deficit,
        dominated,
        verdict,
    })
}

/// One row of the monotonicity grid.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GridRow {
    pub n: u32,
    pub beta: f64,
    pub t: f64,
    pub h: f64,
    pub cuff_area: f64,
    pub inner_perimeter: f64,
}

/// `samples` evenly spaced cuff positions `t ∈ (0, (π − β)/2]`, from near the
/// pole up to the symmetric position.
pub fn monotonicity_grid(n: Dimension, beta: f64, samples: usize, e: SinExponent) -> Result<Vec<GridRow>> {
    let top = 0.5 * (PI - beta);
    (1..=samples)
        .map(|i| {
            let t = top * i as f64 / samples as f64;
            Ok(GridRow {
                n: n.get(),
                beta,
                t,
                h: h_with(n, t, beta, e)?,
                cuff_area: f_integral(n, t, t + beta, e)?,
                inner_perimeter: f_with(n, t, e)?,
            })
        })
        .collect()
}

/// Smallest adjacent decrease of `h` over `samples` points of `(0, π − β)`.
pub fn h_decrease_margin(n: Dimension, beta: f64, samples: usize, e: SinExponent) -> Result<f64> {
    let end = PI - beta;
    let mut prev = h_with(n, end / (samples + 1) as f64, beta, e)?;
    let mut margin = f64::INFINITY;
    for i in 2..=samples {
        let cur = h_with(n, end * i as f64 / (samples + 1) as f64, beta, e)?;
        margin = margin.min(prev - cur);
        prev = cur;
    }
    Ok(margin)
}
