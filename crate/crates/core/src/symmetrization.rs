//! Planar symmetrization: area bisection by lines, quartering, the angular
//! stretch `θ ↦ kθ`, and the perimeter certificate built from them.
//!
//! A region is cut into four quarters by a bisecting line and a
//! perpendicular line bisecting one half. A quarter sits in a right-angle
//! sector at the lines' crossing; doubling angles there turns it into a half
//! region bounded by a line, and reflecting across that line gives an
//! enclosure of the original area. Angular stretching multiplies area by
//! exactly 2 and boundary length by at most 2, with equality only for arcs
//! of circles about the crossing, so the cheapest quarter never increases
//! perimeter and strictly decreases it unless the region is a disk.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::curve::{Curve, Vec2};
use crate::error::{domain, Error, Result};
use crate::quadrature::{integrate, QuadratureConfig};

/// Union of closed counterclockwise loops of arcs and segments.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PlanarRegion {
    pub loops: Vec<Vec<Curve>>,
}

impl PlanarRegion {
    pub fn new(loops: Vec<Vec<Curve>>) -> Result<Self> {
        let r = Self { loops };
        let scale = r.scale();
        for (i, l) in r.loops.iter().enumerate() {
            if l.is_empty() {
                return domain(format!("loop {i} is empty"));
            }
            for (j, c) in l.iter().enumerate() {
                let next = &l[(j + 1) % l.len()];
                if c.q.dist(next.p) > 1e-9 * scale {
                    return domain(format!("loop {i} is not closed after curve {j}"));
                }
                if !c.is_consistent(1e-9) {
                    return domain(format!("curve {j} of loop {i} is not a minor arc"));
                }
            }
        }
        if !(r.area() > 0.0) {
            return domain("region has no positive area");
        }
        Ok(r)
    }

    pub fn polygon(points: &[Vec2]) -> Result<Self> {
        if points.len() < 3 {
            return domain("a polygon needs three vertices");
        }
        let l = (0..points.len()).map(|i| Curve::segment(points[i], points[(i + 1) % points.len()])).collect();
        Self::new(vec![l])
    }

    pub fn disk(c: Vec2, r: f64) -> Result<Self> {
        if !(r > 0.0) {
            return domain("disk radius must be positive");
        }
        let p = |k: f64| c + Vec2::from_angle(k * PI / 2.0) * r;
        Self::new(vec![(0..4).map(|k| Curve::new(p(k as f64), p(k as f64 + 1.0), 1.0 / r)).collect()])
    }

    pub fn rectangle(lo: Vec2, hi: Vec2) -> Result<Self> {
        Self::polygon(&[lo, Vec2::new(hi.x, lo.y), hi, Vec2::new(lo.x, hi.y)])
    }

    /// Inscribed `sides`-gon of the ellipse with semi-axes `a`, `b`.
    pub fn ellipse(c: Vec2, a: f64, b: f64, sides: usize) -> Result<Self> {
        let pts: Vec<Vec2> = (0..sides)
            .map(|i| {
                let t = 2.0 * PI * i as f64 / sides as f64;
                c + Vec2::new(a * t.cos(), b * t.sin())
            })
            .collect();
        Self::polygon(&pts)
    }

    /// Disjoint union; the caller guarantees the pieces do not overlap.
    pub fn union(&self, other: &Self) -> Self {
        Self { loops: self.loops.iter().chain(&other.loops).cloned().collect() }
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let r: Self = serde_json::from_str(s)?;
        Self::new(r.loops)
    }

    pub fn curves(&self) -> impl Iterator<Item = &Curve> {
        self.loops.iter().flatten()
    }

    pub fn scale(&self) -> f64 {
        self.curves().map(|c| c.p.norm().max(c.q.norm()).max(c.chord())).fold(0.0, f64::max).max(1e-300)
    }

    pub fn area(&self) -> f64 {
        0.5 * self.curves().map(|c| c.cross_integral(Vec2::default())).sum::<f64>()
    }

    pub fn perimeter(&self) -> f64 {
        self.curves().map(Curve::length).sum()
    }

    pub fn centroid(&self) -> Result<Vec2> {
        let s = self.scale();
        let (mut mx, mut my) = (0.0, 0.0);
        for c in self.curves() {
            mx += c.integrate(|p, t| 0.5 * p.x * p.x * t.y, s * s)?;
            my -= c.integrate(|p, t| 0.5 * p.y * p.y * t.x, s * s)?;
        }
        let a = self.area();
        Ok(Vec2::new(mx / a, my / a))
    }

    /// Range of `n·P` over the region.
    fn extent(&self, n: Vec2) -> (f64, f64) {
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        for c in self.curves() {
            for s in c.tangent_extrema(n).into_iter().chain([0.0, c.length()]) {
                let v = n.dot(c.point(s));
                lo = lo.min(v);
                hi = hi.max(v);
            }
        }
        (lo, hi)
    }
}

/// Half-plane `n·P ≥ c`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HalfPlane {
    pub normal: Vec2,
    pub offset: f64,
}

impl HalfPlane {
    fn contains(&self, p: Vec2) -> bool {
        self.normal.dot(p) >= self.offset
    }
}

/// Boundary pieces of the region lying in every half-plane.
fn clipped_pieces(region: &PlanarRegion, hp: &[HalfPlane]) -> Vec<Curve> {
    let mut out = Vec::new();
    for c in region.curves() {
        let len = c.length();
        let mut cuts = vec![0.0, len];
        for h in hp {
            cuts.extend(c.line_crossings(h.normal, h.offset));
        }
        cuts.sort_by(f64::total_cmp);
        cuts.dedup();
        for w in cuts.windows(2) {
            if w[1] - w[0] <= 1e-15 * len {
                continue;
            }
            let mid = c.point(0.5 * (w[0] + w[1]));
            if hp.iter().all(|h| h.contains(mid)) {
                out.push(if w[0] == 0.0 && w[1] == len { *c } else { c.sub(w[0], w[1]) });
            }
        }
    }
    out
}

/// Point on every boundary line (one or two of them).
fn common_point(hp: &[HalfPlane]) -> Result<Vec2> {
    match hp {
        [h] => Ok(h.normal * (h.offset / h.normal.dot(h.normal))),
        [a, b] => {
            let det = a.normal.cross(b.normal);
            if det.abs() < 1e-14 {
                return domain("parallel cutting lines");
            }
            Ok(Vec2::new(
                (a.offset * b.normal.y - b.offset * a.normal.y) / det,
                (a.normal.x * b.offset - b.normal.x * a.offset) / det,
            ))
        }
        _ => domain("area cut by one or two lines only"),
    }
}

/// Area of the region inside one or two half-planes. Closing segments lie
/// on lines through the common point, so they contribute nothing to
/// `∫ cross(P − o, dP)`.
pub fn area_within(region: &PlanarRegion, hp: &[HalfPlane]) -> Result<f64> {
    let o = common_point(hp)?;
    Ok(0.5 * clipped_pieces(region, hp).iter().map(|c| c.cross_integral(o)).sum::<f64>())
}

/// Line `normal·P = offset`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BisectionLine {
    pub normal: Vec2,
    pub offset: f64,
    /// Every offset in `[lo, hi]` bisects; `offset` is the one nearest the
    /// reference point.
    pub lo: f64,
    pub hi: f64,
    /// Some boundary segment lies on the line.
    pub boundary_on_line: bool,
}

fn boundary_on_line(region: &PlanarRegion, n: Vec2, c: f64) -> bool {
    let tol = 1e-12 * region.scale();
    region.curves().any(|k| k.is_segment() && (n.dot(k.p) - c).abs() < tol && (n.dot(k.q) - c).abs() < tol)
}

fn bisect_within(region: &PlanarRegion, within: &[HalfPlane], n: Vec2, reference: Vec2) -> Result<BisectionLine> {
    let n = n.normalized();
    if !n.is_finite() {
        return domain("bisection direction must be nonzero");
    }
    let g = |c: f64| -> Result<f64> {
        let mut hp = within.to_vec();
        hp.push(HalfPlane { normal: n, offset: c });
        area_within(region, &hp)
    };
    let (cmin, cmax) = region.extent(n);
    let total = g(cmin - 1e-9 * region.scale())?;
    if !(total > 0.0) {
        return domain("nothing to bisect");
    }
    let half = 0.5 * total;
    let tau = 1e-13 * total;
    // smallest c with g(c) ≤ A/2, largest with g(c) ≥ A/2
    let search = |pred: &dyn Fn(f64) -> Result<bool>| -> Result<f64> {
        let (mut a, mut b) = (cmin, cmax);
        for _ in 0..200 {
            let m = 0.5 * (a + b);
            if m <= a || m >= b {
                break;
            }
            if pred(m)? {
                b = m;
            } else {
                a = m;
            }
        }
        Ok(0.5 * (a + b))
    };
    let lo = search(&|c| Ok(g(c)? <= half + tau))?;
    let hi = search(&|c| Ok(g(c)? < half - tau))?;
    let (lo, hi) = (lo.min(hi), lo.max(hi));
    let offset = if hi - lo <= 1e-10 * region.scale() { 0.5 * (lo + hi) } else { n.dot(reference).clamp(lo, hi) };
    Ok(BisectionLine { normal: n, offset, lo, hi, boundary_on_line: boundary_on_line(region, n, offset) })
}

/// Line with normal `direction` halving the region's area. Among several,
/// the one passing nearest `reference` (the centroid when `None`).
pub fn bisect_single(region: &PlanarRegion, direction: Vec2, reference: Option<Vec2>) -> Result<BisectionLine> {
    let r = match reference {
        Some(r) => r,
        None => region.centroid()?,
    };
    bisect_within(region, &[], direction, r)
}

/// Directions scanned before bisecting on the angle.
pub const DOUBLE_SAMPLES: usize = 720;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DoubleBisection {
    pub line: BisectionLine,
    /// Normal angle in `[0, π]`.
    pub angle: f64,
    /// Fraction of each region's area on the positive side.
    pub fractions: [f64; 2],
}

/// A line halving both regions: the first-region bisector whose direction
/// zeroes the second region's imbalance, found by scanning the half-turn and
/// bisecting the bracketing interval to `1e-10`.
pub fn bisect_double(r1: &PlanarRegion, r2: &PlanarRegion) -> Result<DoubleBisection> {
    let a2 = r2.area();
    let ref1 = r1.centroid()?;
    let line_at = |a: f64| bisect_single(r1, Vec2::from_angle(a), Some(ref1));
    let f = |a: f64| -> Result<f64> {
        let l = line_at(a)?;
        Ok(area_within(r2, &[HalfPlane { normal: l.normal, offset: l.offset }])? - 0.5 * a2)
    };
    let zero = 1e-13 * a2;
    let mut prev = (0.0, f(0.0)?);
    let mut bracket = None;
    if prev.1.abs() <= zero {
        bracket = Some((0.0, 0.0));
    }
    for i in 1..=DOUBLE_SAMPLES {
        if bracket.is_some() {
            break;
        }
        let a = PI * i as f64 / DOUBLE_SAMPLES as f64;
        let v = f(a)?;
        if v.abs() <= zero {
            bracket = Some((a, a));
        } else if (v > 0.0) != (prev.1 > 0.0) {
            bracket = Some((prev.0, a));
        }
        prev = (a, v);
    }
    let (mut a, mut b) = bracket.ok_or_else(|| Error::Numerical("no sign change over the half-turn".into()))?;
    let mut fa = f(a)?;
    while b - a > 1e-10 {
        let m = 0.5 * (a + b);
        let fm = f(m)?;
        if fm.abs() <= zero {
            a = m;
            b = m;
            break;
        }
        if (fm > 0.0) == (fa > 0.0) {
            a = m;
            fa = fm;
        } else {
            b = m;
        }
    }
    let angle = 0.5 * (a + b);
    let line = line_at(angle)?;
    let hp = [HalfPlane { normal: line.normal, offset: line.offset }];
    Ok(DoubleBisection {
        line,
        angle,
        fractions: [area_within(r1, &hp)? / r1.area(), area_within(r2, &hp)? / a2],
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StretchReport {
    pub factor: f64,
    pub length_before: f64,
    pub length_after: f64,
    /// `½∫ r² dθ` swept by the curves before and after.
    pub area_before: f64,
    pub area_after: f64,
    /// Largest `|dr/ds|` seen on the curves.
    pub max_radial_slope: f64,
}

/// Image of `p` under `(r, θ) ↦ (r, kθ)` about `center`, angles measured
/// counterclockwise from `axis`.
pub fn stretch_point(p: Vec2, center: Vec2, axis: Vec2, k: f64) -> Vec2 {
    let d = p - center;
    let th = axis.cross(d).atan2(axis.dot(d));
    center + axis.normalized().rotate(k * th) * d.norm()
}

/// Lengths and swept areas of curves before and after the angular stretch.
/// The curves must lie in the sector `0 ≤ θ ≤ π/k`.
pub fn angular_stretch(curves: &[Curve], center: Vec2, axis: Vec2, k: f64) -> Result<StretchReport> {
    if !(k >= 1.0) {
        return domain(format!("stretch factor {k} below 1"));
    }
    let axis = axis.normalized();
    let scale = curves.iter().map(|c| (c.p - center).norm().max((c.q - center).norm())).fold(0.0, f64::max);
    let tol = 1e-9;
    let mut slope: f64 = 0.0;
    for c in curves {
        for p in c.polyline(32) {
            let d = p - center;
            if d.norm() <= 1e-12 * scale {
                continue;
            }
            let th = axis.cross(d).atan2(axis.dot(d));
            if th < -tol || th > PI / k + tol {
                return domain(format!("point at angle {th} leaves the sector of width π/{k}"));
            }
        }
    }
    let cfg = QuadratureConfig { abs_tol: 1e-15 * scale.max(1e-300), rel_tol: 1e-13, max_intervals: 4000 };
    let (mut lb, mut la, mut ab, mut aa) = (0.0, 0.0, 0.0, 0.0);
    for c in curves {
        let len = c.length();
        if len == 0.0 {
            continue;
        }
        // dr/ds = d·T/r and r dθ/ds = d×T/r
        let parts = |s: f64| {
            let d = c.point(s) - center;
            let t = c.tangent(s);
            let r = d.norm();
            if r == 0.0 {
                (0.0, 0.0, 0.0)
            } else {
                (d.dot(t) / r, d.cross(t) / r, r)
            }
        };
        for i in 1..64 {
            slope = slope.max(parts(len * i as f64 / 64.0).0.abs());
        }
        lb += len;
        la += integrate(
            |s| {
                let (dr, rt, _) = parts(s);
                (dr * dr + k * k * rt * rt).sqrt()
            },
            0.0,
            len,
            &cfg,
        )?
        .value;
        ab += 0.5 * c.cross_integral(center);
        aa += integrate(
            |s| {
                let (_, rt, r) = parts(s);
                0.5 * r * k * rt
            },
            0.0,
            len,
            &QuadratureConfig { abs_tol: 1e-15 * scale * scale, ..cfg },
        )?
        .value;
    }
    Ok(StretchReport { factor: k, length_before: lb, length_after: la, area_before: ab, area_after: aa, max_radial_slope: slope })
}

/// One of the four quarters and what stretching it produces.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuarterChoice {
    /// Sides `(s₁, s₂)` of the first and second line kept.
    pub sides: [i8; 2],
    pub second_line: BisectionLine,
    pub quarter_area: f64,
    pub quarter_boundary: f64,
    pub stretch: StretchReport,
    pub perimeter_after: f64,
    pub area_after: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Certificate {
    pub area_before: f64,
    pub area_after: f64,
    pub perimeter_before: f64,
    pub perimeter_after: f64,
    /// The perimeter decreased by more than `1e-9` relative.
    pub strict: bool,
    pub first_line: BisectionLine,
    /// The quarter achieving `perimeter_after`.
    pub best: QuarterChoice,
    pub choices: Vec<QuarterChoice>,
    /// Some boundary segment lies along a cutting line.
    pub boundary_on_line: bool,
}

/// Run bisect, halve, bisect, quarter, stretch ×2 and reflect for each of
/// the four quarters, keeping the one with least resulting perimeter.
pub fn symmetrize_certificate(region: &PlanarRegion) -> Result<Certificate> {
    let e1 = Vec2::new(1.0, 0.0);
    let e2 = Vec2::new(0.0, 1.0);
    let centroid = region.centroid()?;
    let first = bisect_single(region, e1, Some(centroid))?;
    let mut choices = Vec::new();
    let mut on_line = first.boundary_on_line;
    for s1 in [1i8, -1] {
        let h1 = HalfPlane { normal: e1 * s1 as f64, offset: s1 as f64 * first.offset };
        let second = bisect_within(region, &[h1], e2, centroid)?;
        on_line |= second.boundary_on_line;
        for s2 in [1i8, -1] {
            let h2 = HalfPlane { normal: e2 * s2 as f64, offset: s2 as f64 * second.offset };
            let pieces = clipped_pieces(region, &[h1, h2]);
            let o = Vec2::new(first.offset, second.offset);
            let quarter_area = 0.5 * pieces.iter().map(|c| c.cross_integral(o)).sum::<f64>();
            let (a, b) = (e1 * s1 as f64, e2 * s2 as f64);
            let axis = if a.cross(b) > 0.0 { a } else { b };
            let stretch = angular_stretch(&pieces, o, axis, 2.0)?;
            choices.push(QuarterChoice {
                sides: [s1, s2],
                second_line: second,
                quarter_area,
                quarter_boundary: stretch.length_before,
                stretch,
                perimeter_after: 2.0 * stretch.length_after,
                area_after: 2.0 * stretch.area_after,
            });
        }
    }
    let best = *choices
        .iter()
        .min_by(|x, y| x.perimeter_after.total_cmp(&y.perimeter_after))
        .expect("four quarters");
    let p = region.perimeter();
    Ok(Certificate {
        area_before: region.area(),
        area_after: best.area_after,
        perimeter_before: p,
        perimeter_after: best.perimeter_after,
        strict: best.perimeter_after < p * (1.0 - 1e-9),
        first_line: first,
        best,
        choices,
        boundary_on_line: on_line,
    })
}
