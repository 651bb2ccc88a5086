//! Planar circular arcs and segments with a signed-curvature representation.
//!
//! A [`Curve`] runs from `p` to `q` turning left when `kappa > 0`; `kappa == 0`
//! is a straight segment. Arcs are always minor arcs (turning at most π), so
//! every position and tangent is a smooth function of arclength with no
//! special case at zero curvature.

use std::ops::{Add, AddAssign, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};

use crate::error::{domain, Result};
use crate::quadrature::{self, QuadratureConfig};

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
#[serde(from = "[f64; 2]", into = "[f64; 2]")]
pub struct Vec2 {
    pub x: f64,
    pub y: f64,
}

impl Vec2 {
    pub const fn new(x: f64, y: f64) -> Self {
        Self { x, y }
    }

    pub fn from_angle(theta: f64) -> Self {
        let (s, c) = theta.sin_cos();
        Self::new(c, s)
    }

    pub fn dot(self, o: Self) -> f64 {
        self.x * o.x + self.y * o.y
    }

    pub fn cross(self, o: Self) -> f64 {
        self.x * o.y - self.y * o.x
    }

    pub fn norm(self) -> f64 {
        self.x.hypot(self.y)
    }

    pub fn normalized(self) -> Self {
        self * (1.0 / self.norm())
    }

    /// Counterclockwise quarter turn.
    pub fn perp(self) -> Self {
        Self::new(-self.y, self.x)
    }

    pub fn rotate(self, theta: f64) -> Self {
        let (s, c) = theta.sin_cos();
        Self::new(c * self.x - s * self.y, s * self.x + c * self.y)
    }

    pub fn angle(self) -> f64 {
        self.y.atan2(self.x)
    }

    pub fn dist(self, o: Self) -> f64 {
        (self - o).norm()
    }

    pub fn is_finite(self) -> bool {
        self.x.is_finite() && self.y.is_finite()
    }
}

impl Add for Vec2 {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        Self::new(self.x + o.x, self.y + o.y)
    }
}

impl AddAssign for Vec2 {
    fn add_assign(&mut self, o: Self) {
        self.x += o.x;
        self.y += o.y;
    }
}

impl Sub for Vec2 {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        Self::new(self.x - o.x, self.y - o.y)
    }
}

impl Mul<f64> for Vec2 {
    type Output = Self;
    fn mul(self, s: f64) -> Self {
        Self::new(self.x * s, self.y * s)
    }
}

impl Neg for Vec2 {
    type Output = Self;
    fn neg(self) -> Self {
        Self::new(-self.x, -self.y)
    }
}

impl From<[f64; 2]> for Vec2 {
    fn from(a: [f64; 2]) -> Self {
        Self::new(a[0], a[1])
    }
}

impl From<Vec2> for [f64; 2] {
    fn from(v: Vec2) -> Self {
        [v.x, v.y]
    }
}

/// `sin(x)/x`, continuous at 0.
pub fn sinc(x: f64) -> f64 {
    if x.abs() < 1e-4 {
        let x2 = x * x;
        1.0 - x2 / 6.0 + x2 * x2 / 120.0
    } else {
        x.sin() / x
    }
}

/// Circular arc or segment from `p` to `q` with signed curvature `kappa`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Curve {
    pub p: Vec2,
    pub q: Vec2,
    pub kappa: f64,
}

impl Curve {
    pub fn new(p: Vec2, q: Vec2, kappa: f64) -> Self {
        Self { p, q, kappa }
    }

    pub fn segment(p: Vec2, q: Vec2) -> Self {
        Self::new(p, q, 0.0)
    }

    /// Minor arc from `p` to `q` on the circle centred at `c`.
    /// The sign of the curvature follows the side of the chord the centre is on.
    pub fn arc_with_center(p: Vec2, q: Vec2, c: Vec2) -> Self {
        let r = 0.5 * (p.dist(c) + q.dist(c));
        let side = (q - p).cross(c - p);
        let k = if side >= 0.0 { 1.0 / r } else { -1.0 / r };
        Self::new(p, q, k)
    }

    pub fn is_segment(&self) -> bool {
        self.kappa == 0.0
    }

    pub fn chord(&self) -> f64 {
        self.p.dist(self.q)
    }

    /// `κL/2`; magnitude above 1 means no minor arc joins the endpoints.
    pub fn half_chord_ratio(&self) -> f64 {
        0.5 * self.kappa * self.chord()
    }

    /// Whether the endpoints and curvature describe a realizable minor arc.
    pub fn is_consistent(&self, tol: f64) -> bool {
        self.p.is_finite()
            && self.q.is_finite()
            && self.kappa.is_finite()
            && self.half_chord_ratio().abs() <= 1.0 + tol
    }

    /// Signed half of the turning angle.
    pub fn half_sweep(&self) -> f64 {
        self.half_chord_ratio().clamp(-1.0, 1.0).asin()
    }

    /// Total signed turning angle.
    pub fn sweep(&self) -> f64 {
        2.0 * self.half_sweep()
    }

    pub fn length(&self) -> f64 {
        let a = self.half_sweep();
        self.chord() / sinc(a)
    }

    fn chord_dir(&self) -> Vec2 {
        let d = self.q - self.p;
        let l = d.norm();
        if l == 0.0 {
            Vec2::new(1.0, 0.0)
        } else {
            d * (1.0 / l)
        }
    }

    pub fn start_tangent(&self) -> Vec2 {
        self.chord_dir().rotate(-self.half_sweep())
    }

    pub fn end_tangent(&self) -> Vec2 {
        self.chord_dir().rotate(self.half_sweep())
    }

    /// Position at arclength `s` from `p`.
    pub fn point(&self, s: f64) -> Vec2 {
        let t0 = self.start_tangent();
        let x = self.kappa * s;
        let h = 0.5 * x;
        self.p + t0 * (s * sinc(x)) + t0.perp() * (s * h.sin() * sinc(h))
    }

    /// Unit tangent at arclength `s`.
    pub fn tangent(&self, s: f64) -> Vec2 {
        self.start_tangent().rotate(self.kappa * s)
    }

    /// Position at fraction `u ∈ [0, 1]` of the length.
    pub fn point_at(&self, u: f64) -> Vec2 {
        if u >= 1.0 {
            return self.q;
        }
        self.point(u * self.length())
    }

    pub fn center(&self) -> Option<Vec2> {
        if self.kappa == 0.0 {
            None
        } else {
            Some(self.p + self.start_tangent().perp() * (1.0 / self.kappa))
        }
    }

    pub fn radius(&self) -> f64 {
        1.0 / self.kappa.abs()
    }

    pub fn reversed(&self) -> Self {
        Self::new(self.q, self.p, -self.kappa)
    }

    /// Split at arclength `s`.
    pub fn split(&self, s: f64) -> (Self, Self) {
        let m = self.point(s);
        (Self::new(self.p, m, self.kappa), Self::new(m, self.q, self.kappa))
    }

    /// Sub-curve between arclengths `s0 < s1`.
    pub fn sub(&self, s0: f64, s1: f64) -> Self {
        let a = if s0 <= 0.0 { self.p } else { self.point(s0) };
        let b = if s1 >= self.length() { self.q } else { self.point(s1) };
        Self::new(a, b, self.kappa)
    }

    /// Bounding box `(min, max)`, exact for arcs.
    pub fn bbox(&self) -> (Vec2, Vec2) {
        let mut lo = Vec2::new(self.p.x.min(self.q.x), self.p.y.min(self.q.y));
        let mut hi = Vec2::new(self.p.x.max(self.q.x), self.p.y.max(self.q.y));
        for s in self.tangent_extrema(Vec2::new(1.0, 0.0))
            .into_iter()
            .chain(self.tangent_extrema(Vec2::new(0.0, 1.0)))
        {
            let m = self.point(s);
            lo = Vec2::new(lo.x.min(m.x), lo.y.min(m.y));
            hi = Vec2::new(hi.x.max(m.x), hi.y.max(m.y));
        }
        (lo, hi)
    }

    /// Interior arclengths where the tangent is perpendicular to `n`,
    /// i.e. where `n·P(s)` is extremal.
    pub fn tangent_extrema(&self, n: Vec2) -> Vec<f64> {
        if self.kappa == 0.0 {
            return Vec::new();
        }
        let len = self.length();
        let th0 = self.start_tangent().angle();
        let target = n.angle() + std::f64::consts::FRAC_PI_2;
        let mut out = Vec::new();
        // n·T(s) = cos(th0 + κs − angle(n)) vanishes where th0 + κs ≡ angle(n) + π/2 (mod π)
        for m in -3..=3 {
            let s = (target + m as f64 * std::f64::consts::PI - th0) / self.kappa;
            if s > 0.0 && s < len {
                out.push(s);
            }
        }
        out.sort_by(f64::total_cmp);
        out
    }

    /// Arclengths where `n·P(s) = c`, each bracketed on a monotone piece and
    /// bisected to roundoff.
    pub fn line_crossings(&self, n: Vec2, c: f64) -> Vec<f64> {
        let len = self.length();
        let g = |s: f64| n.dot(self.point(s)) - c;
        let mut knots = vec![0.0];
        knots.extend(self.tangent_extrema(n));
        knots.push(len);
        let mut out = Vec::new();
        for w in knots.windows(2) {
            let (mut a, mut b) = (w[0], w[1]);
            let (mut ga, gb) = (g(a), g(b));
            if ga == 0.0 {
                out.push(a);
                continue;
            }
            if ga * gb > 0.0 {
                continue;
            }
            if gb == 0.0 {
                if w[1] == len {
                    out.push(b);
                }
                continue;
            }
            for _ in 0..200 {
                let m = 0.5 * (a + b);
                if m <= a || m >= b {
                    break;
                }
                let gm = g(m);
                if gm == 0.0 {
                    a = m;
                    b = m;
                    break;
                }
                if (gm > 0.0) == (ga > 0.0) {
                    a = m;
                    ga = gm;
                } else {
                    b = m;
                }
            }
            out.push(0.5 * (a + b));
        }
        out.dedup_by(|x, y| (*x - *y).abs() <= 1e-14 * len.max(1e-300));
        out
    }

    /// `∫ cross(P − o, dP)` along the curve, in closed form.
    ///
    /// Half of this summed over a closed counterclockwise loop is its area.
    pub fn cross_integral(&self, o: Vec2) -> f64 {
        let l = self.chord();
        let tri = (self.p - o).cross(self.q - self.p);
        if self.kappa == 0.0 || l == 0.0 {
            return tri;
        }
        let a = self.half_sweep().abs();
        let sa = a.sin();
        // (2a − sin 2a)/sin²a, the circular segment area over (L²/8)
        let g = if a < 1e-2 {
            let a2 = a * a;
            let num = a * a2 * (4.0 / 3.0 - a2 * (4.0 / 15.0 - a2 * 8.0 / 315.0));
            num / (sa * sa)
        } else {
            (2.0 * a - (2.0 * a).sin()) / (sa * sa)
        };
        let seg = l * l / 8.0 * g;
        tri + 2.0 * seg * self.kappa.signum()
    }

    /// `∫ f(P, T) ds` by adaptive quadrature.
    pub fn integrate<F: Fn(Vec2, Vec2) -> f64>(&self, f: F, scale: f64) -> Result<f64> {
        let len = self.length();
        if len == 0.0 {
            return Ok(0.0);
        }
        let cfg = QuadratureConfig {
            abs_tol: 1e-15 * scale * len,
            rel_tol: 1e-13,
            max_intervals: 4000,
        };
        quadrature::integrate(|s| f(self.point(s), self.tangent(s)), 0.0, len, &cfg)
            .map(|q| q.value)
    }

    /// Whether `x`, assumed to lie on the carrier circle or line, is on the curve.
    fn contains_carrier_point(&self, x: Vec2, tol: f64) -> bool {
        if x.dist(self.p) <= tol || x.dist(self.q) <= tol {
            return true;
        }
        let d = self.q - self.p;
        if self.kappa == 0.0 {
            let u = (x - self.p).dot(d);
            return u >= 0.0 && u <= d.dot(d);
        }
        // the minor arc bulges to the right of its chord when turning left
        let side = d.cross(x - self.p);
        side * self.kappa < 0.0
    }

    /// Points where the two curves meet, including shared endpoints.
    /// Overlapping collinear or co-circular pieces report their overlap ends.
    pub fn intersections(&self, other: &Curve, tol: f64) -> Vec<Vec2> {
        let flat = |c: &Curve| c.kappa == 0.0 || (c.kappa * c.chord()).abs() < 1e-9;
        let mut cand: Vec<Vec2> = Vec::new();
        match (flat(self), flat(other)) {
            (true, true) => {
                let d1 = self.q - self.p;
                let d2 = other.q - other.p;
                let den = d1.cross(d2);
                if den.abs() <= 1e-14 * d1.norm() * d2.norm() {
                    // parallel: overlap only if collinear
                    if d1.cross(other.p - self.p).abs() <= tol * d1.norm() {
                        cand.extend([self.p, self.q, other.p, other.q]);
                    }
                } else {
                    let t = (other.p - self.p).cross(d2) / den;
                    cand.push(self.p + d1 * t);
                }
            }
            (true, false) => cand = line_circle(self, other),
            (false, true) => cand = line_circle(other, self),
            (false, false) => {
                let (c1, r1) = (self.center().unwrap(), self.radius());
                let (c2, r2) = (other.center().unwrap(), other.radius());
                let d = c1.dist(c2);
                if d <= tol && (r1 - r2).abs() <= tol {
                    cand.extend([self.p, self.q, other.p, other.q]);
                } else if d > 0.0 && d <= r1 + r2 + tol && d >= (r1 - r2).abs() - tol {
                    let a = (d * d + r1 * r1 - r2 * r2) / (2.0 * d);
                    let h = (r1 * r1 - a * a).max(0.0).sqrt();
                    let e = (c2 - c1) * (1.0 / d);
                    let m = c1 + e * a;
                    cand.push(m + e.perp() * h);
                    if h > 0.0 {
                        cand.push(m - e.perp() * h);
                    }
                }
            }
        }
        cand.into_iter()
            .filter(|x| self.contains_carrier_point(*x, tol) && other.contains_carrier_point(*x, tol))
            .collect()
    }

    /// Points sampled uniformly in arclength, `k + 1` of them including both ends.
    pub fn polyline(&self, k: usize) -> Vec<Vec2> {
        let len = self.length();
        let mut v: Vec<Vec2> = (0..k).map(|i| self.point(len * i as f64 / k as f64)).collect();
        v.push(self.q);
        v
    }
}

fn line_circle(seg: &Curve, arc: &Curve) -> Vec<Vec2> {
    let c = arc.center().unwrap();
    let r = arc.radius();
    let d = (seg.q - seg.p).normalized();
    let f = seg.p - c;
    let b = f.dot(d);
    let disc = b * b - (f.dot(f) - r * r);
    if disc < -1e-12 * r * r {
        return Vec::new();
    }
    let s = disc.max(0.0).sqrt();
    vec![seg.p + d * (-b - s), seg.p + d * (-b + s)]
}

/// A curve given by its centre, radius and signed sweep starting at polar angle `a0`.
pub fn arc_from_center(c: Vec2, r: f64, a0: f64, sweep: f64) -> Result<Curve> {
    if !(r > 0.0) || sweep.abs() > std::f64::consts::PI + 1e-12 {
        return domain(format!("arc radius {r} / sweep {sweep} not a minor arc"));
    }
    let p = c + Vec2::from_angle(a0) * r;
    let q = c + Vec2::from_angle(a0 + sweep) * r;
    let k = if sweep >= 0.0 { 1.0 / r } else { -1.0 / r };
    Ok(Curve::new(p, q, k))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use std::f64::consts::PI;

    fn close(a: Vec2, b: Vec2, tol: f64) -> bool {
        a.dist(b) < tol
    }

    #[test]
    fn quarter_arc_geometry() {
        let c = arc_from_center(Vec2::new(0.0, 0.0), 2.0, 0.0, PI / 2.0).unwrap();
        assert!(close(c.q, Vec2::new(0.0, 2.0), 1e-15));
        assert!((c.length() - PI).abs() < 1e-14);
        assert!(close(c.center().unwrap(), Vec2::default(), 1e-14));
        assert!(close(c.start_tangent(), Vec2::new(0.0, 1.0), 1e-15));
        assert!(close(c.end_tangent(), Vec2::new(-1.0, 0.0), 1e-15));
        assert!(close(c.point(c.length() / 2.0), Vec2::from_angle(PI / 4.0) * 2.0, 1e-14));
    }

    #[test]
    fn half_circle_is_allowed() {
        let c = arc_from_center(Vec2::default(), 1.0, 0.0, PI).unwrap();
        assert!(c.is_consistent(1e-12));
        assert!((c.length() - PI).abs() < 1e-7);
        assert!((c.cross_integral(Vec2::default()) - PI).abs() < 1e-12);
    }

    #[test]
    fn segment_limit_is_continuous() {
        let p = Vec2::new(0.3, -1.0);
        let q = Vec2::new(2.0, 0.5);
        let s = Curve::segment(p, q);
        let a = Curve::new(p, q, 1e-9);
        for u in [0.0, 0.3, 0.7, 1.0] {
            assert!(close(s.point_at(u), a.point_at(u), 1e-8));
        }
        assert!((s.cross_integral(Vec2::default()) - a.cross_integral(Vec2::default())).abs() < 1e-8);
    }

    #[test]
    fn crossings_of_a_half_circle() {
        let c = arc_from_center(Vec2::default(), 1.0, 0.0, PI).unwrap();
        // y = 0.5 is crossed twice, on either side of the top
        let s = c.line_crossings(Vec2::new(0.0, 1.0), 0.5);
        assert_eq!(s.len(), 2);
        assert!((s[0] - PI / 6.0).abs() < 1e-12);
        assert!((s[1] - 5.0 * PI / 6.0).abs() < 1e-12);
        assert!(c.line_crossings(Vec2::new(0.0, 1.0), 1.5).is_empty());
    }

    #[test]
    fn bbox_reaches_the_top_of_an_arc() {
        let c = arc_from_center(Vec2::default(), 1.0, 0.2, 2.5).unwrap();
        let (_, hi) = c.bbox();
        assert!((hi.y - 1.0).abs() < 1e-14);
    }

    #[test]
    fn intersections_of_arcs_and_segments() {
        let a = arc_from_center(Vec2::default(), 1.0, 0.0, PI).unwrap();
        let s = Curve::segment(Vec2::new(-2.0, 0.5), Vec2::new(2.0, 0.5));
        assert_eq!(a.intersections(&s, 1e-12).len(), 2);
        let b = arc_from_center(Vec2::new(1.0, 0.0), 1.0, 0.0, PI).unwrap();
        let x = a.intersections(&b, 1e-12);
        assert_eq!(x.len(), 1, "{x:?}");
        assert!(close(x[0], Vec2::new(0.5, 0.75f64.sqrt()), 1e-12));
        let far = Curve::segment(Vec2::new(5.0, 0.0), Vec2::new(6.0, 1.0));
        assert!(a.intersections(&far, 1e-12).is_empty());
    }

    proptest! {
        #[test]
        fn reversal_negates_cross_integral(
            px in -3.0..3.0f64, py in -3.0..3.0f64, qx in -3.0..3.0f64, qy in -3.0..3.0f64,
            u in -0.99..0.99f64,
        ) {
            let p = Vec2::new(px, py);
            let q = Vec2::new(qx, qy);
            prop_assume!(p.dist(q) > 1e-3);
            let c = Curve::new(p, q, 2.0 * u / p.dist(q));
            let o = Vec2::new(0.1, -0.4);
            let a = c.cross_integral(o);
            let b = c.reversed().cross_integral(o);
            prop_assert!((a + b).abs() < 1e-10 * (1.0 + a.abs()));
            // quadrature of the same integrand
            let quad = c.integrate(|x, t| (x - o).cross(t), 1.0).unwrap();
            prop_assert!((a - quad).abs() < 1e-10 * (1.0 + a.abs()));
            prop_assert!(close(c.point(c.length()), q, 1e-10 * (1.0 + q.norm())));
        }
    }
}
