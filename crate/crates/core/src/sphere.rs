//! Measures of balls, spheres, polar caps and zones in ℝⁿ.
//!
//! Everything here is axially symmetric: a cap or zone is described by polar
//! angles measured from a fixed axis. Sin-power integrals have two independent
//! evaluation paths, the integer-exponent reduction formula
//! ([`sin_power_integral`]) and adaptive quadrature
//! ([`sin_power_integral_adaptive`]), so downstream numbers can be audited.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{domain, Result};
use crate::quadrature::{self, fixed_gl32};

/// Slack allowed on angle arguments before they are rejected as out of range.
const ANGLE_SLACK: f64 = 1e-12;

/// Ambient dimension `n ≥ 3`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "u32", into = "u32")]
pub struct Dimension(u32);

impl Dimension {
    pub fn new(n: u32) -> Result<Self> {
        if n < 3 {
            return domain(format!("dimension must be at least 3, got {n}"));
        }
        Ok(Self(n))
    }

    pub fn get(self) -> u32 {
        self.0
    }

    pub fn as_f64(self) -> f64 {
        self.0 as f64
    }

    /// `n` as an `i32` exponent.
    pub fn exp(self) -> i32 {
        self.0 as i32
    }
}

impl TryFrom<u32> for Dimension {
    type Error = crate::Error;
    fn try_from(n: u32) -> Result<Self> {
        Self::new(n)
    }
}

impl From<Dimension> for u32 {
    fn from(d: Dimension) -> u32 {
        d.0
    }
}

impl std::fmt::Display for Dimension {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Volume `α_k` of the unit `k`-ball, by the recursion `α_k = α_{k-2}·2π/k`
/// from `α_1 = 2`, `α_2 = π`.
pub fn unit_ball_volume(k: u32) -> Result<f64> {
    if k < 1 {
        return domain("unit ball volume needs k >= 1");
    }
    let mut a = if k % 2 == 1 { 2.0 } else { PI };
    let mut j = if k % 2 == 1 { 1 } else { 2 };
    while j < k {
        j += 2;
        a *= 2.0 * PI / j as f64;
    }
    Ok(a)
}

/// `α_k` for `k ≥ 1` known statically valid.
pub(crate) fn alpha(k: u32) -> f64 {
    unit_ball_volume(k).expect("k >= 1")
}

/// Measure `k·α_k·r^{k-1}` of the round `(k-1)`-sphere of radius `r` in ℝᵏ.
pub fn sphere_area(k: u32, r: f64) -> Result<f64> {
    if k < 1 {
        return domain("sphere area needs k >= 1");
    }
    if !(r > 0.0) {
        return domain(format!("sphere radius must be positive, got {r}"));
    }
    Ok(k as f64 * alpha(k) * r.powi(k as i32 - 1))
}

/// Volume of the ball of radius `r` in dimension `n`.
pub fn ball_volume(n: Dimension, r: f64) -> f64 {
    alpha(n.get()) * r.powi(n.exp())
}

/// Radius of the `n`-ball of volume `v`.
pub fn ball_radius(n: Dimension, v: f64) -> f64 {
    (v / alpha(n.get())).powf(1.0 / n.as_f64())
}

fn check_angle(name: &str, t: f64) -> Result<f64> {
    if !t.is_finite() || t < -ANGLE_SLACK || t > PI + ANGLE_SLACK {
        return domain(format!("{name} = {t} is outside [0, π]"));
    }
    Ok(t.clamp(0.0, PI))
}

fn check_interval(a: f64, b: f64) -> Result<(f64, f64)> {
    let a = check_angle("lower angle", a)?;
    let b = check_angle("upper angle", b)?;
    if a > b {
        return domain(format!("reversed angle interval [{a}, {b}]"));
    }
    Ok((a, b))
}

/// `∫₀ᵗ sinᵏ` by the reduction formula
/// `F_k = -sin^{k-1} t cos t / k + (k-1)/k · F_{k-2}`.
fn sin_power_antiderivative(k: u32, t: f64) -> f64 {
    let (s, c) = t.sin_cos();
    let mut f = if k % 2 == 0 {
        t
    } else {
        2.0 * (0.5 * t).sin().powi(2)
    };
    let mut j = if k % 2 == 0 { 0 } else { 1 };
    while j < k {
        j += 2;
        let jf = j as f64;
        f = -s.powi(j as i32 - 1) * c / jf + (jf - 1.0) / jf * f;
    }
    f
}

/// `∫_a^b sinᵏ(t) dt` for `0 ≤ a ≤ b ≤ π`, in closed form.
///
/// Short intervals (width ≤ 1/2) are evaluated with a fixed 32-point
/// Gauss-Legendre rule instead, where the antiderivative difference would
/// cancel; the integrand is entire, so the rule is exact to roundoff there.
pub fn sin_power_integral(k: u32, a: f64, b: f64) -> Result<f64> {
    let (a, b) = check_interval(a, b)?;
    Ok(sin_power_integral_unchecked(k, a, b))
}

pub(crate) fn sin_power_integral_unchecked(k: u32, a: f64, b: f64) -> f64 {
    if b - a <= 0.5 {
        fixed_gl32(|t| t.sin().powi(k as i32), a, b)
    } else {
        sin_power_antiderivative(k, b) - sin_power_antiderivative(k, a)
    }
}

/// Adaptive-quadrature evaluation of `∫_a^b sinᵏ`, independent of the
/// reduction formula.
pub fn sin_power_integral_adaptive(k: u32, a: f64, b: f64) -> Result<f64> {
    let (a, b) = check_interval(a, b)?;
    quadrature::quad(|t| t.sin().powi(k as i32), a, b)
}

/// Volume of the polar cap `{x ∈ B(0, r) : angle(x, axis) ≤ θ}` of the `n`-ball,
/// i.e. the ball cut by the hyperplane at distance `r cos θ` from the centre.
///
/// Slab decomposition gives `α_{n-1} rⁿ ∫₀^θ sinⁿ`.
pub fn cap_volume(n: Dimension, r: f64, theta: f64) -> Result<f64> {
    if !(r > 0.0) {
        return domain(format!("cap radius must be positive, got {r}"));
    }
    let theta = check_angle("cap angle", theta)?;
    Ok(alpha(n.get() - 1) * r.powi(n.exp()) * sin_power_integral_unchecked(n.get(), 0.0, theta))
}

/// `(n-1)`-measure of the zone `t1 ≤ polar angle ≤ t2` on the unit sphere in ℝⁿ.
pub fn zone_area(n: Dimension, t1: f64, t2: f64) -> Result<f64> {
    let (a, b) = check_interval(t1, t2)?;
    Ok(zone_area_unchecked(n, a, b))
}

pub(crate) fn zone_area_unchecked(n: Dimension, a: f64, b: f64) -> f64 {
    (n.as_f64() - 1.0) * alpha(n.get() - 1) * sin_power_integral_unchecked(n.get() - 2, a, b)
}

/// Total measure `n·α_n` of the unit `(n-1)`-sphere.
pub fn unit_sphere_area(n: Dimension) -> f64 {
    n.as_f64() * alpha(n.get())
}

/// Volume and area of a spherical cap whose rim `(n-2)`-sphere has radius 1
/// and whose polar half-angle is `θ ∈ [0, π)`.
///
/// The sphere radius is `1/sin θ`, which diverges as the cap flattens; the
/// small-angle branch integrates the rescaled integrand `(sin(θs)/sin θ)^k`
/// on `s ∈ [0, 1]` so the flat limit (a unit `(n-1)`-disk, zero volume) is
/// reached continuously with no overflow.
pub fn cap_with_unit_rim(n: Dimension, theta: f64) -> Result<(f64, f64)> {
    let theta = check_angle("cap angle", theta)?;
    if theta >= PI {
        return domain("a cap with unit rim cannot close up (θ = π)");
    }
    let k = n.get();
    let a1 = alpha(k - 1);
    if theta <= 0.5 {
        let st = theta.sin();
        let ratio = |s: f64| {
            if theta < 1e-4 {
                s * (1.0 + theta * theta * (1.0 - s * s) / 6.0)
            } else {
                (theta * s).sin() / st
            }
        };
        let scale = if theta < 1e-8 { 1.0 } else { theta / st };
        let vol_int = fixed_gl32(|s| ratio(s).powi(k as i32), 0.0, 1.0);
        let area_int = fixed_gl32(|s| ratio(s).powi(k as i32 - 2), 0.0, 1.0);
        // with t = θs and R = 1/sin θ: Rⁿ ∫₀^θ sinⁿ t dt = θ ∫₀¹ ratioⁿ ds
        let volume = a1 * theta * vol_int;
        // area = (n-1) a1 R^{n-1} ∫₀^θ sin^{n-2} = (n-1) a1 (θ/sinθ) ∫₀¹ ratio^{n-2}
        let area = (k as f64 - 1.0) * a1 * scale * area_int;
        Ok((volume, area))
    } else {
        let r = 1.0 / theta.sin();
        let volume = a1 * r.powi(k as i32) * sin_power_integral_unchecked(k, 0.0, theta);
        let area = (k as f64 - 1.0)
            * a1
            * r.powi(k as i32 - 1)
            * sin_power_integral_unchecked(k - 2, 0.0, theta);
        Ok((volume, area))
    }
}
