//! Relative area: a competitor's weighted area divided by that of the
//! standard bubble with the same volumes and weights.
//!
//! Pooling every volume pair and weight triple this way turns a family of
//! constrained problems into the single question of whether `μ < 1` is ever
//! possible. Because `μ` is invariant under dilation and weight scaling, the
//! instances can be normalized to `max V = 1`, `max w = 1`.

use serde::{Deserialize, Serialize};

use rayon::prelude::*;

use crate::error::{domain, Error, Result};
use crate::perturb::{PerturbationFamily, PerturbationKind};
use crate::profile::{AreaBreakdown, GeneratingNetwork, RegionLabel, VolumePair, WeightClass, WeightTriple};
use crate::sphere::Dimension;
use crate::standard::{construct, StandardBubbleGeometry};

/// Relative volume tolerance for deciding which class a competitor belongs to.
pub const CLASS_TOL: f64 = 1e-6;

/// A point `(V₁, V₂, w₀, w₁, w₂, n)` of the unification space.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ProblemInstance {
    pub volumes: VolumePair,
    pub weights: WeightTriple,
    pub dimension: Dimension,
}

impl ProblemInstance {
    pub fn new(volumes: VolumePair, weights: WeightTriple, dimension: Dimension) -> Self {
        Self { volumes, weights, dimension }
    }

    /// Convenience constructor from raw numbers.
    pub fn from_parts(n: u32, v1: f64, v2: f64, w0: f64, w1: f64, w2: f64) -> Result<Self> {
        Ok(Self::new(VolumePair::new(v1, v2)?, WeightTriple::new(w0, w1, w2)?, Dimension::new(n)?))
    }

    /// Both volumes positive and the weights strictly triangular.
    pub fn is_interior(&self) -> bool {
        self.volumes.v1 > 0.0 && self.volumes.v2 > 0.0 && self.weights.classify() == WeightClass::Strict
    }
}

/// A normalized instance with the maps that produced it.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Normalized {
    pub instance: ProblemInstance,
    /// Length scale `λ = (max V)^{-1/n}` taking competitors to the normalized class.
    pub dilation: f64,
    /// Factor `1/max w` applied to the weights.
    pub weight_scale: f64,
}

/// The representative of `alpha` with largest volume 1 and largest weight 1.
pub fn normalize(alpha: &ProblemInstance) -> Normalized {
    let vmax = alpha.volumes.max();
    let wmax = alpha.weights.max();
    let n = alpha.dimension.as_f64();
    let volumes = VolumePair { v1: alpha.volumes.v1 / vmax, v2: alpha.volumes.v2 / vmax };
    let weights = alpha.weights.scaled(1.0 / wmax);
    Normalized {
        instance: ProblemInstance { volumes, weights, dimension: alpha.dimension },
        dilation: vmax.powf(-1.0 / n),
        weight_scale: 1.0 / wmax,
    }
}

/// Competitor and standard values of one kind of quantity.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PiecePair {
    pub competitor: f64,
    pub standard: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PerPiece {
    pub a_ext1: PiecePair,
    pub a_ext2: PiecePair,
    pub a_int: PiecePair,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RelativeAreaReport {
    pub q_s: f64,
    pub q_m: f64,
    pub mu: f64,
    pub per_piece: PerPiece,
    pub measured_volumes: [f64; 2],
}

/// Measured `(V₁, V₂)` of a network, checked against `alpha`.
pub fn class_volumes(net: &GeneratingNetwork, alpha: &ProblemInstance) -> Result<[f64; 2]> {
    let v1 = net.volume(RegionLabel::B1)?;
    let v2 = net.volume(RegionLabel::B2)?;
    let e = alpha.volumes;
    let tol = CLASS_TOL * e.max();
    if (v1 - e.v1).abs() > tol || (v2 - e.v2).abs() > tol {
        return Err(Error::ClassMismatch {
            measured_v1: v1,
            measured_v2: v2,
            expected_v1: e.v1,
            expected_v2: e.v2,
        });
    }
    Ok([v1, v2])
}

/// `μ(S) = Q(S)/Q(M)` for a valid competitor of the class `alpha`.
pub fn relative_area(net: &GeneratingNetwork, alpha: &ProblemInstance) -> Result<RelativeAreaReport> {
    if net.dimension != alpha.dimension {
        return domain(format!(
            "network lives in dimension {} but the instance in {}",
            net.dimension, alpha.dimension
        ));
    }
    net.ensure_valid()?;
    let vols = class_volumes(net, alpha)?;
    let m = construct(alpha)?;
    Ok(report(net.weighted_area(&alpha.weights)?, &m, vols))
}

/// `μ` against a precomputed standard bubble, skipping validation and the
/// class check.
pub fn relative_area_against(net: &GeneratingNetwork, m: &StandardBubbleGeometry) -> Result<RelativeAreaReport> {
    let vols = [net.volume(RegionLabel::B1)?, net.volume(RegionLabel::B2)?];
    Ok(report(net.weighted_area(&m.weights)?, m, vols))
}

fn report(s: AreaBreakdown, m: &StandardBubbleGeometry, vols: [f64; 2]) -> RelativeAreaReport {
    let mm = m.measured;
    let pair = |c, s| PiecePair { competitor: c, standard: s };
    RelativeAreaReport {
        q_s: s.q,
        q_m: mm.q,
        mu: s.q / mm.q,
        per_piece: PerPiece {
            a_ext1: pair(s.a_ext1, mm.a_ext1),
            a_ext2: pair(s.a_ext2, mm.a_ext2),
            a_int: pair(s.a_int, mm.a_int),
        },
        measured_volumes: vols,
    }
}

fn interior(alpha: &ProblemInstance) -> Result<()> {
    if !alpha.is_interior() {
        return domain(format!(
            "first variations need an interior instance; weights are {} with volumes ({}, {})",
            alpha.weights.classify(),
            alpha.volumes.v1,
            alpha.volumes.v2
        ));
    }
    Ok(())
}

fn q_of(alpha: &ProblemInstance) -> Result<f64> {
    Ok(construct(alpha)?.measured.q)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WeightVariation {
    /// Central difference of `Q(M)` in `wᵢ`.
    pub derivative: f64,
    /// Area of the piece weighted by `wᵢ`; equal to the derivative because
    /// the shape of `M` contributes nothing to first order.
    pub area: f64,
}

/// `∂Q(M)/∂wᵢ` by central differences, with the matching piece area.
pub fn first_variation_weight(alpha: &ProblemInstance, i: usize, h: f64) -> Result<WeightVariation> {
    interior(alpha)?;
    if i > 2 {
        return domain(format!("weight index {i} not in 0..=2"));
    }
    if !(h > 0.0) {
        return domain("step must be positive");
    }
    let at = |s: f64| -> Result<ProblemInstance> {
        let mut w = alpha.weights.as_array();
        w[i] += s;
        let a = ProblemInstance { weights: WeightTriple::new(w[0], w[1], w[2])?, ..*alpha };
        interior(&a)?;
        Ok(a)
    };
    let derivative = (q_of(&at(h)?)? - q_of(&at(-h)?)?) / (2.0 * h);
    let m = construct(alpha)?.measured;
    let area = [m.a_int, m.a_ext1, m.a_ext2][i];
    Ok(WeightVariation { derivative, area })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct VolumeVariation {
    /// Central difference of `Q(M)` in `Vᵢ`.
    pub derivative: f64,
    /// Lagrange multiplier `pᵢ = wᵢ·H(extᵢ)`.
    pub pressure: f64,
    /// `p₁ − p₂`.
    pub pressure_difference: f64,
    /// `w₀·H(interface)` signed by the direction the interface bends; equals
    /// the pressure difference.
    pub interface_term: f64,
}

/// `∂Q(M)/∂Vᵢ` by central differences, with the pressure interpretation.
pub fn first_variation_volume(alpha: &ProblemInstance, i: usize, h: f64) -> Result<VolumeVariation> {
    if i != 1 && i != 2 {
        return domain(format!("volume index {i} not in {{1, 2}}"));
    }
    if !(h > 0.0) {
        return domain("step must be positive");
    }
    let single = alpha.volumes.v1 == 0.0 || alpha.volumes.v2 == 0.0;
    if !single {
        interior(alpha)?;
    }
    let at = |s: f64| -> Result<ProblemInstance> {
        let mut v = [alpha.volumes.v1, alpha.volumes.v2];
        v[i - 1] += s;
        if v[i - 1] <= 0.0 {
            return domain("volume step leaves the class of positive volumes");
        }
        let a = ProblemInstance { volumes: VolumePair::new(v[0], v[1])?, ..*alpha };
        if !single {
            interior(&a)?;
        }
        Ok(a)
    };
    let derivative = (q_of(&at(h)?)? - q_of(&at(-h)?)?) / (2.0 * h);
    let m = construct(alpha)?;
    let p = m.pressures();
    let n1 = alpha.dimension.as_f64() - 1.0;
    Ok(VolumeVariation {
        derivative,
        pressure: p[i - 1],
        pressure_difference: p[0] - p[1],
        interface_term: alpha.weights.w0 * n1 * m.curvatures[0],
    })
}

/// Grid over the normalized slice `V = (1, r)`, `w₂` fixed, and the
/// perturbation amplitudes to try at each cell.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepGrid {
    pub dimensions: Vec<u32>,
    pub ratios: Vec<f64>,
    pub w0: Vec<f64>,
    pub w1: Vec<f64>,
    pub w2: f64,
    pub epsilons: Vec<f64>,
    pub families: Vec<PerturbationKind>,
    pub volume_restoration: bool,
}

impl Default for SweepGrid {
    fn default() -> Self {
        let steps = vec![0.2, 0.4, 0.6, 0.8, 1.0];
        Self {
            dimensions: vec![3],
            ratios: steps.clone(),
            w0: steps.clone(),
            w1: steps,
            w2: 1.0,
            epsilons: vec![0.01, 0.03, 0.05],
            families: PerturbationKind::ALL.to_vec(),
            volume_restoration: true,
        }
    }
}

impl SweepGrid {
    pub fn instances(&self) -> Result<Vec<ProblemInstance>> {
        let mut out = Vec::new();
        for &n in &self.dimensions {
            for &r in &self.ratios {
                for &w0 in &self.w0 {
                    for &w1 in &self.w1 {
                        out.push(ProblemInstance::from_parts(n, 1.0, r, w0, w1, self.w2)?);
                    }
                }
            }
        }
        Ok(out)
    }
}

/// One `(instance, family, ε)` cell. `family` is `NONE` with `ε = 0` for the
/// standard bubble itself.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub n: u32,
    #[serde(rename = "V1")]
    pub v1: f64,
    #[serde(rename = "V2")]
    pub v2: f64,
    pub w0: f64,
    pub w1: f64,
    pub w2: f64,
    pub family: String,
    pub epsilon: f64,
    pub mu_min: Option<f64>,
    pub status: String,
}

/// Global minimum of `μ` over a sweep, and whether any competitor beat the
/// standard bubble.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SweepSummary {
    pub cells: usize,
    pub failures: usize,
    pub mu_min: f64,
    /// Some `μ < 1 − 1e-9` was found.
    pub below_one: bool,
}

/// `μ` of a competitor in the class of its own measured volumes.
pub fn relative_area_own_class(net: &GeneratingNetwork, weights: &WeightTriple) -> Result<RelativeAreaReport> {
    let v1 = net.volume(RegionLabel::B1)?;
    let v2 = net.volume(RegionLabel::B2)?;
    let alpha = ProblemInstance::new(VolumePair::new(v1, v2)?, *weights, net.dimension);
    relative_area(net, &alpha)
}

fn sweep_instance(alpha: &ProblemInstance, grid: &SweepGrid) -> Vec<SweepRow> {
    let row = |family: &str, epsilon: f64, r: Result<Option<f64>>| {
        let (mu_min, status) = match r {
            Ok(Some(mu)) => (Some(mu), "OK".to_string()),
            Ok(None) => (None, "SKIPPED".to_string()),
            Err(e) => (None, format!("ERROR: {e}")),
        };
        SweepRow {
            n: alpha.dimension.get(),
            v1: alpha.volumes.v1,
            v2: alpha.volumes.v2,
            w0: alpha.weights.w0,
            w1: alpha.weights.w1,
            w2: alpha.weights.w2,
            family: family.to_string(),
            epsilon,
            mu_min,
            status,
        }
    };
    let m = match construct(alpha) {
        Ok(m) => m,
        Err(e) => return vec![row("NONE", 0.0, Err(e))],
    };
    let mut rows = vec![row("NONE", 0.0, relative_area(&m.network(), alpha).map(|r| Some(r.mu)))];
    for &kind in &grid.families {
        for &eps in &grid.epsilons {
            let fam = PerturbationFamily { kind, amplitude: eps, volume_restoration: grid.volume_restoration };
            let r = fam.competitors(&m).and_then(|cs| {
                cs.iter().try_fold(None, |acc: Option<f64>, c| {
                    let mu = relative_area_own_class(c, &alpha.weights)?.mu;
                    Ok(Some(acc.map_or(mu, |a| a.min(mu))))
                })
            });
            rows.push(row(kind.name(), eps, r));
        }
    }
    rows
}

/// Evaluate every cell of the grid in parallel; rows come back in grid order.
pub fn sweep(grid: &SweepGrid) -> Result<Vec<SweepRow>> {
    let inst = grid.instances()?;
    Ok(inst.par_iter().map(|a| sweep_instance(a, grid)).collect::<Vec<_>>().concat())
}

pub fn summarize(rows: &[SweepRow]) -> SweepSummary {
    let mu_min = rows.iter().filter_map(|r| r.mu_min).fold(f64::INFINITY, f64::min);
    SweepSummary {
        cells: rows.len(),
        failures: rows.iter().filter(|r| r.status.starts_with("ERROR")).count(),
        mu_min,
        below_one: mu_min < 1.0 - 1e-9,
    }
}
