use std::f64::consts::PI;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use bubble_core::gauss::{
    calibration_audit, monotonicity_grid, overlap_excess, sleeves_and_cuffs, AuditMode, SinExponent,
};
use bubble_core::perturb::{PerturbationFamily, PerturbationKind};
use bubble_core::profile::{GeneratingNetwork, RegionLabel, VolumePair, WeightTriple};
use bubble_core::sphere::Dimension;
use bubble_core::standard::construct;
use bubble_core::symmetrization::{symmetrize_certificate, PlanarRegion};
use bubble_core::unification::{relative_area_against, summarize, sweep, ProblemInstance};
use clap::Args;
use serde::Serialize;
use serde_json::json;

use crate::config::RunConfig;
use crate::error::{CliError, CliResult};
use crate::output::{csv_with_header, emit, json_with_config, sig12, Header};

/// Instance flags. Commands reading a network file may take `n` and the
/// weights from the file instead.
#[derive(Args, Debug, Clone, Default)]
pub struct InstanceArgs {
    #[arg(long)]
    pub n: Option<u32>,
    #[arg(long)]
    pub v1: Option<f64>,
    #[arg(long)]
    pub v2: Option<f64>,
    #[arg(long)]
    pub w0: Option<f64>,
    #[arg(long)]
    pub w1: Option<f64>,
    #[arg(long)]
    pub w2: Option<f64>,
}

fn need<T>(x: Option<T>, flag: &str) -> CliResult<T> {
    x.ok_or_else(|| CliError::input(format!("missing required flag --{flag}")))
}

impl InstanceArgs {
    fn full(&self) -> CliResult<ProblemInstance> {
        Ok(ProblemInstance::from_parts(
            need(self.n, "n")?,
            need(self.v1, "v1")?,
            need(self.v2, "v2")?,
            need(self.w0, "w0")?,
            need(self.w1, "w1")?,
            need(self.w2, "w2")?,
        )?)
    }

    fn weights(&self, from_file: Option<WeightTriple>) -> CliResult<WeightTriple> {
        match (self.w0, self.w1, self.w2) {
            (Some(a), Some(b), Some(c)) => Ok(WeightTriple::new(a, b, c)?),
            (None, None, None) => from_file
                .ok_or_else(|| CliError::input("no weights: pass --w0 --w1 --w2 or store them in the network file")),
            _ => Err(CliError::input("give all of --w0 --w1 --w2 or none")),
        }
    }

    /// The instance a network file is scored against. With `own_class` the
    /// volumes are the network's own.
    fn for_network(
        &self,
        net: &GeneratingNetwork,
        file_weights: Option<WeightTriple>,
        own_class: bool,
    ) -> CliResult<ProblemInstance> {
        if let Some(n) = self.n {
            if n != net.dimension.get() {
                return Err(CliError::input(format!("--n {n} but the network lives in dimension {}", net.dimension)));
            }
        }
        let weights = self.weights(file_weights)?;
        let volumes = if own_class {
            if self.v1.is_some() || self.v2.is_some() {
                return Err(CliError::input("--own-class takes the volumes from the network; drop --v1/--v2"));
            }
            VolumePair::new(net.volume(RegionLabel::B1)?, net.volume(RegionLabel::B2)?)?
        } else {
            VolumePair::new(need(self.v1, "v1")?, need(self.v2, "v2")?)?
        };
        Ok(ProblemInstance::new(volumes, weights, net.dimension))
    }

    fn header(&self, h: &mut Header) {
        for (k, v) in [("n", self.n.map(|x| x as f64)), ("v1", self.v1), ("v2", self.v2), ("w0", self.w0), ("w1", self.w1), ("w2", self.w2)] {
            if let Some(v) = v {
                h.push((format!("instance.{k}"), v.to_string()));
            }
        }
    }
}

fn header(command: &str, cfg: &RunConfig, extra: impl FnOnce(&mut Header)) -> Header {
    let mut h = vec![("command".to_string(), command.to_string())];
    extra(&mut h);
    h.extend(cfg.entries());
    h
}

fn read_network(path: &Path) -> CliResult<(GeneratingNetwork, Option<WeightTriple>)> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::input(format!("cannot read {}: {e}", path.display())))?;
    Ok(GeneratingNetwork::from_json(&text)?)
}

/// Reject a network that does not enclose the instance's volumes.
fn check_class(net: &GeneratingNetwork, alpha: &ProblemInstance, tol: f64) -> CliResult<[f64; 2]> {
    let v1 = net.volume(RegionLabel::B1)?;
    let v2 = net.volume(RegionLabel::B2)?;
    let e = alpha.volumes;
    let t = tol * e.max();
    if (v1 - e.v1).abs() > t || (v2 - e.v2).abs() > t {
        return Err(bubble_core::Error::ClassMismatch {
            measured_v1: v1,
            measured_v2: v2,
            expected_v1: e.v1,
            expected_v2: e.v2,
        }
        .into());
    }
    Ok([v1, v2])
}

/// Network JSON with the run header under `"config"`; still loadable as a
/// network file.
fn network_json(h: &Header, net: &GeneratingNetwork, w: WeightTriple) -> CliResult<String> {
    let v: serde_json::Value = serde_json::from_str(&net.to_json(Some(w))?)?;
    json_with_config(h, &v)
}

fn path_str(p: &Path) -> String {
    p.display().to_string()
}

pub struct StandardOpts {
    pub instance: InstanceArgs,
    pub network: Option<PathBuf>,
    pub geometry: Option<PathBuf>,
}

pub fn standard(cfg: &RunConfig, o: &StandardOpts) -> CliResult<()> {
    let alpha = o.instance.full()?;
    let h = header("standard", cfg, |h| o.instance.header(h));
    let m = construct(&alpha)?;
    if let Some(p) = &o.network {
        emit(Some(p), &network_json(&h, &m.network(), m.weights)?)?;
    }
    if let Some(p) = &o.geometry {
        emit(Some(p), &json_with_config(&h, &m)?)?;
    }
    let mm = m.measured;
    let mut t = crate::output::comment_lines(&h);
    writeln!(t, "class            {}", m.class).unwrap();
    writeln!(t, "degenerate       {:?}", m.degenerate_kind).unwrap();
    if let Some(inner) = m.inner {
        writeln!(t, "inner bubble     {inner}").unwrap();
    }
    writeln!(t, "junction radius  {}", sig12(m.junction_radius)).unwrap();
    writeln!(t).unwrap();
    writeln!(t, "{:<10} {:>20} {:>20} {:>20}", "piece", "curvature", "radius", "area").unwrap();
    let names = ["interface", "ext1", "ext2"];
    let areas = [mm.a_int, mm.a_ext1, mm.a_ext2];
    for i in 0..3 {
        writeln!(t, "{:<10} {:>20} {:>20} {:>20}", names[i], sig12(m.curvatures[i]), sig12(m.radii()[i]), sig12(areas[i])).unwrap();
    }
    writeln!(t).unwrap();
    writeln!(t, "V1               {}", sig12(mm.v1)).unwrap();
    writeln!(t, "V2               {}", sig12(mm.v2)).unwrap();
    writeln!(t, "Q                {}", sig12(mm.q)).unwrap();
    emit(None, &t)
}

pub struct PerturbOpts {
    pub instance: InstanceArgs,
    pub family: PerturbationKind,
    pub epsilon: f64,
    pub index: usize,
    pub no_restore: bool,
    pub out: Option<PathBuf>,
}

pub fn perturb(cfg: &RunConfig, o: &PerturbOpts) -> CliResult<()> {
    let alpha = o.instance.full()?;
    let h = header("perturb", cfg, |h| {
        o.instance.header(h);
        h.push(("family".into(), o.family.to_string()));
        h.push(("epsilon".into(), o.epsilon.to_string()));
        h.push(("index".into(), o.index.to_string()));
        h.push(("restore".into(), (!o.no_restore).to_string()));
    });
    let m = construct(&alpha)?;
    let mut fam = PerturbationFamily::new(o.family, o.epsilon);
    fam.volume_restoration = !o.no_restore;
    let cs = fam.competitors(&m)?;
    let net = cs.get(o.index).ok_or_else(|| {
        CliError::input(format!("{} yields {} competitors here; --index {} is out of range", o.family, cs.len(), o.index))
    })?;
    emit(o.out.as_deref(), &network_json(&h, net, m.weights)?)
}

pub struct RelareaOpts {
    pub file: PathBuf,
    pub instance: InstanceArgs,
    pub own_class: bool,
    pub out: Option<PathBuf>,
}

pub fn relarea(cfg: &RunConfig, o: &RelareaOpts) -> CliResult<()> {
    let (net, fw) = read_network(&o.file)?;
    let h = header("relarea", cfg, |h| {
        h.push(("network".into(), path_str(&o.file)));
        h.push(("own_class".into(), o.own_class.to_string()));
        o.instance.header(h);
    });
    let alpha = o.instance.for_network(&net, fw, o.own_class)?;
    net.ensure_valid()?;
    check_class(&net, &alpha, cfg.class_tol)?;
    let m = construct(&alpha)?;
    let r = relative_area_against(&net, &m)?;
    let mu = sig12(r.mu);
    emit(o.out.as_deref(), &json_with_config(&h, &json!({ "report": r, "mu": mu }))?)?;
    eprintln!("mu = {mu}");
    Ok(())
}

pub struct GaussOpts {
    pub file: PathBuf,
    pub instance: InstanceArgs,
    pub own_class: bool,
    pub assume: Option<f64>,
    pub out_dir: PathBuf,
}

#[derive(Serialize)]
struct MonotoneRow {
    n: u32,
    exponent: String,
    beta: f64,
    t: f64,
    h: f64,
    cuff_area: f64,
    inner_perimeter: f64,
    /// Cuff area up and `h` down by more than 1e-12 from the previous row.
    pass: bool,
}

const MARGIN: f64 = 1e-12;

pub fn gauss(cfg: &RunConfig, o: &GaussOpts) -> CliResult<()> {
    let (net, fw) = read_network(&o.file)?;
    let h = header("gauss", cfg, |h| {
        h.push(("network".into(), path_str(&o.file)));
        h.push(("own_class".into(), o.own_class.to_string()));
        if let Some(mu0) = o.assume {
            h.push(("assume".into(), mu0.to_string()));
        }
        o.instance.header(h);
    });
    let alpha = o.instance.for_network(&net, fw, o.own_class)?;
    net.ensure_valid()?;
    check_class(&net, &alpha, cfg.class_tol)?;
    let mode = match o.assume {
        Some(mu0) if mu0 > 0.0 => AuditMode::Assume(mu0),
        Some(mu0) => return Err(CliError::input(format!("--assume needs μ₀ > 0, got {mu0}"))),
        None => AuditMode::Measured,
    };
    std::fs::create_dir_all(&o.out_dir)?;
    let decomposition = sleeves_and_cuffs(&net, &alpha.weights)?;
    let audit = calibration_audit(&net, &alpha, mode)?;
    let m = construct(&alpha)?;
    let overlap = overlap_excess(&net, &alpha.weights, &m)?;

    let n = net.dimension;
    let mut files = Vec::new();
    let mut all_pass = true;
    for (e, tag) in [(SinExponent::NMinus2, "nminus2"), (SinExponent::NMinus1, "nminus1")] {
        for (beta, bt) in [(PI / 6.0, "pi6"), (PI / 4.0, "pi4"), (PI / 3.0, "pi3")] {
            let rows = monotone_rows(n, beta, cfg.samples, e, tag)?;
            all_pass &= rows.iter().all(|r| r.pass);
            let name = format!("monotonicity_n{n}_{tag}_{bt}.csv");
            emit(Some(&o.out_dir.join(&name)), &csv_with_header(&h, &rows)?)?;
            files.push(name);
        }
    }
    let body = json!({
        "decomposition": decomposition,
        "coverage": {
            "sleeve_area": decomposition.total_sleeve_area(),
            "cuff_area": decomposition.total_cuff_area(),
            "union_area": decomposition.union_area(n),
        },
        "audit": audit,
        "overlap_excess": overlap,
        "monotonicity": { "files": files, "all_pass": all_pass },
    });
    let audit_path = o.out_dir.join("audit.json");
    emit(Some(&audit_path), &json_with_config(&h, &body)?)?;
    println!("verdict {:?}; monotonicity {}; wrote {}", audit.verdict, if all_pass { "PASS" } else { "FAIL" }, audit_path.display());
    Ok(())
}

fn monotone_rows(n: Dimension, beta: f64, samples: usize, e: SinExponent, tag: &str) -> CliResult<Vec<MonotoneRow>> {
    let g = monotonicity_grid(n, beta, samples, e)?;
    Ok(g.iter()
        .enumerate()
        .map(|(i, r)| MonotoneRow {
            n: r.n,
            exponent: tag.to_string(),
            beta: r.beta,
            t: r.t,
            h: r.h,
            cuff_area: r.cuff_area,
            inner_perimeter: r.inner_perimeter,
            pass: i == 0 || (r.cuff_area - g[i - 1].cuff_area > MARGIN && g[i - 1].h - r.h > MARGIN),
        })
        .collect())
}

#[derive(Serialize)]
struct SweepCsvRow {
    n: u32,
    #[serde(rename = "V1")]
    v1: f64,
    #[serde(rename = "V2")]
    v2: f64,
    w0: f64,
    w1: f64,
    w2: f64,
    family: String,
    epsilon: f64,
    mu_min: String,
    status: String,
}

pub fn sweep_cmd(cfg: &RunConfig, out: Option<&Path>) -> CliResult<()> {
    let h = header("sweep", cfg, |_| {});
    let rows = sweep(&cfg.grid)?;
    let s = summarize(&rows);
    let csv_rows: Vec<SweepCsvRow> = rows
        .into_iter()
        .map(|r| SweepCsvRow {
            n: r.n,
            v1: r.v1,
            v2: r.v2,
            w0: r.w0,
            w1: r.w1,
            w2: r.w2,
            family: r.family,
            epsilon: r.epsilon,
            mu_min: r.mu_min.map(sig12).unwrap_or_default(),
            status: r.status,
        })
        .collect();
    let mut text = csv_with_header(&h, &csv_rows)?;
    let line = format!(
        "# summary cells={} failures={} mu_min={} below_one={}\n",
        s.cells,
        s.failures,
        sig12(s.mu_min),
        s.below_one
    );
    text.push_str(&line);
    let target = out.or(cfg.output.as_deref());
    emit(target, &text)?;
    if target.is_some() {
        print!("{}", line.trim_start_matches("# "));
    }
    Ok(())
}

pub fn symmetrize(cfg: &RunConfig, file: &Path, out: Option<&Path>) -> CliResult<()> {
    let text = std::fs::read_to_string(file)
        .map_err(|e| CliError::input(format!("cannot read {}: {e}", file.display())))?;
    let region = PlanarRegion::from_json(&text)?;
    let h = header("symmetrize", cfg, |h| h.push(("region".into(), path_str(file))));
    let c = symmetrize_certificate(&region)?;
    emit(out, &json_with_config(&h, &c)?)
}
