//! Flat `key = value` run configuration.
//!
//! Blank lines and lines starting with `#` are ignored. List values are
//! comma separated. Unknown keys are rejected so typos do not silently fall
//! back to defaults.

use std::path::{Path, PathBuf};
use std::str::FromStr;

use bubble_core::perturb::PerturbationKind;
use bubble_core::unification::{SweepGrid, CLASS_TOL};

use crate::error::{CliError, CliResult};

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub seed: u64,
    /// Absolute volume tolerance, relative to the larger target volume, for
    /// accepting a competitor into an instance's class.
    pub class_tol: f64,
    /// Cuff positions per monotonicity grid.
    pub samples: usize,
    pub grid: SweepGrid,
    pub output: Option<PathBuf>,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self { seed: 0, class_tol: CLASS_TOL, samples: 1000, grid: SweepGrid::default(), output: None }
    }
}

fn parse<T: FromStr>(key: &str, v: &str) -> CliResult<T> {
    v.trim().parse().map_err(|_| CliError::input(format!("config key {key}: cannot parse {v:?}")))
}

fn list<T: FromStr>(key: &str, v: &str) -> CliResult<Vec<T>> {
    let out: Vec<T> = v.split(',').map(|s| parse(key, s)).collect::<CliResult<_>>()?;
    if out.is_empty() {
        return Err(CliError::input(format!("config key {key}: empty list")));
    }
    Ok(out)
}

fn positive(key: &str, x: f64) -> CliResult<f64> {
    if x > 0.0 && x.is_finite() {
        Ok(x)
    } else {
        Err(CliError::input(format!("config key {key}: must be positive, got {x}")))
    }
}

fn join<T: ToString>(xs: &[T]) -> String {
    xs.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",")
}

impl RunConfig {
    pub fn load(path: Option<&Path>) -> CliResult<Self> {
        match path {
            None => Ok(Self::default()),
            Some(p) => {
                let text = std::fs::read_to_string(p)
                    .map_err(|e| CliError::input(format!("cannot read config {}: {e}", p.display())))?;
                Self::parse(&text)
            }
        }
    }

    pub fn parse(text: &str) -> CliResult<Self> {
        let mut c = Self::default();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (k, v) = line
                .split_once('=')
                .ok_or_else(|| CliError::input(format!("config line {}: expected key=value", i + 1)))?;
            let (k, v) = (k.trim(), v.trim());
            match k {
                "seed" => c.seed = parse(k, v)?,
                "class_tol" => c.class_tol = positive(k, parse(k, v)?)?,
                "samples" => {
                    c.samples = parse(k, v)?;
                    if c.samples < 2 {
                        return Err(CliError::input("config key samples: need at least 2"));
                    }
                }
                "n" => c.grid.dimensions = list(k, v)?,
                "ratios" => c.grid.ratios = list(k, v)?,
                "w0" => c.grid.w0 = list(k, v)?,
                "w1" => c.grid.w1 = list(k, v)?,
                "w2" => c.grid.w2 = parse(k, v)?,
                "epsilons" => {
                    c.grid.epsilons = list(k, v)?;
                    for &e in &c.grid.epsilons {
                        positive(k, e)?;
                    }
                }
                "families" => {
                    c.grid.families = v
                        .split(',')
                        .map(|s| PerturbationKind::from_str(s.trim()).map_err(CliError::from))
                        .collect::<CliResult<_>>()?
                }
                "volume_restoration" => c.grid.volume_restoration = parse(k, v)?,
                "output" => c.output = Some(PathBuf::from(v)),
                _ => return Err(CliError::input(format!("config line {}: unknown key {k:?}", i + 1))),
            }
        }
        Ok(c)
    }

    /// Every resolved setting as ordered `(key, value)` pairs.
    pub fn entries(&self) -> Vec<(String, String)> {
        let g = &self.grid;
        let mut out = vec![
            ("seed", self.seed.to_string()),
            ("class_tol", self.class_tol.to_string()),
            ("samples", self.samples.to_string()),
            ("n", join(&g.dimensions)),
            ("ratios", join(&g.ratios)),
            ("w0", join(&g.w0)),
            ("w1", join(&g.w1)),
            ("w2", g.w2.to_string()),
            ("epsilons", join(&g.epsilons)),
            ("families", join(&g.families)),
            ("volume_restoration", g.volume_restoration.to_string()),
        ];
        if let Some(p) = &self.output {
            out.push(("output", p.display().to_string()));
        }
        out.into_iter().map(|(k, v)| (k.to_string(), v)).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_round_trip_through_entries() {
        let c = RunConfig::default();
        let text: String = c.entries().iter().map(|(k, v)| format!("{k} = {v}\n")).collect();
        assert_eq!(RunConfig::parse(&text).unwrap(), c);
    }

    #[test]
    fn parses_lists_and_comments() {
        let c = RunConfig::parse("# grid\nn = 3,4\nfamilies = radial_bump\n\nseed=7\n").unwrap();
        assert_eq!(c.grid.dimensions, vec![3, 4]);
        assert_eq!(c.grid.families, vec![PerturbationKind::RadialBump]);
        assert_eq!(c.seed, 7);
    }

    #[test]
    fn rejects_bad_input() {
        for text in ["bogus = 1", "class_tol = -1", "n = 3,x", "no equals sign", "samples = 1", "epsilons = 0"] {
            assert!(RunConfig::parse(text).is_err(), "{text}");
        }
    }
}
