//! Flat key-value scenario files with dotted sections:
//!
//! ```text
//! # lines starting with # are comments
//! grid.n_points = 4096
//! grid.r_max = 30.0
//! initial_data.preset = scaled_q
//! initial_data.a = 0.9
//! ```
//!
//! Unknown keys and malformed values are hard errors before any computation,
//! so a typo cannot silently fall back to a default.

use std::collections::BTreeMap;
use std::fmt;
use std::path::{Path, PathBuf};

use hartree5d::EvolutionConfig;

#[derive(Debug)]
pub struct ConfigError {
    pub key: String,
    pub what: String,
}

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "config key `{}`: {}", self.key, self.what)
    }
}

impl std::error::Error for ConfigError {}

fn err(key: &str, what: impl Into<String>) -> ConfigError {
    ConfigError { key: key.into(), what: what.into() }
}

/// Initial-data preset. `scaled_q` spans both sides of the dichotomy with
/// exact algebra; the chirped Gaussian exercises nonzero variance rate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Preset {
    ScaledQ { a: f64 },
    Gaussian { amplitude: f64, width: f64 },
    PhaseGaussian { amplitude: f64, width: f64, chirp: f64 },
    Zero,
}

#[derive(Debug, Clone, PartialEq)]
pub struct GridSection {
    pub n_points: usize,
    pub r_max: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct GroundStateSection {
    pub tol: f64,
    pub max_iters: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct VirialSection {
    pub c_local: f64,
    pub c_sobolev: f64,
    pub gamma: f64,
    pub r_virial: f64,
    /// Explicit supercritical scale; derived from the data when absent.
    pub lambda: Option<f64>,
    pub cutoff_s_outer: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct OutputSection {
    pub directory: Option<PathBuf>,
    pub csv: bool,
    pub json: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScenarioConfig {
    pub grid: GridSection,
    pub initial_data: Preset,
    pub ground_state: GroundStateSection,
    pub evolution: EvolutionConfig,
    pub checkpoint_stride: usize,
    pub resume: Option<PathBuf>,
    pub classify_tol: f64,
    pub virial: VirialSection,
    pub verify_along_trajectory: bool,
    pub outputs: OutputSection,
}

impl Default for ScenarioConfig {
    fn default() -> Self {
        ScenarioConfig {
            grid: GridSection { n_points: 4096, r_max: 30.0 },
            initial_data: Preset::ScaledQ { a: 0.9 },
            ground_state: GroundStateSection { tol: 1e-8, max_iters: 500 },
            evolution: EvolutionConfig::default(),
            checkpoint_stride: 0,
            resume: None,
            classify_tol: 1e-6,
            virial: VirialSection {
                c_local: 1.0,
                c_sobolev: 1.0,
                gamma: 0.1,
                r_virial: 10.0,
                lambda: None,
                cutoff_s_outer: 4.5,
            },
            verify_along_trajectory: false,
            outputs: OutputSection { directory: None, csv: true, json: true },
        }
    }
}

fn parse_into<T: std::str::FromStr>(key: &str, value: &str) -> Result<T, ConfigError> {
    value
        .parse()
        .map_err(|_| err(key, format!("cannot parse {value:?}")))
}

fn parse_bool(key: &str, value: &str) -> Result<bool, ConfigError> {
    match value {
        "true" | "yes" | "1" => Ok(true),
        "false" | "no" | "0" => Ok(false),
        other => Err(err(key, format!("expected true/false, got {other:?}"))),
    }
}

impl ScenarioConfig {
    pub fn from_file(path: &Path) -> Result<Self, ConfigError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| err("<file>", format!("cannot read {}: {e}", path.display())))?;
        Self::from_str_contents(&text)
    }

    pub fn from_str_contents(text: &str) -> Result<Self, ConfigError> {
        let mut kv = BTreeMap::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (k, v) = line.split_once('=').ok_or_else(|| {
                err(
                    &format!("line {}", lineno + 1),
                    format!("expected `key = value`, got {line:?}"),
                )
            })?;
            let k = k.trim().to_string();
            if kv.insert(k.clone(), v.trim().to_string()).is_some() {
                return Err(err(&k, "duplicate key"));
            }
        }
        Self::from_map(kv)
    }

    fn from_map(mut kv: BTreeMap<String, String>) -> Result<Self, ConfigError> {
        let mut cfg = ScenarioConfig::default();
        let mut take = |key: &str| kv.remove(key);

        if let Some(v) = take("grid.n_points") {
            cfg.grid.n_points = parse_into("grid.n_points", &v)?;
        }
        if let Some(v) = take("grid.r_max") {
            cfg.grid.r_max = parse_into("grid.r_max", &v)?;
        }

        let preset_name = take("initial_data.preset").unwrap_or_else(|| "scaled_q".into());
        let a = take("initial_data.a");
        let amplitude = take("initial_data.amplitude");
        let width = take("initial_data.width");
        let chirp = take("initial_data.chirp");
        cfg.initial_data = match preset_name.as_str() {
            "scaled_q" => {
                let a = match a {
                    Some(v) => parse_into("initial_data.a", &v)?,
                    None => 0.9,
                };
                Preset::ScaledQ { a }
            }
            "gaussian" => Preset::Gaussian {
                amplitude: match amplitude {
                    Some(v) => parse_into("initial_data.amplitude", &v)?,
                    None => 1.0,
                },
                width: match width {
                    Some(v) => parse_into("initial_data.width", &v)?,
                    None => 1.0,
                },
            },
            "phase_gaussian" => Preset::PhaseGaussian {
                amplitude: match amplitude {
                    Some(v) => parse_into("initial_data.amplitude", &v)?,
                    None => 1.0,
                },
                width: match width {
                    Some(v) => parse_into("initial_data.width", &v)?,
                    None => 1.0,
                },
                chirp: match chirp {
                    Some(v) => parse_into("initial_data.chirp", &v)?,
                    None => 0.5,
                },
            },
            "zero" => Preset::Zero,
            other => {
                return Err(err(
                    "initial_data.preset",
                    format!("unknown preset {other:?} (scaled_q | gaussian | phase_gaussian | zero)"),
                ))
            }
        };

        if let Some(v) = take("ground_state.tol") {
            cfg.ground_state.tol = parse_into("ground_state.tol", &v)?;
        }
        if let Some(v) = take("ground_state.max_iters") {
            cfg.ground_state.max_iters = parse_into("ground_state.max_iters", &v)?;
        }

        if let Some(v) = take("evolution.dt0") {
            cfg.evolution.dt0 = parse_into("evolution.dt0", &v)?;
        }
        if let Some(v) = take("evolution.t_max") {
            cfg.evolution.t_max = parse_into("evolution.t_max", &v)?;
        }
        if let Some(v) = take("evolution.eta_max") {
            cfg.evolution.eta_max = parse_into("evolution.eta_max", &v)?;
        }
        if let Some(v) = take("evolution.dt_min") {
            cfg.evolution.dt_min = parse_into("evolution.dt_min", &v)?;
        }
        if let Some(v) = take("evolution.boundary_tol") {
            cfg.evolution.boundary_tol = parse_into("evolution.boundary_tol", &v)?;
        }
        if let Some(v) = take("evolution.record_stride") {
            cfg.evolution.record_stride = parse_into("evolution.record_stride", &v)?;
        }
        if let Some(v) = take("evolution.adaptive") {
            cfg.evolution.adaptive = parse_bool("evolution.adaptive", &v)?;
        }
        if let Some(v) = take("evolution.c_adapt") {
            cfg.evolution.c_adapt = parse_into("evolution.c_adapt", &v)?;
        }
        if let Some(v) = take("evolution.nonlinearity") {
            cfg.evolution.include_nonlinearity = parse_bool("evolution.nonlinearity", &v)?;
        }
        if let Some(v) = take("evolution.checkpoint_stride") {
            cfg.checkpoint_stride = parse_into("evolution.checkpoint_stride", &v)?;
        }
        if let Some(v) = take("evolution.resume") {
            cfg.resume = Some(PathBuf::from(v));
        }

        if let Some(v) = take("classify.tol") {
            cfg.classify_tol = parse_into("classify.tol", &v)?;
        }

        if let Some(v) = take("virial.c_local") {
            cfg.virial.c_local = parse_into("virial.c_local", &v)?;
        }
        if let Some(v) = take("virial.c_sobolev") {
            cfg.virial.c_sobolev = parse_into("virial.c_sobolev", &v)?;
        }
        if let Some(v) = take("virial.gamma") {
            cfg.virial.gamma = parse_into("virial.gamma", &v)?;
        }
        if let Some(v) = take("virial.r_virial") {
            cfg.virial.r_virial = parse_into("virial.r_virial", &v)?;
        }
        if let Some(v) = take("virial.lambda") {
            cfg.virial.lambda = Some(parse_into("virial.lambda", &v)?);
        }
        if let Some(v) = take("virial.cutoff_s_outer") {
            cfg.virial.cutoff_s_outer = parse_into("virial.cutoff_s_outer", &v)?;
        }
        if let Some(v) = take("tb.verify_along_trajectory") {
            cfg.verify_along_trajectory = parse_bool("tb.verify_along_trajectory", &v)?;
        }

        if let Some(v) = take("outputs.directory") {
            cfg.outputs.directory = Some(PathBuf::from(v));
        }
        if let Some(v) = take("outputs.formats") {
            cfg.outputs.csv = false;
            cfg.outputs.json = false;
            for fmtname in v.split(',').map(str::trim) {
                match fmtname {
                    "csv" => cfg.outputs.csv = true,
                    "json" => cfg.outputs.json = true,
                    other => {
                        return Err(err("outputs.formats", format!("unknown format {other:?}")))
                    }
                }
            }
        }

        if let Some((k, _)) = kv.into_iter().next() {
            return Err(err(&k, "unknown key"));
        }
        cfg.validate()?;
        Ok(cfg)
    }

    /// Cross-field validation; runs before any computation.
    pub fn validate(&self) -> Result<(), ConfigError> {
        if self.grid.n_points < 8 {
            return Err(err("grid.n_points", format!("{} is below the minimum of 8", self.grid.n_points)));
        }
        if !(self.grid.r_max.is_finite() && self.grid.r_max > 0.0) {
            return Err(err("grid.r_max", format!("{} must be finite and positive", self.grid.r_max)));
        }
        if !(self.ground_state.tol > 0.0 && self.ground_state.tol < 1.0) {
            return Err(err("ground_state.tol", "must lie in (0, 1)"));
        }
        if self.ground_state.max_iters == 0 {
            return Err(err("ground_state.max_iters", "must be positive"));
        }
        self.evolution
            .validate()
            .map_err(|what| err("evolution", what))?;
        if !(self.classify_tol > 0.0) {
            return Err(err("classify.tol", "must be positive"));
        }
        if !(self.virial.c_local > 0.0) {
            return Err(err("virial.c_local", "must be positive"));
        }
        if !(self.virial.c_sobolev > 0.0) {
            return Err(err("virial.c_sobolev", "must be positive"));
        }
        if !(self.virial.gamma > 0.0 && self.virial.gamma < 1.0) {
            return Err(err("virial.gamma", "must lie in (0, 1)"));
        }
        if !(self.virial.r_virial > 0.0 && self.virial.r_virial <= self.grid.r_max) {
            return Err(err(
                "virial.r_virial",
                format!("must lie in (0, r_max = {}]", self.grid.r_max),
            ));
        }
        if let Some(l) = self.virial.lambda {
            if !(l > 1.0) {
                return Err(err("virial.lambda", format!("{l} must exceed 1")));
            }
        }
        if !(self.virial.cutoff_s_outer > 1.0) {
            return Err(err("virial.cutoff_s_outer", "must exceed 1"));
        }
        match self.initial_data {
            Preset::ScaledQ { a } => {
                if !(a.is_finite() && a >= 0.0) {
                    return Err(err("initial_data.a", "must be finite and nonnegative"));
                }
            }
            Preset::Gaussian { amplitude, width } | Preset::PhaseGaussian { amplitude, width, .. } => {
                if !(amplitude.is_finite() && amplitude >= 0.0) {
                    return Err(err("initial_data.amplitude", "must be finite and nonnegative"));
                }
                if !(width.is_finite() && width > 0.0) {
                    return Err(err("initial_data.width", "must be positive"));
                }
            }
            Preset::Zero => {}
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_round_trip() {
        let text = "\
# comment
grid.n_points = 1024
grid.r_max = 20.0
initial_data.preset = scaled_q
initial_data.a = 1.1
evolution.t_max = 2.0   # trailing comment
evolution.adaptive = false
virial.lambda = 1.21
outputs.formats = csv,json
";
        let cfg = ScenarioConfig::from_str_contents(text).unwrap();
        assert_eq!(cfg.grid.n_points, 1024);
        assert_eq!(cfg.initial_data, Preset::ScaledQ { a: 1.1 });
        assert_eq!(cfg.evolution.t_max, 2.0);
        assert!(!cfg.evolution.adaptive);
        assert_eq!(cfg.virial.lambda, Some(1.21));
        assert!(cfg.outputs.csv && cfg.outputs.json);
    }

    #[test]
    fn rejects_unknown_key() {
        let e = ScenarioConfig::from_str_contents("grid.npoints = 4").unwrap_err();
        assert!(e.key.contains("grid.npoints"), "{e}");
    }

    #[test]
    fn rejects_bad_values_by_name() {
        let e = ScenarioConfig::from_str_contents("grid.n_points = four").unwrap_err();
        assert_eq!(e.key, "grid.n_points");
        let e = ScenarioConfig::from_str_contents("grid.n_points = 4").unwrap_err();
        assert_eq!(e.key, "grid.n_points");
        let e = ScenarioConfig::from_str_contents("evolution.eta_max = 0.5").unwrap_err();
        assert_eq!(e.key, "evolution");
        let e = ScenarioConfig::from_str_contents("virial.lambda = 1.0").unwrap_err();
        assert_eq!(e.key, "virial.lambda");
        let e = ScenarioConfig::from_str_contents("initial_data.preset = solitonx").unwrap_err();
        assert_eq!(e.key, "initial_data.preset");
    }

    #[test]
    fn rejects_duplicates_and_garbage_lines() {
        let e = ScenarioConfig::from_str_contents("grid.r_max = 1\ngrid.r_max = 2").unwrap_err();
        assert_eq!(e.key, "grid.r_max");
        let e = ScenarioConfig::from_str_contents("just words").unwrap_err();
        assert!(e.key.contains("line 1"));
    }
}
