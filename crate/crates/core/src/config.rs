//! Run configuration.
//!
//! Files are flat `key = value` lines; `#` starts a comment. Values are
//! layered, later layers winning: built-in defaults, the config file,
//! `STRAINFLOW_<KEY>` environment variables, then `--key value` flags.
//!
//! ```text
//! # Taylor-Green decay at 32³
//! n = 32
//! viscosity = 1
//! dt = 1e-3
//! t_end = 1
//! initial_data = taylor_green
//! record_every = 10
//! csv = tg.csv
//! ```

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::initial::InitialData;
use crate::solver::{Forcing, SolverConfig, TimeStep};
use crate::spectral::{Grid, Snapshot};
use crate::toy_ode::{linspace, ToyConfig};

pub const ENV_PREFIX: &str = "STRAINFLOW_";

/// Every key the configuration understands.
pub const KNOWN_KEYS: &[&str] = &[
    "n",
    "viscosity",
    "dt",
    "cfl",
    "t_end",
    "dealias",
    "initial_data",
    "seed",
    "max_wavenumber",
    "amplitude",
    "initial_file",
    "force",
    "force_amplitude",
    "force_files",
    "q_list",
    "csv",
    "snapshot_dir",
    "snapshot_every",
    "record_every",
    "toy_mode",
    "toy_matrix",
    "toy_lambda3",
    "toy_r",
    "toy_t_end",
    "toy_rtol",
    "toy_atol",
    "toy_threshold",
    "toy_sweep_lambda3",
    "toy_sweep_r",
    "verify_n",
    "verify_seed",
    "verify_flip_det_sign",
];

/// Ordered `key -> value` text pairs from one or more layers.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct RawConfig {
    values: BTreeMap<String, String>,
}

impl RawConfig {
    pub fn parse(text: &str) -> Result<Self> {
        let mut raw = RawConfig::default();
        for (lineno, line) in text.lines().enumerate() {
            let line = match line.find('#') {
                Some(p) => &line[..p],
                None => line,
            }
            .trim();
            if line.is_empty() {
                continue;
            }
            let (k, v) = line.split_once('=').ok_or_else(|| {
                Error::Config(format!("line {}: expected `key = value`, got {line:?}", lineno + 1))
            })?;
            raw.set(k.trim(), v.trim())?;
        }
        Ok(raw)
    }

    pub fn from_file(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Config(format!("cannot read {}: {e}", path.display())))?;
        Self::parse(&text)
    }

    /// `STRAINFLOW_<KEY>` variables from `vars`, e.g. `std::env::vars()`.
    pub fn from_env<I: IntoIterator<Item = (String, String)>>(vars: I) -> Result<Self> {
        let mut raw = RawConfig::default();
        for (k, v) in vars {
            if let Some(key) = k.strip_prefix(ENV_PREFIX) {
                raw.set(&key.to_ascii_lowercase(), v.trim())?;
            }
        }
        Ok(raw)
    }

    /// `--key value` or `--key=value` pairs.
    pub fn from_args<S: AsRef<str>>(args: &[S]) -> Result<Self> {
        let mut raw = RawConfig::default();
        let mut it = args.iter().map(|s| s.as_ref());
        while let Some(a) = it.next() {
            let body = a
                .strip_prefix("--")
                .ok_or_else(|| Error::Config(format!("expected --key value, got {a:?}")))?;
            let (k, v) = match body.split_once('=') {
                Some((k, v)) => (k.to_string(), v.to_string()),
                None => {
                    let v = it
                        .next()
                        .ok_or_else(|| Error::Config(format!("--{body} needs a value")))?;
                    (body.to_string(), v.to_string())
                }
            };
            raw.set(&k.replace('-', "_"), &v)?;
        }
        Ok(raw)
    }

    pub fn set(&mut self, key: &str, value: &str) -> Result<()> {
        if !KNOWN_KEYS.contains(&key) {
            return Err(Error::Config(format!("unknown config key {key:?}")));
        }
        self.values.insert(key.to_string(), value.to_string());
        Ok(())
    }

    /// Overlay `other` on top of `self`.
    pub fn merge(mut self, other: RawConfig) -> Self {
        self.values.extend(other.values);
        self
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.values.get(key).map(|s| s.as_str())
    }

    fn parsed<T: FromStr>(&self, key: &str) -> Result<Option<T>> {
        self.get(key)
            .map(|v| {
                v.parse::<T>()
                    .map_err(|_| Error::Config(format!("bad value for {key}: {v:?}")))
            })
            .transpose()
    }

    fn bool(&self, key: &str) -> Result<Option<bool>> {
        self.get(key)
            .map(|v| match v.to_ascii_lowercase().as_str() {
                "1" | "true" | "yes" | "on" => Ok(true),
                "0" | "false" | "no" | "off" => Ok(false),
                _ => Err(Error::Config(format!("bad boolean for {key}: {v:?}"))),
            })
            .transpose()
    }

    fn floats(&self, key: &str) -> Result<Option<Vec<f64>>> {
        self.get(key)
            .map(|v| {
                v.split(',')
                    .map(|x| x.trim())
                    .filter(|x| !x.is_empty())
                    .map(|x| parse_float(x).map_err(|_| Error::Config(format!("bad number in {key}: {x:?}"))))
                    .collect()
            })
            .transpose()
    }
}

fn parse_float(s: &str) -> std::result::Result<f64, std::num::ParseFloatError> {
    match s.to_ascii_lowercase().as_str() {
        "inf" | "infinity" => Ok(f64::INFINITY),
        other => other.parse(),
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum ForceSpec {
    None,
    Shear,
    TaylorGreen,
    /// Force snapshots; one file is steady, several are interpolated in time.
    Files(Vec<PathBuf>),
}

#[derive(Clone, Debug, PartialEq)]
pub enum ToyMode {
    Matrix(crate::sym3::TraceFreeSym3),
    Reduced { lambda3: f64, r: f64 },
    Sweep { lambda3: Vec<f64>, r: Vec<f64> },
}

#[derive(Clone, Debug, PartialEq)]
pub struct RunConfig {
    pub n: usize,
    pub viscosity: f64,
    pub dt: f64,
    /// Courant number; when set, the step adapts with `dt` as its cap.
    pub cfl: Option<f64>,
    pub t_end: f64,
    pub dealias: bool,
    pub initial: InitialData,
    pub force: ForceSpec,
    pub force_amplitude: f64,
    /// Extra `q` values for `‖λ₂⁺‖_q`.
    pub q_list: Vec<f64>,
    pub csv: Option<PathBuf>,
    pub snapshot_dir: Option<PathBuf>,
    /// Records between snapshots; 0 disables them.
    pub snapshot_every: usize,
    pub record_every: usize,
    pub toy_mode: ToyMode,
    pub toy: ToyConfig,
    pub verify_n: usize,
    pub verify_seed: u64,
    pub verify_flip_det_sign: bool,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            n: 32,
            viscosity: 1.0,
            dt: 1e-3,
            cfl: None,
            t_end: 1.0,
            dealias: true,
            initial: InitialData::TaylorGreen,
            force: ForceSpec::None,
            force_amplitude: 1.0,
            q_list: Vec::new(),
            csv: None,
            snapshot_dir: None,
            snapshot_every: 0,
            record_every: 10,
            toy_mode: ToyMode::Reduced { lambda3: 1.0, r: 1.0 },
            toy: ToyConfig::default(),
            verify_n: 32,
            verify_seed: 1,
            verify_flip_det_sign: false,
        }
    }
}

fn range(raw: &RawConfig, key: &str, default: (f64, f64, usize)) -> Result<Vec<f64>> {
    let (a, b, n) = match raw.floats(key)? {
        None => default,
        Some(v) if v.len() == 3 && v[2] >= 1.0 && v[2].fract() == 0.0 => (v[0], v[1], v[2] as usize),
        Some(_) => return Err(Error::Config(format!("{key} must be `min, max, count`"))),
    };
    Ok(linspace(a, b, n))
}

impl RunConfig {
    /// Defaults overlaid with `raw`.
    pub fn from_raw(raw: &RawConfig) -> Result<Self> {
        let d = RunConfig::default();
        let initial = match raw.get("initial_data").unwrap_or("taylor_green") {
            "taylor_green" => InitialData::TaylorGreen,
            "shear" => InitialData::Shear,
            "random_div_free" => InitialData::RandomDivFree {
                seed: raw.parsed("seed")?.unwrap_or(1),
                // default: 4, or the dealiasing cutoff on small grids
                max_wavenumber: match raw.parsed("max_wavenumber")? {
                    Some(k) => k,
                    None => (raw.parsed::<usize>("n")?.unwrap_or(d.n).saturating_sub(1) / 3).clamp(1, 4),
                },
                amplitude: raw.parsed("amplitude")?.unwrap_or(1.0),
            },
            "file" => InitialData::FromFile(
                raw.get("initial_file")
                    .ok_or_else(|| Error::Config("initial_data = file needs initial_file".into()))?
                    .into(),
            ),
            other => return Err(Error::Config(format!("unknown initial_data {other:?}"))),
        };
        let force = match raw.get("force").unwrap_or("none") {
            "none" => ForceSpec::None,
            "shear" => ForceSpec::Shear,
            "taylor_green" => ForceSpec::TaylorGreen,
            "files" => {
                let files: Vec<PathBuf> = raw
                    .get("force_files")
                    .ok_or_else(|| Error::Config("force = files needs force_files".into()))?
                    .split(',')
                    .map(|s| s.trim())
                    .filter(|s| !s.is_empty())
                    .map(PathBuf::from)
                    .collect();
                if files.is_empty() {
                    return Err(Error::Config("force_files is empty".into()));
                }
                ForceSpec::Files(files)
            }
            other => return Err(Error::Config(format!("unknown force {other:?}"))),
        };
        let toy_mode = match raw.get("toy_mode").unwrap_or("reduced") {
            "reduced" => ToyMode::Reduced {
                lambda3: raw.parsed("toy_lambda3")?.unwrap_or(1.0),
                r: raw.parsed("toy_r")?.unwrap_or(1.0),
            },
            "matrix" => {
                let v = raw.floats("toy_matrix")?.unwrap_or_else(|| vec![-2.0, 1.0, 1.0]);
                let m = match v.len() {
                    3 => crate::sym3::TraceFreeSym3::diag(v[0], v[1], v[2])
                        .map_err(|e| Error::Config(format!("toy_matrix: {e}")))?,
                    5 => crate::sym3::TraceFreeSym3::from_entries([v[0], v[1], v[2], v[3], v[4]]),
                    _ => {
                        return Err(Error::Config(
                            "toy_matrix takes 3 diagonal entries or m11, m22, m12, m13, m23".into(),
                        ))
                    }
                };
                ToyMode::Matrix(m)
            }
            "sweep" => ToyMode::Sweep {
                lambda3: range(raw, "toy_sweep_lambda3", (0.1, 10.0, 20))?,
                r: range(raw, "toy_sweep_r", (0.51, 2.0, 20))?,
            },
            other => return Err(Error::Config(format!("unknown toy_mode {other:?}"))),
        };
        let mut toy = ToyConfig::default();
        if let Some(t) = raw.parsed("toy_t_end")? {
            toy.t_end = t;
        } else if matches!(toy_mode, ToyMode::Sweep { .. }) {
            toy.t_end = 1e7;
        }
        toy.rtol = raw.parsed("toy_rtol")?.unwrap_or(toy.rtol);
        toy.atol = raw.parsed("toy_atol")?.unwrap_or(toy.atol);
        toy.blowup_threshold = raw.parsed("toy_threshold")?.unwrap_or(toy.blowup_threshold);

        let cfg = RunConfig {
            n: raw.parsed("n")?.unwrap_or(d.n),
            viscosity: raw.get("viscosity").map(parse_float).transpose().map_err(|_| Error::Config("bad viscosity".into()))?.unwrap_or(d.viscosity),
            dt: raw.parsed("dt")?.unwrap_or(d.dt),
            cfl: raw.parsed("cfl")?,
            t_end: raw.parsed("t_end")?.unwrap_or(d.t_end),
            dealias: raw.bool("dealias")?.unwrap_or(d.dealias),
            initial,
            force,
            force_amplitude: raw.parsed("force_amplitude")?.unwrap_or(d.force_amplitude),
            q_list: raw.floats("q_list")?.unwrap_or_default(),
            csv: raw.get("csv").map(PathBuf::from),
            snapshot_dir: raw.get("snapshot_dir").map(PathBuf::from),
            snapshot_every: raw.parsed("snapshot_every")?.unwrap_or(d.snapshot_every),
            record_every: raw.parsed("record_every")?.unwrap_or(d.record_every),
            toy_mode,
            toy,
            verify_n: raw.parsed("verify_n")?.unwrap_or(d.verify_n),
            verify_seed: raw.parsed("verify_seed")?.unwrap_or(d.verify_seed),
            verify_flip_det_sign: raw.bool("verify_flip_det_sign")?.unwrap_or(false),
        };
        cfg.validate()?;
        Ok(cfg)
    }

    /// Layer a config file (if any), the process environment and CLI overrides.
    pub fn load(file: Option<&Path>, overrides: &[String]) -> Result<Self> {
        let mut raw = RawConfig::default();
        if let Some(f) = file {
            raw = raw.merge(RawConfig::from_file(f)?);
        }
        raw = raw.merge(RawConfig::from_env(std::env::vars())?);
        raw = raw.merge(RawConfig::from_args(overrides)?);
        Self::from_raw(&raw)
    }

    pub fn validate(&self) -> Result<()> {
        for q in &self.q_list {
            crate::diagnostics::criterion_exponent(*q)
                .map_err(|_| Error::Config(format!("q_list entry {q} must exceed 3/2")))?;
        }
        if let Some(c) = self.cfl {
            if !(c > 0.0 && c.is_finite()) {
                return Err(Error::Config(format!("cfl must be positive, got {c}")));
            }
        }
        Grid::new(self.verify_n).map_err(|e| Error::Config(format!("verify_n: {e}")))?;
        self.solver_settings().validate()?;
        Grid::new(self.n).map_err(|e| Error::Config(e.to_string()))?;
        Ok(())
    }

    fn solver_settings(&self) -> SolverConfig {
        SolverConfig {
            n: self.n,
            viscosity: self.viscosity,
            time_step: match self.cfl {
                Some(courant) => TimeStep::Cfl {
                    courant,
                    max_dt: self.dt,
                },
                None => TimeStep::Fixed(self.dt),
            },
            t_end: self.t_end,
            dealias: self.dealias,
            forcing: Forcing::None,
            record_every: self.record_every,
            extra_q: self.q_list.clone(),
        }
    }

    /// Forcing on `grid`, loading force snapshots if configured.
    pub fn forcing(&self, grid: &Grid) -> Result<Forcing> {
        let a = self.force_amplitude;
        Ok(match &self.force {
            ForceSpec::None => Forcing::None,
            ForceSpec::Shear => Forcing::shear(grid, a),
            ForceSpec::TaylorGreen => Forcing::taylor_green(grid, a),
            ForceSpec::Files(paths) => {
                let mut samples = Vec::with_capacity(paths.len());
                for p in paths {
                    let snap = Snapshot::load(p)?;
                    if snap.n != grid.n() {
                        return Err(Error::Config(format!(
                            "{}: force snapshot has n = {}, run uses n = {}",
                            p.display(),
                            snap.n,
                            grid.n()
                        )));
                    }
                    let mut f = snap.vector_field()?.to_spectral();
                    f.scale(a);
                    samples.push((snap.time, f));
                }
                samples.sort_by(|x, y| x.0.total_cmp(&y.0));
                if samples.len() == 1 {
                    Forcing::Steady(samples.pop().unwrap().1)
                } else {
                    Forcing::Sequence(samples)
                }
            }
        })
    }

    /// Solver settings, with forcing loaded.
    pub fn solver_config(&self) -> Result<SolverConfig> {
        let mut s = self.solver_settings();
        s.forcing = self.forcing(&Grid::new(self.n)?)?;
        Ok(s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_comments_and_defaults() {
        let raw = RawConfig::parse("# comment\nn = 16  # trailing\n\nviscosity=0.5\n").unwrap();
        let c = RunConfig::from_raw(&raw).unwrap();
        assert_eq!(c.n, 16);
        assert_eq!(c.viscosity, 0.5);
        assert_eq!(c.dt, 1e-3);
        assert_eq!(c.initial, InitialData::TaylorGreen);
    }

    #[test]
    fn later_layers_win() {
        let file = RawConfig::parse("n = 16\nt_end = 2").unwrap();
        let env = RawConfig::from_env(vec![
            ("STRAINFLOW_N".to_string(), "24".to_string()),
            ("HOME".to_string(), "/x".to_string()),
        ])
        .unwrap();
        let cli = RawConfig::from_args(&["--t-end", "3", "--dt=0.01"]).unwrap();
        let c = RunConfig::from_raw(&file.merge(env).merge(cli)).unwrap();
        assert_eq!((c.n, c.t_end, c.dt), (24, 3.0, 0.01));
    }

    #[test]
    fn rejects_bad_input() {
        assert!(RawConfig::parse("n 16").is_err());
        assert!(RawConfig::parse("grid = 16").is_err());
        assert!(RunConfig::from_raw(&RawConfig::parse("n = 15").unwrap()).is_err());
        assert!(RunConfig::from_raw(&RawConfig::parse("viscosity = -1").unwrap()).is_err());
        assert!(RunConfig::from_raw(&RawConfig::parse("q_list = 1.5").unwrap()).is_err());
        assert!(RunConfig::from_raw(&RawConfig::parse("initial_data = file").unwrap()).is_err());
        assert!(RawConfig::from_args(&["n", "16"]).is_err());
        assert!(RawConfig::from_args(&["--n"]).is_err());
    }

    #[test]
    fn random_and_toy_keys() {
        let raw = RawConfig::parse(
            "initial_data = random_div_free\nseed = 7\nmax_wavenumber = 3\namplitude = 0.2\n\
             toy_mode = sweep\ntoy_sweep_r = 0.5, 2, 4\nq_list = 3, inf",
        )
        .unwrap();
        let c = RunConfig::from_raw(&raw).unwrap();
        assert_eq!(
            c.initial,
            InitialData::RandomDivFree {
                seed: 7,
                max_wavenumber: 3,
                amplitude: 0.2
            }
        );
        let ToyMode::Sweep { lambda3, r } = &c.toy_mode else { panic!() };
        assert_eq!(lambda3.len(), 20);
        assert_eq!(r, &vec![0.5, 1.0, 1.5, 2.0]);
        assert_eq!(c.toy.t_end, 1e7);
        assert_eq!(c.q_list, vec![3.0, f64::INFINITY]);
    }
}
