//! Run configuration: command-line flags layered over an optional
//! `key = value` file.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::problems::ExperimentId;
use crate::pushforward::EmbeddingMode;
use crate::schemes::{ExtensionMode, Order};

pub const OUT_ENV: &str = "SURFEMBED_OUT";
pub const DEFAULT_OUT: &str = "out";
pub const MIN_POINTS: usize = 41;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunConfig {
    pub experiment: ExperimentId,
    pub n: Vec<usize>,
    pub order: Order,
    pub cfl: f64,
    pub embedding: EmbeddingMode,
    pub extension: ExtensionMode,
    pub t_final: Option<f64>,
    /// Number of equally spaced output times in `(0, t_final]`; 0 means the
    /// final time only.
    pub snapshots: usize,
    pub out: PathBuf,
}

impl RunConfig {
    pub fn new(experiment: ExperimentId) -> Self {
        Self {
            experiment,
            n: vec![81],
            order: Order::Third,
            cfl: 0.5,
            embedding: EmbeddingMode::PushForward,
            extension: ExtensionMode::Neumann,
            t_final: None,
            snapshots: 0,
            out: PathBuf::from(DEFAULT_OUT),
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.n.is_empty() {
            return Err(Error::Config("at least one grid size is required".into()));
        }
        if let Some(&n) = self.n.iter().find(|&&n| n < MIN_POINTS) {
            return Err(Error::Config(format!("n = {n} is below the minimum of {MIN_POINTS}")));
        }
        if !(self.cfl > 0.0 && self.cfl <= 1.0) {
            return Err(Error::Config(format!("cfl must lie in (0, 1], got {}", self.cfl)));
        }
        if let Some(t) = self.t_final {
            if !(t > 0.0 && t.is_finite()) {
                return Err(Error::Config(format!("final time must be positive, got {t}")));
            }
        }
        Ok(())
    }

    /// Equally spaced output times ending at `t_final`.
    pub fn output_times(&self, t_final: f64) -> Vec<f64> {
        if self.snapshots == 0 {
            return vec![t_final];
        }
        let k = self.snapshots;
        (1..=k).map(|i| if i == k { t_final } else { t_final * i as f64 / k as f64 }).collect()
    }
}

/// Raw settings before defaults are applied; every field optional.
#[derive(Clone, Debug, Default)]
pub struct PartialConfig {
    pub experiment: Option<ExperimentId>,
    pub n: Option<Vec<usize>>,
    pub order: Option<Order>,
    pub cfl: Option<f64>,
    pub embedding: Option<EmbeddingMode>,
    pub extension: Option<ExtensionMode>,
    pub t_final: Option<f64>,
    pub snapshots: Option<usize>,
    pub out: Option<PathBuf>,
}

pub fn parse_n_list(s: &str) -> Result<Vec<usize>> {
    s.split(',')
        .map(|p| {
            p.trim()
                .parse::<usize>()
                .map_err(|_| Error::Config(format!("invalid grid size '{p}'")))
        })
        .collect()
}

pub fn parse_order(s: &str) -> Result<Order> {
    match s.trim() {
        "1" => Ok(Order::First),
        "3" => Ok(Order::Third),
        other => Err(Error::Config(format!("order must be 1 or 3, got '{other}'"))),
    }
}

fn parse_f64(key: &str, v: &str) -> Result<f64> {
    v.parse().map_err(|_| Error::Config(format!("{key}: invalid number '{v}'")))
}

impl PartialConfig {
    /// Parses `key = value` lines; `#` starts a comment.
    pub fn parse_file_text(text: &str) -> Result<Self> {
        let mut map = BTreeMap::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (k, v) = line
                .split_once('=')
                .ok_or_else(|| Error::Config(format!("line {}: expected key = value", lineno + 1)))?;
            map.insert(k.trim().replace('-', "_"), v.trim().to_string());
        }
        let mut c = Self::default();
        for (k, v) in map {
            match k.as_str() {
                "experiment" => c.experiment = Some(v.parse()?),
                "n" => c.n = Some(parse_n_list(&v)?),
                "order" => c.order = Some(parse_order(&v)?),
                "cfl" => c.cfl = Some(parse_f64("cfl", &v)?),
                "embedding" => c.embedding = Some(v.parse()?),
                "extension" => c.extension = Some(v.parse()?),
                "t_final" => c.t_final = Some(parse_f64("t_final", &v)?),
                "snapshots" => {
                    c.snapshots = Some(v.parse().map_err(|_| Error::Config(format!("snapshots: invalid count '{v}'")))?)
                }
                "out" => c.out = Some(PathBuf::from(v)),
                other => return Err(Error::Config(format!("unknown key '{other}'"))),
            }
        }
        Ok(c)
    }

    pub fn from_file(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Config(format!("cannot read {}: {e}", path.display())))?;
        Self::parse_file_text(&text)
    }

    /// Fields set in `self` win over `base`.
    pub fn over(self, base: PartialConfig) -> PartialConfig {
        PartialConfig {
            experiment: self.experiment.or(base.experiment),
            n: self.n.or(base.n),
            order: self.order.or(base.order),
            cfl: self.cfl.or(base.cfl),
            embedding: self.embedding.or(base.embedding),
            extension: self.extension.or(base.extension),
            t_final: self.t_final.or(base.t_final),
            snapshots: self.snapshots.or(base.snapshots),
            out: self.out.or(base.out),
        }
    }

    /// Applies defaults; the output directory falls back to `env_out`, then
    /// to `out`.
    pub fn resolve(self, env_out: Option<PathBuf>) -> Result<RunConfig> {
        let experiment = self
            .experiment
            .ok_or_else(|| Error::Config("no experiment given".into()))?;
        let d = RunConfig::new(experiment);
        let cfg = RunConfig {
            experiment,
            n: self.n.unwrap_or(d.n),
            order: self.order.unwrap_or(d.order),
            cfl: self.cfl.unwrap_or(d.cfl),
            embedding: self.embedding.unwrap_or(d.embedding),
            extension: self.extension.unwrap_or(d.extension),
            t_final: self.t_final,
            snapshots: self.snapshots.unwrap_or(d.snapshots),
            out: self.out.or(env_out).unwrap_or(d.out),
        };
        cfg.validate()?;
        Ok(cfg)
    }
}
