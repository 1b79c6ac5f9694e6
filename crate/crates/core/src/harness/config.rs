use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::walks::DEFAULT_BUDGET;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WalkKind {
    Random,
    Adaptive,
}

impl FromStr for WalkKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "random" => Ok(WalkKind::Random),
            "adaptive" => Ok(WalkKind::Adaptive),
            other => Err(Error::InvalidConfig(format!(
                "walk kind must be `random` or `adaptive`, found {other:?}"
            ))),
        }
    }
}

impl fmt::Display for WalkKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            WalkKind::Random => "random",
            WalkKind::Adaptive => "adaptive",
        })
    }
}

/// A parameter grid plus the walk protocol run on every cell.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepConfig {
    pub n_values: Vec<usize>,
    pub m_values: Vec<usize>,
    pub k_values: Vec<usize>,
    pub rho_values: Vec<f64>,
    pub mu: usize,
    pub walk_kind: WalkKind,
    /// Random walk length (moves).
    pub walk_length: usize,
    /// Set-evaluation cap per adaptive walk.
    pub budget: usize,
    /// Largest lag reported for random walks.
    pub max_lag: usize,
    pub replicates: usize,
    pub base_seed: u64,
    pub output_path: Option<PathBuf>,
}

impl Default for SweepConfig {
    /// The full published grid: N = 64, M in {2, 3, 5}, K in {2, .., 10},
    /// nine correlation levels, 30 instances per cell.
    fn default() -> Self {
        Self {
            n_values: vec![64],
            m_values: vec![2, 3, 5],
            k_values: vec![2, 4, 6, 8, 10],
            rho_values: vec![-0.9, -0.7, -0.4, -0.2, 0.0, 0.2, 0.4, 0.7, 0.9],
            mu: 100,
            walk_kind: WalkKind::Random,
            walk_length: 5000,
            budget: DEFAULT_BUDGET,
            max_lag: 100,
            replicates: 30,
            base_seed: 0,
            output_path: None,
        }
    }
}

impl SweepConfig {
    /// Reduced grid that finishes in minutes.
    pub fn desk_scale(mut self) -> Self {
        self.k_values = vec![2, 6, 10];
        self.rho_values = vec![-0.4, 0.0, 0.4, 0.9];
        self.replicates = 10;
        self
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |msg: &str| Err(Error::InvalidConfig(msg.into()));
        if self.n_values.is_empty()
            || self.m_values.is_empty()
            || self.k_values.is_empty()
            || self.rho_values.is_empty()
        {
            return bad("every grid axis needs at least one value");
        }
        if self.replicates == 0 {
            return bad("replicates must be >= 1");
        }
        if self.mu == 0 {
            return bad("mu must be >= 1");
        }
        if self.walk_kind == WalkKind::Random && self.walk_length == 0 {
            return bad("walk length must be >= 1");
        }
        if self.walk_kind == WalkKind::Adaptive && self.budget == 0 {
            return bad("budget must be >= 1");
        }
        if self.max_lag == 0 {
            return bad("max lag must be >= 1");
        }
        if self.rho_values.iter().any(|r| !r.is_finite()) {
            return bad("rho values must be finite");
        }
        Ok(())
    }
}

/// Optional settings from a config file or the command line. Later
/// sources override earlier ones field by field.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct ConfigOverrides {
    pub n_values: Option<Vec<usize>>,
    pub m_values: Option<Vec<usize>>,
    pub k_values: Option<Vec<usize>>,
    pub rho_values: Option<Vec<f64>>,
    pub mu: Option<usize>,
    pub walk_kind: Option<WalkKind>,
    pub walk_length: Option<usize>,
    pub budget: Option<usize>,
    pub max_lag: Option<usize>,
    pub replicates: Option<usize>,
    pub base_seed: Option<u64>,
    pub output_path: Option<PathBuf>,
    pub desk_scale: Option<bool>,
    pub threads: Option<usize>,
}

fn parse_list<T: FromStr>(key: &str, value: &str) -> Result<Vec<T>> {
    value
        .split(',')
        .map(|v| {
            v.trim()
                .parse()
                .map_err(|_| Error::InvalidConfig(format!("bad value {v:?} for `{key}`")))
        })
        .collect()
}

fn parse_one<T: FromStr>(key: &str, value: &str) -> Result<T> {
    value
        .trim()
        .parse()
        .map_err(|_| Error::InvalidConfig(format!("bad value {value:?} for `{key}`")))
}

impl ConfigOverrides {
    /// Parses `key = value` lines; `#` starts a comment. Lists are
    /// comma-separated.
    pub fn parse(text: &str) -> Result<Self> {
        let mut o = ConfigOverrides::default();
        for (idx, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| {
                Error::InvalidConfig(format!("line {}: expected `key = value`", idx + 1))
            })?;
            let key = key.trim().replace('-', "_");
            let value = value.trim();
            let at = |e: Error| match e {
                Error::InvalidConfig(msg) => Error::InvalidConfig(format!("line {}: {msg}", idx + 1)),
                other => other,
            };
            match key.as_str() {
                "n" => o.n_values = Some(parse_list(&key, value).map_err(at)?),
                "m" => o.m_values = Some(parse_list(&key, value).map_err(at)?),
                "k" => o.k_values = Some(parse_list(&key, value).map_err(at)?),
                "rho" => o.rho_values = Some(parse_list(&key, value).map_err(at)?),
                "mu" => o.mu = Some(parse_one(&key, value).map_err(at)?),
                "kind" | "walk" => o.walk_kind = Some(value.parse().map_err(at)?),
                "length" => o.walk_length = Some(parse_one(&key, value).map_err(at)?),
                "budget" => o.budget = Some(parse_one(&key, value).map_err(at)?),
                "max_lag" => o.max_lag = Some(parse_one(&key, value).map_err(at)?),
                "replicates" => o.replicates = Some(parse_one(&key, value).map_err(at)?),
                "seed" => o.base_seed = Some(parse_one(&key, value).map_err(at)?),
                "out" => o.output_path = Some(PathBuf::from(value)),
                "desk_scale" => o.desk_scale = Some(parse_one(&key, value).map_err(at)?),
                "threads" => o.threads = Some(parse_one(&key, value).map_err(at)?),
                other => {
                    return Err(Error::InvalidConfig(format!(
                        "line {}: unknown key `{other}`",
                        idx + 1
                    )))
                }
            }
        }
        Ok(o)
    }

    pub fn apply(&self, c: &mut SweepConfig) {
        macro_rules! take {
            ($($field:ident),*) => {
                $(if let Some(v) = &self.$field { c.$field = v.clone(); })*
            };
        }
        take!(
            n_values, m_values, k_values, rho_values, mu, walk_kind, walk_length, budget,
            max_lag, replicates, base_seed
        );
        if let Some(p) = &self.output_path {
            c.output_path = Some(p.clone());
        }
    }

    /// Builds the effective config from file settings and command-line
    /// settings (the latter win). The desk preset, if requested by either,
    /// is applied first.
    pub fn resolve(file: &ConfigOverrides, cli: &ConfigOverrides) -> SweepConfig {
        let desk = cli.desk_scale.or(file.desk_scale).unwrap_or(false);
        let mut c = SweepConfig::default();
        if desk {
            c = c.desk_scale();
        }
        file.apply(&mut c);
        cli.apply(&mut c);
        c
    }
}
