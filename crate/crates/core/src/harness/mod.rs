//! Parameter sweeps over replicated instances, with long-format CSV output.

mod config;
mod seed;

use std::collections::HashMap;
use std::hash::Hash;
use std::path::{Path, PathBuf};

use serde::Serialize;

use crate::copula::CorrelationMatrix;
use crate::error::{Error, Result};
use crate::exec::Execution;
use crate::landscape::{InstanceParams, RhoMnkInstance};
use crate::rng::{RandomStream, Substream};
use crate::stats;
use crate::walks::{adaptive_walk, autocorrelation, random_walk};

pub use config::{ConfigOverrides, SweepConfig, WalkKind};
pub use seed::{derive_seed, CellKey, SeedRole};

/// One metric measured on one (instance, walk).
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ResultRow {
    pub n: usize,
    pub m: usize,
    pub k: usize,
    pub rho: f64,
    pub mu: usize,
    pub instance_seed: u64,
    pub walk_seed: u64,
    pub metric: String,
    pub value: f64,
}

/// Mean, sample standard deviation and count of the defined (non-NaN)
/// values in a group; `excluded` counts the NaN ones.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Summary {
    pub mean: f64,
    pub std: f64,
    pub count: usize,
    pub excluded: usize,
}

impl Summary {
    pub fn of(values: &[f64]) -> Self {
        let defined: Vec<f64> = values.iter().copied().filter(|v| !v.is_nan()).collect();
        let excluded = values.len() - defined.len();
        if defined.is_empty() {
            return Summary {
                mean: f64::NAN,
                std: f64::NAN,
                count: 0,
                excluded,
            };
        }
        Summary {
            mean: stats::mean(&defined),
            std: stats::std_dev(&defined),
            count: defined.len(),
            excluded,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AggregateRow {
    pub n: usize,
    pub m: usize,
    pub k: usize,
    pub rho: f64,
    pub mu: usize,
    pub metric: String,
    pub mean: f64,
    pub std: f64,
    pub count: usize,
    pub excluded: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SkippedCell {
    pub n: usize,
    pub m: usize,
    pub k: usize,
    pub rho: f64,
    pub reason: String,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepOutput {
    pub rows: Vec<ResultRow>,
    pub aggregates: Vec<AggregateRow>,
    pub skipped: Vec<SkippedCell>,
}

/// Groups rows by `key` in first-appearance order and summarises `value`.
pub fn summarize<K, F>(rows: &[ResultRow], key: F) -> Vec<(K, Summary)>
where
    K: Eq + Hash + Clone,
    F: Fn(&ResultRow) -> K,
{
    let mut index: HashMap<K, usize> = HashMap::new();
    let mut groups: Vec<(K, Vec<f64>)> = Vec::new();
    for row in rows {
        let k = key(row);
        let slot = *index.entry(k.clone()).or_insert_with(|| {
            groups.push((k, Vec::new()));
            groups.len() - 1
        });
        groups[slot].1.push(row.value);
    }
    groups
        .into_iter()
        .map(|(k, vals)| (k, Summary::of(&vals)))
        .collect()
}

/// Aggregates per (cell, metric).
pub fn summarize_cells(rows: &[ResultRow]) -> Vec<AggregateRow> {
    summarize(rows, |r| {
        (r.n, r.m, r.k, r.rho.to_bits(), r.mu, r.metric.clone())
    })
    .into_iter()
    .map(|((n, m, k, rho, mu, metric), s)| AggregateRow {
        n,
        m,
        k,
        rho: f64::from_bits(rho),
        mu,
        metric,
        mean: s.mean,
        std: s.std,
        count: s.count,
        excluded: s.excluded,
    })
    .collect()
}

/// Metric names emitted per walk, in row order.
pub fn metric_names(config: &SweepConfig) -> Vec<String> {
    match config.walk_kind {
        WalkKind::Random => {
            let lags = random_walk_lags(config);
            (1..=lags)
                .map(|k| format!("r{k}"))
                .chain(std::iter::once("tau".to_string()))
                .collect()
        }
        WalkKind::Adaptive => [
            "steps_taken",
            "evaluations_used",
            "final_hypervolume",
            "nondominated_count",
            "certified",
        ]
        .iter()
        .map(|s| s.to_string())
        .collect(),
    }
}

fn random_walk_lags(config: &SweepConfig) -> usize {
    // the series holds length + 1 values and the estimator needs k_max + 2
    config.max_lag.min(config.walk_length.saturating_sub(1)).max(1)
}

struct Unit {
    cell: CellKey,
    replicate: usize,
}

fn feasibility(n: usize, m: usize, k: usize, rho: f64) -> std::result::Result<(), String> {
    InstanceParams::new(n, m, k, rho, 0)
        .validate()
        .map_err(|e| e.to_string())?;
    CorrelationMatrix::new(m, rho)
        .validate()
        .map_err(|e| e.to_string())
}

fn run_unit(config: &SweepConfig, unit: &Unit) -> Result<Vec<ResultRow>> {
    let c = unit.cell;
    let instance_seed = derive_seed(config.base_seed, &c, unit.replicate, SeedRole::Instance);
    let walk_seed = derive_seed(config.base_seed, &c, unit.replicate, SeedRole::Walk);
    let instance = RhoMnkInstance::generate(InstanceParams::new(c.n, c.m, c.k, c.rho, instance_seed))?;
    let mut rng = RandomStream::new(walk_seed, Substream::Walk);

    let values: Vec<f64> = match config.walk_kind {
        WalkKind::Random => {
            let lags = random_walk_lags(config);
            let rec = random_walk(&instance, c.mu, config.walk_length, &mut rng)?;
            match autocorrelation(&rec.fitness_series, lags) {
                Ok(ac) => ac
                    .r
                    .iter()
                    .copied()
                    .chain(std::iter::once(ac.tau.unwrap_or(f64::NAN)))
                    .collect(),
                Err(Error::ZeroVariance) => vec![f64::NAN; lags + 1],
                Err(e) => return Err(e),
            }
        }
        WalkKind::Adaptive => {
            let rec = adaptive_walk(&instance, c.mu, &mut rng, config.budget)?;
            vec![
                rec.steps_taken as f64,
                rec.evaluations_used as f64,
                rec.final_fitness(),
                rec.nondominated_count as f64,
                if rec.certified { 1.0 } else { 0.0 },
            ]
        }
    };

    Ok(metric_names(config)
        .into_iter()
        .zip(values)
        .map(|(metric, value)| ResultRow {
            n: c.n,
            m: c.m,
            k: c.k,
            rho: c.rho,
            mu: c.mu,
            instance_seed,
            walk_seed,
            metric,
            value,
        })
        .collect())
}

/// Runs every feasible cell `replicates` times. Infeasible cells (bad
/// `(m, rho)` or `k > n - 1`) are reported in `skipped` and never run.
/// Rows come out sorted by (cell in grid order, replicate, metric).
pub fn run_sweep(config: &SweepConfig, exec: &Execution) -> Result<SweepOutput> {
    config.validate()?;
    let mut units = Vec::new();
    let mut skipped = Vec::new();
    for &n in &config.n_values {
        for &m in &config.m_values {
            for &k in &config.k_values {
                for &rho in &config.rho_values {
                    if let Err(reason) = feasibility(n, m, k, rho) {
                        skipped.push(SkippedCell { n, m, k, rho, reason });
                        continue;
                    }
                    if config.mu as u128 > 1u128 << n.min(127) {
                        return Err(Error::InvalidConfig(format!(
                            "mu = {} exceeds 2^{n} solutions",
                            config.mu
                        )));
                    }
                    let cell = CellKey {
                        n,
                        m,
                        k,
                        rho,
                        mu: config.mu,
                    };
                    units.extend((0..config.replicates).map(|replicate| Unit { cell, replicate }));
                }
            }
        }
    }
    let rows: Vec<ResultRow> = exec
        .try_map(&units, |u| run_unit(config, u))?
        .into_iter()
        .flatten()
        .collect();
    let aggregates = summarize_cells(&rows);
    Ok(SweepOutput {
        rows,
        aggregates,
        skipped,
    })
}

/// `results.csv` -> `results.summary.csv`.
pub fn summary_path(path: &Path) -> PathBuf {
    let stem = path
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| "results".into());
    path.with_file_name(format!("{stem}.summary.csv"))
}

pub fn write_rows<W: std::io::Write>(rows: &[ResultRow], w: W) -> Result<()> {
    let mut out = csv::Writer::from_writer(w);
    for r in rows {
        out.serialize(r)?;
    }
    out.flush().map_err(|e| Error::io("<csv>", e))
}

pub fn write_aggregates<W: std::io::Write>(rows: &[AggregateRow], w: W) -> Result<()> {
    let mut out = csv::Writer::from_writer(w);
    for r in rows {
        out.serialize(r)?;
    }
    out.flush().map_err(|e| Error::io("<csv>", e))
}

/// Writes the per-run rows to `path` and aggregates to the sibling summary
/// file. Returns the summary path.
pub fn write_outputs(output: &SweepOutput, path: &Path) -> Result<PathBuf> {
    let open = |p: &Path| std::fs::File::create(p).map_err(|e| Error::io(p, e));
    write_rows(&output.rows, std::io::BufWriter::new(open(path)?))?;
    let summary = summary_path(path);
    write_aggregates(&output.aggregates, std::io::BufWriter::new(open(&summary)?))?;
    Ok(summary)
}
