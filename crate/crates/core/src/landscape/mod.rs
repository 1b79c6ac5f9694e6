//! ρMNK-landscapes: multiobjective NK-landscapes whose objectives share one
//! epistasis structure and whose component values are drawn with a common
//! pairwise correlation.
//!
//! Component tables are indexed by the pattern `(x_i, x_{i_1}, ..., x_{i_k})`
//! packed most-significant-first, with `x_i` as the top bit.

mod format;
mod solution;

use std::ops::Deref;

use rand::Rng;

use crate::copula::{CopulaSampler, CorrelationMatrix};
use crate::error::{Error, Result};
use crate::exec::Execution;
use crate::rng::{RandomStream, Substream};
use crate::stats;

pub use format::{load_instance, save_instance, FORMAT_VERSION};
pub use solution::Solution;

/// Largest supported `k`; tables hold `n * 2^(k+1) * m` values.
pub const MAX_K: usize = 24;

/// `m` objective values, each in `[0, 1)`.
#[derive(Debug, Clone, PartialEq)]
pub struct ObjectiveVector(pub Vec<f64>);

impl Deref for ObjectiveVector {
    type Target = [f64];

    fn deref(&self) -> &[f64] {
        &self.0
    }
}

impl AsRef<[f64]> for ObjectiveVector {
    fn as_ref(&self) -> &[f64] {
        &self.0
    }
}

impl From<Vec<f64>> for ObjectiveVector {
    fn from(v: Vec<f64>) -> Self {
        Self(v)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InstanceParams {
    pub n: usize,
    pub m: usize,
    pub k: usize,
    pub rho: f64,
    pub seed: u64,
}

impl InstanceParams {
    pub fn new(n: usize, m: usize, k: usize, rho: f64, seed: u64) -> Self {
        Self { n, m, k, rho, seed }
    }

    pub fn validate(&self) -> Result<()> {
        if self.n == 0 {
            return Err(Error::InvalidParams("n must be >= 1".into()));
        }
        if self.m == 0 {
            return Err(Error::InvalidParams("m must be >= 1".into()));
        }
        if self.k > self.n - 1 {
            return Err(Error::InvalidParams(format!(
                "k = {} exceeds n - 1 = {}",
                self.k,
                self.n - 1
            )));
        }
        if self.k > MAX_K {
            return Err(Error::InvalidParams(format!(
                "k = {} exceeds the supported maximum {MAX_K}",
                self.k
            )));
        }
        self.correlation().validate()
    }

    pub fn correlation(&self) -> CorrelationMatrix {
        CorrelationMatrix::new(self.m, self.rho)
    }

    pub fn rows_per_table(&self) -> usize {
        1 << (self.k + 1)
    }
}

/// For each bit `i`, the `k` other bits its component depends on.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EpistasisLinks(Vec<Vec<usize>>);

impl EpistasisLinks {
    pub fn new(links: Vec<Vec<usize>>, k: usize) -> Result<Self> {
        let n = links.len();
        for (i, list) in links.iter().enumerate() {
            if list.len() != k {
                return Err(Error::InvalidParams(format!(
                    "bit {i} has {} links, expected {k}",
                    list.len()
                )));
            }
            for (pos, &j) in list.iter().enumerate() {
                if j >= n || j == i || list[..pos].contains(&j) {
                    return Err(Error::InvalidParams(format!(
                        "bit {i} has invalid link {j}"
                    )));
                }
            }
        }
        Ok(Self(links))
    }

    /// Partial Fisher-Yates over `{0..n-1} \ {i}` for each `i` in order.
    fn sample<R: Rng + ?Sized>(n: usize, k: usize, rng: &mut R) -> Self {
        let links = (0..n)
            .map(|i| {
                let mut pool: Vec<usize> = (0..n).filter(|&j| j != i).collect();
                for t in 0..k {
                    let j = rng.random_range(t..pool.len());
                    pool.swap(t, j);
                }
                pool.truncate(k);
                pool
            })
            .collect();
        Self(links)
    }

    pub fn of(&self, i: usize) -> &[usize] {
        &self.0[i]
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

/// Per-bit tables of `2^(k+1)` rows by `m` objective values.
#[derive(Debug, Clone, PartialEq)]
pub struct ComponentTables {
    n: usize,
    rows: usize,
    m: usize,
    values: Vec<f64>,
}

impl ComponentTables {
    /// `values` is laid out as `[bit][row][objective]`.
    pub fn new(n: usize, k: usize, m: usize, values: Vec<f64>) -> Result<Self> {
        let rows = 1usize << (k + 1);
        if values.len() != n * rows * m {
            return Err(Error::InvalidParams(format!(
                "expected {} table values, found {}",
                n * rows * m,
                values.len()
            )));
        }
        if let Some(v) = values.iter().find(|v| !(0.0..1.0).contains(*v)) {
            return Err(Error::InvalidParams(format!(
                "table value {v} outside [0, 1)"
            )));
        }
        Ok(Self { n, rows, m, values })
    }

    #[inline]
    pub fn row(&self, bit: usize, row: usize) -> &[f64] {
        let start = (bit * self.rows + row) * self.m;
        &self.values[start..start + self.m]
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn bits(&self) -> usize {
        self.n
    }
}

/// An immutable ρMNK-landscape.
#[derive(Debug, Clone)]
pub struct RhoMnkInstance {
    params: InstanceParams,
    links: EpistasisLinks,
    tables: ComponentTables,
    /// For each bit `b`, the components reading `b` and the row-index mask
    /// of `b` inside each of them.
    dependents: Vec<Vec<(usize, usize)>>,
}

impl RhoMnkInstance {
    /// Draws links then tables from independent substreams of `params.seed`.
    pub fn generate(params: InstanceParams) -> Result<Self> {
        params.validate()?;
        let InstanceParams { n, m, k, .. } = params;
        let mut link_rng = RandomStream::new(params.seed, Substream::Links);
        let links = EpistasisLinks::sample(n, k, &mut link_rng);

        let sampler = CopulaSampler::new(&params.correlation())?;
        let mut table_rng = RandomStream::new(params.seed, Substream::Tables);
        let rows = params.rows_per_table();
        let mut values = vec![0.0; n * rows * m];
        for row in values.chunks_exact_mut(m) {
            sampler.sample_into(&mut table_rng, row);
        }
        let tables = ComponentTables::new(n, k, m, values)?;
        Self::from_parts(params, links, tables)
    }

    pub fn from_parts(
        params: InstanceParams,
        links: EpistasisLinks,
        tables: ComponentTables,
    ) -> Result<Self> {
        params.validate()?;
        if links.len() != params.n || tables.bits() != params.n {
            return Err(Error::InvalidParams(
                "links and tables must cover all n bits".into(),
            ));
        }
        if tables.rows() != params.rows_per_table() || tables.m != params.m {
            return Err(Error::InvalidParams("table shape does not match k, m".into()));
        }
        let links = EpistasisLinks::new(links.0, params.k)?;
        let mut dependents = vec![Vec::new(); params.n];
        for i in 0..params.n {
            dependents[i].push((i, 1usize << params.k));
            for (pos, &j) in links.of(i).iter().enumerate() {
                dependents[j].push((i, 1usize << (params.k - 1 - pos)));
            }
        }
        Ok(Self {
            params,
            links,
            tables,
            dependents,
        })
    }

    pub fn params(&self) -> &InstanceParams {
        &self.params
    }

    pub fn n(&self) -> usize {
        self.params.n
    }

    pub fn m(&self) -> usize {
        self.params.m
    }

    pub fn links(&self) -> &EpistasisLinks {
        &self.links
    }

    pub fn tables(&self) -> &ComponentTables {
        &self.tables
    }

    /// Row of component `bit`'s table selected by `s`.
    #[inline]
    pub fn row_index(&self, s: &Solution, bit: usize) -> usize {
        self.links
            .of(bit)
            .iter()
            .fold(s.get(bit) as usize, |idx, &j| (idx << 1) | s.get(j) as usize)
    }

    fn check_len(&self, s: &Solution) -> Result<()> {
        if s.len() != self.params.n {
            return Err(Error::LengthMismatch {
                expected: self.params.n,
                found: s.len(),
            });
        }
        Ok(())
    }

    /// Mean of the `n` component values, per objective.
    pub fn evaluate(&self, s: &Solution) -> Result<ObjectiveVector> {
        self.check_len(s)?;
        let mut acc = vec![0.0; self.params.m];
        for bit in 0..self.params.n {
            let row = self.tables.row(bit, self.row_index(s, bit));
            for (a, v) in acc.iter_mut().zip(row) {
                *a += v;
            }
        }
        let n = self.params.n as f64;
        acc.iter_mut().for_each(|a| *a /= n);
        Ok(ObjectiveVector(acc))
    }

    /// Objective vector of `s` with `bit` flipped, given `previous = evaluate(s)`.
    /// Only the components that read `bit` are touched.
    pub fn evaluate_flip(
        &self,
        s: &Solution,
        bit: usize,
        previous: &ObjectiveVector,
    ) -> Result<ObjectiveVector> {
        self.check_len(s)?;
        if bit >= self.params.n {
            return Err(Error::IndexOutOfRange {
                index: bit,
                len: self.params.n,
            });
        }
        if previous.len() != self.params.m {
            return Err(Error::DimensionMismatch {
                expected: self.params.m,
                found: previous.len(),
            });
        }
        let mut delta = vec![0.0; self.params.m];
        for &(comp, mask) in &self.dependents[bit] {
            let old = self.row_index(s, comp);
            let before = self.tables.row(comp, old);
            let after = self.tables.row(comp, old ^ mask);
            for ((d, a), b) in delta.iter_mut().zip(after).zip(before) {
                *d += a - b;
            }
        }
        let n = self.params.n as f64;
        Ok(ObjectiveVector(
            previous
                .iter()
                .zip(&delta)
                .map(|(p, d)| p + d / n)
                .collect(),
        ))
    }

    pub fn evaluate_batch(
        &self,
        solutions: &[Solution],
        exec: &Execution,
    ) -> Result<Vec<ObjectiveVector>> {
        exec.try_map(solutions, |s| self.evaluate(s))
    }

    /// Number of components recomputed when flipping `bit`.
    pub fn flip_fan_out(&self, bit: usize) -> usize {
        self.dependents[bit].len()
    }
}

/// Mean pairwise Pearson correlation between objectives over `samples`
/// uniformly random solutions. `None` when `m < 2`.
pub fn sample_objective_correlation<R: Rng + ?Sized>(
    instance: &RhoMnkInstance,
    samples: usize,
    rng: &mut R,
    exec: &Execution,
) -> Result<Option<f64>> {
    let m = instance.m();
    if m < 2 {
        return Ok(None);
    }
    let solutions: Vec<Solution> = (0..samples)
        .map(|_| Solution::random(instance.n(), rng))
        .collect();
    let objectives = instance.evaluate_batch(&solutions, exec)?;
    let columns: Vec<Vec<f64>> = (0..m)
        .map(|j| objectives.iter().map(|o| o[j]).collect())
        .collect();
    let mut total = 0.0;
    let mut pairs = 0;
    for a in 0..m {
        for b in a + 1..m {
            total += stats::pearson(&columns[a], &columns[b]);
            pairs += 1;
        }
    }
    Ok(Some(total / pairs as f64))
}
