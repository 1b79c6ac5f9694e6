//! Random walks with autocorrelation analysis, and first-improvement
//! adaptive walks over the replacement neighborhood.

use rand::Rng;

use crate::error::{Error, Result};
use crate::landscape::RhoMnkInstance;
use crate::pareto;
use crate::setspace::{
    random_set, replacement_moves, sample_replacement_move, ReplacementMove, SolutionSet,
};

/// Default cap on set evaluations for one adaptive walk.
pub const DEFAULT_BUDGET: usize = 1_000_000;

/// Trace of a walk. `fitness_series[0]` is the starting set's hypervolume.
#[derive(Debug, Clone)]
pub struct WalkRecord {
    pub fitness_series: Vec<f64>,
    /// Random walks: moves made. Adaptive walks: accepted (improving) moves.
    pub steps_taken: usize,
    pub final_set: SolutionSet,
    pub nondominated_count: usize,
    /// Set evaluations, including the starting set.
    pub evaluations_used: usize,
    /// Adaptive walks only: the final set was verified to be a local optimum.
    pub certified: bool,
}

impl WalkRecord {
    pub fn final_fitness(&self) -> f64 {
        *self.fitness_series.last().expect("series holds the start")
    }
}

/// Number of mutually non-dominated objective vectors among the members.
pub fn nondominated_count(set: &SolutionSet) -> usize {
    pareto::nondominated_filter(set.objectives())
        .map(|f| f.len())
        .unwrap_or(0)
}

/// Walk of `length` unconditional random replacement moves from a random
/// `mu`-set.
pub fn random_walk<R: Rng + ?Sized>(
    instance: &RhoMnkInstance,
    mu: usize,
    length: usize,
    rng: &mut R,
) -> Result<WalkRecord> {
    let start = random_set(instance, mu, rng)?;
    random_walk_from(instance, start, length, rng)
}

pub fn random_walk_from<R: Rng + ?Sized>(
    instance: &RhoMnkInstance,
    start: SolutionSet,
    length: usize,
    rng: &mut R,
) -> Result<WalkRecord> {
    let n = instance.n();
    let mut current = start;
    let mut series = Vec::with_capacity(length + 1);
    series.push(current.evaluate_fitness());
    for _ in 0..length {
        let mv = sample_replacement_move(&current, n, rng)?;
        let (incoming, f) = current.replacement_fitness(instance, mv);
        current = current.replaced(mv, incoming, Some(f));
        series.push(f);
    }
    Ok(WalkRecord {
        fitness_series: series,
        steps_taken: length,
        nondominated_count: nondominated_count(&current),
        final_set: current,
        evaluations_used: length + 1,
        certified: false,
    })
}

/// First-improvement hill climbing from a random `mu`-set.
pub fn adaptive_walk<R: Rng + ?Sized>(
    instance: &RhoMnkInstance,
    mu: usize,
    rng: &mut R,
    budget: usize,
) -> Result<WalkRecord> {
    let start = random_set(instance, mu, rng)?;
    Ok(adaptive_walk_from(instance, start, rng, budget))
}

/// Each round draws (member, bit) cells uniformly without replacement and
/// accepts the first strictly better neighbor. A round that exhausts the
/// grid certifies a local optimum; hitting `budget` ends the walk
/// uncertified.
pub fn adaptive_walk_from<R: Rng + ?Sized>(
    instance: &RhoMnkInstance,
    start: SolutionSet,
    rng: &mut R,
    budget: usize,
) -> WalkRecord {
    let n = instance.n();
    let mut current = start;
    let mut current_fit = current.evaluate_fitness();
    let mut series = vec![current_fit];
    let mut evaluations = 1usize;
    let mut cells: Vec<usize> = Vec::with_capacity(current.len() * n);

    let certified = 'walk: loop {
        cells.clear();
        cells.extend(0..current.len() * n);
        let mut remaining = cells.len();
        loop {
            if remaining == 0 {
                break 'walk true;
            }
            let pick = rng.random_range(0..remaining);
            let cell = cells[pick];
            cells.swap(pick, remaining - 1);
            remaining -= 1;

            let mv = ReplacementMove {
                member: cell / n,
                bit: cell % n,
            };
            if !current.is_valid_move(mv) {
                continue;
            }
            if evaluations >= budget {
                break 'walk false;
            }
            let (incoming, f) = current.replacement_fitness(instance, mv);
            evaluations += 1;
            if f > current_fit {
                current = current.replaced(mv, incoming, Some(f));
                current_fit = f;
                series.push(f);
                continue 'walk;
            }
        }
    };

    WalkRecord {
        steps_taken: series.len() - 1,
        fitness_series: series,
        nondominated_count: nondominated_count(&current),
        final_set: current,
        evaluations_used: evaluations,
        certified,
    }
}

/// No valid replacement neighbor has strictly greater hypervolume.
pub fn local_optimum_check(instance: &RhoMnkInstance, set: &SolutionSet) -> bool {
    let f = set.fitness();
    replacement_moves(set, instance.n()).all(|mv| set.replacement_fitness(instance, mv).1 <= f)
}

/// Estimated autocorrelations `r(1..=k_max)` and the correlation length.
#[derive(Debug, Clone, PartialEq)]
pub struct AutocorrelationResult {
    /// `r[k - 1]` holds `r(k)`.
    pub r: Vec<f64>,
    /// `-1 / ln r(1)`, absent unless `0 < r(1) < 1`.
    pub tau: Option<f64>,
    pub series_length: usize,
}

impl AutocorrelationResult {
    pub fn r(&self, lag: usize) -> f64 {
        if lag == 0 {
            1.0
        } else {
            self.r[lag - 1]
        }
    }

    pub fn length(&self) -> Result<f64> {
        self.tau.ok_or(Error::UndefinedLength { r1: self.r(1) })
    }
}

/// Correlation length `-1 / ln r1`.
pub fn correlation_length(r1: f64) -> Result<f64> {
    if r1 > 0.0 && r1 < 1.0 {
        Ok(-1.0 / r1.ln())
    } else {
        Err(Error::UndefinedLength { r1 })
    }
}

/// `r(k) = sum_{j<L-k} (f_j - mean)(f_{j+k} - mean) / sum_j (f_j - mean)^2`.
pub fn autocorrelation(series: &[f64], k_max: usize) -> Result<AutocorrelationResult> {
    let len = series.len();
    if k_max == 0 || len < k_max + 2 {
        return Err(Error::SeriesTooShort { len, k_max });
    }
    let mean = series.iter().sum::<f64>() / len as f64;
    let dev: Vec<f64> = series.iter().map(|f| f - mean).collect();
    let denom: f64 = dev.iter().map(|d| d * d).sum();
    if denom == 0.0 {
        return Err(Error::ZeroVariance);
    }
    let r: Vec<f64> = (1..=k_max)
        .map(|k| dev.iter().zip(&dev[k..]).map(|(a, b)| a * b).sum::<f64>() / denom)
        .collect();
    let tau = correlation_length(r[0]).ok();
    Ok(AutocorrelationResult {
        r,
        tau,
        series_length: len,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::landscape::{ComponentTables, EpistasisLinks, InstanceParams, Solution};
    use crate::rng::RandomStream;

    #[test]
    fn hand_evaluated_estimator() {
        let res = autocorrelation(&[1.0, 2.0, 3.0, 4.0], 1).unwrap();
        assert!((res.r(1) - 0.25).abs() < 1e-15);
        assert_eq!(res.r(0), 1.0);
        assert_eq!(res.series_length, 4);
        // r(2) = ((-1.5)(0.5) + (-0.5)(1.5)) / 5 = -0.3
        let res = autocorrelation(&[1.0, 2.0, 3.0, 4.0], 2).unwrap();
        assert!((res.r(2) + 0.3).abs() < 1e-15);
    }

    #[test]
    fn length_inversion() {
        assert!((correlation_length((-1.0f64).exp()).unwrap() - 1.0).abs() < 1e-15);
        assert!(matches!(correlation_length(0.0), Err(Error::UndefinedLength { .. })));
        assert!(matches!(correlation_length(-0.3), Err(Error::UndefinedLength { .. })));
        assert!(matches!(correlation_length(1.0), Err(Error::UndefinedLength { .. })));
    }

    #[test]
    fn estimator_errors() {
        assert!(matches!(autocorrelation(&[2.0; 10], 1), Err(Error::ZeroVariance)));
        assert!(matches!(
            autocorrelation(&[1.0, 2.0, 3.0], 2),
            Err(Error::SeriesTooShort { .. })
        ));
        // alternating series: r(1) < 0, so tau is absent
        let alt: Vec<f64> = (0..20).map(|i| (i % 2) as f64).collect();
        let res = autocorrelation(&alt, 1).unwrap();
        assert!(res.tau.is_none());
        assert!(res.length().is_err());
    }

    #[test]
    fn iid_series_has_small_lag_one_correlation() {
        let mut rng = RandomStream::from_seed(17);
        let series: Vec<f64> = (0..5000).map(|_| rng.random()).collect();
        let res = autocorrelation(&series, 1).unwrap();
        assert!(res.r(1).abs() < 0.05);
    }

    fn flat_instance() -> RhoMnkInstance {
        let n = 8;
        let k = 1;
        let params = InstanceParams::new(n, 2, k, 0.0, 0);
        let links = (0..n).map(|i| vec![(i + 1) % n]).collect();
        let tables = ComponentTables::new(n, k, 2, vec![0.5; n * 4 * 2]).unwrap();
        RhoMnkInstance::from_parts(params, EpistasisLinks::new(links, k).unwrap(), tables).unwrap()
    }

    #[test]
    fn flat_landscape_start_is_optimal() {
        let inst = flat_instance();
        let mut rng = RandomStream::from_seed(2);
        let rec = adaptive_walk(&inst, 4, &mut rng, DEFAULT_BUDGET).unwrap();
        assert_eq!(rec.steps_taken, 0);
        assert!(rec.certified);
        assert_eq!(rec.fitness_series, vec![0.25]);
        // every valid (member, bit) cell is evaluated once
        assert_eq!(rec.evaluations_used, 1 + replacement_moves(&rec.final_set, 8).count());
        assert!(local_optimum_check(&inst, &rec.final_set));
    }

    #[test]
    fn budget_exhaustion_is_flagged() {
        let inst = RhoMnkInstance::generate(InstanceParams::new(32, 2, 2, 0.0, 8)).unwrap();
        let mut rng = RandomStream::from_seed(3);
        let rec = adaptive_walk(&inst, 10, &mut rng, 5).unwrap();
        assert!(!rec.certified);
        assert_eq!(rec.evaluations_used, 5);
    }

    #[test]
    fn random_walk_lengths() {
        let inst = RhoMnkInstance::generate(InstanceParams::new(16, 2, 2, 0.0, 1)).unwrap();
        let mut rng = RandomStream::from_seed(3);
        let rec = random_walk(&inst, 5, 1, &mut rng).unwrap();
        assert_eq!(rec.fitness_series.len(), 2);
        assert_eq!(rec.final_set.len(), 5);
    }

    #[test]
    fn nondominated_count_examples() {
        let inst = RhoMnkInstance::generate(InstanceParams::new(10, 2, 1, 0.0, 4)).unwrap();
        let single = SolutionSet::from_solutions(&inst, vec![Solution::zeros(10)]).unwrap();
        assert_eq!(nondominated_count(&single), 1);
        // with m = 1 any set is a chain
        let inst1 = RhoMnkInstance::generate(InstanceParams::new(10, 1, 1, 0.0, 4)).unwrap();
        let chain = SolutionSet::from_solutions(
            &inst1,
            (0..3).map(|i| Solution::from_index(10, i)).collect(),
        )
        .unwrap();
        assert_eq!(nondominated_count(&chain), 1);
    }
}
