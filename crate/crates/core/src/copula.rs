//! Correlated uniform sampling through a Gaussian copula.
//!
//! A draw is `u_j = Phi(y_j)` with `y ~ N(0, R)`. For the uniforms to reach
//! a Pearson correlation `c`, the normal correlation is pre-adjusted to
//! `r = 2 sin(pi c / 6)`, the exact inverse of `c = (6 / pi) asin(r / 2)`.

use rand::Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};

/// Smallest eigenvalue kept when the adjusted matrix leaves the PSD cone.
const EIGEN_FLOOR: f64 = 1e-10;

/// Largest `f64` strictly below one.
const BELOW_ONE: f64 = 1.0 - f64::EPSILON / 2.0;

/// An `m x m` correlation matrix with unit diagonal and a common
/// off-diagonal value `rho`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CorrelationMatrix {
    pub m: usize,
    pub rho: f64,
}

impl CorrelationMatrix {
    pub fn new(m: usize, rho: f64) -> Self {
        Self { m, rho }
    }

    /// Lower bound on `rho` for positive semi-definiteness, `None` when `m < 2`.
    pub fn lower_bound(m: usize) -> Option<f64> {
        (m >= 2).then(|| -1.0 / (m as f64 - 1.0))
    }

    pub fn validate(&self) -> Result<()> {
        let infeasible = Error::InfeasibleCorrelation {
            m: self.m,
            rho: self.rho,
        };
        if self.m == 0 {
            return Err(Error::InvalidParams("objective count must be >= 1".into()));
        }
        if self.m == 1 {
            return Ok(());
        }
        if !self.rho.is_finite() || self.rho > 1.0 {
            return Err(infeasible);
        }
        match Self::lower_bound(self.m) {
            Some(lb) if self.rho <= lb => Err(infeasible),
            _ => Ok(()),
        }
    }

    pub fn entry(&self, row: usize, col: usize) -> f64 {
        if row == col {
            1.0
        } else {
            self.rho
        }
    }

    /// Off-diagonal correlation of the underlying normal vector.
    ///
    /// Near the feasibility bound the sine adjustment can push the matrix
    /// out of the PSD cone (for `m >= 3`). The offending eigenvalue
    /// `1 + (m - 1) r` is then clipped to a small positive floor and the
    /// diagonal renormalised to one.
    pub fn normal_correlation(&self) -> f64 {
        if self.m < 2 {
            return 0.0;
        }
        if self.rho >= 1.0 {
            // 2 sin(pi / 6) rounds just below one
            return 1.0;
        }
        let r = 2.0 * (std::f64::consts::PI * self.rho / 6.0).sin();
        let m = self.m as f64;
        let smallest = 1.0 + (m - 1.0) * r;
        if smallest >= EIGEN_FLOOR {
            return r;
        }
        // eigen-decomposition of the equicorrelated matrix:
        // lambda_1 = 1 + (m-1) r on the all-ones vector, lambda_2 = 1 - r elsewhere
        let other = 1.0 - r;
        let diag = EIGEN_FLOOR / m + other * (m - 1.0) / m;
        let off = (EIGEN_FLOOR - other) / m;
        off / diag
    }
}

/// Samples rows of correlated uniforms for a fixed matrix.
#[derive(Debug, Clone)]
pub struct CopulaSampler {
    m: usize,
    /// Row-major lower-triangular Cholesky factor of the normal correlation.
    factor: Vec<f64>,
}

impl CopulaSampler {
    pub fn new(matrix: &CorrelationMatrix) -> Result<Self> {
        matrix.validate()?;
        let m = matrix.m;
        let r = matrix.normal_correlation();
        let normal: Vec<f64> = (0..m * m)
            .map(|idx| if idx / m == idx % m { 1.0 } else { r })
            .collect();
        Ok(Self {
            m,
            factor: cholesky(&normal, m),
        })
    }

    pub fn dimension(&self) -> usize {
        self.m
    }

    /// Fills `out` (length `m`) with one correlated draw.
    pub fn sample_into<R: Rng + ?Sized>(&self, rng: &mut R, out: &mut [f64]) {
        assert_eq!(out.len(), self.m);
        let z: Vec<f64> = (0..self.m).map(|_| rng.sample(StandardNormal)).collect();
        for (row, slot) in out.iter_mut().enumerate() {
            let y: f64 = self.factor[row * self.m..row * self.m + row + 1]
                .iter()
                .zip(&z)
                .map(|(l, z)| l * z)
                .sum();
            *slot = normal_cdf(y).min(BELOW_ONE);
        }
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> Vec<f64> {
        let mut out = vec![0.0; self.m];
        self.sample_into(rng, &mut out);
        out
    }
}

/// One draw of `m` uniforms on `[0, 1)` with pairwise correlation `rho`.
pub fn sample_correlated_uniform<R: Rng + ?Sized>(
    matrix: &CorrelationMatrix,
    rng: &mut R,
) -> Result<Vec<f64>> {
    Ok(CopulaSampler::new(matrix)?.sample(rng))
}

/// Cholesky factor of a symmetric PSD matrix. Columns with a vanishing
/// pivot (rank deficiency, e.g. `rho = 1`) are set to zero.
fn cholesky(a: &[f64], n: usize) -> Vec<f64> {
    let mut l = vec![0.0; n * n];
    for j in 0..n {
        let s: f64 = (0..j).map(|k| l[j * n + k] * l[j * n + k]).sum();
        let pivot = a[j * n + j] - s;
        if pivot <= 1e-14 {
            continue;
        }
        let d = pivot.sqrt();
        l[j * n + j] = d;
        for i in j + 1..n {
            let s: f64 = (0..j).map(|k| l[i * n + k] * l[j * n + k]).sum();
            l[i * n + j] = (a[i * n + j] - s) / d;
        }
    }
    l
}

/// Standard normal CDF.
///
/// Abramowitz & Stegun 26.2.17: `1 - phi(x) (b1 t + ... + b5 t^5)` with
/// `t = 1 / (1 + p x)`, absolute error below 7.5e-8. The negative half uses
/// the same tail expression directly so small probabilities keep their
/// relative precision.
pub fn normal_cdf(x: f64) -> f64 {
    const P: f64 = 0.231_641_9;
    const B: [f64; 5] = [
        0.319_381_530,
        -0.356_563_782,
        1.781_477_937,
        -1.821_255_978,
        1.330_274_429,
    ];
    if x.is_nan() {
        return f64::NAN;
    }
    let ax = x.abs();
    let t = 1.0 / (1.0 + P * ax);
    let poly = t * (B[0] + t * (B[1] + t * (B[2] + t * (B[3] + t * B[4]))));
    let density = (-0.5 * ax * ax).exp() / (2.0 * std::f64::consts::PI).sqrt();
    let tail = density * poly;
    if x >= 0.0 {
        1.0 - tail
    } else {
        tail
    }
}
