//! Exact-covariance fractional Brownian motion sampling by circulant
//! embedding of fractional Gaussian noise.
//!
//! The embedded covariance row is diagonalized once per `(alpha, n)` by an
//! FFT; each replicate then costs one FFT of length `2n`. Increments are
//! generated with unit spacing and rescaled by `dt^{α/2}` (self-similarity),
//! which keeps the eigenvalue check scale-free.

use rand::Rng;
use rand_distr::StandardNormal;
use rustfft::{num_complex::Complex, Fft, FftPlanner};
use std::sync::Arc;

use crate::error::SimError;

/// Uniform simulation grid: `n` steps on `[0, horizon]`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GridSpec {
    pub n: usize,
    pub horizon: f64,
}

impl GridSpec {
    pub fn new(n: usize, horizon: f64) -> Result<Self, SimError> {
        if n < 2 {
            return Err(SimError::Domain("grid needs at least 2 steps"));
        }
        if !(horizon > 0.0) {
            return Err(SimError::Domain("horizon must be positive"));
        }
        Ok(GridSpec { n, horizon })
    }

    pub fn dt(&self) -> f64 {
        self.horizon / self.n as f64
    }
}

/// A sampled path on `n + 1` grid points starting at the origin.
#[derive(Clone, Debug)]
pub struct PathSample {
    pub times: Vec<f64>,
    pub values: Vec<f64>,
}

/// Eigenvalues below this are an implementation bug, not noise.
const EIGENVALUE_TOLERANCE: f64 = -1e-9;

/// Reusable circulant-embedding plan for fGn with unit spacing.
pub struct FgnSampler {
    alpha: f64,
    n: usize,
    /// `sqrt(λ_k / m)` for the embedding of size `m = 2n`
    scale: Vec<f64>,
    fft: Arc<dyn Fft<f64>>,
}

impl FgnSampler {
    pub fn new(alpha: f64, n: usize) -> Result<Self, SimError> {
        if !(alpha > 0.0 && alpha <= 2.0) {
            return Err(SimError::Domain("alpha must lie in (0, 2]"));
        }
        if n < 2 {
            return Err(SimError::Domain("need at least 2 increments"));
        }
        let m = 2 * n;
        // fGn autocovariance r(k) = ½((k+1)^α + |k-1|^α - 2 k^α)
        let r = |k: usize| {
            let k = k as f64;
            0.5 * ((k + 1.0).powf(alpha) + (k - 1.0).abs().powf(alpha) - 2.0 * k.powf(alpha))
        };
        let mut row: Vec<Complex<f64>> = (0..m)
            .map(|j| {
                let k = if j <= n { j } else { m - j };
                Complex::new(r(k), 0.0)
            })
            .collect();

        let mut planner = FftPlanner::new();
        let fft = planner.plan_fft_forward(m);
        fft.process(&mut row);

        let mut scale = Vec::with_capacity(m);
        for (k, e) in row.iter().enumerate() {
            let lambda = e.re;
            if lambda < EIGENVALUE_TOLERANCE {
                return Err(SimError::Embedding { eigenvalue: lambda, index: k });
            }
            scale.push((lambda.max(0.0) / m as f64).sqrt());
        }
        Ok(FgnSampler { alpha, n, scale, fft })
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    /// One vector of `n` unit-spacing fGn increments.
    pub fn sample_increments<R: Rng>(&self, rng: &mut R) -> Vec<f64> {
        let m = 2 * self.n;
        let mut buf: Vec<Complex<f64>> = (0..m)
            .map(|k| {
                let re: f64 = rng.sample(StandardNormal);
                let im: f64 = rng.sample(StandardNormal);
                Complex::new(re * self.scale[k], im * self.scale[k])
            })
            .collect();
        self.fft.process(&mut buf);
        buf.iter().take(self.n).map(|c| c.re).collect()
    }

    /// Path values (length `n + 1`, starting at 0) on a grid with step `dt`.
    pub fn sample_path_values<R: Rng>(&self, dt: f64, rng: &mut R) -> Vec<f64> {
        let scale = dt.powf(self.alpha / 2.0);
        let incs = self.sample_increments(rng);
        let mut values = Vec::with_capacity(self.n + 1);
        values.push(0.0);
        let mut acc = 0.0;
        for inc in incs {
            acc += inc * scale;
            values.push(acc);
        }
        values
    }
}

/// One fBm path on the given grid, deterministic in `(alpha, grid, seed)`.
pub fn sample_fbm_path(alpha: f64, grid: GridSpec, seed: u64) -> Result<PathSample, SimError> {
    let sampler = FgnSampler::new(alpha, grid.n)?;
    let mut rng = crate::stream::replicate_rng(seed, 0);
    let dt = grid.dt();
    let values = sampler.sample_path_values(dt, &mut rng);
    let times = (0..=grid.n).map(|i| i as f64 * dt).collect();
    Ok(PathSample { times, values })
}

/// fBm values at arbitrary increasing positive times, via Cholesky
/// factorization of the exact joint covariance. Intended for the induced
/// grids of discontinuous time changes, where the number of distinct
/// points is small.
pub fn sample_fbm_at_times<R: Rng>(
    alpha: f64,
    times: &[f64],
    rng: &mut R,
) -> Result<Vec<f64>, SimError> {
    let m = times.len();
    if m == 0 {
        return Ok(Vec::new());
    }
    let cov = |s: f64, t: f64| {
        0.5 * (s.powf(alpha) + t.powf(alpha) - (s - t).abs().powf(alpha))
    };
    let mut chol = vec![0.0; m * m];
    for i in 0..m {
        for j in 0..=i {
            let mut sum = cov(times[i], times[j]);
            for k in 0..j {
                sum -= chol[i * m + k] * chol[j * m + k];
            }
            if i == j {
                let scale = cov(times[i], times[i]).max(1.0);
                if sum < -1e-8 * scale {
                    return Err(SimError::Factorization { pivot: sum, index: i });
                }
                chol[i * m + i] = sum.max(0.0).sqrt();
            } else {
                let d = chol[j * m + j];
                chol[i * m + j] = if d > 0.0 { sum / d } else { 0.0 };
            }
        }
    }
    let z: Vec<f64> = (0..m).map(|_| rng.sample(StandardNormal)).collect();
    Ok((0..m)
        .map(|i| (0..=i).map(|k| chol[i * m + k] * z[k]).sum())
        .collect())
}

/// Brownian path sampled by dyadic bridge refinement: `levels[l]` holds the
/// path on `2^l` steps and refining preserves previously sampled points, so
/// grid suprema are non-decreasing across levels by construction.
pub fn sample_bm_bridge_levels<R: Rng>(
    horizon: f64,
    max_level: u32,
    rng: &mut R,
) -> Vec<Vec<f64>> {
    let endpoint: f64 = rng.sample(StandardNormal);
    let mut current = vec![0.0, endpoint * horizon.sqrt()];
    let mut levels = vec![current.clone()];
    for level in 1..=max_level {
        let dt = horizon / (1 << level) as f64;
        let mut refined = Vec::with_capacity(current.len() * 2 - 1);
        for w in current.windows(2) {
            let mid = 0.5 * (w[0] + w[1]);
            let noise: f64 = rng.sample(StandardNormal);
            refined.push(w[0]);
            refined.push(mid + noise * (dt / 2.0).sqrt());
        }
        refined.push(*current.last().unwrap());
        levels.push(refined.clone());
        current = refined;
    }
    levels
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::stream::replicate_rng;

    fn mean_and_se(xs: &[f64]) -> (f64, f64) {
        let n = xs.len() as f64;
        let mean = xs.iter().sum::<f64>() / n;
        let var = xs.iter().map(|x| (x - mean) * (x - mean)).sum::<f64>() / (n - 1.0);
        (mean, (var / n).sqrt())
    }

    #[test]
    fn deterministic_given_seed() {
        let grid = GridSpec::new(64, 1.0).unwrap();
        let a = sample_fbm_path(0.7, grid, 42).unwrap();
        let b = sample_fbm_path(0.7, grid, 42).unwrap();
        assert_eq!(a.values, b.values);
        let c = sample_fbm_path(0.7, grid, 43).unwrap();
        assert_ne!(a.values, c.values);
    }

    #[test]
    fn embedding_eigenvalues_admissible_across_alpha() {
        for &alpha in &[0.2, 0.5, 1.0, 1.5, 1.9, 2.0] {
            for &n in &[16usize, 256, 4096] {
                assert!(FgnSampler::new(alpha, n).is_ok(), "alpha={alpha} n={n}");
            }
        }
    }

    #[test]
    fn brownian_increments_uncorrelated() {
        let sampler = FgnSampler::new(1.0, 128).unwrap();
        let reps = 20_000;
        let mut lag1 = Vec::with_capacity(reps);
        for r in 0..reps {
            let mut rng = replicate_rng(7, r as u64);
            let incs = sampler.sample_increments(&mut rng);
            let mut acc = 0.0;
            for w in incs.windows(2) {
                acc += w[0] * w[1];
            }
            lag1.push(acc / (incs.len() - 1) as f64);
        }
        let (mean, se) = mean_and_se(&lag1);
        assert!(mean.abs() < 3.0 * se, "lag-1 correlation {mean} (se {se})");
    }

    #[test]
    fn terminal_variance_matches_power_law() {
        let grid = GridSpec::new(64, 1.5);
        let grid = grid.unwrap();
        for &alpha in &[0.5, 1.5] {
            let sampler = FgnSampler::new(alpha, grid.n).unwrap();
            let reps = 20_000;
            let mut terminal_sq = Vec::with_capacity(reps);
            for r in 0..reps {
                let mut rng = replicate_rng(11, r as u64);
                let vals = sampler.sample_path_values(grid.dt(), &mut rng);
                let last = *vals.last().unwrap();
                terminal_sq.push(last * last);
            }
            let (mean, se) = mean_and_se(&terminal_sq);
            let target = grid.horizon.powf(alpha);
            assert!(
                (mean - target).abs() < 4.0 * se,
                "alpha={alpha}: var {mean} target {target} se {se}"
            );
        }
    }

    #[test]
    fn self_similar_marginals() {
        let grid = GridSpec::new(64, 1.0).unwrap();
        let alpha = 1.4;
        let sampler = FgnSampler::new(alpha, grid.n).unwrap();
        let reps = 20_000;
        let mut scaled_sq = vec![Vec::with_capacity(reps); 3];
        let checkpoints = [16usize, 32, 64]; // t = 0.25, 0.5, 1.0
        for r in 0..reps {
            let mut rng = replicate_rng(13, r as u64);
            let vals = sampler.sample_path_values(grid.dt(), &mut rng);
            for (slot, &idx) in checkpoints.iter().enumerate() {
                let t = idx as f64 * grid.dt();
                let x = vals[idx] / t.powf(alpha / 2.0);
                scaled_sq[slot].push(x * x);
            }
        }
        for (slot, samples) in scaled_sq.iter().enumerate() {
            let (mean, se) = mean_and_se(samples);
            assert!((mean - 1.0).abs() < 4.0 * se, "checkpoint {slot}: {mean} (se {se})");
        }
    }

    #[test]
    fn cholesky_times_match_uniform_law() {
        // covariance of the factorized path at two fixed times
        let alpha = 1.3;
        let times = [0.3, 0.7, 1.1];
        let reps = 40_000;
        let mut prods = Vec::with_capacity(reps);
        for r in 0..reps {
            let mut rng = replicate_rng(17, r as u64);
            let vals = sample_fbm_at_times(alpha, &times, &mut rng).unwrap();
            prods.push(vals[0] * vals[2]);
        }
        let (mean, se) = mean_and_se(&prods);
        let exact = 0.5
            * (0.3f64.powf(alpha) + 1.1f64.powf(alpha) - 0.8f64.powf(alpha));
        assert!((mean - exact).abs() < 4.0 * se, "cov {mean} exact {exact} se {se}");
    }

    #[test]
    fn bridge_refinement_is_nested() {
        let mut rng = replicate_rng(23, 0);
        let levels = sample_bm_bridge_levels(1.0, 6, &mut rng);
        for (l, level) in levels.iter().enumerate() {
            assert_eq!(level.len(), (1 << l) + 1);
        }
        for pair in levels.windows(2) {
            let (coarse, fine) = (&pair[0], &pair[1]);
            for (i, v) in coarse.iter().enumerate() {
                assert_eq!(fine[2 * i], *v);
            }
            let sup_c = coarse.iter().cloned().fold(f64::MIN, f64::max);
            let sup_f = fine.iter().cloned().fold(f64::MIN, f64::max);
            assert!(sup_f >= sup_c);
        }
    }
}
