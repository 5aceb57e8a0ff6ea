//! Empirical validation of the fBm sampler law: compares empirical
//! covariances on a fixed 8×8 time mesh against the exact
//! `½(t^α + s^α − |t−s|^α)` and reports z-scores.

use rayon::prelude::*;

use crate::error::Result;
use crate::fbm::{FgnSampler, GridSpec};
use crate::stream::{replicate_rng, tree_sum};

pub const MESH_SIZE: usize = 8;

/// One mesh cell of the covariance report.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CovCell {
    pub s: f64,
    pub t: f64,
    pub empirical: f64,
    pub exact: f64,
    pub z: f64,
}

#[derive(Clone, Debug)]
pub struct CovarianceReport {
    pub alpha: f64,
    pub n: usize,
    pub seed: u64,
    pub cells: Vec<CovCell>,
}

impl CovarianceReport {
    /// Number of cells with |z| at or above the threshold.
    pub fn large_z_count(&self, threshold: f64) -> usize {
        self.cells.iter().filter(|c| c.z.abs() >= threshold).count()
    }
}

pub fn fbm_covariance(alpha: f64, s: f64, t: f64) -> f64 {
    0.5 * (s.powf(alpha) + t.powf(alpha) - (s - t).abs().powf(alpha))
}

const BLOCK: usize = 256;

/// Covariance report over `n` replicates on the mesh `{j·horizon/8}`.
pub fn empirical_covariance_report(
    alpha: f64,
    grid: GridSpec,
    n: usize,
    seed: u64,
) -> Result<CovarianceReport> {
    let sampler = FgnSampler::new(alpha, grid.n)?;
    let dt = grid.dt();
    // mesh indices j·n/8, j = 1..8 (the origin is degenerate)
    let mesh_idx: Vec<usize> = (1..=MESH_SIZE).map(|j| j * grid.n / MESH_SIZE).collect();
    let mesh_t: Vec<f64> = mesh_idx.iter().map(|&i| i as f64 * dt).collect();

    // per-block sequential accumulation, ordered block collection, then
    // tree reduction: deterministic for any worker count
    let n_cells = MESH_SIZE * MESH_SIZE;
    let blocks: Vec<Vec<f64>> = (0..n)
        .collect::<Vec<_>>()
        .par_chunks(BLOCK)
        .map(|reps| {
            let mut acc = vec![0.0; n_cells];
            for &r in reps {
                let mut rng = replicate_rng(seed, r as u64);
                let vals = sampler.sample_path_values(dt, &mut rng);
                for (i, &ii) in mesh_idx.iter().enumerate() {
                    for (j, &jj) in mesh_idx.iter().enumerate() {
                        acc[i * MESH_SIZE + j] += vals[ii] * vals[jj];
                    }
                }
            }
            acc
        })
        .collect();

    let cells = (0..n_cells)
        .map(|cell| {
            let col: Vec<f64> = blocks.iter().map(|b| b[cell]).collect();
            let empirical = tree_sum(&col) / n as f64;
            let (i, j) = (cell / MESH_SIZE, cell % MESH_SIZE);
            let (s, t) = (mesh_t[i], mesh_t[j]);
            let exact = fbm_covariance(alpha, s, t);
            // Var(X_s X_t) = cov² + σ_s² σ_t² for a centered Gaussian pair
            let var = exact * exact + s.powf(alpha) * t.powf(alpha);
            let z = (empirical - exact) / (var / n as f64).sqrt();
            CovCell { s, t, empirical, exact, z }
        })
        .collect();

    Ok(CovarianceReport { alpha, n, seed, cells })
}
