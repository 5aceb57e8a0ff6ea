//! Reproducible randomness: counter-based streams so each replicate is
//! reproducible in isolation, and order-fixed reductions so aggregates do
//! not depend on worker count.

use rand::SeedableRng;
use rand_chacha::ChaCha12Rng;

/// Independent stream for replicate `replicate` under experiment `seed`.
pub fn replicate_rng(seed: u64, replicate: u64) -> ChaCha12Rng {
    let mut rng = ChaCha12Rng::seed_from_u64(seed);
    rng.set_stream(replicate);
    rng
}

/// Pairwise tree sum: a fixed reduction shape, independent of how the
/// summands were produced, and more accurate than a running sum.
pub fn tree_sum(xs: &[f64]) -> f64 {
    match xs.len() {
        0 => 0.0,
        1 => xs[0],
        2 => xs[0] + xs[1],
        n => {
            let mid = n / 2;
            tree_sum(&xs[..mid]) + tree_sum(&xs[mid..])
        }
    }
}

/// Sample mean and standard error of the mean by tree reduction.
pub fn mean_and_se(xs: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    let mean = tree_sum(xs) / n;
    if xs.len() < 2 {
        return (mean, 0.0);
    }
    let sq: Vec<f64> = xs.iter().map(|x| (x - mean) * (x - mean)).collect();
    let var = tree_sum(&sq) / (n - 1.0);
    (mean, (var / n).sqrt())
}
