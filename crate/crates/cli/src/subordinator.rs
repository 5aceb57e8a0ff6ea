//! Random time changes: Gamma process, compound Poisson with Pareto jumps,
//! deterministic time, and user-supplied endpoint samplers.

use std::fmt;
use std::sync::Arc;

use rand::Rng;
use rand_chacha::ChaCha12Rng;
use rand_distr::{Distribution, Gamma, Poisson};

use tailsup_core::{SlowlyVarying, TailModel};

use crate::error::{Result, SimError};
use crate::fbm::GridSpec;
use crate::stream::replicate_rng;

/// Jump size distribution for the compound Poisson subordinator. Pareto is
/// the canonical monotone density that is regularly varying at infinity
/// with index `λ + 1`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum JumpDist {
    Pareto { lambda_plus_one: f64, x_min: f64 },
}

impl JumpDist {
    pub fn validate(&self) -> Result<()> {
        match *self {
            JumpDist::Pareto { lambda_plus_one, x_min } => {
                if !(lambda_plus_one > 1.0) {
                    return Err(SimError::Domain("Pareto density index must exceed 1"));
                }
                if !(x_min > 0.0) {
                    return Err(SimError::Domain("Pareto x_min must be positive"));
                }
                Ok(())
            }
        }
    }

    pub fn sample<R: Rng>(&self, rng: &mut R) -> f64 {
        match *self {
            JumpDist::Pareto { lambda_plus_one, x_min } => {
                // tail index λ = (λ+1) − 1; inverse-CDF draw
                let lambda = lambda_plus_one - 1.0;
                let u: f64 = rng.gen_range(f64::MIN_POSITIVE..1.0);
                x_min * u.powf(-1.0 / lambda)
            }
        }
    }
}

type EndpointSampler = Arc<dyn Fn(f64, &mut ChaCha12Rng) -> f64 + Send + Sync>;

/// The random time change `Y`.
#[derive(Clone)]
pub enum SubordinatorSpec {
    /// Gamma process: `Y(t) ~ Gamma(shape t/ν, scale 1)`.
    GammaProc { nu: f64 },
    /// Compound Poisson with intensity `μ` and i.i.d. jumps.
    CompoundPoisson { mu: f64, jump: JumpDist },
    /// `Y(t) = rate · t`.
    Deterministic { rate: f64 },
    /// Endpoint-only sampler `(T, rng) -> Y(T)`; no path structure and no
    /// analytic tail.
    EndpointOnly { sampler: EndpointSampler },
}

impl fmt::Debug for SubordinatorSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SubordinatorSpec::GammaProc { nu } => write!(f, "GammaProc {{ nu: {nu} }}"),
            SubordinatorSpec::CompoundPoisson { mu, jump } => {
                write!(f, "CompoundPoisson {{ mu: {mu}, jump: {jump:?} }}")
            }
            SubordinatorSpec::Deterministic { rate } => {
                write!(f, "Deterministic {{ rate: {rate} }}")
            }
            SubordinatorSpec::EndpointOnly { .. } => write!(f, "EndpointOnly {{ .. }}"),
        }
    }
}

impl SubordinatorSpec {
    pub fn validate(&self) -> Result<()> {
        match self {
            SubordinatorSpec::GammaProc { nu } if !(*nu > 0.0) => {
                Err(SimError::Domain("Gamma parameter nu must be positive"))
            }
            SubordinatorSpec::CompoundPoisson { mu, jump } => {
                if !(*mu > 0.0) {
                    return Err(SimError::Domain("Poisson intensity must be positive"));
                }
                jump.validate()
            }
            SubordinatorSpec::Deterministic { rate } if !(*rate > 0.0) => {
                Err(SimError::Domain("deterministic rate must be positive"))
            }
            _ => Ok(()),
        }
    }

    /// Short name used in report rows.
    pub fn label(&self) -> &'static str {
        match self {
            SubordinatorSpec::GammaProc { .. } => "gamma",
            SubordinatorSpec::CompoundPoisson { .. } => "compound-poisson",
            SubordinatorSpec::Deterministic { .. } => "deterministic",
            SubordinatorSpec::EndpointOnly { .. } => "endpoint-only",
        }
    }
}

/// One draw of `Y(T)` from an already-positioned stream.
pub fn sample_endpoint_with(
    spec: &SubordinatorSpec,
    t: f64,
    rng: &mut ChaCha12Rng,
) -> Result<f64> {
    if !(t > 0.0) {
        return Err(SimError::Domain("T must be positive"));
    }
    spec.validate()?;
    Ok(match spec {
        SubordinatorSpec::GammaProc { nu } => {
            Gamma::new(t / nu, 1.0).expect("validated shape").sample(rng)
        }
        SubordinatorSpec::CompoundPoisson { mu, jump } => {
            let count = Poisson::new(mu * t).expect("validated rate").sample(rng) as u64;
            (0..count).map(|_| jump.sample(rng)).sum()
        }
        SubordinatorSpec::Deterministic { rate } => rate * t,
        SubordinatorSpec::EndpointOnly { sampler } => sampler(t, rng),
    })
}

/// One draw of `Y(T)`, deterministic given `(spec, T, seed)`.
pub fn sample_endpoint(spec: &SubordinatorSpec, t: f64, seed: u64) -> Result<f64> {
    sample_endpoint_with(spec, t, &mut replicate_rng(seed, 0))
}

/// Values of `Y` at the grid times (length `grid.n + 1`, starting at 0);
/// non-decreasing by construction.
pub fn sample_path_with(
    spec: &SubordinatorSpec,
    grid: GridSpec,
    t: f64,
    rng: &mut ChaCha12Rng,
) -> Result<Vec<f64>> {
    if (grid.horizon - t).abs() > 1e-12 * t.max(1.0) {
        return Err(SimError::Domain("grid horizon must equal T"));
    }
    spec.validate()?;
    let dt = grid.dt();
    match spec {
        SubordinatorSpec::GammaProc { nu } => {
            let inc = Gamma::new(dt / nu, 1.0).expect("validated shape");
            let mut acc = 0.0;
            let mut out = Vec::with_capacity(grid.n + 1);
            out.push(0.0);
            for _ in 0..grid.n {
                acc += inc.sample(rng);
                out.push(acc);
            }
            Ok(out)
        }
        SubordinatorSpec::CompoundPoisson { mu, jump } => {
            let count = Poisson::new(mu * t).expect("validated rate").sample(rng) as usize;
            let mut jumps: Vec<(f64, f64)> = (0..count)
                .map(|_| (rng.gen_range(0.0..t), jump.sample(rng)))
                .collect();
            jumps.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
            let mut out = Vec::with_capacity(grid.n + 1);
            let mut acc = 0.0;
            let mut next = 0usize;
            for i in 0..=grid.n {
                let time = i as f64 * dt;
                while next < jumps.len() && jumps[next].0 <= time {
                    acc += jumps[next].1;
                    next += 1;
                }
                out.push(acc);
            }
            Ok(out)
        }
        SubordinatorSpec::Deterministic { rate } => {
            Ok((0..=grid.n).map(|i| rate * i as f64 * dt).collect())
        }
        SubordinatorSpec::EndpointOnly { .. } => Err(SimError::UnsupportedSpec(
            "endpoint-only specs carry no path structure",
        )),
    }
}

pub fn sample_path(
    spec: &SubordinatorSpec,
    grid: GridSpec,
    t: f64,
    seed: u64,
) -> Result<Vec<f64>> {
    sample_path_with(spec, grid, t, &mut replicate_rng(seed, 0))
}

/// Analytic tail model for `Y(T)`.
///
/// Gamma endpoints carry a unit-rate log-power tail (only the exponential
/// rate is distribution-free in `T, ν`); compound Poisson endpoints are
/// regularly varying with the one-big-jump constant `μT·x_min^λ`, an
/// asymptotic (not exact) statement.
pub fn endpoint_tail_model(spec: &SubordinatorSpec, t: f64) -> Result<TailModel> {
    if !(t > 0.0) {
        return Err(SimError::Domain("T must be positive"));
    }
    spec.validate()?;
    match spec {
        SubordinatorSpec::GammaProc { .. } => Ok(TailModel::log_power(1.0, 1.0)),
        SubordinatorSpec::CompoundPoisson { mu, jump } => {
            let JumpDist::Pareto { lambda_plus_one, x_min } = *jump;
            let lambda = lambda_plus_one - 1.0;
            Ok(TailModel::RegularlyVarying {
                lambda,
                sv: SlowlyVarying::Constant(mu * t * x_min.powf(lambda)),
            })
        }
        SubordinatorSpec::Deterministic { .. } => Err(SimError::UnsupportedSpec(
            "deterministic endpoint is a point mass with no tail model",
        )),
        SubordinatorSpec::EndpointOnly { .. } => Err(SimError::UnsupportedSpec(
            "endpoint-only spec has no analytic tail",
        )),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::stream::mean_and_se;

    #[test]
    fn deterministic_endpoint_exact() {
        let spec = SubordinatorSpec::Deterministic { rate: 1.0 };
        assert_eq!(sample_endpoint(&spec, 2.0, 0).unwrap(), 2.0);
    }

    #[test]
    fn gamma_endpoint_mean() {
        let spec = SubordinatorSpec::GammaProc { nu: 1.0 };
        let n = 100_000;
        let draws: Vec<f64> = (0..n)
            .map(|r| {
                sample_endpoint_with(&spec, 1.0, &mut replicate_rng(3, r)).unwrap()
            })
            .collect();
        let (mean, se) = mean_and_se(&draws);
        assert!((mean - 1.0).abs() < 4.0 * se, "mean {mean} se {se}");
    }

    #[test]
    fn compound_poisson_endpoint_mean() {
        // μT·E[jump] = 2·1·(2/1)·1 = 4
        let spec = SubordinatorSpec::CompoundPoisson {
            mu: 2.0,
            jump: JumpDist::Pareto { lambda_plus_one: 3.0, x_min: 1.0 },
        };
        let n = 200_000;
        let draws: Vec<f64> = (0..n)
            .map(|r| {
                sample_endpoint_with(&spec, 1.0, &mut replicate_rng(5, r)).unwrap()
            })
            .collect();
        let (mean, se) = mean_and_se(&draws);
        assert!((mean - 4.0).abs() < 4.0 * se, "mean {mean} se {se}");
    }

    #[test]
    fn paths_nondecreasing_and_deterministic_case_exact() {
        let grid = GridSpec::new(64, 1.0).unwrap();
        let det = SubordinatorSpec::Deterministic { rate: 1.0 };
        let path = sample_path(&det, grid, 1.0, 0).unwrap();
        for (i, &v) in path.iter().enumerate() {
            assert!((v - i as f64 * grid.dt()).abs() < 1e-15);
        }
        for spec in [
            SubordinatorSpec::GammaProc { nu: 0.5 },
            SubordinatorSpec::CompoundPoisson {
                mu: 3.0,
                jump: JumpDist::Pareto { lambda_plus_one: 2.5, x_min: 0.5 },
            },
        ] {
            for seed in 0..50 {
                let path = sample_path(&spec, grid, 1.0, seed).unwrap();
                assert_eq!(path.len(), grid.n + 1);
                assert_eq!(path[0], 0.0);
                for w in path.windows(2) {
                    assert!(w[1] >= w[0], "{spec:?} decreased");
                }
            }
        }
    }

    #[test]
    fn path_endpoint_matches_endpoint_law() {
        // two-sample KS between path-terminal values and direct endpoint
        // draws, Gamma case
        let spec = SubordinatorSpec::GammaProc { nu: 1.0 };
        let grid = GridSpec::new(128, 1.0).unwrap();
        let n = 10_000usize;
        let mut a: Vec<f64> = (0..n)
            .map(|r| {
                *sample_path_with(&spec, grid, 1.0, &mut replicate_rng(7, r as u64))
                    .unwrap()
                    .last()
                    .unwrap()
            })
            .collect();
        let mut b: Vec<f64> = (0..n)
            .map(|r| {
                sample_endpoint_with(&spec, 1.0, &mut replicate_rng(1007, r as u64)).unwrap()
            })
            .collect();
        a.sort_by(|x, y| x.partial_cmp(y).unwrap());
        b.sort_by(|x, y| x.partial_cmp(y).unwrap());
        let ks = ks_statistic(&a, &b);
        // critical value at the 1% level for equal sample sizes
        let crit = 1.628 * (2.0 / n as f64).sqrt();
        assert!(ks < crit, "KS {ks} crit {crit}");
    }

    #[test]
    fn gamma_additivity() {
        // Y(1) + independent increment over (1, 2] vs Gamma(2, 1)
        let spec = SubordinatorSpec::GammaProc { nu: 1.0 };
        let n = 10_000usize;
        let mut a: Vec<f64> = (0..n)
            .map(|r| {
                let mut rng = replicate_rng(13, r as u64);
                let y1 = sample_endpoint_with(&spec, 1.0, &mut rng).unwrap();
                let inc = sample_endpoint_with(&spec, 1.0, &mut rng).unwrap();
                y1 + inc
            })
            .collect();
        let mut b: Vec<f64> = (0..n)
            .map(|r| {
                sample_endpoint_with(&spec, 2.0, &mut replicate_rng(2013, r as u64)).unwrap()
            })
            .collect();
        a.sort_by(|x, y| x.partial_cmp(y).unwrap());
        b.sort_by(|x, y| x.partial_cmp(y).unwrap());
        let ks = ks_statistic(&a, &b);
        let crit = 1.628 * (2.0 / n as f64).sqrt();
        assert!(ks < crit, "KS {ks} crit {crit}");
    }

    #[test]
    fn gamma_tail_model_against_incomplete_gamma() {
        // log P(Y(1) > u)/u → −1; Gamma(1,1) tail is exactly e^{−u}
        let model = endpoint_tail_model(&SubordinatorSpec::GammaProc { nu: 1.0 }, 1.0).unwrap();
        let u = 50.0;
        assert!((model.log_tail(u) / u + 1.0).abs() < 0.1);
    }

    #[test]
    fn compound_poisson_tail_model_one_big_jump() {
        let spec = SubordinatorSpec::CompoundPoisson {
            mu: 2.0,
            jump: JumpDist::Pareto { lambda_plus_one: 3.0, x_min: 1.0 },
        };
        let model = endpoint_tail_model(&spec, 1.0).unwrap();
        // pick u with P ≈ 1e-3 under the model and compare to MC
        let u = (2.0f64 / 1e-3).sqrt(); // μT x_min^λ u^{−2} = 1e-3
        let predicted = model.tail_probability(u);
        let n = 400_000usize;
        let hits = (0..n)
            .filter(|&r| {
                sample_endpoint_with(&spec, 1.0, &mut replicate_rng(17, r as u64)).unwrap() > u
            })
            .count();
        let p_hat = hits as f64 / n as f64;
        assert!(
            (p_hat - predicted).abs() < 0.25 * predicted,
            "p_hat {p_hat} predicted {predicted}"
        );
    }

    #[test]
    fn unsupported_specs_are_rejected() {
        let det = SubordinatorSpec::Deterministic { rate: 1.0 };
        assert!(matches!(endpoint_tail_model(&det, 1.0), Err(SimError::UnsupportedSpec(_))));
        let ep = SubordinatorSpec::EndpointOnly { sampler: Arc::new(|t, _| t) };
        assert!(matches!(endpoint_tail_model(&ep, 1.0), Err(SimError::UnsupportedSpec(_))));
        let grid = GridSpec::new(8, 1.0).unwrap();
        assert!(matches!(
            sample_path(&ep, grid, 1.0, 0),
            Err(SimError::UnsupportedSpec(_))
        ));
    }

    fn ks_statistic(a: &[f64], b: &[f64]) -> f64 {
        // both inputs sorted
        let (mut i, mut j, mut d) = (0usize, 0usize, 0.0f64);
        while i < a.len() && j < b.len() {
            if a[i] <= b[j] {
                i += 1;
            } else {
                j += 1;
            }
            let fa = i as f64 / a.len() as f64;
            let fb = j as f64 / b.len() as f64;
            d = d.max((fa - fb).abs());
        }
        d
    }
}
