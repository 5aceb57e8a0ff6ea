//! Monte-Carlo estimators for the ruin probability and for suprema over
//! threshold-dependent random intervals.

use rayon::prelude::*;

use tailsup_core::{risk_constants, RiskParams};

use crate::error::{Result, SimError};
use crate::fbm::{sample_fbm_at_times, FgnSampler, GridSpec};
use crate::quad::bm_drift_sup_prob;
use crate::stream::{mean_and_se, replicate_rng};
use crate::subordinator::{sample_path_with, SubordinatorSpec};

/// A binomial (or averaged-probability) Monte-Carlo estimate.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MCEstimate {
    pub p_hat: f64,
    pub std_error: f64,
    pub n: usize,
    pub ci_low: f64,
    pub ci_high: f64,
    pub seed: u64,
    pub grid_n: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Estimator {
    PlainMC,
    /// Average of the exact conditional probability given the time change;
    /// only available for α = 1, θ = 1.
    ConditionalMC,
    /// Deterministic quadrature oracle; dispatched outside this module.
    QuadratureBM,
}

/// A complete ruin experiment description.
#[derive(Clone, Debug)]
pub struct ExperimentConfig {
    pub risk: RiskParams,
    pub subordinator: SubordinatorSpec,
    pub t_horizon: f64,
    pub u_list: Vec<f64>,
    pub n: usize,
    pub grid_n: usize,
    pub seed: u64,
    pub estimator: Estimator,
    pub confidence: f64,
}

impl ExperimentConfig {
    pub fn validate(&self) -> Result<()> {
        self.subordinator.validate()?;
        if !(self.t_horizon > 0.0) {
            return Err(SimError::Domain("T must be positive"));
        }
        if self.u_list.is_empty() {
            return Err(SimError::Domain("u_list must be non-empty"));
        }
        let ascending = self
            .u_list
            .windows(2)
            .all(|w| w[1] > w[0]);
        if !(self.u_list[0] > 0.0 && ascending) {
            return Err(SimError::Domain("u_list must be positive and ascending"));
        }
        if self.n < 1 || self.grid_n < 2 {
            return Err(SimError::Domain("n and grid_n too small"));
        }
        if !(self.confidence > 0.0 && self.confidence < 1.0) {
            return Err(SimError::Domain("confidence must lie in (0, 1)"));
        }
        if matches!(self.estimator, Estimator::QuadratureBM)
            && (self.risk.alpha != 1.0 || self.risk.theta != 1.0)
        {
            return Err(SimError::Domain("quadrature estimator needs alpha = theta = 1"));
        }
        Ok(())
    }
}

/// Standard-normal upper quantile by bisection of the survival function.
fn normal_quantile_upper(p: f64) -> f64 {
    let (mut lo, mut hi) = (0.0f64, 40.0f64);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if tailsup_core::gaussian_survival(mid) > p {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// Wilson score interval.
pub fn wilson_interval(successes: usize, n: usize, confidence: f64) -> Result<(f64, f64)> {
    if n < 1 || successes > n {
        return Err(SimError::Domain("need 0 <= successes <= n, n >= 1"));
    }
    if !(confidence > 0.0 && confidence < 1.0) {
        return Err(SimError::Domain("confidence must lie in (0, 1)"));
    }
    let z = normal_quantile_upper((1.0 - confidence) / 2.0);
    let nf = n as f64;
    let p = successes as f64 / nf;
    let z2 = z * z;
    let denom = 1.0 + z2 / nf;
    let center = (p + z2 / (2.0 * nf)) / denom;
    let half = z / denom * (p * (1.0 - p) / nf + z2 / (4.0 * nf * nf)).sqrt();
    Ok(((center - half).max(0.0), (center + half).min(1.0)))
}

/// Dense-Cholesky path evaluation is only worthwhile while the number of
/// distinct induced times stays small; beyond this the uniform-grid
/// fallback (exact in law for the restricted path) is used.
const DENSE_TIME_CAP: usize = 512;

fn binomial_estimate(
    hits: usize,
    config: &ExperimentConfig,
) -> Result<MCEstimate> {
    let n = config.n;
    let p_hat = hits as f64 / n as f64;
    let (ci_low, ci_high) = wilson_interval(hits, n, config.confidence)?;
    Ok(MCEstimate {
        p_hat,
        std_error: (p_hat * (1.0 - p_hat) / n as f64).sqrt(),
        n,
        ci_low,
        ci_high,
        seed: config.seed,
        grid_n: config.grid_n,
    })
}

/// Supremum of `B_α(s) − c s^θ` over the induced time set of one
/// subordinator path, using the reduced endpoint form where exact.
fn replicate_ruin_sup(
    config: &ExperimentConfig,
    sampler: &FgnSampler,
    replicate: u64,
) -> Result<f64> {
    let RiskParams { alpha, theta, c } = config.risk;
    let mut rng = replicate_rng(config.seed, replicate);
    let grid = GridSpec::new(config.grid_n, config.t_horizon).expect("validated");
    let drift_sup = |values: &[f64], times: &[f64]| {
        values
            .iter()
            .zip(times)
            .map(|(&b, &s)| b - c * s.powf(theta))
            .fold(f64::NEG_INFINITY, f64::max)
    };
    match &config.subordinator {
        SubordinatorSpec::CompoundPoisson { .. } => {
            // range of Y has gaps: evaluate on the attained distinct values
            let y = sample_path_with(&config.subordinator, grid, config.t_horizon, &mut rng)?;
            let mut distinct: Vec<f64> = Vec::with_capacity(8);
            for &v in &y {
                if v > 0.0 && distinct.last().map_or(true, |&last| v > last) {
                    distinct.push(v);
                }
            }
            if distinct.is_empty() {
                return Ok(0.0);
            }
            if distinct.len() <= DENSE_TIME_CAP {
                match sample_fbm_at_times(alpha, &distinct, &mut rng) {
                    Ok(b) => return Ok(drift_sup(&b, &distinct).max(0.0)),
                    Err(SimError::Factorization { .. }) => {} // fall through
                    Err(e) => return Err(e),
                }
            }
            // fallback: uniform grid over [0, Y(T)], exact in law for the
            // path restricted to that grid
            let y_t = *distinct.last().unwrap();
            uniform_grid_sup(sampler, y_t, theta, c, &mut rng)
        }
        _ => {
            // continuous (or endpoint-only) time change: only the endpoint
            // matters for the supremum over the full range
            let y_t = crate::subordinator::sample_endpoint_with(
                &config.subordinator,
                config.t_horizon,
                &mut rng,
            )?;
            if y_t <= 0.0 {
                return Ok(0.0);
            }
            uniform_grid_sup(sampler, y_t, theta, c, &mut rng)
        }
    }
}

fn uniform_grid_sup(
    sampler: &FgnSampler,
    horizon: f64,
    theta: f64,
    c: f64,
    rng: &mut rand_chacha::ChaCha12Rng,
) -> Result<f64> {
    let dt = horizon / sampler.len() as f64;
    let values = sampler.sample_path_values(dt, rng);
    Ok(values
        .iter()
        .enumerate()
        .map(|(i, &b)| b - c * (i as f64 * dt).powf(theta))
        .fold(f64::NEG_INFINITY, f64::max))
}

/// One estimate per threshold in `config.u_list`, from a single sampling
/// pass: all thresholds share the same replicates (common random numbers),
/// so `p_hat` is non-increasing across the list by construction.
pub fn mc_ruin_multi(config: &ExperimentConfig) -> Result<Vec<MCEstimate>> {
    config.validate()?;
    let sampler = FgnSampler::new(config.risk.alpha, config.grid_n)?;
    match config.estimator {
        Estimator::PlainMC => {
            let sups: Vec<f64> = (0..config.n)
                .into_par_iter()
                .map(|r| replicate_ruin_sup(config, &sampler, r as u64))
                .collect::<Result<_>>()?;
            config
                .u_list
                .iter()
                .map(|&u| {
                    let hits = sups.iter().filter(|&&s| s > u).count();
                    binomial_estimate(hits, config)
                })
                .collect()
        }
        Estimator::ConditionalMC => {
            let RiskParams { alpha, theta, c } = config.risk;
            if alpha != 1.0 || theta != 1.0 {
                return Err(SimError::Domain("conditional estimator needs alpha = theta = 1"));
            }
            let endpoints: Vec<f64> = (0..config.n)
                .into_par_iter()
                .map(|r| {
                    let mut rng = replicate_rng(config.seed, r as u64);
                    crate::subordinator::sample_endpoint_with(
                        &config.subordinator,
                        config.t_horizon,
                        &mut rng,
                    )
                })
                .collect::<Result<_>>()?;
            let z = normal_quantile_upper((1.0 - config.confidence) / 2.0);
            config
                .u_list
                .iter()
                .map(|&u| {
                    let probs: Vec<f64> = endpoints
                        .iter()
                        .map(|&y_t| if y_t > 0.0 { bm_drift_sup_prob(c, y_t, u) } else { 0.0 })
                        .collect();
                    let (p_hat, se) = mean_and_se(&probs);
                    Ok(MCEstimate {
                        p_hat,
                        std_error: se,
                        n: config.n,
                        ci_low: (p_hat - z * se).max(0.0),
                        ci_high: (p_hat + z * se).min(1.0),
                        seed: config.seed,
                        grid_n: config.grid_n,
                    })
                })
                .collect()
        }
        Estimator::QuadratureBM => Err(SimError::Domain(
            "quadrature estimator is not Monte Carlo; use the quadrature oracle",
        )),
    }
}

/// Ruin probability `P(sup (B_α(Y(t)) − c Y(t)^θ) > u)` by Monte Carlo.
pub fn mc_ruin(config: &ExperimentConfig, u: f64) -> Result<MCEstimate> {
    if !(u > 0.0) {
        return Err(SimError::Domain("u must be positive"));
    }
    let single = ExperimentConfig { u_list: vec![u], ..config.clone() };
    Ok(mc_ruin_multi(&single)?.remove(0))
}

/// Interval-length law `𝒯` for the random-interval supremum experiment.
#[derive(Clone, Debug)]
pub enum IntervalLaw {
    PointMass(f64),
    Endpoint { spec: SubordinatorSpec, t: f64 },
}

/// Per-replicate suprema of `Z` over `[0, 𝒯/scale]`.
fn sup_z_replicates(
    risk: &RiskParams,
    interval: &IntervalLaw,
    scale: f64,
    n: usize,
    grid_n: usize,
    seed: u64,
) -> Result<Vec<f64>> {
    let RiskParams { alpha, theta, c } = *risk;
    let v0 = risk_constants(risk).v0;
    let sampler = FgnSampler::new(alpha, grid_n)?;

    (0..n)
        .into_par_iter()
        .map(|r| {
            let mut rng = replicate_rng(seed, r as u64);
            let len = match interval {
                IntervalLaw::PointMass(t) => *t,
                IntervalLaw::Endpoint { spec, t } => {
                    crate::subordinator::sample_endpoint_with(spec, *t, &mut rng)?
                }
            };
            let horizon = len / scale;
            if horizon <= 0.0 {
                return Ok(f64::NEG_INFINITY);
            }
            let dt = horizon / grid_n as f64;
            let values = sampler.sample_path_values(dt, &mut rng);
            Ok(values
                .iter()
                .enumerate()
                .map(|(i, &b)| {
                    let t = i as f64 * dt;
                    b / ((1.0 + c * t.powf(theta)) * v0)
                })
                .fold(f64::NEG_INFINITY, f64::max))
        })
        .collect()
}

fn estimate_from_sups(
    sups: &[f64],
    u: f64,
    seed: u64,
    grid_n: usize,
    confidence: f64,
) -> Result<MCEstimate> {
    let n = sups.len();
    let hits = sups.iter().filter(|&&s| s > u).count();
    let p_hat = hits as f64 / n as f64;
    let (ci_low, ci_high) = wilson_interval(hits, n, confidence)?;
    Ok(MCEstimate {
        p_hat,
        std_error: (p_hat * (1.0 - p_hat) / n as f64).sqrt(),
        n,
        ci_low,
        ci_high,
        seed,
        grid_n,
    })
}

/// `P(sup_{[0, 𝒯/u^γ]} Z(t) > u)` for the standardized risk field
/// `Z(t) = B_α(t) / ((1 + c t^θ) V₀)`, for every threshold in `u_list`.
///
/// For `γ = 0` the interval does not depend on `u`, so a single sampling
/// pass yields the suprema and every threshold reuses them: exact common
/// random numbers across `u` at the cost of one pass.
#[allow(clippy::too_many_arguments)]
pub fn mc_sup_random_interval_multi(
    risk: &RiskParams,
    interval: &IntervalLaw,
    gamma: f64,
    u_list: &[f64],
    n: usize,
    grid_n: usize,
    seed: u64,
    confidence: f64,
) -> Result<Vec<MCEstimate>> {
    if u_list.is_empty() || u_list.iter().any(|&u| !(u > 0.0)) {
        return Err(SimError::Domain("u_list must be non-empty and positive"));
    }
    if gamma < 0.0 {
        return Err(SimError::Domain("gamma must be non-negative"));
    }
    if n < 1 || grid_n < 2 {
        return Err(SimError::Domain("n and grid_n too small"));
    }
    if gamma == 0.0 {
        let sups = sup_z_replicates(risk, interval, 1.0, n, grid_n, seed)?;
        u_list
            .iter()
            .map(|&u| estimate_from_sups(&sups, u, seed, grid_n, confidence))
            .collect()
    } else {
        u_list
            .iter()
            .map(|&u| {
                let sups = sup_z_replicates(risk, interval, u.powf(gamma), n, grid_n, seed)?;
                estimate_from_sups(&sups, u, seed, grid_n, confidence)
            })
            .collect()
    }
}

/// Single-threshold convenience wrapper around
/// [`mc_sup_random_interval_multi`].
#[allow(clippy::too_many_arguments)]
pub fn mc_sup_random_interval(
    risk: &RiskParams,
    interval: &IntervalLaw,
    gamma: f64,
    u: f64,
    n: usize,
    grid_n: usize,
    seed: u64,
    confidence: f64,
) -> Result<MCEstimate> {
    Ok(mc_sup_random_interval_multi(risk, interval, gamma, &[u], n, grid_n, seed, confidence)?
        .remove(0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fbm::sample_bm_bridge_levels;

    fn brownian_config(n: usize, grid_n: usize) -> ExperimentConfig {
        ExperimentConfig {
            risk: RiskParams::new(1.0, 1.0, 1.0).unwrap(),
            subordinator: SubordinatorSpec::Deterministic { rate: 1.0 },
            t_horizon: 1.0,
            u_list: vec![0.5, 1.0, 1.5],
            n,
            grid_n,
            seed: 99,
            estimator: Estimator::PlainMC,
            confidence: 0.99,
        }
    }

    #[test]
    fn wilson_reference_values() {
        let (lo, hi) = wilson_interval(0, 100, 0.95).unwrap();
        assert_eq!(lo, 0.0);
        assert!((hi - 0.0370).abs() < 5e-4, "hi = {hi}");
        let (lo, hi) = wilson_interval(50, 100, 0.95).unwrap();
        assert!((0.5 - lo - (hi - 0.5)).abs() < 1e-12, "not symmetric");
        assert!(((hi - lo) / 2.0 - 0.0966).abs() < 5e-4);
        let (_, hi) = wilson_interval(100, 100, 0.95).unwrap();
        assert_eq!(hi, 1.0);
    }

    #[test]
    fn wilson_zero_count_upper_bound_scales() {
        // ~ z²/(n + z²) ≈ 6.6/n at 99%
        let (_, hi) = wilson_interval(0, 10_000, 0.99).unwrap();
        assert!((hi * 10_000.0 - 6.6).abs() < 0.2, "hi·n = {}", hi * 10_000.0);
    }

    #[test]
    fn brownian_ruin_matches_reflection_oracle() {
        let config = brownian_config(20_000, 2_048);
        for &u in &[0.5, 1.0] {
            let est = mc_ruin(&config, u).unwrap();
            let oracle = bm_drift_sup_prob(1.0, 1.0, u);
            // allow Wilson 99% plus discretization slack
            assert!(
                oracle <= est.ci_high * 1.02 && oracle >= est.ci_low * 0.98,
                "u={u}: oracle {oracle} vs [{}, {}]",
                est.ci_low,
                est.ci_high
            );
        }
    }

    #[test]
    fn conditional_estimator_agrees_with_plain() {
        let mut config = brownian_config(4_000, 1_024);
        config.subordinator = SubordinatorSpec::GammaProc { nu: 1.0 };
        let plain = mc_ruin(&config, 1.0).unwrap();
        config.estimator = Estimator::ConditionalMC;
        let cond = mc_ruin(&config, 1.0).unwrap();
        let joint = (plain.std_error.powi(2) + cond.std_error.powi(2)).sqrt();
        assert!(
            (plain.p_hat - cond.p_hat).abs() < 4.0 * joint + 0.02 * cond.p_hat,
            "plain {} vs conditional {}",
            plain.p_hat,
            cond.p_hat
        );
    }

    #[test]
    fn compound_poisson_ruin_runs_and_is_deterministic() {
        let mut config = brownian_config(2_000, 256);
        config.subordinator = SubordinatorSpec::CompoundPoisson {
            mu: 3.0,
            jump: crate::subordinator::JumpDist::Pareto { lambda_plus_one: 3.0, x_min: 0.5 },
        };
        let a = mc_ruin(&config, 1.0).unwrap();
        let b = mc_ruin(&config, 1.0).unwrap();
        assert_eq!(a, b);
        assert!(a.p_hat > 0.0 && a.p_hat < 1.0);
    }

    #[test]
    fn huge_u_gives_zero_count_interval() {
        let config = brownian_config(1_000, 128);
        let est = mc_ruin(&config, 50.0).unwrap();
        assert_eq!(est.p_hat, 0.0);
        assert_eq!(est.ci_low, 0.0);
        assert!(est.ci_high > 0.0 && est.ci_high < 0.02);
    }

    #[test]
    fn monotone_in_u_under_common_random_numbers() {
        // same seed ⇒ same sups ⇒ p_hat non-increasing in u
        let config = brownian_config(2_000, 256);
        let ps: Vec<f64> = [0.5, 1.0, 1.5]
            .iter()
            .map(|&u| mc_ruin(&config, u).unwrap().p_hat)
            .collect();
        assert!(ps[0] >= ps[1] && ps[1] >= ps[2], "{ps:?}");
    }

    #[test]
    fn grid_refinement_increases_sup_pathwise() {
        // nested Brownian bridge refinement: the drifted discrete sup can
        // only grow as the grid doubles
        for seed in 0..20 {
            let mut rng = replicate_rng(seed, 0);
            let levels = sample_bm_bridge_levels(1.0, 10, &mut rng);
            let mut prev = f64::NEG_INFINITY;
            for (l, values) in levels.iter().enumerate() {
                let dt = 1.0 / (values.len() - 1) as f64;
                let sup = values
                    .iter()
                    .enumerate()
                    .map(|(i, &b)| b - i as f64 * dt)
                    .fold(f64::NEG_INFINITY, f64::max);
                assert!(sup >= prev - 1e-12, "level {l}");
                prev = sup;
            }
        }
    }

    #[test]
    fn random_interval_rejects_bad_u() {
        let risk = RiskParams::new(1.0, 1.0, 1.0).unwrap();
        let law = IntervalLaw::PointMass(1.0);
        assert!(mc_sup_random_interval(&risk, &law, 0.0, -1.0, 10, 16, 0, 0.95).is_err());
    }

    #[test]
    fn random_interval_point_mass_runs() {
        let risk = RiskParams::new(1.0, 1.0, 1.0).unwrap();
        let law = IntervalLaw::PointMass(2.0);
        let est = mc_sup_random_interval(&risk, &law, 0.0, 2.0, 4_000, 512, 3, 0.95).unwrap();
        assert!(est.p_hat > 0.0 && est.p_hat < 0.2, "p = {}", est.p_hat);
    }

    #[test]
    fn quadrature_estimator_rejected_by_mc() {
        let mut config = brownian_config(10, 16);
        config.estimator = Estimator::QuadratureBM;
        assert!(matches!(mc_ruin(&config, 1.0), Err(SimError::Domain(_))));
    }
}
