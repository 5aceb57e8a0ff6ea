//! Simulation, Monte-Carlo validation and reporting companion to
//! `tailsup-core`: exact fractional Brownian motion sampling, subordinator
//! models, rare-event estimators, quadrature oracles for the Brownian
//! case, and the experiment CLI.

pub mod cli;
pub mod config;
pub mod constants;
pub mod covcheck;
pub mod error;
pub mod fbm;
pub mod functional;
pub mod mc;
pub mod quad;
pub mod report;
pub mod stream;
pub mod subordinator;

pub use constants::{
    estimate_pickands, estimate_pickands_truncated, estimate_piterbarg, ConstantEstimate,
};
pub use covcheck::{empirical_covariance_report, CovCell, CovarianceReport};
pub use error::{Result, SimError};
pub use fbm::{sample_fbm_at_times, sample_fbm_path, FgnSampler, GridSpec, PathSample};
pub use functional::{path_functional_sup, Transform};
pub use mc::{
    mc_ruin, mc_ruin_multi, mc_sup_random_interval, mc_sup_random_interval_multi, wilson_interval,
    Estimator, ExperimentConfig, IntervalLaw, MCEstimate,
};
pub use quad::{bm_drift_sup_prob, log_bm_drift_sup_prob, quadrature_ruin_bm, EndpointDensity};
pub use report::{
    render_report, run_logslope_experiment, run_ratio_experiment, RatioRow, ReportFormat,
    SlopeReport,
};
pub use subordinator::{
    endpoint_tail_model, sample_endpoint, sample_path, JumpDist, SubordinatorSpec,
};
