//! Tail asymptotics for suprema of centered Gaussian processes over
//! threshold-dependent random intervals.
//!
//! The crate evaluates three layers of formulas:
//!
//! * general exact asymptotics `C θ(u) Ψ(u)` for a process with a unique
//!   variance maximum ([`asym`]),
//! * logarithmic asymptotics `log P ~ -K u^q` for log-power tailed interval
//!   lengths, including the variational constants `A0` and `A1` ([`regime`]),
//! * their specialization to the time-changed fractional Brownian motion
//!   risk process `u + c Y(t)^θ - B_α(Y(t))` ([`risk`]).
//!
//! All operations are pure functions of their inputs; simulation, Monte
//! Carlo and the command line live in the companion `tailsup` crate.
#![cfg_attr(not(test), no_std)]

extern crate alloc;

pub mod asym;
pub mod error;
mod math;
pub mod regime;
pub mod risk;
pub mod sigma;
pub mod survival;
pub mod tail;

pub use asym::{
    k1_asymptotic, prefactor_c, theta_factor, thmt_asymptotic, weibull_admissible,
    AsymptoticExpression, ExtraFactor, LocalStructure,
};
pub use error::{Error, Result};
pub use regime::{a1_constant, thmlog_rate, Regime, RegimeResult};
pub use risk::{
    laplace_motion_rates, prop1_asymptotic, prop2_a0, prop2_lograte, prop34_lograte,
    risk_constants, z_process_local_structure, DensitySpec, RiskConstants, RiskParams,
};
pub use sigma::{sigma_tilde, solve_a0, solve_a0_with_floor, OriginBehavior, SigmaProfile};
pub use survival::{gaussian_survival, log_gaussian_survival};
pub use tail::{SlowlyVarying, TailModel};
