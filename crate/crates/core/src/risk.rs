//! Specialization to the time-changed fBm risk process
//! `Z(t) = u + c Y(t)^θ - B_α(Y(t))`.
//!
//! The ruin probability over `[0, T]` reduces, by self-similarity of the
//! fBm, to the supremum of the standardized field `B_α(t) / (1 + c t^θ)`
//! over a random interval driven by the endpoint `Y(T)`. The constants
//! `s0`, `V0`, `Q` below describe the variance maximizer of that field and
//! the prefactor of its deterministic-interval asymptotics.

use crate::asym::LocalStructure;
use crate::error::{Error, Result};
use crate::math::{exp, ln, pow, sqrt};
use crate::regime::{Regime, RegimeResult};
use crate::survival::log_gaussian_survival;
use crate::tail::TailModel;

/// Parameters of the risk process: fBm exponent `α` (Hurst `α/2`), trend
/// power `θ > α/2` and premium coefficient `c > 0`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RiskParams {
    pub alpha: f64,
    pub theta: f64,
    pub c: f64,
}

impl RiskParams {
    pub fn new(alpha: f64, theta: f64, c: f64) -> Result<Self> {
        if !(alpha > 0.0 && alpha <= 2.0) {
            return Err(Error::Domain("alpha must lie in (0, 2]"));
        }
        if !(theta > alpha / 2.0) {
            return Err(Error::Domain("theta must exceed alpha/2"));
        }
        if !(c > 0.0) {
            return Err(Error::Domain("c must be positive"));
        }
        Ok(RiskParams { alpha, theta, c })
    }
}

/// `s0`: location of the variance maximum of `t^{α/2}/(1+c t^θ)`;
/// `V0`: its value; `Q`: the prefactor of the exact asymptotics.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RiskConstants {
    pub s0: f64,
    pub v0: f64,
    pub q: f64,
}

/// `(s0, V0, Q)` by direct substitution.
pub fn risk_constants(params: &RiskParams) -> RiskConstants {
    let RiskParams { alpha, theta, c } = *params;
    let s0 = pow(alpha / (c * (2.0 * theta - alpha)), 1.0 / theta);
    let v0 = (2.0 * theta - alpha) / (2.0 * theta) * pow(s0, alpha / 2.0);

    // s0 coincides with the maximizer of V(t) = t^{α/2}/(1+ct^θ) written
    // in its un-simplified form
    let t0 = pow((alpha / 2.0) / (c * (theta - alpha / 2.0)), 1.0 / theta);
    debug_assert!((s0 - t0).abs() <= 1e-12 * s0.max(1.0));

    let log_q = (0.5 + 1.0 / alpha) * ln(2.0)
        + 0.5 * ln(core::f64::consts::PI)
        + (2.0 - alpha) / (2.0 * theta) * ln(c)
        + (alpha - 2.0 - theta) / (2.0 * theta) * ln(alpha)
        + (2.0 - alpha) / alpha * ln(theta)
        + (theta * alpha - 4.0 * theta + 2.0 * alpha - alpha * alpha) / (2.0 * theta * alpha)
            * ln(2.0 * theta - alpha);
    RiskConstants { s0, v0, q: exp(log_q) }
}

/// `log ψ_T(u)` from the exact asymptotics for a regularly varying or
/// admissible Weibullian endpoint tail; the Pickands constant is injected.
pub fn prop1_log_asymptotic(
    params: &RiskParams,
    tail: &TailModel,
    pickands: f64,
    u: f64,
) -> Result<f64> {
    let RiskParams { alpha, theta, .. } = *params;
    let RiskConstants { s0, v0, q } = risk_constants(params);
    let two_theta_alpha = 2.0 * theta - alpha;
    let log_core = ln(q) + ln(pickands)
        + log_gaussian_survival(pow(u, two_theta_alpha / (2.0 * theta)) / v0);
    match *tail {
        TailModel::RegularlyVarying { lambda, sv } => Ok(log_core - lambda * ln(s0)
            + (two_theta_alpha * (2.0 - alpha) - 2.0 * lambda * alpha) / (2.0 * theta * alpha)
                * ln(u)
            + sv.log_eval(s0 * pow(u, 1.0 / theta))),
        TailModel::Weibullian { p, rate, delta, sv } => {
            let bound = two_theta_alpha / 3.0;
            if !(p > 0.0 && p < bound) {
                return Err(Error::Admissibility { p, bound });
            }
            Ok(log_core + delta * ln(s0)
                + (two_theta_alpha * (2.0 - alpha) + 2.0 * delta * alpha)
                    / (2.0 * theta * alpha)
                    * ln(u)
                + sv.log_eval(s0 * pow(u, 1.0 / theta))
                - rate * pow(s0, p) * pow(u, p / theta))
        }
        TailModel::LogPower { .. } => Err(Error::UnsupportedTail(
            "log-power endpoint tails carry logarithmic asymptotics only",
        )),
    }
}

/// Pointwise value of the exact ruin asymptotics at `u`.
pub fn prop1_asymptotic(
    params: &RiskParams,
    tail: &TailModel,
    pickands: f64,
    u: f64,
) -> Result<f64> {
    Ok(exp(prop1_log_asymptotic(params, tail, pickands, u)?))
}

/// Closed-form variational minimizer for the balanced regime
/// `2θ - α = p`.
pub fn prop2_a0(params: &RiskParams, rate: f64) -> f64 {
    let RiskParams { alpha, theta, c } = *params;
    let num = c * (alpha - theta)
        + sqrt(
            c * c * (theta - alpha) * (theta - alpha)
                + 2.0
                    * alpha
                    * (c * c * (theta - alpha / 2.0) + rate * (2.0 * theta - alpha)),
        );
    let den = c * c * (2.0 * theta - alpha) + 2.0 * rate * (2.0 * theta - alpha);
    pow(num / den, 1.0 / theta)
}

/// Logarithmic ruin asymptotics for a log-power endpoint tail with power
/// `p` and coefficient `rate`.
pub fn prop2_lograte(params: &RiskParams, p: f64, rate: f64) -> Result<RegimeResult> {
    if !(p > 0.0) || !(rate > 0.0) {
        return Err(Error::Domain("p, L must be positive"));
    }
    let RiskParams { alpha, theta, c } = *params;
    let two_theta_alpha = 2.0 * theta - alpha;
    if two_theta_alpha > p {
        let v0 = risk_constants(params).v0;
        Ok(RegimeResult {
            regime: Regime::SubCritical,
            u_exponent: two_theta_alpha / theta,
            constant: 1.0 / (2.0 * v0 * v0),
        })
    } else if two_theta_alpha < p {
        let constant = (0.5 * pow(2.0 * p / alpha, alpha / (alpha + p))
            + pow(alpha / (2.0 * p), p / (alpha + p)))
            * pow(rate, alpha / (alpha + p));
        Ok(RegimeResult {
            regime: Regime::SuperCriticalPowerLaw,
            u_exponent: 2.0 * p / (alpha + p),
            constant,
        })
    } else {
        let a0 = prop2_a0(params, rate);
        let one_plus = 1.0 + c * pow(a0, theta);
        let constant =
            one_plus * one_plus / (2.0 * pow(a0, alpha)) + rate * pow(a0, two_theta_alpha);
        Ok(RegimeResult {
            regime: Regime::Critical,
            u_exponent: two_theta_alpha / theta,
            constant,
        })
    }
}

/// Endpoint density specification for the discontinuous-time results.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum DensitySpec {
    /// Density regularly varying at infinity with index `λ + 1 > 1`.
    RegularlyVaryingDensity { lambda_plus_one: f64 },
    /// `log ρ(u) / u^p -> -rate`.
    LogPowerDensity { p: f64, rate: f64 },
}

/// Logarithmic ruin asymptotics for a discontinuous time change, given the
/// endpoint density class.
pub fn prop34_lograte(params: &RiskParams, density: &DensitySpec) -> Result<RegimeResult> {
    match *density {
        DensitySpec::RegularlyVaryingDensity { lambda_plus_one } => {
            if !(lambda_plus_one > 1.0) {
                return Err(Error::Domain("density index must exceed 1"));
            }
            let RiskParams { alpha, theta, .. } = *params;
            let v0 = risk_constants(params).v0;
            Ok(RegimeResult {
                regime: Regime::SubCritical,
                u_exponent: (2.0 * theta - alpha) / theta,
                constant: 1.0 / (2.0 * v0 * v0),
            })
        }
        DensitySpec::LogPowerDensity { p, rate } => prop2_lograte(params, p, rate),
    }
}

/// Rates for the fractional Laplace motion (Gamma-subordinated fBm with
/// `θ = 1`, unit Gamma parameter, hence a log-power endpoint with
/// `p = L = 1`).
pub fn laplace_motion_rates(alpha: f64, c: f64) -> Result<RegimeResult> {
    if !(alpha > 0.0 && alpha < 2.0) {
        return Err(Error::UnsupportedCase("Laplace-motion rates need alpha in (0, 2)"));
    }
    if !(c > 0.0) {
        return Err(Error::Domain("c must be positive"));
    }
    if alpha < 1.0 {
        let q = 2.0 - alpha;
        let constant = 2.0 / (q * q) * pow(c * q / alpha, alpha);
        Ok(RegimeResult { regime: Regime::SubCritical, u_exponent: q, constant })
    } else if alpha > 1.0 {
        let constant = 0.5 * pow(2.0 / alpha, alpha / (alpha + 1.0))
            + pow(alpha / 2.0, 1.0 / (alpha + 1.0));
        Ok(RegimeResult {
            regime: Regime::SuperCriticalPowerLaw,
            u_exponent: 2.0 / (alpha + 1.0),
            constant,
        })
    } else {
        let a0 = 1.0 / sqrt(c * c + 2.0);
        let one_plus = 1.0 + c * a0;
        let constant = one_plus * one_plus / (2.0 * a0) + a0;
        Ok(RegimeResult { regime: Regime::Critical, u_exponent: 1.0, constant })
    }
}

/// Local structure of the standardized field `B_α(t) t^{-α/2} V(t)/V0`
/// near its variance maximum: quadratic variance decay with coefficient
/// `a = (1/8) c^{2/θ} α^{1-2/θ} (2θ-α)^{1+2/θ}` and correlation decay
/// `d = 1/(2 s0^α)`.
pub fn z_process_local_structure(params: &RiskParams) -> LocalStructure {
    let RiskParams { alpha, theta, c } = *params;
    let s0 = risk_constants(params).s0;
    let a = 0.125
        * pow(c, 2.0 / theta)
        * pow(alpha, 1.0 - 2.0 / theta)
        * pow(2.0 * theta - alpha, 1.0 + 2.0 / theta);
    LocalStructure { t0: s0, a, beta: 2.0, d: 1.0 / (2.0 * pow(s0, alpha)), alpha, r: alpha }
}
