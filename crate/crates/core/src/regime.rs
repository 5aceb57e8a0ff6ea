//! Logarithmic asymptotics `log P ~ -K u^q` for log-power tailed interval
//! lengths, split into four regimes by the interplay of `γ p` with 2 and
//! the behaviour of `σ` at the origin.

use crate::error::{Error, Result};
use crate::math::pow;
use crate::sigma::{sigma_tilde, solve_a0, SigmaProfile};
use crate::OriginBehavior;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Regime {
    /// `γ p < 2`
    SubCritical,
    /// `γ p = 2`, interior variational minimizer
    Critical,
    /// `γ p > 2` with `σ(0) > 0`
    SuperCriticalPositiveSigma0,
    /// `γ p > 2` with `σ(t) ~ D t^η` at the origin
    SuperCriticalPowerLaw,
}

/// A logarithmic-asymptotics answer: `log P(u) / u^q -> -K`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RegimeResult {
    pub regime: Regime,
    pub u_exponent: f64,
    pub constant: f64,
}

/// `A1 = min_{t>0} g(t)` with `g(t) = 1/(2 D² t^{2η}) + L t^p`, in closed
/// form.
pub fn a1_constant(d_coef: f64, eta: f64, rate: f64, p: f64) -> f64 {
    let denom = 2.0 * eta + p;
    0.5 * pow(d_coef, -2.0 * p / denom) * pow(rate * p / eta, 2.0 * eta / denom)
        + pow(rate, 2.0 * eta / denom) * pow(eta / (p * d_coef * d_coef), p / denom)
}

/// Regime selector and constant for a log-power tail with power `tail_p`
/// and coefficient `tail_rate`.
pub fn thmlog_rate(
    profile: &SigmaProfile,
    gamma: f64,
    tail_p: f64,
    tail_rate: f64,
    t0: f64,
) -> Result<RegimeResult> {
    if !(gamma > 0.0) || !(tail_p > 0.0) || !(tail_rate > 0.0) {
        return Err(Error::Domain("gamma, p, L must be positive"));
    }
    let gp = gamma * tail_p;
    if gp < 2.0 {
        Ok(RegimeResult { regime: Regime::SubCritical, u_exponent: 2.0, constant: 0.5 })
    } else if gp == 2.0 {
        let a0 = solve_a0(profile, tail_rate, gamma, t0)?;
        let constant = sigma_tilde(profile, tail_rate, gamma, a0)?;
        Ok(RegimeResult { regime: Regime::Critical, u_exponent: 2.0, constant })
    } else {
        match profile.origin {
            Some(OriginBehavior::Positive { sigma0 }) => Ok(RegimeResult {
                regime: Regime::SuperCriticalPositiveSigma0,
                u_exponent: 2.0,
                constant: 1.0 / (2.0 * sigma0 * sigma0),
            }),
            Some(OriginBehavior::PowerLaw { coeff, exponent }) => Ok(RegimeResult {
                regime: Regime::SuperCriticalPowerLaw,
                u_exponent: 2.0 * tail_p * (exponent * gamma + 1.0) / (2.0 * exponent + tail_p),
                constant: a1_constant(coeff, exponent, tail_rate, tail_p),
            }),
            None => Err(Error::MissingOriginBehavior),
        }
    }
}
