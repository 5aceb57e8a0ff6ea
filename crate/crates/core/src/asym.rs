//! Exact asymptotics `C θ(u) Ψ(u)` for the supremum of a Gaussian process
//! with a unique variance maximum, and its extension to random intervals.

use crate::error::{Error, Result};
use crate::math::{exp, ln, pow, tgamma};
use crate::survival::log_gaussian_survival;
use crate::tail::TailModel;

/// Local description of a process near its unique variance maximum `t0`:
/// standard deviation `1 - a|t - t0|^β + o(...)`, correlation of the
/// standardized process `1 - d|t - s|^α + o(...)`, and Hölder exponent `r`
/// of the increments on compacts.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LocalStructure {
    pub t0: f64,
    pub a: f64,
    pub beta: f64,
    pub d: f64,
    pub alpha: f64,
    pub r: f64,
}

impl LocalStructure {
    pub fn new(t0: f64, a: f64, beta: f64, d: f64, alpha: f64, r: f64) -> Result<Self> {
        if !(t0 > 0.0) {
            return Err(Error::Domain("t0 must be positive"));
        }
        if !(a > 0.0) || !(beta > 0.0) || !(d > 0.0) {
            return Err(Error::Domain("a, beta, d must be positive"));
        }
        if !(alpha > 0.0 && alpha <= 2.0) {
            return Err(Error::Domain("alpha must lie in (0, 2]"));
        }
        if !(r > 0.0 && r <= 2.0) {
            return Err(Error::Domain("r must lie in (0, 2]"));
        }
        Ok(LocalStructure { t0, a, beta, d, alpha, r })
    }
}

fn check_alpha_beta(alpha: f64, beta: f64) -> Result<()> {
    if !(alpha > 0.0 && alpha <= 2.0) {
        return Err(Error::Domain("alpha must lie in (0, 2]"));
    }
    if !(beta > 0.0) {
        return Err(Error::Domain("beta must be positive"));
    }
    Ok(())
}

/// Polynomial factor `θ(u)`: `u^{2/α - 2/β}` when `α < β`, otherwise 1.
pub fn theta_factor(alpha: f64, beta: f64, u: f64) -> Result<f64> {
    check_alpha_beta(alpha, beta)?;
    if !(u > 0.0) {
        return Err(Error::Domain("u must be positive"));
    }
    Ok(if alpha < beta { pow(u, 2.0 / alpha - 2.0 / beta) } else { 1.0 })
}

/// Constant `C`: `2 H_α Γ(1/β + 1) d^{1/α} a^{-1/β}` when `α < β`, the
/// Piterbarg constant `P_α^{a/d}` when `α = β`, and 1 when `α > β`.
///
/// The Pickands and Piterbarg constants are injected (estimated or taken
/// from a user table); whichever branch does not apply may receive a
/// placeholder.
pub fn prefactor_c(
    alpha: f64,
    beta: f64,
    a: f64,
    d: f64,
    pickands: f64,
    piterbarg: f64,
) -> Result<f64> {
    check_alpha_beta(alpha, beta)?;
    if !(a > 0.0) || !(d > 0.0) {
        return Err(Error::Domain("a, d must be positive"));
    }
    if alpha < beta {
        Ok(2.0 * pickands * tgamma(1.0 / beta + 1.0) * pow(d, 1.0 / alpha) * pow(a, -1.0 / beta))
    } else if alpha == beta {
        Ok(piterbarg)
    } else {
        Ok(1.0)
    }
}

/// Whether the Weibullian exponent `p` admits the exact random-interval
/// asymptotics for given `γ` and `β`: `p < 2 / (γ (1 + β))`.
pub fn weibull_admissible(p: f64, gamma: f64, beta: f64) -> bool {
    p < 2.0 / (gamma * (1.0 + beta))
}

/// Multiplicative factor attached to an [`AsymptoticExpression`] beyond the
/// `prefactor · u^poly · Ψ` core.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum ExtraFactor {
    None,
    Constant(f64),
    /// `P{T >= time_scale · u^u_exponent}` under `model`.
    Tail { model: TailModel, time_scale: f64, u_exponent: f64 },
}

/// A tail asymptotic of the form
/// `prefactor · u^{poly_exponent} · Ψ(gauss_scale · u^{gauss_exponent})`,
/// optionally times an extra tail factor. Evaluable at any `u > 0`, in
/// linear or log scale.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct AsymptoticExpression {
    pub prefactor: f64,
    pub poly_exponent: f64,
    pub gauss_scale: f64,
    pub gauss_exponent: f64,
    pub extra_tail: ExtraFactor,
}

impl AsymptoticExpression {
    pub fn log_value(&self, u: f64) -> f64 {
        let core = ln(self.prefactor)
            + self.poly_exponent * ln(u)
            + log_gaussian_survival(self.gauss_scale * pow(u, self.gauss_exponent));
        core + match self.extra_tail {
            ExtraFactor::None => 0.0,
            ExtraFactor::Constant(c) => ln(c),
            ExtraFactor::Tail { model, time_scale, u_exponent } => {
                model.log_tail(time_scale * pow(u, u_exponent))
            }
        }
    }

    pub fn value(&self, u: f64) -> f64 {
        exp(self.log_value(u))
    }
}

/// Deterministic-interval asymptotics: `u -> C θ(u) Ψ(u)`.
pub fn k1_asymptotic(
    ls: &LocalStructure,
    pickands: f64,
    piterbarg: f64,
) -> Result<AsymptoticExpression> {
    let prefactor = prefactor_c(ls.alpha, ls.beta, ls.a, ls.d, pickands, piterbarg)?;
    let poly_exponent =
        if ls.alpha < ls.beta { 2.0 / ls.alpha - 2.0 / ls.beta } else { 0.0 };
    Ok(AsymptoticExpression {
        prefactor,
        poly_exponent,
        gauss_scale: 1.0,
        gauss_exponent: 1.0,
        extra_tail: ExtraFactor::None,
    })
}

/// Random-interval asymptotics: `u -> C θ(u) Ψ(u) · P{T >= t0 u^γ}`.
///
/// For `γ = 0` the extra factor degenerates to the constant `P{T >= t0}`
/// evaluated under the supplied tail model. For `γ > 0` the tail must be
/// regularly varying, or Weibullian with an admissible exponent; log-power
/// tails fix only the exponential rate and carry no exact asymptotics.
pub fn thmt_asymptotic(
    ls: &LocalStructure,
    tail: &TailModel,
    gamma: f64,
    pickands: f64,
    piterbarg: f64,
) -> Result<AsymptoticExpression> {
    if gamma < 0.0 {
        return Err(Error::Domain("gamma must be non-negative"));
    }
    let mut expr = k1_asymptotic(ls, pickands, piterbarg)?;
    if gamma == 0.0 {
        expr.extra_tail = ExtraFactor::Constant(tail.tail_probability(ls.t0));
        return Ok(expr);
    }
    match *tail {
        TailModel::RegularlyVarying { .. } => {}
        TailModel::Weibullian { p, .. } => {
            let bound = 2.0 / (gamma * (1.0 + ls.beta));
            if !weibull_admissible(p, gamma, ls.beta) {
                return Err(Error::Admissibility { p, bound });
            }
        }
        TailModel::LogPower { .. } => {
            return Err(Error::UnsupportedTail(
                "log-power tails admit logarithmic asymptotics only",
            ));
        }
    }
    expr.extra_tail = ExtraFactor::Tail { model: *tail, time_scale: ls.t0, u_exponent: gamma };
    Ok(expr)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::survival::gaussian_survival;

    const SQRT_PI: f64 = 1.772_453_850_905_516;

    #[test]
    fn theta_factor_table() {
        assert!((theta_factor(1.0, 2.0, 10.0).unwrap() - 10.0).abs() < 1e-12);
        assert_eq!(theta_factor(2.0, 1.0, 7.0).unwrap(), 1.0);
        assert_eq!(theta_factor(1.5, 1.5, 100.0).unwrap(), 1.0);
    }

    #[test]
    fn theta_factor_domain() {
        assert!(theta_factor(0.0, 1.0, 1.0).is_err());
        assert!(theta_factor(2.5, 1.0, 1.0).is_err());
        assert!(theta_factor(1.0, 0.0, 1.0).is_err());
    }

    #[test]
    fn theta_continuous_from_below_at_diagonal() {
        // u^{2/α - 2/β} -> 1 as α ↑ β
        for &u in &[0.5, 3.0, 50.0] {
            let near = theta_factor(1.5 - 1e-9, 1.5, u).unwrap();
            assert!((near - 1.0).abs() < 1e-6, "u = {u}");
        }
    }

    #[test]
    fn prefactor_table() {
        assert_eq!(prefactor_c(2.0, 1.0, 1.0, 1.0, 9.9, 9.9).unwrap(), 1.0);
        // α < β with H = 1: 2 Γ(3/2) = √π
        let c = prefactor_c(1.0, 2.0, 1.0, 1.0, 1.0, 9.9).unwrap();
        assert!((c - SQRT_PI).abs() < 1e-12);
        // α = β passes the Piterbarg constant through
        let p = prefactor_c(1.0, 1.0, 2.0, 3.0, 9.9, 1.234).unwrap();
        assert_eq!(p, 1.234);
    }

    #[test]
    fn k1_composition() {
        let ls = LocalStructure::new(1.0, 1.0, 2.0, 1.0, 1.0, 1.0).unwrap();
        let expr = k1_asymptotic(&ls, 1.0, 1.0).unwrap();
        assert!((expr.prefactor - SQRT_PI).abs() < 1e-12);
        assert!((expr.poly_exponent - 1.0).abs() < 1e-12);
        let u = 5.0;
        let direct = SQRT_PI * u * gaussian_survival(u);
        assert!((expr.value(u) - direct).abs() < 1e-15 * direct);
    }

    #[test]
    fn k1_alpha_above_beta_is_plain_survival() {
        let ls = LocalStructure::new(1.0, 1.0, 1.0, 1.0, 1.5, 1.5).unwrap();
        let expr = k1_asymptotic(&ls, 9.9, 9.9).unwrap();
        assert_eq!(expr.prefactor, 1.0);
        assert_eq!(expr.poly_exponent, 0.0);
        assert!((expr.value(3.0) - gaussian_survival(3.0)).abs() < 1e-18);
    }

    #[test]
    fn k1_eventually_decreasing() {
        let ls = LocalStructure::new(1.0, 1.0, 2.0, 1.0, 1.0, 1.0).unwrap();
        let expr = k1_asymptotic(&ls, 1.0, 1.0).unwrap();
        let mut prev = expr.log_value(3.0);
        for i in 1..200 {
            let u = 3.0 + 0.25 * i as f64;
            let cur = expr.log_value(u);
            assert!(cur < prev, "u = {u}");
            prev = cur;
        }
    }

    #[test]
    fn weibull_admissibility_bound() {
        assert!(weibull_admissible(0.1, 1.0, 1.0));
        assert!(!weibull_admissible(1.0, 1.0, 2.0));
        assert!(weibull_admissible(0.66, 1.0, 2.0));
    }

    #[test]
    fn thmt_gamma_zero_superset_is_k1() {
        let ls = LocalStructure::new(1.0, 1.0, 2.0, 1.0, 1.0, 1.0).unwrap();
        // t0 = 1 and a regularly varying tail clamp to P{T >= t0} = 1
        let tail = TailModel::regularly_varying(2.0);
        let with_tail = thmt_asymptotic(&ls, &tail, 0.0, 1.0, 1.0).unwrap();
        let plain = k1_asymptotic(&ls, 1.0, 1.0).unwrap();
        for &u in &[1.0, 2.0, 7.5, 30.0] {
            assert_eq!(with_tail.log_value(u), plain.log_value(u));
        }
    }

    #[test]
    fn thmt_regularly_varying_factor() {
        let ls = LocalStructure::new(1.0, 1.0, 2.0, 1.0, 1.0, 1.0).unwrap();
        let tail = TailModel::regularly_varying(2.0);
        let expr = thmt_asymptotic(&ls, &tail, 1.0, 1.0, 1.0).unwrap();
        let u = 20.0;
        let expect = k1_asymptotic(&ls, 1.0, 1.0).unwrap().value(u) * u.powi(-2);
        assert!((expr.value(u) - expect).abs() < 1e-12 * expect);
    }

    #[test]
    fn thmt_rejects_inadmissible_weibull() {
        let ls = LocalStructure::new(1.0, 1.0, 2.0, 1.0, 1.0, 1.0).unwrap();
        let tail = TailModel::weibullian(1.0, 1.0, 0.0);
        match thmt_asymptotic(&ls, &tail, 1.0, 1.0, 1.0) {
            Err(Error::Admissibility { p, bound }) => {
                assert_eq!(p, 1.0);
                assert!((bound - 2.0 / 3.0).abs() < 1e-15);
            }
            other => panic!("expected admissibility error, got {other:?}"),
        }
    }

    #[test]
    fn thmt_rejects_log_power_for_positive_gamma() {
        let ls = LocalStructure::new(1.0, 1.0, 2.0, 1.0, 1.0, 1.0).unwrap();
        let tail = TailModel::log_power(1.0, 1.0);
        assert!(matches!(
            thmt_asymptotic(&ls, &tail, 1.0, 1.0, 1.0),
            Err(Error::UnsupportedTail(_))
        ));
    }
}
