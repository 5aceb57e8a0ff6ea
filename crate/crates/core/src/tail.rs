//! Tail models for the random interval length.
//!
//! Three families are supported: regularly varying tails `L(u) u^{-λ}`,
//! Weibullian tails `L(u) u^δ exp(-L u^p)` and log-power tails, for which
//! only `log P{T > u} / u^p -> -L` is fixed. A log-power model is evaluated
//! as the representative member `exp(-L u^p)`; any sub-exponential prefactor
//! is unconstrained by the definition, so pointwise values are meaningful on
//! the log scale only.

use crate::math::{exp, ln, pow};

/// Slowly varying factor `L(u)`; the constant 1 by default, with log-power
/// forms `c (log u)^k` as the only built-in alternative.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum SlowlyVarying {
    Constant(f64),
    LogPower { coeff: f64, k: f64 },
}

impl Default for SlowlyVarying {
    fn default() -> Self {
        SlowlyVarying::Constant(1.0)
    }
}

impl SlowlyVarying {
    pub fn log_eval(&self, u: f64) -> f64 {
        match *self {
            SlowlyVarying::Constant(c) => ln(c),
            SlowlyVarying::LogPower { coeff, k } => ln(coeff) + k * ln(ln(u)),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum TailModel {
    /// `P{T > u} = L(u) u^{-λ}`, `λ > 0`.
    RegularlyVarying { lambda: f64, sv: SlowlyVarying },
    /// `P{T > u} ~ L(u) u^δ exp(-rate u^p)`, `p, rate > 0`.
    Weibullian { p: f64, rate: f64, delta: f64, sv: SlowlyVarying },
    /// `log P{T > u} / u^p -> -rate`; evaluated as `exp(-rate u^p)`.
    LogPower { p: f64, rate: f64 },
}

impl TailModel {
    pub fn regularly_varying(lambda: f64) -> Self {
        TailModel::RegularlyVarying { lambda, sv: SlowlyVarying::default() }
    }

    pub fn weibullian(p: f64, rate: f64, delta: f64) -> Self {
        TailModel::Weibullian { p, rate, delta, sv: SlowlyVarying::default() }
    }

    pub fn log_power(p: f64, rate: f64) -> Self {
        TailModel::LogPower { p, rate }
    }

    /// `log P{T > u}`, clamped to be at most 0.
    pub fn log_tail(&self, u: f64) -> f64 {
        let raw = match *self {
            TailModel::RegularlyVarying { lambda, sv } => sv.log_eval(u) - lambda * ln(u),
            TailModel::Weibullian { p, rate, delta, sv } => {
                sv.log_eval(u) + delta * ln(u) - rate * pow(u, p)
            }
            TailModel::LogPower { p, rate } => -rate * pow(u, p),
        };
        if raw > 0.0 {
            0.0
        } else {
            raw
        }
    }

    /// `P{T > u}`, clamped to `[0, 1]`.
    pub fn tail_probability(&self, u: f64) -> f64 {
        exp(self.log_tail(u))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn regularly_varying_power_law() {
        let t = TailModel::regularly_varying(2.0);
        assert!((t.tail_probability(10.0) - 0.01).abs() < 1e-15);
    }

    #[test]
    fn weibullian_exponential() {
        let t = TailModel::weibullian(1.0, 1.0, 0.0);
        assert!((t.tail_probability(3.0) - (-3.0_f64).exp()).abs() < 1e-12);
    }

    #[test]
    fn log_power_representative() {
        let t = TailModel::log_power(2.0, 0.5);
        assert!((t.tail_probability(2.0) - (-2.0_f64).exp()).abs() < 1e-12);
    }

    #[test]
    fn clamped_to_unit_interval() {
        let t = TailModel::regularly_varying(2.0);
        assert_eq!(t.tail_probability(0.1), 1.0);
        let w = TailModel::Weibullian {
            p: 1.0,
            rate: 0.01,
            delta: 3.0,
            sv: SlowlyVarying::Constant(5.0),
        };
        for &u in &[0.5, 1.0, 2.0, 10.0, 100.0] {
            let v = w.tail_probability(u);
            assert!((0.0..=1.0).contains(&v));
        }
    }

    #[test]
    fn slowly_varying_log_power_form() {
        let t = TailModel::RegularlyVarying {
            lambda: 2.0,
            sv: SlowlyVarying::LogPower { coeff: 2.0, k: 3.0 },
        };
        let u: f64 = 50.0;
        let expect = 2.0 * u.ln().powi(3) / (u * u);
        assert!((t.tail_probability(u) - expect).abs() < 1e-12 * expect);
    }
}
