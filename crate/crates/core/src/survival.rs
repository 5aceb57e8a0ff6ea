//! Standard normal survival function `Ψ` with a log-space deep-tail branch.
//!
//! Products of the form `θ(u) Ψ(u) P{T >= t0 u^γ}` underflow long before the
//! asymptotic regime is reached, so every evaluator in this crate works with
//! `log Ψ` and exponentiates at the very end.

use crate::math::{erfc, exp, ln, FRAC_1_SQRT_2, LN_SQRT_2PI};

/// Beyond this point `erfc` loses nothing but we switch to the Mills-ratio
/// expansion so `log Ψ` stays finite for arbitrarily large arguments.
const TAIL_CUTOFF: f64 = 8.0;

/// `P(N(0,1) > x)`.
pub fn gaussian_survival(x: f64) -> f64 {
    if x < TAIL_CUTOFF {
        0.5 * erfc(x * FRAC_1_SQRT_2)
    } else {
        exp(log_gaussian_survival(x))
    }
}

/// `log P(N(0,1) > x)`, finite for all finite `x`.
pub fn log_gaussian_survival(x: f64) -> f64 {
    if x < TAIL_CUTOFF {
        ln(0.5 * erfc(x * FRAC_1_SQRT_2))
    } else {
        // Ψ(x) = φ(x)/x (1 - 1/x² + 3/x⁴ - 15/x⁶ + O(x⁻⁸))
        let inv2 = 1.0 / (x * x);
        let series = 1.0 - inv2 * (1.0 - inv2 * (3.0 - 15.0 * inv2));
        -0.5 * x * x - ln(x) - LN_SQRT_2PI + ln(series)
    }
}
