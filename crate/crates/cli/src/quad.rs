//! Exact oracles for the Brownian (α = 1) case: the reflection identity for
//! the drifted supremum and adaptive quadrature of the endpoint mixture.

use tailsup_core::log_gaussian_survival;

use crate::error::{Result, SimError};

/// `log(e^a + e^b)` without overflow.
pub fn log_add_exp(a: f64, b: f64) -> f64 {
    if a == f64::NEG_INFINITY {
        return b;
    }
    let (hi, lo) = if a >= b { (a, b) } else { (b, a) };
    hi + (lo - hi).exp().ln_1p()
}

/// `log P(sup_{[0,s]}(B(t) − c t) > u)` by the reflection identity
/// `Ψ((u+cs)/√s) + e^{−2cu} Ψ((u−cs)/√s)`, assembled in log space.
pub fn log_bm_drift_sup_prob(c: f64, s: f64, u: f64) -> f64 {
    let sq = s.sqrt();
    let a = log_gaussian_survival((u + c * s) / sq);
    let b = -2.0 * c * u + log_gaussian_survival((u - c * s) / sq);
    log_add_exp(a, b).min(0.0)
}

pub fn bm_drift_sup_prob(c: f64, s: f64, u: f64) -> f64 {
    log_bm_drift_sup_prob(c, s, u).exp()
}

/// Endpoint density of `Y(T)` with a known analytic form.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum EndpointDensity {
    /// `Gamma(shape, 1)`.
    Gamma { shape: f64 },
    /// `λ x_min^λ s^{−(λ+1)}` on `[x_min, ∞)`, with `λ = lambda_plus_one − 1`.
    Pareto { lambda_plus_one: f64, x_min: f64 },
    /// Point mass at `y0`.
    PointMass { y0: f64 },
}

impl EndpointDensity {
    fn log_density(&self, s: f64) -> f64 {
        match *self {
            EndpointDensity::Gamma { shape } => {
                if s <= 0.0 {
                    f64::NEG_INFINITY
                } else {
                    (shape - 1.0) * s.ln() - s - ln_gamma(shape)
                }
            }
            EndpointDensity::Pareto { lambda_plus_one, x_min } => {
                if s < x_min {
                    f64::NEG_INFINITY
                } else {
                    let lambda = lambda_plus_one - 1.0;
                    lambda.ln() + lambda * x_min.ln() - lambda_plus_one * s.ln()
                }
            }
            EndpointDensity::PointMass { .. } => f64::NEG_INFINITY,
        }
    }

    fn validate(&self) -> Result<()> {
        match *self {
            EndpointDensity::Gamma { shape } if !(shape > 0.0) => {
                Err(SimError::Domain("Gamma shape must be positive"))
            }
            EndpointDensity::Pareto { lambda_plus_one, x_min }
                if !(lambda_plus_one > 1.0) || !(x_min > 0.0) =>
            {
                Err(SimError::Domain("Pareto parameters out of range"))
            }
            EndpointDensity::PointMass { y0 } if !(y0 > 0.0) => {
                Err(SimError::Domain("point mass must be positive"))
            }
            _ => Ok(()),
        }
    }
}

fn ln_gamma(x: f64) -> f64 {
    libm::lgamma(x)
}

const REL_TOL: f64 = 1e-8;
const MAX_REFINEMENTS: usize = 10_000;

/// `log ψ_T(u) = log ∫ P(sup_{[0,s]}(B − ct) > u) ρ(s) ds` for the α = 1,
/// θ = 1 risk process, by adaptive Gauss–Kronrod quadrature in log time.
///
/// The integrand peak is located first (scan plus golden-section), the
/// integration window is grown until the integrand has fallen 80 nats
/// below the peak on both sides, and panels are refined to relative
/// tolerance `tol`.
pub fn quadrature_ruin_bm_tol(
    c: f64,
    density: &EndpointDensity,
    u: f64,
    tol: f64,
) -> Result<f64> {
    if !(c > 0.0) || !(u > 0.0) {
        return Err(SimError::Domain("c and u must be positive"));
    }
    density.validate()?;
    if let EndpointDensity::PointMass { y0 } = *density {
        return Ok(log_bm_drift_sup_prob(c, y0, u));
    }

    // integrand in x = log s, including the Jacobian e^x
    let g = |x: f64| {
        let s = x.exp();
        log_bm_drift_sup_prob(c, s, u) + density.log_density(s) + x
    };

    // peak bracketing: coarse scan over a generous window
    let (x_min, x_max) = (1e-8f64.ln(), (50.0 * u + 100.0).ln());
    let scan = 2_000;
    let mut best = (x_min, f64::NEG_INFINITY);
    for i in 0..=scan {
        let x = x_min + (x_max - x_min) * i as f64 / scan as f64;
        let v = g(x);
        if v > best.1 {
            best = (x, v);
        }
    }
    let step = (x_max - x_min) / scan as f64;
    let peak_x = golden_max(&g, best.0 - step, best.0 + step);
    let peak = g(peak_x);
    if peak == f64::NEG_INFINITY {
        return Err(SimError::Domain("integrand vanishes identically"));
    }

    // expand the window until the integrand is 80 nats below the peak
    let drop = 80.0;
    let mut lo = peak_x;
    while g(lo) > peak - drop && lo > x_min - 200.0 {
        lo -= 0.25;
    }
    let mut hi = peak_x;
    while g(hi) > peak - drop && hi < x_max + 200.0 {
        hi += 0.25;
    }

    // shifted integrand is O(1) at the peak
    let f = |x: f64| (g(x) - peak).exp();
    let integral = adaptive_gk15(&f, lo, hi, tol)?;
    Ok(peak + integral.ln())
}

pub fn quadrature_ruin_bm(c: f64, density: &EndpointDensity, u: f64) -> Result<f64> {
    quadrature_ruin_bm_tol(c, density, u, REL_TOL)
}

fn golden_max<F: Fn(f64) -> f64>(f: &F, mut a: f64, mut b: f64) -> f64 {
    const INV_PHI: f64 = 0.618_033_988_749_894_9;
    while b - a > 1e-12 {
        let c = b - INV_PHI * (b - a);
        let d = a + INV_PHI * (b - a);
        if f(c) >= f(d) {
            b = d;
        } else {
            a = c;
        }
    }
    (a + b) / 2.0
}

// Gauss–Kronrod 7-15 nodes on [-1, 1]
const XGK: [f64; 8] = [
    0.991_455_371_120_813,
    0.949_107_912_342_759,
    0.864_864_423_359_769,
    0.741_531_185_599_394,
    0.586_087_235_467_691,
    0.405_845_151_377_397,
    0.207_784_955_007_898,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529,
    0.063_092_092_629_979,
    0.104_790_010_322_250,
    0.140_653_259_715_525,
    0.169_004_726_639_267,
    0.190_350_578_064_785,
    0.204_432_940_075_298,
    0.209_482_141_084_728,
];
const WG: [f64; 4] = [
    0.129_484_966_168_870,
    0.279_705_391_489_277,
    0.381_830_050_505_119,
    0.417_959_183_673_469,
];

/// One Gauss–Kronrod 7-15 panel: returns (K15 value, |K15 − G7|).
fn gk15<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> (f64, f64) {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(center);
    let mut kronrod = WGK[7] * fc;
    let mut gauss = WG[3] * fc;
    for j in 0..7 {
        let x = half * XGK[j];
        let sum = f(center - x) + f(center + x);
        kronrod += WGK[j] * sum;
        if j % 2 == 1 {
            gauss += WG[j / 2] * sum;
        }
    }
    (kronrod * half, (kronrod - gauss).abs() * half)
}

fn adaptive_gk15<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, rel_tol: f64) -> Result<f64> {
    let mut stack = vec![(a, b)];
    let mut total = 0.0;
    let mut refinements = 0usize;
    let whole = gk15(f, a, b).0.abs().max(f64::MIN_POSITIVE);
    while let Some((lo, hi)) = stack.pop() {
        let (val, err) = gk15(f, lo, hi);
        // per-panel budget proportional to panel share of the domain
        let budget = rel_tol * whole * (hi - lo) / (b - a);
        if err <= budget || hi - lo < 1e-14 {
            total += val;
        } else {
            refinements += 1;
            if refinements > MAX_REFINEMENTS {
                return Err(SimError::Quadrature {
                    tolerance: rel_tol,
                    refinements: MAX_REFINEMENTS,
                });
            }
            let mid = 0.5 * (lo + hi);
            stack.push((lo, mid));
            stack.push((mid, hi));
        }
    }
    Ok(total)
}
