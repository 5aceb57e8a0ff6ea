//! Float math routed through `libm` so the crate stays `no_std`.

pub(crate) use libm::{erfc, exp, log as ln, pow, sqrt, tgamma};

pub(crate) const LN_SQRT_2PI: f64 = 0.918_938_533_204_672_7;
pub(crate) const FRAC_1_SQRT_2: f64 = core::f64::consts::FRAC_1_SQRT_2;
