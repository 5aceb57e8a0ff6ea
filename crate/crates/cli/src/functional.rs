//! Path functionals: discrete suprema of transformed paths.

use crate::fbm::PathSample;

/// Pointwise transform applied to a path value at a given time.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Transform {
    Identity,
    /// `x - c t^θ`
    Drift { c: f64, theta: f64 },
    /// `x / (1 + c t^θ)`
    Normalized { c: f64, theta: f64 },
}

impl Transform {
    pub fn apply(&self, x: f64, t: f64) -> f64 {
        match *self {
            Transform::Identity => x,
            Transform::Drift { c, theta } => x - c * t.powf(theta),
            Transform::Normalized { c, theta } => x / (1.0 + c * t.powf(theta)),
        }
    }
}

/// Maximum of the transformed values over the grid points. A discrete
/// supremum, hence a downward-biased estimate of the continuous one.
pub fn path_functional_sup(path: &PathSample, transform: Transform) -> f64 {
    path.times
        .iter()
        .zip(&path.values)
        .map(|(&t, &x)| transform.apply(x, t))
        .fold(f64::NEG_INFINITY, f64::max)
}
