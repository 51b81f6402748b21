//! Shared inputs for the kernel benchmarks.

use curvelab_core::lorentz::random_step;
use curvelab_core::rng::stream;
use curvelab_core::{Curve, Density, StepFunction};

pub fn moment3() -> Curve {
    Curve::moment(3).expect("moment curve")
}

pub fn unit_bump() -> Density {
    Density::bump(0.5, 1.0).expect("bump")
}

/// Frequencies of growing size along a fixed direction.
pub fn frequencies(lambdas: &[f64]) -> Vec<[f64; 3]> {
    lambdas.iter().map(|l| [0.3 * l, -0.5 * l, 0.8 * l]).collect()
}

pub fn step_functions(count: usize, seed: u64) -> Vec<StepFunction> {
    let mut rng = stream(seed, 0);
    (0..count).map(|_| random_step(&mut rng, 6)).collect()
}
