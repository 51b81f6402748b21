//! Numerical laboratory for Fourier extension estimates along curves.
//!
//! The crate is organised around the objects that appear in endpoint
//! restriction theory for curves in `R^d`:
//!
//! * [`curve`]: moment, monomial, exponential and power-triple curves with
//!   closed-form derivatives, torsion, affine arclength weight and offspring
//!   curves.
//! * [`osc`]: the extension operator and model oscillatory integrals,
//!   evaluated by phase-adaptive Gauss–Legendre panels.
//! * [`lorentz`]: decreasing rearrangements and exact Lorentz quasi-norms of
//!   step functions, with inequality checkers.
//! * [`vandermonde`]: Vandermonde determinants, sublevel-set measures and the
//!   weighted mixed norm of the Vandermonde operator.
//! * [`positivity`]: total positivity of exponential kernels and Jacobians of
//!   offspring maps.
//! * [`lowerbound`]: the bump-sum family showing the weak-type bound cannot
//!   be improved.
//! * [`report`]: experiment reports and log-log exponent fitting.

#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::needless_range_loop)]

pub mod curve;
pub mod density;
pub mod error;
pub mod intervals;
pub mod linalg;
pub mod lorentz;
pub mod lowerbound;
pub mod osc;
pub mod positivity;
pub mod quadrature;
pub mod report;
pub mod rng;
pub mod special;
pub mod vandermonde;

pub use curve::{critical_exponents, CriticalExponents, Curve, CurveEval, Domain, Family};
pub use density::{Bump, Density};
pub use error::{Error, Result};
pub use intervals::IntervalSet;
pub use lorentz::{GridFunction, LorentzIndex, StepFunction};
pub use osc::OscResult;
pub use report::{fit_exponent, Criterion, ExperimentReport, Fit, Verdict};
pub use vandermonde::MCEstimate;

pub use num_complex::Complex64;
