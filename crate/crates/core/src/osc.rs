//! Extension operator, model oscillatory integrals and stationary points.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::curve::{Curve, CurveEval};
use crate::density::Density;
use crate::error::{Error, Result};
use crate::quadrature::{integrate_oscillatory, PanelOptions};
use crate::special::gamma;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OscResult {
    pub value: Complex64,
    pub abs_error_estimate: f64,
    pub panels_used: usize,
}

/// `E f(xi) = int f(t) exp(-i <xi, gamma(t)>) dt`.
pub fn extension(curve: &Curve, f: &Density, xi: &[f64], tol: f64) -> Result<OscResult> {
    extension_with(curve, f, xi, PanelOptions { tol, ..Default::default() })
}

pub fn extension_with(curve: &Curve, f: &Density, xi: &[f64], opts: PanelOptions) -> Result<OscResult> {
    if xi.len() != curve.dim() {
        return Err(Error::arg(format!("xi has length {}, curve dimension is {}", xi.len(), curve.dim())));
    }
    if xi.iter().any(|x| !x.is_finite()) {
        return Err(Error::arg("xi must be finite"));
    }
    let (lo, hi) = f.support();
    let dom = curve.domain();
    if lo < dom.lo || hi > dom.hi {
        return Err(Error::domain(format!(
            "density support [{lo}, {hi}] not inside [{}, {}]",
            dom.lo, dom.hi
        )));
    }
    integrate_oscillatory(
        &f.pieces(),
        |t| f.eval(t),
        |t| {
            let (p, s) = curve.phase_and_speed(xi, t);
            (-p, -s)
        },
        opts,
    )
}

/// Leading coefficient of `int exp(i lambda s^k) ds ~ alpha_k lambda^{-1/k}`.
pub fn alpha_k(k: u32) -> Result<Complex64> {
    if k < 2 {
        return Err(Error::arg(format!("alpha_k needs k >= 2, got {k}")));
    }
    let kf = k as f64;
    let c = 2.0 / kf * gamma(1.0 / kf);
    Ok(if k % 2 == 1 {
        Complex64::new(c * ((kf - 1.0) * PI / (2.0 * kf)).sin(), 0.0)
    } else {
        Complex64::from_polar(c, PI / (2.0 * kf))
    })
}

/// Smooth perturbation `g` of the model phase, returning `(g(s), g'(s))`.
pub type PhaseRemainder<'a> = &'a (dyn Fn(f64) -> (f64, f64) + Sync);

/// `I_lambda(eta, x) = int eta(s) exp(i lambda (sum_j x_j s^j + s^k + g(s) s^{k+1})) ds`.
///
/// Enforces `lambda > 2` and `|x_j| <= eps lambda^{(j-k)/k}`.
pub fn model_integral(
    eta: &Density,
    lambda: f64,
    x: &[f64],
    k: u32,
    g: Option<PhaseRemainder<'_>>,
    eps: f64,
) -> Result<OscResult> {
    if k < 2 {
        return Err(Error::arg(format!("k must be >= 2, got {k}")));
    }
    if !(lambda > 2.0) || !lambda.is_finite() {
        return Err(Error::arg(format!("lambda must exceed 2, got {lambda}")));
    }
    if x.len() != k as usize - 2 {
        return Err(Error::arg(format!("need {} lower coefficients, got {}", k - 2, x.len())));
    }
    for (i, xj) in x.iter().enumerate() {
        let j = (i + 1) as f64;
        let bound = eps * lambda.powf((j - k as f64) / k as f64);
        if !(xj.abs() <= bound) {
            return Err(Error::arg(format!("|x_{}| = {} exceeds {bound}", i + 1, xj.abs())));
        }
    }
    let (lo, hi) = eta.support();
    if lo < -1.0 || hi > 1.0 {
        return Err(Error::arg("eta must be supported in [-1, 1]"));
    }
    if eta.eta_bounds().is_none() {
        return Err(Error::arg("eta must be a smooth bump density"));
    }
    let ki = k as i32;
    let phase = |s: f64| {
        let mut p = 0.0;
        let mut dp = 0.0;
        for (i, xj) in x.iter().enumerate() {
            let j = (i + 1) as i32;
            p += xj * s.powi(j);
            dp += j as f64 * xj * s.powi(j - 1);
        }
        p += s.powi(ki);
        dp += k as f64 * s.powi(ki - 1);
        if let Some(g) = g {
            let (gv, dg) = g(s);
            p += gv * s.powi(ki + 1);
            dp += dg * s.powi(ki + 1) + (k + 1) as f64 * gv * s.powi(ki);
        }
        (lambda * p, lambda * dp)
    };
    integrate_oscillatory(&eta.pieces(), |s| eta.eval(s), phase, PanelOptions::default())
}

/// Root of `<gamma^{(d-1)}(t), xi> = 0` in the curve's domain.
pub fn critical_time(curve: &Curve, xi: &[f64]) -> Result<f64> {
    let d = curve.dim();
    if xi.len() != d || xi.iter().any(|x| !x.is_finite()) {
        return Err(Error::arg("xi must be a finite vector of the curve's dimension"));
    }
    let dom = curve.domain();
    let f = |t: f64| curve.inner_derivative(d - 1, xi, t);
    let df = |t: f64| curve.inner_derivative(d, xi, t);
    let lo = if dom.lo_closed { dom.lo } else { dom.lo + 1e-12 * dom.len() };
    let n = 256;
    let grid: Vec<f64> = (0..=n).map(|i| lo + (dom.hi - lo) * i as f64 / n as f64).collect();
    let vals: Vec<f64> = grid.iter().map(|&t| f(t)).collect();
    for i in 0..n {
        let (mut a, mut b) = (grid[i], grid[i + 1]);
        let (mut fa, fb) = (vals[i], vals[i + 1]);
        if fa == 0.0 {
            return Ok(a);
        }
        if fb == 0.0 {
            return Ok(b);
        }
        if fa.signum() == fb.signum() {
            continue;
        }
        while b - a > 1e-13 * (1.0 + b.abs()) {
            let m = 0.5 * (a + b);
            let fm = f(m);
            if fm == 0.0 {
                return Ok(m);
            }
            if fm.signum() == fa.signum() {
                a = m;
                fa = fm;
            } else {
                b = m;
            }
        }
        let mut t = 0.5 * (a + b);
        for _ in 0..3 {
            let d1 = df(t);
            if d1 == 0.0 {
                break;
            }
            let next = t - f(t) / d1;
            if !(next >= a - 1e-12 && next <= b + 1e-12) {
                break;
            }
            t = next;
        }
        return Ok(t.clamp(dom.lo, dom.hi));
    }
    Err(Error::NoCriticalPoint(format!(
        "<gamma^({}), xi> keeps its sign on the domain",
        d - 1
    )))
}

/// Default dominance ratio `|xi'| <= c |xi_d|`.
pub const DOMINANCE: f64 = 0.25;

/// [`critical_time`] after checking `|xi'| <= c |xi_d|`.
pub fn critical_time_dominant(curve: &Curve, xi: &[f64], c: f64) -> Result<f64> {
    let d = xi.len();
    if d == 0 {
        return Err(Error::arg("empty xi"));
    }
    let head = xi[..d - 1].iter().map(|x| x * x).sum::<f64>().sqrt();
    if head > c * xi[d - 1].abs() {
        return Err(Error::arg(format!("|xi'| = {head} exceeds {c} |xi_d|")));
    }
    critical_time(curve, xi)
}
