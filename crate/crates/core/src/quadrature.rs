//! Gauss–Legendre rules and the phase-adaptive panel integrator.

use std::f64::consts::{FRAC_PI_2, PI};
use std::sync::OnceLock;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::osc::OscResult;

/// Nodes and weights of the `n`-point Gauss–Legendre rule on `[-1, 1]`.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut x = vec![0.0; n];
    let mut w = vec![0.0; n];
    for i in 0..n.div_ceil(2) {
        let mut z = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (p, d) = legendre(n, z);
            dp = d;
            let dz = p / d;
            z -= dz;
            if dz.abs() < 1e-16 {
                break;
            }
        }
        let (_, d) = legendre(n, z);
        if d != 0.0 {
            dp = d;
        }
        x[i] = -z;
        x[n - 1 - i] = z;
        w[i] = 2.0 / ((1.0 - z * z) * dp * dp);
        w[n - 1 - i] = w[i];
    }
    (x, w)
}

// P_n(z) and P_n'(z) by the three-term recurrence
fn legendre(n: usize, z: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = z;
    if n == 0 {
        return (1.0, 0.0);
    }
    for k in 2..=n {
        let p2 = ((2 * k - 1) as f64 * z * p1 - (k - 1) as f64 * p0) / k as f64;
        p0 = p1;
        p1 = p2;
    }
    (p1, n as f64 * (z * p1 - p0) / (z * z - 1.0))
}

pub const ORDER: usize = 12;

pub fn gl12() -> &'static (Vec<f64>, Vec<f64>) {
    static RULE: OnceLock<(Vec<f64>, Vec<f64>)> = OnceLock::new();
    RULE.get_or_init(|| gauss_legendre(ORDER))
}

/// Composite 12-point rule with `panels` equal panels.
pub fn integrate_real<F: Fn(f64) -> f64>(a: f64, b: f64, panels: usize, f: F) -> f64 {
    let (x, w) = gl12();
    let h = (b - a) / panels as f64;
    let mut acc = 0.0;
    for p in 0..panels {
        let lo = a + h * p as f64;
        let mid = lo + 0.5 * h;
        let mut s = 0.0;
        for (xi, wi) in x.iter().zip(w) {
            s += wi * f(mid + 0.5 * h * xi);
        }
        acc += 0.5 * h * s;
    }
    acc
}

/// Default panel cap.
pub const DEFAULT_MAX_PANELS: usize = 1 << 22;

/// Settings for [`integrate_oscillatory`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PanelOptions {
    /// Local refinement target: a panel of width `w` is split when its
    /// two-level difference exceeds `tol * w / span`.
    pub tol: f64,
    pub max_panels: usize,
    /// Multiplies every width limit; `0.1` gives ten times the panel density.
    pub density: f64,
}

impl Default for PanelOptions {
    fn default() -> Self {
        PanelOptions { tol: 1e-10, max_panels: DEFAULT_MAX_PANELS, density: 1.0 }
    }
}

// value, sum of |terms| weighted by (1 + |phase|) for the roundoff floor
fn gl_panel<A, P>(lo: f64, hi: f64, amp: &A, phase: &P) -> (Complex64, f64)
where
    A: Fn(f64) -> Complex64,
    P: Fn(f64) -> (f64, f64),
{
    let (x, w) = gl12();
    let mid = 0.5 * (lo + hi);
    let half = 0.5 * (hi - lo);
    let mut s = Complex64::new(0.0, 0.0);
    let mut abs = 0.0;
    for (xi, wi) in x.iter().zip(w) {
        let t = mid + half * xi;
        let a = amp(t);
        if a.re == 0.0 && a.im == 0.0 {
            continue;
        }
        let (ph, _) = phase(t);
        let (sn, cs) = ph.sin_cos();
        let term = a * Complex64::new(cs, sn) * *wi;
        s += term;
        abs += term.norm() * (1.0 + ph.abs());
    }
    (s * half, abs * half)
}

/// `int amp(t) exp(i phase(t)) dt` over the union of `pieces`.
///
/// `phase` returns the phase and its derivative. Each piece `(a, b, w)` is
/// smooth for `amp` and is cut into panels of width at most `w` on which the
/// phase turns by at most `pi / 2`.
pub fn integrate_oscillatory<A, P>(
    pieces: &[(f64, f64, f64)],
    amp: A,
    phase: P,
    opts: PanelOptions,
) -> Result<OscResult>
where
    A: Fn(f64) -> Complex64,
    P: Fn(f64) -> (f64, f64),
{
    if !(opts.tol > 0.0) || !(opts.density > 0.0) {
        return Err(Error::arg("tolerance and panel density must be positive"));
    }
    let span_lo = pieces.iter().map(|p| p.0).fold(f64::INFINITY, f64::min);
    let span_hi = pieces.iter().map(|p| p.1).fold(f64::NEG_INFINITY, f64::max);
    let span = (span_hi - span_lo).max(f64::MIN_POSITIVE);
    let floor = span * 2f64.powi(-40);
    let turn = FRAC_PI_2 * opts.density;

    let mut value = Complex64::new(0.0, 0.0);
    let mut err = 0.0;
    let mut abs_sum = 0.0;
    let mut panels = 0usize;
    let speed = |t: f64| phase(t).1.abs();

    for &(a, b, maxw) in pieces {
        if !(b > a) {
            continue;
        }
        let maxw = (maxw * opts.density).max(floor);
        let mut t = a;
        while t < b {
            let mut w = (b - t).min(maxw);
            loop {
                let s = [t + 0.02 * w, t + 0.5 * w, t + w]
                    .iter()
                    .map(|&u| speed(u))
                    .filter(|v| v.is_finite())
                    .fold(0.0, f64::max);
                if s * w <= turn || w <= floor {
                    break;
                }
                w = (0.5 * w).min(0.9 * turn / s).max(floor);
            }
            if b - t - w < 1e-3 * w {
                w = b - t;
            }
            // local refinement stack
            let mut stack = vec![(t, t + w)];
            while let Some((lo, hi)) = stack.pop() {
                let mid = 0.5 * (lo + hi);
                let (coarse, _) = gl_panel(lo, hi, &amp, &phase);
                let (f1, a1) = gl_panel(lo, mid, &amp, &phase);
                let (f2, a2) = gl_panel(mid, hi, &amp, &phase);
                let fine = f1 + f2;
                let diff = (fine - coarse).norm();
                let target = (opts.tol * (hi - lo) / span).max(64.0 * f64::EPSILON * (a1 + a2));
                if diff > target && hi - lo > 2.0 * floor && panels + stack.len() < opts.max_panels {
                    stack.push((mid, hi));
                    stack.push((lo, mid));
                    continue;
                }
                value += fine;
                err += diff;
                abs_sum += a1 + a2;
                panels += 1;
            }
            if panels >= opts.max_panels && t + w < b {
                return Err(Error::BudgetExceeded {
                    what: format!("more than {} panels", opts.max_panels),
                    partial: Some(OscResult {
                        value,
                        abs_error_estimate: err + 16.0 * f64::EPSILON * abs_sum,
                        panels_used: panels,
                    }),
                });
            }
            t += w;
        }
    }
    Ok(OscResult {
        value,
        abs_error_estimate: err + 16.0 * f64::EPSILON * abs_sum,
        panels_used: panels.max(1),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn nodes_and_weights() {
        let (x, w) = gl12();
        assert!((w.iter().sum::<f64>() - 2.0).abs() < 1e-14);
        assert!(x.windows(2).all(|p| p[0] < p[1]));
        // exact for degree 23
        let m: f64 = x.iter().zip(w).map(|(x, w)| w * x.powi(22)).sum();
        assert!((m - 2.0 / 23.0).abs() < 1e-14);
        let odd: f64 = x.iter().zip(w).map(|(x, w)| w * x.powi(23)).sum();
        assert!(odd.abs() < 1e-15);
    }

    #[test]
    fn small_rules() {
        let (x, w) = gauss_legendre(2);
        assert!((x[1] - 1.0 / 3f64.sqrt()).abs() < 1e-15);
        assert!((w[0] - 1.0).abs() < 1e-15);
        let (x, w) = gauss_legendre(3);
        assert!(x[1].abs() < 1e-16 && (w[1] - 8.0 / 9.0).abs() < 1e-15);
    }

    #[test]
    fn integrate_real_polynomial_and_exp() {
        assert!((integrate_real(0.0, 1.0, 1, |t| t.powi(7)) - 0.125).abs() < 1e-15);
        assert!((integrate_real(0.0, 2.0, 8, f64::exp) - (2f64.exp() - 1.0)).abs() < 1e-13);
    }

    #[test]
    fn oscillatory_linear_phase() {
        let lam = 1000.0;
        let r = integrate_oscillatory(
            &[(0.0, 1.0, f64::INFINITY)],
            |_| Complex64::new(1.0, 0.0),
            |t| (lam * t, lam),
            PanelOptions::default(),
        )
        .unwrap();
        let exact = (Complex64::new(0.0, lam).exp() - 1.0) / Complex64::new(0.0, lam);
        assert!((r.value - exact).norm() < 1e-12);
        assert!(r.panels_used as f64 >= lam / FRAC_PI_2);
    }

    #[test]
    fn budget_exceeded_carries_partial() {
        let opts = PanelOptions { max_panels: 100, ..Default::default() };
        let r = integrate_oscillatory(
            &[(0.0, 1.0, f64::INFINITY)],
            |_| Complex64::new(1.0, 0.0),
            |t| (1e6 * t, 1e6),
            opts,
        );
        match r {
            Err(Error::BudgetExceeded { partial: Some(p), .. }) => assert!(p.panels_used >= 100),
            other => panic!("unexpected {other:?}"),
        }
    }
}
