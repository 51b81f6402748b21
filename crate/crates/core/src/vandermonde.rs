//! Vandermonde products, sublevel sets of `v(h)`, and the mixed norm of the
//! Vandermonde operator `V[f](t, h) = v(h)^{-1} prod_i f_i(t + kappa_i(h))`.

use num_rational::Ratio;
use rand::Rng;
use rand_distr::{Distribution, Gamma};
use rayon::prelude::*;

use crate::curve::kappa;
use crate::error::{Error, Result};
use crate::intervals::IntervalSet;
use crate::lorentz::StepFunction;
use crate::quadrature::gl12;
use crate::rng;
use crate::special::ln_gamma;

/// Monte Carlo value with a 95% normal confidence half-width.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MCEstimate {
    pub mean: f64,
    /// `1.96 * stderr`
    pub half_width: f64,
    pub samples: usize,
    pub seed: u64,
}

/// `V_d(x) = prod_{i<j} (x_j - x_i)`.
pub fn vdet(x: &[f64]) -> f64 {
    let mut p = 1.0;
    for j in 1..x.len() {
        for i in 0..j {
            p *= x[j] - x[i];
        }
    }
    p
}

/// `v(h) = V_d(kappa(h))`.
pub fn v_of_h(h: &[f64]) -> f64 {
    vdet(&kappa(h))
}

// ln v(theta), with kappa_j - kappa_i summed directly from theta
fn ln_v(theta: &[f64]) -> f64 {
    let mut acc = 0.0;
    for i in 0..theta.len() {
        let mut gap = 0.0;
        for t in &theta[i..] {
            gap += t;
            acc += gap.ln();
        }
    }
    acc
}

/// Lebesgue measure of `{h in (0, inf)^{d-1} : v(h) <= alpha}`.
///
/// With `h = r theta`, `theta` on the unit simplex, the set is
/// `r <= (alpha / v(theta))^{2/(d(d-1))}`, so its measure is
/// `alpha^{2/d} / (d-1) * int v(theta)^{-2/d} dtheta`. The simplex integral
/// is sampled from a symmetric Dirichlet(1/d) proposal, whose density has the
/// same face singularities as the integrand and keeps the variance finite.
pub fn sublevel_measure(d: usize, alpha: f64, samples: usize, seed: u64) -> Result<MCEstimate> {
    if d < 2 {
        return Err(Error::arg("sublevel sets need d >= 2"));
    }
    if !(alpha > 0.0) || !alpha.is_finite() {
        return Err(Error::arg(format!("alpha must be positive, got {alpha}")));
    }
    if samples < 100 {
        return Err(Error::BudgetExceeded { what: format!("{samples} samples (need >= 100)"), partial: None });
    }
    let scale = alpha.powf(2.0 / d as f64) / (d as f64 - 1.0);
    if d == 2 {
        return Ok(MCEstimate { mean: scale, half_width: 0.0, samples, seed });
    }
    let k = d - 1;
    let a = 1.0 / d as f64;
    let gamma = Gamma::new(a, 1.0).expect("positive shape");
    let ln_norm = ln_gamma(k as f64 * a) - k as f64 * ln_gamma(a);
    let sums: Vec<(f64, f64)> = rng::blocks(samples)
        .into_par_iter()
        .map(|(idx, n)| {
            let mut r = rng::stream(seed, idx);
            let mut theta = vec![0.0; k];
            let (mut s1, mut s2) = (0.0, 0.0);
            for _ in 0..n {
                let mut tot = 0.0;
                for t in theta.iter_mut() {
                    *t = gamma.sample(&mut r).max(f64::MIN_POSITIVE);
                    tot += *t;
                }
                theta.iter_mut().for_each(|t| *t /= tot);
                let ln_q = ln_norm + (a - 1.0) * theta.iter().map(|t| t.ln()).sum::<f64>();
                let w = (-(2.0 / d as f64) * ln_v(&theta) - ln_q).exp();
                s1 += w;
                s2 += w * w;
            }
            (s1, s2)
        })
        .collect();
    let n = samples as f64;
    let s1: f64 = sums.iter().map(|s| s.0).sum();
    let s2: f64 = sums.iter().map(|s| s.1).sum();
    let mean = s1 / n;
    let var = ((s2 / n - mean * mean) * n / (n - 1.0)).max(0.0);
    Ok(MCEstimate {
        mean: scale * mean,
        half_width: scale * 1.96 * (var / n).sqrt(),
        samples,
        seed,
    })
}

/// `Phi(h) = |intersection_i (E_i - kappa_i(h))|`.
pub fn phi_of_h(es: &[IntervalSet], h: &[f64]) -> Result<f64> {
    if es.is_empty() || h.len() + 1 != es.len() {
        return Err(Error::arg("need d sets and d - 1 shifts"));
    }
    let k = kappa(h);
    let mut acc = es[0].clone();
    for (e, kk) in es.iter().zip(&k).skip(1) {
        acc = acc.intersection(&e.translate(-kk));
    }
    Ok(acc.measure())
}

// (a, b, |value|^B) pieces sorted by a
type Pieces = Vec<(f64, f64, f64)>;

fn power_pieces(f: &StepFunction, b: f64) -> Pieces {
    let mut out: Pieces = f
        .parts()
        .iter()
        .flat_map(|(s, v)| s.parts().iter().map(move |&(x, y)| (x, y, v.abs().powf(b))))
        .collect();
    out.sort_by(|x, y| x.0.total_cmp(&y.0));
    out
}

/// `int prod_i g_i(t + kappa_i) dt` for step functions `g_i`.
fn inner_integral(gs: &[Pieces], kap: &[f64]) -> f64 {
    let mut cur: Pieces = gs[0].clone();
    let mut next = Vec::new();
    for (g, k) in gs.iter().zip(kap).skip(1) {
        next.clear();
        let (mut i, mut j) = (0, 0);
        while i < cur.len() && j < g.len() {
            let (a1, b1, v1) = cur[i];
            let (a2, b2, v2) = (g[j].0 - k, g[j].1 - k, g[j].2);
            let (lo, hi) = (a1.max(a2), b1.min(b2));
            if hi > lo {
                next.push((lo, hi, v1 * v2));
            }
            if b1 < b2 {
                i += 1;
            } else {
                j += 1;
            }
        }
        std::mem::swap(&mut cur, &mut next);
        if cur.is_empty() {
            return 0.0;
        }
    }
    cur.iter().map(|(a, b, v)| (b - a) * v).sum()
}

// graded map of [0,1] clustering nodes at both ends
fn graded(u: f64) -> (f64, f64) {
    const M: i32 = 3;
    let (p, q) = (u.powi(M), (1.0 - u).powi(M));
    let den = p + q;
    let x = p / den;
    let dx = M as f64 * u.powi(M - 1) * (1.0 - u).powi(M - 1) / (den * den);
    (x, dx)
}

/// Composite 12-point nodes of `[0,1]` after grading, with weights.
fn graded_rule(panels: usize) -> Vec<(f64, f64)> {
    let (x, w) = gl12();
    let h = 1.0 / panels as f64;
    let mut out = Vec::with_capacity(12 * panels);
    for p in 0..panels {
        let mid = (p as f64 + 0.5) * h;
        for (xi, wi) in x.iter().zip(w) {
            let (g, dg) = graded(mid + 0.5 * h * xi);
            out.push((g, 0.5 * h * wi * dg));
        }
    }
    out
}

struct MixedNormSetup {
    d: usize,
    a: f64,
    b: f64,
    gs: Vec<Pieces>,
    ends: Vec<Vec<f64>>,
    r_max: f64,
    e: f64,
}

impl MixedNormSetup {
    // v(theta)^{1-A} int_0^{r_max} Phi_B(r theta)^{A/B} r^e dr
    fn ray(&self, theta: &[f64], rule: &[(f64, f64)]) -> f64 {
        let kap = kappa(theta);
        let mut cuts = vec![0.0, self.r_max];
        for i in 0..self.d {
            for j in 0..i {
                let dk = kap[i] - kap[j];
                if dk <= 0.0 {
                    continue;
                }
                for ei in &self.ends[i] {
                    for ej in &self.ends[j] {
                        let r = (ei - ej) / dk;
                        if r > 0.0 && r < self.r_max {
                            cuts.push(r);
                        }
                    }
                }
            }
        }
        cuts.sort_by(f64::total_cmp);
        cuts.dedup();
        let m = 1.0 / (self.e + 1.0);
        let p = self.a / self.b;
        let mut shifted = vec![0.0; self.d];
        let mut phi = |r: f64| {
            for (s, k) in shifted.iter_mut().zip(&kap) {
                *s = r * k;
            }
            inner_integral(&self.gs, &shifted)
        };
        let mut total = 0.0;
        for (idx, w) in cuts.windows(2).enumerate() {
            let (lo, hi) = (w[0], w[1]);
            if idx == 0 {
                // r = hi * s^m absorbs r^e: r^e dr = hi^{e+1} m ds
                for &(s, ws) in rule {
                    let r = hi * s.powf(m);
                    let f = phi(r);
                    if f > 0.0 {
                        total += ws * f.powf(p);
                    }
                }
                total *= hi.powf(self.e + 1.0) * m;
            } else {
                let len = hi - lo;
                for &(s, ws) in rule {
                    let r = lo + len * s;
                    let f = phi(r);
                    if f > 0.0 {
                        total += ws * len * f.powf(p) * r.powf(self.e);
                    }
                }
            }
        }
        let v = (-ln_v(theta)).exp();
        total * v.powf(self.a - 1.0)
    }

    fn integral(&self, panels: usize) -> f64 {
        let rule = graded_rule(panels);
        let dims = self.d - 2;
        if dims == 0 {
            return self.ray(&[1.0], &rule);
        }
        let n = rule.len();
        let total_pts = n.pow(dims as u32);
        (0..total_pts)
            .into_par_iter()
            .map(|mut flat| {
                let mut theta = vec![0.0; self.d - 1];
                let mut rest = 1.0;
                let mut jac = 1.0;
                for t in theta.iter_mut().take(dims) {
                    let (x, w) = rule[flat % n];
                    flat /= n;
                    *t = rest * x;
                    jac *= w * rest;
                    rest *= 1.0 - x;
                }
                theta[dims] = rest;
                if theta.iter().any(|t| *t <= 0.0) {
                    return 0.0;
                }
                jac * self.ray(&theta, &rule)
            })
            .sum()
    }
}

/// `(int (int prod_i |f_i(t + kappa_i(h))|^B dt)^{A/B} v(h)^{1-A} dh)^{1/A}`,
/// refined until the relative change drops below `1e-3`.
pub fn vop_mixed_norm(fs: &[StepFunction], a: f64, b: f64) -> Result<f64> {
    vop_mixed_norm_tol(fs, a, b, 1e-3)
}

pub fn vop_mixed_norm_tol(fs: &[StepFunction], a: f64, b: f64, rel_tol: f64) -> Result<f64> {
    let d = fs.len();
    if d < 2 {
        return Err(Error::arg("the Vandermonde operator needs d >= 2 functions"));
    }
    if !(a > 1.0) || !(b > 1.0) || !a.is_finite() || !b.is_finite() {
        return Err(Error::arg(format!("need A, B > 1, got ({a}, {b})")));
    }
    if a >= (d as f64 + 2.0) / d as f64 {
        return Err(Error::arg(format!("the h-integral diverges for A >= (d+2)/d, A = {a}")));
    }
    let gs: Vec<Pieces> = fs.iter().map(|f| power_pieces(f, b)).collect();
    if gs.iter().any(|g| g.iter().any(|p| !p.0.is_finite() || !p.1.is_finite())) {
        return Err(Error::arg("step functions must have compact support"));
    }
    if gs.iter().any(|g| g.is_empty()) {
        return Ok(0.0);
    }
    let ends: Vec<Vec<f64>> = gs.iter().map(|g| g.iter().flat_map(|p| [p.0, p.1]).collect()).collect();
    let r_max = gs[d - 1].last().unwrap().1 - gs[0][0].0;
    if r_max <= 0.0 {
        return Ok(0.0);
    }
    let big_d = (d * (d - 1) / 2) as f64;
    let setup = MixedNormSetup {
        d,
        a,
        b,
        gs,
        ends,
        r_max,
        e: d as f64 - 2.0 + (1.0 - a) * big_d,
    };
    let mut panels = 2;
    let mut prev = setup.integral(1);
    loop {
        let cur = setup.integral(panels);
        if (cur - prev).abs() <= rel_tol * cur.abs() || panels >= 64 {
            return Ok(cur.max(0.0).powf(1.0 / a));
        }
        prev = cur;
        panels *= 2;
    }
}

/// `sigma = 2/(d + 2 - dA)` and `sigma' = 2/(d(A - 1))` as exact rationals.
pub fn sigma_pair(d: usize, a: Ratio<i64>) -> Result<(Ratio<i64>, Ratio<i64>)> {
    let di = Ratio::from_integer(d as i64);
    let one = Ratio::from_integer(1);
    let den = di + 2 - di * a;
    if a <= one || den <= Ratio::from_integer(0) {
        return Err(Error::arg(format!("need 1 < A < (d+2)/d, got {a}")));
    }
    Ok((Ratio::from_integer(2) / den, Ratio::from_integer(2) / (di * (a - one))))
}

fn check_range(d: usize, a: f64, b: f64) -> Result<f64> {
    let df = d as f64;
    if !(a > 1.0 && a < (df + 2.0) / df) {
        return Err(Error::arg(format!("need 1 < A < (d+2)/d, got A = {a}")));
    }
    let sigma = 2.0 / (df + 2.0 - df * a);
    if !(a <= b && b < sigma * a) {
        return Err(Error::arg(format!("need A <= B < 2A/(d+2-dA) = {}, got B = {b}", sigma * a)));
    }
    Ok(sigma)
}

/// A point `(1/p_1, ..., 1/p_d)` of the simplex spanned by the `Q_nu`, where
/// `Q_nu` has `1/B` in coordinate `nu` and `1/(sigma A)` elsewhere.
#[derive(Debug, Clone, PartialEq)]
pub struct SimplexPoint {
    pub inv_p: Vec<f64>,
    pub a: f64,
    pub b: f64,
    pub sigma: f64,
}

impl SimplexPoint {
    /// Convex combination `sum_nu w_nu Q_nu`.
    pub fn from_weights(a: f64, b: f64, w: &[f64]) -> Result<Self> {
        let d = w.len();
        let sigma = check_range(d, a, b)?;
        if w.iter().any(|x| !(*x >= 0.0)) || (w.iter().sum::<f64>() - 1.0).abs() > 1e-12 {
            return Err(Error::arg("weights must be nonnegative and sum to 1"));
        }
        let base = 1.0 / (sigma * a);
        let inv_p = w.iter().map(|x| base + (1.0 / b - base) * x).collect();
        Ok(SimplexPoint { inv_p, a, b, sigma })
    }

    pub fn vertex(d: usize, a: f64, b: f64, nu: usize) -> Result<Self> {
        if nu >= d {
            return Err(Error::arg(format!("vertex index {nu} out of range")));
        }
        let mut w = vec![0.0; d];
        w[nu] = 1.0;
        SimplexPoint::from_weights(a, b, &w)
    }

    pub fn barycenter(d: usize, a: f64, b: f64) -> Result<Self> {
        SimplexPoint::from_weights(a, b, &vec![1.0 / d as f64; d])
    }

    /// Validates membership of given exponents.
    pub fn new(inv_p: Vec<f64>, a: f64, b: f64) -> Result<Self> {
        let sigma = check_range(inv_p.len(), a, b)?;
        let w = weights_of(&inv_p, a, b, sigma);
        let ok = w.iter().all(|x| *x >= -1e-12 && *x <= 1.0 + 1e-12) && (w.iter().sum::<f64>() - 1.0).abs() <= 1e-12;
        if !ok {
            return Err(Error::arg(format!("{inv_p:?} is not in the simplex (weights {w:?})")));
        }
        Ok(SimplexPoint { inv_p, a, b, sigma })
    }

    pub fn weights(&self) -> Vec<f64> {
        weights_of(&self.inv_p, self.a, self.b, self.sigma)
    }
}

fn weights_of(inv_p: &[f64], a: f64, b: f64, sigma: f64) -> Vec<f64> {
    let base = 1.0 / (sigma * a);
    inv_p.iter().map(|x| (x - base) / (1.0 / b - base)).collect()
}

/// `|V(chi_E)|_{L^A_v(L^B)} / prod |E_i|^{1/p_i}`; `0` when a set is empty.
pub fn vandineq_ratio(es: &[IntervalSet], point: &SimplexPoint) -> Result<f64> {
    if es.len() != point.inv_p.len() {
        return Err(Error::arg("one set per exponent"));
    }
    check_range(es.len(), point.a, point.b)?;
    if es.iter().any(|e| e.is_empty()) {
        return Ok(0.0);
    }
    let fs: Vec<StepFunction> = es.iter().map(|e| StepFunction::indicator(e.clone())).collect();
    let num = vop_mixed_norm(&fs, point.a, point.b)?;
    let den: f64 = es.iter().zip(&point.inv_p).map(|(e, ip)| e.measure().powf(*ip)).product();
    Ok(num / den)
}

#[derive(Debug, Clone, PartialEq)]
pub struct VandineqReport {
    /// Ratio of every trial, in trial order.
    pub ratios: Vec<f64>,
    pub max_ratio: f64,
    /// Maximum over the last tenth of the trials.
    pub final_decile_max: f64,
    /// Maximum over the first nine tenths.
    pub early_max: f64,
    /// Both `final_decile_max` and `early_max` are within 10% of `max_ratio`:
    /// the search keeps revisiting the top without pushing it higher.
    pub stabilized: bool,
    pub best: Vec<IntervalSet>,
}

/// Random union of one to three intervals in `[0, 1]` with log-uniform lengths.
pub fn random_interval_set<R: Rng + ?Sized>(r: &mut R) -> IntervalSet {
    let k = r.random_range(1..=3usize);
    let ivs: Vec<(f64, f64)> = (0..k)
        .map(|_| {
            let len = 10f64.powf(r.random_range(-2.0..0.0));
            let a = r.random_range(0.0..1.0 - len.min(0.99));
            (a, a + len)
        })
        .collect();
    IntervalSet::from_intervals(ivs).expect("finite intervals")
}

/// Jitters every interval: length by a factor in `[e^-0.2, e^0.2]`, centre by
/// up to a tenth of the length.
pub fn perturb_interval_set<R: Rng + ?Sized>(r: &mut R, e: &IntervalSet) -> IntervalSet {
    let ivs: Vec<(f64, f64)> = e
        .parts()
        .iter()
        .map(|&(a, b)| {
            let len = (b - a) * (0.2 * r.random_range(-1.0..1.0f64)).exp();
            let c = 0.5 * (a + b) + 0.1 * (b - a) * r.random_range(-1.0..1.0);
            (c - 0.5 * len, c + 0.5 * len)
        })
        .collect();
    IntervalSet::from_intervals(ivs).expect("finite intervals")
}

/// Randomized search for the largest ratio over `trials` interval tuples.
///
/// The first tenth of the trials are independent draws; afterwards each
/// trial is, with equal odds, a fresh draw or a perturbation of the best
/// tuple so far. Trial `i` draws from stream `i`, so the run is reproducible.
pub fn check_vandineq(point: &SimplexPoint, trials: usize, seed: u64) -> Result<VandineqReport> {
    let d = point.inv_p.len();
    check_range(d, point.a, point.b)?;
    if trials < 10 {
        return Err(Error::arg("need at least 10 trials"));
    }
    let warmup = trials / 10;
    let mut ratios = Vec::with_capacity(trials);
    let mut best: Vec<IntervalSet> = Vec::new();
    let mut best_ratio = -1.0;
    for i in 0..trials {
        let mut r = rng::stream(seed, i as u64);
        let es: Vec<IntervalSet> = if i < warmup || r.random_bool(0.5) {
            (0..d).map(|_| random_interval_set(&mut r)).collect()
        } else {
            best.iter().map(|e| perturb_interval_set(&mut r, e)).collect()
        };
        let v = vandineq_ratio(&es, point)?;
        if v > best_ratio {
            best_ratio = v;
            best = es;
        }
        ratios.push(v);
    }
    let max_ratio = ratios.iter().cloned().fold(0.0, f64::max);
    let tail = trials - trials / 10;
    let final_decile_max = ratios[tail..].iter().cloned().fold(0.0, f64::max);
    let early_max = ratios[..tail].iter().cloned().fold(0.0, f64::max);
    Ok(VandineqReport {
        stabilized: max_ratio.is_finite() && final_decile_max >= 0.9 * max_ratio && early_max >= 0.9 * max_ratio,
        ratios,
        max_ratio,
        final_decile_max,
        early_max,
        best,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quadrature::integrate_real;
    use crate::special::beta;

    fn iv(a: f64, b: f64) -> IntervalSet {
        IntervalSet::interval(a, b).unwrap()
    }

    #[test]
    fn vdet_basics() {
        assert_eq!(vdet(&[0.0, 1.0, 2.0]), 2.0);
        assert_eq!(vdet(&[0.5, 3.0, 0.5]), 0.0);
        assert_eq!(vdet(&[1.0, 0.0, 2.0]), -2.0);
        assert_eq!(vdet(&[7.0]), 1.0);
    }

    #[test]
    fn v_of_h_values() {
        assert_eq!(v_of_h(&[1.0, 2.0]), 6.0);
        assert_eq!(v_of_h(&[0.3]), 0.3);
        let h = [0.3, 1.7, 0.2];
        let s = 2.5f64;
        let scaled: Vec<f64> = h.iter().map(|x| x * s).collect();
        assert!((v_of_h(&scaled) - s.powi(6) * v_of_h(&h)).abs() < 1e-12 * v_of_h(&scaled));
        assert!(v_of_h(&h) > 0.0);
    }

    #[test]
    fn sublevel_two_dims_is_alpha() {
        let e = sublevel_measure(2, 1.0, 1000, 1).unwrap();
        assert_eq!(e.mean, 1.0);
        assert_eq!(sublevel_measure(2, 4.0, 1000, 1).unwrap().mean, 4.0);
    }

    #[test]
    fn sublevel_three_dims_against_fubini() {
        // |Omega_3(1)| = int_0^inf h2*(h1) dh1, h2* the positive root of h1 h2^2 + h1^2 h2 = 1
        let root = |h1: f64| 2.0 / (h1 * h1 + (h1.powi(4) + 4.0 * h1).sqrt());
        let fubini = integrate_real(-80.0, 60.0, 4000, |s| root(s.exp()) * s.exp());
        assert!((fubini - beta(1.0 / 3.0, 1.0 / 3.0) / 2.0).abs() < 1e-9);
        let e = sublevel_measure(3, 1.0, 200_000, 3).unwrap();
        assert!((e.mean - fubini).abs() < e.half_width.max(1e-3), "{e:?} vs {fubini}");
        assert!(e.mean <= 3.0 + e.half_width);
    }

    #[test]
    fn sublevel_four_dims_finite_variance() {
        let a = sublevel_measure(4, 1.0, 100_000, 5).unwrap();
        let b = sublevel_measure(4, 1.0, 100_000, 6).unwrap();
        assert!(a.half_width < 0.02 * a.mean);
        assert!((a.mean - b.mean).abs() < 1.5 * (a.half_width + b.half_width));
    }

    #[test]
    fn sublevel_is_reproducible() {
        assert_eq!(sublevel_measure(3, 0.5, 10_000, 9).unwrap(), sublevel_measure(3, 0.5, 10_000, 9).unwrap());
        assert!(sublevel_measure(3, 1.0, 10, 9).is_err());
        assert!(sublevel_measure(1, 1.0, 1000, 9).is_err());
    }

    #[test]
    fn phi_examples() {
        let u = iv(0.0, 1.0);
        assert_eq!(phi_of_h(&[u.clone(), u.clone(), u.clone()], &[0.0, 0.0]).unwrap(), 1.0);
        assert_eq!(phi_of_h(&[u.clone(), u.clone()], &[0.5]).unwrap(), 0.5);
        let es = [iv(0.0, 2.0), IntervalSet::from_intervals([(0.5, 1.0), (3.0, 4.0)]).unwrap(), iv(1.0, 5.0)];
        let moved: Vec<IntervalSet> = es.iter().map(|e| e.translate(1.25)).collect();
        for h in [[0.1, 0.2], [0.7, 1.3], [2.0, 0.5]] {
            assert!((phi_of_h(&es, &h).unwrap() - phi_of_h(&moved, &h).unwrap()).abs() < 1e-14);
            assert!(phi_of_h(&es, &h).unwrap() <= 0.5 + 1.0);
        }
    }

    #[test]
    fn phi_l1_bounded_by_product() {
        let es = [iv(0.0, 1.0), IntervalSet::from_intervals([(0.2, 0.6), (1.0, 1.5)]).unwrap()];
        // Phi(h) is piecewise linear, so a midpoint grid is accurate
        let n = 20_000;
        let h = 3.0 / n as f64;
        let l1: f64 = (0..n).map(|i| phi_of_h(&es, &[(i as f64 + 0.5) * h]).unwrap() * h).sum();
        assert!(l1 <= es[0].measure() * es[1].measure() + 1e-9);
    }

    #[test]
    fn mixed_norm_beta_case() {
        let chi = StepFunction::indicator(iv(0.0, 1.0));
        for &(a, b) in &[(1.5, 1.5), (1.5, 2.0), (1.2, 1.3)] {
            let n = vop_mixed_norm_tol(&[chi.clone(), chi.clone()], a, b, 1e-9).unwrap();
            let exact = beta(2.0 - a, a / b + 1.0).powf(1.0 / a);
            assert!((n - exact).abs() < 1e-6 * exact, "A={a} B={b}: {n} vs {exact}");
        }
        let n = vop_mixed_norm(&[chi.clone(), chi], 1.5, 1.5).unwrap();
        assert!((n - (4.0f64 / 3.0).powf(2.0 / 3.0)).abs() < 1e-6);
    }

    #[test]
    fn mixed_norm_homogeneous() {
        let f1 = StepFunction::new(vec![(iv(0.0, 1.0), 1.0), (iv(1.5, 2.0), 0.5)]).unwrap();
        let f2 = StepFunction::indicator(iv(0.3, 1.8));
        let f3 = StepFunction::indicator(iv(0.0, 1.0));
        let base = vop_mixed_norm(&[f1.clone(), f2.clone(), f3.clone()], 1.1, 1.2).unwrap();
        let scaled = vop_mixed_norm(&[f1.scaled(-3.0), f2, f3], 1.1, 1.2).unwrap();
        assert!((scaled - 3.0 * base).abs() < 1e-9 * scaled);
    }

    #[test]
    fn mixed_norm_three_dims_stable() {
        let chi = StepFunction::indicator(iv(0.0, 1.0));
        let fs = [chi.clone(), chi.clone(), chi];
        let coarse = vop_mixed_norm_tol(&fs, 1.1, 1.1, 1e-3).unwrap();
        let fine = vop_mixed_norm_tol(&fs, 1.1, 1.1, 1e-6).unwrap();
        assert!(fine.is_finite() && fine > 0.0);
        assert!((coarse - fine).abs() < 2e-3 * fine);
    }

    #[test]
    fn mixed_norm_rejects_divergent_a() {
        let chi = StepFunction::indicator(iv(0.0, 1.0));
        assert!(vop_mixed_norm(&[chi.clone(), chi.clone(), chi.clone()], 5.0 / 3.0, 5.0 / 3.0).is_err());
        assert!(vop_mixed_norm(&[chi.clone(), chi], 0.9, 1.5).is_err());
    }

    #[test]
    fn sigma_conjugacy() {
        for d in 2..8usize {
            for (n, m) in [(11, 10), (21, 20), (101, 100)] {
                let a = Ratio::new(n, m);
                if let Ok((s, sp)) = sigma_pair(d, a) {
                    assert_eq!(s.recip() + sp.recip(), Ratio::from_integer(1));
                }
            }
        }
        assert!(sigma_pair(3, Ratio::new(5, 3)).is_err());
    }

    #[test]
    fn simplex_points() {
        let q1 = SimplexPoint::vertex(2, 1.5, 1.5, 0).unwrap();
        assert!((q1.sigma - 2.0).abs() < 1e-15);
        assert!((q1.inv_p[0] - 2.0 / 3.0).abs() < 1e-15 && (q1.inv_p[1] - 1.0 / 3.0).abs() < 1e-15);
        let q = SimplexPoint::vertex(3, 8.0 / 7.0, 8.0 / 7.0, 0).unwrap();
        assert!((q.sigma - 14.0 / 11.0).abs() < 1e-14);
        assert!((q.inv_p[0] - 7.0 / 8.0).abs() < 1e-14 && (q.inv_p[1] - 11.0 / 16.0).abs() < 1e-14);
        let c = SimplexPoint::barycenter(3, 8.0 / 7.0, 8.0 / 7.0).unwrap();
        assert!(SimplexPoint::new(c.inv_p.clone(), 8.0 / 7.0, 8.0 / 7.0).is_ok());
        assert!(SimplexPoint::new(vec![0.9, 0.9, 0.9], 8.0 / 7.0, 8.0 / 7.0).is_err());
        assert!(SimplexPoint::vertex(2, 1.5, 3.5, 0).is_err());
        assert!(SimplexPoint::vertex(3, 1.7, 1.7, 0).is_err());
    }

    #[test]
    fn ratio_is_dilation_invariant() {
        let point = SimplexPoint::vertex(2, 1.5, 1.5, 0).unwrap();
        let es = [IntervalSet::from_intervals([(0.0, 0.4), (0.7, 1.0)]).unwrap(), iv(0.2, 0.5)];
        let base = vandineq_ratio(&es, &point).unwrap();
        let mut r = rng::stream(2, 0);
        for _ in 0..10 {
            let s = 10f64.powf(r.random_range(-2.0..2.0));
            let dil: Vec<IntervalSet> = es.iter().map(|e| e.dilate(s)).collect();
            let v = vandineq_ratio(&dil, &point).unwrap();
            assert!((v - base).abs() < 2e-3 * base, "s={s}: {v} vs {base}");
        }
        assert_eq!(vandineq_ratio(&[IntervalSet::empty(), iv(0.0, 1.0)], &point).unwrap(), 0.0);
    }

    #[test]
    fn vandineq_search_stabilizes_and_is_reproducible() {
        let point = SimplexPoint::vertex(2, 1.5, 1.5, 0).unwrap();
        let a = check_vandineq(&point, 300, 5).unwrap();
        let b = check_vandineq(&point, 300, 5).unwrap();
        assert_eq!(a.ratios, b.ratios);
        assert_eq!(a.ratios.len(), 300);
        assert!(a.max_ratio.is_finite() && a.max_ratio > 0.0);
        assert!(a.final_decile_max <= a.max_ratio && a.early_max <= a.max_ratio);
        assert!(a.stabilized, "{} {} {}", a.max_ratio, a.early_max, a.final_decile_max);
        let v = vandineq_ratio(&a.best, &point).unwrap();
        assert_eq!(v, a.max_ratio);
    }
}
