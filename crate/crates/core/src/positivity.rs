//! Total positivity of exponential kernels and Jacobians of offspring maps.

use rand::Rng;
use rayon::prelude::*;

use crate::curve::{delta_strong, kappa, offspring, Curve, CurveEval, Family, OffspringSpec};
use crate::error::{Error, Result};
use crate::linalg;
use crate::rng;
use crate::vandermonde::{v_of_h, vdet};

/// Strictly increasing `a` and `s` of equal length.
#[derive(Debug, Clone, PartialEq)]
pub struct ExpMatrixSpec {
    a: Vec<f64>,
    s: Vec<f64>,
}

impl ExpMatrixSpec {
    pub fn new(a: Vec<f64>, s: Vec<f64>) -> Result<Self> {
        if a.is_empty() || a.len() != s.len() {
            return Err(Error::arg("a and s must be nonempty and of equal length"));
        }
        if a.len() > linalg::MAX_DIM {
            return Err(Error::UnsupportedDimension(a.len()));
        }
        if a.iter().chain(&s).any(|x| !x.is_finite()) {
            return Err(Error::arg("entries must be finite"));
        }
        for v in [&a, &s] {
            for w in v.windows(2) {
                if w[0] == w[1] {
                    return Err(Error::DegenerateInput(format!("tied entries in {v:?}")));
                }
                if w[0] > w[1] {
                    return Err(Error::arg(format!("entries must increase: {v:?}")));
                }
            }
        }
        Ok(ExpMatrixSpec { a, s })
    }

    pub fn a(&self) -> &[f64] {
        &self.a
    }

    pub fn s(&self) -> &[f64] {
        &self.s
    }

    fn centered(&self) -> (Vec<f64>, Vec<f64>) {
        let c = |v: &[f64]| {
            let m = v.iter().sum::<f64>() / v.len() as f64;
            v.iter().map(|x| x - m).collect::<Vec<f64>>()
        };
        (c(&self.a), c(&self.s))
    }
}

fn max_abs(v: &[f64]) -> f64 {
    v.iter().fold(0.0, |m, x| m.max(x.abs()))
}

/// Below this value of `max|a| * max|s|` (after centring) the series route is used.
const SERIES_LIMIT: f64 = 4.0;

/// `det(e^{a_i s_j}) / (prod_{i<j} (a_j - a_i)(s_j - s_i)) / exp((sum a)(sum s)/d)`.
///
/// The quantity is unchanged by translating `a` or `s`, so both are centred,
/// which makes the exponential normaliser 1. Small products `|a||s|` use the
/// divided-difference series; larger ones factor the rows and use LU.
pub fn tp_ratio(spec: &ExpMatrixSpec) -> Result<f64> {
    let (a, s) = spec.centered();
    if max_abs(&a) * max_abs(&s) <= SERIES_LIMIT {
        Ok(tp_ratio_series(spec))
    } else {
        tp_ratio_lu(spec)
    }
}

/// Row-factored determinant divided by the two Vandermonde products.
pub fn tp_ratio_lu(spec: &ExpMatrixSpec) -> Result<f64> {
    let (a, s) = spec.centered();
    let d = a.len();
    let rows: Vec<Vec<f64>> = a
        .iter()
        .map(|ai| (0..d).map(|j| (ai * (s[j] - s[0])).exp()).collect())
        .collect();
    if rows.iter().flatten().any(|x| !x.is_finite()) {
        return Err(Error::Range("exponential kernel overflows after row factoring".into()));
    }
    let factor = (s[0] * a.iter().sum::<f64>()).exp();
    let r = linalg::det(&rows) * factor / (vdet(&a) * vdet(&s));
    if !r.is_finite() {
        return Err(Error::Range("ratio is not finite".into()));
    }
    Ok(r)
}

// H[k][m] = h_m(x_1..x_k), complete homogeneous symmetric polynomials
fn complete_homogeneous(x: &[f64], m_max: usize) -> Vec<Vec<f64>> {
    let d = x.len();
    let mut h = vec![vec![0.0; m_max + 1]; d + 1];
    h[0][0] = 1.0;
    for k in 1..=d {
        h[k][0] = 1.0;
        for m in 1..=m_max {
            h[k][m] = h[k - 1][m] + x[k - 1] * h[k][m - 1];
        }
    }
    h
}

/// Determinant of the divided-difference matrix
/// `D_kl = [a_1..a_k][s_1..s_l] e^{as} = sum_n h_{n-k+1}(a_1..a_k) h_{n-l+1}(s_1..s_l) / n!`,
/// which equals the ratio without forming differences of close exponentials.
pub fn tp_ratio_series(spec: &ExpMatrixSpec) -> f64 {
    let (a, s) = spec.centered();
    let d = a.len();
    let xy = max_abs(&a) * max_abs(&s);
    let n_max = (3.0 * xy).ceil() as usize + 40 + 4 * d;
    let ha = complete_homogeneous(&a, n_max);
    let hs = complete_homogeneous(&s, n_max);
    let mut inv_fact = vec![1.0; n_max + 1];
    for n in 1..=n_max {
        inv_fact[n] = inv_fact[n - 1] / n as f64;
    }
    let mut dm = vec![vec![0.0; d]; d];
    for k in 1..=d {
        for l in 1..=d {
            let mut acc = 0.0;
            for n in (k.max(l) - 1)..=n_max {
                acc += ha[k][n + 1 - k] * hs[l][n + 1 - l] * inv_fact[n];
            }
            dm[k - 1][l - 1] = acc;
        }
    }
    linalg::det(&dm)
}

/// Jacobian determinant of `(t, h) -> sum_j gamma(t + kappa_j(h))`.
///
/// Column `t` is `sum_j gamma'(t + kappa_j)` and column `h_i` is
/// `sum_{j > i} gamma'(t + kappa_j)`.
pub fn offspring_jacobian(curve: &Curve, t: f64, h: &[f64]) -> Result<f64> {
    let off = offspring(OffspringSpec::new(curve.clone(), h.to_vec()))?;
    if !off.domain().contains(t) {
        return Err(Error::domain(format!("t = {t} outside the offspring domain {:?}", off.domain())));
    }
    let d = curve.dim();
    if d > linalg::MAX_DIM {
        return Err(Error::UnsupportedDimension(d));
    }
    let k = kappa(h);
    let primes: Vec<Vec<f64>> = k.iter().map(|kj| curve.derivative(1, t + kj)).collect::<Result<_>>()?;
    let cols: Vec<Vec<f64>> = (0..d)
        .map(|c| (0..d).map(|i| primes[c..].iter().map(|p| p[i]).sum()).collect())
        .collect();
    let rows: Vec<Vec<f64>> = (0..d).map(|i| cols.iter().map(|c| c[i]).collect()).collect();
    Ok(linalg::det(&rows))
}

/// `det(gamma'(t_1), ..., gamma'(t_d))`, the Jacobian of `t -> sum_i gamma(t_i)`.
pub fn point_jacobian<C: CurveEval + ?Sized>(curve: &C, ts: &[f64]) -> Result<f64> {
    let d = curve.dim();
    if ts.len() != d {
        return Err(Error::arg(format!("need {d} parameters")));
    }
    let cols: Vec<Vec<f64>> = ts.iter().map(|&t| curve.derivative(1, t)).collect::<Result<_>>()?;
    let rows: Vec<Vec<f64>> = (0..d).map(|i| cols.iter().map(|c| c[i]).collect()).collect();
    Ok(linalg::det(&rows))
}

/// Central-difference Jacobian of `(t, h) -> Gamma(t, h)`, for cross-checks.
pub fn offspring_jacobian_fd(curve: &Curve, t: f64, h: &[f64], step: f64) -> Result<f64> {
    let d = curve.dim();
    let gamma = |t: f64, h: &[f64]| -> Result<Vec<f64>> {
        let off = offspring(OffspringSpec::new(curve.clone(), h.to_vec()))?;
        Ok(off.derivative_unchecked(0, t))
    };
    let mut cols = Vec::with_capacity(d);
    let plus = gamma(t + step, h)?;
    let minus = gamma(t - step, h)?;
    cols.push(plus.iter().zip(&minus).map(|(p, m)| (p - m) / (2.0 * step)).collect::<Vec<f64>>());
    for i in 0..d - 1 {
        let mut hp = h.to_vec();
        let mut hm = h.to_vec();
        hp[i] += step;
        hm[i] -= step;
        let plus = gamma(t, &hp)?;
        let minus = gamma(t, &hm)?;
        cols.push(plus.iter().zip(&minus).map(|(p, m)| (p - m) / (2.0 * step)).collect());
    }
    let rows: Vec<Vec<f64>> = (0..d).map(|i| cols.iter().map(|c| c[i]).collect()).collect();
    Ok(linalg::det(&rows))
}

/// Summary of a randomized positivity battery.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FloorReport {
    pub samples: usize,
    /// Smallest observed value.
    pub floor: f64,
    /// Samples with a nonpositive value.
    pub nonpositive: usize,
}

fn merge(parts: Vec<(f64, usize)>, samples: usize) -> FloorReport {
    FloorReport {
        samples,
        floor: parts.iter().map(|p| p.0).fold(f64::INFINITY, f64::min),
        nonpositive: parts.iter().map(|p| p.1).sum(),
    }
}

fn sorted_uniform<R: Rng + ?Sized>(r: &mut R, d: usize, lo: f64, hi: f64) -> Vec<f64> {
    loop {
        let mut v: Vec<f64> = (0..d).map(|_| r.random_range(lo..hi)).collect();
        v.sort_by(f64::total_cmp);
        if v.windows(2).all(|w| w[0] < w[1]) {
            return v;
        }
    }
}

/// `tp_ratio` over random increasing `a, s` in `[-3, 3]^d`.
pub fn tp_battery(d: usize, samples: usize, seed: u64) -> Result<FloorReport> {
    let parts: Vec<(f64, usize)> = rng::blocks(samples)
        .into_par_iter()
        .map(|(idx, n)| {
            let mut r = rng::stream(seed, idx);
            let mut floor = f64::INFINITY;
            let mut bad = 0;
            for _ in 0..n {
                let a = sorted_uniform(&mut r, d, -3.0, 3.0);
                let s = sorted_uniform(&mut r, d, -3.0, 3.0);
                let v = tp_ratio(&ExpMatrixSpec::new(a, s)?)?;
                floor = floor.min(v);
                if !(v > 0.0) {
                    bad += 1;
                }
            }
            Ok((floor, bad))
        })
        .collect::<Result<_>>()?;
    Ok(merge(parts, samples))
}

/// `J(t, h) / (v(h) H(t, h)^{(d+1)/2})` for an exponential curve, with `t`
/// uniform in `[0, 1]` and `h` uniform in `[0, 2]^{d-1}`.
pub fn jacobian_floor(rates: &[f64], samples: usize, seed: u64) -> Result<FloorReport> {
    let d = rates.len();
    let curve = Curve::new(Family::ExpParam { rates: rates.to_vec() }, crate::curve::Domain::closed(0.0, 1.0 + 2.0 * d as f64))?;
    let parts: Vec<(f64, usize)> = rng::blocks(samples)
        .into_par_iter()
        .map(|(idx, n)| {
            let mut r = rng::stream(seed, idx);
            let mut floor = f64::INFINITY;
            let mut bad = 0;
            for _ in 0..n {
                let t = r.random_range(0.0..1.0);
                let h: Vec<f64> = (0..d - 1).map(|_| r.random_range(0.0..2.0)).collect();
                let off = offspring(OffspringSpec::new(curve.clone(), h.clone()))?;
                let j = offspring_jacobian(&curve, t, &h)?;
                let hw = off.h_weight(t)?;
                let v = j / (v_of_h(&h) * hw.powf((d as f64 + 1.0) / 2.0));
                floor = floor.min(v);
                if !(v > 0.0) {
                    bad += 1;
                }
            }
            Ok((floor, bad))
        })
        .collect::<Result<_>>()?;
    Ok(merge(parts, samples))
}

/// Minimum of `Delta(s, t)` over an `n x n` grid of the curve's domain.
pub fn delta_grid_min(curve: &Curve, n: usize) -> Result<f64> {
    let dom = curve.domain();
    let lo = if dom.lo_closed { dom.lo } else { dom.lo + dom.len() / (2 * n) as f64 };
    let pts: Vec<f64> = (0..n).map(|i| lo + (dom.hi - lo) * i as f64 / (n - 1) as f64).collect();
    let mut m = f64::INFINITY;
    for &s in &pts {
        for &t in &pts {
            m = m.min(delta_strong(curve, s, t)?);
        }
    }
    Ok(m)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct JacobianDeltaReport {
    pub delta: f64,
    pub samples: usize,
    /// `min J / (delta V / 2)` over ordered triples.
    pub min_ratio: f64,
    pub pass: bool,
}

/// Checks `J(t_1, t_2, t_3) >= (delta / 2) V_3(t)` on random ordered triples,
/// with `delta` the grid minimum of `Delta` and `J` the Jacobian of
/// `t -> sum_i gamma(t_i)`; the mean value theorem for divided differences
/// gives this bound with equality for the moment curve.
pub fn check_jacobian_delta(curve: &Curve, samples: usize, seed: u64) -> Result<JacobianDeltaReport> {
    let delta = delta_grid_min(curve, 201)?;
    let dom = curve.domain();
    let ratios: Vec<f64> = rng::blocks(samples)
        .into_par_iter()
        .map(|(idx, n)| {
            let mut r = rng::stream(seed, idx);
            let mut m = f64::INFINITY;
            for _ in 0..n {
                let ts = loop {
                    let ts = sorted_uniform(&mut r, 3, dom.lo, dom.hi);
                    if dom.contains(ts[0]) {
                        break ts;
                    }
                };
                let j = point_jacobian(curve, &ts)?;
                m = m.min(j / (0.5 * delta * vdet(&ts)));
            }
            Ok(m)
        })
        .collect::<Result<_>>()?;
    let min_ratio = ratios.iter().cloned().fold(f64::INFINITY, f64::min);
    Ok(JacobianDeltaReport { delta, samples, min_ratio, pass: min_ratio >= 1.0 - 1e-9 })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InjectivityReport {
    pub samples: usize,
    /// Pairs of triples more than `1e-4` apart whose images are within `1e-9`.
    pub collisions: usize,
    /// Smallest image distance among pairs more than `1e-4` apart.
    pub nearest: f64,
}

/// Samples ordered triples, maps them by `t -> (1/3) sum_i gamma(t_i)` and
/// looks for near-coincident images with a sorted sweep.
pub fn injectivity_probe(curve: &Curve, samples: usize, seed: u64) -> Result<InjectivityReport> {
    if curve.dim() != 3 {
        return Err(Error::arg("injectivity probe needs a curve in R^3"));
    }
    let dom = curve.domain();
    let lo = if dom.lo_closed { dom.lo } else { dom.lo + 1e-9 * dom.len() };
    let mut sign = 0.0;
    for i in 0..1000 {
        let t = lo + (dom.hi - lo) * i as f64 / 999.0;
        let z3 = curve.derivative(3, t)?[2];
        if z3 == 0.0 || (sign != 0.0 && z3.signum() != sign) {
            return Err(Error::HypothesisViolated(format!("z''' vanishes or changes sign near t = {t}")));
        }
        sign = z3.signum();
    }
    let mut r = rng::stream(seed, 0);
    let mut pts: Vec<([f64; 3], [f64; 3])> = Vec::with_capacity(samples);
    for _ in 0..samples {
        let ts = sorted_uniform(&mut r, 3, lo, dom.hi);
        let mut img = [0.0; 3];
        for t in &ts {
            for (m, g) in img.iter_mut().zip(curve.derivative(0, *t)?) {
                *m += g / 3.0;
            }
        }
        pts.push((img, [ts[0], ts[1], ts[2]]));
    }
    pts.sort_by(|x, y| x.0[0].total_cmp(&y.0[0]));
    let dist = |a: &[f64; 3], b: &[f64; 3]| a.iter().zip(b).map(|(x, y)| (x - y).powi(2)).sum::<f64>().sqrt();
    let mut nearest = f64::INFINITY;
    let mut collisions = 0;
    for i in 0..pts.len() {
        for j in i + 1..pts.len() {
            if pts[j].0[0] - pts[i].0[0] >= nearest.max(1e-9) {
                break;
            }
            if dist(&pts[i].1, &pts[j].1) <= 1e-4 {
                continue;
            }
            let dd = dist(&pts[i].0, &pts[j].0);
            nearest = nearest.min(dd);
            if dd < 1e-9 {
                collisions += 1;
            }
        }
    }
    Ok(InjectivityReport { samples, collisions, nearest })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curve::{affine_weight, Domain};

    fn spec(a: &[f64], s: &[f64]) -> ExpMatrixSpec {
        ExpMatrixSpec::new(a.to_vec(), s.to_vec()).unwrap()
    }

    #[test]
    fn one_dimensional_ratio_is_one() {
        for (a, s) in [(0.3, -2.0), (5.0, 7.0), (-1.0, 0.0)] {
            assert!((tp_ratio(&spec(&[a], &[s])).unwrap() - 1.0).abs() < 1e-15);
        }
    }

    #[test]
    fn two_dimensional_sinhc() {
        let e = 1f64.exp();
        assert!((tp_ratio(&spec(&[0.0, 1.0], &[0.0, 1.0])).unwrap() - (e - 1.0) / e.sqrt()).abs() < 1e-14);
        let mut r = rng::stream(4, 0);
        for _ in 0..2000 {
            let a = sorted_uniform(&mut r, 2, -3.0, 3.0);
            let s = sorted_uniform(&mut r, 2, -3.0, 3.0);
            let z = (a[1] - a[0]) * (s[1] - s[0]) / 2.0;
            let oracle = z.sinh() / z;
            let v = tp_ratio(&spec(&a, &s)).unwrap();
            assert!((v - oracle).abs() < 1e-13 * oracle, "z={z}: {v} vs {oracle}");
        }
    }

    #[test]
    fn series_and_lu_agree_where_both_are_accurate() {
        let mut r = rng::stream(8, 0);
        for d in 2..=5 {
            for _ in 0..200 {
                let a = sorted_uniform(&mut r, d, -1.0, 1.0);
                let s = sorted_uniform(&mut r, d, -1.5, 1.5);
                let sp = spec(&a, &s);
                let (x, y) = (tp_ratio_series(&sp), tp_ratio_lu(&sp).unwrap());
                // LU loses digits to the Vandermonde products
                let tol = 1e-14 / (vdet(&a) * vdet(&s)).abs();
                assert!((x - y).abs() <= tol.max(1e-12) * x, "d={d}: {x} vs {y}");
            }
        }
    }

    #[test]
    fn confluent_limit() {
        // all points merging: the ratio tends to 1 / prod_{k<d} k!
        let sp = spec(&[0.0, 1e-7, 2e-7], &[0.0, 1e-7, 2e-7]);
        assert!((tp_ratio(&sp).unwrap() - 0.5).abs() < 1e-9);
        let sp = spec(&[0.0, 1e-6, 2e-6, 3e-6], &[1.0, 1.0 + 1e-6, 1.0 + 2e-6, 1.0 + 3e-6]);
        assert!((tp_ratio(&sp).unwrap() - 1.0 / 12.0).abs() < 1e-9);
    }

    #[test]
    fn symmetries() {
        let mut r = rng::stream(6, 0);
        for _ in 0..200 {
            let a = sorted_uniform(&mut r, 3, -3.0, 3.0);
            let s = sorted_uniform(&mut r, 3, -3.0, 3.0);
            let base = tp_ratio(&spec(&a, &s)).unwrap();
            let swapped = tp_ratio(&spec(&s, &a)).unwrap();
            assert!((base - swapped).abs() < 1e-12 * base);
            let c = r.random_range(-5.0..5.0);
            let shifted: Vec<f64> = a.iter().map(|x| x + c).collect();
            let v = tp_ratio(&spec(&shifted, &s)).unwrap();
            assert!((v - base).abs() < 1e-10 * base);
        }
    }

    #[test]
    fn spec_validation() {
        assert!(matches!(ExpMatrixSpec::new(vec![1.0, 1.0], vec![0.0, 1.0]), Err(Error::DegenerateInput(_))));
        assert!(matches!(ExpMatrixSpec::new(vec![2.0, 1.0], vec![0.0, 1.0]), Err(Error::Argument(_))));
        assert!(ExpMatrixSpec::new(vec![1.0], vec![0.0, 1.0]).is_err());
        let big = spec(&[-300.0, 300.0], &[-300.0, 300.0]);
        assert!(matches!(tp_ratio(&big), Err(Error::Range(_))));
    }

    #[test]
    fn tp_battery_positive() {
        for d in 2..=4 {
            let b = tp_battery(d, 5000, 1).unwrap();
            assert_eq!(b.nonpositive, 0);
            assert!(b.floor > 0.0);
        }
        assert!(tp_battery(2, 5000, 2).unwrap().floor >= 1.0 - 1e-12);
    }

    #[test]
    fn jacobian_equals_point_jacobian_and_differences() {
        let curve = Curve::new(Family::ExpParam { rates: vec![-1.0, 0.5, 2.0] }, Domain::closed(0.0, 5.0)).unwrap();
        let mut r = rng::stream(3, 0);
        for _ in 0..10 {
            let t = r.random_range(0.0..1.0);
            let h = [r.random_range(0.05..1.5), r.random_range(0.05..1.5)];
            let j = offspring_jacobian(&curve, t, &h).unwrap();
            let k = kappa(&h);
            let ts: Vec<f64> = k.iter().map(|x| t + x).collect();
            let pj = point_jacobian(&curve, &ts).unwrap();
            assert!((j - pj).abs() < 1e-12 * j.abs());
            let fd = offspring_jacobian_fd(&curve, t, &h, 1e-5).unwrap();
            assert!((fd - j).abs() < 1e-6 * j.abs());
        }
    }

    #[test]
    fn jacobian_vanishes_at_zero_shift() {
        let curve = Curve::moment(3).unwrap();
        assert_eq!(offspring_jacobian(&curve, 0.2, &[0.0, 0.0]).unwrap(), 0.0);
        assert!((offspring_jacobian(&curve, 0.2, &[1e-3, 1e-3]).unwrap() - 1.2e-8).abs() < 1e-15);
        assert!(offspring_jacobian(&curve, 0.9, &[0.1, 0.1]).is_err());
    }

    #[test]
    fn exponential_jacobian_reduces_to_tp_ratio() {
        let rates = [-1.0, 0.5, 2.0];
        let curve = Curve::new(Family::ExpParam { rates: rates.to_vec() }, Domain::closed(0.0, 5.0)).unwrap();
        let (t, h) = (0.3, [0.4, 0.9]);
        let off = offspring(OffspringSpec::new(curve.clone(), h.to_vec())).unwrap();
        let lhs = offspring_jacobian(&curve, t, &h).unwrap() / (v_of_h(&h) * off.h_weight(t).unwrap().powf(2.0));
        let s: Vec<f64> = kappa(&h).iter().map(|k| t + k).collect();
        let rhs = tp_ratio(&spec(&rates, &s)).unwrap();
        assert!((lhs - rhs).abs() < 1e-12 * rhs);
        assert!(affine_weight(&curve, t).unwrap() > 0.0);
    }

    #[test]
    fn jacobian_floor_positive_and_stable() {
        let a = jacobian_floor(&[-1.0, 0.5, 2.0], 4000, 1).unwrap();
        let b = jacobian_floor(&[-1.0, 0.5, 2.0], 4000, 2).unwrap();
        assert_eq!(a.nonpositive, 0);
        assert!(a.floor > 0.0 && (a.floor - b.floor).abs() <= 0.2 * a.floor);
    }

    #[test]
    fn moment_jacobian_is_six_vandermonde() {
        let c = Curve::moment(3).unwrap();
        let ts = [0.1, 0.35, 0.8];
        assert!((point_jacobian(&c, &ts).unwrap() - 6.0 * vdet(&ts)).abs() < 1e-14);
        let rep = check_jacobian_delta(&c, 2000, 1).unwrap();
        assert_eq!(rep.delta, 12.0);
        assert!(rep.pass && (rep.min_ratio - 1.0).abs() < 1e-9);
    }

    #[test]
    fn power_triple_jacobian_bound() {
        let c = Curve::power_triple(1.5, 3.5).unwrap().with_domain(Domain::closed(0.5, 2.0)).unwrap();
        let rep = check_jacobian_delta(&c, 2000, 1).unwrap();
        assert!(rep.pass, "{rep:?}");
    }

    #[test]
    fn injectivity() {
        let rep = injectivity_probe(&Curve::moment(3).unwrap(), 20_000, 1).unwrap();
        assert_eq!(rep.collisions, 0);
        assert!(rep.nearest > 0.0);
        let rep = injectivity_probe(&Curve::power_triple(1.5, 3.5).unwrap(), 20_000, 1).unwrap();
        assert_eq!(rep.collisions, 0);
        let bad = Curve::monomial(vec![1.0, 2.0, 0.5]).unwrap();
        assert!(matches!(injectivity_probe(&bad, 100, 1), Err(Error::HypothesisViolated(_)) | Ok(_)));
        let flat = Curve::monomial(vec![1.0, 3.0, 2.0]).unwrap();
        assert!(matches!(injectivity_probe(&flat, 100, 1), Err(Error::HypothesisViolated(_))));
    }
}
