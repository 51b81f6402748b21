//! Decreasing rearrangements and Lorentz quasi-norms of step data.
//!
//! Level sets are strict (`|f| > lambda`), so the rearrangement is right
//! continuous and takes the value `v_k` on `[s_{k-1}, s_k)`.

use num_complex::Complex64;
use rand::Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::intervals::IntervalSet;
use crate::rng;

/// Samples on a uniform grid; cell `i` is `[origin + i h, origin + (i+1) h)`.
#[derive(Debug, Clone, PartialEq)]
pub struct GridFunction {
    origin: f64,
    spacing: f64,
    values: Vec<Complex64>,
}

impl GridFunction {
    pub fn new(origin: f64, spacing: f64, values: Vec<Complex64>) -> Result<Self> {
        if !(spacing > 0.0) || !spacing.is_finite() || !origin.is_finite() {
            return Err(Error::arg("grid needs a finite origin and positive spacing"));
        }
        if values.iter().any(|v| !v.re.is_finite() || !v.im.is_finite()) {
            return Err(Error::arg("grid samples must be finite"));
        }
        Ok(GridFunction { origin, spacing, values })
    }

    pub fn from_real(origin: f64, spacing: f64, values: &[f64]) -> Result<Self> {
        GridFunction::new(origin, spacing, values.iter().map(|&v| Complex64::new(v, 0.0)).collect())
    }

    /// Cell-midpoint samples of `f` on `[a, b]` with `n` cells.
    pub fn sample<F: Fn(f64) -> f64>(a: f64, b: f64, n: usize, f: F) -> Result<Self> {
        let h = (b - a) / n as f64;
        let vals: Vec<f64> = (0..n).map(|i| f(a + (i as f64 + 0.5) * h)).collect();
        GridFunction::from_real(a, h, &vals)
    }

    pub fn origin(&self) -> f64 {
        self.origin
    }

    pub fn spacing(&self) -> f64 {
        self.spacing
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn total_measure(&self) -> f64 {
        self.spacing * self.values.len() as f64
    }

    pub fn cell(&self, i: usize) -> (f64, f64) {
        let a = self.origin + self.spacing * i as f64;
        (a, a + self.spacing)
    }

    pub fn eval(&self, t: f64) -> Complex64 {
        let x = (t - self.origin) / self.spacing;
        if x < 0.0 || x >= self.values.len() as f64 {
            return Complex64::new(0.0, 0.0);
        }
        self.values[x as usize]
    }

    pub fn scaled(&self, c: Complex64) -> Self {
        GridFunction { values: self.values.iter().map(|v| v * c).collect(), ..*self }
    }

    pub fn conj(&self) -> Self {
        GridFunction { values: self.values.iter().map(|v| v.conj()).collect(), ..*self }
    }

    /// The cellwise step function of `|f|`.
    pub fn to_step(&self) -> StepFunction {
        let parts = (0..self.len())
            .filter(|&i| self.values[i].norm() != 0.0)
            .map(|i| {
                let (a, b) = self.cell(i);
                (IntervalSet::interval(a, b).expect("grid cells are valid"), self.values[i].norm())
            })
            .collect();
        StepFunction::canonical(parts)
    }
}

/// Finite sum of values on pairwise disjoint interval sets.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct StepFunction {
    parts: Vec<(IntervalSet, f64)>,
}

impl StepFunction {
    pub fn new(parts: Vec<(IntervalSet, f64)>) -> Result<Self> {
        if parts.iter().any(|(_, v)| !v.is_finite()) {
            return Err(Error::arg("step values must be finite"));
        }
        let mut ivs: Vec<(f64, f64)> = parts.iter().flat_map(|(s, _)| s.parts().iter().copied()).collect();
        ivs.sort_by(|x, y| x.0.total_cmp(&y.0));
        if ivs.windows(2).any(|w| w[0].1 > w[1].0) {
            return Err(Error::arg("step supports must be pairwise disjoint"));
        }
        Ok(StepFunction::canonical(parts))
    }

    fn canonical(mut parts: Vec<(IntervalSet, f64)>) -> Self {
        parts.retain(|(s, v)| *v != 0.0 && !s.is_empty());
        parts.sort_by(|x, y| {
            y.1.abs()
                .total_cmp(&x.1.abs())
                .then_with(|| x.0.inf().unwrap_or(0.0).total_cmp(&y.0.inf().unwrap_or(0.0)))
        });
        StepFunction { parts }
    }

    pub fn zero() -> Self {
        StepFunction::default()
    }

    pub fn indicator(set: IntervalSet) -> Self {
        StepFunction::canonical(vec![(set, 1.0)])
    }

    pub fn parts(&self) -> &[(IntervalSet, f64)] {
        &self.parts
    }

    pub fn support(&self) -> IntervalSet {
        self.parts.iter().fold(IntervalSet::empty(), |acc, (s, _)| acc.union(s))
    }

    pub fn eval(&self, t: f64) -> f64 {
        self.parts.iter().find(|(s, _)| s.contains(t)).map_or(0.0, |p| p.1)
    }

    pub fn scaled(&self, c: f64) -> Self {
        StepFunction::canonical(self.parts.iter().map(|(s, v)| (s.clone(), v * c)).collect())
    }

    /// `t -> f(t / lambda)`.
    pub fn dilated(&self, lambda: f64) -> Self {
        StepFunction::canonical(self.parts.iter().map(|(s, v)| (s.dilate(lambda), *v)).collect())
    }

    pub fn translated(&self, c: f64) -> Self {
        StepFunction::canonical(self.parts.iter().map(|(s, v)| (s.translate(c), *v)).collect())
    }

    /// Pointwise combination on the common refinement of the supports.
    pub fn combine<F: Fn(&[f64]) -> f64>(fs: &[StepFunction], op: F) -> StepFunction {
        let mut cuts: Vec<f64> = fs
            .iter()
            .flat_map(|f| f.parts.iter().flat_map(|(s, _)| s.parts().iter().flat_map(|&(a, b)| [a, b])))
            .collect();
        cuts.sort_by(f64::total_cmp);
        cuts.dedup();
        let mut parts = Vec::new();
        let mut vals = vec![0.0; fs.len()];
        for w in cuts.windows(2) {
            for (v, f) in vals.iter_mut().zip(fs) {
                *v = f.eval(w[0]);
            }
            let v = op(&vals);
            if v != 0.0 {
                parts.push((IntervalSet::interval(w[0], w[1]).expect("sorted cuts"), v));
            }
        }
        StepFunction::canonical(parts)
    }

    pub fn sum(fs: &[StepFunction]) -> StepFunction {
        StepFunction::combine(fs, |v| v.iter().sum())
    }

    pub fn product(fs: &[StepFunction]) -> StepFunction {
        StepFunction::combine(fs, |v| v.iter().product())
    }

    /// `meas {|f| > lambda}`.
    pub fn distribution(&self, lambda: f64) -> f64 {
        self.parts.iter().filter(|(_, v)| v.abs() > lambda).map(|(s, _)| s.measure()).sum()
    }

    pub fn l1_norm(&self) -> f64 {
        self.parts.iter().map(|(s, v)| v.abs() * s.measure()).sum()
    }

    pub fn sup_norm(&self) -> f64 {
        self.parts.first().map_or(0.0, |p| p.1.abs())
    }
}

/// Data with a finite list of level sets.
pub trait Levels {
    /// Distinct positive magnitudes with the measure where `|f|` takes them,
    /// sorted by magnitude, largest first.
    fn levels(&self) -> Vec<(f64, f64)>;
}

fn merge_levels(mut raw: Vec<(f64, f64)>) -> Vec<(f64, f64)> {
    raw.retain(|&(v, m)| v > 0.0 && m > 0.0);
    raw.sort_by(|x, y| y.0.total_cmp(&x.0));
    let mut out: Vec<(f64, f64)> = Vec::with_capacity(raw.len());
    for (v, m) in raw {
        match out.last_mut() {
            Some(last) if last.0 == v => last.1 += m,
            _ => out.push((v, m)),
        }
    }
    out
}

impl Levels for StepFunction {
    fn levels(&self) -> Vec<(f64, f64)> {
        merge_levels(self.parts.iter().map(|(s, v)| (v.abs(), s.measure())).collect())
    }
}

impl Levels for GridFunction {
    fn levels(&self) -> Vec<(f64, f64)> {
        merge_levels(self.values.iter().map(|v| (v.norm(), self.spacing)).collect())
    }
}

/// `f*` as a step function on `(0, inf)`.
pub fn rearrangement<F: Levels + ?Sized>(f: &F) -> StepFunction {
    let mut s = 0.0;
    let mut parts = Vec::new();
    for (v, m) in f.levels() {
        let next = s + m;
        parts.push((IntervalSet::interval(s, next).expect("positive measure"), v));
        s = next;
    }
    StepFunction::canonical(parts)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LorentzIndex {
    pub p: f64,
    /// `f64::INFINITY` selects the weak quasi-norm.
    pub q: f64,
}

impl LorentzIndex {
    pub fn new(p: f64, q: f64) -> Result<Self> {
        if !(p > 0.0) || !p.is_finite() || !(q > 0.0) {
            return Err(Error::arg(format!("invalid Lorentz index ({p}, {q})")));
        }
        Ok(LorentzIndex { p, q })
    }

    pub fn weak(p: f64) -> Result<Self> {
        LorentzIndex::new(p, f64::INFINITY)
    }
}

/// `|f|_{p,q} = ((q/p) int_0^inf (t^{1/p} f*(t))^q dt/t)^{1/q}`, or
/// `sup_t t^{1/p} f*(t)` for `q = inf`; exact for step data.
pub fn lorentz_norm<F: Levels + ?Sized>(f: &F, idx: LorentzIndex) -> f64 {
    let levels = f.levels();
    let (p, q) = (idx.p, idx.q);
    let mut s = 0.0;
    if q.is_infinite() {
        let mut best = 0.0f64;
        for (v, m) in levels {
            s += m;
            best = best.max(v * s.powf(1.0 / p));
        }
        return best;
    }
    let e = q / p;
    let mut acc = 0.0;
    let mut prev = 0.0;
    for (v, m) in levels {
        s += m;
        let cur = s.powf(e);
        acc += v.powf(q) * (cur - prev);
        prev = cur;
    }
    acc.powf(1.0 / q)
}

/// `sup_lambda lambda * meas{|f| > lambda}^{1/p}` for data given as
/// `(measure, magnitude)` cells.
pub fn weak_norm_from_samples(samples: &[(f64, f64)], p: f64) -> f64 {
    let raw: Vec<(f64, f64)> = samples.iter().map(|&(m, v)| (v.abs(), m)).collect();
    let mut s = 0.0;
    let mut best = 0.0f64;
    for (v, m) in merge_levels(raw) {
        s += m;
        best = best.max(v * s.powf(1.0 / p));
    }
    best
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InequalityCheck {
    pub lhs: f64,
    pub rhs: f64,
    pub pass: bool,
}

impl InequalityCheck {
    fn new(lhs: f64, rhs: f64) -> Self {
        InequalityCheck { lhs, rhs, pass: lhs <= rhs * (1.0 + 1e-12) }
    }
}

/// `|prod h_i|_{r,inf} <= n^{1/r} prod |h_i|_{r s_i, inf}` with `sum 1/s_i = 1`.
pub fn check_weak_holder(hs: &[StepFunction], r: f64, s: &[f64]) -> Result<InequalityCheck> {
    if hs.is_empty() || hs.len() != s.len() {
        return Err(Error::arg("need one exponent s_i per factor"));
    }
    if !(r > 0.0) || s.iter().any(|x| !(*x > 0.0)) {
        return Err(Error::arg("r and s_i must be positive"));
    }
    let recip: f64 = s.iter().map(|x| 1.0 / x).sum();
    if (recip - 1.0).abs() > 1e-12 {
        return Err(Error::arg(format!("sum of 1/s_i is {recip}, not 1")));
    }
    let lhs = lorentz_norm(&StepFunction::product(hs), LorentzIndex::weak(r)?);
    let mut rhs = (hs.len() as f64).powf(1.0 / r);
    for (h, si) in hs.iter().zip(s) {
        rhs *= lorentz_norm(h, LorentzIndex::weak(r * si)?);
    }
    Ok(InequalityCheck::new(lhs, rhs))
}

/// `C_r = ((2 - r) / (1 - r))^{1/r}`.
pub fn r_convexity_constant(r: f64) -> f64 {
    ((2.0 - r) / (1.0 - r)).powf(1.0 / r)
}

/// `|sum h_l|_{r,inf} <= C_r (sum |h_l|_{r,inf}^r)^{1/r}` for `0 < r < 1`.
pub fn check_r_convexity(hs: &[StepFunction], r: f64) -> Result<InequalityCheck> {
    if !(r > 0.0 && r < 1.0) {
        return Err(Error::arg(format!("r must lie in (0, 1), got {r}")));
    }
    let idx = LorentzIndex::weak(r)?;
    let lhs = lorentz_norm(&StepFunction::sum(hs), idx);
    let inner: f64 = hs.iter().map(|h| lorentz_norm(h, idx).powf(r)).sum();
    Ok(InequalityCheck::new(lhs, r_convexity_constant(r) * inner.powf(1.0 / r)))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConvexityReport {
    pub lhs: f64,
    pub rhs_without_constant: f64,
    pub ratio: f64,
}

/// Compares `|G|_{P,s}` with `|G|_1^{1/P} |G|_inf^{1 - 1/P}`.
pub fn check_convexity_interp(g: &StepFunction, big_p: f64, s: f64) -> Result<ConvexityReport> {
    let lhs = lorentz_norm(g, LorentzIndex::new(big_p, s)?);
    let rhs = g.l1_norm().powf(1.0 / big_p) * g.sup_norm().powf(1.0 - 1.0 / big_p);
    let ratio = if rhs == 0.0 { 0.0 } else { lhs / rhs };
    Ok(ConvexityReport { lhs, rhs_without_constant: rhs, ratio })
}

/// Random step function on `[0, 10)` with at most `max_levels` nonzero values
/// whose magnitudes span several orders.
pub fn random_step<R: Rng + ?Sized>(rng: &mut R, max_levels: usize) -> StepFunction {
    let cuts = rng.random_range(2..=12usize);
    let mut pts: Vec<f64> = (0..cuts).map(|_| rng.random_range(0.0..10.0)).collect();
    pts.sort_by(f64::total_cmp);
    pts.dedup();
    let levels = rng.random_range(1..=max_levels.max(1));
    let vals: Vec<f64> = (0..levels)
        .map(|_| {
            let sign = if rng.random_bool(0.5) { 1.0 } else { -1.0 };
            sign * 10f64.powf(rng.random_range(-2.0..2.0))
        })
        .collect();
    let mut buckets: Vec<Vec<(f64, f64)>> = vec![Vec::new(); levels];
    for w in pts.windows(2) {
        // some cells stay empty
        let k = rng.random_range(0..=levels);
        if k < levels && w[1] > w[0] {
            buckets[k].push((w[0], w[1]));
        }
    }
    let parts = buckets
        .into_iter()
        .zip(vals)
        .filter(|(b, _)| !b.is_empty())
        .map(|(b, v)| (IntervalSet::from_intervals(b).expect("finite cuts"), v))
        .collect();
    StepFunction::new(parts).expect("cells are disjoint")
}

/// Outcome of a randomized inequality battery.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Battery {
    pub trials: usize,
    pub failures: usize,
    /// Largest observed `lhs / rhs`.
    pub max_ratio: f64,
}

fn run_battery<F>(trials: usize, seed: u64, body: F) -> Battery
where
    F: Fn(&mut rng::StreamRng) -> InequalityCheck + Sync,
{
    let per_block: Vec<(usize, f64)> = rng::blocks(trials)
        .into_par_iter()
        .map(|(idx, n)| {
            let mut r = rng::stream(seed, idx);
            let mut fails = 0;
            let mut worst = 0.0f64;
            for _ in 0..n {
                let c = body(&mut r);
                if !c.pass {
                    fails += 1;
                }
                if c.rhs > 0.0 {
                    worst = worst.max(c.lhs / c.rhs);
                }
            }
            (fails, worst)
        })
        .collect();
    Battery {
        trials,
        failures: per_block.iter().map(|b| b.0).sum(),
        max_ratio: per_block.iter().map(|b| b.1).fold(0.0, f64::max),
    }
}

/// Weak Hölder inequality on random tuples of up to four factors.
pub fn weak_holder_battery(trials: usize, seed: u64) -> Battery {
    run_battery(trials, seed, |r| {
        let n = r.random_range(1..=4usize);
        let hs: Vec<StepFunction> = (0..n).map(|_| random_step(r, 4)).collect();
        let raw: Vec<f64> = (0..n).map(|_| r.random_range(0.1..1.0)).collect();
        let total: f64 = raw.iter().sum();
        // s_i = total / raw_i makes sum 1/s_i = 1 up to rounding
        let mut s: Vec<f64> = raw.iter().map(|x| total / x).collect();
        let partial: f64 = s[..n - 1].iter().map(|x| 1.0 / x).sum();
        s[n - 1] = 1.0 / (1.0 - partial);
        let rr = 10f64.powf(r.random_range(-1.0..0.5));
        check_weak_holder(&hs, rr, &s).expect("valid exponents")
    })
}

/// r-convexity on random tuples of up to sixteen summands.
pub fn r_convexity_battery(trials: usize, seed: u64) -> Battery {
    run_battery(trials, seed, |r| {
        let n = r.random_range(1..=16usize);
        let hs: Vec<StepFunction> = (0..n).map(|_| random_step(r, 3)).collect();
        let rr = r.random_range(0.05..0.95);
        check_r_convexity(&hs, rr).expect("r in (0,1)")
    })
}
