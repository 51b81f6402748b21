//! Curve families, torsion, affine arclength weight and offspring curves.

use num_rational::Ratio;

use crate::error::{Error, Result};
use crate::linalg;

#[derive(Debug, Clone, PartialEq)]
pub enum Family {
    /// `(t, t^2, ..., t^d)`
    Moment { d: usize },
    /// `(t^{a_1}, ..., t^{a_d})`
    Monomial { exponents: Vec<f64> },
    /// `(a_1^{-1} e^{a_1 t}, ..., a_d^{-1} e^{a_d t})`
    ExpParam { rates: Vec<f64> },
    /// `(t, t^alpha, t^beta)`
    PowerTriple { alpha: f64, beta: f64 },
}

/// Parameter interval `(lo, hi]`, or `[lo, hi]` when `lo_closed`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Domain {
    pub lo: f64,
    pub hi: f64,
    pub lo_closed: bool,
}

impl Domain {
    pub fn open_closed(lo: f64, hi: f64) -> Self {
        Domain { lo, hi, lo_closed: false }
    }

    pub fn closed(lo: f64, hi: f64) -> Self {
        Domain { lo, hi, lo_closed: true }
    }

    pub fn contains(&self, t: f64) -> bool {
        t <= self.hi && (t > self.lo || (self.lo_closed && t == self.lo))
    }

    pub fn len(&self) -> f64 {
        self.hi - self.lo
    }

    pub fn is_empty(&self) -> bool {
        self.hi <= self.lo
    }
}

/// Anything that evaluates a parametrized curve and its derivatives.
pub trait CurveEval {
    fn dim(&self) -> usize;

    fn domain(&self) -> Domain;

    /// Derivative of order `j` at `t` (`j = 0` is the point), without checks.
    fn derivative_unchecked(&self, j: usize, t: f64) -> Vec<f64>;

    fn derivative(&self, j: usize, t: f64) -> Result<Vec<f64>> {
        if !self.domain().contains(t) {
            return Err(Error::domain(format!("t = {t} outside {:?}", self.domain())));
        }
        let v = self.derivative_unchecked(j, t);
        if v.iter().any(|x| !x.is_finite()) {
            return Err(Error::domain(format!("derivative {j} not finite at t = {t}")));
        }
        Ok(v)
    }

    fn point(&self, t: f64) -> Result<Vec<f64>> {
        self.derivative(0, t)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Curve {
    family: Family,
    domain: Domain,
}

impl Curve {
    pub fn new(family: Family, domain: Domain) -> Result<Self> {
        let d = match &family {
            Family::Moment { d } => *d,
            Family::Monomial { exponents } => exponents.len(),
            Family::ExpParam { rates } => {
                if rates.iter().any(|a| *a == 0.0 || !a.is_finite()) {
                    return Err(Error::arg("exponential rates must be finite and nonzero"));
                }
                rates.len()
            }
            Family::PowerTriple { alpha, beta } => {
                if !alpha.is_finite() || !beta.is_finite() {
                    return Err(Error::arg("power-triple exponents must be finite"));
                }
                3
            }
        };
        if d < 2 {
            return Err(Error::arg(format!("curve dimension must be >= 2, got {d}")));
        }
        if !(domain.lo >= 0.0) || !domain.hi.is_finite() || domain.hi <= domain.lo {
            return Err(Error::domain(format!("invalid parameter interval {domain:?}")));
        }
        let curve = Curve { family, domain };
        if domain.lo_closed && domain.lo == 0.0 {
            let exps = curve.power_exponents();
            if let Some(bad) = exps.iter().find(|&&a| !(a >= d as f64 || (a >= 0.0 && a.fract() == 0.0))) {
                return Err(Error::domain(format!(
                    "t = 0 must be excluded: exponent {bad} makes a derivative of order <= {d} singular"
                )));
            }
        }
        Ok(curve)
    }

    /// Moment curve on `[0, 1]`.
    pub fn moment(d: usize) -> Result<Self> {
        Curve::new(Family::Moment { d }, Domain::closed(0.0, 1.0))
    }

    /// Monomial curve on `(0, 1]`.
    pub fn monomial(exponents: Vec<f64>) -> Result<Self> {
        Curve::new(Family::Monomial { exponents }, Domain::open_closed(0.0, 1.0))
    }

    /// Exponential curve on `[0, 1]`.
    pub fn exp_param(rates: Vec<f64>) -> Result<Self> {
        Curve::new(Family::ExpParam { rates }, Domain::closed(0.0, 1.0))
    }

    /// `(t, t^alpha, t^beta)` on `(0, 1]`.
    pub fn power_triple(alpha: f64, beta: f64) -> Result<Self> {
        Curve::new(Family::PowerTriple { alpha, beta }, Domain::open_closed(0.0, 1.0))
    }

    pub fn with_domain(self, domain: Domain) -> Result<Self> {
        Curve::new(self.family, domain)
    }

    pub fn family(&self) -> &Family {
        &self.family
    }

    // exponents of the power families, empty for ExpParam
    fn power_exponents(&self) -> Vec<f64> {
        match &self.family {
            Family::Moment { d } => (1..=*d).map(|i| i as f64).collect(),
            Family::Monomial { exponents } => exponents.clone(),
            Family::PowerTriple { alpha, beta } => vec![1.0, *alpha, *beta],
            Family::ExpParam { .. } => Vec::new(),
        }
    }

    /// `<xi, gamma(t)>` and `<xi, gamma'(t)>` without allocation.
    pub fn phase_and_speed(&self, xi: &[f64], t: f64) -> (f64, f64) {
        match &self.family {
            Family::Moment { d } => {
                // Horner on sum_i xi_i t^i and its derivative
                let mut p = 0.0;
                let mut dp = 0.0;
                for i in (1..=*d).rev() {
                    dp = dp * t + i as f64 * xi[i - 1];
                    p = (p + xi[i - 1]) * t;
                }
                (p, dp)
            }
            Family::ExpParam { rates } => {
                let mut p = 0.0;
                let mut dp = 0.0;
                for (a, x) in rates.iter().zip(xi) {
                    let e = (a * t).exp();
                    p += x * e / a;
                    dp += x * e;
                }
                (p, dp)
            }
            _ => {
                let mut p = 0.0;
                let mut dp = 0.0;
                for (a, x) in self.power_exponents().iter().zip(xi) {
                    p += x * t.powf(*a);
                    dp += x * a * t.powf(a - 1.0);
                }
                (p, dp)
            }
        }
    }

    /// `<gamma^{(j)}(t), xi>` without domain checks.
    pub fn inner_derivative(&self, j: usize, xi: &[f64], t: f64) -> f64 {
        self.derivative_unchecked(j, t)
            .iter()
            .zip(xi)
            .map(|(g, x)| g * x)
            .sum()
    }
}

fn falling(a: f64, j: usize) -> f64 {
    (0..j).map(|k| a - k as f64).product()
}

fn power_derivative(a: f64, j: usize, t: f64) -> f64 {
    let c = falling(a, j);
    if c == 0.0 {
        0.0
    } else {
        c * t.powf(a - j as f64)
    }
}

impl CurveEval for Curve {
    fn dim(&self) -> usize {
        match &self.family {
            Family::Moment { d } => *d,
            Family::Monomial { exponents } => exponents.len(),
            Family::ExpParam { rates } => rates.len(),
            Family::PowerTriple { .. } => 3,
        }
    }

    fn domain(&self) -> Domain {
        self.domain
    }

    fn derivative_unchecked(&self, j: usize, t: f64) -> Vec<f64> {
        match &self.family {
            Family::ExpParam { rates } => rates
                .iter()
                .map(|&a| a.powi(j as i32 - 1) * (a * t).exp())
                .collect(),
            Family::Moment { d } => (1..=*d)
                .map(|i| if j > i { 0.0 } else { falling(i as f64, j) * t.powi((i - j) as i32) })
                .collect(),
            _ => self
                .power_exponents()
                .iter()
                .map(|&a| power_derivative(a, j, t))
                .collect(),
        }
    }
}

/// `det(gamma'(t), ..., gamma^{(d)}(t))`, sign preserved.
pub fn torsion<C: CurveEval + ?Sized>(curve: &C, t: f64) -> Result<f64> {
    let d = curve.dim();
    if d > linalg::MAX_DIM {
        return Err(Error::UnsupportedDimension(d));
    }
    let cols: Vec<Vec<f64>> = (1..=d).map(|j| curve.derivative(j, t)).collect::<Result<_>>()?;
    let rows: Vec<Vec<f64>> = (0..d).map(|i| cols.iter().map(|c| c[i]).collect()).collect();
    Ok(linalg::det(&rows))
}

/// Affine arclength weight `|torsion|^{2/(d(d+1))}`.
pub fn affine_weight<C: CurveEval + ?Sized>(curve: &C, t: f64) -> Result<f64> {
    let d = curve.dim() as f64;
    Ok(torsion(curve, t)?.abs().powf(2.0 / (d * (d + 1.0))))
}

/// Torsion of the moment curve at an integer parameter, in exact integer arithmetic.
pub fn moment_torsion_exact(d: usize, t: i64) -> i128 {
    let rows: Vec<Vec<i128>> = (1..=d)
        .map(|i| {
            (1..=d)
                .map(|j| {
                    if j > i {
                        0
                    } else {
                        let c: i128 = ((i - j + 1)..=i).map(|k| k as i128).product();
                        c * (t as i128).pow((i - j) as u32)
                    }
                })
                .collect()
        })
        .collect();
    linalg::det_bareiss(&rows)
}

/// Cumulative shifts `kappa_1 = 0, kappa_j = h_1 + ... + h_{j-1}`.
pub fn kappa(h: &[f64]) -> Vec<f64> {
    let mut k = Vec::with_capacity(h.len() + 1);
    let mut acc = 0.0;
    k.push(0.0);
    for x in h {
        acc += x;
        k.push(acc);
    }
    k
}

#[derive(Debug, Clone, PartialEq)]
pub struct OffspringSpec {
    pub base: Curve,
    pub h: Vec<f64>,
    /// Multiplier on the sum of shifted copies: 1 for `Gamma`, `1/d` for the centroid curve.
    pub scale: f64,
}

impl OffspringSpec {
    pub fn new(base: Curve, h: Vec<f64>) -> Self {
        OffspringSpec { base, h, scale: 1.0 }
    }

    /// Centroid curve `(1/d) sum_j gamma(t + kappa_j(h))`.
    pub fn averaged(base: Curve, h: Vec<f64>) -> Self {
        let d = base.dim() as f64;
        OffspringSpec { base, h, scale: 1.0 / d }
    }
}

/// Evaluator for `Gamma(t, h) = scale * sum_j gamma(t + kappa_j(h))`.
#[derive(Debug, Clone)]
pub struct Offspring {
    spec: OffspringSpec,
    kappa: Vec<f64>,
    domain: Domain,
}

pub fn offspring(spec: OffspringSpec) -> Result<Offspring> {
    let d = spec.base.dim();
    if spec.h.len() != d - 1 {
        return Err(Error::arg(format!("need {} shifts, got {}", d - 1, spec.h.len())));
    }
    if spec.h.iter().any(|x| !(*x >= 0.0) || !x.is_finite()) {
        return Err(Error::arg("shifts must be finite and nonnegative"));
    }
    let kappa = kappa(&spec.h);
    let base = spec.base.domain();
    let domain = Domain {
        lo: base.lo,
        hi: base.hi - kappa[d - 1],
        lo_closed: base.lo_closed,
    };
    if domain.hi < domain.lo || (domain.hi == domain.lo && !domain.lo_closed) {
        return Err(Error::domain("offspring parameter interval is empty"));
    }
    Ok(Offspring { spec, kappa, domain })
}

impl Offspring {
    pub fn kappa(&self) -> &[f64] {
        &self.kappa
    }

    pub fn base(&self) -> &Curve {
        &self.spec.base
    }

    /// `H(t, h) = prod_j w(t + kappa_j(h))` for the base curve.
    pub fn h_weight(&self, t: f64) -> Result<f64> {
        self.kappa
            .iter()
            .map(|k| affine_weight(&self.spec.base, t + k))
            .product()
    }
}

impl CurveEval for Offspring {
    fn dim(&self) -> usize {
        self.spec.base.dim()
    }

    fn domain(&self) -> Domain {
        self.domain
    }

    fn derivative_unchecked(&self, j: usize, t: f64) -> Vec<f64> {
        let mut acc = vec![0.0; self.dim()];
        for k in &self.kappa {
            for (a, v) in acc.iter_mut().zip(self.spec.base.derivative_unchecked(j, t + k)) {
                *a += v;
            }
        }
        acc.iter().map(|x| x * self.spec.scale).collect()
    }
}

/// Two-point nondegeneracy `|y''(s) z'''(t) - y'''(s) z''(t)|` of a graph curve `(t, y, z)`.
pub fn delta_strong<C: CurveEval + ?Sized>(curve: &C, s: f64, t: f64) -> Result<f64> {
    if curve.dim() != 3 {
        return Err(Error::Form(format!("dimension {} is not 3", curve.dim())));
    }
    for u in [s, t] {
        let d1 = curve.derivative(1, u)?;
        let d2 = curve.derivative(2, u)?;
        if (d1[0] - 1.0).abs() > 1e-12 || d2[0].abs() > 1e-12 {
            return Err(Error::Form(format!(
                "first component is not t + const at {u} (x' = {}, x'' = {})",
                d1[0], d2[0]
            )));
        }
    }
    let ys = curve.derivative(2, s)?;
    let y3s = curve.derivative(3, s)?;
    let zt = curve.derivative(2, t)?;
    let z3t = curve.derivative(3, t)?;
    Ok((ys[1] * z3t[2] - y3s[1] * zt[2]).abs())
}

/// `Q(h) = H(t,h)^{1/d} / w_h(t)` for an exponential curve; independent of `t`.
pub fn q_ratio(curve: &Curve, h: &[f64]) -> Result<f64> {
    let rates = match curve.family() {
        Family::ExpParam { rates } => rates,
        _ => return Err(Error::arg("q_ratio needs an exponential curve")),
    };
    let mut sorted = rates.clone();
    sorted.sort_by(f64::total_cmp);
    if sorted.windows(2).any(|w| w[0] == w[1]) {
        return Err(Error::DegenerateInput(format!("tied rates {rates:?}")));
    }
    let d = curve.dim() as f64;
    let off = offspring(OffspringSpec::new(curve.clone(), h.to_vec()))?;
    let dom = off.domain();
    let q_at = |t: f64| -> Result<f64> {
        let hw = off.h_weight(t)?;
        let wh = affine_weight(&off, t)?;
        Ok(hw.powf(1.0 / d) / wh)
    };
    let t1 = if dom.lo_closed { dom.lo } else { dom.lo + 0.25 * dom.len() };
    let t2 = dom.hi;
    let (q1, q2) = (q_at(t1)?, q_at(t2)?);
    if (q1 - q2).abs() > 1e-10 * q1.abs() {
        return Err(Error::InternalConsistency(format!(
            "Q(h) depends on t: {q1} at {t1} vs {q2} at {t2}"
        )));
    }
    Ok(q1)
}

/// Critical exponents for curves in `R^d`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CriticalExponents {
    pub d: usize,
    /// `p_d = (d^2 + d + 2) / (d^2 + d)`
    pub p: Ratio<i64>,
    /// `q_d = p_d' = (d^2 + d + 2) / 2`
    pub q: Ratio<i64>,
}

impl CriticalExponents {
    /// `p'` on the critical line `p' = d(d+1) q / 2`.
    pub fn critical_line(&self, q: f64) -> f64 {
        let d = self.d as f64;
        d * (d + 1.0) * q / 2.0
    }

    pub fn q_f64(&self) -> f64 {
        *self.q.numer() as f64 / *self.q.denom() as f64
    }
}

pub fn critical_exponents(d: usize) -> Result<CriticalExponents> {
    if d < 2 {
        return Err(Error::arg("critical exponents need d >= 2"));
    }
    let d2 = (d * d + d) as i64;
    Ok(CriticalExponents {
        d,
        p: Ratio::new(d2 + 2, d2),
        q: Ratio::new(d2 + 2, 2),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rel(a: f64, b: f64) -> f64 {
        (a - b).abs() / b.abs().max(1e-300)
    }

    #[test]
    fn moment_three_torsion_is_twelve() {
        let c = Curve::moment(3).unwrap();
        assert_eq!(torsion(&c, 0.7).unwrap(), 12.0);
        assert!(rel(affine_weight(&c, 0.3).unwrap(), 12f64.powf(1.0 / 6.0)) < 1e-15);
        assert!((affine_weight(&c, 0.3).unwrap() - 1.51309).abs() < 1e-5);
    }

    #[test]
    fn exp_param_torsion_at_zero() {
        let c = Curve::exp_param(vec![-1.0, 1.0, 2.0]).unwrap();
        assert!(rel(torsion(&c, 0.0).unwrap(), 6.0) < 1e-14);
    }

    #[test]
    fn repeated_monomial_exponent_has_zero_torsion() {
        let c = Curve::monomial(vec![1.0, 2.0, 2.0]).unwrap();
        for t in [0.1, 0.5, 1.0] {
            assert_eq!(torsion(&c, t).unwrap(), 0.0);
        }
    }

    #[test]
    fn power_triple_weight_constant_on_alpha_plus_beta_five() {
        let c = Curve::power_triple(2.0, 3.0).unwrap();
        assert!(rel(affine_weight(&c, 1.0).unwrap(), 12f64.powf(1.0 / 6.0)) < 1e-14);
        let c = Curve::power_triple(1.5, 3.5).unwrap();
        let w0 = affine_weight(&c, 0.2).unwrap();
        for t in [0.35, 0.6, 0.99] {
            assert!(rel(affine_weight(&c, t).unwrap(), w0) < 1e-13);
        }
    }

    #[test]
    fn domain_rules() {
        assert!(Curve::new(Family::Monomial { exponents: vec![0.5, 2.0] }, Domain::closed(0.0, 1.0)).is_err());
        assert!(Curve::new(Family::Monomial { exponents: vec![3.0, 4.0, 5.0] }, Domain::closed(0.0, 1.0)).is_ok());
        assert!(Curve::new(Family::Moment { d: 3 }, Domain::closed(-1.0, 1.0)).is_err());
        assert!(Curve::new(Family::Moment { d: 1 }, Domain::closed(0.0, 1.0)).is_err());
        assert!(Curve::new(Family::ExpParam { rates: vec![0.0, 1.0] }, Domain::closed(0.0, 1.0)).is_err());
        let c = Curve::monomial(vec![0.5, 1.5]).unwrap();
        assert!(matches!(torsion(&c, 0.0), Err(Error::Domain(_))));
        assert!(matches!(torsion(&c, 1.5), Err(Error::Domain(_))));
    }

    #[test]
    fn unsupported_dimension() {
        let c = Curve::moment(9).unwrap();
        assert_eq!(torsion(&c, 0.5), Err(Error::UnsupportedDimension(9)));
    }

    #[test]
    fn moment_exact_torsion() {
        assert_eq!(moment_torsion_exact(3, 5), 12);
        assert_eq!(moment_torsion_exact(6, -3), 2 * 6 * 24 * 120 * 720);
    }

    #[test]
    fn zero_shift_offspring() {
        let c = Curve::moment(3).unwrap();
        let off = offspring(OffspringSpec::new(c.clone(), vec![0.0, 0.0])).unwrap();
        let p = off.point(0.4).unwrap();
        let q = c.point(0.4).unwrap();
        for i in 0..3 {
            assert!(rel(p[i], 3.0 * q[i]) < 1e-15);
        }
        assert!(rel(torsion(&off, 0.4).unwrap(), 27.0 * 12.0) < 1e-14);
    }

    #[test]
    fn offspring_domain_must_be_nonempty() {
        let c = Curve::moment(3).unwrap();
        let r = offspring(OffspringSpec::new(c.clone(), vec![0.7, 0.6]));
        assert!(matches!(r, Err(Error::Domain(_))));
        assert!(offspring(OffspringSpec::new(c, vec![0.5])).is_err());
    }

    #[test]
    fn delta_strong_moment_is_twelve() {
        let c = Curve::moment(3).unwrap();
        assert_eq!(delta_strong(&c, 0.2, 0.9).unwrap(), 12.0);
        let off = offspring(OffspringSpec::new(c.clone(), vec![0.1, 0.1])).unwrap();
        assert!(matches!(delta_strong(&off, 0.2, 0.3), Err(Error::Form(_))));
        let avg = offspring(OffspringSpec::averaged(c, vec![0.1, 0.1])).unwrap();
        assert!((delta_strong(&avg, 0.2, 0.3).unwrap() - 12.0).abs() < 1e-12);
    }

    #[test]
    fn delta_strong_rejects_non_graph_curves() {
        let c = Curve::exp_param(vec![-1.0, 1.0, 2.0]).unwrap();
        assert!(matches!(delta_strong(&c, 0.2, 0.3), Err(Error::Form(_))));
        let c = Curve::moment(4).unwrap();
        assert!(matches!(delta_strong(&c, 0.2, 0.3), Err(Error::Form(_))));
    }

    #[test]
    fn q_ratio_at_zero_shift() {
        for d in 2..=5usize {
            let rates: Vec<f64> = (0..d).map(|i| -1.5 + 0.9 * i as f64).collect();
            let c = Curve::exp_param(rates).unwrap();
            let q = q_ratio(&c, &vec![0.0; d - 1]).unwrap();
            let expected = (d as f64).powf(-2.0 / (d as f64 + 1.0));
            assert!(rel(q, expected) < 1e-12, "d={d}: {q} vs {expected}");
        }
    }

    #[test]
    fn q_ratio_requires_distinct_rates() {
        let c = Curve::exp_param(vec![1.0, 1.0, 2.0]).unwrap();
        assert!(matches!(q_ratio(&c, &[0.1, 0.1]), Err(Error::DegenerateInput(_))));
        let m = Curve::moment(3).unwrap();
        assert!(matches!(q_ratio(&m, &[0.1, 0.1]), Err(Error::Argument(_))));
    }

    #[test]
    fn critical_exponent_values() {
        let e3 = critical_exponents(3).unwrap();
        assert_eq!(e3.p, Ratio::new(7, 6));
        assert_eq!(e3.q, Ratio::from_integer(7));
        let e2 = critical_exponents(2).unwrap();
        assert_eq!(e2.p, Ratio::new(4, 3));
        assert_eq!(e2.q, Ratio::from_integer(4));
        for d in 2..12 {
            let e = critical_exponents(d).unwrap();
            assert_eq!(e.p.recip() + e.q.recip(), Ratio::from_integer(1));
            assert!((e.critical_line(e.q_f64()) - (d * (d + 1)) as f64 * e.q_f64() / 2.0).abs() < 1e-12);
        }
        assert!(critical_exponents(1).is_err());
    }

    #[test]
    fn phase_and_speed_match_derivatives() {
        let curves = [
            Curve::moment(4).unwrap(),
            Curve::exp_param(vec![-1.0, 0.5, 2.0]).unwrap(),
            Curve::power_triple(1.5, 3.5).unwrap(),
        ];
        for c in &curves {
            let xi: Vec<f64> = (0..c.dim()).map(|i| 1.0 - 0.7 * i as f64).collect();
            let (p, s) = c.phase_and_speed(&xi, 0.6);
            assert!(rel(p, c.inner_derivative(0, &xi, 0.6)) < 1e-14);
            assert!(rel(s, c.inner_derivative(1, &xi, 0.6)) < 1e-14);
        }
    }
}
