//! Experiment registry and the runners behind each acceptance criterion.

use std::f64::consts::PI;

use rand::Rng;
use rayon::prelude::*;

use curvelab_core::curve::{affine_weight, kappa, moment_torsion_exact, offspring, q_ratio, torsion, OffspringSpec};
use curvelab_core::density::ScaledBump;
use curvelab_core::lorentz::{lorentz_norm, r_convexity_battery, random_step, rearrangement, weak_holder_battery, weak_norm_from_samples};
use curvelab_core::lowerbound::{growth_experiment, GrowthOptions};
use curvelab_core::osc::{alpha_k, extension_with, model_integral};
use curvelab_core::positivity::{
    check_jacobian_delta, injectivity_probe, jacobian_floor, offspring_jacobian, offspring_jacobian_fd, tp_battery,
    tp_ratio, ExpMatrixSpec,
};
use curvelab_core::quadrature::{PanelOptions, DEFAULT_MAX_PANELS};
use curvelab_core::rng;
use curvelab_core::special::{beta, gamma};
use curvelab_core::vandermonde::{check_vandineq, random_interval_set, sublevel_measure, vdet, vop_mixed_norm_tol, SimplexPoint};
use curvelab_core::{
    critical_exponents, fit_exponent, Criterion, Curve, CurveEval, Density, Domain, Error, ExperimentReport, Family,
    IntervalSet, LorentzIndex, Result, StepFunction, Verdict,
};

use crate::config::{CurveSpec, ExperimentConfig};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Experiment {
    Decay,
    Sublevel,
    Torsion,
    Offspring,
    Positivity,
    Asymptotics,
    Lowerbound,
    Lorentz,
    Vandermonde,
}

impl Experiment {
    pub const ALL: [Experiment; 9] = [
        Experiment::Decay,
        Experiment::Sublevel,
        Experiment::Torsion,
        Experiment::Offspring,
        Experiment::Positivity,
        Experiment::Asymptotics,
        Experiment::Lowerbound,
        Experiment::Lorentz,
        Experiment::Vandermonde,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Experiment::Decay => "decay",
            Experiment::Sublevel => "sublevel",
            Experiment::Torsion => "torsion",
            Experiment::Offspring => "offspring",
            Experiment::Positivity => "positivity",
            Experiment::Asymptotics => "asymptotics",
            Experiment::Lowerbound => "lowerbound",
            Experiment::Lorentz => "lorentz",
            Experiment::Vandermonde => "vandermonde",
        }
    }

    pub fn from_name(s: &str) -> Option<Self> {
        Experiment::ALL.into_iter().find(|e| e.name() == s)
    }

    pub fn criterion(self) -> Criterion {
        match self {
            Experiment::Decay => Criterion::A1,
            Experiment::Sublevel => Criterion::A2,
            Experiment::Torsion => Criterion::A3,
            Experiment::Offspring => Criterion::A4,
            Experiment::Positivity => Criterion::A5,
            Experiment::Asymptotics => Criterion::A6,
            Experiment::Lowerbound => Criterion::A7,
            Experiment::Lorentz => Criterion::A8,
            Experiment::Vandermonde => Criterion::A9,
        }
    }

    pub fn required(self) -> &'static [&'static str] {
        match self {
            Experiment::Sublevel => &["d"],
            _ => &[],
        }
    }

    /// Keys the experiment reads besides `experiment`, `seed` and `out`.
    pub fn keys(self) -> &'static [&'static str] {
        match self {
            Experiment::Decay => &["curve", "lambda", "samples", "tol", "budget"],
            Experiment::Sublevel => &["d", "alpha", "samples"],
            Experiment::Torsion => &["trials"],
            Experiment::Offspring => &["trials", "samples"],
            Experiment::Positivity => &["samples", "trials"],
            Experiment::Asymptotics => &["k", "lambda", "eps"],
            Experiment::Lowerbound => &["curve", "n", "shift", "eps", "samples", "tol", "budget"],
            Experiment::Lorentz => &["trials"],
            Experiment::Vandermonde => &["d", "a", "b", "trials"],
        }
    }
}

/// Runs the configured experiment.
pub fn run(cfg: &ExperimentConfig) -> Result<ExperimentReport> {
    let mut report = match cfg.experiment {
        Experiment::Decay => decay(cfg),
        Experiment::Sublevel => sublevel(cfg),
        Experiment::Torsion => torsion_identities(cfg),
        Experiment::Offspring => offspring_factorization(cfg),
        Experiment::Positivity => positivity(cfg),
        Experiment::Asymptotics => asymptotics(cfg),
        Experiment::Lowerbound => lowerbound(cfg),
        Experiment::Lorentz => lorentz(cfg),
        Experiment::Vandermonde => vandermonde(cfg),
    }?;
    if report.rows.is_empty() {
        return Err(Error::InternalConsistency(format!("experiment {} produced no rows", report.name)));
    }
    report.name = cfg.experiment.name().to_string();
    Ok(report)
}

fn max_rel(pairs: impl Iterator<Item = (f64, f64)>) -> f64 {
    pairs.map(|(x, y)| (x - y).abs() / y.abs()).fold(0.0, f64::max)
}

fn sorted_distinct<R: Rng + ?Sized>(r: &mut R, d: usize, lo: f64, hi: f64, gap: f64) -> Vec<f64> {
    loop {
        let mut v: Vec<f64> = (0..d).map(|_| r.random_range(lo..hi)).collect();
        v.sort_by(f64::total_cmp);
        if v.windows(2).all(|w| w[1] - w[0] > gap) && v.iter().all(|x| x.abs() > gap) {
            return v;
        }
    }
}

fn panel_options(cfg: &ExperimentConfig, tol: f64) -> PanelOptions {
    PanelOptions { tol: cfg.tol.unwrap_or(tol), max_panels: cfg.budget.unwrap_or(DEFAULT_MAX_PANELS), density: 1.0 }
}

fn decay(cfg: &ExperimentConfig) -> Result<ExperimentReport> {
    let curve = cfg.curve.clone().unwrap_or(CurveSpec::Moment(3)).build()?;
    let d = curve.dim();
    let q = critical_exponents(d)?.q_f64();
    let f = Density::bump(0.5, 1.0)?;
    let lambdas = if cfg.lambda.is_empty() { vec![16.0, 32.0, 64.0, 128.0] } else { cfg.lambda.clone() };
    let samples = cfg.samples.unwrap_or(100_000);
    let opts = panel_options(cfg, 1e-10);
    let ball = PI.powf(d as f64 / 2.0) / gamma(d as f64 / 2.0 + 1.0);
    let cell = ball / samples as f64;

    let mut report = ExperimentReport::new("decay", &["lambda", "weak_norm", "max_abs", "budget_hits"]);
    let mut norms = Vec::new();
    let mut flagged = 0usize;
    for (i, &lam) in lambdas.iter().enumerate() {
        let parts: Vec<(Vec<(f64, f64)>, usize)> = rng::blocks(samples)
            .into_par_iter()
            .map(|(idx, n)| {
                let mut r = rng::stream(cfg.seed, ((i as u64) << 32) | idx);
                let mut out = Vec::with_capacity(n);
                let mut hits = 0;
                while out.len() < n {
                    let x: Vec<f64> = (0..d).map(|_| r.random_range(-1.0..1.0)).collect();
                    if x.iter().map(|v| v * v).sum::<f64>() > 1.0 {
                        continue;
                    }
                    let xi: Vec<f64> = x.iter().map(|v| lam * v).collect();
                    let v = match extension_with(&curve, &f, &xi, opts) {
                        Ok(res) => res.value.norm(),
                        Err(Error::BudgetExceeded { partial: Some(p), .. }) => {
                            hits += 1;
                            p.value.norm()
                        }
                        Err(e) => return Err(e),
                    };
                    out.push((cell, v));
                }
                Ok((out, hits))
            })
            .collect::<Result<_>>()?;
        let hits: usize = parts.iter().map(|p| p.1).sum();
        let cells: Vec<(f64, f64)> = parts.into_iter().flat_map(|p| p.0).collect();
        let weak = weak_norm_from_samples(&cells, q);
        let max_abs = cells.iter().map(|c| c.1).fold(0.0, f64::max);
        flagged += hits;
        norms.push(weak);
        report.push_row(vec![lam, weak, max_abs, hits as f64]);
    }
    let fit = fit_exponent(&lambdas, &norms)?;
    let lo = -(d as f64) / q - 0.08;
    report.verdicts.push(Verdict::new(
        Criterion::A1,
        fit.slope >= lo && fit.slope <= 0.0 && flagged == 0,
        format!("weak L^{q} norm on the dilated unit ball decays like lambda^{:.4} (+- {:.4}); window [{lo:.4}, 0]; budget hits {flagged}", fit.slope, fit.slope_stderr),
    ));
    report.fit = Some(fit);
    report.plot = Some((0, 1));
    Ok(report)
}

fn sublevel(cfg: &ExperimentConfig) -> Result<ExperimentReport> {
    let alphas = if cfg.alpha.is_empty() { vec![0.25, 1.0, 4.0] } else { cfg.alpha.clone() };
    let samples = cfg.samples.unwrap_or(1_000_000);
    let mut report =
        ExperimentReport::new("sublevel", &["d", "alpha", "estimate", "half_width", "ratio", "ratio_half_width"]);
    let mut ok = true;
    let mut details = Vec::new();
    for &d in &cfg.d {
        let mut ratios = Vec::new();
        for (i, &alpha) in alphas.iter().enumerate() {
            let seed = cfg.seed ^ ((d as u64) << 48) ^ ((i as u64) << 40);
            let est = sublevel_measure(d, alpha, samples, seed)?;
            let scale = alpha.powf(2.0 / d as f64);
            let (ratio, rhw) = (est.mean / scale, est.half_width / scale);
            ratios.push((ratio, rhw));
            report.push_row(vec![d as f64, alpha, est.mean, est.half_width, ratio, rhw]);
            if d == 2 && alpha == 1.0 {
                let pass = (est.mean - 1.0).abs() <= est.half_width + 1e-12 && est.half_width <= 0.02;
                ok &= pass;
                details.push(format!("|Omega_2(1)| = {} +- {}", est.mean, est.half_width));
            }
            if d == 3 && alpha == 1.0 {
                let pass = est.mean <= 3.0 + est.half_width;
                ok &= pass;
                details.push(format!("|Omega_3(1)| = {:.6} +- {:.6} (<= 3)", est.mean, est.half_width));
            }
        }
        let mut spread = 0.0f64;
        for x in &ratios {
            for y in &ratios {
                let allowed = (x.1 * x.1 + y.1 * y.1).sqrt() + 1e-12 * x.0;
                spread = spread.max((x.0 - y.0).abs() / allowed.max(f64::MIN_POSITIVE));
            }
        }
        ok &= spread <= 1.0;
        details.push(format!("d={d}: homogeneity spread {spread:.3} of joint CI"));
    }
    report.verdicts.push(Verdict::new(Criterion::A2, ok, details.join("; ")));
    report.plot = Some((1, 2));
    Ok(report)
}

fn torsion_identities(cfg: &ExperimentConfig) -> Result<ExperimentReport> {
    let trials = cfg.trials.unwrap_or(100);
    let mut r = rng::stream(cfg.seed, 0);
    let mut report = ExperimentReport::new("torsion", &["check", "d", "max_rel_err"]);

    let mut exact_ok = true;
    for d in 2..=6usize {
        let target: i128 = (1..=d as i128).map(|k| (1..=k).product::<i128>()).product();
        for t in -3..=3i64 {
            exact_ok &= moment_torsion_exact(d, t) == target;
        }
        let c = Curve::moment(d)?;
        let err = max_rel((0..5).map(|i| (torsion(&c, 0.2 * i as f64).unwrap(), target as f64)));
        report.push_row(vec![1.0, d as f64, err]);
    }

    let mut exp_err = 0.0f64;
    for _ in 0..trials {
        let d = r.random_range(2..=5usize);
        let a = sorted_distinct(&mut r, d, -3.0, 3.0, 0.05);
        let t = r.random_range(0.0..1.0);
        let c = Curve::exp_param(a.clone())?;
        let expected = vdet(&a) * (t * a.iter().sum::<f64>()).exp();
        exp_err = exp_err.max(max_rel(std::iter::once((torsion(&c, t)?, expected))));
    }
    report.push_row(vec![2.0, 5.0, exp_err]);

    let mut pow_err = 0.0f64;
    for _ in 0..trials {
        let (al, be) = loop {
            let al: f64 = r.random_range(1.05..4.0);
            let be: f64 = r.random_range(1.05..4.0);
            if (al - be).abs() > 0.05 {
                break (al, be);
            }
        };
        let t: f64 = r.random_range(0.01..1.0);
        let c = Curve::power_triple(al, be)?;
        let c6 = (al * be * (al - 1.0) * (be - 1.0) * (be - al)).abs();
        let expected = c6.powf(1.0 / 6.0) * t.powf((al + be - 5.0) / 6.0);
        pow_err = pow_err.max(max_rel(std::iter::once((affine_weight(&c, t)?, expected))));
    }
    report.push_row(vec![3.0, 3.0, pow_err]);

    report.verdicts.push(Verdict::new(
        Criterion::A3,
        exact_ok && exp_err <= 1e-10 && pow_err <= 1e-12,
        format!("moment torsion exact for d <= 6: {exact_ok}; exponential rel err {exp_err:.2e} (<= 1e-10); power-triple weight rel err {pow_err:.2e} (<= 1e-12)"),
    ));
    report.notes.push("check 1: moment torsion, 2: exponential torsion, 3: power-triple weight".into());
    Ok(report)
}

fn offspring_factorization(cfg: &ExperimentConfig) -> Result<ExperimentReport> {
    let trials = cfg.trials.unwrap_or(1000);
    let samples = cfg.samples.unwrap_or(10_000);
    let mut r = rng::stream(cfg.seed, 0);
    let (mut comp_err, mut tors_err) = (0.0f64, 0.0f64);
    for _ in 0..trials {
        let d = r.random_range(2..=5usize);
        let a = sorted_distinct(&mut r, d, -2.0, 2.0, 0.1);
        let h: Vec<f64> = (0..d - 1).map(|_| r.random_range(0.0..1.0)).collect();
        let t = r.random_range(0.0..1.0);
        let curve = Curve::new(Family::ExpParam { rates: a.clone() }, Domain::closed(0.0, 1.0 + d as f64))?;
        let off = offspring(OffspringSpec::new(curve.clone(), h.clone()))?;
        let k = kappa(&h);
        let e: Vec<f64> = a.iter().map(|ai| k.iter().map(|kj| (ai * kj).exp()).sum()).collect();
        let g = off.point(t)?;
        let base = curve.point(t)?;
        comp_err = comp_err.max(max_rel(g.iter().zip(&base).zip(&e).map(|((gi, bi), ei)| (*gi, bi * ei))));
        let expected = torsion(&curve, t)? * e.iter().product::<f64>();
        tors_err = tors_err.max(max_rel(std::iter::once((torsion(&off, t)?, expected))));
    }

    let blocks: Vec<f64> = rng::blocks(samples)
        .into_par_iter()
        .map(|(idx, n)| {
            let mut r = rng::stream(cfg.seed, 1 + idx);
            let mut worst = 0.0f64;
            for _ in 0..n {
                let d = r.random_range(2..=5usize);
                let m = r.random_range(1..d);
                let mut a: Vec<f64> = (0..m).map(|_| -r.random_range(0.1..3.0)).collect();
                a.extend((m..d).map(|_| r.random_range(0.1..3.0)));
                a.sort_by(f64::total_cmp);
                if a.windows(2).any(|w| w[1] - w[0] < 1e-3) {
                    continue;
                }
                let h: Vec<f64> = (0..d - 1).map(|_| r.random_range(0.0..1.0)).collect();
                let curve = Curve::new(Family::ExpParam { rates: a }, Domain::closed(0.0, 1.0 + d as f64))?;
                worst = worst.max(q_ratio(&curve, &h)?);
            }
            Ok(worst)
        })
        .collect::<Result<_>>()?;
    let q_max = blocks.into_iter().fold(0.0, f64::max);

    let mut report = ExperimentReport::new("offspring", &["trials", "component_rel_err", "torsion_rel_err", "q_max"]);
    report.push_row(vec![trials as f64, comp_err, tors_err, q_max]);
    report.verdicts.push(Verdict::new(
        Criterion::A4,
        comp_err <= 1e-12 && tors_err <= 1e-10 && q_max <= 1.0 + 1e-12,
        format!("factorization rel err {comp_err:.2e} (<= 1e-12), torsion rel err {tors_err:.2e} (<= 1e-10), max Q(h) {q_max:.6} over {samples} mixed-sign samples (<= 1)"),
    ));
    Ok(report)
}

fn positivity(cfg: &ExperimentConfig) -> Result<ExperimentReport> {
    let samples = cfg.samples.unwrap_or(100_000);
    let trials = cfg.trials.unwrap_or(10_000);
    let mut report = ExperimentReport::new("positivity", &["d", "samples", "floor", "nonpositive"]);
    let mut detail = Vec::new();

    let mut tp_ok = true;
    for d in 2..=4usize {
        let b = tp_battery(d, samples, cfg.seed ^ ((d as u64) << 48))?;
        report.push_row(vec![d as f64, samples as f64, b.floor, b.nonpositive as f64]);
        tp_ok &= b.nonpositive == 0 && b.floor > 0.0;
        if d == 2 {
            tp_ok &= b.floor >= 1.0 - 1e-12;
        }
        detail.push(format!("d={d} floor {:.4e}", b.floor));
    }

    let mut r = rng::stream(cfg.seed, 0);
    let mut one_err = 0.0f64;
    let mut shift_err = 0.0f64;
    for _ in 0..1000 {
        let v = tp_ratio(&ExpMatrixSpec::new(vec![r.random_range(-5.0..5.0)], vec![r.random_range(-5.0..5.0)])?)?;
        one_err = one_err.max((v - 1.0).abs());
        let d = r.random_range(2..=4usize);
        let a = sorted_distinct(&mut r, d, -3.0, 3.0, 1e-3);
        let s = sorted_distinct(&mut r, d, -3.0, 3.0, 1e-3);
        let base = tp_ratio(&ExpMatrixSpec::new(a.clone(), s.clone())?)?;
        let (ca, cs) = (r.random_range(-4.0..4.0), r.random_range(-4.0..4.0));
        let moved = tp_ratio(&ExpMatrixSpec::new(
            a.iter().map(|x| x + ca).collect(),
            s.iter().map(|x| x + cs).collect(),
        )?)?;
        shift_err = shift_err.max((moved - base).abs() / base);
    }
    tp_ok &= one_err <= 1e-15 && shift_err <= 1e-10;
    detail.push(format!("d=1 deviation {one_err:.1e}, shift rel err {shift_err:.1e}"));
    report.verdicts.push(Verdict::new(Criterion::A5, tp_ok, detail.join("; ")));

    let rates = [-1.0, 0.5, 2.0];
    let f1 = jacobian_floor(&rates, trials, cfg.seed)?;
    let f2 = jacobian_floor(&rates, trials, cfg.seed.wrapping_add(1))?;
    let stable = (f1.floor - f2.floor).abs() <= 0.2 * f1.floor.min(f2.floor);
    report.verdicts.push(Verdict::new(
        Criterion::A5,
        f1.nonpositive == 0 && f2.nonpositive == 0 && f1.floor > 0.0 && stable,
        format!("Jacobian floor {:.4} / {:.4} across two seeds (within 20%: {stable})", f1.floor, f2.floor),
    ));

    let moment = Curve::moment(3)?;
    let power = Curve::power_triple(1.5, 3.5)?.with_domain(Domain::closed(0.5, 2.0))?;
    let jm = check_jacobian_delta(&moment, trials, cfg.seed)?;
    let jp = check_jacobian_delta(&power, trials, cfg.seed)?;
    report.verdicts.push(Verdict::new(
        Criterion::A5,
        jm.pass && jp.pass,
        format!(
            "J >= (delta/2) V: moment min ratio {:.6} (delta {}), power triple on [0.5, 2] min ratio {:.4} (delta {:.4})",
            jm.min_ratio, jm.delta, jp.min_ratio, jp.delta
        ),
    ));

    let inj_m = injectivity_probe(&moment, samples, cfg.seed)?;
    let inj_p = injectivity_probe(&Curve::power_triple(1.5, 3.5)?, samples, cfg.seed)?;
    let mut fd_err = 0.0f64;
    let exp = Curve::new(Family::ExpParam { rates: rates.to_vec() }, Domain::closed(0.0, 5.0))?;
    for _ in 0..10 {
        let t = r.random_range(0.0..1.0);
        let h = [r.random_range(0.05..1.5), r.random_range(0.05..1.5)];
        let j = offspring_jacobian(&exp, t, &h)?;
        fd_err = fd_err.max((offspring_jacobian_fd(&exp, t, &h, 1e-5)? - j).abs() / j.abs());
    }
    report.verdicts.push(Verdict::new(
        Criterion::A5,
        inj_m.collisions == 0 && inj_p.collisions == 0 && fd_err <= 1e-6,
        format!(
            "injectivity collisions {} / {} over {samples} triples; finite-difference Jacobian rel err {fd_err:.1e}",
            inj_m.collisions, inj_p.collisions
        ),
    ));
    Ok(report)
}

fn asymptotics(cfg: &ExperimentConfig) -> Result<ExperimentReport> {
    let ks: Vec<u32> = if cfg.k.is_empty() { vec![2, 3] } else { cfg.k.clone() };
    let lambdas: Vec<f64> =
        if cfg.lambda.is_empty() { (4..=14).map(|e| 2f64.powi(e)).collect() } else { cfg.lambda.clone() };
    let eps = cfg.eps.unwrap_or(0.01);
    let mut report = ExperimentReport::new("asymptotics", &["k", "lambda", "remainder", "scaled"]);
    let a2 = alpha_k(2)?;
    let mut verdict_ok = (a2.norm() - PI.sqrt()).abs() <= 1e-10;
    let mut detail = vec![format!("|alpha_2| - sqrt(pi) = {:.1e}", a2.norm() - PI.sqrt())];
    for &k in &ks {
        let eta = if k % 2 == 1 {
            Density::bumps(vec![ScaledBump { tilt: 1.0, ..ScaledBump::new(0.0, 1.0, 1.0) }])?
        } else {
            Density::bump(0.0, 1.0)?
        };
        let ak = alpha_k(k)?;
        let x = vec![0.0; k as usize - 2];
        let mut rem = Vec::new();
        for &lam in &lambdas {
            let i = model_integral(&eta, lam, &x, k, None, eps)?;
            let lead = ak * lam.powf(-1.0 / k as f64);
            let rv = (i.value - lead).norm();
            let scaled = if k == 2 { rv / (lam.ln() / lam) } else { rv * lam.powf(2.0 / k as f64) };
            report.push_row(vec![k as f64, lam, rv, scaled]);
            rem.push(rv);
        }
        if k == 2 {
            let c = report.rows.iter().filter(|r| r[0] == 2.0).map(|r| r[3]).fold(0.0, f64::max);
            verdict_ok &= c.is_finite();
            detail.push(format!("k=2: remainder <= C lambda^-1 log lambda with C = {c:.3e}"));
        } else {
            let fit = fit_exponent(&lambdas, &rem)?;
            let bound = -2.0 / k as f64 + 0.05;
            verdict_ok &= fit.slope <= bound;
            detail.push(format!("k={k}: remainder slope {:.4} (<= {bound:.4})", fit.slope));
            if k == 3 {
                report.fit = Some(fit);
            }
        }
    }
    report.verdicts.push(Verdict::new(Criterion::A6, verdict_ok, detail.join("; ")));
    Ok(report)
}

fn lowerbound(cfg: &ExperimentConfig) -> Result<ExperimentReport> {
    let curve = cfg.curve.clone().unwrap_or(CurveSpec::Moment(3)).build()?;
    let mut opts = GrowthOptions { seed: cfg.seed, ..Default::default() };
    if !cfg.n.is_empty() {
        opts.ns = cfg.n.clone();
    }
    if let Some(s) = cfg.shift {
        opts.shift = s;
    }
    if let Some(e) = cfg.eps {
        opts.eps = e;
    }
    if let Some(s) = cfg.samples {
        opts.samples = s;
    }
    if let Some(t) = cfg.tol {
        opts.tol = t;
    }
    if let Some(b) = cfg.budget {
        opts.max_panels = b;
    }
    let (mut report, _) = growth_experiment(&curve, &opts)?;
    report.plot = Some((0, 2));
    Ok(report)
}

fn lorentz(cfg: &ExperimentConfig) -> Result<ExperimentReport> {
    let trials = cfg.trials.unwrap_or(10_000);
    let holder = weak_holder_battery(trials, cfg.seed);
    let convex = r_convexity_battery(trials, cfg.seed.wrapping_add(1));
    let mut r = rng::stream(cfg.seed, 1 << 40);
    let mut ind_err = 0.0f64;
    let mut eq_err = 0.0f64;
    for _ in 0..1000 {
        let e = random_interval_set(&mut r);
        let p = r.random_range(0.5..10.0);
        let q = if r.random::<bool>() { f64::INFINITY } else { r.random_range(0.5..10.0) };
        let v = lorentz_norm(&StepFunction::indicator(e.clone()), LorentzIndex::new(p, q)?);
        ind_err = ind_err.max((v - e.measure().powf(1.0 / p)).abs() / v);
        let f = random_step(&mut r, 6);
        let fs = rearrangement(&f);
        let total = f.support().measure();
        for v in f.parts().iter().map(|p| p.1.abs()).chain([0.0]) {
            for lv in [v, 0.999 * v] {
                eq_err = eq_err.max((f.distribution(lv) - fs.distribution(lv)).abs() / total.max(f64::MIN_POSITIVE));
            }
        }
    }
    let mut report = ExperimentReport::new("lorentz", &["battery", "trials", "failures", "max_ratio"]);
    report.push_row(vec![1.0, holder.trials as f64, holder.failures as f64, holder.max_ratio]);
    report.push_row(vec![2.0, convex.trials as f64, convex.failures as f64, convex.max_ratio]);
    report.notes.push("battery 1: weak Hoelder, 2: r-convexity".into());
    report.verdicts.push(Verdict::new(
        Criterion::A8,
        holder.failures == 0 && convex.failures == 0 && ind_err <= 1e-12 && eq_err <= 1e-12,
        format!(
            "weak Hoelder failures {}/{} (max ratio {:.4}); r-convexity failures {}/{} (max ratio {:.4}); indicator norm rel err {ind_err:.1e}; equimeasurability err {eq_err:.1e}",
            holder.failures, holder.trials, holder.max_ratio, convex.failures, convex.trials, convex.max_ratio
        ),
    ));
    Ok(report)
}

fn vandermonde(cfg: &ExperimentConfig) -> Result<ExperimentReport> {
    let trials = cfg.trials.unwrap_or(1000);
    let chi = StepFunction::indicator(IntervalSet::interval(0.0, 1.0)?);
    let mut beta_err = 0.0f64;
    for &(a, b) in &[(1.5, 1.5), (1.5, 2.0), (1.2, 1.3), (1.8, 1.1)] {
        let n = vop_mixed_norm_tol(&[chi.clone(), chi.clone()], a, b, 1e-9)?;
        let exact = beta(2.0 - a, a / b + 1.0).powf(1.0 / a);
        beta_err = beta_err.max((n - exact).abs() / exact);
    }
    let points: Vec<(usize, f64, f64, SimplexPoint)> = match (cfg.d.first(), cfg.a, cfg.b) {
        (Some(&d), Some(a), Some(b)) => vec![(d, a, b, SimplexPoint::barycenter(d, a, b)?)],
        (None, None, None) => vec![
            (2, 1.5, 1.5, SimplexPoint::vertex(2, 1.5, 1.5, 0)?),
            (3, 8.0 / 7.0, 8.0 / 7.0, SimplexPoint::barycenter(3, 8.0 / 7.0, 8.0 / 7.0)?),
        ],
        _ => return Err(Error::Argument("vandermonde takes d, a and b together".into())),
    };
    let mut report = ExperimentReport::new(
        "vandermonde",
        &["d", "A", "B", "max_ratio", "final_decile_max", "early_max", "stabilized"],
    );
    let mut stable = true;
    let mut detail = vec![format!("d=2 Beta case rel err {beta_err:.1e} (<= 1e-6)")];
    for (d, a, b, point) in points {
        let rep = check_vandineq(&point, trials, cfg.seed)?;
        stable &= rep.stabilized;
        detail.push(format!(
            "(d, A, B) = ({d}, {a:.4}, {b:.4}): max {:.4}, final decile {:.4}, early {:.4}",
            rep.max_ratio, rep.final_decile_max, rep.early_max
        ));
        report.push_row(vec![
            d as f64,
            a,
            b,
            rep.max_ratio,
            rep.final_decile_max,
            rep.early_max,
            if rep.stabilized { 1.0 } else { 0.0 },
        ]);
    }
    report.verdicts.push(Verdict::new(Criterion::A9, beta_err <= 1e-6 && stable, detail.join("; ")));
    Ok(report)
}
