use curvelab_core::density::ScaledBump;
use curvelab_core::lowerbound::{build_fn, BumpFamily};
use curvelab_core::osc::extension;
use curvelab_core::positivity::{tp_ratio, tp_ratio_lu, tp_ratio_series, ExpMatrixSpec};
use curvelab_core::{Curve, Density};
use proptest::prelude::*;

fn increasing(d: usize) -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(-3.0f64..3.0, d).prop_filter_map("ties", |mut v| {
        v.sort_by(f64::total_cmp);
        v.windows(2).all(|w| w[1] - w[0] > 1e-3).then_some(v)
    })
}

fn pair() -> impl Strategy<Value = (Vec<f64>, Vec<f64>)> {
    (2usize..=5).prop_flat_map(|d| (increasing(d), increasing(d)))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn tp_ratio_positive_and_symmetric((a, s) in pair()) {
        let v = tp_ratio(&ExpMatrixSpec::new(a.clone(), s.clone()).unwrap()).unwrap();
        prop_assert!(v > 0.0);
        let w = tp_ratio(&ExpMatrixSpec::new(s, a).unwrap()).unwrap();
        prop_assert!((v - w).abs() <= 1e-9 * v);
    }

    #[test]
    fn tp_ratio_invariant_under_reciprocal_scaling((a, s) in pair(), c in 0.3f64..3.0) {
        let v = tp_ratio(&ExpMatrixSpec::new(a.clone(), s.clone()).unwrap()).unwrap();
        let ca: Vec<f64> = a.iter().map(|x| c * x).collect();
        let sc: Vec<f64> = s.iter().map(|x| x / c).collect();
        let w = tp_ratio(&ExpMatrixSpec::new(ca, sc).unwrap()).unwrap();
        prop_assert!((v - w).abs() <= 1e-9 * v);
    }

    #[test]
    fn tp_routes_agree_on_moderate_inputs((a, s) in pair()) {
        let a: Vec<f64> = a.iter().map(|x| x / 3.0).collect();
        let spec = ExpMatrixSpec::new(a, s).unwrap();
        let (x, y) = (tp_ratio_series(&spec), tp_ratio_lu(&spec).unwrap());
        prop_assert!((x - y).abs() <= 1e-6 * x, "{} vs {}", x, y);
    }
}

#[test]
fn extension_is_linear_over_disjoint_bumps() {
    let curve = Curve::moment(3).unwrap();
    let fam = BumpFamily::new(3, 3).unwrap();
    let f = build_fn(&fam).unwrap();
    for xi in [[40.0, -300.0, 900.0], [1e3, 2e3, -5e3]] {
        let whole = extension(&curve, &f, &xi, 1e-12).unwrap().value;
        let parts: num_complex::Complex64 = fam
            .bumps()
            .into_iter()
            .map(|b: ScaledBump| extension(&curve, &Density::Bumps(vec![b]), &xi, 1e-12).unwrap().value)
            .sum();
        assert!((whole - parts).norm() < 1e-10, "{whole} vs {parts}");
    }
}

#[test]
fn extension_at_zero_frequency_is_total_mass() {
    let curve = Curve::moment(3).unwrap();
    let fam = BumpFamily::new(2, 3).unwrap();
    let f = build_fn(&fam).unwrap();
    let mass: f64 = fam.indices().map(|n| 0.225 * 2f64.powf(n as f64 * (1.0 / 7.0 - 1.0))).sum();
    let v = extension(&curve, &f, &[0.0; 3], 1e-13).unwrap().value;
    assert!((v.re - mass).abs() < 1e-12 && v.im == 0.0);
}
