use num_complex::Complex64;
use proptest::prelude::*;
use std::sync::{Arc, OnceLock};
use twistl::experiment::{pick_primitive, run_lav_experiment, ExperimentConfig, Report};
use twistl::gauss::HeckeFieldContext;
use twistl::lseries::{afe_lvalue, lav, AFEConfig, LFunction, Newform};
use twistl::nf::{builtin_field, Ideal};
use twistl::rayclass::{rcg_build, RayClassGroup};
use twistl::verify::oracle_twists;

fn delta_lf() -> &'static LFunction {
    static LF: OnceLock<LFunction> = OnceLock::new();
    LF.get_or_init(|| {
        let f = builtin_field("Q").unwrap();
        LFunction::new(Arc::new(Newform::delta(1 << 16)), &f, 400).unwrap()
    })
}

fn rcg5(n: u32) -> RayClassGroup {
    let f = Arc::new(builtin_field("Q").unwrap());
    let pr = Ideal::principal(&f, &f.from_int(5)).unwrap();
    rcg_build(f, 5, &pr, n).unwrap()
}

#[test]
fn central_value_is_y_invariant() {
    let lf = delta_lf();
    let s = Complex64::new(6.0, 0.0);
    for t in oracle_twists().unwrap() {
        let y0 = lf.twisted_level(t.q).sqrt();
        let vals: Vec<Complex64> = [0.3, 0.6, 1.0, 1.7, 3.0]
            .iter()
            .map(|f| afe_lvalue(lf, &t, s, &AFEConfig { y: Some(f * y0), ..Default::default() }).unwrap().value())
            .collect();
        for v in &vals {
            assert!((v - vals[0]).norm() < 1e-9 * vals[0].norm(), "{}: {vals:?}", t.label);
        }
    }
}

#[test]
fn lav_routes_agree_and_orbit_symmetric() {
    let lf = delta_lf();
    let rcg = rcg5(3);
    let ctx = HeckeFieldContext { p: 5, n0: 0 };
    let psi = pick_primitive(&rcg).unwrap();
    let cfg = AFEConfig { y: Some(200.0), ..Default::default() };
    let s = Complex64::new(6.0, 0.0);
    let base = lav(lf, &rcg, &psi, &ctx, s, &cfg, 1e-7).unwrap();
    assert_eq!(base.orbit_size, 20);
    assert!(base.cross_check < 1e-10);
    let route_b = Complex64::new(base.route_b_re, base.route_b_im);
    assert!((route_b - base.value()).norm() < 1e-10);
    for t in [2i64, 3, 7, 24] {
        let other = lav(lf, &rcg, &psi.pow(&rcg, t), &ctx, s, &cfg, 1e-7).unwrap();
        assert!((other.value() - base.value()).norm() < 1e-10, "t = {t}");
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn y_invariance_random_scale(f in 0.4f64..2.5, which in 0usize..3) {
        let lf = delta_lf();
        let t = &oracle_twists().unwrap()[which];
        let s = Complex64::new(6.0, 0.0);
        let y0 = lf.twisted_level(t.q).sqrt();
        let a = afe_lvalue(lf, t, s, &AFEConfig::default()).unwrap().value();
        let b = afe_lvalue(lf, t, s, &AFEConfig { y: Some(f * y0), ..Default::default() }).unwrap().value();
        prop_assert!((a - b).norm() < 1e-9 * a.norm());
    }

    #[test]
    fn config_serde_round_trip(p in prop::sample::select(vec![3u64, 5, 7]), n_max in 1u32..5, a in 1.1f64..2.9) {
        let cfg = ExperimentConfig { p, prime_gen: vec![p as i64], n_max, a, ..Default::default() };
        let back: ExperimentConfig = serde_json::from_str(&serde_json::to_string(&cfg).unwrap()).unwrap();
        prop_assert_eq!(back, cfg);
    }
}

#[test]
fn report_serde_round_trip() {
    let rep = run_lav_experiment(&ExperimentConfig { n_max: 1, ..Default::default() }).unwrap();
    assert_eq!(rep.rows.len(), 1);
    let back: Report = serde_json::from_str(&serde_json::to_string(&rep).unwrap()).unwrap();
    assert_eq!(back, rep);
}

#[test]
fn tighter_cutoffs_stay_within_error_estimate() {
    let lf = delta_lf();
    let s = Complex64::new(6.0, 0.0);
    for t in oracle_twists().unwrap() {
        let loose = afe_lvalue(lf, &t, s, &AFEConfig { tol: 1e-8, ..Default::default() }).unwrap();
        let tight = afe_lvalue(lf, &t, s, &AFEConfig { tol: 1e-14, ..Default::default() }).unwrap();
        assert!(tight.terms_used[0] >= loose.terms_used[0]);
        let diff = (loose.value() - tight.value()).norm();
        assert!(diff <= loose.error_est, "{}: diff {diff:e} > estimate {:e}", t.label, loose.error_est);
    }
}
