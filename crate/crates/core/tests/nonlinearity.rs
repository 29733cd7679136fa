mod common;

use proptest::prelude::*;
use zeromass::math::log_space;
use zeromass::NonlinearitySpec;

fn specs() -> impl Strategy<Value = NonlinearitySpec> {
    (3usize..=5).prop_flat_map(|n| {
        let crit = 2.0 * n as f64 / (n as f64 - 2.0);
        (Just(n), 2.05..crit - 0.05, crit + 0.05..crit + 6.0)
    })
    .prop_map(|(n, p, q)| NonlinearitySpec::new(n, p, q).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn odd_extension(spec in specs(), s in 1e-3f64..50.0) {
        let (big_f, f, df) = spec.eval(s).unwrap();
        let (big_fm, fm, dfm) = spec.eval(-s).unwrap();
        prop_assert_eq!(fm, -f);
        prop_assert_eq!(big_fm, big_f);
        prop_assert_eq!(dfm, df);
    }

    #[test]
    fn f_over_s_increases(spec in specs(), a in 1e-3f64..100.0, step in 1e-3f64..1.0) {
        let b = a * (1.0 + step);
        prop_assert!(spec.f(b) / b > spec.f(a) / a);
    }

    #[test]
    fn log_derivative_is_non_increasing(spec in specs(), a in 1e-4f64..1e4, step in 1e-4f64..1.0) {
        let b = a * (1.0 + step);
        let (ga, gb) = (spec.logarithmic_derivative(a).unwrap(), spec.logarithmic_derivative(b).unwrap());
        prop_assert!(gb <= ga * (1.0 + 1e-12));
    }

    #[test]
    fn growth_bound_holds_off_the_audit_grid(spec in specs(), xs in prop::collection::vec(1e-4f64..1e4, 50)) {
        let audit = spec.growth_audit(&log_space(1e-4, 1e4, 400)).unwrap();
        prop_assert!(audit.passed(), "{:?}", audit.failures);
        let (p, q) = (spec.p(), spec.q());
        for s in xs {
            let env = s.powf(p - 1.0).min(s.powf(q - 1.0));
            prop_assert!(spec.f(s).abs() <= audit.a1_est * env * (1.0 + 1e-9));
        }
    }

    #[test]
    fn primitive_is_the_integral_of_f(spec in specs(), s in 0.01f64..20.0) {
        let oracle = common::simpson(|t| spec.f(t), 0.0, s, 4000);
        let got = spec.primitive(s);
        prop_assert!((got - oracle).abs() <= 1e-9 * oracle.max(1e-300), "{} vs {}", got, oracle);
    }
}

#[test]
fn model_audit_matches_exponent_arithmetic() {
    let spec = NonlinearitySpec::model();
    let audit = spec.growth_audit(&log_space(1e-4, 1e4, 400)).unwrap();
    assert!(audit.passed());
    assert!(audit.monotone_ok);
    assert!(audit.theta_est >= 4.0 - 1e-9, "{}", audit.theta_est);
    assert!(audit.g_limits.1 < 5.0 && 5.0 < audit.g_limits.0);
    assert!((audit.g_limits.0 - 7.0).abs() < 1e-6 && (audit.g_limits.1 - 3.0).abs() < 1e-6);
}

#[test]
fn logarithmic_derivative_at_one() {
    let spec = NonlinearitySpec::new(4, 3.0, 5.5).unwrap();
    let g = spec.logarithmic_derivative(1.0).unwrap();
    assert!((g - (3.0 + 5.5 - 2.0) / 2.0).abs() < 1e-14);
    let (_, f, df) = spec.eval(1.0).unwrap();
    assert!((g - df / f).abs() < 1e-14);
    assert!(spec.logarithmic_derivative(0.0).is_err());
}

#[test]
fn superadditivity_constant_is_stable_under_refinement() {
    let spec = NonlinearitySpec::model();
    let nu = spec.default_nu();
    assert_eq!(nu, 4.0);
    let coarse = spec.lemma_new_constant(2.0, nu, 100).unwrap();
    let fine = spec.lemma_new_constant(2.0, nu, 200).unwrap();
    assert!(coarse.is_finite() && fine.is_finite());
    assert!((fine - coarse).abs() <= 0.05 * fine.max(coarse));
    for s in [0.0, 0.3, 1.7] {
        assert_eq!(spec.superadditivity_defect(0.0, s), 0.0);
    }
    assert!(spec.lemma_new_constant(2.0, 6.0, 100).is_err());
    assert!(spec.lemma_new_constant(2.0, 0.0, 100).is_err());
}

#[test]
fn non_finite_input_is_rejected() {
    let spec = NonlinearitySpec::model();
    assert!(spec.eval(f64::NAN).is_err());
    assert!(spec.eval(f64::INFINITY).is_err());
}
