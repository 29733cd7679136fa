mod common;

use common::{model, rel};
use zeromass::radial_ode::{decay_report, shoot, tail_convergence, StepControl};
use zeromass::{RadialProfile, ShotKind};

#[test]
fn profile_is_positive_and_strictly_decreasing() {
    let (_, p) = model();
    assert!(p.u().iter().all(|&u| u > 0.0));
    assert!(p.u().windows(2).all(|w| w[1] < w[0]));
    assert!(p.du().iter().all(|&d| d <= 0.0));
    assert_eq!(p.du()[0], 0.0);
    assert_eq!(p.r()[0], 0.0);
}

#[test]
fn decay_exponents_and_envelope() {
    let (_, p) = model();
    let d = decay_report(p).unwrap();
    assert!((d.exponent_u.slope + 1.0).abs() < 0.05, "{:?}", d.exponent_u);
    assert!((d.exponent_du.slope + 2.0).abs() < 0.1, "{:?}", d.exponent_du);
    assert!(d.a2_est > 0.0 && d.a2_est <= d.a3_est);
    assert!(d.tail_c > 0.0 && d.tail_c.is_finite());
}

#[test]
fn tail_constant_holds_over_the_last_decade() {
    let (_, p) = model();
    let c = p.tail_c();
    for (&r, &u) in p.r().iter().zip(p.u()) {
        if r >= 0.1 * p.r_max() {
            assert!(rel(r * u, c) < 1e-2);
        }
    }
    let fit = tail_convergence(p).unwrap();
    assert!(rel(fit.intercept, c) < 1e-3);
}

#[test]
fn extrapolation_follows_the_power_law() {
    let (_, p) = model();
    let r = 2.0 * p.r_max();
    assert!(rel(p.value(r), p.tail_c() / r) < 1e-12);
    assert_eq!(p.value(0.0), p.amplitude());
    let x = [3.0, 4.0, 0.0];
    let c = [3.0, 0.0, 0.0];
    assert!(rel(p.profile_value(&x, &c), p.value(4.0)) < 1e-15);
}

#[test]
fn ode_residual_is_small() {
    let (spec, p) = model();
    let scale = spec.f(p.amplitude());
    assert!(p.max_ode_residual(spec) < 1e-6 * scale);
}

#[test]
fn nehari_and_pohozaev_identities() {
    let (spec, p) = model();
    let g = p.gradient_sq().unwrap().value;
    let fu = p.fu_integral(spec).unwrap().value;
    let big_f = p.primitive_integral(spec).unwrap().value;
    let c0 = 0.5 * g - big_f;
    assert!(rel(fu, g) < 5e-3);
    assert!((c0 - g / 3.0).abs() / c0 < 5e-3);
}

#[test]
fn amplitudes_around_the_ground_state_split() {
    let (spec, p) = model();
    let ctl = StepControl::default();
    let (_, lo) = shoot(spec, p.amplitude() * 0.9, &ctl).unwrap();
    let (_, hi) = shoot(spec, p.amplitude() * 1.1, &ctl).unwrap();
    assert_ne!(lo.overshoots(), hi.overshoots());
    let (_, tiny) = shoot(spec, 1e-6, &ctl).unwrap();
    assert_ne!(tiny.kind, ShotKind::FastCandidate);
}

#[test]
fn samples_round_trip_through_from_samples() {
    let (spec, p) = model();
    let q = RadialProfile::from_samples(spec, p.r().to_vec(), p.u().to_vec(), p.du().to_vec(), p.tail_c()).unwrap();
    for r in [0.0, 0.37, 2.5, 17.0, 900.0, 2e4] {
        assert!(rel(q.value(r), p.value(r)) < 1e-14, "{r}");
    }
}

#[test]
fn bad_amplitude_is_rejected() {
    let (spec, _) = model();
    assert!(shoot(spec, 0.0, &StepControl::default()).is_err());
    assert!(shoot(spec, f64::NAN, &StepControl::default()).is_err());
}
