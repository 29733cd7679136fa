mod common;

use common::{model, rel, simpson};
use proptest::prelude::*;
use zeromass::error::Error;
use zeromass::math::PI;
use zeromass::potential::{make_potential, PotentialParams};
use zeromass::quadrature::two_center_integral;
use zeromass::{PotentialFamily, PotentialSpec, QuadratureConfig};

#[test]
fn half_dimension_norm_matches_one_dimensional_oracle() {
    let v = make_potential(PotentialFamily::PowerDecay, 3, &PotentialParams::default()).unwrap();
    // r = t/(1-t), t = 1-w²: r²(1+r)^{-4.5} dr = 2w²(1-w²)² dw
    let oracle = 4.0 * PI * simpson(|w| 2.0 * w * w * (1.0 - w * w).powi(2), 0.0, 1.0, 200);
    let audit = v.audit().unwrap();
    assert!(rel(audit.norm_n_half.powf(1.5), oracle) < 1e-8);
    assert_eq!(audit.negative_mass, 0.0);
    assert!(audit.passed());
}

#[test]
fn zero_potential_passes_every_audit() {
    let params = PotentialParams { a0: 0.0, ..Default::default() };
    let v = make_potential(PotentialFamily::PowerDecay, 3, &params).unwrap();
    assert!(v.is_zero());
    let audit = v.audit().unwrap();
    assert!(audit.passed());
    assert_eq!(audit.norm_n_half, 0.0);
    assert_eq!(v, PotentialSpec::zero(3));
}

#[test]
fn negative_part_smallness_is_enforced() {
    for (frac, ok) in [(0.5, true), (0.99, true), (1.5, false)] {
        let p = PotentialParams { negative_fraction: Some(frac), ..Default::default() };
        let v = make_potential(PotentialFamily::SignChanging, 3, &p);
        match v {
            Ok(v) => {
                assert!(ok);
                let audit = v.audit().unwrap();
                assert!(audit.smallness_ok && audit.passed());
                assert!(rel(audit.negative_mass / audit.negative_bound, frac) < 1e-9);
            }
            Err(Error::NegativePartTooLarge { mass, bound }) => {
                assert!(!ok);
                assert!(mass >= bound);
            }
            Err(e) => panic!("{e:?}"),
        }
    }
}

#[test]
fn compact_bump_has_compact_support() {
    let p = PotentialParams { bump_radius: 2.0, ..Default::default() };
    let v = make_potential(PotentialFamily::CompactBump, 3, &p).unwrap();
    assert!(v.radial(0.0) > 0.0);
    assert_eq!(v.radial(2.0), 0.0);
    assert_eq!(v.radial(5.0), 0.0);
    assert!(v.audit().unwrap().passed());
}

#[test]
fn norm_equivalence_on_translated_ground_states() {
    let (_, profile) = model();
    let grad = profile.gradient_sq().unwrap().value;
    let p = PotentialParams { negative_fraction: Some(0.8), ..Default::default() };
    let v = make_potential(PotentialFamily::SignChanging, 3, &p).unwrap();
    let c = v.norm_equivalence_constant().unwrap();
    assert!(c > 0.0 && c < 1.0);
    for shift in [0.0, 0.5, 2.0, 8.0] {
        let center = [shift, 0.0, 0.0];
        let pot = two_center_integral(
            |a, b| v.radial(a) * profile.value(b).powi(2),
            v.center(),
            &center,
            &QuadratureConfig::default(),
        )
        .unwrap();
        assert!(grad + pot.value >= c * grad, "shift {shift}: {} < {}", grad + pot.value, c * grad);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn kappa_floor_is_enforced(n in 3usize..7, kappa in 0.5f64..8.0) {
        let floor = 2.0f64.max(n as f64 - 2.0);
        let r = make_potential(PotentialFamily::PowerDecay, n, &PotentialParams { kappa, ..Default::default() });
        prop_assert_eq!(r.is_ok(), kappa > floor);
    }

    #[test]
    fn positive_and_negative_parts_recompose(x in prop::array::uniform3(-4.0f64..4.0), b in 0.0f64..5.0) {
        let p = PotentialParams { negative_amplitude: Some(b), ..Default::default() };
        let v = make_potential(PotentialFamily::SignChanging, 3, &p).unwrap();
        let d = x.iter().map(|t| t * t).sum::<f64>().sqrt();
        prop_assert_eq!(v.positive_part(d) + v.negative_part(d), v.value(&x));
        prop_assert!(v.positive_part(d) >= 0.0 && v.negative_part(d) <= 0.0);
    }

    #[test]
    fn power_decay_stays_under_its_envelope(x in prop::array::uniform3(-100.0f64..100.0), a0 in 0.0f64..3.0, kappa in 2.1f64..6.0) {
        let v = make_potential(PotentialFamily::PowerDecay, 3, &PotentialParams { a0, kappa, ..Default::default() }).unwrap();
        let d = x.iter().map(|t| t * t).sum::<f64>().sqrt();
        prop_assert!(v.value(&x) <= a0 * (1.0 + d).powf(-kappa) * (1.0 + 1e-12));
    }
}
