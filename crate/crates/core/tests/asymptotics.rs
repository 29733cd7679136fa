mod common;

use common::{model, rel};
use proptest::prelude::*;
use zeromass::asymptotics::{
    barycenter, barycenter_of, epsilon_row, epsilon_scan, landscape, tvm_check, vplus_interaction_scan,
};
use zeromass::energy::{default_anchors, EnergyContext, SuperpositionState};
use zeromass::error::Error;
use zeromass::geometry::{distance, Isometry};
use zeromass::math::lin_space;
use zeromass::potential::{make_potential, PotentialParams};
use zeromass::{PotentialFamily, PotentialSpec, QuadratureConfig, QuadratureMethod};

const GRID: [f64; 7] = [8.0, 11.0, 16.0, 23.0, 32.0, 45.0, 64.0];

#[test]
fn interaction_envelope_sandwiches_every_row() {
    let (spec, p) = model();
    let (y0, y) = default_anchors(3);
    let rep = epsilon_scan(spec, p, &GRID[..5], &y0, &y, &QuadratureConfig::default());
    assert!(matches!(rep, Err(Error::InvalidParameter { .. })));
    let rep = epsilon_scan(spec, p, &GRID, &y0, &y, &QuadratureConfig::default()).unwrap();
    let (c4, c3) = (rep.margin("C4").unwrap(), rep.margin("C3").unwrap());
    assert!(c4 > 0.0 && c4 <= c3);
    for row in &rep.rows {
        assert!(row.value > 0.0 && row.error < 1e-6 * row.value);
        assert!(c4 / row.r <= row.value * (1.0 + 1e-15) && row.value <= c3 / row.r * (1.0 + 1e-15));
    }
    assert!(epsilon_scan(spec, p, &GRID[..4], &y0, &y, &QuadratureConfig::default()).is_err());
}

#[test]
fn interaction_is_invariant_under_moving_y_on_the_sphere() {
    let (spec, p) = model();
    let y0 = [1.0, 0.0, 0.0];
    let axis = epsilon_row(spec, p, 8.0, &y0, &[3.0, 0.0, 0.0], &QuadratureConfig::default()).unwrap();
    let mc = QuadratureConfig { method: QuadratureMethod::MonteCarlo, mc_samples: 1_000_000, ..Default::default() };
    for angle in [0.7f64, 1.9, 2.8] {
        let y = [1.0 + 2.0 * angle.cos(), 2.0 * angle.sin(), 0.0];
        let det = epsilon_row(spec, p, 8.0, &y0, &y, &QuadratureConfig::default()).unwrap();
        assert!(rel(det.value, axis.value) < 1e-7);
        let sampled = epsilon_row(spec, p, 8.0, &y0, &y, &mc).unwrap();
        assert!((sampled.value - axis.value).abs() <= 4.0 * sampled.error, "{sampled:?} vs {axis:?}");
        assert!(sampled.seed.is_some());
    }
}

#[test]
fn mean_value_defect_vanishes_at_zero_and_one() {
    let (spec, p) = model();
    let (y0, y) = default_anchors(3);
    let s_grid = [0.0, 0.5, 1.0, 2.0, 4.0];
    let rep = tvm_check(spec, p, 4.0, &s_grid, &[8.0, 16.0], &y0, &y, &QuadratureConfig::default()).unwrap();
    for row in &rep.rows {
        match row.s {
            Some(s) if s == 0.0 || s == 1.0 => assert_eq!(row.value, 0.0),
            Some(_) => assert!(row.value > 0.0 && row.aux.unwrap().is_finite()),
            None => unreachable!(),
        }
    }
    assert!(rep.margin("C_b_est").unwrap().is_finite());
    assert!(tvm_check(spec, p, 4.0, &[5.0], &[8.0], &y0, &y, &QuadratureConfig::default()).is_err());
    assert!(tvm_check(spec, p, 0.5, &[0.2], &[8.0], &y0, &y, &QuadratureConfig::default()).is_err());
}

#[test]
fn zero_potential_has_no_positive_interaction() {
    let (_, p) = model();
    let (y0, y) = default_anchors(3);
    let rep = vplus_interaction_scan(p, &PotentialSpec::zero(3), &GRID, &y0, &y, &QuadratureConfig::default()).unwrap();
    assert!(rep.rows.iter().all(|r| r.value == 0.0));
    assert!(rep.fit("vplus").is_none());
}

#[test]
fn landscape_is_reflection_symmetric_for_a_midpoint_bump() {
    let (spec, p) = model();
    let (y0, y) = default_anchors(3);
    let r = 8.0;
    let params = PotentialParams { center: vec![2.0 * r, 0.0, 0.0], bump_radius: 2.0, ..Default::default() };
    let v = make_potential(PotentialFamily::CompactBump, 3, &params).unwrap();
    let ctx = EnergyContext::new(spec, p, &v, QuadratureConfig::default()).unwrap();
    let grid = lin_space(0.0, 1.0, 21);
    let rep = landscape(&ctx, r, &grid, &y0, &y).unwrap();
    let (i0, i1) = (rep.margin("I_at_0").unwrap(), rep.margin("I_at_1").unwrap());
    assert!(rel(i0, i1) < 1e-8, "{i0} {i1}");
    for k in 0..10 {
        assert!(rel(rep.rows[k].value, rep.rows[20 - k].value) < 1e-8);
    }
    assert_eq!(rep.margin("interior"), Some(1.0));
    let short = lin_space(0.0, 1.0, 20);
    assert!(landscape(&ctx, r, &short, &y0, &y).is_err());
    let skewed: Vec<f64> = lin_space(0.0, 1.0, 22);
    assert!(landscape(&ctx, r, &skewed, &y0, &y).is_err());
}

#[test]
fn barycenter_of_radial_and_translated_bumps() {
    let (_, p) = model();
    let cfg = QuadratureConfig::default();
    let origin = [0.0; 3];
    let b = barycenter_of(p, &[(1.0, &origin)], &cfg).unwrap();
    assert!(b.iter().all(|x| x.abs() < 1e-10), "{b:?}");
    let z = [3.0, 0.0, 0.0];
    let b = barycenter_of(p, &[(1.0, &z)], &cfg).unwrap();
    assert!(distance(&b, &z) < 1e-10, "{b:?}");
    assert!(matches!(barycenter_of(p, &[(0.0, &z)], &cfg), Err(Error::ZeroState)));
}

#[test]
fn symmetric_superposition_centres_on_the_midpoint() {
    let (_, p) = model();
    let st = SuperpositionState::on_axis(p, 0.5, 8.0, 1.3).unwrap();
    let b = barycenter(&st, &QuadratureConfig::default()).unwrap();
    assert!(distance(&b, &[16.0, 0.0, 0.0]) < 1e-8, "{b:?}");
    let lopsided = SuperpositionState::on_axis(p, 0.8, 8.0, 1.0).unwrap();
    let b = barycenter(&lopsided, &QuadratureConfig::default()).unwrap();
    assert!(b[0] > 8.0 && b[0] < 16.0);
}

#[test]
fn monte_carlo_barycenter_agrees_with_the_axis_rule() {
    let (_, p) = model();
    let a = [0.0, 0.0, 0.0];
    let b = [6.0, 0.0, 0.0];
    let c = [0.0, 6.0, 0.0];
    let mc = QuadratureConfig { mc_samples: 400_000, method: QuadratureMethod::MonteCarlo, ..Default::default() };
    let tri = barycenter_of(p, &[(1.0, &a), (1.0, &b), (1.0, &c)], &mc).unwrap();
    assert!((tri[0] - tri[1]).abs() < 0.05 && tri[2].abs() < 0.05, "{tri:?}");
    let d = [15.0, 0.0, 0.0];
    let bumps = [(1.0, &a[..]), (0.6, &b[..]), (0.8, &d[..])];
    let sampled = barycenter_of(p, &bumps, &mc).unwrap();
    let exact = barycenter_of(p, &bumps, &QuadratureConfig::default()).unwrap();
    assert!(distance(&sampled, &exact) < 0.05, "{sampled:?} vs {exact:?}");
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(3))]

    #[test]
    fn barycenter_is_equivariant(shift in prop::array::uniform3(-20.0f64..20.0), m in prop::array::uniform9(-1.0f64..1.0), lambda in 0.2f64..0.8) {
        let (_, p) = model();
        let Ok(rot) = Isometry::rotation_from(&m, 3) else { return Ok(()) };
        let cfg = QuadratureConfig::default();
        let (c0, cy) = ([8.0, 0.0, 0.0], [24.0, 0.0, 0.0]);
        let base = barycenter_of(p, &[(lambda, &c0), (1.0 - lambda, &cy)], &cfg).unwrap();
        let t = Isometry::translation(&shift);
        let moved = barycenter_of(p, &[(lambda, &t.apply(&c0)), (1.0 - lambda, &t.apply(&cy))], &cfg).unwrap();
        prop_assert!(distance(&moved, &t.apply(&base)) < 1e-8);
        let turned = barycenter_of(p, &[(lambda, &rot.apply(&c0)), (1.0 - lambda, &rot.apply(&cy))], &cfg).unwrap();
        prop_assert!(distance(&turned, &rot.apply(&base)) < 1e-8);
    }
}
