mod common;

use common::{model, rel};
use zeromass::energy::{energy, ground_level, EnergyContext, SuperpositionState};
use zeromass::math::lin_space;
use zeromass::potential::{make_potential, PotentialParams};
use zeromass::quadrature::two_center_integral;
use zeromass::{PotentialFamily, PotentialSpec, QuadratureConfig};

fn power_decay() -> PotentialSpec {
    make_potential(PotentialFamily::PowerDecay, 3, &PotentialParams::default()).unwrap()
}

#[test]
fn report_fields_recompose() {
    let (spec, p) = model();
    let v = power_decay();
    let ctx = EnergyContext::new(spec, p, &v, QuadratureConfig::default()).unwrap();
    for (lambda, r, t) in [(0.5, 8.0, 1.7), (0.2, 16.0, 0.9), (1.0, 4.0, 1.1)] {
        let st = SuperpositionState::on_axis(p, lambda, r, t).unwrap();
        let e = ctx.energy(&st).unwrap();
        assert_eq!(e.i_v, e.gradient_sq / 2.0 + e.potential_term / 2.0 - e.f_term);
        assert_eq!(e.j_v, e.gradient_sq + e.potential_term - e.fu_term);
        assert!(e.error < 1e-6 * e.gradient_sq, "{e:?}");
        assert_eq!(energy(spec, &st, &v, &QuadratureConfig::default()).unwrap(), e);
    }
}

#[test]
fn zero_amplitude_is_zero_energy() {
    let (spec, p) = model();
    let v = power_decay();
    let st = SuperpositionState::on_axis(p, 0.5, 8.0, 0.0).unwrap();
    let e = energy(spec, &st, &v, &QuadratureConfig::default()).unwrap();
    assert_eq!((e.i_v, e.j_v), (0.0, 0.0));
}

#[test]
fn decomposition_matches_direct_two_center_integrals() {
    let (spec, p) = model();
    let zero = PotentialSpec::zero(3);
    let ctx = EnergyContext::new(spec, p, &zero, QuadratureConfig::default()).unwrap();
    let (r, t) = (4.0, 1.6);
    let st = SuperpositionState::on_axis(p, 0.5, r, t).unwrap();
    let e = ctx.energy(&st).unwrap();
    let (c0, cy) = st.centers();
    let d = 2.0 * r;
    let cfg = QuadratureConfig { tol: 1e-10, ..Default::default() };
    let big_f = two_center_integral(|a, b| spec.primitive(0.5 * t * (p.value(a) + p.value(b))), &c0, &cy, &cfg).unwrap();
    let grad = two_center_integral(
        |a, b| {
            let (da, db) = (p.derivative(a), p.derivative(b));
            let cos = if a > 0.0 && b > 0.0 { (a * a + b * b - d * d) / (2.0 * a * b) } else { 0.0 };
            0.25 * t * t * (da * da + db * db + 2.0 * da * db * cos)
        },
        &c0,
        &cy,
        &cfg,
    )
    .unwrap();
    assert!(rel(e.f_term, big_f.value) < 1e-7, "{} vs {:?}", e.f_term, big_f);
    assert!(rel(e.gradient_sq, grad.value) < 1e-7, "{} vs {:?}", e.gradient_sq, grad);
}

#[test]
fn fibering_map_peaks_at_the_projection() {
    let (spec, p) = model();
    let v = power_decay();
    let ctx = EnergyContext::new(spec, p, &v, QuadratureConfig::default()).unwrap();
    let st = SuperpositionState::on_axis(p, 0.3, 16.0, 1.0).unwrap();
    let geom = ctx.geometry(&st).unwrap();
    let t_star = ctx.nehari_project_on(&geom, 0.3, 1.0).unwrap();
    let grid = lin_space(0.0, 3.0, 61);
    let curve = ctx.fibering_curve_on(&geom, 0.3, t_star, &grid).unwrap();
    assert_eq!(curve.points[0].1, 0.0);
    assert!((curve.argmax - 1.0).abs() <= 0.05 + 1e-12, "{}", curve.argmax);
    assert!(curve.unimodal);
}

#[test]
fn ground_state_maximises_its_fiber() {
    let (spec, p) = model();
    let zero = PotentialSpec::zero(3);
    let ctx = EnergyContext::new(spec, p, &zero, QuadratureConfig::default()).unwrap();
    let c0 = ctx.c0().unwrap();
    assert!(c0.c0 > 0.0 && !c0.flagged);
    assert!(rel(c0.c0, c0.gradient_sq / 3.0) < 1e-2);
    let geom = ctx.geometry(&SuperpositionState::on_axis(p, 1.0, 8.0, 1.0).unwrap()).unwrap();
    for t in [0.5, 2.0] {
        assert!(ctx.energy_on(&geom, 1.0, t).unwrap().i_v < c0.c0);
    }
    assert_eq!(ground_level(spec, p).unwrap(), c0);
}

#[test]
fn nehari_lower_bound_with_the_audited_theta() {
    let (spec, p) = model();
    let theta = spec.growth_audit(&zeromass::math::log_space(1e-4, 1e4, 400)).unwrap().theta_est;
    let v = power_decay();
    let ctx = EnergyContext::new(spec, p, &v, QuadratureConfig::default()).unwrap();
    for (lambda, r, t) in [(0.5, 8.0, 0.3), (0.5, 8.0, 2.5), (0.1, 32.0, 1.0), (1.0, 4.0, 4.0)] {
        let e = ctx.energy(&SuperpositionState::on_axis(p, lambda, r, t).unwrap()).unwrap();
        let norm_sq = e.gradient_sq + e.potential_term;
        assert!(e.i_v - e.j_v / theta >= (0.5 - 1.0 / theta) * norm_sq - 1e-9 * norm_sq);
    }
}

#[test]
fn far_bumps_decouple_at_the_interaction_rate() {
    let (spec, p) = model();
    let zero = PotentialSpec::zero(3);
    let ctx = EnergyContext::new(spec, p, &zero, QuadratureConfig::default()).unwrap();
    let c0 = ctx.c0().unwrap().c0;
    let mut last_gap = f64::INFINITY;
    let mut last_j = f64::INFINITY;
    for r in [8.0, 16.0, 32.0, 64.0] {
        let st = SuperpositionState::on_axis(p, 0.5, r, 2.0).unwrap();
        let geom = ctx.geometry(&st).unwrap();
        let e = ctx.energy_on(&geom, 0.5, 2.0).unwrap();
        let eps = geom.cross_gradient.value;
        let gap = (e.i_v - 2.0 * c0).abs();
        assert!(gap < last_gap && e.j_v.abs() < last_j);
        assert!(gap <= 2.0 * eps, "R {r}: gap {gap} eps {eps}");
        assert!(e.j_v.abs() <= 15.0 * eps, "R {r}: J {} eps {eps}", e.j_v);
        if last_j.is_finite() {
            let halving = e.j_v.abs() / last_j;
            assert!((0.4..0.6).contains(&halving), "{halving}");
        }
        last_gap = gap;
        last_j = e.j_v.abs();
    }
}

#[test]
fn symmetric_weights_give_symmetric_energies() {
    let (spec, p) = model();
    let zero = PotentialSpec::zero(3);
    let ctx = EnergyContext::new(spec, p, &zero, QuadratureConfig::default()).unwrap();
    let st = SuperpositionState::on_axis(p, 0.5, 8.0, 1.0).unwrap();
    let geom = ctx.pair_geometry(&st).unwrap();
    for lambda in [0.1, 0.25, 0.4] {
        let a = ctx.nehari_project_on(&geom, lambda, 1.0).unwrap();
        let b = ctx.nehari_project_on(&geom, 1.0 - lambda, 1.0).unwrap();
        assert!(rel(a, b) < 1e-9);
    }
}

#[test]
fn level_estimate_brackets_c0() {
    let (spec, p) = model();
    let (y0, y) = zeromass::energy::default_anchors(3);
    let grid = [8.0, 16.0, 32.0, 64.0];
    let zero = PotentialSpec::zero(3);
    let ctx0 = EnergyContext::new(spec, p, &zero, QuadratureConfig::default()).unwrap();
    let c0 = ctx0.c0().unwrap().c0;
    let flat = ctx0.cv_upper_estimate(&grid, &y0, &y).unwrap();
    assert!(rel(flat.value, c0) < 1e-8, "{} vs {c0}", flat.value);
    let v = power_decay();
    let ctx = EnergyContext::new(spec, p, &v, QuadratureConfig::default()).unwrap();
    let est = ctx.cv_upper_estimate(&grid, &y0, &y).unwrap();
    assert!(est.value >= c0 * (1.0 - 1e-8));
    assert!(est.rows.windows(2).all(|w| w[1].2 < w[0].2));
}

#[test]
fn invalid_states_are_rejected() {
    let (_, p) = model();
    assert!(SuperpositionState::on_axis(p, 1.5, 8.0, 1.0).is_err());
    assert!(SuperpositionState::on_axis(p, 0.5, 0.5, 1.0).is_err());
    assert!(SuperpositionState::on_axis(p, 0.5, 8.0, -1.0).is_err());
    assert!(SuperpositionState::new(p, 0.5, &[1.0, 0.0, 0.0], &[2.0, 0.0, 0.0], 8.0, 1.0).is_err());
    assert!(SuperpositionState::new(p, 0.5, &[2.0, 0.0, 0.0], &[4.0, 0.0, 0.0], 8.0, 1.0).is_err());
    assert!(SuperpositionState::new(p, 0.5, &[1.0, 0.0, 0.0], &[1.0, 2.0, 0.0], 8.0, 1.0).is_ok());
}
