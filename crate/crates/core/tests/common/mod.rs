#![allow(dead_code)]

use std::sync::OnceLock;

use zeromass::radial_ode::{ground_state, StepControl};
use zeromass::{NonlinearitySpec, RadialProfile};

pub fn model() -> &'static (NonlinearitySpec, RadialProfile) {
    static M: OnceLock<(NonlinearitySpec, RadialProfile)> = OnceLock::new();
    M.get_or_init(|| {
        let spec = NonlinearitySpec::model();
        let profile = ground_state(&spec, &StepControl::default()).expect("ground state");
        (spec, profile)
    })
}

pub fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs().max(f64::MIN_POSITIVE)
}

/// Composite Simpson rule on `[a, b]` with `n` (even) panels.
pub fn simpson<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, n: usize) -> f64 {
    let h = (b - a) / n as f64;
    let mut s = f(a) + f(b);
    for i in 1..n {
        let x = a + i as f64 * h;
        s += if i % 2 == 1 { 4.0 } else { 2.0 } * f(x);
    }
    s * h / 3.0
}
