//! Cache key of a ground-state solve.

use sha2::{Digest, Sha256};
use zeromass::radial_ode::StepControl;
use zeromass::NonlinearitySpec;

/// First 16 hex digits of a SHA-256 over `(N, p, q)`, every step-control
/// field and the library version. Floats enter by their bit patterns.
pub fn profile_key(spec: &NonlinearitySpec, ctl: &StepControl) -> String {
    let mut h = Sha256::new();
    h.update(zeromass::VERSION.as_bytes());
    h.update((spec.dimension() as u64).to_le_bytes());
    for x in [spec.p(), spec.q(), ctl.rtol, ctl.atol, ctl.r_max, ctl.slow_factor, ctl.slow_after, ctl.amplitude_rtol, ctl.sweep_min, ctl.sweep_max] {
        h.update(x.to_bits().to_le_bytes());
    }
    h.update((ctl.sweep_points as u64).to_le_bytes());
    h.finalize()[..8].iter().map(|b| format!("{b:02x}")).collect()
}
