use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

pub type Result<T, E = Error> = core::result::Result<T, E>;

/// Errors raised by the toolkit.
///
/// Variants carry enough numbers to be reported verbatim; nothing here is
/// recoverable by retrying with the same inputs.
#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// A parameter lies outside its admissible domain.
    InvalidParameter { name: &'static str, value: f64, reason: &'static str },
    /// A non-finite number reached an evaluation that requires finite input.
    NonFinite { what: &'static str, value: f64 },
    /// Adaptive step size collapsed while integrating the radial ODE.
    StepUnderflow { r: f64, step: f64 },
    /// The amplitude sweep never produced two shots with opposite outcomes.
    NoBracket { sweep: Vec<(f64, String)> },
    /// A bracketing root finder was handed an interval without sign change.
    NoSignChange { a: f64, fa: f64, b: f64, fb: f64 },
    /// Iteration budget exhausted.
    MaxIterations { what: &'static str, iterations: usize },
    /// Adaptive quadrature stopped before reaching the requested tolerance.
    ToleranceNotMet { value: f64, error: f64, requested: f64 },
    /// A power-law tail correction was requested for an integrand that does
    /// not decay fast enough to be integrable.
    TruncationUnsafe { exponent: f64, dimension: usize },
    /// A regression was requested on too few samples.
    InsufficientData { what: &'static str, needed: usize, got: usize },
    /// Two independent evaluations of the same quantity disagree.
    ConsistencyFailure { what: &'static str, primary: f64, oracle: f64, tolerance: f64 },
    /// Potential violates the smallness condition on its negative part.
    NegativePartTooLarge { mass: f64, bound: f64 },
    /// Nehari projection failed to find a sign change of J on its bracket.
    ProjectionFailure { t_lo: f64, j_lo: f64, t_hi: f64, j_hi: f64 },
    /// A state that must be nonzero is identically zero.
    ZeroState,
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::InvalidParameter { name, value, reason } => {
                write!(f, "invalid parameter {name} = {value}: {reason}")
            }
            Error::NonFinite { what, value } => write!(f, "non-finite {what}: {value}"),
            Error::StepUnderflow { r, step } => {
                write!(f, "integration failure: step size {step:e} underflowed at r = {r}")
            }
            Error::NoBracket { sweep } => {
                write!(f, "no amplitude bracket found; sweep:")?;
                for (a, class) in sweep {
                    write!(f, " ({a:e}, {class})")?;
                }
                Ok(())
            }
            Error::NoSignChange { a, fa, b, fb } => {
                write!(f, "no sign change on [{a}, {b}]: f(a) = {fa}, f(b) = {fb}")
            }
            Error::MaxIterations { what, iterations } => {
                write!(f, "{what}: no convergence after {iterations} iterations")
            }
            Error::ToleranceNotMet { value, error, requested } => write!(
                f,
                "quadrature tolerance not met: value {value}, achieved error {error:e}, requested {requested:e}"
            ),
            Error::TruncationUnsafe { exponent, dimension } => write!(
                f,
                "integrand tail ~ r^{exponent} is not integrable in dimension {dimension}"
            ),
            Error::InsufficientData { what, needed, got } => {
                write!(f, "{what}: need at least {needed} samples, got {got}")
            }
            Error::ConsistencyFailure { what, primary, oracle, tolerance } => write!(
                f,
                "{what}: value {primary} disagrees with oracle {oracle} beyond relative tolerance {tolerance:e}"
            ),
            Error::NegativePartTooLarge { mass, bound } => write!(
                f,
                "negative part too large: integral of |V-|^(N/2) = {mass} >= S^(N/2) = {bound}"
            ),
            Error::ProjectionFailure { t_lo, j_lo, t_hi, j_hi } => write!(
                f,
                "Nehari projection failed: J({t_lo:e}) = {j_lo:e}, J({t_hi:e}) = {j_hi:e}"
            ),
            Error::ZeroState => write!(f, "state is identically zero"),
        }
    }
}

impl core::error::Error for Error {}

pub(crate) fn ensure_finite(what: &'static str, value: f64) -> Result<f64> {
    if value.is_finite() {
        Ok(value)
    } else {
        Err(Error::NonFinite { what, value })
    }
}
