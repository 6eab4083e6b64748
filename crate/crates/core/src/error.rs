use thiserror::Error;

/// Errors produced anywhere in the library.
///
/// Singular-locus errors carry the guard expression that vanished so the
/// caller can report it verbatim (e.g. `1+x1*y2`).
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("division by zero")]
    DivisionByZero,

    #[error("singular evaluation: denominator vanishes")]
    SingularEvaluation,

    #[error("size mismatch: {left} vs {right}")]
    SizeMismatch { left: usize, right: usize },

    #[error("singular locus: {guard} = 0")]
    SingularLocus { guard: String },

    #[error("singular parameter: {guard} = 0")]
    SingularParameter { guard: String },

    #[error("invalid state for {map}: {reason}")]
    InvalidState { map: String, reason: String },

    #[error("unknown map `{0}`")]
    UnknownMap(String),

    #[error("unknown check `{0}`")]
    UnknownCheck(String),

    #[error("unknown invariant `{name}` for map `{map}`")]
    UnknownInvariant { map: String, name: String },

    #[error("unknown Lax builder `{0}`")]
    UnknownBuilder(String),

    #[error("Lax builder `{builder}` expects {expected} coordinates, got {got}")]
    ArityMismatch {
        builder: String,
        expected: usize,
        got: usize,
    },

    #[error("sampling exhausted after {attempts} rejected draws for `{map}`")]
    SamplingExhausted { map: String, attempts: usize },

    #[error("complex roots: discriminant {discriminant} < 0")]
    ComplexRoots { discriminant: f64 },

    #[error("degenerate leaf constraint: leading and linear coefficients vanish")]
    DegenerateConstraint,

    #[error("orbit aborted near {guard} after step {last_good_step}")]
    NearSingularAbort {
        last_good_step: usize,
        guard: String,
    },

    #[error("orbit left the representable range after step {last_good_step}")]
    NonFinite { last_good_step: usize },

    #[error("i/o error: {0}")]
    Io(String),

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

impl Error {
    /// True for errors that mean "this sample sits on a singular locus";
    /// verification runners resample instead of recording a failure.
    pub fn is_singular(&self) -> bool {
        matches!(
            self,
            Error::DivisionByZero
                | Error::SingularEvaluation
                | Error::SingularLocus { .. }
                | Error::SingularParameter { .. }
        )
    }
}
