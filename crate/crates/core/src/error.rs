use thiserror::Error;

pub type Result<T, E = Error> = core::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("number of modes must be at least 1")]
    ZeroModes,
    #[error("mode count mismatch: expected {expected}, found {found}")]
    ModeMismatch { expected: usize, found: usize },
    #[error("mode index {mode} out of range for {modes} modes")]
    ModeOutOfRange { mode: usize, modes: usize },
    #[error("two-mode gate acts twice on mode {0}")]
    RepeatedMode(usize),
    #[error("non-finite parameter in {0}")]
    NonFinite(&'static str),
    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },
    #[error("expected an even dimension, found {0}")]
    OddDimension(usize),
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("matrix violates the Bogoliubov conditions")]
    NotSymplectic,
    #[error("matrix is not symmetric (max deviation {deviation:e})")]
    NotSymmetric { deviation: f64 },
    #[error("matrix is not positive definite")]
    NotPositiveDefinite,
    #[error("core state has no nonzero amplitude")]
    EmptyState,
    #[error("occupation vector has length {found}, expected {expected}")]
    IndexLength { expected: usize, found: usize },
    #[error("core state is not normalized (norm {norm})")]
    NotNormalized { norm: f64 },
    #[error("ladder operators annihilated the state")]
    ZeroState,
    #[error("density evaluated to {value:e}, below the roundoff threshold")]
    NegativeDensity { value: f64 },
    #[error("expected a real value, imaginary residue {imag:e} exceeds tolerance")]
    ComplexResidue { imag: f64 },
    #[error("invalid measurement: {0}")]
    InvalidMeasurement(&'static str),
    #[error("too many modes for dense simulation: {modes} > {max}")]
    TooManyModes { modes: usize, max: usize },
    #[error("cutoff {cutoff} is insufficient: {reason}")]
    CutoffTooSmall { cutoff: usize, reason: &'static str },
}

impl Error {
    /// True for failures of the numerics (as opposed to malformed input).
    pub fn is_numerical(&self) -> bool {
        matches!(
            self,
            Error::NotPositiveDefinite
                | Error::NegativeDensity { .. }
                | Error::ComplexResidue { .. }
                | Error::ZeroState
        )
    }
}
