//! Error type shared by all toolkit modules.

use thiserror::Error;

/// Everything that can go wrong inside the toolkit.
#[derive(Debug, Error)]
pub enum Error {
    #[error("shape mismatch on axis {axis}: expected {expected} samples, got {got}")]
    ShapeMismatch {
        axis: usize,
        expected: usize,
        got: usize,
    },

    #[error("non-real field: conjugate-symmetry violation {violation:.3e} exceeds {tolerance:.1e} relative")]
    NonRealField { violation: f64, tolerance: f64 },

    #[error("unsupported dimension {d} (supported: 1, 2, 3)")]
    UnsupportedDimension { d: usize },

    #[error("grid size {n} invalid: n must be a power of two >= 8")]
    InvalidGridSize { n: usize },

    #[error("box scale {l} invalid: must be positive and finite")]
    InvalidBoxScale { l: f64 },

    #[error("malformed header: {reason}")]
    MalformedHeader { reason: String },

    #[error("payload length mismatch: expected {expected} bytes, got {got}")]
    PayloadLength { expected: usize, got: usize },

    #[error("checksum mismatch: header says {expected:08x}, payload hashes to {got:08x}")]
    ChecksumMismatch { expected: u32, got: u32 },

    #[error("i/o failure on {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },

    #[error("homogeneous multiplier on non-mean-free field (|mean| = {mean:.3e})")]
    NonMeanFree { mean: f64 },

    #[error("divergence-free precondition violated: max|xi.u_hat| = {violation:.3e} relative")]
    DivergenceViolation { violation: f64 },

    #[error("frequency support of input exceeds declared band limit {limit:.3e} (max |xi| = {max_xi:.3e})")]
    SupportViolation { limit: f64, max_xi: f64 },

    #[error("band range [{j_lo}, {j_hi}] exceeds the resolved range [{j_min}, {j_max}]")]
    BandRangeExceedsNyquist {
        j_lo: i32,
        j_hi: i32,
        j_min: i32,
        j_max: i32,
    },

    #[error("unknown inequality id {id:?}")]
    UnknownInequality { id: String },

    #[error("degenerate ensemble: {excluded} of {trials} trials had zero right-hand side")]
    DegenerateEnsemble { excluded: usize, trials: usize },

    #[error("stability sweep needs at least two resolutions, got {got}")]
    TooFewResolutions { got: usize },

    #[error("invalid smoothness exponent s = {s}: {reason}")]
    InvalidSmoothness { s: f64, reason: String },

    #[error("invalid exponent {name} = {value}: must lie in [1, inf]")]
    InvalidExponent { name: &'static str, value: f64 },

    #[error("invalid simulation config: {reason}")]
    InvalidConfig { reason: String },

    #[error("CFL violation: dt * |u|_inf / dx = {cfl:.3e} exceeds 0.5")]
    CflViolation { cfl: f64 },

    #[error("numerical blow-up at t = {t}")]
    NumericalBlowUp { t: f64 },

    #[error("time {t} past envelope horizon T0 = {t0}")]
    PastEnvelopeHorizon { t: f64, t0: f64 },

    #[error("trajectory too short: need at least {need} samples, got {got}")]
    TrajectoryTooShort { need: usize, got: usize },
}

pub type Result<T> = std::result::Result<T, Error>;
