//! Crate-wide error type.

use num_complex::Complex64;

/// Errors raised by parsing, exact algebra and the numerical pipeline.
#[derive(Debug, Clone, thiserror::Error)]
pub enum Error {
    // ───────────────────────── parsing ─────────────────────────
    /// Syntax error with the byte position in the original input.
    #[error("syntax error at position {position}: {message}")]
    Syntax { position: usize, message: String },

    #[error("division by zero polynomial")]
    DivisionByZeroPolynomial,

    #[error("malformed integer: {0:?}")]
    MalformedInteger(String),

    // ───────────────────────── exact algebra ─────────────────────────
    #[error("zero denominator")]
    ZeroDenominator,

    #[error("zero function has no {0}")]
    ZeroFunction(&'static str),

    /// The triple does not satisfy a + b + c = 0.
    #[error("sum nonzero: a+b+c is not identically zero")]
    SumNonzero,

    /// A coordinate of the triple is identically zero (or an integer entry is zero).
    #[error("zero coordinate")]
    ZeroCoordinate,

    #[error("zero entry in integer triple")]
    ZeroEntry,

    /// All coordinate ratios are constant.
    #[error("constant point")]
    ConstantPoint,

    /// Operation needs exact rational coordinates but the triple holds an oracle.
    #[error("unsupported for oracle-backed coordinates: {0}")]
    OracleUnsupported(&'static str),

    /// The oracle failed its construction-time consistency contract.
    #[error("oracle contract violated: {0}")]
    OracleContract(String),

    // ───────────────────────── numerics ─────────────────────────
    /// A zero or pole sits on (or too close to) the integration circle.
    #[error("site on circle |z| = {rho}: root at {root} (distance {distance:.3e})")]
    SiteOnCircle {
        root: Complex64,
        rho: f64,
        distance: f64,
    },

    /// Circle guard refusal: a singularity is closer to the circle than allowed.
    /// The caller must perturb rho.
    #[error("singularity within guard distance of circle |z| = {rho}: distance {distance:.3e} < {required:.3e}")]
    CircleGuard {
        rho: f64,
        distance: f64,
        required: f64,
    },

    #[error("quadrature non-convergence at {nodes} nodes: last iterates differ by {last_diff:.3e}, previous {prev_diff:.3e}")]
    QuadratureNonConvergence {
        nodes: usize,
        last_diff: f64,
        prev_diff: f64,
    },

    #[error("non-finite sample at theta = {theta}")]
    NonFiniteSample { theta: f64 },

    #[error("near-pole evaluation at z = {z}")]
    NearPole { z: Complex64 },

    /// Aberth iteration failed to converge; carries the worst residual |p(z)|.
    #[error("root iteration non-convergence after {iterations} iterations (worst residual {residual:.3e})")]
    RootsNonConvergence { iterations: usize, residual: f64 },

    #[error("rho must be >= 1 (got {0})")]
    RhoBelowOne(f64),

    #[error("radius must be a positive finite real (got {0})")]
    InvalidRadius(f64),

    /// Invalid grid, bound or configuration input.
    #[error("{0}")]
    InvalidGrid(String),

    // ───────────────────────── number theory ─────────────────────────
    /// Factorization effort exhausted; carries the offending cofactor.
    #[error("factorization gave up: unresolved cofactor {cofactor}")]
    FactorizationGaveUp { cofactor: String },

    #[error("radical is 1: quality undefined")]
    ZeroRadical,
}

pub type Result<T> = std::result::Result<T, Error>;
