//! Error type shared by the whole crate.

use num_complex::Complex64;
use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, Error)]
pub enum Error {
    #[error("invalid circular domain: {}", .0.join("; "))]
    InvalidDomain(Vec<String>),

    #[error("circle index {index} out of range (domain has {count} inner circles)")]
    CircleIndex { index: usize, count: usize },

    #[error("reflection of the origin is undefined")]
    ReflectOrigin,

    #[error("word enumeration exceeded the cap of {cap} words at level {level}")]
    WordCap { cap: usize, level: usize },

    #[error("non-finite prime-function factor at word `{word}`")]
    NonFinite { word: String },

    #[error("prime product magnitude out of double range (log10 scale {log10:.1})")]
    Magnitude { log10: f64 },

    #[error("branch tracking failed: {0}")]
    Branch(String),

    #[error("path clearance violated near {point}")]
    Clearance { point: Complex64 },

    #[error("path planning failed: {0}")]
    Path(String),

    #[error(
        "quadrature did not converge on segment [{from}, {to}] (error estimate {estimate:.3e})"
    )]
    Quadrature {
        from: Complex64,
        to: Complex64,
        estimate: f64,
    },

    #[error("quadrature rule construction failed: {0}")]
    QuadratureRule(String),

    #[error(
        "expected {expected} slit-endpoint roots on circle {circle}, found {found} (scan: {profile})"
    )]
    RootCount {
        circle: usize,
        expected: usize,
        found: usize,
        profile: String,
    },

    #[error("identity inconsistent at this truncation level: probe spread {spread:.3e} exceeds {tolerance:.3e}")]
    IdentityInconsistent { spread: f64, tolerance: f64 },

    #[error("no valid probe points found for this domain")]
    NoProbes,

    #[error("invalid mapping data: {0}")]
    InvalidSpec(String),

    #[error("solver did not converge after {iterations} iterations (residual {residual:.3e})")]
    SolverDiverged { iterations: usize, residual: f64 },

    #[error("evaluation at singular point {point}")]
    AtSingularPoint { point: Complex64 },
}
