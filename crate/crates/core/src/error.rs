use thiserror::Error;

use crate::groupoid::ValidationReport;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    /// Tables that cannot even be read as a groupoid (unknown ids, duplicates).
    #[error("malformed input: {0}")]
    Malformed(String),

    #[error("groupoid fails validation: {0}")]
    InvalidGroupoid(ValidationReport),

    #[error("bibundle fails validation: {0}")]
    InvalidBibundle(ValidationReport),

    #[error("invalid group table: {0}")]
    InvalidGroup(String),

    #[error("action axiom failure: {0}")]
    InvalidAction(String),

    #[error("zero weight: a({object}) = 0")]
    ZeroWeight { object: String },

    #[error("degenerate weight: the fiber sum of a over r^-1({object}) vanishes")]
    DegenerateWeight { object: String },

    #[error("non-invariant section: b/a differs on orbit {orbit} between {first} and {second}")]
    NonInvariantSection {
        orbit: usize,
        first: String,
        second: String,
    },

    #[error("unknown orbit id {0}")]
    UnknownOrbit(usize),

    #[error("unknown object {0}")]
    UnknownObject(String),

    #[error("subset is not full: it misses the orbit of {0}")]
    NotFull(String),

    #[error("section takes different values on the orbit of {0}")]
    InconsistentSection(String),

    #[error("sections not corresponding: at {object} expected {expected}, got {actual}")]
    SectionsNotCorresponding {
        object: String,
        expected: String,
        actual: String,
    },

    #[error("strongly regular part only: orbit parameter {0} lies in the singular set")]
    SingularOrbit(f64),

    #[error("parameter {value} outside the domain [{lo}, {hi}]")]
    OutOfDomain { value: f64, lo: f64, hi: f64 },

    #[error("point lies outside the positive Weyl chamber")]
    OutsideChamber,

    #[error("fiber integral vanishes near {0:?}")]
    VanishingFiberIntegral(Vec<f64>),

    #[error("critical point at t = {t}: |V'(t)| = {derivative:e} is below threshold")]
    CriticalPoint { t: f64, derivative: f64 },

    #[error(
        "numerical non-convergence: partial value {value} (error estimate {error_estimate:e}, {evaluations} evaluations)"
    )]
    NonConvergence {
        value: f64,
        error_estimate: f64,
        evaluations: usize,
    },

    #[error("integral diverges: partial values keep growing (last {last})")]
    Divergent { last: f64 },

    #[error("precondition violated: {0}")]
    Precondition(String),
}

impl Error {
    /// True for the numerical failure modes (non-convergence, divergence).
    pub fn is_numerical(&self) -> bool {
        matches!(
            self,
            Error::NonConvergence { .. }
                | Error::Divergent { .. }
                | Error::VanishingFiberIntegral(_)
        )
    }
}
