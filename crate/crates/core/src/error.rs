use thiserror::Error;

/// Errors produced across the crate.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("input rows have unequal lengths (row {row} has {len}, expected {expected})")]
    NonRectangular { row: usize, len: usize, expected: usize },

    #[error("non-finite value in series '{name}' at index {index}")]
    NaNsPresent { name: String, index: usize },

    #[error("series '{name}' has zero variance")]
    ConstantSeries { name: String },

    #[error("series too short: {len} samples for {vars} variables (need at least {needed})")]
    TooShort { len: usize, vars: usize, needed: usize },

    #[error("duplicate series name '{0}'")]
    DuplicateNames(String),

    #[error("difference lag k = {k} out of range (1..={max})")]
    KTooLarge { k: usize, max: usize },

    #[error("covariance matrix is singular (collinear inputs){}", target_suffix(.target))]
    SingularCovariance { target: Option<String> },

    #[error("source and target are the same index ({0})")]
    SameIndex(usize),

    #[error("entropy budget of target '{target}' is degenerate (all terms vanish)")]
    DegenerateBudget { target: String },

    #[error("drift matrix is not Hurwitz (max eigenvalue real part {max_real})")]
    NotHurwitz { max_real: f64 },

    #[error("trajectory became non-finite at step {step}")]
    NonFiniteState { step: usize },

    #[error("Lyapunov solve inaccurate: residual {residual:e} exceeds bound {bound:e}")]
    IllConditioned { residual: f64, bound: f64 },

    #[error("bad matrix specification: {0}")]
    BadMatrixSpec(String),

    #[error("malformed CSV at line {line}: {msg}")]
    Malformed { line: u64, msg: String },

    #[error("input file is empty")]
    EmptyFile,

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("index {index} out of range for {len} variables")]
    IndexOutOfRange { index: usize, len: usize },

    #[error("i/o error: {0}")]
    Io(String),
}

fn target_suffix(target: &Option<String>) -> String {
    match target {
        Some(t) => format!(" for target '{t}'"),
        None => String::new(),
    }
}

impl Error {
    /// True for failures caused by degenerate numerics rather than bad input.
    pub fn is_numerical(&self) -> bool {
        matches!(
            self,
            Error::SingularCovariance { .. }
                | Error::DegenerateBudget { .. }
                | Error::NotHurwitz { .. }
                | Error::NonFiniteState { .. }
                | Error::IllConditioned { .. }
        )
    }

    pub(crate) fn singular() -> Self {
        Error::SingularCovariance { target: None }
    }

    /// Attaches the offending target name to a singular-covariance error.
    pub fn with_target(self, name: &str) -> Self {
        match self {
            Error::SingularCovariance { target: None } => Error::SingularCovariance {
                target: Some(name.to_string()),
            },
            Error::DegenerateBudget { .. } => Error::DegenerateBudget {
                target: name.to_string(),
            },
            other => other,
        }
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
