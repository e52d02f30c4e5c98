use thiserror::Error;

/// Errors produced by the library.
#[derive(Debug, Error)]
pub enum Error {
    #[error("polynomial degree {requested} exceeds the supported cap {cap}")]
    DegreeCap { requested: usize, cap: usize },

    #[error("weight pattern `{0}` is not one of the twelve admissible patterns")]
    InadmissiblePattern(String),

    #[error(
        "coefficient table mismatch: need pattern {expected} with order >= {expected_q}, \
         got pattern {found} with order {found_q}"
    )]
    TableMismatch {
        expected: String,
        expected_q: usize,
        found: String,
        found_q: usize,
    },

    #[error(
        "truncation level for pattern {pattern} is infeasible: \
         q <= {cap} cannot reach the budget {budget:e}"
    )]
    InfeasibleTruncation {
        pattern: String,
        cap: usize,
        budget: f64,
    },

    #[error("scheme order {order} requires the coefficient composition {name}")]
    MissingComposition { name: &'static str, order: f64 },

    #[error("trajectory diverged at step {step}: state has non-finite entries")]
    Divergence { step: usize },

    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },

    #[error("table file parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },

    #[error("incompatible table file: {0}")]
    IncompatibleTable(String),

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
}

pub type Result<T> = std::result::Result<T, Error>;
