use thiserror::Error;

/// Every failure the library can report.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("parse error: {0}")]
    Parse(String),
    #[error("syntax error at offset {offset}: {msg}")]
    Syntax { offset: usize, msg: String },
    #[error("node address {address} out of range for a forest with {nodes} nodes")]
    BadAddress { address: usize, nodes: usize },
    #[error("coefficient of z^{k} is not determined (series truncated at z^{trunc})")]
    OutOfRange { k: i64, trunc: i64 },
    #[error("map is not normalized: value on the empty forest must be {expected}")]
    NotNormalized { expected: &'static str },
    #[error("functional queried at degree {needed} but certified only to {certified}")]
    DegreeExceeded { needed: usize, certified: usize },
    #[error("Mellin coefficients known up to c{available}, but c{needed} is required")]
    InsufficientMellinOrder { needed: i64, available: i64 },
    #[error("Mellin data must have a simple pole (c-1 != 0)")]
    InvalidMellin,
    #[error("pole of order {order} survived renormalization of {forest}")]
    PoleNotCancelled { order: u32, forest: String },
    #[error("quadrature failed: {0}")]
    QuadratureFailure(String),
    #[error("numeric {numeric} and symbolic {symbolic} differ by more than {tol}")]
    ToleranceExceeded { numeric: f64, symbolic: f64, tol: f64 },
    #[error("{0}")]
    Invalid(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
