use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    /// Two factors of one product both carry a delta atom.
    #[error("ill-formed product: two delta factors share a product node")]
    IllFormedProduct,
    #[error("unsupported product: {0}")]
    UnsupportedProduct(String),
    #[error("unsupported input: {0}")]
    UnsupportedInput(String),
    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("contract violation: {0}")]
    Contract(String),
    #[error("not commutative: e{0} * e{1} != e{1} * e{0}")]
    NotCommutative(usize, usize),
    #[error("not associative: (e{0} e{1}) e{2} != e{0} (e{1} e{2})")]
    NotAssociative(usize, usize, usize),
    #[error("not a derivation: D(e{0} e{1}) != D(e{0}) e{1} + e{0} D(e{1})")]
    NotADerivation(usize, usize),
    #[error("derivation is not nilpotent (D^{0} != 0)")]
    NotNilpotent(usize),
    #[error("infinite support: D is not nilpotent on structure value ({i}, {n}, {j}) within {cap} steps")]
    InfiniteSupport { i: usize, n: i64, j: usize, cap: u32 },
    #[error("axiom `{axiom}` fails: {witness}")]
    AxiomFailed { axiom: String, witness: String },
}

impl Error {
    pub fn contract(msg: impl Into<String>) -> Self {
        Error::Contract(msg.into())
    }
}
