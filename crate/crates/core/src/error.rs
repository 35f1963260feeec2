use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("finite sets must be nonempty")]
    EmptySet,

    #[error("labels: expected {expected} distinct labels, got {got}")]
    BadLabels { expected: usize, got: usize },

    #[error("set map: value {value} at position {index} is outside the codomain of size {cod}")]
    MapOutOfRange { index: usize, value: usize, cod: usize },

    #[error("set map: {values} values for a domain of size {dom}")]
    MapLength { dom: usize, values: usize },

    #[error("cannot compose: codomain size {left} differs from domain size {right}")]
    ComposeMismatch { left: usize, right: usize },

    #[error("diagram: map {index} does not chain the adjacent sets")]
    DiagramChain { index: usize },

    #[error("diagram iso: {0}")]
    BadIso(String),

    #[error("shape mismatch: {0}")]
    Shape(String),

    #[error("chain complex: {0}")]
    ChainComplex(String),

    #[error("chain map: {0}")]
    ChainMap(String),

    #[error("matrix is not the graph of a set map: column {column} is not a unit vector")]
    NotAGraph { column: usize },

    #[error("comonoid structure: {0}")]
    Comonoid(String),

    #[error("group table: {0}")]
    GroupTable(String),

    #[error("group action: {0}")]
    Action(String),

    #[error("G-sets over different groups")]
    GroupMismatch,

    #[error("cube diagram: {0}")]
    Cube(String),

    #[error("multiset: {0}")]
    Multiset(String),

    #[error("bad rational literal {0:?}")]
    ParseRational(String),

    #[error("unsupported: {0}")]
    Unsupported(String),
}
