use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// Errors raised by the library. Index fields are zero-based; messages print
/// them one-based to match agent labels.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("matrix is not square")]
    NotSquare,
    #[error("matrix must have at least one row")]
    Empty,
    #[error("non-finite entry at ({}, {})", .row + 1, .col + 1)]
    NonFinite { row: usize, col: usize },
    #[error("negative entry at ({}, {})", .row + 1, .col + 1)]
    NegativeEntry { row: usize, col: usize },
    #[error("row {} sums to {sum}, not 1", .row + 1)]
    RowSumOutOfTolerance { row: usize, sum: f64 },
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("entries must be non-negative and sum to 1 (sum is {sum})")]
    NotProbability { sum: f64 },
    #[error("stationary vector is not unique: {nu} basic bicomponents")]
    NotUnique { nu: usize },
    #[error("linear system is singular within pivot tolerance")]
    SingularSystem,
    #[error("vertex {} is out of range for {n} vertices", .vertex + 1)]
    VertexOutOfRange { vertex: usize, n: usize },
    #[error("arc {} -> {} has non-positive or non-finite weight {weight}", .tail + 1, .head + 1)]
    InvalidWeight {
        tail: usize,
        head: usize,
        weight: f64,
    },
    #[error("duplicate arc {} -> {}", .tail + 1, .head + 1)]
    DuplicateArc { tail: usize, head: usize },
    #[error("incoming weight {total} at vertex {} exceeds 1", .vertex + 1)]
    InfeasibleRow { vertex: usize, total: f64 },
    #[error("loop at vertex {} has weight {loop_weight}, expected {expected}", .vertex + 1)]
    InconsistentLoop {
        vertex: usize,
        loop_weight: f64,
        expected: f64,
    },
    #[error("{what} too large for enumeration (limit {limit})")]
    TooLarge { what: &'static str, limit: u64 },
    #[error("digraph has no spanning out-tree")]
    NoSpanningTree,
    #[error("target tree weight at vertex {} is not positive", .vertex + 1)]
    NonPositiveTarget { vertex: usize },
    #[error("a Hamiltonian cycle needs at least 2 vertices")]
    DegenerateN,
    #[error("weight of agent {} is not positive", .agent + 1)]
    NonPositivePi { agent: usize },
    #[error("beta = {beta} is outside (0, {max}]")]
    BetaOutOfRange { beta: f64, max: f64 },
    #[error("arc weight entering vertex {} is {weight} > 1", .vertex + 1)]
    WeightAboveOne { vertex: usize, weight: f64 },
    #[error("visiting order is not a permutation of the {n} vertices")]
    InvalidOrder { n: usize },
}
