//! Analysis of DeGroot opinion-pooling procedures and synthesis of
//! equivalent Hamiltonian cycles with loops.
//!
//! A procedure is a row-stochastic influence matrix `P`; opinions evolve as
//! `s(k) = P s(k-1)`. Its communication digraph carries an arc `j -> i` of
//! weight `p_ij` whenever agent `j` influences agent `i`.
//!
//! - [`matrix`]: dense matrices, stochastic validation, power limits,
//!   stationary vectors, ranks.
//! - [`digraph`]: communication digraphs, Kirchhoff matrices, strong
//!   components, basic bicomponents, periods.
//! - [`forests`]: spanning out-tree weights (enumeration and matrix-tree
//!   minors) and the normalized matrix of maximum out-forests.
//! - [`cycle`]: the weighted Hamiltonian cycle realizing a target tree-weight
//!   vector, and the stochastic cycles-with-loops realizing a target final
//!   weight distribution.
//! - [`cli`]: the `degroot` command-line front end.
//!
//! Vertex and agent indices are zero-based throughout the library. The CLI
//! and error messages render them one-based.

pub mod cli;
pub mod cycle;
pub mod digraph;
mod error;
pub mod forests;
pub mod matrix;

pub use cycle::{
    cycle_from_pi, cycle_from_tree_weights, cycle_to_matrix, default_order, verify_equivalence,
    CycleSpec, EquivalenceReport, SideReport, Verdict,
};
pub use digraph::{
    analyze, digraph_from_matrix, kirchhoff, matrix_from_digraph, strong_components,
    AnalysisReport, Arc, WeightedDigraph,
};
pub use error::{Error, Result};
pub use forests::{
    enumerate_out_trees, max_out_forest_matrix, tree_weight_vector, tree_weights_via_minors,
    ForestMatrix, ForestWeights,
};
pub use matrix::{
    consensus_value, iterate_opinions, limit_powers, matrix_rank, stationary_vector,
    validate_stochastic, LimitResult, LimitStatus, Matrix, ProbabilityVector, StochasticMatrix,
};
