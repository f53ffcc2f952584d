//! Linear-operator characterization of 1-D binary cellular automata.
//!
//! A linear elementary CA rule has a single constant transition matrix over
//! GF(2) that maps every state to its successor. A non-linear rule has no
//! such matrix, but its dynamics can still be captured by *sets* of GF(2)
//! matrices. This crate provides the machinery for that decomposition:
//!
//! - [`gf2`]: bit vectors, square binary matrices, mod-2 matrix-vector
//!   products, rank, and a per-row affine constraint solver.
//! - [`rule`]: the algebra of 3-variable Boolean rules under Wolfram
//!   numbering — truth tables, algebraic normal form, complements, Hamming
//!   distance, affine/linear classification, and nearest-affine search.
//! - [`ca`]: uniform and hybrid CA configurations with null or periodic
//!   boundaries, single-step evolution, and state-transition-diagram
//!   construction with cycle/predecessor statistics.
//! - [`derivative`](mod@derivative): Boolean derivatives and CA Jacobian
//!   matrices, including constant-Jacobian detection for affine rules.
//! - [`deviant`]: decomposition of a non-linear rule's dynamics relative to
//!   its nearest linear rule — mismatch patterns, deviant states, corrected
//!   successors, and per-state transformation matrices.
//! - [`window`]: per-window 4x4 transformation matrices, matrix counting,
//!   minimal matrix sets, and the linear-time windowed evolution algorithm.
//! - [`verify`]: the self-check suite run by the CLI's `verify` subcommand.
//!
//! Bit convention: position 0 of a bit vector is the leftmost (most
//! significant) bit, so the decimal view of `1011` is 11.

pub mod ca;
pub mod derivative;
pub mod deviant;
pub mod gf2;
pub mod rule;
pub mod verify;
pub mod window;

pub use ca::{Boundary, CaConfig, StdGraph, StdStats};
pub use derivative::{constant_jacobian, derivative, jacobian, Jacobian};
pub use deviant::{
    analyze, corrected_successor, deviant_matrix, deviant_states, mismatch_patterns, DeviantReport,
};
pub use gf2::{solve_row, BitVec, Gf2Matrix, RowConstraint, RowSolutions};
pub use rule::{
    affine_rules, distance_partition, linear_rules, nearest_affine, nearest_linear,
    DistancePartition, Nearest, Rule, Var,
};
pub use window::{
    canonical_matrix, count_matrices, evolve_windowed, fundamental_rules, matrix_count,
    minimal_matrix_set, window_output, WindowMatrixSet, WindowStep, ZeroWindowMode,
};

/// Largest cell count for which the full 2^n state space is enumerated.
pub const MAX_ENUM_CELLS: usize = 20;

/// Errors shared across the crate.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error("length mismatch: expected {expected} bits, got {got}")]
    LengthMismatch { expected: usize, got: usize },
    #[error("bit length must be between 1 and 64, got {0}")]
    InvalidLength(usize),
    #[error("invalid bit string {0:?}: only '0' and '1' are allowed")]
    InvalidBitString(String),
    #[error("matrix must be square: {rows} rows of width {cols}")]
    NotSquare { rows: usize, cols: usize },
    #[error("a cellular automaton needs at least 3 cells, got {0}")]
    TooFewCells(usize),
    #[error("state space of {0} cells is too large to enumerate (limit {MAX_ENUM_CELLS})")]
    StateSpaceTooLarge(usize),
    #[error("no matrix can map the zero vector to a nonzero target")]
    NoMatrix,
    #[error("windowed evolution needs an even cell count of at least 4, got {0}")]
    WindowedLength(usize),
}
