//! Exact integer linear algebra.

mod elim;
mod matrix;
mod modsolve;
mod snf;
mod transform;

pub use elim::{det, first_minor_abs, greedy_independent_rows, rank, unimodular_inverse};
pub use matrix::IntMatrix;
pub use modsolve::{is_solution_mod, residue, solve_mod_n, KernelIter, ModKernel};
pub use snf::{smith_normal_form, SnfResult};
pub use transform::{carry_transform, Transform};

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum LinalgError {
    #[error("matrix is {rows}x{cols}, expected square")]
    NotSquare { rows: usize, cols: usize },
    #[error("index ({row}, {col}) out of bounds for {rows}x{cols} matrix")]
    IndexOutOfBounds {
        row: usize,
        col: usize,
        rows: usize,
        cols: usize,
    },
    #[error("vector has length {found}, expected {expected}")]
    LengthMismatch { expected: usize, found: usize },
    #[error("vector does not solve the system mod {modulus}")]
    NotASolution { modulus: u64 },
    #[error("source and target index coincide ({0})")]
    SameIndex(usize),
    #[error("column {0} is not zero")]
    ColumnNotZero(usize),
    #[error("matrix is not unimodular")]
    NotUnimodular,
    #[error("unknown {0} must be 0 to drop its column")]
    NonzeroDroppedUnknown(usize),
}
