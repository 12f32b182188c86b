//! Elementary transformations that carry a mod-n solution along with the matrix.

use num_bigint::BigInt;

use super::{is_solution_mod, IntMatrix, LinalgError};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Transform {
    /// `col[target] += factor * col[source]`
    AddColumnMultiple {
        target: usize,
        source: usize,
        factor: i64,
    },
    SwapColumns(usize, usize),
    NegateColumn(usize),
    /// `row[target] += factor * row[source]`
    AddRowMultiple {
        target: usize,
        source: usize,
        factor: i64,
    },
    SwapRows(usize, usize),
    NegateRow(usize),
    /// Remove an all-zero column whose unknown is 0.
    DropZeroColumn(usize),
    DropRow(usize),
}

/// Applies `transform` to `m` and adjusts `solution` so it still solves the
/// new system mod `n`.
///
/// Column operations act on the solution contragrediently: adding
/// `factor * col[source]` to `col[target]` replaces `x[source]` by
/// `x[source] - factor * x[target]`. Row operations leave it unchanged.
/// Returned residues are reduced into `0..n`.
pub fn carry_transform(
    m: &IntMatrix,
    solution: &[u64],
    n: u64,
    transform: Transform,
) -> Result<(IntMatrix, Vec<u64>), LinalgError> {
    if solution.len() != m.cols() {
        return Err(LinalgError::LengthMismatch {
            expected: m.cols(),
            found: solution.len(),
        });
    }
    if !is_solution_mod(m, solution, n) {
        return Err(LinalgError::NotASolution { modulus: n });
    }
    let col = |j: usize| {
        if j < m.cols() {
            Ok(j)
        } else {
            Err(LinalgError::IndexOutOfBounds {
                row: 0,
                col: j,
                rows: m.rows(),
                cols: m.cols(),
            })
        }
    };
    let row = |i: usize| {
        if i < m.rows() {
            Ok(i)
        } else {
            Err(LinalgError::IndexOutOfBounds {
                row: i,
                col: 0,
                rows: m.rows(),
                cols: m.cols(),
            })
        }
    };

    let mut out = m.clone();
    let mut x: Vec<u64> = solution.iter().map(|v| v % n).collect();
    match transform {
        Transform::AddColumnMultiple {
            target,
            source,
            factor,
        } => {
            let (t, s) = (col(target)?, col(source)?);
            if t == s {
                return Err(LinalgError::SameIndex(t));
            }
            out.add_column_multiple(t, s, &BigInt::from(factor));
            let shift = mul_mod(factor.rem_euclid(n as i64) as u64, x[t], n);
            x[s] = (x[s] + n - shift) % n;
        }
        Transform::SwapColumns(a, b) => {
            let (a, b) = (col(a)?, col(b)?);
            out.swap_columns(a, b);
            x.swap(a, b);
        }
        Transform::NegateColumn(j) => {
            let j = col(j)?;
            out.negate_column(j);
            x[j] = (n - x[j]) % n;
        }
        Transform::AddRowMultiple {
            target,
            source,
            factor,
        } => {
            let (t, s) = (row(target)?, row(source)?);
            if t == s {
                return Err(LinalgError::SameIndex(t));
            }
            out.add_row_multiple(t, s, &BigInt::from(factor));
        }
        Transform::SwapRows(a, b) => {
            let (a, b) = (row(a)?, row(b)?);
            out.swap_rows(a, b);
        }
        Transform::NegateRow(i) => {
            let i = row(i)?;
            out.negate_row(i);
        }
        Transform::DropZeroColumn(j) => {
            let j = col(j)?;
            if !m.column_is_zero(j) {
                return Err(LinalgError::ColumnNotZero(j));
            }
            if x[j] != 0 {
                return Err(LinalgError::NonzeroDroppedUnknown(j));
            }
            out = out.without_column(j);
            x.remove(j);
        }
        Transform::DropRow(i) => {
            let i = row(i)?;
            out = out.without_row(i);
        }
    }
    debug_assert!(is_solution_mod(&out, &x, n));
    Ok((out, x))
}

fn mul_mod(a: u64, b: u64, n: u64) -> u64 {
    ((a as u128 * b as u128) % n as u128) as u64
}
