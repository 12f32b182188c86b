use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};

use super::IntMatrix;

/// Smith normal form `left * original * right = diag(d_1, ..., d_r, 0, ...)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SnfResult {
    /// Positive invariant factors, each dividing the next. Length = rank.
    pub diagonal: Vec<BigInt>,
    pub left: IntMatrix,
    pub right: IntMatrix,
    pub original_rows: usize,
    pub original_cols: usize,
}

impl SnfResult {
    pub fn rank(&self) -> usize {
        self.diagonal.len()
    }

    /// The `original_rows x original_cols` matrix carrying the diagonal.
    pub fn diagonal_matrix(&self) -> IntMatrix {
        let mut d = IntMatrix::zeros(self.original_rows, self.original_cols);
        for (i, v) in self.diagonal.iter().enumerate() {
            d[(i, i)] = v.clone();
        }
        d
    }
}

/// Diagonalizes `m` with integer row/column additions, sign flips and swaps.
///
/// The pivot is always an entry of least nonzero magnitude in the
/// unfinished lower-right block; row and column are reduced against it
/// until it divides everything left in the block.
pub fn smith_normal_form(m: &IntMatrix) -> SnfResult {
    let (rows, cols) = m.shape();
    let mut a = m.clone();
    let mut left = IntMatrix::identity(rows);
    let mut right = IntMatrix::identity(cols);
    let mut diagonal = Vec::new();
    let mut t = 0;

    while t < rows.min(cols) {
        let Some((pi, pj)) = min_abs_entry(&a, t) else {
            break;
        };
        a.swap_rows(t, pi);
        left.swap_rows(t, pi);
        a.swap_columns(t, pj);
        right.swap_columns(t, pj);

        let pivot = a[(t, t)].clone();
        for i in t + 1..rows {
            let q = a[(i, t)].div_floor(&pivot);
            if !q.is_zero() {
                let f = -q;
                a.add_row_multiple(i, t, &f);
                left.add_row_multiple(i, t, &f);
            }
        }
        for j in t + 1..cols {
            let q = a[(t, j)].div_floor(&pivot);
            if !q.is_zero() {
                let f = -q;
                a.add_column_multiple(j, t, &f);
                right.add_column_multiple(j, t, &f);
            }
        }

        let cross_clear = (t + 1..rows).all(|i| a[(i, t)].is_zero())
            && (t + 1..cols).all(|j| a[(t, j)].is_zero());
        if !cross_clear {
            // a remainder smaller than the pivot survived; it becomes the next pivot
            continue;
        }

        if let Some(i) = first_non_multiple_row(&a, t, &pivot) {
            a.add_row_multiple(t, i, &BigInt::from(1));
            left.add_row_multiple(t, i, &BigInt::from(1));
            continue;
        }

        if pivot.is_negative() {
            a.negate_row(t);
            left.negate_row(t);
        }
        diagonal.push(a[(t, t)].clone());
        t += 1;
    }

    SnfResult {
        diagonal,
        left,
        right,
        original_rows: rows,
        original_cols: cols,
    }
}

fn min_abs_entry(a: &IntMatrix, t: usize) -> Option<(usize, usize)> {
    let mut best: Option<((usize, usize), BigInt)> = None;
    for i in t..a.rows() {
        for j in t..a.cols() {
            let v = &a[(i, j)];
            if v.is_zero() {
                continue;
            }
            let abs = v.abs();
            if best.as_ref().is_none_or(|(_, b)| abs < *b) {
                best = Some(((i, j), abs));
            }
        }
    }
    best.map(|(pos, _)| pos)
}

fn first_non_multiple_row(a: &IntMatrix, t: usize, pivot: &BigInt) -> Option<usize> {
    (t + 1..a.rows()).find(|&i| (t + 1..a.cols()).any(|j| !a[(i, j)].is_multiple_of(pivot)))
}
