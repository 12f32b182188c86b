//! Fraction-free (Bareiss) elimination: determinant, rank, first minors.

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Zero};

use super::{IntMatrix, LinalgError};

/// Exact determinant. The determinant of the `0 x 0` matrix is 1.
pub fn det(m: &IntMatrix) -> Result<BigInt, LinalgError> {
    if !m.is_square() {
        return Err(LinalgError::NotSquare {
            rows: m.rows(),
            cols: m.cols(),
        });
    }
    let n = m.rows();
    if n == 0 {
        return Ok(BigInt::one());
    }
    let mut a = m.clone();
    let mut negate = false;
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if a[(k, k)].is_zero() {
            match (k + 1..n).find(|&i| !a[(i, k)].is_zero()) {
                Some(p) => {
                    a.swap_rows(k, p);
                    negate = !negate;
                }
                None => return Ok(BigInt::zero()),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let num = &a[(i, j)] * &a[(k, k)] - &a[(i, k)] * &a[(k, j)];
                a[(i, j)] = exact_div(num, &prev);
            }
            a[(i, k)] = BigInt::zero();
        }
        prev = a[(k, k)].clone();
    }
    let d = a[(n - 1, n - 1)].clone();
    Ok(if negate { -d } else { d })
}

/// Rank over the rationals.
pub fn rank(m: &IntMatrix) -> usize {
    echelon_rank(m.clone())
}

/// `|det|` of `m` with one row and one column removed.
pub fn first_minor_abs(
    m: &IntMatrix,
    drop_row: usize,
    drop_col: usize,
) -> Result<BigUint, LinalgError> {
    if !m.is_square() {
        return Err(LinalgError::NotSquare {
            rows: m.rows(),
            cols: m.cols(),
        });
    }
    if drop_row >= m.rows() || drop_col >= m.cols() {
        return Err(LinalgError::IndexOutOfBounds {
            row: drop_row,
            col: drop_col,
            rows: m.rows(),
            cols: m.cols(),
        });
    }
    let minor = m.without_row(drop_row).without_column(drop_col);
    Ok(det(&minor)?.magnitude().clone())
}

/// Inverse of a matrix with determinant +-1, via the adjugate.
pub fn unimodular_inverse(m: &IntMatrix) -> Result<IntMatrix, LinalgError> {
    let d = det(m)?;
    if d.magnitude() != &BigUint::one() {
        return Err(LinalgError::NotUnimodular);
    }
    let n = m.rows();
    let mut inv = IntMatrix::zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            let cofactor = det(&m.without_row(j).without_column(i))?;
            let signed = if (i + j) % 2 == 0 {
                cofactor
            } else {
                -cofactor
            };
            inv[(i, j)] = &signed * &d;
        }
    }
    Ok(inv)
}

/// Indices of the first rows, scanning top to bottom, that are linearly
/// independent of the rows already chosen. The result spans the row space.
pub fn greedy_independent_rows(m: &IntMatrix) -> Vec<usize> {
    let mut chosen: Vec<usize> = Vec::new();
    for i in 0..m.rows() {
        let mut trial = chosen.clone();
        trial.push(i);
        if rank(&m.select_rows(&trial)) == trial.len() {
            chosen = trial;
        }
    }
    chosen
}

fn echelon_rank(mut a: IntMatrix) -> usize {
    let (rows, cols) = a.shape();
    let mut r = 0;
    let mut prev = BigInt::one();
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !a[(i, c)].is_zero()) else {
            continue;
        };
        a.swap_rows(r, p);
        for i in r + 1..rows {
            for j in c + 1..cols {
                let num = &a[(i, j)] * &a[(r, c)] - &a[(i, c)] * &a[(r, j)];
                a[(i, j)] = exact_div(num, &prev);
            }
            a[(i, c)] = BigInt::zero();
        }
        prev = a[(r, c)].clone();
        r += 1;
    }
    r
}

fn exact_div(num: BigInt, den: &BigInt) -> BigInt {
    let (q, rem) = num.div_rem(den);
    debug_assert!(rem.is_zero(), "Bareiss step must divide exactly");
    q
}
