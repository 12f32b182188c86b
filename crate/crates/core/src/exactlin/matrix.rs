use std::fmt;
use std::ops::{Index, IndexMut, Mul};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

/// Dense row-major matrix of arbitrary-precision integers.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<BigInt>,
}

impl IntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            entries: vec![BigInt::zero(); rows * cols],
        }
    }

    pub fn identity(size: usize) -> Self {
        let mut m = Self::zeros(size, size);
        for i in 0..size {
            m[(i, i)] = BigInt::one();
        }
        m
    }

    /// Builds a matrix from a row-major entry vector.
    ///
    /// Panics if `entries.len() != rows * cols`.
    pub fn from_vec(rows: usize, cols: usize, entries: Vec<BigInt>) -> Self {
        assert_eq!(
            entries.len(),
            rows * cols,
            "entry count must equal rows * cols"
        );
        Self {
            rows,
            cols,
            entries,
        }
    }

    /// Builds a matrix from small-integer rows. All rows must have equal length.
    pub fn from_rows<R: AsRef<[i64]>>(rows: &[R]) -> Self {
        let cols = rows.first().map_or(0, |r| r.as_ref().len());
        let mut entries = Vec::with_capacity(rows.len() * cols);
        for r in rows {
            let r = r.as_ref();
            assert_eq!(r.len(), cols, "ragged rows");
            entries.extend(r.iter().map(|&v| BigInt::from(v)));
        }
        Self {
            rows: rows.len(),
            cols,
            entries,
        }
    }

    /// A `rows x 0` or `0 x cols` matrix is legal; `from_rows` cannot express
    /// the former so it gets its own constructor.
    pub fn empty(rows: usize, cols: usize) -> Self {
        debug_assert!(rows == 0 || cols == 0);
        Self::zeros(rows, cols)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn entries(&self) -> &[BigInt] {
        &self.entries
    }

    pub fn row(&self, i: usize) -> &[BigInt] {
        &self.entries[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<BigInt> {
        (0..self.rows).map(|i| self[(i, j)].clone()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(Zero::is_zero)
    }

    pub fn column_is_zero(&self, j: usize) -> bool {
        (0..self.rows).all(|i| self[(i, j)].is_zero())
    }

    /// Entrywise sum of all columns, i.e. `self * (1, ..., 1)^t`.
    pub fn column_sum(&self) -> Vec<BigInt> {
        (0..self.rows).map(|i| self.row(i).iter().sum()).collect()
    }

    /// Entries converted to `i64`, or `None` if any entry overflows.
    pub fn to_i64_rows(&self) -> Option<Vec<Vec<i64>>> {
        use num_traits::ToPrimitive;
        (0..self.rows)
            .map(|i| self.row(i).iter().map(ToPrimitive::to_i64).collect())
            .collect()
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)].clone();
            }
        }
        t
    }

    pub fn without_row(&self, r: usize) -> Self {
        assert!(r < self.rows);
        let entries = (0..self.rows)
            .filter(|&i| i != r)
            .flat_map(|i| self.row(i).iter().cloned())
            .collect();
        Self::from_vec(self.rows - 1, self.cols, entries)
    }

    pub fn without_column(&self, c: usize) -> Self {
        assert!(c < self.cols);
        let entries = (0..self.rows)
            .flat_map(|i| {
                self.row(i)
                    .iter()
                    .enumerate()
                    .filter(move |&(j, _)| j != c)
                    .map(|(_, v)| v.clone())
            })
            .collect();
        Self::from_vec(self.rows, self.cols - 1, entries)
    }

    /// Keeps the listed rows, in the listed order.
    pub fn select_rows(&self, which: &[usize]) -> Self {
        let entries = which
            .iter()
            .flat_map(|&i| self.row(i).iter().cloned())
            .collect();
        Self::from_vec(which.len(), self.cols, entries)
    }

    /// Appends a row at the bottom.
    pub fn with_row(&self, row: &[BigInt]) -> Self {
        assert_eq!(row.len(), self.cols);
        let mut entries = self.entries.clone();
        entries.extend(row.iter().cloned());
        Self::from_vec(self.rows + 1, self.cols, entries)
    }

    pub fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.entries.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    pub fn swap_columns(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for i in 0..self.rows {
            self.entries.swap(i * self.cols + a, i * self.cols + b);
        }
    }

    pub fn negate_row(&mut self, r: usize) {
        for j in 0..self.cols {
            let v = &mut self[(r, j)];
            *v = -std::mem::take(v);
        }
    }

    pub fn negate_column(&mut self, c: usize) {
        for i in 0..self.rows {
            let v = &mut self[(i, c)];
            *v = -std::mem::take(v);
        }
    }

    /// `row[target] += factor * row[source]`
    pub fn add_row_multiple(&mut self, target: usize, source: usize, factor: &BigInt) {
        assert_ne!(target, source);
        if factor.is_zero() {
            return;
        }
        for j in 0..self.cols {
            let delta = &self[(source, j)] * factor;
            self[(target, j)] += delta;
        }
    }

    /// `col[target] += factor * col[source]`
    pub fn add_column_multiple(&mut self, target: usize, source: usize, factor: &BigInt) {
        assert_ne!(target, source);
        if factor.is_zero() {
            return;
        }
        for i in 0..self.rows {
            let delta = &self[(i, source)] * factor;
            self[(i, target)] += delta;
        }
    }

    pub fn max_abs(&self) -> BigInt {
        self.entries
            .iter()
            .map(Signed::abs)
            .max()
            .unwrap_or_else(BigInt::zero)
    }
}

impl Index<(usize, usize)> for IntMatrix {
    type Output = BigInt;

    fn index(&self, (i, j): (usize, usize)) -> &BigInt {
        debug_assert!(i < self.rows && j < self.cols);
        &self.entries[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for IntMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut BigInt {
        debug_assert!(i < self.rows && j < self.cols);
        &mut self.entries[i * self.cols + j]
    }
}

impl Mul for &IntMatrix {
    type Output = IntMatrix;

    fn mul(self, rhs: &IntMatrix) -> IntMatrix {
        assert_eq!(self.cols, rhs.rows, "dimension mismatch in matrix product");
        let mut out = IntMatrix::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..rhs.cols {
                    let prod = a * &rhs[(k, j)];
                    out[(i, j)] += prod;
                }
            }
        }
        out
    }
}

impl fmt::Debug for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "IntMatrix{}x{}{}", self.rows, self.cols, self)
    }
}

impl fmt::Display for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for i in 0..self.rows {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "[")?;
            for (j, v) in self.row(i).iter().enumerate() {
                if j > 0 {
                    write!(f, ",")?;
                }
                write!(f, "{v}")?;
            }
            write!(f, "]")?;
        }
        write!(f, "]")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn product_with_identity() {
        let m = IntMatrix::from_rows(&[[1, 2, 3], [4, 5, 6]]);
        assert_eq!(&m * &IntMatrix::identity(3), m);
        assert_eq!(&IntMatrix::identity(2) * &m, m);
    }

    #[test]
    fn deletions_and_selection() {
        let m = IntMatrix::from_rows(&[[1, 2, 3], [4, 5, 6], [7, 8, 9]]);
        assert_eq!(
            m.without_row(1),
            IntMatrix::from_rows(&[[1, 2, 3], [7, 8, 9]])
        );
        assert_eq!(
            m.without_column(0),
            IntMatrix::from_rows(&[[2, 3], [5, 6], [8, 9]])
        );
        assert_eq!(
            m.select_rows(&[2, 0]),
            IntMatrix::from_rows(&[[7, 8, 9], [1, 2, 3]])
        );
        assert_eq!(
            m.without_column(0)
                .without_column(0)
                .without_column(0)
                .shape(),
            (3, 0)
        );
    }

    #[test]
    fn elementary_operations() {
        let mut m = IntMatrix::from_rows(&[[1, 2], [3, 4]]);
        m.add_column_multiple(1, 0, &BigInt::from(-2));
        assert_eq!(m, IntMatrix::from_rows(&[[1, 0], [3, -2]]));
        m.swap_rows(0, 1);
        m.negate_column(1);
        assert_eq!(m, IntMatrix::from_rows(&[[3, 2], [1, 0]]));
        assert_eq!(m.to_string(), "[[3,2],[1,0]]");
    }
}
