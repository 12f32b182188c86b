//! Palette lower bound for effective colorings, replayed as a certificate.
//!
//! Starting from the coloring matrix `A` of a diagram with an effective
//! coloring `x0` mod `n` using `l` colors:
//!
//! 1. `A1`: fold every column into the nearest earlier column of the same
//!    color (k x l), carrying `y0`.
//! 2. `A2`: replace the last column by the sum of all columns (it becomes
//!    zero) and shift the solution so its last entry is 0 (`y1`).
//! 3. `A3`: keep the first `l - 1` independent rows.
//! 4. `B`: drop the zero last column of `A3`; `B` is square and nonsingular.
//!
//! Every prime factor of `n` divides some invariant factor of `B`, so
//! `n <= |det B|`, and each row of `B` has one of nine shapes that force
//! `|det B| <= 2^(l-1)`. Hence `2^(l-1) >= n`.

use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;

use crate::coloring::{
    classify, coloring_matrix, determinant, is_n_effective, prime_factors, Coloring, ColoringError,
};
use crate::diagram::LinkDiagram;
use crate::exactlin::{
    det, greedy_independent_rows, is_solution_mod, rank, smith_normal_form, unimodular_inverse,
    IntMatrix, LinalgError,
};

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum BoundError {
    #[error(transparent)]
    Linalg(#[from] LinalgError),
    #[error(transparent)]
    Coloring(#[from] ColoringError),
    #[error("color vector has {found} entries, matrix has {expected} columns")]
    LengthMismatch { expected: usize, found: usize },
    #[error("columns do not sum to the zero vector")]
    ColumnSumNonzero,
    #[error("vector does not solve the system mod {0}")]
    NotASolution(u64),
    #[error("rank is {rank}, expected {expected}")]
    RankDeficient { rank: usize, expected: usize },
    #[error("last column is not zero")]
    LastColumnNotZero,
    #[error("row {row} matches none of the nine row types")]
    UnclassifiableRow { row: usize },
    #[error("coloring is not effective")]
    NotEffective,
    #[error("diagram has determinant 0")]
    ZeroDeterminant,
}

/// Multiset of nonzero entries in a row.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum RowType {
    /// {1, 1, -2}
    #[serde(rename = "i")]
    I,
    /// {2, -2}
    #[serde(rename = "ii")]
    II,
    /// {1, -1}
    #[serde(rename = "iii")]
    III,
    /// {1, 1}
    #[serde(rename = "iv")]
    IV,
    /// {1, -2}
    #[serde(rename = "v")]
    V,
    /// {1}
    #[serde(rename = "vi")]
    VI,
    /// {-1}
    #[serde(rename = "vii")]
    VII,
    /// {2}
    #[serde(rename = "viii")]
    VIII,
    /// {-2}
    #[serde(rename = "ix")]
    IX,
}

impl RowType {
    pub const ALL: [RowType; 9] = [
        RowType::I,
        RowType::II,
        RowType::III,
        RowType::IV,
        RowType::V,
        RowType::VI,
        RowType::VII,
        RowType::VIII,
        RowType::IX,
    ];

    /// Nonzero entries, ascending.
    pub fn entries(self) -> &'static [i64] {
        match self {
            RowType::I => &[-2, 1, 1],
            RowType::II => &[-2, 2],
            RowType::III => &[-1, 1],
            RowType::IV => &[1, 1],
            RowType::V => &[-2, 1],
            RowType::VI => &[1],
            RowType::VII => &[-1],
            RowType::VIII => &[2],
            RowType::IX => &[-2],
        }
    }

    pub fn tag(self) -> &'static str {
        match self {
            RowType::I => "i",
            RowType::II => "ii",
            RowType::III => "iii",
            RowType::IV => "iv",
            RowType::V => "v",
            RowType::VI => "vi",
            RowType::VII => "vii",
            RowType::VIII => "viii",
            RowType::IX => "ix",
        }
    }
}

impl fmt::Display for RowType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

/// Row type of `row`, or `None` if its nonzero entries match no type.
pub fn classify_row(row: &[BigInt]) -> Option<RowType> {
    let mut nonzero = Vec::with_capacity(3);
    for v in row.iter().filter(|v| !v.is_zero()) {
        if nonzero.len() == 3 {
            return None;
        }
        nonzero.push(v.to_i64()?);
    }
    nonzero.sort_unstable();
    RowType::ALL
        .into_iter()
        .find(|t| t.entries() == nonzero.as_slice())
}

/// `|det m| <= 2^size` for a square matrix whose rows all have a row type.
pub fn check_det_bound_claim(m: &IntMatrix) -> Result<bool, BoundError> {
    if let Some(row) = (0..m.rows()).find(|&i| classify_row(m.row(i)).is_none()) {
        return Err(BoundError::UnclassifiableRow { row });
    }
    let d = det(m)?;
    Ok(d.magnitude() <= &pow2(m.rows()))
}

/// Least `l` with `2^(l-1) >= n`, i.e. `ceil(1 + log2 n)`.
pub fn palette_lower_bound(n: u64) -> usize {
    let mut l = 1;
    while pow2(l - 1) < BigUint::from(n) {
        l += 1;
    }
    l
}

fn pow2(e: usize) -> BigUint {
    BigUint::one() << e
}

/// Folds each column into the nearest earlier column of the same color,
/// scanning from the last column down. Returns `A1` and the surviving colors.
pub fn merge_columns(a: &IntMatrix, colors: &[u64]) -> Result<(IntMatrix, Vec<u64>), BoundError> {
    if colors.len() != a.cols() {
        return Err(BoundError::LengthMismatch {
            expected: a.cols(),
            found: colors.len(),
        });
    }
    let mut m = a.clone();
    let mut colors = colors.to_vec();
    for j in (1..colors.len()).rev() {
        if let Some(i) = (0..j).rev().find(|&i| colors[i] == colors[j]) {
            m.add_column_multiple(i, j, &BigInt::one());
            m = m.without_column(j);
            colors.remove(j);
        }
    }
    Ok((m, colors))
}

/// Adds every other column to the last one (which becomes zero, given zero
/// column sums) and shifts the solution by its last entry.
pub fn zero_last_column(
    a1: &IntMatrix,
    y0: &[u64],
    n: u64,
) -> Result<(IntMatrix, Vec<u64>), BoundError> {
    if y0.len() != a1.cols() {
        return Err(BoundError::LengthMismatch {
            expected: a1.cols(),
            found: y0.len(),
        });
    }
    if a1.column_sum().iter().any(|v| !v.is_zero()) {
        return Err(BoundError::ColumnSumNonzero);
    }
    if !is_solution_mod(a1, y0, n) {
        return Err(BoundError::NotASolution(n));
    }
    let l = a1.cols();
    let mut a2 = a1.clone();
    for j in 0..l - 1 {
        a2.add_column_multiple(l - 1, j, &BigInt::one());
    }
    let shift = y0[l - 1] % n;
    let y1 = y0.iter().map(|&v| (v % n + n - shift) % n).collect();
    Ok((a2, y1))
}

/// First `cols - 1` linearly independent rows, in order.
pub fn select_rows(a2: &IntMatrix) -> Result<IntMatrix, BoundError> {
    let expected = a2.cols().saturating_sub(1);
    let chosen = greedy_independent_rows(a2);
    if chosen.len() != expected {
        return Err(BoundError::RankDeficient {
            rank: chosen.len(),
            expected,
        });
    }
    Ok(a2.select_rows(&chosen))
}

pub fn drop_last_column(a3: &IntMatrix) -> Result<IntMatrix, BoundError> {
    if a3.cols() == 0 || !a3.column_is_zero(a3.cols() - 1) {
        return Err(BoundError::LastColumnNotZero);
    }
    Ok(a3.without_column(a3.cols() - 1))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Inequalities {
    /// `n <= |det B|`
    pub n_le_det_b: bool,
    /// `|det B| <= 2^(l-1)`
    pub det_b_le_pow: bool,
    /// `2^(l-1) >= n`, i.e. `l >= 1 + log2 n`
    pub palette_bound: bool,
}

impl Inequalities {
    pub fn all(&self) -> bool {
        self.n_le_det_b && self.det_b_le_pow && self.palette_bound
    }
}

/// Internal consistency checks of the pipeline.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Audit {
    /// A k x k, A1 k x l with zero column sum, A2 k x l with zero last column,
    /// A3 (l-1) x l of rank l-1, B square with det B != 0.
    pub shapes: bool,
    /// The carried vector solves each stage mod n and stays n-effective.
    pub carriage: bool,
    /// Rows of A (unless kinked), A1, A2 (zero rows aside), A3 and B all typed.
    pub row_taxonomy: bool,
    /// `|det B| <= 2^(l-1)` via the row-type claim.
    pub claim: bool,
    /// Each prime p | n divides an invariant factor d_i of B with the
    /// carried Smith-coordinate y_i nonzero mod p.
    pub prime_divisibility: bool,
}

impl Audit {
    pub fn all(&self) -> bool {
        self.shapes && self.carriage && self.row_taxonomy && self.claim && self.prime_divisibility
    }
}

/// Full record of one pipeline run.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BoundCertificate {
    pub modulus: u64,
    pub diagram_name: Option<String>,
    pub coloring: Vec<u64>,
    pub palette_size: usize,
    pub a: IntMatrix,
    pub a1: IntMatrix,
    pub a2: IntMatrix,
    pub a3: IntMatrix,
    pub b: IntMatrix,
    pub x0: Vec<u64>,
    pub y0: Vec<u64>,
    pub y1: Vec<u64>,
    /// `y1` in the Smith coordinates of `B` (last entry 0).
    pub y1_smith: Vec<u64>,
    pub det_b: BigInt,
    pub snf_diagonal_b: Vec<BigInt>,
    pub row_types_of_b: Vec<Option<RowType>>,
    pub inequalities: Inequalities,
    pub audit: Audit,
    pub kink_flag: bool,
}

impl BoundCertificate {
    pub fn is_valid(&self) -> bool {
        self.inequalities.all() && self.audit.all()
    }

    /// Flat JSON-lines record.
    pub fn record(&self) -> CertificateRecord {
        CertificateRecord {
            n: self.modulus,
            diagram_name: self.diagram_name.clone(),
            coloring: self.coloring.clone(),
            l: self.palette_size,
            det_b: match self.det_b.to_i64() {
                Some(v) => serde_json::Value::from(v),
                None => serde_json::Value::from(self.det_b.to_string()),
            },
            row_types: self
                .row_types_of_b
                .iter()
                .map(|t| t.map(RowType::tag))
                .collect(),
            checks: self.inequalities,
            kink_flag: self.kink_flag,
            valid: self.is_valid(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CertificateRecord {
    pub n: u64,
    pub diagram_name: Option<String>,
    pub coloring: Vec<u64>,
    pub l: usize,
    #[serde(rename = "det_B")]
    pub det_b: serde_json::Value,
    pub row_types: Vec<Option<&'static str>>,
    pub checks: Inequalities,
    pub kink_flag: bool,
    pub valid: bool,
}

/// Runs the four-stage reduction on `d` colored by `c` and records every check.
///
/// Precondition failures (non-effective coloring, zero determinant, a vector
/// that is not a coloring of `d`) are errors. A failed check after that is
/// not an error: it yields a certificate with `is_valid() == false`.
pub fn verify(
    d: &LinkDiagram,
    c: &Coloring,
    diagram_name: Option<&str>,
) -> Result<BoundCertificate, BoundError> {
    let n = c.modulus();
    if c.values().len() != d.arc_count() {
        return Err(BoundError::LengthMismatch {
            expected: d.arc_count(),
            found: c.values().len(),
        });
    }
    if let Some(crossing) = c.first_violation(d) {
        return Err(ColoringError::NotAColoring { crossing }.into());
    }
    if !classify(c).is_effective {
        return Err(BoundError::NotEffective);
    }
    if determinant(d).is_zero() {
        return Err(BoundError::ZeroDeterminant);
    }

    let kink_flag = d.has_kink();
    let k = d.arc_count();
    let a = coloring_matrix(d);
    let x0 = c.values().to_vec();
    let (a1, y0) = merge_columns(&a, &x0)?;
    let l = a1.cols();
    let (a2, y1) = zero_last_column(&a1, &y0, n)?;
    let a3 = select_rows(&a2)?;
    let b = drop_last_column(&a3)?;
    let det_b = det(&b)?;

    let snf = smith_normal_form(&b);
    let y1_head = &y1[..l - 1];
    let y1_smith: Vec<u64> = {
        // z = R^{-1} y, so that (L B R) z = L B y
        let r_inv = unimodular_inverse(&snf.right)?;
        let mut z: Vec<u64> = (0..l - 1)
            .map(|i| {
                let s: BigInt = r_inv
                    .row(i)
                    .iter()
                    .zip(y1_head)
                    .map(|(r, &v)| r * BigInt::from(v))
                    .sum();
                crate::exactlin::residue(&s, n)
            })
            .collect();
        z.push(0);
        z
    };

    let effective = |v: &[u64]| is_n_effective(v, n);
    let shapes = a.shape() == (k, k)
        && a1.shape() == (k, l)
        && a1.column_sum().iter().all(Zero::is_zero)
        && a2.shape() == (k, l)
        && a2.column_is_zero(l - 1)
        && a3.shape() == (l - 1, l)
        && rank(&a3) == l - 1
        && b.shape() == (l - 1, l - 1)
        && !det_b.is_zero();
    let mut snf_system = IntMatrix::zeros(l - 1, l);
    for (i, d_i) in snf.diagonal.iter().enumerate() {
        snf_system[(i, i)] = d_i.clone();
    }
    let carriage = is_solution_mod(&a, &x0, n)
        && effective(&x0)
        && is_solution_mod(&a1, &y0, n)
        && effective(&y0)
        && is_solution_mod(&a2, &y1, n)
        && effective(&y1)
        && y1[l - 1] == 0
        && is_solution_mod(&a3, &y1, n)
        && is_solution_mod(&snf_system, &y1_smith, n)
        && effective(&y1_smith);

    let typed_or_zero = |m: &IntMatrix| {
        (0..m.rows())
            .all(|i| m.row(i).iter().all(Zero::is_zero) || classify_row(m.row(i)).is_some())
    };
    let all_typed = |m: &IntMatrix| (0..m.rows()).all(|i| classify_row(m.row(i)).is_some());
    let row_types_of_b: Vec<Option<RowType>> =
        (0..b.rows()).map(|i| classify_row(b.row(i))).collect();
    let row_taxonomy = (kink_flag || all_typed(&a))
        && typed_or_zero(&a1)
        && typed_or_zero(&a2)
        && all_typed(&a3)
        && row_types_of_b.iter().all(Option::is_some);
    let claim = check_det_bound_claim(&b).unwrap_or(false);

    let prime_divisibility = prime_factors(n).into_iter().all(|p| {
        let p_big = BigInt::from(p);
        let divides_det = det_b.is_multiple_of(&p_big);
        let witnessed = snf
            .diagonal
            .iter()
            .zip(&y1_smith)
            .any(|(d_i, &y_i)| y_i % p != 0 && d_i.is_multiple_of(&p_big));
        divides_det && witnessed
    });

    let abs_det = det_b.abs();
    let pow = BigInt::from(pow2(l - 1));
    let inequalities = Inequalities {
        n_le_det_b: BigInt::from(n) <= abs_det,
        det_b_le_pow: abs_det <= pow,
        palette_bound: pow >= BigInt::from(n),
    };

    Ok(BoundCertificate {
        modulus: n,
        diagram_name: diagram_name.map(str::to_string),
        coloring: x0.clone(),
        palette_size: l,
        a,
        a1,
        a2,
        a3,
        b,
        x0,
        y0,
        y1,
        y1_smith,
        det_b,
        snf_diagonal_b: snf.diagonal,
        row_types_of_b,
        inequalities,
        audit: Audit {
            shapes,
            carriage,
            row_taxonomy,
            claim,
            prime_divisibility,
        },
        kink_flag,
    })
}
