//! Fox n-colorings of a diagram: coloring matrix, determinant, enumeration,
//! classification and palette minima.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::ToPrimitive;

use crate::diagram::LinkDiagram;
use crate::exactlin::{first_minor_abs, solve_mod_n, IntMatrix, KernelIter, ModKernel};

pub const DEFAULT_CAP: u64 = 1_000_000;

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum ColoringError {
    #[error("modulus must be at least 2, got {0}")]
    ModulusTooSmall(u64),
    #[error("enumeration cap of {cap} solutions exceeded")]
    CapExceeded { cap: u64 },
    #[error("coloring has {found} values but the diagram has {expected} arcs")]
    LengthMismatch { expected: usize, found: usize },
    #[error("coloring condition fails at crossing {crossing}")]
    NotAColoring { crossing: usize },
}

/// Residues mod `modulus`, one per arc.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Coloring {
    modulus: u64,
    values: Vec<u64>,
}

impl Coloring {
    /// Checks the crossing condition `2 over == under_in + under_out (mod n)`
    /// everywhere on `d`. Values are reduced mod `n`.
    pub fn on(d: &LinkDiagram, n: u64, values: &[i64]) -> Result<Self, ColoringError> {
        check_modulus(n)?;
        if values.len() != d.arc_count() {
            return Err(ColoringError::LengthMismatch {
                expected: d.arc_count(),
                found: values.len(),
            });
        }
        let values: Vec<u64> = values
            .iter()
            .map(|v| v.rem_euclid(n as i64) as u64)
            .collect();
        let c = Self { modulus: n, values };
        match c.first_violation(d) {
            Some(crossing) => Err(ColoringError::NotAColoring { crossing }),
            None => Ok(c),
        }
    }

    /// Unchecked constructor for residues known to solve the coloring system.
    pub(crate) fn from_residues(modulus: u64, values: Vec<u64>) -> Self {
        Self { modulus, values }
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn values(&self) -> &[u64] {
        &self.values
    }

    pub fn palette_size(&self) -> usize {
        self.values.iter().collect::<BTreeSet<_>>().len()
    }

    pub fn first_violation(&self, d: &LinkDiagram) -> Option<usize> {
        let n = self.modulus as u128;
        d.crossings().iter().position(|x| {
            let v = |a: usize| self.values[a] as u128;
            !(2 * v(x.over) + 2 * n - v(x.under_in) - v(x.under_out)).is_multiple_of(n)
        })
    }

    /// `a * gamma + b`, which is again a coloring of the same diagram.
    pub fn affine_image(&self, a: u64, b: u64) -> Self {
        let n = self.modulus as u128;
        let values = self
            .values
            .iter()
            .map(|&v| ((a as u128 * v as u128 + b as u128) % n) as u64)
            .collect();
        Self {
            modulus: self.modulus,
            values,
        }
    }
}

impl fmt::Display for Coloring {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, v) in self.values.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{v}")?;
        }
        write!(f, ") mod {}", self.modulus)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ColoringClass {
    pub is_trivial: bool,
    /// Primes `p | n` for which every value is congruent mod `p`.
    pub p_trivial_primes: Vec<u64>,
    pub is_effective: bool,
    pub palette_size: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ColoringFilter {
    All,
    Nontrivial,
    Effective,
}

impl ColoringFilter {
    pub fn accepts(self, class: &ColoringClass) -> bool {
        match self {
            Self::All => true,
            Self::Nontrivial => !class.is_trivial,
            Self::Effective => class.is_effective,
        }
    }
}

impl FromStr for ColoringFilter {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "all" => Ok(Self::All),
            "nontrivial" => Ok(Self::Nontrivial),
            "effective" => Ok(Self::Effective),
            _ => Err(format!(
                "unknown filter '{s}' (expected all, nontrivial or effective)"
            )),
        }
    }
}

impl fmt::Display for ColoringFilter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::All => "all",
            Self::Nontrivial => "nontrivial",
            Self::Effective => "effective",
        })
    }
}

/// Distinct prime factors of `n`, ascending, by trial division.
pub fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= n {
        if n.is_multiple_of(p) {
            out.push(p);
            while n.is_multiple_of(p) {
                n /= p;
            }
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// Whether all entries agree mod `p`.
pub fn is_p_trivial(values: &[u64], p: u64) -> bool {
    values.windows(2).all(|w| w[0] % p == w[1] % p)
}

/// Not `p`-trivial for any prime `p | n`.
pub fn is_n_effective(values: &[u64], n: u64) -> bool {
    prime_factors(n)
        .into_iter()
        .all(|p| !is_p_trivial(values, p))
}

pub fn classify(c: &Coloring) -> ColoringClass {
    let primes = prime_factors(c.modulus);
    classify_with(c, &primes)
}

fn classify_with(c: &Coloring, primes: &[u64]) -> ColoringClass {
    let is_trivial = c.values.windows(2).all(|w| w[0] == w[1]);
    let p_trivial_primes: Vec<u64> = primes
        .iter()
        .copied()
        .filter(|&p| is_p_trivial(&c.values, p))
        .collect();
    ColoringClass {
        is_trivial,
        is_effective: !is_trivial && p_trivial_primes.is_empty(),
        p_trivial_primes,
        palette_size: c.palette_size(),
    }
}

/// Crossing-by-arc matrix: row `i` holds -2 at the over arc of crossing `i`
/// and +1 at each under arc, accumulated when arcs coincide.
pub fn coloring_matrix(d: &LinkDiagram) -> IntMatrix {
    let mut m = IntMatrix::zeros(d.crossing_count(), d.arc_count());
    for (i, x) in d.crossings().iter().enumerate() {
        m[(i, x.over)] -= 2;
        m[(i, x.under_in)] += 1;
        m[(i, x.under_out)] += 1;
    }
    m
}

/// Link determinant: `|first minor|` of the coloring matrix, dropping the
/// last row and column.
pub fn determinant(d: &LinkDiagram) -> BigUint {
    let m = coloring_matrix(d);
    let k = m.rows();
    first_minor_abs(&m, k - 1, k - 1).expect("coloring matrix is square and nonempty")
}

fn check_modulus(n: u64) -> Result<(), ColoringError> {
    if n < 2 {
        Err(ColoringError::ModulusTooSmall(n))
    } else {
        Ok(())
    }
}

/// Streams the colorings of `d` mod `n` that pass `filter`, in Smith-coordinate
/// order. At most `cap` raw solutions are examined; if more remain, the
/// stream yields one `Err(CapExceeded)` and ends.
pub fn enumerate_colorings(
    d: &LinkDiagram,
    n: u64,
    filter: ColoringFilter,
    cap: u64,
) -> Result<ColoringStream, ColoringError> {
    check_modulus(n)?;
    let kernel = solve_mod_n(&coloring_matrix(d), n);
    Ok(ColoringStream::new(kernel, n, filter, cap, false))
}

/// Like [`enumerate_colorings`] but yields one representative per orbit of
/// the affine action `gamma -> a gamma + b` (`a` a unit mod `n`): the first
/// arc is colored 0 and the vector is lexicographically least among its
/// unit multiples. The orbit preserves triviality, effectiveness and palette
/// size.
pub fn enumerate_canonical_colorings(
    d: &LinkDiagram,
    n: u64,
    filter: ColoringFilter,
    cap: u64,
) -> Result<ColoringStream, ColoringError> {
    check_modulus(n)?;
    // pinning arc 0 to color 0 is one more linear equation
    let mut pin = vec![BigInt::from(0); d.arc_count()];
    pin[0] = BigInt::from(1);
    let m = coloring_matrix(d).with_row(&pin);
    let kernel = solve_mod_n(&m, n);
    Ok(ColoringStream::new(kernel, n, filter, cap, true))
}

/// Whether `values` is the canonical representative of its affine orbit.
pub fn is_affine_canonical(values: &[u64], n: u64) -> bool {
    if values.first().is_some_and(|&v| v != 0) {
        return false;
    }
    units(n).into_iter().all(|u| {
        let scaled = values
            .iter()
            .map(|&v| ((u as u128 * v as u128) % n as u128) as u64);
        scaled.cmp(values.iter().copied()) != std::cmp::Ordering::Less
    })
}

pub fn units(n: u64) -> Vec<u64> {
    (1..n).filter(|u| u.gcd(&n) == 1).collect()
}

pub struct ColoringStream {
    iter: KernelIter,
    total: BigUint,
    modulus: u64,
    primes: Vec<u64>,
    units: Vec<u64>,
    filter: ColoringFilter,
    cap: u64,
    examined: u64,
    canonical: bool,
    finished: bool,
}

impl ColoringStream {
    fn new(
        kernel: ModKernel,
        modulus: u64,
        filter: ColoringFilter,
        cap: u64,
        canonical: bool,
    ) -> Self {
        let total = kernel.count();
        Self {
            iter: kernel.into_iter(),
            total,
            modulus,
            primes: prime_factors(modulus),
            units: if canonical {
                units(modulus)
            } else {
                Vec::new()
            },
            filter,
            cap,
            examined: 0,
            canonical,
            finished: false,
        }
    }

    /// Size of the solution space being scanned.
    pub fn solution_count(&self) -> &BigUint {
        &self.total
    }

    /// Raw solutions examined so far.
    pub fn examined(&self) -> u64 {
        self.examined
    }

    fn canonical_ok(&self, values: &[u64]) -> bool {
        let n = self.modulus as u128;
        self.units.iter().all(|&u| {
            let scaled = values.iter().map(|&v| ((u as u128 * v as u128) % n) as u64);
            scaled.cmp(values.iter().copied()) != std::cmp::Ordering::Less
        })
    }
}

impl Iterator for ColoringStream {
    type Item = Result<(Coloring, ColoringClass), ColoringError>;

    fn next(&mut self) -> Option<Self::Item> {
        if self.finished {
            return None;
        }
        loop {
            if self.examined >= self.cap && self.total.to_u64().is_none_or(|t| t > self.examined) {
                self.finished = true;
                return Some(Err(ColoringError::CapExceeded { cap: self.cap }));
            }
            let Some(values) = self.iter.next() else {
                self.finished = true;
                return None;
            };
            self.examined += 1;
            if self.canonical && !self.canonical_ok(&values) {
                continue;
            }
            let c = Coloring::from_residues(self.modulus, values);
            let class = classify_with(&c, &self.primes);
            if self.filter.accepts(&class) {
                return Some(Ok((c, class)));
            }
        }
    }
}

/// Least palette size over colorings of `d` passing `filter`, or `None` if
/// there are none. Only affine-canonical representatives are scanned.
pub fn min_colors_on_diagram(
    d: &LinkDiagram,
    n: u64,
    filter: ColoringFilter,
    cap: u64,
) -> Result<Option<usize>, ColoringError> {
    let mut best: Option<usize> = None;
    for item in enumerate_canonical_colorings(d, n, filter, cap)? {
        let (_, class) = item?;
        best = Some(best.map_or(class.palette_size, |b| b.min(class.palette_size)));
    }
    Ok(best)
}
