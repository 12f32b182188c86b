//! Kernels of integer matrices over `Z/n`, read off from the Smith form.

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, ToPrimitive};

use super::{smith_normal_form, IntMatrix};

/// Reduces an integer to its least non-negative residue mod `n`.
pub fn residue(v: &BigInt, n: u64) -> u64 {
    v.mod_floor(&BigInt::from(n))
        .to_u64()
        .expect("residue below modulus fits in u64")
}

/// `m * x == 0 (mod n)`.
pub fn is_solution_mod(m: &IntMatrix, x: &[u64], n: u64) -> bool {
    assert_eq!(x.len(), m.cols());
    let modulus = BigInt::from(n);
    (0..m.rows()).all(|i| {
        let s: BigInt = m
            .row(i)
            .iter()
            .zip(x)
            .map(|(a, &v)| a * BigInt::from(v))
            .sum();
        s.is_multiple_of(&modulus)
    })
}

/// The solution group `{x in (Z/n)^cols : m x == 0 (mod n)}`.
///
/// With `left * m * right = D`, substituting `x = right * z` turns the system
/// into `d_i z_i == 0 (mod n)`, so `z_i` runs over multiples of
/// `n / gcd(d_i, n)` for the first `rank` coordinates and over all of `Z/n`
/// for the rest.
#[derive(Clone, Debug)]
pub struct ModKernel {
    modulus: u64,
    /// per coordinate of `z`: (step, number of values)
    ranges: Vec<(u64, u64)>,
    /// columns of `right`, reduced mod n
    basis: Vec<Vec<u64>>,
    dim: usize,
}

pub fn solve_mod_n(m: &IntMatrix, n: u64) -> ModKernel {
    assert!(n >= 2, "modulus must be at least 2");
    let snf = smith_normal_form(m);
    let cols = m.cols();
    let ranges = (0..cols)
        .map(|i| match snf.diagonal.get(i) {
            Some(d) => {
                let g = residue(d, n).gcd(&n);
                (n / g, g)
            }
            None => (1, n),
        })
        .collect();
    let basis = (0..cols)
        .map(|i| (0..cols).map(|j| residue(&snf.right[(j, i)], n)).collect())
        .collect();
    ModKernel {
        modulus: n,
        ranges,
        basis,
        dim: cols,
    }
}

impl ModKernel {
    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    /// Number of unknowns.
    pub fn dim(&self) -> usize {
        self.dim
    }

    /// `(step, count)` for each coordinate of the Smith basis.
    pub fn ranges(&self) -> &[(u64, u64)] {
        &self.ranges
    }

    /// Exact number of solutions, `n^(cols - rank) * prod gcd(d_i, n)`.
    pub fn count(&self) -> BigUint {
        self.ranges
            .iter()
            .fold(BigUint::one(), |acc, &(_, c)| acc * BigUint::from(c))
    }

    /// Solutions in lexicographic order of their Smith coordinates.
    pub fn iter(&self) -> KernelIter {
        self.clone().into_iter()
    }

    fn assemble(&self, digits: &[u64]) -> Vec<u64> {
        let n = self.modulus as u128;
        let mut x = vec![0u128; self.dim];
        for (i, &d) in digits.iter().enumerate() {
            if d == 0 {
                continue;
            }
            let z = (d as u128 * self.ranges[i].0 as u128) % n;
            for (xj, &b) in x.iter_mut().zip(&self.basis[i]) {
                *xj = (*xj + z * b as u128) % n;
            }
        }
        x.into_iter().map(|v| v as u64).collect()
    }
}

impl IntoIterator for ModKernel {
    type Item = Vec<u64>;
    type IntoIter = KernelIter;

    fn into_iter(self) -> KernelIter {
        let digits = vec![0; self.dim];
        KernelIter {
            kernel: self,
            digits,
            done: false,
        }
    }
}

pub struct KernelIter {
    kernel: ModKernel,
    digits: Vec<u64>,
    done: bool,
}

impl Iterator for KernelIter {
    type Item = Vec<u64>;

    fn next(&mut self) -> Option<Vec<u64>> {
        if self.done {
            return None;
        }
        let out = self.kernel.assemble(&self.digits);
        // odometer, last coordinate fastest
        let mut i = self.digits.len();
        loop {
            if i == 0 {
                self.done = true;
                break;
            }
            i -= 1;
            self.digits[i] += 1;
            if self.digits[i] < self.kernel.ranges[i].1 {
                break;
            }
            self.digits[i] = 0;
        }
        Some(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::BTreeSet;

    fn brute_force(m: &IntMatrix, n: u64) -> BTreeSet<Vec<u64>> {
        let cols = m.cols();
        let total = (n as usize).pow(cols as u32);
        (0..total)
            .map(|mut code| {
                (0..cols)
                    .map(|_| {
                        let v = (code % n as usize) as u64;
                        code /= n as usize;
                        v
                    })
                    .collect::<Vec<_>>()
            })
            .filter(|x| is_solution_mod(m, x, n))
            .collect()
    }

    fn trefoil() -> IntMatrix {
        IntMatrix::from_rows(&[[-2, 1, 1], [1, -2, 1], [1, 1, -2]])
    }

    #[test]
    fn trefoil_mod_3_has_nine_solutions() {
        let k = solve_mod_n(&trefoil(), 3);
        assert_eq!(k.count(), BigUint::from(9u32));
        let all: BTreeSet<_> = k.iter().collect();
        assert_eq!(all, brute_force(&trefoil(), 3));
        assert_eq!(all.len(), 9);
    }

    #[test]
    fn trefoil_mod_2_only_constants() {
        let k = solve_mod_n(&trefoil(), 2);
        let all: BTreeSet<_> = k.iter().collect();
        assert_eq!(all, BTreeSet::from([vec![0, 0, 0], vec![1, 1, 1]]));
    }

    #[test]
    fn zero_vector_comes_first() {
        let m = IntMatrix::from_rows(&[[3, 1], [2, 5]]);
        let first = solve_mod_n(&m, 2).iter().next().unwrap();
        assert_eq!(first, vec![0, 0]);
    }

    #[test]
    fn no_columns() {
        let m = IntMatrix::zeros(2, 0);
        let k = solve_mod_n(&m, 5);
        assert_eq!(k.iter().collect::<Vec<_>>(), vec![Vec::<u64>::new()]);
    }

    #[test]
    fn enumeration_is_deterministic() {
        let a: Vec<_> = solve_mod_n(&trefoil(), 9).iter().collect();
        let b: Vec<_> = solve_mod_n(&trefoil(), 9).iter().collect();
        assert_eq!(a, b);
        assert_eq!(a.len(), 27);
    }
}
