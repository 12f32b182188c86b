//! Oracles shared by the integration suites. None of them go through the
//! crate's linear algebra.
#![allow(dead_code)]

use linkchroma::exactlin::{IntMatrix, Transform};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Coloring equations read straight off a PD code: arcs are classes of edges
/// joined through the over strand, and each crossing gives
/// `2 * over == under + under`.
pub struct PdSystem {
    pub arcs: usize,
    /// (over, under, under) arc ids per crossing
    pub eqs: Vec<[usize; 3]>,
}

pub fn pd_system(pd: &[[u32; 4]]) -> PdSystem {
    let edges = 2 * pd.len();
    let mut parent: Vec<usize> = (0..=edges).collect();
    fn find(p: &mut [usize], mut x: usize) -> usize {
        while p[x] != x {
            p[x] = p[p[x]];
            x = p[x];
        }
        x
    }
    for x in pd {
        let (a, b) = (
            find(&mut parent, x[1] as usize),
            find(&mut parent, x[3] as usize),
        );
        parent[a] = b;
    }
    let mut ids = std::collections::HashMap::new();
    let mut arc_of = |e: u32, parent: &mut Vec<usize>| {
        let root = find(parent, e as usize);
        let next = ids.len();
        *ids.entry(root).or_insert(next)
    };
    let eqs = pd
        .iter()
        .map(|x| {
            [
                arc_of(x[1], &mut parent),
                arc_of(x[0], &mut parent),
                arc_of(x[2], &mut parent),
            ]
        })
        .collect();
    PdSystem {
        arcs: ids.len(),
        eqs,
    }
}

/// Number of Fox colorings mod `n` by depth-first search with propagation.
/// Adding a constant to a coloring gives a coloring, so arc 0 is pinned to 0
/// and the count scaled by `n`.
pub fn count_colorings(sys: &PdSystem, n: u64) -> u64 {
    let mut assign = vec![None; sys.arcs];
    assign[0] = Some(0);
    n * dfs(sys, n, &mut assign)
}

/// All Fox colorings mod `n`, in no particular order.
pub fn all_colorings(sys: &PdSystem, n: u64) -> Vec<Vec<u64>> {
    let mut pinned = Vec::new();
    let mut assign = vec![None; sys.arcs];
    assign[0] = Some(0);
    collect(sys, n, &mut assign, &mut pinned);
    (0..n)
        .flat_map(|t| {
            pinned
                .iter()
                .map(move |x| x.iter().map(|v| (v + t) % n).collect())
        })
        .collect()
}

/// Solutions of `coef * a + known == 0 (mod n)`.
fn solve_linear(coef: i64, known: i64, n: u64) -> Vec<u64> {
    let n_i = n as i64;
    let c = coef.rem_euclid(n_i);
    let rhs = (-known).rem_euclid(n_i);
    let g = gcd(c as u64, n) as i64;
    if rhs % g != 0 {
        return Vec::new();
    }
    let m = n_i / g;
    let (c, rhs) = (c / g, rhs / g);
    // inverse of c mod m by extended Euclid
    let (mut r0, mut r1, mut s0, mut s1) = (m, c % m, 0i64, 1i64);
    while r1 != 0 {
        let q = r0 / r1;
        (r0, r1) = (r1, r0 - q * r1);
        (s0, s1) = (s1, s0 - q * s1);
    }
    let inv = if m == 1 { 0 } else { s0.rem_euclid(m) };
    let a0 = (rhs % m * inv).rem_euclid(m);
    (0..g).map(|t| (a0 + t * m) as u64).collect()
}

enum Step {
    Dead,
    Done,
    Branch(usize, Vec<u64>),
}

fn step(sys: &PdSystem, n: u64, assign: &[Option<u64>]) -> Step {
    let n_i = n as i64;
    let mut forced: Option<(usize, Vec<u64>)> = None;
    for eq in &sys.eqs {
        let coeffs = [(eq[0], -2i64), (eq[1], 1), (eq[2], 1)];
        let mut known = 0i64;
        let mut unknown: Option<usize> = None;
        let mut coef = 0i64;
        let mut several = false;
        for &(arc, c) in &coeffs {
            match assign[arc] {
                Some(v) => known += c * v as i64,
                None => match unknown {
                    None => {
                        unknown = Some(arc);
                        coef = c;
                    }
                    Some(u) if u == arc => coef += c,
                    Some(_) => several = true,
                },
            }
        }
        if several {
            continue;
        }
        match unknown {
            None => {
                if known.rem_euclid(n_i) != 0 {
                    return Step::Dead;
                }
            }
            Some(u) => {
                let cands = solve_linear(coef, known, n);
                if cands.is_empty() {
                    return Step::Dead;
                }
                // prefer the most constrained arc
                if forced.as_ref().is_none_or(|(_, f)| cands.len() < f.len()) {
                    forced = Some((u, cands));
                }
            }
        }
    }
    if let Some((u, cands)) = forced {
        return Step::Branch(u, cands);
    }
    match assign.iter().position(Option::is_none) {
        Some(u) => Step::Branch(u, (0..n).collect()),
        None => Step::Done,
    }
}

fn dfs(sys: &PdSystem, n: u64, assign: &mut Vec<Option<u64>>) -> u64 {
    match step(sys, n, assign) {
        Step::Dead => 0,
        Step::Done => 1,
        Step::Branch(u, cands) => {
            let mut total = 0;
            for v in cands {
                assign[u] = Some(v);
                total += dfs(sys, n, assign);
            }
            assign[u] = None;
            total
        }
    }
}

fn collect(sys: &PdSystem, n: u64, assign: &mut Vec<Option<u64>>, out: &mut Vec<Vec<u64>>) {
    match step(sys, n, assign) {
        Step::Dead => {}
        Step::Done => out.push(assign.iter().map(|v| v.unwrap()).collect()),
        Step::Branch(u, cands) => {
            for v in cands {
                assign[u] = Some(v);
                collect(sys, n, assign, out);
            }
            assign[u] = None;
        }
    }
}

/// Exponent of `p` in the determinant, from coloring counts mod `p^k`:
/// the count is `p^k * prod gcd(d_i, p^k)`, which stops growing faster than
/// `p^k` once `p^k` exceeds every `p`-part.
pub fn det_valuation(sys: &PdSystem, p: u64) -> u32 {
    let mut k = 1u32;
    loop {
        let q = p.pow(k);
        let count = count_colorings(sys, q);
        assert_eq!(count % q, 0, "counts are multiples of the modulus");
        let mut rest = count / q;
        let mut e = 0u32;
        while rest.is_multiple_of(p) {
            rest /= p;
            e += 1;
        }
        assert_eq!(rest, 1, "count mod {q} is not a power of {p}");
        if e < k {
            return e;
        }
        k += 1;
    }
}

pub fn primes_up_to(n: u64) -> Vec<u64> {
    (2..=n)
        .filter(|&p| (2..p).take_while(|d| d * d <= p).all(|d| p % d != 0))
        .collect()
}

/// Determinant by cofactor expansion along the first row.
pub fn cofactor_det(m: &[Vec<i64>]) -> i128 {
    let n = m.len();
    if n == 0 {
        return 1;
    }
    (0..n)
        .filter(|&j| m[0][j] != 0)
        .map(|j| {
            let minor: Vec<Vec<i64>> = m[1..]
                .iter()
                .map(|r| {
                    r.iter()
                        .enumerate()
                        .filter(|&(c, _)| c != j)
                        .map(|(_, &v)| v)
                        .collect()
                })
                .collect();
            let sign = if j % 2 == 0 { 1 } else { -1 };
            sign * m[0][j] as i128 * cofactor_det(&minor)
        })
        .sum()
}

/// `{x in (Z/n)^cols : m x == 0 (mod n)}` by exhaustion.
pub fn brute_kernel(m: &[Vec<i64>], cols: usize, n: u64) -> std::collections::BTreeSet<Vec<u64>> {
    let total = n.pow(cols as u32);
    (0..total)
        .map(|mut code| {
            (0..cols)
                .map(|_| {
                    let v = code % n;
                    code /= n;
                    v
                })
                .collect::<Vec<u64>>()
        })
        .filter(|x| {
            m.iter().all(|row| {
                row.iter()
                    .zip(x)
                    .map(|(&a, &v)| a as i128 * v as i128)
                    .sum::<i128>()
                    % n as i128
                    == 0
            })
        })
        .collect()
}

pub fn random_matrix(rng: &mut impl Rng, rows: usize, cols: usize, bound: i64) -> Vec<Vec<i64>> {
    (0..rows)
        .map(|_| (0..cols).map(|_| rng.gen_range(-bound..=bound)).collect())
        .collect()
}

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
        p += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

pub fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// Nonzero entry patterns of the nine row types.
pub const ROW_TYPES: [&[i64]; 9] = [
    &[1, 1, -2],
    &[2, -2],
    &[1, -1],
    &[1, 1],
    &[1, -2],
    &[1],
    &[-1],
    &[2],
    &[-2],
];

/// Square matrix of size `mu` whose rows are row types placed in random
/// distinct columns (types wider than `mu` are skipped).
pub fn random_typed_matrix(rng: &mut impl Rng, mu: usize) -> Vec<Vec<i64>> {
    (0..mu)
        .map(|_| {
            let pattern = loop {
                let t = ROW_TYPES[rng.gen_range(0..ROW_TYPES.len())];
                if t.len() <= mu {
                    break t;
                }
            };
            let mut cols: Vec<usize> = (0..mu).collect();
            for i in 0..pattern.len() {
                let j = rng.gen_range(i..mu);
                cols.swap(i, j);
            }
            let mut row = vec![0; mu];
            for (k, &v) in pattern.iter().enumerate() {
                row[cols[k]] = v;
            }
            row
        })
        .collect()
}

/// `x` is not congruent to a constant mod any prime factor of `n`.
pub fn effective(x: &[u64], n: u64) -> bool {
    prime_factors(n)
        .into_iter()
        .all(|p| x.windows(2).any(|w| w[0] % p != w[1] % p))
}

/// A system in the shape the bound argument works with: the last column is
/// zero, the solution's last entry is 0 and the solution is effective. The
/// transform never touches the last column, and a dropped column is zero
/// with a zero unknown.
pub struct CarryCase {
    pub m: IntMatrix,
    pub x: Vec<u64>,
    pub n: u64,
    pub transform: Transform,
}

pub fn random_carry_case(rng: &mut impl Rng) -> CarryCase {
    let n = rng.gen_range(2..=12u64);
    let cols = rng.gen_range(3..=5usize);
    let rows = rng.gen_range(1..=5usize);
    let free = cols - 1;
    let pick = |rng: &mut dyn rand::RngCore| rng.gen_range(0..free);
    let factor = rng.gen_range(-3..=3i64);
    let transform = match rng.gen_range(0..8) {
        0 => {
            let target = pick(rng);
            let source = loop {
                let s = pick(rng);
                if s != target {
                    break s;
                }
            };
            Transform::AddColumnMultiple {
                target,
                source,
                factor,
            }
        }
        1 => Transform::SwapColumns(pick(rng), pick(rng)),
        2 => Transform::NegateColumn(pick(rng)),
        3 => {
            let target = rng.gen_range(0..rows);
            let source = rng.gen_range(0..rows);
            if rows > 1 && source != target {
                Transform::AddRowMultiple {
                    target,
                    source,
                    factor,
                }
            } else {
                Transform::NegateRow(target)
            }
        }
        4 => Transform::SwapRows(rng.gen_range(0..rows), rng.gen_range(0..rows)),
        5 => Transform::NegateRow(rng.gen_range(0..rows)),
        6 => Transform::DropZeroColumn(pick(rng)),
        _ => Transform::DropRow(rng.gen_range(0..rows)),
    };
    let dropped = match transform {
        Transform::DropZeroColumn(j) => Some(j),
        _ => None,
    };
    let x: Vec<u64> = loop {
        let x: Vec<u64> = (0..cols)
            .map(|j| {
                if j == cols - 1 || Some(j) == dropped {
                    0
                } else {
                    rng.gen_range(0..n)
                }
            })
            .collect();
        if effective(&x, n) {
            break x;
        }
    };
    let m: Vec<Vec<i64>> = (0..rows)
        .map(|_| loop {
            let row: Vec<i64> = (0..cols)
                .map(|j| {
                    if j == cols - 1 || Some(j) == dropped {
                        0
                    } else {
                        rng.gen_range(-3..=3)
                    }
                })
                .collect();
            let s: i64 = row.iter().zip(&x).map(|(&a, &v)| a * v as i64).sum();
            if s.rem_euclid(n as i64) == 0 {
                break row;
            }
        })
        .collect();
    CarryCase {
        m: IntMatrix::from_rows(&m),
        x,
        n,
        transform,
    }
}
