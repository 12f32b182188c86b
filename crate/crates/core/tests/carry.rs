mod common;

use common::{effective, prime_factors, random_carry_case, rng};
use linkchroma::exactlin::{carry_transform, is_solution_mod, IntMatrix, LinalgError, Transform};
use proptest::prelude::*;

fn zero_mod(x: &[u64], p: u64) -> bool {
    x.iter().all(|v| v % p == 0)
}

proptest! {
    #[test]
    fn carried_solution_solves_and_stays_effective(seed in any::<u64>()) {
        let case = random_carry_case(&mut rng(seed));
        let (m2, x2) = carry_transform(&case.m, &case.x, case.n, case.transform).unwrap();
        prop_assert!(is_solution_mod(&m2, &x2, case.n));
        prop_assert!(x2.iter().all(|&v| v < case.n));
        prop_assert_eq!(m2.cols(), x2.len());
        prop_assert!(effective(&x2, case.n), "{:?} {:?} -> {:?}", case.transform, case.x, x2);
        // column operations are invertible over Z, so vanishing mod p is kept
        for p in prime_factors(case.n) {
            prop_assert_eq!(zero_mod(&case.x, p), zero_mod(&x2, p));
        }
    }

    #[test]
    fn chains_of_transforms(seed in any::<u64>(), len in 1usize..12) {
        let mut r = rng(seed);
        let first = random_carry_case(&mut r);
        let (mut m, mut x, n) = (first.m, first.x, first.n);
        for _ in 0..len {
            // only operations that keep the shape, so the chain can continue
            let cols = m.cols() - 1;
            let rows = m.rows();
            let t = match rand::Rng::gen_range(&mut r, 0..4) {
                0 if cols > 1 => Transform::AddColumnMultiple {
                    target: 0,
                    source: rand::Rng::gen_range(&mut r, 1..cols),
                    factor: rand::Rng::gen_range(&mut r, -3..=3),
                },
                1 => Transform::SwapColumns(rand::Rng::gen_range(&mut r, 0..cols), rand::Rng::gen_range(&mut r, 0..cols)),
                2 if rows > 1 => Transform::AddRowMultiple {
                    target: 0,
                    source: rand::Rng::gen_range(&mut r, 1..rows),
                    factor: rand::Rng::gen_range(&mut r, -3..=3),
                },
                _ => Transform::NegateColumn(rand::Rng::gen_range(&mut r, 0..cols)),
            };
            let (m2, x2) = carry_transform(&m, &x, n, t).unwrap();
            prop_assert!(is_solution_mod(&m2, &x2, n));
            prop_assert!(effective(&x2, n));
            m = m2;
            x = x2;
        }
    }

    #[test]
    fn row_operations_leave_solution_alone(seed in any::<u64>()) {
        let case = random_carry_case(&mut rng(seed));
        if matches!(
            case.transform,
            Transform::AddRowMultiple { .. } | Transform::SwapRows(..) | Transform::NegateRow(_) | Transform::DropRow(_)
        ) {
            let (_, x2) = carry_transform(&case.m, &case.x, case.n, case.transform).unwrap();
            prop_assert_eq!(x2, case.x);
        }
    }
}

#[test]
fn hand_examples() {
    let m = IntMatrix::from_rows(&[[-2, 2]]);
    let t = Transform::AddColumnMultiple {
        target: 1,
        source: 0,
        factor: 1,
    };
    let (m2, x2) = carry_transform(&m, &[1, 2], 2, t).unwrap();
    assert_eq!(m2, IntMatrix::from_rows(&[[-2, 0]]));
    assert_eq!(x2, vec![1, 0]);

    let (m2, x2) = carry_transform(
        &IntMatrix::from_rows(&[[1, -1]]),
        &[1, 1],
        5,
        Transform::SwapColumns(0, 1),
    )
    .unwrap();
    assert_eq!(m2, IntMatrix::from_rows(&[[-1, 1]]));
    assert_eq!(x2, vec![1, 1]);

    let (m2, x2) = carry_transform(
        &IntMatrix::from_rows(&[[2]]),
        &[1],
        2,
        Transform::NegateColumn(0),
    )
    .unwrap();
    assert_eq!(m2, IntMatrix::from_rows(&[[-2]]));
    assert_eq!(x2, vec![1]);
}

#[test]
fn precondition_errors() {
    let m = IntMatrix::from_rows(&[[1, 1, 0]]);
    assert_eq!(
        carry_transform(&m, &[1, 1, 0], 2, Transform::NegateRow(0)),
        Ok((IntMatrix::from_rows(&[[-1, -1, 0]]), vec![1, 1, 0]))
    );
    assert!(matches!(
        carry_transform(&m, &[1, 0, 0], 2, Transform::NegateRow(0)),
        Err(LinalgError::NotASolution { modulus: 2 })
    ));
    assert!(matches!(
        carry_transform(&m, &[1, 1, 1], 2, Transform::DropZeroColumn(2)),
        Err(LinalgError::NonzeroDroppedUnknown(2))
    ));
    assert!(matches!(
        carry_transform(&m, &[1, 1, 0], 2, Transform::DropZeroColumn(0)),
        Err(LinalgError::ColumnNotZero(0))
    ));
    assert!(matches!(
        carry_transform(&m, &[1, 1], 2, Transform::NegateRow(0)),
        Err(LinalgError::LengthMismatch { .. })
    ));
}
