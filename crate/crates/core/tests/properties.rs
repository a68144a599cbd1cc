use num_bigint::BigInt;
use num_traits::Signed;
use octacount::gv::{det_generic, det_signed};
use octacount::{iterate_x, iterate_y, theorem1_count, Sides, VertexGridX, VertexGridY};
use proptest::prelude::*;

fn square(max_order: usize) -> impl Strategy<Value = Vec<Vec<i64>>> {
    (1..=max_order).prop_flat_map(|n| prop::collection::vec(prop::collection::vec(-9i64..=9, n), n))
}

fn big_rows(m: &[Vec<i64>]) -> Vec<Vec<BigInt>> {
    m.iter().map(|r| r.iter().map(|&v| BigInt::from(v)).collect()).collect()
}

fn product(a: &[Vec<i64>], b: &[Vec<i64>]) -> Vec<Vec<i64>> {
    let n = a.len();
    (0..n).map(|i| (0..n).map(|j| (0..n).map(|k| a[i][k] * b[k][j]).sum()).collect()).collect()
}

/// Leibniz expansion over all permutations.
fn leibniz(m: &[Vec<i64>]) -> BigInt {
    fn go(m: &[Vec<i64>], row: usize, used: &mut Vec<bool>, sign: i64, acc: BigInt, out: &mut BigInt) {
        let n = m.len();
        if row == n {
            *out += acc * sign;
            return;
        }
        let mut inversions = 0;
        for col in (0..n).rev() {
            if used[col] {
                inversions += 1;
                continue;
            }
            used[col] = true;
            let s = if inversions % 2 == 0 { sign } else { -sign };
            go(m, row + 1, used, s, &acc * m[row][col], out);
            used[col] = false;
        }
    }
    let mut out = BigInt::from(0);
    go(m, 0, &mut vec![false; m.len()], 1, BigInt::from(1), &mut out);
    out
}

fn small_sides() -> impl Strategy<Value = Sides> {
    (1u32..=2, 1u32..=2, 1u32..=2, 1u32..=2).prop_map(|(a, b, c, d)| Sides::new(a, b, c, d).unwrap())
}

proptest! {
    #[test]
    fn det_matches_leibniz(m in square(5)) {
        prop_assert_eq!(det_signed(&big_rows(&m)), leibniz(&m));
    }

    #[test]
    fn det_is_multiplicative(a in square(4), seed in prop::collection::vec(-9i64..=9, 16)) {
        let n = a.len();
        let b: Vec<Vec<i64>> = (0..n).map(|i| seed[i * n..i * n + n].to_vec()).collect();
        let ab = product(&a, &b);
        prop_assert_eq!(det_signed(&big_rows(&ab)), det_signed(&big_rows(&a)) * det_signed(&big_rows(&b)));
    }

    #[test]
    fn fixed_width_agrees_when_it_fits(m in square(5)) {
        let flat: Vec<i128> = m.iter().flatten().map(|&v| v as i128).collect();
        let wide = det_generic(flat, m.len()).expect("small entries fit");
        prop_assert_eq!(BigInt::from(wide), det_signed(&big_rows(&m)));
    }

    #[test]
    fn permutation_sign(perm in Just((0..5usize).collect::<Vec<_>>()).prop_shuffle()) {
        let m: Vec<Vec<i64>> = perm.iter().map(|&p| (0..5).map(|j| i64::from(j == p)).collect()).collect();
        let mut inversions = 0;
        for i in 0..5 {
            for j in i + 1..5 {
                inversions += usize::from(perm[i] > perm[j]);
            }
        }
        let d = det_signed(&big_rows(&m));
        prop_assert_eq!(d.abs(), BigInt::from(1));
        prop_assert_eq!(d == BigInt::from(1), inversions % 2 == 0);
    }

    #[test]
    fn grid_streams_are_valid_and_ascending(s in small_sides()) {
        let xs: Vec<_> = iterate_x(&s).collect();
        for w in xs.windows(2) {
            prop_assert!(w[0].values() < w[1].values());
        }
        for x in &xs {
            prop_assert!(VertexGridX::from_rows(&s, &x.rows()).is_ok());
        }
        let ys: Vec<_> = iterate_y(&s).collect();
        for w in ys.windows(2) {
            prop_assert!(w[0].values() < w[1].values());
        }
        for y in &ys {
            prop_assert!(VertexGridY::from_rows(&s, &y.rows()).is_ok());
        }
    }

    #[test]
    fn count_is_invariant_under_relabeling(s in small_sides()) {
        let base = theorem1_count(&s, 1).unwrap().count;
        for image in s.symmetric_images() {
            prop_assert_eq!(&theorem1_count(&image, 2).unwrap().count, &base);
        }
    }
}
