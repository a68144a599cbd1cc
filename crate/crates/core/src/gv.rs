//! Binomial coefficients, the single-path count matrices `M(u)` and `P(v)`,
//! and exact integer determinants.
//!
//! `M(u)` is the `b × b` matrix counting directed paths between the
//! shifted endpoints of the `u`-th sections of the south-west paths;
//! `P(v)` is the `d × d` analogue for the north-west paths. Their
//! determinants count non-crossing path sections.

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Zero};

use crate::octagon::{Sides, VertexGridX, VertexGridY};

/// `C(top, bottom)`, zero when `top < 0`, `bottom < 0` or `bottom > top`.
pub fn binomial(top: i64, bottom: i64) -> BigUint {
    if top < 0 || bottom < 0 || bottom > top {
        return BigUint::zero();
    }
    let bottom = bottom.min(top - bottom) as u64;
    let top = top as u64;
    let mut acc = BigUint::one();
    for i in 0..bottom {
        acc *= top - i;
        acc /= i + 1;
    }
    acc
}

/// Pascal triangle of rows `0..=max_top`, shared read-only by workers.
#[derive(Clone, Debug)]
pub struct BinomialTable {
    rows: Vec<Vec<BigUint>>,
    small: Vec<Vec<Option<u64>>>,
    zero: BigUint,
}

impl BinomialTable {
    pub fn new(max_top: usize) -> Self {
        let mut rows: Vec<Vec<BigUint>> = Vec::with_capacity(max_top + 1);
        for n in 0..=max_top {
            let mut row = Vec::with_capacity(n + 1);
            row.push(BigUint::one());
            if n > 0 {
                let prev = &rows[n - 1];
                for k in 1..n {
                    row.push(&prev[k - 1] + &prev[k]);
                }
                row.push(BigUint::one());
            }
            rows.push(row);
        }
        let small = rows
            .iter()
            .map(|row| row.iter().map(|v| u64::try_from(v).ok()).collect())
            .collect();
        BinomialTable { rows, small, zero: BigUint::zero() }
    }

    /// Table large enough for every entry of `M(u)` and `P(v)`.
    pub fn for_sides(sides: &Sides) -> Self {
        Self::new((sides.a() + sides.c()) as usize)
    }

    pub fn max_top(&self) -> usize {
        self.rows.len() - 1
    }

    pub fn get(&self, top: i64, bottom: i64) -> &BigUint {
        if top < 0 || bottom < 0 || bottom > top {
            return &self.zero;
        }
        let row = self
            .rows
            .get(top as usize)
            .unwrap_or_else(|| panic!("binomial top {top} beyond table limit {}", self.max_top()));
        &row[bottom as usize]
    }

    /// Same as [`get`](Self::get) when the value fits in a `u64`.
    pub fn get_small(&self, top: i64, bottom: i64) -> Option<u64> {
        if top < 0 || bottom < 0 || bottom > top {
            return Some(0);
        }
        self.small.get(top as usize)?[bottom as usize]
    }
}

/// Square matrix of binomial values.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TermMatrix {
    order: usize,
    entries: Vec<BigUint>,
}

impl TermMatrix {
    /// Panics unless `entries.len() == order * order`.
    pub fn new(order: usize, entries: Vec<BigUint>) -> Self {
        assert_eq!(entries.len(), order * order, "matrix must be square");
        TermMatrix { order, entries }
    }

    pub fn from_rows<T: Into<BigUint> + Copy>(rows: &[Vec<T>]) -> Self {
        let order = rows.len();
        let entries = rows
            .iter()
            .flat_map(|r| {
                assert_eq!(r.len(), order, "matrix must be square");
                r.iter().map(|&v| v.into())
            })
            .collect();
        TermMatrix { order, entries }
    }

    pub fn order(&self) -> usize {
        self.order
    }

    /// Zero-based entry access.
    pub fn get(&self, i: usize, j: usize) -> &BigUint {
        &self.entries[i * self.order + j]
    }

    pub fn rows(&self) -> Vec<Vec<BigUint>> {
        self.entries.chunks(self.order.max(1)).map(<[BigUint]>::to_vec).collect()
    }

    pub fn det(&self) -> BigInt {
        det_exact(self)
    }
}

/// Binomial arguments `(top, bottom)` of entry `(i, j)` of `M(u)`,
/// one-based indices.
pub(crate) fn m_entry_args(u: usize, i: usize, j: usize, x: &VertexGridX, y: &VertexGridY) -> (i64, i64) {
    let dx = x.at(j, u) as i64 - x.at(i, u - 1) as i64;
    let dy = y.at(j, u) as i64 - y.at(i, u - 1) as i64;
    (dx + dy, dx + j as i64 - i as i64)
}

/// Binomial arguments of entry `(i, j)` of `P(v)`.
pub(crate) fn p_entry_args(v: usize, i: usize, j: usize, x: &VertexGridX, y: &VertexGridY) -> (i64, i64) {
    let dx = x.at(v, j) as i64 - x.at(v - 1, i) as i64;
    let dy = y.at(v - 1, i) as i64 - y.at(v, j) as i64;
    (dx + dy, dx + j as i64 - i as i64)
}

fn check_index(name: char, index: usize, limit: u32) {
    assert!(
        (1..=limit as usize + 1).contains(&index),
        "{name} index {index} outside 1..={}",
        limit + 1
    );
}

/// Builds `M(u)` for `u` in `1..=d+1`, evaluating binomials directly.
pub fn build_m(u: usize, x: &VertexGridX, y: &VertexGridY, sides: &Sides) -> TermMatrix {
    check_index('u', u, sides.d());
    let n = sides.b() as usize;
    let entries = (1..=n)
        .flat_map(|i| (1..=n).map(move |j| (i, j)))
        .map(|(i, j)| {
            let (top, bottom) = m_entry_args(u, i, j, x, y);
            binomial(top, bottom)
        })
        .collect();
    TermMatrix::new(n, entries)
}

/// Builds `P(v)` for `v` in `1..=b+1`.
pub fn build_p(v: usize, x: &VertexGridX, y: &VertexGridY, sides: &Sides) -> TermMatrix {
    check_index('v', v, sides.b());
    let n = sides.d() as usize;
    let entries = (1..=n)
        .flat_map(|i| (1..=n).map(move |j| (i, j)))
        .map(|(i, j)| {
            let (top, bottom) = p_entry_args(v, i, j, x, y);
            binomial(top, bottom)
        })
        .collect();
    TermMatrix::new(n, entries)
}

/// Integer types the determinant routines can run over. Operations return
/// `None` on overflow.
pub trait DetScalar: Clone {
    fn ring_zero() -> Self;
    fn ring_one() -> Self;
    fn is_ring_zero(&self) -> bool;
    fn mul(&self, other: &Self) -> Option<Self>;
    fn sub(&self, other: &Self) -> Option<Self>;
    fn add(&self, other: &Self) -> Option<Self>;
    fn neg(&self) -> Option<Self>;
    /// Division known to be exact.
    fn div_exact(&self, other: &Self) -> Self;
}

impl DetScalar for BigInt {
    fn ring_zero() -> Self {
        Zero::zero()
    }
    fn ring_one() -> Self {
        One::one()
    }
    fn is_ring_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn mul(&self, other: &Self) -> Option<Self> {
        Some(self * other)
    }
    fn sub(&self, other: &Self) -> Option<Self> {
        Some(self - other)
    }
    fn add(&self, other: &Self) -> Option<Self> {
        Some(self + other)
    }
    fn neg(&self) -> Option<Self> {
        Some(-self)
    }
    fn div_exact(&self, other: &Self) -> Self {
        self / other
    }
}

impl DetScalar for i128 {
    fn ring_zero() -> Self {
        0
    }
    fn ring_one() -> Self {
        1
    }
    fn is_ring_zero(&self) -> bool {
        *self == 0
    }
    fn mul(&self, other: &Self) -> Option<Self> {
        self.checked_mul(*other)
    }
    fn sub(&self, other: &Self) -> Option<Self> {
        self.checked_sub(*other)
    }
    fn add(&self, other: &Self) -> Option<Self> {
        self.checked_add(*other)
    }
    fn neg(&self) -> Option<Self> {
        self.checked_neg()
    }
    fn div_exact(&self, other: &Self) -> Self {
        debug_assert_eq!(self % other, 0);
        self / other
    }
}

fn cofactor<T: DetScalar>(m: &[T], n: usize) -> Option<T> {
    match n {
        0 => Some(T::ring_one()),
        1 => Some(m[0].clone()),
        2 => m[0].mul(&m[3])?.sub(&m[1].mul(&m[2])?),
        3 => {
            let minor = |r0: usize, r1: usize, c0: usize, c1: usize| {
                m[r0 * 3 + c0].mul(&m[r1 * 3 + c1])?.sub(&m[r0 * 3 + c1].mul(&m[r1 * 3 + c0])?)
            };
            let t0 = m[0].mul(&minor(1, 2, 1, 2)?)?;
            let t1 = m[1].mul(&minor(1, 2, 0, 2)?)?;
            let t2 = m[2].mul(&minor(1, 2, 0, 1)?)?;
            t0.sub(&t1)?.add(&t2)
        }
        _ => unreachable!("cofactor expansion used for order <= 3 only"),
    }
}

/// Fraction-free Gaussian elimination. Every division is exact: after
/// step `k` each entry of the trailing block is a `(k+1)`-minor of the
/// input.
fn bareiss<T: DetScalar>(mut m: Vec<T>, n: usize) -> Option<T> {
    let mut negate = false;
    let mut prev = T::ring_one();
    for k in 0..n.saturating_sub(1) {
        if m[k * n + k].is_ring_zero() {
            let Some(p) = (k + 1..n).find(|&r| !m[r * n + k].is_ring_zero()) else {
                return Some(T::ring_zero());
            };
            for c in 0..n {
                m.swap(k * n + c, p * n + c);
            }
            negate = !negate;
        }
        let pivot = m[k * n + k].clone();
        for i in k + 1..n {
            for j in k + 1..n {
                let val = m[i * n + j].mul(&pivot)?.sub(&m[i * n + k].mul(&m[k * n + j])?)?;
                m[i * n + j] = val.div_exact(&prev);
            }
        }
        prev = pivot;
    }
    let det = m[n * n - 1].clone();
    if negate {
        det.neg()
    } else {
        Some(det)
    }
}

/// Determinant of a row-major `n × n` matrix over `T`; `None` on overflow.
pub fn det_generic<T: DetScalar>(entries: Vec<T>, n: usize) -> Option<T> {
    debug_assert_eq!(entries.len(), n * n);
    if n <= 3 {
        cofactor(&entries, n)
    } else {
        bareiss(entries, n)
    }
}

/// Exact determinant.
pub fn det_exact(m: &TermMatrix) -> BigInt {
    let entries = m.entries.iter().map(|v| BigInt::from(v.clone())).collect();
    det_generic(entries, m.order).expect("BigInt arithmetic cannot overflow")
}

/// Signed-matrix determinant, exposed for tests of the algebraic properties
/// that need negative entries.
pub fn det_signed(rows: &[Vec<BigInt>]) -> BigInt {
    let n = rows.len();
    let entries: Vec<BigInt> = rows
        .iter()
        .flat_map(|r| {
            assert_eq!(r.len(), n, "matrix must be square");
            r.iter().cloned()
        })
        .collect();
    det_generic(entries, n).expect("BigInt arithmetic cannot overflow")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::octagon::{iterate_x, iterate_y};

    fn big(v: i64) -> BigInt {
        BigInt::from(v)
    }

    /// Leibniz expansion over all permutations.
    fn leibniz(rows: &[Vec<i64>]) -> BigInt {
        fn perms(n: usize) -> Vec<Vec<usize>> {
            if n == 0 {
                return vec![vec![]];
            }
            let mut out = Vec::new();
            for p in perms(n - 1) {
                for pos in 0..n {
                    let mut q = p.clone();
                    q.insert(pos, n - 1);
                    out.push(q);
                }
            }
            out
        }
        let n = rows.len();
        let mut total = BigInt::zero();
        for p in perms(n) {
            let inversions = (0..n)
                .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
                .filter(|&(i, j)| p[i] > p[j])
                .count();
            let mut term = BigInt::one();
            for (i, &pi) in p.iter().enumerate() {
                term *= rows[i][pi];
            }
            if inversions % 2 == 1 {
                term = -term;
            }
            total += term;
        }
        total
    }

    fn to_big(rows: &[Vec<i64>]) -> Vec<Vec<BigInt>> {
        rows.iter().map(|r| r.iter().map(|&v| big(v)).collect()).collect()
    }

    #[test]
    fn binomial_conventions() {
        assert_eq!(binomial(4, 2), BigUint::from(6u32));
        assert_eq!(binomial(-1, 0), BigUint::zero());
        assert_eq!(binomial(3, 5), BigUint::zero());
        assert_eq!(binomial(3, -1), BigUint::zero());
        assert_eq!(binomial(0, 0), BigUint::one());
        assert_eq!(binomial(100, 50).to_string(), "100891344545564193334812497256");
    }

    #[test]
    fn pascal_rule_and_table() {
        let table = BinomialTable::new(60);
        for a in 1..=60i64 {
            for b in 0..=a {
                assert_eq!(binomial(a, b), binomial(a - 1, b - 1) + binomial(a - 1, b));
                assert_eq!(table.get(a, b), &binomial(a, b));
            }
        }
        assert_eq!(table.get(-3, 1), &BigUint::zero());
        assert_eq!(table.get_small(60, 30), Some(118264581564861424));
        assert_eq!(table.get_small(5, 7), Some(0));
    }

    #[test]
    fn small_determinants() {
        let id = TermMatrix::from_rows(&[vec![1u32, 0, 0], vec![0, 1, 0], vec![0, 0, 1]]);
        assert_eq!(det_exact(&id), big(1));
        assert_eq!(det_exact(&TermMatrix::from_rows(&[vec![1u32, 1], vec![1, 2]])), big(1));
        assert_eq!(det_exact(&TermMatrix::new(2, vec![BigUint::zero(); 4])), big(0));
        assert_eq!(det_exact(&TermMatrix::new(5, vec![BigUint::zero(); 25])), big(0));
        assert_eq!(det_exact(&TermMatrix::new(0, vec![])), big(1));
    }

    #[test]
    fn frozen_five_by_five() {
        let rows = vec![
            vec![3, 1, 4, 1, 5],
            vec![9, 2, 6, 5, 3],
            vec![5, 8, 9, 7, 9],
            vec![3, 2, 3, 8, 4],
            vec![6, 2, 6, 4, 3],
        ];
        let expected = leibniz(&rows);
        assert_eq!(expected, big(-1813));
        assert_eq!(det_signed(&to_big(&rows)), expected);
    }

    #[test]
    fn zero_leading_pivot_needs_swap() {
        let rows = vec![
            vec![0, 2, 1, 3],
            vec![0, 1, 4, 1],
            vec![5, 0, 2, 2],
            vec![1, 3, 0, 7],
        ];
        assert_eq!(det_signed(&to_big(&rows)), leibniz(&rows));
        let mut wide = vec![vec![0i64; 6]; 6];
        for i in 0..6 {
            wide[i][(i + 1) % 6] = (i + 2) as i64;
        }
        assert_eq!(det_signed(&to_big(&wide)), leibniz(&wide));
    }

    #[test]
    fn i128_path_matches_and_reports_overflow() {
        let rows = [vec![2i128, 7, 1, 8], vec![2, 8, 1, 8], vec![2, 8, 4, 5], vec![9, 0, 4, 5]];
        let flat: Vec<i128> = rows.concat();
        let via_big = det_signed(&rows.iter().map(|r| r.iter().map(|&v| BigInt::from(v)).collect()).collect::<Vec<_>>());
        assert_eq!(BigInt::from(det_generic(flat, 4).unwrap()), via_big);
        let huge = vec![i128::MAX, 1, 1, i128::MAX];
        assert_eq!(det_generic(huge, 2), None);
    }

    #[test]
    fn unit_octagon_matrices() {
        let s = Sides::new(1, 1, 1, 1).unwrap();
        let x0 = VertexGridX::from_rows(&s, &[vec![0]]).unwrap();
        let x1 = VertexGridX::from_rows(&s, &[vec![1]]).unwrap();
        let y0 = VertexGridY::from_rows(&s, &[vec![0]]).unwrap();
        let y1 = VertexGridY::from_rows(&s, &[vec![1]]).unwrap();
        let one = |m: TermMatrix| m.get(0, 0).clone();
        assert_eq!(one(build_m(1, &x0, &y0, &s)), BigUint::from(1u32));
        assert_eq!(one(build_m(1, &x1, &y1, &s)), BigUint::from(2u32));
        assert_eq!(one(build_m(2, &x0, &y0, &s)), BigUint::from(2u32));
        assert_eq!(one(build_p(1, &x0, &y0, &s)), BigUint::from(1u32));
        assert_eq!(one(build_p(2, &x1, &y0, &s)), BigUint::from(1u32));
        assert_eq!(one(build_p(2, &x0, &y0, &s)), BigUint::from(1u32));
    }

    #[test]
    #[should_panic(expected = "u index 3")]
    fn build_m_index_out_of_range() {
        let s = Sides::new(1, 1, 1, 1).unwrap();
        let x = iterate_x(&s).next().unwrap();
        let y = iterate_y(&s).next().unwrap();
        build_m(3, &x, &y, &s);
    }

    #[test]
    fn all_term_determinants_positive_up_to_three() {
        for a in 1..=3 {
            for b in 1..=3 {
                for c in 1..=3 {
                    for d in 1..=3 {
                        if a + b + c + d > 9 {
                            continue;
                        }
                        let s = Sides::new(a, b, c, d).unwrap();
                        let ys: Vec<_> = iterate_y(&s).collect();
                        for x in iterate_x(&s) {
                            for y in &ys {
                                for u in 1..=d as usize + 1 {
                                    assert!(build_m(u, &x, y, &s).det() > BigInt::zero(), "{s} {x} {y} M{u}");
                                }
                                for v in 1..=b as usize + 1 {
                                    assert!(build_p(v, &x, y, &s).det() > BigInt::zero(), "{s} {x} {y} P{v}");
                                }
                            }
                        }
                    }
                }
            }
        }
    }
}
