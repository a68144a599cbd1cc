//! Tiling counters: the determinantal sum over `X × Y`, the closed forms
//! for octagons with two unit sides, hexagon counts, the hexagon lower
//! bound and configurational entropy.

use std::collections::HashMap;
use std::fmt;
use std::ops::Range;
use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::OnceLock;
use std::thread;
use std::time::{Duration, Instant};

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{CountError, DomainError};
use crate::gv::{self, det_generic, BinomialTable};
use crate::octagon::{self, Sides, VertexGridX, VertexGridY};

/// Exact rational in lowest terms with a positive denominator.
pub type Rational = BigRational;

/// How a count was obtained.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Method {
    Theorem1,
    ElnitskyA1c1,
    ElnitskyAb11,
    ElnitskySimplified,
    Oracle,
}

impl Method {
    pub fn tag(&self) -> &'static str {
        match self {
            Method::Theorem1 => "theorem1",
            Method::ElnitskyA1c1 => "elnitsky-a1c1",
            Method::ElnitskyAb11 => "elnitsky-ab11",
            Method::ElnitskySimplified => "elnitsky-simplified",
            Method::Oracle => "oracle",
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CountReport {
    pub sides: Sides,
    pub method: Method,
    pub count: BigUint,
    pub terms_evaluated: BigUint,
    pub elapsed: Duration,
    pub workers: usize,
    /// Distinct determinants computed while summing (theorem1 only).
    pub determinants_evaluated: u64,
    /// Of those, how many were zero. Always zero for a correct formula.
    pub zero_determinants: u64,
}

impl CountReport {
    pub fn elapsed_ms(&self) -> u128 {
        self.elapsed.as_millis()
    }
}

#[derive(Clone, Copy, Debug, Default)]
pub struct CountOptions<'a> {
    pub workers: usize,
    /// Incremented by the number of terms finished, as workers progress.
    pub progress: Option<&'a AtomicU64>,
}

/// Partition of a list of grids, per factor slot, by the slice of the grid
/// that slot's matrix reads. Slots run `M(1..=d+1)` then `P(1..=b+1)`.
struct Grouping {
    slots: usize,
    /// `keys[g * slots + f]`: group of grid `g` in slot `f`.
    keys: Vec<u32>,
    /// `reps[f][id]`: index of one grid in group `id` of slot `f`.
    reps: Vec<Vec<usize>>,
}

impl Grouping {
    fn new<G>(grids: &[G], slots: usize, slice: impl Fn(&G, usize) -> Vec<u32>) -> Self {
        let mut keys = vec![0u32; grids.len() * slots];
        let mut reps = Vec::with_capacity(slots);
        for f in 0..slots {
            let mut seen: HashMap<Vec<u32>, u32> = HashMap::new();
            let mut slot_reps = Vec::new();
            for (g, grid) in grids.iter().enumerate() {
                let next = slot_reps.len() as u32;
                keys[g * slots + f] = *seen.entry(slice(grid, f)).or_insert_with(|| {
                    slot_reps.push(g);
                    next
                });
            }
            reps.push(slot_reps);
        }
        Grouping { slots, keys, reps }
    }

    fn keys_of(&self, g: usize) -> &[u32] {
        &self.keys[g * self.slots..(g + 1) * self.slots]
    }
}

/// Reads `(at(k, u-1), at(k, u))` for `k = 1..=b` in slot `u-1 ≤ d`, and
/// `(at(v-1, l), at(v, l))` for `l = 1..=d` in slot `d+v`.
fn slot_slice(at: impl Fn(usize, usize) -> u32, slot: usize, b: usize, d: usize) -> Vec<u32> {
    if slot <= d {
        let u = slot + 1;
        (1..=b).flat_map(|k| [at(k, u - 1), at(k, u)]).collect()
    } else {
        let v = slot - d;
        (1..=d).flat_map(|l| [at(v - 1, l), at(v, l)]).collect()
    }
}

/// Determinant of an `n × n` binomial matrix whose entry arguments come
/// from `args`, via `i128` when possible and `BigInt` otherwise.
fn eval_det(
    table: &BinomialTable,
    n: usize,
    args: impl Fn(usize, usize) -> (i64, i64),
) -> BigInt {
    let mut small = Vec::with_capacity(n * n);
    let mut fits = true;
    for i in 1..=n {
        for j in 1..=n {
            let (top, bottom) = args(i, j);
            match table.get_small(top, bottom) {
                Some(v) => small.push(i128::from(v)),
                None => {
                    fits = false;
                    break;
                }
            }
        }
        if !fits {
            break;
        }
    }
    if fits {
        if let Some(det) = det_generic(small, n) {
            return BigInt::from(det);
        }
    }
    let entries = (1..=n)
        .flat_map(|i| (1..=n).map(move |j| (i, j)))
        .map(|(i, j)| {
            let (top, bottom) = args(i, j);
            BigInt::from(table.get(top, bottom).clone())
        })
        .collect();
    det_generic(entries, n).expect("BigInt arithmetic cannot overflow")
}

/// Determinants of one slot for one `x` group, across every `y` group.
#[derive(Debug)]
struct DetRow {
    small: Vec<u64>,
    /// Set instead of `small` when some value exceeds `u64`.
    big: Option<Vec<BigUint>>,
    zeros: u64,
}

#[derive(Default)]
struct Partial {
    small: u128,
    big: BigUint,
}

impl Partial {
    fn add_small(&mut self, v: u128) {
        match self.small.checked_add(v) {
            Some(s) => self.small = s,
            None => {
                self.big += self.small;
                self.small = v;
            }
        }
    }

    fn total(self) -> BigUint {
        self.big + self.small
    }
}

struct SumJob<'a> {
    sides: Sides,
    table: BinomialTable,
    xs: Vec<VertexGridX>,
    ys: Vec<VertexGridY>,
    x_groups: Grouping,
    y_groups: Grouping,
    /// `rows[f][x_group]`, filled on first use by whichever worker needs it.
    rows: Vec<Vec<OnceLock<Result<DetRow, CountError>>>>,
    progress: Option<&'a AtomicU64>,
}

impl<'a> SumJob<'a> {
    fn new(sides: &Sides, progress: Option<&'a AtomicU64>) -> Self {
        let (b, d) = (sides.b() as usize, sides.d() as usize);
        let slots = (d + 1) + (b + 1);
        let xs: Vec<VertexGridX> = octagon::iterate_x(sides).collect();
        let ys: Vec<VertexGridY> = octagon::iterate_y(sides).collect();
        let x_groups = Grouping::new(&xs, slots, |x, f| slot_slice(|k, l| x.at(k, l), f, b, d));
        let y_groups = Grouping::new(&ys, slots, |y, f| slot_slice(|k, l| y.at(k, l), f, b, d));
        let rows = x_groups
            .reps
            .iter()
            .map(|reps| reps.iter().map(|_| OnceLock::new()).collect())
            .collect();
        SumJob {
            sides: *sides,
            table: BinomialTable::for_sides(sides),
            xs,
            ys,
            x_groups,
            y_groups,
            rows,
            progress,
        }
    }

    fn fill_row(&self, slot: usize, x_group: usize) -> Result<DetRow, CountError> {
        let (b, d) = (self.sides.b() as usize, self.sides.d() as usize);
        let x = &self.xs[self.x_groups.reps[slot][x_group]];
        let y_reps = &self.y_groups.reps[slot];
        let mut row = DetRow { small: Vec::with_capacity(y_reps.len()), big: None, zeros: 0 };
        for &rep in y_reps {
            let y = &self.ys[rep];
            let (matrix, index, det) = if slot <= d {
                let u = slot + 1;
                ('M', u, eval_det(&self.table, b, |i, j| gv::m_entry_args(u, i, j, x, y)))
            } else {
                let v = slot - d;
                ('P', v, eval_det(&self.table, d, |i, j| gv::p_entry_args(v, i, j, x, y)))
            };
            match det.sign() {
                Sign::Minus => {
                    return Err(CountError::NegativeDeterminant {
                        matrix,
                        index,
                        x: x.to_string(),
                        y: y.to_string(),
                        value: det,
                    })
                }
                Sign::NoSign => row.zeros += 1,
                Sign::Plus => {}
            }
            let mag = det.into_parts().1;
            match (&mut row.big, mag.to_u64()) {
                (None, Some(v)) => row.small.push(v),
                (None, None) => {
                    let mut big: Vec<BigUint> = row.small.drain(..).map(BigUint::from).collect();
                    big.push(mag);
                    row.big = Some(big);
                }
                (Some(big), _) => big.push(mag),
            }
        }
        Ok(row)
    }

    fn row(&self, slot: usize, x_group: usize) -> Result<&DetRow, CountError> {
        self.rows[slot][x_group]
            .get_or_init(|| self.fill_row(slot, x_group))
            .as_ref()
            .map_err(Clone::clone)
    }

    /// Adds every term with the `x` at index `xi` to `acc`.
    fn sum_over_y(&self, xi: usize, acc: &mut Partial) -> Result<(), CountError> {
        let rows = self
            .x_groups
            .keys_of(xi)
            .iter()
            .enumerate()
            .map(|(f, &group)| self.row(f, group as usize))
            .collect::<Result<Vec<&DetRow>, CountError>>()?;

        if rows.iter().all(|r| r.big.is_none()) {
            let small: Vec<&[u64]> = rows.iter().map(|r| r.small.as_slice()).collect();
            for keys in self.y_groups.keys.chunks_exact(self.y_groups.slots) {
                let mut product: u128 = 1;
                let mut fits = true;
                for (row, &k) in small.iter().zip(keys) {
                    match product.checked_mul(u128::from(row[k as usize])) {
                        Some(p) => product = p,
                        None => {
                            fits = false;
                            break;
                        }
                    }
                }
                if fits {
                    acc.add_small(product);
                } else {
                    acc.big += small.iter().zip(keys).fold(BigUint::one(), |p, (row, &k)| p * row[k as usize]);
                }
            }
        } else {
            let value = |row: &DetRow, k: usize| match &row.big {
                Some(big) => big[k].clone(),
                None => BigUint::from(row.small[k]),
            };
            for keys in self.y_groups.keys.chunks_exact(self.y_groups.slots) {
                acc.big += rows.iter().zip(keys).fold(BigUint::one(), |p, (row, &k)| p * value(row, k as usize));
            }
        }
        if let Some(counter) = self.progress {
            counter.fetch_add(self.ys.len() as u64, Ordering::Relaxed);
        }
        Ok(())
    }

    fn run_chunk(&self, range: Range<usize>) -> Result<Partial, CountError> {
        let mut acc = Partial::default();
        for xi in range {
            self.sum_over_y(xi, &mut acc)?;
        }
        Ok(acc)
    }

    /// `(determinants evaluated, zeros among them)`.
    fn determinant_stats(&self) -> (u64, u64) {
        let mut stats = (0, 0);
        for (slot, rows) in self.rows.iter().enumerate() {
            for row in rows.iter().filter_map(OnceLock::get).flatten() {
                stats.0 += self.y_groups.reps[slot].len() as u64;
                stats.1 += row.zeros;
            }
        }
        stats
    }
}

/// Number of rhombus tilings via the sum over `(x, y) ∈ X × Y` of the
/// product of `det M(u)` for `u = 1..=d+1` and `det P(v)` for `v = 1..=b+1`.
pub fn theorem1_count(sides: &Sides, workers: usize) -> Result<CountReport, CountError> {
    theorem1_count_with(sides, CountOptions { workers, progress: None })
}

/// [`theorem1_count`] with progress reporting.
///
/// `X` is split into `workers` contiguous chunks; each worker sums its
/// chunk against all of `Y` and the exact partial sums are added in rank
/// order, so the result does not depend on the worker count. Determinants
/// are shared between terms: `M(u)` only reads two columns of `x` and `y`,
/// `P(v)` two rows, so each distinct pair of slices is evaluated once.
pub fn theorem1_count_with(sides: &Sides, options: CountOptions<'_>) -> Result<CountReport, CountError> {
    if options.workers == 0 {
        return Err(CountError::NoWorkers);
    }
    let start = Instant::now();
    let job = SumJob::new(sides, options.progress);
    let (nx, ny) = (job.xs.len(), job.ys.len());
    let terms = BigUint::from(nx) * BigUint::from(ny);

    let chunk = nx.div_ceil(options.workers).max(1);
    let ranges: Vec<Range<usize>> = (0..nx).step_by(chunk).map(|lo| lo..(lo + chunk).min(nx)).collect();
    let partials: Vec<Result<Partial, CountError>> = if ranges.len() <= 1 {
        vec![job.run_chunk(0..nx)]
    } else {
        thread::scope(|scope| {
            let handles: Vec<_> = ranges
                .into_iter()
                .map(|range| {
                    let job = &job;
                    scope.spawn(move || job.run_chunk(range))
                })
                .collect();
            handles
                .into_iter()
                .map(|h| h.join().expect("counting worker panicked"))
                .collect()
        })
    };

    let mut count = BigUint::zero();
    for partial in partials {
        count += partial?.total();
    }
    let (determinants, zeros) = job.determinant_stats();
    Ok(CountReport {
        sides: *sides,
        method: Method::Theorem1,
        count,
        terms_evaluated: terms,
        elapsed: start.elapsed(),
        workers: options.workers,
        determinants_evaluated: determinants,
        zero_determinants: zeros,
    })
}

/// A single summand, evaluated directly from [`gv::build_m`] and
/// [`gv::build_p`] with no caching.
pub fn term(sides: &Sides, x: &VertexGridX, y: &VertexGridY) -> BigInt {
    let mut product = BigInt::one();
    for u in 1..=sides.d() as usize + 1 {
        product *= gv::build_m(u, x, y, sides).det();
    }
    for v in 1..=sides.b() as usize + 1 {
        product *= gv::build_p(v, x, y, sides).det();
    }
    product
}

fn factorial(n: u64) -> BigUint {
    (1..=n).fold(BigUint::one(), |acc, k| acc * k)
}

/// Octagons `(a, 1, c, 1)`: sum over `r+s = a`, `t+u = c` of
/// `C(r+t,r) C(s+t,s) C(r+u,r) C(s+u,s)`.
pub fn elnitsky_a1c1(a: u32, c: u32) -> BigUint {
    let (a, c) = (i64::from(a), i64::from(c));
    let mut total = BigUint::zero();
    for r in 0..=a {
        let s = a - r;
        for t in 0..=c {
            let u = c - t;
            total += gv::binomial(r + t, r)
                * gv::binomial(s + t, s)
                * gv::binomial(r + u, r)
                * gv::binomial(s + u, s);
        }
    }
    total
}

/// Octagons `(a, b, 1, 1)`:
/// `2 (a+b+1)! (a+b+2)! / (a! b! (a+2)! (b+2)!)`.
pub fn elnitsky_ab11(a: u32, b: u32) -> Result<BigUint, CountError> {
    let (a, b) = (u64::from(a), u64::from(b));
    let numerator = factorial(a + b + 1) * factorial(a + b + 2) * 2u32;
    let denominator = factorial(a) * factorial(b) * factorial(a + 2) * factorial(b + 2);
    let (q, r) = numerator.div_rem(&denominator);
    if !r.is_zero() {
        return Err(CountError::Inexact { formula: "elnitsky-ab11", numerator, denominator });
    }
    Ok(q)
}

/// The partially simplified form for `(a, 1, c, 1)`:
/// `(a+c+1)! / (a! c! (2a+1)(2c+1)) · [2(a+c+1)!/(a! c!) + Σ_k C(a,k)C(c,k)/(2k−1)]`.
pub fn elnitsky_simplified(a: u32, c: u32) -> Result<BigUint, CountError> {
    let (a64, c64) = (u64::from(a), u64::from(c));
    let big = |v: BigUint| BigInt::from(v);
    let inner: Rational = (0..=i64::from(a.min(c)))
        .map(|k| {
            let weight = gv::binomial(i64::from(a), k) * gv::binomial(i64::from(c), k);
            Rational::new(big(weight), BigInt::from(2 * k - 1))
        })
        .fold(Rational::zero(), |acc, t| acc + t);
    let fac_ac1 = big(factorial(a64 + c64 + 1));
    let fac_a_c = big(factorial(a64) * factorial(c64));
    let head = Rational::new(BigInt::from(2) * &fac_ac1, fac_a_c.clone());
    let prefactor = Rational::new(
        fac_ac1,
        fac_a_c * BigInt::from(2 * a64 + 1) * BigInt::from(2 * c64 + 1),
    );
    let value = prefactor * (head + inner);
    match (value.is_integer(), value.to_integer().to_biguint()) {
        (true, Some(n)) => Ok(n),
        _ => Err(CountError::Inexact {
            formula: "elnitsky-simplified",
            numerator: value.numer().magnitude().clone(),
            denominator: value.denom().magnitude().clone(),
        }),
    }
}

/// Rhombus tilings of the hexagon with sides `p, q, r` (equivalently plane
/// partitions in a `p × q × r` box):
/// `∏_{i≤p} ∏_{j≤q} ∏_{k≤r} (i+j+k−1)/(i+j+k−2)`.
pub fn hex_count(p: u32, q: u32, r: u32) -> BigUint {
    // Net exponent of each factor value across the triple product.
    let max = (p + q + r) as usize;
    let mut exponent = vec![0i64; max + 1];
    for i in 1..=p {
        for j in 1..=q {
            for k in 1..=r {
                let s = (i + j + k) as usize;
                exponent[s - 1] += 1;
                exponent[s - 2] -= 1;
            }
        }
    }
    let mut numerator = BigUint::one();
    let mut denominator = BigUint::one();
    for (value, &e) in exponent.iter().enumerate().skip(2) {
        let factor = BigUint::from(value);
        match e.cmp(&0) {
            std::cmp::Ordering::Greater => numerator *= factor.pow(e as u32),
            std::cmp::Ordering::Less => denominator *= factor.pow((-e) as u32),
            std::cmp::Ordering::Equal => {}
        }
    }
    let (q, r) = numerator.div_rem(&denominator);
    debug_assert!(r.is_zero(), "box formula must be integral");
    q
}

/// `T_hex(b, d, c) · T_hex(b, d, a)`, the number of terms in the sum.
pub fn lower_bound(sides: &Sides) -> BigUint {
    hex_count(sides.b(), sides.d(), sides.c()) * hex_count(sides.b(), sides.d(), sides.a())
}

/// Known exact counts for the diagonal octagons `(n, n, n, n)`, `n ≤ 5`,
/// obtained by direct enumeration of tilings.
pub const DIAGONAL_REFERENCE: [(u32, &str); 5] = [
    (1, "8"),
    (2, "5383"),
    (3, "273976272"),
    (4, "1043065776718923"),
    (5, "296755610108278480324496"),
];

/// Reference count for `sides`, if it is a tabulated diagonal octagon.
pub fn reference_count(sides: &Sides) -> Option<BigUint> {
    let [a, b, c, d] = sides.as_array();
    if a != b || b != c || c != d {
        return None;
    }
    DIAGONAL_REFERENCE
        .iter()
        .find(|(n, _)| *n == a)
        .map(|(_, v)| v.parse().expect("reference counts are decimal"))
}

/// Natural logarithm of a positive big integer, from its leading 64 bits
/// and its bit length.
pub fn ln_big(n: &BigUint) -> f64 {
    let bits = n.bits();
    if bits <= 64 {
        return (n.to_u64().expect("fits in 64 bits") as f64).ln();
    }
    let shift = bits - 64;
    let lead = (n >> shift).to_u64().expect("leading 64 bits");
    (lead as f64).ln() + shift as f64 * std::f64::consts::LN_2
}

/// Configurational entropy per tile, `ln(count) / N_T`.
pub fn entropy(sides: &Sides, count: &BigUint) -> Result<f64, DomainError> {
    if count.is_zero() {
        return Err(DomainError::ZeroCount);
    }
    Ok(ln_big(count) / sides.tile_count() as f64)
}

/// Entropy per tile of the hexagon-product lower bound in the diagonal
/// limit, `(3/2) ln 3 − 2 ln 2`.
pub fn hexagon_entropy() -> f64 {
    1.5 * 3f64.ln() - 2.0 * std::f64::consts::LN_2
}
