//! Determinant-free recount of tilings.
//!
//! Path sections are shifted apart (`(k−1)·(1,−1)` for south-west paths,
//! `(l−1)·(1,1)` for north-west paths) so that non-crossing families
//! become vertex-disjoint ones, which are then enumerated one path at a
//! time by depth-first search.

use std::time::Instant;

use num_bigint::BigUint;
use num_traits::{One, Zero};

use crate::counting::{CountReport, Method};
use crate::error::OracleError;
use crate::gv;
use crate::octagon::{self, Sides, VertexGridX, VertexGridY};

/// Largest `|X|·|Y|` the oracle will attempt.
pub const TERM_LIMIT: u64 = 10_000;
/// Largest estimated number of enumerated path families.
pub const WORK_LIMIT: u64 = 100_000_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LatticePoint {
    pub x: i64,
    pub y: i64,
}

impl LatticePoint {
    pub const fn new(x: i64, y: i64) -> Self {
        LatticePoint { x, y }
    }
}

/// Allowed unit steps.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum StepSet {
    /// East and north (south-west family).
    EastNorth,
    /// East and south (north-west family).
    EastSouth,
}

impl StepSet {
    fn vertical(self) -> i64 {
        match self {
            StepSet::EastNorth => 1,
            StepSet::EastSouth => -1,
        }
    }

    /// `(east, vertical)` step counts needed, if reachable.
    fn displacement(self, from: LatticePoint, to: LatticePoint) -> Option<(i64, i64)> {
        let east = to.x - from.x;
        let vertical = (to.y - from.y) * self.vertical();
        (east >= 0 && vertical >= 0).then_some((east, vertical))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PathFamilySpec {
    pub departures: Vec<LatticePoint>,
    pub arrivals: Vec<LatticePoint>,
    pub steps: StepSet,
}

impl PathFamilySpec {
    pub fn new(departures: Vec<LatticePoint>, arrivals: Vec<LatticePoint>, steps: StepSet) -> Self {
        assert_eq!(departures.len(), arrivals.len(), "one arrival per departure");
        PathFamilySpec { departures, arrivals, steps }
    }

    pub fn len(&self) -> usize {
        self.departures.len()
    }

    pub fn is_empty(&self) -> bool {
        self.departures.is_empty()
    }

    /// Product of the single-path counts: an upper bound on the number of
    /// families the search can visit.
    pub fn work_estimate(&self) -> BigUint {
        self.departures
            .iter()
            .zip(&self.arrivals)
            .map(|(&d, &a)| count_paths(d, a, self.steps))
            .fold(BigUint::one(), |acc, c| acc * c)
    }
}

/// Number of directed paths from `from` to `to`.
pub fn count_paths(from: LatticePoint, to: LatticePoint, steps: StepSet) -> BigUint {
    match steps.displacement(from, to) {
        Some((east, vertical)) => gv::binomial(east + vertical, east),
        None => BigUint::zero(),
    }
}

/// Occupancy over the bounding box of all endpoints; every directed path
/// stays inside the box spanned by its own endpoints.
struct Occupancy {
    min: LatticePoint,
    width: i64,
    cells: Vec<bool>,
}

impl Occupancy {
    fn new(points: impl Iterator<Item = LatticePoint> + Clone) -> Self {
        let min_x = points.clone().map(|p| p.x).min().unwrap_or(0);
        let max_x = points.clone().map(|p| p.x).max().unwrap_or(0);
        let min_y = points.clone().map(|p| p.y).min().unwrap_or(0);
        let max_y = points.map(|p| p.y).max().unwrap_or(0);
        let width = max_x - min_x + 1;
        let height = max_y - min_y + 1;
        Occupancy {
            min: LatticePoint::new(min_x, min_y),
            width,
            cells: vec![false; (width * height) as usize],
        }
    }

    fn slot(&self, p: LatticePoint) -> usize {
        ((p.y - self.min.y) * self.width + (p.x - self.min.x)) as usize
    }

    fn taken(&self, p: LatticePoint) -> bool {
        self.cells[self.slot(p)]
    }

    fn set(&mut self, p: LatticePoint, value: bool) {
        let s = self.slot(p);
        self.cells[s] = value;
    }
}

struct Search<'a> {
    spec: &'a PathFamilySpec,
    occupied: Occupancy,
    found: u64,
}

impl Search<'_> {
    /// Places path `index` starting from its departure; paths are laid
    /// down fully in index order.
    fn place(&mut self, index: usize) {
        if index == self.spec.len() {
            self.found += 1;
            return;
        }
        let start = self.spec.departures[index];
        if self.spec.steps.displacement(start, self.spec.arrivals[index]).is_none() || self.occupied.taken(start) {
            return;
        }
        self.occupied.set(start, true);
        self.walk(index, start);
        self.occupied.set(start, false);
    }

    fn walk(&mut self, index: usize, at: LatticePoint) {
        let target = self.spec.arrivals[index];
        if at == target {
            self.place(index + 1);
            return;
        }
        let (east, vertical) = self.spec.steps.displacement(at, target).expect("stays reachable");
        let mut moves = [None, None];
        if east > 0 {
            moves[0] = Some(LatticePoint::new(at.x + 1, at.y));
        }
        if vertical > 0 {
            moves[1] = Some(LatticePoint::new(at.x, at.y + self.spec.steps.vertical()));
        }
        for next in moves.into_iter().flatten() {
            if self.occupied.taken(next) {
                continue;
            }
            self.occupied.set(next, true);
            self.walk(index, next);
            self.occupied.set(next, false);
        }
    }
}

/// Counts families of vertex-disjoint directed paths, path `i` running
/// from `departures[i]` to `arrivals[i]`, by explicit enumeration.
pub fn enumerate_disjoint_families(spec: &PathFamilySpec) -> BigUint {
    if spec.is_empty() {
        return BigUint::one();
    }
    let points = spec.departures.iter().chain(&spec.arrivals).copied();
    let mut search = Search { spec, occupied: Occupancy::new(points), found: 0 };
    search.place(0);
    BigUint::from(search.found)
}

/// Shifted endpoints of the `u`-th sections of the south-west paths.
pub fn sw_spec(u: usize, x: &VertexGridX, y: &VertexGridY, sides: &Sides) -> PathFamilySpec {
    assert!((1..=sides.d() as usize + 1).contains(&u), "u index {u} out of range");
    let shifted = |k: usize, l: usize| {
        let s = (k - 1) as i64;
        LatticePoint::new(i64::from(x.at(k, l)) + s, i64::from(y.at(k, l)) - s)
    };
    let b = sides.b() as usize;
    PathFamilySpec::new(
        (1..=b).map(|k| shifted(k, u - 1)).collect(),
        (1..=b).map(|k| shifted(k, u)).collect(),
        StepSet::EastNorth,
    )
}

/// Shifted endpoints of the `v`-th sections of the north-west paths.
pub fn nw_spec(v: usize, x: &VertexGridX, y: &VertexGridY, sides: &Sides) -> PathFamilySpec {
    assert!((1..=sides.b() as usize + 1).contains(&v), "v index {v} out of range");
    let shifted = |k: usize, l: usize| {
        let s = (l - 1) as i64;
        LatticePoint::new(i64::from(x.at(k, l)) + s, i64::from(y.at(k, l)) + s)
    };
    let d = sides.d() as usize;
    PathFamilySpec::new(
        (1..=d).map(|l| shifted(v - 1, l)).collect(),
        (1..=d).map(|l| shifted(v, l)).collect(),
        StepSet::EastSouth,
    )
}

/// `|sw(u)|` by enumeration.
pub fn count_sw(u: usize, x: &VertexGridX, y: &VertexGridY, sides: &Sides) -> BigUint {
    enumerate_disjoint_families(&sw_spec(u, x, y, sides))
}

/// `|nw(v)|` by enumeration.
pub fn count_nw(v: usize, x: &VertexGridX, y: &VertexGridY, sides: &Sides) -> BigUint {
    enumerate_disjoint_families(&nw_spec(v, x, y, sides))
}

fn scale_error(what: &'static str, estimate: BigUint, limit: u64) -> OracleError {
    OracleError::ScaleExceeded { what, estimate, limit: BigUint::from(limit) }
}

/// Estimated enumeration work for the whole sum, or an error once it is
/// known to exceed the limits.
pub fn work_estimate(sides: &Sides) -> Result<BigUint, OracleError> {
    let terms = octagon::count_x(sides) * octagon::count_y(sides);
    if terms > BigUint::from(TERM_LIMIT) {
        return Err(scale_error("terms", terms, TERM_LIMIT));
    }
    let limit = BigUint::from(WORK_LIMIT);
    let ys: Vec<_> = octagon::iterate_y(sides).collect();
    let mut work = BigUint::zero();
    for x in octagon::iterate_x(sides) {
        for y in &ys {
            for u in 1..=sides.d() as usize + 1 {
                work += sw_spec(u, &x, y, sides).work_estimate();
            }
            for v in 1..=sides.b() as usize + 1 {
                work += nw_spec(v, &x, y, sides).work_estimate();
            }
            if work > limit {
                return Err(scale_error("path families", work, WORK_LIMIT));
            }
        }
    }
    Ok(work)
}

/// Full tiling count with every determinant replaced by enumeration.
pub fn oracle_total(sides: &Sides) -> Result<CountReport, OracleError> {
    let start = Instant::now();
    work_estimate(sides)?;
    let ys: Vec<_> = octagon::iterate_y(sides).collect();
    let mut count = BigUint::zero();
    let mut terms = 0u64;
    for x in octagon::iterate_x(sides) {
        for y in &ys {
            terms += 1;
            let mut product = BigUint::one();
            for u in 1..=sides.d() as usize + 1 {
                product *= count_sw(u, &x, y, sides);
            }
            for v in 1..=sides.b() as usize + 1 {
                product *= count_nw(v, &x, y, sides);
            }
            count += product;
        }
    }
    Ok(CountReport {
        sides: *sides,
        method: Method::Oracle,
        count,
        terms_evaluated: BigUint::from(terms),
        elapsed: start.elapsed(),
        workers: 1,
        determinants_evaluated: 0,
        zero_determinants: 0,
    })
}

pub fn within_budget(sides: &Sides) -> bool {
    work_estimate(sides).is_ok()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gv::{build_m, build_p};
    use num_bigint::BigInt;

    fn pt(x: i64, y: i64) -> LatticePoint {
        LatticePoint::new(x, y)
    }

    fn n(v: u64) -> BigUint {
        BigUint::from(v)
    }

    fn sides(a: u32, b: u32, c: u32, d: u32) -> Sides {
        Sides::new(a, b, c, d).unwrap()
    }

    /// Plain recursive count of monotone paths, independent of binomials.
    fn dfs_paths(from: LatticePoint, to: LatticePoint, dy: i64) -> u64 {
        if from == to {
            return 1;
        }
        let mut total = 0;
        if from.x < to.x {
            total += dfs_paths(pt(from.x + 1, from.y), to, dy);
        }
        if (to.y - from.y) * dy > 0 {
            total += dfs_paths(pt(from.x, from.y + dy), to, dy);
        }
        total
    }

    #[test]
    fn single_path_counts() {
        assert_eq!(count_paths(pt(0, 0), pt(1, 1), StepSet::EastNorth), n(2));
        assert_eq!(count_paths(pt(0, 0), pt(-1, 0), StepSet::EastNorth), n(0));
        assert_eq!(count_paths(pt(0, 2), pt(2, 0), StepSet::EastSouth), n(6));
        assert_eq!(dfs_paths(pt(0, 2), pt(2, 0), -1), 6);
        assert_eq!(count_paths(pt(0, 0), pt(1, -1), StepSet::EastNorth), n(0));
    }

    #[test]
    fn single_path_family_equals_count_paths() {
        for (to, steps) in [(pt(2, 1), StepSet::EastNorth), (pt(3, -2), StepSet::EastSouth), (pt(2, 5), StepSet::EastSouth)] {
            let spec = PathFamilySpec::new(vec![pt(0, 0)], vec![to], steps);
            assert_eq!(enumerate_disjoint_families(&spec), count_paths(pt(0, 0), to, steps));
        }
        let spec = PathFamilySpec::new(vec![pt(0, 0)], vec![pt(2, 1)], StepSet::EastNorth);
        assert_eq!(enumerate_disjoint_families(&spec), n(3));
    }

    #[test]
    fn two_paths_match_lindstrom_determinant() {
        let spec = PathFamilySpec::new(vec![pt(0, 0), pt(1, -1)], vec![pt(1, 2), pt(2, 1)], StepSet::EastNorth);
        let lam = |i: usize, j: usize| {
            BigInt::from(count_paths(spec.departures[i], spec.arrivals[j], StepSet::EastNorth))
        };
        let det = lam(0, 0) * lam(1, 1) - lam(0, 1) * lam(1, 0);
        assert_eq!(BigInt::from(enumerate_disjoint_families(&spec)), det);
        assert_eq!(det, BigInt::from(6));
    }

    #[test]
    fn coincident_departures_give_zero() {
        let spec = PathFamilySpec::new(vec![pt(0, 0), pt(0, 0)], vec![pt(2, 2), pt(3, 3)], StepSet::EastNorth);
        assert_eq!(enumerate_disjoint_families(&spec), n(0));
    }

    #[test]
    fn unit_octagon_sections() {
        let s = sides(1, 1, 1, 1);
        let x0 = VertexGridX::from_rows(&s, &[vec![0]]).unwrap();
        let x1 = VertexGridX::from_rows(&s, &[vec![1]]).unwrap();
        let y0 = VertexGridY::from_rows(&s, &[vec![0]]).unwrap();
        let y1 = VertexGridY::from_rows(&s, &[vec![1]]).unwrap();
        assert_eq!(count_sw(1, &x1, &y1, &s), n(2));
        assert_eq!(count_sw(1, &x0, &y0, &s), n(1));
        assert_eq!(count_nw(1, &x0, &y0, &s), n(1));
        assert_eq!(count_nw(1, &x1, &y0, &s), n(2));
    }

    #[test]
    fn shifted_endpoints_are_separated() {
        let s = sides(2, 3, 2, 3);
        let x = octagon::iterate_x(&s).nth(11).unwrap();
        let y = octagon::iterate_y(&s).nth(17).unwrap();
        for u in 1..=4 {
            let spec = sw_spec(u, &x, &y, &s);
            for w in spec.departures.windows(2).chain(spec.arrivals.windows(2)) {
                assert!(w[0].x < w[1].x && w[0].y > w[1].y);
            }
        }
        for v in 1..=4 {
            let spec = nw_spec(v, &x, &y, &s);
            for w in spec.departures.windows(2).chain(spec.arrivals.windows(2)) {
                assert!(w[0].x < w[1].x && w[0].y < w[1].y);
            }
        }
    }

    #[test]
    fn sections_match_determinants_for_2221() {
        let s = sides(2, 2, 2, 1);
        let ys: Vec<_> = octagon::iterate_y(&s).collect();
        for x in octagon::iterate_x(&s) {
            for y in &ys {
                for u in 1..=2 {
                    assert_eq!(BigInt::from(count_sw(u, &x, y, &s)), build_m(u, &x, y, &s).det());
                }
                for v in 1..=3 {
                    assert_eq!(BigInt::from(count_nw(v, &x, y, &s)), build_p(v, &x, y, &s).det());
                }
            }
        }
    }

    #[test]
    fn totals() {
        assert_eq!(oracle_total(&sides(1, 1, 1, 1)).unwrap().count, n(8));
        assert_eq!(oracle_total(&sides(2, 1, 2, 1)).unwrap().count, crate::counting::elnitsky_a1c1(2, 2));
    }

    #[test]
    fn refuses_large_octagons() {
        let err = oracle_total(&sides(3, 3, 3, 3)).unwrap_err();
        assert!(matches!(err, OracleError::ScaleExceeded { what: "terms", .. }));
        assert!(err.to_string().contains("oracle scale exceeded"));
        assert!(within_budget(&sides(2, 2, 2, 2)));
        assert!(!within_budget(&sides(3, 3, 3, 3)));
    }
}
