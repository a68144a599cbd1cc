//! Octagon side lengths, distinguished-vertex grids and the exhaustive
//! iteration over the admissible coordinate families.
//!
//! A tiling of the octagon with sides `(a, b, c, d)` is encoded on an
//! `a × c` square grid by `b` south-west paths, `d` north-west paths and
//! `b·d` distinguished vertices `DV[k][l]`. The x-coordinates of those
//! vertices form a [`VertexGridX`], the y-coordinates a [`VertexGridY`].
//! Both are plane partitions in a `b × d` box (the y-grid with the row
//! order reversed).

use std::fmt;

use num_bigint::BigUint;
use serde::{Deserialize, Serialize};

use crate::error::DomainError;

/// Side lengths of a centro-symmetric octagon, read clockwise.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Sides {
    a: u32,
    b: u32,
    c: u32,
    d: u32,
}

impl Sides {
    pub fn new(a: u32, b: u32, c: u32, d: u32) -> Result<Self, DomainError> {
        for (name, value) in [('a', a), ('b', b), ('c', c), ('d', d)] {
            if value == 0 {
                return Err(DomainError::DegenerateSide { name });
            }
        }
        Ok(Sides { a, b, c, d })
    }

    pub fn a(&self) -> u32 {
        self.a
    }

    pub fn b(&self) -> u32 {
        self.b
    }

    pub fn c(&self) -> u32 {
        self.c
    }

    pub fn d(&self) -> u32 {
        self.d
    }

    pub fn as_array(&self) -> [u32; 4] {
        [self.a, self.b, self.c, self.d]
    }

    /// `(a,b,c,d) -> (b,c,d,a)`.
    pub fn rotated(&self) -> Sides {
        Sides { a: self.b, b: self.c, c: self.d, d: self.a }
    }

    /// `(a,b,c,d) -> (d,c,b,a)`.
    pub fn reversed(&self) -> Sides {
        Sides { a: self.d, b: self.c, c: self.b, d: self.a }
    }

    /// The eight relabelings of the octagon under its dihedral symmetry.
    pub fn symmetric_images(&self) -> [Sides; 8] {
        let mut out = [*self; 8];
        let mut cur = *self;
        for i in 0..4 {
            out[i] = cur;
            out[i + 4] = cur.reversed();
            cur = cur.rotated();
        }
        out
    }

    /// Number of tiles: every pair of de Bruijn families meets in
    /// (size of one family) × (size of the other) tiles.
    pub fn tile_count(&self) -> u64 {
        let [a, b, c, d] = self.as_array().map(u64::from);
        a * b + a * c + a * d + b * c + b * d + c * d
    }
}

impl fmt::Display for Sides {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{},{},{})", self.a, self.b, self.c, self.d)
    }
}

/// Free function form of [`Sides::tile_count`].
pub fn tile_count(sides: &Sides) -> u64 {
    sides.tile_count()
}

/// Which monotonicity rule a grid obeys.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Monotonicity {
    /// Weakly increasing in both `k` and `l` (x-coordinates).
    Increasing,
    /// Weakly decreasing in `k`, increasing in `l` (y-coordinates).
    RowReversed,
}

/// Interior cells of a `rows × cols` grid, stored row-major, with values in
/// `0..=cap`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
struct Cells {
    rows: usize,
    cols: usize,
    cap: u32,
    values: Vec<u32>,
}

impl Cells {
    fn get(&self, k: usize, l: usize) -> u32 {
        self.values[(k - 1) * self.cols + (l - 1)]
    }

    fn to_rows(&self) -> Vec<Vec<u32>> {
        self.values.chunks(self.cols).map(<[u32]>::to_vec).collect()
    }

    /// Smallest and largest value cell `idx` may take given every cell
    /// before it in row-major order.
    fn bounds(&self, idx: usize, rule: Monotonicity) -> (u32, u32) {
        let (k, l) = (idx / self.cols, idx % self.cols);
        let left = (l > 0).then(|| self.values[idx - 1]);
        let up = (k > 0).then(|| self.values[idx - self.cols]);
        match rule {
            Monotonicity::Increasing => (left.max(up).unwrap_or(0), self.cap),
            Monotonicity::RowReversed => (left.unwrap_or(0), up.unwrap_or(self.cap)),
        }
    }

    fn check(&self, rule: Monotonicity) -> Result<(), DomainError> {
        for idx in 0..self.values.len() {
            let (lo, hi) = self.bounds(idx, rule);
            let v = self.values[idx];
            if v < lo || v > hi {
                return Err(DomainError::NonMonotoneGrid {
                    k: idx / self.cols + 1,
                    l: idx % self.cols + 1,
                    value: v,
                });
            }
        }
        Ok(())
    }

    fn minimal(rows: usize, cols: usize, cap: u32) -> Self {
        // The all-zero grid is the least element under both rules.
        Cells { rows, cols, cap, values: vec![0; rows * cols] }
    }

    /// Lexicographic successor in row-major order, in place.
    fn advance(&mut self, rule: Monotonicity) -> bool {
        for idx in (0..self.values.len()).rev() {
            let (_, hi) = self.bounds(idx, rule);
            if self.values[idx] < hi {
                self.values[idx] += 1;
                for rest in idx + 1..self.values.len() {
                    self.values[rest] = self.bounds(rest, rule).0;
                }
                return true;
            }
        }
        false
    }

    fn from_rows(rows: &[Vec<u32>], expected: (usize, usize), cap: u32) -> Result<Self, DomainError> {
        if rows.len() != expected.0 || rows.iter().any(|r| r.len() != expected.1) {
            return Err(DomainError::GridShape {
                expected_rows: expected.0,
                expected_cols: expected.1,
            });
        }
        let values: Vec<u32> = rows.iter().flatten().copied().collect();
        if let Some(&v) = values.iter().find(|&&v| v > cap) {
            return Err(DomainError::GridValueOutOfRange { value: v, cap });
        }
        Ok(Cells { rows: expected.0, cols: expected.1, cap, values })
    }
}

/// x-coordinates of the distinguished vertices: a `b × d` array with
/// `0 ≤ x[k][l] ≤ a`, weakly increasing in both indices.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct VertexGridX {
    cells: Cells,
}

impl VertexGridX {
    pub fn from_rows(sides: &Sides, rows: &[Vec<u32>]) -> Result<Self, DomainError> {
        let cells = Cells::from_rows(rows, (sides.b as usize, sides.d as usize), sides.a)?;
        cells.check(Monotonicity::Increasing)?;
        Ok(VertexGridX { cells })
    }

    pub fn rows(&self) -> Vec<Vec<u32>> {
        self.cells.to_rows()
    }

    /// Interior values, row-major.
    pub fn values(&self) -> &[u32] {
        &self.cells.values
    }

    /// `x[k][l]` for `k in 0..=b+1`, `l in 0..=d+1`, boundary slots
    /// resolved by convention: `x[k][0] = x[0][l] = 0`,
    /// `x[b+1][l] = x[k][d+1] = a`.
    ///
    /// Panics on the four corner slots, which carry no convention.
    pub fn at(&self, k: usize, l: usize) -> u32 {
        let (b, d) = (self.cells.rows, self.cells.cols);
        assert!(k <= b + 1 && l <= d + 1, "x index ({k},{l}) out of range");
        let k_edge = k == 0 || k == b + 1;
        let l_edge = l == 0 || l == d + 1;
        assert!(!(k_edge && l_edge), "x corner slot ({k},{l}) is undefined");
        if l == 0 || k == 0 {
            0
        } else if k == b + 1 || l == d + 1 {
            self.cells.cap
        } else {
            self.cells.get(k, l)
        }
    }
}

impl fmt::Display for VertexGridX {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "x={:?}", self.rows())
    }
}

/// y-coordinates of the distinguished vertices: a `b × d` array with
/// `0 ≤ y[k][l] ≤ c`, weakly decreasing in `k` and increasing in `l`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct VertexGridY {
    cells: Cells,
}

impl VertexGridY {
    pub fn from_rows(sides: &Sides, rows: &[Vec<u32>]) -> Result<Self, DomainError> {
        let cells = Cells::from_rows(rows, (sides.b as usize, sides.d as usize), sides.c)?;
        cells.check(Monotonicity::RowReversed)?;
        Ok(VertexGridY { cells })
    }

    pub fn rows(&self) -> Vec<Vec<u32>> {
        self.cells.to_rows()
    }

    pub fn values(&self) -> &[u32] {
        &self.cells.values
    }

    /// `y[k][l]` with boundary slots `y[k][0] = 0`, `y[0][l] = c`,
    /// `y[b+1][l] = 0`, `y[k][d+1] = c`.
    pub fn at(&self, k: usize, l: usize) -> u32 {
        let (b, d) = (self.cells.rows, self.cells.cols);
        assert!(k <= b + 1 && l <= d + 1, "y index ({k},{l}) out of range");
        let k_edge = k == 0 || k == b + 1;
        let l_edge = l == 0 || l == d + 1;
        assert!(!(k_edge && l_edge), "y corner slot ({k},{l}) is undefined");
        if l == 0 || k == b + 1 {
            0
        } else if k == 0 || l == d + 1 {
            self.cells.cap
        } else {
            self.cells.get(k, l)
        }
    }
}

impl fmt::Display for VertexGridY {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "y={:?}", self.rows())
    }
}

/// Cursor over every [`VertexGridX`] for a given octagon, in row-major
/// lexicographic order.
#[derive(Clone, Debug)]
pub struct XGrids {
    next: Option<Cells>,
}

impl XGrids {
    /// Resume iteration at `start` (inclusive).
    pub fn starting_at(start: VertexGridX) -> Self {
        XGrids { next: Some(start.cells) }
    }
}

impl Iterator for XGrids {
    type Item = VertexGridX;

    fn next(&mut self) -> Option<VertexGridX> {
        let current = self.next.take()?;
        let mut succ = current.clone();
        if succ.advance(Monotonicity::Increasing) {
            self.next = Some(succ);
        }
        Some(VertexGridX { cells: current })
    }
}

/// Cursor over every [`VertexGridY`], row-major lexicographic order.
#[derive(Clone, Debug)]
pub struct YGrids {
    next: Option<Cells>,
}

impl YGrids {
    pub fn starting_at(start: VertexGridY) -> Self {
        YGrids { next: Some(start.cells) }
    }
}

impl Iterator for YGrids {
    type Item = VertexGridY;

    fn next(&mut self) -> Option<VertexGridY> {
        let current = self.next.take()?;
        let mut succ = current.clone();
        if succ.advance(Monotonicity::RowReversed) {
            self.next = Some(succ);
        }
        Some(VertexGridY { cells: current })
    }
}

pub fn iterate_x(sides: &Sides) -> XGrids {
    XGrids {
        next: Some(Cells::minimal(sides.b as usize, sides.d as usize, sides.a)),
    }
}

pub fn iterate_y(sides: &Sides) -> YGrids {
    YGrids {
        next: Some(Cells::minimal(sides.b as usize, sides.d as usize, sides.c)),
    }
}

/// |X|: plane partitions in a `b × d` box with entries at most `a`.
pub fn count_x(sides: &Sides) -> BigUint {
    crate::counting::hex_count(sides.b, sides.d, sides.a)
}

/// |Y|: plane partitions in a `b × d` box with entries at most `c`.
pub fn count_y(sides: &Sides) -> BigUint {
    crate::counting::hex_count(sides.b, sides.d, sides.c)
}
