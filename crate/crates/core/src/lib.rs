//! Exact counting of rhombus tilings of centro-symmetric octagons.
//!
//! The count for sides `(a, b, c, d)` is a sum, over plane-partition-like
//! coordinate grids of the distinguished vertices, of products of
//! binomial determinants that count non-crossing lattice path sections.
//! [`counting::theorem1_count`] evaluates it exactly; [`oracle`] recounts
//! the same quantity by explicit path enumeration, and the closed forms in
//! [`counting`] cover the octagons with two unit sides.

pub mod counting;
pub mod error;
pub mod gv;
pub mod octagon;
pub mod oracle;

pub use counting::{
    elnitsky_a1c1, elnitsky_ab11, elnitsky_simplified, entropy, hex_count, hexagon_entropy,
    lower_bound, reference_count, theorem1_count, theorem1_count_with, CountOptions, CountReport, Method,
};
pub use error::{CountError, DomainError, OracleError};
pub use gv::{binomial, build_m, build_p, det_exact, BinomialTable, TermMatrix};
pub use octagon::{count_x, count_y, iterate_x, iterate_y, tile_count, Sides, VertexGridX, VertexGridY};
pub use oracle::{count_nw, count_sw, oracle_total};

pub use num_bigint::{BigInt, BigUint};
