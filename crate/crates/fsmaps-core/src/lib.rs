//! Exact-arithmetic engine for counting ordinary and fully simple maps.
//!
//! The crate solves the one-cut spectral curve of a polynomial potential over
//! the ring of truncated Laurent series in `b` (the inverse square root of the
//! per-vertex weight), runs topological recursion on that curve and on its
//! x/y-exchanged partner, and extracts graded map counts from the resulting
//! multidifferentials. An independent brute-force census over permutation
//! triples certifies every extracted coefficient on instances small enough to
//! enumerate.
//!
//! Everything is exact: coefficients are arbitrary-precision rationals, series
//! carry explicit truncation orders, and residue sums over ramification points
//! are evaluated as quotient-ring traces so that no root is ever named.
//!
//! The crate is `no_std` (with `alloc`); IO, file formats and the command-line
//! front end live in the companion `fsmaps-cli` crate.

#![cfg_attr(not(test), no_std)]

extern crate alloc;

pub mod census;
pub mod curve;
pub mod error;
pub mod extract;
pub mod local;
pub mod mpoly;
pub mod poly;
pub mod quot;
pub mod rational;
pub mod recursion;
pub mod ring;
pub mod series;
pub mod spectator;
pub mod table;
pub mod verify;

pub use error::AlgError;
pub use rational::Rat;
pub use series::Series;
