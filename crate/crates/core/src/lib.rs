//! Schur rings over the two non-abelian groups of order p^3, the Cayley
//! association schemes they span, and two independent Schurity tests: a full
//! point-stabilizer automorphism search and a compatibility criterion that
//! works block-by-block on class orderings.
//!
//! Everything is exact integer arithmetic; there are no tolerances anywhere.

// Residue arithmetic like `(p + 1) / 2` and `x % d == 0` reads better spelled
// out than through div_ceil/is_multiple_of.
#![allow(clippy::manual_div_ceil, clippy::manual_is_multiple_of)]

pub mod automorphism;
pub mod compatibility;
pub mod pgroup;
pub mod scheme;
pub mod sequences;
pub mod sring;

pub use pgroup::{Elem, Family, Group, GroupSpec};
pub use sring::{Partition, SRing};
