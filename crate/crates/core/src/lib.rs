//! Combinatorics of tight cycles in k-uniform hypergraphs.
//!
//! The crate is organised around a handful of objects: plain hypergraphs
//! ([`Hypergraph`]), permutation types for tight-path ends ([`perm::Perm`]),
//! the explicit extremal constructions ([`constructions`]), gadget-based
//! path extension ([`paths`]), exact decision procedures ([`search`]),
//! the weighted fractional tiling relaxation ([`fractional`]) and a small
//! brute-force threshold laboratory ([`thresholds`]).
//!
//! Everything here is exact: searches either decide or fail with an
//! explicit budget error, and all fractional arithmetic is rational.

pub mod certificate;
pub mod constructions;
pub mod fractional;
pub mod hypergraph;
pub mod kgraph;
pub mod paths;
pub mod perm;
pub mod search;
pub mod thresholds;

mod error;

pub use error::Error;
pub use hypergraph::{DegreeProfile, Hypergraph};
pub use kgraph::KGraph;

/// Convenience alias used throughout the crate.
pub type Result<T> = std::result::Result<T, Error>;
