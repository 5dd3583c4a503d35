//! Exact combinatorics behind the ramified geometric Satake correspondence.
//!
//! The crate works with a based root datum on `Z^rank` (cocharacters) paired
//! with its dual copy of `Z^rank` (characters) by the dot product, together
//! with a finite group of pinned diagram automorphisms standing in for the
//! inertia action. From that it computes coinvariant lattices, relative Weyl
//! groups, dominance, Schubert and semi-infinite dimensions, the fixed-point
//! dual group data and characteristic-zero branching.
//!
//! Everything is exact: integers are [`num_bigint::BigInt`] and rationals are
//! [`num_rational::BigRational`].

pub mod abelian;
pub mod cli;
pub mod coweights;
pub mod dual;
pub mod error;
pub mod galois;
pub mod input;
pub mod lattice;
pub mod presets;
pub mod rep;
pub mod rootdatum;
pub mod satake;
pub mod weyl;

pub use error::{Error, Result};
