//! Frobenius numbers of numerical semigroups and explicit tilings of
//! n-dimensional boxes by rectangular bricks.
//!
//! The crate is organised bottom-up:
//!
//! * [`semigroup`] computes Frobenius numbers and nonnegative integer
//!   representations over a set of generators.
//! * [`model`] holds boxes, bricks, placements and tilings, the exact and
//!   sampled verifiers, and the geometric combinators (extrusion, stacking,
//!   grid fill).
//! * [`constructor`] turns an admissible system of `n + 1` bricks into a
//!   concrete tiling of any box whose sides all exceed the system's bound.
//! * [`planar`] holds the two-dimensional criteria and square compositions.
//! * [`oracle`] is a brute-force exact-cover search used as ground truth.
//! * [`render`] draws two-dimensional tilings as ASCII art or SVG.

pub mod constructor;
pub mod error;
pub mod model;
pub mod oracle;
pub mod planar;
pub mod render;
pub mod semigroup;

pub use error::{Error, Result};
