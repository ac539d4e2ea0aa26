//! Exact linear algebra over `F_p[x]`: canonical forms of polynomial matrices.
//!
//! The crate computes shifted Popov forms, Hermite forms, pivot supports,
//! minimal kernel bases and minimal approximant bases of rectangular matrices
//! over `F_p[x]` for word-sized primes `p`. Everything is deterministic and
//! bit-exact except the Las Vegas completion route, which takes an explicit
//! seeded randomness source.
//!
//! Layout:
//! - [`gfp`]: arithmetic in the prime field `F_p`,
//! - [`poly`]: dense univariate polynomials over `F_p`,
//! - [`matrix`]: polynomial matrices, shifts, pivots and form predicates,
//! - [`bases`]: building blocks (weak Popov reduction, Popov normalization,
//!   approximant bases, kernel bases, exact quotients, rank profiles),
//! - [`forms`]: the top-level algorithms (completion, pivot support,
//!   known-support Popov, Popov/Hermite drivers),
//! - [`testkit`]: slow independent oracles and instance generators.

pub mod bases;
mod error;
pub mod forms;
pub mod gfp;
pub mod matrix;
pub mod poly;
pub mod testkit;

pub use error::{Error, Result};
pub use gfp::{FieldElement, PrimeField};
pub use matrix::{ColumnSet, FpMatrix, PivotProfile, PolyMatrix, Shift};
pub use poly::{Degree, Poly};
