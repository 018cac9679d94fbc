//! Exact finite-scale dynamics of multivalued maps on integer grids:
//! hyperspace neighborhoods, periods, colorings, brightening, and
//! hyperplane extensions, all over arbitrary-precision arithmetic.

pub mod coloring;
pub mod dynamics;
pub mod error;
pub mod geometry;
pub mod harness;
pub mod hyperspace;
pub mod io;
pub mod scalar;

pub use error::{Error, Result};
