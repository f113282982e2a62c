//! Gamma-type measures on spaces of vector-valued distributions, the O(n,1)
//! action on the boundary, and numerical models of the representations of
//! the current group built on them.
//!
//! The runnable programs in `examples/` are the best entry point.

pub mod error;
pub mod specfun;

pub use error::{Error, Result};
pub mod group;
pub mod measures;
pub mod process;
pub mod quadrature;
pub mod reps;
pub mod suite;
