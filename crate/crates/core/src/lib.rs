//! Relaxed strong-convexity classes, first-order methods and rate verification
//! for structured convex problems `min_{x ∈ X} g(Ax) + cᵀx`.
//!
//! The crate is `no_std` and only needs an allocator.

#![no_std]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod classes;
pub mod error;
pub mod linalg;
pub mod problems;
pub mod rates;
pub mod rng;
pub mod sets;
pub mod solvers;

pub use error::{Error, Result};
pub use linalg::{DenseMatrix, DenseVector};
pub use problems::{InnerFunction, OptimalSet, ProblemConstants, StructuredProblem};
pub use sets::{ConeSegment, FeasibleSet};
