//! Exact symbolic kernel for graded Dirac and graded Poisson structures.
//!
//! Everything is computed over `ℚ[x1, …, xn]` with exact rationals; no floating
//! point is used anywhere.

#![cfg_attr(not(test), no_std)]

extern crate alloc;

pub mod ansatz;
pub mod blade;
pub mod error;
pub mod exterior;
pub mod field_theory;
pub mod graded_manifold;
pub mod graded_poisson;
pub mod identities;
pub mod linalg;
pub mod linear_dirac;
pub mod poly;
pub mod random;
pub mod verdict;

pub use blade::Blade;
pub use error::{Error, Result};
pub use exterior::{
    interior, lie_bracket, lie_derivative, schouten_nijenhuis, Chart, Form, MultiVector,
};
pub use poly::{Monomial, Polynomial, Scalar};
pub use verdict::Verdict;
