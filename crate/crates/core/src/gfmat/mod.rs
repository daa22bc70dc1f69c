//! Exact dense linear algebra over prime fields.
//!
//! Everything that computes an `h^0` in this crate ends in [`rank`]. The
//! [`rational_rank`] routine is an independent fraction-free elimination over
//! the integers, used to cross-check the modular rank on small matrices.

mod field;
mod matrix;
mod rational;

pub use field::{field_inverse, is_prime, FieldElement, PrimeField, DEFAULT_PRIME};
pub use matrix::{rank, DenseMatrix};
pub use rational::{rational_rank, IntMatrix};
