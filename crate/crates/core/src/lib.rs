//! Best uniform polynomial approximation with box-constrained coefficients,
//! and effective uniqueness certificates for it.
//!
//! The crate is organized bottom-up:
//!
//! - [`schur`]: partitions, semistandard tableaux, Schur polynomials and the
//!   cap `N_n`.
//! - [`interp`]: Lagrange basis, interpolation with forbidden coefficient
//!   degrees, and the sign-alternating oscillator polynomial.
//! - [`bounds`]: Markov-type caps, the `χ` modulus of continuity, `F_n`, and
//!   the interpolation and oscillator floors.
//! - [`modulus`]: the modulus of uniqueness `Ψ`, the strong unicity constant
//!   `γ`, and the `L`-free modulus `Ψ*`.
//! - [`solver`]: the discretized best-approximation oracle, active constraint
//!   detection, alternation extraction, and end-to-end certification.

pub mod bounds;
pub mod error;
pub mod function;
pub mod interp;
pub mod linalg;
pub mod lp;
pub mod modulus;
pub mod poly;
pub mod problem;
pub mod scalar;
pub mod schur;
pub mod solver;
pub mod validate;

pub use error::{Error, Result};
pub use poly::Polynomial;
pub use scalar::{Rational, Scalar};
