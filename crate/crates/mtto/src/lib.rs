//! Matrix-valued truncated Toeplitz operators on the finite model spaces
//! attached to Theta(z) = z^N I, together with checkers that decide when a
//! product of two such operators is again one.
//!
//! For Theta(z) = z^N I on E = C^d the model space is the space of E-valued
//! polynomials of degree at most N - 1, and a truncated Toeplitz operator is
//! exactly an N x N block Toeplitz matrix with d x d blocks. The interesting
//! question is closure under multiplication: the product of two block
//! Toeplitz matrices is rarely block Toeplitz, and this crate implements a
//! criterion deciding exactly when it is, given that the two symbols commute
//! coefficientwise and are compatible with a fixed conjugation on C^d. The
//! criterion compares two small products of block column maps built from the
//! analytic and coanalytic halves of the symbols; a brute-force oracle that
//! multiplies the operators out and inspects the diagonals is kept alongside
//! to keep the criterion honest.
//!
//! Module map:
//!
//! * [`linalg`]: dense complex matrices, conjugations, tolerance conventions.
//! * [`symbols`]: banded Laurent symbols, their analytic/coanalytic split,
//!   commutation and compatibility predicates, random symbol families.
//! * [`model`]: the model space, block Toeplitz operators, block column maps,
//!   the canonical conjugation on the shifted model space.
//! * [`analysis`]: the product and difference criteria, the coefficientwise
//!   criteria grid, the Toeplitz oracle, symbol extraction.
//! * [`fast`]: FFT circulant-embedding apply for large N.
//! * [`suite`]: seeded randomized verification runs and their JSON reports.
//! * [`cli`]: argument parsing and subcommand dispatch for the `mtto` binary.

pub mod analysis;
pub mod cli;
pub mod error;
pub mod fast;
pub mod linalg;
pub mod model;
pub mod suite;
pub mod symbols;

pub use error::{Error, Result};
