//! Independent numerical oracles for the test suites.
//!
//! Nothing in this crate touches the main library: matrices are plain
//! `Vec<Vec<f64>>`, the eigensolver is a textbook cyclic Jacobi sweep,
//! and derivatives come from central finite differences. That
//! independence is the point — these routines sit on the other side of
//! every dual-route check.

// Index-style loops here mirror the textbook algorithms they implement.
#![allow(clippy::needless_range_loop)]

pub mod finite_diff;
pub mod jacobi;
pub mod randmat;

pub use finite_diff::{gradient_fd, hessian_fd, jacobian_fd};
pub use jacobi::jacobi_eigenvalues;
pub use randmat::{random_diagonal, random_psd, random_symmetric, random_vector};
