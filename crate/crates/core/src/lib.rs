//! Matrix Bruck loops on the positive definite isometries of an indefinite
//! hermitian (or orthogonal) form, and their affine extensions to loops of
//! affine subspaces.
//!
//! The crate is `no_std` and needs only `alloc`. File formats and the
//! command-line front end live in the companion `bruckloop-cli` crate.

// Comparisons are written as `!(x <= tol)` so that NaN counts as a failure.
#![allow(clippy::neg_cmp_op_on_partial_ord)]
#![cfg_attr(not(test), no_std)]

extern crate alloc;

pub mod affine;
pub mod error;
pub mod extension;
pub mod forms;
pub mod loops;
pub mod matrix;
pub mod matrix_loop;
pub mod properties;
pub mod rng;
pub mod scalar;
pub mod spectral;

pub use error::Error;
pub use forms::{PhiElement, SigmaElement, SignatureForm};
pub use matrix::Matrix;
pub use matrix_loop::MatrixLoop;
pub use rng::SampleStream;
pub use scalar::{Field, Scalar};
pub use spectral::Tolerance;

pub use num_complex::Complex64;
