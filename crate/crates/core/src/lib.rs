//! Fourier-analytic linear programs for mutually unbiased bases in dimension six.
//!
//! The crate builds members of Karlsson's three-parameter family of 6×6
//! complex Hadamard matrices, evaluates the permutation-symmetrized Fourier
//! functionals `g`, `G`, `f` and `F` on sets of matrices, and assembles the
//! sparse linear programs whose variables are the values of `F` and `G` on
//! the exponent lattice. A primal simplex in floating point or exact rational
//! arithmetic solves the small instances; larger ones are exported as MPS.
//!
//! ```
//! use mublp::karlsson::{self, KarlssonParams};
//! use mublp::fourier::{g_single, ExponentVector};
//!
//! let k = karlsson::build(&KarlssonParams::new(0.3, 1.1, 0.7)).unwrap();
//! let rho = ExponentVector::new(vec![1, 1, 1, -1, -1, -1]);
//! assert!(g_single(&k, &rho).unwrap().norm() < 1e-9);
//! ```

// `!(r <= tol)` is used on purpose so that NaN residuals fail.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod error;
pub mod fourier;
pub mod gamma;
pub mod karlsson;
pub mod lp;
pub mod matrix;
pub mod mub;
pub mod verify;

mod par;

pub use error::{Error, Result};
pub use matrix::PhaseMatrix;
