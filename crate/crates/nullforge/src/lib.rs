//! Index-dependent element-wise matrix transformations `b_ij = a_ij / g(i,j)`
//! (or `a_ij * g(i,j)`), the separability condition under which they preserve
//! rank and nullity, and the machinery built on top of that: predicted null
//! bases, eigenvalue-preserving rescalings with their similarity matrices, and
//! clockwork / dimensional-deconstruction mass matrices with closed-form zero
//! modes and Kaluza-Klein spectra.
//!
//! The crate is organised as a library first; the `nullforge` binary is a thin
//! front-end over [`cli::run`]. Start with the runnable examples:
//!
//! ```bash
//! cargo run --example worked_examples
//! cargo run --example clockwork_profile
//! cargo run --example kk_spectrum
//! ```
//!
//! Matrices carry their scalar domain with them: exact arbitrary-precision
//! rationals (every rank/nullity statement is checked with zero tolerance) or
//! IEEE doubles (checked against singular-value thresholds). Transform
//! functions are written in a tiny expression language, e.g. `q^(i-j)` or
//! `sin(2*a*i)*a^((-1)^j*j)`, parsed by [`gfdsl`].

pub mod analysis;
pub mod cli;
pub mod eigen;
pub mod gfdsl;
pub mod io;
pub mod matrix;
pub mod models;
pub mod svd;
pub mod transform;

pub use gfdsl::{Expr, TransformFn};
pub use matrix::{DenseMatrix, Domain, NullBasis, Spectrum, SpectrumKind, Vector};
pub use transform::Mode;
