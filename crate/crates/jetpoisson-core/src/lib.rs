//! Exact-arithmetic engine for coboundary Poisson structures on groups of
//! formal diffeomorphisms.
//!
//! The crate works throughout with truncated formal power/Laurent series over
//! ℚ (or over polynomial coefficient rings in jet coordinates) and builds, on
//! top of them:
//!
//! * jet-group operations — composition, inversion, Jacobians — for formal
//!   maps with invertible linear part ([`jetgroup`]);
//! * triangular r-matrices for the Lie algebra of formal vector fields,
//!   classical Yang–Baxter residuals, and the associated Lie-bialgebra
//!   operators ([`bialgebra`]);
//! * the induced Poisson–Lie bracket polynomials in jet coordinates
//!   ([`grouppoisson`]);
//! * induced Poisson structures on the underlying space and on jet spaces of
//!   maps between spaces ([`homspace`]);
//! * integer-matrix orbit representatives: canonical Laurent-monomial
//!   generator tuples, their r-matrices and induced brackets ([`classify`]).
//!
//! Everything is exact: coefficients are arbitrary-precision rationals, all
//! series are truncated at a fixed total degree, and every residual reports
//! the degree up to which its vanishing is certified. No floating point is
//! used anywhere.
//!
//! The crate is `no_std` (it requires `alloc`); serialization, file formats
//! and the command-line front end live in the companion crate.

#![cfg_attr(not(test), no_std)]
#![forbid(unsafe_code)]

extern crate alloc;

pub mod bialgebra;
pub mod classify;
pub mod coeff;
pub mod error;
pub mod grouppoisson;
pub mod homspace;
pub mod jetgroup;
pub mod matrix;
pub mod rational;
pub mod series;

pub use coeff::{Coeff, CoeffPoly, Indeterminate, Monomial};
pub use error::Error;
pub use rational::Rational;
pub use series::{Series, Truncation};
