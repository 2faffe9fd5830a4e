//! Dirac quantum walk on a polar spatial grid.
//!
//! The walk state is a two-component spinor per site of a grid whose angular
//! coordinate runs over the double cover `[0, 4π)`. Polar spin components are
//! anti-periodic under `θ → θ + 2π`, so physical states only carry
//! half-integer Fourier modes.
//!
//! Modules:
//! - [`field`]: grids, spinor fields, inner products, spin-basis changes.
//! - [`walk`]: coins, shifts and the free advancement operator.
//! - [`em`]: electromagnetic coupling and the uniform-field gauge.
//! - [`observables`]: angular spectra, `⟨Ĵ⟩`, orbital/spin split, audits.
//! - [`landau`]: Laguerre polynomials and relativistic Landau eigenstates.
//! - [`geometry`]: Christoffel symbols, n-beins and spin connections for
//!   diagonal metrics.
//! - [`dump`]: binary field dump format.

// NaN-rejecting range checks and index loops over tensor components are intended.
#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::needless_range_loop)]

pub mod dump;
pub mod em;
mod error;
pub mod exec;
pub mod field;
pub mod geometry;
pub mod landau;
pub mod observables;
pub mod unitary;
pub mod walk;

pub use error::{Error, Result};
pub use exec::Execution;
pub use field::{PolarGrid, SpinBasis, Spinor, SpinorField};
pub use unitary::Unitary2;

pub use num_complex::Complex64 as C64;
