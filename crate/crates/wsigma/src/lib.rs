//! Taylor coefficients of the Weierstrass σ-function by three independent
//! routes, plus a numerical auditor for the lattice-sum identities that
//! connect them.
//!
//! For a lattice Γ = ℤω₁ + ℤω₂ in ℂ the odd entire function σ(z; Γ) has a
//! Taylor expansion σ(z) = Σ_r W_r · z^{2r+1}/(2r+1)!. This crate computes
//! the coefficients W_r three ways:
//!
//! * [`taylor`] — Weierstrass' exact-rational recursion for the bivariate
//!   polynomials W_r(g₂, g₃);
//! * [`hermite`] — ratios H_r/H₀ of Gaussian-weighted lattice series built
//!   from terminating confluent hypergeometric polynomials;
//! * [`quad`] — Gaussian-weight integrals of σ over ℂ evaluated with a
//!   tensor Gauss-Hermite rule.
//!
//! The [`classical`] module supplies the reference machinery (σ as an
//! infinite product, ζ as a partial-fraction series, quasi-periods,
//! Eisenstein series), [`eisen_theta`] recovers Eisenstein series from
//! theta-series derivatives, and [`audit`] evaluates both sides of the
//! whole identity catalogue on a fixed lattice panel and reports residuals.
//!
//! The crate is `no_std` (with `alloc`); all floating-point work is `f64`
//! and every lattice sum uses a fixed, deterministic summation order.

#![cfg_attr(not(test), no_std)]
#![warn(missing_debug_implementations)]

extern crate alloc;

pub mod audit;
pub mod classical;
pub mod eisen_theta;
mod error;
pub mod hermite;
pub mod lattice;
pub mod quad;
pub mod sum;
pub mod taylor;

pub use error::Error;
pub use lattice::{Lattice, LatticePoint, TruncationPolicy};
pub use sum::LatticeSumResult;

/// Convenience alias used throughout the crate.
pub type Complex64 = num_complex::Complex<f64>;

/// Result alias for fallible operations.
pub type Result<T> = core::result::Result<T, Error>;
