//! Scalar special-function kernels: normalized Legendre polynomials,
//! half-integer Bessel functions, Gauss-Legendre rules, Legendre moments,
//! and the sine integral.
//!
//! Everything here is a pure function of its inputs and safe to call
//! concurrently; `QuadratureRule` values are immutable once built.

pub mod bessel;
pub mod gamma;
pub mod legendre;
pub mod moments;
pub mod quadrature;
pub mod sinint;

pub use bessel::{bessel_half_envelope, bessel_half_integer, bessel_j_half_batch, spherical_j_batch};
pub use legendre::{legendre_at_zero, legendre_batch, legendre_normalized};
pub use moments::{legendre_moment, legendre_moment_diag};
pub use quadrature::QuadratureRule;
pub use sinint::si;
