//! Prolate spheroidal wave functions on [-1,1]: the Legendre-Galerkin
//! spectrum, stable evaluation inside and outside the interval, eigenvalues
//! of the finite Fourier transform, inequality diagnostics, and spectral
//! approximation of functions in Sobolev spaces.

pub mod approx;
pub mod bounds;
pub mod eigensystem;
pub mod error;
pub mod pswf;
pub mod specfun;

pub use error::{Error, Result};
