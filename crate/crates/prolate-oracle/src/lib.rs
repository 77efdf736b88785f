//! Independent reference implementations used to validate the main library:
//! a Nystrom discretization of the sinc-kernel operator for eigenvalues and
//! eigenfunction samples, a Golub-Welsch quadrature construction, and plain
//! quadrature inner products.
//!
//! Nothing in the main library calls this crate; agreement between the two
//! is asserted from the outside.

pub mod dense;
pub mod nystrom;
pub mod quadrature;

use num_complex::Complex64;

pub use nystrom::{nystrom_lambda, nystrom_trace, NystromResult};
pub use quadrature::{gauss_legendre, gauss_legendre_dd};

/// `<f, g> = integral of f(x) conj(g(x)) over [-1,1]` by an m-point rule,
/// with a self-convergence error estimate from the rule of half the size.
pub fn quadrature_inner_product(
    f: impl Fn(f64) -> Complex64,
    g: impl Fn(f64) -> Complex64,
    m: usize,
) -> (Complex64, f64) {
    assert!(m >= 16, "need at least a 16-point rule");
    let eval = |mm: usize| -> Complex64 {
        let (xs, ws) = gauss_legendre(mm);
        let mut re = prolate_dd::Accumulator::new();
        let mut im = prolate_dd::Accumulator::new();
        for (&x, &w) in xs.iter().zip(&ws) {
            let v = f(x) * g(x).conj();
            re.add(w * v.re);
            im.add(w * v.im);
        }
        Complex64::new(re.value(), im.value())
    };
    let full = eval(m);
    let half = eval(m / 2);
    (full, (full - half).norm())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn inner_product_orthonormal_legendre() {
        // <Pbar_3, Pbar_3> = 1 via explicit degree-3 polynomial
        let p3 = |x: f64| Complex64::new((2.5 * x * x * x - 1.5 * x) * 3.5_f64.sqrt(), 0.0);
        let (v, err) = quadrature_inner_product(p3, p3, 32);
        assert!((v.re - 1.0).abs() < 1e-14, "{v}");
        assert!(err < 1e-13);
    }

    #[test]
    fn inner_product_exponential_against_legendre() {
        // <e^{i pi x}, Pbar_2> = i^2 sqrt(2 pi/pi) sqrt(5/2) J_{5/2}(pi):
        // evaluate the closed form through the explicit spherical formula
        // j_2(x) = (3/x^3 - 1/x) sin x - 3 cos x / x^2
        let pi = std::f64::consts::PI;
        let j2 = (3.0 / (pi * pi * pi) - 1.0 / pi) * pi.sin() - 3.0 * pi.cos() / (pi * pi);
        let j52 = (2.0 * pi / pi).sqrt() * j2; // sqrt(2x/pi) j_2 at x = pi
        let expect = -(2.0_f64).sqrt() * (2.5_f64).sqrt() * j52;
        let f = |x: f64| Complex64::new((pi * x).cos(), (pi * x).sin());
        let p2 = |x: f64| Complex64::new((1.5 * x * x - 0.5) * 2.5_f64.sqrt(), 0.0);
        let (v, _) = quadrature_inner_product(f, p2, 64);
        assert!((v.re - expect).abs() < 1e-14, "{} vs {expect}", v.re);
        assert!(v.im.abs() < 1e-14);
    }

    #[test]
    fn self_convergence_estimate_is_honest() {
        // an oscillatory integrand near the resolution edge: the reported
        // estimate must dominate the actual m -> 2m movement
        let f = |x: f64| Complex64::new((61.0 * x).cos(), 0.0);
        let one = |_: f64| Complex64::new(1.0, 0.0);
        let (v64, est64) = quadrature_inner_product(f, one, 64);
        let (v128, _) = quadrature_inner_product(f, one, 128);
        assert!((v64 - v128).norm() <= est64.max(1e-14) * 4.0);
    }
}
