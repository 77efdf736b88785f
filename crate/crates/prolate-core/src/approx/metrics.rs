//! Projection partial sums and error metrics.

use super::coeffs::ExpansionCoefficients;
use super::funcspec::FunctionSpec;
use crate::error::{Error, Result};
use crate::pswf::PswfBasis;
use crate::specfun::quadrature::QuadratureRule;
use num_complex::Complex64;
use prolate_dd::Accumulator;

/// Partial sum `S_N f(x) = sum_{n<N} a_n psi_n(x)`.
pub fn project(
    coeffs: &ExpansionCoefficients,
    basis: &PswfBasis,
    n_trunc: usize,
    x: f64,
) -> Result<Complex64> {
    Ok(project_grid(coeffs, basis, n_trunc, &[x])?[0])
}

/// `S_N f` at many points (shared Legendre passes).
pub fn project_grid(
    coeffs: &ExpansionCoefficients,
    basis: &PswfBasis,
    n_trunc: usize,
    xs: &[f64],
) -> Result<Vec<Complex64>> {
    if n_trunc > coeffs.n_count() {
        return Err(Error::IndexOutOfRange {
            n: n_trunc,
            n_max: coeffs.n_count(),
        });
    }
    let psi = basis.evaluate_many(n_trunc, xs)?;
    Ok((0..xs.len())
        .map(|i| {
            let mut re = Accumulator::new();
            let mut im = Accumulator::new();
            for n in 0..n_trunc {
                re.add(coeffs.values[n].re * psi[n][i]);
                im.add(coeffs.values[n].im * psi[n][i]);
            }
            Complex64::new(re.value(), im.value())
        })
        .collect())
}

/// The 101-point uniform grid `k/50`, k = -50..=50.
pub fn standard_grid() -> Vec<f64> {
    (-50..=50).map(|k| k as f64 / 50.0).collect()
}

/// The tabulated discrete error metric:
/// `[ (1/50) sum_{k=-50}^{50} |S_N f(k/50) - f(k/50)|^2 ]^{1/2}`.
pub fn grid_error(
    f: &FunctionSpec,
    coeffs: &ExpansionCoefficients,
    basis: &PswfBasis,
    n_trunc: usize,
) -> Result<f64> {
    let grid = standard_grid();
    let sn = project_grid(coeffs, basis, n_trunc, &grid)?;
    let mut acc = Accumulator::new();
    for (i, &x) in grid.iter().enumerate() {
        acc.add((sn[i] - f.evaluate(x)).norm_sqr());
    }
    Ok((acc.value() / 50.0).sqrt())
}

/// `|| f - S_N f ||_{L2(-1,1)}` by an m-point rule on the residual.
pub fn l2_error_quadrature(
    f: &FunctionSpec,
    coeffs: &ExpansionCoefficients,
    basis: &PswfBasis,
    n_trunc: usize,
    m: usize,
) -> Result<f64> {
    let rule = QuadratureRule::gauss_legendre(m)?;
    let sn = project_grid(coeffs, basis, n_trunc, rule.nodes())?;
    let mut acc = Accumulator::new();
    for (i, (&x, &w)) in rule.nodes().iter().zip(rule.weights()).enumerate() {
        acc.add(w * (sn[i] - f.evaluate(x)).norm_sqr());
    }
    Ok(acc.value().max(0.0).sqrt())
}

/// Parseval defect `integral |f|^2 - sum_{n < n_count} |a_n|^2` (the exact
/// squared L2 error of the full retained projection).
pub fn parseval_defect(f: &FunctionSpec, coeffs: &ExpansionCoefficients) -> Result<f64> {
    Ok(f.l2_norm_squared()? - coeffs.energy())
}
