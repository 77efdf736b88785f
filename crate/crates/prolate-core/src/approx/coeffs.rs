//! Expansion coefficients `a_n(f) = <f, psi_n>` by three routes: Gauss
//! quadrature, Fourier resampling at the points `k pi / c`, and closed forms
//! through the finite-Fourier values (stable even where `mu_n` underflows).

use super::funcspec::{gaussian_coefficients, weierstrass_truncation, FunctionSpec};
use crate::error::{Error, Result};
use crate::pswf::PswfBasis;
use crate::specfun::bessel::bessel_j_half_batch;
use crate::specfun::quadrature::QuadratureRule;
use num_complex::Complex64;
use prolate_dd::Accumulator;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CoeffMethod {
    Quadrature { m: usize },
    FourierResample { k_trunc: usize },
    ClosedForm,
}

#[derive(Debug, Clone)]
pub struct ExpansionCoefficients {
    pub values: Vec<Complex64>,
    pub method: CoeffMethod,
}

impl ExpansionCoefficients {
    pub fn n_count(&self) -> usize {
        self.values.len()
    }

    /// `sum |a_n|^2` (the Parseval partial sum).
    pub fn energy(&self) -> f64 {
        let mut acc = Accumulator::new();
        for v in &self.values {
            acc.add(v.norm_sqr());
        }
        acc.value()
    }
}

/// Quadrature route (an m-point rule applied to `f(x) psi_n(x)`).
pub fn coeff_quadrature(
    f: &FunctionSpec,
    basis: &PswfBasis,
    n_count: usize,
    m: usize,
) -> Result<ExpansionCoefficients> {
    coeff_quadrature_fn(|x| f.evaluate(x), basis, n_count, m)
}

/// Quadrature route for an arbitrary callable integrand.
pub fn coeff_quadrature_fn(
    f: impl Fn(f64) -> Complex64,
    basis: &PswfBasis,
    n_count: usize,
    m: usize,
) -> Result<ExpansionCoefficients> {
    let rule = QuadratureRule::gauss_legendre(m)?;
    let psi = basis.evaluate_many(n_count, rule.nodes())?;
    let fv: Vec<Complex64> = rule.nodes().iter().map(|&x| f(x)).collect();
    let values = (0..n_count)
        .map(|n| {
            let mut re = Accumulator::new();
            let mut im = Accumulator::new();
            for (i, &w) in rule.weights().iter().enumerate() {
                re.add(w * fv[i].re * psi[n][i]);
                im.add(w * fv[i].im * psi[n][i]);
            }
            Complex64::new(re.value(), im.value())
        })
        .collect();
    Ok(ExpansionCoefficients {
        values,
        method: CoeffMethod::Quadrature { m },
    })
}

/// Fourier-resampling route:
/// `a_n^K = (1/sqrt 2) sum_{k=-K}^{K} b_k mu_n psi_n(k pi / c)`,
/// factored through the finite-Fourier values so no division by a small
/// `|mu_n|` ever happens.
pub fn coeff_fourier(
    b: impl Fn(i64) -> Complex64,
    basis: &PswfBasis,
    n_count: usize,
    k_trunc: usize,
) -> Result<ExpansionCoefficients> {
    if k_trunc < 1 {
        return Err(Error::UnsupportedKind {
            what: "Fourier truncation K must be at least 1".into(),
        });
    }
    let inv_sqrt2 = 1.0 / 2.0_f64.sqrt();
    let mut re = vec![Accumulator::new(); n_count];
    let mut im = vec![Accumulator::new(); n_count];
    for k in 0..=k_trunc {
        let x = k as f64 * std::f64::consts::PI / basis.c();
        let ffv = basis.ffv_batch(n_count, x)?;
        let bp = b(k as i64);
        let bm = b(-(k as i64));
        for n in 0..n_count {
            let v = if k == 0 {
                bp * ffv[n]
            } else {
                // ffv(n, -x) = (-1)^n ffv(n, x)
                let flip = if n % 2 == 0 { 1.0 } else { -1.0 };
                bp * ffv[n] + bm * ffv[n] * flip
            };
            re[n].add(inv_sqrt2 * v.re);
            im[n].add(inv_sqrt2 * v.im);
        }
    }
    let values = (0..n_count)
        .map(|n| Complex64::new(re[n].value(), im[n].value()))
        .collect();
    Ok(ExpansionCoefficients {
        values,
        method: CoeffMethod::FourierResample { k_trunc },
    })
}

/// Closed form for `e^{i lambda x}`: `a_n = mu_n psi_n(lambda / c)`.
pub fn coeff_closed_form_exponential(
    lambda: f64,
    basis: &PswfBasis,
    n_count: usize,
) -> Result<ExpansionCoefficients> {
    let values = basis.ffv_batch(n_count, lambda / basis.c())?;
    Ok(ExpansionCoefficients {
        values,
        method: CoeffMethod::ClosedForm,
    })
}

/// Closed-form route for any kind with explicit frequency content:
/// `a_n = sum_j A_j mu_n psi_n(w_j / c)` term by term.
pub fn coeff_closed_form(
    f: &FunctionSpec,
    basis: &PswfBasis,
    n_count: usize,
) -> Result<ExpansionCoefficients> {
    match f {
        FunctionSpec::Exponential { lambda } => {
            coeff_closed_form_exponential(*lambda, basis, n_count)
        }
        FunctionSpec::Weierstrass { s } => {
            let kw = weierstrass_truncation(*s);
            let mut vals = vec![0.0; n_count];
            let mut comps = vec![Accumulator::new(); n_count];
            for k in 0..=kw {
                let amp = 2f64.powf(-(k as f64) * s);
                let x = 2f64.powi(k as i32) / basis.c();
                let ffv = basis.ffv_batch(n_count, x)?;
                for n in (0..n_count).step_by(2) {
                    comps[n].add(amp * ffv[n].re);
                }
            }
            for n in (0..n_count).step_by(2) {
                vals[n] = comps[n].value();
            }
            Ok(ExpansionCoefficients {
                values: vals.iter().map(|&v| Complex64::new(v, 0.0)).collect(),
                method: CoeffMethod::ClosedForm,
            })
        }
        FunctionSpec::RandomSeries { s, seed, term_count } => {
            let xk = gaussian_coefficients(*seed, *term_count);
            let mut comps = vec![Accumulator::new(); n_count];
            for (i, &g) in xk.iter().enumerate() {
                let k = (i + 1) as f64;
                let amp = g * k.powf(-s);
                let x = k * std::f64::consts::PI / basis.c();
                let ffv = basis.ffv_batch(n_count, x)?;
                for n in (0..n_count).step_by(2) {
                    comps[n].add(amp * ffv[n].re);
                }
            }
            let values = (0..n_count)
                .map(|n| Complex64::new(if n % 2 == 0 { comps[n].value() } else { 0.0 }, 0.0))
                .collect();
            Ok(ExpansionCoefficients {
                values,
                method: CoeffMethod::ClosedForm,
            })
        }
        FunctionSpec::Fourier { coeffs } => {
            let k_max = coeffs.iter().map(|&(k, _)| k.unsigned_abs()).max().unwrap_or(1);
            let lookup = |k: i64| -> Complex64 {
                coeffs
                    .iter()
                    .find(|&&(kk, _)| kk == k)
                    .map(|&(_, b)| b)
                    .unwrap_or(Complex64::new(0.0, 0.0))
            };
            let mut out = coeff_fourier(lookup, basis, n_count, k_max as usize)?;
            out.method = CoeffMethod::ClosedForm;
            Ok(out)
        }
        FunctionSpec::Samples { .. } => Err(Error::UnsupportedKind {
            what: "no closed form for sampled data".into(),
        }),
    }
}

/// Legendre expansion coefficients of `e^{i lambda x}`:
/// `alpha_n(0) = i^n sqrt(2 pi / lambda) sqrt(n+1/2) J_{n+1/2}(lambda)`;
/// `[sqrt 2, 0, 0, ...]` in the constant case lambda = 0.
pub fn legendre_baseline(lambda: f64, n_count: usize) -> Result<Vec<Complex64>> {
    if lambda == 0.0 {
        let mut v = vec![Complex64::new(0.0, 0.0); n_count];
        if n_count > 0 {
            v[0] = Complex64::new(2.0_f64.sqrt(), 0.0);
        }
        return Ok(v);
    }
    let lam = lambda.abs();
    let j = bessel_j_half_batch(n_count.saturating_sub(1), lam)?;
    let scale = (2.0 * std::f64::consts::PI / lam).sqrt();
    Ok((0..n_count)
        .map(|n| {
            let mag = scale * (n as f64 + 0.5).sqrt() * j[n];
            // i^n phase; for negative lambda conjugate parity flips odd terms
            let mut v = match n % 4 {
                0 => Complex64::new(mag, 0.0),
                1 => Complex64::new(0.0, mag),
                2 => Complex64::new(-mag, 0.0),
                _ => Complex64::new(0.0, -mag),
            };
            if lambda < 0.0 && n % 2 == 1 {
                v = -v;
            }
            v
        })
        .collect())
}
