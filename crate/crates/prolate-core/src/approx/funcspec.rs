//! Target-function descriptions for the approximation engine.

use crate::error::{Error, Result};
use num_complex::Complex64;

/// A tagged description of a function on [-1,1].
#[derive(Debug, Clone)]
pub enum FunctionSpec {
    /// `e^{i lambda x}`
    Exponential { lambda: f64 },
    /// `sum_{k>=0} cos(2^k x) / 2^{ks}`, truncated so the dropped tail is
    /// below 2^-52 (see [`weierstrass_truncation`]).
    Weierstrass { s: f64 },
    /// `sum_{k=1}^{term_count} X_k k^{-s} cos(k pi x)` with X_k independent
    /// standard Gaussians from the pinned generator (seed-reproducible).
    RandomSeries { s: f64, seed: u64, term_count: usize },
    /// Point samples on a grid; evaluated by linear interpolation.
    Samples { grid: Vec<f64>, values: Vec<f64> },
    /// `sum_k b_k e^{i k pi x} / sqrt(2)` (orthonormal Fourier basis on I).
    Fourier { coeffs: Vec<(i64, Complex64)> },
}

/// Truncation index for the lacunary cosine series: `ceil(52/s) + 2`, so
/// `sum_{k > K_w} 2^{-ks} < 2^{-52}`.
pub fn weierstrass_truncation(s: f64) -> usize {
    (52.0 / s).ceil() as usize + 2
}

/// splitmix64 finalizer.
fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e3779b97f4a7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58476d1ce4e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d049bb133111eb);
    z ^ (z >> 31)
}

fn unit_from_bits(bits: u64) -> f64 {
    // 53 top bits -> [0,1)
    (bits >> 11) as f64 * (1.0 / 9007199254740992.0)
}

/// Standard Gaussians `X_1 ... X_count` from the counter-based splitmix64
/// stream with a Box-Muller transform; fully determined by the seed.
pub fn gaussian_coefficients(seed: u64, count: usize) -> Vec<f64> {
    (0..count)
        .map(|k| {
            let u1 = unit_from_bits(splitmix64(seed ^ splitmix64((2 * k) as u64 + 1)));
            let u2 = unit_from_bits(splitmix64(seed ^ splitmix64((2 * k + 1) as u64 + 1)));
            (-2.0 * (1.0 - u1).ln()).sqrt() * (2.0 * std::f64::consts::PI * u2).cos()
        })
        .collect()
}

impl FunctionSpec {
    pub fn evaluate(&self, x: f64) -> Complex64 {
        match self {
            FunctionSpec::Exponential { lambda } => {
                Complex64::new((lambda * x).cos(), (lambda * x).sin())
            }
            FunctionSpec::Weierstrass { s } => {
                let kw = weierstrass_truncation(*s);
                let mut acc = prolate_dd::Accumulator::new();
                for k in 0..=kw {
                    acc.add((2f64.powi(k as i32) * x).cos() * 2f64.powf(-(k as f64) * s));
                }
                Complex64::new(acc.value(), 0.0)
            }
            FunctionSpec::RandomSeries { s, seed, term_count } => {
                let xk = gaussian_coefficients(*seed, *term_count);
                let mut acc = prolate_dd::Accumulator::new();
                for (i, &g) in xk.iter().enumerate() {
                    let k = (i + 1) as f64;
                    acc.add(g * k.powf(-s) * (k * std::f64::consts::PI * x).cos());
                }
                Complex64::new(acc.value(), 0.0)
            }
            FunctionSpec::Samples { grid, values } => {
                let i = match grid.binary_search_by(|g| g.total_cmp(&x)) {
                    Ok(i) => return Complex64::new(values[i], 0.0),
                    Err(i) => i,
                };
                if i == 0 {
                    return Complex64::new(values[0], 0.0);
                }
                if i >= grid.len() {
                    return Complex64::new(*values.last().unwrap(), 0.0);
                }
                let t = (x - grid[i - 1]) / (grid[i] - grid[i - 1]);
                Complex64::new(values[i - 1] * (1.0 - t) + values[i] * t, 0.0)
            }
            FunctionSpec::Fourier { coeffs } => {
                let mut v = Complex64::new(0.0, 0.0);
                for &(k, b) in coeffs {
                    let ph = k as f64 * std::f64::consts::PI * x;
                    v += b * Complex64::new(ph.cos(), ph.sin());
                }
                v / 2.0_f64.sqrt()
            }
        }
    }

    /// The function as a finite list of exponentials `sum A_j e^{i w_j x}`;
    /// errors for the sampled kind.
    pub fn frequency_content(&self) -> Result<Vec<(f64, Complex64)>> {
        match self {
            FunctionSpec::Exponential { lambda } => {
                Ok(vec![(*lambda, Complex64::new(1.0, 0.0))])
            }
            FunctionSpec::Weierstrass { s } => {
                let kw = weierstrass_truncation(*s);
                let mut out = Vec::with_capacity(2 * (kw + 1));
                for k in 0..=kw {
                    let w = 2f64.powi(k as i32);
                    let a = Complex64::new(0.5 * 2f64.powf(-(k as f64) * s), 0.0);
                    out.push((w, a));
                    out.push((-w, a));
                }
                Ok(out)
            }
            FunctionSpec::RandomSeries { s, seed, term_count } => {
                let xk = gaussian_coefficients(*seed, *term_count);
                let mut out = Vec::with_capacity(2 * term_count);
                for (i, &g) in xk.iter().enumerate() {
                    let k = (i + 1) as f64;
                    let w = k * std::f64::consts::PI;
                    let a = Complex64::new(0.5 * g * k.powf(-s), 0.0);
                    out.push((w, a));
                    out.push((-w, a));
                }
                Ok(out)
            }
            FunctionSpec::Fourier { coeffs } => Ok(coeffs
                .iter()
                .map(|&(k, b)| (k as f64 * std::f64::consts::PI, b / 2f64.sqrt()))
                .collect()),
            FunctionSpec::Samples { .. } => Err(Error::UnsupportedKind {
                what: "sampled data has no analytic frequency content".into(),
            }),
        }
    }

    /// Smoothness exponent governing the expected convergence rate, where
    /// the kind pins one: s for the lacunary series (any s' < s), s - 1/2
    /// for the random series (almost surely in H^{s'} for s' < s - 1/2).
    pub fn sobolev_exponent(&self) -> Option<f64> {
        match self {
            FunctionSpec::Weierstrass { s } => Some(*s),
            FunctionSpec::RandomSeries { s, .. } => Some(*s - 0.5),
            _ => None,
        }
    }

    /// `integral of |f|^2 over [-1,1]` from the frequency content
    /// (`integral e^{i(w1-w2)x} = 2 sinc(w1-w2)`); errors for samples.
    pub fn l2_norm_squared(&self) -> Result<f64> {
        let freqs = self.frequency_content()?;
        let mut acc = prolate_dd::Accumulator::new();
        for (j, &(wj, aj)) in freqs.iter().enumerate() {
            for &(wl, al) in &freqs[j..] {
                let d = wj - wl;
                let sinc = if d == 0.0 { 1.0 } else { d.sin() / d };
                let prod = (aj * al.conj()).re * 2.0 * sinc;
                // off-diagonal pairs appear twice (j,l) and (l,j); real part
                acc.add(if d == 0.0 { prod } else { 2.0 * prod });
            }
        }
        Ok(acc.value())
    }

    /// `sum (1 + w^2)^s |A|^2` over the explicit frequency content: the
    /// Sobolev-norm proxy used for the bound components.
    pub fn hs_norm_proxy(&self, s: f64) -> Result<f64> {
        let freqs = self.frequency_content()?;
        Ok(freqs
            .iter()
            .map(|&(w, a)| (1.0 + w * w).powf(s) * a.norm_sqr())
            .sum())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::specfun::quadrature::QuadratureRule;

    #[test]
    fn truncation_rule() {
        assert_eq!(weierstrass_truncation(1.0), 54);
        assert_eq!(weierstrass_truncation(0.75), 72);
        assert_eq!(weierstrass_truncation(2.0), 28);
        // dropped tail below 2^-52
        let s = 0.75;
        let kw = weierstrass_truncation(s);
        let tail: f64 = (kw + 1..kw + 200).map(|k| 2f64.powf(-(k as f64) * s)).sum();
        assert!(tail < 2f64.powi(-52));
    }

    #[test]
    fn rng_is_deterministic_and_plausibly_gaussian() {
        let a = gaussian_coefficients(0x5EED, 4096);
        let b = gaussian_coefficients(0x5EED, 4096);
        assert_eq!(a, b);
        let c = gaussian_coefficients(0x5EEE, 4096);
        assert_ne!(a, c);
        let mean = a.iter().sum::<f64>() / a.len() as f64;
        let var = a.iter().map(|x| (x - mean) * (x - mean)).sum::<f64>() / a.len() as f64;
        assert!(mean.abs() < 0.06, "mean {mean}");
        assert!((var - 1.0).abs() < 0.08, "var {var}");
        for x in &a {
            assert!(x.is_finite());
        }
    }

    #[test]
    fn l2_norm_closed_form_matches_quadrature() {
        let rule = QuadratureRule::gauss_legendre(8192).unwrap();
        for f in [
            FunctionSpec::Exponential { lambda: 17.0 },
            FunctionSpec::Weierstrass { s: 2.0 },
            FunctionSpec::RandomSeries {
                s: 1.5,
                seed: 7,
                term_count: 40,
            },
            FunctionSpec::Fourier {
                coeffs: vec![
                    (0, Complex64::new(1.0, 0.0)),
                    (3, Complex64::new(0.5, -0.25)),
                ],
            },
        ] {
            let closed = f.l2_norm_squared().unwrap();
            let quad = rule.integrate(|x| f.evaluate(x).norm_sqr());
            assert!(
                (closed - quad).abs() < 1e-8 * closed.max(1.0),
                "{closed} vs {quad}"
            );
        }
    }

    #[test]
    fn exponential_norm_is_two() {
        let f = FunctionSpec::Exponential { lambda: 50.0 };
        assert!((f.l2_norm_squared().unwrap() - 2.0).abs() < 1e-13);
    }

    #[test]
    fn samples_kind_interpolates_and_rejects_analytics() {
        let f = FunctionSpec::Samples {
            grid: vec![-1.0, 0.0, 1.0],
            values: vec![0.0, 1.0, 0.0],
        };
        assert!((f.evaluate(0.5).re - 0.5).abs() < 1e-15);
        assert!((f.evaluate(0.0).re - 1.0).abs() < 1e-15);
        assert!(f.frequency_content().is_err());
        assert!(f.l2_norm_squared().is_err());
    }
}
