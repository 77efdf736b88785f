//! Time/band concentration measures: for a normalized f,
//! `eps_T^2 = integral_{|t|>1} |f|^2` and
//! `eps_Omega^2 = (1/2pi) integral_{|w|>c} |fhat|^2`.
//!
//! The built-in analytic kinds are supported on [-1,1], so `eps_T = 0` and
//! the transform is a finite sum of shifted sinc kernels
//! `fhat(w) = sum_j A_j 2 sin(w - w_j)/(w - w_j)`. Diagonal band-tail terms
//! have the sine-integral closed form; cross terms are integrated by
//! per-period Gauss panels out to a cutoff, with the neglected remainder
//! estimated and reported.

use super::funcspec::FunctionSpec;
use crate::error::Result;
use crate::pswf::PswfBasis;
use crate::specfun::quadrature::QuadratureRule;
use crate::specfun::sinint::sinc_sq_tail;
use num_complex::Complex64;
use prolate_dd::Accumulator;

#[derive(Debug, Clone, Copy)]
pub struct Concentration {
    pub eps_t: f64,
    pub eps_omega: f64,
    /// Estimated absolute uncertainty of `eps_omega` from the truncated
    /// cross-term tail (zero when the closed form covers everything).
    pub eps_omega_err: f64,
}

/// `integral of sin^2(u)/u^2 over [a, infinity)` extended to a <= 0.
fn sinc_sq_tail_ext(a: f64) -> f64 {
    if a > 0.0 {
        sinc_sq_tail(a)
    } else if a == 0.0 {
        std::f64::consts::FRAC_PI_2
    } else {
        std::f64::consts::PI - sinc_sq_tail(-a)
    }
}

/// Concentration of a built-in kind with analytic frequency content.
///
/// `panel_span` controls how far past the largest frequency the cross terms
/// are integrated (the default used by [`concentration`] is 2e4).
pub fn concentration_with_span(
    f: &FunctionSpec,
    c: f64,
    panel_span: f64,
) -> Result<Concentration> {
    let freqs = f.frequency_content()?;
    let norm2 = f.l2_norm_squared()?;
    // supported inside [-1,1]: no time leakage
    let eps_t = 0.0;
    // diagonal closed form
    let mut diag = Accumulator::new();
    for &(w, a) in &freqs {
        let t = sinc_sq_tail_ext(c - w) + sinc_sq_tail_ext(c + w);
        diag.add(4.0 * a.norm_sqr() / (2.0 * std::f64::consts::PI) * t);
    }
    // Cross terms by panels over the fixed window [c, A] and [-A, -c]; the
    // window must not chase the largest frequency (lacunary kinds reach
    // 2^70), so anything outside it goes into the reported error bar.
    let a_cut = c + panel_span.max(64.0);
    let rule = QuadratureRule::gauss_legendre(16)?;
    let cross_density = |w: f64| -> f64 {
        // |fhat|^2 minus the diagonal part
        let mut fh = Complex64::new(0.0, 0.0);
        let mut d = 0.0;
        for &(wj, aj) in &freqs {
            let u = w - wj;
            let s = if u == 0.0 { 1.0 } else { u.sin() / u };
            fh += aj * 2.0 * s;
            d += 4.0 * aj.norm_sqr() * s * s;
        }
        fh.norm_sqr() - d
    };
    let mut cross = Accumulator::new();
    let panel = std::f64::consts::PI;
    let n_panels = ((a_cut - c) / panel).ceil() as usize;
    for side in [1.0f64, -1.0] {
        for p in 0..n_panels {
            let lo = c + p as f64 * panel;
            let hi = (lo + panel).min(a_cut);
            let h = hi - lo;
            if h <= 0.0 {
                break;
            }
            for (&t, &w) in rule.nodes().iter().zip(rule.weights()) {
                let om = side * (lo + 0.5 * h * (t + 1.0));
                cross.add(0.5 * h * w * cross_density(om) / (2.0 * std::f64::consts::PI));
            }
        }
    }
    // Error bar for neglected cross mass: pairs entirely inside the window
    // only leak their tail beyond A (envelope 1/(A - w)); any pair touching
    // a frequency outside the window gets the whole-line bound
    // min(pi, 8/|w_j - w_l|) on the integral of the sinc product.
    let margin = 2.0 * panel;
    let mut cross_bar = 0.0;
    let mut covered_amp = 0.0f64;
    let mut covered_amp_sq = 0.0f64;
    let mut covered_wmax = 0.0f64;
    for (j, &(wj, aj)) in freqs.iter().enumerate() {
        let j_in = wj.abs() <= a_cut - margin;
        if j_in {
            covered_amp += aj.norm();
            covered_amp_sq += aj.norm_sqr();
            covered_wmax = covered_wmax.max(wj.abs());
        }
        for &(wl, al) in &freqs[j + 1..] {
            let l_in = wl.abs() <= a_cut - margin;
            if !(j_in && l_in) {
                let delta = (wj - wl).abs();
                cross_bar += 8.0 * aj.norm() * al.norm() / (2.0 * std::f64::consts::PI)
                    * std::f64::consts::PI.min(8.0 / delta.max(1e-300));
            }
        }
    }
    // only the off-diagonal covered mass leaks past A (diagonals are exact)
    let covered_cross = (covered_amp * covered_amp - covered_amp_sq).max(0.0);
    if covered_cross > 0.0 && a_cut > covered_wmax {
        cross_bar += 4.0 * covered_cross / (std::f64::consts::PI * (a_cut - covered_wmax));
    }
    let e2 = ((diag.value() + cross.value()) / norm2).max(0.0);
    let eps_omega = e2.sqrt();
    let eps_omega_err = if eps_omega > 0.0 {
        0.5 * cross_bar / norm2 / eps_omega
    } else {
        (cross_bar / norm2).sqrt()
    };
    Ok(Concentration {
        eps_t,
        eps_omega,
        eps_omega_err,
    })
}

/// Concentration with the default cross-term panel span.
pub fn concentration(f: &FunctionSpec, c: f64) -> Result<Concentration> {
    concentration_with_span(f, c, 2e4)
}

/// Concentration of the band-limited combination `f = sum_{n} g_n psi_n`
/// viewed on the whole line: `eps_Omega = 0` structurally, and
/// `eps_T^2 = 1 - (sum g^2) / (sum g^2 / lambda)` from the dual norms.
pub fn band_limited_combination(basis: &PswfBasis, g: &[f64]) -> Concentration {
    let mut on_interval = 0.0;
    let mut on_line = 0.0;
    for (n, &gn) in g.iter().enumerate() {
        on_interval += gn * gn;
        on_line += gn * gn / basis.lambda(n);
    }
    Concentration {
        eps_t: (1.0 - on_interval / on_line).max(0.0).sqrt(),
        eps_omega: 0.0,
        eps_omega_err: 0.0,
    }
}
