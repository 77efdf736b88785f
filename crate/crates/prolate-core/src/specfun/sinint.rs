//! Sine integral Si(x) = integral of sin(t)/t over [0, x].
//!
//! Evaluated by per-period Gauss panels up to moderate x and by the
//! asymptotic auxiliary expansion beyond, where the expansion's smallest
//! term is far below double precision.

use crate::specfun::quadrature::QuadratureRule;
use prolate_dd::Accumulator;
use std::sync::OnceLock;

const ASYMPTOTIC_CUTOFF: f64 = 240.0;

fn panel_rule() -> &'static QuadratureRule {
    static RULE: OnceLock<QuadratureRule> = OnceLock::new();
    RULE.get_or_init(|| QuadratureRule::gauss_legendre(24).unwrap())
}

pub fn si(x: f64) -> f64 {
    if x < 0.0 {
        return -si(-x);
    }
    if x == 0.0 {
        return 0.0;
    }
    if x <= ASYMPTOTIC_CUTOFF {
        let rule = panel_rule();
        let n_panels = (x / std::f64::consts::PI).ceil() as usize;
        let h = x / n_panels as f64;
        let mut acc = Accumulator::new();
        for p in 0..n_panels {
            let a = p as f64 * h;
            for (&t, &w) in rule.nodes().iter().zip(rule.weights()) {
                let u = a + 0.5 * h * (t + 1.0);
                let v = if u == 0.0 { 1.0 } else { u.sin() / u };
                acc.add(0.5 * h * w * v);
            }
        }
        acc.value()
    } else {
        // Si(x) = pi/2 - f(x) cos x - g(x) sin x with the asymptotic series
        // f ~ (1/x) sum (-1)^k (2k)!/x^{2k}, g ~ (1/x^2) sum (-1)^k (2k+1)!/x^{2k}
        let x2 = x * x;
        let mut f = 0.0;
        let mut g = 0.0;
        let mut term_f = 1.0 / x;
        let mut term_g = 1.0 / x2;
        let mut k = 0.0f64;
        loop {
            f += term_f;
            g += term_g;
            let next_f = term_f * (-((2.0 * k + 1.0) * (2.0 * k + 2.0)) / x2);
            let next_g = term_g * (-((2.0 * k + 2.0) * (2.0 * k + 3.0)) / x2);
            if next_f.abs() >= term_f.abs() || k > 60.0 {
                break;
            }
            term_f = next_f;
            term_g = next_g;
            k += 1.0;
        }
        std::f64::consts::FRAC_PI_2 - f * x.cos() - g * x.sin()
    }
}

/// `F(a) = integral of sin(u)^2/u^2 over [a, infinity) = sin(a)^2/a + pi/2 - Si(2a)`.
///
/// Tail integral used by the band-concentration closed forms.
pub fn sinc_sq_tail(a: f64) -> f64 {
    assert!(a > 0.0);
    a.sin().powi(2) / a + std::f64::consts::FRAC_PI_2 - si(2.0 * a)
}
