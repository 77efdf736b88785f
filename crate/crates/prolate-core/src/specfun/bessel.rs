//! Half-integer Bessel functions `J_{m+1/2}(x)` through spherical Bessel
//! functions `j_m(x) = sqrt(pi/(2x)) J_{m+1/2}(x)`.
//!
//! Upward recurrence is stable for m < x; for m >= x the minimal solution is
//! recovered by Miller's downward recurrence, normalized with the identity
//! `sum_l (2l+1) j_l(x)^2 = 1`. The start depth is validated by re-running
//! deeper until the two passes agree.

use crate::error::{Error, Result};
use crate::specfun::gamma::ln_gamma;
use prolate_dd::{Accumulator, Dd};

const RESCALE_THRESHOLD: f64 = 1e150;
const RESCALE_FACTOR: f64 = 1e-150;

/// Upward recurrence j_{k+1} = (2k+1)/x * j_k - j_{k-1}; valid for m_max < x.
pub(crate) fn spherical_j_upward(m_max: usize, x: f64) -> Vec<f64> {
    let mut out = vec![0.0; m_max + 1];
    let (s, c) = x.sin_cos();
    out[0] = s / x;
    if m_max >= 1 {
        out[1] = s / (x * x) - c / x;
    }
    for k in 1..m_max {
        out[k + 1] = (2.0 * k as f64 + 1.0) / x * out[k] - out[k - 1];
    }
    out
}

fn miller_pass(m_max: usize, x: f64, start: usize) -> Vec<f64> {
    let mut v = vec![0.0; start + 2];
    v[start + 1] = 0.0;
    v[start] = 1.0;
    let mut k = start;
    while k > 0 {
        let next = (2.0 * k as f64 + 1.0) / x * v[k] - v[k + 1];
        v[k - 1] = next;
        if next.abs() > RESCALE_THRESHOLD {
            for w in v[k - 1..].iter_mut() {
                *w *= RESCALE_FACTOR;
            }
        }
        k -= 1;
    }
    let mut norm = Accumulator::new();
    for (l, &jv) in v.iter().enumerate() {
        norm.add((2.0 * l as f64 + 1.0) * jv * jv);
    }
    let scale = 1.0 / norm.value().sqrt();
    v.truncate(m_max + 1);
    for w in v.iter_mut() {
        *w *= scale;
    }
    v
}

/// Miller downward recurrence with self-validating start depth.
pub(crate) fn spherical_j_miller(m_max: usize, x: f64) -> Vec<f64> {
    let base = m_max + 16 + x.ceil() as usize;
    let mut extra = 0usize;
    let mut prev = miller_pass(m_max, x, base);
    loop {
        extra = (extra * 2).max(24);
        let cur = miller_pass(m_max, x, base + extra);
        let ok = prev.iter().zip(&cur).all(|(&a, &b)| {
            let scale = a.abs().max(b.abs());
            scale < 1e-280 || (a - b).abs() <= 1e-14 * scale
        });
        if ok {
            return cur;
        }
        prev = cur;
        if extra > 4096 {
            return prev;
        }
    }
}

/// `j_0(x) ... j_{m_max}(x)` for x > 0.
pub fn spherical_j_batch(m_max: usize, x: f64) -> Result<Vec<f64>> {
    if x <= 0.0 {
        return Err(Error::NonPositive { x });
    }
    if x > m_max as f64 + 2.0 {
        Ok(spherical_j_upward(m_max, x))
    } else {
        Ok(spherical_j_miller(m_max, x))
    }
}

/// `J_{m+1/2}(x)` for x > 0. Underflows to zero rather than overflowing.
pub fn bessel_half_integer(m: usize, x: f64) -> Result<f64> {
    Ok(spherical_j_batch(m, x)?[m] * (2.0 * x / std::f64::consts::PI).sqrt())
}

/// `J_{1/2}(x) ... J_{m_max+1/2}(x)` in one pass.
pub fn bessel_j_half_batch(m_max: usize, x: f64) -> Result<Vec<f64>> {
    let s = (2.0 * x / std::f64::consts::PI).sqrt();
    let mut v = spherical_j_batch(m_max, x)?;
    for w in v.iter_mut() {
        *w *= s;
    }
    Ok(v)
}

/// The envelope `(x/2)^{m+1/2} / Gamma(m+3/2)` bounding `|J_{m+1/2}(x)|`,
/// evaluated in log space so it survives far past f64 overflow of Gamma.
pub fn bessel_half_envelope(m: usize, x: f64) -> f64 {
    let nu = m as f64 + 0.5;
    ((nu * (x / 2.0).ln()) - ln_gamma(nu + 1.0)).exp()
}

// ---- double-double path ----

fn miller_pass_dd(m_max: usize, x: Dd, start: usize) -> Vec<Dd> {
    let mut v = vec![prolate_dd::ZERO; start + 2];
    v[start] = prolate_dd::ONE;
    let mut k = start;
    while k > 0 {
        let next = (2.0 * k as f64 + 1.0) / x * v[k] - v[k + 1];
        v[k - 1] = next;
        if next.hi.abs() > RESCALE_THRESHOLD {
            for w in v[k - 1..].iter_mut() {
                *w = w.mul_pow2(RESCALE_FACTOR);
            }
        }
        k -= 1;
    }
    let mut norm = prolate_dd::ZERO;
    for (l, &jv) in v.iter().enumerate() {
        norm = norm + (2.0 * l as f64 + 1.0) * jv * jv;
    }
    let scale = norm.sqrt().recip();
    v.truncate(m_max + 1);
    for w in v.iter_mut() {
        *w = *w * scale;
    }
    v
}

/// Double-double spherical Bessel batch. The upward branch relies on
/// double-double sin/cos, reliable for x up to ~2^40.
pub(crate) fn spherical_j_batch_dd(m_max: usize, x: Dd) -> Vec<Dd> {
    debug_assert!(x.hi > 0.0);
    if x.hi > m_max as f64 + 2.0 {
        let mut out = vec![prolate_dd::ZERO; m_max + 1];
        let (s, c) = x.sin_cos();
        out[0] = s / x;
        if m_max >= 1 {
            out[1] = s / (x * x) - c / x;
        }
        for k in 1..m_max {
            out[k + 1] = (2.0 * k as f64 + 1.0) / x * out[k] - out[k - 1];
        }
        return out;
    }
    let base = m_max + 32 + x.hi.ceil() as usize;
    let mut extra = 0usize;
    let mut prev = miller_pass_dd(m_max, x, base);
    loop {
        extra = (extra * 2).max(48);
        let cur = miller_pass_dd(m_max, x, base + extra);
        let ok = prev.iter().zip(&cur).all(|(&a, &b)| {
            let scale = a.hi.abs().max(b.hi.abs());
            scale < 1e-280 || (a - b).to_f64().abs() <= 1e-28 * scale
        });
        if ok {
            return cur;
        }
        prev = cur;
        if extra > 8192 {
            return prev;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn closed_forms() {
        // J_{1/2}(pi) = sqrt(2/pi^2) sin(pi) = 0
        let v = bessel_half_integer(0, std::f64::consts::PI).unwrap();
        assert!(v.abs() < 1e-15);
        // j_1(1) = sin 1 - cos 1; J_{3/2}(1) = sqrt(2/pi)(sin 1 - cos 1)
        let expect = (2.0 / std::f64::consts::PI).sqrt() * (1.0_f64.sin() - 1.0_f64.cos());
        let v = bessel_half_integer(1, 1.0).unwrap();
        assert!((v - expect).abs() < 1e-15, "{v} vs {expect}");
    }

    #[test]
    fn high_order_small_argument() {
        // Frozen from the 60-term ascending power series of J_{40.5}(10),
        // independently cross-checked against mpmath.
        let v = bessel_half_integer(40, 10.0).unwrap();
        let expect = 2.1284317445986989e-21;
        assert!(
            (v - expect).abs() < 1e-13 * expect,
            "J_40.5(10) = {v:e}, expected {expect:e}"
        );
    }

    #[test]
    fn domain_and_underflow() {
        assert!(bessel_half_integer(3, 0.0).is_err());
        assert!(bessel_half_integer(3, -2.0).is_err());
        // deep underflow must come back as zero, not overflow or NaN
        let v = bessel_half_integer(900, 1e-3).unwrap();
        assert_eq!(v, 0.0);
    }

    #[test]
    fn envelope_bound_sweep() {
        // |J_{m+1/2}(x)| <= (x/2)^{m+1/2}/Gamma(m+3/2) for all tested (m,x)
        for m in (0..=100).step_by(5) {
            for xi in 1..=10 {
                let x = 5.0 * xi as f64;
                let v = bessel_half_integer(m, x).unwrap().abs();
                let bound = bessel_half_envelope(m, x);
                assert!(
                    v <= bound * (1.0 + 1e-13) + 1e-300,
                    "m={m} x={x}: {v:e} > {bound:e}"
                );
            }
        }
    }

    #[test]
    fn upward_downward_overlap_agreement() {
        // In the overlap regime m ~ x both recurrences are usable for m < x;
        // they must agree to 1e-12 relative.
        for &x in &[12.0, 30.0, 77.5] {
            let m = x as usize - 2;
            let up = spherical_j_upward(m, x);
            let down = spherical_j_miller(m, x);
            for k in 0..=m {
                let scale = up[k].abs().max(1e-280);
                assert!(
                    (up[k] - down[k]).abs() < 1e-12 * scale.max(down[k].abs()),
                    "x={x} k={k}: up={:e} down={:e}",
                    up[k],
                    down[k]
                );
            }
        }
    }

    #[test]
    fn sum_rule() {
        // sum (2l+1) j_l(x)^2 = 1 from an upward pass at large x
        let x = 200.5;
        let j = spherical_j_batch(260, x).unwrap();
        let s: f64 = j
            .iter()
            .enumerate()
            .map(|(l, v)| (2.0 * l as f64 + 1.0) * v * v)
            .sum();
        assert!((s - 1.0).abs() < 1e-12, "{s}");
    }

    #[test]
    fn dd_agrees_with_f64() {
        for &(m_max, x) in &[(40usize, 10.0), (10, 50.0), (120, 64.0), (30, 1.0)] {
            let a = spherical_j_batch(m_max, x).unwrap();
            let b = spherical_j_batch_dd(m_max, Dd::from_f64(x));
            for k in 0..=m_max {
                let scale = a[k].abs().max(1e-200);
                assert!(
                    (a[k] - b[k].to_f64()).abs() < 1e-12 * scale,
                    "m_max={m_max} x={x} k={k}"
                );
            }
        }
    }
}
