//! Normalized Legendre polynomials `Pbar_k = sqrt(k+1/2) P_k`, orthonormal
//! on [-1,1], via the stable upward three-term recurrence.

use crate::error::{Error, Result};
use prolate_dd::Dd;

const DOMAIN_SLACK: f64 = 1e-12;

fn check_domain(x: f64) -> Result<f64> {
    if x.abs() > 1.0 + DOMAIN_SLACK {
        return Err(Error::OutsideInterval { x });
    }
    Ok(x.clamp(-1.0, 1.0))
}

/// `Pbar_k(x)` for a single degree.
pub fn legendre_normalized(k: usize, x: f64) -> Result<f64> {
    let x = check_domain(x)?;
    let mut pm = 1.0; // P_0
    if k == 0 {
        return Ok(pm * 0.5_f64.sqrt());
    }
    let mut p = x; // P_1
    for j in 1..k {
        let jf = j as f64;
        let next = ((2.0 * jf + 1.0) * x * p - jf * pm) / (jf + 1.0);
        pm = p;
        p = next;
    }
    Ok(p * (k as f64 + 0.5).sqrt())
}

/// All of `Pbar_0(x) ... Pbar_{k_max}(x)` in one recurrence pass.
pub fn legendre_batch(k_max: usize, x: f64) -> Result<Vec<f64>> {
    let x = check_domain(x)?;
    let mut out = vec![0.0; k_max + 1];
    legendre_batch_into(x, &mut out);
    Ok(out)
}

/// Recurrence core; `x` must already be validated. Fills `out[k] = Pbar_k(x)`.
pub(crate) fn legendre_batch_into(x: f64, out: &mut [f64]) {
    let k_max = out.len() - 1;
    out[0] = 1.0;
    if k_max >= 1 {
        out[1] = x;
    }
    for j in 1..k_max {
        let jf = j as f64;
        out[j + 1] = ((2.0 * jf + 1.0) * x * out[j] - jf * out[j - 1]) / (jf + 1.0);
    }
    for (k, v) in out.iter_mut().enumerate() {
        *v *= (k as f64 + 0.5).sqrt();
    }
}

/// Double-double variant of [`legendre_batch_into`] for cancellation-critical sums.
pub(crate) fn legendre_batch_into_dd(x: Dd, out: &mut [Dd]) {
    let k_max = out.len() - 1;
    out[0] = prolate_dd::ONE;
    if k_max >= 1 {
        out[1] = x;
    }
    for j in 1..k_max {
        let jf = j as f64;
        out[j + 1] = ((2.0 * jf + 1.0) * x * out[j] - jf * out[j - 1]) / (jf + 1.0);
    }
    for (k, v) in out.iter_mut().enumerate() {
        *v = *v * Dd::from_f64(k as f64 + 0.5).sqrt();
    }
}

/// `(Pbar_k(0), Pbar_k'(0))` for k = 0..=k_max.
///
/// P_{2m}(0) = (-1)^m (2m-1)!!/(2m)!!, P'_{2m+1}(0) = (2m+1) P_{2m}(0); the
/// opposite parities vanish. Computed by the recurrence to avoid factorial
/// overflow.
pub fn legendre_at_zero(k_max: usize) -> (Vec<f64>, Vec<f64>) {
    let mut p = vec![0.0; k_max + 1];
    let mut dp = vec![0.0; k_max + 1];
    p[0] = 1.0;
    if k_max >= 1 {
        dp[1] = 1.0;
    }
    for j in 1..k_max {
        let jf = j as f64;
        // P_{j+1}(0) = -j P_{j-1}(0) / (j+1)
        p[j + 1] = -jf * p[j - 1] / (jf + 1.0);
        // P'_{j+1}(0) = ((2j+1) P_j(0) - j P'_{j-1}(0)) / (j+1)
        dp[j + 1] = ((2.0 * jf + 1.0) * p[j] - jf * dp[j - 1]) / (jf + 1.0);
    }
    for k in 0..=k_max {
        let s = (k as f64 + 0.5).sqrt();
        p[k] *= s;
        dp[k] *= s;
    }
    (p, dp)
}

/// Double-double variant of [`legendre_at_zero`].
pub(crate) fn legendre_at_zero_dd(k_max: usize) -> (Vec<Dd>, Vec<Dd>) {
    let mut p = vec![prolate_dd::ZERO; k_max + 1];
    let mut dp = vec![prolate_dd::ZERO; k_max + 1];
    p[0] = prolate_dd::ONE;
    if k_max >= 1 {
        dp[1] = prolate_dd::ONE;
    }
    for j in 1..k_max {
        let jf = j as f64;
        p[j + 1] = -jf * p[j - 1] / (jf + 1.0);
        dp[j + 1] = ((2.0 * jf + 1.0) * p[j] - jf * dp[j - 1]) / (jf + 1.0);
    }
    for k in 0..=k_max {
        let s = Dd::from_f64(k as f64 + 0.5).sqrt();
        p[k] = p[k] * s;
        dp[k] = dp[k] * s;
    }
    (p, dp)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constant_and_endpoint() {
        // Pbar_0 = 1/sqrt(2) everywhere
        assert!((legendre_normalized(0, 0.7).unwrap() - 0.5_f64.sqrt()).abs() < 1e-15);
        // P_k(1) = 1 so Pbar_k(1) = sqrt(k+1/2)
        assert!((legendre_normalized(1, 1.0).unwrap() - 1.5_f64.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn degree_five_hand_expanded() {
        // P_5(x) = (63 x^5 - 70 x^3 + 15 x)/8 evaluated by explicit arithmetic
        let x: f64 = 0.3;
        let p5 = (63.0 * x.powi(5) - 70.0 * x.powi(3) + 15.0 * x) / 8.0;
        let expect = p5 * (5.5_f64).sqrt();
        assert!((legendre_normalized(5, 0.3).unwrap() - expect).abs() < 1e-15);
    }

    #[test]
    fn batch_matches_scalar() {
        let b = legendre_batch(50, 0.3).unwrap();
        assert!((b[5] - legendre_normalized(5, 0.3).unwrap()).abs() < 1e-14);
        let b = legendre_batch(1, 0.0).unwrap();
        assert_eq!(b[1], 0.0);
        assert!((b[0] - 0.5_f64.sqrt()).abs() < 1e-15);
        let b = legendre_batch(2, 1.0).unwrap();
        for (k, v) in b.iter().enumerate() {
            assert!((v - (k as f64 + 0.5).sqrt()).abs() < 1e-14);
        }
    }

    #[test]
    fn domain_error() {
        assert!(legendre_normalized(3, 1.0 + 1e-10).is_err());
        assert!(legendre_normalized(3, -1.5).is_err());
        // within the 1e-12 slack: clamped, no error
        assert!(legendre_normalized(3, 1.0 + 1e-13).is_ok());
    }

    #[test]
    fn values_at_zero() {
        let (p, dp) = legendre_at_zero(8);
        // P_2(0) = -1/2, P_4(0) = 3/8
        assert!((p[2] - (-0.5) * 2.5_f64.sqrt()).abs() < 1e-15);
        assert!((p[4] - 0.375 * 4.5_f64.sqrt()).abs() < 1e-15);
        // P'_1(0) = 1, P'_3(0) = -3/2, P'_5(0) = 15/8
        assert!((dp[1] - 1.5_f64.sqrt()).abs() < 1e-15);
        assert!((dp[3] - (-1.5) * 3.5_f64.sqrt()).abs() < 1e-15);
        assert!((dp[5] - 1.875 * 5.5_f64.sqrt()).abs() < 1e-14);
        // parity zeros
        assert_eq!(p[1], 0.0);
        assert_eq!(p[3], 0.0);
        assert_eq!(dp[0], 0.0);
        assert_eq!(dp[2], 0.0);
    }
}
