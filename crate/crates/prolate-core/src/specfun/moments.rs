//! Moments `a_{jk} = integral of x^j Pbar_k(x) over [-1,1]`.
//!
//! Zero unless k <= j with j, k of equal parity. Rows are built upward in j
//! from `x * Pbar_k = A_k Pbar_{k+1} + B_k Pbar_{k-1}`; the diagonal has the
//! closed form `a_kk = sqrt(pi) sqrt(k+1/2) k! / (2^k Gamma(k+3/2))`.

use crate::specfun::gamma::ln_gamma;

/// `a_{jk}`; exact zeros for parity mismatch or k > j.
pub fn legendre_moment(j: usize, k: usize) -> f64 {
    if k > j || (j + k) % 2 == 1 {
        return 0.0;
    }
    moment_row(j)[k]
}

/// The whole row `a_{j,0..=j}`.
pub fn moment_row(j: usize) -> Vec<f64> {
    let mut row = vec![0.0; j + 2];
    row[0] = 2.0_f64 / 2.0_f64.sqrt(); // integral of Pbar_0 = sqrt(2)
    for jj in 0..j {
        let mut next = vec![0.0; j + 2];
        for k in 0..=jj {
            let v = row[k];
            if v == 0.0 {
                continue;
            }
            let kf = k as f64;
            // x Pbar_k = A_k Pbar_{k+1} + B_k Pbar_{k-1}
            let a = (kf + 1.0) / ((2.0 * kf + 1.0) * (2.0 * kf + 3.0)).sqrt();
            next[k + 1] += a * v;
            if k > 0 {
                let b = kf / ((2.0 * kf + 1.0) * (2.0 * kf - 1.0)).sqrt();
                next[k - 1] += b * v;
            }
        }
        row = next;
    }
    row.truncate(j + 1);
    row
}

/// Closed form for the diagonal `a_kk`, via log-gamma to avoid overflow.
pub fn legendre_moment_diag(k: usize) -> f64 {
    let kf = k as f64;
    let ln = 0.5 * std::f64::consts::PI.ln() + 0.5 * (kf + 0.5).ln() + ln_gamma(kf + 1.0)
        - kf * 2.0_f64.ln()
        - ln_gamma(kf + 1.5);
    ln.exp()
}
