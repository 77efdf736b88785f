//! The PSWF basis: evaluation of `psi_n` inside and outside [-1,1] and the
//! eigenvalues `mu_n`, `lambda_n` of the finite Fourier transform.
//!
//! Everything downstream hangs off two identities. With
//! `S_n(X) = 2 sum_j (-1)^j beta_j^n sqrt(k+1/2) j_k(cX)`, `k = 2j + p`
//! (`j_k` the spherical Bessel function, p the parity of n):
//!
//!   mu_n psi_n(X) = i^p S_n(X),          |mu_n| psi_n(X) = (-1)^((n-p)/2) S_n(X),
//!
//! so `S_n(1)/psi_n(1)` gives `|mu_n|` without ever dividing by a small
//! quantity, and `i^p S_n(X)` gives the finite-Fourier value stably even
//! when `mu_n` underflows. `S_n` suffers catastrophic cancellation once
//! `|mu_n| << 1`; sums are evaluated with compensated summation and
//! re-evaluated in double-double arithmetic when the cancellation ratio
//! passes 1e-13, which keeps `|mu_n|` reliable down to about 1e-24.

mod cache;

use crate::eigensystem::{pswf_spectrum, Parity, SpectrumSlice};
use crate::error::{Error, Result};
use crate::specfun::bessel::{spherical_j_batch, spherical_j_batch_dd};
use crate::specfun::legendre::{
    legendre_at_zero, legendre_batch_into, legendre_batch_into_dd,
};
use num_complex::Complex64;
use prolate_dd::{Accumulator, Dd};

/// Cancellation ratio below which the f64 sum is re-done in double-double.
const DD_ESCALATION: f64 = 1e-13;
/// Cancellation ratio below which even the double-double sum is unreliable.
const DD_CANCEL_FLOOR: f64 = 1e-26;
/// |mu| below this is flagged as lost to cancellation.
const MU_RELIABLE_FLOOR: f64 = 1e-24;
/// Largest `cX` for which the double-double Bessel path is attempted
/// (limited by double-double sin/cos argument reduction).
const DD_ARG_LIMIT: f64 = 1.1e12; // ~2^40

/// Immutable bundle of the computed spectrum for one bandwidth `c`.
#[derive(Debug, Clone)]
pub struct PswfBasis {
    c: f64,
    n_max: usize,
    even: SpectrumSlice,
    odd: SpectrumSlice,
    chi: Vec<f64>,
    lambda: Vec<f64>,
    mu_abs: Vec<f64>,
    psi_one: Vec<f64>,
    mu_reliable: Vec<bool>,
    mu_abs_dd: Vec<Dd>,
}

/// Build the basis: solve the spectrum, then `|mu_n|` via the Bessel series
/// at X = 1 and `lambda_n = c |mu_n|^2 / (2 pi)`.
pub fn build_basis(c: f64, n_max: usize) -> Result<PswfBasis> {
    let (even, odd) = pswf_spectrum(c, n_max)?;
    PswfBasis::assemble(c, n_max, even, odd)
}

impl PswfBasis {
    fn assemble(c: f64, n_max: usize, even: SpectrumSlice, odd: SpectrumSlice) -> Result<Self> {
        let c_dd = Dd::from_f64(c);
        let m_max = 2 * even.k_count.max(odd.k_count) + 2;
        // |mu_n| = |S_n(X)| / |psi_n(X)| holds at every X. The denominator
        // psi_n(1) is exponentially small for modes far below the plunge at
        // large c, so the ratio is taken at the candidate point where
        // |psi_n| is largest (always O(1) since psi is L2-normalized).
        let candidates: Vec<f64> = (1..=10).map(|i| i as f64 / 10.0).collect();
        let deg_max = m_max;
        let mut pbar_tables: Vec<Vec<Dd>> = Vec::with_capacity(candidates.len());
        for &x in &candidates {
            let mut t = vec![prolate_dd::ZERO; deg_max + 1];
            legendre_batch_into_dd(Dd::from_f64(x), &mut t);
            pbar_tables.push(t);
        }
        let mut bessel_tables: Vec<Option<Vec<Dd>>> = vec![None; candidates.len()];
        let j_at_c = spherical_j_batch_dd(m_max, c_dd);
        let mut chi = vec![0.0; n_max + 1];
        let mut lambda = vec![0.0; n_max + 1];
        let mut mu_abs = vec![0.0; n_max + 1];
        let mut psi_one = vec![0.0; n_max + 1];
        let mut mu_reliable = vec![false; n_max + 1];
        let mut mu_abs_dd = vec![prolate_dd::ZERO; n_max + 1];
        for n in 0..=n_max {
            let (slice, i, p) = if n % 2 == 0 {
                (&even, n / 2, 0usize)
            } else {
                (&odd, n / 2, 1usize)
            };
            chi[n] = slice.chi[i];
            let row = &slice.beta_dd[i];
            let psi_at = |table: &[Dd]| -> Dd {
                let mut acc = prolate_dd::ZERO;
                for (j, &b) in row.iter().enumerate() {
                    acc = acc + b * table[2 * j + p];
                }
                acc
            };
            psi_one[n] = {
                let mut p1 = prolate_dd::ZERO;
                for (j, &b) in row.iter().enumerate() {
                    let k = 2 * j + p;
                    p1 = p1 + b * Dd::from_f64(k as f64 + 0.5).sqrt();
                }
                p1.to_f64()
            };
            // best-conditioned candidate
            let mut best = candidates.len() - 1;
            let mut best_val = prolate_dd::ZERO;
            for (ci, table) in pbar_tables.iter().enumerate() {
                let v = psi_at(table);
                if v.abs() > best_val.abs() {
                    best_val = v;
                    best = ci;
                }
            }
            if bessel_tables[best].is_none() {
                bessel_tables[best] = Some(spherical_j_batch_dd(
                    m_max,
                    c_dd * Dd::from_f64(candidates[best]),
                ));
            }
            let j_table = if candidates[best] == 1.0 {
                &j_at_c
            } else {
                bessel_tables[best].as_ref().unwrap()
            };
            // S_n(X*) in dd, with the cancellation ratio tracked
            let mut s = prolate_dd::ZERO;
            let mut absum = 0.0f64;
            for (j, &b) in row.iter().enumerate() {
                let k = 2 * j + p;
                let term = b * Dd::from_f64(k as f64 + 0.5).sqrt() * j_table[k];
                absum += term.hi.abs();
                if j % 2 == 0 {
                    s = s + term;
                } else {
                    s = s - term;
                }
            }
            let s = s.mul_pow2(2.0);
            absum *= 2.0;
            let mu_signed = s / best_val;
            let mu = mu_signed.abs();
            mu_abs_dd[n] = mu;
            mu_abs[n] = mu.to_f64();
            lambda[n] = (Dd::from_f64(c) / prolate_dd::TWO_PI * mu * mu).to_f64();
            let cancel = if absum > 0.0 { s.hi.abs() / absum } else { 1.0 };
            mu_reliable[n] = mu_abs[n] >= MU_RELIABLE_FLOOR && cancel >= DD_CANCEL_FLOOR;
            // sign consistency: S_n(X) = (-1)^((n-p)/2) |mu_n| psi_n(X)
            if mu_reliable[n] {
                let expect = if ((n - p) / 2) % 2 == 0 { 1.0 } else { -1.0 };
                debug_assert!(mu_signed.hi * expect > 0.0, "sign inconsistency at n={n}");
            }
        }
        // Invariants: 1 > lambda_0 > lambda_1 > ... > 0 on the reliable
        // range, up to a 1e-12 rounding slack. For c beyond ~30 the leading
        // lambdas saturate at 1 closer than double-double can resolve, so
        // the strict form is not representable; the slack absorbs exactly
        // that.
        let mut prev: Option<f64> = None;
        for n in 0..=n_max {
            if !mu_reliable[n] {
                continue;
            }
            assert!(
                lambda[n] > 0.0 && lambda[n] < 1.0 + 1e-12,
                "lambda_{n} = {} outside (0,1)",
                lambda[n]
            );
            if let Some(pv) = prev {
                assert!(
                    lambda[n] < pv + 1e-12 * pv,
                    "lambda ordering broken at n={n}"
                );
            }
            prev = Some(lambda[n]);
        }
        Ok(PswfBasis {
            c,
            n_max,
            even,
            odd,
            chi,
            lambda,
            mu_abs,
            psi_one,
            mu_reliable,
            mu_abs_dd,
        })
    }

    pub fn c(&self) -> f64 {
        self.c
    }

    pub fn n_max(&self) -> usize {
        self.n_max
    }

    fn check_index(&self, n: usize) -> Result<()> {
        if n > self.n_max {
            return Err(Error::IndexOutOfRange {
                n,
                n_max: self.n_max,
            });
        }
        Ok(())
    }

    pub fn chi(&self, n: usize) -> f64 {
        self.chi[n]
    }

    pub fn lambda(&self, n: usize) -> f64 {
        self.lambda[n]
    }

    pub fn lambdas(&self) -> &[f64] {
        &self.lambda
    }

    pub fn mu_abs(&self, n: usize) -> f64 {
        self.mu_abs[n]
    }

    /// Phase of `mu_n`: exactly `i^n`.
    pub fn mu_phase(&self, n: usize) -> Complex64 {
        match n % 4 {
            0 => Complex64::new(1.0, 0.0),
            1 => Complex64::new(0.0, 1.0),
            2 => Complex64::new(-1.0, 0.0),
            _ => Complex64::new(0.0, -1.0),
        }
    }

    pub fn mu(&self, n: usize) -> Complex64 {
        self.mu_phase(n) * self.mu_abs[n]
    }

    /// `q = c^2 / chi_n`; most of the small-q inequalities require q < 1.
    pub fn q(&self, n: usize) -> f64 {
        self.c * self.c / self.chi[n]
    }

    pub fn mu_reliable(&self, n: usize) -> bool {
        self.mu_reliable[n]
    }

    pub fn psi_one(&self, n: usize) -> f64 {
        self.psi_one[n]
    }

    pub fn slice(&self, parity: Parity) -> &SpectrumSlice {
        match parity {
            Parity::Even => &self.even,
            Parity::Odd => &self.odd,
        }
    }

    /// Legendre coefficients of `psi_n` over degrees `k = 2j + (n mod 2)`.
    pub fn beta_row(&self, n: usize) -> &[f64] {
        if n % 2 == 0 {
            &self.even.beta[n / 2]
        } else {
            &self.odd.beta[n / 2]
        }
    }

    fn beta_row_dd(&self, n: usize) -> &[Dd] {
        if n % 2 == 0 {
            &self.even.beta_dd[n / 2]
        } else {
            &self.odd.beta_dd[n / 2]
        }
    }

    /// `psi_n(x)` for x in [-1,1] through the Legendre expansion.
    pub fn evaluate_inside(&self, n: usize, x: f64) -> Result<f64> {
        self.check_index(n)?;
        if x.abs() > 1.0 + 1e-12 {
            return Err(Error::OutsideInterval { x });
        }
        let x = x.clamp(-1.0, 1.0);
        let p = n % 2;
        let row = self.beta_row(n);
        let deg_max = 2 * (row.len() - 1) + p;
        let mut pb = vec![0.0; deg_max + 1];
        legendre_batch_into(x, &mut pb);
        let mut acc = Accumulator::new();
        for (j, &b) in row.iter().enumerate() {
            acc.add(b * pb[2 * j + p]);
        }
        Ok(acc.value())
    }

    /// `psi_n(x)` for rows n < n_count at many points; one Legendre pass per
    /// point shared across n. Returns `values[n][i] = psi_n(xs[i])`.
    pub fn evaluate_many(&self, n_count: usize, xs: &[f64]) -> Result<Vec<Vec<f64>>> {
        if n_count > self.n_max + 1 {
            return Err(Error::IndexOutOfRange {
                n: n_count,
                n_max: self.n_max,
            });
        }
        let deg_max = 2 * self.even.k_count.max(self.odd.k_count) + 2;
        let mut out = vec![vec![0.0; xs.len()]; n_count];
        let mut pb = vec![0.0; deg_max + 1];
        for (ix, &x) in xs.iter().enumerate() {
            if x.abs() > 1.0 + 1e-12 {
                return Err(Error::OutsideInterval { x });
            }
            legendre_batch_into(x.clamp(-1.0, 1.0), &mut pb);
            for (n, row_out) in out.iter_mut().enumerate() {
                let p = n % 2;
                let row = self.beta_row(n);
                let mut acc = Accumulator::new();
                for (j, &b) in row.iter().enumerate() {
                    acc.add(b * pb[2 * j + p]);
                }
                row_out[ix] = acc.value();
            }
        }
        Ok(out)
    }

    /// The series `S_n(X)` for X >= 0, f64 with compensated summation;
    /// returns `(value, sum of |terms|)`.
    fn series_f64(&self, n: usize, j_table: &[f64]) -> (f64, f64) {
        let p = n % 2;
        let row = self.beta_row(n);
        let mut acc = Accumulator::new();
        let mut absum = 0.0;
        for (j, &b) in row.iter().enumerate() {
            let k = 2 * j + p;
            let term = b * (k as f64 + 0.5).sqrt() * j_table[k];
            absum += term.abs();
            acc.add(if j % 2 == 0 { term } else { -term });
        }
        (2.0 * acc.value(), 2.0 * absum)
    }

    fn series_dd(&self, n: usize, j_table: &[Dd]) -> Dd {
        let p = n % 2;
        let row = self.beta_row_dd(n);
        let mut s = prolate_dd::ZERO;
        for (j, &b) in row.iter().enumerate() {
            let k = 2 * j + p;
            let term = b * Dd::from_f64(k as f64 + 0.5).sqrt() * j_table[k];
            if j % 2 == 0 {
                s = s + term;
            } else {
                s = s - term;
            }
        }
        s.mul_pow2(2.0)
    }

    fn series_deg_max(&self) -> usize {
        2 * self.even.k_count.max(self.odd.k_count) + 2
    }

    /// `S_n(X)` with automatic double-double escalation under cancellation.
    fn series_escalated(&self, n: usize, x_abs: f64, j_f64: &[f64], j_dd: &mut Option<Vec<Dd>>) -> f64 {
        let (v, absum) = self.series_f64(n, j_f64);
        if v.abs() >= DD_ESCALATION * absum || absum == 0.0 {
            return v;
        }
        let z = self.c * x_abs;
        if z > DD_ARG_LIMIT {
            // beyond double-double reduction range the absolute scale is
            // already ~1/z and the f64 value is the best available
            return v;
        }
        if j_dd.is_none() {
            *j_dd = Some(spherical_j_batch_dd(self.series_deg_max(), Dd::from_f64(z)));
        }
        self.series_dd(n, j_dd.as_ref().unwrap()).to_f64()
    }

    /// `mu_n psi_n(X)` (the value of the finite Fourier transform applied to
    /// `psi_n`, evaluated at X), stable for all n including the `|mu_n|`
    /// underflow regime. At X = 0 this is the analytic limit
    /// `i^n sqrt(2) beta_0^n` (zero for odd n).
    pub fn finite_fourier_value(&self, n: usize, x: f64) -> Result<Complex64> {
        self.check_index(n)?;
        Ok(self.ffv_batch(n + 1, x)?[n])
    }

    /// `mu_n psi_n(X)` for all n < n_count; the Bessel tables are shared.
    pub fn ffv_batch(&self, n_count: usize, x: f64) -> Result<Vec<Complex64>> {
        if n_count > self.n_max + 1 {
            return Err(Error::IndexOutOfRange {
                n: n_count,
                n_max: self.n_max,
            });
        }
        let x_abs = x.abs();
        let mut out = vec![Complex64::new(0.0, 0.0); n_count];
        if x_abs == 0.0 {
            // analytic limit: S_n(0) = sqrt(2) beta_0^n for even n, 0 for odd
            for (n, o) in out.iter_mut().enumerate() {
                if n % 2 == 0 {
                    *o = Complex64::new(2.0_f64.sqrt() * self.beta_row(n)[0], 0.0);
                }
            }
            return Ok(out);
        }
        let z = self.c * x_abs;
        let j_f64 = spherical_j_batch(self.series_deg_max(), z)?;
        let mut j_dd: Option<Vec<Dd>> = None;
        for (n, o) in out.iter_mut().enumerate() {
            let mut s = self.series_escalated(n, x_abs, &j_f64, &mut j_dd);
            if x < 0.0 && n % 2 == 1 {
                s = -s;
            }
            *o = if n % 2 == 0 {
                Complex64::new(s, 0.0)
            } else {
                Complex64::new(0.0, s)
            };
        }
        Ok(out)
    }

    /// Analytic extension of `psi_n` outside [-1,1] (agrees with
    /// `evaluate_inside` on the interval). Fails when `|mu_n|` was flagged
    /// as lost to cancellation and at x = 0.
    pub fn evaluate_outside(&self, n: usize, x: f64) -> Result<f64> {
        self.check_index(n)?;
        if x == 0.0 {
            return Err(Error::ZeroArgument);
        }
        if !self.mu_reliable[n] {
            return Err(Error::LossOfSignificance { n });
        }
        let z = self.c * x.abs();
        let j_f64 = spherical_j_batch(self.series_deg_max(), z)?;
        let mut j_dd: Option<Vec<Dd>> = None;
        let mut s = self.series_escalated(n, x.abs(), &j_f64, &mut j_dd);
        if x < 0.0 && n % 2 == 1 {
            s = -s;
        }
        let p = n % 2;
        let sign = if ((n - p) / 2) % 2 == 0 { 1.0 } else { -1.0 };
        Ok(sign * s / self.mu_abs[n])
    }

    /// `psi_n(0)` and `psi_n'(0)` from the Legendre expansion (closed-form
    /// values of `Pbar_k(0)`, `Pbar_k'(0)`).
    pub fn value_and_slope_at_zero(&self, n: usize) -> Result<(f64, f64)> {
        self.check_index(n)?;
        let p = n % 2;
        let row = self.beta_row(n);
        let deg_max = 2 * (row.len() - 1) + p;
        let (p0, dp0) = legendre_at_zero(deg_max);
        let mut acc = Accumulator::new();
        for (j, &b) in row.iter().enumerate() {
            let k = 2 * j + p;
            acc.add(b * if p == 0 { p0[k] } else { dp0[k] });
        }
        let v = acc.value();
        Ok(if p == 0 { (v, 0.0) } else { (0.0, v) })
    }

    /// Scaled derivatives `d_k = psi_n^{(k)}(0) / chi_n^{k/2}`, which stay
    /// bounded in the regime k(k+1) <= chi_n. Returns the warn flag when
    /// `k_max` exceeds that regime.
    pub fn derivatives_at_zero_scaled(&self, n: usize, k_max: usize) -> Result<(Vec<f64>, bool)> {
        self.check_index(n)?;
        let chi = self.chi[n];
        let q = self.q(n);
        let (v0, s0) = self.value_and_slope_at_zero(n)?;
        let mut d = vec![0.0; k_max + 1];
        d[0] = v0;
        if k_max >= 1 {
            d[1] = s0 / chi.sqrt();
        }
        for k in 0..k_max.saturating_sub(1) {
            let kf = k as f64;
            d[k + 2] = (kf * (kf + 1.0) / chi - 1.0) * d[k]
                + if k >= 2 {
                    kf * (kf - 1.0) * (q / chi) * d[k - 2]
                } else {
                    0.0
                };
        }
        let warn = (k_max as f64) * (k_max as f64 + 1.0) > chi;
        Ok((d, warn))
    }

    /// Raw derivatives `psi_n^{(k)}(0)` for k = 0..=k_max (may overflow to
    /// infinity outside the validity regime; the warn flag marks that).
    pub fn derivatives_at_zero(&self, n: usize, k_max: usize) -> Result<(Vec<f64>, bool)> {
        let (d, warn) = self.derivatives_at_zero_scaled(n, k_max)?;
        let chi = self.chi[n];
        let half_log = 0.5 * chi.ln();
        let raw = d
            .iter()
            .enumerate()
            .map(|(k, &dk)| dk * (k as f64 * half_log).exp())
            .collect();
        Ok((raw, warn))
    }

    /// Moment `integral of y^j psi_n(y) dy` via the derivative identity
    /// `(-i)^j c^{-j} mu_n psi_n^{(j)}(0)`; exact zero for mismatched parity.
    pub fn moment(&self, n: usize, j: usize) -> Result<f64> {
        self.check_index(n)?;
        if (n + j) % 2 == 1 {
            return Ok(0.0);
        }
        let (d, _) = self.derivatives_at_zero_scaled(n, j)?;
        let chi = self.chi[n];
        // (sqrt(chi)/c)^j = q^{-j/2}
        let scale = (j as f64 * (0.5 * chi.ln() - self.c.ln())).exp();
        let sign = if ((n as i64 - j as i64).rem_euclid(4)) == 0 {
            1.0
        } else {
            -1.0
        };
        Ok(sign * self.mu_abs[n] * d[j] * scale)
    }
}

pub use cache::{cache_file_name, load_basis, save_basis, CACHE_FORMAT_VERSION};
