//! Executable checks of the eigenvalue, coefficient, moment, and derivative
//! inequalities, each producing a [`BoundReport`].
//!
//! Non-explicit constants in the decay statements are never asserted as
//! fixed numbers; exponential-decay claims are tested as fitted-slope
//! conditions. All inequality margins carry a 1e-12 * scale rounding slack,
//! and coefficient positivity a -1e-13 absolute slack, since eigenvector
//! entries near zero carry absolute rounding error.

use crate::error::{Error, Result};
use crate::pswf::PswfBasis;
use crate::specfun::bessel::bessel_j_half_batch;
use num_complex::Complex64;
use prolate_dd::Accumulator;

const MARGIN_SLACK: f64 = 1e-12;
const BETA_SLACK: f64 = 1e-13;

#[derive(Debug, Clone)]
pub struct Violation {
    pub n: usize,
    pub k: i64,
    pub lhs: f64,
    pub rhs: f64,
}

/// Result of one inequality sweep: the worst margin `rhs - lhs` seen and
/// every case that broke the (slack-adjusted) inequality `lhs <= rhs`.
#[derive(Debug, Clone)]
pub struct BoundReport {
    pub name: String,
    pub n_range: (usize, usize),
    pub k_range: Option<(i64, i64)>,
    pub worst_margin: f64,
    pub violations: Vec<Violation>,
    pub notes: Vec<String>,
}

impl BoundReport {
    fn new(name: &str) -> Self {
        BoundReport {
            name: name.to_string(),
            n_range: (usize::MAX, 0),
            k_range: None,
            worst_margin: f64::INFINITY,
            violations: vec![],
            notes: vec![],
        }
    }

    /// Record one tested case of `lhs <= rhs` (absolute slack overrides the
    /// relative one when positive).
    fn record(&mut self, n: usize, k: i64, lhs: f64, rhs: f64, abs_slack: f64) {
        self.n_range = (self.n_range.0.min(n), self.n_range.1.max(n));
        self.k_range = Some(match self.k_range {
            None => (k, k),
            Some((a, b)) => (a.min(k), b.max(k)),
        });
        let margin = rhs - lhs;
        if margin < self.worst_margin {
            self.worst_margin = margin;
        }
        let slack = if abs_slack > 0.0 {
            abs_slack
        } else {
            MARGIN_SLACK * rhs.abs().max(1.0)
        };
        if margin < -slack {
            self.violations.push(Violation { n, k, lhs, rhs });
        }
    }

    pub fn is_clean(&self) -> bool {
        self.violations.is_empty()
    }

    /// Line-oriented text form: a header with the fixture parameters, then
    /// one `name,n,k,lhs,rhs,margin` line per violation.
    pub fn to_lines(&self, fixture: &str) -> String {
        let mut out = format!(
            "# check={} fixture={} n_range={}..{} worst_margin={:.8e} violations={}\n",
            self.name,
            fixture,
            self.n_range.0,
            self.n_range.1,
            self.worst_margin,
            self.violations.len()
        );
        for note in &self.notes {
            out.push_str(&format!("# note: {note}\n"));
        }
        for v in &self.violations {
            out.push_str(&format!(
                "{},{},{},{:.9e},{:.9e},{:.9e}\n",
                self.name,
                v.n,
                v.k,
                v.lhs,
                v.rhs,
                v.rhs - v.lhs
            ));
        }
        out
    }
}

/// Least-squares slope and intercept of y against x.
pub fn fit_line(xs: &[f64], ys: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let mut sxx = 0.0;
    let mut sxy = 0.0;
    for (&x, &y) in xs.iter().zip(ys) {
        sxx += (x - mx) * (x - mx);
        sxy += (x - mx) * (y - my);
    }
    let slope = sxy / sxx;
    (slope, my - slope * mx)
}

/// chi bounds: `n(n+1) <= chi_n <= n(n+1) + c^2` for all n, and on the
/// subset with q <= 1 additionally
/// `n(n+1) + (3 - 2 sqrt 2) c^2 <= chi_n <= (pi (n+1)/2)^2`.
pub fn check_chi_bounds(basis: &PswfBasis) -> BoundReport {
    let mut rep = BoundReport::new("chi_bounds");
    let c2 = basis.c() * basis.c();
    for n in 0..=basis.n_max() {
        let chi = basis.chi(n);
        let nn1 = (n * (n + 1)) as f64;
        rep.record(n, 0, nn1, chi, 0.0);
        rep.record(n, 1, chi, nn1 + c2, 0.0);
        if basis.q(n) <= 1.0 {
            rep.record(n, 2, nn1 + (3.0 - 2.0 * 2.0_f64.sqrt()) * c2, chi, 0.0);
            let upper = (std::f64::consts::PI * (n as f64 + 1.0) / 2.0).powi(2);
            rep.record(n, 3, chi, upper, 0.0);
        }
    }
    rep
}

/// Coefficient structure in the regime `k(k-1) + 1.13 c^2 <= chi_n`:
/// nonnegativity (with a -1e-13 slack), the non-decreasing property within
/// the regime, and the two decay bounds
/// `|beta_0| <= |mu|/sqrt(2)`, `|beta_k| <= sqrt(5/(4 pi)) (2/sqrt q)^k |mu|`.
///
/// Modes with unreliable `|mu_n|` are skipped and reported.
pub fn check_beta_structure(basis: &PswfBasis) -> BoundReport {
    let mut rep = BoundReport::new("beta_structure");
    let c2 = basis.c() * basis.c();
    let mut skipped = vec![];
    for n in 0..=basis.n_max() {
        let chi = basis.chi(n);
        if c2 >= chi {
            continue;
        }
        if !basis.mu_reliable(n) {
            skipped.push(n);
            continue;
        }
        let q = basis.q(n);
        let mu = basis.mu_abs(n);
        let row = basis.beta_row(n);
        let p = n % 2;
        let mut prev_in_regime: Option<f64> = None;
        for (j, &b) in row.iter().enumerate() {
            let k = 2 * j + p;
            let kf = k as f64;
            if kf * (kf - 1.0) + 1.13 * c2 > chi {
                break;
            }
            // (a) nonnegativity
            rep.record(n, k as i64, -b, 0.0, BETA_SLACK);
            // monotone non-decreasing along the parity class in the regime
            if let Some(pb) = prev_in_regime {
                rep.record(n, k as i64, pb - b, 0.0, BETA_SLACK);
            }
            prev_in_regime = Some(b);
            // (b) decay bounds
            if k == 0 {
                rep.record(n, 0, b.abs(), mu / 2.0_f64.sqrt(), 0.0);
            } else {
                let ln_bound =
                    (5.0 / (4.0 * std::f64::consts::PI)).sqrt().ln() + kf * (2.0 / q.sqrt()).ln()
                        + mu.ln();
                let bound = if ln_bound > 700.0 {
                    f64::INFINITY
                } else {
                    ln_bound.exp()
                };
                rep.record(n, k as i64, b.abs(), bound, 0.0);
            }
        }
    }
    rep.notes
        .push("opposite-parity coefficients are structural zeros".into());
    if !skipped.is_empty() {
        rep.notes.push(format!(
            "skipped (|mu| lost to cancellation): n in {skipped:?}"
        ));
    }
    rep
}

/// lambda containment and strict decrease (to rounding slack), the trace
/// bound `sum lambda_n <= 2c/pi`, and the decay surrogate: the fitted slope
/// of `log lambda_n` against n over `n > 1.35 c` must be at most -0.1.
pub fn check_lambda_decay(basis: &PswfBasis) -> Result<BoundReport> {
    let mut rep = BoundReport::new("lambda_decay");
    let mut trace = Accumulator::new();
    let mut prev: Option<f64> = None;
    for n in 0..=basis.n_max() {
        let lam = basis.lambda(n);
        if basis.mu_reliable(n) {
            rep.record(n, 0, lam, 1.0, 0.0);
            rep.record(n, 1, 0.0, lam, 0.0);
            if let Some(pv) = prev {
                rep.record(n, 2, lam, pv, 0.0);
            }
            prev = Some(lam);
        }
        trace.add(lam.max(0.0));
    }
    let trace_bound = 2.0 * basis.c() / std::f64::consts::PI + 1e-8;
    rep.record(basis.n_max(), 3, trace.value(), trace_bound, 0.0);
    // decay fit over n > 1.35 c, reliable modes only
    let n_lo = (1.35 * basis.c()).floor() as usize + 1;
    let mut xs = vec![];
    let mut ys = vec![];
    for n in n_lo..=basis.n_max() {
        if basis.mu_reliable(n) && basis.lambda(n) > 0.0 {
            xs.push(n as f64);
            ys.push(basis.lambda(n).ln());
        }
    }
    if xs.len() < 5 {
        return Err(Error::Inconclusive {
            what: format!(
                "lambda decay fit needs n_max well past 1.35c (have {} points)",
                xs.len()
            ),
        });
    }
    let (slope, _) = fit_line(&xs, &ys);
    rep.record(basis.n_max(), 4, slope, -0.1, 0.0);
    rep.notes.push(format!(
        "log-lambda fitted slope {slope:.4} over n in [{n_lo}, {}] ({} reliable points)",
        basis.n_max(),
        xs.len()
    ));
    Ok(rep)
}

/// Moment bounds in the regime q < 1, j(j+1) <= chi_n:
/// `0 <= integral y^j psi_n <= q^{-j} |mu_n|`, checked in the scaled form
/// `0 <= sign * d_j` and `|d_j| q^{j/2} <= 1` to avoid overflow.
pub fn check_moment_bounds(basis: &PswfBasis) -> Result<BoundReport> {
    let mut rep = BoundReport::new("moment_bounds");
    let mut skipped = vec![];
    for n in 0..=basis.n_max() {
        let q = basis.q(n);
        if q >= 1.0 {
            continue;
        }
        if !basis.mu_reliable(n) {
            skipped.push(n);
            continue;
        }
        let chi = basis.chi(n);
        let j_top = ((-1.0 + (1.0 + 4.0 * chi).sqrt()) / 2.0).floor() as usize;
        let (d, _) = basis.derivatives_at_zero_scaled(n, j_top)?;
        for j in (n % 2..=j_top).step_by(2) {
            // moment sign = (-1)^((n-j)/2) * sign(d_j); must be nonnegative
            let sign = if (n as i64 - j as i64).rem_euclid(4) == 0 {
                1.0
            } else {
                -1.0
            };
            rep.record(n, j as i64, -sign * d[j], 0.0, BETA_SLACK);
            // scaled upper bound
            rep.record(n, j as i64, d[j].abs() * q.powf(j as f64 / 2.0), 1.0, 0.0);
        }
    }
    if !skipped.is_empty() {
        rep.notes.push(format!(
            "skipped (|mu| lost to cancellation): n in {skipped:?}"
        ));
    }
    Ok(rep)
}

/// Derivative bound in the regime c^2 < chi_n, k(k+1) <= chi_n:
/// `|psi_n^(k)(0)| <= chi_n^{k/2} (psi(0)^2 + chi^{-1} psi'(0)^2)^{1/2}`.
pub fn check_derivative_bounds(basis: &PswfBasis) -> Result<BoundReport> {
    let mut rep = BoundReport::new("derivative_bounds");
    let c2 = basis.c() * basis.c();
    for n in 0..=basis.n_max() {
        let chi = basis.chi(n);
        if c2 >= chi {
            continue;
        }
        let k_top = ((-1.0 + (1.0 + 4.0 * chi).sqrt()) / 2.0).floor() as usize;
        let (d, _) = basis.derivatives_at_zero_scaled(n, k_top)?;
        let (v0, s0) = basis.value_and_slope_at_zero(n)?;
        let bound = (v0 * v0 + s0 * s0 / chi).sqrt();
        for k in (n % 2..=k_top).step_by(2) {
            rep.record(n, k as i64, d[k].abs(), bound, 0.0);
        }
    }
    Ok(rep)
}

/// `|psi_n(1)| <= 2 chi_n^{1/4}`.
pub fn check_psi_at_one(basis: &PswfBasis) -> BoundReport {
    let mut rep = BoundReport::new("psi_at_one");
    for n in 0..=basis.n_max() {
        rep.record(n, 0, basis.psi_one(n).abs(), 2.0 * basis.chi(n).powf(0.25), 0.0);
    }
    rep
}

/// Witness for the explicit regime condition: with A = B = sqrt(2), every
/// (n, k) with n >= cA, k <= n/B satisfies `k(k-1) + 1.13 c^2 <= chi_n`.
pub fn check_remark_witness(basis: &PswfBasis) -> BoundReport {
    let mut rep = BoundReport::new("remark_witness");
    let a = 2.0_f64.sqrt();
    let c2 = basis.c() * basis.c();
    let n_lo = (basis.c() * a).ceil() as usize;
    for n in n_lo..=basis.n_max() {
        let k_hi = (n as f64 / a).floor() as usize;
        for k in (0..=k_hi).step_by(1) {
            let kf = k as f64;
            rep.record(n, k as i64, kf * (kf - 1.0) + 1.13 * c2, basis.chi(n), 0.0);
        }
    }
    if n_lo > basis.n_max() {
        rep.notes.push("no admissible n (n_max < c sqrt 2)".into());
    }
    rep
}

/// `<e^{i k pi x}, psi_n>` by the Legendre-Fourier identity: each basis term
/// contributes `i^m sqrt(2 pi/lambda) sqrt(m+1/2) J_{m+1/2}(lambda)` at
/// lambda = k pi. An independent complex-arithmetic route to the same
/// quantity as `finite_fourier_value(n, k pi / c)`.
pub fn fourier_pswf_coefficient(basis: &PswfBasis, n: usize, k: i64) -> Result<Complex64> {
    if k == 0 {
        return Err(Error::UnsupportedKind {
            what: "k = 0 is the j = 0 moment".into(),
        });
    }
    let lam = k.unsigned_abs() as f64 * std::f64::consts::PI;
    let p = n % 2;
    let row = basis.beta_row(n);
    let deg_max = 2 * (row.len() - 1) + p;
    let j_half = bessel_j_half_batch(deg_max, lam)?;
    let scale = (2.0 * std::f64::consts::PI / lam).sqrt();
    let mut re = Accumulator::new();
    let mut im = Accumulator::new();
    for (j, &b) in row.iter().enumerate() {
        let m = 2 * j + p;
        let term = b * scale * (m as f64 + 0.5).sqrt() * j_half[m];
        match m % 4 {
            0 => re.add(term),
            1 => im.add(term),
            2 => re.add(-term),
            _ => im.add(-term),
        }
    }
    let mut v = Complex64::new(re.value(), im.value());
    if k < 0 {
        // e^{-i lam x}: conjugate phases; for real psi this is the parity flip
        if n % 2 == 1 {
            v = -v;
        }
    }
    Ok(v)
}

/// Report of the Fourier-coefficient decay: for every n in the admissible
/// range and |k| <= n/M, record `max_k |<e^{i k pi x}, psi_n>|`; the fitted
/// envelope slope in n must be negative.
pub fn check_fourier_decay(basis: &PswfBasis, m_ratio: f64) -> Result<BoundReport> {
    assert!(m_ratio >= 2.0_f64.sqrt());
    let mut rep = BoundReport::new("fourier_decay");
    let n_lo = (basis.c() * m_ratio).max(3.0).ceil() as usize;
    let mut xs = vec![];
    let mut ys = vec![];
    for n in n_lo..=basis.n_max() {
        let k_hi = (n as f64 / m_ratio).floor() as i64;
        if k_hi < 1 {
            continue;
        }
        let mut worst = 0.0f64;
        for k in 1..=k_hi {
            // |<e^{ik pi x}, psi_n>| = |<e^{-ik pi x}, psi_n>| by parity
            let v = basis.finite_fourier_value(n, k as f64 * std::f64::consts::PI / basis.c())?;
            worst = worst.max(v.norm());
        }
        if worst > 0.0 {
            xs.push(n as f64);
            ys.push(worst.ln());
        }
    }
    if xs.len() < 5 {
        return Err(Error::Inconclusive {
            what: format!("fourier decay fit has only {} admissible n", xs.len()),
        });
    }
    let (slope, _) = fit_line(&xs, &ys);
    rep.record(basis.n_max(), 0, slope, 0.0, 0.0);
    rep.notes.push(format!(
        "envelope slope {slope:.4} over n in [{n_lo}, {}]",
        basis.n_max()
    ));
    Ok(rep)
}

/// Run the whole suite on one basis. An inconclusive decay fit (too few
/// reliable eigenvalues past 1.35c, which happens at large c where the
/// decay-regime lambdas underflow the cancellation floor) is reported as a
/// note rather than an error.
pub fn run_all_checks(basis: &PswfBasis) -> Result<Vec<BoundReport>> {
    let mut reports = vec![
        check_chi_bounds(basis),
        check_beta_structure(basis),
        check_psi_at_one(basis),
        check_remark_witness(basis),
    ];
    match check_lambda_decay(basis) {
        Ok(rep) => reports.push(rep),
        Err(Error::Inconclusive { what }) => {
            let mut rep = BoundReport::new("lambda_decay");
            rep.notes.push(format!("inconclusive: {what}"));
            reports.push(rep);
        }
        Err(e) => return Err(e),
    }
    reports.push(check_moment_bounds(basis)?);
    reports.push(check_derivative_bounds(basis)?);
    Ok(reports)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pswf::build_basis;
    use crate::specfun::quadrature::QuadratureRule;
    use std::sync::OnceLock;

    fn basis_c10() -> &'static PswfBasis {
        static B: OnceLock<PswfBasis> = OnceLock::new();
        B.get_or_init(|| build_basis(10.0, 40).unwrap())
    }

    #[test]
    fn chi_bounds_clean_and_tight_at_small_c() {
        let b = build_basis(1e-6, 8).unwrap();
        let rep = check_chi_bounds(&b);
        assert!(rep.is_clean());
        // lower bound of the classical inequality is an equality in the limit
        for n in 1..=8 {
            let margin = b.chi(n) - (n * (n + 1)) as f64;
            assert!(margin.abs() < 1e-10, "n={n} margin={margin:e}");
        }
        let rep = check_chi_bounds(basis_c10());
        assert!(rep.is_clean(), "{:?}", rep.violations);
    }

    #[test]
    fn chi_upper_bound_q_le_1_strict() {
        let b = basis_c10();
        for n in 0..=b.n_max() {
            if b.q(n) <= 1.0 {
                let upper = (std::f64::consts::PI * (n as f64 + 1.0) / 2.0).powi(2);
                assert!(upper - b.chi(n) > 0.0, "n={n}");
            }
        }
    }

    #[test]
    fn beta_structure_clean() {
        let rep = check_beta_structure(basis_c10());
        assert!(rep.is_clean(), "{:?}", rep.violations);
        // spot values: |beta_0| <= |mu_20|/sqrt(2) at c=5
        let b5 = build_basis(5.0, 22).unwrap();
        let b0 = b5.beta_row(20)[0].abs();
        assert!(b0 <= b5.mu_abs(20) / 2.0_f64.sqrt() * (1.0 + 1e-12));
        // monotone growth within the admissible range at n=30, c=10
        let b = basis_c10();
        let row = b.beta_row(30);
        let chi = b.chi(30);
        let mut prev = row[0];
        for (j, &v) in row.iter().enumerate().skip(1) {
            let k = 2 * j;
            if (k * (k - 1)) as f64 + 1.13 * 100.0 > chi {
                break;
            }
            assert!(v >= prev - 1e-13, "k={k}");
            prev = v;
        }
    }

    #[test]
    fn lambda_decay_clean_with_negative_slope() {
        let rep = check_lambda_decay(basis_c10()).unwrap();
        assert!(rep.is_clean(), "{:?}", rep.violations);
        // inconclusive when n_max barely clears 1.35c
        let small = build_basis(10.0, 15).unwrap();
        assert!(matches!(
            check_lambda_decay(&small),
            Err(Error::Inconclusive { .. })
        ));
    }

    #[test]
    fn trace_bounded_by_kernel_trace() {
        let b = basis_c10();
        let total: f64 = (0..=b.n_max()).map(|n| b.lambda(n)).sum();
        assert!(total <= 2.0 * 10.0 / std::f64::consts::PI + 1e-8);
    }

    #[test]
    fn moment_and_derivative_checks_clean() {
        let rep = check_moment_bounds(basis_c10()).unwrap();
        assert!(rep.is_clean(), "{:?}", rep.violations);
        let rep = check_derivative_bounds(basis_c10()).unwrap();
        assert!(rep.is_clean(), "{:?}", rep.violations);
        let rep = check_psi_at_one(basis_c10());
        assert!(rep.is_clean(), "{:?}", rep.violations);
        let rep = check_remark_witness(basis_c10());
        assert!(rep.is_clean(), "{:?}", rep.violations);
    }

    #[test]
    fn fourier_coefficient_two_routes_agree() {
        let b = basis_c10();
        for n in [0usize, 1, 5, 12, 20] {
            for k in [1i64, 2, 5, -3] {
                let v1 = fourier_pswf_coefficient(b, n, k).unwrap();
                let v2 = b
                    .finite_fourier_value(n, k as f64 * std::f64::consts::PI / b.c())
                    .unwrap();
                assert!(
                    (v1 - v2).norm() <= 1e-10,
                    "n={n} k={k}: {v1} vs {v2}"
                );
            }
        }
    }

    #[test]
    fn fourier_coefficient_against_quadrature() {
        let b = basis_c10();
        let rule = QuadratureRule::gauss_legendre(2000).unwrap();
        for (n, k) in [(4usize, 2i64), (9, 1), (15, 4)] {
            let vals = b.evaluate_many(n + 1, rule.nodes()).unwrap();
            let mut re = Accumulator::new();
            let mut im = Accumulator::new();
            for (i, (&x, &w)) in rule.nodes().iter().zip(rule.weights()).enumerate() {
                let ph = k as f64 * std::f64::consts::PI * x;
                re.add(w * ph.cos() * vals[n][i]);
                im.add(w * ph.sin() * vals[n][i]);
            }
            let q = Complex64::new(re.value(), im.value());
            let v = fourier_pswf_coefficient(b, n, k).unwrap();
            assert!((v - q).norm() <= 1e-10, "n={n} k={k}: {v} vs quad {q}");
        }
    }

    #[test]
    fn fourier_coefficient_parity_structure() {
        let b = basis_c10();
        // odd n: purely imaginary; even n: purely real
        let v = fourier_pswf_coefficient(b, 7, 2).unwrap();
        assert_eq!(v.re, 0.0);
        let v = fourier_pswf_coefficient(b, 8, 2).unwrap();
        assert_eq!(v.im, 0.0);
        // k = 0 rejected
        assert!(fourier_pswf_coefficient(b, 3, 0).is_err());
    }

    #[test]
    fn fourier_decay_envelope_negative_slope() {
        let b = build_basis(1.0, 40).unwrap();
        let rep = check_fourier_decay(&b, 2.0_f64.sqrt()).unwrap();
        assert!(rep.is_clean(), "{:?}", rep.violations);
        // instance ceiling from the pilot: the n=40, k=1 coefficient at c=1
        // is far below 1e-10
        let v = b
            .finite_fourier_value(40, std::f64::consts::PI)
            .unwrap()
            .norm();
        assert!(v < 1e-10, "{v:e}");
        // and a mid-range spot stays under a loose instance ceiling
        let v = b
            .finite_fourier_value(20, 2.0 * std::f64::consts::PI)
            .unwrap()
            .norm();
        assert!(v < 1e-6, "{v:e}");
    }

    #[test]
    fn report_serialization_shape() {
        let rep = check_chi_bounds(basis_c10());
        let text = rep.to_lines("c=10,n_max=40");
        assert!(text.starts_with("# check=chi_bounds"));
        assert!(text.contains("violations=0"));
        // force a violation and confirm the line format
        let mut rep = BoundReport::new("demo");
        rep.record(3, -1, 2.0, 1.0, 0.0);
        assert!(!rep.is_clean());
        let text = rep.to_lines("x");
        assert!(text.contains("demo,3,-1,2.000000000e0,1.000000000e0,-1.000000000e0"));
    }
}
