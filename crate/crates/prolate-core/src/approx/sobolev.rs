//! Per-(c, N, s) approximation reports and CSV emission.

use super::coeffs::ExpansionCoefficients;
use super::concentration::{concentration, Concentration};
use super::funcspec::FunctionSpec;
use super::metrics::{grid_error, l2_error_quadrature};
use crate::bounds::fit_line;
use crate::error::Result;
use crate::pswf::PswfBasis;

/// Measured errors of `S_N f` side by side with the two components of the
/// Sobolev error bound: a band part `(1+c^2)^{-s/2} ||f||_{H^s}` and a tail
/// part `sqrt(lambda_N) ||f||_2`. The bound's constant is not asserted; the
/// components are reported separately. Concentration fields are attached by
/// [`attach_concentration`] when wanted.
#[derive(Debug, Clone)]
pub struct ApproximationReport {
    pub c: f64,
    pub n_trunc: usize,
    pub s: Option<f64>,
    pub error_l2_grid: f64,
    pub error_l2_quadrature: f64,
    pub band_component: f64,
    pub tail_component: f64,
    pub concentration: Option<Concentration>,
    pub runtime_ms: u128,
}

/// Fill in the (eps_T, eps_Omega) concentration fields of a report; a
/// separate step because the band-tail panels cost more than the rest of
/// the report combined.
pub fn attach_concentration(f: &FunctionSpec, report: &mut ApproximationReport) -> Result<()> {
    report.concentration = Some(concentration(f, report.c)?);
    Ok(())
}

pub fn sobolev_report(
    f: &FunctionSpec,
    basis: &PswfBasis,
    coeffs: &ExpansionCoefficients,
    n_trunc: usize,
    quad_m: usize,
) -> Result<ApproximationReport> {
    let t0 = std::time::Instant::now();
    let error_l2_grid = grid_error(f, coeffs, basis, n_trunc)?;
    let error_l2_quadrature = l2_error_quadrature(f, coeffs, basis, n_trunc, quad_m)?;
    let s = f.sobolev_exponent();
    let c = basis.c();
    let band_component = match s {
        Some(sv) => {
            let hs = f.hs_norm_proxy(sv)?;
            (1.0 + c * c).powf(-sv / 2.0) * hs.sqrt()
        }
        None => f64::NAN,
    };
    let norm2 = match f.l2_norm_squared() {
        Ok(v) => v.sqrt(),
        Err(_) => f64::NAN,
    };
    let tail_component = basis.lambda(n_trunc.min(basis.n_max())).max(0.0).sqrt() * norm2;
    Ok(ApproximationReport {
        c,
        n_trunc,
        s,
        error_l2_grid,
        error_l2_quadrature,
        band_component,
        tail_component,
        concentration: None,
        runtime_ms: t0.elapsed().as_millis(),
    })
}

/// Log-log rate fit of errors against N; returns the fitted exponent.
pub fn rate_fit(ns: &[usize], errors: &[f64]) -> f64 {
    let xs: Vec<f64> = ns.iter().map(|&n| (n as f64).ln()).collect();
    let ys: Vec<f64> = errors.iter().map(|&e| e.ln()).collect();
    fit_line(&xs, &ys).0
}

/// Nine-significant-digit scientific formatting used by every emitted table.
pub fn fmt_g9(x: f64) -> String {
    if x.is_nan() {
        return "nan".to_string();
    }
    format!("{x:.8e}")
}

/// CSV emission: header `c,N,s,error_grid,error_quad,band_component,`
/// `tail_component`, one row per report, '\n' line ends.
pub fn write_sweep_csv(reports: &[ApproximationReport]) -> String {
    let mut out = String::from("c,N,s,error_grid,error_quad,band_component,tail_component\n");
    for r in reports {
        out.push_str(&format!(
            "{},{},{},{},{},{},{}\n",
            fmt_g9(r.c),
            r.n_trunc,
            r.s.map(fmt_g9).unwrap_or_else(|| "".into()),
            fmt_g9(r.error_l2_grid),
            fmt_g9(r.error_l2_quadrature),
            fmt_g9(r.band_component),
            fmt_g9(r.tail_component),
        ));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::approx::coeffs::coeff_closed_form;
    use crate::pswf::build_basis;

    #[test]
    fn report_fields_and_csv_shape() {
        let b = build_basis(10.0, 20).unwrap();
        let f = FunctionSpec::Weierstrass { s: 1.5 };
        let coeffs = coeff_closed_form(&f, &b, 21).unwrap();
        let mut rep = sobolev_report(&f, &b, &coeffs, 12, 512).unwrap();
        assert!(rep.error_l2_grid > 0.0);
        assert!(rep.concentration.is_none());
        super::attach_concentration(&f, &mut rep).unwrap();
        let conc = rep.concentration.unwrap();
        assert_eq!(conc.eps_t, 0.0);
        assert!(conc.eps_omega > 0.0 && conc.eps_omega < 1.0);
        assert!(rep.error_l2_quadrature > 0.0);
        assert!(rep.band_component.is_finite());
        assert!(rep.tail_component >= 0.0);
        assert_eq!(rep.s, Some(1.5));
        let csv = write_sweep_csv(&[rep]);
        let mut lines = csv.lines();
        assert_eq!(
            lines.next().unwrap(),
            "c,N,s,error_grid,error_quad,band_component,tail_component"
        );
        let row = lines.next().unwrap();
        assert!(row.starts_with("1.00000000e1,12,1.50000000e0,"));
    }

    #[test]
    fn rate_fit_recovers_power_law() {
        let ns: Vec<usize> = (10..60).step_by(5).collect();
        let errs: Vec<f64> = ns.iter().map(|&n| 3.0 * (n as f64).powf(-1.7)).collect();
        let slope = rate_fit(&ns, &errs);
        assert!((slope + 1.7).abs() < 1e-12);
    }

    #[test]
    fn nine_digit_formatting() {
        assert_eq!(fmt_g9(0.30878580193), "3.08785802e-1");
        assert_eq!(fmt_g9(1.356604e-8), "1.35660400e-8");
        assert_eq!(fmt_g9(f64::NAN), "nan");
    }
}
