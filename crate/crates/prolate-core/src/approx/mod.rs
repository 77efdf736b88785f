//! Spectral approximation of functions on [-1,1] in the PSWF basis:
//! expansion coefficients by three routes, truncated projections and error
//! metrics, concentration diagnostics, and the benchmark targets.

pub mod coeffs;
pub mod concentration;
pub mod example1;
pub mod funcspec;
pub mod metrics;
pub mod sobolev;

pub use coeffs::{
    coeff_closed_form, coeff_closed_form_exponential, coeff_fourier, coeff_quadrature,
    coeff_quadrature_fn, legendre_baseline, CoeffMethod, ExpansionCoefficients,
};
pub use concentration::{band_limited_combination, concentration, Concentration};
pub use example1::{example1_report, legendre_cos_tail, legendre_tail, pswf_exp_tail, Example1Report};
pub use funcspec::{gaussian_coefficients, weierstrass_truncation, FunctionSpec};
pub use metrics::{grid_error, l2_error_quadrature, parseval_defect, project, project_grid, standard_grid};
pub use sobolev::{
    attach_concentration, fmt_g9, rate_fit, sobolev_report, write_sweep_csv, ApproximationReport,
};
