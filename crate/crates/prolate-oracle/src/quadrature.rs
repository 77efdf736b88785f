//! The oracle's own Gauss-Legendre construction: Golub-Welsch (eigenvalues
//! of the Jacobi matrix) for the double-precision rule, plus a double-double
//! Newton polish of each node so that quadrature-level perturbations stay
//! far below the small Nystrom eigenvalues being validated.
//!
//! Deliberately independent of the main library's Newton-from-asymptotics
//! construction.

use crate::dense::tql2_tridiagonal;
use prolate_dd::Dd;

/// `P_m(x)` and `P'_m(x)` in double-double.
fn legendre_pair_dd(m: usize, x: Dd) -> (Dd, Dd) {
    let one = prolate_dd::ONE;
    if m == 0 {
        return (one, prolate_dd::ZERO);
    }
    let mut pm = one;
    let mut p = x;
    for j in 1..m {
        let jf = j as f64;
        let next = ((2.0 * jf + 1.0) * x * p - jf * pm) / (jf + 1.0);
        pm = p;
        p = next;
    }
    let dp = (m as f64) * (x * p - pm) / (x * x - one);
    (p, dp)
}

/// Nodes and weights of the m-point rule in double-double.
pub fn gauss_legendre_dd(m: usize) -> (Vec<Dd>, Vec<Dd>) {
    // Jacobi matrix of the Legendre three-term recurrence:
    // off-diagonal b_j = j / sqrt(4 j^2 - 1)
    let d = vec![0.0; m];
    let e: Vec<f64> = (1..m)
        .map(|j| j as f64 / ((4 * j * j - 1) as f64).sqrt())
        .collect();
    let (mut nodes, _first_components) = tql2_tridiagonal(&d, &e, true);
    nodes.sort_by(f64::total_cmp);
    let mut xs = Vec::with_capacity(m);
    let mut ws = Vec::with_capacity(m);
    for &x0 in &nodes {
        // two double-double Newton steps from the double-precision root
        let mut x = Dd::from_f64(x0);
        let mut dp = prolate_dd::ONE;
        for _ in 0..3 {
            let (p, d) = legendre_pair_dd(m, x);
            dp = d;
            x = x - p / d;
        }
        let w = Dd::from_f64(2.0) / ((prolate_dd::ONE - x * x) * dp * dp);
        xs.push(x);
        ws.push(w);
    }
    (xs, ws)
}

/// Double-precision view of [`gauss_legendre_dd`].
pub fn gauss_legendre(m: usize) -> (Vec<f64>, Vec<f64>) {
    let (xs, ws) = gauss_legendre_dd(m);
    (
        xs.iter().map(|x| x.to_f64()).collect(),
        ws.iter().map(|w| w.to_f64()).collect(),
    )
}
