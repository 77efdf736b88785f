//! The parity-split Legendre-Galerkin eigenproblem for the prolate
//! Sturm-Liouville operator.
//!
//! In the orthonormal Legendre basis, the operator restricted to one parity
//! class is an infinite symmetric tridiagonal matrix; its leading K x K block
//! is solved by implicit QL with Wilkinson shift (or bisection plus inverse
//! iteration when only a few pairs are wanted from a large block). Retained
//! eigenpairs are then polished in double-double arithmetic: one Rayleigh
//! quotient plus inverse-iteration step reduces the eigenvector residual to
//! the double-double rounding level, which downstream eigenvalue formulas
//! need in cancellation-heavy regimes.

use crate::error::{Error, Result};
use crate::specfun::legendre::legendre_at_zero_dd;
#[cfg(test)]
use crate::specfun::legendre::legendre_at_zero;
use prolate_dd::Dd;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Parity {
    Even,
    Odd,
}

impl Parity {
    /// Legendre degree of block index j is `2j + offset`.
    #[inline]
    pub fn offset(self) -> usize {
        match self {
            Parity::Even => 0,
            Parity::Odd => 1,
        }
    }
}

/// Diagonal entry at Legendre degree k: `k(k+1) + c^2 (2k(k+1)-1)/((2k+3)(2k-1))`.
fn diagonal_entry(k: usize, c: f64) -> f64 {
    let kf = k as f64;
    kf * (kf + 1.0)
        + c * c * (2.0 * kf * (kf + 1.0) - 1.0) / ((2.0 * kf + 3.0) * (2.0 * kf - 1.0))
}

/// Off-diagonal entry coupling degrees k and k+2:
/// `c^2 (k+1)(k+2) / ((2k+3) sqrt((2k+5)(2k+1)))`.
fn offdiagonal_entry(k: usize, c: f64) -> f64 {
    let kf = k as f64;
    c * c * (kf + 1.0) * (kf + 2.0)
        / ((2.0 * kf + 3.0) * ((2.0 * kf + 5.0) * (2.0 * kf + 1.0)).sqrt())
}

fn diagonal_entry_dd(k: usize, c2: Dd) -> Dd {
    let kf = k as f64;
    let kk1 = kf * (kf + 1.0); // exact for k < 2^26
    Dd::from_f64(kk1)
        + c2 * Dd::from_f64(2.0 * kk1 - 1.0) / Dd::from_f64((2.0 * kf + 3.0) * (2.0 * kf - 1.0))
}

fn offdiagonal_entry_dd(k: usize, c2: Dd) -> Dd {
    let kf = k as f64;
    c2 * Dd::from_f64((kf + 1.0) * (kf + 2.0))
        / (Dd::from_f64(2.0 * kf + 3.0)
            * (Dd::from_f64(2.0 * kf + 5.0) * Dd::from_f64(2.0 * kf + 1.0)).sqrt())
}

/// Leading K x K block of the parity-restricted operator.
#[derive(Debug, Clone)]
pub struct TridiagonalSystem {
    pub parity: Parity,
    pub bandwidth_c: f64,
    /// length K; entry j corresponds to Legendre degree 2j + parity offset
    pub diagonal: Vec<f64>,
    /// length K-1; all entries strictly positive, so eigenvalues are simple
    pub offdiagonal: Vec<f64>,
}

pub fn build_tridiagonal(c: f64, parity: Parity, k_count: usize) -> Result<TridiagonalSystem> {
    if c <= 0.0 {
        return Err(Error::NonPositive { x: c });
    }
    assert!(k_count >= 4, "tridiagonal block needs K >= 4");
    let p = parity.offset();
    let diagonal = (0..k_count).map(|j| diagonal_entry(2 * j + p, c)).collect();
    let offdiagonal = (0..k_count - 1)
        .map(|j| offdiagonal_entry(2 * j + p, c))
        .collect();
    Ok(TridiagonalSystem {
        parity,
        bandwidth_c: c,
        diagonal,
        offdiagonal,
    })
}

impl TridiagonalSystem {
    pub fn k_count(&self) -> usize {
        self.diagonal.len()
    }

    /// Residual vector `T v - lambda v`.
    pub fn residual(&self, lambda: f64, v: &[f64]) -> Vec<f64> {
        let n = self.k_count();
        (0..n)
            .map(|i| {
                let mut r = (self.diagonal[i] - lambda) * v[i];
                if i > 0 {
                    r += self.offdiagonal[i - 1] * v[i - 1];
                }
                if i + 1 < n {
                    r += self.offdiagonal[i] * v[i + 1];
                }
                r
            })
            .collect()
    }
}

/// Implicit QL with Wilkinson shift; returns ascending eigenvalues and the
/// matching orthonormal eigenvectors (`vectors[i]` belongs to `values[i]`).
pub fn eigh_tridiagonal(sys: &TridiagonalSystem) -> Result<(Vec<f64>, Vec<Vec<f64>>)> {
    let n = sys.k_count();
    let mut d = sys.diagonal.clone();
    let mut e = sys.offdiagonal.clone();
    e.push(0.0);
    // z[k][i] = component k of eigenvector i
    let mut z = vec![vec![0.0; n]; n];
    for (k, row) in z.iter_mut().enumerate() {
        row[k] = 1.0;
    }
    let cap = 50 * n;
    let mut total_iter = 0usize;
    for l in 0..n {
        loop {
            let mut m = l;
            while m + 1 < n {
                let dd = d[m].abs() + d[m + 1].abs();
                if e[m].abs() <= f64::EPSILON * dd {
                    break;
                }
                m += 1;
            }
            if m == l {
                break;
            }
            total_iter += 1;
            if total_iter > cap {
                return Err(Error::EigenConvergence { index: l });
            }
            let mut g = (d[l + 1] - d[l]) / (2.0 * e[l]);
            let mut r = g.hypot(1.0);
            g = d[m] - d[l] + e[l] / (g + r.copysign(g));
            let mut s = 1.0;
            let mut c = 1.0;
            let mut p = 0.0;
            let mut underflow = false;
            for i in (l..m).rev() {
                let mut f = s * e[i];
                let b = c * e[i];
                r = f.hypot(g);
                e[i + 1] = r;
                if r == 0.0 {
                    d[i + 1] -= p;
                    e[m] = 0.0;
                    underflow = true;
                    break;
                }
                s = f / r;
                c = g / r;
                g = d[i + 1] - p;
                r = (d[i] - g) * s + 2.0 * c * b;
                p = s * r;
                d[i + 1] = g + p;
                g = c * r - b;
                for zk in z.iter_mut() {
                    f = zk[i + 1];
                    zk[i + 1] = s * zk[i] + c * f;
                    zk[i] = c * zk[i] - s * f;
                }
            }
            if underflow {
                continue;
            }
            d[l] -= p;
            e[l] = g;
            e[m] = 0.0;
        }
    }
    // sort ascending, carry vectors
    let mut idx: Vec<usize> = (0..n).collect();
    idx.sort_by(|&a, &b| d[a].total_cmp(&d[b]));
    let values: Vec<f64> = idx.iter().map(|&i| d[i]).collect();
    let vectors: Vec<Vec<f64>> = idx
        .iter()
        .map(|&i| (0..n).map(|k| z[k][i]).collect())
        .collect();
    Ok((values, vectors))
}

/// Number of eigenvalues of the block strictly below `x` (Sturm count).
fn sturm_count(d: &[f64], e: &[f64], x: f64) -> usize {
    let tiny = f64::MIN_POSITIVE;
    let mut count = 0usize;
    let mut q = d[0] - x;
    if q < 0.0 {
        count += 1;
    }
    for i in 1..d.len() {
        let denom = if q.abs() < tiny { tiny.copysign(q) } else { q };
        q = d[i] - x - e[i - 1] * e[i - 1] / denom;
        if q < 0.0 {
            count += 1;
        }
    }
    count
}

/// Bisection + double-double inverse iteration for the `count` smallest
/// eigenpairs; preferable to the full QL decomposition when only a few pairs
/// are needed from a large block.
pub fn eigh_tridiagonal_lowest(
    sys: &TridiagonalSystem,
    count: usize,
) -> Result<(Vec<f64>, Vec<Vec<f64>>)> {
    let n = sys.k_count();
    assert!(count <= n);
    let d = &sys.diagonal;
    let e = &sys.offdiagonal;
    // Gershgorin bounds
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    for i in 0..n {
        let mut radius = 0.0;
        if i > 0 {
            radius += e[i - 1].abs();
        }
        if i + 1 < n {
            radius += e[i].abs();
        }
        lo = lo.min(d[i] - radius);
        hi = hi.max(d[i] + radius);
    }
    let mut values = Vec::with_capacity(count);
    let mut vectors = Vec::with_capacity(count);
    for j in 0..count {
        let mut a = lo;
        let mut b = hi;
        for _ in 0..200 {
            let mid = 0.5 * (a + b);
            if sturm_count(d, e, mid) > j {
                b = mid;
            } else {
                a = mid;
            }
            if (b - a) <= 1e-14 * b.abs().max(1.0) {
                break;
            }
        }
        let lam = 0.5 * (a + b);
        let seed = vec![1.0; n];
        let (lam_dd, v) = refine_eigenpair_dd(sys, lam, &seed);
        values.push(lam_dd.to_f64());
        vectors.push(v.iter().map(|x| x.to_f64()).collect());
    }
    Ok((values, vectors))
}

/// Solve `(T - shift) w = rhs` in double-double with partial pivoting.
fn shifted_tridiagonal_solve_dd(
    diag: &[Dd],
    off: &[Dd],
    shift: Dd,
    rhs: &[Dd],
) -> Vec<Dd> {
    let n = diag.len();
    let mut sub = vec![prolate_dd::ZERO; n];
    let mut dia = vec![prolate_dd::ZERO; n];
    let mut sup = vec![prolate_dd::ZERO; n];
    let mut sup2 = vec![prolate_dd::ZERO; n];
    let mut r = rhs.to_vec();
    for i in 0..n {
        dia[i] = diag[i] - shift;
        if i > 0 {
            sub[i] = off[i - 1];
        }
        if i + 1 < n {
            sup[i] = off[i];
        }
    }
    let tiny = Dd::from_f64(1e-300);
    for i in 0..n - 1 {
        if sub[i + 1].abs() > dia[i].abs() {
            // swap rows i and i+1 of the banded matrix
            let (a, b) = (dia[i], sub[i + 1]);
            dia[i] = b;
            sub[i + 1] = a;
            let (a, b) = (sup[i], dia[i + 1]);
            sup[i] = b;
            dia[i + 1] = a;
            let (a, b) = (sup2[i], sup[i + 1]);
            sup2[i] = b;
            sup[i + 1] = a;
            r.swap(i, i + 1);
        }
        if dia[i].hi == 0.0 {
            dia[i] = tiny;
        }
        let m = sub[i + 1] / dia[i];
        dia[i + 1] = dia[i + 1] - m * sup[i];
        sup[i + 1] = sup[i + 1] - m * sup2[i];
        r[i + 1] = r[i + 1] - m * r[i];
    }
    let mut w = vec![prolate_dd::ZERO; n];
    for i in (0..n).rev() {
        let mut s = r[i];
        if i + 1 < n {
            s = s - sup[i] * w[i + 1];
        }
        if i + 2 < n {
            s = s - sup2[i] * w[i + 2];
        }
        if dia[i].hi == 0.0 {
            dia[i] = tiny;
        }
        w[i] = s / dia[i];
    }
    w
}

/// Polish an approximate eigenpair of the block in double-double arithmetic:
/// Rayleigh quotient, one inverse-iteration solve, renormalize, repeat once.
pub fn refine_eigenpair_dd(
    sys: &TridiagonalSystem,
    chi: f64,
    beta: &[f64],
) -> (Dd, Vec<Dd>) {
    let n = sys.k_count();
    let p = sys.parity.offset();
    let c2 = Dd::from_f64(sys.bandwidth_c) * Dd::from_f64(sys.bandwidth_c);
    let diag: Vec<Dd> = (0..n).map(|j| diagonal_entry_dd(2 * j + p, c2)).collect();
    let off: Vec<Dd> = (0..n - 1)
        .map(|j| offdiagonal_entry_dd(2 * j + p, c2))
        .collect();
    let matvec = |v: &[Dd]| -> Vec<Dd> {
        (0..n)
            .map(|i| {
                let mut r = diag[i] * v[i];
                if i > 0 {
                    r = r + off[i - 1] * v[i - 1];
                }
                if i + 1 < n {
                    r = r + off[i] * v[i + 1];
                }
                r
            })
            .collect()
    };
    let rayleigh = |v: &[Dd]| -> Dd {
        let tv = matvec(v);
        let mut num = prolate_dd::ZERO;
        let mut den = prolate_dd::ZERO;
        for i in 0..n {
            num = num + v[i] * tv[i];
            den = den + v[i] * v[i];
        }
        num / den
    };
    let mut x: Vec<Dd> = beta.iter().map(|&b| Dd::from_f64(b)).collect();
    let mut lam = Dd::from_f64(chi);
    for _ in 0..2 {
        let w = shifted_tridiagonal_solve_dd(&diag, &off, lam, &x);
        let mut norm = prolate_dd::ZERO;
        for wi in &w {
            norm = norm + *wi * *wi;
        }
        let inv = norm.sqrt().recip();
        x = w.iter().map(|&wi| wi * inv).collect();
        lam = rayleigh(&x);
    }
    (lam, x)
}

/// One parity class of the computed spectrum.
///
/// Row `i` of `beta` holds the Legendre coefficients of `psi_n`, n = 2i + p,
/// over degrees `k = 2j + p`; each row has unit Euclidean norm (this is the
/// L2([-1,1]) normalization) and carries the sign convention
/// `psi_n(0) > 0` (even) / `psi_n'(0) > 0` (odd).
#[derive(Debug, Clone)]
pub struct SpectrumSlice {
    pub parity: Parity,
    pub k_count: usize,
    pub chi: Vec<f64>,
    pub beta: Vec<Vec<f64>>,
    pub(crate) chi_dd: Vec<Dd>,
    pub(crate) beta_dd: Vec<Vec<Dd>>,
}

impl SpectrumSlice {
    pub fn n_count(&self) -> usize {
        self.chi.len()
    }

    /// Tail mass of row i: sum of the squared last ten coefficients.
    pub fn tail_mass(&self, i: usize) -> f64 {
        let row = &self.beta[i];
        let start = row.len().saturating_sub(10);
        row[start..].iter().map(|b| b * b).sum()
    }
}

pub(crate) const TAIL_MASS_TOL: f64 = 1e-24;
const K_CAP: usize = 16384;

fn solve_slice(c: f64, parity: Parity, n_count: usize, n_max: usize) -> Result<SpectrumSlice> {
    if n_count == 0 {
        return Ok(SpectrumSlice {
            parity,
            k_count: 0,
            chi: vec![],
            beta: vec![],
            chi_dd: vec![],
            beta_dd: vec![],
        });
    }
    let mut k = (n_count + c.ceil() as usize + 32).max(4);
    loop {
        let sys = build_tridiagonal(c, parity, k)?;
        let use_bisection = n_max <= 8 && k > 512;
        let (values, vectors) = if use_bisection {
            eigh_tridiagonal_lowest(&sys, n_count)?
        } else {
            let (v, w) = eigh_tridiagonal(&sys)?;
            (v[..n_count].to_vec(), w[..n_count].to_vec())
        };
        // double-double polish
        let mut chi_dd = Vec::with_capacity(n_count);
        let mut beta_dd = Vec::with_capacity(n_count);
        for i in 0..n_count {
            let (lam, v) = refine_eigenpair_dd(&sys, values[i], &vectors[i]);
            chi_dd.push(lam);
            beta_dd.push(v);
        }
        // truncation adequate? (last 10 coefficients of every retained row)
        let tail_ok = beta_dd.iter().all(|row| {
            let start = row.len().saturating_sub(10);
            let m: f64 = row[start..].iter().map(|b| b.hi * b.hi).sum();
            m <= TAIL_MASS_TOL
        });
        if !tail_ok {
            if 2 * k > K_CAP {
                return Err(Error::TruncationCap { k });
            }
            k *= 2;
            continue;
        }
        // Sign normalization. The convention is the one all the moment and
        // coefficient positivity statements require (and the one with
        // psi_n -> +Pbar_n as c -> 0): sign(psi_n(0)) = sign(Pbar_n(0)) for
        // even n and sign(psi_n'(0)) = sign(Pbar_n'(0)) for odd n, i.e. the
        // value/slope at zero carries the factor (-1)^floor(n/2).
        let p = parity.offset();
        let (p0, dp0) = legendre_at_zero_dd(2 * (k - 1) + p);
        for (i, row) in beta_dd.iter_mut().enumerate() {
            let mut s = prolate_dd::ZERO;
            for (j, b) in row.iter().enumerate() {
                let deg = 2 * j + p;
                let basis0 = match parity {
                    Parity::Even => p0[deg],
                    Parity::Odd => dp0[deg],
                };
                s = s + *b * basis0;
            }
            let want = if i % 2 == 0 { 1.0 } else { -1.0 };
            if s.hi * want < 0.0 {
                for b in row.iter_mut() {
                    *b = -*b;
                }
            }
        }
        let chi: Vec<f64> = chi_dd.iter().map(|x| x.to_f64()).collect();
        let beta: Vec<Vec<f64>> = beta_dd
            .iter()
            .map(|row| row.iter().map(|b| b.to_f64()).collect())
            .collect();
        return Ok(SpectrumSlice {
            parity,
            k_count: k,
            chi,
            beta,
            chi_dd,
            beta_dd,
        });
    }
}

/// Eigenvalues chi_n and Legendre coefficient rows for n = 0..=n_max, split
/// by parity. The truncation K is enlarged until the tail-mass test passes
/// for every retained row.
pub fn pswf_spectrum(c: f64, n_max: usize) -> Result<(SpectrumSlice, SpectrumSlice)> {
    if c <= 0.0 {
        return Err(Error::NonPositive { x: c });
    }
    let even_count = n_max / 2 + 1;
    let odd_count = n_max.div_ceil(2);
    let (even, odd) = rayon::join(
        || solve_slice(c, Parity::Even, even_count, n_max),
        || solve_slice(c, Parity::Odd, odd_count, n_max),
    );
    Ok((even?, odd?))
}
