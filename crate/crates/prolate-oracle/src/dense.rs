//! Dense symmetric eigen-solvers: Householder reduction plus implicit-shift
//! QL, in plain double (with eigenvectors) and in double-double (eigenvalues
//! only, for validating eigenvalues far below the double-precision floor).
//!
//! Classic EISPACK-style tred2/tql2 recast in Rust.

use prolate_dd::Dd;

/// Householder reduction of the symmetric matrix `a` to tridiagonal form,
/// accumulating the orthogonal transformation in place (tred2). Returns
/// `(diagonal, subdiagonal)`; on exit `a` holds Q with `Q^T A Q = T`.
pub fn tred2(a: &mut [Vec<f64>]) -> (Vec<f64>, Vec<f64>) {
    let n = a.len();
    let mut d = vec![0.0; n];
    let mut e = vec![0.0; n];
    for i in (1..n).rev() {
        let l = i - 1;
        let mut h = 0.0;
        if l > 0 {
            let scale: f64 = a[i][..=l].iter().map(|x| x.abs()).sum();
            if scale == 0.0 {
                e[i] = a[i][l];
            } else {
                for k in 0..=l {
                    a[i][k] /= scale;
                    h += a[i][k] * a[i][k];
                }
                let f = a[i][l];
                let g = if f >= 0.0 { -h.sqrt() } else { h.sqrt() };
                e[i] = scale * g;
                h -= f * g;
                a[i][l] = f - g;
                let ai: Vec<f64> = a[i][..=l].to_vec();
                let mut f_acc = 0.0;
                for j in 0..=l {
                    a[j][i] = ai[j] / h;
                    let mut g = 0.0;
                    for k in 0..=j {
                        g += a[j][k] * ai[k];
                    }
                    for k in j + 1..=l {
                        g += a[k][j] * ai[k];
                    }
                    e[j] = g / h;
                    f_acc += e[j] * ai[j];
                }
                let hh = f_acc / (h + h);
                for j in 0..=l {
                    let f = ai[j];
                    let g = e[j] - hh * f;
                    e[j] = g;
                    for k in 0..=j {
                        a[j][k] -= f * e[k] + g * ai[k];
                    }
                }
            }
        } else {
            e[i] = a[i][l];
        }
        d[i] = h;
    }
    d[0] = 0.0;
    e[0] = 0.0;
    for i in 0..n {
        let l = i;
        if d[i] != 0.0 {
            for j in 0..l {
                let mut g = 0.0;
                for k in 0..l {
                    g += a[i][k] * a[k][j];
                }
                for k in 0..l {
                    a[k][j] -= g * a[k][i];
                }
            }
        }
        d[i] = a[i][i];
        a[i][i] = 1.0;
        for j in 0..l {
            a[j][i] = 0.0;
            a[i][j] = 0.0;
        }
    }
    (d, e)
}

/// Implicit-shift QL on a symmetric tridiagonal `(d, e)`.
///
/// With `want_vectors`, returns the FIRST COMPONTENTS... no: returns the
/// full eigen decomposition driven through the supplied `z` update closure.
fn tql_core(
    d: &mut [f64],
    e: &mut [f64],
    mut rotate: impl FnMut(usize, f64, f64),
) -> Result<(), usize> {
    let n = d.len();
    let mut e = {
        let mut shifted = e.to_vec();
        shifted.push(0.0);
        shifted
    };
    for l in 0..n {
        let mut iter = 0;
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
            iter += 1;
            if iter > 80 {
                return Err(l);
            }
            let mut g = (d[l + 1] - d[l]) / (2.0 * e[l]);
            let mut r = g.hypot(1.0);
            g = d[m] - d[l] + e[l] / (g + r.copysign(g));
            let mut s = 1.0;
            let mut c = 1.0;
            let mut p = 0.0;
            let mut underflow = false;
            for i in (l..m).rev() {
                let f = s * e[i];
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
                rotate(i, s, c);
            }
            if underflow {
                continue;
            }
            d[l] -= p;
            e[l] = g;
            e[m] = 0.0;
        }
    }
    Ok(())
}

/// Eigen decomposition of a symmetric tridiagonal matrix. Returns ascending
/// eigenvalues and, when `want_first` is set, the first component of each
/// (unit) eigenvector - which is all Golub-Welsch needs.
pub fn tql2_tridiagonal(d0: &[f64], e0: &[f64], want_first: bool) -> (Vec<f64>, Vec<f64>) {
    let n = d0.len();
    let mut d = d0.to_vec();
    let mut e = e0.to_vec();
    // track only the first row of the rotation product
    let mut first = vec![0.0; n];
    first[0] = 1.0;
    let res = tql_core(&mut d, &mut e, |i, s, c| {
        if want_first {
            let f = first[i + 1];
            first[i + 1] = s * first[i] + c * f;
            first[i] = c * first[i] - s * f;
        }
    });
    res.expect("QL failed to converge");
    let mut idx: Vec<usize> = (0..n).collect();
    idx.sort_by(|&a, &b| d[a].total_cmp(&d[b]));
    (
        idx.iter().map(|&i| d[i]).collect(),
        idx.iter().map(|&i| first[i]).collect(),
    )
}

/// Full symmetric eigen decomposition in double precision. Returns
/// descending eigenvalues and matching eigenvectors (rows).
pub fn symmetric_eigen_desc(mut a: Vec<Vec<f64>>) -> (Vec<f64>, Vec<Vec<f64>>) {
    let n = a.len();
    let (mut d, mut e_full) = tred2(&mut a);
    // shift e: tred2 stores subdiagonal in e[1..]; tql_core wants e[i]
    // coupling d[i], d[i+1]
    let mut e: Vec<f64> = (1..n).map(|i| e_full[i]).collect();
    e_full.clear();
    let res = tql_core(&mut d, &mut e, |i, s, c| {
        for row in a.iter_mut() {
            let f = row[i + 1];
            row[i + 1] = s * row[i] + c * f;
            row[i] = c * row[i] - s * f;
        }
    });
    res.expect("QL failed to converge");
    let mut idx: Vec<usize> = (0..n).collect();
    idx.sort_by(|&x, &y| d[y].total_cmp(&d[x]));
    let values: Vec<f64> = idx.iter().map(|&i| d[i]).collect();
    let vectors: Vec<Vec<f64>> = idx
        .iter()
        .map(|&i| (0..n).map(|k| a[k][i]).collect())
        .collect();
    (values, vectors)
}

// ---- double-double eigenvalues ----

fn abs_dd(x: Dd) -> Dd {
    x.abs()
}

fn hypot_dd(a: Dd, b: Dd) -> Dd {
    (a * a + b * b).sqrt()
}

/// Householder reduction in double-double, eigenvalues path only (no
/// transformation accumulation).
fn tred_dd(a: &mut [Vec<Dd>]) -> (Vec<Dd>, Vec<Dd>) {
    let n = a.len();
    let zero = prolate_dd::ZERO;
    let mut d = vec![zero; n];
    let mut e = vec![zero; n];
    for i in (1..n).rev() {
        let l = i - 1;
        let mut h = zero;
        if l > 0 {
            let mut scale = zero;
            for k in 0..=l {
                scale = scale + abs_dd(a[i][k]);
            }
            if scale.hi == 0.0 {
                e[i] = a[i][l];
            } else {
                for k in 0..=l {
                    a[i][k] = a[i][k] / scale;
                    h = h + a[i][k] * a[i][k];
                }
                let f = a[i][l];
                let g = if f.hi >= 0.0 { -h.sqrt() } else { h.sqrt() };
                e[i] = scale * g;
                h = h - f * g;
                a[i][l] = f - g;
                let ai: Vec<Dd> = a[i][..=l].to_vec();
                let mut f_acc = zero;
                for j in 0..=l {
                    let mut g = zero;
                    for k in 0..=j {
                        g = g + a[j][k] * ai[k];
                    }
                    for k in j + 1..=l {
                        g = g + a[k][j] * ai[k];
                    }
                    e[j] = g / h;
                    f_acc = f_acc + e[j] * ai[j];
                }
                let hh = f_acc / (h + h);
                for j in 0..=l {
                    let f = ai[j];
                    let g = e[j] - hh * f;
                    e[j] = g;
                    for k in 0..=j {
                        a[j][k] = a[j][k] - (f * e[k] + g * ai[k]);
                    }
                }
            }
        } else {
            e[i] = a[i][l];
        }
        d[i] = h;
    }
    for i in 0..n {
        d[i] = a[i][i];
    }
    (d, e)
}

/// Ascending eigenvalues of a symmetric matrix in double-double.
pub fn symmetric_eigenvalues_dd(mut a: Vec<Vec<Dd>>) -> Vec<Dd> {
    let n = a.len();
    let (mut d, e_full) = tred_dd(&mut a);
    let mut e: Vec<Dd> = (1..n).map(|i| e_full[i]).collect();
    e.push(prolate_dd::ZERO);
    // QL with Wilkinson shift in double-double
    for l in 0..n {
        let mut iter = 0;
        loop {
            let mut m = l;
            while m + 1 < n {
                let dd_scale = abs_dd(d[m]).hi + abs_dd(d[m + 1]).hi;
                if abs_dd(e[m]).hi <= 1e-32 * dd_scale {
                    break;
                }
                m += 1;
            }
            if m == l {
                break;
            }
            iter += 1;
            assert!(iter <= 120, "dd QL failed to converge at index {l}");
            let mut g = (d[l + 1] - d[l]) / (e[l].mul_pow2(2.0));
            let mut r = hypot_dd(g, prolate_dd::ONE);
            let denom = if g.hi >= 0.0 { g + r } else { g - r };
            g = d[m] - d[l] + e[l] / denom;
            let mut s = prolate_dd::ONE;
            let mut c = prolate_dd::ONE;
            let mut p = prolate_dd::ZERO;
            let mut underflow = false;
            for i in (l..m).rev() {
                let f = s * e[i];
                let b = c * e[i];
                r = hypot_dd(f, g);
                e[i + 1] = r;
                if r.hi == 0.0 {
                    d[i + 1] = d[i + 1] - p;
                    e[m] = prolate_dd::ZERO;
                    underflow = true;
                    break;
                }
                s = f / r;
                c = g / r;
                g = d[i + 1] - p;
                r = (d[i] - g) * s + c * b.mul_pow2(2.0);
                p = s * r;
                d[i + 1] = g + p;
                g = c * r - b;
            }
            if underflow {
                continue;
            }
            d[l] = d[l] - p;
            e[l] = g;
            e[m] = prolate_dd::ZERO;
        }
    }
    d.sort_by(|a, b| a.hi.total_cmp(&b.hi).then(a.lo.total_cmp(&b.lo)));
    d
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample_matrix(n: usize) -> Vec<Vec<f64>> {
        // symmetric, diagonally structured, known-conditioning test matrix
        (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| 1.0 / (1.0 + (i as f64 - j as f64).abs()) + if i == j { i as f64 } else { 0.0 })
                    .collect()
            })
            .collect()
    }

    #[test]
    fn two_by_two_closed_form() {
        let a = vec![vec![2.0, 1.0], vec![1.0, 2.0]];
        let (vals, vecs) = symmetric_eigen_desc(a);
        assert!((vals[0] - 3.0).abs() < 1e-14);
        assert!((vals[1] - 1.0).abs() < 1e-14);
        let s = 0.5_f64.sqrt();
        assert!((vecs[0][0].abs() - s).abs() < 1e-14);
        assert!((vecs[0][0] - vecs[0][1]).abs() < 1e-13);
    }

    #[test]
    fn residuals_and_orthogonality() {
        let n = 24;
        let a = sample_matrix(n);
        let (vals, vecs) = symmetric_eigen_desc(a.clone());
        for i in 0..n {
            // residual
            let mut rmax = 0.0f64;
            for r in 0..n {
                let mut av = 0.0;
                for k in 0..n {
                    av += a[r][k] * vecs[i][k];
                }
                rmax = rmax.max((av - vals[i] * vecs[i][r]).abs());
            }
            assert!(rmax < 1e-12 * (1.0 + vals[i].abs()), "i={i} rmax={rmax:e}");
            for j in i..n {
                let dot: f64 = vecs[i].iter().zip(&vecs[j]).map(|(a, b)| a * b).sum();
                let expect = if i == j { 1.0 } else { 0.0 };
                assert!((dot - expect).abs() < 1e-12);
            }
        }
        // descending order
        for i in 1..n {
            assert!(vals[i] <= vals[i - 1] + 1e-13);
        }
    }

    #[test]
    fn dd_eigenvalues_match_f64_and_sum_to_trace() {
        let n = 18;
        let af = sample_matrix(n);
        let add: Vec<Vec<Dd>> = af
            .iter()
            .map(|row| row.iter().map(|&x| Dd::from_f64(x)).collect())
            .collect();
        let (vals_f, _) = symmetric_eigen_desc(af.clone());
        let vals_dd = symmetric_eigenvalues_dd(add);
        for i in 0..n {
            let a = vals_f[n - 1 - i];
            let b = vals_dd[i].to_f64();
            assert!((a - b).abs() < 1e-10 * (1.0 + a.abs()), "i={i}: {a} vs {b}");
        }
        let trace: f64 = (0..n).map(|i| af[i][i]).sum();
        let mut s = prolate_dd::ZERO;
        for v in &vals_dd {
            s = s + *v;
        }
        assert!((s.to_f64() - trace).abs() < 1e-20 * trace.abs());
    }
}
