//! Cross-check of the tridiagonal QL eigensolver against a dense cyclic
//! Jacobi eigensolver written independently for this test.

use prolate_core::eigensystem::{build_tridiagonal, eigh_tridiagonal, Parity};

/// Eigenvalues of a dense symmetric matrix by cyclic Jacobi rotations.
fn jacobi_eigenvalues(mut a: Vec<Vec<f64>>) -> Vec<f64> {
    let n = a.len();
    for _sweep in 0..100 {
        let mut off = 0.0;
        for i in 0..n {
            for j in i + 1..n {
                off += a[i][j] * a[i][j];
            }
        }
        if off.sqrt() < 1e-14 {
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                if a[p][q].abs() < 1e-300 {
                    continue;
                }
                let theta = (a[q][q] - a[p][p]) / (2.0 * a[p][q]);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for k in 0..n {
                    let akp = a[k][p];
                    let akq = a[k][q];
                    a[k][p] = c * akp - s * akq;
                    a[k][q] = s * akp + c * akq;
                }
                for k in 0..n {
                    let apk = a[p][k];
                    let aqk = a[q][k];
                    a[p][k] = c * apk - s * aqk;
                    a[q][k] = s * apk + c * aqk;
                }
            }
        }
    }
    let mut vals: Vec<f64> = (0..n).map(|i| a[i][i]).collect();
    vals.sort_by(f64::total_cmp);
    vals
}

#[test]
fn ql_matches_dense_jacobi_on_even_block() {
    let sys = build_tridiagonal(5.0, Parity::Even, 64).unwrap();
    let mut dense = vec![vec![0.0; 64]; 64];
    for i in 0..64 {
        dense[i][i] = sys.diagonal[i];
        if i + 1 < 64 {
            dense[i][i + 1] = sys.offdiagonal[i];
            dense[i + 1][i] = sys.offdiagonal[i];
        }
    }
    let jac = jacobi_eigenvalues(dense);
    let (ql, _) = eigh_tridiagonal(&sys).unwrap();
    // the smallest eigenvalue (and a few more) agree to table accuracy
    for i in 0..10 {
        assert!(
            (ql[i] - jac[i]).abs() < 1e-10 * (1.0 + ql[i].abs()),
            "i={i}: ql {} vs jacobi {}",
            ql[i],
            jac[i]
        );
    }
}

#[test]
fn jacobi_oracle_sanity() {
    // closed-form 2x2 check of the oracle itself
    let vals = jacobi_eigenvalues(vec![vec![2.0, 1.0], vec![1.0, 2.0]]);
    assert!((vals[0] - 1.0).abs() < 1e-13);
    assert!((vals[1] - 3.0).abs() < 1e-13);
}
