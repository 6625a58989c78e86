//! Cyclic Jacobi eigenvalue oracle for symmetric matrices.
//!
//! Sweeps rotate away the largest off-diagonal mass until it falls below
//! machine precision times the matrix scale. Quadratic convergence makes
//! ~10 sweeps plenty for the d ≤ 50 matrices the suites use. Eigenvalues
//! only; returned in descending order.

/// Eigenvalues of a symmetric matrix, descending.
///
/// Panics on non-square input. The upper triangle of `a` is trusted; the
/// routine symmetrizes internally.
pub fn jacobi_eigenvalues(a: &[Vec<f64>]) -> Vec<f64> {
    let n = a.len();
    assert!(n > 0, "empty matrix");
    for row in a {
        assert_eq!(row.len(), n, "matrix must be square");
    }
    // Work on a symmetrized copy.
    let mut m = vec![vec![0.0f64; n]; n];
    for i in 0..n {
        for j in 0..n {
            m[i][j] = 0.5 * (a[i][j] + a[j][i]);
        }
    }

    let scale: f64 = m
        .iter()
        .flat_map(|row| row.iter())
        .fold(0.0f64, |acc, v| acc.max(v.abs()))
        .max(1.0);
    let tol = f64::EPSILON * scale;

    for _sweep in 0..64 {
        let mut off = 0.0f64;
        for i in 0..n {
            for j in (i + 1)..n {
                off = off.max(m[i][j].abs());
            }
        }
        if off <= tol {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = m[p][q];
                if apq.abs() <= tol * 1e-3 {
                    continue;
                }
                // Classic two-sided rotation zeroing m[p][q].
                let theta = (m[q][q] - m[p][p]) / (2.0 * apq);
                let t = if theta >= 0.0 {
                    1.0 / (theta + (1.0 + theta * theta).sqrt())
                } else {
                    1.0 / (theta - (1.0 + theta * theta).sqrt())
                };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = t * c;

                let app = m[p][p];
                let aqq = m[q][q];
                m[p][p] = app - t * apq;
                m[q][q] = aqq + t * apq;
                m[p][q] = 0.0;
                m[q][p] = 0.0;
                for k in 0..n {
                    if k != p && k != q {
                        let akp = m[k][p];
                        let akq = m[k][q];
                        m[k][p] = c * akp - s * akq;
                        m[p][k] = m[k][p];
                        m[k][q] = s * akp + c * akq;
                        m[q][k] = m[k][q];
                    }
                }
            }
        }
    }

    let mut eigs: Vec<f64> = (0..n).map(|i| m[i][i]).collect();
    eigs.sort_by(|a, b| b.partial_cmp(a).expect("finite eigenvalues"));
    eigs
}
