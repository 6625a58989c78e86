//! Dense symmetric eigensolver.
//!
//! Two-stage: Householder reduction to tridiagonal form followed by the
//! implicitly shifted QL iteration, transformations accumulated into the
//! eigenvector matrix. This is the classic EISPACK tred2/tql2 pair (the
//! same route Jama and Eigen's self-adjoint solver took); it is accurate
//! to a small multiple of machine epsilon times the operator norm, which
//! is what the reconstruction contracts downstream assume.

use crate::matrix::DenseMatrix;
use crate::scalar::Real;

/// Maximum QL iterations per eigenvalue before giving up on further
/// refinement. 30 is the traditional EISPACK bound; convergence is cubic,
/// so hitting it means the matrix was degenerate far beyond what the
/// construction-time validation admits.
const MAX_QL_ITERATIONS: usize = 48;

/// Eigenvalues (descending) and orthonormal eigenvectors (columns) of a
/// symmetric matrix. Only the lower triangle is read.
pub(crate) fn symmetric_eigen<T: Real>(a: &DenseMatrix<T>) -> (Vec<T>, DenseMatrix<T>) {
    let n = a.rows();
    assert_eq!(n, a.cols(), "symmetric_eigen needs a square matrix");
    assert!(n > 0, "symmetric_eigen needs a nonempty matrix");

    // Symmetrize into the work matrix; inputs are validated to be
    // symmetric within tolerance, averaging removes the residual skew.
    let mut v = DenseMatrix::zeros(n, n);
    let half = T::from_f64(0.5).unwrap();
    for i in 0..n {
        for j in 0..n {
            v[(i, j)] = (a[(i, j)] + a[(j, i)]) * half;
        }
    }

    let mut d = vec![T::zero(); n];
    let mut e = vec![T::zero(); n];
    tridiagonalize(&mut v, &mut d, &mut e);
    ql_implicit(&mut v, &mut d, &mut e);
    sort_descending(&mut d, &mut v);
    (d, v)
}

/// Householder reduction of `v` to tridiagonal form (tred2).
/// On exit `d` holds the diagonal, `e[1..]` the subdiagonal, and `v` the
/// accumulated orthogonal transformation.
fn tridiagonalize<T: Real>(v: &mut DenseMatrix<T>, d: &mut [T], e: &mut [T]) {
    let n = d.len();
    for j in 0..n {
        d[j] = v[(n - 1, j)];
    }

    for i in (1..n).rev() {
        let mut scale = T::zero();
        let mut h = T::zero();
        for item in d.iter().take(i) {
            scale = scale + item.abs();
        }
        if scale == T::zero() {
            e[i] = d[i - 1];
            for j in 0..i {
                d[j] = v[(i - 1, j)];
                v[(i, j)] = T::zero();
                v[(j, i)] = T::zero();
            }
        } else {
            // Generate the Householder vector.
            for item in d.iter_mut().take(i) {
                *item = *item / scale;
                h = h + *item * *item;
            }
            let mut f = d[i - 1];
            let mut g = h.sqrt();
            if f > T::zero() {
                g = -g;
            }
            e[i] = scale * g;
            h = h - f * g;
            d[i - 1] = f - g;
            for item in e.iter_mut().take(i) {
                *item = T::zero();
            }

            // Apply the similarity transformation to the leading block.
            for j in 0..i {
                f = d[j];
                v[(j, i)] = f;
                g = e[j] + v[(j, j)] * f;
                for k in (j + 1)..i {
                    g = g + v[(k, j)] * d[k];
                    e[k] = e[k] + v[(k, j)] * f;
                }
                e[j] = g;
            }
            f = T::zero();
            for j in 0..i {
                e[j] = e[j] / h;
                f = f + e[j] * d[j];
            }
            let hh = f / (h + h);
            for j in 0..i {
                e[j] = e[j] - hh * d[j];
            }
            for j in 0..i {
                f = d[j];
                g = e[j];
                for k in j..i {
                    v[(k, j)] = v[(k, j)] - (f * e[k] + g * d[k]);
                }
                d[j] = v[(i - 1, j)];
                v[(i, j)] = T::zero();
            }
        }
        d[i] = h;
    }

    // Accumulate the transformations.
    for i in 0..n.saturating_sub(1) {
        v[(n - 1, i)] = v[(i, i)];
        v[(i, i)] = T::one();
        let h = d[i + 1];
        if h != T::zero() {
            for k in 0..=i {
                d[k] = v[(k, i + 1)] / h;
            }
            for j in 0..=i {
                let mut g = T::zero();
                for k in 0..=i {
                    g = g + v[(k, i + 1)] * v[(k, j)];
                }
                for k in 0..=i {
                    v[(k, j)] = v[(k, j)] - g * d[k];
                }
            }
        }
        for k in 0..=i {
            v[(k, i + 1)] = T::zero();
        }
    }
    for j in 0..n {
        d[j] = v[(n - 1, j)];
        v[(n - 1, j)] = T::zero();
    }
    v[(n - 1, n - 1)] = T::one();
    e[0] = T::zero();
}

/// Implicitly shifted QL iteration on the tridiagonal form (tql2),
/// eigenvectors accumulated into `v`.
fn ql_implicit<T: Real>(v: &mut DenseMatrix<T>, d: &mut [T], e: &mut [T]) {
    let n = d.len();
    for i in 1..n {
        e[i - 1] = e[i];
    }
    e[n - 1] = T::zero();

    let two = T::from_f64(2.0).unwrap();
    let eps = T::epsilon();
    let mut f = T::zero();
    let mut tst1 = T::zero();

    for l in 0..n {
        tst1 = tst1.max(d[l].abs() + e[l].abs());
        let mut m = l;
        while m < n {
            if e[m].abs() <= eps * tst1 {
                break;
            }
            m += 1;
        }

        if m > l {
            for _ in 0..MAX_QL_ITERATIONS {
                // Implicit shift from the leading 2x2.
                let mut g = d[l];
                let mut p = (d[l + 1] - g) / (two * e[l]);
                let mut r = p.hypot(T::one());
                if p < T::zero() {
                    r = -r;
                }
                d[l] = e[l] / (p + r);
                d[l + 1] = e[l] * (p + r);
                let dl1 = d[l + 1];
                let mut h = g - d[l];
                for item in d.iter_mut().take(n).skip(l + 2) {
                    *item = *item - h;
                }
                f = f + h;

                // One QL sweep.
                p = d[m];
                let mut c = T::one();
                let mut c2 = c;
                let mut c3 = c;
                let el1 = e[l + 1];
                let mut s = T::zero();
                let mut s2 = T::zero();
                for i in (l..m).rev() {
                    c3 = c2;
                    c2 = c;
                    s2 = s;
                    g = c * e[i];
                    h = c * p;
                    r = p.hypot(e[i]);
                    e[i + 1] = s * r;
                    s = e[i] / r;
                    c = p / r;
                    p = c * d[i] - s * g;
                    d[i + 1] = h + s * (c * g + s * d[i]);

                    for k in 0..n {
                        h = v[(k, i + 1)];
                        v[(k, i + 1)] = s * v[(k, i)] + c * h;
                        v[(k, i)] = c * v[(k, i)] - s * h;
                    }
                }
                p = -s * s2 * c3 * el1 * e[l] / dl1;
                e[l] = s * p;
                d[l] = c * p;

                if e[l].abs() <= eps * tst1 {
                    break;
                }
            }
        }
        d[l] = d[l] + f;
        e[l] = T::zero();
    }
}

/// Sort eigenvalues descending, permuting eigenvector columns to match.
fn sort_descending<T: Real>(d: &mut [T], v: &mut DenseMatrix<T>) {
    let n = d.len();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| d[b].partial_cmp(&d[a]).expect("finite eigenvalues"));

    let old_d = d.to_vec();
    let old_v = v.clone();
    for (new_col, &old_col) in order.iter().enumerate() {
        d[new_col] = old_d[old_col];
        for k in 0..n {
            v[(k, new_col)] = old_v[(k, old_col)];
        }
    }
}
