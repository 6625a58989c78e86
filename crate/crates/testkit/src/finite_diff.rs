//! Central finite-difference derivatives for verification.

/// Gradient by central differences: `(f(x+h·e_i) − f(x−h·e_i)) / 2h`.
pub fn gradient_fd<F: Fn(&[f64]) -> f64>(f: F, x: &[f64], step: f64) -> Vec<f64> {
    let mut point = x.to_vec();
    let mut out = Vec::with_capacity(x.len());
    for i in 0..x.len() {
        point[i] = x[i] + step;
        let plus = f(&point);
        point[i] = x[i] - step;
        let minus = f(&point);
        point[i] = x[i];
        out.push((plus - minus) / (2.0 * step));
    }
    out
}

/// Jacobian of a vector field by central differences. Applied to an
/// analytic gradient this gives the Hessian with O(h²) truncation and
/// O(ε/h) roundoff — far tighter than the value-based stencil.
pub fn jacobian_fd<F: Fn(&[f64]) -> Vec<f64>>(f: F, x: &[f64], step: f64) -> Vec<Vec<f64>> {
    let n = x.len();
    let mut point = x.to_vec();
    let mut cols: Vec<Vec<f64>> = Vec::with_capacity(n);
    for j in 0..n {
        point[j] = x[j] + step;
        let plus = f(&point);
        point[j] = x[j] - step;
        let minus = f(&point);
        point[j] = x[j];
        cols.push(
            plus.iter()
                .zip(&minus)
                .map(|(p, m)| (p - m) / (2.0 * step))
                .collect(),
        );
    }
    // Transpose columns into rows.
    (0..n).map(|i| (0..n).map(|j| cols[j][i]).collect()).collect()
}

/// Full Hessian by second-order central differences on the four-point
/// stencil. Symmetric by construction.
pub fn hessian_fd<F: Fn(&[f64]) -> f64>(f: F, x: &[f64], step: f64) -> Vec<Vec<f64>> {
    let n = x.len();
    let mut point = x.to_vec();
    let mut h = vec![vec![0.0; n]; n];
    let center = f(x);
    for i in 0..n {
        // Diagonal: (f(x+h) − 2f(x) + f(x−h)) / h².
        point[i] = x[i] + step;
        let plus = f(&point);
        point[i] = x[i] - step;
        let minus = f(&point);
        point[i] = x[i];
        h[i][i] = (plus - 2.0 * center + minus) / (step * step);
        for j in 0..i {
            point[i] = x[i] + step;
            point[j] = x[j] + step;
            let pp = f(&point);
            point[j] = x[j] - step;
            let pm = f(&point);
            point[i] = x[i] - step;
            point[j] = x[j] + step;
            let mp = f(&point);
            point[j] = x[j] - step;
            let mm = f(&point);
            point[i] = x[i];
            point[j] = x[j];
            let value = (pp - pm - mp + mm) / (4.0 * step * step);
            h[i][j] = value;
            h[j][i] = value;
        }
    }
    h
}
