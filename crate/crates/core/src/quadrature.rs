//! Gauss-Legendre quadrature nodes and weights.

use crate::scalar::{real, Real};

/// Nodes and weights on [0, 1]. Nodes come from Newton iteration on the
/// Legendre recurrence; exact for polynomials of degree ≤ 2n − 1.
pub fn gauss_legendre_unit<T: Real>(n: usize) -> Vec<(T, T)> {
    assert!(n >= 1, "need at least one quadrature node");
    let half = real::<T>(0.5);
    gauss_legendre::<T>(n)
        .into_iter()
        .map(|(x, w)| ((x + T::one()) * half, w * half))
        .collect()
}

/// Nodes and weights on [−1, 1].
pub fn gauss_legendre<T: Real>(n: usize) -> Vec<(T, T)> {
    let mut out = Vec::with_capacity(n);
    let nf = T::from_usize(n).unwrap();
    let pi = real::<T>(std::f64::consts::PI);
    let two = real::<T>(2.0);
    for i in 0..n {
        // Tricomi-style initial guess, then Newton.
        let k = T::from_usize(i).unwrap() + real::<T>(0.75);
        let mut x: T = (pi * k / (nf + half::<T>())).cos();
        let mut dp = T::zero();
        for _ in 0..100 {
            let (p, d) = legendre_with_derivative(n, x);
            dp = d;
            let step = p / d;
            x = x - step;
            if step.abs() <= T::epsilon() * (T::one() + x.abs()) {
                let (_, d) = legendre_with_derivative(n, x);
                dp = d;
                break;
            }
        }
        let w = two / ((T::one() - x * x) * dp * dp);
        out.push((x, w));
    }
    out.reverse();
    out
}

fn half<T: Real>() -> T {
    real::<T>(0.5)
}

/// Legendre polynomial `P_n(x)` and its derivative via the three-term
/// recurrence.
fn legendre_with_derivative<T: Real>(n: usize, x: T) -> (T, T) {
    let mut p_prev = T::one();
    let mut p = x;
    if n == 0 {
        return (T::one(), T::zero());
    }
    for k in 2..=n {
        let kf = T::from_usize(k).unwrap();
        let next = ((real::<T>(2.0) * kf - T::one()) * x * p - (kf - T::one()) * p_prev) / kf;
        p_prev = p;
        p = next;
    }
    let nf = T::from_usize(n).unwrap();
    let deriv = nf * (x * p - p_prev) / (x * x - T::one());
    (p, deriv)
}
