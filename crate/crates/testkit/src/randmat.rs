//! Seeded random matrices and vectors for property suites.

use rand::{Rng, SeedableRng};
pub use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Symmetric matrix with entries uniform in [−scale, scale].
pub fn random_symmetric(rng: &mut ChaCha8Rng, d: usize, scale: f64) -> Vec<Vec<f64>> {
    let mut m = vec![vec![0.0; d]; d];
    for i in 0..d {
        for j in 0..=i {
            let v = rng.gen_range(-scale..=scale);
            m[i][j] = v;
            m[j][i] = v;
        }
    }
    m
}

/// PSD matrix `BᵀB` with `B` standard normal entries.
pub fn random_psd(rng: &mut ChaCha8Rng, d: usize) -> Vec<Vec<f64>> {
    let b: Vec<Vec<f64>> = (0..d)
        .map(|_| (0..d).map(|_| standard_normal(rng)).collect())
        .collect();
    let mut m = vec![vec![0.0; d]; d];
    for i in 0..d {
        for j in 0..=i {
            let v: f64 = (0..d).map(|k| b[k][i] * b[k][j]).sum();
            m[i][j] = v;
            m[j][i] = v;
        }
    }
    m
}

/// Diagonal entries uniform in [0, scale].
pub fn random_diagonal(rng: &mut ChaCha8Rng, d: usize, scale: f64) -> Vec<f64> {
    (0..d).map(|_| rng.gen_range(0.0..=scale)).collect()
}

/// Vector with entries uniform in [−scale, scale].
pub fn random_vector(rng: &mut ChaCha8Rng, d: usize, scale: f64) -> Vec<f64> {
    (0..d).map(|_| rng.gen_range(-scale..=scale)).collect()
}

/// Box-Muller standard normal; keeps this crate independent of the
/// distributions the main library uses.
pub fn standard_normal(rng: &mut ChaCha8Rng) -> f64 {
    loop {
        let u: f64 = rng.gen_range(f64::MIN_POSITIVE..1.0);
        let v: f64 = rng.gen_range(0.0..std::f64::consts::TAU);
        let r = (-2.0 * u.ln()).sqrt();
        let z = r * v.cos();
        if z.is_finite() {
            return z;
        }
    }
}
