//! Gaussian measures on the truncation: exact samplers, moment
//! functionals, and the shrinking-projection covariance family behind the
//! metrization-failure experiments.
//!
//! Sampling goes through the spectral square root of the covariance, so
//! rank-deficient covariances (including the point mass, covariance 0)
//! need no special casing. Each sample index draws from its own
//! counter-derived substream, which makes batches bit-reproducible under
//! any degree of parallelism; two measures sampled with the same seed see
//! the same underlying standard normals (common random numbers), which
//! the paired estimators below exploit.

use std::io::Write;

use rand::Rng;
use rand_distr::{Distribution, StandardNormal};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::DenseMatrix;
use crate::operator::{norm_sq, OperatorRepr, SymOperator};
use crate::rng::substream;
use crate::scalar::{real, KahanSum, Real};

/// Gaussian measure: mean vector plus PSD covariance operator. The
/// degenerate case covariance = 0 is the point mass at the mean.
#[derive(Clone, Debug)]
pub struct GaussianMeasure<T> {
    mean: Vec<T>,
    covariance: SymOperator<T>,
}

impl<T: Real> GaussianMeasure<T> {
    pub fn new(mean: Vec<T>, covariance: SymOperator<T>) -> Result<Self> {
        if mean.len() != covariance.dim() {
            return Err(Error::DimensionMismatch {
                expected: covariance.dim(),
                got: mean.len(),
            });
        }
        for (position, v) in mean.iter().enumerate() {
            if !v.is_finite() {
                return Err(Error::NonFinite { position });
            }
        }
        let eigenvalues = covariance.eigenvalues();
        let sup = eigenvalues
            .iter()
            .map(|l| l.abs())
            .fold(T::zero(), T::max);
        let min = eigenvalues
            .iter()
            .copied()
            .fold(T::infinity(), T::min);
        if min < -T::PSD_CLAMP * sup {
            return Err(Error::NotPositiveSemidefinite {
                min_eigenvalue: min.to_f64().unwrap_or(f64::NAN),
            });
        }
        Ok(Self { mean, covariance })
    }

    /// Centered measure with the given covariance.
    pub fn centered(covariance: SymOperator<T>) -> Result<Self> {
        let dim = covariance.dim();
        Self::new(vec![T::zero(); dim], covariance)
    }

    /// Point mass at the origin (covariance 0).
    pub fn point_mass(dim: usize) -> Self {
        Self::centered(SymOperator::zero(dim)).expect("zero covariance is PSD")
    }

    /// Standard Gaussian (identity covariance).
    pub fn standard(dim: usize) -> Self {
        Self::centered(SymOperator::identity(dim)).expect("identity covariance is PSD")
    }

    pub fn dim(&self) -> usize {
        self.mean.len()
    }

    pub fn mean(&self) -> &[T] {
        &self.mean
    }

    pub fn covariance(&self) -> &SymOperator<T> {
        &self.covariance
    }

    pub fn is_centered(&self) -> bool {
        norm_sq(&self.mean).sqrt() <= T::ENTRYWISE_TOL
    }

    pub(crate) fn require_centered(&self) -> Result<()> {
        if self.is_centered() {
            Ok(())
        } else {
            Err(Error::NotCentered {
                mean_norm: norm_sq(&self.mean).sqrt().to_f64().unwrap_or(f64::NAN),
            })
        }
    }

    /// `E‖X‖² = Tr S + ‖mean‖²`.
    pub fn second_moment(&self) -> T {
        self.covariance.trace() + norm_sq(&self.mean)
    }

    /// Exact value of `E[exp(−‖X‖²)]` for a centered measure:
    /// `Π (1 + 2λ_i)^{−1/2}` over the covariance eigenvalues.
    pub fn exp_neg_sqnorm(&self) -> Result<T> {
        self.require_centered()?;
        let two = real::<T>(2.0);
        let half = real::<T>(0.5);
        let log_sum = crate::scalar::ksum(
            self.covariance
                .eigenvalues()
                .iter()
                .map(|l| (two * *l).ln_1p()),
        );
        Ok((-half * log_sum).exp())
    }

    /// Draw a materialized batch. Row `i` is `mean + √S·z_i` with `z_i`
    /// standard normal from substream `(seed, i)`.
    pub fn sample(&self, count: usize, seed: u64) -> Result<SampleBatch<T>>
    where
        StandardNormal: Distribution<T>,
    {
        if count == 0 {
            return Err(Error::CountTooSmall { min: 1, got: 0 });
        }
        let d = self.dim();
        let map = SqrtMap::new(&self.covariance)?;
        let mut values = vec![T::zero(); count * d];
        values
            .par_chunks_mut(d)
            .enumerate()
            .for_each(|(i, row)| {
                let mut rng = substream(seed, i as u64);
                let mut z = vec![T::zero(); d];
                for slot in z.iter_mut() {
                    *slot = rng.sample(StandardNormal);
                }
                map.apply(&z, row);
                for (slot, m) in row.iter_mut().zip(&self.mean) {
                    *slot = *slot + *m;
                }
            });
        Ok(SampleBatch {
            count,
            dim: d,
            values,
            seed,
            measure_id: self.tag(),
        })
    }

    /// Opaque content tag, stable across runs.
    fn tag(&self) -> u64 {
        let encoded = serde_json::to_string(self).expect("measure serializes");
        fnv1a64(encoded.as_bytes())
    }
}

/// Covariance family of the metrization counterexample: the first `n`
/// diagonal entries are `1/n`, the remaining `d − n` are zero.
pub fn counterexample_measure<T: Real>(n: usize, d: usize) -> Result<GaussianMeasure<T>> {
    if n == 0 {
        return Err(Error::CountTooSmall { min: 1, got: 0 });
    }
    if d < n {
        return Err(Error::EmbeddingTooSmall { n, d });
    }
    let weight = T::one() / T::from_usize(n).unwrap();
    let mut entries = vec![T::zero(); d];
    for slot in entries.iter_mut().take(n) {
        *slot = weight;
    }
    GaussianMeasure::centered(SymOperator::diagonal(entries)?)
}

fn fnv1a64(bytes: &[u8]) -> u64 {
    let mut hash = 0xcbf2_9ce4_8422_2325u64;
    for &b in bytes {
        hash ^= b as u64;
        hash = hash.wrapping_mul(0x0000_0100_0000_01b3);
    }
    hash
}

/// Precomputed action of `√S`, specialized per representation so the
/// sampler never densifies diagonal covariances.
enum SqrtMap<T> {
    Diagonal(Vec<T>),
    RankOne { scale: T, coeff: T, vector: Vec<T> },
    Dense(DenseMatrix<T>),
}

impl<T: Real> SqrtMap<T> {
    fn new(covariance: &SymOperator<T>) -> Result<Self> {
        let root = covariance.sqrt()?;
        Ok(match root.repr() {
            OperatorRepr::Diagonal(d) => SqrtMap::Diagonal(d.clone()),
            OperatorRepr::ScalarPlusRankOne {
                scale,
                coeff,
                vector,
            } => SqrtMap::RankOne {
                scale: *scale,
                coeff: *coeff,
                vector: vector.clone(),
            },
            OperatorRepr::Dense(_) => SqrtMap::Dense(root.to_dense_matrix()),
        })
    }

    fn apply(&self, z: &[T], out: &mut [T]) {
        match self {
            SqrtMap::Diagonal(d) => {
                for ((slot, a), b) in out.iter_mut().zip(d).zip(z) {
                    *slot = *a * *b;
                }
            }
            SqrtMap::RankOne {
                scale,
                coeff,
                vector,
            } => {
                let uz = KahanSum::new();
                let mut uz = uz;
                for (u, zi) in vector.iter().zip(z) {
                    uz.add(*u * *zi);
                }
                let uz = uz.value();
                for ((slot, u), zi) in out.iter_mut().zip(vector).zip(z) {
                    *slot = *scale * *zi + *coeff * uz * *u;
                }
            }
            SqrtMap::Dense(m) => {
                let result = m.matvec(z);
                out.copy_from_slice(&result);
            }
        }
    }
}

/// Reproducible sample batch, row-major `count × dim`.
#[derive(Clone, Debug)]
pub struct SampleBatch<T> {
    count: usize,
    dim: usize,
    values: Vec<T>,
    seed: u64,
    measure_id: u64,
}

impl<T: Real> SampleBatch<T> {
    pub fn count(&self) -> usize {
        self.count
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn measure_id(&self) -> u64 {
        self.measure_id
    }

    pub fn row(&self, i: usize) -> &[T] {
        &self.values[i * self.dim..(i + 1) * self.dim]
    }

    pub fn rows(&self) -> impl Iterator<Item = &[T]> {
        self.values.chunks(self.dim)
    }

    /// CSV export: header `x0..x{d-1}`, one row per sample, round-trip
    /// decimal formatting.
    pub fn write_csv<W: Write>(&self, out: &mut W) -> Result<()> {
        let header: Vec<String> = (0..self.dim).map(|j| format!("x{j}")).collect();
        writeln!(out, "{}", header.join(","))?;
        for row in self.rows() {
            let cells: Vec<String> = row
                .iter()
                .map(|v| format!("{}", v.to_f64().unwrap()))
                .collect();
            writeln!(out, "{}", cells.join(","))?;
        }
        Ok(())
    }
}

/// Mean/standard-error pair from a Monte Carlo pass.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct McEstimate<T> {
    pub mean: T,
    pub stderr: T,
    pub count: usize,
}

/// Fixed Monte Carlo chunk size. Parallelism splits work along chunk
/// boundaries and recombines in chunk order, so estimates are independent
/// of the thread count.
const MC_CHUNK: usize = 4096;

fn finalize_partials<T: Real>(partials: &[(T, T, usize)]) -> McEstimate<T> {
    let mut sum = KahanSum::new();
    let mut sumsq = KahanSum::new();
    let mut n = 0usize;
    for (s, s2, c) in partials {
        sum.add(*s);
        sumsq.add(*s2);
        n += c;
    }
    let count = T::from_usize(n).unwrap();
    let mean = sum.value() / count;
    let var = if n > 1 {
        ((sumsq.value() - count * mean * mean) / (count - T::one())).max(T::zero())
    } else {
        T::zero()
    };
    McEstimate {
        mean,
        stderr: (var / count).sqrt(),
        count: n,
    }
}

/// Streaming Monte Carlo estimate of `E[f(X)]` without materializing the
/// batch.
pub fn mc_expectation<T, F>(
    measure: &GaussianMeasure<T>,
    samples: usize,
    seed: u64,
    f: F,
) -> Result<McEstimate<T>>
where
    T: Real,
    F: Fn(&[T]) -> T + Sync,
    StandardNormal: Distribution<T>,
{
    if samples == 0 {
        return Err(Error::CountTooSmall { min: 1, got: 0 });
    }
    let d = measure.dim();
    let map = SqrtMap::new(measure.covariance())?;
    let chunks = samples.div_ceil(MC_CHUNK);
    let partials: Vec<(T, T, usize)> = (0..chunks)
        .into_par_iter()
        .map(|ci| {
            let start = ci * MC_CHUNK;
            let end = samples.min(start + MC_CHUNK);
            let mut z = vec![T::zero(); d];
            let mut x = vec![T::zero(); d];
            let mut sum = KahanSum::new();
            let mut sumsq = KahanSum::new();
            for i in start..end {
                let mut rng = substream(seed, i as u64);
                for slot in z.iter_mut() {
                    *slot = rng.sample(StandardNormal);
                }
                map.apply(&z, &mut x);
                for (slot, m) in x.iter_mut().zip(measure.mean()) {
                    *slot = *slot + *m;
                }
                let v = f(&x);
                sum.add(v);
                sumsq.add(v * v);
            }
            (sum.value(), sumsq.value(), end - start)
        })
        .collect();
    Ok(finalize_partials(&partials))
}

/// Streaming Monte Carlo estimate of `E[h(X₁, X₂)]` over a pair of
/// measures. With `seed1 == seed2` the two coordinates share their
/// standard normals (common random numbers: the estimator of a paired
/// difference); distinct seeds give independent copies.
pub fn mc_pair<T, F>(
    g1: &GaussianMeasure<T>,
    g2: &GaussianMeasure<T>,
    samples: usize,
    seed1: u64,
    seed2: u64,
    h: F,
) -> Result<McEstimate<T>>
where
    T: Real,
    F: Fn(&[T], &[T]) -> T + Sync,
    StandardNormal: Distribution<T>,
{
    if samples == 0 {
        return Err(Error::CountTooSmall { min: 1, got: 0 });
    }
    if g1.dim() != g2.dim() {
        return Err(Error::DimensionMismatch {
            expected: g1.dim(),
            got: g2.dim(),
        });
    }
    let d = g1.dim();
    let map1 = SqrtMap::new(g1.covariance())?;
    let map2 = SqrtMap::new(g2.covariance())?;
    let shared_normals = seed1 == seed2;
    let chunks = samples.div_ceil(MC_CHUNK);
    let partials: Vec<(T, T, usize)> = (0..chunks)
        .into_par_iter()
        .map(|ci| {
            let start = ci * MC_CHUNK;
            let end = samples.min(start + MC_CHUNK);
            let mut z1 = vec![T::zero(); d];
            let mut z2 = vec![T::zero(); d];
            let mut x1 = vec![T::zero(); d];
            let mut x2 = vec![T::zero(); d];
            let mut sum = KahanSum::new();
            let mut sumsq = KahanSum::new();
            for i in start..end {
                let mut rng1 = substream(seed1, i as u64);
                for slot in z1.iter_mut() {
                    *slot = rng1.sample(StandardNormal);
                }
                if shared_normals {
                    z2.copy_from_slice(&z1);
                } else {
                    let mut rng2 = substream(seed2, i as u64);
                    for slot in z2.iter_mut() {
                        *slot = rng2.sample(StandardNormal);
                    }
                }
                map1.apply(&z1, &mut x1);
                map2.apply(&z2, &mut x2);
                for (slot, m) in x1.iter_mut().zip(g1.mean()) {
                    *slot = *slot + *m;
                }
                for (slot, m) in x2.iter_mut().zip(g2.mean()) {
                    *slot = *slot + *m;
                }
                let v = h(&x1, &x2);
                sum.add(v);
                sumsq.add(v * v);
            }
            (sum.value(), sumsq.value(), end - start)
        })
        .collect();
    Ok(finalize_partials(&partials))
}

// JSON wire format: {"mean": […], "covariance": <operator JSON>}.

#[derive(Serialize, Deserialize)]
struct MeasureDto {
    mean: Vec<f64>,
    covariance: serde_json::Value,
}

impl<T: Real> Serialize for GaussianMeasure<T> {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::Error as SerError;
        let dto = MeasureDto {
            mean: self.mean.iter().map(|v| v.to_f64().unwrap()).collect(),
            covariance: serde_json::to_value(&self.covariance).map_err(S::Error::custom)?,
        };
        dto.serialize(serializer)
    }
}

impl<'de, T: Real> Deserialize<'de> for GaussianMeasure<T> {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as DeError;
        let dto = MeasureDto::deserialize(deserializer)?;
        let covariance: SymOperator<T> =
            serde_json::from_value(dto.covariance).map_err(D::Error::custom)?;
        let mean = dto.mean.iter().map(|v| real(*v)).collect();
        GaussianMeasure::new(mean, covariance).map_err(D::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn point_mass_samples_are_all_mean() {
        let mut g = GaussianMeasure::<f64>::point_mass(3);
        g = GaussianMeasure::new(vec![1.0, -2.0, 0.5], g.covariance().clone()).unwrap();
        let batch = g.sample(10, 99).unwrap();
        for row in batch.rows() {
            assert_eq!(row, &[1.0, -2.0, 0.5]);
        }
    }

    #[test]
    fn second_moment_formulas() {
        let z = GaussianMeasure::<f64>::point_mass(4);
        assert_eq!(z.second_moment(), 0.0);

        let x = counterexample_measure::<f64>(17, 17).unwrap();
        assert!((x.second_moment() - 1.0).abs() < 1e-14);

        let shifted = GaussianMeasure::<f64>::new(vec![1.0, 0.0, 0.0], SymOperator::identity(3)).unwrap();
        assert!((shifted.second_moment() - 4.0).abs() < 1e-14);
    }

    #[test]
    fn counterexample_covariance_shape() {
        let g = counterexample_measure::<f64>(4, 4).unwrap();
        assert_eq!(g.covariance().eigenvalues(), vec![0.25; 4]);

        let padded = counterexample_measure::<f64>(10, 20).unwrap();
        let eigs = padded.covariance().eigenvalues();
        assert_eq!(&eigs[..10], &[0.1; 10]);
        assert_eq!(&eigs[10..], &[0.0; 10]);

        assert!(matches!(
            counterexample_measure::<f64>(5, 4),
            Err(Error::EmbeddingTooSmall { .. })
        ));
    }

    #[test]
    fn counterexample_one_dimensional_is_standard_normal() {
        let g = counterexample_measure::<f64>(1, 1).unwrap();
        assert_eq!(g.covariance().eigenvalues(), vec![1.0]);
        assert!(g.is_centered());
    }

    #[test]
    fn exp_neg_sqnorm_closed_forms() {
        let point = GaussianMeasure::<f64>::point_mass(5);
        assert_eq!(point.exp_neg_sqnorm().unwrap(), 1.0);

        let line = GaussianMeasure::<f64>::standard(1);
        assert!((line.exp_neg_sqnorm().unwrap() - 3f64.powf(-0.5)).abs() < 1e-15);

        let g = counterexample_measure::<f64>(100, 100).unwrap();
        let expected = 1.02f64.powi(-50);
        assert!((g.exp_neg_sqnorm().unwrap() - expected).abs() < 1e-14);
    }

    #[test]
    fn exp_neg_sqnorm_rejects_noncentered() {
        let g = GaussianMeasure::new(vec![1.0], SymOperator::identity(1)).unwrap();
        assert!(matches!(g.exp_neg_sqnorm(), Err(Error::NotCentered { .. })));
    }

    #[test]
    fn sampling_is_reproducible_and_thread_independent() {
        let g = counterexample_measure::<f64>(8, 8).unwrap();
        let a = g.sample(64, 123).unwrap();
        let b = g.sample(64, 123).unwrap();
        assert_eq!(a.values, b.values);

        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(1)
            .build()
            .unwrap();
        let c = pool.install(|| g.sample(64, 123).unwrap());
        assert_eq!(a.values, c.values);
        assert_eq!(a.measure_id(), c.measure_id());
    }

    #[test]
    fn mc_pair_with_shared_seed_pairs_draws() {
        let g = GaussianMeasure::<f64>::standard(2);
        let est = mc_pair(&g, &g, 2000, 5, 5, |x1, x2| {
            (x1[0] - x2[0]).abs() + (x1[1] - x2[1]).abs()
        })
        .unwrap();
        assert_eq!(est.mean, 0.0);
        assert_eq!(est.stderr, 0.0);
    }

    #[test]
    fn mc_expectation_matches_closed_form_on_line() {
        let g = GaussianMeasure::<f64>::standard(1);
        let est = mc_expectation(&g, 100_000, 11, |x| (-x[0] * x[0]).exp()).unwrap();
        let exact = 3f64.powf(-0.5);
        assert!((est.mean - exact).abs() < 4.0 * est.stderr);
    }

    #[test]
    fn measure_json_roundtrip() {
        let g = counterexample_measure::<f64>(3, 5).unwrap();
        let text = serde_json::to_string(&g).unwrap();
        let back: GaussianMeasure<f64> = serde_json::from_str(&text).unwrap();
        assert_eq!(back.mean(), g.mean());
        assert_eq!(
            back.covariance().eigenvalues(),
            g.covariance().eigenvalues()
        );
        let value: serde_json::Value = serde_json::from_str(&text).unwrap();
        assert!(value["mean"].is_array());
        assert_eq!(value["covariance"]["repr"], "diagonal");
    }

    #[test]
    fn csv_export_one_row_per_sample() {
        let g = GaussianMeasure::<f64>::point_mass(2);
        let batch = g.sample(3, 1).unwrap();
        let mut buf = Vec::new();
        batch.write_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let lines: Vec<&str> = text.trim_end().lines().collect();
        assert_eq!(lines.len(), 4);
        assert_eq!(lines[0], "x0,x1");
        assert_eq!(lines[1], "0,0");
    }
}
