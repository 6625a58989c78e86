//! Self-adjoint operators on a d-dimensional truncation of a separable
//! Hilbert space.
//!
//! Operators carry one of three representations:
//!
//! * `Dense` — an explicit symmetric d×d matrix,
//! * `Diagonal` — entries of a diagonal operator,
//! * `ScalarPlusRankOne` — `c·I + β·u⊗u`, the shape every radial Hessian
//!   and every projection-family covariance takes.
//!
//! The structured representations have closed-form spectra and are used
//! as fast paths; the dense path goes through the symmetric eigensolver.
//! All operations agree across representations (this is tested), so the
//! closed forms double as oracles for the dense route.

use serde::{Deserialize, Serialize};

use crate::eigen::symmetric_eigen;
use crate::error::{Error, Result};
use crate::matrix::DenseMatrix;
use crate::scalar::{ksum, real, KahanSum, Real};

/// Storage of a self-adjoint operator.
#[derive(Clone, Debug)]
pub enum OperatorRepr<T> {
    Dense(DenseMatrix<T>),
    Diagonal(Vec<T>),
    ScalarPlusRankOne { scale: T, coeff: T, vector: Vec<T> },
}

/// Self-adjoint operator on the d-dimensional truncation.
#[derive(Clone, Debug)]
pub struct SymOperator<T> {
    dim: usize,
    repr: OperatorRepr<T>,
}

/// Eigenvalues (descending) with orthonormal eigenvectors as columns.
#[derive(Clone, Debug)]
pub struct SpectralDecomposition<T> {
    eigenvalues: Vec<T>,
    eigenvectors: DenseMatrix<T>,
}

fn check_finite<T: Real>(values: &[T]) -> Result<()> {
    for (position, v) in values.iter().enumerate() {
        if !v.is_finite() {
            return Err(Error::NonFinite { position });
        }
    }
    Ok(())
}

fn check_dim(dim: usize) -> Result<()> {
    if dim == 0 {
        return Err(Error::TooFewDims { min: 1, got: 0 });
    }
    Ok(())
}

impl<T: Real> SymOperator<T> {
    /// Dense operator from an explicit matrix. The matrix must be square,
    /// finite, and symmetric within the entrywise tolerance.
    pub fn dense(matrix: DenseMatrix<T>) -> Result<Self> {
        let d = matrix.rows();
        check_dim(d)?;
        if matrix.cols() != d {
            return Err(Error::DimensionMismatch {
                expected: d,
                got: matrix.cols(),
            });
        }
        check_finite(matrix.data())?;
        let tol = T::ENTRYWISE_TOL;
        for i in 0..d {
            for j in 0..i {
                let a = matrix[(i, j)];
                let b = matrix[(j, i)];
                let defect = (a - b).abs();
                let bound = tol * T::one().max(a.abs().min(b.abs()));
                if defect > bound {
                    return Err(Error::NotSymmetric {
                        i,
                        j,
                        defect: defect.to_f64().unwrap_or(f64::NAN),
                    });
                }
            }
        }
        Ok(Self {
            dim: d,
            repr: OperatorRepr::Dense(matrix),
        })
    }

    /// Dense operator from nested rows.
    pub fn dense_from_rows(rows: &[Vec<T>]) -> Result<Self> {
        let d = rows.len();
        check_dim(d)?;
        let mut data = Vec::with_capacity(d * d);
        for row in rows {
            if row.len() != d {
                return Err(Error::DimensionMismatch {
                    expected: d,
                    got: row.len(),
                });
            }
            data.extend_from_slice(row);
        }
        Self::dense(DenseMatrix::from_row_major(d, d, data))
    }

    /// Diagonal operator.
    pub fn diagonal(entries: Vec<T>) -> Result<Self> {
        check_dim(entries.len())?;
        check_finite(&entries)?;
        Ok(Self {
            dim: entries.len(),
            repr: OperatorRepr::Diagonal(entries),
        })
    }

    /// `scale·I + coeff·vector⊗vector`.
    pub fn scalar_plus_rank_one(scale: T, coeff: T, vector: Vec<T>) -> Result<Self> {
        check_dim(vector.len())?;
        check_finite(&vector)?;
        check_finite(&[scale, coeff])?;
        Ok(Self {
            dim: vector.len(),
            repr: OperatorRepr::ScalarPlusRankOne {
                scale,
                coeff,
                vector,
            },
        })
    }

    pub fn identity(dim: usize) -> Self {
        Self::diagonal(vec![T::one(); dim]).expect("identity is well formed")
    }

    pub fn zero(dim: usize) -> Self {
        Self::diagonal(vec![T::zero(); dim]).expect("zero operator is well formed")
    }

    pub fn scaled_identity(dim: usize, scale: T) -> Result<Self> {
        Self::diagonal(vec![scale; dim])
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn repr(&self) -> &OperatorRepr<T> {
        &self.repr
    }

    /// Entry in the standard basis.
    pub fn entry(&self, i: usize, j: usize) -> T {
        match &self.repr {
            OperatorRepr::Dense(m) => m[(i, j)],
            OperatorRepr::Diagonal(d) => {
                if i == j {
                    d[i]
                } else {
                    T::zero()
                }
            }
            OperatorRepr::ScalarPlusRankOne {
                scale,
                coeff,
                vector,
            } => {
                let diag = if i == j { *scale } else { T::zero() };
                diag + *coeff * vector[i] * vector[j]
            }
        }
    }

    /// Apply the operator to a vector.
    pub fn matvec(&self, x: &[T]) -> Result<Vec<T>> {
        if x.len() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                got: x.len(),
            });
        }
        Ok(match &self.repr {
            OperatorRepr::Dense(m) => m.matvec(x),
            OperatorRepr::Diagonal(d) => d.iter().zip(x).map(|(a, b)| *a * *b).collect(),
            OperatorRepr::ScalarPlusRankOne {
                scale,
                coeff,
                vector,
            } => {
                let ux = ksum(vector.iter().zip(x).map(|(a, b)| *a * *b));
                vector
                    .iter()
                    .zip(x)
                    .map(|(u, xi)| *scale * *xi + *coeff * ux * *u)
                    .collect()
            }
        })
    }

    /// Convert to an explicit dense matrix.
    pub fn to_dense_matrix(&self) -> DenseMatrix<T> {
        match &self.repr {
            OperatorRepr::Dense(m) => m.clone(),
            OperatorRepr::Diagonal(d) => {
                let mut m = DenseMatrix::zeros(self.dim, self.dim);
                for (i, v) in d.iter().enumerate() {
                    m[(i, i)] = *v;
                }
                m
            }
            OperatorRepr::ScalarPlusRankOne {
                scale,
                coeff,
                vector,
            } => {
                let mut m = DenseMatrix::zeros(self.dim, self.dim);
                for i in 0..self.dim {
                    for j in 0..self.dim {
                        m[(i, j)] = *coeff * vector[i] * vector[j];
                    }
                    m[(i, i)] = m[(i, i)] + *scale;
                }
                m
            }
        }
    }

    /// Same operator with a `Dense` representation.
    pub fn to_dense_operator(&self) -> Self {
        Self {
            dim: self.dim,
            repr: OperatorRepr::Dense(self.to_dense_matrix()),
        }
    }

    /// Eigenvalues in descending order. Structured representations use
    /// their closed-form spectra and never touch the dense solver.
    pub fn eigenvalues(&self) -> Vec<T> {
        match &self.repr {
            OperatorRepr::Dense(m) => symmetric_eigen(m).0,
            OperatorRepr::Diagonal(d) => {
                let mut v = d.clone();
                v.sort_by(|a, b| b.partial_cmp(a).expect("finite entries"));
                v
            }
            OperatorRepr::ScalarPlusRankOne {
                scale,
                coeff,
                vector,
            } => {
                let shifted = *scale + *coeff * norm_sq(vector);
                let mut v = vec![*scale; self.dim - 1];
                v.push(shifted);
                v.sort_by(|a, b| b.partial_cmp(a).expect("finite entries"));
                v
            }
        }
    }

    /// Full spectral decomposition, eigenvalues descending.
    pub fn spectral(&self) -> SpectralDecomposition<T> {
        match &self.repr {
            OperatorRepr::Dense(m) => {
                let (eigenvalues, eigenvectors) = symmetric_eigen(m);
                SpectralDecomposition {
                    eigenvalues,
                    eigenvectors,
                }
            }
            OperatorRepr::Diagonal(d) => {
                let mut order: Vec<usize> = (0..self.dim).collect();
                order.sort_by(|&a, &b| d[b].partial_cmp(&d[a]).expect("finite entries"));
                let mut vecs = DenseMatrix::zeros(self.dim, self.dim);
                let mut vals = Vec::with_capacity(self.dim);
                for (col, &idx) in order.iter().enumerate() {
                    vals.push(d[idx]);
                    vecs[(idx, col)] = T::one();
                }
                SpectralDecomposition {
                    eigenvalues: vals,
                    eigenvectors: vecs,
                }
            }
            OperatorRepr::ScalarPlusRankOne {
                scale,
                coeff,
                vector,
            } => spectral_rank_one(self.dim, *scale, *coeff, vector),
        }
    }

    /// Schatten p-norm, `p ∈ [1, ∞]` (`T::infinity()` selects the operator
    /// norm). Computed from the spectrum: `(Σ |λ|^p)^{1/p}`.
    pub fn schatten_norm(&self, p: T) -> Result<T> {
        schatten_from_spectrum(&self.eigenvalues(), p)
    }

    /// Operator norm, the `p = ∞` Schatten norm.
    pub fn operator_norm(&self) -> T {
        self.eigenvalues()
            .iter()
            .map(|l| l.abs())
            .fold(T::zero(), T::max)
    }

    /// Trace.
    pub fn trace(&self) -> T {
        match &self.repr {
            OperatorRepr::Dense(m) => ksum((0..self.dim).map(|i| m[(i, i)])),
            OperatorRepr::Diagonal(d) => ksum(d.iter().copied()),
            OperatorRepr::ScalarPlusRankOne {
                scale,
                coeff,
                vector,
            } => *scale * T::from_usize(self.dim).unwrap() + *coeff * norm_sq(vector),
        }
    }

    /// Hilbert-Schmidt inner product `Σ_ij A_ij B_ij`.
    pub fn hs_inner(&self, other: &Self) -> Result<T> {
        if self.dim != other.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                got: other.dim,
            });
        }
        use OperatorRepr::*;
        let value = match (&self.repr, &other.repr) {
            (Diagonal(a), Diagonal(b)) => ksum(a.iter().zip(b).map(|(x, y)| *x * *y)),
            (Diagonal(a), ScalarPlusRankOne {
                scale,
                coeff,
                vector,
            })
            | (ScalarPlusRankOne {
                scale,
                coeff,
                vector,
            }, Diagonal(a)) => {
                ksum(a.iter().zip(vector).map(|(d, u)| *d * (*scale + *coeff * *u * *u)))
            }
            (
                ScalarPlusRankOne {
                    scale: c1,
                    coeff: b1,
                    vector: u,
                },
                ScalarPlusRankOne {
                    scale: c2,
                    coeff: b2,
                    vector: v,
                },
            ) => {
                let d = T::from_usize(self.dim).unwrap();
                let uv = ksum(u.iter().zip(v).map(|(a, b)| *a * *b));
                *c1 * *c2 * d
                    + *c1 * *b2 * norm_sq(v)
                    + *c2 * *b1 * norm_sq(u)
                    + *b1 * *b2 * uv * uv
            }
            (Dense(m), Diagonal(d)) | (Diagonal(d), Dense(m)) => {
                ksum(d.iter().enumerate().map(|(i, v)| m[(i, i)] * *v))
            }
            (
                Dense(m),
                ScalarPlusRankOne {
                    scale,
                    coeff,
                    vector,
                },
            )
            | (
                ScalarPlusRankOne {
                    scale,
                    coeff,
                    vector,
                },
                Dense(m),
            ) => {
                let diag = ksum((0..self.dim).map(|i| m[(i, i)]));
                let quad = ksum((0..self.dim).map(|i| {
                    let row = ksum(m.row(i).iter().zip(vector).map(|(a, b)| *a * *b));
                    vector[i] * row
                }));
                *scale * diag + *coeff * quad
            }
            (Dense(a), Dense(b)) => {
                let mut acc = KahanSum::new();
                for (x, y) in a.data().iter().zip(b.data()) {
                    acc.add(*x * *y);
                }
                acc.value()
            }
        };
        Ok(value)
    }

    /// Positive-semidefinite square root.
    ///
    /// Eigenvalues within `PSD_CLAMP · ‖A‖_∞` below zero are treated as
    /// rounding noise and clamped; anything lower is a hard error.
    pub fn sqrt(&self) -> Result<Self> {
        match &self.repr {
            OperatorRepr::Diagonal(d) => {
                let sup = d.iter().map(|v| v.abs()).fold(T::zero(), T::max);
                let clamped = clamp_psd(d, sup)?;
                Self::diagonal(clamped.into_iter().map(|v| v.sqrt()).collect())
            }
            OperatorRepr::ScalarPlusRankOne {
                scale,
                coeff,
                vector,
            } => {
                let usq = norm_sq(vector);
                let shifted = *scale + *coeff * usq;
                let sup = if self.dim > 1 {
                    scale.abs().max(shifted.abs())
                } else {
                    shifted.abs()
                };
                let mut eigs = if self.dim > 1 {
                    vec![*scale, shifted]
                } else {
                    vec![shifted]
                };
                eigs = clamp_psd(&eigs, sup)?;
                if usq == T::zero() {
                    return Self::scalar_plus_rank_one(eigs[0].sqrt(), T::zero(), vector.clone());
                }
                let (base, top) = if self.dim > 1 {
                    (eigs[0], eigs[1])
                } else {
                    // d = 1: the "scale" direction does not exist; treat the
                    // single eigenvalue directly.
                    (scale.max(T::zero()), eigs[0])
                };
                let new_coeff = (top.sqrt() - base.sqrt()) / usq;
                Self::scalar_plus_rank_one(base.sqrt(), new_coeff, vector.clone())
            }
            OperatorRepr::Dense(_) => {
                let spec = self.spectral();
                let sup = spec
                    .eigenvalues
                    .iter()
                    .map(|v| v.abs())
                    .fold(T::zero(), T::max);
                let clamped = clamp_psd(&spec.eigenvalues, sup)?;
                let rebuilt = spec.rebuild_with(&clamped.iter().map(|v| v.sqrt()).collect::<Vec<_>>());
                Self::dense(rebuilt)
            }
        }
    }

    /// `self + other`, keeping the diagonal representation when both sides
    /// are diagonal.
    pub fn add(&self, other: &Self) -> Result<Self> {
        self.combine(other, T::one())
    }

    /// `self - other`, keeping the diagonal representation when both sides
    /// are diagonal.
    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.combine(other, -T::one())
    }

    fn combine(&self, other: &Self, sign: T) -> Result<Self> {
        if self.dim != other.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                got: other.dim,
            });
        }
        use OperatorRepr::*;
        match (&self.repr, &other.repr) {
            (Diagonal(a), Diagonal(b)) => {
                Self::diagonal(a.iter().zip(b).map(|(x, y)| *x + sign * *y).collect())
            }
            _ => {
                let a = self.to_dense_matrix();
                let b = other.to_dense_matrix();
                let mut data = Vec::with_capacity(self.dim * self.dim);
                for (x, y) in a.data().iter().zip(b.data()) {
                    data.push(*x + sign * *y);
                }
                Self::dense(DenseMatrix::from_row_major(self.dim, self.dim, data))
            }
        }
    }

    /// Scale by a constant, preserving the representation.
    pub fn scale(&self, factor: T) -> Self {
        let repr = match &self.repr {
            OperatorRepr::Dense(m) => {
                let data = m.data().iter().map(|v| *v * factor).collect();
                OperatorRepr::Dense(DenseMatrix::from_row_major(self.dim, self.dim, data))
            }
            OperatorRepr::Diagonal(d) => {
                OperatorRepr::Diagonal(d.iter().map(|v| *v * factor).collect())
            }
            OperatorRepr::ScalarPlusRankOne {
                scale,
                coeff,
                vector,
            } => OperatorRepr::ScalarPlusRankOne {
                scale: *scale * factor,
                coeff: *coeff * factor,
                vector: vector.clone(),
            },
        };
        Self {
            dim: self.dim,
            repr,
        }
    }
}

/// Squared Euclidean norm.
pub(crate) fn norm_sq<T: Real>(v: &[T]) -> T {
    ksum(v.iter().map(|x| *x * *x))
}

/// Schatten norm from a spectrum: `(Σ |λ|^p)^{1/p}`, max |λ| at p = ∞.
/// Scaled by the spectral radius so large exponents neither overflow nor
/// underflow.
pub fn schatten_from_spectrum<T: Real>(eigenvalues: &[T], p: T) -> Result<T> {
    if p.is_nan() || p < T::one() {
        return Err(Error::InvalidExponent {
            p: p.to_f64().unwrap_or(f64::NAN),
        });
    }
    let sup = eigenvalues
        .iter()
        .map(|l| l.abs())
        .fold(T::zero(), T::max);
    if sup == T::zero() {
        return Ok(T::zero());
    }
    if p.is_infinite() {
        return Ok(sup);
    }
    let one = T::one();
    let two = real::<T>(2.0);
    let sum = if p == one {
        ksum(eigenvalues.iter().map(|l| l.abs() / sup))
    } else if p == two {
        ksum(eigenvalues.iter().map(|l| {
            let r = l.abs() / sup;
            r * r
        }))
    } else {
        ksum(eigenvalues.iter().map(|l| (l.abs() / sup).powf(p)))
    };
    let root = if p == one {
        sum
    } else if p == two {
        sum.sqrt()
    } else {
        sum.powf(one / p)
    };
    Ok(sup * root)
}

fn clamp_psd<T: Real>(eigenvalues: &[T], sup: T) -> Result<Vec<T>> {
    let floor = -T::PSD_CLAMP * sup;
    let mut out = Vec::with_capacity(eigenvalues.len());
    for &l in eigenvalues {
        if l < floor {
            return Err(Error::NotPositiveSemidefinite {
                min_eigenvalue: l.to_f64().unwrap_or(f64::NAN),
            });
        }
        out.push(l.max(T::zero()));
    }
    Ok(out)
}

/// Spectral decomposition of `c·I + β·u⊗u` without the dense solver.
///
/// The eigenvector for the shifted eigenvalue is `u/‖u‖`; the orthogonal
/// complement is generated as the trailing columns of the Householder
/// reflection exchanging `e₁` and `±u/‖u‖`.
fn spectral_rank_one<T: Real>(
    dim: usize,
    scale: T,
    coeff: T,
    vector: &[T],
) -> SpectralDecomposition<T> {
    let usq = norm_sq(vector);
    if usq == T::zero() {
        return SpectralDecomposition {
            eigenvalues: vec![scale; dim],
            eigenvectors: DenseMatrix::identity(dim),
        };
    }
    let unorm = usq.sqrt();
    let unit: Vec<T> = vector.iter().map(|v| *v / unorm).collect();

    // Reflection sign chosen away from cancellation: w ∝ e₁ + sign(u₁)·û.
    let sign = if unit[0] >= T::zero() {
        T::one()
    } else {
        -T::one()
    };
    let mut w: Vec<T> = unit.iter().map(|v| sign * *v).collect();
    w[0] = w[0] + T::one();
    let wnorm = norm_sq(&w).sqrt();
    for item in &mut w {
        *item = *item / wnorm;
    }

    // H = I − 2wwᵀ is orthogonal with first column −sign·û.
    let two = real::<T>(2.0);
    let mut basis = DenseMatrix::zeros(dim, dim);
    for i in 0..dim {
        for j in 0..dim {
            let delta = if i == j { T::one() } else { T::zero() };
            basis[(i, j)] = delta - two * w[i] * w[j];
        }
    }

    let shifted = scale + coeff * usq;
    // Column 0 of the reflection spans u, the rest span its complement.
    // Order columns so eigenvalues come out descending.
    let mut eigenvalues = Vec::with_capacity(dim);
    let mut eigenvectors = DenseMatrix::zeros(dim, dim);
    if shifted >= scale {
        eigenvalues.push(shifted);
        eigenvalues.extend(std::iter::repeat_n(scale, dim - 1));
        for i in 0..dim {
            for j in 0..dim {
                eigenvectors[(i, j)] = basis[(i, j)];
            }
        }
    } else {
        eigenvalues.extend(std::iter::repeat_n(scale, dim - 1));
        eigenvalues.push(shifted);
        for i in 0..dim {
            for j in 1..dim {
                eigenvectors[(i, j - 1)] = basis[(i, j)];
            }
            eigenvectors[(i, dim - 1)] = basis[(i, 0)];
        }
    }
    SpectralDecomposition {
        eigenvalues,
        eigenvectors,
    }
}

impl<T: Real> SpectralDecomposition<T> {
    pub fn eigenvalues(&self) -> &[T] {
        &self.eigenvalues
    }

    pub fn eigenvectors(&self) -> &DenseMatrix<T> {
        &self.eigenvectors
    }

    /// `V Λ Vᵀ` as a dense matrix.
    pub fn reconstruct(&self) -> DenseMatrix<T> {
        self.rebuild_with(&self.eigenvalues)
    }

    /// `V diag(values) Vᵀ`.
    pub fn rebuild_with(&self, values: &[T]) -> DenseMatrix<T> {
        let n = self.eigenvalues.len();
        assert_eq!(values.len(), n);
        let mut out = DenseMatrix::zeros(n, n);
        for i in 0..n {
            for j in 0..=i {
                let mut acc = KahanSum::new();
                for (k, lam) in values.iter().enumerate() {
                    acc.add(self.eigenvectors[(i, k)] * *lam * self.eigenvectors[(j, k)]);
                }
                out[(i, j)] = acc.value();
                out[(j, i)] = acc.value();
            }
        }
        out
    }

    /// `‖VᵀV − I‖_HS`.
    pub fn orthonormality_defect(&self) -> T {
        let gram = self.eigenvectors.transpose().matmul(&self.eigenvectors);
        let n = self.eigenvalues.len();
        let mut acc = KahanSum::new();
        for i in 0..n {
            for j in 0..n {
                let target = if i == j { T::one() } else { T::zero() };
                let diff = gram[(i, j)] - target;
                acc.add(diff * diff);
            }
        }
        acc.value().sqrt()
    }
}

// ---------------------------------------------------------------------
// JSON wire format:
//   {"dim": d, "repr": "dense"|"diagonal"|"scalar_plus_rank_one", "data": …}
// Dense data is the flat row-major matrix; diagonal data is the entry
// list; scalar_plus_rank_one data is {"scale", "coeff", "vector"}.
// ---------------------------------------------------------------------

#[derive(Serialize, Deserialize)]
struct OperatorDto {
    dim: usize,
    repr: String,
    data: OperatorDataDto,
}

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum OperatorDataDto {
    Entries(Vec<f64>),
    ScalarPlusRankOne {
        scale: f64,
        coeff: f64,
        vector: Vec<f64>,
    },
}

fn to_f64_vec<T: Real>(values: &[T]) -> Vec<f64> {
    values.iter().map(|v| v.to_f64().unwrap()).collect()
}

fn from_f64_vec<T: Real>(values: &[f64]) -> Vec<T> {
    values.iter().map(|v| real(*v)).collect()
}

impl<T: Real> Serialize for SymOperator<T> {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let dto = match &self.repr {
            OperatorRepr::Dense(m) => OperatorDto {
                dim: self.dim,
                repr: "dense".to_string(),
                data: OperatorDataDto::Entries(to_f64_vec(m.data())),
            },
            OperatorRepr::Diagonal(d) => OperatorDto {
                dim: self.dim,
                repr: "diagonal".to_string(),
                data: OperatorDataDto::Entries(to_f64_vec(d)),
            },
            OperatorRepr::ScalarPlusRankOne {
                scale,
                coeff,
                vector,
            } => OperatorDto {
                dim: self.dim,
                repr: "scalar_plus_rank_one".to_string(),
                data: OperatorDataDto::ScalarPlusRankOne {
                    scale: scale.to_f64().unwrap(),
                    coeff: coeff.to_f64().unwrap(),
                    vector: to_f64_vec(vector),
                },
            },
        };
        dto.serialize(serializer)
    }
}

impl<'de, T: Real> Deserialize<'de> for SymOperator<T> {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as DeError;
        let dto = OperatorDto::deserialize(deserializer)?;
        let op = match (dto.repr.as_str(), dto.data) {
            ("dense", OperatorDataDto::Entries(entries)) => {
                if entries.len() != dto.dim * dto.dim {
                    return Err(D::Error::custom(format!(
                        "dense data must have dim^2 = {} entries, got {}",
                        dto.dim * dto.dim,
                        entries.len()
                    )));
                }
                SymOperator::dense(DenseMatrix::from_row_major(
                    dto.dim,
                    dto.dim,
                    from_f64_vec(&entries),
                ))
            }
            ("diagonal", OperatorDataDto::Entries(entries)) => {
                if entries.len() != dto.dim {
                    return Err(D::Error::custom(format!(
                        "diagonal data must have dim = {} entries, got {}",
                        dto.dim,
                        entries.len()
                    )));
                }
                SymOperator::diagonal(from_f64_vec(&entries))
            }
            (
                "scalar_plus_rank_one",
                OperatorDataDto::ScalarPlusRankOne {
                    scale,
                    coeff,
                    vector,
                },
            ) => {
                if vector.len() != dto.dim {
                    return Err(D::Error::custom(format!(
                        "rank-one vector must have dim = {} entries, got {}",
                        dto.dim,
                        vector.len()
                    )));
                }
                SymOperator::scalar_plus_rank_one(real(scale), real(coeff), from_f64_vec(&vector))
            }
            (other, _) => {
                return Err(D::Error::custom(format!(
                    "unknown or mismatched repr {other:?}"
                )))
            }
        };
        op.map_err(D::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn diag(entries: &[f64]) -> SymOperator<f64> {
        SymOperator::diagonal(entries.to_vec()).unwrap()
    }

    #[test]
    fn identity_spectrum_is_flat() {
        let eye = SymOperator::<f64>::identity(3);
        assert_eq!(eye.eigenvalues(), vec![1.0, 1.0, 1.0]);
    }

    #[test]
    fn quarter_diagonal_spectrum() {
        let op = diag(&[0.25; 4]);
        assert_eq!(op.eigenvalues(), vec![0.25; 4]);
    }

    #[test]
    fn schatten_norm_of_identity_is_d_to_inverse_p() {
        // d = 9, p = 2 gives 3.
        let eye = SymOperator::<f64>::identity(9);
        assert!((eye.schatten_norm(2.0).unwrap() - 3.0).abs() < 1e-14);
        // p = inf gives 1 regardless of d.
        assert!((eye.schatten_norm(f64::INFINITY).unwrap() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn schatten_norm_of_projection_family() {
        // n entries 1/n at exponent q: norm = n^{1/q - 1}.
        let op = diag(&[0.25; 4]);
        assert!((op.schatten_norm(2.0).unwrap() - 0.5).abs() < 1e-15);

        let op = diag(&vec![0.01; 100]);
        assert!((op.schatten_norm(f64::INFINITY).unwrap() - 0.01).abs() < 1e-17);
    }

    #[test]
    fn schatten_rejects_exponents_below_one() {
        let op = diag(&[1.0, 2.0]);
        assert!(matches!(
            op.schatten_norm(0.5),
            Err(Error::InvalidExponent { .. })
        ));
        assert!(matches!(
            op.schatten_norm(f64::NAN),
            Err(Error::InvalidExponent { .. })
        ));
    }

    #[test]
    fn sqrt_of_zero_is_zero() {
        let z = SymOperator::<f64>::zero(5);
        let s = z.sqrt().unwrap();
        assert_eq!(s.eigenvalues(), vec![0.0; 5]);
    }

    #[test]
    fn sqrt_of_projection_family_has_unit_hs_norm() {
        let n = 7;
        let op = diag(&vec![1.0 / n as f64; n]);
        let s = op.sqrt().unwrap();
        let hs = s.schatten_norm(2.0).unwrap();
        assert!((hs - 1.0).abs() < 1e-14);
    }

    #[test]
    fn sqrt_rejects_indefinite_input() {
        let op = diag(&[1.0, -0.5]);
        assert!(matches!(
            op.sqrt(),
            Err(Error::NotPositiveSemidefinite { .. })
        ));
    }

    #[test]
    fn hs_inner_identity_examples() {
        let eye = SymOperator::<f64>::identity(6);
        assert!((eye.hs_inner(&eye).unwrap() - 6.0).abs() < 1e-15);
        let zero = SymOperator::<f64>::zero(6);
        assert_eq!(eye.hs_inner(&zero).unwrap(), 0.0);
    }

    #[test]
    fn hs_inner_rejects_dimension_mismatch() {
        let a = SymOperator::<f64>::identity(3);
        let b = SymOperator::<f64>::identity(4);
        assert!(matches!(
            a.hs_inner(&b),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn hs_inner_matches_self_norm() {
        let op = SymOperator::dense_from_rows(&[
            vec![2.0, -1.0, 0.5],
            vec![-1.0, 3.0, 0.0],
            vec![0.5, 0.0, -2.0],
        ])
        .unwrap();
        let inner = op.hs_inner(&op).unwrap();
        let norm: f64 = op.schatten_norm(2.0).unwrap();
        assert!((inner - norm * norm).abs() < 1e-12);
    }

    #[test]
    fn dense_construction_rejects_asymmetry() {
        let m = DenseMatrix::from_row_major(2, 2, vec![1.0, 2.0, 2.5, 1.0]);
        assert!(matches!(
            SymOperator::dense(m),
            Err(Error::NotSymmetric { .. })
        ));
    }

    #[test]
    fn construction_rejects_non_finite() {
        assert!(matches!(
            SymOperator::diagonal(vec![1.0, f64::NAN]),
            Err(Error::NonFinite { .. })
        ));
    }

    #[test]
    fn rank_one_spectrum_closed_form() {
        // 0.5 I + 2 u⊗u with u = (3, 4): eigenvalues 0.5 + 2*25 = 50.5 and 0.5.
        let op = SymOperator::<f64>::scalar_plus_rank_one(0.5, 2.0, vec![3.0, 4.0]).unwrap();
        let eigs = op.eigenvalues();
        assert!((eigs[0] - 50.5).abs() < 1e-12);
        assert!((eigs[1] - 0.5).abs() < 1e-12);

        let spec = op.spectral();
        let rec = spec.reconstruct();
        assert!(rec.max_abs_diff(&op.to_dense_matrix()) < 1e-12);
        assert!(spec.orthonormality_defect() < 1e-13);
    }

    #[test]
    fn rank_one_sqrt_squares_back() {
        let op = SymOperator::scalar_plus_rank_one(0.25, 1.5, vec![1.0, -2.0, 0.5]).unwrap();
        let s = op.sqrt().unwrap();
        let dense = s.to_dense_matrix();
        let squared = dense.matmul(&dense);
        assert!(squared.max_abs_diff(&op.to_dense_matrix()) < 1e-12);
    }

    #[test]
    fn diagonal_spectral_keeps_permutation_structure() {
        let op = diag(&[0.5, 2.0, -1.0]);
        let spec = op.spectral();
        assert_eq!(spec.eigenvalues(), &[2.0, 0.5, -1.0]);
        assert!(spec.orthonormality_defect() == 0.0);
        assert!(spec.reconstruct().max_abs_diff(&op.to_dense_matrix()) == 0.0);
    }

    #[test]
    fn json_roundtrip_all_reprs() {
        let dense = SymOperator::dense_from_rows(&[vec![1.0, 0.25], vec![0.25, -3.0]]).unwrap();
        let diagonal = diag(&[1.0, 2.0, 3.0]);
        let rank_one = SymOperator::scalar_plus_rank_one(-0.5, 2.0, vec![0.0, 1.0]).unwrap();
        for op in [dense, diagonal, rank_one] {
            let text = serde_json::to_string(&op).unwrap();
            let back: SymOperator<f64> = serde_json::from_str(&text).unwrap();
            assert_eq!(back.dim(), op.dim());
            assert!(back.to_dense_matrix().max_abs_diff(&op.to_dense_matrix()) == 0.0);
        }
    }

    #[test]
    fn json_schema_shape_is_stable() {
        let op = diag(&[1.0, 0.5]);
        let value: serde_json::Value = serde_json::to_value(&op).unwrap();
        assert_eq!(value["dim"], 2);
        assert_eq!(value["repr"], "diagonal");
        assert_eq!(value["data"][0], 1.0);
    }

    #[test]
    fn sub_keeps_diagonal_repr() {
        let a = diag(&[1.0, 2.0]);
        let b = diag(&[0.5, 0.5]);
        let c = a.sub(&b).unwrap();
        assert!(matches!(c.repr(), OperatorRepr::Diagonal(_)));
        assert_eq!(c.eigenvalues(), vec![1.5, 0.5]);
    }
}
