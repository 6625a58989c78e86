//! Bilinear forms, tensor flattening, and the correspondences between
//! forms, operators, and tensors on the truncation.
//!
//! A symmetric bounded bilinear form φ is represented by the unique
//! self-adjoint operator A with φ(x, y) = ⟨Ax, y⟩; a Hilbert-Schmidt
//! operator flattens to a length-d² tensor whose Euclidean norm equals
//! the HS norm. The form norm ‖φ‖ (supremum over unit pairs) equals the
//! operator norm of A; it has no entrywise formula, so this module only
//! *estimates* it from below — by squared power iteration and random
//! unit-pair probes — and the estimate is checked against ‖A‖_∞ as the
//! exact upper bound.

use rand::Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::error::{Error, Result};
use crate::matrix::DenseMatrix;
use crate::operator::{norm_sq, SymOperator};
use crate::rng::substream;
use crate::scalar::{ksum, Real};

/// Real-valued bilinear form on the truncation, `values[i][j] = φ(e_i, e_j)`.
#[derive(Clone, Debug)]
pub struct BilinearForm<T> {
    values: DenseMatrix<T>,
    symmetric: bool,
}

impl<T: Real> BilinearForm<T> {
    pub fn new(values: DenseMatrix<T>) -> Result<Self> {
        let d = values.rows();
        if d == 0 {
            return Err(Error::TooFewDims { min: 1, got: 0 });
        }
        if values.cols() != d {
            return Err(Error::DimensionMismatch {
                expected: d,
                got: values.cols(),
            });
        }
        for (position, v) in values.data().iter().enumerate() {
            if !v.is_finite() {
                return Err(Error::NonFinite { position });
            }
        }
        let symmetric = symmetry_defect(&values).is_none();
        Ok(Self { values, symmetric })
    }

    pub fn from_rows(rows: &[Vec<T>]) -> Result<Self> {
        let d = rows.len();
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
        Self::new(DenseMatrix::from_row_major(d, d, data))
    }

    /// The form induced by an operator: φ(x, y) = ⟨Ax, y⟩.
    pub fn from_operator(op: &SymOperator<T>) -> Self {
        Self {
            values: op.to_dense_matrix(),
            symmetric: true,
        }
    }

    pub fn dim(&self) -> usize {
        self.values.rows()
    }

    pub fn values(&self) -> &DenseMatrix<T> {
        &self.values
    }

    pub fn is_symmetric(&self) -> bool {
        self.symmetric
    }

    /// Evaluate φ(x, y) = Σ_ij values[i][j] x_i y_j.
    pub fn eval(&self, x: &[T], y: &[T]) -> Result<T> {
        let d = self.dim();
        if x.len() != d || y.len() != d {
            return Err(Error::DimensionMismatch {
                expected: d,
                got: if x.len() != d { x.len() } else { y.len() },
            });
        }
        Ok(ksum((0..d).map(|i| {
            let row = ksum(self.values.row(i).iter().zip(y).map(|(v, yj)| *v * *yj));
            x[i] * row
        })))
    }

    /// The unique operator representing a symmetric form. Asymmetric
    /// input beyond the entrywise tolerance is rejected.
    pub fn to_operator(&self) -> Result<SymOperator<T>> {
        if let Some((i, j, defect)) = symmetry_defect(&self.values) {
            return Err(Error::NotSymmetric {
                i,
                j,
                defect: defect.to_f64().unwrap_or(f64::NAN),
            });
        }
        SymOperator::dense(self.values.clone())
    }
}

fn symmetry_defect<T: Real>(values: &DenseMatrix<T>) -> Option<(usize, usize, T)> {
    let d = values.rows();
    let tol = T::ENTRYWISE_TOL;
    for i in 0..d {
        for j in 0..i {
            let a = values[(i, j)];
            let b = values[(j, i)];
            let defect = (a - b).abs();
            if defect > tol * T::one().max(a.abs().min(b.abs())) {
                return Some((i, j, defect));
            }
        }
    }
    None
}

/// Flattened element of the d²-dimensional tensor square, indexed (i, j)
/// row-major. `symmetric` marks membership in the symmetric tensor
/// subspace.
#[derive(Clone, Debug)]
pub struct TensorVector<T> {
    dim: usize,
    entries: Vec<T>,
    symmetric: bool,
}

impl<T: Real> TensorVector<T> {
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn entries(&self) -> &[T] {
        &self.entries
    }

    pub fn entry(&self, i: usize, j: usize) -> T {
        self.entries[i * self.dim + j]
    }

    pub fn is_symmetric(&self) -> bool {
        self.symmetric
    }

    /// Euclidean norm; equals the HS norm of the flattened operator.
    pub fn norm(&self) -> T {
        norm_sq(&self.entries).sqrt()
    }
}

/// Flatten an operator into the tensor square: entries[(i, j)] = A[i][j].
pub fn operator_to_tensor<T: Real>(op: &SymOperator<T>) -> TensorVector<T> {
    let d = op.dim();
    TensorVector {
        dim: d,
        entries: op.to_dense_matrix().into_data(),
        symmetric: true,
    }
}

/// Lower-bound estimate of the form norm ‖φ‖ = sup_{‖x‖=‖y‖=1} |φ(x,y)|.
///
/// Squared power iteration on the representing operator (robust for
/// indefinite spectra) interleaved with random unit-pair probes. Every
/// probe evaluates the form at feasible points, so the estimate never
/// exceeds the exact value ‖A‖_∞.
pub fn estimate_form_norm<T: Real>(form: &BilinearForm<T>, steps: usize, seed: u64) -> Result<T>
where
    StandardNormal: Distribution<T>,
{
    let op = form.to_operator()?;
    let d = form.dim();
    let mut rng = substream(seed, 0);

    let mut best = T::zero();

    // Random unit pairs: direct lower bounds on the supremum.
    let probes = 32.min(steps);
    for _ in 0..probes {
        let x = random_unit(&mut rng, d);
        let y = random_unit(&mut rng, d);
        best = best.max(form.eval(&x, &y)?.abs());
    }

    // Power iteration on A²: v ← A²v/‖A²v‖. ‖Av‖ for unit v is a lower
    // bound of ‖A‖_op and converges to it.
    let mut v = random_unit(&mut rng, d);
    for _ in 0..steps {
        let av = op.matvec(&v)?;
        let norm_av = norm_sq(&av).sqrt();
        if norm_av == T::zero() {
            // A annihilates v; restart from a fresh direction.
            v = random_unit(&mut rng, d);
            continue;
        }
        best = best.max(norm_av);
        let aav = op.matvec(&av)?;
        let norm_aav = norm_sq(&aav).sqrt();
        if norm_aav == T::zero() {
            break;
        }
        v = aav.into_iter().map(|x| x / norm_aav).collect();
    }
    Ok(best)
}

fn random_unit<T: Real, R: Rng>(rng: &mut R, d: usize) -> Vec<T>
where
    StandardNormal: Distribution<T>,
{
    loop {
        let v: Vec<T> = (0..d).map(|_| rng.sample(StandardNormal)).collect();
        let norm = norm_sq(&v).sqrt();
        if norm > T::epsilon() {
            return v.into_iter().map(|x| x / norm).collect();
        }
    }
}
