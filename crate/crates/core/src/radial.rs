//! Smooth radial test functions `f(x) = ψ(‖x − y‖²)` with closed-form
//! first and second derivatives.
//!
//! The profile family is deliberately small — constants and exponential
//! bumps `a·exp(−r/σ)` — because everything downstream needs closed-form
//! extrema of the derivative budget `sup_x(‖Df(x)‖_op + ‖D²f(x)‖_p)`:
//! feasibility of a test function is certified analytically, never by
//! sampling the ambient space.
//!
//! The Hessian at `x` is always `c·I + β·(x−y)⊗(x−y)` with
//! `c = 2ψ′(r)`, `β = 4ψ″(r)`, `r = ‖x−y‖²`, so its spectrum has at most
//! two distinct points and every Schatten norm reduces to the two-point
//! formula below. How those norms grow with the truncation dimension —
//! `d^{1/p}` for nonconstant profiles and `p < ∞`, flat for `p = ∞` — is
//! exactly the compactness obstruction the growth diagnostic measures.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::operator::{norm_sq, SymOperator};
use crate::scalar::{ksum, real, Real};

/// Profile `ψ : [0, ∞) → ℝ`, smooth and bounded with bounded derivatives.
#[derive(Clone, Debug, PartialEq)]
pub enum RadialProfile<T> {
    /// `ψ(r) = a`.
    Constant { level: T },
    /// `ψ(r) = a·exp(−r/σ)`, `σ > 0`.
    GaussBump { amplitude: T, width: T },
}

impl<T: Real> RadialProfile<T> {
    pub fn constant(level: T) -> Self {
        RadialProfile::Constant { level }
    }

    pub fn gauss_bump(amplitude: T, width: T) -> Result<Self> {
        if width.is_nan() || width <= T::zero() || !width.is_finite() || !amplitude.is_finite() {
            return Err(Error::Config(format!(
                "gauss_bump requires finite amplitude and width > 0, got a = {}, sigma = {}",
                amplitude.to_f64().unwrap_or(f64::NAN),
                width.to_f64().unwrap_or(f64::NAN)
            )));
        }
        Ok(RadialProfile::GaussBump { amplitude, width })
    }

    pub fn is_constant(&self) -> bool {
        matches!(self, RadialProfile::Constant { .. })
    }

    /// `ψ(r)`.
    pub fn value(&self, r: T) -> T {
        match self {
            RadialProfile::Constant { level } => *level,
            RadialProfile::GaussBump { amplitude, width } => *amplitude * (-r / *width).exp(),
        }
    }

    /// `ψ′(r)`.
    pub fn deriv1(&self, r: T) -> T {
        match self {
            RadialProfile::Constant { .. } => T::zero(),
            RadialProfile::GaussBump { amplitude, width } => {
                -*amplitude / *width * (-r / *width).exp()
            }
        }
    }

    /// `ψ″(r)`.
    pub fn deriv2(&self, r: T) -> T {
        match self {
            RadialProfile::Constant { .. } => T::zero(),
            RadialProfile::GaussBump { amplitude, width } => {
                *amplitude / (*width * *width) * (-r / *width).exp()
            }
        }
    }

    /// Same profile with the amplitude multiplied by `factor`.
    pub fn scaled(&self, factor: T) -> Self {
        match self {
            RadialProfile::Constant { level } => RadialProfile::Constant {
                level: *level * factor,
            },
            RadialProfile::GaussBump { amplitude, width } => RadialProfile::GaussBump {
                amplitude: *amplitude * factor,
                width: *width,
            },
        }
    }

    /// Exact `E[ψ(‖X‖²)]` for a centered Gaussian whose covariance has the
    /// given spectrum: the squared norm is `Σ λ_i z_i²`, and the bump
    /// factorizes into `a·Π(1 + 2λ_i/σ)^{−1/2}`.
    pub fn expected_under_spectrum(&self, eigenvalues: &[T]) -> T {
        match self {
            RadialProfile::Constant { level } => *level,
            RadialProfile::GaussBump { amplitude, width } => {
                let two = real::<T>(2.0);
                let half = real::<T>(0.5);
                let log_sum = ksum(eigenvalues.iter().map(|l| (two * *l / *width).ln_1p()));
                *amplitude * (-half * log_sum).exp()
            }
        }
    }

    /// `sup_x (‖Df(x)‖_op + ‖D²f(x)‖_p)` at truncation dimension `dim`,
    /// reduced to a one-dimensional maximization over `r = ‖x−y‖²` and
    /// solved by a bracketing grid plus golden-section refinement.
    pub fn constraint_sup(&self, p: T, dim: usize) -> Result<T> {
        validate_exponent(p)?;
        if dim == 0 {
            return Err(Error::TooFewDims { min: 1, got: 0 });
        }
        match self {
            RadialProfile::Constant { .. } => Ok(T::zero()),
            RadialProfile::GaussBump { width, .. } => {
                let objective = |r: T| self.constraint_at_radius(r, p, dim);
                let span = *width
                    * real::<T>(60.0 + (dim as f64 + 1.0).ln());
                let (_, sup) = maximize_1d(&objective, T::zero(), span);
                Ok(sup)
            }
        }
    }

    /// Pointwise derivative budget `‖Df‖_op + ‖D²f‖_p` at radius `r`.
    pub fn constraint_at_radius(&self, r: T, p: T, dim: usize) -> T {
        let two = real::<T>(2.0);
        let four = real::<T>(4.0);
        let grad = two * self.deriv1(r).abs() * r.sqrt();
        let c = two * self.deriv1(r);
        let shifted = c + four * self.deriv2(r) * r;
        grad + two_point_schatten(c, shifted, dim, p).unwrap_or(T::zero())
    }
}

/// Radial function `f(x) = ψ(‖x − center‖²)`.
#[derive(Clone, Debug)]
pub struct RadialFunction<T> {
    center: Vec<T>,
    profile: RadialProfile<T>,
}

impl<T: Real> RadialFunction<T> {
    pub fn new(center: Vec<T>, profile: RadialProfile<T>) -> Self {
        Self { center, profile }
    }

    /// Bump centered at the origin of the `dim`-dimensional truncation.
    pub fn at_origin(dim: usize, profile: RadialProfile<T>) -> Self {
        Self::new(vec![T::zero(); dim], profile)
    }

    pub fn dim(&self) -> usize {
        self.center.len()
    }

    pub fn center(&self) -> &[T] {
        &self.center
    }

    pub fn profile(&self) -> &RadialProfile<T> {
        &self.profile
    }

    fn check_dim(&self, x: &[T]) -> Result<()> {
        if x.len() != self.center.len() {
            return Err(Error::DimensionMismatch {
                expected: self.center.len(),
                got: x.len(),
            });
        }
        Ok(())
    }

    /// `‖x − center‖²`.
    pub fn radius_sq(&self, x: &[T]) -> T {
        ksum(
            x.iter()
                .zip(&self.center)
                .map(|(a, b)| (*a - *b) * (*a - *b)),
        )
    }

    pub fn eval(&self, x: &[T]) -> Result<T> {
        self.check_dim(x)?;
        Ok(self.profile.value(self.radius_sq(x)))
    }

    /// `∇f(x) = 2ψ′(r)(x − y)`; its Euclidean norm is `‖Df(x)‖_op`.
    pub fn gradient(&self, x: &[T]) -> Result<Vec<T>> {
        self.check_dim(x)?;
        let r = self.radius_sq(x);
        let factor = real::<T>(2.0) * self.profile.deriv1(r);
        Ok(x.iter()
            .zip(&self.center)
            .map(|(a, b)| factor * (*a - *b))
            .collect())
    }

    /// Hessian operator `2ψ′(r)·I + 4ψ″(r)·(x−y)⊗(x−y)`.
    pub fn hessian_operator(&self, x: &[T]) -> Result<SymOperator<T>> {
        self.check_dim(x)?;
        let u: Vec<T> = x
            .iter()
            .zip(&self.center)
            .map(|(a, b)| *a - *b)
            .collect();
        let r = norm_sq(&u);
        let c = real::<T>(2.0) * self.profile.deriv1(r);
        let beta = real::<T>(4.0) * self.profile.deriv2(r);
        SymOperator::scalar_plus_rank_one(c, beta, u)
    }

    /// Schatten p-norm of the Hessian from its two-point spectrum.
    pub fn hessian_schatten_norm(&self, x: &[T], p: T) -> Result<T> {
        self.check_dim(x)?;
        validate_exponent(p)?;
        let r = self.radius_sq(x);
        let c = real::<T>(2.0) * self.profile.deriv1(r);
        let shifted = c + real::<T>(4.0) * self.profile.deriv2(r) * r;
        two_point_schatten(c, shifted, self.dim(), p)
    }

    /// Analytic `sup_x (‖Df(x)‖_op + ‖D²f(x)‖_p)` for this function.
    pub fn constraint_sup(&self, p: T) -> Result<T> {
        self.profile.constraint_sup(p, self.dim())
    }

    /// Rescale so the derivative budget is exactly 1.
    pub fn normalized(&self, p: T) -> Result<Self> {
        let sup = self.constraint_sup(p)?;
        if sup == T::zero() {
            return Err(Error::ConstraintViolated { sup: 0.0 });
        }
        Ok(Self {
            center: self.center.clone(),
            profile: self.profile.scaled(T::one() / sup),
        })
    }
}

fn validate_exponent<T: Real>(p: T) -> Result<()> {
    if p.is_nan() || p < T::one() {
        return Err(Error::InvalidExponent {
            p: p.to_f64().unwrap_or(f64::NAN),
        });
    }
    Ok(())
}

/// Schatten p-norm of the spectrum {`base` with multiplicity `d − 1`,
/// `shifted`}. Scaled against overflow for large exponents.
pub fn two_point_schatten<T: Real>(base: T, shifted: T, d: usize, p: T) -> Result<T> {
    validate_exponent(p)?;
    let a = base.abs();
    let b = shifted.abs();
    if d == 1 {
        return Ok(b);
    }
    if p.is_infinite() {
        return Ok(a.max(b));
    }
    let m = a.max(b);
    if m == T::zero() {
        return Ok(T::zero());
    }
    let count = T::from_usize(d - 1).unwrap();
    let sum = count * (a / m).powf(p) + (b / m).powf(p);
    Ok(m * sum.powf(T::one() / p))
}

/// Hessian Schatten norms along a sweep of truncation dimensions.
///
/// `offset` is the evaluation displacement `x − y`; it embeds into each
/// dimension by zero padding, so the radius `r = ‖offset‖²` is constant
/// along the sweep and only the spectral multiplicity grows.
pub fn schatten_growth_profile<T: Real>(
    f: &RadialFunction<T>,
    offset: &[T],
    p: T,
    dims: &[usize],
) -> Result<Vec<(usize, T)>> {
    validate_exponent(p)?;
    if dims.len() < 3 {
        return Err(Error::TooFewDims {
            min: 3,
            got: dims.len(),
        });
    }
    for w in dims.windows(2) {
        if w[1] <= w[0] {
            return Err(Error::DimsNotIncreasing);
        }
    }
    let needed = f.dim().max(offset.len());
    if dims[0] < needed {
        return Err(Error::EmbeddingTooSmall {
            n: needed,
            d: dims[0],
        });
    }
    let r = norm_sq(offset);
    let c = real::<T>(2.0) * f.profile().deriv1(r);
    let shifted = c + real::<T>(4.0) * f.profile().deriv2(r) * r;
    dims.iter()
        .map(|&d| Ok((d, two_point_schatten(c, shifted, d, p)?)))
        .collect()
}

/// Least-squares slope of `ln norm` against `ln d` over the last half of
/// the sweep. A tail of exact zeros (constant profile) fits slope 0.
pub fn fit_tail_slope<T: Real>(points: &[(usize, T)]) -> T {
    let tail = &points[points.len() / 2..];
    if tail.iter().all(|(_, v)| *v == T::zero()) {
        return T::zero();
    }
    let n = T::from_usize(tail.len()).unwrap();
    let xs: Vec<T> = tail
        .iter()
        .map(|(d, _)| T::from_usize(*d).unwrap().ln())
        .collect();
    let ys: Vec<T> = tail.iter().map(|(_, v)| v.ln()).collect();
    let xbar = ksum(xs.iter().copied()) / n;
    let ybar = ksum(ys.iter().copied()) / n;
    let cov = ksum(xs.iter().zip(&ys).map(|(x, y)| (*x - xbar) * (*y - ybar)));
    let var = ksum(xs.iter().map(|x| (*x - xbar) * (*x - xbar)));
    cov / var
}

/// Maximize a scalar function on `[lo, hi]`: coarse grid to bracket the
/// global peak, then golden-section refinement of the bracket down to an
/// interval of 1e-10.
fn maximize_1d<T: Real>(f: &impl Fn(T) -> T, lo: T, hi: T) -> (T, T) {
    const GRID: usize = 2048;
    let step = (hi - lo) / T::from_usize(GRID).unwrap();
    let mut best_idx = 0usize;
    let mut best_val = T::neg_infinity();
    let mut best_arg = lo;
    for i in 0..=GRID {
        let r = lo + step * T::from_usize(i).unwrap();
        let v = f(r);
        if v > best_val {
            best_val = v;
            best_idx = i;
            best_arg = r;
        }
    }
    let mut a = lo + step * T::from_usize(best_idx.saturating_sub(1)).unwrap();
    let mut b = lo + step * T::from_usize((best_idx + 1).min(GRID)).unwrap();

    let inv_phi = real::<T>(0.618_033_988_749_894_9);
    let tol = real::<T>(1e-10).max(T::epsilon() * (hi - lo));
    let mut x1 = b - inv_phi * (b - a);
    let mut x2 = a + inv_phi * (b - a);
    let mut f1 = f(x1);
    let mut f2 = f(x2);
    for _ in 0..200 {
        if (b - a) <= tol {
            break;
        }
        if f1 >= f2 {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - inv_phi * (b - a);
            f1 = f(x1);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + inv_phi * (b - a);
            f2 = f(x2);
        }
        let (cand_arg, cand_val) = if f1 >= f2 { (x1, f1) } else { (x2, f2) };
        if cand_val > best_val {
            best_val = cand_val;
            best_arg = cand_arg;
        }
    }
    (best_arg, best_val)
}

// JSON wire format:
//   {"center": […], "profile": {"family": "constant", "a": …}
//                 | {"family": "gauss_bump", "a": …, "sigma": …}}

#[derive(Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case")]
enum ProfileDto {
    Constant { a: f64 },
    GaussBump { a: f64, sigma: f64 },
}

impl<T: Real> Serialize for RadialProfile<T> {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let dto = match self {
            RadialProfile::Constant { level } => ProfileDto::Constant {
                a: level.to_f64().unwrap(),
            },
            RadialProfile::GaussBump { amplitude, width } => ProfileDto::GaussBump {
                a: amplitude.to_f64().unwrap(),
                sigma: width.to_f64().unwrap(),
            },
        };
        dto.serialize(serializer)
    }
}

impl<'de, T: Real> Deserialize<'de> for RadialProfile<T> {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as DeError;
        match ProfileDto::deserialize(deserializer)? {
            ProfileDto::Constant { a } => Ok(RadialProfile::constant(real(a))),
            ProfileDto::GaussBump { a, sigma } => {
                RadialProfile::gauss_bump(real(a), real(sigma)).map_err(D::Error::custom)
            }
        }
    }
}

impl<T: Real> Serialize for RadialFunction<T> {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut s = serializer.serialize_struct("RadialFunction", 2)?;
        let center: Vec<f64> = self.center.iter().map(|v| v.to_f64().unwrap()).collect();
        s.serialize_field("center", &center)?;
        s.serialize_field("profile", &self.profile)?;
        s.end()
    }
}

impl<'de, T: Real> Deserialize<'de> for RadialFunction<T> {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        struct Dto<T: Real> {
            center: Vec<f64>,
            #[serde(deserialize_with = "RadialProfile::deserialize", bound = "")]
            profile: RadialProfile<T>,
        }
        let dto = Dto::<T>::deserialize(deserializer)?;
        Ok(RadialFunction::new(
            dto.center.iter().map(|v| real(*v)).collect(),
            dto.profile,
        ))
    }
}
