//! Scalar abstraction for the numeric core.
//!
//! Everything in this crate is generic over a floating-point scalar so the
//! same code instantiates at `f32` and `f64`. All quantitative contracts
//! (reconstruction error, inequality slack) are expressed through the
//! per-type tolerance constants below; the `f64` values are the ones the
//! test suites pin down, the `f32` values are scaled for its ~7 decimal
//! digits and exist so the single-precision instantiation stays usable.

use std::fmt::{Debug, Display, LowerExp};
use std::iter::Sum;

use num_traits::{Float, FromPrimitive, ToPrimitive};

/// Floating-point scalar the library is generic over.
pub trait Real:
    Float
    + FromPrimitive
    + ToPrimitive
    + Sum<Self>
    + Debug
    + Display
    + LowerExp
    + Send
    + Sync
    + 'static
{
    /// Slack for entrywise identities that hold exactly in real arithmetic
    /// (symmetry of stored matrices, serialization round trips).
    const ENTRYWISE_TOL: Self;

    /// Slack for spectral reconstructions (V Λ Vᵀ vs. the input, squared
    /// square roots, orthonormality defects).
    const SPECTRAL_TOL: Self;

    /// Slack for derived inequalities (Hölder, triangle, norm chains) where
    /// both sides are themselves computed quantities.
    const INEQUALITY_TOL: Self;

    /// Relative floor below which an eigenvalue of a PSD candidate is
    /// treated as rounding noise and clamped to zero.
    const PSD_CLAMP: Self;
}

impl Real for f64 {
    const ENTRYWISE_TOL: f64 = 1e-12;
    const SPECTRAL_TOL: f64 = 1e-10;
    const INEQUALITY_TOL: f64 = 1e-9;
    const PSD_CLAMP: f64 = 1e-10;
}

impl Real for f32 {
    const ENTRYWISE_TOL: f32 = 1e-5;
    const SPECTRAL_TOL: f32 = 1e-4;
    const INEQUALITY_TOL: f32 = 1e-3;
    const PSD_CLAMP: f32 = 1e-4;
}

/// Lift an `f64` literal into the working scalar type.
#[inline]
pub fn real<T: Real>(x: f64) -> T {
    T::from_f64(x).expect("literal representable in scalar type")
}

/// Compensated (Kahan) summation.
///
/// The Schatten sums and Hilbert-Schmidt inner products feed 1e-12-level
/// assertions at dimensions up to 10^4, where a naive left fold can lose
/// exactly the digits under test.
#[derive(Clone, Copy, Debug)]
pub struct KahanSum<T> {
    sum: T,
    carry: T,
}

impl<T: Real> Default for KahanSum<T> {
    fn default() -> Self {
        Self {
            sum: T::zero(),
            carry: T::zero(),
        }
    }
}

impl<T: Real> KahanSum<T> {
    pub fn new() -> Self {
        Self::default()
    }

    #[inline]
    pub fn add(&mut self, value: T) {
        let y = value - self.carry;
        let t = self.sum + y;
        self.carry = (t - self.sum) - y;
        self.sum = t;
    }

    #[inline]
    pub fn value(&self) -> T {
        self.sum
    }
}

/// Compensated sum of an iterator.
pub fn ksum<T: Real, I: IntoIterator<Item = T>>(values: I) -> T {
    let mut acc = KahanSum::new();
    for v in values {
        acc.add(v);
    }
    acc.value()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn kahan_beats_naive_on_many_small_terms() {
        let n = 10_000usize;
        let term = 1.0f64 / n as f64;
        let compensated = ksum((0..n).map(|_| term));
        assert!((compensated - 1.0).abs() < 1e-15);
    }

    #[test]
    fn real_lifts_literals() {
        let x: f32 = real(0.5);
        assert_eq!(x, 0.5f32);
        let y: f64 = real(0.25);
        assert_eq!(y, 0.25f64);
    }
}
