//! Schatten-norm distances and weak-convergence diagnostics for Gaussian
//! measures on finite-dimensional truncations of a separable Hilbert
//! space.
//!
//! The library is organized around five pieces:
//!
//! * [`operator`] — structured self-adjoint operators (dense, diagonal,
//!   scalar-plus-rank-one) with spectral decompositions, Schatten norms,
//!   PSD square roots, and Hilbert-Schmidt inner products;
//! * [`form`] — bilinear forms, the form/operator/tensor correspondences,
//!   and lower-bound estimation of the form norm;
//! * [`measure`] — Gaussian measures with reproducible counter-seeded
//!   samplers, moment functionals, and the shrinking-projection
//!   covariance family `diag(1/n, …, 1/n, 0, …)`;
//! * [`radial`] — smooth radial test functions `ψ(‖x − y‖²)` with
//!   closed-form derivatives, Hessian Schatten norms, and the
//!   dimension-growth diagnostic (`d^{1/p}` for p < ∞, flat at p = ∞);
//! * [`distance`] — the Schatten-Hölder upper bound `½‖S₁ − S₂‖_q`,
//!   certified lower bounds over normalized radial witnesses, Gaussian
//!   convergence diagnostics, and the interpolation-identity check.
//!
//! [`experiment`] assembles these into self-checking sweeps behind the
//! CLI. The headline phenomenon the sweeps exhibit: along the projection
//! family the upper bound on ρ_p vanishes for every p < ∞ while the
//! distributions stay far from the point mass — the bounded witness
//! `E[exp(−‖X_n‖²)]` tends to `e⁻¹`, not 1, and the √-covariance HS gap
//! is pinned at 1. Only the p = ∞ constraint, being dimension-free,
//! keeps a test function whose gap survives the sweep.
//!
//! Core types are generic over the scalar via [`scalar::Real`]; `f64`
//! aliases (and `f32` ones where useful) live at the crate root.

pub mod distance;
mod eigen;
pub mod error;
pub mod experiment;
pub mod form;
pub mod matrix;
pub mod measure;
pub mod operator;
pub mod quadrature;
pub mod radial;
pub mod rng;
pub mod scalar;

pub use distance::{
    conjugate, convergence_diagnostics, distance_report, interpolation_check, rho_infty_witness,
    rho_lower_bound, schatten_bound, ConjugatePair, ConvergenceDiagnostics, DistanceReport,
    LowerBoundCertificate, WitnessEstimate,
};
pub use error::{Error, Result};
pub use form::{estimate_form_norm, operator_to_tensor, BilinearForm, TensorVector};
pub use matrix::DenseMatrix;
pub use measure::{
    counterexample_measure, mc_expectation, mc_pair, GaussianMeasure, McEstimate, SampleBatch,
};
pub use operator::{schatten_from_spectrum, OperatorRepr, SpectralDecomposition, SymOperator};
pub use radial::{
    fit_tail_slope, schatten_growth_profile, two_point_schatten, RadialFunction, RadialProfile,
};
pub use scalar::Real;

// Concrete double-precision aliases; the CLI and the experiment layer
// work at f64.
pub type SymOperator64 = SymOperator<f64>;
pub type SpectralDecomposition64 = SpectralDecomposition<f64>;
pub type BilinearForm64 = BilinearForm<f64>;
pub type TensorVector64 = TensorVector<f64>;
pub type GaussianMeasure64 = GaussianMeasure<f64>;
pub type SampleBatch64 = SampleBatch<f64>;
pub type RadialProfile64 = RadialProfile<f64>;
pub type RadialFunction64 = RadialFunction<f64>;
pub type ConjugatePair64 = ConjugatePair<f64>;
pub type DistanceReport64 = DistanceReport<f64>;

// Single-precision instantiations of the numeric core.
pub type SymOperator32 = SymOperator<f32>;
pub type GaussianMeasure32 = GaussianMeasure<f32>;
pub type RadialFunction32 = RadialFunction<f32>;
