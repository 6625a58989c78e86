//! Single-precision instantiation smoke tests: the numeric core works at
//! f32 with the trait-level tolerances.

use schatten_gauss::{
    counterexample_measure, schatten_bound, GaussianMeasure32, RadialFunction, RadialProfile,
    SymOperator32,
};

#[test]
fn f32_operator_roundtrip() {
    let op = SymOperator32::diagonal(vec![0.25f32; 4]).unwrap();
    let norm = op.schatten_norm(2.0f32).unwrap();
    assert!((norm - 0.5).abs() < 1e-6);

    let root = op.sqrt().unwrap();
    let hs = root.schatten_norm(2.0f32).unwrap();
    assert!((hs - 1.0).abs() < 1e-5);
}

#[test]
fn f32_dense_spectral_path() {
    let op = SymOperator32::dense_from_rows(&[vec![2.0f32, 1.0], vec![1.0, 2.0]]).unwrap();
    let eigs = op.eigenvalues();
    assert!((eigs[0] - 3.0).abs() < 1e-5);
    assert!((eigs[1] - 1.0).abs() < 1e-5);
}

#[test]
fn f32_measure_and_bound() {
    let g = counterexample_measure::<f32>(4, 4).unwrap();
    let z = GaussianMeasure32::point_mass(4);
    let bound = schatten_bound(&g, &z, 2.0f32).unwrap();
    assert!((bound - 0.25).abs() < 1e-6);

    let batch = g.sample(16, 5).unwrap();
    assert_eq!(batch.count(), 16);

    let f = RadialFunction::<f32>::at_origin(4, RadialProfile::gauss_bump(1.0, 1.0).unwrap());
    let h = f.hessian_operator(&[0.0f32; 4]).unwrap();
    assert!((h.eigenvalues()[0] + 2.0).abs() < 1e-6);
}
