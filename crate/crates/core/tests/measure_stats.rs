//! Statistical checks on the samplers and the moment functionals; every
//! tolerance is a multiple of the estimator's own standard error, with
//! fixed seeds so the suite is deterministic.

use schatten_gauss::{
    counterexample_measure, mc_expectation, GaussianMeasure, RadialFunction, RadialProfile,
    SymOperator,
};
use testkit::randmat;

#[test]
fn line_sample_variance_within_three_sigma() {
    let g = GaussianMeasure::<f64>::standard(1);
    let m = 100_000usize;
    let batch = g.sample(m, 2024).unwrap();
    let mean: f64 = batch.rows().map(|r| r[0]).sum::<f64>() / m as f64;
    let var: f64 = batch
        .rows()
        .map(|r| (r[0] - mean) * (r[0] - mean))
        .sum::<f64>()
        / (m as f64 - 1.0);
    // Var of the variance estimator for normal data is 2σ⁴/(m−1).
    let tol = 3.0 * (2.0 / m as f64).sqrt();
    assert!((var - 1.0).abs() <= tol, "var = {var}, tol = {tol}");
}

#[test]
fn projection_family_empirical_covariance_diagonal() {
    let n = 50usize;
    let g = counterexample_measure::<f64>(n, n).unwrap();
    let m = 10_000usize;
    let batch = g.sample(m, 7).unwrap();
    // Second moments of each coordinate: target 1/50 = 0.02, standard
    // error of the chi-square mean is σ²·√(2/m).
    let target = 0.02f64;
    let tol = 5.0 * target * (2.0 / m as f64).sqrt();
    for j in 0..n {
        let second: f64 = batch.rows().map(|r| r[j] * r[j]).sum::<f64>() / m as f64;
        assert!(
            (second - target).abs() <= tol,
            "coordinate {j}: {second} vs {target} (tol {tol})"
        );
    }
}

#[test]
fn mc_estimates_sit_inside_their_own_confidence_intervals() {
    // Radial functionals with exact product expectations; the 1e5-sample
    // estimate must fall within 4 of its own standard errors.
    let mut rng = randmat::rng(99);
    for (case, seed) in [(0usize, 101u64), (1, 102), (2, 103), (3, 104)] {
        let d = 1 + case * 2;
        let entries = randmat::random_diagonal(&mut rng, d, 2.0);
        let g = GaussianMeasure::centered(SymOperator::diagonal(entries.clone()).unwrap()).unwrap();
        let width = 0.5 + case as f64;
        let profile = RadialProfile::gauss_bump(1.0, width).unwrap();
        let exact = profile.expected_under_spectrum(&g.covariance().eigenvalues());
        let est = mc_expectation(&g, 100_000, seed, |x| {
            let r: f64 = x.iter().map(|v| v * v).sum();
            (-r / width).exp()
        })
        .unwrap();
        assert!(
            (est.mean - exact).abs() <= 4.0 * est.stderr,
            "case {case}: {} vs {exact} (stderr {})",
            est.mean,
            est.stderr
        );
    }
}

#[test]
fn exp_neg_sqnorm_montecarlo_crosscheck() {
    let g = counterexample_measure::<f64>(100, 100).unwrap();
    let exact = g.exp_neg_sqnorm().unwrap();
    let est = mc_expectation(&g, 100_000, 31, |x| {
        let r: f64 = x.iter().map(|v| v * v).sum();
        (-r).exp()
    })
    .unwrap();
    assert!((est.mean - exact).abs() <= 3.0 * est.stderr);
}

#[test]
fn exp_neg_sqnorm_agrees_with_quadrature_on_the_line() {
    // Composite Simpson for E[exp(−x²)] under N(0, 1), independent of the
    // closed-form path.
    let g = GaussianMeasure::<f64>::standard(1);
    let exact = g.exp_neg_sqnorm().unwrap();

    let halfwidth = 10.0f64;
    let intervals = 20_000usize; // even
    let h = 2.0 * halfwidth / intervals as f64;
    let density = |x: f64| (-0.5 * x * x).exp() / (2.0 * std::f64::consts::PI).sqrt();
    let f = |x: f64| (-x * x).exp() * density(x);
    let mut acc = f(-halfwidth) + f(halfwidth);
    for k in 1..intervals {
        let x = -halfwidth + h * k as f64;
        acc += f(x) * if k % 2 == 1 { 4.0 } else { 2.0 };
    }
    let quadrature = acc * h / 3.0;

    assert!((exact - quadrature).abs() < 1e-12);
    assert!((exact - 3f64.powf(-0.5)).abs() < 1e-14);
}

#[test]
fn exp_neg_sqnorm_strictly_decreases_under_psd_increments() {
    let mut rng = randmat::rng(55);
    for _ in 0..20 {
        let d = 2 + (randmat::random_vector(&mut rng, 1, 3.0)[0].abs() as usize % 5);
        let base_rows = randmat::random_psd(&mut rng, d);
        let bump_rows = randmat::random_psd(&mut rng, d);
        let base = SymOperator::dense_from_rows(&base_rows).unwrap();
        let bumped = base
            .add(&SymOperator::dense_from_rows(&bump_rows).unwrap())
            .unwrap();
        let g0 = GaussianMeasure::centered(base).unwrap();
        let g1 = GaussianMeasure::centered(bumped).unwrap();
        assert!(g1.exp_neg_sqnorm().unwrap() < g0.exp_neg_sqnorm().unwrap());
    }
}

#[test]
fn second_moment_links_sqrt_hs_norm() {
    let mut rng = randmat::rng(61);
    for _ in 0..15 {
        let d = 1 + (randmat::random_vector(&mut rng, 1, 3.0)[0].abs() as usize % 6);
        let rows = randmat::random_psd(&mut rng, d);
        let cov = SymOperator::dense_from_rows(&rows).unwrap();
        let g = GaussianMeasure::centered(cov.clone()).unwrap();
        let sqrt_hs: f64 = cov.sqrt().unwrap().schatten_norm(2.0).unwrap();
        assert!(
            (g.second_moment() - sqrt_hs * sqrt_hs).abs()
                <= 1e-10 * g.second_moment().max(1.0)
        );
    }

    // Noncentered variant picks up the squared mean norm.
    let g = GaussianMeasure::<f64>::new(vec![3.0, 4.0], SymOperator::identity(2)).unwrap();
    assert!((g.second_moment() - 27.0).abs() < 1e-12);
}

#[test]
fn eval_of_radial_function_through_sampler_is_deterministic() {
    let g = counterexample_measure::<f64>(16, 16).unwrap();
    let f = RadialFunction::at_origin(16, RadialProfile::gauss_bump(1.0, 1.0).unwrap());
    let run = || {
        mc_expectation(&g, 20_000, 3, |x| f.profile().value(f.radius_sq(x)))
            .unwrap()
            .mean
    };
    let a = run();
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(1)
        .build()
        .unwrap();
    let b = pool.install(run);
    assert_eq!(a.to_bits(), b.to_bits());
}
