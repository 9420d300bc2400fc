use super::*;

fn close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol
}

#[test]
fn alpha_examples() {
    for y in [-3.0, 0.0, 0.5, 7.0] {
        assert_eq!(alpha_fn(0.0, y, 3.5), 0.0);
    }
    assert!(close(alpha_fn(1.0, 1.0, 3.0), 0.0, 1e-12));
    assert!(close(alpha_fn(1.0, -2.0, 4.0), 24.0, 1e-12));
}

#[test]
fn beta_ratio_examples() {
    assert!(close(beta_ratio(0.5, 1.5).unwrap(), 2f64.powf(-0.5), 1e-14));
    assert!(beta_ratio(0.01, 2.5).unwrap() < 1.0);
    assert!(beta_ratio(0.3, 4.0).unwrap() > 1.0);
    assert!(beta_ratio(0.0, 3.0).is_err());
    assert!(beta_ratio(0.6, 3.0).is_err());
}

#[test]
fn beta_ratio_matches_enumeration() {
    for beta in [0.05, 0.2, 0.37, 0.5] {
        for q in [1.5, 2.5, 3.0, 4.0] {
            let x = ScalarDist::beta_example(beta).unwrap();
            let c = check_subadditivity(&x, &x, q).unwrap();
            assert!(close(c.lhs / c.rhs, beta_ratio(beta, q).unwrap(), 1e-12));
        }
    }
}

#[test]
fn subadditivity_examples() {
    let r = ScalarDist::uniform(vec![-1.0, 1.0]).unwrap();
    let c = check_subadditivity(&r, &r, 3.0).unwrap();
    assert!(close(c.lhs, 4.0, 1e-12) && close(c.rhs, 2.0, 1e-12) && c.holds);
    let z = ScalarDist::point_mass(0.0).unwrap();
    let y = ScalarDist::new(vec![-1.0, 3.0], vec![0.75, 0.25]).unwrap();
    let c = check_subadditivity(&z, &y, 3.5).unwrap();
    assert!(close(c.lhs, c.rhs, 1e-12));
    let b = ScalarDist::beta_example(0.05).unwrap();
    assert!(!check_subadditivity(&b, &b, 2.5).unwrap().holds);
    let off = ScalarDist::uniform(vec![0.0, 1.0]).unwrap();
    assert!(check_subadditivity(&off, &r, 3.0).is_err());
}

#[test]
fn laplace_examples() {
    let c = laplace_log_identity(&ScalarDist::point_mass(1.0).unwrap()).unwrap();
    assert!(close(c.lhs, 0.0, 1e-15) && close(c.rhs, 0.0, 1e-9));
    let c = laplace_log_identity(&ScalarDist::point_mass(2.0).unwrap()).unwrap();
    assert!(close(c.rhs, LN_2, 1e-8), "{c:?}");
    let c = laplace_log_identity(&ScalarDist::uniform(vec![1.0, 2f64.exp()]).unwrap()).unwrap();
    assert!(close(c.rhs, 1.0, 1e-8), "{c:?}");
    let c = laplace_log_identity(&ScalarDist::new(vec![1e-3, 50.0], vec![0.3, 0.7]).unwrap()).unwrap();
    assert!(c.holds, "{c:?}");
    assert!(laplace_log_identity(&ScalarDist::uniform(vec![1.0, 0.0]).unwrap()).is_err());
}

#[test]
fn smoothing_examples() {
    let x = ScalarDist::uniform(vec![0.0, 1.0]).unwrap();
    let c = gaussian_smoothing_check(&x, &x, 0.7).unwrap();
    assert!(close(c.lhs, c.rhs, 1e-15));
    let y = ScalarDist::point_mass(5.0).unwrap();
    let c = gaussian_smoothing_check(&x, &y, 0.0).unwrap();
    assert!(close(c.lhs, 1.0, 1e-15) && close(c.rhs, 1.0, 1e-15));
    let c = gaussian_smoothing_check(&x, &y, 1.0).unwrap();
    assert!(c.lhs > c.rhs);
}

#[test]
fn cosine_examples() {
    for a in [PI / 2.0, 0.0, PI, 1e-9, PI - 1e-9, 3.0, -2.0, 10.0] {
        let v = cosine_log_moment(a);
        assert!(close(v, -LN_2, 1e-9), "alpha={a}: {v}");
    }
    assert!(close(cosine_log_moment_at(0.3), -LN_2, 1e-9));
}

#[test]
fn cosine_outside_unit_interval() {
    for t in [1.5, -1.5, 1.0 + 1e-6, 4.0] {
        let v = cosine_log_moment_at(t);
        // Midpoint rule; the integrand is smooth for |t| > 1.
        let n = 200_000;
        let h = 2.0 * PI / n as f64;
        let oracle: f64 = (0..n).map(|k| ((h * (k as f64 + 0.5)).cos() - t).abs().ln()).sum::<f64>() * h / (2.0 * PI);
        let tol = if t.abs() - 1.0 < 1e-3 { 1e-4 } else { 1e-9 };
        assert!(close(v, oracle, tol), "t={t}: {v} vs {oracle}");
        assert!(v > -LN_2);
    }
    // |t| > 1 closed form: log((|t| + sqrt(t² − 1))/2).
    let t: f64 = 1.5;
    assert!(close(cosine_log_moment_at(t), ((t + (t * t - 1.0).sqrt()) / 2.0).ln(), 1e-10));
}

#[test]
fn hilbert_examples() {
    let c = Complex64::new(2.0, 1.0);
    let f = KernelMatrix::new(vec![0.3, 0.7], vec![1.0], vec![c, c]).unwrap();
    let r = verify_scalar_hilbert(&f, HilbertVariant::Roundness).unwrap();
    assert!(close(r.lhs, 10.0, 1e-12) && close(r.rhs, 0.0, 1e-15));
    for row in suites::equality_cases().unwrap() {
        assert!(row.holds, "{row:?}");
    }
    assert!(verify_scalar_hilbert(&f, HilbertVariant::Antisym).is_err());
    assert!(KernelMatrix::new(vec![1.0], vec![1.0], vec![c, c]).is_err());
}

#[test]
fn every_suite_passes_small() {
    let opts = SuiteOptions {
        grid: Some(60),
        seeds: Some(40),
        tolerance: None,
        seed: 7,
    };
    for s in suites() {
        let report = s.run(&opts).unwrap();
        let bad: Vec<_> = report.rows.iter().filter(|r| !r.holds).collect();
        assert!(report.passed(), "{}: {bad:?}", s.name());
        assert!(report.cases > 0);
    }
    assert_eq!(suite("cosine").unwrap().run(&opts).unwrap().rows.len(), 60);
    assert!(suite("zeta").is_err());
}

#[test]
fn suites_are_deterministic() {
    let opts = SuiteOptions {
        grid: None,
        seeds: Some(25),
        tolerance: None,
        seed: 99,
    };
    let a = suite("hilbert").unwrap().run(&opts).unwrap();
    let b = suite("hilbert").unwrap().run(&opts).unwrap();
    assert_eq!(a, b);
}
