use super::*;

fn spec(space: Space, p: f64, budget: usize, restarts: usize, seed: u64) -> SearchSpec {
    SearchSpec {
        budget,
        restarts,
        seed,
        ..SearchSpec::new(space, Objective::Roundness, p)
    }
}

fn check_trace(r: &SearchResult) {
    for w in r.trace.windows(2) {
        assert!(w[1].1 >= w[0].1 && w[1].0 > w[0].0);
    }
    let last = r.trace.last().unwrap().1;
    assert!((last - r.best_ratio).abs() <= 1e-10);
}

#[test]
fn reproducible_bitwise() {
    let s = spec(Space::lq(3.0).unwrap(), 1.5, 300, 3, 42);
    let a = run_search(&s).unwrap();
    let b = run_search(&s).unwrap();
    assert_eq!(a.best_ratio.to_bits(), b.best_ratio.to_bits());
    assert_eq!(a.trace, b.trace);
    assert_eq!(a.best_config, b.best_config);
    let c = run_search(&SearchSpec { seed: 43, ..s }).unwrap();
    assert_ne!(a.trace, c.trace);
}

#[test]
fn real_line_p1_stays_below_two() {
    let r = run_search(&spec(Space::RealLine, 1.0, 4000, 2, 7)).unwrap();
    assert!(r.best_ratio <= 2.0 + 1e-9, "{}", r.best_ratio);
    check_trace(&r);
}

#[test]
fn hilbert_warm_start_not_degraded() {
    let s = SearchSpec {
        atoms_x: (1, 6),
        atoms_y: (1, 6),
        ..spec(Space::lq(2.0).unwrap(), 2.0, 400, 2, 1)
    };
    let r = run_search(&s).unwrap();
    let warm = r.warm_start_ratio.unwrap();
    assert!((warm - (1.0 - 1.0 / 6.0) * 2.0).abs() < 1e-12);
    assert!(r.best_ratio >= warm);
    assert!(r.best_ratio <= 2.0 + 1e-7);
    check_trace(&r);
}

#[test]
fn parallelogram_warm_start() {
    let r = run_search(&spec(Space::parallelogram_s1(16).unwrap(), 1.0, 100, 1, 3)).unwrap();
    assert!(r.best_ratio >= 2.65 && r.best_ratio <= 4.0, "{}", r.best_ratio);
}

#[test]
fn other_objectives_and_spaces() {
    let s = SearchSpec {
        budget: 5,
        restarts: 1,
        atoms_x: (1, 2),
        atoms_y: (1, 2),
        ..SearchSpec::new(Space::lq(1.5).unwrap(), Objective::Barycenter, 1.5)
    };
    let r = run_search(&s).unwrap();
    assert_eq!(r.best_ratio, certify_ratio(&r.best_config, Objective::Barycenter).unwrap());
    for space in [Space::bipartite(4).unwrap(), Space::schatten(1.0).unwrap(), Space::snowflake(Space::RealLine, 0.5).unwrap()] {
        let r = run_search(&spec(space, 1.0, 200, 2, 5)).unwrap();
        assert!(r.best_ratio.is_finite());
        check_trace(&r);
    }
    let m = SearchSpec {
        budget: 200,
        ..SearchSpec::new(Space::lq_zero_sum(2.0).unwrap(), Objective::Mixture, 2.0)
    };
    check_trace(&run_search(&m).unwrap());
}

#[test]
fn certify_examples() {
    let d = FiniteDist::uniform(Space::RealLine, vec![Point::Real(0.0), Point::Real(1.0)]).unwrap();
    let c = Config::new(d.clone(), d, 1.0).unwrap();
    assert!((certify_ratio(&c, Objective::Roundness).unwrap() - 2.0).abs() < 1e-15);
}

#[test]
fn spec_validation() {
    let s = spec(Space::RealLine, 1.0, 0, 1, 0);
    assert!(run_search(&s).is_err());
    assert!(run_search(&SearchSpec { atoms_x: (3, 2), ..spec(Space::RealLine, 1.0, 10, 1, 0) }).is_err());
    assert!(run_search(&SearchSpec::new(Space::bipartite(3).unwrap(), Objective::Barycenter, 1.0)).is_err());
    assert!("median".parse::<Objective>().is_err());
}
