use super::*;
use crate::constants::{c_exponent, PQ};
use crate::distributions::{cross_moment, moment_about};
use crate::moduli::{barycenter_objective, roundness_ratio};

fn close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol * b.abs().max(1.0)
}

#[test]
fn fn_atoms_are_integer_and_zero_sum() {
    for n in 2..9 {
        for j in 0..n {
            for first in [true, false] {
                let v = fn_atom(n, j, first);
                assert_eq!(v.iter().sum::<i64>(), 0);
                assert_eq!(v.len(), 2 * n);
            }
        }
    }
    assert_eq!(fn_atom(3, 0, true), vec![7, -5, -5, 1, 1, 1]);
    assert_eq!(fn_atom(3, 2, false), vec![1, 1, 1, -5, -5, 7]);
}

#[test]
fn fn_inf_matches_closed_form() {
    for n in [2, 3, 5] {
        for p in [1.0, 2.0, 3.5] {
            let v = verify(&make_fn(n, f64::INFINITY, p).unwrap()).unwrap();
            assert!(v.passed, "{}", v.summary());
        }
    }
}

#[test]
fn fn_finite_q_value_at_three() {
    let nc = make_fn(3, 3.0, 3.0).unwrap();
    assert!(close(nc.predicted, 2.0 * 596.0 / 1296.0, 1e-14));
    let v = verify(&nc).unwrap();
    assert!(v.passed, "{}", v.summary());
    assert!(close(v.computed, nc.predicted, 1e-6));
}

#[test]
fn fn_origin_beats_line_shifts() {
    // Objective along z = u·(atom difference) for a grid of u.
    let nc = make_fn(4, 2.5, 2.0).unwrap();
    let c = &nc.config;
    let zero = c.x().atoms()[0].zero_like().unwrap();
    let at_zero = barycenter_objective(c, &zero).unwrap();
    let cross = cross_moment(c.x(), c.y(), c.p()).unwrap();
    assert!(close(at_zero / cross, nc.predicted, 1e-12));
    for (a, b) in [(0, 1), (0, 0), (2, 3)] {
        let dir = c.x().atoms()[a].sub(&c.y().atoms()[b]).unwrap();
        for k in -20..=20 {
            let u = k as f64 / 40.0;
            let z = zero.linear_combination(0.0, &dir, u).unwrap();
            let val = moment_about(c.x(), &z, 2.0).unwrap() + moment_about(c.y(), &z, 2.0).unwrap();
            assert!(val >= at_zero - 1e-9);
        }
    }
}

#[test]
fn bipartite_large() {
    let nc = make_bipartite(1000, 1.0).unwrap();
    assert!(close(nc.predicted, 2.998, 1e-14));
    let v = verify(&nc).unwrap();
    assert!(v.passed, "{}", v.summary());
}

#[test]
fn disjoint_bernoulli_values() {
    for (n, q, p, want) in [(8, 3.0, 3.0, 3.5), (8, 2.0, 2.0, 1.75), (8, 4.0, 4.0, 7.0)] {
        let nc = make_disjoint_bernoulli(n, q, p).unwrap();
        assert!(close(nc.predicted, want, 1e-12));
        let v = verify(&nc).unwrap();
        assert!(v.passed, "{}", v.summary());
    }
}

#[test]
fn walsh_and_product_agree() {
    let a = make_disjoint_bernoulli_with(6, 3.0, 2.5, Realization::Product).unwrap();
    let b = make_disjoint_bernoulli_with(6, 3.0, 2.5, Realization::Walsh).unwrap();
    let ra = roundness_ratio(&a.config).unwrap().value;
    let rb = roundness_ratio(&b.config).unwrap().value;
    assert!(close(ra, rb, 1e-12));
    assert!(make_disjoint_bernoulli_with(15, 3.0, 2.0, Realization::Product).is_err());
}

#[test]
fn jensen_families() {
    let cases = [
        (JensenKind::TwoPoint, 3.0, 4.0),
        (JensenKind::Basis { n: 10, q: 2.0 }, 2.0, 0.9 * 2.0 + 0.2),
        (JensenKind::Rademacher { n: 10, q: 3.0 }, 3.0, 0.9 * 4.0 + 0.4),
        (JensenKind::Eps(0.01), 2.0, 2.0),
    ];
    for (kind, p, want) in cases {
        let nc = make_jensen(kind, p).unwrap();
        assert!(close(nc.predicted, want, 1e-12), "{kind:?}: {}", nc.predicted);
        let v = verify(&nc).unwrap();
        assert!(v.passed, "{}", v.summary());
    }
}

#[test]
fn jensen_rademacher_walsh_at_two_hundred() {
    let v = verify(&make_jensen(JensenKind::Rademacher { n: 200, q: 1.5 }, 1.2).unwrap()).unwrap();
    assert!(v.passed, "{}", v.summary());
    let c = c_exponent(PQ::new(1.2, 1.5).unwrap());
    assert!(v.computed > 2f64.powf(c) - 0.05);
}

#[test]
fn schatten_parallelogram_values() {
    let v = verify(&make_schatten_parallelogram(16, 1.0).unwrap()).unwrap();
    assert!(v.passed && (v.computed - 2.6517).abs() < 1e-4, "{}", v.summary());
    let v = verify(&make_schatten_parallelogram(4, 2.0).unwrap()).unwrap();
    assert!(v.passed && close(v.computed, 3.0, 1e-9), "{}", v.summary());
}

#[test]
fn two_point_and_eps_atom() {
    for p in [1.0, 1.5, 2.0, 3.0] {
        let v = verify(&make_two_point(p).unwrap()).unwrap();
        assert!(v.passed, "{}", v.summary());
    }
    let nc = make_eps_atom(0.1, 3.0).unwrap();
    assert!(close(nc.predicted, 3.2, 1e-12));
    for (eps, p) in [(0.1, 3.0), (0.1, 2.0), (0.3, 1.5)] {
        let v = verify(&make_eps_atom(eps, p).unwrap()).unwrap();
        assert!(v.passed, "{}", v.summary());
    }
}

#[test]
fn registry_lookup() {
    assert_eq!(constructions().len(), 10);
    for c in constructions() {
        assert_eq!(construction(c.id()).unwrap().id(), c.id());
    }
    let mut params = Params::new();
    params.insert("n".into(), 3.0);
    params.insert("p".into(), 1.0);
    let nc = construction("fn").unwrap().build(&params).unwrap();
    assert_eq!(nc.id, ConstructionId::FnInf);
    assert!(construction("jensen_basis").is_ok());
    assert!(matches!(construction("nope"), Err(Error::UnknownName { .. })));
    params.insert("zeta".into(), 1.0);
    assert!(construction("fn").unwrap().build(&params).is_err());
    assert!(construction("two-point").unwrap().build(&Params::new()).is_err());
    let mut bad = Params::new();
    bad.insert("n".into(), 2.5);
    bad.insert("p".into(), 1.0);
    assert!(construction("bipartite").unwrap().build(&bad).is_err());
}
