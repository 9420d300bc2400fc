//! Acceptance suite: one PASS/FAIL line per criterion, each with a runtime budget.
//! Exits nonzero when any criterion fails.

use std::f64::consts::LN_2;
use std::time::{Duration, Instant};

use moment_moduli::constants::{
    bm_bound, c_exponent, c_exponent_piecewise, c_opt_piecewise, c_upper_range, general_bound, snowflake_exponent,
    snowflake_objective, theta_max, C_exponent, C_opt_exponent, PQ,
};
use moment_moduli::constructions::{
    make_bipartite, make_disjoint_bernoulli, make_fn, make_jensen, make_schatten_parallelogram, JensenKind,
};
use moment_moduli::moduli::{
    barycenter_ratio, default_candidates, jensen_ratio, metric_barycenter_ratio, roundness_ratio,
};
use moment_moduli::scalar::{cosine_log_moment, laplace_log_identity, suite, ScalarDist, SuiteOptions};
use moment_moduli::search::{run_search, Objective, SearchSpec};
use moment_moduli::{Config, CVector, FiniteDist, Point, Space};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<(), String>;

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Outcome {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn err<E: std::fmt::Display>(e: E) -> String {
    e.to_string()
}

fn fn_sharpness() -> Outcome {
    for n in [2usize, 3, 5, 10] {
        for p in [1.0f64, 2.0, 3.0] {
            let nc = make_fn(n, f64::INFINITY, p).map_err(err)?;
            let r = barycenter_ratio(&nc.config).map_err(err)?.value;
            let lower = 2.0 * (1.5 - 1.0 / n as f64).powf(p) - 1e-4;
            let upper = 3f64.powf(p) / 2f64.powf(p - 1.0) + 1e-7;
            ensure(r >= lower && r <= upper, || format!("n={n} p={p}: ratio {r} outside [{lower}, {upper}]"))?;
        }
    }
    Ok(())
}

/// Best vertex center on `K_{n,n}` for the two uniform sides, by enumeration.
fn bipartite_oracle(n: usize, p: f64) -> f64 {
    // Vertices 0..n on the left, n..2n on the right.
    let d = |u: usize, v: usize| -> f64 {
        if u == v {
            0.0
        } else if (u < n) == (v < n) {
            2.0
        } else {
            1.0
        }
    };
    let side = |z: usize, range: std::ops::Range<usize>| range.map(|v| d(v, z).powf(p)).sum::<f64>() / n as f64;
    (0..2 * n).map(|z| side(z, 0..n) + side(z, n..2 * n)).fold(f64::INFINITY, f64::min)
}

fn metric_bound() -> Outcome {
    for n in [1usize, 2, 4, 100] {
        for p in [1.0f64, 2.0, 3.0] {
            let nc = make_bipartite(n, p).map_err(err)?;
            let c = &nc.config;
            let r = metric_barycenter_ratio(c, &default_candidates(c)).map_err(err)?.value;
            ensure((r - nc.predicted).abs() <= 1e-12, || format!("n={n} p={p}: {r} vs {}", nc.predicted))?;
            let oracle = bipartite_oracle(n, p);
            ensure((r - oracle).abs() <= 1e-12, || format!("n={n} p={p}: {r} vs enumeration {oracle}"))?;
            ensure(r <= 2f64.powf(p) + 1.0, || format!("n={n} p={p}: {r} exceeds 2^p + 1"))?;
        }
    }
    Ok(())
}

fn jensen_modulus() -> Outcome {
    let listed = [
        (JensenKind::TwoPoint, 3.0),
        (JensenKind::TwoPoint, 1.5),
        (JensenKind::Eps(0.01), 2.0),
        (JensenKind::Eps(0.2), 3.0),
        (JensenKind::Basis { n: 10, q: 2.0 }, 2.0),
        (JensenKind::Basis { n: 7, q: 3.0 }, 1.5),
        (JensenKind::Rademacher { n: 10, q: 3.0 }, 3.0),
        (JensenKind::Rademacher { n: 5, q: 1.5 }, 1.2),
    ];
    for (kind, p) in listed {
        let nc = make_jensen(kind, p).map_err(err)?;
        let r = jensen_ratio(nc.config.x(), p).map_err(err)?.value;
        ensure((r - nc.predicted).abs() <= 1e-10, || format!("{kind:?} p={p}: {r} vs {}", nc.predicted))?;
    }
    // One (p, q) per range of c, with the family that realizes it.
    let families = [
        (1u8, 1.2, 2.0, JensenKind::TwoPoint),
        (2, 1.5, 1.2, JensenKind::Rademacher { n: 200, q: 1.2 }),
        (3, 2.0, 4.0, JensenKind::Basis { n: 200, q: 4.0 }),
        (4, 3.0, 2.0, JensenKind::Eps(1e-4)),
    ];
    for (range, p, q, kind) in families {
        let pq = PQ::new(p, q).map_err(err)?;
        let target = 2f64.powf(c_exponent(pq));
        ensure(c_exponent_piecewise(pq).iter().any(|(k, _)| *k == range), || {
            format!("(p, q) = ({p}, {q}) is not in range {range}")
        })?;
        let nc = make_jensen(kind, p).map_err(err)?;
        let r = jensen_ratio(nc.config.x(), p).map_err(err)?.value;
        // Every law has ratio at least 2^c; the family comes within 0.05 of it.
        ensure(r > target - 0.05, || format!("range {range}: {r} <= 2^c - 0.05 = {}", target - 0.05))?;
        ensure(r >= target - 1e-9 && r <= target + 0.05, || {
            format!("range {range}: {r} not within [2^c, 2^c + 0.05], 2^c = {target}")
        })?;
    }
    Ok(())
}

fn random_lq_config(rng: &mut ChaCha8Rng, q: f64, p: f64, dim: usize) -> Config {
    let space = Space::lq(q).unwrap();
    let draw = |rng: &mut ChaCha8Rng| {
        let n = rng.random_range(1..=4);
        let atoms: Vec<Point> = (0..n)
            .map(|_| {
                let v: Vec<f64> = (0..dim).map(|_| rng.random_range(-1.0..1.0)).collect();
                Point::Vector(CVector::from_reals(&v).unwrap())
            })
            .collect();
        let w: Vec<f64> = (0..n).map(|_| rng.random_range(0.05..1.0)).collect();
        let t: f64 = w.iter().sum();
        FiniteDist::new(space.clone(), atoms, w.into_iter().map(|x| x / t).collect()).unwrap()
    };
    let x = draw(rng);
    let y = draw(rng);
    Config::new(x, y, p).unwrap()
}

fn roundness_sharpness() -> Outcome {
    for (p, q) in [(2.0, 2.0), (3.0, 3.0), (4.0, 2.0), (2.0, 4.0)] {
        let nc = make_disjoint_bernoulli(12, q, p).map_err(err)?;
        let r = roundness_ratio(&nc.config).map_err(err)?.value;
        ensure((r - nc.predicted).abs() <= 1e-9, || format!("(p, q) = ({p}, {q}): {r} vs {}", nc.predicted))?;
    }
    let ranges = [(1u8, 3.0, 2.5), (2, 2.0, 4.0), (5, 1.2, 1.8)];
    for (range, p, q) in ranges {
        let pq = PQ::new(p, q).map_err(err)?;
        ensure(c_upper_range(pq) == range, || format!("({p}, {q}) not in range {range}"))?;
        let bound = 2f64.powf(C_exponent(pq)) + 1e-7;
        for seed in 0..500u64 {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let c = random_lq_config(&mut rng, q, p, 4);
            let r = roundness_ratio(&c).map_err(err)?.value;
            ensure(r <= bound, || format!("range {range} seed {seed}: {r} > {bound}"))?;
        }
    }
    Ok(())
}

fn schatten_gap() -> Outcome {
    let nc = make_schatten_parallelogram(64, 1.0).map_err(err)?;
    let r = roundness_ratio(&nc.config).map_err(err)?.value;
    let want = 63.0 / 64.0 * 2.0 * 2f64.sqrt() - 1e-9;
    ensure(r >= want, || format!("{r} < {want}"))?;
    ensure(r <= 4.0, || format!("{r} exceeds the trivial bound 4"))
}

fn scalar_suites() -> Outcome {
    let opts = SuiteOptions::default();
    for name in ["alpha", "beta", "subadditivity", "smoothing", "hilbert"] {
        let report = suite(name).map_err(err)?.run(&opts).map_err(err)?;
        ensure(report.cases > 0, || format!("{name}: no cases evaluated"))?;
        ensure(report.passed(), || {
            let first = report.rows.iter().find(|r| !r.holds).map(|r| r.csv_row()).unwrap_or_default();
            format!("{name}: {} violations, first {first}", report.violations)
        })?;
    }
    Ok(())
}

fn log_identities() -> Outcome {
    for k in 0..50 {
        let a = 2.0 * std::f64::consts::PI * k as f64 / 50.0 + 0.01;
        let v = cosine_log_moment(a);
        ensure((v + LN_2).abs() <= 1e-6, || format!("alpha={a}: {v}"))?;
    }
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    for i in 0..20 {
        let n = rng.random_range(1..=5);
        let atoms: Vec<f64> = (0..n).map(|_| rng.random_range(-5.0f64..5.0).exp()).collect();
        let w: Vec<f64> = (0..n).map(|_| rng.random_range(0.1..1.0)).collect();
        let t: f64 = w.iter().sum();
        let d = ScalarDist::new(atoms, w.into_iter().map(|x| x / t).collect()).map_err(err)?;
        let c = laplace_log_identity(&d).map_err(err)?;
        ensure((c.lhs - c.rhs).abs() <= 1e-6, || format!("law {i}: {} vs {}", c.lhs, c.rhs))?;
    }
    Ok(())
}

fn constants_algebra() -> Outcome {
    let n = 200;
    let at = |k: usize| 1.0 + 7.0 * k as f64 / (n - 1) as f64;
    for i in 0..n {
        for j in 0..n {
            let (p, q) = (at(i), at(j));
            let pq = PQ::new(p, q).map_err(err)?;
            let c = c_exponent(pq);
            let pieces = c_exponent_piecewise(pq);
            ensure(!pieces.is_empty(), || format!("({p}, {q}): no range of c"))?;
            for (k, v) in pieces {
                ensure((v - c).abs() <= 1e-12, || format!("({p}, {q}): c range {k} gives {v}, min form {c}"))?;
            }
            let co = C_opt_exponent(pq);
            let pieces = c_opt_piecewise(pq);
            ensure(!pieces.is_empty(), || format!("({p}, {q}): no range of C_opt"))?;
            for (k, v) in pieces {
                ensure((v - co).abs() <= 1e-12, || format!("({p}, {q}): C_opt range {k} gives {v}, max form {co}"))?;
            }
            ensure((c - p * theta_max(pq) / 2.0).abs() <= 1e-12, || format!("({p}, {q}): c != p theta_max / 2"))?;
            let general = general_bound(p).map_err(err)?;
            ensure(bm_bound(pq) <= general + 1e-12, || format!("({p}, {q}): bm bound above 3^p/2^(p-1)"))?;
            if 1.0 / p + 1.0 / q >= 1.0 {
                let (s, big_q) = snowflake_exponent(pq);
                let want = (p / q).max(2.0 - p / q);
                ensure((s - want).abs() <= 1e-12, || format!("({p}, {q}): snowflake {s} vs {want}"))?;
                ensure((snowflake_objective(pq, big_q) - s).abs() <= 1e-12, || format!("({p}, {q}): Q* inconsistent"))?;
            }
        }
    }
    Ok(())
}

fn search_soundness() -> Outcome {
    let small = SearchSpec {
        budget: 2000,
        restarts: 3,
        seed: 42,
        ..SearchSpec::new(Space::lq(3.0).map_err(err)?, Objective::Roundness, 2.0)
    };
    let a = run_search(&small).map_err(err)?;
    let b = run_search(&small).map_err(err)?;
    ensure(a.best_ratio.to_bits() == b.best_ratio.to_bits() && a.trace == b.trace && a.best_config == b.best_config, || {
        "fixed-seed search is not reproducible".into()
    })?;
    let line = SearchSpec {
        budget: 100_000,
        restarts: 1,
        seed: 7,
        ..SearchSpec::new(Space::RealLine, Objective::Roundness, 1.0)
    };
    let r = run_search(&line).map_err(err)?;
    ensure(r.best_ratio <= 2.0 + 1e-9, || format!("real line p=1 roundness {} > 2", r.best_ratio))?;
    let last = r.trace.last().map(|t| t.1).unwrap_or(f64::NAN);
    ensure((last - r.best_ratio).abs() <= 1e-10, || format!("trace end {last} vs certified {}", r.best_ratio))?;
    ensure(r.trace.windows(2).all(|w| w[1].1 >= w[0].1), || "trace decreases".into())
}

type Criterion = (&'static str, f64, fn() -> Outcome);

fn main() {
    let criteria: [Criterion; 9] = [
        ("1 F_n barycenter sharpness", 5.0, fn_sharpness),
        ("2 K_{n,n} metric barycenter", 1.0, metric_bound),
        ("3 Jensen modulus families", 10.0, jensen_modulus),
        ("4 roundness sharpness and random sweep", 60.0, roundness_sharpness),
        ("5 Schatten parallelogram gap", 5.0, schatten_gap),
        ("6 scalar suites", 30.0, scalar_suites),
        ("7 logarithmic identities", 10.0, log_identities),
        ("8 constants algebra", 2.0, constants_algebra),
        ("9 search determinism and soundness", 60.0, search_soundness),
    ];
    let filter: Vec<String> = std::env::args().skip(1).filter(|a| !a.starts_with('-')).collect();
    let mut failed = 0;
    for (name, limit, run) in criteria {
        if !filter.is_empty() && !filter.iter().any(|f| name.contains(f.as_str())) {
            continue;
        }
        let start = Instant::now();
        let outcome = run();
        let elapsed = start.elapsed();
        let outcome = outcome.and_then(|_| {
            ensure(elapsed <= Duration::from_secs_f64(limit), || {
                format!("took {:.2} s, limit {limit} s", elapsed.as_secs_f64())
            })
        });
        match outcome {
            Ok(()) => println!("PASS [{name}] {:.3} s (limit {limit} s)", elapsed.as_secs_f64()),
            Err(e) => {
                failed += 1;
                println!("FAIL [{name}] {:.3} s (limit {limit} s): {e}", elapsed.as_secs_f64());
            }
        }
    }
    if failed > 0 {
        eprintln!("{failed} acceptance criteria failed");
        std::process::exit(1);
    }
}
