use moment_moduli::constructions::{constructions, verify, Params};
use moment_moduli::json::{config_from_str, config_to_json};
use moment_moduli::moduli::{moduli, modulus};
use moment_moduli::scalar::{suites, SuiteOptions};

fn sample_params(names: &[&str]) -> Params {
    names
        .iter()
        .map(|&n| {
            let v = match n {
                "n" => 4.0,
                "q" => 3.0,
                "p" => 2.0,
                "eps" => 0.1,
                other => panic!("no sample value for `{other}`"),
            };
            (n.to_string(), v)
        })
        .collect()
}

#[test]
fn every_construction_verifies() {
    for c in constructions() {
        let names: Vec<&str> = c.params().iter().map(|s| s.name).collect();
        let nc = c.build(&sample_params(&names)).unwrap_or_else(|e| panic!("{}: {e}", c.id()));
        let v = verify(&nc).unwrap_or_else(|e| panic!("{}: {e}", c.id()));
        assert!(v.passed, "{}: {}", c.id(), v.summary());
    }
}

#[test]
fn hand_computed_ratios_on_the_line() {
    // X uniform on {0, 1}, Y = 2, p = 1.
    let c = config_from_str(r#"{"space":"real","p":1,"x":{"atoms":[0,1]},"y":{"atoms":[2]}}"#).unwrap();
    let value = |name: &str| modulus(name).unwrap().evaluate(&c).unwrap().value;
    // E|X-X'| = 1/2, E|Y-Y'| = 0, E|X-Y| = 3/2.
    assert!((value("roundness") - 1.0 / 3.0).abs() < 1e-15);
    // Any z in [1, 2] gives E|X-z| + |2-z| = 3/2.
    assert!((value("barycenter") - 1.0).abs() < 1e-6);
    // z = 5/4 lies in [1, 2].
    assert!((value("mixture") - 1.0).abs() < 1e-15);
    assert!(moduli().iter().filter(|m| m.applies(&c)).count() >= 6);
}

#[test]
fn configs_round_trip_through_json() {
    let text = r#"{"space":{"kind":"weighted_lq","q":"inf","subspace":"zero_sum"},"p":2.5,
        "x":{"atoms":[[1,-1],[[0.5,2],[-0.5,-2]]],"probs":[0.25,0.75]},"y":{"atoms":[[0,0]]}}"#;
    let c = config_from_str(text).unwrap();
    let again = config_from_str(&config_to_json(&c).to_string()).unwrap();
    assert_eq!(c, again);
}

#[test]
fn suites_pass_on_small_batches() {
    let opts = SuiteOptions {
        grid: Some(40),
        seeds: Some(25),
        tolerance: None,
        seed: 99,
    };
    for s in suites() {
        let r = s.run(&opts).unwrap();
        assert!(r.cases > 0, "{}", s.name());
        assert!(r.passed(), "{}: {:?}", s.name(), r.rows.iter().find(|x| !x.holds));
    }
}
