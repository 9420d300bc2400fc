//! Named ratio evaluators, selectable at runtime.

use super::*;

pub trait Modulus: Send + Sync {
    fn name(&self) -> &'static str;
    fn description(&self) -> &'static str;
    /// Whether the ratio is defined for this configuration's space and exponent.
    fn applies(&self, c: &Config) -> bool;
    fn evaluate(&self, c: &Config) -> Result<RatioReport>;
}

struct Roundness;
struct Barycenter;
struct Mixture;
struct Jensen;
struct MetricBarycenter;
struct LogRoundness;
struct InfCenter;
struct RandomCenter;

impl Modulus for Roundness {
    fn name(&self) -> &'static str {
        "roundness"
    }
    fn description(&self) -> &'static str {
        "(E d(X,X')^p + E d(Y,Y')^p) / E d(X,Y)^p"
    }
    fn applies(&self, _: &Config) -> bool {
        true
    }
    fn evaluate(&self, c: &Config) -> Result<RatioReport> {
        roundness_ratio(c)
    }
}

impl Modulus for Barycenter {
    fn name(&self) -> &'static str {
        "barycenter"
    }
    fn description(&self) -> &'static str {
        "inf_z (E d(X,z)^p + E d(Y,z)^p) / E d(X,Y)^p by multi-start subgradient descent"
    }
    fn applies(&self, c: &Config) -> bool {
        c.p() >= 1.0 && c.space().is_linear() && !matches!(c.space(), Space::ParallelogramS1 { lambda: crate::spaces::LambdaVariant::AsPrinted, .. })
    }
    fn evaluate(&self, c: &Config) -> Result<RatioReport> {
        barycenter_ratio(c)
    }
}

impl Modulus for Mixture {
    fn name(&self) -> &'static str {
        "mixture"
    }
    fn description(&self) -> &'static str {
        "barycentric objective at (EX + EY)/2 over E d(X,Y)^p"
    }
    fn applies(&self, c: &Config) -> bool {
        c.space().is_linear()
    }
    fn evaluate(&self, c: &Config) -> Result<RatioReport> {
        mixture_ratio(c)
    }
}

impl Modulus for Jensen {
    fn name(&self) -> &'static str {
        "jensen"
    }
    fn description(&self) -> &'static str {
        "E d(Z,Z')^p / E d(Z,EZ)^p for Z the mixture of X and Y"
    }
    fn applies(&self, c: &Config) -> bool {
        c.p() >= 1.0 && c.space().is_linear()
    }
    fn evaluate(&self, c: &Config) -> Result<RatioReport> {
        jensen_ratio(&c.mixture()?, c.p())
    }
}

impl Modulus for MetricBarycenter {
    fn name(&self) -> &'static str {
        "metric-barycenter"
    }
    fn description(&self) -> &'static str {
        "minimum of the barycentric objective over the atoms (and graph vertices)"
    }
    fn applies(&self, _: &Config) -> bool {
        true
    }
    fn evaluate(&self, c: &Config) -> Result<RatioReport> {
        metric_barycenter_ratio(c, &default_candidates(c))
    }
}

impl Modulus for LogRoundness {
    fn name(&self) -> &'static str {
        "log-roundness"
    }
    fn description(&self) -> &'static str {
        "E log d(X,X') + E log d(Y,Y') - 2 E log d(X,Y)"
    }
    fn applies(&self, _: &Config) -> bool {
        true
    }
    fn evaluate(&self, c: &Config) -> Result<RatioReport> {
        log_roundness_report(c)
    }
}

impl Modulus for InfCenter {
    fn name(&self) -> &'static str {
        "inf-center"
    }
    fn description(&self) -> &'static str {
        "E d(X,X')^p / inf_z E d(X,z)^p for the law of X"
    }
    fn applies(&self, c: &Config) -> bool {
        Barycenter.applies(c)
    }
    fn evaluate(&self, c: &Config) -> Result<RatioReport> {
        inf_center_ratio(c.x(), c.p())
    }
}

impl Modulus for RandomCenter {
    fn name(&self) -> &'static str {
        "random-center"
    }
    fn description(&self) -> &'static str {
        "barycentric objective averaged over z drawn from the mixture, over E d(X,Y)^p"
    }
    fn applies(&self, _: &Config) -> bool {
        true
    }
    fn evaluate(&self, c: &Config) -> Result<RatioReport> {
        random_center_ratio(c)
    }
}

static REGISTRY: [&dyn Modulus; 8] = [
    &Roundness,
    &Barycenter,
    &Mixture,
    &Jensen,
    &MetricBarycenter,
    &LogRoundness,
    &InfCenter,
    &RandomCenter,
];

/// Every registered ratio, in a fixed order.
pub fn moduli() -> &'static [&'static dyn Modulus] {
    &REGISTRY
}

pub fn modulus(name: &str) -> Result<&'static dyn Modulus> {
    let key = name.replace('_', "-");
    REGISTRY.iter().copied().find(|m| m.name() == key).ok_or_else(|| Error::UnknownName {
        kind: "ratio",
        name: name.to_string(),
        available: REGISTRY.iter().map(|m| m.name()).collect::<Vec<_>>().join(", "),
    })
}
