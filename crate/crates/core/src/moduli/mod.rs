//! The moduli ratios evaluated at a single configuration.

mod barycenter;
mod registry;

use serde::Serialize;
use serde_json::{json, Value};

pub use barycenter::{
    barycenter_objective, minimize_barycenter, minimize_barycenter_with, mixture_mean, random_center_value,
    BarycenterCert, SolverOptions, StartPoint,
};
pub use registry::{modulus, moduli, Modulus};

use crate::constants::{c_exponent, general_bound, metric_bound, C_exponent, PQ};
use crate::distributions::{centered_moment, cross_moment, log_cross_moment, mixture, self_moment, Config, FiniteDist};
use crate::error::{Error, Result};
use crate::format::{fmt_g17, fmt_q};
use crate::json::point_to_json;
use crate::spaces::{Point, Space};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum RatioName {
    Barycenter,
    Mixture,
    Roundness,
    Jensen,
    MetricBarycenter,
    LogRoundness,
    /// `E d(X,X')^p / inf_z E d(X,z)^p` for a single law.
    InfCenter,
    /// Barycenter bound with the center drawn from the mixture.
    RandomCenter,
}

impl RatioName {
    pub fn as_str(self) -> &'static str {
        match self {
            RatioName::Barycenter => "barycenter",
            RatioName::Mixture => "mixture",
            RatioName::Roundness => "roundness",
            RatioName::Jensen => "jensen",
            RatioName::MetricBarycenter => "metric_barycenter",
            RatioName::LogRoundness => "log_roundness",
            RatioName::InfCenter => "inf_center",
            RatioName::RandomCenter => "random_center",
        }
    }
}

/// Which side of the value the attached bound sits on.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum BoundDirection {
    /// The value should not exceed the bound.
    AtMost,
    /// The value should not fall below the bound.
    AtLeast,
}

#[derive(Clone, Debug, PartialEq)]
pub struct RatioReport {
    pub name: RatioName,
    pub value: f64,
    pub bound: Option<f64>,
    /// `bound − value`.
    pub slack: Option<f64>,
    pub direction: BoundDirection,
    pub p: f64,
    pub q: Option<f64>,
    pub space: String,
    pub solver_info: Option<BarycenterCert>,
}

pub const CSV_HEADER: &str = "name,p,q,space,value,bound,slack";

impl RatioReport {
    fn new(name: RatioName, value: f64, bound: Option<f64>, direction: BoundDirection, space: &Space, p: f64) -> Self {
        Self {
            name,
            value,
            bound,
            slack: bound.map(|b| b - value),
            direction,
            p,
            q: space.q(),
            space: space.label(),
            solver_info: None,
        }
    }

    /// Whether the value respects its bound up to `tolerance`; `None` without a bound.
    pub fn within_bound(&self, tolerance: f64) -> Option<bool> {
        let slack = self.slack?;
        Some(match self.direction {
            BoundDirection::AtMost => slack >= -tolerance,
            BoundDirection::AtLeast => slack <= tolerance,
        })
    }

    pub fn csv_row(&self) -> String {
        let opt = |x: Option<f64>| x.map(fmt_g17).unwrap_or_default();
        format!(
            "{},{},{},{},{},{},{}",
            self.name.as_str(),
            fmt_g17(self.p),
            self.q.map(fmt_q).unwrap_or_default(),
            self.space,
            fmt_g17(self.value),
            opt(self.bound),
            opt(self.slack)
        )
    }

    pub fn to_json(&self) -> Value {
        let num = |x: f64| crate::json::number_to_json(x);
        let opt = |x: Option<f64>| x.map(num).unwrap_or(Value::Null);
        json!({
            "name": self.name.as_str(),
            "value": num(self.value),
            "bound": opt(self.bound),
            "slack": opt(self.slack),
            "direction": self.direction,
            "p": num(self.p),
            "q": self.q.map(|q| if q.is_infinite() { json!("inf") } else { num(q) }).unwrap_or(Value::Null),
            "space": self.space,
            "solver_info": self.solver_info.as_ref().map(|c| json!({
                "z_star": point_to_json(&c.z_star),
                "value": num(c.value),
                "iterations": c.iterations,
                "starts": c.starts,
                "best_start": c.best_start,
            })).unwrap_or(Value::Null),
        })
    }
}

fn degenerate(ratio: &'static str, numerator: f64, denominator: f64) -> Error {
    Error::Degenerate {
        ratio,
        numerator,
        denominator,
    }
}

fn require_p_at_least_one(p: f64, what: &'static str) -> Result<()> {
    if p < 1.0 {
        return Err(Error::param("p", p, what));
    }
    Ok(())
}

/// `2^{1 + max(p, 1)}`: two applications of the (quasi-)triangle inequality.
pub fn trivial_roundness_bound(p: f64) -> f64 {
    2f64.powf(1.0 + p.max(1.0))
}

/// Best known upper bound on the roundness ratio for `space` at exponent `p`.
pub fn roundness_bound(space: &Space, p: f64) -> f64 {
    match space {
        Space::WeightedLq { q, .. } if q.is_finite() && p >= 1.0 => {
            2f64.powf(C_exponent(PQ { p, q: *q }))
        }
        Space::RealLine if p >= 1.0 => 2f64.powf(1f64.max(p - 1.0)),
        // ℝ sits isometrically in L_p for every p in (0, 2].
        Space::RealLine if p <= 2.0 => 2.0,
        Space::Snowflake { base, alpha } => roundness_bound(base, alpha * p),
        _ => trivial_roundness_bound(p),
    }
}

/// Lower bound on the Jensen ratio for linear spaces, `p ≥ 1`.
pub fn jensen_bound(space: &Space, p: f64) -> Option<f64> {
    if p < 1.0 || !space.is_linear() {
        return None;
    }
    Some(match space {
        Space::WeightedLq { q, .. } if q.is_finite() => 2f64.powf(c_exponent(PQ { p, q: *q })),
        Space::RealLine => 2f64.powf(1f64.min(p - 1.0)),
        _ => 1.0,
    })
}

/// `(E d(X,X')^p + E d(Y,Y')^p) / E d(X,Y)^p`.
pub fn roundness_ratio(c: &Config) -> Result<RatioReport> {
    let p = c.p();
    let num = self_moment(c.x(), p)? + self_moment(c.y(), p)?;
    let den = c.cross_moment()?;
    if den == 0.0 {
        return Err(degenerate("roundness", num, den));
    }
    Ok(RatioReport::new(
        RatioName::Roundness,
        num / den,
        Some(roundness_bound(c.space(), p)),
        BoundDirection::AtMost,
        c.space(),
        p,
    ))
}

/// `E d(X,X')^p / E d(X, EX)^p`.
pub fn jensen_ratio(x: &FiniteDist, p: f64) -> Result<RatioReport> {
    require_p_at_least_one(p, "the Jensen ratio needs p >= 1")?;
    let num = self_moment(x, p)?;
    let den = centered_moment(x, p)?;
    if den == 0.0 {
        return Err(degenerate("jensen", num, den));
    }
    Ok(RatioReport::new(
        RatioName::Jensen,
        num / den,
        jensen_bound(x.space(), p),
        BoundDirection::AtLeast,
        x.space(),
        p,
    ))
}

/// Barycentric objective at `½EX + ½EY` over `E d(X,Y)^p`.
pub fn mixture_ratio(c: &Config) -> Result<RatioReport> {
    let p = c.p();
    let z = mixture_mean(c)?;
    let num = barycenter_objective(c, &z)?;
    let den = c.cross_moment()?;
    if den == 0.0 {
        return Err(degenerate("mixture", num, den));
    }
    Ok(RatioReport::new(
        RatioName::Mixture,
        num / den,
        general_bound(p).ok(),
        BoundDirection::AtMost,
        c.space(),
        p,
    ))
}

/// `inf_z (E d(X,z)^p + E d(Y,z)^p) / E d(X,Y)^p`, with the solver certificate.
pub fn barycenter_ratio(c: &Config) -> Result<RatioReport> {
    barycenter_ratio_with(c, &SolverOptions::default())
}

pub fn barycenter_ratio_with(c: &Config, opts: &SolverOptions) -> Result<RatioReport> {
    let p = c.p();
    require_p_at_least_one(p, "barycenter minimization needs p >= 1 (convexity)")?;
    let den = c.cross_moment()?;
    let cert = minimize_barycenter_with(c, opts)?;
    if den == 0.0 {
        return Err(degenerate("barycenter", cert.value, den));
    }
    let mut r = RatioReport::new(
        RatioName::Barycenter,
        cert.value / den,
        general_bound(p).ok(),
        BoundDirection::AtMost,
        c.space(),
        p,
    );
    r.solver_info = Some(cert);
    Ok(r)
}

/// All atoms of `X` and `Y`, and every vertex of a bipartite graph.
pub fn default_candidates(c: &Config) -> Vec<Point> {
    let mut out: Vec<Point> = Vec::new();
    let mut push = |z: &Point| {
        if !out.iter().any(|w| w.same_atom(z)) {
            out.push(z.clone());
        }
    };
    for a in c.x().atoms().iter().chain(c.y().atoms()) {
        push(a);
    }
    let mut inner = c.space();
    while let Space::Snowflake { base, .. } = inner {
        inner = base;
    }
    if let Space::BipartiteGraph { n } = inner {
        for side in [crate::spaces::Side::Left, crate::spaces::Side::Right] {
            for index in 0..*n {
                push(&Point::Vertex(crate::spaces::Vertex { side, index }));
            }
        }
    }
    out
}

/// Exact minimum of the barycentric objective over a finite candidate set.
pub fn metric_barycenter_ratio(c: &Config, candidates: &[Point]) -> Result<RatioReport> {
    if candidates.is_empty() {
        return Err(Error::InvalidDistribution("metric barycenter needs at least one candidate".into()));
    }
    let p = c.p();
    let mut best = f64::INFINITY;
    for z in candidates {
        best = best.min(barycenter_objective(c, z)?);
    }
    let den = c.cross_moment()?;
    if den == 0.0 {
        return Err(degenerate("metric_barycenter", best, den));
    }
    Ok(RatioReport::new(
        RatioName::MetricBarycenter,
        best / den,
        metric_bound(p).ok(),
        BoundDirection::AtMost,
        c.space(),
        p,
    ))
}

/// `E log d(X,X') + E log d(Y,Y') − 2 E log d(X,Y)`; `−∞` when a self term is.
pub fn log_roundness_report(c: &Config) -> Result<RatioReport> {
    let sx = log_cross_moment(c.x(), c.x())?;
    let sy = log_cross_moment(c.y(), c.y())?;
    let cross = log_cross_moment(c.x(), c.y())?;
    let gap = if sx == f64::NEG_INFINITY || sy == f64::NEG_INFINITY {
        f64::NEG_INFINITY
    } else if cross == f64::NEG_INFINITY {
        f64::INFINITY
    } else {
        sx + sy - 2.0 * cross
    };
    let bound = matches!(c.space(), Space::RealLine).then_some(0.0);
    let mut r = RatioReport::new(RatioName::LogRoundness, gap, bound, BoundDirection::AtMost, c.space(), c.p());
    if gap == f64::NEG_INFINITY {
        r.slack = bound.map(|_| f64::INFINITY);
    }
    Ok(r)
}

/// `E d(X,X')^p / inf_z E d(X,z)^p` for a single law (`p ≥ 1`).
pub fn inf_center_ratio(x: &FiniteDist, p: f64) -> Result<RatioReport> {
    require_p_at_least_one(p, "the centered infimum needs p >= 1 (convexity)")?;
    let c = Config::new(x.clone(), x.clone(), p)?;
    let cert = minimize_barycenter(&c)?;
    let num = self_moment(x, p)?;
    let den = cert.value / 2.0;
    if den == 0.0 {
        return Err(degenerate("inf_center", num, den));
    }
    let mut r = RatioReport::new(RatioName::InfCenter, num / den, None, BoundDirection::AtMost, x.space(), p);
    r.solver_info = Some(cert);
    Ok(r)
}

/// Barycentric objective averaged over a center drawn from the mixture,
/// over `E d(X,Y)^p`. An upper bound on the barycenter ratio for every `p > 0`.
pub fn random_center_ratio(c: &Config) -> Result<RatioReport> {
    let num = random_center_value(c.x(), c.y(), c.p())?;
    let den = c.cross_moment()?;
    if den == 0.0 {
        return Err(degenerate("random_center", num, den));
    }
    Ok(RatioReport::new(
        RatioName::RandomCenter,
        num / den,
        None,
        BoundDirection::AtMost,
        c.space(),
        c.p(),
    ))
}

/// `2·E d(Z, EZ)^p / E d(X,Y)^p` with `Z` the mixture; equal to the mixture ratio.
pub fn mixture_ratio_via_centered(c: &Config) -> Result<f64> {
    let z = mixture(c.x(), c.y())?;
    Ok(2.0 * centered_moment(&z, c.p())? / cross_moment(c.x(), c.y(), c.p())?)
}
