use serde_json::{json, Value};

use super::{ConstructionId, NamedConstruction, PredictionKind};
use crate::error::Result;
use crate::format::fmt_g17;
use crate::json::number_to_json;
use crate::moduli::{
    barycenter_ratio, default_candidates, inf_center_ratio, jensen_ratio, metric_barycenter_ratio, mixture_ratio,
    random_center_ratio, roundness_ratio, RatioName, RatioReport,
};

/// Relative tolerance for closed-form ratios.
const EXACT_TOL: f64 = 1e-9;
/// Relative tolerance when the value comes from the descent solver.
const SOLVER_TOL: f64 = 1e-6;

#[derive(Clone, Debug, PartialEq)]
pub struct Verification {
    pub id: ConstructionId,
    pub target: RatioName,
    pub predicted: f64,
    pub computed: f64,
    pub kind: PredictionKind,
    pub tolerance: f64,
    pub passed: bool,
    pub report: RatioReport,
}

impl Verification {
    pub fn to_json(&self) -> Value {
        json!({
            "id": self.id,
            "target": self.target.as_str(),
            "predicted": number_to_json(self.predicted),
            "computed": number_to_json(self.computed),
            "kind": self.kind,
            "tolerance": number_to_json(self.tolerance),
            "passed": self.passed,
            "report": self.report.to_json(),
        })
    }

    pub fn summary(&self) -> String {
        format!(
            "{} {:?} {}: predicted {} computed {} ({:?}, tol {})",
            if self.passed { "PASS" } else { "FAIL" },
            self.id,
            self.target.as_str(),
            fmt_g17(self.predicted),
            fmt_g17(self.computed),
            self.kind,
            fmt_g17(self.tolerance),
        )
    }
}

fn evaluate(nc: &NamedConstruction) -> Result<(RatioReport, f64)> {
    let c = &nc.config;
    Ok(match nc.target {
        RatioName::Barycenter => (barycenter_ratio(c)?, SOLVER_TOL),
        RatioName::InfCenter => (inf_center_ratio(c.x(), c.p())?, SOLVER_TOL),
        RatioName::MetricBarycenter => (metric_barycenter_ratio(c, &default_candidates(c))?, EXACT_TOL),
        RatioName::Roundness => (roundness_ratio(c)?, EXACT_TOL),
        RatioName::Jensen => (jensen_ratio(c.x(), c.p())?, EXACT_TOL),
        RatioName::Mixture => (mixture_ratio(c)?, EXACT_TOL),
        RatioName::RandomCenter => (random_center_ratio(c)?, EXACT_TOL),
        RatioName::LogRoundness => (crate::moduli::log_roundness_report(c)?, EXACT_TOL),
    })
}

/// Computes the construction's target ratio and compares it with the prediction.
pub fn verify(nc: &NamedConstruction) -> Result<Verification> {
    let (report, rel) = evaluate(nc)?;
    let computed = report.value;
    let tolerance = rel * nc.predicted.abs().max(1.0);
    let passed = match nc.prediction_kind {
        PredictionKind::ExactRatio => (computed - nc.predicted).abs() <= tolerance,
        PredictionKind::LowerBound => computed >= nc.predicted - tolerance,
        PredictionKind::UpperBoundLimit => computed <= nc.predicted + tolerance,
    };
    Ok(Verification {
        id: nc.id,
        target: nc.target,
        predicted: nc.predicted,
        computed,
        kind: nc.prediction_kind,
        tolerance,
        passed,
        report,
    })
}
