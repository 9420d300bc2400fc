//! Normed and metric spaces in which every distribution of the crate lives.
//!
//! Every distance used anywhere else is computed here, through
//! [`Space::distance`] or [`Space::distance_pow`].

mod jacobi;
mod norms;
mod parse;
mod point;

use std::fmt;

pub use jacobi::{jacobi_svd, Svd, JACOBI_TOLERANCE};
pub use norms::{lambda_area, lq_norm, parallelogram_s1_distance, parallelogram_s1_norm, schatten_norm, singular_values};
pub use point::{CMatrix, CVector, Point, Side, Vertex};
pub(crate) use norms::lq_subgradient_into;

use crate::error::{Error, Result};

/// How the parallelogram area under the root is formed.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LambdaVariant {
    /// `√(‖Re a‖²‖Im a‖² − ⟨Re a, Im a⟩²)`, the Gram-determinant area.
    #[default]
    Squared,
    /// `√(‖Re a‖²‖Im a‖² − ⟨Re a, Im a⟩)` with the inner product unsquared.
    /// Not a norm in general; kept for comparison only.
    AsPrinted,
}

/// Linear constraint on the points of a weighted `ℓ_q` space.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Subspace {
    #[default]
    Full,
    /// Hyperplane `{x : Σ_k x_k = 0}`.
    ZeroSum,
}

#[derive(Clone, Debug, PartialEq)]
pub enum Space {
    /// Weighted `L_q` over a finite measure; `q = ∞` is the sup norm over
    /// coordinates of positive weight.
    WeightedLq { q: f64, subspace: Subspace },
    /// Schatten-`q` class of square complex matrices.
    Schatten { q: f64 },
    /// `ℂ^{2n}` with the closed-form trace-class norm of the parallelogram
    /// operator image.
    ParallelogramS1 { n: usize, lambda: LambdaVariant },
    /// `(base, d^alpha)`.
    Snowflake { base: Box<Space>, alpha: f64 },
    /// Shortest-path metric of `K_{n,n}`.
    BipartiteGraph { n: usize },
    RealLine,
}

impl Space {
    pub fn lq(q: f64) -> Result<Self> {
        check_q(q, true)?;
        Ok(Space::WeightedLq { q, subspace: Subspace::Full })
    }

    pub fn lq_zero_sum(q: f64) -> Result<Self> {
        check_q(q, true)?;
        Ok(Space::WeightedLq { q, subspace: Subspace::ZeroSum })
    }

    pub fn schatten(q: f64) -> Result<Self> {
        check_q(q, false)?;
        Ok(Space::Schatten { q })
    }

    pub fn parallelogram_s1(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::param("n", 0.0, "must be a positive integer"));
        }
        Ok(Space::ParallelogramS1 { n, lambda: LambdaVariant::Squared })
    }

    pub fn snowflake(base: Space, alpha: f64) -> Result<Self> {
        if !(alpha > 0.0 && alpha <= 1.0) {
            return Err(Error::param("alpha", alpha, "snowflake exponent must lie in (0, 1]"));
        }
        Ok(Space::Snowflake { base: Box::new(base), alpha })
    }

    pub fn bipartite(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::param("n", 0.0, "must be a positive integer"));
        }
        Ok(Space::BipartiteGraph { n })
    }

    /// Re-checks the invariants of a space built by hand or deserialized.
    pub fn validate(&self) -> Result<()> {
        match self {
            Space::WeightedLq { q, .. } => check_q(*q, true),
            Space::Schatten { q } => check_q(*q, false),
            Space::ParallelogramS1 { n, .. } | Space::BipartiteGraph { n } if *n == 0 => {
                Err(Error::param("n", 0.0, "must be a positive integer"))
            }
            Space::Snowflake { base, alpha } => {
                if !(*alpha > 0.0 && *alpha <= 1.0) {
                    return Err(Error::param("alpha", *alpha, "snowflake exponent must lie in (0, 1]"));
                }
                base.validate()
            }
            _ => Ok(()),
        }
    }

    /// Whether points can be averaged (means, barycenters by descent).
    pub fn is_linear(&self) -> bool {
        !matches!(self, Space::Snowflake { .. } | Space::BipartiteGraph { .. })
    }

    /// The `q` of the underlying `L_q`/`S_q`, when there is one.
    pub fn q(&self) -> Option<f64> {
        match self {
            Space::WeightedLq { q, .. } | Space::Schatten { q } => Some(*q),
            Space::ParallelogramS1 { .. } => Some(1.0),
            Space::Snowflake { base, .. } => base.q(),
            _ => None,
        }
    }

    /// `d(λx, λy) = |λ|^h d(x, y)`; `None` when scalar multiples make no sense.
    pub fn homogeneity(&self) -> Option<f64> {
        match self {
            Space::Snowflake { base, alpha } => base.homogeneity().map(|h| h * alpha),
            Space::BipartiteGraph { .. } => None,
            _ => Some(1.0),
        }
    }

    pub fn label(&self) -> String {
        self.to_string()
    }

    /// Checks that `x` is a point of this space.
    pub fn check_point(&self, x: &Point) -> Result<()> {
        match (self, x) {
            (Space::RealLine, Point::Real(_)) => Ok(()),
            (Space::WeightedLq { q, subspace }, Point::Vector(v)) => {
                if q.is_infinite() && v.weights().iter().all(|&w| w == 0.0) {
                    return Err(Error::InvalidPoint("sup norm needs at least one positive weight".into()));
                }
                if *subspace == Subspace::ZeroSum {
                    let s: num_complex::Complex64 = v.entries().iter().sum();
                    let scale: f64 = v.entries().iter().map(|z| z.norm()).sum::<f64>().max(1.0);
                    if s.norm() > 1e-9 * scale {
                        return Err(Error::InvalidPoint(format!("coordinates sum to {s}, not 0")));
                    }
                }
                Ok(())
            }
            (Space::Schatten { .. }, Point::Matrix(_)) => Ok(()),
            (Space::ParallelogramS1 { n, .. }, Point::Vector(v)) => {
                if v.len() != 2 * n {
                    return Err(Error::KindMismatch(format!("expected length {}, got {}", 2 * n, v.len())));
                }
                if v.weights().iter().any(|&w| w != 1.0) {
                    return Err(Error::KindMismatch("parallelogram points carry unit weights".into()));
                }
                Ok(())
            }
            (Space::BipartiteGraph { n }, Point::Vertex(v)) => {
                if v.index >= *n {
                    return Err(Error::KindMismatch(format!("vertex index {} out of range for K_{{{n},{n}}}", v.index)));
                }
                Ok(())
            }
            (Space::Snowflake { base, .. }, _) => base.check_point(x),
            _ => Err(Error::KindMismatch(format!("a {} point does not belong to {self}", x.kind_name()))),
        }
    }

    /// The metric of the space.
    pub fn distance(&self, x: &Point, y: &Point) -> Result<f64> {
        match (self, x, y) {
            (Space::RealLine, Point::Real(a), Point::Real(b)) => Ok((a - b).abs()),
            (Space::WeightedLq { q, .. }, Point::Vector(a), Point::Vector(b)) => {
                same_measure(a, b)?;
                Ok(norms::lq_distance(a, b, *q))
            }
            (Space::Schatten { q }, Point::Matrix(a), Point::Matrix(b)) => norms::schatten_distance(a, b, *q),
            (Space::ParallelogramS1 { n, lambda }, Point::Vector(a), Point::Vector(b)) => {
                norms::parallelogram_distance_with(a, b, *n, *lambda)
            }
            (Space::BipartiteGraph { n }, Point::Vertex(a), Point::Vertex(b)) => {
                if a.index >= *n || b.index >= *n {
                    return Err(Error::KindMismatch(format!("vertex out of range for K_{{{n},{n}}}")));
                }
                Ok(if a == b {
                    0.0
                } else if a.side == b.side {
                    2.0
                } else {
                    1.0
                })
            }
            (Space::Snowflake { base, alpha }, _, _) => Ok(base.distance(x, y)?.powf(*alpha)),
            _ => Err(Error::KindMismatch(format!(
                "cannot measure {} and {} points in {self}",
                x.kind_name(),
                y.kind_name()
            ))),
        }
    }

    /// `d(x, y)^p`. A snowflake delegates to its base with exponent `alpha·p`,
    /// so `d_{S^α}(x,y)^p` and `d_S(x,y)^{αp}` are the same floating-point value.
    pub fn distance_pow(&self, x: &Point, y: &Point, p: f64) -> Result<f64> {
        match self {
            Space::Snowflake { base, alpha } => base.distance_pow(x, y, alpha * p),
            _ => Ok(pow(self.distance(x, y)?, p)),
        }
    }

    /// Norm of a point of a linear space.
    pub fn norm(&self, x: &Point) -> Result<f64> {
        match (self, x) {
            (Space::RealLine, Point::Real(a)) => Ok(a.abs()),
            (Space::WeightedLq { q, .. }, Point::Vector(v)) => lq_norm(v, *q),
            (Space::Schatten { q }, Point::Matrix(m)) => schatten_norm(m, *q),
            (Space::ParallelogramS1 { lambda, .. }, Point::Vector(v)) => Ok(norms::parallelogram_norm_with(v.entries(), *lambda)),
            _ => Err(Error::Unsupported {
                operation: "norm",
                space: self.to_string(),
            }),
        }
    }

    /// A subgradient of the norm at `x`, on the flat (re, im) coordinates,
    /// together with the norm itself.
    ///
    /// Nonsmooth points use fixed selections: zero components at vanishing
    /// coordinates, and the first maximizing coordinate for `q = ∞`.
    pub fn norm_subgradient(&self, x: &Point) -> Result<(f64, Vec<f64>)> {
        match (self, x) {
            (Space::RealLine, Point::Real(a)) => {
                let g = if *a > 0.0 {
                    1.0
                } else if *a < 0.0 {
                    -1.0
                } else {
                    0.0
                };
                Ok((a.abs(), vec![g]))
            }
            (Space::WeightedLq { q, .. }, Point::Vector(v)) => Ok(norms::lq_subgradient(v, *q)),
            (Space::Schatten { q }, Point::Matrix(m)) => Ok(norms::schatten_subgradient(m, *q)),
            (Space::ParallelogramS1 { lambda: LambdaVariant::Squared, .. }, Point::Vector(v)) => {
                Ok(norms::parallelogram_subgradient(v.entries()))
            }
            _ => Err(Error::Unsupported {
                operation: "norm subgradient",
                space: self.to_string(),
            }),
        }
    }

    /// Euclidean projection of flat coordinates onto the admissible subspace.
    pub(crate) fn project(&self, x: Point) -> Point {
        match self {
            Space::WeightedLq { subspace: Subspace::ZeroSum, .. } => match &x {
                Point::Vector(v) => {
                    let mean = v.entries().iter().sum::<num_complex::Complex64>() / v.len() as f64;
                    x.map_complex(|z| z - mean)
                }
                _ => x,
            },
            _ => x,
        }
    }

    /// Projection applied to a direction (the subspace is linear, so this is
    /// the same map).
    pub(crate) fn project_direction(&self, g: &mut [f64]) {
        if let Space::WeightedLq { subspace: Subspace::ZeroSum, .. } = self {
            let n = g.len() / 2;
            let (mut re, mut im) = (0.0, 0.0);
            for k in 0..n {
                re += g[2 * k];
                im += g[2 * k + 1];
            }
            re /= n as f64;
            im /= n as f64;
            for k in 0..n {
                g[2 * k] -= re;
                g[2 * k + 1] -= im;
            }
        }
    }
}

pub(crate) fn pow(d: f64, p: f64) -> f64 {
    if p == 1.0 {
        d
    } else if p == 2.0 {
        d * d
    } else {
        d.powf(p)
    }
}

fn same_measure(a: &CVector, b: &CVector) -> Result<()> {
    if a.len() != b.len() {
        return Err(Error::KindMismatch(format!("vector lengths {} and {} differ", a.len(), b.len())));
    }
    if !a.same_measure(b) {
        return Err(Error::KindMismatch("vectors carry different weights".into()));
    }
    Ok(())
}

fn check_q(q: f64, allow_infinity: bool) -> Result<()> {
    if q.is_nan() || q < 1.0 {
        return Err(Error::param("q", q, "must be at least 1"));
    }
    if q.is_infinite() && !allow_infinity {
        return Err(Error::param("q", q, "must be finite"));
    }
    Ok(())
}

fn fmt_q(q: f64) -> String {
    if q.is_infinite() {
        "inf".into()
    } else {
        format!("{q}")
    }
}

impl fmt::Display for Space {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Space::WeightedLq { q, subspace: Subspace::Full } => write!(f, "lq({})", fmt_q(*q)),
            Space::WeightedLq { q, subspace: Subspace::ZeroSum } => write!(f, "lq0({})", fmt_q(*q)),
            Space::Schatten { q } => write!(f, "schatten({q})"),
            Space::ParallelogramS1 { n, lambda: LambdaVariant::Squared } => write!(f, "s1par({n})"),
            Space::ParallelogramS1 { n, lambda: LambdaVariant::AsPrinted } => write!(f, "s1par_unsquared({n})"),
            Space::Snowflake { base, alpha } => write!(f, "snowflake({base},{alpha})"),
            Space::BipartiteGraph { n } => write!(f, "bipartite({n})"),
            Space::RealLine => write!(f, "real"),
        }
    }
}
