//! Extremal configurations together with the ratio value they are known to
//! produce.

mod registry;
mod verify;

use std::collections::BTreeMap;

use num_complex::Complex64;
use serde::Serialize;

pub use registry::{construction, constructions, Construction, ParamSpec, Params};
pub use verify::{verify, Verification};

use crate::distributions::{Config, FiniteDist};
use crate::error::{Error, Result};
use crate::moduli::RatioName;
use crate::spaces::{CVector, Point, Side, Space, Vertex};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum ConstructionId {
    FnInf,
    FnQ,
    Bipartite,
    DisjointBernoulli,
    JensenTwoPoint,
    JensenEps,
    JensenBasis,
    JensenRademacher,
    SchattenParallelogram,
    TwoPoint,
    EpsAtom,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum PredictionKind {
    /// The target ratio equals the prediction.
    ExactRatio,
    /// The target ratio is at least the prediction.
    LowerBound,
    /// The prediction is a limit the target ratio approaches from below.
    UpperBoundLimit,
}

#[derive(Clone, Debug, PartialEq)]
pub struct NamedConstruction {
    pub id: ConstructionId,
    pub params: BTreeMap<String, f64>,
    pub config: Config,
    /// The ratio the prediction refers to.
    pub target: RatioName,
    pub predicted: f64,
    pub prediction_kind: PredictionKind,
}

/// Largest `n` for the product-space Rademacher realization.
pub const MAX_PRODUCT_BITS: usize = 14;

/// How `n` symmetric ±1 variables are laid out on a finite probability space.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Realization {
    /// `{−1,1}^n` with uniform weights: fully independent, `n ≤ 14`.
    Product,
    /// Walsh characters `1..=n` on `{−1,1}^m`, `m = ⌈log₂(n+1)⌉`: only
    /// pairwise independent, which is all the pair distances depend on.
    Walsh,
}

impl Realization {
    /// Product space when it fits, Walsh characters otherwise.
    pub fn for_size(n: usize) -> Self {
        if n <= MAX_PRODUCT_BITS {
            Realization::Product
        } else {
            Realization::Walsh
        }
    }

    /// `(bits, character index of variable i)`.
    fn layout(self, n: usize) -> Result<(usize, Vec<usize>)> {
        match self {
            Realization::Product => {
                if n > MAX_PRODUCT_BITS {
                    return Err(Error::param("n", n as f64, "product realization needs n <= 14"));
                }
                Ok((n, (0..n).map(|i| 1 << i).collect()))
            }
            Realization::Walsh => {
                let bits = usize::BITS as usize - n.leading_zeros() as usize;
                if bits > MAX_PRODUCT_BITS {
                    return Err(Error::param("n", n as f64, "Walsh realization needs n < 2^14"));
                }
                Ok((bits, (1..=n).collect()))
            }
        }
    }
}

/// Values of `ω ↦ (−1)^{⟨index, ω⟩}` over `ω ∈ {0,1}^bits`.
fn character(index: usize, bits: usize) -> Vec<f64> {
    (0..1usize << bits)
        .map(|k| if (index & k).count_ones().is_multiple_of(2) { 1.0 } else { -1.0 })
        .collect()
}

fn to_points(rows: Vec<Vec<f64>>, weights: &std::sync::Arc<[f64]>) -> Result<Vec<Point>> {
    rows.into_iter()
        .map(|r| {
            let e = r.into_iter().map(|x| Complex64::new(x, 0.0)).collect();
            Ok(Point::Vector(CVector::new(e, weights.clone())?))
        })
        .collect()
}

fn params(pairs: &[(&str, f64)]) -> BTreeMap<String, f64> {
    pairs.iter().map(|(k, v)| (k.to_string(), *v)).collect()
}

fn check_p(p: f64) -> Result<()> {
    if !(p >= 1.0 && p.is_finite()) {
        return Err(Error::param("p", p, "must be a finite real at least 1"));
    }
    Ok(())
}

fn check_q(q: f64) -> Result<()> {
    if !(q >= 1.0) {
        return Err(Error::param("q", q, "must be at least 1"));
    }
    Ok(())
}

/// Integer coordinates of the `j`-th atom of `A_n` (`first = true`) or `B_n`.
pub fn fn_atom(n: usize, j: usize, first: bool) -> Vec<i64> {
    let ni = n as i64;
    let mut v = vec![0i64; 2 * n];
    for k in 0..n {
        let (own, other) = if first { (k, n + k) } else { (n + k, k) };
        v[own] = if k == j { 3 * ni - 2 } else { -(ni + 2) };
        v[other] = ni - 2;
    }
    v
}

/// `X` uniform on `A_n`, `Y` uniform on `B_n`, inside the zero-sum
/// hyperplane of `ℓ_q^{2n}`.
pub fn make_fn(n: usize, q: f64, p: f64) -> Result<NamedConstruction> {
    if n < 2 {
        return Err(Error::param("n", n as f64, "must be at least 2"));
    }
    check_q(q)?;
    check_p(p)?;
    let space = Space::lq_zero_sum(q)?;
    let build = |first: bool| -> Result<FiniteDist> {
        let atoms = (0..n)
            .map(|j| {
                let v: Vec<f64> = fn_atom(n, j, first).into_iter().map(|x| x as f64).collect();
                Ok(Point::Vector(CVector::from_reals(&v)?))
            })
            .collect::<Result<Vec<_>>>()?;
        FiniteDist::uniform(space.clone(), atoms)
    };
    let config = Config::new(build(true)?, build(false)?, p)?;
    let nf = n as f64;
    let (id, predicted, kind) = if q.is_infinite() {
        (ConstructionId::FnInf, 2.0 * ((3.0 * nf - 2.0) / (2.0 * nf)).powf(p), PredictionKind::ExactRatio)
    } else {
        let inner = (3.0 * nf - 2.0).powf(q) + (nf - 1.0) * (nf + 2.0).powf(q) + nf * (nf - 2.0).powf(q);
        let value = 2.0 * inner.powf(p / q) / (2.0 * nf).powf(p * (q + 1.0) / q);
        (ConstructionId::FnQ, value, PredictionKind::LowerBound)
    };
    Ok(NamedConstruction {
        id,
        params: params(&[("n", nf), ("q", q), ("p", p)]),
        config,
        target: RatioName::Barycenter,
        predicted,
        prediction_kind: kind,
    })
}

/// `X` uniform on the left side of `K_{n,n}`, `Y` uniform on the right side.
pub fn make_bipartite(n: usize, p: f64) -> Result<NamedConstruction> {
    check_p(p)?;
    let space = Space::bipartite(n)?;
    let side = |side| -> Result<FiniteDist> {
        FiniteDist::uniform(space.clone(), (0..n).map(|index| Point::Vertex(Vertex { side, index })).collect())
    };
    let nf = n as f64;
    Ok(NamedConstruction {
        id: ConstructionId::Bipartite,
        params: params(&[("n", nf), ("p", p)]),
        config: Config::new(side(Side::Left)?, side(Side::Right)?, p)?,
        target: RatioName::MetricBarycenter,
        predicted: (nf - 1.0) / nf * 2f64.powf(p) + 1.0,
        prediction_kind: PredictionKind::ExactRatio,
    })
}

/// Two Rademacher systems with disjoint supports in `L_q ⊕_q L_q`.
pub fn make_disjoint_bernoulli(n: usize, q: f64, p: f64) -> Result<NamedConstruction> {
    make_disjoint_bernoulli_with(n, q, p, Realization::for_size(n))
}

pub fn make_disjoint_bernoulli_with(n: usize, q: f64, p: f64, realization: Realization) -> Result<NamedConstruction> {
    if n == 0 {
        return Err(Error::param("n", 0.0, "must be a positive integer"));
    }
    if !q.is_finite() {
        return Err(Error::param("q", q, "must be finite"));
    }
    check_q(q)?;
    check_p(p)?;
    let (bits, indices) = realization.layout(n)?;
    let half = 1usize << bits;
    let weights: std::sync::Arc<[f64]> = vec![1.0 / half as f64; 2 * half].into();
    let embed = |first: bool| -> Vec<Vec<f64>> {
        indices
            .iter()
            .map(|&i| {
                let r = character(i, bits);
                let mut v = vec![0.0; 2 * half];
                let offset = if first { 0 } else { half };
                v[offset..offset + half].copy_from_slice(&r);
                v
            })
            .collect()
    };
    let space = Space::lq(q)?;
    let x = FiniteDist::uniform(space.clone(), to_points(embed(true), &weights)?)?;
    let y = FiniteDist::uniform(space, to_points(embed(false), &weights)?)?;
    let nf = n as f64;
    Ok(NamedConstruction {
        id: ConstructionId::DisjointBernoulli,
        params: params(&[("n", nf), ("q", q), ("p", p)]),
        config: Config::new(x, y, p)?,
        target: RatioName::Roundness,
        predicted: (1.0 - 1.0 / nf) * 2f64.powf(1.0 + p * (q - 2.0) / q),
        prediction_kind: PredictionKind::ExactRatio,
    })
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum JensenKind {
    /// Uniform on `{−1, 1}`.
    TwoPoint,
    /// Mass `ε` at 1 and `1 − ε` at 0 on the real line.
    Eps(f64),
    /// Uniform on `{±e_1, …, ±e_n}` in `ℓ_q^n`.
    Basis { n: usize, q: f64 },
    /// Uniform on `{±r_1, …, ±r_n}`, Rademacher functions in `L_q`.
    Rademacher { n: usize, q: f64 },
}

/// A single law `X` (stored as both halves of the configuration) whose
/// Jensen ratio is known.
pub fn make_jensen(kind: JensenKind, p: f64) -> Result<NamedConstruction> {
    check_p(p)?;
    let (id, dist, predicted, ps) = match kind {
        JensenKind::TwoPoint => {
            let d = FiniteDist::uniform(Space::RealLine, vec![Point::Real(-1.0), Point::Real(1.0)])?;
            (ConstructionId::JensenTwoPoint, d, 2f64.powf(p - 1.0), params(&[("p", p)]))
        }
        JensenKind::Eps(eps) => {
            if !(eps > 0.0 && eps < 1.0) {
                return Err(Error::param("eps", eps, "must lie in (0, 1)"));
            }
            let d = FiniteDist::new(Space::RealLine, vec![Point::Real(1.0), Point::Real(0.0)], vec![eps, 1.0 - eps])?;
            let predicted = 2.0 * eps * (1.0 - eps) / ((1.0 - eps) * eps.powf(p) + eps * (1.0 - eps).powf(p));
            (ConstructionId::JensenEps, d, predicted, params(&[("eps", eps), ("p", p)]))
        }
        JensenKind::Basis { n, q } => {
            if n == 0 {
                return Err(Error::param("n", 0.0, "must be a positive integer"));
            }
            check_q(q)?;
            let mut atoms = Vec::with_capacity(2 * n);
            for k in 0..n {
                for s in [1.0, -1.0] {
                    atoms.push(Point::Vector(CVector::basis(n, k, Complex64::new(s, 0.0))?));
                }
            }
            let d = FiniteDist::uniform(Space::lq(q)?, atoms)?;
            let nf = n as f64;
            let predicted = (nf - 1.0) / nf * 2f64.powf(p / q) + 2f64.powf(p) / (2.0 * nf);
            (ConstructionId::JensenBasis, d, predicted, params(&[("n", nf), ("q", q), ("p", p)]))
        }
        JensenKind::Rademacher { n, q } => {
            if n == 0 {
                return Err(Error::param("n", 0.0, "must be a positive integer"));
            }
            check_q(q)?;
            if !q.is_finite() {
                return Err(Error::param("q", q, "must be finite"));
            }
            let (bits, indices) = Realization::for_size(n).layout(n)?;
            let weights: std::sync::Arc<[f64]> = vec![1.0 / (1usize << bits) as f64; 1 << bits].into();
            let mut rows = Vec::with_capacity(2 * n);
            for &i in &indices {
                let r = character(i, bits);
                rows.push(r.iter().map(|x| -x).collect());
                rows.push(r);
            }
            let d = FiniteDist::uniform(Space::lq(q)?, to_points(rows, &weights)?)?;
            let nf = n as f64;
            let predicted = (nf - 1.0) / nf * 2f64.powf(p * (q - 1.0) / q) + 2f64.powf(p) / (2.0 * nf);
            (ConstructionId::JensenRademacher, d, predicted, params(&[("n", nf), ("q", q), ("p", p)]))
        }
    };
    Ok(NamedConstruction {
        id,
        params: ps,
        config: Config::new(dist.clone(), dist, p)?,
        target: RatioName::Jensen,
        predicted,
        prediction_kind: PredictionKind::ExactRatio,
    })
}

/// `X` uniform on `e_1..e_n`, `Y` uniform on `i·e_{n+1}..i·e_{2n}` in the
/// parallelogram trace-class image of `ℂ^{2n}`.
pub fn make_schatten_parallelogram(n: usize, p: f64) -> Result<NamedConstruction> {
    check_p(p)?;
    let space = Space::parallelogram_s1(n)?;
    let one = Complex64::new(1.0, 0.0);
    let i = Complex64::new(0.0, 1.0);
    let x_atoms = (0..n).map(|k| CVector::basis(2 * n, k, one).map(Point::Vector)).collect::<Result<_>>()?;
    let y_atoms = (0..n).map(|k| CVector::basis(2 * n, n + k, i).map(Point::Vector)).collect::<Result<_>>()?;
    let x = FiniteDist::uniform(space.clone(), x_atoms)?;
    let y = FiniteDist::uniform(space, y_atoms)?;
    let nf = n as f64;
    Ok(NamedConstruction {
        id: ConstructionId::SchattenParallelogram,
        params: params(&[("n", nf), ("p", p)]),
        config: Config::new(x, y, p)?,
        target: RatioName::Roundness,
        predicted: (1.0 - 1.0 / nf) * 2f64.powf(p / 2.0 + 1.0),
        prediction_kind: PredictionKind::ExactRatio,
    })
}

/// `X`, `Y` independent and both uniform on `{0, 1}`.
pub fn make_two_point(p: f64) -> Result<NamedConstruction> {
    check_p(p)?;
    let d = FiniteDist::uniform(Space::RealLine, vec![Point::Real(0.0), Point::Real(1.0)])?;
    Ok(NamedConstruction {
        id: ConstructionId::TwoPoint,
        params: params(&[("p", p)]),
        config: Config::new(d.clone(), d, p)?,
        target: RatioName::Barycenter,
        predicted: 2f64.powf(2.0 - p),
        prediction_kind: PredictionKind::ExactRatio,
    })
}

/// `X = Y` with mass `ε` at a unit vector and `1 − ε` at the origin; the
/// prediction is for `E d(X,X')^p / inf_z E d(X,z)^p`.
pub fn make_eps_atom(eps: f64, p: f64) -> Result<NamedConstruction> {
    if !(eps > 0.0 && eps < 1.0) {
        return Err(Error::param("eps", eps, "must lie in (0, 1)"));
    }
    if !(p > 1.0 && p.is_finite()) {
        return Err(Error::param("p", p, "must be a finite real above 1"));
    }
    let d = FiniteDist::new(Space::RealLine, vec![Point::Real(1.0), Point::Real(0.0)], vec![eps, 1.0 - eps])?;
    let e = 1.0 / (p - 1.0);
    Ok(NamedConstruction {
        id: ConstructionId::EpsAtom,
        params: params(&[("eps", eps), ("p", p)]),
        config: Config::new(d.clone(), d, p)?,
        target: RatioName::InfCenter,
        predicted: 2.0 * (eps.powf(e) + (1.0 - eps).powf(e)).powf(p - 1.0),
        prediction_kind: PredictionKind::ExactRatio,
    })
}

#[cfg(test)]
mod tests;
