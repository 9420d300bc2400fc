//! Seeded hill-climbing over finite configurations to push a ratio up.
//!
//! Values found here are empirical lower bounds for the supremum of the
//! ratio over the space, never certificates of its value.

use std::sync::Arc;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Gamma, StandardNormal};
use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};

use crate::constructions::{make_disjoint_bernoulli, make_schatten_parallelogram};
use crate::distributions::{Config, FiniteDist};
use crate::error::{Error, Result};
use crate::json::{config_to_json, number_to_json};
use crate::moduli::{barycenter_ratio, mixture_ratio, roundness_ratio};
use crate::spaces::{CMatrix, CVector, LambdaVariant, Point, Side, Space, Subspace, Vertex};

pub const RESULT_LABEL: &str = "empirical lower bound";

const SCALE_MIN: f64 = 1e-6;
const SCALE_MAX: f64 = 10.0;
/// Concentration of the Dirichlet reweighting step.
const DIRICHLET_CONCENTRATION: f64 = 200.0;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Objective {
    Roundness,
    Barycenter,
    Mixture,
}

impl Objective {
    pub fn as_str(self) -> &'static str {
        match self {
            Objective::Roundness => "roundness",
            Objective::Barycenter => "barycenter",
            Objective::Mixture => "mixture",
        }
    }
}

impl std::str::FromStr for Objective {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "roundness" => Ok(Objective::Roundness),
            "barycenter" => Ok(Objective::Barycenter),
            "mixture" => Ok(Objective::Mixture),
            _ => Err(Error::UnknownName {
                kind: "objective",
                name: s.to_string(),
                available: "roundness, barycenter, mixture".into(),
            }),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SearchSpec {
    pub space: Space,
    pub objective: Objective,
    pub p: f64,
    /// Inclusive bounds on the number of atoms of `X`.
    pub atoms_x: (usize, usize),
    pub atoms_y: (usize, usize),
    /// Proposals per restart.
    pub budget: usize,
    pub restarts: usize,
    pub seed: u64,
    /// Vector length in `L_q` (default twice the largest atom bound) or
    /// matrix size in `S_q` (default 2).
    pub dim: Option<usize>,
    /// Start restart 0 from a known extremal configuration when one exists.
    pub warm_start: bool,
}

impl SearchSpec {
    pub fn new(space: Space, objective: Objective, p: f64) -> Self {
        Self {
            space,
            objective,
            p,
            atoms_x: (1, 4),
            atoms_y: (1, 4),
            budget: 1000,
            restarts: 4,
            seed: 0,
            dim: None,
            warm_start: true,
        }
    }

    pub fn validate(&self) -> Result<()> {
        self.space.validate()?;
        if self.budget == 0 {
            return Err(Error::param("budget", 0.0, "must be at least 1"));
        }
        if self.restarts == 0 {
            return Err(Error::param("restarts", 0.0, "must be at least 1"));
        }
        for (name, (lo, hi)) in [("atoms_x", self.atoms_x), ("atoms_y", self.atoms_y)] {
            if lo == 0 || hi < lo {
                return Err(Error::param(name, lo as f64, "bounds must satisfy 1 <= min <= max"));
            }
        }
        if !(self.p > 0.0 && self.p.is_finite()) {
            return Err(Error::param("p", self.p, "must be a positive real"));
        }
        if self.objective == Objective::Barycenter && !(self.p >= 1.0 && self.space.is_linear()) {
            return Err(Error::param("p", self.p, "barycenter search needs p >= 1 on a linear space"));
        }
        if self.objective == Objective::Mixture && !self.space.is_linear() {
            return Err(Error::Unsupported {
                operation: "mixture search",
                space: self.space.to_string(),
            });
        }
        if matches!(self.dim, Some(0)) {
            return Err(Error::param("dim", 0.0, "must be at least 1"));
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SearchResult {
    pub best_config: Config,
    pub best_ratio: f64,
    /// `(iteration, ratio)` at every improvement of the winning restart.
    pub trace: Vec<(usize, f64)>,
    pub seed: u64,
    pub best_restart: usize,
    pub warm_start_ratio: Option<f64>,
    pub objective: Objective,
}

impl SearchResult {
    pub fn to_json(&self) -> Value {
        json!({
            "label": RESULT_LABEL,
            "objective": self.objective.as_str(),
            "best_ratio": number_to_json(self.best_ratio),
            "seed": self.seed,
            "best_restart": self.best_restart,
            "warm_start_ratio": self.warm_start_ratio.map(number_to_json),
            "trace": self.trace.iter().map(|(i, r)| json!([i, number_to_json(*r)])).collect::<Vec<_>>(),
            "best_config": config_to_json(&self.best_config),
        })
    }
}

/// The objective recomputed from scratch; the value of record.
pub fn certify_ratio(config: &Config, objective: Objective) -> Result<f64> {
    Ok(match objective {
        Objective::Roundness => roundness_ratio(config)?.value,
        Objective::Barycenter => barycenter_ratio(config)?.value,
        Objective::Mixture => mixture_ratio(config)?.value,
    })
}

pub fn run_search(spec: &SearchSpec) -> Result<SearchResult> {
    spec.validate()?;
    let outcomes: Vec<Result<Restart>> = (0..spec.restarts).into_par_iter().map(|i| run_restart(spec, i)).collect();
    let mut best: Option<(usize, Restart)> = None;
    let mut warm_start_ratio = None;
    for (i, r) in outcomes.into_iter().enumerate() {
        let r = r?;
        if r.warm {
            warm_start_ratio = Some(r.initial);
        }
        let better = match &best {
            None => true,
            Some((_, b)) => r.ratio > b.ratio,
        };
        if better {
            best = Some((i, r));
        }
    }
    let (best_restart, r) = best.expect("at least one restart");
    let best_ratio = certify_ratio(&r.config, spec.objective)?;
    Ok(SearchResult {
        best_config: r.config,
        best_ratio,
        trace: r.trace,
        seed: spec.seed,
        best_restart,
        warm_start_ratio,
        objective: spec.objective,
    })
}

struct Restart {
    config: Config,
    ratio: f64,
    initial: f64,
    trace: Vec<(usize, f64)>,
    warm: bool,
}

#[derive(Clone)]
struct State {
    x: Vec<Point>,
    px: Vec<f64>,
    y: Vec<Point>,
    py: Vec<f64>,
}

impl State {
    fn config(&self, spec: &SearchSpec) -> Result<Config> {
        Config::new(
            FiniteDist::new(spec.space.clone(), self.x.clone(), self.px.clone())?,
            FiniteDist::new(spec.space.clone(), self.y.clone(), self.py.clone())?,
            spec.p,
        )
    }

    fn from_config(c: &Config) -> Self {
        Self {
            x: c.x().atoms().to_vec(),
            px: c.x().probs().to_vec(),
            y: c.y().atoms().to_vec(),
            py: c.y().probs().to_vec(),
        }
    }

    /// Rescales every atom so that `E d(X,Y)^p = 1`.
    fn normalize(&mut self, spec: &SearchSpec, cross: f64) {
        let Some(h) = spec.space.homogeneity() else { return };
        if !(cross > 0.0 && cross.is_finite()) {
            return;
        }
        let t = cross.powf(-1.0 / (h * spec.p));
        for a in self.x.iter_mut().chain(self.y.iter_mut()) {
            *a = a.map_complex(|z| z * t);
        }
    }
}

fn warm_start(spec: &SearchSpec) -> Option<Config> {
    if spec.objective != Objective::Roundness || spec.p < 1.0 {
        return None;
    }
    let nc = match &spec.space {
        Space::WeightedLq { q, subspace: Subspace::Full } if q.is_finite() => {
            let n = spec.atoms_x.1.min(spec.atoms_y.1).min(crate::constructions::MAX_PRODUCT_BITS);
            make_disjoint_bernoulli(n, *q, spec.p).ok()?
        }
        Space::ParallelogramS1 { n, lambda: LambdaVariant::Squared } => make_schatten_parallelogram(*n, spec.p).ok()?,
        _ => return None,
    };
    Some(nc.config)
}

fn is_complex(space: &Space) -> bool {
    match space {
        Space::Schatten { .. } | Space::ParallelogramS1 { .. } => true,
        Space::Snowflake { base, .. } => is_complex(base),
        _ => false,
    }
}

fn gaussian(rng: &mut impl Rng) -> f64 {
    rng.sample(StandardNormal)
}

fn random_point(space: &Space, spec: &SearchSpec, weights: &Arc<[f64]>, rng: &mut impl Rng) -> Result<Point> {
    Ok(match space {
        Space::RealLine => Point::Real(gaussian(rng)),
        Space::WeightedLq { .. } => {
            let e = (0..weights.len()).map(|_| Complex64::new(gaussian(rng), 0.0)).collect();
            space.project(Point::Vector(CVector::new(e, weights.clone())?))
        }
        Space::ParallelogramS1 { n, .. } => {
            let e = (0..2 * n).map(|_| Complex64::new(gaussian(rng), gaussian(rng))).collect();
            Point::Vector(CVector::unit(e)?)
        }
        Space::Schatten { .. } => {
            let m = spec.dim.unwrap_or(2);
            let e = (0..m * m).map(|_| Complex64::new(gaussian(rng), gaussian(rng))).collect();
            Point::Matrix(CMatrix::new(m, e)?)
        }
        Space::Snowflake { base, .. } => random_point(base, spec, weights, rng)?,
        Space::BipartiteGraph { n } => random_vertex(*n, rng),
    })
}

fn random_vertex(n: usize, rng: &mut impl Rng) -> Point {
    let side = if rng.random_bool(0.5) { Side::Left } else { Side::Right };
    Point::Vertex(Vertex {
        side,
        index: rng.random_range(0..n),
    })
}

fn bipartite_size(space: &Space) -> Option<usize> {
    match space {
        Space::BipartiteGraph { n } => Some(*n),
        Space::Snowflake { base, .. } => bipartite_size(base),
        _ => None,
    }
}

fn perturb(space: &Space, a: &Point, scale: f64, rng: &mut impl Rng) -> Point {
    if let Some(n) = bipartite_size(space) {
        return random_vertex(n, rng);
    }
    let complex = is_complex(space);
    let kick = |z: Complex64, rng: &mut _| {
        let re = scale * gaussian(rng);
        let im = if complex { scale * gaussian(rng) } else { 0.0 };
        z + Complex64::new(re, im)
    };
    let out = match a {
        Point::Real(x) => Point::Real(x + scale * gaussian(rng)),
        Point::Vector(v) => {
            let k = rng.random_range(0..v.len());
            let mut e = v.entries().to_vec();
            e[k] = kick(e[k], rng);
            Point::Vector(CVector::new(e, v.shared_weights()).expect("finite entries"))
        }
        Point::Matrix(m) => {
            let k = rng.random_range(0..m.entries().len());
            let mut e = m.entries().to_vec();
            e[k] = kick(e[k], rng);
            Point::Matrix(CMatrix::new(m.dim(), e).expect("square"))
        }
        Point::Vertex(_) => a.clone(),
    };
    space.project(out)
}

fn base_space(space: &Space) -> &Space {
    match space {
        Space::Snowflake { base, .. } => base_space(base),
        s => s,
    }
}

fn dirichlet_step(p: &[f64], rng: &mut impl Rng) -> Vec<f64> {
    let w: Vec<f64> = p
        .iter()
        .map(|&pi| {
            let shape = DIRICHLET_CONCENTRATION * pi + 1e-3;
            rng.sample(Gamma::new(shape, 1.0).expect("positive shape"))
        })
        .collect();
    let total: f64 = w.iter().sum();
    if !(total > 0.0 && total.is_finite()) {
        return p.to_vec();
    }
    w.into_iter().map(|x| x / total).collect()
}

fn propose(spec: &SearchSpec, s: &State, scale: f64, rng: &mut impl Rng) -> State {
    let mut t = s.clone();
    let on_x = rng.random_bool(0.5);
    let (atoms, probs, bounds) = if on_x {
        (&mut t.x, &mut t.px, spec.atoms_x)
    } else {
        (&mut t.y, &mut t.py, spec.atoms_y)
    };
    let u: f64 = rng.random();
    if u < 0.6 {
        let k = rng.random_range(0..atoms.len());
        atoms[k] = perturb(&spec.space, &atoms[k], scale, rng);
    } else if u < 0.85 {
        *probs = dirichlet_step(probs, rng);
    } else if rng.random_bool(0.5) && atoms.len() < bounds.1 {
        // Split an atom into itself and a perturbed copy.
        let k = rng.random_range(0..atoms.len());
        let copy = perturb(&spec.space, &atoms[k], scale, rng);
        let half = 0.5 * probs[k];
        probs[k] = half;
        atoms.push(copy);
        probs.push(half);
    } else if atoms.len() > bounds.0 {
        let k = rng.random_range(0..atoms.len());
        let mass = probs[k];
        atoms.remove(k);
        probs.remove(k);
        let j = rng.random_range(0..atoms.len());
        probs[j] += mass;
        let total: f64 = probs.iter().sum();
        probs.iter_mut().for_each(|p| *p /= total);
    }
    t
}

fn initial_state(spec: &SearchSpec, rng: &mut ChaCha8Rng) -> Result<State> {
    let len = spec.dim.unwrap_or(2 * spec.atoms_x.1.max(spec.atoms_y.1));
    let weights: Arc<[f64]> = vec![1.0; len].into();
    let space = base_space(&spec.space);
    let mut draw = |(lo, hi): (usize, usize)| -> Result<(Vec<Point>, Vec<f64>)> {
        let n = rng.random_range(lo..=hi);
        let atoms = (0..n).map(|_| random_point(space, spec, &weights, rng)).collect::<Result<Vec<_>>>()?;
        Ok((atoms, vec![1.0 / n as f64; n]))
    };
    let (x, px) = draw(spec.atoms_x)?;
    let (y, py) = draw(spec.atoms_y)?;
    Ok(State { x, px, y, py })
}

fn evaluate(spec: &SearchSpec, s: &State) -> Option<(Config, f64, f64)> {
    let c = s.config(spec).ok()?;
    let cross = c.cross_moment().ok()?;
    if !(cross > 0.0) {
        return None;
    }
    let r = certify_ratio(&c, spec.objective).ok()?;
    r.is_finite().then_some((c, r, cross))
}

fn run_restart(spec: &SearchSpec, index: usize) -> Result<Restart> {
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    rng.set_stream(index as u64);

    let warm = if index == 0 && spec.warm_start { warm_start(spec) } else { None };
    let is_warm = warm.is_some();
    let mut state = match &warm {
        Some(c) => State::from_config(c),
        None => {
            // Redraw until the cross moment is positive.
            let mut tries = 0;
            loop {
                let s = initial_state(spec, &mut rng)?;
                if evaluate(spec, &s).is_some() {
                    break s;
                }
                tries += 1;
                if tries > 100 {
                    return Err(Error::InvalidDistribution("could not draw a nondegenerate start".into()));
                }
            }
        }
    };
    let (_, _, cross) = evaluate(spec, &state)
        .ok_or_else(|| Error::InvalidDistribution("start configuration is degenerate".into()))?;
    state.normalize(spec, cross);
    let (mut config, mut ratio, _) = evaluate(spec, &state)
        .ok_or_else(|| Error::InvalidDistribution("start configuration is degenerate".into()))?;
    let initial = ratio;
    let mut trace = vec![(0, ratio)];
    let mut scale = 0.5f64;

    for it in 1..=spec.budget {
        let candidate = propose(spec, &state, scale, &mut rng);
        match evaluate(spec, &candidate) {
            Some((_, r, cross)) if r > ratio => {
                let mut accepted = candidate;
                accepted.normalize(spec, cross);
                // Keep the normalized copy only if rescaling did not cost the improvement.
                match evaluate(spec, &accepted) {
                    Some((c, r2, _)) if r2 > ratio => {
                        state = accepted;
                        config = c;
                        ratio = r2;
                        trace.push((it, ratio));
                        scale = (scale * 1.5).min(SCALE_MAX);
                    }
                    _ => scale = (scale * 0.9).max(SCALE_MIN),
                }
            }
            _ => scale = (scale * 0.9).max(SCALE_MIN),
        }
    }
    Ok(Restart {
        config,
        ratio,
        initial,
        trace,
        warm: is_warm,
    })
}

#[cfg(test)]
mod tests;
