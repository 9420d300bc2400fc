//! Multi-start projected subgradient descent for
//! `z ↦ E d(X, z)^p + E d(Y, z)^p` on a normed space.

use rayon::prelude::*;
use serde::Serialize;

use crate::distributions::{mean, moment_about, Config, FiniteDist};
use crate::error::{Error, Result};
use crate::spaces::{lq_subgradient_into, Point, Space};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", content = "index", rename_all = "snake_case")]
pub enum StartPoint {
    /// Atom by position in the list of `X` atoms followed by `Y` atoms.
    Atom(usize),
    MixtureMean,
    Zero,
}

#[derive(Clone, Debug, PartialEq)]
pub struct BarycenterCert {
    pub z_star: Point,
    pub value: f64,
    /// Subgradient steps summed over all starts.
    pub iterations: usize,
    pub starts: usize,
    pub best_start: StartPoint,
}

/// Step schedule of the solver.
///
/// Each start runs `stages` rounds from the incumbent; round `k` uses steps
/// `s_0 / (shrink^k √j)`, `j = 1..iterations_per_stage`, where `s_0` is the
/// diameter of the support. A round ends early after `stall` steps without
/// improvement. Only the `max_starts` candidates with the lowest initial
/// objective are descended from (ties keep candidate order).
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SolverOptions {
    pub stages: usize,
    pub iterations_per_stage: usize,
    pub shrink: f64,
    pub stall: usize,
    pub max_starts: usize,
    pub parallel: bool,
}

impl Default for SolverOptions {
    fn default() -> Self {
        Self {
            stages: 10,
            iterations_per_stage: 5000,
            shrink: 4.0,
            stall: 1500,
            max_starts: 4,
            parallel: true,
        }
    }
}

/// `E d(X, z)^p + E d(Y, z)^p`.
pub fn barycenter_objective(c: &Config, z: &Point) -> Result<f64> {
    Ok(moment_about(c.x(), z, c.p())? + moment_about(c.y(), z, c.p())?)
}

pub fn minimize_barycenter(c: &Config) -> Result<BarycenterCert> {
    minimize_barycenter_with(c, &SolverOptions::default())
}

pub fn minimize_barycenter_with(c: &Config, opts: &SolverOptions) -> Result<BarycenterCert> {
    let p = c.p();
    if p < 1.0 {
        return Err(Error::param("p", p, "barycenter minimization needs p >= 1 (convexity)"));
    }
    let space = c.space();
    if !space.is_linear() {
        return Err(Error::Unsupported {
            operation: "barycenter minimization",
            space: space.to_string(),
        });
    }

    let mut starts = start_points(c)?;
    let initial = starts
        .iter()
        .map(|(_, z)| barycenter_objective(c, z))
        .collect::<Result<Vec<f64>>>()?;
    let mut order: Vec<usize> = (0..starts.len()).collect();
    order.sort_by(|&a, &b| initial[a].total_cmp(&initial[b]));
    order.truncate(opts.max_starts.max(1));
    order.sort_unstable();
    starts = order.into_iter().map(|i| starts[i].clone()).collect();
    let diameter = support_diameter(c)?;
    let atoms: Vec<(&Point, f64)> = c.x().support().chain(c.y().support()).collect();

    let run = |(_, z0): &(StartPoint, Point)| -> Result<(f64, Point, usize)> {
        descend(space, &atoms, p, z0.clone(), diameter, opts)
    };
    let results: Vec<(f64, Point, usize)> = if opts.parallel {
        starts.par_iter().map(run).collect::<Result<_>>()?
    } else {
        starts.iter().map(run).collect::<Result<_>>()?
    };

    let mut best = 0;
    for (i, r) in results.iter().enumerate() {
        if r.0 < results[best].0 {
            best = i;
        }
    }
    let z_star = results[best].1.clone();
    let value = barycenter_objective(c, &z_star)?;
    Ok(BarycenterCert {
        z_star,
        value,
        iterations: results.iter().map(|r| r.2).sum(),
        starts: starts.len(),
        best_start: starts[best].0,
    })
}

fn start_points(c: &Config) -> Result<Vec<(StartPoint, Point)>> {
    let space = c.space();
    let mut out: Vec<(StartPoint, Point)> = Vec::new();
    let mut push = |label: StartPoint, z: Point| {
        if !out.iter().any(|(_, w)| w.same_atom(&z)) {
            out.push((label, z));
        }
    };
    for (i, a) in c.x().atoms().iter().chain(c.y().atoms()).enumerate() {
        push(StartPoint::Atom(i), a.clone());
    }
    let m = mixture_mean(c)?;
    let zero = m.zero_like().expect("linear spaces have an origin");
    push(StartPoint::MixtureMean, space.project(m));
    push(StartPoint::Zero, zero);
    Ok(out)
}

/// `½ EX + ½ EY`.
pub fn mixture_mean(c: &Config) -> Result<Point> {
    mean(c.x())?.linear_combination(0.5, &mean(c.y())?, 0.5)
}

fn support_diameter(c: &Config) -> Result<f64> {
    let atoms: Vec<&Point> = c.x().support().chain(c.y().support()).map(|(a, _)| a).collect();
    let mut d: f64 = 0.0;
    for (i, a) in atoms.iter().enumerate() {
        for b in &atoms[i + 1..] {
            d = d.max(c.space().distance(a, b)?);
        }
    }
    Ok(d)
}

/// Objective and a subgradient at `z`, the latter projected onto the
/// admissible directions.
fn value_and_subgradient(space: &Space, atoms: &[(&Point, f64)], p: f64, z: &Point) -> Result<(f64, Vec<f64>)> {
    let len = z.flat_len().expect("linear point");
    let mut value = 0.0;
    let mut grad = vec![0.0; len];
    let mut accumulate = |w: f64, d: f64, g: &[f64]| {
        if d == 0.0 {
            return;
        }
        let dp = if p == 1.0 { d } else { d.powf(p) };
        value += w * dp;
        let scale = w * p * dp / d;
        for (acc, gi) in grad.iter_mut().zip(g) {
            *acc += scale * gi;
        }
    };
    if let (Space::WeightedLq { q, .. }, Point::Vector(zv)) = (space, z) {
        // Allocation-free path for the common vector case.
        let mut diff = zv.entries().to_vec();
        let mut g = vec![0.0; len];
        for (a, w) in atoms {
            let Point::Vector(av) = a else {
                return Err(Error::KindMismatch(format!("{} atom in an L_q space", a.kind_name())));
            };
            if av.len() != zv.len() || !zv.same_measure(av) {
                return Err(Error::KindMismatch("vectors live on different measure spaces".into()));
            }
            for ((d, x), y) in diff.iter_mut().zip(zv.entries()).zip(av.entries()) {
                *d = x - y;
            }
            let d = lq_subgradient_into(&diff, zv.weights(), *q, &mut g);
            accumulate(*w, d, &g);
        }
    } else {
        for (a, w) in atoms {
            let (d, g) = space.norm_subgradient(&z.sub(a)?)?;
            accumulate(*w, d, &g);
        }
    }
    space.project_direction(&mut grad);
    Ok((value, grad))
}

fn descend(
    space: &Space,
    atoms: &[(&Point, f64)],
    p: f64,
    z0: Point,
    diameter: f64,
    opts: &SolverOptions,
) -> Result<(f64, Point, usize)> {
    let mut best_z = z0;
    let (mut best_v, _) = value_and_subgradient(space, atoms, p, &best_z)?;
    let mut steps = 0;
    if diameter == 0.0 {
        return Ok((best_v, best_z, steps));
    }
    for stage in 0..opts.stages {
        let s0 = diameter / opts.shrink.powi(stage as i32);
        let mut z = best_z.clone();
        let mut since_improvement = 0;
        for k in 1..=opts.iterations_per_stage {
            let (v, g) = value_and_subgradient(space, atoms, p, &z)?;
            steps += 1;
            if v < best_v {
                best_v = v;
                best_z = z.clone();
                since_improvement = 0;
            } else {
                since_improvement += 1;
                if since_improvement > opts.stall {
                    break;
                }
            }
            let gnorm = g.iter().map(|x| x * x).sum::<f64>().sqrt();
            if gnorm == 0.0 {
                break;
            }
            let step = s0 / (k as f64).sqrt() / gnorm;
            z = space.project(z.axpy(-step, &g));
        }
    }
    Ok((best_v, best_z, steps))
}

/// `E_z [E d(X,z)^p + E d(Y,z)^p]` for `z` drawn from the mixture of the
/// laws, which equals `½ E d(X,X')^p + ½ E d(Y,Y')^p + E d(X,Y)^p`.
/// Valid for every `p > 0`.
pub fn random_center_value(x: &FiniteDist, y: &FiniteDist, p: f64) -> Result<f64> {
    use crate::distributions::{cross_moment, self_moment};
    Ok(0.5 * (self_moment(x, p)? + self_moment(y, p)?) + cross_moment(x, y, p)?)
}
