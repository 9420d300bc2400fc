//! Finitely supported laws and their exact moment functionals.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::spaces::{Point, Space};

/// Probability masses must sum to one within this tolerance.
pub const MASS_TOLERANCE: f64 = 1e-12;

/// Double sums with more atom pairs than this are split across threads.
const PARALLEL_PAIRS: usize = 4096;

#[derive(Clone, Debug, PartialEq)]
pub struct FiniteDist {
    space: Space,
    atoms: Vec<Point>,
    probs: Vec<f64>,
}

impl FiniteDist {
    pub fn new(space: Space, atoms: Vec<Point>, probs: Vec<f64>) -> Result<Self> {
        space.validate()?;
        if atoms.is_empty() {
            return Err(Error::InvalidDistribution("at least one atom is required".into()));
        }
        if atoms.len() != probs.len() {
            return Err(Error::InvalidDistribution(format!(
                "{} atoms but {} probabilities",
                atoms.len(),
                probs.len()
            )));
        }
        if let Some(p) = probs.iter().find(|p| !(p.is_finite() && **p >= 0.0)) {
            return Err(Error::InvalidDistribution(format!("probability {p} is not a nonnegative real")));
        }
        let total: f64 = probs.iter().sum();
        if (total - 1.0).abs() > MASS_TOLERANCE {
            return Err(Error::InvalidDistribution(format!("probabilities sum to {total}, not 1")));
        }
        for (i, a) in atoms.iter().enumerate() {
            space
                .check_point(a)
                .map_err(|e| Error::InvalidDistribution(format!("atom {i}: {e}")))?;
        }
        if let Some(first) = atoms.first() {
            for (i, a) in atoms.iter().enumerate().skip(1) {
                compatible(first, a).map_err(|e| Error::InvalidDistribution(format!("atom {i}: {e}")))?;
            }
        }
        Ok(Self { space, atoms, probs })
    }

    pub fn uniform(space: Space, atoms: Vec<Point>) -> Result<Self> {
        let n = atoms.len();
        if n == 0 {
            return Err(Error::InvalidDistribution("at least one atom is required".into()));
        }
        Self::new(space, atoms, vec![1.0 / n as f64; n])
    }

    pub fn point_mass(space: Space, atom: Point) -> Result<Self> {
        Self::new(space, vec![atom], vec![1.0])
    }

    pub fn space(&self) -> &Space {
        &self.space
    }

    pub fn atoms(&self) -> &[Point] {
        &self.atoms
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    pub fn len(&self) -> usize {
        self.atoms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.atoms.is_empty()
    }

    /// Atoms carrying positive mass, with their masses.
    pub fn support(&self) -> impl Iterator<Item = (&Point, f64)> {
        self.atoms.iter().zip(self.probs.iter().copied()).filter(|(_, p)| *p > 0.0)
    }

    /// The same law with coinciding atoms merged (exact equality) and
    /// zero-mass atoms dropped.
    pub fn merged(&self) -> FiniteDist {
        let mut atoms: Vec<Point> = Vec::new();
        let mut probs: Vec<f64> = Vec::new();
        for (a, p) in self.support() {
            match atoms.iter().position(|b| b.same_atom(a)) {
                Some(k) => probs[k] += p,
                None => {
                    atoms.push(a.clone());
                    probs.push(p);
                }
            }
        }
        FiniteDist {
            space: self.space.clone(),
            atoms,
            probs,
        }
    }

    /// Same atoms on another space (e.g. a snowflake of this one).
    pub fn with_space(&self, space: Space) -> Result<Self> {
        Self::new(space, self.atoms.clone(), self.probs.clone())
    }
}

/// Vectors with different weights or matrices of different sizes cannot be
/// subtracted, so they cannot share a distribution.
fn compatible(a: &Point, b: &Point) -> Result<()> {
    match (a, b) {
        (Point::Vector(x), Point::Vector(y)) => {
            if x.len() != y.len() || x.weights() != y.weights() {
                return Err(Error::KindMismatch("vectors must share length and weights".into()));
            }
            Ok(())
        }
        (Point::Matrix(x), Point::Matrix(y)) if x.dim() != y.dim() => {
            Err(Error::KindMismatch("matrices must share their dimension".into()))
        }
        _ => Ok(()),
    }
}

fn same_space(x: &FiniteDist, y: &FiniteDist) -> Result<()> {
    if x.space != y.space {
        return Err(Error::SpaceMismatch(format!("{} vs {}", x.space, y.space)));
    }
    if let (Some(a), Some(b)) = (x.atoms.first(), y.atoms.first()) {
        compatible(a, b)?;
    }
    Ok(())
}

fn check_exponent(p: f64) -> Result<()> {
    if !(p > 0.0 && p.is_finite()) {
        return Err(Error::param("p", p, "must be a positive finite real"));
    }
    Ok(())
}

/// Law of a fair coin flip between `X` and `Y`.
pub fn mixture(x: &FiniteDist, y: &FiniteDist) -> Result<FiniteDist> {
    same_space(x, y)?;
    let atoms = x.atoms.iter().chain(&y.atoms).cloned().collect();
    let probs = x.probs.iter().chain(&y.probs).map(|p| 0.5 * p).collect();
    let joined = FiniteDist {
        space: x.space.clone(),
        atoms,
        probs,
    };
    Ok(joined.merged())
}

/// `Σ_{i,j} p_i q_j f(x_i, y_j)`, summed row by row in a fixed order.
fn double_sum(x: &FiniteDist, y: &FiniteDist, f: impl Fn(&Point, &Point) -> Result<f64> + Sync) -> Result<f64> {
    let row = |(a, pa): (&Point, &f64)| -> Result<f64> {
        if *pa == 0.0 {
            return Ok(0.0);
        }
        let mut s = 0.0;
        for (b, pb) in y.atoms.iter().zip(&y.probs) {
            if *pb > 0.0 {
                s += pb * f(a, b)?;
            }
        }
        Ok(pa * s)
    };
    let rows: Vec<f64> = if x.len() * y.len() > PARALLEL_PAIRS {
        x.atoms.par_iter().zip(x.probs.par_iter()).map(row).collect::<Result<_>>()?
    } else {
        x.atoms.iter().zip(x.probs.iter()).map(row).collect::<Result<_>>()?
    };
    Ok(rows.iter().sum())
}

/// `E d(X, Y)^p` for independent `X`, `Y`.
pub fn cross_moment(x: &FiniteDist, y: &FiniteDist, p: f64) -> Result<f64> {
    same_space(x, y)?;
    check_exponent(p)?;
    let space = &x.space;
    double_sum(x, y, |a, b| space.distance_pow(a, b, p))
}

/// `E d(X, X')^p` for an independent copy `X'`.
pub fn self_moment(x: &FiniteDist, p: f64) -> Result<f64> {
    cross_moment(x, x, p)
}

/// `E d(X, z)^p`.
pub fn moment_about(x: &FiniteDist, z: &Point, p: f64) -> Result<f64> {
    check_exponent(p)?;
    let mut s = 0.0;
    for (a, pa) in x.support() {
        s += pa * x.space.distance_pow(a, z, p)?;
    }
    Ok(s)
}

/// Coordinatewise expectation.
pub fn mean(x: &FiniteDist) -> Result<Point> {
    if !x.space.is_linear() {
        return Err(Error::Unsupported {
            operation: "mean",
            space: x.space.to_string(),
        });
    }
    let mut acc = x.atoms[0].zero_like().ok_or_else(|| Error::Unsupported {
        operation: "mean",
        space: x.space.to_string(),
    })?;
    for (a, p) in x.support() {
        acc = acc.linear_combination(1.0, a, p)?;
    }
    Ok(acc)
}

/// `E d(X, EX)^p`.
pub fn centered_moment(x: &FiniteDist, p: f64) -> Result<f64> {
    let m = mean(x)?;
    moment_about(x, &m, p)
}

/// `E log d(X, Y)`; `−∞` as soon as a coinciding pair carries positive mass.
pub fn log_cross_moment(x: &FiniteDist, y: &FiniteDist) -> Result<f64> {
    same_space(x, y)?;
    let space = &x.space;
    let mut s = 0.0;
    for (a, pa) in x.support() {
        for (b, pb) in y.support() {
            let d = space.distance(a, b)?;
            if d == 0.0 {
                return Ok(f64::NEG_INFINITY);
            }
            s += pa * pb * d.ln();
        }
    }
    Ok(s)
}

/// A pair of independent laws on a shared space, with the moment exponent.
#[derive(Clone, Debug, PartialEq)]
pub struct Config {
    space: Space,
    x: FiniteDist,
    y: FiniteDist,
    p: f64,
}

impl Config {
    pub fn new(x: FiniteDist, y: FiniteDist, p: f64) -> Result<Self> {
        same_space(&x, &y)?;
        check_exponent(p)?;
        Ok(Self {
            space: x.space.clone(),
            x,
            y,
            p,
        })
    }

    pub fn space(&self) -> &Space {
        &self.space
    }

    pub fn x(&self) -> &FiniteDist {
        &self.x
    }

    pub fn y(&self) -> &FiniteDist {
        &self.y
    }

    pub fn p(&self) -> f64 {
        self.p
    }

    pub fn with_p(&self, p: f64) -> Result<Self> {
        Self::new(self.x.clone(), self.y.clone(), p)
    }

    /// The same distributions on another space over the same points.
    pub fn with_space(&self, space: Space) -> Result<Self> {
        Self::new(self.x.with_space(space.clone())?, self.y.with_space(space)?, self.p)
    }

    pub fn cross_moment(&self) -> Result<f64> {
        cross_moment(&self.x, &self.y, self.p)
    }

    pub fn mixture(&self) -> Result<FiniteDist> {
        mixture(&self.x, &self.y)
    }
}
