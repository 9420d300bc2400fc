//! Real-valued and Hilbert-space (scalar kernel) inequalities, evaluated
//! exactly on finite laws or by quadrature.

mod quadrature;
mod suites;

use std::f64::consts::{LN_2, PI};

use num_complex::Complex64;
use serde::Serialize;

pub use suites::{suite, suites, Suite, SuiteOptions, SuiteReport, SuiteRow, SUITE_CSV_HEADER};

use crate::error::{Error, Result};

const MASS_TOL: f64 = 1e-12;

/// A finitely supported law on the real line.
#[derive(Clone, Debug, PartialEq)]
pub struct ScalarDist {
    atoms: Vec<f64>,
    probs: Vec<f64>,
}

impl ScalarDist {
    pub fn new(atoms: Vec<f64>, probs: Vec<f64>) -> Result<Self> {
        check_probs(&probs, "probs")?;
        if atoms.len() != probs.len() {
            return Err(Error::InvalidDistribution(format!(
                "{} atoms but {} probabilities",
                atoms.len(),
                probs.len()
            )));
        }
        if let Some(a) = atoms.iter().find(|a| !a.is_finite()) {
            return Err(Error::InvalidDistribution(format!("atom {a} is not finite")));
        }
        Ok(Self { atoms, probs })
    }

    pub fn uniform(atoms: Vec<f64>) -> Result<Self> {
        let n = atoms.len();
        Self::new(atoms, vec![1.0 / n as f64; n])
    }

    pub fn point_mass(x: f64) -> Result<Self> {
        Self::new(vec![x], vec![1.0])
    }

    /// `P[X = 1 − β] = β`, `P[X = −β] = 1 − β`: mean zero.
    pub fn beta_example(beta: f64) -> Result<Self> {
        if !(beta > 0.0 && beta < 1.0) {
            return Err(Error::param("beta", beta, "must lie in (0, 1)"));
        }
        Self::new(vec![1.0 - beta, -beta], vec![beta, 1.0 - beta])
    }

    pub fn atoms(&self) -> &[f64] {
        &self.atoms
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    pub fn support(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        self.atoms.iter().copied().zip(self.probs.iter().copied())
    }

    pub fn mean(&self) -> f64 {
        self.support().map(|(a, p)| a * p).sum()
    }

    /// `E|X|^q`.
    pub fn abs_moment(&self, q: f64) -> f64 {
        self.support().map(|(a, p)| p * a.abs().powf(q)).sum()
    }

    /// The same law shifted to mean zero.
    pub fn centered(&self) -> Self {
        let m = self.mean();
        Self {
            atoms: self.atoms.iter().map(|a| a - m).collect(),
            probs: self.probs.clone(),
        }
    }

    /// `½ X + ½ Y` in law.
    pub fn mixture(&self, other: &Self) -> Self {
        let mut atoms = self.atoms.clone();
        atoms.extend_from_slice(&other.atoms);
        let probs = self.probs.iter().chain(&other.probs).map(|p| 0.5 * p).collect();
        Self { atoms, probs }
    }
}

fn check_probs(probs: &[f64], what: &str) -> Result<()> {
    if probs.is_empty() {
        return Err(Error::InvalidDistribution(format!("{what}: empty")));
    }
    if let Some(p) = probs.iter().find(|p| !(**p >= 0.0 && p.is_finite())) {
        return Err(Error::InvalidDistribution(format!("{what}: negative or non-finite mass {p}")));
    }
    let total: f64 = probs.iter().sum();
    if (total - 1.0).abs() > MASS_TOL {
        return Err(Error::InvalidDistribution(format!("{what}: masses sum to {total}, not 1")));
    }
    Ok(())
}

/// A complex kernel on `(X, μ) × (Y, ν)` with finite `X`, `Y`.
#[derive(Clone, Debug, PartialEq)]
pub struct KernelMatrix {
    mu: Vec<f64>,
    nu: Vec<f64>,
    /// Row-major `mu.len() × nu.len()`.
    values: Vec<Complex64>,
}

impl KernelMatrix {
    pub fn new(mu: Vec<f64>, nu: Vec<f64>, values: Vec<Complex64>) -> Result<Self> {
        check_probs(&mu, "mu")?;
        check_probs(&nu, "nu")?;
        if values.len() != mu.len() * nu.len() {
            return Err(Error::InvalidDistribution(format!(
                "kernel has {} values, expected {}×{}",
                values.len(),
                mu.len(),
                nu.len()
            )));
        }
        Ok(Self { mu, nu, values })
    }

    pub fn mu(&self) -> &[f64] {
        &self.mu
    }

    pub fn nu(&self) -> &[f64] {
        &self.nu
    }

    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        self.values[i * self.nu.len() + j]
    }

    /// `∫∫ |f|² dμ dν`.
    pub fn norm_sq(&self) -> f64 {
        let mut s = 0.0;
        for (i, mi) in self.mu.iter().enumerate() {
            for (j, nj) in self.nu.iter().enumerate() {
                s += mi * nj * self.get(i, j).norm_sqr();
            }
        }
        s
    }

    /// `x ↦ ∫ f(x, y) dν(y)`.
    pub fn row_means(&self) -> Vec<Complex64> {
        (0..self.mu.len())
            .map(|i| self.nu.iter().enumerate().map(|(j, nj)| self.get(i, j) * nj).sum())
            .collect()
    }

    /// `y ↦ ∫ f(x, y) dμ(x)`.
    pub fn column_means(&self) -> Vec<Complex64> {
        (0..self.nu.len())
            .map(|j| self.mu.iter().enumerate().map(|(i, mi)| self.get(i, j) * mi).sum())
            .collect()
    }

    pub fn total_mean(&self) -> Complex64 {
        self.row_means().iter().zip(&self.mu).map(|(a, m)| a * m).sum()
    }
}

/// Both sides of an inequality `lhs ≥ rhs` (or an identity) and the verdict.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Comparison {
    pub lhs: f64,
    pub rhs: f64,
    pub holds: bool,
}

fn phi(x: f64, s: f64) -> f64 {
    x.signum() * x.abs().powf(s)
}

/// `|x+y|^q − |x|^q − |y|^q − q φ_{q−1}(x) y − q x φ_{q−1}(y)` with
/// `φ_s(x) = sign(x)|x|^s`; nonnegative for `q ≥ 3`.
pub fn alpha_fn(x: f64, y: f64, q: f64) -> f64 {
    (x + y).abs().powf(q) - x.abs().powf(q) - y.abs().powf(q) - q * phi(x, q - 1.0) * y - q * x * phi(y, q - 1.0)
}

/// `E|X+Y|^q / (E|X|^q + E|Y|^q)` for `X`, `Y` iid as in
/// [`ScalarDist::beta_example`].
pub fn beta_ratio(beta: f64, q: f64) -> Result<f64> {
    if !(beta > 0.0 && beta <= 0.5) {
        return Err(Error::param("beta", beta, "must lie in (0, 1/2]"));
    }
    if !(q > 0.0 && q.is_finite()) {
        return Err(Error::param("q", q, "must be a positive real"));
    }
    let b = beta;
    let c = 1.0 - b;
    let two_q = 2f64.powf(q);
    let num = b * b * two_q * c.powf(q) + c * c * two_q * b.powf(q) + 2.0 * b * c * (1.0 - 2.0 * b).powf(q);
    let den = 2.0 * b * c.powf(q) + 2.0 * c * b.powf(q);
    Ok(num / den)
}

/// `E|X+Y|^q ≥ E|X|^q + E|Y|^q` for independent mean-zero `X`, `Y`.
pub fn check_subadditivity(x: &ScalarDist, y: &ScalarDist, q: f64) -> Result<Comparison> {
    if !(q > 0.0 && q.is_finite()) {
        return Err(Error::param("q", q, "must be a positive real"));
    }
    for (name, d) in [("X", x), ("Y", y)] {
        let scale = d.atoms.iter().fold(1.0f64, |m, a| m.max(a.abs()));
        if d.mean().abs() > MASS_TOL * scale {
            return Err(Error::InvalidDistribution(format!("{name} has mean {}, not 0", d.mean())));
        }
    }
    let mut lhs = 0.0;
    for (a, pa) in x.support() {
        for (b, pb) in y.support() {
            lhs += pa * pb * (a + b).abs().powf(q);
        }
    }
    let rhs = x.abs_moment(q) + y.abs_moment(q);
    let scale = lhs.abs().max(rhs.abs()).max(1.0);
    Ok(Comparison {
        lhs,
        rhs,
        holds: lhs >= rhs - 1e-10 * scale,
    })
}

/// `E log W` against `∫_0^∞ (e^{−s} − E e^{−sW}) / s ds`.
///
/// The integral is taken in `u = log s` over `[log 1e−12, log S]` with `S`
/// past the point where the tail is below `1e−13`; on `[0, 1e−12]` the
/// integrand is replaced by its limit `E W − 1`.
pub fn laplace_log_identity(w: &ScalarDist) -> Result<Comparison> {
    if let Some(a) = w.atoms.iter().find(|a| !(**a > 0.0)) {
        return Err(Error::InvalidDistribution(format!("atom {a} is not strictly positive")));
    }
    let lhs: f64 = w.support().map(|(a, p)| p * a.ln()).sum();
    let lo = 1e-12f64;
    // The tail ∫_S^∞ e^{−ms}/s ds is below e^{−mS}/(mS).
    let m = w.atoms.iter().fold(1.0f64, |m, a| m.min(*a));
    let mut s_max = 1.0f64;
    while (-m * s_max).exp() / (m * s_max) > 1e-13 {
        s_max *= 2.0;
    }
    let integrand = |u: f64| {
        let s = u.exp();
        // e^{−s} − e^{−sw} = expm1(−s) − expm1(−sw), stable for small s.
        w.support().map(|(a, p)| p * ((-s).exp_m1() - (-s * a).exp_m1())).sum::<f64>()
    };
    let head = lo * (w.support().map(|(a, p)| a * p).sum::<f64>() - 1.0);
    let rhs = head + quadrature::adaptive(&integrand, lo.ln(), s_max.ln(), 1e-12);
    Ok(Comparison {
        lhs,
        rhs,
        holds: (lhs - rhs).abs() <= 1e-6,
    })
}

/// `E e^{−s(Z−Z')²} ≥ E e^{−s(X−Y)²}` with `Z`, `Z'` iid from the mixture.
pub fn gaussian_smoothing_check(x: &ScalarDist, y: &ScalarDist, s: f64) -> Result<Comparison> {
    if !(s >= 0.0 && s.is_finite()) {
        return Err(Error::param("s", s, "must be a nonnegative real"));
    }
    let kernel = |a: &ScalarDist, b: &ScalarDist| -> f64 {
        let mut t = 0.0;
        for (u, pu) in a.support() {
            for (v, pv) in b.support() {
                t += pu * pv * (-s * (u - v) * (u - v)).exp();
            }
        }
        t
    };
    let z = x.mixture(y);
    let lhs = kernel(&z, &z);
    let rhs = kernel(x, y);
    Ok(Comparison {
        lhs,
        rhs,
        holds: lhs >= rhs - 1e-12,
    })
}

/// `(1/2π) ∫_0^{2π} log|cos θ − cos α| dθ`; equals `−log 2` for every `α`.
pub fn cosine_log_moment(alpha: f64) -> f64 {
    let mut a = alpha.rem_euclid(2.0 * PI);
    if a > PI {
        a = 2.0 * PI - a;
    }
    log_moment_at_angle(a)
}

/// `(1/2π) ∫_0^{2π} log|cos θ − t| dθ` for any real `t`; at least `−log 2`.
pub fn cosine_log_moment_at(t: f64) -> f64 {
    if t.abs() <= 1.0 {
        return log_moment_at_angle(t.acos());
    }
    let c = t.abs() - 1.0;
    // |cos θ − t| = (|t| − 1) + 2 sin²(θ/2) for t > 1; mirror for t < −1.
    let f = |theta: f64| {
        let s = if t > 0.0 { (0.5 * theta).sin() } else { (0.5 * theta).cos() };
        (c + 2.0 * s * s).ln()
    };
    let start = |u: f64| f(u);
    let end = |u: f64| f(PI - u);
    quadrature::endpoint_singular(&start, &end, PI, 1e-13) / PI
}

/// `α ∈ [0, π]`; by the symmetry `θ ↦ 2π − θ` only `[0, π]` is integrated.
fn log_moment_at_angle(alpha: f64) -> f64 {
    let beta = PI - alpha;
    let ls = |x: f64| x.sin().abs().ln();
    // log|cos θ − cos α| = log 2 + log|sin((θ+α)/2)| + log|sin((θ−α)/2)|.
    let left = quadrature::endpoint_singular(
        &|u: f64| LN_2 + ls(0.5 * (u + alpha)) + ls(0.5 * (alpha - u)),
        &|u: f64| LN_2 + ls(0.5 * (2.0 * alpha - u)) + ls(0.5 * u),
        alpha,
        1e-13,
    );
    let right = quadrature::endpoint_singular(
        &|u: f64| LN_2 + ls(0.5 * (2.0 * alpha + u)) + ls(0.5 * u),
        &|u: f64| LN_2 + ls(0.5 * (beta + u)) + ls(0.5 * (beta - u)),
        beta,
        1e-13,
    );
    (left + right) / PI
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum HilbertVariant {
    /// `2‖f‖² ≥ ‖R_X f‖² + ‖R_Y f‖²` (marginal differences).
    Roundness,
    /// `max{|1−α|²+|1−β|², 1}·‖f‖² ≥ ‖S^α_X f‖² + ‖S^β_Y f‖²`.
    Mixture(Complex64, Complex64),
    /// `2‖g‖² ≥ ‖Tg‖²` for `g` on `μ × μ`.
    Antisym,
}

/// The quadratic scalar inequalities behind the Hilbert-space endpoint of
/// the interpolation bounds, as exact weighted sums.
pub fn verify_scalar_hilbert(f: &KernelMatrix, variant: HilbertVariant) -> Result<Comparison> {
    let norm = f.norm_sq();
    let spread = |vals: &[Complex64], w: &[f64]| -> f64 {
        let mut s = 0.0;
        for (a, wa) in vals.iter().zip(w) {
            for (b, wb) in vals.iter().zip(w) {
                s += wa * wb * (a - b).norm_sqr();
            }
        }
        s
    };
    let (lhs, rhs) = match variant {
        HilbertVariant::Roundness => (2.0 * norm, spread(&f.row_means(), &f.mu) + spread(&f.column_means(), &f.nu)),
        HilbertVariant::Mixture(alpha, beta) => {
            let m = f.total_mean();
            let dev = |vals: Vec<Complex64>, w: &[f64], c: Complex64| -> f64 {
                vals.iter().zip(w).map(|(a, wa)| wa * (a - c * m).norm_sqr()).sum()
            };
            let one = Complex64::new(1.0, 0.0);
            let constant = ((one - alpha).norm_sqr() + (one - beta).norm_sqr()).max(1.0);
            (
                constant * norm,
                dev(f.row_means(), &f.mu, alpha) + dev(f.column_means(), &f.nu, beta),
            )
        }
        HilbertVariant::Antisym => {
            if f.mu != f.nu {
                return Err(Error::InvalidDistribution(
                    "the antisymmetric variant needs the same measure on both factors".into(),
                ));
            }
            let n = f.mu.len();
            let mut rhs = 0.0;
            for chi in 0..n {
                let t: Complex64 = (0..n).map(|x| (f.get(x, chi) - f.get(chi, x)) * f.mu[x]).sum();
                rhs += f.mu[chi] * t.norm_sqr();
            }
            (2.0 * norm, rhs)
        }
    };
    Ok(Comparison {
        lhs,
        rhs,
        holds: lhs >= rhs - 1e-12 * lhs.max(1.0),
    })
}

#[cfg(test)]
mod tests;
