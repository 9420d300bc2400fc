//! Named batches of scalar checks over grids and seeded random inputs.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::Exp1;
use rayon::prelude::*;

use super::*;
use crate::format::fmt_g17;

#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct SuiteOptions {
    /// Grid resolution; each suite has its own default.
    pub grid: Option<usize>,
    /// Number of random instances; each suite has its own default.
    pub seeds: Option<usize>,
    /// Overrides the suite's tolerance.
    pub tolerance: Option<f64>,
    /// Base seed; instance `i` uses `seed + i`.
    pub seed: u64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SuiteRow {
    pub case: String,
    pub lhs: f64,
    pub rhs: f64,
    pub holds: bool,
}

impl SuiteRow {
    fn new(case: String, c: Comparison) -> Self {
        Self {
            case,
            lhs: c.lhs,
            rhs: c.rhs,
            holds: c.holds,
        }
    }

    pub fn csv_row(&self) -> String {
        format!("{},{},{},{}", self.case, fmt_g17(self.lhs), fmt_g17(self.rhs), self.holds)
    }
}

pub const SUITE_CSV_HEADER: &str = "case,lhs,rhs,holds";

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SuiteReport {
    pub name: &'static str,
    /// Individual inequality instances evaluated.
    pub cases: usize,
    pub violations: usize,
    pub rows: Vec<SuiteRow>,
}

impl SuiteReport {
    fn from_rows(name: &'static str, rows: Vec<SuiteRow>) -> Self {
        Self {
            name,
            cases: rows.len(),
            violations: rows.iter().filter(|r| !r.holds).count(),
            rows,
        }
    }

    pub fn passed(&self) -> bool {
        self.violations == 0
    }
}

pub trait Suite: Send + Sync {
    fn name(&self) -> &'static str;
    fn description(&self) -> &'static str;
    fn run(&self, opts: &SuiteOptions) -> Result<SuiteReport>;
}

fn rng(opts: &SuiteOptions, i: usize) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(opts.seed.wrapping_add(i as u64))
}

fn random_probs(rng: &mut impl Rng, n: usize) -> Vec<f64> {
    let w: Vec<f64> = (0..n).map(|_| rng.sample::<f64, _>(Exp1) + 1e-3).collect();
    let total: f64 = w.iter().sum();
    w.into_iter().map(|x| x / total).collect()
}

pub(crate) fn random_scalar(rng: &mut impl Rng, max_atoms: usize, spread: f64) -> ScalarDist {
    let n = rng.random_range(1..=max_atoms);
    let atoms = (0..n).map(|_| rng.random_range(-spread..spread)).collect();
    ScalarDist::new(atoms, random_probs(rng, n)).expect("normalized weights")
}

fn random_kernel(rng: &mut impl Rng, square: bool) -> KernelMatrix {
    let m = rng.random_range(1..=6);
    let k = if square { m } else { rng.random_range(1..=6) };
    let mu = random_probs(rng, m);
    let nu = if square { mu.clone() } else { random_probs(rng, k) };
    let values = (0..m * k)
        .map(|_| Complex64::new(rng.random_range(-3.0..3.0), rng.random_range(-3.0..3.0)))
        .collect();
    KernelMatrix::new(mu, nu, values).expect("normalized weights")
}

/// Reapplies `lhs ≥ rhs − tol·max(1, |lhs|)` when a tolerance is given.
fn retolerance(mut c: Comparison, tol: Option<f64>) -> Comparison {
    if let Some(t) = tol {
        c.holds = c.lhs >= c.rhs - t * c.lhs.abs().max(1.0);
    }
    c
}

struct Alpha;
struct Beta;
struct Subadditivity;
struct Laplace;
struct Smoothing;
struct Cosine;
struct Hilbert;

const ALPHA_QS: [f64; 4] = [3.0, 3.5, 4.0, 6.0];

impl Suite for Alpha {
    fn name(&self) -> &'static str {
        "alpha"
    }
    fn description(&self) -> &'static str {
        "alpha(x,y) >= -tol*(1+|x|+|y|)^q on a grid over [-10,10]^2 for q in {3, 3.5, 4, 6}"
    }
    fn run(&self, opts: &SuiteOptions) -> Result<SuiteReport> {
        let g = opts.grid.unwrap_or(400).max(2);
        let tol = opts.tolerance.unwrap_or(1e-10);
        let coord = |i: usize| -10.0 + 20.0 * i as f64 / (g - 1) as f64;
        let mut rows = Vec::new();
        let mut cases = 0;
        let mut violations = 0;
        for q in ALPHA_QS {
            let per_row: Vec<(f64, usize)> = (0..g)
                .into_par_iter()
                .map(|i| {
                    let x = coord(i);
                    let mut min = f64::INFINITY;
                    let mut bad = 0;
                    for j in 0..g {
                        let y = coord(j);
                        let scaled = alpha_fn(x, y, q) / (1.0 + x.abs() + y.abs()).powf(q);
                        min = min.min(scaled);
                        if scaled < -tol {
                            bad += 1;
                        }
                    }
                    (min, bad)
                })
                .collect();
            let min = per_row.iter().fold(f64::INFINITY, |m, r| m.min(r.0));
            let bad: usize = per_row.iter().map(|r| r.1).sum();
            cases += g * g;
            violations += bad;
            rows.push(SuiteRow {
                case: format!("q={} grid={g}x{g} min alpha/(1+|x|+|y|)^q", fmt_g17(q)),
                lhs: min,
                rhs: -tol,
                holds: bad == 0,
            });
        }
        Ok(SuiteReport {
            name: self.name(),
            cases,
            violations,
            rows,
        })
    }
}

impl Suite for Beta {
    fn name(&self) -> &'static str {
        "beta"
    }
    fn description(&self) -> &'static str {
        "two-point mean-zero pair: a ratio below 1 exists for q in {1.5, 2.5}, none for q in {3, 4}"
    }
    fn run(&self, opts: &SuiteOptions) -> Result<SuiteReport> {
        let g = opts.grid.unwrap_or(1000).max(1);
        let tol = opts.tolerance.unwrap_or(1e-12);
        let mut rows = Vec::new();
        for q in [1.5, 2.5, 3.0, 4.0] {
            let mut min = f64::INFINITY;
            let mut argmin = 0.0;
            for k in 1..=g {
                let b = 0.5 * k as f64 / g as f64;
                let r = beta_ratio(b, q)?;
                if r < min {
                    min = r;
                    argmin = b;
                }
            }
            let expect_failure = q < 3.0;
            let holds = if expect_failure { min < 1.0 } else { min >= 1.0 - tol };
            let what = if expect_failure { "counterexample found" } else { "no counterexample" };
            rows.push(SuiteRow {
                case: format!("q={} {what} (min at beta={})", fmt_g17(q), fmt_g17(argmin)),
                lhs: min,
                rhs: 1.0,
                holds,
            });
        }
        Ok(SuiteReport::from_rows(self.name(), rows))
    }
}

impl Suite for Subadditivity {
    fn name(&self) -> &'static str {
        "subadditivity"
    }
    fn description(&self) -> &'static str {
        "E|X+Y|^q >= E|X|^q + E|Y|^q on random centered pairs, q in {3, 4, 5.5}"
    }
    fn run(&self, opts: &SuiteOptions) -> Result<SuiteReport> {
        let n = opts.seeds.unwrap_or(1000);
        let rows: Vec<Vec<SuiteRow>> = (0..n)
            .into_par_iter()
            .map(|i| {
                let mut r = rng(opts, i);
                let x = random_scalar(&mut r, 6, 5.0).centered();
                let y = random_scalar(&mut r, 6, 5.0).centered();
                [3.0, 4.0, 5.5]
                    .iter()
                    .map(|&q| {
                        let c = retolerance(check_subadditivity(&x, &y, q)?, opts.tolerance);
                        Ok(SuiteRow::new(format!("seed={} q={}", opts.seed.wrapping_add(i as u64), fmt_g17(q)), c))
                    })
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<_>>()?;
        Ok(SuiteReport::from_rows(self.name(), rows.concat()))
    }
}

impl Suite for Laplace {
    fn name(&self) -> &'static str {
        "laplace"
    }
    fn description(&self) -> &'static str {
        "E log W = int_0^inf (e^-s - E e^-sW)/s ds on random positive laws"
    }
    fn run(&self, opts: &SuiteOptions) -> Result<SuiteReport> {
        let n = opts.seeds.unwrap_or(20);
        let tol = opts.tolerance.unwrap_or(1e-6);
        let rows = (0..n)
            .into_par_iter()
            .map(|i| {
                let mut r = rng(opts, i);
                let d = random_scalar(&mut r, 6, 4.0);
                let w = ScalarDist::new(d.atoms().iter().map(|a| a.exp()).collect(), d.probs().to_vec())?;
                let mut c = laplace_log_identity(&w)?;
                c.holds = (c.lhs - c.rhs).abs() <= tol;
                Ok(SuiteRow::new(format!("seed={}", opts.seed.wrapping_add(i as u64)), c))
            })
            .collect::<Result<_>>()?;
        Ok(SuiteReport::from_rows(self.name(), rows))
    }
}

impl Suite for Smoothing {
    fn name(&self) -> &'static str {
        "smoothing"
    }
    fn description(&self) -> &'static str {
        "E exp(-s(Z-Z')^2) >= E exp(-s(X-Y)^2) on random pairs, s in {0.1, 1, 10}"
    }
    fn run(&self, opts: &SuiteOptions) -> Result<SuiteReport> {
        let n = opts.seeds.unwrap_or(1000);
        let rows: Vec<Vec<SuiteRow>> = (0..n)
            .into_par_iter()
            .map(|i| {
                let mut r = rng(opts, i);
                let x = random_scalar(&mut r, 6, 3.0);
                let y = random_scalar(&mut r, 6, 3.0);
                [0.1, 1.0, 10.0]
                    .iter()
                    .map(|&s| {
                        let c = retolerance(gaussian_smoothing_check(&x, &y, s)?, opts.tolerance);
                        Ok(SuiteRow::new(format!("seed={} s={}", opts.seed.wrapping_add(i as u64), fmt_g17(s)), c))
                    })
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<_>>()?;
        Ok(SuiteReport::from_rows(self.name(), rows.concat()))
    }
}

impl Suite for Cosine {
    fn name(&self) -> &'static str {
        "cosine"
    }
    fn description(&self) -> &'static str {
        "(1/2pi) int log|cos t - cos a| dt = -log 2 on a grid of angles a in [0, 2pi)"
    }
    fn run(&self, opts: &SuiteOptions) -> Result<SuiteReport> {
        let g = opts.grid.unwrap_or(50).max(1);
        let tol = opts.tolerance.unwrap_or(1e-6);
        let rows = (0..g)
            .into_par_iter()
            .map(|k| {
                let a = 2.0 * PI * k as f64 / g as f64;
                let v = cosine_log_moment(a);
                SuiteRow {
                    case: format!("alpha={}", fmt_g17(a)),
                    lhs: v,
                    rhs: -LN_2,
                    holds: (v + LN_2).abs() <= tol,
                }
            })
            .collect();
        Ok(SuiteReport::from_rows(self.name(), rows))
    }
}

impl Suite for Hilbert {
    fn name(&self) -> &'static str {
        "hilbert"
    }
    fn description(&self) -> &'static str {
        "quadratic kernel inequalities (roundness, mixture, antisymmetric) on random complex kernels, plus equality cases"
    }
    fn run(&self, opts: &SuiteOptions) -> Result<SuiteReport> {
        let n = opts.seeds.unwrap_or(1000);
        let half = Complex64::new(0.5, 0.0);
        let rows: Vec<Vec<SuiteRow>> = (0..n)
            .into_par_iter()
            .map(|i| {
                let mut r = rng(opts, i);
                let f = random_kernel(&mut r, false);
                let g = random_kernel(&mut r, true);
                let a = Complex64::new(r.random_range(-2.0..2.0), r.random_range(-2.0..2.0));
                let b = Complex64::new(r.random_range(-2.0..2.0), r.random_range(-2.0..2.0));
                let seed = opts.seed.wrapping_add(i as u64);
                let cases = [
                    ("roundness", &f, HilbertVariant::Roundness),
                    ("mixture(1/2,1/2)", &f, HilbertVariant::Mixture(half, half)),
                    ("mixture(random)", &f, HilbertVariant::Mixture(a, b)),
                    ("antisym", &g, HilbertVariant::Antisym),
                ];
                cases
                    .into_iter()
                    .map(|(label, k, v)| {
                        let c = retolerance(verify_scalar_hilbert(k, v)?, opts.tolerance);
                        Ok(SuiteRow::new(format!("seed={seed} {label}"), c))
                    })
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<_>>()?;
        let mut rows = rows.concat();
        rows.extend(equality_cases()?);
        Ok(SuiteReport::from_rows(self.name(), rows))
    }
}

/// Kernels on which the inequalities are equalities; `holds` means
/// `rhs/lhs = 1` to `1e−12`.
pub(crate) fn equality_cases() -> Result<Vec<SuiteRow>> {
    let zero = Complex64::new(0.0, 0.0);
    let one = Complex64::new(1.0, 0.0);
    let c = Complex64::new(0.6, -0.8);
    let constant = KernelMatrix::new(vec![0.5, 0.5], vec![0.25, 0.75], vec![c; 4])?;
    // φ(x) ⊗ 1 with φ = ±1, mean zero under μ = (½, ½).
    let rank_one = KernelMatrix::new(vec![0.5, 0.5], vec![0.25, 0.75], vec![one, one, -one, -one])?;
    let cases = [
        ("equality: roundness, mean-zero rank one", &rank_one, HilbertVariant::Roundness),
        ("equality: mixture(0,0), constant", &constant, HilbertVariant::Mixture(zero, zero)),
        ("equality: mixture(1,1), mean-zero rank one", &rank_one, HilbertVariant::Mixture(one, one)),
    ];
    cases
        .into_iter()
        .map(|(label, k, v)| {
            let mut c = verify_scalar_hilbert(k, v)?;
            c.holds = (c.rhs / c.lhs - 1.0).abs() <= 1e-12;
            Ok(SuiteRow::new(label.to_string(), c))
        })
        .collect()
}

static REGISTRY: &[&dyn Suite] = &[&Alpha, &Beta, &Subadditivity, &Laplace, &Smoothing, &Cosine, &Hilbert];

pub fn suites() -> &'static [&'static dyn Suite] {
    REGISTRY
}

pub fn suite(name: &str) -> Result<&'static dyn Suite> {
    REGISTRY.iter().copied().find(|s| s.name() == name).ok_or_else(|| Error::UnknownName {
        kind: "check suite",
        name: name.to_string(),
        available: REGISTRY.iter().map(|s| s.name()).collect::<Vec<_>>().join(", "),
    })
}
