//! `moduli`: command-line front end for the moment-moduli library.
//!
//! Exit status: 0 on success, 1 when a computed value breaches its bound or
//! tolerance, 2 on malformed input.

mod args;

use std::fmt::Write as _;
use std::io::Read;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use moment_moduli::constants::{constants_row, grid, CONSTANTS_HEADER, PQ};
use moment_moduli::constructions::{construction, verify, Verification};
use moment_moduli::format::fmt_g17;
use moment_moduli::json::config_from_str;
use moment_moduli::moduli::{modulus, moduli, Modulus, CSV_HEADER};
use moment_moduli::scalar::{suite, SuiteOptions, SUITE_CSV_HEADER};
use moment_moduli::search::{run_search, Objective, SearchSpec, RESULT_LABEL};
use moment_moduli::{Config, RatioReport, Space};
use rayon::prelude::*;

#[derive(Parser)]
#[command(name = "moduli", version, about = "Moment moduli of finitely supported distributions")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Table of the L_q exponents and constants over a (p, q) grid, as CSV.
    Constants(ConstantsArgs),
    /// Every applicable ratio of a configuration read as JSON.
    Ratio(RatioArgs),
    /// Build a named construction and compare its predicted and computed ratio.
    Verify(VerifyArgs),
    /// Run a scalar inequality suite.
    Check(CheckArgs),
    /// Seeded hill-climbing search for large ratios.
    Search(SearchArgs),
    /// Run `verify` or `ratio` over a parameter grid, as CSV.
    #[command(subcommand)]
    Sweep(SweepCommand),
}

#[derive(Args)]
struct ConstantsArgs {
    #[arg(long, default_value = "1", value_parser = args::real)]
    pmin: f64,
    #[arg(long, default_value = "4", value_parser = args::real)]
    pmax: f64,
    #[arg(long, default_value = "0.5", value_parser = args::real)]
    step: f64,
    /// Defaults to --pmin.
    #[arg(long, value_parser = args::real)]
    qmin: Option<f64>,
    /// Defaults to --pmax.
    #[arg(long, value_parser = args::real)]
    qmax: Option<f64>,
    /// Defaults to --step.
    #[arg(long, value_parser = args::real)]
    qstep: Option<f64>,
}

#[derive(Args)]
struct RatioArgs {
    /// Config JSON file, or `-` for standard input.
    config: String,
    /// Restrict to these ratios (repeatable); default is every applicable one.
    #[arg(long = "ratio")]
    ratios: Vec<String>,
    #[arg(long)]
    json: bool,
    /// Allowed excess over a bound before exiting with status 1.
    #[arg(long, default_value = "1e-9", value_parser = args::real)]
    tolerance: f64,
}

#[derive(Args)]
struct VerifyArgs {
    /// Construction id, e.g. `fn`, `bipartite`, `disjoint-bernoulli`.
    id: String,
    /// Construction parameters as `--name value`; `inf` is accepted.
    #[arg(trailing_var_arg = true, allow_hyphen_values = true)]
    params: Vec<String>,
}

#[derive(Args)]
struct CheckArgs {
    /// Suite name: alpha, beta, subadditivity, laplace, smoothing, cosine, hilbert.
    suite: String,
    #[arg(long)]
    grid: Option<usize>,
    #[arg(long)]
    seeds: Option<usize>,
    #[arg(long, value_parser = args::real)]
    tolerance: Option<f64>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Args)]
struct SearchArgs {
    /// real, lq:Q, lq0:Q, schatten:Q, s1par:N, bipartite:N or snowflake:ALPHA:BASE.
    #[arg(long)]
    space: String,
    /// roundness, barycenter or mixture.
    #[arg(long)]
    objective: String,
    #[arg(long, value_parser = args::real)]
    p: f64,
    #[arg(long, default_value_t = 1000)]
    budget: usize,
    #[arg(long, default_value_t = 4)]
    restarts: usize,
    #[arg(long)]
    seed: u64,
    /// Atom count bounds for X as MIN:MAX.
    #[arg(long, default_value = "1:4")]
    atoms_x: String,
    #[arg(long, default_value = "1:4")]
    atoms_y: String,
    /// Vector length or matrix size.
    #[arg(long)]
    dim: Option<usize>,
    #[arg(long)]
    no_warm_start: bool,
    /// Write the JSON result here instead of standard output.
    #[arg(long)]
    out: Option<std::path::PathBuf>,
}

#[derive(Subcommand)]
enum SweepCommand {
    /// Verify a construction at every point of a parameter grid.
    Verify {
        id: String,
        /// `name=SPEC` with SPEC a comma list or lo:hi:step (repeatable).
        #[arg(long = "vary", required = true)]
        vary: Vec<String>,
        /// Fixed parameters as `--name value`.
        #[arg(trailing_var_arg = true, allow_hyphen_values = true)]
        params: Vec<String>,
    },
    /// Evaluate a configuration's ratios over a list of exponents p.
    Ratio {
        config: String,
        /// Comma list or lo:hi:step.
        #[arg(long)]
        p: String,
        #[arg(long = "ratio")]
        ratios: Vec<String>,
        #[arg(long, default_value = "1e-9", value_parser = args::real)]
        tolerance: f64,
    },
}

/// A completed command: its output and whether a bound or tolerance was breached.
struct Done {
    output: String,
    breach: bool,
}

type Outcome = Result<Done, String>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Err(e) = configure_threads() {
        eprintln!("error: {e}");
        return ExitCode::from(2);
    }
    let outcome = match cli.command {
        Command::Constants(a) => constants(a),
        Command::Ratio(a) => ratio(a),
        Command::Verify(a) => verify_cmd(a),
        Command::Check(a) => check(a),
        Command::Search(a) => search(a),
        Command::Sweep(s) => sweep(s),
    };
    match outcome {
        Ok(done) => {
            print!("{}", done.output);
            ExitCode::from(if done.breach { 1 } else { 0 })
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}

fn configure_threads() -> Result<(), String> {
    let Ok(v) = std::env::var("MODULI_THREADS") else {
        return Ok(());
    };
    let n: usize = v
        .trim()
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .ok_or_else(|| format!("MODULI_THREADS must be a positive integer, got `{v}`"))?;
    rayon::ThreadPoolBuilder::new().num_threads(n).build_global().map_err(|e| e.to_string())
}

fn text<E: std::fmt::Display>(e: E) -> String {
    e.to_string()
}

fn constants(a: ConstantsArgs) -> Outcome {
    let ps = grid(a.pmin, a.pmax, a.step).map_err(text)?;
    let qs = grid(a.qmin.unwrap_or(a.pmin), a.qmax.unwrap_or(a.pmax), a.qstep.unwrap_or(a.step)).map_err(text)?;
    let mut out = format!("{CONSTANTS_HEADER}\n");
    for &p in &ps {
        for &q in &qs {
            let row = constants_row(PQ::new(p, q).map_err(text)?);
            let cells: Vec<String> = row.values().iter().map(|&v| fmt_g17(v)).collect();
            writeln!(out, "{}", cells.join(",")).unwrap();
        }
    }
    Ok(Done { output: out, breach: false })
}

fn read_config(path: &str) -> Result<Config, String> {
    let mut s = String::new();
    if path == "-" {
        std::io::stdin().read_to_string(&mut s).map_err(|e| format!("standard input: {e}"))?;
    } else {
        s = std::fs::read_to_string(path).map_err(|e| format!("{path}: {e}"))?;
    }
    config_from_str(&s).map_err(text)
}

fn selected(names: &[String], c: &Config) -> Result<Vec<&'static dyn Modulus>, String> {
    if names.is_empty() {
        return Ok(moduli().iter().copied().filter(|m| m.applies(c)).collect());
    }
    names
        .iter()
        .map(|n| {
            let m = modulus(n).map_err(text)?;
            if m.applies(c) {
                Ok(m)
            } else {
                Err(format!("ratio `{}` does not apply to this configuration", m.name()))
            }
        })
        .collect()
}

fn evaluate_all(c: &Config, names: &[String]) -> Result<Vec<RatioReport>, String> {
    selected(names, c)?
        .into_iter()
        .map(|m| m.evaluate(c).map_err(|e| format!("{}: {e}", m.name())))
        .collect()
}

fn breaches(reports: &[RatioReport], tolerance: f64) -> bool {
    reports.iter().any(|r| r.within_bound(tolerance) == Some(false))
}

fn ratio(a: RatioArgs) -> Outcome {
    let c = read_config(&a.config)?;
    let reports = evaluate_all(&c, &a.ratios)?;
    let output = if a.json {
        let v: Vec<_> = reports.iter().map(RatioReport::to_json).collect();
        format!("{}\n", serde_json::to_string_pretty(&v).map_err(text)?)
    } else {
        let mut out = format!("{CSV_HEADER}\n");
        for r in &reports {
            writeln!(out, "{}", r.csv_row()).unwrap();
        }
        out
    };
    Ok(Done {
        output,
        breach: breaches(&reports, a.tolerance),
    })
}

fn run_verify(id: &str, params: &moment_moduli::constructions::Params) -> Result<Verification, String> {
    let nc = construction(id).map_err(text)?.build(params).map_err(text)?;
    verify(&nc).map_err(text)
}

fn verify_cmd(a: VerifyArgs) -> Outcome {
    let json = a.params.iter().any(|s| s == "--json");
    let rest: Vec<String> = a.params.into_iter().filter(|s| s != "--json").collect();
    let v = run_verify(&a.id, &args::params(&rest)?)?;
    let output = if json {
        format!("{}\n", serde_json::to_string_pretty(&v.to_json()).map_err(text)?)
    } else {
        format!(
            "{}\npredicted {}\ncomputed {}\n",
            v.summary(),
            fmt_g17(v.predicted),
            fmt_g17(v.computed)
        )
    };
    Ok(Done {
        output,
        breach: !v.passed,
    })
}

fn check(a: CheckArgs) -> Outcome {
    let opts = SuiteOptions {
        grid: a.grid,
        seeds: a.seeds,
        tolerance: a.tolerance,
        seed: a.seed,
    };
    let report = suite(&a.suite).map_err(text)?.run(&opts).map_err(text)?;
    let mut out = format!("{SUITE_CSV_HEADER}\n");
    for r in &report.rows {
        writeln!(out, "{}", r.csv_row()).unwrap();
    }
    eprintln!("{}: {} cases, {} violations", report.name, report.cases, report.violations);
    Ok(Done {
        output: out,
        breach: !report.passed(),
    })
}

fn atom_bounds(s: &str, name: &str) -> Result<(usize, usize), String> {
    let bad = || format!("--{name}: expected MIN:MAX, got `{s}`");
    let (lo, hi) = s.split_once(':').ok_or_else(bad)?;
    Ok((lo.trim().parse().map_err(|_| bad())?, hi.trim().parse().map_err(|_| bad())?))
}

fn search(a: SearchArgs) -> Outcome {
    let space: Space = a.space.parse().map_err(text)?;
    let objective: Objective = a.objective.parse().map_err(text)?;
    let spec = SearchSpec {
        atoms_x: atom_bounds(&a.atoms_x, "atoms-x")?,
        atoms_y: atom_bounds(&a.atoms_y, "atoms-y")?,
        budget: a.budget,
        restarts: a.restarts,
        seed: a.seed,
        dim: a.dim,
        warm_start: !a.no_warm_start,
        ..SearchSpec::new(space, objective, a.p)
    };
    let result = run_search(&spec).map_err(text)?;
    let report = modulus(objective.as_str()).map_err(text)?.evaluate(&result.best_config).map_err(text)?;
    let breach = report.within_bound(1e-9) == Some(false);
    let json = format!("{}\n", serde_json::to_string_pretty(&result.to_json()).map_err(text)?);
    let summary = format!(
        "{RESULT_LABEL} for {} on {} with p = {}: {}",
        objective.as_str(),
        report.space,
        fmt_g17(a.p),
        fmt_g17(result.best_ratio)
    );
    let output = match &a.out {
        Some(path) => {
            std::fs::write(path, json).map_err(|e| format!("{}: {e}", path.display()))?;
            format!("{summary}\n")
        }
        None => {
            eprintln!("{summary}");
            json
        }
    };
    Ok(Done { output, breach })
}

fn sweep(s: SweepCommand) -> Outcome {
    match s {
        SweepCommand::Verify { id, vary, params } => {
            let fixed = args::params(&params)?;
            let mut axes = Vec::new();
            for v in &vary {
                let (k, spec) = v.split_once('=').ok_or_else(|| format!("--vary: expected name=SPEC, got `{v}`"))?;
                if fixed.contains_key(k) {
                    return Err(format!("`{k}` is both fixed and varied"));
                }
                axes.push((k.to_string(), args::values(spec).map_err(|e| format!("--vary {k}: {e}"))?));
            }
            let points: Vec<_> = args::cartesian(&axes)
                .into_iter()
                .map(|mut p| {
                    p.extend(fixed.clone());
                    p
                })
                .collect();
            let results: Vec<Verification> = points
                .par_iter()
                .map(|p| run_verify(&id, p))
                .collect::<Result<_, _>>()?;
            let keys: Vec<&String> = points.first().map(|p| p.keys().collect()).unwrap_or_default();
            let mut out = String::new();
            for k in &keys {
                write!(out, "{k},").unwrap();
            }
            out.push_str("target,predicted,computed,tolerance,passed\n");
            for (p, v) in points.iter().zip(&results) {
                for k in &keys {
                    write!(out, "{},", moment_moduli::format::fmt_q(p[*k])).unwrap();
                }
                writeln!(
                    out,
                    "{},{},{},{},{}",
                    v.target.as_str(),
                    fmt_g17(v.predicted),
                    fmt_g17(v.computed),
                    fmt_g17(v.tolerance),
                    v.passed
                )
                .unwrap();
            }
            Ok(Done {
                output: out,
                breach: results.iter().any(|v| !v.passed),
            })
        }
        SweepCommand::Ratio {
            config,
            p,
            ratios,
            tolerance,
        } => {
            let ps = args::values(&p).map_err(|e| format!("--p: {e}"))?;
            let base = read_config(&config)?;
            let mut out = format!("{CSV_HEADER}\n");
            let mut breach = false;
            for &pv in &ps {
                let c = base.with_p(pv).map_err(text)?;
                let reports = evaluate_all(&c, &ratios)?;
                breach |= breaches(&reports, tolerance);
                for r in &reports {
                    writeln!(out, "{}", r.csv_row()).unwrap();
                }
            }
            Ok(Done { output: out, breach })
        }
    }
}
