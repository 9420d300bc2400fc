//! JSON encoding of spaces, points, distributions and configurations.
//!
//! ```text
//! space   {"kind": "weighted_lq", "q": 3 | "inf", "subspace": "full" | "zero_sum"}
//!         {"kind": "schatten", "q": 1}
//!         {"kind": "parallelogram_s1", "n": 16, "lambda": "squared" | "as_printed"}
//!         {"kind": "snowflake", "base": <space>, "alpha": 0.5}
//!         {"kind": "bipartite", "n": 3}
//!         {"kind": "real_line"}
//! atom    vector:  [[re, im], ...] or [x, ...] (unit weights),
//!                  {"entries": [...], "weights": [...]}
//!         matrix:  {"dim": m, "entries": [[re, im], ...]} (row-major)
//!         vertex:  {"side": "L" | "R", "index": i}
//!         real:    x
//! dist    {"atoms": [...], "probs": [...]}  probabilities may be numbers,
//!         decimal strings or fractions "a/b"
//! config  {"space": <space>, "p": 2, "x": <dist>, "y": <dist>}
//! ```
//!
//! Errors name the offending field by its path, e.g. `x.atoms[3][1]`.

use num_complex::Complex64;
use serde_json::{json, Map, Value};

use crate::distributions::{Config, FiniteDist};
use crate::error::{Error, Result};
use crate::spaces::{CMatrix, CVector, LambdaVariant, Point, Side, Space, Subspace, Vertex};

fn err(path: &str, msg: impl std::fmt::Display) -> Error {
    Error::Parse(format!("{path}: {msg}"))
}

/// Finite numbers as JSON numbers, the rest as `"inf"`, `"-inf"`, `"nan"`.
pub fn number_to_json(x: f64) -> Value {
    if x.is_finite() {
        json!(x)
    } else if x.is_nan() {
        json!("nan")
    } else if x > 0.0 {
        json!("inf")
    } else {
        json!("-inf")
    }
}

fn complex_to_json(z: Complex64) -> Value {
    json!([number_to_json(z.re), number_to_json(z.im)])
}

pub fn point_to_json(x: &Point) -> Value {
    match x {
        Point::Real(v) => number_to_json(*v),
        Point::Vector(v) => {
            let entries: Vec<Value> = v.entries().iter().map(|z| complex_to_json(*z)).collect();
            if v.weights().iter().all(|&w| w == 1.0) {
                Value::Array(entries)
            } else {
                json!({"entries": entries, "weights": v.weights()})
            }
        }
        Point::Matrix(m) => json!({
            "dim": m.dim(),
            "entries": m.entries().iter().map(|z| complex_to_json(*z)).collect::<Vec<_>>(),
        }),
        Point::Vertex(v) => json!({"side": v.side, "index": v.index}),
    }
}

pub fn space_to_json(s: &Space) -> Value {
    match s {
        Space::WeightedLq { q, subspace } => json!({
            "kind": "weighted_lq",
            "q": number_to_json(*q),
            "subspace": subspace,
        }),
        Space::Schatten { q } => json!({"kind": "schatten", "q": number_to_json(*q)}),
        Space::ParallelogramS1 { n, lambda } => json!({"kind": "parallelogram_s1", "n": n, "lambda": lambda}),
        Space::Snowflake { base, alpha } => json!({"kind": "snowflake", "base": space_to_json(base), "alpha": alpha}),
        Space::BipartiteGraph { n } => json!({"kind": "bipartite", "n": n}),
        Space::RealLine => json!({"kind": "real_line"}),
    }
}

pub fn dist_to_json(d: &FiniteDist) -> Value {
    json!({
        "atoms": d.atoms().iter().map(point_to_json).collect::<Vec<_>>(),
        "probs": d.probs(),
    })
}

pub fn config_to_json(c: &Config) -> Value {
    json!({
        "space": space_to_json(c.space()),
        "p": c.p(),
        "x": dist_to_json(c.x()),
        "y": dist_to_json(c.y()),
    })
}

fn field<'a>(obj: &'a Map<String, Value>, key: &str, path: &str) -> Result<&'a Value> {
    obj.get(key).ok_or_else(|| err(&format!("{path}.{key}"), "missing field"))
}

fn object<'a>(v: &'a Value, path: &str) -> Result<&'a Map<String, Value>> {
    v.as_object().ok_or_else(|| err(path, "expected an object"))
}

fn array<'a>(v: &'a Value, path: &str) -> Result<&'a Vec<Value>> {
    v.as_array().ok_or_else(|| err(path, "expected an array"))
}

/// A real number; the strings `inf`, `-inf` are accepted as well as decimal
/// strings.
pub fn number_from_json(v: &Value, path: &str) -> Result<f64> {
    match v {
        Value::Number(n) => n.as_f64().ok_or_else(|| err(path, "not representable as f64")),
        Value::String(s) => parse_real(s).map_err(|m| err(path, m)),
        _ => Err(err(path, "expected a number")),
    }
}

fn parse_real(s: &str) -> std::result::Result<f64, String> {
    match s.trim() {
        "inf" | "+inf" | "infinity" => Ok(f64::INFINITY),
        "-inf" | "-infinity" => Ok(f64::NEG_INFINITY),
        t => t.parse::<f64>().map_err(|_| format!("`{s}` is not a number")),
    }
}

/// A probability: number, decimal string, or fraction `"a/b"`.
pub fn parse_probability(v: &Value, path: &str) -> Result<f64> {
    if let Value::String(s) = v {
        if let Some((a, b)) = s.split_once('/') {
            let a: f64 = a.trim().parse().map_err(|_| err(path, format!("bad numerator in `{s}`")))?;
            let b: f64 = b.trim().parse().map_err(|_| err(path, format!("bad denominator in `{s}`")))?;
            if b == 0.0 {
                return Err(err(path, "zero denominator"));
            }
            return Ok(a / b);
        }
    }
    number_from_json(v, path)
}

fn positive_integer(v: &Value, path: &str) -> Result<usize> {
    match v.as_u64() {
        Some(n) if n > 0 => Ok(n as usize),
        _ => Err(err(path, "expected a positive integer")),
    }
}

/// An object with a `kind` field, or the compact string form (`"lq:3"`).
pub fn space_from_json(v: &Value, path: &str) -> Result<Space> {
    if let Value::String(s) = v {
        return s.parse::<Space>().map_err(|e| err(path, e));
    }
    let obj = object(v, path)?;
    let kind = field(obj, "kind", path)?
        .as_str()
        .ok_or_else(|| err(&format!("{path}.kind"), "expected a string"))?;
    let q_of = |obj: &Map<String, Value>| number_from_json(field(obj, "q", path)?, &format!("{path}.q"));
    let space = match kind {
        "weighted_lq" | "lq" => {
            let q = q_of(obj)?;
            let subspace = match obj.get("subspace").map(|s| s.as_str()) {
                None | Some(Some("full")) => Subspace::Full,
                Some(Some("zero_sum")) => Subspace::ZeroSum,
                _ => return Err(err(&format!("{path}.subspace"), "expected \"full\" or \"zero_sum\"")),
            };
            Space::WeightedLq { q, subspace }
        }
        "schatten" => Space::Schatten { q: q_of(obj)? },
        "parallelogram_s1" => {
            let n = positive_integer(field(obj, "n", path)?, &format!("{path}.n"))?;
            let lambda = match obj.get("lambda").map(|s| s.as_str()) {
                None | Some(Some("squared")) => LambdaVariant::Squared,
                Some(Some("as_printed")) => LambdaVariant::AsPrinted,
                _ => return Err(err(&format!("{path}.lambda"), "expected \"squared\" or \"as_printed\"")),
            };
            Space::ParallelogramS1 { n, lambda }
        }
        "snowflake" => {
            let base = space_from_json(field(obj, "base", path)?, &format!("{path}.base"))?;
            let alpha = number_from_json(field(obj, "alpha", path)?, &format!("{path}.alpha"))?;
            Space::Snowflake {
                base: Box::new(base),
                alpha,
            }
        }
        "bipartite" | "bipartite_graph" => Space::BipartiteGraph {
            n: positive_integer(field(obj, "n", path)?, &format!("{path}.n"))?,
        },
        "real_line" | "real" => Space::RealLine,
        other => return Err(err(&format!("{path}.kind"), format!("unknown space kind `{other}`"))),
    };
    space.validate().map_err(|e| err(path, e))?;
    Ok(space)
}

fn complex_from_json(v: &Value, path: &str) -> Result<Complex64> {
    match v {
        Value::Array(parts) if parts.len() == 2 => Ok(Complex64::new(
            number_from_json(&parts[0], &format!("{path}[0]"))?,
            number_from_json(&parts[1], &format!("{path}[1]"))?,
        )),
        Value::Array(_) => Err(err(path, "complex entries are [re, im] pairs")),
        other => Ok(Complex64::new(number_from_json(other, path)?, 0.0)),
    }
}

fn complex_list(v: &Value, path: &str) -> Result<Vec<Complex64>> {
    array(v, path)?
        .iter()
        .enumerate()
        .map(|(i, e)| complex_from_json(e, &format!("{path}[{i}]")))
        .collect()
}

/// Decodes an atom of the given space.
pub fn point_from_json(v: &Value, space: &Space, path: &str) -> Result<Point> {
    let point = match space {
        Space::Snowflake { base, .. } => return point_from_json(v, base, path),
        Space::RealLine => Point::Real(number_from_json(v, path)?),
        Space::WeightedLq { .. } | Space::ParallelogramS1 { .. } => {
            let vector = match v {
                Value::Object(obj) => {
                    let entries = complex_list(field(obj, "entries", path)?, &format!("{path}.entries"))?;
                    let wpath = format!("{path}.weights");
                    let weights: Vec<f64> = match obj.get("weights") {
                        Some(w) => array(w, &wpath)?
                            .iter()
                            .enumerate()
                            .map(|(i, x)| number_from_json(x, &format!("{wpath}[{i}]")))
                            .collect::<Result<_>>()?,
                        None => vec![1.0; entries.len()],
                    };
                    CVector::new(entries, weights)
                }
                _ => CVector::unit(complex_list(v, path)?),
            };
            Point::Vector(vector.map_err(|e| err(path, e))?)
        }
        Space::Schatten { .. } => {
            let obj = object(v, path)?;
            let dim = positive_integer(field(obj, "dim", path)?, &format!("{path}.dim"))?;
            let entries = complex_list(field(obj, "entries", path)?, &format!("{path}.entries"))?;
            Point::Matrix(CMatrix::new(dim, entries).map_err(|e| err(path, e))?)
        }
        Space::BipartiteGraph { .. } => {
            let obj = object(v, path)?;
            let side = match field(obj, "side", path)?.as_str() {
                Some("L") => Side::Left,
                Some("R") => Side::Right,
                _ => return Err(err(&format!("{path}.side"), "expected \"L\" or \"R\"")),
            };
            let index = field(obj, "index", path)?
                .as_u64()
                .ok_or_else(|| err(&format!("{path}.index"), "expected a nonnegative integer"))? as usize;
            Point::Vertex(Vertex { side, index })
        }
    };
    space.check_point(&point).map_err(|e| err(path, e))?;
    Ok(point)
}

pub fn dist_from_json(v: &Value, space: &Space, path: &str) -> Result<FiniteDist> {
    let obj = object(v, path)?;
    let apath = format!("{path}.atoms");
    let atoms: Vec<Point> = array(field(obj, "atoms", path)?, &apath)?
        .iter()
        .enumerate()
        .map(|(i, a)| point_from_json(a, space, &format!("{apath}[{i}]")))
        .collect::<Result<_>>()?;
    let ppath = format!("{path}.probs");
    let probs: Vec<f64> = match obj.get("probs") {
        Some(p) => array(p, &ppath)?
            .iter()
            .enumerate()
            .map(|(i, x)| parse_probability(x, &format!("{ppath}[{i}]")))
            .collect::<Result<_>>()?,
        None if !atoms.is_empty() => vec![1.0 / atoms.len() as f64; atoms.len()],
        None => Vec::new(),
    };
    FiniteDist::new(space.clone(), atoms, probs).map_err(|e| err(path, e))
}

pub fn config_from_json(v: &Value) -> Result<Config> {
    let obj = object(v, "config")?;
    let space = space_from_json(field(obj, "space", "config")?, "space")?;
    let p = number_from_json(field(obj, "p", "config")?, "p")?;
    let x = dist_from_json(field(obj, "x", "config")?, &space, "x")?;
    let y = dist_from_json(field(obj, "y", "config")?, &space, "y")?;
    Config::new(x, y, p).map_err(|e| err("config", e))
}

pub fn config_from_str(s: &str) -> Result<Config> {
    let v: Value = serde_json::from_str(s).map_err(|e| Error::Parse(format!("malformed JSON: {e}")))?;
    config_from_json(&v)
}
