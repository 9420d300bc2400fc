//! Parsing of the free-form numeric arguments: reals with `inf`, value
//! lists and ranges, and `--key value` parameter lists.

use moment_moduli::constructions::Params;

/// Decimal real, or `inf`.
pub fn real(s: &str) -> Result<f64, String> {
    let t = s.trim();
    match t {
        "inf" | "+inf" => Ok(f64::INFINITY),
        _ => {
            let v: f64 = t.parse().map_err(|_| format!("`{s}` is not a decimal number"))?;
            if v.is_nan() {
                return Err(format!("`{s}` is not a number"));
            }
            Ok(v)
        }
    }
}

/// `a,b,c` or `lo:hi:step` (inclusive).
pub fn values(spec: &str) -> Result<Vec<f64>, String> {
    let parts: Vec<&str> = spec.split(':').collect();
    match parts.as_slice() {
        [lo, hi, step] => {
            let (lo, hi, step) = (real(lo)?, real(hi)?, real(step)?);
            moment_moduli::constants::grid(lo, hi, step).map_err(|e| e.to_string())
        }
        [list] => list.split(',').map(real).collect(),
        _ => Err(format!("`{spec}`: expected a comma list or lo:hi:step")),
    }
}

/// `--name value` pairs, in order; names may use `_` or `-`.
pub fn key_values(raw: &[String]) -> Result<Vec<(String, String)>, String> {
    let mut out = Vec::new();
    let mut it = raw.iter();
    while let Some(flag) = it.next() {
        let name = flag
            .strip_prefix("--")
            .filter(|n| !n.is_empty())
            .ok_or_else(|| format!("expected `--name value`, found `{flag}`"))?;
        if let Some((k, v)) = name.split_once('=') {
            out.push((k.to_string(), v.to_string()));
            continue;
        }
        let value = it.next().ok_or_else(|| format!("missing value for `--{name}`"))?;
        out.push((name.to_string(), value.clone()));
    }
    Ok(out)
}

pub fn params(raw: &[String]) -> Result<Params, String> {
    let mut out = Params::new();
    for (k, v) in key_values(raw)? {
        let value = real(&v).map_err(|e| format!("--{k}: {e}"))?;
        if out.insert(k.clone(), value).is_some() {
            return Err(format!("--{k} given twice"));
        }
    }
    Ok(out)
}

/// Every combination of the listed values, keys in sorted order.
pub fn cartesian(axes: &[(String, Vec<f64>)]) -> Vec<Params> {
    let mut out = vec![Params::new()];
    for (key, vals) in axes {
        out = out
            .into_iter()
            .flat_map(|p| {
                vals.iter().map(move |v| {
                    let mut q = p.clone();
                    q.insert(key.clone(), *v);
                    q
                })
            })
            .collect();
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reals_and_lists() {
        assert_eq!(real("inf").unwrap(), f64::INFINITY);
        assert_eq!(real("2.5").unwrap(), 2.5);
        assert!(real("two").is_err());
        assert_eq!(values("1:2:0.5").unwrap(), vec![1.0, 1.5, 2.0]);
        assert_eq!(values("3,inf").unwrap(), vec![3.0, f64::INFINITY]);
        assert!(values("1:2").is_err());
    }

    #[test]
    fn key_value_pairs() {
        let raw: Vec<String> = ["--n", "5", "--q=inf", "--p", "1"].iter().map(|s| s.to_string()).collect();
        let p = params(&raw).unwrap();
        assert_eq!(p["n"], 5.0);
        assert_eq!(p["q"], f64::INFINITY);
        assert!(params(&["--n".to_string()]).is_err());
        assert!(params(&["n".to_string(), "5".to_string()]).is_err());
        assert!(params(&["--n".into(), "1".into(), "--n".into(), "2".into()]).is_err());
    }

    #[test]
    fn grid_of_params() {
        let axes = vec![("n".to_string(), vec![2.0, 3.0]), ("p".to_string(), vec![1.0, 2.0, 3.0])];
        let all = cartesian(&axes);
        assert_eq!(all.len(), 6);
        assert_eq!(all[1]["p"], 2.0);
    }
}
