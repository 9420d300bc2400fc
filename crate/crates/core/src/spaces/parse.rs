use std::str::FromStr;

use super::{LambdaVariant, Space};
use crate::error::{Error, Result};

/// Compact command-line spelling of a space.
///
/// `real`, `lq:Q`, `lq0:Q` (zero-sum hyperplane), `schatten:Q`, `s1par:N`,
/// `s1par_unsquared:N`, `bipartite:N`, `snowflake:ALPHA:<base>`; `Q` may be `inf`.
impl FromStr for Space {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let (head, rest) = s.split_once(':').unwrap_or((s, ""));
        let number = |t: &str, what: &str| -> Result<f64> {
            match t {
                "inf" => Ok(f64::INFINITY),
                _ => t.parse::<f64>().map_err(|_| Error::Parse(format!("space `{s}`: bad {what} `{t}`"))),
            }
        };
        let count = |t: &str| -> Result<usize> {
            t.parse::<usize>().map_err(|_| Error::Parse(format!("space `{s}`: bad dimension `{t}`")))
        };
        match head {
            "real" if rest.is_empty() => Ok(Space::RealLine),
            "lq" => Space::lq(number(rest, "q")?),
            "lq0" => Space::lq_zero_sum(number(rest, "q")?),
            "schatten" => Space::schatten(number(rest, "q")?),
            "s1par" => Space::parallelogram_s1(count(rest)?),
            "s1par_unsquared" => {
                let n = count(rest)?;
                Space::parallelogram_s1(n)?;
                Ok(Space::ParallelogramS1 { n, lambda: LambdaVariant::AsPrinted })
            }
            "bipartite" => Space::bipartite(count(rest)?),
            "snowflake" => {
                let (alpha, base) = rest
                    .split_once(':')
                    .ok_or_else(|| Error::Parse(format!("space `{s}`: expected snowflake:ALPHA:BASE")))?;
                Space::snowflake(base.parse()?, number(alpha, "alpha")?)
            }
            _ => Err(Error::Parse(format!(
                "unknown space `{s}`; expected real, lq:Q, lq0:Q, schatten:Q, s1par:N, s1par_unsquared:N, bipartite:N or snowflake:ALPHA:BASE"
            ))),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_every_kind() {
        assert_eq!("real".parse::<Space>().unwrap(), Space::RealLine);
        assert_eq!("lq:inf".parse::<Space>().unwrap(), Space::lq(f64::INFINITY).unwrap());
        assert_eq!("lq0:3".parse::<Space>().unwrap(), Space::lq_zero_sum(3.0).unwrap());
        assert_eq!("schatten:1".parse::<Space>().unwrap(), Space::schatten(1.0).unwrap());
        assert_eq!("s1par:16".parse::<Space>().unwrap(), Space::parallelogram_s1(16).unwrap());
        assert_eq!("bipartite:3".parse::<Space>().unwrap(), Space::bipartite(3).unwrap());
        assert_eq!(
            "snowflake:0.5:lq:1".parse::<Space>().unwrap(),
            Space::snowflake(Space::lq(1.0).unwrap(), 0.5).unwrap()
        );
        assert!("lq:0.5".parse::<Space>().is_err());
        assert!("hilbert".parse::<Space>().is_err());
        assert!("s1par:x".parse::<Space>().is_err());
    }
}
