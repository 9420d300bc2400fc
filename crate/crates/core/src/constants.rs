//! Closed-form exponents and constants for `L_q`, interpolation and metric
//! bounds, with their piecewise expansions.

use crate::error::{Error, Result};

/// Slack used when deciding membership of a closed parameter range.
const RANGE_SLACK: f64 = 1e-12;

/// Exponent pair `(p, q)` with `p ≥ 1`, `1 ≤ q < ∞`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PQ {
    pub p: f64,
    pub q: f64,
}

impl PQ {
    pub fn new(p: f64, q: f64) -> Result<Self> {
        if !(p >= 1.0 && p.is_finite()) {
            return Err(Error::param("p", p, "must be a finite real at least 1"));
        }
        if !(q >= 1.0 && q.is_finite()) {
            return Err(Error::param("q", q, "must be a finite real at least 1"));
        }
        Ok(Self { p, q })
    }
}

/// Interpolation parameter `θ ∈ [0, 1]` with `2/(2−θ) ≤ p ≤ 2/θ`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ThetaP {
    pub theta: f64,
    pub p: f64,
}

impl ThetaP {
    pub fn new(theta: f64, p: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&theta) {
            return Err(Error::param("theta", theta, "must lie in [0, 1]"));
        }
        let lo = 2.0 / (2.0 - theta);
        let hi = 2.0 / theta;
        if !(p >= lo - RANGE_SLACK && p <= hi + RANGE_SLACK) {
            return Err(Error::param("p", p, "must satisfy 2/(2-theta) <= p <= 2/theta"));
        }
        Ok(Self { theta, p })
    }
}

/// Hölder conjugate `q/(q−1)`, infinite at `q = 1`.
fn conj(q: f64) -> f64 {
    if q == 1.0 {
        f64::INFINITY
    } else {
        q / (q - 1.0)
    }
}

fn le(a: f64, b: f64) -> bool {
    a <= b + RANGE_SLACK * b.abs().max(1.0)
}

/// `c(p,q) = min{1, p−1, p/q, p(q−1)/q}`.
pub fn c_exponent(pq: PQ) -> f64 {
    let PQ { p, q } = pq;
    1f64.min(p - 1.0).min(p / q).min(p * (q - 1.0) / q)
}

/// Values of the four ranges of the piecewise form of `c` that contain
/// `(p, q)`, as `(range, value)` with ranges numbered from 1.
pub fn c_exponent_piecewise(pq: PQ) -> Vec<(u8, f64)> {
    let PQ { p, q } = pq;
    let qc = conj(q);
    let mut out = Vec::new();
    if (le(p, q) && le(q, 2.0)) || (le(p, qc) && le(qc, 2.0)) {
        out.push((1, p - 1.0));
    }
    if le(q, p) && le(p, qc) {
        out.push((2, p * (q - 1.0) / q));
    }
    if le(qc, p) && le(p, q) {
        out.push((3, p / q));
    }
    if (le(qc, p) && le(2.0, qc)) || (le(q, p) && le(2.0, q)) {
        out.push((4, 1.0));
    }
    out
}

/// Values of the five ranges of the piecewise upper exponent `C` containing `(p, q)`.
pub fn c_upper_piecewise(pq: PQ) -> Vec<(u8, f64)> {
    let PQ { p, q } = pq;
    let pc = conj(p);
    let qc = conj(q);
    let mut out = Vec::new();
    if le(pc, q) && le(q, p) {
        out.push((1, p - 1.0));
    }
    if le(qc, p) && le(p, q) {
        out.push((2, p * (q - 2.0) / q + 1.0));
    }
    if le(2.0, q) && le(p, qc) {
        out.push((3, 2.0 - p / q));
    }
    if le(q, 2.0) && le(q, p) && le(p, qc) {
        out.push((4, p / q));
    }
    if le(p, q) && le(q, 2.0) {
        out.push((5, 1.0));
    }
    out
}

/// Range of the piecewise `C` that determines its value at `(p, q)`.
pub fn c_upper_range(pq: PQ) -> u8 {
    select_min(&c_upper_piecewise(pq)).0
}

fn select_min(ranges: &[(u8, f64)]) -> (u8, f64) {
    ranges
        .iter()
        .copied()
        .fold(None, |best: Option<(u8, f64)>, r| match best {
            Some(b) if b.1 <= r.1 => Some(b),
            _ => Some(r),
        })
        .expect("the five ranges cover every (p, q) with p, q >= 1")
}

/// Upper exponent `C(p,q)` of the roundness modulus of `L_q`.
///
/// On the segment `q = 2`, `p < 2` two ranges overlap with different values;
/// every range is a valid upper bound there, so the smallest is returned.
#[allow(non_snake_case)]
pub fn C_exponent(pq: PQ) -> f64 {
    select_min(&c_upper_piecewise(pq)).1
}

/// Conjectured sharp exponent `max{1, p−1, p(q−2)/q + 1}`.
#[allow(non_snake_case)]
pub fn C_opt_exponent(pq: PQ) -> f64 {
    let PQ { p, q } = pq;
    1f64.max(p - 1.0).max(p * (q - 2.0) / q + 1.0)
}

pub fn c_opt_piecewise(pq: PQ) -> Vec<(u8, f64)> {
    let PQ { p, q } = pq;
    let mut out = Vec::new();
    if le(2.0, p) && le(q, p) {
        out.push((1, p - 1.0));
    }
    if le(2.0, q) && le(p, q) {
        out.push((2, p * (q - 2.0) / q + 1.0));
    }
    if le(p, 2.0) && le(q, 2.0) {
        out.push((3, 1.0));
    }
    out
}

/// `2 min{1/p, 1−1/p, 1/q, 1−1/q}`.
pub fn theta_max(pq: PQ) -> f64 {
    let PQ { p, q } = pq;
    2.0 * (1.0 / p).min(1.0 - 1.0 / p).min(1.0 / q).min(1.0 - 1.0 / q)
}

/// Minimizes, over `Q ≥ q`, the largest of `pQ/q − 1`, `3 − pQ/q`,
/// `1 + p(Q−2)/q` and `1 + p(2−Q)/q`. Returns `(value, Q*)`.
///
/// In `t = pQ/q` the objective is `max(t + a, b − t)` with
/// `a = max(−1, 1 − 2p/q)` and `b = max(3, 1 + 2p/q)`, minimized over `t ≥ p`
/// at `t = max(p, (b − a)/2)`.
pub fn snowflake_exponent(pq: PQ) -> (f64, f64) {
    let PQ { p, q } = pq;
    let r = p / q;
    let a = (-1f64).max(1.0 - 2.0 * r);
    let b = 3f64.max(1.0 + 2.0 * r);
    let t = p.max((b - a) / 2.0);
    let value = (t + a).max(b - t);
    let q_star = if t == p { q } else { t * q / p };
    (value, q_star)
}

/// The four linear pieces of the snowflake objective at a given `Q`.
pub fn snowflake_objective(pq: PQ, big_q: f64) -> f64 {
    let PQ { p, q } = pq;
    let t = p * big_q / q;
    (t - 1.0).max(3.0 - t).max(1.0 + p * (big_q - 2.0) / q).max(1.0 + p * (2.0 - big_q) / q)
}

/// `3^p / 2^{p−1}`.
pub fn general_bound(p: f64) -> Result<f64> {
    check_p(p)?;
    Ok(3f64.powf(p) / 2f64.powf(p - 1.0))
}

/// `2^p + 1`.
pub fn metric_bound(p: f64) -> Result<f64> {
    check_p(p)?;
    Ok(2f64.powf(p) + 1.0)
}

fn check_p(p: f64) -> Result<()> {
    if !(p >= 1.0 && p.is_finite()) {
        return Err(Error::param("p", p, "must be a finite real at least 1"));
    }
    Ok(())
}

/// The two expressions in the barycentric/mixture bound for `L_q`.
pub fn bm_bound_terms(pq: PQ) -> (f64, f64) {
    let c = c_exponent(pq);
    let big_c = C_exponent(pq);
    let p = pq.p;
    let first = 3f64.powf(p) / 2f64.powf(p - 1.0) * (2f64.sqrt() / 3.0).powf(2.0 * c);
    let second = (2f64.powf(big_c) + 2.0) / 2f64.powf(c + 1.0);
    (first, second)
}

pub fn bm_bound(pq: PQ) -> f64 {
    let (a, b) = bm_bound_terms(pq);
    a.min(b)
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct InterpolationBounds {
    pub r_bound: f64,
    pub j_bound: f64,
    pub mb_bound: f64,
    /// The two expressions inside the minimum for `mb_bound`.
    pub mb_terms: (f64, f64),
}

pub fn interpolation_bounds(tp: ThetaP) -> InterpolationBounds {
    let ThetaP { theta, p } = tp;
    let r_bound = 2f64.powf(1.0 + (1.0 - theta) * p);
    let j_bound = 2f64.powf(theta * p / 2.0);
    let first = 3f64.powf(p) / 2f64.powf(p - 1.0) * (2f64.sqrt() / 3.0).powf(p * theta);
    let second = (1.0 + 2f64.powf((1.0 - theta) * p)) / 2f64.powf(theta * p / 2.0);
    InterpolationBounds {
        r_bound,
        j_bound,
        mb_bound: first.min(second),
        mb_terms: (first, second),
    }
}

/// The branch of the piecewise form of the interpolation mixture bound:
/// the first expression when `p ≥ 1/(1−θ)`, otherwise the second.
pub fn interpolation_mb_piecewise(tp: ThetaP) -> f64 {
    let b = interpolation_bounds(tp);
    let threshold = if tp.theta == 1.0 { f64::INFINITY } else { 1.0 / (1.0 - tp.theta) };
    if tp.p >= threshold {
        b.mb_terms.0
    } else {
        b.mb_terms.1
    }
}

/// One row of the constants table.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ConstantsRow {
    pub p: f64,
    pub q: f64,
    pub c: f64,
    pub big_c: f64,
    pub c_opt: f64,
    pub theta_max: f64,
    pub snowflake: f64,
    pub q_star: f64,
    pub bm_bound: f64,
    pub general_bound: f64,
}

pub const CONSTANTS_HEADER: &str = "p,q,c,C,C_opt,theta_max,snowflake,Q_star,bm_bound,general_bound";

pub fn constants_row(pq: PQ) -> ConstantsRow {
    let (snowflake, q_star) = snowflake_exponent(pq);
    ConstantsRow {
        p: pq.p,
        q: pq.q,
        c: c_exponent(pq),
        big_c: C_exponent(pq),
        c_opt: C_opt_exponent(pq),
        theta_max: theta_max(pq),
        snowflake,
        q_star,
        bm_bound: bm_bound(pq),
        general_bound: 3f64.powf(pq.p) / 2f64.powf(pq.p - 1.0),
    }
}

impl ConstantsRow {
    pub fn values(&self) -> [f64; 10] {
        [
            self.p,
            self.q,
            self.c,
            self.big_c,
            self.c_opt,
            self.theta_max,
            self.snowflake,
            self.q_star,
            self.bm_bound,
            self.general_bound,
        ]
    }
}

/// Evenly spaced values `lo, lo + step, …` up to `hi` (inclusive within rounding).
pub fn grid(lo: f64, hi: f64, step: f64) -> Result<Vec<f64>> {
    if !(step > 0.0 && step.is_finite()) {
        return Err(Error::param("step", step, "must be positive"));
    }
    if !(hi >= lo) {
        return Err(Error::param("max", hi, "must be at least the minimum"));
    }
    let count = ((hi - lo) / step + 1e-9).floor() as usize + 1;
    Ok((0..count).map(|i| lo + step * i as f64).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pq(p: f64, q: f64) -> PQ {
        PQ::new(p, q).unwrap()
    }

    #[test]
    fn c_examples() {
        assert_eq!(c_exponent(pq(2.0, 2.0)), 1.0);
        assert_eq!(c_exponent(pq(1.0, 1.0)), 0.0);
        assert_eq!(c_exponent(pq(3.0, 2.0)), 1.0);
    }

    #[test]
    fn big_c_examples() {
        assert_eq!(C_exponent(pq(2.0, 2.0)), 1.0);
        assert_eq!(C_exponent(pq(4.0, 2.0)), 3.0);
        assert_eq!(C_exponent(pq(1.0, 4.0)), 1.75);
    }

    #[test]
    fn big_c_overlap_at_q_two() {
        let ranges = c_upper_piecewise(pq(1.5, 2.0));
        assert!(ranges.contains(&(3, 1.25)) && ranges.contains(&(5, 1.0)));
        assert_eq!(C_exponent(pq(1.5, 2.0)), 1.0);
    }

    #[test]
    fn c_opt_examples() {
        assert_eq!(C_opt_exponent(pq(1.0, 1.0)), 1.0);
        assert_eq!(C_opt_exponent(pq(3.0, 2.0)), 2.0);
        assert_eq!(C_opt_exponent(pq(2.0, 4.0)), 2.0);
    }

    #[test]
    fn snowflake_examples() {
        assert_eq!(snowflake_exponent(pq(1.0, 1.0)), (1.0, 2.0));
        assert_eq!(snowflake_exponent(pq(4.0, 2.0)), (3.0, 2.0));
        assert_eq!(snowflake_exponent(pq(1.0, 2.0)), (1.5, 3.0));
    }

    #[test]
    fn snowflake_beats_a_fine_scan() {
        for &(p, q) in &[(1.0, 1.0), (1.3, 4.0), (2.0, 2.0), (5.0, 1.5), (1.0, 7.0), (3.0, 3.0)] {
            let x = pq(p, q);
            let (v, qs) = snowflake_exponent(x);
            assert!((snowflake_objective(x, qs) - v).abs() < 1e-12);
            let scan = (0..200_000)
                .map(|i| snowflake_objective(x, q + i as f64 * 1e-4))
                .fold(f64::INFINITY, f64::min);
            assert!(v <= scan + 1e-12 && scan - v < 1e-3, "({p},{q}): {v} vs {scan}");
        }
    }

    #[test]
    fn bounds_examples() {
        assert_eq!(general_bound(1.0).unwrap(), 3.0);
        assert_eq!(general_bound(2.0).unwrap(), 4.5);
        assert_eq!(general_bound(3.0).unwrap(), 6.75);
        assert_eq!(metric_bound(1.0).unwrap(), 3.0);
        assert_eq!(metric_bound(2.0).unwrap(), 5.0);
        assert!(metric_bound(0.0).is_err());
        assert!(general_bound(0.5).is_err());
    }

    #[test]
    fn bm_examples() {
        assert!((bm_bound(pq(1.5, 2.0)) - 2f64.sqrt()).abs() < 1e-12);
        assert!((bm_bound(pq(1.0, 1.0)) - 2.0).abs() < 1e-12);
        let (a, b) = bm_bound_terms(pq(3.0, 3.0));
        assert!((a - b).abs() < 1e-12);
        let (a, b) = bm_bound_terms(pq(2.9, 2.9));
        assert!(b < a);
        let (a, b) = bm_bound_terms(pq(3.1, 3.1));
        assert!(a < b);
    }

    #[test]
    fn theta_max_examples() {
        assert_eq!(theta_max(pq(2.0, 2.0)), 1.0);
        assert_eq!(theta_max(pq(1.0, 1.0)), 0.0);
        assert!((theta_max(pq(3.0, 2.0)) - 2.0 / 3.0).abs() < 1e-15);
    }

    #[test]
    fn interpolation_examples() {
        let b = interpolation_bounds(ThetaP::new(1.0, 2.0).unwrap());
        assert!((b.r_bound - 2.0).abs() < 1e-15 && (b.j_bound - 2.0).abs() < 1e-15);
        assert!((b.mb_bound - 1.0).abs() < 1e-12);
        let b = interpolation_bounds(ThetaP::new(0.0, 1.0).unwrap());
        assert_eq!((b.r_bound, b.j_bound), (4.0, 1.0));
        assert!((b.mb_bound - 3.0).abs() < 1e-12);
        // The two expressions cross at p = 1/(1 − θ).
        let b = interpolation_bounds(ThetaP::new(2.0 / 3.0, 3.0).unwrap());
        assert!((b.mb_terms.0 - b.mb_terms.1).abs() < 1e-12);
        assert!((b.mb_terms.0 - 1.5).abs() < 1e-12);
        assert!(ThetaP::new(0.5, 5.0).is_err());
        assert!(ThetaP::new(0.5, 1.0).is_err());
    }

    #[test]
    fn interpolation_selector_matches_min() {
        for i in 0..=50 {
            let theta = i as f64 / 50.0;
            let lo = 2.0 / (2.0 - theta);
            let hi = if theta == 0.0 { 8.0 } else { (2.0 / theta).min(8.0) };
            for k in 0..=40 {
                let p = lo + (hi - lo) * k as f64 / 40.0;
                let tp = ThetaP::new(theta, p).unwrap();
                let b = interpolation_bounds(tp);
                assert!((interpolation_mb_piecewise(tp) - b.mb_bound).abs() <= 1e-12 * b.mb_bound);
            }
        }
    }

    #[test]
    fn grid_endpoints() {
        assert_eq!(grid(1.0, 4.0, 0.5).unwrap().len(), 7);
        assert!(grid(1.0, 4.0, 0.0).is_err());
    }
}
