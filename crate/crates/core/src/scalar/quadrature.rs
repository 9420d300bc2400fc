//! Composite Gauss–Legendre rules.

use std::sync::OnceLock;

use gauss_quad::legendre::GaussLegendre;

const ORDER: usize = 20;
const MAX_DEPTH: u32 = 40;
/// Dyadic panels toward an endpoint stop at this fraction of the interval.
const INNERMOST: f64 = 1e-15;

fn rule() -> &'static GaussLegendre {
    static RULE: OnceLock<GaussLegendre> = OnceLock::new();
    RULE.get_or_init(|| GaussLegendre::new(ORDER).expect("order is positive"))
}

pub(crate) fn panel(f: &impl Fn(f64) -> f64, a: f64, b: f64) -> f64 {
    rule().integrate(a, b, f)
}

/// Adaptive bisection until the whole-panel and split estimates agree to `tol`.
pub(crate) fn adaptive(f: &impl Fn(f64) -> f64, a: f64, b: f64, tol: f64) -> f64 {
    fn go(f: &impl Fn(f64) -> f64, a: f64, b: f64, whole: f64, tol: f64, depth: u32) -> f64 {
        let m = 0.5 * (a + b);
        let left = panel(f, a, m);
        let right = panel(f, m, b);
        let split = left + right;
        if depth >= MAX_DEPTH || (split - whole).abs() <= tol {
            return split;
        }
        go(f, a, m, left, 0.5 * tol, depth + 1) + go(f, m, b, right, 0.5 * tol, depth + 1)
    }
    if a == b {
        return 0.0;
    }
    go(f, a, b, panel(f, a, b), tol, 0)
}

/// `∫_0^L f(a + u) du` where `f` may have a `k·log u` singularity at `u = 0`
/// and at `u = L`. `near_start(u) = f(a + u)` and `near_end(u) = f(a + L − u)`
/// take the exact offset so the singular factor never suffers cancellation.
///
/// Each half is cut into panels `[h/2, h]` with `h` halving toward the
/// endpoint; the innermost piece of width `h₀` is integrated as
/// `f(h₀) + k·log(u/h₀)`, with `k` read off the last two samples.
pub(crate) fn endpoint_singular(
    near_start: &impl Fn(f64) -> f64,
    near_end: &impl Fn(f64) -> f64,
    length: f64,
    tol: f64,
) -> f64 {
    if !(length > 0.0) {
        return 0.0;
    }
    let half = 0.5 * length;
    let toward = |g: &dyn Fn(f64) -> f64| -> f64 {
        let g = |u: f64| g(u);
        let mut total = 0.0;
        let mut h = half;
        let floor = INNERMOST * half;
        while h > floor {
            total += adaptive(&g, 0.5 * h, h, tol);
            h *= 0.5;
        }
        let k = (g(h) - g(0.5 * h)) / std::f64::consts::LN_2;
        total + h * (g(h) - k)
    };
    toward(near_start) + toward(near_end)
}
