use num_complex::Complex64;

use super::jacobi::jacobi_svd;
use super::point::{CMatrix, CVector};
use super::LambdaVariant;
use crate::error::{Error, Result};

/// Weighted `ℓ_q` norm `(Σ_k w_k |x_k|^q)^{1/q}`; `q = ∞` takes the max of
/// `|x_k|` over coordinates with positive weight.
pub fn lq_norm(x: &CVector, q: f64) -> Result<f64> {
    if q.is_nan() || q < 1.0 {
        return Err(Error::param("q", q, "must be at least 1"));
    }
    if q.is_infinite() && x.weights().iter().all(|&w| w == 0.0) {
        return Err(Error::InvalidPoint("sup norm needs at least one positive weight".into()));
    }
    Ok(weighted_norm(x.entries().iter().copied(), x.weights(), q))
}

pub(crate) fn lq_distance(a: &CVector, b: &CVector, q: f64) -> f64 {
    weighted_norm(
        a.entries().iter().zip(b.entries()).map(|(x, y)| x - y),
        a.weights(),
        q,
    )
}

fn weighted_norm(entries: impl Iterator<Item = Complex64> + Clone, weights: &[f64], q: f64) -> f64 {
    let max = entries
        .clone()
        .zip(weights)
        .filter(|(_, &w)| w > 0.0)
        .map(|(z, _)| z.norm())
        .fold(0.0, f64::max);
    if q.is_infinite() || max == 0.0 {
        return max;
    }
    if q == 1.0 {
        return entries.zip(weights).map(|(z, w)| w * z.norm()).sum();
    }
    if q == 2.0 {
        let s: f64 = entries.zip(weights).map(|(z, w)| w * z.norm_sqr()).sum();
        return s.sqrt();
    }
    let s: f64 = entries
        .zip(weights)
        .filter(|(_, &w)| w > 0.0)
        .map(|(z, w)| w * (z.norm() / max).powf(q))
        .sum();
    max * s.powf(1.0 / q)
}

pub(crate) fn lq_subgradient(v: &CVector, q: f64) -> (f64, Vec<f64>) {
    let mut g = vec![0.0; 2 * v.len()];
    let norm = lq_subgradient_into(v.entries(), v.weights(), q, &mut g);
    (norm, g)
}

/// Writes a subgradient of the weighted `ℓ_q` norm at `x` into `g` (flat
/// `(re, im)` layout) and returns the norm.
pub(crate) fn lq_subgradient_into(x: &[Complex64], weights: &[f64], q: f64, g: &mut [f64]) -> f64 {
    g.fill(0.0);
    let norm = weighted_norm(x.iter().copied(), weights, q);
    if norm == 0.0 {
        return norm;
    }
    if q.is_infinite() {
        let mut best: Option<(usize, f64)> = None;
        for (k, (z, &w)) in x.iter().zip(weights).enumerate() {
            if w > 0.0 && best.is_none_or(|(_, m)| z.norm() > m) {
                best = Some((k, z.norm()));
            }
        }
        if let Some((k, m)) = best {
            g[2 * k] = x[k].re / m;
            g[2 * k + 1] = x[k].im / m;
        }
        return norm;
    }
    for (k, (z, &w)) in x.iter().zip(weights).enumerate() {
        let a = z.norm();
        if a == 0.0 || w == 0.0 {
            continue;
        }
        let c = if q == 1.0 { w / a } else { w * (a / norm).powf(q - 1.0) / a };
        g[2 * k] = c * z.re;
        g[2 * k + 1] = c * z.im;
    }
    norm
}

/// Singular values of a square complex matrix via cyclic Jacobi on `A*A`.
pub fn singular_values(a: &CMatrix) -> Result<Vec<f64>> {
    if a.entries().iter().any(|z| !(z.re.is_finite() && z.im.is_finite())) {
        return Err(Error::InvalidPoint("non-finite matrix entry".into()));
    }
    let mut s = jacobi_svd(a).singular_values;
    s.sort_by(|x, y| y.total_cmp(x));
    Ok(s)
}

/// Schatten-`q` norm `(Σ σ_i^q)^{1/q}`.
pub fn schatten_norm(a: &CMatrix, q: f64) -> Result<f64> {
    if q.is_nan() || q < 1.0 || q.is_infinite() {
        return Err(Error::param("q", q, "Schatten exponent must lie in [1, ∞)"));
    }
    let s = singular_values(a)?;
    Ok(sequence_norm(&s, q))
}

fn sequence_norm(s: &[f64], q: f64) -> f64 {
    let max = s.iter().copied().fold(0.0, f64::max);
    if max == 0.0 {
        return 0.0;
    }
    if q == 1.0 {
        return s.iter().sum();
    }
    max * s.iter().map(|x| (x / max).powf(q)).sum::<f64>().powf(1.0 / q)
}

pub(crate) fn schatten_distance(a: &CMatrix, b: &CMatrix, q: f64) -> Result<f64> {
    if a.dim() != b.dim() {
        return Err(Error::KindMismatch(format!("matrix dimensions {} and {} differ", a.dim(), b.dim())));
    }
    let d = a.entries().iter().zip(b.entries()).map(|(x, y)| x - y).collect();
    schatten_norm(&CMatrix::new(a.dim(), d)?, q)
}

pub(crate) fn schatten_subgradient(a: &CMatrix, q: f64) -> (f64, Vec<f64>) {
    let n = a.dim();
    let svd = jacobi_svd(a);
    let norm = sequence_norm(&svd.singular_values, q);
    let mut g = vec![Complex64::new(0.0, 0.0); n * n];
    if norm > 0.0 {
        for (i, &sigma) in svd.singular_values.iter().enumerate() {
            if sigma <= 1e-14 * norm {
                continue;
            }
            let c = if q == 1.0 { 1.0 } else { (sigma / norm).powf(q - 1.0) } / sigma;
            let av = &svd.av_columns[i];
            let v = &svd.v_columns[i];
            for r in 0..n {
                for s in 0..n {
                    g[r * n + s] += av[r] * v[s].conj() * c;
                }
            }
        }
    }
    (norm, g.iter().flat_map(|z| [z.re, z.im]).collect())
}

/// Area `Λ(a)` of the parallelogram spanned by `Re a` and `Im a`.
pub fn lambda_area(a: &[Complex64], variant: LambdaVariant) -> f64 {
    let (r2, i2, ri) = gram(a);
    let radicand = match variant {
        LambdaVariant::Squared => r2 * i2 - ri * ri,
        LambdaVariant::AsPrinted => r2 * i2 - ri,
    };
    radicand.max(0.0).sqrt()
}

fn gram(a: &[Complex64]) -> (f64, f64, f64) {
    a.iter().fold((0.0, 0.0, 0.0), |(r2, i2, ri), z| {
        (r2 + z.re * z.re, i2 + z.im * z.im, ri + z.re * z.im)
    })
}

/// `½√(‖c‖² + 2Λ(c)) + ½√(‖c‖² − 2Λ(c))`.
pub fn parallelogram_s1_norm(c: &[Complex64]) -> f64 {
    parallelogram_norm_with(c, LambdaVariant::Squared)
}

pub(crate) fn parallelogram_norm_with(c: &[Complex64], variant: LambdaVariant) -> f64 {
    let (r2, i2, _) = gram(c);
    let sq = r2 + i2;
    let lambda = lambda_area(c, variant);
    let plus = sq + 2.0 * lambda;
    let mut minus = sq - 2.0 * lambda;
    if minus < 0.0 {
        // Rounding puts the radicand a hair below zero for the squared
        // variant; the unsquared variant can be genuinely negative.
        minus = 0.0;
    }
    0.5 * plus.sqrt() + 0.5 * minus.sqrt()
}

/// Distance of two points of `ℂ^{2n}` under the parallelogram trace-class norm.
pub fn parallelogram_s1_distance(a: &CVector, b: &CVector, n: usize) -> Result<f64> {
    parallelogram_distance_with(a, b, n, LambdaVariant::Squared)
}

pub(crate) fn parallelogram_distance_with(a: &CVector, b: &CVector, n: usize, variant: LambdaVariant) -> Result<f64> {
    if a.len() != 2 * n || b.len() != 2 * n {
        return Err(Error::KindMismatch(format!(
            "parallelogram points need length {}, got {} and {}",
            2 * n,
            a.len(),
            b.len()
        )));
    }
    let c: Vec<Complex64> = a.entries().iter().zip(b.entries()).map(|(x, y)| x - y).collect();
    Ok(parallelogram_norm_with(&c, variant))
}

/// The squared-variant norm is the top singular value of the `2 × 2n` real
/// matrix with rows `Re c`, `Im c`; its gradient is `u vᵀ`.
pub(crate) fn parallelogram_subgradient(c: &[Complex64]) -> (f64, Vec<f64>) {
    let norm = parallelogram_s1_norm(c);
    let mut g = vec![0.0; 2 * c.len()];
    if norm == 0.0 {
        return (norm, g);
    }
    let (r2, i2, ri) = gram(c);
    let half_gap = ((r2 - i2) / 2.0).hypot(ri);
    let top = (r2 + i2) / 2.0 + half_gap;
    let cand_a = (ri, top - r2);
    let cand_b = (top - i2, ri);
    let (u0, u1) = if cand_a.0.hypot(cand_a.1) >= cand_b.0.hypot(cand_b.1) { cand_a } else { cand_b };
    let len = u0.hypot(u1);
    let (u0, u1) = if len > 0.0 { (u0 / len, u1 / len) } else { (1.0, 0.0) };
    let sigma = top.sqrt();
    for (k, z) in c.iter().enumerate() {
        let v = (u0 * z.re + u1 * z.im) / sigma;
        g[2 * k] = u0 * v;
        g[2 * k + 1] = u1 * v;
    }
    (norm, g)
}
