//! Cyclic Jacobi diagonalization of `A*A` for small dense complex matrices.
//!
//! The rotations are chosen from the entries of the Gram matrix `A*A`
//! exactly as in the two-sided cyclic Jacobi method, but are applied to the
//! columns of `A` (Hestenes' one-sided form). The Gram matrix is never
//! formed explicitly, so tiny singular values keep full absolute accuracy
//! instead of losing half their digits to the square root of `λ(A*A)`.

use num_complex::Complex64;

use super::point::CMatrix;

/// Off-diagonal mass threshold on `A*A`, absolute for unit-scale inputs.
pub const JACOBI_TOLERANCE: f64 = 1e-12;

const MAX_SWEEPS: usize = 100;

/// Result of diagonalizing `A*A = V diag(σ²) V*`.
#[derive(Clone, Debug)]
pub struct Svd {
    /// Singular values, in the column order of `v` (not sorted).
    pub singular_values: Vec<f64>,
    /// Columns of `A V`, i.e. `σ_i u_i`, stored column-major.
    pub av_columns: Vec<Vec<Complex64>>,
    /// Right singular vectors, column-major.
    pub v_columns: Vec<Vec<Complex64>>,
    pub sweeps: usize,
}

fn dot(a: &[Complex64], b: &[Complex64]) -> Complex64 {
    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum()
}

fn norm_sqr(a: &[Complex64]) -> f64 {
    a.iter().map(|x| x.norm_sqr()).sum()
}

/// Applies the unitary `J` (acting on columns `p`, `q`) to a set of columns.
fn rotate(cols: &mut [Vec<Complex64>], p: usize, q: usize, c: f64, s: f64, phase: Complex64) {
    let (lo, hi) = cols.split_at_mut(q);
    let cp = &mut lo[p];
    let cq = &mut hi[0];
    let ph = phase.conj();
    for (xp, xq) in cp.iter_mut().zip(cq.iter_mut()) {
        let a = *xp;
        let b = *xq;
        *xp = a * c - b * ph * s;
        *xq = a * s + b * ph * c;
    }
}

pub fn jacobi_svd(a: &CMatrix) -> Svd {
    let n = a.dim();
    let mut w: Vec<Vec<Complex64>> = (0..n).map(|j| (0..n).map(|i| a.get(i, j)).collect()).collect();
    let mut v: Vec<Vec<Complex64>> = (0..n)
        .map(|j| {
            let mut col = vec![Complex64::new(0.0, 0.0); n];
            col[j] = Complex64::new(1.0, 0.0);
            col
        })
        .collect();

    let scale = a.frobenius_norm().powi(2).max(1.0);
    let mut sweeps = 0;
    while sweeps < MAX_SWEEPS {
        sweeps += 1;
        let mut off = 0.0;
        let mut rotated = false;
        for p in 0..n {
            for q in (p + 1)..n {
                let alpha = norm_sqr(&w[p]);
                let beta = norm_sqr(&w[q]);
                let gamma = dot(&w[p], &w[q]);
                let g = gamma.norm();
                off += 2.0 * g * g;
                if g <= f64::EPSILON * (alpha * beta).sqrt() || g == 0.0 {
                    continue;
                }
                rotated = true;
                let phase = gamma / g;
                let zeta = (beta - alpha) / (2.0 * g);
                let t = if zeta == 0.0 {
                    1.0
                } else {
                    zeta.signum() / (zeta.abs() + (1.0 + zeta * zeta).sqrt())
                };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = t * c;
                rotate(&mut w, p, q, c, s, phase);
                rotate(&mut v, p, q, c, s, phase);
            }
        }
        if !rotated || off.sqrt() <= JACOBI_TOLERANCE * scale {
            break;
        }
    }

    let singular_values = w.iter().map(|col| norm_sqr(col).sqrt()).collect();
    Svd {
        singular_values,
        av_columns: w,
        v_columns: v,
        sweeps,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn diagonal_matrix_is_already_converged() {
        let a = CMatrix::from_diagonal(&[c(3.0, 0.0), c(0.0, -4.0)]);
        let svd = jacobi_svd(&a);
        let mut s = svd.singular_values.clone();
        s.sort_by(f64::total_cmp);
        assert_eq!(s, vec![3.0, 4.0]);
    }

    #[test]
    fn reconstructs_a_from_factors() {
        let entries = vec![c(1.0, 2.0), c(-0.5, 0.0), c(0.3, -1.0), c(2.0, 0.5)];
        let a = CMatrix::new(2, entries).unwrap();
        let svd = jacobi_svd(&a);
        // A = (AV) V*
        for i in 0..2 {
            for j in 0..2 {
                let mut acc = c(0.0, 0.0);
                for k in 0..2 {
                    acc += svd.av_columns[k][i] * svd.v_columns[k][j].conj();
                }
                assert!((acc - a.get(i, j)).norm() < 1e-13);
            }
        }
        // V unitary
        let d = dot(&svd.v_columns[0], &svd.v_columns[1]);
        assert!(d.norm() < 1e-13);
    }
}
