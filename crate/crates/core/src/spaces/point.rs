use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;

use crate::error::{Error, Result};

/// A finite complex vector carrying a nonnegative weight per coordinate.
///
/// Weighted vectors realize elements of `L_q` over a finite measure space:
/// the weight of coordinate `k` is the mass of the `k`-th atom. Unit weights
/// give the plain sequence space `ℓ_q^d`.
#[derive(Clone, Debug)]
pub struct CVector {
    entries: Vec<Complex64>,
    weights: Arc<[f64]>,
}

impl CVector {
    pub fn new(entries: Vec<Complex64>, weights: impl Into<Arc<[f64]>>) -> Result<Self> {
        let weights = weights.into();
        if entries.is_empty() {
            return Err(Error::InvalidPoint("vector must have at least one entry".into()));
        }
        if entries.len() != weights.len() {
            return Err(Error::InvalidPoint(format!(
                "{} entries but {} weights",
                entries.len(),
                weights.len()
            )));
        }
        if let Some(w) = weights.iter().find(|w| !(w.is_finite() && **w >= 0.0)) {
            return Err(Error::InvalidPoint(format!("weight {w} is not a nonnegative real")));
        }
        if entries.iter().any(|z| !(z.re.is_finite() && z.im.is_finite())) {
            return Err(Error::InvalidPoint("non-finite entry".into()));
        }
        Ok(Self { entries, weights })
    }

    /// Vector with unit weights.
    pub fn unit(entries: Vec<Complex64>) -> Result<Self> {
        let weights: Arc<[f64]> = vec![1.0; entries.len()].into();
        Self::new(entries, weights)
    }

    pub fn from_reals(values: &[f64]) -> Result<Self> {
        Self::unit(values.iter().map(|&x| Complex64::new(x, 0.0)).collect())
    }

    /// Unit-weight standard basis vector `scale · e_index` of length `dim`.
    pub fn basis(dim: usize, index: usize, scale: Complex64) -> Result<Self> {
        if index >= dim {
            return Err(Error::InvalidPoint(format!("basis index {index} out of range for dimension {dim}")));
        }
        let mut entries = vec![Complex64::new(0.0, 0.0); dim];
        entries[index] = scale;
        Self::unit(entries)
    }

    pub fn zeros_like(&self) -> Self {
        Self {
            entries: vec![Complex64::new(0.0, 0.0); self.entries.len()],
            weights: Arc::clone(&self.weights),
        }
    }

    pub(crate) fn with_entries(&self, entries: Vec<Complex64>) -> Self {
        debug_assert_eq!(entries.len(), self.entries.len());
        Self {
            entries,
            weights: Arc::clone(&self.weights),
        }
    }

    pub fn entries(&self) -> &[Complex64] {
        &self.entries
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn shared_weights(&self) -> Arc<[f64]> {
        Arc::clone(&self.weights)
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub(crate) fn same_measure(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.weights, &other.weights) || self.weights[..] == other.weights[..]
    }
}

impl PartialEq for CVector {
    fn eq(&self, other: &Self) -> bool {
        self.entries == other.entries && self.same_measure(other)
    }
}

/// Square complex matrix, row-major.
#[derive(Clone, Debug, PartialEq)]
pub struct CMatrix {
    dim: usize,
    entries: Vec<Complex64>,
}

impl CMatrix {
    pub fn new(dim: usize, entries: Vec<Complex64>) -> Result<Self> {
        if dim == 0 {
            return Err(Error::InvalidPoint("matrix dimension must be positive".into()));
        }
        if entries.len() != dim * dim {
            return Err(Error::InvalidPoint(format!(
                "{dim}x{dim} matrix needs {} entries, got {}",
                dim * dim,
                entries.len()
            )));
        }
        if entries.iter().any(|z| !(z.re.is_finite() && z.im.is_finite())) {
            return Err(Error::InvalidPoint("non-finite matrix entry".into()));
        }
        Ok(Self { dim, entries })
    }

    pub fn zeros(dim: usize) -> Self {
        Self {
            dim,
            entries: vec![Complex64::new(0.0, 0.0); dim * dim],
        }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            m.entries[i * dim + i] = Complex64::new(1.0, 0.0);
        }
        m
    }

    pub fn from_diagonal(diag: &[Complex64]) -> Self {
        let mut m = Self::zeros(diag.len());
        for (i, &d) in diag.iter().enumerate() {
            m.entries[i * diag.len() + i] = d;
        }
        m
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn entries(&self) -> &[Complex64] {
        &self.entries
    }

    pub fn get(&self, row: usize, col: usize) -> Complex64 {
        self.entries[row * self.dim + col]
    }

    pub fn set(&mut self, row: usize, col: usize, value: Complex64) {
        self.entries[row * self.dim + col] = value;
    }

    pub fn matmul(&self, other: &Self) -> Self {
        assert_eq!(self.dim, other.dim, "matmul dimension mismatch");
        let n = self.dim;
        let mut out = Self::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let a = self.entries[i * n + k];
                if a == Complex64::new(0.0, 0.0) {
                    continue;
                }
                for j in 0..n {
                    out.entries[i * n + j] += a * other.entries[k * n + j];
                }
            }
        }
        out
    }

    pub fn adjoint(&self) -> Self {
        let n = self.dim;
        let mut out = Self::zeros(n);
        for i in 0..n {
            for j in 0..n {
                out.entries[j * n + i] = self.entries[i * n + j].conj();
            }
        }
        out
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.entries.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    pub(crate) fn with_entries(&self, entries: Vec<Complex64>) -> Self {
        debug_assert_eq!(entries.len(), self.entries.len());
        Self { dim: self.dim, entries }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
pub enum Side {
    #[serde(rename = "L")]
    Left,
    #[serde(rename = "R")]
    Right,
}

/// Vertex of the complete bipartite graph `K_{n,n}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
pub struct Vertex {
    pub side: Side,
    pub index: usize,
}

/// Any point of any [`Space`](super::Space).
#[derive(Clone, Debug, PartialEq)]
pub enum Point {
    Real(f64),
    Vector(CVector),
    Matrix(CMatrix),
    Vertex(Vertex),
}

impl Point {
    pub fn kind_name(&self) -> &'static str {
        match self {
            Point::Real(_) => "real",
            Point::Vector(_) => "vector",
            Point::Matrix(_) => "matrix",
            Point::Vertex(_) => "vertex",
        }
    }

    /// Exact (bitwise on finite values) equality, used to merge atoms.
    pub fn same_atom(&self, other: &Self) -> bool {
        self == other
    }

    pub fn as_vector(&self) -> Option<&CVector> {
        match self {
            Point::Vector(v) => Some(v),
            _ => None,
        }
    }

    /// Coordinates as a flat real vector (re, im interleaved); `None` for vertices.
    pub(crate) fn flat_len(&self) -> Option<usize> {
        match self {
            Point::Real(_) => Some(1),
            Point::Vector(v) => Some(2 * v.len()),
            Point::Matrix(m) => Some(2 * m.entries().len()),
            Point::Vertex(_) => None,
        }
    }

    pub(crate) fn linear_combination(&self, a: f64, other: &Point, b: f64) -> Result<Point> {
        match (self, other) {
            (Point::Real(x), Point::Real(y)) => Ok(Point::Real(a * x + b * y)),
            (Point::Vector(x), Point::Vector(y)) => {
                if x.len() != y.len() || !x.same_measure(y) {
                    return Err(Error::KindMismatch("vectors live on different measure spaces".into()));
                }
                let e = x.entries().iter().zip(y.entries()).map(|(u, v)| u * a + v * b).collect();
                Ok(Point::Vector(x.with_entries(e)))
            }
            (Point::Matrix(x), Point::Matrix(y)) => {
                if x.dim() != y.dim() {
                    return Err(Error::KindMismatch("matrix dimensions differ".into()));
                }
                let e = x.entries().iter().zip(y.entries()).map(|(u, v)| u * a + v * b).collect();
                Ok(Point::Matrix(x.with_entries(e)))
            }
            _ => Err(Error::KindMismatch(format!(
                "cannot combine {} with {}",
                self.kind_name(),
                other.kind_name()
            ))),
        }
    }

    pub fn sub(&self, other: &Point) -> Result<Point> {
        self.linear_combination(1.0, other, -1.0)
    }

    pub fn zero_like(&self) -> Option<Point> {
        match self {
            Point::Real(_) => Some(Point::Real(0.0)),
            Point::Vector(v) => Some(Point::Vector(v.zeros_like())),
            Point::Matrix(m) => Some(Point::Matrix(CMatrix::zeros(m.dim()))),
            Point::Vertex(_) => None,
        }
    }

    /// `self + step · direction` on the flat coordinates.
    pub(crate) fn axpy(&self, step: f64, direction: &[f64]) -> Point {
        match self {
            Point::Real(x) => Point::Real(x + step * direction[0]),
            Point::Vector(v) => Point::Vector(v.with_entries(axpy_complex(v.entries(), step, direction))),
            Point::Matrix(m) => Point::Matrix(m.with_entries(axpy_complex(m.entries(), step, direction))),
            Point::Vertex(_) => self.clone(),
        }
    }

    pub(crate) fn map_complex(&self, f: impl Fn(Complex64) -> Complex64) -> Point {
        match self {
            Point::Real(x) => Point::Real(f(Complex64::new(*x, 0.0)).re),
            Point::Vector(v) => Point::Vector(v.with_entries(v.entries().iter().map(|&z| f(z)).collect())),
            Point::Matrix(m) => Point::Matrix(m.with_entries(m.entries().iter().map(|&z| f(z)).collect())),
            Point::Vertex(_) => self.clone(),
        }
    }
}

fn axpy_complex(entries: &[Complex64], step: f64, direction: &[f64]) -> Vec<Complex64> {
    entries
        .iter()
        .enumerate()
        .map(|(k, z)| Complex64::new(z.re + step * direction[2 * k], z.im + step * direction[2 * k + 1]))
        .collect()
}

impl fmt::Display for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Point::Real(x) => write!(f, "{x}"),
            Point::Vector(v) => {
                write!(f, "[")?;
                for (i, z) in v.entries().iter().enumerate() {
                    if i > 0 {
                        write!(f, ", ")?;
                    }
                    if z.im == 0.0 {
                        write!(f, "{}", z.re)?;
                    } else {
                        write!(f, "{}{:+}i", z.re, z.im)?;
                    }
                }
                write!(f, "]")
            }
            Point::Matrix(m) => write!(f, "<{0}x{0} matrix>", m.dim()),
            Point::Vertex(v) => write!(f, "{:?}{}", v.side, v.index),
        }
    }
}
