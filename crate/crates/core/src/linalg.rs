//! Dense linear algebra for desk-scale problems.
//!
//! Every reduction (dot products, norms, matrix-vector products) goes through
//! Neumaier compensated summation. Singular values come from one-sided Jacobi
//! iteration, which resolves small singular values to high relative accuracy.

use alloc::vec;
use alloc::vec::Vec;
use core::ops::{Deref, DerefMut};

use crate::error::{Error, Result};

/// Singular values at or below `RANK_RTOL * sigma_max` are treated as zero.
pub const RANK_RTOL: f64 = 1e-10;

const JACOBI_MAX_SWEEPS: usize = 80;
/// Above this (smaller) dimension `spectral_norm` switches to power iteration.
const JACOBI_SPECTRAL_LIMIT: usize = 300;

/// Neumaier's variant of Kahan summation.
#[derive(Debug, Clone, Copy, Default)]
pub struct CompensatedSum {
    sum: f64,
    carry: f64,
}

impl CompensatedSum {
    pub fn new() -> Self {
        Self::default()
    }

    #[inline]
    pub fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if libm::fabs(self.sum) >= libm::fabs(x) {
            self.carry += (self.sum - t) + x;
        } else {
            self.carry += (x - t) + self.sum;
        }
        self.sum = t;
    }

    #[inline]
    pub fn value(&self) -> f64 {
        self.sum + self.carry
    }
}

pub fn sum(xs: impl IntoIterator<Item = f64>) -> f64 {
    let mut acc = CompensatedSum::new();
    for x in xs {
        acc.add(x);
    }
    acc.value()
}

pub fn dot(a: &[f64], b: &[f64]) -> f64 {
    debug_assert_eq!(a.len(), b.len());
    sum(a.iter().zip(b).map(|(x, y)| x * y))
}

pub fn norm_sq(a: &[f64]) -> f64 {
    sum(a.iter().map(|x| x * x))
}

pub fn norm(a: &[f64]) -> f64 {
    libm::sqrt(norm_sq(a))
}

pub fn dist_sq(a: &[f64], b: &[f64]) -> f64 {
    sum(a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)))
}

/// `a - b`, elementwise.
pub fn sub(a: &[f64], b: &[f64]) -> Vec<f64> {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

/// `y += alpha * x`
pub fn axpy(alpha: f64, x: &[f64], y: &mut [f64]) {
    for (yi, xi) in y.iter_mut().zip(x) {
        *yi += alpha * xi;
    }
}

fn check_finite(xs: &[f64]) -> Result<()> {
    if xs.iter().all(|x| x.is_finite()) {
        Ok(())
    } else {
        Err(Error::NonFinite)
    }
}

/// A real vector with finite entries.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct DenseVector(Vec<f64>);

impl DenseVector {
    pub fn new(entries: Vec<f64>) -> Result<Self> {
        check_finite(&entries)?;
        Ok(Self(entries))
    }

    pub fn zeros(len: usize) -> Self {
        Self(vec![0.0; len])
    }

    pub fn into_inner(self) -> Vec<f64> {
        self.0
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    pub fn norm(&self) -> f64 {
        norm(&self.0)
    }

    pub fn is_finite(&self) -> bool {
        self.0.iter().all(|x| x.is_finite())
    }

    // Internal constructor for values produced by arithmetic on finite data.
    pub(crate) fn from_vec_unchecked(entries: Vec<f64>) -> Self {
        Self(entries)
    }
}

impl Deref for DenseVector {
    type Target = [f64];
    fn deref(&self) -> &[f64] {
        &self.0
    }
}

impl DerefMut for DenseVector {
    fn deref_mut(&mut self) -> &mut [f64] {
        &mut self.0
    }
}

impl From<DenseVector> for Vec<f64> {
    fn from(v: DenseVector) -> Self {
        v.0
    }
}

/// Row-major dense matrix with finite entries.
#[derive(Debug, Clone, PartialEq)]
pub struct DenseMatrix {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

impl DenseMatrix {
    pub fn new(rows: usize, cols: usize, data: Vec<f64>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::DimensionMismatch {
                expected: rows * cols,
                found: data.len(),
            });
        }
        check_finite(&data)?;
        Ok(Self { rows, cols, data })
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![0.0; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = 1.0;
        }
        m
    }

    pub fn diag(entries: &[f64]) -> Result<Self> {
        check_finite(entries)?;
        let n = entries.len();
        let mut m = Self::zeros(n, n);
        for (i, &e) in entries.iter().enumerate() {
            m.data[i * n + i] = e;
        }
        Ok(m)
    }

    /// Builds a matrix from equally long rows.
    pub fn from_rows<R: AsRef<[f64]>>(rows: &[R]) -> Result<Self> {
        let cols = rows.first().map_or(0, |r| r.as_ref().len());
        let mut data = Vec::with_capacity(rows.len() * cols);
        for r in rows {
            let r = r.as_ref();
            if r.len() != cols {
                return Err(Error::DimensionMismatch {
                    expected: cols,
                    found: r.len(),
                });
            }
            data.extend_from_slice(r);
        }
        Self::new(rows.len(), cols, data)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_empty(&self) -> bool {
        self.rows == 0 || self.cols == 0
    }

    pub fn data(&self) -> &[f64] {
        &self.data
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, value: f64) {
        self.data[i * self.cols + j] = value;
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<f64> {
        (0..self.rows).map(|i| self.get(i, j)).collect()
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.data[j * self.rows + i] = self.get(i, j);
            }
        }
        t
    }

    pub fn scaled(&self, alpha: f64) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|x| alpha * x).collect(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&x| x == 0.0)
    }

    /// `A x`
    pub fn mul_vec(&self, x: &[f64]) -> Result<Vec<f64>> {
        if x.len() != self.cols {
            return Err(Error::DimensionMismatch {
                expected: self.cols,
                found: x.len(),
            });
        }
        Ok((0..self.rows).map(|i| dot(self.row(i), x)).collect())
    }

    /// `Aᵀ y`
    pub fn tr_mul_vec(&self, y: &[f64]) -> Result<Vec<f64>> {
        if y.len() != self.rows {
            return Err(Error::DimensionMismatch {
                expected: self.rows,
                found: y.len(),
            });
        }
        let mut acc = vec![CompensatedSum::new(); self.cols];
        for (i, &yi) in y.iter().enumerate() {
            if yi == 0.0 {
                continue;
            }
            for (a, &aij) in acc.iter_mut().zip(self.row(i)) {
                a.add(aij * yi);
            }
        }
        Ok(acc.iter().map(CompensatedSum::value).collect())
    }

    /// `A B`
    pub fn matmul(&self, other: &DenseMatrix) -> Result<DenseMatrix> {
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch {
                expected: self.cols,
                found: other.rows,
            });
        }
        let bt = other.transpose();
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for j in 0..other.cols {
                out.data[i * other.cols + j] = dot(self.row(i), bt.row(j));
            }
        }
        Ok(out)
    }

    /// Stacks `self` on top of `other`.
    pub fn vstack(&self, other: &DenseMatrix) -> Result<DenseMatrix> {
        if self.rows == 0 {
            return Ok(other.clone());
        }
        if other.rows == 0 {
            return Ok(self.clone());
        }
        if self.cols != other.cols {
            return Err(Error::DimensionMismatch {
                expected: self.cols,
                found: other.cols,
            });
        }
        let mut data = self.data.clone();
        data.extend_from_slice(&other.data);
        Ok(Self {
            rows: self.rows + other.rows,
            cols: self.cols,
            data,
        })
    }

    pub fn select_rows(&self, indices: &[usize]) -> DenseMatrix {
        let mut data = Vec::with_capacity(indices.len() * self.cols);
        for &i in indices {
            data.extend_from_slice(self.row(i));
        }
        Self {
            rows: indices.len(),
            cols: self.cols,
            data,
        }
    }

    /// Euclidean norms of the columns.
    pub fn column_norms(&self) -> Vec<f64> {
        let mut acc = vec![CompensatedSum::new(); self.cols];
        for i in 0..self.rows {
            for (a, &x) in acc.iter_mut().zip(self.row(i)) {
                a.add(x * x);
            }
        }
        acc.iter().map(|a| libm::sqrt(a.value())).collect()
    }

    fn columns(&self) -> Vec<Vec<f64>> {
        (0..self.cols).map(|j| self.column(j)).collect()
    }
}

/// Thin singular value decomposition `A = U diag(σ) Vᵀ` with σ sorted descending.
#[derive(Debug, Clone)]
pub struct Svd {
    rows: usize,
    cols: usize,
    sigma: Vec<f64>,
    u_cols: Vec<Vec<f64>>,
    v_cols: Vec<Vec<f64>>,
}

impl Svd {
    pub fn singular_values(&self) -> &[f64] {
        &self.sigma
    }

    pub fn u_col(&self, j: usize) -> &[f64] {
        &self.u_cols[j]
    }

    pub fn v_col(&self, j: usize) -> &[f64] {
        &self.v_cols[j]
    }

    pub fn sigma_max(&self) -> f64 {
        self.sigma.first().copied().unwrap_or(0.0)
    }

    pub fn threshold(&self) -> f64 {
        RANK_RTOL * self.sigma_max()
    }

    pub fn rank(&self) -> usize {
        let tol = self.threshold();
        self.sigma.iter().filter(|&&s| s > tol).count()
    }

    /// Smallest singular value above the rank threshold, if the matrix is nonzero.
    pub fn sigma_min_nonzero(&self) -> Option<f64> {
        let r = self.rank();
        (r > 0).then(|| self.sigma[r - 1])
    }

    /// Minimum-norm least-squares solution `A⁺ b`.
    pub fn pinv_apply(&self, b: &[f64]) -> Vec<f64> {
        debug_assert_eq!(b.len(), self.rows);
        let mut out = vec![0.0; self.cols];
        for j in 0..self.rank() {
            let coef = dot(&self.u_cols[j], b) / self.sigma[j];
            axpy(coef, &self.v_cols[j], &mut out);
        }
        out
    }

    /// `(Aᵀ)⁺ y`, i.e. the minimum-norm `λ` minimising `‖Aᵀλ − y‖`.
    pub fn pinv_transpose_apply(&self, y: &[f64]) -> Vec<f64> {
        debug_assert_eq!(y.len(), self.cols);
        let mut out = vec![0.0; self.rows];
        for j in 0..self.rank() {
            let coef = dot(&self.v_cols[j], y) / self.sigma[j];
            axpy(coef, &self.u_cols[j], &mut out);
        }
        out
    }
}

/// One-sided (Hestenes) Jacobi SVD.
pub fn svd(a: &DenseMatrix) -> Result<Svd> {
    if a.is_empty() {
        return Err(Error::Empty);
    }
    if a.rows() >= a.cols() {
        Ok(jacobi_tall(a.rows(), a.cols(), a.columns()))
    } else {
        let s = jacobi_tall(a.cols(), a.rows(), a.transpose().columns());
        Ok(Svd {
            rows: a.rows(),
            cols: a.cols(),
            sigma: s.sigma,
            u_cols: s.v_cols,
            v_cols: s.u_cols,
        })
    }
}

fn jacobi_tall(m: usize, n: usize, mut w: Vec<Vec<f64>>) -> Svd {
    let mut v: Vec<Vec<f64>> = (0..n)
        .map(|j| {
            let mut e = vec![0.0; n];
            e[j] = 1.0;
            e
        })
        .collect();

    for _ in 0..JACOBI_MAX_SWEEPS {
        let mut rotated = false;
        for p in 0..n {
            for q in (p + 1)..n {
                let alpha = norm_sq(&w[p]);
                let beta = norm_sq(&w[q]);
                let gamma = dot(&w[p], &w[q]);
                if gamma == 0.0 || libm::fabs(gamma) <= f64::EPSILON * libm::sqrt(alpha * beta) {
                    continue;
                }
                rotated = true;
                let zeta = (beta - alpha) / (2.0 * gamma);
                let t = if zeta == 0.0 {
                    1.0
                } else {
                    libm::copysign(1.0, zeta) / (libm::fabs(zeta) + libm::hypot(1.0, zeta))
                };
                let c = 1.0 / libm::hypot(1.0, t);
                let s = c * t;
                rotate_pair(&mut w, p, q, c, s);
                rotate_pair(&mut v, p, q, c, s);
            }
        }
        if !rotated {
            break;
        }
    }

    let norms: Vec<f64> = w.iter().map(|col| norm(col)).collect();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| norms[j].total_cmp(&norms[i]).then(i.cmp(&j)));

    let mut sigma = Vec::with_capacity(n);
    let mut u_cols = Vec::with_capacity(n);
    let mut v_cols = Vec::with_capacity(n);
    for &j in &order {
        let s = norms[j];
        let u = if s > 0.0 {
            w[j].iter().map(|x| x / s).collect()
        } else {
            vec![0.0; m]
        };
        sigma.push(s);
        u_cols.push(u);
        v_cols.push(core::mem::take(&mut v[j]));
    }
    Svd {
        rows: m,
        cols: n,
        sigma,
        u_cols,
        v_cols,
    }
}

fn rotate_pair(cols: &mut [Vec<f64>], p: usize, q: usize, c: f64, s: f64) {
    let (head, tail) = cols.split_at_mut(q);
    let (wp, wq) = (&mut head[p], &mut tail[0]);
    for (a, b) in wp.iter_mut().zip(wq.iter_mut()) {
        let (x, y) = (*a, *b);
        *a = c * x - s * y;
        *b = s * x + c * y;
    }
}

/// Largest singular value `‖A‖₂`.
pub fn spectral_norm(a: &DenseMatrix) -> Result<f64> {
    if a.is_empty() {
        return Err(Error::Empty);
    }
    if a.rows().min(a.cols()) <= JACOBI_SPECTRAL_LIMIT {
        return Ok(svd(a)?.sigma_max());
    }
    Ok(power_iteration_norm(a))
}

fn power_iteration_norm(a: &DenseMatrix) -> f64 {
    // Deterministic start with no special alignment to coordinate axes.
    let n = a.cols();
    let mut x: Vec<f64> = (0..n).map(|i| 1.0 + ((i * 7919) % 97) as f64 / 97.0).collect();
    let nx = norm(&x);
    x.iter_mut().for_each(|xi| *xi /= nx);
    let mut lambda = 0.0;
    for _ in 0..20_000 {
        let ax = a.mul_vec(&x).expect("dimensions checked");
        let mut y = a.tr_mul_vec(&ax).expect("dimensions checked");
        let next = norm_sq(&ax);
        let ny = norm(&y);
        if ny == 0.0 {
            return 0.0;
        }
        y.iter_mut().for_each(|yi| *yi /= ny);
        x = y;
        if libm::fabs(next - lambda) <= 1e-15 * next {
            lambda = next;
            break;
        }
        lambda = next;
    }
    libm::sqrt(lambda)
}

/// Smallest singular value above `RANK_RTOL · σ_max`.
pub fn sigma_min_nonzero(a: &DenseMatrix) -> Result<f64> {
    if a.is_empty() {
        return Err(Error::Empty);
    }
    svd(a)?.sigma_min_nonzero().ok_or(Error::DegenerateMatrix)
}

pub fn rank(a: &DenseMatrix) -> Result<usize> {
    Ok(svd(a)?.rank())
}

/// Precomputed Euclidean projector onto `{z : A z = t}`.
#[derive(Debug, Clone)]
pub struct AffineProjector {
    a: DenseMatrix,
    t: Vec<f64>,
    svd: Svd,
}

impl AffineProjector {
    pub fn new(a: DenseMatrix, t: Vec<f64>) -> Result<Self> {
        if a.is_empty() {
            return Err(Error::Empty);
        }
        if t.len() != a.rows() {
            return Err(Error::DimensionMismatch {
                expected: a.rows(),
                found: t.len(),
            });
        }
        check_finite(&t)?;
        let svd = svd(&a)?;
        let proj = Self { a, t, svd };
        let z0 = proj.svd.pinv_apply(&proj.t);
        let residual = proj.residual_norm(&z0);
        if residual > proj.tolerance() {
            return Err(Error::InfeasibleAffine { residual });
        }
        Ok(proj)
    }

    fn tolerance(&self) -> f64 {
        1e-9 * (1.0 + norm(&self.t))
    }

    pub fn matrix(&self) -> &DenseMatrix {
        &self.a
    }

    pub fn rhs(&self) -> &[f64] {
        &self.t
    }

    pub fn svd(&self) -> &Svd {
        &self.svd
    }

    pub fn dim(&self) -> usize {
        self.a.cols()
    }

    pub fn residual_norm(&self, x: &[f64]) -> f64 {
        let ax = self.a.mul_vec(x).expect("dimension checked by caller");
        libm::sqrt(sum(ax.iter().zip(&self.t).map(|(p, q)| (p - q) * (p - q))))
    }

    /// `x − [x]` computed from the constraint residual, free of cancellation.
    pub fn offset(&self, x: &[f64]) -> Result<Vec<f64>> {
        let ax = self.a.mul_vec(x)?;
        let r = sub(&ax, &self.t);
        Ok(self.svd.pinv_apply(&r))
    }

    pub fn project(&self, x: &[f64]) -> Result<DenseVector> {
        let delta = self.offset(x)?;
        Ok(DenseVector::from_vec_unchecked(sub(x, &delta)))
    }

    pub fn dist_sq(&self, x: &[f64]) -> Result<f64> {
        Ok(norm_sq(&self.offset(x)?))
    }
}

/// Euclidean projection of `x` onto `{z : A z = t}` via the SVD pseudo-inverse.
pub fn project_affine(x: &[f64], a: &DenseMatrix, t: &[f64]) -> Result<DenseVector> {
    if x.len() != a.cols() {
        return Err(Error::DimensionMismatch {
            expected: a.cols(),
            found: x.len(),
        });
    }
    AffineProjector::new(a.clone(), t.to_vec())?.project(x)
}
