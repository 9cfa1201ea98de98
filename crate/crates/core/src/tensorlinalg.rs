//! Dense real/complex matrices and tensor-product index utilities.
//!
//! Matrices are stored row-major. Tensor products use the convention that the
//! left factor is the slowest-varying index, so for a tripartite system the
//! basis index of `C^a ⊗ C^b ⊗ C^c` is `(i_a·b + i_b)·c + i_c`, and in
//! `(C^{abc})^{⊗k}` copy 1 is the slowest index.

use std::fmt;
use std::ops::{Add, Index, IndexMut, Mul, Sub};

use nalgebra::{ComplexField, DMatrix};
use num_complex::Complex64;
use num_traits::Zero;

use crate::error::{Error, Result};

/// Field scalars supported by [`Matrix`]: `f64` and `Complex64`.
pub trait Scalar: ComplexField<RealField = f64> + Copy + Send + Sync + fmt::Debug + Zero + 'static {
    fn from_real_f64(x: f64) -> Self {
        Self::from_real(x)
    }

    fn to_complex(self) -> Complex64 {
        Complex64::new(self.real(), self.imaginary())
    }
}

impl Scalar for f64 {}
impl Scalar for Complex64 {}

/// Sums with pairwise (cascade) reduction.
pub fn pairwise_sum<T: Copy + Zero + Add<Output = T>>(xs: &[T]) -> T {
    const BASE: usize = 16;
    if xs.len() <= BASE {
        return xs.iter().fold(T::zero(), |acc, &x| acc + x);
    }
    let mid = xs.len() / 2;
    pairwise_sum(&xs[..mid]) + pairwise_sum(&xs[mid..])
}

#[derive(Clone, PartialEq)]
pub struct Matrix<T> {
    rows: usize,
    cols: usize,
    data: Vec<T>,
}

pub type RealMatrix = Matrix<f64>;
pub type ComplexMatrix = Matrix<Complex64>;

impl<T: fmt::Debug> fmt::Debug for Matrix<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Matrix {}x{} [", self.rows, self.cols)?;
        for r in 0..self.rows {
            writeln!(f, "  {:?}", &self.data[r * self.cols..(r + 1) * self.cols])?;
        }
        write!(f, "]")
    }
}

impl<T> Index<(usize, usize)> for Matrix<T> {
    type Output = T;

    #[inline]
    fn index(&self, (r, c): (usize, usize)) -> &T {
        &self.data[r * self.cols + c]
    }
}

impl<T> IndexMut<(usize, usize)> for Matrix<T> {
    #[inline]
    fn index_mut(&mut self, (r, c): (usize, usize)) -> &mut T {
        &mut self.data[r * self.cols + c]
    }
}

impl<T: Scalar> Matrix<T> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![T::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = T::one();
        }
        m
    }

    pub fn from_vec(rows: usize, cols: usize, data: Vec<T>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::Shape(format!(
                "{} entries for a {rows}x{cols} matrix",
                data.len()
            )));
        }
        Ok(Self { rows, cols, data })
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> T) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for r in 0..rows {
            for c in 0..cols {
                data.push(f(r, c));
            }
        }
        Self { rows, cols, data }
    }

    pub fn from_rows(rows: &[Vec<T>]) -> Result<Self> {
        let nrows = rows.len();
        let ncols = rows.first().map_or(0, |r| r.len());
        if rows.iter().any(|r| r.len() != ncols) {
            return Err(Error::Shape("ragged rows".into()));
        }
        Ok(Self {
            rows: nrows,
            cols: ncols,
            data: rows.concat(),
        })
    }

    /// A column vector.
    pub fn column_vector(v: &[T]) -> Self {
        Self {
            rows: v.len(),
            cols: 1,
            data: v.to_vec(),
        }
    }

    pub fn diagonal(d: &[T]) -> Self {
        let mut m = Self::zeros(d.len(), d.len());
        for (i, &x) in d.iter().enumerate() {
            m[(i, i)] = x;
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn data(&self) -> &[T] {
        &self.data
    }

    pub fn data_mut(&mut self) -> &mut [T] {
        &mut self.data
    }

    pub fn into_data(self) -> Vec<T> {
        self.data
    }

    pub fn row(&self, r: usize) -> &[T] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn row_mut(&mut self, r: usize) -> &mut [T] {
        &mut self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn column(&self, c: usize) -> Vec<T> {
        (0..self.rows).map(|r| self[(r, c)]).collect()
    }

    pub fn to_rows(&self) -> Vec<Vec<T>> {
        (0..self.rows).map(|r| self.row(r).to_vec()).collect()
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |r, c| self[(c, r)])
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |r, c| self[(c, r)].conjugate())
    }

    pub fn scale(&self, s: T) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|&x| x * s).collect(),
        }
    }

    pub fn map<U: Scalar>(&self, f: impl Fn(T) -> U) -> Matrix<U> {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|&x| f(x)).collect(),
        }
    }

    pub fn to_complex(&self) -> ComplexMatrix {
        self.map(Scalar::to_complex)
    }

    pub fn matmul(&self, other: &Self) -> Result<Self> {
        if self.cols != other.rows {
            return Err(Error::Shape(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            let out_row = &mut out.data[i * other.cols..(i + 1) * other.cols];
            for (p, &a) in self.row(i).iter().enumerate() {
                if a.is_zero() {
                    continue;
                }
                for (o, &b) in out_row.iter_mut().zip(other.row(p)) {
                    *o += a * b;
                }
            }
        }
        Ok(out)
    }

    /// Matrix-vector product.
    pub fn apply(&self, v: &[T]) -> Result<Vec<T>> {
        if v.len() != self.cols {
            return Err(Error::Shape(format!(
                "vector of length {} for {} columns",
                v.len(),
                self.cols
            )));
        }
        Ok((0..self.rows)
            .map(|r| self.row(r).iter().zip(v).fold(T::zero(), |acc, (&a, &b)| acc + a * b))
            .collect())
    }

    /// Tensor product, left factor slowest.
    pub fn kron(&self, other: &Self) -> Self {
        let rows = self.rows * other.rows;
        let cols = self.cols * other.cols;
        let mut out = Self::zeros(rows, cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                let a = self[(i, j)];
                if a.is_zero() {
                    continue;
                }
                for p in 0..other.rows {
                    let dst = (i * other.rows + p) * cols + j * other.cols;
                    for (o, &b) in out.data[dst..dst + other.cols].iter_mut().zip(other.row(p)) {
                        *o = a * b;
                    }
                }
            }
        }
        out
    }

    pub fn trace(&self) -> T {
        let diag: Vec<T> = (0..self.rows.min(self.cols)).map(|i| self[(i, i)]).collect();
        pairwise_sum(&diag)
    }

    /// `tr(self† · other)`, the Hilbert–Schmidt inner product.
    pub fn hs_inner(&self, other: &Self) -> T {
        debug_assert_eq!(self.data.len(), other.data.len());
        let terms: Vec<T> = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(&a, &b)| a.conjugate() * b)
            .collect();
        pairwise_sum(&terms)
    }

    pub fn hs_norm(&self) -> f64 {
        let sq: Vec<f64> = self.data.iter().map(|x| x.modulus_squared()).collect();
        pairwise_sum(&sq).sqrt()
    }

    /// Largest singular value.
    pub fn op_norm(&self) -> f64 {
        if self.data.is_empty() {
            return 0.0;
        }
        let svd = nalgebra::SVD::new(self.to_nalgebra(), false, false);
        svd.singular_values.iter().copied().fold(0.0, f64::max)
    }

    pub fn singular_values(&self) -> Vec<f64> {
        if self.data.is_empty() {
            return Vec::new();
        }
        nalgebra::SVD::new(self.to_nalgebra(), false, false)
            .singular_values
            .iter()
            .copied()
            .collect()
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        self.data
            .iter()
            .zip(&other.data)
            .map(|(&a, &b)| (a - b).modulus())
            .fold(0.0, f64::max)
    }

    /// `‖H − H†‖_HS`.
    pub fn hermiticity_residual(&self) -> f64 {
        if !self.is_square() {
            return f64::INFINITY;
        }
        (self - &self.adjoint()).hs_norm()
    }

    pub fn is_finite(&self) -> bool {
        self.data
            .iter()
            .all(|x| x.real().is_finite() && x.imaginary().is_finite())
    }

    pub fn to_nalgebra(&self) -> DMatrix<T> {
        DMatrix::from_row_slice(self.rows, self.cols, &self.data)
    }

    pub fn from_nalgebra(m: &DMatrix<T>) -> Self {
        Self::from_fn(m.nrows(), m.ncols(), |r, c| m[(r, c)])
    }
}

impl<T: Scalar> Add for &Matrix<T> {
    type Output = Matrix<T>;

    fn add(self, rhs: Self) -> Matrix<T> {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(&a, &b)| a + b).collect(),
        }
    }
}

impl<T: Scalar> Sub for &Matrix<T> {
    type Output = Matrix<T>;

    fn sub(self, rhs: Self) -> Matrix<T> {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(&a, &b)| a - b).collect(),
        }
    }
}

impl<T: Scalar> Mul for &Matrix<T> {
    type Output = Matrix<T>;

    /// Panics on a shape mismatch; use [`Matrix::matmul`] for a fallible product.
    fn mul(self, rhs: Self) -> Matrix<T> {
        self.matmul(rhs).expect("matrix shapes do not match")
    }
}

/// `A ⊗ B`.
pub fn kron<T: Scalar>(a: &Matrix<T>, b: &Matrix<T>) -> Matrix<T> {
    a.kron(b)
}

pub fn hs_norm<T: Scalar>(a: &Matrix<T>) -> f64 {
    a.hs_norm()
}

pub fn op_norm<T: Scalar>(a: &Matrix<T>) -> f64 {
    a.op_norm()
}

/// Rescales `v` so that its first entry of largest magnitude is positive real.
/// Entries within a relative 1e-9 of the maximum count as tied.
pub fn fix_phase<T: Scalar>(v: &mut [T]) {
    let max = v.iter().map(|x| x.modulus()).fold(0.0, f64::max);
    if max == 0.0 {
        return;
    }
    let pivot = v
        .iter()
        .position(|x| x.modulus() >= max * (1.0 - 1e-9))
        .expect("a maximal entry exists");
    let p = v[pivot];
    let phase = p.conjugate() * T::from_real_f64(1.0 / p.modulus());
    for x in v.iter_mut() {
        *x *= phase;
    }
}

/// Orthonormal basis of `{x : Ax = 0}`, thresholding singular values at `tol·σ_max`.
///
/// Each returned vector has its first largest-magnitude entry made positive real.
pub fn orthonormal_nullspace<T: Scalar>(a: &Matrix<T>, tol: f64) -> Result<Vec<Vec<T>>> {
    if tol.is_nan() || tol <= 0.0 {
        return Err(Error::InvalidArgument(format!("tolerance {tol} must be positive")));
    }
    let n = a.cols;
    if n == 0 {
        return Ok(Vec::new());
    }
    // pad with zero rows up to a square matrix
    let padded;
    let src = if a.rows >= n {
        a
    } else {
        let mut p = Matrix::zeros(n, n);
        p.data[..a.data.len()].copy_from_slice(&a.data);
        padded = p;
        &padded
    };
    let svd = nalgebra::SVD::new(src.to_nalgebra(), false, true);
    let v_t = svd.v_t.as_ref().expect("right singular vectors requested");
    let sigma_max = svd.singular_values.iter().copied().fold(0.0, f64::max);
    let threshold = tol * sigma_max;
    let mut basis = Vec::new();
    for (i, &s) in svd.singular_values.iter().enumerate() {
        if s <= threshold {
            let mut v: Vec<T> = (0..n).map(|j| v_t[(i, j)].conjugate()).collect();
            fix_phase(&mut v);
            basis.push(v);
        }
    }
    Ok(basis)
}

/// Eigenvalues (non-increasing) and orthonormal eigenvectors (as columns) of a Hermitian matrix.
pub fn hermitian_eigensystem<T: Scalar>(h: &Matrix<T>) -> Result<(Vec<f64>, Matrix<T>)> {
    if !h.is_square() {
        return Err(Error::Shape(format!("{}x{} is not square", h.rows, h.cols)));
    }
    let residual = h.hermiticity_residual();
    let norm = h.hs_norm();
    if residual > 1e-10 * norm.max(f64::MIN_POSITIVE) && residual > 0.0 {
        return Err(Error::NotHermitian { residual });
    }
    let n = h.rows;
    if n == 0 {
        return Ok((Vec::new(), Matrix::zeros(0, 0)));
    }
    let eig = nalgebra::SymmetricEigen::new(h.to_nalgebra());
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[b].total_cmp(&eig.eigenvalues[a]));
    let values = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let vectors = Matrix::from_fn(n, n, |r, c| eig.eigenvectors[(r, order[c])]);
    Ok((values, vectors))
}

/// Eigenvalues only, non-increasing.
pub fn hermitian_eigenvalues<T: Scalar>(h: &Matrix<T>) -> Result<Vec<f64>> {
    Ok(hermitian_eigensystem(h)?.0)
}

/// Factor dimensions of a tensor-product space.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct TensorShape {
    dims: Vec<usize>,
}

impl TensorShape {
    pub fn new(dims: Vec<usize>) -> Result<Self> {
        if dims.contains(&0) {
            return Err(Error::Shape(format!("zero factor in {dims:?}")));
        }
        Ok(Self { dims })
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn num_factors(&self) -> usize {
        self.dims.len()
    }

    pub fn total(&self) -> usize {
        self.dims.iter().product()
    }

    /// Row-major strides: the first factor has the largest stride.
    pub fn strides(&self) -> Vec<usize> {
        let mut strides = vec![1; self.dims.len()];
        for i in (0..self.dims.len().saturating_sub(1)).rev() {
            strides[i] = strides[i + 1] * self.dims[i + 1];
        }
        strides
    }

    pub fn digits(&self, mut index: usize, out: &mut [usize]) {
        for (slot, &d) in out.iter_mut().zip(&self.dims).rev() {
            *slot = index % d;
            index /= d;
        }
    }
}

/// Traces out every factor not listed in `keep`; the kept factors stay in their original order.
pub fn partial_trace<T: Scalar>(m: &Matrix<T>, shape: &TensorShape, keep: &[usize]) -> Result<Matrix<T>> {
    let n = shape.total();
    if !m.is_square() || m.rows != n {
        return Err(Error::Shape(format!(
            "{}x{} matrix on a space of dimension {n}",
            m.rows, m.cols
        )));
    }
    let nf = shape.num_factors();
    let mut kept = vec![false; nf];
    for &i in keep {
        if i >= nf {
            return Err(Error::IndexOutOfRange { index: i, count: nf });
        }
        kept[i] = true;
    }
    let keep_dims: Vec<usize> = (0..nf).filter(|&i| kept[i]).map(|i| shape.dims[i]).collect();
    let trace_dims: Vec<usize> = (0..nf).filter(|&i| !kept[i]).map(|i| shape.dims[i]).collect();
    let keep_total: usize = keep_dims.iter().product();
    let trace_total: usize = trace_dims.iter().product();

    // full[t][a] = full index with traced digits t and kept digits a.
    let mut full = vec![0usize; n];
    let mut digits = vec![0usize; nf];
    for f in 0..n {
        shape.digits(f, &mut digits);
        let (mut a, mut t) = (0, 0);
        for i in 0..nf {
            if kept[i] {
                a = a * shape.dims[i] + digits[i];
            } else {
                t = t * shape.dims[i] + digits[i];
            }
        }
        full[t * keep_total + a] = f;
    }

    let mut out = Matrix::zeros(keep_total, keep_total);
    for t in 0..trace_total {
        let block = &full[t * keep_total..(t + 1) * keep_total];
        for (a, &fa) in block.iter().enumerate() {
            let row = m.row(fa);
            let out_row = out.row_mut(a);
            for (b, &fb) in block.iter().enumerate() {
                out_row[b] += row[fb];
            }
        }
    }
    Ok(out)
}
