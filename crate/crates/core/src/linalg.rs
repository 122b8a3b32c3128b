//! Small dense matrices over real or complex entries.
//!
//! All matrices in this crate are at most a few dozen rows, so storage is a
//! plain row-major `Vec` and the algorithms are the textbook ones: LU with
//! partial pivoting, cyclic Jacobi for symmetric eigenproblems, Gaussian
//! elimination with full pivoting for rank, and Newton iteration for the
//! unitary polar factor.

use std::fmt::Debug;
use std::ops::{Add, Index, IndexMut, Mul, Neg, Sub};

use num_complex::Complex;
use num_traits::{Float, Num, Zero};

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Element type of a [`Matrix`]: a real scalar or a complex number over one.
pub trait Entry: Copy + Num + Neg<Output = Self> + Debug + Send + Sync + 'static {
    type Real: Scalar;

    fn modulus(self) -> Self::Real;
    fn conj(self) -> Self;
    fn from_real(x: Self::Real) -> Self;
}

impl<T: Scalar> Entry for T {
    type Real = T;

    #[inline]
    fn modulus(self) -> T {
        self.abs()
    }

    #[inline]
    fn conj(self) -> T {
        self
    }

    #[inline]
    fn from_real(x: T) -> T {
        x
    }
}

impl<T: Scalar> Entry for Complex<T> {
    type Real = T;

    #[inline]
    fn modulus(self) -> T {
        self.norm()
    }

    #[inline]
    fn conj(self) -> Self {
        Complex::conj(&self)
    }

    #[inline]
    fn from_real(x: T) -> Self {
        Complex::new(x, T::zero())
    }
}

/// Dense row-major matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct Matrix<E> {
    rows: usize,
    cols: usize,
    data: Vec<E>,
}

/// Real matrix.
pub type RMatrix<T> = Matrix<T>;
/// Complex matrix.
pub type CMatrix<T> = Matrix<Complex<T>>;

impl<E: Entry> Matrix<E> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self { rows, cols, data: vec![E::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        Self::from_fn(n, n, |i, j| if i == j { E::one() } else { E::zero() })
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> E) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Self { rows, cols, data }
    }

    /// Builds a matrix from row slices; all rows must have equal length.
    pub fn from_rows<R: AsRef<[E]>>(rows: &[R]) -> Result<Self> {
        let cols = rows.first().map_or(0, |r| r.as_ref().len());
        let mut data = Vec::with_capacity(rows.len() * cols);
        for r in rows {
            let r = r.as_ref();
            if r.len() != cols {
                return Err(Error::DimensionMismatch { expected: cols, found: r.len() });
            }
            data.extend_from_slice(r);
        }
        Ok(Self { rows: rows.len(), cols, data })
    }

    /// Builds a square matrix whose `j`-th column is `columns[j]`.
    pub fn from_columns<R: AsRef<[E]>>(columns: &[R]) -> Result<Self> {
        let rows = columns.first().map_or(0, |c| c.as_ref().len());
        for c in columns {
            if c.as_ref().len() != rows {
                return Err(Error::DimensionMismatch { expected: rows, found: c.as_ref().len() });
            }
        }
        Ok(Self::from_fn(rows, columns.len(), |i, j| columns[j].as_ref()[i]))
    }

    pub fn diagonal(values: &[E]) -> Self {
        let n = values.len();
        Self::from_fn(n, n, |i, j| if i == j { values[i] } else { E::zero() })
    }

    #[inline]
    pub fn nrows(&self) -> usize {
        self.rows
    }

    #[inline]
    pub fn ncols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn as_slice(&self) -> &[E] {
        &self.data
    }

    pub fn row(&self, i: usize) -> &[E] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<E> {
        (0..self.rows).map(|i| self[(i, j)]).collect()
    }

    pub fn map<F: Entry>(&self, f: impl Fn(E) -> F) -> Matrix<F> {
        Matrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(|&x| f(x)).collect() }
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)])
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)].conj())
    }

    pub fn scale(&self, s: E) -> Self {
        self.map(|x| x * s)
    }

    pub fn trace(&self) -> E {
        (0..self.rows.min(self.cols)).fold(E::zero(), |acc, i| acc + self[(i, i)])
    }

    pub fn mul_vec(&self, v: &[E]) -> Vec<E> {
        assert_eq!(v.len(), self.cols, "matrix-vector dimension mismatch");
        (0..self.rows)
            .map(|i| self.row(i).iter().zip(v).fold(E::zero(), |acc, (&a, &b)| acc + a * b))
            .collect()
    }

    /// Largest entrywise modulus of `self - other`.
    pub fn max_abs_diff(&self, other: &Self) -> E::Real {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        self.data
            .iter()
            .zip(&other.data)
            .fold(E::Real::zero(), |m, (&a, &b)| m.max((a - b).modulus()))
    }

    pub fn max_abs(&self) -> E::Real {
        self.data.iter().fold(E::Real::zero(), |m, &a| m.max(a.modulus()))
    }

    pub fn frobenius_norm(&self) -> E::Real {
        self.data.iter().map(|&a| a.modulus() * a.modulus()).sum::<E::Real>().sqrt()
    }

    /// Maximum absolute column sum.
    pub fn norm_one(&self) -> E::Real {
        (0..self.cols)
            .map(|j| (0..self.rows).map(|i| self[(i, j)].modulus()).sum::<E::Real>())
            .fold(E::Real::zero(), |m, s| m.max(s))
    }

    /// Largest deviation from Hermiticity, `max |a_ij - conj(a_ji)|`.
    pub fn hermiticity_defect(&self) -> E::Real {
        if !self.is_square() {
            return E::Real::infinity();
        }
        self.max_abs_diff(&self.adjoint())
    }

    /// `max |(A† A - I)_ij|`.
    pub fn unitarity_defect(&self) -> E::Real {
        if !self.is_square() {
            return E::Real::infinity();
        }
        (&self.adjoint() * self).max_abs_diff(&Self::identity(self.rows))
    }

    pub fn lu(&self) -> Lu<E> {
        Lu::new(self)
    }

    pub fn det(&self) -> E {
        assert!(self.is_square(), "determinant of a non-square matrix");
        self.lu().det()
    }

    pub fn inverse(&self) -> Option<Self> {
        self.lu().inverse()
    }

    pub fn solve(&self, b: &[E]) -> Option<Vec<E>> {
        self.lu().solve(b)
    }
}

impl<E> Index<(usize, usize)> for Matrix<E> {
    type Output = E;

    #[inline]
    fn index(&self, (i, j): (usize, usize)) -> &E {
        debug_assert!(i < self.rows && j < self.cols);
        &self.data[i * self.cols + j]
    }
}

impl<E> IndexMut<(usize, usize)> for Matrix<E> {
    #[inline]
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut E {
        debug_assert!(i < self.rows && j < self.cols);
        &mut self.data[i * self.cols + j]
    }
}

impl<E: Entry> Mul for &Matrix<E> {
    type Output = Matrix<E>;

    fn mul(self, rhs: &Matrix<E>) -> Matrix<E> {
        assert_eq!(self.cols, rhs.rows, "matrix product dimension mismatch");
        let mut out = Matrix::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(i, k)];
                if a == E::zero() {
                    continue;
                }
                for j in 0..rhs.cols {
                    out[(i, j)] = out[(i, j)] + a * rhs[(k, j)];
                }
            }
        }
        out
    }
}

impl<E: Entry> Add for &Matrix<E> {
    type Output = Matrix<E>;

    fn add(self, rhs: &Matrix<E>) -> Matrix<E> {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(&a, &b)| a + b).collect(),
        }
    }
}

impl<E: Entry> Sub for &Matrix<E> {
    type Output = Matrix<E>;

    fn sub(self, rhs: &Matrix<E>) -> Matrix<E> {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(&a, &b)| a - b).collect(),
        }
    }
}

/// Promotes a real matrix to a complex one.
pub fn complexify<T: Scalar>(m: &RMatrix<T>) -> CMatrix<T> {
    m.map(|x| Complex::new(x, T::zero()))
}

/// `|v|` for complex vectors.
pub fn vec_norm<T: Scalar>(v: &[Complex<T>]) -> T {
    v.iter().map(|z| z.norm_sqr()).sum::<T>().sqrt()
}

/// Outer product `|a><b|`.
pub fn outer<T: Scalar>(a: &[Complex<T>], b: &[Complex<T>]) -> CMatrix<T> {
    Matrix::from_fn(a.len(), b.len(), |i, j| a[i] * b[j].conj())
}

/// LU factorization with partial pivoting, `P A = L U`.
///
/// Factorization never fails; singular input shows up as a zero pivot, which
/// makes [`Lu::det`] return zero and [`Lu::solve`] return `None`.
#[derive(Clone, Debug)]
pub struct Lu<E> {
    lu: Matrix<E>,
    perm: Vec<usize>,
    swaps: usize,
}

impl<E: Entry> Lu<E> {
    pub fn new(a: &Matrix<E>) -> Self {
        assert!(a.is_square(), "LU of a non-square matrix");
        let n = a.rows;
        let mut lu = a.clone();
        let mut perm: Vec<usize> = (0..n).collect();
        let mut swaps = 0;
        for k in 0..n {
            let (p, best) = (k..n)
                .map(|i| (i, lu[(i, k)].modulus()))
                .fold((k, E::Real::zero()), |acc, x| if x.1 > acc.1 { x } else { acc });
            if best == E::Real::zero() {
                continue;
            }
            if p != k {
                for j in 0..n {
                    lu.data.swap(k * n + j, p * n + j);
                }
                perm.swap(k, p);
                swaps += 1;
            }
            let pivot = lu[(k, k)];
            for i in k + 1..n {
                let f = lu[(i, k)] / pivot;
                lu[(i, k)] = f;
                if f == E::zero() {
                    continue;
                }
                for j in k + 1..n {
                    let u = lu[(k, j)];
                    lu[(i, j)] = lu[(i, j)] - f * u;
                }
            }
        }
        Self { lu, perm, swaps }
    }

    pub fn det(&self) -> E {
        let d = (0..self.lu.rows).fold(E::one(), |acc, i| acc * self.lu[(i, i)]);
        if self.swaps % 2 == 1 {
            -d
        } else {
            d
        }
    }

    /// Smallest pivot modulus.
    pub fn min_pivot(&self) -> E::Real {
        (0..self.lu.rows)
            .map(|i| self.lu[(i, i)].modulus())
            .fold(E::Real::infinity(), |m, x| m.min(x))
    }

    pub fn solve(&self, b: &[E]) -> Option<Vec<E>> {
        let n = self.lu.rows;
        assert_eq!(b.len(), n, "right-hand side dimension mismatch");
        if self.min_pivot() == E::Real::zero() {
            return None;
        }
        let mut x: Vec<E> = self.perm.iter().map(|&p| b[p]).collect();
        for i in 0..n {
            for k in 0..i {
                x[i] = x[i] - self.lu[(i, k)] * x[k];
            }
        }
        for i in (0..n).rev() {
            for k in i + 1..n {
                x[i] = x[i] - self.lu[(i, k)] * x[k];
            }
            x[i] = x[i] / self.lu[(i, i)];
        }
        Some(x)
    }

    pub fn inverse(&self) -> Option<Matrix<E>> {
        let n = self.lu.rows;
        let mut cols = Vec::with_capacity(n);
        for j in 0..n {
            let e: Vec<E> = (0..n).map(|i| if i == j { E::one() } else { E::zero() }).collect();
            cols.push(self.solve(&e)?);
        }
        Matrix::from_columns(&cols).ok()
    }
}

/// Reciprocal 1-norm condition number, `1 / (|A|_1 |A^-1|_1)`; zero when singular.
pub fn rcond<E: Entry>(a: &Matrix<E>) -> E::Real {
    match a.inverse() {
        Some(inv) => {
            let k = a.norm_one() * inv.norm_one();
            if k.is_finite() && k > E::Real::zero() {
                k.recip()
            } else {
                E::Real::zero()
            }
        }
        None => E::Real::zero(),
    }
}

/// Eigen-decomposition of a real symmetric matrix by cyclic Jacobi rotations.
///
/// Returns eigenvalues in ascending order and the matching eigenvectors as
/// columns.
pub fn symmetric_eigen<T: Scalar>(a: &RMatrix<T>) -> (Vec<T>, RMatrix<T>) {
    assert!(a.is_square(), "eigenproblem of a non-square matrix");
    let n = a.rows;
    let mut m = a.clone();
    let mut v = RMatrix::<T>::identity(n);
    let scale = a.frobenius_norm().max(T::min_positive_value());
    let two = T::lit(2.0);
    for _sweep in 0..100 {
        let off: T = (0..n)
            .flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j)))
            .map(|(i, j)| m[(i, j)] * m[(i, j)])
            .sum::<T>()
            .sqrt();
        if off <= T::epsilon() * scale * T::lit(1e-2) {
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                let apq = m[(p, q)];
                if apq == T::zero() {
                    continue;
                }
                let theta = (m[(q, q)] - m[(p, p)]) / (two * apq);
                let t = theta.signum() / (theta.abs() + (theta * theta + T::one()).sqrt());
                let c = (t * t + T::one()).sqrt().recip();
                let s = t * c;
                for k in 0..n {
                    let mkp = m[(k, p)];
                    let mkq = m[(k, q)];
                    m[(k, p)] = c * mkp - s * mkq;
                    m[(k, q)] = s * mkp + c * mkq;
                }
                for k in 0..n {
                    let mpk = m[(p, k)];
                    let mqk = m[(q, k)];
                    m[(p, k)] = c * mpk - s * mqk;
                    m[(q, k)] = s * mpk + c * mqk;
                }
                for k in 0..n {
                    let vkp = v[(k, p)];
                    let vkq = v[(k, q)];
                    v[(k, p)] = c * vkp - s * vkq;
                    v[(k, q)] = s * vkp + c * vkq;
                }
            }
        }
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| m[(i, i)].partial_cmp(&m[(j, j)]).unwrap_or(std::cmp::Ordering::Equal));
    let values = order.iter().map(|&i| m[(i, i)]).collect();
    let vectors = RMatrix::from_fn(n, n, |i, j| v[(i, order[j])]);
    (values, vectors)
}

/// Eigenvalues of a Hermitian matrix, ascending.
///
/// Uses the real symmetric embedding `[[Re, -Im], [Im, Re]]`, whose spectrum is
/// that of the input with every eigenvalue doubled.
pub fn hermitian_eigenvalues<T: Scalar>(h: &CMatrix<T>) -> Vec<T> {
    let n = h.nrows();
    let big = RMatrix::from_fn(2 * n, 2 * n, |i, j| {
        let z = h[(i % n, j % n)];
        match (i < n, j < n) {
            (true, true) | (false, false) => z.re,
            (true, false) => -z.im,
            (false, true) => z.im,
        }
    });
    let (values, _) = symmetric_eigen(&big);
    values.into_iter().step_by(2).collect()
}

/// Numerical rank by Gaussian elimination with full pivoting.
pub fn rank<T: Scalar>(a: &RMatrix<T>, tol: T) -> usize {
    let mut m = a.clone();
    let (rows, cols) = (m.rows, m.cols);
    let mut r = 0;
    let mut col_used = vec![false; cols];
    while r < rows.min(cols) {
        let mut best = (r, 0, T::zero());
        for i in r..rows {
            for j in (0..cols).filter(|&j| !col_used[j]) {
                let x = m[(i, j)].abs();
                if x > best.2 {
                    best = (i, j, x);
                }
            }
        }
        if best.2 <= tol {
            break;
        }
        let (pi, pj, _) = best;
        for j in 0..cols {
            m.data.swap(r * cols + j, pi * cols + j);
        }
        col_used[pj] = true;
        let pivot = m[(r, pj)];
        for i in r + 1..rows {
            let f = m[(i, pj)] / pivot;
            for j in 0..cols {
                let u = m[(r, j)];
                m[(i, j)] = m[(i, j)] - f * u;
            }
        }
        r += 1;
    }
    r
}

/// Unitary polar factor of a nonsingular complex matrix by scaled Newton
/// iteration `X <- (g X + X^-† / g) / 2`.
///
/// Returns `None` when an iterate becomes singular.
pub fn unitary_polar<T: Scalar>(a: &CMatrix<T>) -> Option<CMatrix<T>> {
    let half = T::lit(0.5);
    let mut x = a.clone();
    for _ in 0..100 {
        let inv_h = x.inverse()?.adjoint();
        // Frobenius-norm scaling speeds up the early iterations.
        let g = (inv_h.frobenius_norm() / x.frobenius_norm()).sqrt();
        let next = if g.is_finite() && g > T::zero() {
            &x.scale(Complex::new(g * half, T::zero())) + &inv_h.scale(Complex::new(half / g, T::zero()))
        } else {
            &x.scale(Complex::new(half, T::zero())) + &inv_h.scale(Complex::new(half, T::zero()))
        };
        let change = next.max_abs_diff(&x);
        x = next;
        if change <= T::epsilon() * T::lit(16.0) {
            break;
        }
    }
    Some(x)
}
