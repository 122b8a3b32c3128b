//! Random test objects: Haar unitaries, Hermitian operators, basis pairs,
//! probability vectors and Birkhoff polytope points.

use num_complex::Complex;
use rand::Rng;
use rand_distr::{Distribution, Exp1, StandardNormal};

use crate::hilbert::{BasisPair, HermitianOperator, StateVector};
use crate::linalg::CMatrix;
use crate::scalar::{Scalar, C};

fn normal<T: Scalar, R: Rng + ?Sized>(rng: &mut R) -> T {
    let x: f64 = StandardNormal.sample(rng);
    T::lit(x)
}

fn gaussian_complex<T: Scalar, R: Rng + ?Sized>(rng: &mut R) -> C<T> {
    Complex::new(normal(rng), normal(rng))
}

/// Haar-distributed unitary from Gram-Schmidt on a complex Gaussian matrix.
pub fn unitary<T: Scalar, R: Rng + ?Sized>(n: usize, rng: &mut R) -> CMatrix<T> {
    loop {
        let mut cols: Vec<Vec<C<T>>> = Vec::with_capacity(n);
        let mut ok = true;
        for _ in 0..n {
            let mut v: Vec<C<T>> = (0..n).map(|_| gaussian_complex(rng)).collect();
            // Two passes of classical Gram-Schmidt keep orthogonality at rounding level.
            for _ in 0..2 {
                for u in &cols {
                    let proj: C<T> = u.iter().zip(&v).map(|(a, b)| a.conj() * b).sum();
                    for (vi, ui) in v.iter_mut().zip(u) {
                        *vi = *vi - *ui * proj;
                    }
                }
            }
            let norm = crate::linalg::vec_norm(&v);
            if !(norm > T::lit(1e-6)) {
                ok = false;
                break;
            }
            cols.push(v.into_iter().map(|x| x / norm).collect());
        }
        if ok {
            return CMatrix::from_columns(&cols).expect("square");
        }
    }
}

/// Random Hermitian operator with entries of order one.
pub fn hermitian<T: Scalar, R: Rng + ?Sized>(n: usize, rng: &mut R) -> HermitianOperator<T> {
    let g = CMatrix::from_fn(n, n, |_, _| gaussian_complex::<T, _>(rng));
    let h = (&g + &g.adjoint()).scale(Complex::new(T::lit(0.5), T::zero()));
    HermitianOperator::new(h).expect("symmetrized")
}

/// Orthonormal basis given by the columns of a Haar unitary.
pub fn basis<T: Scalar, R: Rng + ?Sized>(n: usize, rng: &mut R) -> Vec<StateVector<T>> {
    let u = unitary::<T, _>(n, rng);
    (0..n).map(|j| StateVector::normalized(u.column(j)).expect("unit column")).collect()
}

/// Random basis pair whose smallest overlap modulus exceeds `min_overlap`.
pub fn admissible_pair<T: Scalar, R: Rng + ?Sized>(n: usize, min_overlap: T, rng: &mut R) -> BasisPair<T> {
    loop {
        let pair = BasisPair::new(basis(n, rng), basis(n, rng)).expect("orthonormal");
        if pair.min_overlap().2 > min_overlap.max(T::EPS_OVERLAP) {
            return pair;
        }
    }
}

/// Phases uniform on `[0, 2 pi)`.
pub fn phases<T: Scalar, R: Rng + ?Sized>(n: usize, rng: &mut R) -> Vec<T> {
    (0..n).map(|_| T::lit(rng.random::<f64>() * std::f64::consts::TAU)).collect()
}

/// Flat Dirichlet sample on the probability simplex.
pub fn distribution<T: Scalar, R: Rng + ?Sized>(n: usize, rng: &mut R) -> Vec<T> {
    let w: Vec<f64> = (0..n).map(|_| Exp1.sample(rng)).collect();
    let total: f64 = w.iter().sum();
    let mut p: Vec<T> = w.iter().map(|&x| T::lit(x / total)).collect();
    // Put the rounding slack on the largest entry so the sum is 1 to an ulp.
    let sum: T = p.iter().copied().sum();
    if let Some(k) = (0..n).max_by(|&a, &b| p[a].partial_cmp(&p[b]).unwrap()) {
        p[k] = p[k] + (T::one() - sum);
    }
    p
}
