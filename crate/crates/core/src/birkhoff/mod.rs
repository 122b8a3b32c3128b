//! The Birkhoff polytope of bistochastic matrices: permutation corners,
//! convex combinations, the Frobenius distance, degeneracy, and the
//! unistochastic subset.

mod sampling;
mod unistochastic;

pub use sampling::{
    equality_locus, hypocycloid_boundary, locus_cusps, planar_embedding, sample_degenerate_surface, simplex_grid,
    unistochastic_degenerate_intersection, SurfaceSample, HYPOCYCLOID_TRIANGLE,
};
pub use unistochastic::{
    chain_links, chain_links_for_columns, is_unistochastic, realize_unitary, search_unitary, triangle_slack,
    SearchOptions, UnistochasticCertificate, Verdict,
};

use itertools::Itertools;

use crate::error::{Error, Result};
use crate::linalg::{symmetric_eigen, RMatrix};
use crate::scalar::Scalar;
use crate::weakval::{stochastic_defect, OverlapMatrix};

/// Largest `N` whose `N!` corners [`permutation_corners`] will enumerate.
pub const MAX_CORNER_N: usize = 8;

/// Nonnegative square matrix with unit row and column sums.
#[derive(Clone, Debug, PartialEq)]
pub struct BistochasticMatrix<T> {
    entries: RMatrix<T>,
}

impl<T: Scalar> BistochasticMatrix<T> {
    pub fn new(entries: RMatrix<T>) -> Result<Self> {
        if !entries.is_square() || entries.nrows() == 0 {
            return Err(Error::NotBistochastic(format!("shape {}x{}", entries.nrows(), entries.ncols())));
        }
        if let Some(&x) = entries.as_slice().iter().find(|x| !x.is_finite() || **x < T::zero()) {
            return Err(Error::NotBistochastic(format!("entry {x} is negative or not finite")));
        }
        let defect = stochastic_defect(&entries);
        if defect > T::EPS_SUM {
            return Err(Error::NotBistochastic(format!("row/column sums deviate from 1 by {defect}")));
        }
        Ok(Self { entries })
    }

    pub fn from_rows<R: AsRef<[T]>>(rows: &[R]) -> Result<Self> {
        Self::new(RMatrix::from_rows(rows)?)
    }

    /// The all-`1/N` matrix at the center of the polytope.
    pub fn center(n: usize) -> Self {
        let v = T::one() / T::from_usize(n).expect("small n");
        Self { entries: RMatrix::from_fn(n, n, |_, _| v) }
    }

    pub fn identity(n: usize) -> Self {
        Self { entries: RMatrix::identity(n) }
    }

    /// `mu(theta) = [[cos^2(t/2), sin^2(t/2)], [sin^2(t/2), cos^2(t/2)]]`.
    pub fn two_by_two(theta: T) -> Self {
        let half = theta / T::lit(2.0);
        let (c, s) = (half.cos().powi(2), half.sin().powi(2));
        Self { entries: RMatrix::from_rows(&[[c, s], [s, c]]).expect("2x2") }
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.entries.nrows()
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> T {
        self.entries[(i, j)]
    }

    pub fn matrix(&self) -> &RMatrix<T> {
        &self.entries
    }

    /// `det mu`; zero marks an irreversible measurement.
    pub fn det(&self) -> T {
        degeneracy(self)
    }

    pub fn is_degenerate(&self) -> bool {
        self.det().abs() <= T::EPS_DET
    }
}

impl<T: Scalar> From<OverlapMatrix<T>> for BistochasticMatrix<T> {
    fn from(mu: OverlapMatrix<T>) -> Self {
        Self { entries: mu.into_matrix() }
    }
}

/// Permutation `perm`, with a one at `(i, perm[i])` in every row `i`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PermutationMatrix {
    perm: Vec<usize>,
}

impl PermutationMatrix {
    pub fn new(perm: Vec<usize>) -> Result<Self> {
        let mut seen = vec![false; perm.len()];
        for &p in &perm {
            if p >= perm.len() || std::mem::replace(&mut seen[p], true) {
                return Err(Error::InvalidInput(format!("{perm:?} is not a permutation")));
            }
        }
        Ok(Self { perm })
    }

    pub fn dim(&self) -> usize {
        self.perm.len()
    }

    pub fn perm(&self) -> &[usize] {
        &self.perm
    }

    pub fn to_matrix<T: Scalar>(&self) -> RMatrix<T> {
        let n = self.dim();
        RMatrix::from_fn(n, n, |i, j| if self.perm[i] == j { T::one() } else { T::zero() })
    }

    pub fn to_bistochastic<T: Scalar>(&self) -> BistochasticMatrix<T> {
        BistochasticMatrix { entries: self.to_matrix() }
    }
}

/// All `N!` permutation matrices in lexicographic order of `perm`.
///
/// For `N = 3` this is the order `P_0 .. P_5` used throughout: identity,
/// `(0 2 1)`, `(1 0 2)`, `(1 2 0)`, `(2 0 1)`, `(2 1 0)`, so `P_0, P_3, P_4`
/// are the even permutations.
pub fn permutation_corners(n: usize) -> Result<Vec<PermutationMatrix>> {
    if n == 0 {
        return Err(Error::UnsupportedDimension(0));
    }
    if n > MAX_CORNER_N {
        return Err(Error::TooManyCorners(n));
    }
    Ok((0..n).permutations(n).map(|perm| PermutationMatrix { perm }).collect())
}

/// Barycentric coefficients over an ordered corner list.
///
/// The representation of a matrix by such coefficients is not unique once
/// there are more corners than `(N-1)^2 + 1`; compare matrices, not points.
#[derive(Clone, Debug, PartialEq)]
pub struct PolytopePoint<T> {
    coefficients: Vec<T>,
}

impl<T: Scalar> PolytopePoint<T> {
    pub fn new(coefficients: Vec<T>) -> Result<Self> {
        crate::hilbert::validate_distribution(&coefficients)?;
        Ok(Self { coefficients })
    }

    /// Unit mass on corner `k` of `count`.
    pub fn vertex(count: usize, k: usize) -> Result<Self> {
        if k >= count {
            return Err(Error::IndexOutOfRange { index: k, dim: count });
        }
        Self::new((0..count).map(|i| if i == k { T::one() } else { T::zero() }).collect())
    }

    pub fn coefficients(&self) -> &[T] {
        &self.coefficients
    }

    pub fn len(&self) -> usize {
        self.coefficients.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coefficients.is_empty()
    }
}

/// `sum_i p_i P_i`.
pub fn combine<T: Scalar>(point: &PolytopePoint<T>, corners: &[PermutationMatrix]) -> Result<BistochasticMatrix<T>> {
    if point.len() != corners.len() {
        return Err(Error::DimensionMismatch { expected: corners.len(), found: point.len() });
    }
    let n = corners.first().map(PermutationMatrix::dim).ok_or(Error::UnsupportedDimension(0))?;
    let mut m = RMatrix::zeros(n, n);
    for (&p, c) in point.coefficients().iter().zip(corners) {
        if c.dim() != n {
            return Err(Error::DimensionMismatch { expected: n, found: c.dim() });
        }
        for (i, &j) in c.perm().iter().enumerate() {
            m[(i, j)] = m[(i, j)] + p;
        }
    }
    BistochasticMatrix::new(m)
}

/// `D(A, B) = sqrt(tr (A - B)(A - B)^†)`, the Frobenius distance.
pub fn distance<T: Scalar>(a: &BistochasticMatrix<T>, b: &BistochasticMatrix<T>) -> Result<T> {
    if a.dim() != b.dim() {
        return Err(Error::DimensionMismatch { expected: a.dim(), found: b.dim() });
    }
    Ok((a.matrix() - b.matrix()).frobenius_norm())
}

/// `det mu`.
pub fn degeneracy<T: Scalar>(mu: &BistochasticMatrix<T>) -> T {
    mu.matrix().det()
}

/// Minimal-norm least-squares coefficients `p` with `sum_i p_i P_i = mu` and
/// `sum_i p_i = 1`. Entries may be negative; used for reporting only.
pub fn canonicalize<T: Scalar>(mu: &BistochasticMatrix<T>, corners: &[PermutationMatrix]) -> Result<Vec<T>> {
    let n = mu.dim();
    let k = corners.len();
    if let Some(c) = corners.iter().find(|c| c.dim() != n) {
        return Err(Error::DimensionMismatch { expected: n, found: c.dim() });
    }
    // Columns of `a` are the flattened corners plus a trailing 1 for the sum constraint.
    let a = RMatrix::from_fn(n * n + 1, k, |r, c| {
        if r == n * n || corners[c].perm()[r / n] == r % n {
            T::one()
        } else {
            T::zero()
        }
    });
    let mut b: Vec<T> = mu.matrix().as_slice().to_vec();
    b.push(T::one());
    // p = (A^T A)^+ A^T b
    let at = a.transpose();
    let (vals, vecs) = symmetric_eigen(&(&at * &a));
    let cutoff = vals.iter().fold(T::zero(), |m, &x| m.max(x.abs())) * T::lit(1e-10);
    let atb = at.mul_vec(&b);
    let mut p = vec![T::zero(); k];
    for (idx, &lambda) in vals.iter().enumerate() {
        if lambda.abs() <= cutoff {
            continue;
        }
        let proj: T = (0..k).map(|r| vecs[(r, idx)] * atb[r]).sum();
        for (r, pr) in p.iter_mut().enumerate() {
            *pr = *pr + vecs[(r, idx)] * proj / lambda;
        }
    }
    Ok(p)
}
