//! State vectors, orthonormal basis pairs, Hermitian operators and the spin
//! fixtures (Pauli, spin-1, Gell-Mann, rotated bases and operators).
//!
//! Indices are 0-based throughout; the textbook `(1, 2)` entry is `(0, 1)`.

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::linalg::{hermitian_eigenvalues, CMatrix};
use crate::scalar::{im, re, Scalar, C};

/// Unit vector in `C^n`.
#[derive(Clone, Debug, PartialEq)]
pub struct StateVector<T> {
    amplitudes: Vec<C<T>>,
}

impl<T: Scalar> StateVector<T> {
    /// Wraps `amplitudes`, which must already have unit norm within `EPS_NORM`.
    pub fn new(amplitudes: Vec<C<T>>) -> Result<Self> {
        if amplitudes.is_empty() {
            return Err(Error::UnsupportedDimension(0));
        }
        let norm = crate::linalg::vec_norm(&amplitudes);
        if !norm.is_finite() || (norm - T::one()).abs() > T::EPS_NORM {
            return Err(Error::NotNormalized { norm: norm.as_f64() });
        }
        Ok(Self { amplitudes })
    }

    /// Normalizes `amplitudes` before wrapping.
    pub fn normalized(amplitudes: Vec<C<T>>) -> Result<Self> {
        let norm = crate::linalg::vec_norm(&amplitudes);
        if !(norm > T::zero()) || !norm.is_finite() {
            return Err(Error::NotNormalized { norm: norm.as_f64() });
        }
        Self::new(amplitudes.into_iter().map(|a| a / norm).collect())
    }

    pub fn from_real(values: &[T]) -> Result<Self> {
        Self::new(values.iter().map(|&x| re(x)).collect())
    }

    /// The `k`-th standard basis vector of `C^n`.
    pub fn basis_state(n: usize, k: usize) -> Result<Self> {
        if k >= n {
            return Err(Error::IndexOutOfRange { index: k, dim: n });
        }
        Self::new((0..n).map(|i| if i == k { C::new(T::one(), T::zero()) } else { C::default() }).collect())
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    #[inline]
    pub fn amplitudes(&self) -> &[C<T>] {
        &self.amplitudes
    }

    /// `<self|other>`, conjugate-linear in `self`.
    pub fn inner(&self, other: &Self) -> Result<C<T>> {
        inner_product(self, other)
    }

    /// Multiplies by `e^{i phase}`.
    pub fn with_phase(&self, phase: T) -> Self {
        let u = Complex::from_polar(T::one(), phase);
        Self { amplitudes: self.amplitudes.iter().map(|&a| a * u).collect() }
    }
}

/// `<v|w> = sum_i conj(v_i) w_i`.
pub fn inner_product<T: Scalar>(v: &StateVector<T>, w: &StateVector<T>) -> Result<C<T>> {
    if v.dim() != w.dim() {
        return Err(Error::DimensionMismatch { expected: v.dim(), found: w.dim() });
    }
    Ok(v.amplitudes.iter().zip(&w.amplitudes).map(|(a, b)| a.conj() * b).sum())
}

/// Multiplies the `j`-th vector of `basis` by `e^{i phases[j]}`.
pub fn gauge_transform<T: Scalar>(basis: &[StateVector<T>], phases: &[T]) -> Result<Vec<StateVector<T>>> {
    if basis.len() != phases.len() {
        return Err(Error::DimensionMismatch { expected: basis.len(), found: phases.len() });
    }
    Ok(basis.iter().zip(phases).map(|(v, &p)| v.with_phase(p)).collect())
}

/// `max_{i,j} |<v_i|v_j> - delta_ij|`.
pub fn orthonormality_defect<T: Scalar>(basis: &[StateVector<T>]) -> Result<T> {
    let mut worst = T::zero();
    for (i, vi) in basis.iter().enumerate() {
        for (j, vj) in basis.iter().enumerate() {
            let target = if i == j { T::one() } else { T::zero() };
            worst = worst.max((inner_product(vi, vj)? - re(target)).norm());
        }
    }
    Ok(worst)
}

/// Standard basis of `C^n`.
pub fn standard_basis<T: Scalar>(n: usize) -> Vec<StateVector<T>> {
    (0..n).map(|k| StateVector::basis_state(n, k).expect("k < n")).collect()
}

fn check_basis<T: Scalar>(basis: &[StateVector<T>]) -> Result<usize> {
    let n = basis.len();
    if n == 0 {
        return Err(Error::UnsupportedDimension(0));
    }
    for v in basis {
        if v.dim() != n {
            return Err(Error::DimensionMismatch { expected: n, found: v.dim() });
        }
    }
    let deviation = orthonormality_defect(basis)?;
    if deviation > T::EPS_NORM {
        return Err(Error::NotOrthonormal { deviation: deviation.as_f64() });
    }
    Ok(n)
}

/// Which basis of a [`BasisPair`] an object refers to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Side {
    /// The pre-selection basis `{psi_j}`.
    Pre,
    /// The post-selection basis `{phi_l}`.
    Post,
}

/// Pre-selection basis `{psi_j}` and post-selection basis `{phi_l}` of `C^n`.
#[derive(Clone, Debug, PartialEq)]
pub struct BasisPair<T> {
    pre: Vec<StateVector<T>>,
    post: Vec<StateVector<T>>,
}

impl<T: Scalar> BasisPair<T> {
    /// Both lists must be orthonormal bases of the same space.
    ///
    /// Admissibility (no vanishing overlap) is not required here; operations
    /// that divide by overlaps check it themselves.
    pub fn new(pre: Vec<StateVector<T>>, post: Vec<StateVector<T>>) -> Result<Self> {
        let n = check_basis(&pre)?;
        let m = check_basis(&post)?;
        if n != m {
            return Err(Error::DimensionMismatch { expected: n, found: m });
        }
        Ok(Self { pre, post })
    }

    /// Pair whose bases are the columns of `pre` and `post`.
    pub fn from_columns(pre: &CMatrix<T>, post: &CMatrix<T>) -> Result<Self> {
        let cols = |m: &CMatrix<T>| -> Result<Vec<StateVector<T>>> {
            if !m.is_square() {
                return Err(Error::DimensionMismatch { expected: m.nrows(), found: m.ncols() });
            }
            (0..m.ncols()).map(|j| StateVector::new(m.column(j))).collect()
        };
        Self::new(cols(pre)?, cols(post)?)
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.pre.len()
    }

    pub fn pre(&self) -> &[StateVector<T>] {
        &self.pre
    }

    pub fn post(&self) -> &[StateVector<T>] {
        &self.post
    }

    pub fn basis(&self, side: Side) -> &[StateVector<T>] {
        match side {
            Side::Pre => &self.pre,
            Side::Post => &self.post,
        }
    }

    /// `<phi_l|psi_j>`.
    pub fn overlap(&self, l: usize, j: usize) -> Result<C<T>> {
        self.check_index(l)?;
        self.check_index(j)?;
        inner_product(&self.post[l], &self.pre[j])
    }

    /// Matrix `G_{lj} = <phi_l|psi_j>`.
    pub fn gram(&self) -> CMatrix<T> {
        let n = self.dim();
        CMatrix::from_fn(n, n, |l, j| inner_product(&self.post[l], &self.pre[j]).expect("same dim"))
    }

    /// Smallest overlap modulus and where it occurs.
    pub fn min_overlap(&self) -> (usize, usize, T) {
        let g = self.gram();
        let n = self.dim();
        let mut best = (0, 0, T::infinity());
        for l in 0..n {
            for j in 0..n {
                let m = g[(l, j)].norm();
                if m < best.2 {
                    best = (l, j, m);
                }
            }
        }
        best
    }

    /// Every overlap modulus exceeds `EPS_OVERLAP`.
    pub fn is_admissible(&self) -> bool {
        self.min_overlap().2 > T::EPS_OVERLAP
    }

    /// Applies independent phase changes to both bases.
    pub fn gauge(&self, pre_phases: &[T], post_phases: &[T]) -> Result<Self> {
        Ok(Self { pre: gauge_transform(&self.pre, pre_phases)?, post: gauge_transform(&self.post, post_phases)? })
    }

    pub(crate) fn check_index(&self, k: usize) -> Result<()> {
        if k >= self.dim() {
            return Err(Error::IndexOutOfRange { index: k, dim: self.dim() });
        }
        Ok(())
    }
}

/// Hermitian `n x n` complex matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct HermitianOperator<T> {
    matrix: CMatrix<T>,
}

impl<T: Scalar> HermitianOperator<T> {
    pub fn new(matrix: CMatrix<T>) -> Result<Self> {
        if !matrix.is_square() || matrix.nrows() == 0 {
            return Err(Error::DimensionMismatch { expected: matrix.nrows(), found: matrix.ncols() });
        }
        let deviation = matrix.hermiticity_defect();
        if !(deviation <= T::EPS_NORM) {
            return Err(Error::NotHermitian { deviation: deviation.as_f64() });
        }
        Ok(Self { matrix })
    }

    pub fn identity(n: usize) -> Self {
        Self { matrix: CMatrix::identity(n) }
    }

    pub fn zero(n: usize) -> Self {
        Self { matrix: CMatrix::zeros(n, n) }
    }

    /// Real diagonal operator.
    pub fn diagonal(values: &[T]) -> Self {
        Self { matrix: CMatrix::diagonal(&values.iter().map(|&x| re(x)).collect::<Vec<_>>()) }
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn matrix(&self) -> &CMatrix<T> {
        &self.matrix
    }

    pub fn into_matrix(self) -> CMatrix<T> {
        self.matrix
    }

    /// Real linear combination `sum_k c_k A_k`.
    pub fn linear_combination(terms: &[(T, &Self)]) -> Result<Self> {
        let n = terms.first().map(|(_, a)| a.dim()).ok_or(Error::UnsupportedDimension(0))?;
        let mut m = CMatrix::zeros(n, n);
        for (c, a) in terms {
            if a.dim() != n {
                return Err(Error::DimensionMismatch { expected: n, found: a.dim() });
            }
            m = &m + &a.matrix.scale(re(*c));
        }
        Ok(Self { matrix: m })
    }

    pub fn apply(&self, v: &StateVector<T>) -> Result<Vec<C<T>>> {
        if v.dim() != self.dim() {
            return Err(Error::DimensionMismatch { expected: self.dim(), found: v.dim() });
        }
        Ok(self.matrix.mul_vec(v.amplitudes()))
    }

    /// `<v|A|w>`.
    pub fn matrix_element(&self, v: &StateVector<T>, w: &StateVector<T>) -> Result<C<T>> {
        if v.dim() != self.dim() {
            return Err(Error::DimensionMismatch { expected: self.dim(), found: v.dim() });
        }
        let aw = self.apply(w)?;
        Ok(v.amplitudes().iter().zip(&aw).map(|(a, b)| a.conj() * b).sum())
    }

    /// `<v|A|v>`; real up to rounding.
    pub fn expectation(&self, v: &StateVector<T>) -> Result<T> {
        Ok(self.matrix_element(v, v)?.re)
    }

    /// Eigenvalues in ascending order.
    pub fn eigenvalues(&self) -> Vec<T> {
        hermitian_eigenvalues(&self.matrix)
    }

    /// Spectral radius `max |lambda|`.
    pub fn spectral_radius(&self) -> T {
        self.eigenvalues().into_iter().fold(T::zero(), |m, x| m.max(x.abs()))
    }
}

/// Diagonal mixed state `sum_k p_k |v_k><v_k|` over one basis of a pair.
#[derive(Clone, Debug, PartialEq)]
pub struct MixedState<T> {
    side: Side,
    probabilities: Vec<T>,
}

impl<T: Scalar> MixedState<T> {
    pub fn new(side: Side, probabilities: Vec<T>) -> Result<Self> {
        validate_distribution(&probabilities)?;
        Ok(Self { side, probabilities })
    }

    pub fn point_mass(side: Side, n: usize, k: usize) -> Result<Self> {
        if k >= n {
            return Err(Error::IndexOutOfRange { index: k, dim: n });
        }
        Self::new(side, (0..n).map(|i| if i == k { T::one() } else { T::zero() }).collect())
    }

    pub fn uniform(side: Side, n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::UnsupportedDimension(0));
        }
        let p = T::one() / T::from_usize(n).expect("small n");
        Self::new(side, vec![p; n])
    }

    pub fn side(&self) -> Side {
        self.side
    }

    pub fn probabilities(&self) -> &[T] {
        &self.probabilities
    }

    pub fn dim(&self) -> usize {
        self.probabilities.len()
    }

    /// Density matrix over the basis of `pair` selected by `side`.
    pub fn density_matrix(&self, pair: &BasisPair<T>) -> Result<CMatrix<T>> {
        let basis = pair.basis(self.side);
        if basis.len() != self.dim() {
            return Err(Error::DimensionMismatch { expected: basis.len(), found: self.dim() });
        }
        let n = self.dim();
        let mut rho = CMatrix::zeros(n, n);
        for (v, &p) in basis.iter().zip(&self.probabilities) {
            let proj = crate::linalg::outer(v.amplitudes(), v.amplitudes());
            rho = &rho + &proj.scale(re(p));
        }
        Ok(rho)
    }
}

/// Entries in `[0, 1]` summing to one within `EPS_SUM`.
pub fn validate_distribution<T: Scalar>(p: &[T]) -> Result<()> {
    if p.is_empty() {
        return Err(Error::InvalidDistribution("empty".into()));
    }
    if let Some(bad) = p.iter().find(|x| !x.is_finite() || **x < T::zero() || **x > T::one()) {
        return Err(Error::InvalidDistribution(format!("entry {bad} outside [0, 1]")));
    }
    let sum: T = p.iter().copied().sum();
    if (sum - T::one()).abs() > T::EPS_SUM {
        return Err(Error::InvalidDistribution(format!("entries sum to {sum}")));
    }
    Ok(())
}

fn op<T: Scalar>(rows: [[C<T>; 2]; 2]) -> HermitianOperator<T> {
    HermitianOperator::new(CMatrix::from_rows(&rows).expect("2x2")).expect("fixture is Hermitian")
}

fn op3<T: Scalar>(rows: [[C<T>; 3]; 3]) -> HermitianOperator<T> {
    HermitianOperator::new(CMatrix::from_rows(&rows).expect("3x3")).expect("fixture is Hermitian")
}

/// `[sigma_x, sigma_y, sigma_z]`.
pub fn pauli_matrices<T: Scalar>() -> [HermitianOperator<T>; 3] {
    let (o, z) = (re(T::one()), C::default());
    let i = im(T::one());
    [op([[z, o], [o, z]]), op([[z, -i], [i, z]]), op([[o, z], [z, -o]])]
}

/// `[L_x, L_y, L_z]` for spin one in the `L_z` eigenbasis `(+1, 0, -1)`.
pub fn spin_one_matrices<T: Scalar>() -> [HermitianOperator<T>; 3] {
    let s = T::FRAC_1_SQRT_2();
    let (a, z, o) = (re(s), C::default(), re(T::one()));
    let b = im(s);
    [
        op3([[z, a, z], [a, z, a], [z, a, z]]),
        op3([[z, -b, z], [b, z, -b], [z, b, z]]),
        op3([[o, z, z], [z, z, z], [z, z, -o]]),
    ]
}

/// The eight Gell-Mann matrices `lambda_1 .. lambda_8`, normalized so that
/// `tr(lambda_a lambda_b) = 2 delta_ab`.
pub fn gell_mann_matrices<T: Scalar>() -> [HermitianOperator<T>; 8] {
    let (z, o, i) = (C::default(), re(T::one()), im(T::one()));
    let r3 = re(T::one() / T::lit(3.0).sqrt());
    let two_r3 = r3 * re(T::lit(2.0));
    [
        op3([[z, o, z], [o, z, z], [z, z, z]]),
        op3([[z, -i, z], [i, z, z], [z, z, z]]),
        op3([[o, z, z], [z, -o, z], [z, z, z]]),
        op3([[z, z, o], [z, z, z], [o, z, z]]),
        op3([[z, z, -i], [z, z, z], [i, z, z]]),
        op3([[z, z, z], [z, z, o], [z, o, z]]),
        op3([[z, z, z], [z, z, -i], [z, i, z]]),
        op3([[r3, z, z], [z, r3, z], [z, z, -two_r3]]),
    ]
}

/// Eigenbasis of the rotated spin operator, ordered by descending eigenvalue.
///
/// Spin one-half: `(cos t/2, sin t/2)`, `(-sin t/2, cos t/2)`. Spin one: the
/// `L_z` eigenbasis rotated about the `y` axis by `theta`.
pub fn rotated_basis<T: Scalar>(dim: usize, theta: T) -> Result<Vec<StateVector<T>>> {
    if !theta.is_finite() {
        return Err(Error::InvalidInput(format!("angle {theta} is not finite")));
    }
    let half = theta / T::lit(2.0);
    let (c, s) = (half.cos(), half.sin());
    let vecs: Vec<Vec<T>> = match dim {
        2 => vec![vec![c, s], vec![-s, c]],
        3 => {
            let r = theta.sin() * T::FRAC_1_SQRT_2();
            let (c2, s2) = (c * c, s * s);
            vec![vec![c2, r, s2], vec![-r, theta.cos(), r], vec![s2, -r, c2]]
        }
        d => return Err(Error::UnsupportedDimension(d)),
    };
    vecs.iter().map(|v| StateVector::from_real(v)).collect()
}

/// `sigma_z cos(theta) + sigma_x sin(theta)` (dim 2) or `L_z cos(theta) + L_x sin(theta)` (dim 3).
pub fn rotated_operator<T: Scalar>(dim: usize, theta: T) -> Result<HermitianOperator<T>> {
    let (x, z) = match dim {
        2 => {
            let [x, _, z] = pauli_matrices();
            (x, z)
        }
        3 => {
            let [x, _, z] = spin_one_matrices();
            (x, z)
        }
        d => return Err(Error::UnsupportedDimension(d)),
    };
    HermitianOperator::linear_combination(&[(theta.cos(), &z), (theta.sin(), &x)])
}

/// Spin one-half pair with `psi = {|up>, |down>}` and `phi = {|right>, |left>}`,
/// where `|left> = (1, -1)/sqrt(2)`. All overlaps have modulus `1/sqrt(2)`.
pub fn exclusive_pair<T: Scalar>() -> BasisPair<T> {
    let s = T::FRAC_1_SQRT_2();
    let post = vec![
        StateVector::from_real(&[s, s]).expect("unit"),
        StateVector::from_real(&[s, -s]).expect("unit"),
    ];
    BasisPair::new(standard_basis(2), post).expect("orthonormal")
}

/// Standard pre-selection basis and [`rotated_basis`] as post-selection basis.
pub fn rotated_pair<T: Scalar>(dim: usize, theta: T) -> Result<BasisPair<T>> {
    BasisPair::new(standard_basis(dim), rotated_basis(dim, theta)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_2, PI};

    fn commutator(a: &CMatrix<f64>, b: &CMatrix<f64>) -> CMatrix<f64> {
        &(a * b) - &(b * a)
    }

    #[test]
    fn inner_product_examples() {
        let psi = standard_basis::<f64>(2);
        assert_eq!(inner_product(&psi[0], &psi[0]).unwrap(), C::new(1.0, 0.0));
        let pair = exclusive_pair::<f64>();
        let g = pair.overlap(0, 0).unwrap();
        assert!((g - C::new(FRAC_1_SQRT_2, 0.0)).norm() < 1e-15);
        for theta in [0.3, 1.1, 2.9] {
            let pair = rotated_pair::<f64>(3, theta).unwrap();
            let g = pair.overlap(0, 0).unwrap();
            assert!((g.re - (theta / 2.0).cos().powi(2)).abs() < 1e-15);
        }
        let short = StateVector::<f64>::basis_state(3, 0).unwrap();
        assert!(matches!(inner_product(&psi[0], &short), Err(Error::DimensionMismatch { .. })));
    }

    #[test]
    fn gauge_transform_examples() {
        let basis = standard_basis::<f64>(2);
        assert_eq!(gauge_transform(&basis, &[0.0, 0.0]).unwrap(), basis);
        let flipped = gauge_transform(&basis, &[PI, 0.0]).unwrap();
        assert!((flipped[0].amplitudes()[0] - C::new(-1.0, 0.0)).norm() < 1e-15);
        assert_eq!(flipped[1], basis[1]);
        assert!(orthonormality_defect(&flipped).unwrap() < 1e-15);
        assert!(gauge_transform(&basis, &[0.0]).is_err());
    }

    #[test]
    fn pauli_algebra() {
        let [x, y, z] = pauli_matrices::<f64>();
        assert_eq!(z.matrix(), &CMatrix::diagonal(&[C::new(1.0, 0.0), C::new(-1.0, 0.0)]));
        assert!((x.matrix() * x.matrix()).max_abs_diff(&CMatrix::identity(2)) < 1e-15);
        let two_i_z = z.matrix().scale(C::new(0.0, 2.0));
        assert!(commutator(x.matrix(), y.matrix()).max_abs_diff(&two_i_z) < 1e-15);
    }

    #[test]
    fn spin_one_algebra() {
        let [lx, ly, lz] = spin_one_matrices::<f64>();
        assert_eq!(
            lz.matrix(),
            &CMatrix::diagonal(&[C::new(1.0, 0.0), C::new(0.0, 0.0), C::new(-1.0, 0.0)])
        );
        let l = [lx.matrix(), ly.matrix(), lz.matrix()];
        // [L_i, L_j] = i eps_ijk L_k over all ordered pairs.
        for (a, b, c, sign) in [(0, 1, 2, 1.0), (1, 2, 0, 1.0), (2, 0, 1, 1.0), (1, 0, 2, -1.0)] {
            let rhs = l[c].scale(C::new(0.0, sign));
            assert!(commutator(l[a], l[b]).max_abs_diff(&rhs) < 1e-14);
        }
        let casimir = &(&(l[0] * l[0]) + &(l[1] * l[1])) + &(l[2] * l[2]);
        assert!(casimir.max_abs_diff(&CMatrix::identity(3).scale(C::new(2.0, 0.0))) < 1e-14);
    }

    #[test]
    fn gell_mann_traces_and_completeness() {
        let gm = gell_mann_matrices::<f64>();
        for (a, la) in gm.iter().enumerate() {
            assert!(la.matrix().trace().norm() < 1e-15);
            for (b, lb) in gm.iter().enumerate() {
                let t = (la.matrix() * lb.matrix()).trace();
                let expect = if a == b { 2.0 } else { 0.0 };
                assert!((t - C::new(expect, 0.0)).norm() < 1e-14, "tr(l{a} l{b}) = {t}");
            }
        }
        let m = CMatrix::from_rows(&[
            [C::new(0.7, 0.0), C::new(0.1, -0.4), C::new(-1.2, 0.3)],
            [C::new(0.1, 0.4), C::new(-0.2, 0.0), C::new(0.5, 0.5)],
            [C::new(-1.2, -0.3), C::new(0.5, -0.5), C::new(1.9, 0.0)],
        ])
        .unwrap();
        let mut rebuilt = CMatrix::identity(3).scale(m.trace() / 3.0);
        for la in &gm {
            let coeff = (la.matrix() * &m).trace() / 2.0;
            rebuilt = &rebuilt + &la.matrix().scale(coeff);
        }
        assert!(rebuilt.max_abs_diff(&m) < 1e-14);
    }

    #[test]
    fn rotated_basis_examples() {
        let b0 = rotated_basis::<f64>(2, 0.0).unwrap();
        assert_eq!(b0, standard_basis(2));
        let b = rotated_basis::<f64>(2, FRAC_PI_2).unwrap();
        let s = FRAC_1_SQRT_2;
        assert!((b[0].amplitudes()[0].re - s).abs() < 1e-15 && (b[0].amplitudes()[1].re - s).abs() < 1e-15);
        assert!((b[1].amplitudes()[0].re + s).abs() < 1e-15 && (b[1].amplitudes()[1].re - s).abs() < 1e-15);
        let theta = 0.83;
        let b3 = rotated_basis::<f64>(3, theta).unwrap();
        let r = theta.sin() / 2f64.sqrt();
        let expect = [-r, theta.cos(), r];
        for (a, e) in b3[1].amplitudes().iter().zip(expect) {
            assert!((a.re - e).abs() < 1e-15 && a.im == 0.0);
        }
        for dim in [2, 3] {
            for theta in [0.0, 0.4, 1.7, PI] {
                assert!(orthonormality_defect(&rotated_basis::<f64>(dim, theta).unwrap()).unwrap() < 1e-12);
            }
        }
        assert_eq!(rotated_basis::<f64>(4, 0.1), Err(Error::UnsupportedDimension(4)));
    }

    #[test]
    fn rotated_operator_eigenpairs() {
        let [x, _, z] = pauli_matrices::<f64>();
        assert!(rotated_operator::<f64>(2, 0.0).unwrap().matrix().max_abs_diff(z.matrix()) < 1e-15);
        assert!(rotated_operator::<f64>(2, FRAC_PI_2).unwrap().matrix().max_abs_diff(x.matrix()) < 1e-15);
        for theta in [0.2, 1.0, 2.5] {
            for (dim, eig) in [(2, vec![1.0, -1.0]), (3, vec![1.0, 0.0, -1.0])] {
                let op = rotated_operator::<f64>(dim, theta).unwrap();
                let basis = rotated_basis::<f64>(dim, theta).unwrap();
                for (v, e) in basis.iter().zip(&eig) {
                    let av = op.apply(v).unwrap();
                    for (a, b) in av.iter().zip(v.amplitudes()) {
                        assert!((a - b * e).norm() < 1e-12);
                    }
                }
                let mut spectrum = op.eigenvalues();
                spectrum.reverse();
                for (s, e) in spectrum.iter().zip(&eig) {
                    assert!((s - e).abs() < 1e-12);
                }
            }
        }
    }

    #[test]
    fn validation_errors() {
        assert!(matches!(
            StateVector::<f64>::from_real(&[1.0, 1.0]),
            Err(Error::NotNormalized { .. })
        ));
        let bad = vec![
            StateVector::<f64>::from_real(&[1.0, 0.0]).unwrap(),
            StateVector::<f64>::normalized(vec![C::new(1.0, 0.0), C::new(1.0, 0.0)]).unwrap(),
        ];
        assert!(matches!(BasisPair::new(bad, standard_basis(2)), Err(Error::NotOrthonormal { .. })));
        let nh = CMatrix::from_rows(&[[C::new(0.0, 0.0), C::new(1.0, 0.0)], [C::new(0.0, 0.0), C::new(0.0, 0.0)]])
            .unwrap();
        assert!(matches!(HermitianOperator::new(nh), Err(Error::NotHermitian { .. })));
        assert!(MixedState::<f64>::new(Side::Pre, vec![0.5, 0.4]).is_err());
        assert!(MixedState::<f64>::new(Side::Pre, vec![1.5, -0.5]).is_err());
    }

    #[test]
    fn single_precision_fixtures_work() {
        let pair = rotated_pair::<f32>(3, 0.9).unwrap();
        assert!(pair.is_admissible());
        let op = rotated_operator::<f32>(3, 0.9).unwrap();
        let ev = op.eigenvalues();
        assert!((ev[0] + 1.0).abs() < 1e-5 && ev[1].abs() < 1e-5 && (ev[2] - 1.0).abs() < 1e-5);
    }
}
