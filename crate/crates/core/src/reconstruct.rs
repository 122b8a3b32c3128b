//! Recovering a pre-measurement state from post-measurement statistics.
//!
//! Alice prepares `rho = sum_j rho_j |psi_j><psi_j|`; Bob measures in
//! `{phi_l}` and is left with the diagonal `tau_l = <phi_l|rho|phi_l>`. Bob
//! recovers `rho_j` and the erased coherences `<phi_m|rho|phi_k>` by solving
//!
//! ```text
//! G_{mj} rho_j - sum_{l != m} G_{lj} rho^(phi)_{ml} = G_{mj} tau_m      for all (m, j)
//! ```
//!
//! with `G_{lj} = <phi_l|psi_j>`. The system is invertible exactly when the
//! overlap matrix `mu` is; a singular `mu` means the measurement erased the
//! history irreversibly.

use crate::error::{Error, Result};
use crate::hilbert::{validate_distribution, BasisPair};
use crate::linalg::{rcond, CMatrix, Matrix};
use crate::scalar::{re, Scalar, C};
use crate::weakval::overlap_matrix;

/// Bob's measured diagonal together with both bases.
#[derive(Clone, Debug)]
pub struct ReconstructionProblem<T> {
    pair: BasisPair<T>,
    tau: Vec<T>,
}

impl<T: Scalar> ReconstructionProblem<T> {
    pub fn new(pair: BasisPair<T>, tau: Vec<T>) -> Result<Self> {
        if tau.len() != pair.dim() {
            return Err(Error::DimensionMismatch { expected: pair.dim(), found: tau.len() });
        }
        validate_distribution(&tau)?;
        Ok(Self { pair, tau })
    }

    pub fn pair(&self) -> &BasisPair<T> {
        &self.pair
    }

    pub fn tau(&self) -> &[T] {
        &self.tau
    }

    pub fn dim(&self) -> usize {
        self.tau.len()
    }
}

/// Solution of a [`ReconstructionProblem`].
#[derive(Clone, Debug)]
pub struct ReconstructionSolution<T> {
    /// `rho^(psi)_j`, the recovered diagonal in Alice's basis.
    pub rho_psi: Vec<T>,
    /// `rho^(phi)_{mk}` for `m != k`; the diagonal is unused and left zero.
    pub rho_phi_offdiag: CMatrix<T>,
    /// `det mu`.
    pub det: T,
    /// Reciprocal 1-norm condition number of `mu`.
    pub rcond: T,
    /// Max-norm residual of the solved linear system.
    pub residual: T,
    /// Every `rho_psi` entry lies in `[-EPS_NORM, 1 + EPS_NORM]`.
    pub physical: bool,
}

/// Whether a basis pair erases the pre-measurement diagonal.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Irreversibility<T> {
    pub irreversible: bool,
    /// `|det mu|`.
    pub det_abs: T,
}

/// `tau_m = sum_j mu_{mj} rho_j`.
pub fn project<T: Scalar>(rho_psi: &[T], pair: &BasisPair<T>) -> Result<Vec<T>> {
    if rho_psi.len() != pair.dim() {
        return Err(Error::DimensionMismatch { expected: pair.dim(), found: rho_psi.len() });
    }
    validate_distribution(rho_psi)?;
    Ok(overlap_matrix(pair).matrix().mul_vec(rho_psi))
}

pub fn is_irreversible<T: Scalar>(pair: &BasisPair<T>) -> Irreversibility<T> {
    let det_abs = overlap_matrix(pair).matrix().det().abs();
    Irreversibility { irreversible: det_abs <= T::EPS_DET, det_abs }
}

fn check_reversible<T: Scalar>(pair: &BasisPair<T>) -> Result<T> {
    let det = overlap_matrix(pair).matrix().det();
    if !(det.abs() > T::EPS_DET) {
        return Err(Error::SingularMeasurement { det: det.abs().as_f64() });
    }
    Ok(det)
}

/// Index of the unknown `X_{k,l}` in the flattened solution vector.
///
/// Diagonal unknowns `rho_k` come first, then the off-diagonals `rho^(phi)_{kl}`
/// in row-major order. For `n = 2` this is `(rho_1, rho_2, rho_12, rho_21)`.
pub fn unknown_index(n: usize, k: usize, l: usize) -> usize {
    if k == l {
        k
    } else {
        n + k * (n - 1) + if l < k { l } else { l - 1 }
    }
}

/// The `n^2 x n^2` system `A X = B`, rows indexed by `(m, j)` in row-major order,
/// with `A^{(m,j)}_{k,l} = delta_kj delta_lj G_mj - delta_mk (1 - delta_lm) G_lj`
/// and `B^{(m,j)} = G_mj tau_m`.
pub fn system_matrix<T: Scalar>(problem: &ReconstructionProblem<T>) -> (CMatrix<T>, Vec<C<T>>) {
    let n = problem.dim();
    let g = problem.pair.gram();
    let mut a = CMatrix::zeros(n * n, n * n);
    let mut b = vec![C::default(); n * n];
    for m in 0..n {
        for j in 0..n {
            let row = m * n + j;
            a[(row, unknown_index(n, j, j))] = g[(m, j)];
            for l in (0..n).filter(|&l| l != m) {
                a[(row, unknown_index(n, m, l))] = -g[(l, j)];
            }
            b[row] = g[(m, j)] * re(problem.tau[m]);
        }
    }
    (a, b)
}

fn physical<T: Scalar>(rho: &[T]) -> bool {
    rho.iter().all(|&x| x >= -T::EPS_NORM && x <= T::one() + T::EPS_NORM)
}

/// Solves the full `n^2` linear system for the diagonal and the coherences.
pub fn reconstruct_full<T: Scalar>(problem: &ReconstructionProblem<T>) -> Result<ReconstructionSolution<T>> {
    let det = check_reversible(&problem.pair)?;
    let n = problem.dim();
    let (a, b) = system_matrix(problem);
    let x = a.solve(&b).ok_or(Error::SingularMeasurement { det: det.abs().as_f64() })?;
    let ax = a.mul_vec(&x);
    let residual = ax.iter().zip(&b).fold(T::zero(), |m, (p, q)| m.max((p - q).norm()));
    let rho_psi: Vec<T> = (0..n).map(|k| x[unknown_index(n, k, k)].re).collect();
    let mut off = CMatrix::zeros(n, n);
    for k in 0..n {
        for l in (0..n).filter(|&l| l != k) {
            off[(k, l)] = x[unknown_index(n, k, l)];
        }
    }
    let mu = overlap_matrix(&problem.pair);
    Ok(ReconstructionSolution {
        physical: physical(&rho_psi),
        rho_psi,
        rho_phi_offdiag: off,
        det,
        rcond: rcond(mu.matrix()),
        residual,
    })
}

/// `rho^(psi) = mu^-1 tau`.
pub fn reconstruct_diagonal<T: Scalar>(problem: &ReconstructionProblem<T>) -> Result<Vec<T>> {
    let det = check_reversible(&problem.pair)?;
    overlap_matrix(&problem.pair)
        .matrix()
        .solve(&problem.tau)
        .ok_or(Error::SingularMeasurement { det: det.abs().as_f64() })
}

/// Fast path: the diagonal from `mu^-1 tau`, then each coherence directly as
/// `rho^(phi)_{mk} = sum_j G_mj conj(G_kj) rho_j`.
pub fn reconstruct_split<T: Scalar>(problem: &ReconstructionProblem<T>) -> Result<ReconstructionSolution<T>> {
    let rho_psi = reconstruct_diagonal(problem)?;
    let g = problem.pair.gram();
    let off = coherences(&g, &rho_psi);
    let mu = overlap_matrix(&problem.pair);
    let tau_back = mu.matrix().mul_vec(&rho_psi);
    let residual = tau_back.iter().zip(&problem.tau).fold(T::zero(), |m, (a, b)| m.max((*a - *b).abs()));
    Ok(ReconstructionSolution {
        physical: physical(&rho_psi),
        rho_psi,
        rho_phi_offdiag: off,
        det: mu.matrix().det(),
        rcond: rcond(mu.matrix()),
        residual,
    })
}

/// `<phi_m|rho|phi_k>` for `rho` diagonal in the pre basis, diagonal zeroed.
pub fn coherences<T: Scalar>(gram: &CMatrix<T>, rho_psi: &[T]) -> CMatrix<T> {
    let n = gram.nrows();
    Matrix::from_fn(n, n, |m, k| {
        if m == k {
            return C::default();
        }
        (0..n).map(|j| gram[(m, j)] * gram[(k, j)].conj() * re(rho_psi[j])).sum()
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hilbert::{rotated_pair, standard_basis};
    use std::f64::consts::{FRAC_PI_2, PI};

    #[test]
    fn project_examples() {
        let same = rotated_pair::<f64>(3, 0.0).unwrap();
        let rho = [0.2, 0.5, 0.3];
        let tau = project(&rho, &same).unwrap();
        for (a, b) in tau.iter().zip(rho) {
            assert!((a - b).abs() < 1e-15);
        }
        let theta = 1.2f64;
        let tau = project(&[1.0, 0.0], &rotated_pair(2, theta).unwrap()).unwrap();
        assert!((tau[0] - (theta / 2.0).cos().powi(2)).abs() < 1e-15);
        assert!((tau[1] - (theta / 2.0).sin().powi(2)).abs() < 1e-15);
        let tau = project(&[1.0 / 3.0; 3], &rotated_pair(3, 2.0f64).unwrap()).unwrap();
        assert!(tau.iter().all(|t| (t - 1.0 / 3.0).abs() < 1e-15));
        assert!(project(&[0.5, 0.6], &rotated_pair(2, 1.0).unwrap()).is_err());
    }

    #[test]
    fn system_matrix_matches_spin_half_layout() {
        let theta = 0.7f64;
        let pair = rotated_pair::<f64>(2, theta).unwrap();
        let problem = ReconstructionProblem::new(pair.clone(), vec![0.6, 0.4]).unwrap();
        let (a, b) = system_matrix(&problem);
        let g = pair.gram();
        let z = C::default();
        let expect = CMatrix::from_rows(&[
            [g[(0, 0)], z, -g[(1, 0)], z],
            [z, g[(0, 1)], -g[(1, 1)], z],
            [g[(1, 0)], z, z, -g[(0, 0)]],
            [z, g[(1, 1)], z, -g[(0, 1)]],
        ])
        .unwrap();
        assert_eq!(a, expect);
        let tb = [g[(0, 0)] * 0.6, g[(0, 1)] * 0.6, g[(1, 0)] * 0.4, g[(1, 1)] * 0.4];
        for (x, y) in b.iter().zip(tb) {
            assert!((x - y).norm() < 1e-16);
        }
    }

    #[test]
    fn spin_half_closed_form() {
        for theta in [0.3f64, 1.0, 1.4, 2.0, 2.8] {
            let (t1, t2) = (0.7, 0.3);
            let problem = ReconstructionProblem::new(rotated_pair(2, theta).unwrap(), vec![t1, t2]).unwrap();
            let sol = reconstruct_full(&problem).unwrap();
            let sec = 1.0 / theta.cos();
            assert!((sol.rho_psi[0] - ((t1 + t2) / 2.0 + (t1 - t2) / 2.0 * sec)).abs() < 1e-12);
            assert!((sol.rho_psi[1] - ((t1 + t2) / 2.0 - (t1 - t2) / 2.0 * sec)).abs() < 1e-12);
            let off = -(t1 - t2) / 2.0 * theta.tan();
            assert!((sol.rho_phi_offdiag[(0, 1)] - C::new(off, 0.0)).norm() < 1e-12);
            assert!((sol.rho_phi_offdiag[(1, 0)] - C::new(off, 0.0)).norm() < 1e-12);
            assert!(sol.residual < 1e-12);
        }
    }

    #[test]
    fn diagonal_examples() {
        let problem = ReconstructionProblem::new(rotated_pair(2, PI / 3.0).unwrap(), vec![0.75, 0.25]).unwrap();
        let rho = reconstruct_diagonal(&problem).unwrap();
        assert!((rho[0] - 1.0).abs() < 1e-14 && rho[1].abs() < 1e-14);

        let tau = vec![0.1, 0.6, 0.3];
        let problem = ReconstructionProblem::new(rotated_pair(3, 0.0).unwrap(), tau.clone()).unwrap();
        assert_eq!(reconstruct_diagonal(&problem).unwrap(), tau);
        let full = reconstruct_full(&problem).unwrap();
        assert!(full.rho_phi_offdiag.max_abs() < 1e-15);

        let problem = ReconstructionProblem::new(rotated_pair(2, FRAC_PI_2).unwrap(), vec![0.5, 0.5]).unwrap();
        assert!(matches!(reconstruct_diagonal(&problem), Err(Error::SingularMeasurement { .. })));
        assert!(matches!(reconstruct_full(&problem), Err(Error::SingularMeasurement { .. })));
    }

    #[test]
    fn irreversibility_examples() {
        let r = is_irreversible(&rotated_pair::<f64>(2, FRAC_PI_2).unwrap());
        assert!(r.irreversible && r.det_abs < 1e-15);
        let same = BasisPair::new(standard_basis::<f64>(3), standard_basis(3)).unwrap();
        assert_eq!(is_irreversible(&same), Irreversibility { irreversible: false, det_abs: 1.0 });
        // Discrete Fourier basis: every overlap is 1/3.
        let n = 3;
        let f: Vec<_> = (0..n)
            .map(|k| {
                let amps = (0..n)
                    .map(|j| C::from_polar(1.0 / 3f64.sqrt(), 2.0 * PI * (j * k) as f64 / 3.0))
                    .collect();
                crate::hilbert::StateVector::new(amps).unwrap()
            })
            .collect();
        let dft = BasisPair::new(standard_basis(3), f).unwrap();
        assert!(is_irreversible(&dft).irreversible);
    }

    #[test]
    fn unphysical_tau_is_flagged_not_clipped() {
        // tau far from the diagonal of mu(theta) forces rho outside the simplex.
        let problem = ReconstructionProblem::new(rotated_pair(2, 1.2).unwrap(), vec![1.0, 0.0]).unwrap();
        let sol = reconstruct_split(&problem).unwrap();
        assert!(!sol.physical);
        assert!(sol.rho_psi[0] > 1.0);
        assert!((sol.rho_psi.iter().sum::<f64>() - 1.0).abs() < 1e-12);
    }
}
