use num_complex::Complex;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::BistochasticMatrix;
use crate::error::{Error, Result};
use crate::linalg::{unitary_polar, CMatrix, RMatrix};
use crate::scalar::{re, Scalar, C};

/// Outcome of a unistochasticity test.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Verdict {
    Yes,
    No,
    /// No decision procedure applies and the numerical search failed.
    Unknown,
}

#[derive(Clone, Debug)]
pub struct UnistochasticCertificate<T> {
    pub verdict: Verdict,
    /// `(L_1, L_2, L_3)` with `L_i = sqrt(mu_i1 mu_i2)`; present for `N = 3`.
    pub chain_links: Option<[T; 3]>,
    /// A unitary `G` with `|G_lj|^2 = mu_lj`, when one was constructed.
    pub realizing_unitary: Option<CMatrix<T>>,
}

/// `L_i = sqrt(mu_ia mu_ib)` for a 3x3 matrix and columns `a != b`.
pub fn chain_links_for_columns<T: Scalar>(mu: &BistochasticMatrix<T>, a: usize, b: usize) -> Result<[T; 3]> {
    if mu.dim() != 3 {
        return Err(Error::UnsupportedDimension(mu.dim()));
    }
    if a >= 3 || b >= 3 || a == b {
        return Err(Error::InvalidInput(format!("column pair ({a}, {b})")));
    }
    Ok([0, 1, 2].map(|i| (mu.get(i, a) * mu.get(i, b)).sqrt()))
}

/// Chain links from the first two columns.
pub fn chain_links<T: Scalar>(mu: &BistochasticMatrix<T>) -> Result<[T; 3]> {
    chain_links_for_columns(mu, 0, 1)
}

/// `min(L2 + L3 - L1, L1 + L3 - L2, L1 + L2 - L3)`.
///
/// Nonnegative exactly when `|L2 - L3| <= L1 <= L2 + L3`; zero on the boundary
/// where the triangle closes flat.
pub fn triangle_slack<T: Scalar>(links: [T; 3]) -> T {
    let [l1, l2, l3] = links;
    (l2 + l3 - l1).min(l1 + l3 - l2).min(l1 + l2 - l3)
}

/// Decides unistochasticity for `N <= 3`; for larger `N` tries the numerical
/// search and reports [`Verdict::Unknown`] if it fails.
pub fn is_unistochastic<T: Scalar>(mu: &BistochasticMatrix<T>) -> UnistochasticCertificate<T> {
    match mu.dim() {
        1 | 2 => UnistochasticCertificate {
            verdict: Verdict::Yes,
            chain_links: None,
            realizing_unitary: realize_unitary(mu).ok(),
        },
        3 => {
            let links = chain_links(mu).expect("3x3");
            if triangle_slack(links) >= -T::EPS_SUM {
                UnistochasticCertificate {
                    verdict: Verdict::Yes,
                    chain_links: Some(links),
                    realizing_unitary: realize_unitary(mu).ok(),
                }
            } else {
                UnistochasticCertificate { verdict: Verdict::No, chain_links: Some(links), realizing_unitary: None }
            }
        }
        _ => match search_unitary(mu, &SearchOptions::default()) {
            Ok(g) => UnistochasticCertificate { verdict: Verdict::Yes, chain_links: None, realizing_unitary: Some(g) },
            Err(_) => UnistochasticCertificate { verdict: Verdict::Unknown, chain_links: None, realizing_unitary: None },
        },
    }
}

fn verify_tolerance<T: Scalar>() -> T {
    T::EPS_NORM * T::lit(10.0)
}

fn verify<T: Scalar>(mu: &BistochasticMatrix<T>, g: CMatrix<T>) -> Result<CMatrix<T>> {
    let n = mu.dim();
    let mut moduli = T::zero();
    for i in 0..n {
        for j in 0..n {
            moduli = moduli.max((g[(i, j)].norm_sqr() - mu.get(i, j)).abs());
        }
    }
    let residual = g.unitarity_defect().max(moduli);
    if residual <= verify_tolerance() {
        Ok(g)
    } else {
        Err(Error::SearchFailed { iterations: 0, residual: residual.as_f64() })
    }
}

/// A unitary `G` with `|G_lj|^2 = mu_lj`.
///
/// `N = 2` uses the rotation `[[sqrt mu_11, sqrt mu_12], [-sqrt mu_21, sqrt mu_22]]`.
/// `N = 3` fixes the first row and column real and nonnegative, picks the
/// phases of `G_22` and `G_32` so that the first two columns are orthogonal
/// (closing the triangle of chain links), and completes the third column by
/// the conjugated cross product. Larger `N` falls back to [`search_unitary`].
pub fn realize_unitary<T: Scalar>(mu: &BistochasticMatrix<T>) -> Result<CMatrix<T>> {
    let n = mu.dim();
    let r = mu.matrix().map(|x| x.sqrt());
    match n {
        1 => verify(mu, CMatrix::identity(1)),
        2 => {
            let g = CMatrix::from_rows(&[[re(r[(0, 0)]), re(r[(0, 1)])], [re(-r[(1, 0)]), re(r[(1, 1)])]])?;
            verify(mu, g)
        }
        3 => {
            let links = chain_links(mu)?;
            if triangle_slack(links) < -T::EPS_SUM {
                return Err(Error::NotUnistochastic { links: links.map(Scalar::as_f64) });
            }
            let (alpha, beta) = close_triangle(links);
            let col1 = [re(r[(0, 0)]), re(r[(1, 0)]), re(r[(2, 0)])];
            let col2 = [
                re(r[(0, 1)]),
                Complex::from_polar(r[(1, 1)], alpha),
                Complex::from_polar(r[(2, 1)], beta),
            ];
            let cross = [
                col1[1] * col2[2] - col1[2] * col2[1],
                col1[2] * col2[0] - col1[0] * col2[2],
                col1[0] * col2[1] - col1[1] * col2[0],
            ];
            let mut col3 = cross.map(|z| z.conj());
            let m = col3[0].norm();
            if m > T::zero() {
                let phase = col3[0].conj() / m;
                col3 = col3.map(|z| z * phase);
            }
            let g = CMatrix::from_columns(&[col1, col2, col3])?;
            verify(mu, g)
        }
        _ => search_unitary(mu, &SearchOptions::default()),
    }
}

/// Phases `(alpha, beta)` with `L1 + L2 e^{i alpha} + L3 e^{i beta} = 0`.
fn close_triangle<T: Scalar>([l1, l2, l3]: [T; 3]) -> (T, T) {
    let tiny = T::min_positive_value().sqrt();
    let pi = T::PI();
    match (l1 > tiny, l2 > tiny, l3 > tiny) {
        (_, false, false) => (T::zero(), T::zero()),
        (_, false, true) => (T::zero(), pi),
        (_, true, false) => (pi, T::zero()),
        (false, true, true) => (T::zero(), pi),
        (true, true, true) => {
            let two = T::lit(2.0);
            let cos = ((l3 * l3 - l1 * l1 - l2 * l2) / (two * l1 * l2)).max(-T::one()).min(T::one());
            let alpha = cos.acos();
            let b = Complex::from_polar(l2, alpha);
            let c = -(re(l1) + b);
            (alpha, c.arg())
        }
    }
}

/// Settings for [`search_unitary`].
#[derive(Clone, Debug, PartialEq)]
pub struct SearchOptions {
    /// Independent random starts.
    pub restarts: usize,
    /// Projection steps per start.
    pub max_iterations: usize,
    /// Target for `max |(G^† G - I)_ij|`.
    pub tolerance: f64,
    /// A start is abandoned when its defect shrinks by less than this factor
    /// over `stall_window` steps.
    pub stall_ratio: f64,
    pub stall_window: usize,
    /// Defect below which the phase polish is attempted.
    pub polish_below: f64,
    pub seed: u64,
}

impl Default for SearchOptions {
    fn default() -> Self {
        Self {
            restarts: 24,
            max_iterations: 4000,
            tolerance: 1e-12,
            stall_ratio: 0.99,
            stall_window: 100,
            polish_below: 1e-2,
            seed: 0x005e_ed0f_b14c,
        }
    }
}

fn with_moduli<T: Scalar>(r: &RMatrix<T>, phases: &[T]) -> CMatrix<T> {
    let n = r.nrows();
    CMatrix::from_fn(n, n, |i, j| Complex::from_polar(r[(i, j)], phases[i * n + j]))
}

/// Column inner products `f_ab = sum_i r_ia r_ib e^{i(phi_ib - phi_ia)}` for
/// `a < b`, as interleaved real and imaginary parts.
fn column_overlaps<T: Scalar>(r: &RMatrix<T>, phases: &[T]) -> Vec<T> {
    let n = r.nrows();
    let mut f = Vec::with_capacity(n * (n - 1));
    for a in 0..n {
        for b in a + 1..n {
            let z: C<T> = (0..n)
                .map(|i| Complex::from_polar(r[(i, a)] * r[(i, b)], phases[i * n + b] - phases[i * n + a]))
                .sum();
            f.push(z.re);
            f.push(z.im);
        }
    }
    f
}

/// Levenberg-Marquardt on the entry phases with the moduli held fixed,
/// driving the off-diagonal of `G^† G` to zero.
fn polish<T: Scalar>(r: &RMatrix<T>, start: &CMatrix<T>, tol: T) -> Option<CMatrix<T>> {
    let n = r.nrows();
    let p = n * n;
    let mut phases: Vec<T> = start.as_slice().iter().map(|z| z.arg()).collect();
    let cost = |f: &[T]| f.iter().map(|&x| x * x).sum::<T>();
    let worst = |f: &[T]| f.iter().fold(T::zero(), |m, &x| m.max(x.abs()));
    let mut f = column_overlaps(r, &phases);
    let mut lambda = T::lit(1e-3);
    for _ in 0..60 {
        if worst(&f) <= tol / T::lit(2.0) {
            return Some(with_moduli(r, &phases));
        }
        let m = f.len();
        let mut jac = RMatrix::zeros(m, p);
        let mut row = 0;
        for a in 0..n {
            for b in a + 1..n {
                for i in 0..n {
                    let t = Complex::from_polar(r[(i, a)] * r[(i, b)], phases[i * n + b] - phases[i * n + a]);
                    // d f_ab / d phi_ib = i t, d f_ab / d phi_ia = -i t.
                    jac[(row, i * n + b)] = jac[(row, i * n + b)] - t.im;
                    jac[(row + 1, i * n + b)] = jac[(row + 1, i * n + b)] + t.re;
                    jac[(row, i * n + a)] = jac[(row, i * n + a)] + t.im;
                    jac[(row + 1, i * n + a)] = jac[(row + 1, i * n + a)] - t.re;
                }
                row += 2;
            }
        }
        let jt = jac.transpose();
        let jtj = &jt * &jac;
        let g = jt.mul_vec(&f);
        let c0 = cost(&f);
        let mut improved = false;
        for _ in 0..12 {
            let damped = RMatrix::from_fn(p, p, |i, k| if i == k { jtj[(i, k)] + lambda } else { jtj[(i, k)] });
            let step = damped.solve(&g.iter().map(|&x| -x).collect::<Vec<_>>())?;
            let trial: Vec<T> = phases.iter().zip(&step).map(|(&a, &d)| a + d).collect();
            let ft = column_overlaps(r, &trial);
            if cost(&ft) < c0 {
                phases = trial;
                f = ft;
                lambda = (lambda / T::lit(3.0)).max(T::lit(1e-15));
                improved = true;
                break;
            }
            lambda = lambda * T::lit(4.0);
        }
        if !improved {
            break;
        }
    }
    (worst(&f) <= tol / T::lit(2.0)).then(|| with_moduli(r, &phases))
}

/// Alternating projections between "moduli equal `sqrt mu`" and "unitary",
/// finished by a phase polish.
///
/// Each projection step takes the unitary polar factor of the current matrix
/// and reimposes the prescribed moduli, keeping its phases. Once the defect is
/// small, Levenberg-Marquardt on the phases converges the rest of the way.
/// Success returns a verified unitary; failure after all restarts is
/// inconclusive.
pub fn search_unitary<T: Scalar>(mu: &BistochasticMatrix<T>, options: &SearchOptions) -> Result<CMatrix<T>> {
    let n = mu.dim();
    let r = mu.matrix().map(|x| x.sqrt());
    let tol = T::lit(options.tolerance).max(T::epsilon() * T::lit(100.0));
    let polish_below = T::lit(options.polish_below);
    let mut rng = ChaCha8Rng::seed_from_u64(options.seed);
    let mut total = 0;
    let mut best = T::infinity();
    let impose = |u: &CMatrix<T>| -> CMatrix<T> {
        CMatrix::from_fn(n, n, |i, j| {
            let z = u[(i, j)];
            let m = z.norm();
            if m > T::zero() {
                z * (r[(i, j)] / m)
            } else {
                re(r[(i, j)])
            }
        })
    };
    for _ in 0..options.restarts.max(1) {
        let mut x: CMatrix<T> = CMatrix::from_fn(n, n, |i, j| {
            Complex::from_polar(r[(i, j)], T::lit(rng.random::<f64>() * std::f64::consts::TAU))
        });
        let mut checkpoint = T::infinity();
        let mut polished_at = T::infinity();
        for it in 0..options.max_iterations {
            total += 1;
            let defect = x.unitarity_defect();
            best = best.min(defect);
            if defect <= tol {
                return verify(mu, x);
            }
            // Polish whenever the defect has dropped tenfold since the last try.
            if defect <= polish_below && defect * T::lit(10.0) <= polished_at {
                polished_at = defect;
                if let Some(g) = polish(&r, &x, tol) {
                    if g.unitarity_defect() <= tol {
                        return verify(mu, g);
                    }
                }
            }
            if it % options.stall_window.max(1) == 0 {
                if defect > checkpoint * T::lit(options.stall_ratio) {
                    break;
                }
                checkpoint = defect;
            }
            match unitary_polar(&x) {
                Some(u) => x = impose(&u),
                None => break,
            }
        }
    }
    Err(Error::SearchFailed { iterations: total, residual: best.as_f64() })
}

impl<T: Scalar> UnistochasticCertificate<T> {
    pub fn is_yes(&self) -> bool {
        self.verdict == Verdict::Yes
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::birkhoff::{combine, permutation_corners, PolytopePoint};
    use crate::linalg::RMatrix;

    fn check_realization(mu: &BistochasticMatrix<f64>, g: &CMatrix<f64>) {
        assert!(g.unitarity_defect() < 1e-9);
        for i in 0..mu.dim() {
            for j in 0..mu.dim() {
                assert!((g[(i, j)].norm_sqr() - mu.get(i, j)).abs() < 1e-9);
            }
        }
    }

    #[test]
    fn center_is_unistochastic_with_fourier_moduli() {
        let center = BistochasticMatrix::<f64>::center(3);
        let cert = is_unistochastic(&center);
        assert_eq!(cert.verdict, Verdict::Yes);
        let links = cert.chain_links.unwrap();
        assert!(links.iter().all(|l| (l - 1.0 / 3.0).abs() < 1e-15));
        let g = cert.realizing_unitary.unwrap();
        check_realization(&center, &g);
        // Equilateral triangle of links: the phases are cube roots of unity.
        let ph = (g[(1, 1)] / g[(1, 1)].norm()).arg().abs();
        assert!((ph - 2.0 * std::f64::consts::PI / 3.0).abs() < 1e-12);
    }

    #[test]
    fn permutations_are_unistochastic() {
        for n in 2..=4 {
            for p in permutation_corners(n).unwrap() {
                let mu = p.to_bistochastic::<f64>();
                let cert = is_unistochastic(&mu);
                assert_eq!(cert.verdict, Verdict::Yes, "{:?}", p.perm());
                check_realization(&mu, cert.realizing_unitary.as_ref().unwrap());
            }
        }
    }

    #[test]
    fn half_p3_plus_p4_is_not_unistochastic() {
        let c3 = permutation_corners(3).unwrap();
        let mu = combine(&PolytopePoint::new(vec![0.0, 0.0, 0.0, 0.5, 0.5, 0.0]).unwrap(), &c3).unwrap();
        let expect = RMatrix::from_rows(&[[0.0, 0.5, 0.5], [0.5, 0.0, 0.5], [0.5, 0.5, 0.0]]).unwrap();
        assert_eq!(mu.matrix(), &expect);
        let cert = is_unistochastic(&mu);
        assert_eq!(cert.verdict, Verdict::No);
        assert_eq!(cert.chain_links.unwrap(), [0.0, 0.0, 0.5]);
        assert!(matches!(realize_unitary(&mu), Err(Error::NotUnistochastic { .. })));
        let quick = SearchOptions { restarts: 4, max_iterations: 400, ..Default::default() };
        assert!(matches!(search_unitary(&mu, &quick), Err(Error::SearchFailed { .. })));
    }

    #[test]
    fn two_by_two_rotation() {
        let theta = 1.1f64;
        let mu = BistochasticMatrix::two_by_two(theta);
        let g = realize_unitary(&mu).unwrap();
        let (c, s) = ((theta / 2.0).cos(), (theta / 2.0).sin());
        let expect = CMatrix::from_rows(&[[re(c), re(s)], [re(-s), re(c)]]).unwrap();
        assert!(g.max_abs_diff(&expect) < 1e-15);
        assert_eq!(realize_unitary(&BistochasticMatrix::<f64>::identity(2)).unwrap(), CMatrix::identity(2));
    }

    #[test]
    fn boundary_matrix_realizes_as_block() {
        // 1/2 (P_1 + P_3): chain links (1/2, 0, 1/2), the triangle closes flat.
        let mu = BistochasticMatrix::from_rows(&[[0.5, 0.5, 0.0], [0.0, 0.0, 1.0], [0.5, 0.5, 0.0]]).unwrap();
        let cert = is_unistochastic(&mu);
        assert_eq!(cert.verdict, Verdict::Yes);
        assert_eq!(triangle_slack(cert.chain_links.unwrap()), 0.0);
        check_realization(&mu, cert.realizing_unitary.as_ref().unwrap());
    }

    #[test]
    fn search_finds_unitaries_for_overlap_matrices() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for n in [3, 4] {
            let u = crate::random::unitary::<f64, _>(n, &mut rng);
            let mu = BistochasticMatrix::new(u.map(|z| z.norm_sqr())).unwrap();
            let g = search_unitary(&mu, &SearchOptions::default()).unwrap();
            check_realization(&mu, &g);
            assert_eq!(is_unistochastic(&mu).verdict, Verdict::Yes);
        }
    }

    #[test]
    fn links_need_three_by_three() {
        assert!(chain_links(&BistochasticMatrix::<f64>::identity(2)).is_err());
        assert!(chain_links_for_columns(&BistochasticMatrix::<f64>::identity(3), 1, 1).is_err());
    }
}
