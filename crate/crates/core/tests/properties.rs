use num_complex::Complex64;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use wvexp_core::birkhoff::{
    chain_links_for_columns, combine, distance, is_unistochastic, permutation_corners, triangle_slack, Verdict,
};
use wvexp_core::hilbert::{HermitianOperator, MixedState, Side, StateVector};
use wvexp_core::linalg::rank;
use wvexp_core::random;
use wvexp_core::reconstruct::{project, reconstruct_full, reconstruct_split, ReconstructionProblem};
use wvexp_core::weakval::{
    expand, fractional_decomposition, mixed_weak_value, mixed_weak_value_by_trace, overlap_matrix,
    weak_value_by_trace, weak_value_table, WOperatorSet,
};
use wvexp_core::{BasisPair, BistochasticMatrix, CMatrix, PolytopePoint, RMatrix};

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn inner(a: &[Complex64], b: &[Complex64]) -> Complex64 {
    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn expansion_reassembles_operator(seed in any::<u64>(), n in 2usize..=5) {
        let mut r = rng(seed);
        let a = random::hermitian::<f64, _>(n, &mut r);
        let pair = random::admissible_pair(n, 0.05, &mut r);
        let table = weak_value_table(&a, &pair).unwrap();
        prop_assert!(expand(&table).max_abs_diff(a.matrix()) < 1e-10);
    }

    #[test]
    fn trace_route_matches_direct(seed in any::<u64>(), n in 2usize..=4) {
        let mut r = rng(seed);
        let a = random::hermitian::<f64, _>(n, &mut r);
        let pair = random::admissible_pair(n, 0.05, &mut r);
        let table = weak_value_table(&a, &pair).unwrap();
        let wset = WOperatorSet::new(&pair).unwrap();
        for l in 0..n {
            for j in 0..n {
                let t = weak_value_by_trace(&a, &wset, l, j).unwrap();
                prop_assert!((t - table.get(l, j)).norm() <= 1e-12 * table.get(l, j).norm().max(1.0));
            }
        }
    }

    #[test]
    fn weak_values_match_brute_force(seed in any::<u64>(), n in 2usize..=4) {
        let mut r = rng(seed);
        let a = random::hermitian::<f64, _>(n, &mut r);
        let pair = random::admissible_pair(n, 0.05, &mut r);
        let table = weak_value_table(&a, &pair).unwrap();
        for l in 0..n {
            for j in 0..n {
                let phi = pair.post()[l].amplitudes();
                let psi = pair.pre()[j].amplitudes();
                let a_psi: Vec<Complex64> =
                    (0..n).map(|i| (0..n).map(|k| a.matrix()[(i, k)] * psi[k]).sum()).collect();
                let expect = inner(phi, &a_psi) / inner(phi, psi);
                prop_assert!((expect - table.get(l, j)).norm() <= 1e-11 * expect.norm().max(1.0));
            }
        }
    }

    #[test]
    fn gauge_changes_nothing(seed in any::<u64>(), n in 2usize..=4) {
        let mut r = rng(seed);
        let a = random::hermitian::<f64, _>(n, &mut r);
        let pair = random::admissible_pair(n, 0.05, &mut r);
        let gauged = pair.gauge(&random::phases(n, &mut r), &random::phases(n, &mut r)).unwrap();
        let (t0, t1) = (weak_value_table(&a, &pair).unwrap(), weak_value_table(&a, &gauged).unwrap());
        prop_assert!(t0.values().max_abs_diff(t1.values()) < 1e-10);
        prop_assert!(overlap_matrix(&pair).matrix().max_abs_diff(overlap_matrix(&gauged).matrix()) < 1e-12);
        prop_assert!(expand(&t1).max_abs_diff(a.matrix()) < 1e-10);
    }

    #[test]
    fn orthogonality_of_w_operators(seed in any::<u64>(), n in 2usize..=3) {
        let mut r = rng(seed);
        let pair = random::admissible_pair::<f64, _>(n, 0.1, &mut r);
        let wset = WOperatorSet::new(&pair).unwrap();
        let mu = overlap_matrix(&pair);
        for k in 0..n {
            let phik = pair.post()[k].amplitudes();
            for ((l, j), w) in wset.iter() {
                for ((l2, j2), w2) in wset.iter() {
                    let m = w * &w2.adjoint();
                    let v: Vec<Complex64> = (0..n).map(|i| (0..n).map(|c| m[(i, c)] * phik[c]).sum()).collect();
                    let got = inner(phik, &v);
                    let expect = if j2 == j && l == k && l2 == k { 1.0 / mu.get(k, j) } else { 0.0 };
                    prop_assert!((got - expect).norm() < 1e-10 * expect.max(1.0), "{:?}", (k, l, j, l2, j2));
                }
            }
        }
    }

    #[test]
    fn eigenbasis_gives_constant_columns_and_rows(seed in any::<u64>(), n in 2usize..=4) {
        let mut r = rng(seed);
        let pair = random::admissible_pair::<f64, _>(n, 0.05, &mut r);
        let eig: Vec<f64> = (0..n).map(|_| r.random_range(-2.0..2.0)).collect();
        let build = |vs: &[StateVector<f64>]| {
            let mut m = CMatrix::zeros(n, n);
            for (v, &e) in vs.iter().zip(&eig) {
                let a = v.amplitudes();
                m = &m + &CMatrix::from_fn(n, n, |i, k| a[i] * a[k].conj() * e);
            }
            HermitianOperator::new(m).unwrap()
        };
        let pre_diag = weak_value_table(&build(pair.pre()), &pair).unwrap();
        let post_diag = weak_value_table(&build(pair.post()), &pair).unwrap();
        for l in 0..n {
            for j in 0..n {
                prop_assert!((pre_diag.get(l, j) - eig[j]).norm() < 1e-10);
                prop_assert!((post_diag.get(l, j) - eig[l]).norm() < 1e-10);
            }
        }
    }

    #[test]
    fn real_data_gives_real_weak_values(seed in any::<u64>(), n in 2usize..=4) {
        let mut r = rng(seed);
        let real_basis = |r: &mut ChaCha8Rng| -> Vec<StateVector<f64>> {
            let u = random::unitary::<f64, _>(n, r);
            // Orthonormal real basis from the symmetric part's eigenvectors.
            let h = RMatrix::from_fn(n, n, |i, k| (u[(i, k)] + u[(k, i)]).re);
            let (_, vecs) = wvexp_core::linalg::symmetric_eigen(&h);
            (0..n).map(|c| StateVector::from_real(&(0..n).map(|i| vecs[(i, c)]).collect::<Vec<_>>()).unwrap()).collect()
        };
        let pair = BasisPair::new(real_basis(&mut r), real_basis(&mut r)).unwrap();
        prop_assume!(pair.min_overlap().2 > 0.05);
        let sym = RMatrix::from_fn(n, n, |i, k| ((i * 7 + k * 7 + (i * k) % 5) as f64 * 0.3).sin());
        let a = HermitianOperator::new(CMatrix::from_fn(n, n, |i, k| Complex64::new(sym[(i, k)] + sym[(k, i)], 0.0))).unwrap();
        let t = weak_value_table(&a, &pair).unwrap();
        prop_assert!(t.values().as_slice().iter().all(|z| z.im.abs() < 1e-10 * z.norm().max(1.0)));
    }

    #[test]
    fn mixed_weak_values_agree(seed in any::<u64>(), n in 2usize..=4) {
        let mut r = rng(seed);
        let a = random::hermitian::<f64, _>(n, &mut r);
        let pair = random::admissible_pair(n, 0.05, &mut r);
        let p = MixedState::new(Side::Pre, random::distribution(n, &mut r)).unwrap();
        let q = MixedState::new(Side::Post, random::distribution(n, &mut r)).unwrap();
        let direct = mixed_weak_value(&a, &pair, &p, &q).unwrap();
        let trace = mixed_weak_value_by_trace(&a, &pair, &p, &q).unwrap();
        prop_assert!((direct - trace).norm() < 1e-10 * direct.norm().max(1.0));
        let j = r.random_range(0..n);
        let parts = fractional_decomposition(&a, &pair, j, Side::Pre).unwrap();
        let psi = &pair.pre()[j];
        let total: Complex64 = parts.iter().sum();
        prop_assert!((total - a.expectation(psi).unwrap()).norm() < 1e-10);
    }

    #[test]
    fn reconstruction_roundtrip(seed in any::<u64>(), n in 2usize..=4) {
        let mut r = rng(seed);
        let pair = random::admissible_pair::<f64, _>(n, 0.02, &mut r);
        prop_assume!(overlap_matrix(&pair).matrix().det().abs() > 1e-6);
        let rho = random::distribution(n, &mut r);
        let tau = project(&rho, &pair).unwrap();
        let problem = ReconstructionProblem::new(pair.clone(), tau).unwrap();
        let full = reconstruct_full(&problem).unwrap();
        let split = reconstruct_split(&problem).unwrap();
        for k in 0..n {
            prop_assert!((full.rho_psi[k] - rho[k]).abs() < 1e-8);
            prop_assert!((split.rho_psi[k] - rho[k]).abs() < 1e-8);
        }
        // Coherences against <phi_m| rho |phi_k> built from the vectors.
        for m in 0..n {
            for k in (0..n).filter(|&k| k != m) {
                let expect: Complex64 = (0..n)
                    .map(|j| {
                        let psi = pair.pre()[j].amplitudes();
                        inner(pair.post()[m].amplitudes(), psi) * inner(psi, pair.post()[k].amplitudes()) * rho[j]
                    })
                    .sum();
                prop_assert!((full.rho_phi_offdiag[(m, k)] - expect).norm() < 1e-8);
                prop_assert!((split.rho_phi_offdiag[(m, k)] - expect).norm() < 1e-8);
            }
        }
    }

    #[test]
    fn overlap_matrices_are_unistochastic(seed in any::<u64>(), n in 2usize..=4) {
        let mut r = rng(seed);
        let pair = BasisPair::new(random::basis::<f64, _>(n, &mut r), random::basis(n, &mut r)).unwrap();
        let mu = BistochasticMatrix::from(overlap_matrix(&pair));
        let cert = is_unistochastic(&mu);
        prop_assert_eq!(cert.verdict, Verdict::Yes);
    }

    #[test]
    fn triangle_verdict_ignores_column_pair(seed in any::<u64>()) {
        let mut r = rng(seed);
        let corners = permutation_corners(3).unwrap();
        let mu: BistochasticMatrix<f64> = combine(&PolytopePoint::new(random::distribution(6, &mut r)).unwrap(), &corners).unwrap();
        let verdicts: Vec<bool> = [(0, 1), (0, 2), (1, 2)]
            .iter()
            .map(|&(a, b)| triangle_slack(chain_links_for_columns(&mu, a, b).unwrap()))
            .map(|s| s >= 0.0)
            .collect();
        let margin = [(0, 1), (0, 2), (1, 2)]
            .iter()
            .map(|&(a, b)| triangle_slack(chain_links_for_columns(&mu, a, b).unwrap()).abs())
            .fold(f64::INFINITY, f64::min);
        prop_assume!(margin > 1e-9);
        prop_assert!(verdicts.iter().all(|&v| v == verdicts[0]));
    }

    #[test]
    fn distance_is_a_metric(seed in any::<u64>(), n in 2usize..=4) {
        let mut r = rng(seed);
        let corners = permutation_corners(n).unwrap();
        let mut pick = || combine(&PolytopePoint::new(random::distribution(corners.len(), &mut r)).unwrap(), &corners).unwrap();
        let (a, b, c) = (pick(), pick(), pick());
        let d = |x: &BistochasticMatrix<f64>, y: &BistochasticMatrix<f64>| distance(x, y).unwrap();
        prop_assert!(d(&a, &b) >= 0.0);
        prop_assert!((d(&a, &b) - d(&b, &a)).abs() < 1e-12);
        prop_assert!(d(&a, &c) <= d(&a, &b) + d(&b, &c) + 1e-12);
        prop_assert!(d(&a, &a) < 1e-12);
    }
}

#[test]
fn sampled_polytope_has_dimension_n_minus_one_squared() {
    let mut r = rng(11);
    for n in [2usize, 3] {
        let corners = permutation_corners(n).unwrap();
        let samples: Vec<BistochasticMatrix<f64>> = (0..60)
            .map(|_| combine(&PolytopePoint::new(random::distribution(corners.len(), &mut r)).unwrap(), &corners).unwrap())
            .collect();
        let nn = n * n;
        let mean: Vec<f64> =
            (0..nn).map(|k| samples.iter().map(|s| s.matrix().as_slice()[k]).sum::<f64>() / samples.len() as f64).collect();
        let centered = RMatrix::from_fn(samples.len(), nn, |i, k| samples[i].matrix().as_slice()[k] - mean[k]);
        assert_eq!(rank(&centered, 1e-9), (n - 1) * (n - 1));
    }
}

#[test]
fn corner_edge_census() {
    let corners: Vec<BistochasticMatrix<f64>> =
        permutation_corners(3).unwrap().iter().map(|c| c.to_bistochastic()).collect();
    let (mut long, mut short) = (0, 0);
    for i in 0..6 {
        for j in i + 1..6 {
            let d = distance(&corners[i], &corners[j]).unwrap();
            if (d - 6f64.sqrt()).abs() < 1e-12 {
                long += 1;
            } else if (d - 2.0).abs() < 1e-12 {
                short += 1;
            }
        }
    }
    assert_eq!((long, short), (6, 9));
}
