//! Weak values, W-operators and the weak-value expansion of Hermitian
//! operators over a pre/post-selection basis pair.
//!
//! For bases `{psi_j}` and `{phi_l}` with no vanishing overlap,
//!
//! ```text
//! (A)_{l,j} = <phi_l|A|psi_j> / <phi_l|psi_j>
//! W_{l,j}   = |phi_l><psi_j| / <psi_j|phi_l>
//! mu_{l,j}  = |<phi_l|psi_j>|^2
//! A         = sum_{l,j} (A)_{l,j} W_{l,j} mu_{l,j}
//! ```
//!
//! Every quantity above is invariant under per-vector phase changes of
//! either basis.

use crate::error::{Error, Result};
use crate::hilbert::{BasisPair, HermitianOperator, MixedState, Side};
use crate::linalg::{outer, CMatrix, RMatrix};
use crate::scalar::{re, Scalar, C};

fn checked_overlap<T: Scalar>(pair: &BasisPair<T>, l: usize, j: usize) -> Result<C<T>> {
    let g = pair.overlap(l, j)?;
    let modulus = g.norm();
    if !(modulus > T::EPS_OVERLAP) {
        return Err(Error::OverlapTooSmall { l, j, modulus: modulus.as_f64() });
    }
    Ok(g)
}

fn check_dim<T: Scalar>(a: &HermitianOperator<T>, pair: &BasisPair<T>) -> Result<()> {
    if a.dim() != pair.dim() {
        return Err(Error::DimensionMismatch { expected: pair.dim(), found: a.dim() });
    }
    Ok(())
}

/// `(A)_{l,j} = <phi_l|A|psi_j> / <phi_l|psi_j>`.
pub fn weak_value<T: Scalar>(a: &HermitianOperator<T>, pair: &BasisPair<T>, l: usize, j: usize) -> Result<C<T>> {
    check_dim(a, pair)?;
    let g = checked_overlap(pair, l, j)?;
    Ok(a.matrix_element(&pair.post()[l], &pair.pre()[j])? / g)
}

/// `W_{l,j} = |phi_l><psi_j| / <psi_j|phi_l>`; rank one with unit trace.
pub fn w_operator<T: Scalar>(pair: &BasisPair<T>, l: usize, j: usize) -> Result<CMatrix<T>> {
    let g = checked_overlap(pair, l, j)?;
    let m = outer(pair.post()[l].amplitudes(), pair.pre()[j].amplitudes());
    Ok(m.scale(g.conj().inv()))
}

/// The `n^2` W-operators of an admissible pair.
#[derive(Clone, Debug)]
pub struct WOperatorSet<T> {
    ops: Vec<CMatrix<T>>,
    pair: BasisPair<T>,
}

impl<T: Scalar> WOperatorSet<T> {
    pub fn new(pair: &BasisPair<T>) -> Result<Self> {
        let n = pair.dim();
        let mut ops = Vec::with_capacity(n * n);
        for l in 0..n {
            for j in 0..n {
                ops.push(w_operator(pair, l, j)?);
            }
        }
        Ok(Self { ops, pair: pair.clone() })
    }

    pub fn dim(&self) -> usize {
        self.pair.dim()
    }

    pub fn basis_pair(&self) -> &BasisPair<T> {
        &self.pair
    }

    /// `W_{l,j}`.
    pub fn get(&self, l: usize, j: usize) -> &CMatrix<T> {
        let n = self.dim();
        assert!(l < n && j < n, "W-operator index ({l}, {j}) out of range for n = {n}");
        &self.ops[l * n + j]
    }

    /// Iterates `((l, j), W_{l,j})` in row-major order.
    pub fn iter(&self) -> impl Iterator<Item = ((usize, usize), &CMatrix<T>)> {
        let n = self.dim();
        self.ops.iter().enumerate().map(move |(k, w)| ((k / n, k % n), w))
    }
}

/// `mu_{l,j} = |<phi_l|psi_j>|^2`; bistochastic by construction.
#[derive(Clone, Debug, PartialEq)]
pub struct OverlapMatrix<T> {
    mu: RMatrix<T>,
}

impl<T: Scalar> OverlapMatrix<T> {
    pub fn dim(&self) -> usize {
        self.mu.nrows()
    }

    pub fn get(&self, l: usize, j: usize) -> T {
        self.mu[(l, j)]
    }

    pub fn matrix(&self) -> &RMatrix<T> {
        &self.mu
    }

    pub fn into_matrix(self) -> RMatrix<T> {
        self.mu
    }

    /// Largest deviation of any row or column sum from one.
    pub fn stochastic_defect(&self) -> T {
        stochastic_defect(&self.mu)
    }
}

pub(crate) fn stochastic_defect<T: Scalar>(m: &RMatrix<T>) -> T {
    let n = m.nrows();
    let mut worst = T::zero();
    for k in 0..n {
        let row: T = (0..m.ncols()).map(|j| m[(k, j)]).sum();
        worst = worst.max((row - T::one()).abs());
    }
    for k in 0..m.ncols() {
        let col: T = (0..n).map(|i| m[(i, k)]).sum();
        worst = worst.max((col - T::one()).abs());
    }
    worst
}

/// Overlap (weight) matrix of any valid pair, admissible or not.
pub fn overlap_matrix<T: Scalar>(pair: &BasisPair<T>) -> OverlapMatrix<T> {
    OverlapMatrix { mu: pair.gram().map(|g| g.norm_sqr()) }
}

/// The complete `n x n` set of weak values of one operator.
#[derive(Clone, Debug)]
pub struct WeakValueTable<T> {
    values: CMatrix<T>,
    operator: HermitianOperator<T>,
    pair: BasisPair<T>,
}

impl<T: Scalar> WeakValueTable<T> {
    pub fn dim(&self) -> usize {
        self.values.nrows()
    }

    /// `(A)_{l,j}`.
    pub fn get(&self, l: usize, j: usize) -> C<T> {
        self.values[(l, j)]
    }

    pub fn values(&self) -> &CMatrix<T> {
        &self.values
    }

    pub fn operator(&self) -> &HermitianOperator<T> {
        &self.operator
    }

    pub fn basis_pair(&self) -> &BasisPair<T> {
        &self.pair
    }
}

/// All `n^2` weak values. Fails on the first inadmissible `(l, j)`.
pub fn weak_value_table<T: Scalar>(a: &HermitianOperator<T>, pair: &BasisPair<T>) -> Result<WeakValueTable<T>> {
    check_dim(a, pair)?;
    let n = pair.dim();
    let mut values = CMatrix::zeros(n, n);
    for l in 0..n {
        for j in 0..n {
            values[(l, j)] = weak_value(a, pair, l, j)?;
        }
    }
    Ok(WeakValueTable { values, operator: a.clone(), pair: pair.clone() })
}

/// Reassembles `sum_{l,j} (A)_{l,j} W_{l,j} mu_{l,j}`.
///
/// The result equals the table's operator up to rounding; it is returned as a
/// plain matrix so callers can measure that residual.
pub fn expand<T: Scalar>(table: &WeakValueTable<T>) -> CMatrix<T> {
    let wset = WOperatorSet::new(&table.pair).expect("a built table implies an admissible pair");
    let mu = overlap_matrix(&table.pair);
    expand_with(&table.values, &wset, &mu)
}

/// `sum_{l,j} c_{l,j} W_{l,j} mu_{l,j}` for arbitrary coefficients.
pub fn expand_with<T: Scalar>(coefficients: &CMatrix<T>, wset: &WOperatorSet<T>, mu: &OverlapMatrix<T>) -> CMatrix<T> {
    let n = wset.dim();
    let mut out = CMatrix::zeros(n, n);
    for ((l, j), w) in wset.iter() {
        out = &out + &w.scale(coefficients[(l, j)] * re(mu.get(l, j)));
    }
    out
}

/// Weak value by the trace formula, `tr[A W_{l,j}^†]`.
///
/// The adjoint matters: `tr[W_{l,j} A]` is the complex conjugate of the weak
/// value and only agrees with it when the weak value is real.
pub fn weak_value_by_trace<T: Scalar>(a: &HermitianOperator<T>, wset: &WOperatorSet<T>, l: usize, j: usize) -> Result<C<T>> {
    if a.dim() != wset.dim() {
        return Err(Error::DimensionMismatch { expected: wset.dim(), found: a.dim() });
    }
    wset.basis_pair().check_index(l)?;
    wset.basis_pair().check_index(j)?;
    Ok((a.matrix() * &wset.get(l, j).adjoint()).trace())
}

fn check_mixed<T: Scalar>(pair: &BasisPair<T>, p: &MixedState<T>, q: &MixedState<T>) -> Result<()> {
    if p.side() != Side::Pre || q.side() != Side::Post {
        return Err(Error::InvalidInput("p must live on the pre basis and q on the post basis".into()));
    }
    for s in [p, q] {
        if s.dim() != pair.dim() {
            return Err(Error::DimensionMismatch { expected: pair.dim(), found: s.dim() });
        }
    }
    Ok(())
}

/// `W_{q,p} = sum_{l,j} q_l p_j W_{l,j}`.
pub fn mixed_w_operator<T: Scalar>(pair: &BasisPair<T>, p: &MixedState<T>, q: &MixedState<T>) -> Result<CMatrix<T>> {
    check_mixed(pair, p, q)?;
    let n = pair.dim();
    let mut out = CMatrix::zeros(n, n);
    for (l, &ql) in q.probabilities().iter().enumerate() {
        for (j, &pj) in p.probabilities().iter().enumerate() {
            out = &out + &w_operator(pair, l, j)?.scale(re(ql * pj));
        }
    }
    Ok(out)
}

/// Mixed-state weak value `sum_{l,j} q_l p_j (A)_{l,j}`.
pub fn mixed_weak_value<T: Scalar>(
    a: &HermitianOperator<T>,
    pair: &BasisPair<T>,
    p: &MixedState<T>,
    q: &MixedState<T>,
) -> Result<C<T>> {
    check_mixed(pair, p, q)?;
    let table = weak_value_table(a, pair)?;
    let mut acc = C::default();
    for (l, &ql) in q.probabilities().iter().enumerate() {
        for (j, &pj) in p.probabilities().iter().enumerate() {
            acc = acc + table.get(l, j) * re(ql * pj);
        }
    }
    Ok(acc)
}

/// Mixed-state weak value through the trace of the mixed W-operator,
/// `tr[A W_{q,p}^†]`.
pub fn mixed_weak_value_by_trace<T: Scalar>(
    a: &HermitianOperator<T>,
    pair: &BasisPair<T>,
    p: &MixedState<T>,
    q: &MixedState<T>,
) -> Result<C<T>> {
    check_dim(a, pair)?;
    let w = mixed_w_operator(pair, p, q)?;
    Ok((a.matrix() * &w.adjoint()).trace())
}

/// Splits a diagonal expectation into weak-value components.
///
/// `Side::Pre`: the terms `(A)_{l,k} mu_{l,k}` over `l`, summing to
/// `<psi_k|A|psi_k>`. `Side::Post`: the terms `(A)_{k,j} mu_{k,j}` over `j`,
/// summing to `<phi_k|A|phi_k>`.
pub fn fractional_decomposition<T: Scalar>(
    a: &HermitianOperator<T>,
    pair: &BasisPair<T>,
    k: usize,
    side: Side,
) -> Result<Vec<C<T>>> {
    check_dim(a, pair)?;
    pair.check_index(k)?;
    let n = pair.dim();
    let mu = overlap_matrix(pair);
    (0..n)
        .map(|i| {
            let (l, j) = match side {
                Side::Pre => (i, k),
                Side::Post => (k, i),
            };
            Ok(weak_value(a, pair, l, j)? * re(mu.get(l, j)))
        })
        .collect()
}

/// A weak value whose modulus exceeds the operator's spectral radius.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Amplified<T> {
    pub l: usize,
    pub j: usize,
    pub value: C<T>,
    pub spectral_radius: T,
}

/// Entries of `table` lying outside the classically allowed range
/// `|(A)_{l,j}| <= max |lambda(A)|`.
pub fn beyond_classical<T: Scalar>(table: &WeakValueTable<T>) -> Vec<Amplified<T>> {
    let radius = table.operator.spectral_radius();
    let n = table.dim();
    let mut out = Vec::new();
    for l in 0..n {
        for j in 0..n {
            let value = table.get(l, j);
            if value.norm() > radius + T::EPS_NORM {
                out.push(Amplified { l, j, value, spectral_radius: radius });
            }
        }
    }
    out
}
