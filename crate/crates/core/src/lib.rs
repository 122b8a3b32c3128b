//! Weak-value expansion of Hermitian operators over a pair of orthonormal
//! bases, reconstruction of a prepared diagonal state from post-measurement
//! statistics, and the geometry of the Birkhoff polytope of overlap matrices.
//!
//! Everything is generic over [`Scalar`] (`f64` or `f32`); the `*F64` and
//! `*F32` aliases below fix the precision.

pub mod birkhoff;
pub mod error;
pub mod hilbert;
pub mod linalg;
pub mod random;
pub mod reconstruct;
pub mod scalar;
pub mod weakval;

pub use error::{Error, Result};
pub use scalar::{Scalar, C};

pub use birkhoff::{BistochasticMatrix, PermutationMatrix, PolytopePoint, SurfaceSample, UnistochasticCertificate, Verdict};
pub use hilbert::{BasisPair, HermitianOperator, MixedState, Side, StateVector};
pub use linalg::{CMatrix, Matrix, RMatrix};
pub use reconstruct::{Irreversibility, ReconstructionProblem, ReconstructionSolution};
pub use weakval::{Amplified, OverlapMatrix, WOperatorSet, WeakValueTable};

pub type StateVectorF64 = StateVector<f64>;
pub type BasisPairF64 = BasisPair<f64>;
pub type HermitianOperatorF64 = HermitianOperator<f64>;
pub type MixedStateF64 = MixedState<f64>;
pub type WOperatorSetF64 = WOperatorSet<f64>;
pub type OverlapMatrixF64 = OverlapMatrix<f64>;
pub type WeakValueTableF64 = WeakValueTable<f64>;
pub type ReconstructionProblemF64 = ReconstructionProblem<f64>;
pub type ReconstructionSolutionF64 = ReconstructionSolution<f64>;
pub type BistochasticMatrixF64 = BistochasticMatrix<f64>;
pub type PolytopePointF64 = PolytopePoint<f64>;
pub type CMatrixF64 = CMatrix<f64>;
pub type RMatrixF64 = RMatrix<f64>;

pub type StateVectorF32 = StateVector<f32>;
pub type BasisPairF32 = BasisPair<f32>;
pub type HermitianOperatorF32 = HermitianOperator<f32>;
pub type MixedStateF32 = MixedState<f32>;
pub type WOperatorSetF32 = WOperatorSet<f32>;
pub type OverlapMatrixF32 = OverlapMatrix<f32>;
pub type WeakValueTableF32 = WeakValueTable<f32>;
pub type ReconstructionProblemF32 = ReconstructionProblem<f32>;
pub type ReconstructionSolutionF32 = ReconstructionSolution<f32>;
pub type BistochasticMatrixF32 = BistochasticMatrix<f32>;
pub type PolytopePointF32 = PolytopePoint<f32>;
pub type CMatrixF32 = CMatrix<f32>;
pub type RMatrixF32 = RMatrix<f32>;
