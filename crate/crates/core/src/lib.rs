// Copyright 2026 The qcorr Authors
// SPDX-License-Identifier: Apache-2.0

//! Non-commutativity measures of one-sided quantum correlations.
//!
//! A bipartite state is cut into operator blocks `A_ij = ⟨i_B|ρ|j_B⟩` on the
//! A side. The measure `D_A` sums the Hilbert-Schmidt norms of all pairwise
//! block commutators; `d_A` minimizes it over orthonormal bases of B. The
//! crate provides the measures, the channel families under which they are
//! monotone, and a seeded Monte-Carlo harness that checks those monotonicity
//! properties.
//!
//! The numerical core is generic over [`Real`] (`f64` or `f32`); the aliases
//! below fix `f64`, which is the precision all tolerances are pinned for.

pub mod channels;
pub mod error;
pub mod io;
pub mod linalg;
pub mod measures;
pub mod minimize;
pub mod monolab;
pub mod pauli;
pub mod rng;
pub mod scalar;
pub mod states;

pub use error::{Error, Result};
pub use linalg::Side;
pub use rng::RngSeed;
pub use scalar::Real;

pub type ComplexMatrix = linalg::Matrix<f64>;
pub type ComplexMatrixF32 = linalg::Matrix<f32>;
pub type PauliVector = pauli::PauliVector<f64>;
pub type BipartiteState = states::BipartiteState<f64>;
pub type BipartiteStateF32 = states::BipartiteState<f32>;
pub type BellDiagonalCoeffs = states::BellDiagonalCoeffs<f64>;
pub type AffineQubitChannel = channels::AffineQubitChannel<f64>;
pub type IsotropicChannel = channels::IsotropicChannel<f64>;
pub type DecoheringChannel = channels::DecoheringChannel<f64>;
pub type KrausChannel = channels::KrausChannel<f64>;
pub type Channel = channels::Channel<f64>;
pub type BlockDecomposition = measures::BlockDecomposition<f64>;
pub type MeasureResult = measures::MeasureResult<f64>;
pub type MinimizationReport = minimize::MinimizationReport<f64>;
