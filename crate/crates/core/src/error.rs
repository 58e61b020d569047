// Copyright 2026 The qcorr Authors
// SPDX-License-Identifier: Apache-2.0

use thiserror::Error;

/// Errors raised by the numerical core.
///
/// Validity variants carry the magnitude of the failed check so callers can
/// report how far off an input was.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("dimension error: {0}")]
    Dimension(String),

    #[error("matrix is not Hermitian: max |M - M†| = {deviation:e}")]
    NotHermitian { deviation: f64 },

    #[error("trace is {trace} (expected 1, deviation {deviation:e})")]
    Trace { trace: f64, deviation: f64 },

    #[error("negative eigenvalue {value:e}")]
    NegativeEigenvalue { value: f64 },

    #[error("matrix is not unitary: max |U†U - I| = {deviation:e}")]
    NotUnitary { deviation: f64 },

    #[error("vectors are not orthonormal: max |<u_i|u_j> - δ_ij| = {deviation:e}")]
    NotOrthonormal { deviation: f64 },

    #[error("probabilities invalid: {0}")]
    Probability(String),

    #[error("channel constraint violated: {0}")]
    Constraint(String),

    #[error("map is positive but not completely positive: Choi eigenvalue {min_eigenvalue:e}")]
    NotCompletelyPositive { min_eigenvalue: f64 },

    #[error("channel is not trace preserving: max |Σ K†K - I| = {deviation:e}")]
    NotTracePreserving { deviation: f64 },

    #[error("non-finite entry in matrix")]
    NonFinite,

    #[error("sampler gave up after {0} rejections")]
    Sampler(usize),

    #[error("configuration error: {0}")]
    Config(String),

    #[error("format error: {0}")]
    Format(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
