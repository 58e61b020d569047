// Copyright 2026 The qcorr Authors
// SPDX-License-Identifier: Apache-2.0

//! Pauli-basis coordinates for 2x2 operators.
//!
//! Any 2x2 complex matrix is `d0·I + d1·σ₁ + d2·σ₂ + d3·σ₃` with complex
//! coefficients. Commutators only see the traceless part, which gives a closed
//! form for ||[A, B]||₂ that avoids matrix products.

use num_complex::Complex;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::scalar::{Real, C};

/// Coefficients of (I₂, σ₁, σ₂, σ₃).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PauliVector<T: Real>(pub [C<T>; 4]);

impl<T: Real> PauliVector<T> {
    pub fn new(d0: C<T>, d1: C<T>, d2: C<T>, d3: C<T>) -> Self {
        Self([d0, d1, d2, d3])
    }

    pub fn from_real(d: [T; 4]) -> Self {
        Self(d.map(|x| Complex::new(x, T::zero())))
    }

    pub fn zero() -> Self {
        Self([C::zero(); 4])
    }

    /// d · (I₂, σ)
    pub fn reconstruct(&self) -> Matrix<T> {
        let [d0, d1, d2, d3] = self.0;
        let i = Complex::new(T::zero(), T::one());
        Matrix::new(2, 2, vec![d0 + d3, d1 - i * d2, d1 + i * d2, d0 - d3]).expect("finite Pauli coefficients")
    }
}

impl<T: Real> std::ops::Index<usize> for PauliVector<T> {
    type Output = C<T>;

    fn index(&self, k: usize) -> &C<T> {
        &self.0[k]
    }
}

/// d0 = Tr(M)/2, dk = Tr(σ_k M)/2.
pub fn pauli_decompose<T: Real>(m: &Matrix<T>) -> Result<PauliVector<T>> {
    if m.rows() != 2 || m.cols() != 2 {
        return Err(Error::Dimension(format!(
            "Pauli decomposition needs a 2x2 matrix, got {}x{}",
            m.rows(),
            m.cols()
        )));
    }
    let half = T::lit(0.5);
    let (a, b, c, d) = (m[(0, 0)], m[(0, 1)], m[(1, 0)], m[(1, 1)]);
    let i = Complex::new(T::zero(), T::one());
    Ok(PauliVector([
        (a + d) * half,
        (b + c) * half,
        // Tr(σ₂ M) = -i·M10 + i·M01
        i * (b - c) * half,
        (a - d) * half,
    ]))
}

/// ||[d·(I,σ), e·(I,σ)]||₂ from the Pauli coefficients alone.
///
/// With β(mn) = 2i(d_m e_n − d_n e_m), the commutator is
/// β(12)σ₃ + β(31)σ₂ + β(23)σ₁ and its squared norm is 2(|β(12)|² + |β(31)|² + |β(23)|²).
pub fn commutator_norm_pauli<T: Real>(d: &PauliVector<T>, e: &PauliVector<T>) -> T {
    let two_i = Complex::new(T::zero(), T::lit(2.0));
    let beta = |m: usize, n: usize| two_i * (d[m] * e[n] - d[n] * e[m]);
    let sum = beta(1, 2).norm_sqr() + beta(3, 1).norm_sqr() + beta(2, 3).norm_sqr();
    (T::lit(2.0) * sum).sqrt()
}
