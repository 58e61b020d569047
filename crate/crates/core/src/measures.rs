// Copyright 2026 The qcorr Authors
// SPDX-License-Identifier: Apache-2.0

//! Block decomposition and the commutator measure `D_A`.
//!
//! For an orthonormal basis `{|i'⟩ = U|i⟩}` of H_B the state splits as
//! `ρ = Σ_ij A_ij ⊗ |i'⟩⟨j'|` with `A_ij = ⟨i'|ρ|j'⟩` acting on H_A. `D_A` is
//! the sum of `||[A_ij, A_kl]||₂` over all unordered pairs of distinct
//! multi-indices `(i, j) ≠ (k, l)`, so there are `n(n − 1)/2` terms with
//! `n = d_B²`. Self-pairs contribute nothing and are skipped.

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::linalg::{commutator_norm, Matrix};
use crate::pauli::{commutator_norm_pauli, pauli_decompose, PauliVector};
use crate::scalar::{Real, C};
use crate::states::{bell_diagonal_state, BellDiagonalCoeffs, BipartiteState};

/// The family `{A_ij}` for one orthonormal basis of H_B.
#[derive(Debug, Clone, PartialEq)]
pub struct BlockDecomposition<T: Real> {
    /// Row-major over `(i, j)`: entry `i * d_B + j` is `A_ij`.
    blocks: Vec<Matrix<T>>,
    basis: Matrix<T>,
    dim_a: usize,
    dim_b: usize,
}

impl<T: Real> BlockDecomposition<T> {
    pub fn block(&self, i: usize, j: usize) -> &Matrix<T> {
        &self.blocks[i * self.dim_b + j]
    }

    pub fn blocks(&self) -> &[Matrix<T>] {
        &self.blocks
    }

    pub fn basis(&self) -> &Matrix<T> {
        &self.basis
    }

    pub fn dims(&self) -> (usize, usize) {
        (self.dim_a, self.dim_b)
    }

    /// `Σ_ij A_ij ⊗ U|i⟩⟨j|U†`, which gives back ρ.
    pub fn reconstruct(&self) -> Matrix<T> {
        let (da, db) = (self.dim_a, self.dim_b);
        let u = &self.basis;
        let mut rho = Matrix::zeros(da * db, da * db);
        for i in 0..db {
            for j in 0..db {
                let outer = Matrix::outer(&u.column(i), &u.column(j));
                rho = &rho + &self.block(i, j).kron(&outer);
            }
        }
        rho
    }

    /// Same decomposition with every block transposed.
    pub fn transposed(&self) -> Self {
        Self {
            blocks: self.blocks.iter().map(Matrix::transpose).collect(),
            ..self.clone()
        }
    }

    /// Applies an operator map to every block.
    pub fn map_blocks(&self, f: impl Fn(&Matrix<T>) -> Result<Matrix<T>>) -> Result<Self> {
        let blocks = self.blocks.iter().map(f).collect::<Result<Vec<_>>>()?;
        let dim_a = blocks[0].rows();
        Ok(Self {
            blocks,
            dim_a,
            ..self.clone()
        })
    }
}

/// `A_ij = (I ⊗ ⟨i'|) ρ (I ⊗ |j'⟩)` with `|i'⟩` the i-th column of `basis_u`.
pub fn block_decompose<T: Real>(state: &BipartiteState<T>, basis_u: &Matrix<T>) -> Result<BlockDecomposition<T>> {
    let (da, db) = state.dims();
    if basis_u.rows() != db || basis_u.cols() != db {
        return Err(Error::Dimension(format!(
            "basis unitary must be {db}x{db}, got {}x{}",
            basis_u.rows(),
            basis_u.cols()
        )));
    }
    let defect = basis_u.unitarity_defect()?;
    if defect > T::validity_tol() {
        return Err(Error::NotUnitary {
            deviation: defect.to_f64_lossy(),
        });
    }
    Ok(BlockDecomposition {
        blocks: raw_blocks(state.rho(), da, db, basis_u),
        basis: basis_u.clone(),
        dim_a: da,
        dim_b: db,
    })
}

fn raw_blocks<T: Real>(rho: &Matrix<T>, da: usize, db: usize, u: &Matrix<T>) -> Vec<Matrix<T>> {
    // First contract the ket index: X[(a, b), (a', j)] = Σ_b' ρ[(a, b), (a', b')] U[b', j].
    let n = da * db;
    let mut half = vec![C::<T>::zero(); n * n];
    for r in 0..n {
        for a2 in 0..da {
            for j in 0..db {
                let mut acc = C::zero();
                for b2 in 0..db {
                    acc = acc + rho[(r, a2 * db + b2)] * u[(b2, j)];
                }
                half[r * n + a2 * db + j] = acc;
            }
        }
    }
    let mut blocks = Vec::with_capacity(db * db);
    for i in 0..db {
        for j in 0..db {
            blocks.push(Matrix::from_fn(da, da, |a, a2| {
                let mut acc = C::zero();
                for b in 0..db {
                    acc = acc + u[(b, i)].conj() * half[(a * db + b) * n + a2 * db + j];
                }
                acc
            }));
        }
    }
    blocks
}

/// Value of `D_A` together with the basis it was evaluated in.
#[derive(Debug, Clone, PartialEq)]
pub struct MeasureResult<T: Real> {
    pub value: T,
    pub basis: Matrix<T>,
    /// |Ω| = n(n − 1)/2 with n = d_B².
    pub pair_count: usize,
}

pub fn pair_count(dim_b: usize) -> usize {
    let n = dim_b * dim_b;
    n * (n - 1) / 2
}

/// Σ over unordered distinct pairs of ||[A, B]||₂ for an arbitrary block list.
///
/// With `fast` and 2x2 blocks the Pauli-coefficient formula is used instead
/// of forming the commutators.
pub fn commutator_sum<T: Real>(blocks: &[Matrix<T>], fast: bool) -> Result<T> {
    let mut total = T::zero();
    if fast && blocks.first().is_some_and(|b| b.rows() == 2 && b.cols() == 2) {
        let coeffs = blocks
            .iter()
            .map(pauli_decompose)
            .collect::<Result<Vec<PauliVector<T>>>>()?;
        for (m, d) in coeffs.iter().enumerate() {
            for e in &coeffs[m + 1..] {
                total = total + commutator_norm_pauli(d, e);
            }
        }
    } else {
        for (m, a) in blocks.iter().enumerate() {
            for b in &blocks[m + 1..] {
                total = total + commutator_norm(a, b)?;
            }
        }
    }
    Ok(total)
}

/// `D_A(ρ)` in the basis given by the columns of `basis_u`.
pub fn guo_d<T: Real>(state: &BipartiteState<T>, basis_u: &Matrix<T>, fast: bool) -> Result<MeasureResult<T>> {
    let blocks = block_decompose(state, basis_u)?;
    Ok(MeasureResult {
        value: commutator_sum(blocks.blocks(), fast)?,
        basis: basis_u.clone(),
        pair_count: pair_count(state.dim_b()),
    })
}

/// `D_A(ρ)` in the computational basis of B, Pauli fast path when d_A = 2.
pub fn guo_d_computational<T: Real>(state: &BipartiteState<T>) -> T {
    let id = Matrix::identity(state.dim_b());
    commutator_sum(&raw_blocks(state.rho(), state.dim_a(), state.dim_b(), &id), true).expect("blocks share a shape")
}

/// `D_A` for a basis unitary that is trusted to be unitary (skips the check).
/// Used in inner optimization loops.
pub(crate) fn guo_d_unchecked<T: Real>(state: &BipartiteState<T>, basis_u: &Matrix<T>, fast: bool) -> T {
    let blocks = raw_blocks(state.rho(), state.dim_a(), state.dim_b(), basis_u);
    commutator_sum(&blocks, fast).expect("blocks share a shape")
}

/// ⟨i|σ_m|j⟩ in the computational basis, m ∈ {1, 2, 3}.
fn pauli_element<T: Real>(m: usize, i: usize, j: usize) -> C<T> {
    crate::linalg::pauli::<T>(m)[(i, j)]
}

/// Closed form of `D_A` for a Bell-diagonal state in the computational basis.
///
/// Each pair contributes
/// `sqrt((|c₁c₂|²|α¹²|² + |c₁c₃|²|α³¹|² + |c₂c₃|²|α²³|²) / 2⁵)` with
/// `α^{mn}_{ijkl} = σ_m^{ij} σ_n^{kl} − σ_n^{ij} σ_m^{kl}`.
pub fn bell_diagonal_d<T: Real>(c: &BellDiagonalCoeffs<T>) -> Result<T> {
    let c = BellDiagonalCoeffs::new(c.0)?.0;
    let alpha = |m: usize, n: usize, (i, j): (usize, usize), (k, l): (usize, usize)| -> T {
        (pauli_element::<T>(m, i, j) * pauli_element::<T>(n, k, l)
            - pauli_element::<T>(n, i, j) * pauli_element::<T>(m, k, l))
        .norm_sqr()
    };
    let w12 = (c[0] * c[1]).powi(2);
    let w31 = (c[0] * c[2]).powi(2);
    let w23 = (c[1] * c[2]).powi(2);
    let idx: Vec<(usize, usize)> = (0..2).flat_map(|i| (0..2).map(move |j| (i, j))).collect();
    let denom = T::lit(32.0);
    let mut total = T::zero();
    for (p, &x) in idx.iter().enumerate() {
        for &y in &idx[p + 1..] {
            let s = w12 * alpha(1, 2, x, y) + w31 * alpha(3, 1, x, y) + w23 * alpha(2, 3, x, y);
            total = total + (s / denom).sqrt();
        }
    }
    Ok(total)
}

/// Convenience wrapper checking the closed form against the generic pipeline.
pub fn bell_diagonal_d_generic<T: Real>(c: &BellDiagonalCoeffs<T>) -> Result<T> {
    let state = bell_diagonal_state(c)?;
    Ok(guo_d(&state, &Matrix::identity(2), false)?.value)
}
