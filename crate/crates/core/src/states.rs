// Copyright 2026 The qcorr Authors
// SPDX-License-Identifier: Apache-2.0

//! Bipartite density matrices: validation, special families and samplers.

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::linalg::{
    eig_hermitian, inner, kron, orthonormality_defect, partial_trace, pauli, vector_norm, Matrix, Side, Vector,
};
use crate::rng::{complex_gaussian, uniform, Rng, RngSeed};
use crate::scalar::{re, Real, C};

/// Density matrix on H_A ⊗ H_B that passed [`validate_state`].
#[derive(Debug, Clone, PartialEq)]
pub struct BipartiteState<T: Real> {
    rho: Matrix<T>,
    dim_a: usize,
    dim_b: usize,
}

impl<T: Real> BipartiteState<T> {
    pub fn rho(&self) -> &Matrix<T> {
        &self.rho
    }

    pub fn into_rho(self) -> Matrix<T> {
        self.rho
    }

    pub fn dim_a(&self) -> usize {
        self.dim_a
    }

    pub fn dim_b(&self) -> usize {
        self.dim_b
    }

    pub fn dims(&self) -> (usize, usize) {
        (self.dim_a, self.dim_b)
    }

    pub fn marginal(&self, keep: Side) -> Matrix<T> {
        partial_trace(&self.rho, self.dims(), keep).expect("validated dimensions")
    }

    /// (U_A ⊗ U_B) ρ (U_A ⊗ U_B)†
    pub fn local_unitary(&self, u_a: &Matrix<T>, u_b: &Matrix<T>) -> Result<Self> {
        if u_a.dim()? != self.dim_a || u_b.dim()? != self.dim_b {
            return Err(Error::Dimension("local unitary does not match subsystem".into()));
        }
        let u = kron(u_a, u_b);
        let rho = u.matmul(&self.rho)?.matmul(&u.dagger())?;
        validate_state(rho, self.dim_a, self.dim_b)
    }

    /// Wraps a matrix without re-running the eigenvalue check. Only for
    /// outputs of maps already known to be CPTP.
    pub(crate) fn from_trusted(rho: Matrix<T>, dim_a: usize, dim_b: usize) -> Self {
        Self { rho, dim_a, dim_b }
    }
}

/// Checks Hermiticity, unit trace and positivity (in that order).
pub fn validate_state<T: Real>(rho: Matrix<T>, dim_a: usize, dim_b: usize) -> Result<BipartiteState<T>> {
    let n = rho.dim()?;
    if dim_a < 1 || dim_b < 1 || dim_a * dim_b != n {
        return Err(Error::Dimension(format!(
            "{n}x{n} matrix is not a state on {dim_a}x{dim_b}"
        )));
    }
    let herm = rho.hermiticity_defect()?;
    if herm > T::hermitian_tol() {
        return Err(Error::NotHermitian {
            deviation: herm.to_f64_lossy(),
        });
    }
    let tr = rho.trace().re;
    let dev = (tr - T::one()).abs();
    if dev > T::validity_tol() {
        return Err(Error::Trace {
            trace: tr.to_f64_lossy(),
            deviation: dev.to_f64_lossy(),
        });
    }
    let min = eig_hermitian(&rho)?[0];
    if min < -T::psd_slack() {
        return Err(Error::NegativeEigenvalue {
            value: min.to_f64_lossy(),
        });
    }
    Ok(BipartiteState { rho, dim_a, dim_b })
}

/// ρ_A ⊗ ρ_B for two valid single-party density matrices.
pub fn product_state<T: Real>(rho_a: &Matrix<T>, rho_b: &Matrix<T>) -> Result<BipartiteState<T>> {
    let (da, db) = (rho_a.dim()?, rho_b.dim()?);
    validate_state(kron(rho_a, rho_b), da, db)
}

/// Projector onto a normalized vector of H_A ⊗ H_B.
pub fn pure_state<T: Real>(psi: &[C<T>], dim_a: usize, dim_b: usize) -> Result<BipartiteState<T>> {
    if psi.len() != dim_a * dim_b {
        return Err(Error::Dimension(format!(
            "vector of length {} is not in {dim_a}x{dim_b}",
            psi.len()
        )));
    }
    validate_state(Matrix::outer(psi, psi), dim_a, dim_b)
}

/// |Φ+⟩⟨Φ+| with |Φ+⟩ = (|00⟩ + |11⟩)/√2.
pub fn phi_plus<T: Real>() -> BipartiteState<T> {
    let h = re(T::lit(0.5));
    let rho = Matrix::from_fn(4, 4, |i, j| if i % 3 == 0 && j % 3 == 0 { h } else { C::zero() });
    BipartiteState::from_trusted(rho, 2, 2)
}

/// Correlation coefficients (c₁, c₂, c₃) of a Bell-diagonal state.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BellDiagonalCoeffs<T: Real>(pub [T; 3]);

impl<T: Real> BellDiagonalCoeffs<T> {
    /// Coefficients whose state is positive (eigenvalues ≥ -1e-12).
    pub fn new(c: [T; 3]) -> Result<Self> {
        let coeffs = Self(c);
        let min = coeffs.eigenvalues().into_iter().fold(T::infinity(), T::min);
        if min < -T::tight_tol() {
            return Err(Error::NegativeEigenvalue {
                value: min.to_f64_lossy(),
            });
        }
        Ok(coeffs)
    }

    /// Spectrum of (I⊗I + Σ c_k σ_k⊗σ_k)/4.
    pub fn eigenvalues(&self) -> [T; 4] {
        let [c1, c2, c3] = self.0;
        let q = T::lit(0.25);
        let one = T::one();
        [
            (one - c1 - c2 - c3) * q,
            (one - c1 + c2 + c3) * q,
            (one + c1 - c2 + c3) * q,
            (one + c1 + c2 - c3) * q,
        ]
    }
}

/// (I⊗I + Σ_k c_k σ_k⊗σ_k)/4
pub fn bell_diagonal_matrix<T: Real>(c: &BellDiagonalCoeffs<T>) -> Matrix<T> {
    let mut rho = Matrix::<T>::identity(4);
    for k in 1..=3 {
        let sk = pauli::<T>(k);
        rho = &rho + &kron(&sk, &sk).scale_real(c.0[k - 1]);
    }
    rho.scale_real(T::lit(0.25))
}

pub fn bell_diagonal_state<T: Real>(c: &BellDiagonalCoeffs<T>) -> Result<BipartiteState<T>> {
    // Re-run the coefficient check: the tuple field is public.
    BellDiagonalCoeffs::new(c.0)?;
    validate_state(bell_diagonal_matrix(c), 2, 2)
}

/// Recognizes a two-qubit Bell-diagonal state from its Pauli correlation
/// tensor: marginal and off-diagonal correlations must vanish within `tol`.
pub fn detect_bell_diagonal<T: Real>(state: &BipartiteState<T>, tol: T) -> Option<BellDiagonalCoeffs<T>> {
    if state.dims() != (2, 2) {
        return None;
    }
    let corr = |m: usize, n: usize| (&kron(&pauli::<T>(m), &pauli::<T>(n)) * state.rho()).trace();
    for m in 0..4 {
        for n in 0..4 {
            let off_structure = (m == 0) ^ (n == 0) || (m != n && m != 0);
            if off_structure && corr(m, n).norm() > tol {
                return None;
            }
        }
    }
    let c = [corr(1, 1).re, corr(2, 2).re, corr(3, 3).re];
    let coeffs = BellDiagonalCoeffs::new(c).ok()?;
    bell_diagonal_matrix(&coeffs)
        .approx_eq(state.rho(), tol)
        .then_some(coeffs)
}

/// Σ_i p_i |i_A⟩⟨i_A| ⊗ ρ_B^i, a member of the A-classical set.
pub fn classical_quantum_state<T: Real>(
    probs: &[T],
    basis_a: &[Vector<T>],
    rho_bs: &[Matrix<T>],
) -> Result<BipartiteState<T>> {
    if probs.is_empty() || probs.len() != basis_a.len() || probs.len() != rho_bs.len() {
        return Err(Error::Dimension(format!(
            "{} probabilities, {} basis vectors, {} conditional states",
            probs.len(),
            basis_a.len(),
            rho_bs.len()
        )));
    }
    if let Some(p) = probs.iter().find(|&&p| p < T::zero()) {
        return Err(Error::Probability(format!("negative probability {p}")));
    }
    let total = probs.iter().fold(T::zero(), |a, &b| a + b);
    if (total - T::one()).abs() > T::tight_tol() {
        return Err(Error::Probability(format!("probabilities sum to {total}")));
    }
    let dim_a = basis_a[0].len();
    if basis_a.iter().any(|v| v.len() != dim_a) {
        return Err(Error::Dimension("basis vectors differ in length".into()));
    }
    let defect = orthonormality_defect(basis_a);
    if defect > T::validity_tol() {
        return Err(Error::NotOrthonormal {
            deviation: defect.to_f64_lossy(),
        });
    }
    let dim_b = rho_bs[0].dim()?;
    let mut rho = Matrix::zeros(dim_a * dim_b, dim_a * dim_b);
    for ((&p, v), rb) in probs.iter().zip(basis_a).zip(rho_bs) {
        if rb.dim()? != dim_b {
            return Err(Error::Dimension("conditional states differ in size".into()));
        }
        validate_state(rb.clone(), 1, dim_b)?;
        rho = &rho + &kron(&Matrix::outer(v, v), rb).scale_real(p);
    }
    validate_state(rho, dim_a, dim_b)
}

fn require_dims(dims: &[usize]) -> Result<()> {
    if dims.iter().any(|&d| d < 2) {
        return Err(Error::Dimension(format!("dimensions must be ≥ 2, got {dims:?}")));
    }
    Ok(())
}

/// Haar unitary: Gram-Schmidt QR of a Ginibre matrix, which leaves R with a
/// positive real diagonal (the phase-fixed convention).
pub fn random_unitary_with<T: Real>(d: usize, rng: &mut Rng) -> Matrix<T> {
    loop {
        let mut cols: Vec<Vector<T>> = (0..d)
            .map(|_| (0..d).map(|_| complex_gaussian(rng)).collect())
            .collect();
        let mut ok = true;
        for j in 0..d {
            for k in 0..j {
                // Two passes of modified Gram-Schmidt for orthogonality to 1e-15.
                for _ in 0..2 {
                    let proj = inner(&cols[k], &cols[j]);
                    let (head, tail) = cols.split_at_mut(j);
                    for (x, q) in tail[0].iter_mut().zip(&head[k]) {
                        *x = *x - *q * proj;
                    }
                }
            }
            let norm = vector_norm(&cols[j]);
            if norm < T::lit(1e-8) {
                ok = false;
                break;
            }
            for x in cols[j].iter_mut() {
                *x = *x / norm;
            }
        }
        if ok {
            return Matrix::from_columns(&cols).expect("square");
        }
    }
}

pub fn random_unitary<T: Real>(d: usize, seed: RngSeed) -> Result<Matrix<T>> {
    if d < 1 {
        return Err(Error::Dimension("unitary dimension must be ≥ 1".into()));
    }
    Ok(random_unitary_with(d, &mut seed.rng()))
}

/// Unit vector distributed uniformly on the complex sphere.
pub fn random_unit_vector<T: Real>(d: usize, rng: &mut Rng) -> Vector<T> {
    loop {
        let v: Vector<T> = (0..d).map(|_| complex_gaussian(rng)).collect();
        let n = vector_norm(&v);
        if n > T::lit(1e-8) {
            return v.into_iter().map(|z| z / n).collect();
        }
    }
}

pub fn random_pure_state_with<T: Real>(dim_a: usize, dim_b: usize, rng: &mut Rng) -> Result<BipartiteState<T>> {
    require_dims(&[dim_a, dim_b])?;
    pure_state(&random_unit_vector(dim_a * dim_b, rng), dim_a, dim_b)
}

pub fn random_pure_state<T: Real>(dim_a: usize, dim_b: usize, seed: RngSeed) -> Result<BipartiteState<T>> {
    random_pure_state_with(dim_a, dim_b, &mut seed.rng())
}

/// G G† / Tr(G G†) for an n×k Ginibre matrix G.
pub fn random_density_matrix<T: Real>(n: usize, rank: usize, rng: &mut Rng) -> Result<Matrix<T>> {
    if rank < 1 || rank > n {
        return Err(Error::Dimension(format!("rank {rank} outside 1..={n}")));
    }
    let g = Matrix::from_fn(n, rank, |_, _| complex_gaussian(rng));
    let w = g.matmul(&g.dagger())?;
    let tr = w.trace().re;
    Ok(w.hermitian_part()?.scale_real(T::one() / tr))
}

pub fn random_mixed_state_with<T: Real>(
    dim_a: usize,
    dim_b: usize,
    rank: usize,
    rng: &mut Rng,
) -> Result<BipartiteState<T>> {
    require_dims(&[dim_a, dim_b])?;
    let rho = random_density_matrix(dim_a * dim_b, rank, rng)?;
    validate_state(rho, dim_a, dim_b)
}

pub fn random_mixed_state<T: Real>(
    dim_a: usize,
    dim_b: usize,
    rank: usize,
    seed: RngSeed,
) -> Result<BipartiteState<T>> {
    random_mixed_state_with(dim_a, dim_b, rank, &mut seed.rng())
}

/// Rejection sampler: c uniform in [-1, 1]³, kept when the state is positive.
pub fn random_bell_diagonal_with<T: Real>(rng: &mut Rng) -> BellDiagonalCoeffs<T> {
    loop {
        let c = [
            uniform(rng, -1.0, 1.0),
            uniform(rng, -1.0, 1.0),
            uniform(rng, -1.0, 1.0),
        ];
        if let Ok(coeffs) = BellDiagonalCoeffs::new(c) {
            return coeffs;
        }
    }
}

pub fn random_bell_diagonal<T: Real>(seed: RngSeed) -> BellDiagonalCoeffs<T> {
    random_bell_diagonal_with(&mut seed.rng())
}

/// Random member of the A-classical set: Haar basis on A, Dirichlet-like
/// weights, Ginibre conditional states on B.
pub fn random_classical_quantum_with<T: Real>(dim_a: usize, dim_b: usize, rng: &mut Rng) -> Result<BipartiteState<T>> {
    require_dims(&[dim_a, dim_b])?;
    let u = random_unitary_with::<T>(dim_a, rng);
    let basis: Vec<Vector<T>> = (0..dim_a).map(|j| u.column(j)).collect();
    let raw: Vec<T> = (0..dim_a).map(|_| -uniform::<T>(rng, 1e-12, 1.0).ln()).collect();
    let sum = raw.iter().fold(T::zero(), |a, &b| a + b);
    let mut probs: Vec<T> = raw.iter().map(|&x| x / sum).collect();
    // Absorb rounding into the last weight so the sum is 1 to machine precision.
    let head = probs[..dim_a - 1].iter().fold(T::zero(), |a, &b| a + b);
    probs[dim_a - 1] = T::one() - head;
    let rho_bs = (0..dim_a)
        .map(|_| random_density_matrix(dim_b, dim_b, rng))
        .collect::<Result<Vec<_>>>()?;
    classical_quantum_state(&probs, &basis, &rho_bs)
}

pub fn random_classical_quantum<T: Real>(dim_a: usize, dim_b: usize, seed: RngSeed) -> Result<BipartiteState<T>> {
    random_classical_quantum_with(dim_a, dim_b, &mut seed.rng())
}

/// Random Hermitian matrix with unit Hilbert-Schmidt norm (GUE direction).
pub fn random_hermitian_direction<T: Real>(d: usize, rng: &mut Rng) -> Matrix<T> {
    let g = Matrix::from_fn(d, d, |_, _| complex_gaussian::<T>(rng));
    let h = (&g + &g.dagger()).scale_real(T::lit(0.5));
    let n = h.frobenius_sq().sqrt();
    h.scale_real(T::one() / n)
}
