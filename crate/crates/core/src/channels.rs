// Copyright 2026 The qcorr Authors
// SPDX-License-Identifier: Apache-2.0

//! Quantum channels and their local action on bipartite states.
//!
//! Three structured families are represented natively:
//!
//! * [`AffineQubitChannel`]: qubit maps acting on Pauli coordinates as
//!   `m' = 𝕋 m` with `𝕋 = [[1, 0], [t, diag(λ)]]`.
//! * [`IsotropicChannel`]: `p·Γ[M] + (1 − p)·Tr(M)·I/d` where `Γ` is a unitary
//!   conjugation or a transpose followed by one.
//! * [`DecoheringChannel`]: dephasing in a fixed orthonormal basis.
//!
//! Anything else goes through [`KrausChannel`]. Every family converts to Kraus
//! form through its Choi matrix, which is also where complete positivity is
//! checked.

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{eigh, kron, orthonormality_defect, Matrix, Side, Vector};
use crate::pauli::{pauli_decompose, PauliVector};
use crate::rng::{uniform, Rng, RngSeed};
use crate::scalar::{re, Real, C};
use crate::states::{random_unitary_with, validate_state, BipartiteState};

/// A linear map on operators with fixed input and output dimensions.
pub trait QuantumChannel<T: Real> {
    fn dim_in(&self) -> usize;

    fn dim_out(&self) -> usize;

    fn apply(&self, m: &Matrix<T>) -> Result<Matrix<T>>;
}

fn check_input<T: Real>(m: &Matrix<T>, d: usize) -> Result<()> {
    if m.rows() != d || m.cols() != d {
        return Err(Error::Dimension(format!(
            "channel on dimension {d} applied to {}x{} matrix",
            m.rows(),
            m.cols()
        )));
    }
    Ok(())
}

/// Qubit channel in diagonal affine form.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AffineQubitChannel<T: Real> {
    t: [T; 3],
    lambda: [T; 3],
}

/// Accepts `(t, λ)` iff `|λ_k| ≤ 1 − |t_k|` for every axis.
pub fn validate_affine<T: Real>(t: [T; 3], lambda: [T; 3]) -> Result<AffineQubitChannel<T>> {
    let tol = T::tight_tol();
    for k in 0..3 {
        if !t[k].is_finite() || !lambda[k].is_finite() {
            return Err(Error::NonFinite);
        }
        let bound = T::one() - t[k].abs();
        if bound < -tol || lambda[k].abs() > bound + tol {
            return Err(Error::Constraint(format!(
                "axis {}: |λ| = {} exceeds 1 - |t| = {}",
                k + 1,
                lambda[k].abs(),
                bound
            )));
        }
    }
    Ok(AffineQubitChannel { t, lambda })
}

impl<T: Real> AffineQubitChannel<T> {
    pub fn new(t: [T; 3], lambda: [T; 3]) -> Result<Self> {
        validate_affine(t, lambda)
    }

    pub fn unital(lambda: [T; 3]) -> Result<Self> {
        validate_affine([T::zero(); 3], lambda)
    }

    pub fn identity() -> Self {
        Self {
            t: [T::zero(); 3],
            lambda: [T::one(); 3],
        }
    }

    /// Maps every state to I/2.
    pub fn fully_depolarizing() -> Self {
        Self {
            t: [T::zero(); 3],
            lambda: [T::zero(); 3],
        }
    }

    pub fn t(&self) -> [T; 3] {
        self.t
    }

    pub fn lambda(&self) -> [T; 3] {
        self.lambda
    }

    pub fn is_unital(&self) -> bool {
        self.t.iter().all(|x| x.abs() <= T::lit(1e-14))
    }

    /// Applies `𝕋` to a Pauli coefficient vector.
    pub fn transform(&self, m: &PauliVector<T>) -> PauliVector<T> {
        let mut out = [m[0], C::zero(), C::zero(), C::zero()];
        for k in 0..3 {
            out[k + 1] = m[0] * self.t[k] + m[k + 1] * self.lambda[k];
        }
        PauliVector(out)
    }

    /// `next ∘ self`
    pub fn then(&self, next: &Self) -> Result<Self> {
        let mut t = [T::zero(); 3];
        let mut lambda = [T::zero(); 3];
        for k in 0..3 {
            t[k] = next.t[k] + next.lambda[k] * self.t[k];
            lambda[k] = next.lambda[k] * self.lambda[k];
        }
        validate_affine(t, lambda)
    }
}

pub fn apply_affine<T: Real>(ch: &AffineQubitChannel<T>, m: &Matrix<T>) -> Result<Matrix<T>> {
    Ok(ch.transform(&pauli_decompose(m)?).reconstruct())
}

impl<T: Real> QuantumChannel<T> for AffineQubitChannel<T> {
    fn dim_in(&self) -> usize {
        2
    }

    fn dim_out(&self) -> usize {
        2
    }

    fn apply(&self, m: &Matrix<T>) -> Result<Matrix<T>> {
        apply_affine(self, m)
    }
}

/// Whether the isotropic map uses `U M U†` or `U Mᵀ U†`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum GammaKind {
    Unitary,
    Antiunitary,
}

/// Admissible interval of `p` for complete positivity.
pub fn isotropic_p_range<T: Real>(d: usize, kind: GammaKind) -> (T, T) {
    let d = T::from_usize(d).expect("dimension fits scalar");
    let one = T::one();
    match kind {
        GammaKind::Unitary => (-one / (d * d - one), one),
        GammaKind::Antiunitary => (-one / (d - one), one / (d + one)),
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct IsotropicChannel<T: Real> {
    p: T,
    kind: GammaKind,
    u: Matrix<T>,
}

impl<T: Real> IsotropicChannel<T> {
    pub fn new(p: T, kind: GammaKind, u: Matrix<T>) -> Result<Self> {
        let d = u.dim()?;
        if d < 2 {
            return Err(Error::Dimension("isotropic channel needs d ≥ 2".into()));
        }
        let defect = u.unitarity_defect()?;
        if defect > T::validity_tol() {
            return Err(Error::NotUnitary {
                deviation: defect.to_f64_lossy(),
            });
        }
        let (lo, hi) = isotropic_p_range::<T>(d, kind);
        let tol = T::tight_tol();
        if !p.is_finite() || p < lo - tol || p > hi + tol {
            return Err(Error::Constraint(format!(
                "p = {p} outside [{lo}, {hi}] for {kind:?} Γ in dimension {d}"
            )));
        }
        Ok(Self { p, kind, u })
    }

    pub fn p(&self) -> T {
        self.p
    }

    pub fn kind(&self) -> GammaKind {
        self.kind
    }

    pub fn unitary(&self) -> &Matrix<T> {
        &self.u
    }

    pub fn dim(&self) -> usize {
        self.u.rows()
    }

    /// Γ[M] alone.
    pub fn gamma(&self, m: &Matrix<T>) -> Result<Matrix<T>> {
        check_input(m, self.dim())?;
        let inner = match self.kind {
            GammaKind::Unitary => m.clone(),
            GammaKind::Antiunitary => m.transpose(),
        };
        self.u.matmul(&inner)?.matmul(&self.u.dagger())
    }
}

pub fn apply_isotropic<T: Real>(ch: &IsotropicChannel<T>, m: &Matrix<T>) -> Result<Matrix<T>> {
    let d = ch.dim();
    let g = ch.gamma(m)?;
    let mix = m.trace() * ((T::one() - ch.p) / T::from_usize(d).expect("dimension fits"));
    let mut out = g.scale_real(ch.p);
    for i in 0..d {
        out[(i, i)] = out[(i, i)] + mix;
    }
    Ok(out)
}

impl<T: Real> QuantumChannel<T> for IsotropicChannel<T> {
    fn dim_in(&self) -> usize {
        self.dim()
    }

    fn dim_out(&self) -> usize {
        self.dim()
    }

    fn apply(&self, m: &Matrix<T>) -> Result<Matrix<T>> {
        apply_isotropic(self, m)
    }
}

/// Completely decohering map `M ↦ Σ_i ⟨i|M|i⟩ |i⟩⟨i|`.
#[derive(Debug, Clone, PartialEq)]
pub struct DecoheringChannel<T: Real> {
    basis: Vec<Vector<T>>,
}

impl<T: Real> DecoheringChannel<T> {
    pub fn new(basis: Vec<Vector<T>>) -> Result<Self> {
        let d = basis.len();
        if d == 0 || basis.iter().any(|v| v.len() != d) {
            return Err(Error::Dimension(format!(
                "decohering basis needs {d} vectors of length {d}"
            )));
        }
        let defect = orthonormality_defect(&basis);
        if defect > T::validity_tol() {
            return Err(Error::NotOrthonormal {
                deviation: defect.to_f64_lossy(),
            });
        }
        Ok(Self { basis })
    }

    pub fn computational(d: usize) -> Self {
        Self {
            basis: (0..d).map(|k| crate::linalg::basis_vector(d, k)).collect(),
        }
    }

    /// Basis given by the columns of a unitary.
    pub fn from_unitary(u: &Matrix<T>) -> Result<Self> {
        let d = u.dim()?;
        Self::new((0..d).map(|j| u.column(j)).collect())
    }

    pub fn basis(&self) -> &[Vector<T>] {
        &self.basis
    }
}

pub fn apply_decohering<T: Real>(ch: &DecoheringChannel<T>, m: &Matrix<T>) -> Result<Matrix<T>> {
    let d = ch.basis.len();
    check_input(m, d)?;
    let mut out = Matrix::zeros(d, d);
    for v in &ch.basis {
        let mv = m.apply(v)?;
        let w = crate::linalg::inner(v, &mv);
        out = &out + &Matrix::outer(v, v).scale(w);
    }
    Ok(out)
}

impl<T: Real> QuantumChannel<T> for DecoheringChannel<T> {
    fn dim_in(&self) -> usize {
        self.basis.len()
    }

    fn dim_out(&self) -> usize {
        self.basis.len()
    }

    fn apply(&self, m: &Matrix<T>) -> Result<Matrix<T>> {
        apply_decohering(self, m)
    }
}

/// Channel given by Kraus operators `K_k` (each `d_out × d_in`).
#[derive(Debug, Clone, PartialEq)]
pub struct KrausChannel<T: Real> {
    ops: Vec<Matrix<T>>,
}

impl<T: Real> KrausChannel<T> {
    /// Validates trace preservation `Σ K†K = I`.
    pub fn new(ops: Vec<Matrix<T>>) -> Result<Self> {
        let first = ops.first().ok_or_else(|| Error::Dimension("empty Kraus list".into()))?;
        let (d_out, d_in) = (first.rows(), first.cols());
        if ops.iter().any(|k| k.rows() != d_out || k.cols() != d_in) {
            return Err(Error::Dimension("Kraus operators differ in shape".into()));
        }
        let mut sum = Matrix::zeros(d_in, d_in);
        for k in &ops {
            sum = &sum + &k.dagger().matmul(k)?;
        }
        let defect = sum.max_abs_diff(&Matrix::identity(d_in)).unwrap_or_else(T::infinity);
        if defect > T::validity_tol() {
            return Err(Error::NotTracePreserving {
                deviation: defect.to_f64_lossy(),
            });
        }
        Ok(Self { ops })
    }

    pub fn unitary(u: Matrix<T>) -> Result<Self> {
        Self::new(vec![u])
    }

    pub fn ops(&self) -> &[Matrix<T>] {
        &self.ops
    }
}

impl<T: Real> QuantumChannel<T> for KrausChannel<T> {
    fn dim_in(&self) -> usize {
        self.ops[0].cols()
    }

    fn dim_out(&self) -> usize {
        self.ops[0].rows()
    }

    fn apply(&self, m: &Matrix<T>) -> Result<Matrix<T>> {
        check_input(m, self.dim_in())?;
        let mut out = Matrix::zeros(self.dim_out(), self.dim_out());
        for k in &self.ops {
            out = &out + &k.matmul(m)?.matmul(&k.dagger())?;
        }
        Ok(out)
    }
}

/// Any supported channel, as read from or written to channel files.
#[derive(Debug, Clone, PartialEq)]
pub enum Channel<T: Real> {
    Affine(AffineQubitChannel<T>),
    Isotropic(IsotropicChannel<T>),
    Decohering(DecoheringChannel<T>),
    Kraus(KrausChannel<T>),
}

impl<T: Real> QuantumChannel<T> for Channel<T> {
    fn dim_in(&self) -> usize {
        match self {
            Channel::Affine(c) => c.dim_in(),
            Channel::Isotropic(c) => c.dim_in(),
            Channel::Decohering(c) => c.dim_in(),
            Channel::Kraus(c) => c.dim_in(),
        }
    }

    fn dim_out(&self) -> usize {
        match self {
            Channel::Affine(c) => c.dim_out(),
            Channel::Isotropic(c) => c.dim_out(),
            Channel::Decohering(c) => c.dim_out(),
            Channel::Kraus(c) => c.dim_out(),
        }
    }

    fn apply(&self, m: &Matrix<T>) -> Result<Matrix<T>> {
        match self {
            Channel::Affine(c) => c.apply(m),
            Channel::Isotropic(c) => c.apply(m),
            Channel::Decohering(c) => c.apply(m),
            Channel::Kraus(c) => c.apply(m),
        }
    }
}

impl<T: Real> From<AffineQubitChannel<T>> for Channel<T> {
    fn from(c: AffineQubitChannel<T>) -> Self {
        Channel::Affine(c)
    }
}

impl<T: Real> From<IsotropicChannel<T>> for Channel<T> {
    fn from(c: IsotropicChannel<T>) -> Self {
        Channel::Isotropic(c)
    }
}

impl<T: Real> From<DecoheringChannel<T>> for Channel<T> {
    fn from(c: DecoheringChannel<T>) -> Self {
        Channel::Decohering(c)
    }
}

impl<T: Real> From<KrausChannel<T>> for Channel<T> {
    fn from(c: KrausChannel<T>) -> Self {
        Channel::Kraus(c)
    }
}

/// Unnormalized Choi matrix `Σ_ij |i⟩⟨j| ⊗ Φ(|i⟩⟨j|)` (trace `d_in`).
pub fn choi_matrix<T: Real, Ch: QuantumChannel<T> + ?Sized>(ch: &Ch) -> Result<Matrix<T>> {
    let (d_in, d_out) = (ch.dim_in(), ch.dim_out());
    let mut choi = Matrix::zeros(d_in * d_out, d_in * d_out);
    for i in 0..d_in {
        for j in 0..d_in {
            let mut unit = Matrix::zeros(d_in, d_in);
            unit[(i, j)] = re(T::one());
            let image = ch.apply(&unit)?;
            for a in 0..d_out {
                for b in 0..d_out {
                    choi[(i * d_out + a, j * d_out + b)] = image[(a, b)];
                }
            }
        }
    }
    Ok(choi)
}

/// Smallest Choi eigenvalue; nonnegative (up to slack) iff completely positive.
pub fn min_choi_eigenvalue<T: Real, Ch: QuantumChannel<T> + ?Sized>(ch: &Ch) -> Result<T> {
    Ok(eigh(&choi_matrix(ch)?)?.values[0])
}

pub fn is_completely_positive<T: Real, Ch: QuantumChannel<T> + ?Sized>(ch: &Ch) -> bool {
    min_choi_eigenvalue(ch).is_ok_and(|m| m >= -T::psd_slack())
}

/// Kraus form from the Choi eigendecomposition: each eigenpair `(μ, v)` with
/// μ > 0 gives `K[a, i] = √μ · v[i·d_out + a]`.
pub fn channel_to_kraus<T: Real, Ch: QuantumChannel<T> + ?Sized>(ch: &Ch) -> Result<KrausChannel<T>> {
    let (d_in, d_out) = (ch.dim_in(), ch.dim_out());
    let eig = eigh(&choi_matrix(ch)?)?;
    if eig.values[0] < -T::psd_slack() {
        return Err(Error::NotCompletelyPositive {
            min_eigenvalue: eig.values[0].to_f64_lossy(),
        });
    }
    let cutoff = T::lit(1e-14) * T::from_usize(d_in).expect("dimension fits");
    let mut ops = Vec::new();
    for (k, &mu) in eig.values.iter().enumerate() {
        if mu <= cutoff {
            continue;
        }
        let s = mu.sqrt();
        ops.push(Matrix::from_fn(d_out, d_in, |a, i| eig.vectors[(i * d_out + a, k)] * s));
    }
    KrausChannel::new(ops)
}

/// `ρ' = Σ_k (K_k ⊗ I) ρ (K_k ⊗ I)†` (or `I ⊗ K_k` on side B).
pub fn apply_local<T: Real>(ch: &KrausChannel<T>, state: &BipartiteState<T>, side: Side) -> Result<BipartiteState<T>> {
    let (da, db) = state.dims();
    let d_side = match side {
        Side::A => da,
        Side::B => db,
    };
    if ch.dim_in() != d_side {
        return Err(Error::Dimension(format!(
            "Kraus input dimension {} does not match side {side:?} of dimension {d_side}",
            ch.dim_in()
        )));
    }
    let (na, nb) = match side {
        Side::A => (ch.dim_out(), db),
        Side::B => (da, ch.dim_out()),
    };
    let mut out = Matrix::zeros(na * nb, na * nb);
    for k in ch.ops() {
        let lifted = match side {
            Side::A => kron(k, &Matrix::identity(db)),
            Side::B => kron(&Matrix::identity(da), k),
        };
        out = &out + &lifted.matmul(state.rho())?.matmul(&lifted.dagger())?;
    }
    validate_state(out.hermitian_part()?, na, nb)
}

/// `(Φ ⊗ I)ρ` or `(I ⊗ Φ)ρ` by applying `Φ` to each operator block.
///
/// This uses the channel's native action, so it is exact for every family
/// without a Kraus round trip. The output is validated as a state.
pub fn apply_local_map<T: Real, Ch: QuantumChannel<T> + ?Sized>(
    ch: &Ch,
    state: &BipartiteState<T>,
    side: Side,
) -> Result<BipartiteState<T>> {
    let out = local_map_matrix(ch, state, side)?;
    let (na, nb) = match side {
        Side::A => (ch.dim_out(), state.dim_b()),
        Side::B => (state.dim_a(), ch.dim_out()),
    };
    validate_state(out, na, nb)
}

/// As [`apply_local_map`] but skips the eigenvalue check. Callers must pass a
/// completely positive channel.
pub fn apply_local_map_trusted<T: Real, Ch: QuantumChannel<T> + ?Sized>(
    ch: &Ch,
    state: &BipartiteState<T>,
    side: Side,
) -> Result<BipartiteState<T>> {
    let out = local_map_matrix(ch, state, side)?;
    let (na, nb) = match side {
        Side::A => (ch.dim_out(), state.dim_b()),
        Side::B => (state.dim_a(), ch.dim_out()),
    };
    Ok(BipartiteState::from_trusted(out, na, nb))
}

fn local_map_matrix<T: Real, Ch: QuantumChannel<T> + ?Sized>(
    ch: &Ch,
    state: &BipartiteState<T>,
    side: Side,
) -> Result<Matrix<T>> {
    let (da, db) = state.dims();
    let rho = state.rho();
    match side {
        Side::A => {
            if ch.dim_in() != da {
                return Err(Error::Dimension(format!(
                    "channel input {} does not match d_A = {da}",
                    ch.dim_in()
                )));
            }
            let na = ch.dim_out();
            let mut out = Matrix::zeros(na * db, na * db);
            for b in 0..db {
                for b2 in 0..db {
                    let block = Matrix::from_fn(da, da, |a, a2| rho[(a * db + b, a2 * db + b2)]);
                    let image = ch.apply(&block)?;
                    for a in 0..na {
                        for a2 in 0..na {
                            out[(a * db + b, a2 * db + b2)] = image[(a, a2)];
                        }
                    }
                }
            }
            out.hermitian_part()
        }
        Side::B => {
            if ch.dim_in() != db {
                return Err(Error::Dimension(format!(
                    "channel input {} does not match d_B = {db}",
                    ch.dim_in()
                )));
            }
            let nb = ch.dim_out();
            let mut out = Matrix::zeros(da * nb, da * nb);
            for a in 0..da {
                for a2 in 0..da {
                    let block = Matrix::from_fn(db, db, |b, b2| rho[(a * db + b, a2 * db + b2)]);
                    let image = ch.apply(&block)?;
                    for b in 0..nb {
                        for b2 in 0..nb {
                            out[(a * nb + b, a2 * nb + b2)] = image[(b, b2)];
                        }
                    }
                }
            }
            out.hermitian_part()
        }
    }
}

const MAX_REJECTIONS: usize = 10_000;

/// Unital diagonal qubit channel, λ uniform in [-1, 1]³ conditioned on CP.
pub fn random_unital_qubit_channel_with<T: Real>(rng: &mut Rng) -> Result<AffineQubitChannel<T>> {
    for _ in 0..MAX_REJECTIONS {
        let lambda = [
            uniform(rng, -1.0, 1.0),
            uniform(rng, -1.0, 1.0),
            uniform(rng, -1.0, 1.0),
        ];
        let ch = AffineQubitChannel::unital(lambda)?;
        if is_completely_positive(&ch) {
            return Ok(ch);
        }
    }
    Err(Error::Sampler(MAX_REJECTIONS))
}

pub fn random_unital_qubit_channel<T: Real>(seed: RngSeed) -> Result<AffineQubitChannel<T>> {
    random_unital_qubit_channel_with(&mut seed.rng())
}

/// Diagonal affine qubit channel: t uniform in [-1, 1]³, λ_k uniform in
/// [-(1 - |t_k|), 1 - |t_k|], resampled until the Choi matrix is PSD.
pub fn random_affine_qubit_channel_with<T: Real>(rng: &mut Rng) -> Result<AffineQubitChannel<T>> {
    for _ in 0..MAX_REJECTIONS {
        let t: [T; 3] = [
            uniform(rng, -1.0, 1.0),
            uniform(rng, -1.0, 1.0),
            uniform(rng, -1.0, 1.0),
        ];
        let mut lambda = [T::zero(); 3];
        for k in 0..3 {
            let r = (T::one() - t[k].abs()).to_f64_lossy();
            lambda[k] = uniform(rng, -r, r);
        }
        let ch = AffineQubitChannel::new(t, lambda)?;
        if is_completely_positive(&ch) {
            return Ok(ch);
        }
    }
    Err(Error::Sampler(MAX_REJECTIONS))
}

pub fn random_affine_qubit_channel<T: Real>(seed: RngSeed) -> Result<AffineQubitChannel<T>> {
    random_affine_qubit_channel_with(&mut seed.rng())
}

/// p uniform over the admissible interval of `kind`, U Haar.
pub fn random_isotropic_with<T: Real>(d: usize, kind: GammaKind, rng: &mut Rng) -> Result<IsotropicChannel<T>> {
    if d < 2 {
        return Err(Error::Dimension("isotropic channel needs d ≥ 2".into()));
    }
    let (lo, hi) = isotropic_p_range::<T>(d, kind);
    let p = uniform(rng, lo.to_f64_lossy(), hi.to_f64_lossy());
    let u = random_unitary_with(d, rng);
    IsotropicChannel::new(p, kind, u)
}

pub fn random_isotropic<T: Real>(d: usize, kind: GammaKind, seed: RngSeed) -> Result<IsotropicChannel<T>> {
    random_isotropic_with(d, kind, &mut seed.rng())
}

/// Dephasing in a Haar-random basis.
pub fn random_decohering_with<T: Real>(d: usize, rng: &mut Rng) -> Result<DecoheringChannel<T>> {
    DecoheringChannel::from_unitary(&random_unitary_with(d, rng))
}

/// Random channel with `n_ops` Kraus operators, cut from a Haar isometry.
pub fn random_kraus_channel_with<T: Real>(d: usize, n_ops: usize, rng: &mut Rng) -> Result<KrausChannel<T>> {
    if d < 1 || n_ops < 1 {
        return Err(Error::Dimension("Kraus sampler needs d, n_ops ≥ 1".into()));
    }
    let u = random_unitary_with::<T>(d * n_ops, rng);
    // Columns 0..d of U form an isometry V; its row blocks are the K_k.
    let ops = (0..n_ops)
        .map(|k| Matrix::from_fn(d, d, |a, i| u[(k * d + a, i)]))
        .collect();
    KrausChannel::new(ops)
}

/// Unitary conjugation by a Haar-random U.
pub fn random_unitary_channel_with<T: Real>(d: usize, rng: &mut Rng) -> Result<KrausChannel<T>> {
    KrausChannel::unitary(random_unitary_with(d, rng))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::pauli;
    use crate::scalar::c;
    use crate::states::{phi_plus, random_mixed_state};

    fn random_hermitian(seed: u64, d: usize) -> Matrix<f64> {
        random_mixed_state::<f64>(d, 1, d, RngSeed(seed))
            .map(|s| s.into_rho())
            .unwrap_or_else(|_| Matrix::identity(d))
    }

    #[test]
    fn affine_examples() {
        let m = Matrix::from_rows(&[vec![c(0.6, 0.0), c(0.1, -0.3)], vec![c(0.1, 0.3), c(0.4, 0.0)]]).unwrap();
        let id = AffineQubitChannel::<f64>::identity();
        assert!(apply_affine(&id, &m).unwrap().approx_eq(&m, 1e-15));

        let dep = AffineQubitChannel::<f64>::fully_depolarizing();
        let out = apply_affine(&dep, &m).unwrap();
        assert!(out.approx_eq(&Matrix::identity(2).scale_real(0.5), 1e-15));

        let ch = AffineQubitChannel::unital([0.2, -0.5, 0.7]).unwrap();
        let out = apply_affine(&ch, &pauli(3)).unwrap();
        assert!(out.approx_eq(&pauli::<f64>(3).scale_real(0.7), 1e-15));
    }

    #[test]
    fn affine_acts_diagonally_on_paulis() {
        let ch = AffineQubitChannel::new([0.1, -0.2, 0.3], [0.5, -0.4, 0.6]).unwrap();
        // Identity picks up the translation; traceless Paulis are only rescaled.
        let id_image = apply_affine(&ch, &Matrix::identity(2)).unwrap();
        let expected = &(&(&Matrix::identity(2) + &pauli(1).scale_real(0.1)) + &pauli(2).scale_real(-0.2))
            + &pauli(3).scale_real(0.3);
        assert!(id_image.approx_eq(&expected, 1e-15));
        for j in 1..=3 {
            let out = apply_affine(&ch, &pauli(j)).unwrap();
            assert!(out.approx_eq(&pauli::<f64>(j).scale_real(ch.lambda()[j - 1]), 1e-14));
        }
    }

    #[test]
    fn validate_affine_examples() {
        assert!(validate_affine::<f64>([0.0; 3], [1.0; 3]).is_ok());
        match validate_affine::<f64>([0.5, 0.0, 0.0], [0.6, 0.0, 0.0]) {
            Err(Error::Constraint(msg)) => assert!(msg.contains("axis 1")),
            other => panic!("expected constraint error, got {other:?}"),
        }
        assert!(validate_affine::<f64>([0.0; 3], [0.3, -0.7, 0.2]).is_ok());
        assert!(validate_affine::<f64>([1.5, 0.0, 0.0], [0.0; 3]).is_err());
    }

    #[test]
    fn unital_composition_multiplies_lambdas() {
        let a = AffineQubitChannel::<f64>::unital([0.5, -0.6, 0.9]).unwrap();
        let b = AffineQubitChannel::<f64>::unital([-0.3, 0.8, 0.4]).unwrap();
        let ab = a.then(&b).unwrap();
        assert!(ab.is_unital());
        for k in 0..3 {
            assert!((ab.lambda()[k] - a.lambda()[k] * b.lambda()[k]).abs() < 1e-15);
        }
        let m = random_hermitian(3, 2);
        let seq = apply_affine(&b, &apply_affine(&a, &m).unwrap()).unwrap();
        assert!(apply_affine(&ab, &m).unwrap().approx_eq(&seq, 1e-15));
    }

    #[test]
    fn isotropic_examples() {
        let m = random_hermitian(5, 3);
        let id = IsotropicChannel::new(1.0, GammaKind::Unitary, Matrix::identity(3)).unwrap();
        assert!(apply_isotropic(&id, &m).unwrap().approx_eq(&m, 1e-15));

        let dep = IsotropicChannel::new(0.0, GammaKind::Unitary, Matrix::identity(3)).unwrap();
        let expected = Matrix::identity(3).scale(m.trace() / 3.0);
        assert!(apply_isotropic(&dep, &m).unwrap().approx_eq(&expected, 1e-15));

        let half = IsotropicChannel::new(0.5, GammaKind::Unitary, Matrix::identity(2)).unwrap();
        let out = apply_isotropic(&half, &pauli(3)).unwrap();
        assert!(out.approx_eq(&pauli::<f64>(3).scale_real(0.5), 1e-15));

        assert!(apply_isotropic(&half, &m).is_err());
    }

    #[test]
    fn isotropic_p_ranges() {
        let (lo, hi) = isotropic_p_range::<f64>(3, GammaKind::Unitary);
        assert!((lo + 0.125).abs() < 1e-15 && hi == 1.0);
        let (lo, hi) = isotropic_p_range::<f64>(3, GammaKind::Antiunitary);
        assert!((lo + 0.5).abs() < 1e-15 && (hi - 0.25).abs() < 1e-15);
        assert!(IsotropicChannel::new(0.3, GammaKind::Antiunitary, Matrix::<f64>::identity(3)).is_err());
        assert!(IsotropicChannel::new(-0.2, GammaKind::Unitary, Matrix::<f64>::identity(3)).is_err());
        let mut bad = Matrix::<f64>::identity(2);
        bad[(0, 0)] = c(2.0, 0.0);
        assert!(matches!(
            IsotropicChannel::new(0.5, GammaKind::Unitary, bad),
            Err(Error::NotUnitary { .. })
        ));
    }

    #[test]
    fn isotropic_endpoints_are_cp_and_outside_is_not() {
        for d in 2..=4 {
            for kind in [GammaKind::Unitary, GammaKind::Antiunitary] {
                let (lo, hi) = isotropic_p_range::<f64>(d, kind);
                let u = random_unitary_with::<f64>(d, &mut RngSeed(d as u64).rng());
                for p in [lo, hi] {
                    let ch = IsotropicChannel::new(p, kind, u.clone()).unwrap();
                    assert!(min_choi_eigenvalue(&ch).unwrap() > -1e-12, "{kind:?} d={d} p={p}");
                }
                let outside = IsotropicChannel {
                    p: lo - 0.05,
                    kind,
                    u: u.clone(),
                };
                assert!(!is_completely_positive(&outside));
            }
        }
    }

    #[test]
    fn decohering_examples() {
        let comp = DecoheringChannel::<f64>::computational(2);
        assert!(apply_decohering(&comp, &pauli(1)).unwrap().is_zero(1e-15));
        let diag = Matrix::from_real_diag(&[0.3, 0.7]);
        assert!(apply_decohering(&comp, &diag).unwrap().approx_eq(&diag, 1e-15));

        let h = 0.5f64.sqrt();
        let pm = DecoheringChannel::new(vec![vec![c(h, 0.0), c(h, 0.0)], vec![c(h, 0.0), c(-h, 0.0)]]).unwrap();
        assert!(apply_decohering(&pm, &pauli(1)).unwrap().approx_eq(&pauli(1), 1e-15));

        assert!(DecoheringChannel::new(vec![
            vec![c::<f64>(1.0, 0.0), c(0.0, 0.0)],
            vec![c(1.0, 0.0), c(0.0, 0.0)]
        ])
        .is_err());
    }

    #[test]
    fn kraus_examples() {
        let k = channel_to_kraus(&AffineQubitChannel::<f64>::identity()).unwrap();
        assert_eq!(k.ops().len(), 1);
        // Single operator equal to I up to a global phase.
        let op = &k.ops()[0];
        let phase = op[(0, 0)];
        assert!((phase.norm() - 1.0).abs() < 1e-12);
        assert!(op.approx_eq(&Matrix::identity(2).scale(phase), 1e-12));

        // Depolarizing: normalized Choi is I₄/4 and the Kraus rank is 4.
        let dep = AffineQubitChannel::<f64>::fully_depolarizing();
        let choi = choi_matrix(&dep).unwrap().scale_real(0.5);
        assert!(choi.approx_eq(&Matrix::identity(4).scale_real(0.25), 1e-15));
        let k = channel_to_kraus(&dep).unwrap();
        assert_eq!(k.ops().len(), 4);
        for s in 0..5 {
            let m = random_hermitian(s, 2);
            assert!(k.apply(&m).unwrap().approx_eq(&dep.apply(&m).unwrap(), 1e-12));
        }

        // Computational dephasing: Kraus {|0⟩⟨0|, |1⟩⟨1|} up to phases.
        let k = channel_to_kraus(&DecoheringChannel::<f64>::computational(2)).unwrap();
        assert_eq!(k.ops().len(), 2);
        for op in k.ops() {
            assert!(op[(0, 1)].norm() < 1e-14 && op[(1, 0)].norm() < 1e-14);
            assert!((op[(0, 0)].norm() + op[(1, 1)].norm() - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn positive_but_not_cp_affine_is_rejected() {
        // Transpose-like map: λ = (1, -1, 1) passes the axis bound but is not CP.
        let ch = AffineQubitChannel::<f64>::unital([1.0, -1.0, 1.0]).unwrap();
        assert!(matches!(
            channel_to_kraus(&ch),
            Err(Error::NotCompletelyPositive { .. })
        ));
    }

    #[test]
    fn kraus_rejects_non_trace_preserving() {
        let half = Matrix::<f64>::identity(2).scale_real(0.5);
        assert!(matches!(
            KrausChannel::new(vec![half]),
            Err(Error::NotTracePreserving { .. })
        ));
    }

    #[test]
    fn kraus_round_trip_all_families() {
        let mut rng = RngSeed(77).rng();
        let channels: Vec<Channel<f64>> = vec![
            random_unital_qubit_channel_with(&mut rng).unwrap().into(),
            random_affine_qubit_channel_with(&mut rng).unwrap().into(),
            random_isotropic_with(3, GammaKind::Unitary, &mut rng).unwrap().into(),
            random_isotropic_with(3, GammaKind::Antiunitary, &mut rng)
                .unwrap()
                .into(),
            random_decohering_with(3, &mut rng).unwrap().into(),
            random_kraus_channel_with(2, 3, &mut rng).unwrap().into(),
        ];
        for ch in &channels {
            let k = channel_to_kraus(ch).unwrap();
            for _ in 0..1000 {
                let d = ch.dim_in();
                let m = Matrix::from_fn(d, d, |_, _| crate::rng::complex_gaussian(&mut rng));
                let native = ch.apply(&m).unwrap();
                let via = k.apply(&m).unwrap();
                assert!(native.approx_eq(&via, 1e-10));
                // trace preservation on arbitrary (non-Hermitian) inputs
                assert!((native.trace() - m.trace()).norm() < 1e-13);
            }
            let h = random_hermitian(4, ch.dim_in());
            assert!(ch.apply(&h).unwrap().is_hermitian(1e-12));
        }
    }

    #[test]
    fn unital_channels_fix_identity_exactly() {
        let mut rng = RngSeed(8).rng();
        for _ in 0..100 {
            let ch = random_unital_qubit_channel_with::<f64>(&mut rng).unwrap();
            assert_eq!(apply_affine(&ch, &Matrix::identity(2)).unwrap(), Matrix::identity(2));
        }
    }

    #[test]
    fn samplers_respect_constraints() {
        let mut rng = RngSeed(99).rng();
        for _ in 0..200 {
            let u = random_unital_qubit_channel_with::<f64>(&mut rng).unwrap();
            assert!(u.is_unital() && channel_to_kraus(&u).is_ok());
            let a = random_affine_qubit_channel_with::<f64>(&mut rng).unwrap();
            assert!(validate_affine(a.t(), a.lambda()).is_ok() && channel_to_kraus(&a).is_ok());
            for kind in [GammaKind::Unitary, GammaKind::Antiunitary] {
                let iso = random_isotropic_with::<f64>(3, kind, &mut rng).unwrap();
                let (lo, hi) = isotropic_p_range::<f64>(3, kind);
                assert!(iso.p() >= lo && iso.p() <= hi);
                assert!(channel_to_kraus(&iso).is_ok());
            }
        }
        assert_eq!(
            random_affine_qubit_channel::<f64>(RngSeed(5)).unwrap(),
            random_affine_qubit_channel::<f64>(RngSeed(5)).unwrap()
        );
        assert_eq!(
            random_isotropic::<f64>(3, GammaKind::Unitary, RngSeed(5)).unwrap(),
            random_isotropic::<f64>(3, GammaKind::Unitary, RngSeed(5)).unwrap()
        );
    }

    #[test]
    fn local_application_examples() {
        let phi = phi_plus::<f64>();
        let id = channel_to_kraus(&AffineQubitChannel::<f64>::identity()).unwrap();
        for side in [Side::A, Side::B] {
            let out = apply_local(&id, &phi, side).unwrap();
            assert!(out.rho().approx_eq(phi.rho(), 1e-12));
        }

        // Oracle: explicit Kraus sum with Paulis/2 on A.
        let mut oracle = Matrix::<f64>::zeros(4, 4);
        for k in 0..4 {
            let op = kron(&pauli::<f64>(k).scale_real(0.5), &Matrix::identity(2));
            oracle = &oracle + &(&(&op * phi.rho()) * &op.dagger());
        }
        assert!(oracle.approx_eq(&Matrix::identity(4).scale_real(0.25), 1e-15));
        let dep = channel_to_kraus(&AffineQubitChannel::<f64>::fully_depolarizing()).unwrap();
        let out = apply_local(&dep, &phi, Side::A).unwrap();
        assert!(out.rho().approx_eq(&oracle, 1e-12));

        let three = channel_to_kraus(&DecoheringChannel::<f64>::computational(3)).unwrap();
        assert!(matches!(apply_local(&three, &phi, Side::A), Err(Error::Dimension(_))));
    }

    #[test]
    fn blockwise_and_kraus_local_application_agree() {
        let mut rng = RngSeed(123).rng();
        let state = random_mixed_state::<f64>(3, 2, 6, RngSeed(4)).unwrap();
        let iso: Channel<f64> = random_isotropic_with(3, GammaKind::Antiunitary, &mut rng)
            .unwrap()
            .into();
        let aff: Channel<f64> = random_affine_qubit_channel_with(&mut rng).unwrap().into();
        let a = apply_local_map(&iso, &state, Side::A).unwrap();
        let b = apply_local(&channel_to_kraus(&iso).unwrap(), &state, Side::A).unwrap();
        assert!(a.rho().approx_eq(b.rho(), 1e-12));
        let a = apply_local_map(&aff, &state, Side::B).unwrap();
        let b = apply_local(&channel_to_kraus(&aff).unwrap(), &state, Side::B).unwrap();
        assert!(a.rho().approx_eq(b.rho(), 1e-12));
    }

    #[test]
    fn decohering_on_a_yields_diagonal_blocks() {
        let state = random_mixed_state::<f64>(2, 3, 6, RngSeed(6)).unwrap();
        let out = apply_local_map(&DecoheringChannel::computational(2), &state, Side::A).unwrap();
        let rho = out.rho();
        for b in 0..3 {
            for b2 in 0..3 {
                assert!(rho[(b, 3 + b2)].norm() < 1e-15);
                assert!(rho[(3 + b, b2)].norm() < 1e-15);
            }
        }
    }
}
