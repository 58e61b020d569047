// Copyright 2026 The qcorr Authors
// SPDX-License-Identifier: Apache-2.0

//! Dense complex matrices.
//!
//! Matrices here are small (at most a few dozen rows), so everything is stored
//! row-major in a flat `Vec` and every operation checks its dimensions up front.

use std::fmt;
use std::ops::{Add, Index, IndexMut, Mul, Neg, Sub};

use num_complex::Complex;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::scalar::{re, Real, C};

/// Dense complex matrix stored in row-major order.
#[derive(Clone, PartialEq)]
pub struct Matrix<T: Real> {
    rows: usize,
    cols: usize,
    data: Vec<C<T>>,
}

/// Column vector of complex amplitudes.
pub type Vector<T> = Vec<C<T>>;

/// Subsystem selector for partial traces and local channels.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
pub enum Side {
    A,
    B,
}

impl<T: Real> Matrix<T> {
    pub fn new(rows: usize, cols: usize, data: Vec<C<T>>) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(Error::Dimension(format!("empty matrix {rows}x{cols}")));
        }
        if data.len() != rows * cols {
            return Err(Error::Dimension(format!(
                "{} entries for a {rows}x{cols} matrix",
                data.len()
            )));
        }
        if data.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::NonFinite);
        }
        Ok(Self { rows, cols, data })
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![C::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        Self::from_fn(n, n, |i, j| if i == j { C::one() } else { C::zero() })
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> C<T>) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Self { rows, cols, data }
    }

    pub fn from_real_diag(diag: &[T]) -> Self {
        let n = diag.len();
        Self::from_fn(n, n, |i, j| if i == j { re(diag[i]) } else { C::zero() })
    }

    /// Square matrix from nested rows; convenient for literals in tests.
    pub fn from_rows(rows: &[Vec<C<T>>]) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::Dimension("ragged rows".into()));
        }
        Self::new(r, c, rows.concat())
    }

    /// |u⟩⟨v|
    pub fn outer(u: &[C<T>], v: &[C<T>]) -> Self {
        Self::from_fn(u.len(), v.len(), |i, j| u[i] * v[j].conj())
    }

    /// Matrix whose columns are the given vectors.
    pub fn from_columns(cols: &[Vector<T>]) -> Result<Self> {
        let n = cols.len();
        let m = cols.first().map_or(0, Vec::len);
        if cols.iter().any(|c| c.len() != m) {
            return Err(Error::Dimension("columns of unequal length".into()));
        }
        Self::new(m, n, (0..m).flat_map(|i| cols.iter().map(move |c| c[i])).collect())
    }

    #[inline]
    pub fn rows(&self) -> usize {
        self.rows
    }

    #[inline]
    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn as_slice(&self) -> &[C<T>] {
        &self.data
    }

    pub fn into_vec(self) -> Vec<C<T>> {
        self.data
    }

    pub fn column(&self, j: usize) -> Vector<T> {
        (0..self.rows).map(|i| self[(i, j)]).collect()
    }

    /// Side length of a square matrix.
    pub fn dim(&self) -> Result<usize> {
        if self.is_square() {
            Ok(self.rows)
        } else {
            Err(Error::Dimension(format!(
                "expected square matrix, got {}x{}",
                self.rows, self.cols
            )))
        }
    }

    pub fn map(&self, f: impl Fn(C<T>) -> C<T>) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|&z| f(z)).collect(),
        }
    }

    pub fn scale(&self, s: C<T>) -> Self {
        self.map(|z| z * s)
    }

    pub fn scale_real(&self, s: T) -> Self {
        self.map(|z| z * s)
    }

    pub fn trace(&self) -> C<T> {
        (0..self.rows.min(self.cols))
            .map(|i| self[(i, i)])
            .fold(C::zero(), |a, b| a + b)
    }

    pub fn dagger(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)].conj())
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)])
    }

    pub fn conj(&self) -> Self {
        self.map(|z| z.conj())
    }

    pub fn matmul(&self, rhs: &Self) -> Result<Self> {
        if self.cols != rhs.rows {
            return Err(Error::Dimension(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, rhs.rows, rhs.cols
            )));
        }
        let mut out = Self::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..rhs.cols {
                    out.data[i * rhs.cols + j] = out.data[i * rhs.cols + j] + a * rhs[(k, j)];
                }
            }
        }
        Ok(out)
    }

    pub fn apply(&self, v: &[C<T>]) -> Result<Vector<T>> {
        if v.len() != self.cols {
            return Err(Error::Dimension(format!(
                "cannot apply {}x{} matrix to length-{} vector",
                self.rows,
                self.cols,
                v.len()
            )));
        }
        Ok((0..self.rows)
            .map(|i| {
                (0..self.cols)
                    .map(|j| self[(i, j)] * v[j])
                    .fold(C::zero(), |a, b| a + b)
            })
            .collect())
    }

    fn zip_with(&self, rhs: &Self, f: impl Fn(C<T>, C<T>) -> C<T>) -> Result<Self> {
        if self.rows != rhs.rows || self.cols != rhs.cols {
            return Err(Error::Dimension(format!(
                "shape mismatch {}x{} vs {}x{}",
                self.rows, self.cols, rhs.rows, rhs.cols
            )));
        }
        Ok(Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(&a, &b)| f(a, b)).collect(),
        })
    }

    pub fn try_add(&self, rhs: &Self) -> Result<Self> {
        self.zip_with(rhs, |a, b| a + b)
    }

    pub fn try_sub(&self, rhs: &Self) -> Result<Self> {
        self.zip_with(rhs, |a, b| a - b)
    }

    /// Tensor product `self ⊗ rhs`.
    pub fn kron(&self, rhs: &Self) -> Self {
        let (r, c) = (rhs.rows, rhs.cols);
        Self::from_fn(self.rows * r, self.cols * c, |i, j| {
            self[(i / r, j / c)] * rhs[(i % r, j % c)]
        })
    }

    /// Sum of squared entry magnitudes, Tr(M†M).
    pub fn frobenius_sq(&self) -> T {
        self.data.iter().fold(T::zero(), |acc, z| acc + z.norm_sqr())
    }

    pub fn max_abs(&self) -> T {
        self.data.iter().fold(T::zero(), |acc, z| acc.max(z.norm()))
    }

    /// Largest entrywise distance; `None` on shape mismatch.
    pub fn max_abs_diff(&self, rhs: &Self) -> Option<T> {
        self.zip_with(rhs, |a, b| a - b).ok().map(|d| d.max_abs())
    }

    pub fn approx_eq(&self, rhs: &Self, tol: T) -> bool {
        self.max_abs_diff(rhs).is_some_and(|d| d <= tol)
    }

    /// max |M - M†|, or an error for non-square input.
    pub fn hermiticity_defect(&self) -> Result<T> {
        let n = self.dim()?;
        let mut worst = T::zero();
        for i in 0..n {
            for j in i..n {
                worst = worst.max((self[(i, j)] - self[(j, i)].conj()).norm());
            }
        }
        Ok(worst)
    }

    pub fn is_hermitian(&self, tol: T) -> bool {
        self.hermiticity_defect().is_ok_and(|d| d <= tol)
    }

    /// (M + M†)/2
    pub fn hermitian_part(&self) -> Result<Self> {
        let n = self.dim()?;
        let half = T::lit(0.5);
        Ok(Self::from_fn(n, n, |i, j| (self[(i, j)] + self[(j, i)].conj()) * half))
    }

    /// max |M†M - I|
    pub fn unitarity_defect(&self) -> Result<T> {
        let n = self.dim()?;
        let gram = self.dagger().matmul(self)?;
        Ok(gram.max_abs_diff(&Self::identity(n)).unwrap_or_else(T::infinity))
    }

    pub fn is_unitary(&self, tol: T) -> bool {
        self.unitarity_defect().is_ok_and(|d| d <= tol)
    }

    pub fn is_zero(&self, tol: T) -> bool {
        self.max_abs() <= tol
    }
}

impl<T: Real> Index<(usize, usize)> for Matrix<T> {
    type Output = C<T>;

    #[inline]
    fn index(&self, (i, j): (usize, usize)) -> &C<T> {
        &self.data[i * self.cols + j]
    }
}

impl<T: Real> IndexMut<(usize, usize)> for Matrix<T> {
    #[inline]
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut C<T> {
        &mut self.data[i * self.cols + j]
    }
}

// Operator impls panic on shape mismatch; use the `try_*` / `matmul` methods
// where dimensions come from user input.
impl<T: Real> Mul for &Matrix<T> {
    type Output = Matrix<T>;

    fn mul(self, rhs: Self) -> Matrix<T> {
        self.matmul(rhs).expect("matrix product shape mismatch")
    }
}

impl<T: Real> Add for &Matrix<T> {
    type Output = Matrix<T>;

    fn add(self, rhs: Self) -> Matrix<T> {
        self.try_add(rhs).expect("matrix sum shape mismatch")
    }
}

impl<T: Real> Sub for &Matrix<T> {
    type Output = Matrix<T>;

    fn sub(self, rhs: Self) -> Matrix<T> {
        self.try_sub(rhs).expect("matrix difference shape mismatch")
    }
}

impl<T: Real> Neg for &Matrix<T> {
    type Output = Matrix<T>;

    fn neg(self) -> Matrix<T> {
        self.map(|z| -z)
    }
}

impl<T: Real> fmt::Debug for Matrix<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Matrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            write!(f, "  ")?;
            for j in 0..self.cols {
                let z = self[(i, j)];
                write!(f, "{:+.6}{:+.6}i  ", z.re, z.im)?;
            }
            writeln!(f)?;
        }
        write!(f, "]")
    }
}

/// Hilbert-Schmidt norm sqrt(Tr(M†M)).
///
/// Entries are summed in mirrored pairs `(i, j)`, `(j, i)` so that the result
/// for `Mᵀ` is bit-identical.
pub fn hs_norm<T: Real>(m: &Matrix<T>) -> Result<T> {
    let n = m.dim()?;
    let mut sum = T::zero();
    for i in 0..n {
        sum = sum + m[(i, i)].norm_sqr();
        for j in i + 1..n {
            sum = sum + (m[(i, j)].norm_sqr() + m[(j, i)].norm_sqr());
        }
    }
    Ok(sum.sqrt())
}

/// `AB - BA`
pub fn commutator<T: Real>(a: &Matrix<T>, b: &Matrix<T>) -> Result<Matrix<T>> {
    let n = a.dim()?;
    if b.dim()? != n {
        return Err(Error::Dimension(format!(
            "commutator of {n}x{n} and {}x{} matrices",
            b.rows, b.cols
        )));
    }
    let mut out = Matrix::zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            let mut acc = C::zero();
            for k in 0..n {
                acc = acc + a[(i, k)] * b[(k, j)] - b[(i, k)] * a[(k, j)];
            }
            out[(i, j)] = acc;
        }
    }
    Ok(out)
}

/// ||[A, B]||₂ without materializing the commutator.
pub fn commutator_norm<T: Real>(a: &Matrix<T>, b: &Matrix<T>) -> Result<T> {
    let n = a.dim()?;
    if b.dim()? != n {
        return Err(Error::Dimension("commutator operands differ in size".into()));
    }
    let mut acc = T::zero();
    for i in 0..n {
        for j in 0..n {
            let mut z = C::zero();
            for k in 0..n {
                z = z + a[(i, k)] * b[(k, j)] - b[(i, k)] * a[(k, j)];
            }
            acc = acc + z.norm_sqr();
        }
    }
    Ok(acc.sqrt())
}

pub fn kron<T: Real>(a: &Matrix<T>, b: &Matrix<T>) -> Matrix<T> {
    a.kron(b)
}

pub fn dagger<T: Real>(m: &Matrix<T>) -> Matrix<T> {
    m.dagger()
}

pub fn transpose<T: Real>(m: &Matrix<T>) -> Matrix<T> {
    m.transpose()
}

/// U M U†
pub fn conjugate_by<T: Real>(u: &Matrix<T>, m: &Matrix<T>) -> Result<Matrix<T>> {
    u.matmul(m)?.matmul(&u.dagger())
}

/// Inner product ⟨u|v⟩.
pub fn inner<T: Real>(u: &[C<T>], v: &[C<T>]) -> C<T> {
    u.iter()
        .zip(v)
        .map(|(a, b)| a.conj() * b)
        .fold(C::zero(), |acc, z| acc + z)
}

pub fn vector_norm<T: Real>(v: &[C<T>]) -> T {
    v.iter().fold(T::zero(), |acc, z| acc + z.norm_sqr()).sqrt()
}

/// max |⟨u_i|u_j⟩ - δ_ij| over a family of vectors.
pub fn orthonormality_defect<T: Real>(vs: &[Vector<T>]) -> T {
    let mut worst = T::zero();
    for (i, u) in vs.iter().enumerate() {
        for (j, v) in vs.iter().enumerate().skip(i) {
            let target = if i == j { C::one() } else { C::zero() };
            worst = worst.max((inner(u, v) - target).norm());
        }
    }
    worst
}

/// Computational basis vector |k⟩ in dimension `d`.
pub fn basis_vector<T: Real>(d: usize, k: usize) -> Vector<T> {
    (0..d).map(|i| if i == k { C::one() } else { C::zero() }).collect()
}

/// Pauli matrices (I, σ₁, σ₂, σ₃).
pub fn pauli<T: Real>(k: usize) -> Matrix<T> {
    let (o, z, i) = (C::<T>::one(), C::<T>::zero(), Complex::new(T::zero(), T::one()));
    let data = match k {
        0 => vec![o, z, z, o],
        1 => vec![z, o, o, z],
        2 => vec![z, -i, i, z],
        3 => vec![o, z, z, -o],
        _ => panic!("Pauli index {k} out of range"),
    };
    Matrix { rows: 2, cols: 2, data }
}

/// Eigenvalues and eigenvectors of a Hermitian matrix.
#[derive(Clone, Debug)]
pub struct HermitianEigen<T: Real> {
    /// Ascending eigenvalues.
    pub values: Vec<T>,
    /// Column `k` is the eigenvector of `values[k]`.
    pub vectors: Matrix<T>,
}

/// Ascending eigenvalues of a Hermitian matrix.
pub fn eig_hermitian<T: Real>(m: &Matrix<T>) -> Result<Vec<T>> {
    Ok(eigh(m)?.values)
}

/// Cyclic Jacobi eigendecomposition of a Hermitian matrix.
///
/// The input is symmetrized as (M + M†)/2 first. Sweeps stop once the
/// off-diagonal Frobenius mass drops below `T::JACOBI_TOL` (scaled by the
/// matrix norm when that exceeds one).
pub fn eigh<T: Real>(m: &Matrix<T>) -> Result<HermitianEigen<T>> {
    let n = m.dim()?;
    let defect = m.hermiticity_defect()?;
    if defect > T::hermitian_tol() {
        return Err(Error::NotHermitian {
            deviation: defect.to_f64_lossy(),
        });
    }
    let mut a = m.hermitian_part()?;
    let mut v = Matrix::<T>::identity(n);
    let scale = a.frobenius_sq().sqrt().max(T::one());
    let tol = T::lit(T::JACOBI_TOL) * scale;

    let off = |a: &Matrix<T>| {
        let mut s = T::zero();
        for i in 0..n {
            for j in 0..n {
                if i != j {
                    s = s + a[(i, j)].norm_sqr();
                }
            }
        }
        s.sqrt()
    };

    const MAX_SWEEPS: usize = 100;
    let mut sweeps = 0;
    while off(&a) > tol && sweeps < MAX_SWEEPS {
        sweeps += 1;
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = a[(p, q)];
                let r = apq.norm();
                if r <= T::min_positive_value() {
                    continue;
                }
                // Rephase column q so the pivot is real, then rotate as in the
                // real symmetric case.
                let phase = apq / r;
                let app = a[(p, p)].re;
                let aqq = a[(q, q)].re;
                let tau = (aqq - app) / (r + r);
                let t = tau.signum() / (tau.abs() + (T::one() + tau * tau).sqrt());
                let cs = T::one() / (T::one() + t * t).sqrt();
                let sn = t * cs;
                let ph = phase.conj();
                // Rotation J restricted to the (p, q) plane.
                let j_pp = re(cs);
                let j_pq = re(sn);
                let j_qp = ph * (-sn);
                let j_qq = ph * cs;

                for k in 0..n {
                    let akp = a[(k, p)];
                    let akq = a[(k, q)];
                    a[(k, p)] = akp * j_pp + akq * j_qp;
                    a[(k, q)] = akp * j_pq + akq * j_qq;
                }
                for k in 0..n {
                    let apk = a[(p, k)];
                    let aqk = a[(q, k)];
                    a[(p, k)] = j_pp.conj() * apk + j_qp.conj() * aqk;
                    a[(q, k)] = j_pq.conj() * apk + j_qq.conj() * aqk;
                }
                a[(p, q)] = C::zero();
                a[(q, p)] = C::zero();
                a[(p, p)] = re(a[(p, p)].re);
                a[(q, q)] = re(a[(q, q)].re);

                for k in 0..n {
                    let vkp = v[(k, p)];
                    let vkq = v[(k, q)];
                    v[(k, p)] = vkp * j_pp + vkq * j_qp;
                    v[(k, q)] = vkp * j_pq + vkq * j_qq;
                }
            }
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| {
        a[(i, i)]
            .re
            .partial_cmp(&a[(j, j)].re)
            .unwrap_or(std::cmp::Ordering::Equal)
    });
    let values = order.iter().map(|&i| a[(i, i)].re).collect();
    let vectors = Matrix::from_fn(n, n, |r, c| v[(r, order[c])]);
    Ok(HermitianEigen { values, vectors })
}

/// Partial trace of an operator on H_A ⊗ H_B, keeping the chosen factor.
pub fn partial_trace<T: Real>(m: &Matrix<T>, (dim_a, dim_b): (usize, usize), keep: Side) -> Result<Matrix<T>> {
    let n = m.dim()?;
    if dim_a == 0 || dim_b == 0 || dim_a * dim_b != n {
        return Err(Error::Dimension(format!(
            "{n}x{n} matrix does not factor as {dim_a}x{dim_b}"
        )));
    }
    let idx = |a: usize, b: usize| a * dim_b + b;
    Ok(match keep {
        Side::A => Matrix::from_fn(dim_a, dim_a, |a, a2| {
            (0..dim_b).fold(C::zero(), |acc, b| acc + m[(idx(a, b), idx(a2, b))])
        }),
        Side::B => Matrix::from_fn(dim_b, dim_b, |b, b2| {
            (0..dim_a).fold(C::zero(), |acc, a| acc + m[(idx(a, b), idx(a, b2))])
        }),
    })
}

/// exp(iH) for Hermitian H, via its eigendecomposition.
pub fn expi_hermitian<T: Real>(h: &Matrix<T>) -> Result<Matrix<T>> {
    let eig = eigh(h)?;
    let n = eig.values.len();
    let phases: Vec<C<T>> = eig.values.iter().map(|&x| Complex::new(x.cos(), x.sin())).collect();
    let v = &eig.vectors;
    Ok(Matrix::from_fn(n, n, |i, j| {
        (0..n).fold(C::zero(), |acc, k| acc + v[(i, k)] * phases[k] * v[(j, k)].conj())
    }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::c;

    fn sigma(k: usize) -> Matrix<f64> {
        pauli(k)
    }

    fn random_matrix(n: usize, seed: u64) -> Matrix<f64> {
        // Small LCG keeps these unit tests independent of the sampling module.
        let mut s = seed.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
        let mut next = || {
            s = s.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            ((s >> 11) as f64) / ((1u64 << 53) as f64) - 0.5
        };
        Matrix::from_fn(n, n, |_, _| Complex::new(next(), next()))
    }

    #[test]
    fn hs_norm_examples() {
        assert!((hs_norm(&Matrix::<f64>::identity(2)).unwrap() - 2f64.sqrt()).abs() < 1e-15);
        assert!((hs_norm(&sigma(1)).unwrap() - 2f64.sqrt()).abs() < 1e-15);
        assert_eq!(hs_norm(&Matrix::<f64>::zeros(3, 3)).unwrap(), 0.0);
        assert!(matches!(hs_norm(&Matrix::<f64>::zeros(2, 3)), Err(Error::Dimension(_))));
    }

    #[test]
    fn commutator_examples() {
        let comm = commutator(&sigma(1), &sigma(2)).unwrap();
        let expected = sigma(3).scale(c(0.0, 2.0));
        assert!(comm.approx_eq(&expected, 1e-15));

        let a = random_matrix(3, 7);
        assert!(commutator(&a, &a).unwrap().is_zero(1e-15));
        assert!(commutator(&Matrix::identity(3), &a).unwrap().is_zero(1e-15));
        assert!(commutator(&a, &Matrix::identity(2)).is_err());
    }

    #[test]
    fn commutator_norm_matches_materialized() {
        let a = random_matrix(4, 1);
        let b = random_matrix(4, 2);
        let direct = hs_norm(&commutator(&a, &b).unwrap()).unwrap();
        assert!((commutator_norm(&a, &b).unwrap() - direct).abs() < 1e-14);
    }

    #[test]
    fn kron_dagger_transpose() {
        let i2 = Matrix::<f64>::identity(2);
        assert_eq!(kron(&i2, &i2), Matrix::identity(4));
        assert!(dagger(&sigma(2)).approx_eq(&sigma(2), 0.0));
        assert!(transpose(&sigma(2)).approx_eq(&(-&sigma(2)), 0.0));

        // (A ⊗ B)(C ⊗ D) = AC ⊗ BD
        let (a, b, cm, d) = (
            random_matrix(2, 3),
            random_matrix(3, 4),
            random_matrix(2, 5),
            random_matrix(3, 6),
        );
        let lhs = &kron(&a, &b) * &kron(&cm, &d);
        let rhs = kron(&(&a * &cm), &(&b * &d));
        assert!(lhs.approx_eq(&rhs, 1e-14));
    }

    #[test]
    fn eigenvalue_examples() {
        let ev = eig_hermitian(&sigma(3)).unwrap();
        assert!((ev[0] + 1.0).abs() < 1e-15 && (ev[1] - 1.0).abs() < 1e-15);
        assert_eq!(eig_hermitian(&Matrix::<f64>::identity(3)).unwrap(), vec![1.0; 3]);
        let ev = eig_hermitian(&Matrix::from_real_diag(&[0.9f64, 0.1])).unwrap();
        assert!((ev[0] - 0.1).abs() < 1e-15 && (ev[1] - 0.9).abs() < 1e-15);
    }

    #[test]
    fn eigh_rejects_non_hermitian() {
        let mut m = Matrix::<f64>::zeros(2, 2);
        m[(0, 1)] = c(1.0, 0.0);
        assert!(matches!(eig_hermitian(&m), Err(Error::NotHermitian { .. })));
    }

    #[test]
    fn eigh_reconstructs_random_hermitian() {
        for seed in 0..50 {
            let n = 2 + (seed as usize % 8);
            let g = random_matrix(n, seed);
            let h = (&g + &g.dagger()).scale_real(0.5);
            let eig = eigh(&h).unwrap();
            let v = &eig.vectors;
            assert!(v.is_unitary(1e-12), "eigenvectors not unitary (n={n})");
            let rebuilt = &(v * &Matrix::from_real_diag(&eig.values)) * &v.dagger();
            assert!(rebuilt.approx_eq(&h, 1e-12), "reconstruction failed (n={n})");
            let tr: f64 = eig.values.iter().sum();
            assert!((tr - h.trace().re).abs() < 1e-10);
            assert!(eig.values.windows(2).all(|w| w[0] <= w[1]));
        }
    }

    #[test]
    fn eigh_degenerate_spectrum() {
        // Projector of rank 2 in dimension 4: eigenvalues {0, 0, 1, 1}.
        let u: Vector<f64> = vec![c(0.5, 0.0), c(0.5, 0.0), c(0.0, 0.5), c(0.0, -0.5)];
        let w: Vector<f64> = vec![c(0.5, 0.0), c(-0.5, 0.0), c(0.5, 0.0), c(0.5, 0.0)];
        let p = &Matrix::outer(&u, &u) + &Matrix::outer(&w, &w);
        let ev = eig_hermitian(&p).unwrap();
        for (x, e) in ev.iter().zip([0.0, 0.0, 1.0, 1.0]) {
            assert!((x - e).abs() < 1e-13);
        }
    }

    #[test]
    fn partial_trace_examples() {
        let rho_a = Matrix::from_rows(&[vec![c(0.7, 0.0), c(0.1, 0.2)], vec![c(0.1, -0.2), c(0.3, 0.0)]]).unwrap();
        let rho_b = Matrix::from_real_diag(&[0.2, 0.5, 0.3]);
        let prod = kron(&rho_a, &rho_b);
        assert!(partial_trace(&prod, (2, 3), Side::A).unwrap().approx_eq(&rho_a, 1e-15));
        assert!(partial_trace(&prod, (2, 3), Side::B).unwrap().approx_eq(&rho_b, 1e-15));

        let h = 0.5f64.sqrt();
        let phi: Vector<f64> = vec![c(h, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(h, 0.0)];
        let bell = Matrix::outer(&phi, &phi);
        let half_id = Matrix::<f64>::identity(2).scale_real(0.5);
        assert!(partial_trace(&bell, (2, 2), Side::A)
            .unwrap()
            .approx_eq(&half_id, 1e-15));
        assert!(partial_trace(&bell, (3, 2), Side::A).is_err());
    }

    #[test]
    fn partial_trace_index_sum_oracle() {
        // Oracle: explicit Σ_b ⟨a b|M|a' b⟩ with independent index arithmetic.
        let m = random_matrix(6, 11);
        let pa = partial_trace(&m, (2, 3), Side::A).unwrap();
        let pb = partial_trace(&m, (2, 3), Side::B).unwrap();
        for a in 0..2 {
            for a2 in 0..2 {
                let mut s = Complex::new(0.0, 0.0);
                for b in 0..3 {
                    s += m.as_slice()[(3 * a + b) * 6 + 3 * a2 + b];
                }
                assert!((pa[(a, a2)] - s).norm() < 1e-15);
            }
        }
        assert!((pa.trace() - m.trace()).norm() < 1e-12);
        assert!((pb.trace() - m.trace()).norm() < 1e-12);
    }

    #[test]
    fn expi_of_pauli() {
        // exp(iθσ₃) = diag(e^{iθ}, e^{-iθ})
        let th = 0.37;
        let u = expi_hermitian(&sigma(3).scale_real(th)).unwrap();
        assert!((u[(0, 0)] - Complex::new(th.cos(), th.sin())).norm() < 1e-14);
        assert!((u[(1, 1)] - Complex::new(th.cos(), -th.sin())).norm() < 1e-14);
        assert!(u.is_unitary(1e-13));
    }

    #[test]
    fn f32_path_runs() {
        let s: Matrix<f32> = pauli(1);
        let ev = eig_hermitian(&s).unwrap();
        assert!((ev[0] + 1.0).abs() < 1e-6 && (ev[1] - 1.0).abs() < 1e-6);
    }
}
