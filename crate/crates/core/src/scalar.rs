// Copyright 2026 The qcorr Authors
// SPDX-License-Identifier: Apache-2.0

//! Scalar abstraction shared by every numerical module.
//!
//! All matrix code is written against [`Real`], so the same routines run in
//! `f64` (the reference precision, every tolerance in this crate is pinned for
//! it) and in `f32` (useful for quick sweeps). Tolerances that must scale with
//! machine precision live on the trait.

use std::fmt::{Debug, Display};

use num_complex::Complex;
use num_traits::{Float, FloatConst, FromPrimitive, ToPrimitive};

/// Real scalar type usable as the component type of complex matrices.
pub trait Real:
    Float + FloatConst + FromPrimitive + ToPrimitive + Debug + Display + Default + Send + Sync + 'static
{
    /// Maximum entrywise |M - M†| accepted as Hermitian.
    const HERMITIAN_TOL: f64;
    /// Slack for trace, unitarity and orthonormality checks.
    const VALIDITY_TOL: f64;
    /// Eigenvalues above `-PSD_SLACK` count as nonnegative.
    const PSD_SLACK: f64;
    /// Off-diagonal Frobenius mass at which a Jacobi sweep stops.
    const JACOBI_TOL: f64;
    /// Tight slack for exact-by-construction checks (probability sums,
    /// Bell-diagonal spectra, affine constraints).
    const TIGHT_TOL: f64;

    /// Converts an `f64` literal; panics only for non-representable values.
    #[inline]
    fn lit(x: f64) -> Self {
        Self::from_f64(x).expect("literal representable in scalar type")
    }

    #[inline]
    fn to_f64_lossy(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }

    fn hermitian_tol() -> Self {
        Self::lit(Self::HERMITIAN_TOL)
    }

    fn validity_tol() -> Self {
        Self::lit(Self::VALIDITY_TOL)
    }

    fn psd_slack() -> Self {
        Self::lit(Self::PSD_SLACK)
    }

    fn tight_tol() -> Self {
        Self::lit(Self::TIGHT_TOL)
    }
}

macro_rules! impl_real {
    ($t:ty, herm = $h:expr, valid = $v:expr, psd = $p:expr, jacobi = $j:expr, tight = $k:expr) => {
        impl Real for $t {
            const HERMITIAN_TOL: f64 = $h;
            const VALIDITY_TOL: f64 = $v;
            const PSD_SLACK: f64 = $p;
            const JACOBI_TOL: f64 = $j;
            const TIGHT_TOL: f64 = $k;
        }
    };
}

impl_real!(
    f64,
    herm = 1e-10,
    valid = 1e-10,
    psd = 1e-10,
    jacobi = 1e-13,
    tight = 1e-12
);
impl_real!(f32, herm = 1e-5, valid = 1e-5, psd = 1e-5, jacobi = 1e-6, tight = 1e-5);

/// Complex number over a [`Real`] component type.
pub type C<T> = Complex<T>;

#[inline]
pub fn c<T: Real>(re: f64, im: f64) -> C<T> {
    Complex::new(T::lit(re), T::lit(im))
}

#[inline]
pub fn re<T: Real>(x: T) -> C<T> {
    Complex::new(x, T::zero())
}
