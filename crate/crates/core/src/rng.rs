// Copyright 2026 The qcorr Authors
// SPDX-License-Identifier: Apache-2.0

//! Seeded random streams.
//!
//! Every sampler takes an explicit [`RngSeed`]. Campaigns derive one
//! independent substream per trial with [`RngSeed::substream`], so trials can
//! run in any order or in parallel and still produce identical results.
//! The generator is xoshiro256++ seeded through SplitMix64.

use rand::SeedableRng;
use rand_distr::{Distribution, StandardNormal};
use rand_xoshiro::Xoshiro256PlusPlus;
use serde::{Deserialize, Serialize};

use num_complex::Complex;

use crate::scalar::{Real, C};

pub type Rng = Xoshiro256PlusPlus;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct RngSeed(pub u64);

impl RngSeed {
    /// Seed of the `index`-th substream: SplitMix64 finalizer over
    /// (seed, index), so neighbouring indices give unrelated streams.
    pub fn substream(self, index: u64) -> RngSeed {
        let mut z = self.0 ^ splitmix64(index.wrapping_add(0x9E37_79B9_7F4A_7C15));
        z = splitmix64(z);
        RngSeed(z)
    }

    pub fn rng(self) -> Rng {
        Rng::seed_from_u64(self.0)
    }
}

impl From<u64> for RngSeed {
    fn from(s: u64) -> Self {
        RngSeed(s)
    }
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Standard complex Gaussian: real and imaginary parts i.i.d. N(0, 1/2).
pub fn complex_gaussian<T: Real>(rng: &mut Rng) -> C<T> {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let re: f64 = StandardNormal.sample(rng);
    let im: f64 = StandardNormal.sample(rng);
    Complex::new(T::lit(re * s), T::lit(im * s))
}

pub fn uniform<T: Real>(rng: &mut Rng, lo: f64, hi: f64) -> T {
    let u: f64 = rand::Rng::random(rng);
    T::lit(lo + (hi - lo) * u)
}
