// Copyright 2026 The qcorr Authors
// SPDX-License-Identifier: Apache-2.0

//! JSON file formats for states and channels.
//!
//! Complex numbers are `[re, im]` pairs and matrices are row-major lists of
//! them. Floats are written in shortest round-trip form, so reading back a
//! written file reproduces every entry bit for bit.

use std::path::Path;

use num_complex::Complex;
use serde::{Deserialize, Serialize};

use crate::channels::{AffineQubitChannel, Channel, DecoheringChannel, GammaKind, IsotropicChannel, KrausChannel};
use crate::error::{Error, Result};
use crate::linalg::{Matrix, Vector};
use crate::states::{validate_state, BipartiteState};

pub type ComplexPair = [f64; 2];

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StateFile {
    #[serde(rename = "dA")]
    pub dim_a: usize,
    #[serde(rename = "dB")]
    pub dim_b: usize,
    pub matrix: Vec<ComplexPair>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MatrixFile {
    pub rows: usize,
    pub cols: usize,
    pub matrix: Vec<ComplexPair>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase")]
pub enum ChannelFile {
    Affine {
        t: [f64; 3],
        lambda: [f64; 3],
    },
    Isotropic {
        p: f64,
        gamma: GammaKind,
        #[serde(rename = "U")]
        u: Vec<ComplexPair>,
        d: usize,
    },
    Decohering {
        basis: Vec<Vec<ComplexPair>>,
    },
    Kraus {
        ops: Vec<MatrixFile>,
    },
}

fn pairs(v: &[Complex<f64>]) -> Vec<ComplexPair> {
    v.iter().map(|z| [z.re, z.im]).collect()
}

fn complexes(v: &[ComplexPair]) -> Vector<f64> {
    v.iter().map(|&[re, im]| Complex::new(re, im)).collect()
}

fn square(d: usize, entries: &[ComplexPair]) -> Result<Matrix<f64>> {
    if entries.len() != d * d {
        return Err(Error::Format(format!(
            "expected {} matrix entries for dimension {d}, found {}",
            d * d,
            entries.len()
        )));
    }
    Matrix::new(d, d, complexes(entries))
}

impl MatrixFile {
    pub fn from_matrix(m: &Matrix<f64>) -> Self {
        Self {
            rows: m.rows(),
            cols: m.cols(),
            matrix: pairs(m.as_slice()),
        }
    }

    pub fn to_matrix(&self) -> Result<Matrix<f64>> {
        if self.matrix.len() != self.rows * self.cols {
            return Err(Error::Format(format!(
                "{}x{} matrix has {} entries",
                self.rows,
                self.cols,
                self.matrix.len()
            )));
        }
        Matrix::new(self.rows, self.cols, complexes(&self.matrix))
    }
}

impl StateFile {
    pub fn from_state(s: &BipartiteState<f64>) -> Self {
        Self {
            dim_a: s.dim_a(),
            dim_b: s.dim_b(),
            matrix: pairs(s.rho().as_slice()),
        }
    }

    /// Parses and validates the state.
    pub fn to_state(&self) -> Result<BipartiteState<f64>> {
        let rho = square(self.dim_a * self.dim_b, &self.matrix)?;
        validate_state(rho, self.dim_a, self.dim_b)
    }
}

impl ChannelFile {
    pub fn from_channel(ch: &Channel<f64>) -> Self {
        match ch {
            Channel::Affine(c) => ChannelFile::Affine {
                t: c.t(),
                lambda: c.lambda(),
            },
            Channel::Isotropic(c) => ChannelFile::Isotropic {
                p: c.p(),
                gamma: c.kind(),
                u: pairs(c.unitary().as_slice()),
                d: c.dim(),
            },
            Channel::Decohering(c) => ChannelFile::Decohering {
                basis: c.basis().iter().map(|v| pairs(v)).collect(),
            },
            Channel::Kraus(c) => ChannelFile::Kraus {
                ops: c.ops().iter().map(MatrixFile::from_matrix).collect(),
            },
        }
    }

    /// Parses and validates the channel with the same checks as the
    /// corresponding constructor.
    pub fn to_channel(&self) -> Result<Channel<f64>> {
        Ok(match self {
            ChannelFile::Affine { t, lambda } => AffineQubitChannel::new(*t, *lambda)?.into(),
            ChannelFile::Isotropic { p, gamma, u, d } => IsotropicChannel::new(*p, *gamma, square(*d, u)?)?.into(),
            ChannelFile::Decohering { basis } => {
                DecoheringChannel::new(basis.iter().map(|v| complexes(v)).collect())?.into()
            }
            ChannelFile::Kraus { ops } => {
                KrausChannel::new(ops.iter().map(MatrixFile::to_matrix).collect::<Result<_>>()?)?.into()
            }
        })
    }
}

pub fn state_to_json(s: &BipartiteState<f64>) -> String {
    serde_json::to_string(&StateFile::from_state(s)).expect("state serializes")
}

pub fn state_from_json(text: &str) -> Result<BipartiteState<f64>> {
    let file: StateFile = serde_json::from_str(text).map_err(|e| Error::Format(e.to_string()))?;
    file.to_state()
}

pub fn channel_to_json(ch: &Channel<f64>) -> String {
    serde_json::to_string(&ChannelFile::from_channel(ch)).expect("channel serializes")
}

pub fn channel_from_json(text: &str) -> Result<Channel<f64>> {
    let file: ChannelFile = serde_json::from_str(text).map_err(|e| Error::Format(e.to_string()))?;
    file.to_channel()
}

/// Reads a state file. I/O failures are returned separately from format and
/// validation errors so callers can tell them apart.
pub fn read_state(path: &Path) -> std::io::Result<Result<BipartiteState<f64>>> {
    Ok(state_from_json(&std::fs::read_to_string(path)?))
}

pub fn write_state(path: &Path, s: &BipartiteState<f64>) -> std::io::Result<()> {
    std::fs::write(path, state_to_json(s))
}

pub fn read_channel(path: &Path) -> std::io::Result<Result<Channel<f64>>> {
    Ok(channel_from_json(&std::fs::read_to_string(path)?))
}

pub fn write_channel(path: &Path, ch: &Channel<f64>) -> std::io::Result<()> {
    std::fs::write(path, channel_to_json(ch))
}
