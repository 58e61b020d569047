// Copyright 2026 The qcorr Authors
// SPDX-License-Identifier: Apache-2.0

//! Seeded Monte-Carlo campaigns for the monotonicity properties of `D_A`.
//!
//! A campaign draws a state and a local channel per trial, applies the
//! channel and compares the measure before and after. Trial `i` draws from
//! substream `i` of the campaign seed, so results do not depend on the
//! number of worker threads. `QCORR_THREADS` caps the worker count.
//!
//! Three modes exist. `lcpo` applies commutativity-preserving channels on A,
//! `bside_bell` applies qubit channels on B to Bell-diagonal states, and
//! `scan` applies channels on B to arbitrary states. The first two are
//! expected to find no violations; `scan` only records what it sees.

use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::channels::{
    apply_local_map, random_affine_qubit_channel_with, random_decohering_with, random_isotropic_with,
    random_kraus_channel_with, random_unital_qubit_channel_with, random_unitary_channel_with, Channel, GammaKind,
    IsotropicChannel,
};
use crate::error::{Error, Result};
use crate::io::{ChannelFile, StateFile};
use crate::linalg::{Matrix, Side};
use crate::measures::{block_decompose, commutator_sum, guo_d};
use crate::minimize::{minimize_d, MinimizerConfig};
use crate::rng::{Rng, RngSeed};
use crate::states::{
    bell_diagonal_state, random_bell_diagonal_with, random_classical_quantum_with, random_mixed_state_with,
    random_pure_state_with, random_unitary_with, BipartiteState,
};

/// Comparison slack used whenever the measure comes from the minimizer.
pub const OPTIMIZER_TOLERANCE: f64 = 1e-4;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum StateFamily {
    /// Ginibre-induced mixed states, full rank unless `rank` is set.
    RandomMixed,
    RandomPure,
    BellDiagonal,
    ClassicalQuantum,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ChannelFamily {
    UnitalAffine,
    Affine,
    IsotropicUnitary,
    IsotropicAntiunitary,
    Decohering,
    KrausRandom,
    UnitaryRandom,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CampaignMode {
    Lcpo,
    BsideBell,
    Scan,
}

fn default_tolerance() -> f64 {
    1e-9
}

fn default_kraus_ops() -> usize {
    2
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CampaignConfig {
    /// Inferred from `side` and `state_family` when absent.
    #[serde(default)]
    pub mode: Option<CampaignMode>,
    pub trials: usize,
    pub seed: RngSeed,
    pub state_family: StateFamily,
    pub channel_family: ChannelFamily,
    pub side: Side,
    pub dims: (usize, usize),
    #[serde(default = "default_tolerance")]
    pub tolerance: f64,
    #[serde(default)]
    pub use_d_min: bool,
    /// Rank of `random_mixed` states; full rank when absent.
    #[serde(default)]
    pub rank: Option<usize>,
    #[serde(default = "default_kraus_ops")]
    pub kraus_ops: usize,
    #[serde(default)]
    pub minimizer: MinimizerConfig,
}

impl CampaignConfig {
    pub fn new(
        mode: CampaignMode,
        trials: usize,
        seed: u64,
        state_family: StateFamily,
        channel_family: ChannelFamily,
        side: Side,
        dims: (usize, usize),
    ) -> Self {
        Self {
            mode: Some(mode),
            trials,
            seed: RngSeed(seed),
            state_family,
            channel_family,
            side,
            dims,
            tolerance: default_tolerance(),
            use_d_min: false,
            rank: None,
            kraus_ops: default_kraus_ops(),
            minimizer: MinimizerConfig::default(),
        }
    }

    pub fn resolved_mode(&self) -> CampaignMode {
        self.mode.unwrap_or(match (self.side, self.state_family) {
            (Side::A, _) => CampaignMode::Lcpo,
            (Side::B, StateFamily::BellDiagonal) => CampaignMode::BsideBell,
            (Side::B, _) => CampaignMode::Scan,
        })
    }

    /// Tolerance actually applied: widened to [`OPTIMIZER_TOLERANCE`] when
    /// the minimizer is in the loop.
    pub fn effective_tolerance(&self) -> f64 {
        if self.use_d_min {
            self.tolerance.max(OPTIMIZER_TOLERANCE)
        } else {
            self.tolerance
        }
    }

    fn side_dim(&self) -> usize {
        match self.side {
            Side::A => self.dims.0,
            Side::B => self.dims.1,
        }
    }

    /// Checks the configuration against the requirements of `mode`.
    pub fn validate_for(&self, mode: CampaignMode) -> Result<()> {
        let cfg = |m: String| Err(Error::Config(m));
        if self.trials == 0 {
            return cfg("trials must be at least 1".into());
        }
        if self.tolerance.is_nan() || self.tolerance <= 0.0 {
            return cfg(format!("tolerance must be positive, got {}", self.tolerance));
        }
        let (da, db) = self.dims;
        if da < 2 || db < 2 {
            return cfg(format!("dims must be at least 2, got ({da}, {db})"));
        }
        if self.state_family == StateFamily::BellDiagonal && self.dims != (2, 2) {
            return cfg("bell_diagonal states need dims (2, 2)".into());
        }
        if let Some(r) = self.rank {
            if r == 0 || r > da * db {
                return cfg(format!("rank {r} outside 1..={}", da * db));
            }
        }
        if self.kraus_ops == 0 {
            return cfg("kraus_ops must be at least 1".into());
        }
        let d = self.side_dim();
        if matches!(self.channel_family, ChannelFamily::UnitalAffine | ChannelFamily::Affine) && d != 2 {
            return cfg(format!(
                "{:?} channels act on a qubit but side {:?} has dimension {d}",
                self.channel_family, self.side
            ));
        }
        match mode {
            CampaignMode::Lcpo => {
                if self.side != Side::A {
                    return cfg("lcpo campaigns act on side A".into());
                }
                if !matches!(
                    self.channel_family,
                    ChannelFamily::UnitalAffine
                        | ChannelFamily::IsotropicUnitary
                        | ChannelFamily::IsotropicAntiunitary
                        | ChannelFamily::Decohering
                ) {
                    return cfg(format!(
                        "{:?} is not a commutativity-preserving family",
                        self.channel_family
                    ));
                }
            }
            CampaignMode::BsideBell => {
                if self.side != Side::B {
                    return cfg("bside_bell campaigns act on side B".into());
                }
                if self.state_family != StateFamily::BellDiagonal {
                    return cfg("bside_bell campaigns need bell_diagonal states".into());
                }
            }
            CampaignMode::Scan => {
                if self.side != Side::B {
                    return cfg("scan campaigns act on side B".into());
                }
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrialSummary {
    pub index: usize,
    pub d_before: f64,
    pub d_after: f64,
    pub excess: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ViolationRecord {
    pub trial_index: usize,
    pub substream_seed: RngSeed,
    pub d_before: f64,
    pub d_after: f64,
    pub state: StateFile,
    pub channel: ChannelFile,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CampaignReport {
    pub mode: CampaignMode,
    pub trials_run: usize,
    pub tolerance: f64,
    pub violations: Vec<ViolationRecord>,
    /// Largest `D_after − D_before` over all trials.
    pub max_excess: f64,
    pub max_d_after: f64,
    pub runtime_ms: u64,
    pub config: CampaignConfig,
    /// One entry per trial, in trial order. Written to CSV, not to JSON.
    #[serde(skip)]
    pub trials: Vec<TrialSummary>,
}

impl CampaignReport {
    /// The report with `runtime_ms` cleared, for determinism comparisons.
    pub fn without_timing(&self) -> Self {
        Self {
            runtime_ms: 0,
            ..self.clone()
        }
    }

    pub fn write_csv<W: std::io::Write>(&self, out: W) -> std::io::Result<()> {
        let mut w = csv::Writer::from_writer(out);
        for t in &self.trials {
            w.serialize(t)?;
        }
        w.flush()
    }
}

fn sample_state(cfg: &CampaignConfig, rng: &mut Rng) -> Result<BipartiteState<f64>> {
    let (da, db) = cfg.dims;
    match cfg.state_family {
        StateFamily::RandomMixed => random_mixed_state_with(da, db, cfg.rank.unwrap_or(da * db), rng),
        StateFamily::RandomPure => random_pure_state_with(da, db, rng),
        StateFamily::BellDiagonal => bell_diagonal_state(&random_bell_diagonal_with(rng)),
        StateFamily::ClassicalQuantum => random_classical_quantum_with(da, db, rng),
    }
}

fn sample_channel(cfg: &CampaignConfig, rng: &mut Rng) -> Result<Channel<f64>> {
    let d = cfg.side_dim();
    Ok(match cfg.channel_family {
        ChannelFamily::UnitalAffine => random_unital_qubit_channel_with(rng)?.into(),
        ChannelFamily::Affine => random_affine_qubit_channel_with(rng)?.into(),
        ChannelFamily::IsotropicUnitary => random_isotropic_with(d, GammaKind::Unitary, rng)?.into(),
        ChannelFamily::IsotropicAntiunitary => random_isotropic_with(d, GammaKind::Antiunitary, rng)?.into(),
        ChannelFamily::Decohering => random_decohering_with(d, rng)?.into(),
        ChannelFamily::KrausRandom => random_kraus_channel_with(d, cfg.kraus_ops, rng)?.into(),
        ChannelFamily::UnitaryRandom => random_unitary_channel_with(d, rng)?.into(),
    })
}

/// The measure a campaign compares: `D_A` in the computational basis, or
/// `d_A` when `use_d_min` is set.
pub fn campaign_measure(state: &BipartiteState<f64>, cfg: &CampaignConfig) -> Result<f64> {
    if cfg.use_d_min {
        Ok(minimize_d(state, &cfg.minimizer)?.d_value)
    } else {
        Ok(guo_d(state, &Matrix::identity(state.dim_b()), true)?.value)
    }
}

/// Re-evaluates a violation record from its embedded payloads. Returns
/// `(D_before, D_after)`.
pub fn replay_violation(cfg: &CampaignConfig, record: &ViolationRecord) -> Result<(f64, f64)> {
    let state = record.state.to_state()?;
    let channel = record.channel.to_channel()?;
    let after = apply_local_map(&channel, &state, cfg.side)?;
    Ok((campaign_measure(&state, cfg)?, campaign_measure(&after, cfg)?))
}

struct TrialOutcome {
    summary: TrialSummary,
    violation: Option<ViolationRecord>,
}

fn run_trial(cfg: &CampaignConfig, index: usize, tol: f64) -> Result<TrialOutcome> {
    let seed = cfg.seed.substream(index as u64);
    let mut rng = seed.rng();
    let state = sample_state(cfg, &mut rng)?;
    let channel = sample_channel(cfg, &mut rng)?;
    let after = apply_local_map(&channel, &state, cfg.side)?;
    let d_before = campaign_measure(&state, cfg)?;
    let d_after = campaign_measure(&after, cfg)?;
    let excess = d_after - d_before;
    let violation = (excess > tol).then(|| ViolationRecord {
        trial_index: index,
        substream_seed: seed,
        d_before,
        d_after,
        state: StateFile::from_state(&state),
        channel: ChannelFile::from_channel(&channel),
    });
    Ok(TrialOutcome {
        summary: TrialSummary {
            index,
            d_before,
            d_after,
            excess,
        },
        violation,
    })
}

/// Runs `f` on a pool capped by `QCORR_THREADS` when that is set.
pub fn with_thread_cap<R: Send>(f: impl FnOnce() -> R + Send) -> R {
    let cap = std::env::var("QCORR_THREADS")
        .ok()
        .and_then(|v| v.trim().parse::<usize>().ok())
        .filter(|&n| n > 0);
    match cap.and_then(|n| rayon::ThreadPoolBuilder::new().num_threads(n).build().ok()) {
        Some(pool) => pool.install(f),
        None => f(),
    }
}

fn run(cfg: &CampaignConfig, mode: CampaignMode) -> Result<CampaignReport> {
    cfg.validate_for(mode)?;
    let start = Instant::now();
    let tol = cfg.effective_tolerance();
    let outcomes: Vec<TrialOutcome> = with_thread_cap(|| {
        (0..cfg.trials)
            .into_par_iter()
            .map(|i| run_trial(cfg, i, tol))
            .collect::<Result<Vec<_>>>()
    })?;
    let max_excess = outcomes
        .iter()
        .map(|o| o.summary.excess)
        .fold(f64::NEG_INFINITY, f64::max);
    let max_d_after = outcomes
        .iter()
        .map(|o| o.summary.d_after)
        .fold(f64::NEG_INFINITY, f64::max);
    let mut violations = Vec::new();
    let mut trials = Vec::with_capacity(outcomes.len());
    for o in outcomes {
        violations.extend(o.violation);
        trials.push(o.summary);
    }
    Ok(CampaignReport {
        mode,
        trials_run: trials.len(),
        tolerance: tol,
        violations,
        max_excess,
        max_d_after,
        runtime_ms: start.elapsed().as_millis() as u64,
        config: cfg.clone(),
        trials,
    })
}

/// Commutativity-preserving channels on A. No violations are expected.
pub fn run_lcpo_campaign(cfg: &CampaignConfig) -> Result<CampaignReport> {
    run(cfg, CampaignMode::Lcpo)
}

/// Qubit channels on B acting on Bell-diagonal states. No violations are
/// expected for the diagonal affine family.
pub fn run_bside_bell_campaign(cfg: &CampaignConfig) -> Result<CampaignReport> {
    run(cfg, CampaignMode::BsideBell)
}

/// Channels on B acting on arbitrary states. Records every excess above the
/// tolerance without treating it as a failure.
pub fn explore_bside_general(cfg: &CampaignConfig) -> Result<CampaignReport> {
    run(cfg, CampaignMode::Scan)
}

/// Dispatches on [`CampaignConfig::resolved_mode`].
pub fn run_campaign(cfg: &CampaignConfig) -> Result<CampaignReport> {
    run(cfg, cfg.resolved_mode())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ScalingCheck {
    /// `D_A` of the state after the isotropic channel on A.
    pub lhs: f64,
    /// `p²` times `D_A` of the original blocks (transposed for the
    /// antiunitary kind).
    pub rhs: f64,
    pub discrepancy: f64,
}

/// Compares `D_A(ρ')` with `p²·D_A(ρ)` for an isotropic channel on A.
pub fn isotropic_scaling_check(
    state: &BipartiteState<f64>,
    p: f64,
    u: &Matrix<f64>,
    kind: GammaKind,
) -> Result<ScalingCheck> {
    let ch = IsotropicChannel::new(p, kind, u.clone())?;
    if ch.dim() != state.dim_a() {
        return Err(Error::Dimension(format!(
            "channel dimension {} does not match d_A = {}",
            ch.dim(),
            state.dim_a()
        )));
    }
    let after = apply_local_map(&ch, state, Side::A)?;
    let id = Matrix::identity(state.dim_b());
    let lhs = guo_d(&after, &id, false)?.value;
    let blocks = block_decompose(state, &id)?;
    let base = match kind {
        GammaKind::Unitary => commutator_sum(blocks.blocks(), false)?,
        GammaKind::Antiunitary => commutator_sum(blocks.transposed().blocks(), false)?,
    };
    let rhs = p * p * base;
    Ok(ScalingCheck {
        lhs,
        rhs,
        discrepancy: (lhs - rhs).abs(),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ProbeStats {
    pub min: f64,
    pub max: f64,
    pub mean: f64,
    pub stddev: f64,
    pub samples: usize,
}

/// `D_A` over `samples` Haar-random bases of B. Sample `i` uses substream `i`
/// of `seed`.
pub fn basis_dependence_probe(state: &BipartiteState<f64>, samples: usize, seed: RngSeed) -> Result<ProbeStats> {
    if samples == 0 {
        return Err(Error::Config("samples must be at least 1".into()));
    }
    let db = state.dim_b();
    let values: Vec<f64> = with_thread_cap(|| {
        (0..samples)
            .into_par_iter()
            .map(|i| {
                let u = random_unitary_with::<f64>(db, &mut seed.substream(i as u64).rng());
                guo_d(state, &u, true).map(|r| r.value)
            })
            .collect::<Result<Vec<_>>>()
    })?;
    let n = samples as f64;
    let min = values.iter().copied().fold(f64::INFINITY, f64::min);
    let max = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    // Shifted by the minimum so nearly constant samples do not lose digits.
    let mean = min + values.iter().map(|v| v - min).sum::<f64>() / n;
    let var = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / n;
    Ok(ProbeStats {
        min,
        max,
        mean,
        stddev: var.sqrt(),
        samples,
    })
}
