// Copyright 2026 The qcorr Authors
// SPDX-License-Identifier: Apache-2.0

//! `qcorr` command-line front end.
//!
//! Exit codes: 0 success, 1 discrepancy or violations found, 2 configuration
//! or validation error, 3 I/O error.

use std::fs::File;
use std::io::BufWriter;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;

use qcorr::channels::GammaKind;
use qcorr::linalg::Matrix;
use qcorr::measures::{bell_diagonal_d, guo_d};
use qcorr::minimize::{minimize_d, MinimizerConfig};
use qcorr::monolab::{
    basis_dependence_probe, explore_bside_general, isotropic_scaling_check, run_campaign, CampaignConfig, CampaignMode,
    CampaignReport,
};
use qcorr::states::{detect_bell_diagonal, random_unitary};
use qcorr::{io, BipartiteState, RngSeed};

/// Largest discrepancy `check-scaling` accepts.
const SCALING_TOLERANCE: f64 = 1e-10;

#[derive(Parser)]
#[command(
    name = "qcorr",
    version,
    about = "Non-commutativity measures of quantum correlations"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Kind {
    Unitary,
    Antiunitary,
}

impl From<Kind> for GammaKind {
    fn from(k: Kind) -> Self {
        match k {
            Kind::Unitary => GammaKind::Unitary,
            Kind::Antiunitary => GammaKind::Antiunitary,
        }
    }
}

#[derive(clap::Args)]
struct Overrides {
    #[arg(long)]
    trials: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    tolerance: Option<f64>,
    /// Compare d_A (minimized over B bases) instead of D_A.
    #[arg(long)]
    d_min: bool,
}

#[derive(Subcommand)]
enum Command {
    /// D_A in the computational basis, and optionally d_A.
    Compute {
        #[arg(long)]
        state: PathBuf,
        #[arg(long)]
        d_min: bool,
        /// Pauli-coefficient evaluation for qubit blocks.
        #[arg(long)]
        fast: bool,
        #[arg(long)]
        json: bool,
    },
    /// Run a monotonicity campaign. Exits 1 when violations are found.
    Campaign {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        csv: Option<PathBuf>,
        #[command(flatten)]
        overrides: Overrides,
    },
    /// Scan channels on B over arbitrary states. Never fails on findings.
    Scan {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        out: PathBuf,
        #[arg(long)]
        csv: Option<PathBuf>,
        #[command(flatten)]
        overrides: Overrides,
    },
    /// Compare D_A after an isotropic channel on A with p²·D_A.
    CheckScaling {
        #[arg(long)]
        state: PathBuf,
        #[arg(long, allow_hyphen_values = true)]
        p: f64,
        #[arg(long, value_enum)]
        kind: Kind,
        /// Seed of a Haar-random U; U = I when absent.
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Statistics of D_A over Haar-random B bases.
    ProbeBasis {
        #[arg(long)]
        state: PathBuf,
        #[arg(long)]
        samples: usize,
        #[arg(long)]
        seed: u64,
    },
}

enum Failure {
    Invalid(String),
    Io(String),
}

impl From<qcorr::Error> for Failure {
    fn from(e: qcorr::Error) -> Self {
        Failure::Invalid(e.to_string())
    }
}

fn io_err(path: &Path, e: impl std::fmt::Display) -> Failure {
    Failure::Io(format!("{}: {e}", path.display()))
}

/// `x` with 12 significant digits, in the shorter of fixed and scientific
/// notation.
fn fmt12(x: f64) -> String {
    if x == 0.0 || !x.is_finite() {
        return format!("{x}");
    }
    let exp = x.abs().log10().floor() as i32;
    if (-5..12).contains(&exp) {
        let s = format!("{:.*}", (11 - exp) as usize, x);
        if s.contains('.') {
            s.trim_end_matches('0').trim_end_matches('.').to_string()
        } else {
            s
        }
    } else {
        format!("{x:.11e}")
    }
}

fn read_state(path: &Path) -> Result<BipartiteState, Failure> {
    Ok(io::read_state(path).map_err(|e| io_err(path, e))??)
}

fn read_config(path: &Path, o: &Overrides) -> Result<CampaignConfig, Failure> {
    let text = std::fs::read_to_string(path).map_err(|e| io_err(path, e))?;
    let mut cfg: CampaignConfig =
        serde_json::from_str(&text).map_err(|e| Failure::Invalid(format!("{}: {e}", path.display())))?;
    if let Some(t) = o.trials {
        cfg.trials = t;
    }
    if let Some(s) = o.seed {
        cfg.seed = RngSeed(s);
    }
    if let Some(t) = o.tolerance {
        cfg.tolerance = t;
    }
    cfg.use_d_min |= o.d_min;
    Ok(cfg)
}

fn write_report(report: &CampaignReport, out: Option<&Path>, csv: Option<&Path>) -> Result<(), Failure> {
    let text = serde_json::to_string_pretty(report).expect("report serializes");
    match out {
        Some(p) => std::fs::write(p, text).map_err(|e| io_err(p, e))?,
        None => println!("{text}"),
    }
    if let Some(p) = csv {
        let f = File::create(p).map_err(|e| io_err(p, e))?;
        report.write_csv(BufWriter::new(f)).map_err(|e| io_err(p, e))?;
    }
    Ok(())
}

fn summarize(report: &CampaignReport) {
    eprintln!(
        "{:?}: {} trials, {} violations, max excess {}, {} ms",
        report.mode,
        report.trials_run,
        report.violations.len(),
        fmt12(report.max_excess),
        report.runtime_ms
    );
}

fn compute(state: &Path, d_min: bool, fast: bool, as_json: bool) -> Result<ExitCode, Failure> {
    let st = read_state(state)?;
    let r = guo_d(&st, &Matrix::identity(st.dim_b()), fast)?;
    let minimized = if d_min {
        Some(minimize_d(&st, &MinimizerConfig::default())?)
    } else {
        None
    };
    let bell = match detect_bell_diagonal(&st, 1e-12) {
        Some(c) => Some((c, bell_diagonal_d(&c)?)),
        None => None,
    };
    if as_json {
        let mut out = json!({
            "dA": st.dim_a(),
            "dB": st.dim_b(),
            "D_A": r.value,
            "pair_count": r.pair_count,
        });
        if let Some(m) = &minimized {
            out["d_A"] = json!(m.d_value);
            out["d_A_basis"] = json!(m
                .optimal_basis
                .as_slice()
                .iter()
                .map(|z| [z.re, z.im])
                .collect::<Vec<_>>());
            out["d_A_evaluations"] = json!(m.evaluations);
            out["d_A_converged"] = json!(m.converged);
        }
        if let Some((c, v)) = &bell {
            out["bell_coefficients"] = json!(c.0);
            out["bell_closed_form"] = json!(v);
        }
        println!("{}", serde_json::to_string_pretty(&out).expect("json serializes"));
    } else {
        println!("D_A = {}", fmt12(r.value));
        println!("pairs = {}", r.pair_count);
        if let Some(m) = &minimized {
            println!("d_A = {}", fmt12(m.d_value));
            println!("evaluations = {}", m.evaluations);
        }
        if let Some((c, v)) = &bell {
            println!(
                "bell_diagonal c = ({}, {}, {})",
                fmt12(c.0[0]),
                fmt12(c.0[1]),
                fmt12(c.0[2])
            );
            println!("closed_form = {}", fmt12(*v));
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn campaign(config: &Path, out: Option<&Path>, csv: Option<&Path>, o: &Overrides) -> Result<ExitCode, Failure> {
    let cfg = read_config(config, o)?;
    let report = run_campaign(&cfg)?;
    write_report(&report, out, csv)?;
    summarize(&report);
    if report.mode != CampaignMode::Scan && !report.violations.is_empty() {
        return Ok(ExitCode::from(1));
    }
    Ok(ExitCode::SUCCESS)
}

fn scan(config: &Path, out: &Path, csv: Option<&Path>, o: &Overrides) -> Result<ExitCode, Failure> {
    let mut cfg = read_config(config, o)?;
    cfg.mode = Some(CampaignMode::Scan);
    let report = explore_bside_general(&cfg)?;
    write_report(&report, Some(out), csv)?;
    summarize(&report);
    Ok(ExitCode::SUCCESS)
}

fn check_scaling(state: &Path, p: f64, kind: Kind, seed: Option<u64>) -> Result<ExitCode, Failure> {
    let st = read_state(state)?;
    let u = match seed {
        Some(s) => random_unitary(st.dim_a(), RngSeed(s))?,
        None => Matrix::identity(st.dim_a()),
    };
    let r = isotropic_scaling_check(&st, p, &u, kind.into())?;
    println!("lhs = {}", fmt12(r.lhs));
    println!("rhs = {}", fmt12(r.rhs));
    println!("discrepancy = {}", fmt12(r.discrepancy));
    if r.discrepancy > SCALING_TOLERANCE {
        return Ok(ExitCode::from(1));
    }
    Ok(ExitCode::SUCCESS)
}

fn probe_basis(state: &Path, samples: usize, seed: u64) -> Result<ExitCode, Failure> {
    let st = read_state(state)?;
    let r = basis_dependence_probe(&st, samples, RngSeed(seed))?;
    println!("samples = {}", r.samples);
    println!("min = {}", fmt12(r.min));
    println!("max = {}", fmt12(r.max));
    println!("mean = {}", fmt12(r.mean));
    println!("stddev = {}", fmt12(r.stddev));
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Compute {
            state,
            d_min,
            fast,
            json,
        } => compute(state, *d_min, *fast, *json),
        Command::Campaign {
            config,
            out,
            csv,
            overrides,
        } => campaign(config, out.as_deref(), csv.as_deref(), overrides),
        Command::Scan {
            config,
            out,
            csv,
            overrides,
        } => scan(config, out, csv.as_deref(), overrides),
        Command::CheckScaling { state, p, kind, seed } => check_scaling(state, *p, *kind, *seed),
        Command::ProbeBasis { state, samples, seed } => probe_basis(state, *samples, *seed),
    };
    match result {
        Ok(code) => code,
        Err(Failure::Invalid(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Io(msg)) => {
            eprintln!("I/O error: {msg}");
            ExitCode::from(3)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::fmt12;

    #[test]
    fn twelve_significant_digits() {
        assert_eq!(fmt12(1.0 + 2f64.sqrt() / 4.0), "1.35355339059");
        assert_eq!(fmt12(0.25), "0.25");
        assert_eq!(fmt12(0.0), "0");
        assert_eq!(fmt12(1.234e-9), "1.23400000000e-9");
        assert_eq!(fmt12(-3.0), "-3");
    }
}
