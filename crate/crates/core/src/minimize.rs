// Copyright 2026 The qcorr Authors
// SPDX-License-Identifier: Apache-2.0

//! Minimization of `D_A` over orthonormal bases of H_B, giving `d_A`.
//!
//! For a qubit B the basis unitary is
//! `U(θ, φ, ψ) = [[cosθ·e^{iφ}, sinθ·e^{iψ}], [−sinθ·e^{−iψ}, cosθ·e^{−iφ}]]`.
//! A coarse grid over `[0, π/2] × [0, 2π)²` seeds downhill-simplex
//! refinements from its best few cells. `D_A` has kinks where a commutator
//! vanishes and the simplex can stall on them, so each run is restarted from
//! its own endpoint until it stops improving. For larger B the search is a
//! multi-start random descent over `U ← U·exp(iεH)` with a shrinking step.
//!
//! The computational basis is always evaluated, so the result never exceeds
//! `D_A` there.

use num_complex::Complex;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::linalg::{expi_hermitian, Matrix};
use crate::measures::guo_d_unchecked;
use crate::rng::RngSeed;
use crate::scalar::Real;
use crate::states::{random_hermitian_direction, random_unitary_with, BipartiteState};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct MinimizerConfig {
    /// Points per axis of the coarse grid (qubit B).
    pub grid: usize,
    /// Simplex stops once the spread of its vertex values falls below this.
    pub simplex_tol: f64,
    /// Evaluation cap of a single simplex run.
    pub max_simplex_evals: usize,
    /// Number of best grid cells that seed a simplex.
    pub simplex_starts: usize,
    /// Restarts of each simplex from its endpoint.
    pub simplex_restarts: usize,
    /// Minimum Bloch-sphere distance between the basis directions of two
    /// simplex seeds.
    pub seed_separation: f64,
    /// Number of descent starts for d_B > 2 (the first starts at the identity).
    pub restarts: usize,
    pub initial_step: f64,
    pub min_step: f64,
    /// Consecutive rejected proposals before the step is halved.
    pub patience: usize,
    pub max_evals_per_start: usize,
    /// Values at or below this are treated as the global minimum 0.
    pub zero_tol: f64,
    pub fast: bool,
    pub seed: RngSeed,
}

impl Default for MinimizerConfig {
    fn default() -> Self {
        Self {
            grid: 24,
            simplex_tol: 1e-8,
            max_simplex_evals: 500,
            simplex_starts: 6,
            simplex_restarts: 4,
            seed_separation: 0.3,
            restarts: 32,
            initial_step: 0.5,
            min_step: 1e-6,
            patience: 16,
            max_evals_per_start: 4000,
            zero_tol: 1e-14,
            fast: true,
            seed: RngSeed(0x5eed),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct MinimizationReport<T: Real> {
    pub d_value: T,
    pub optimal_basis: Matrix<T>,
    pub evaluations: usize,
    pub converged: bool,
    /// (parameters, value) after each refinement step. For qubit B the
    /// parameters are (θ, φ, ψ); for larger B they are (start index, step).
    pub history: Vec<(Vec<T>, T)>,
}

/// The qubit basis unitary for angles (θ, φ, ψ).
pub fn qubit_basis<T: Real>(theta: T, phi: T, psi: T) -> Matrix<T> {
    let (s, c) = theta.sin_cos();
    let e = |x: T| Complex::new(x.cos(), x.sin());
    Matrix::new(2, 2, vec![e(phi) * c, e(psi) * s, -(e(-psi) * s), e(-phi) * c]).expect("finite angles")
}

/// Rephases each column so its first non-negligible entry is real and
/// nonnegative. `D_A` does not depend on these phases.
pub fn fix_column_phases<T: Real>(u: &Matrix<T>) -> Matrix<T> {
    let mut out = u.clone();
    for j in 0..u.cols() {
        if let Some(z) = (0..u.rows()).map(|i| u[(i, j)]).find(|z| z.norm() > T::lit(1e-12)) {
            let ph = z.conj() / z.norm();
            for i in 0..u.rows() {
                out[(i, j)] = u[(i, j)] * ph;
            }
        }
    }
    out
}

/// `d_A(ρ)`: the smallest `D_A` found over orthonormal bases of H_B.
pub fn minimize_d<T: Real>(state: &BipartiteState<T>, config: &MinimizerConfig) -> Result<MinimizationReport<T>> {
    let identity = Matrix::identity(state.dim_b());
    let base = guo_d_unchecked(state, &identity, config.fast);
    if base <= T::lit(config.zero_tol) {
        return Ok(MinimizationReport {
            d_value: base,
            optimal_basis: identity,
            evaluations: 1,
            converged: true,
            history: vec![(Vec::new(), base)],
        });
    }
    let mut report = if state.dim_b() == 2 {
        minimize_qubit(state, config)
    } else {
        minimize_stochastic(state, config)
    };
    report.evaluations += 1;
    if base <= report.d_value {
        report.d_value = base;
        report.optimal_basis = identity;
    }
    report.optimal_basis = fix_column_phases(&report.optimal_basis);
    Ok(report)
}

fn angles_at<T: Real>(grid: usize, idx: usize) -> [T; 3] {
    let n = grid.max(2);
    let (i, j, k) = (idx / (n * n), (idx / n) % n, idx % n);
    let half_pi = T::FRAC_PI_2();
    let two_pi = T::PI() + T::PI();
    let step_t = half_pi / T::from_usize(n - 1).expect("grid fits");
    let step_p = two_pi / T::from_usize(n).expect("grid fits");
    [
        step_t * T::from_usize(i).expect("grid fits"),
        step_p * T::from_usize(j).expect("grid fits"),
        step_p * T::from_usize(k).expect("grid fits"),
    ]
}

/// Bloch vector of the first basis vector of `qubit_basis(θ, φ, ψ)`.
/// `D_A` depends on the angles only through it.
fn bloch_direction<T: Real>(x: &[T; 3]) -> [T; 3] {
    let two = T::lit(2.0);
    let (t, chi) = (two * x[0], x[1] + x[2]);
    [t.sin() * chi.cos(), -(t.sin() * chi.sin()), t.cos()]
}

/// Exhaustive grid over (θ, φ, ψ): θ takes `n` points on [0, π/2] including
/// both ends, φ and ψ take `n` points on [0, 2π). Returns up to `k` points in
/// order of value (ties broken by lowest linear index), skipping points whose
/// basis direction lies within `separation` (chordal distance on the Bloch
/// sphere) of one already taken.
pub fn grid_search<T: Real>(
    state: &BipartiteState<T>,
    n: usize,
    k: usize,
    separation: T,
    fast: bool,
) -> Vec<([T; 3], T)> {
    let n = n.max(2);
    let mut vals: Vec<(T, usize)> = (0..n * n * n)
        .into_par_iter()
        .map(|idx| {
            let [t, p, q] = angles_at::<T>(n, idx);
            (guo_d_unchecked(state, &qubit_basis(t, p, q), fast), idx)
        })
        .collect();
    vals.sort_by(|a, b| {
        a.0.partial_cmp(&b.0)
            .unwrap_or(std::cmp::Ordering::Equal)
            .then(a.1.cmp(&b.1))
    });
    let mut picked: Vec<([T; 3], T, [T; 3])> = Vec::new();
    for (v, idx) in vals {
        if picked.len() >= k.max(1) {
            break;
        }
        let x = angles_at::<T>(n, idx);
        let b = bloch_direction(&x);
        let far = picked.iter().all(|(_, _, c)| {
            let d2 = (0..3).fold(T::zero(), |acc, i| acc + (b[i] - c[i]) * (b[i] - c[i]));
            d2.sqrt() > separation
        });
        if far {
            picked.push((x, v, b));
        }
    }
    picked.into_iter().map(|(x, v, _)| (x, v)).collect()
}

fn refine_from<T: Real>(
    state: &BipartiteState<T>,
    config: &MinimizerConfig,
    start: [T; 3],
    start_val: T,
    step: T,
) -> SimplexOutcome<T> {
    let f = |x: &[T]| guo_d_unchecked(state, &qubit_basis(x[0], x[1], x[2]), config.fast);
    let tol = T::lit(config.simplex_tol);
    let mut best = SimplexOutcome {
        point: start.to_vec(),
        value: start_val,
        evaluations: 0,
        converged: false,
        history: Vec::new(),
    };
    for _ in 0..=config.simplex_restarts {
        let run = nelder_mead(f, &best.point, step, tol, config.max_simplex_evals);
        let improvement = best.value - run.value;
        best.evaluations += run.evaluations;
        best.history.extend(run.history);
        best.converged = run.converged;
        if run.value < best.value {
            best.point = run.point;
            best.value = run.value;
        }
        if improvement <= tol && best.converged {
            break;
        }
    }
    best
}

fn minimize_qubit<T: Real>(state: &BipartiteState<T>, config: &MinimizerConfig) -> MinimizationReport<T> {
    let n = config.grid.max(2);
    let seeds = grid_search(
        state,
        n,
        config.simplex_starts,
        T::lit(config.seed_separation),
        config.fast,
    );
    let step = T::PI() / T::from_usize(n).expect("grid fits");
    let runs: Vec<SimplexOutcome<T>> = seeds
        .par_iter()
        .map(|&(x, v)| refine_from(state, config, x, v, step))
        .collect();
    let mut best = 0;
    for (i, r) in runs.iter().enumerate() {
        if r.value < runs[best].value {
            best = i;
        }
    }
    let winner = &runs[best];
    MinimizationReport {
        d_value: winner.value,
        optimal_basis: qubit_basis(winner.point[0], winner.point[1], winner.point[2]),
        evaluations: n * n * n + runs.iter().map(|r| r.evaluations).sum::<usize>(),
        converged: winner.converged,
        history: winner.history.clone(),
    }
}

struct StartOutcome<T: Real> {
    value: T,
    basis: Matrix<T>,
    evaluations: usize,
    final_step: f64,
    converged: bool,
}

fn descend<T: Real>(state: &BipartiteState<T>, config: &MinimizerConfig, start: usize) -> StartOutcome<T> {
    let db = state.dim_b();
    let mut rng = config.seed.substream(start as u64).rng();
    let mut u = if start == 0 {
        Matrix::identity(db)
    } else {
        random_unitary_with(db, &mut rng)
    };
    let mut value = guo_d_unchecked(state, &u, config.fast);
    let mut evaluations = 1;
    let mut step = config.initial_step;
    let mut failures = 0;
    let zero = T::lit(config.zero_tol);
    while step >= config.min_step && evaluations < config.max_evals_per_start && value > zero {
        let h = random_hermitian_direction::<T>(db, &mut rng).scale_real(T::lit(step));
        let Ok(rot) = expi_hermitian(&h) else {
            break;
        };
        let candidate = &u * &rot;
        let v = guo_d_unchecked(state, &candidate, config.fast);
        evaluations += 1;
        if v < value {
            u = candidate;
            value = v;
            failures = 0;
        } else {
            failures += 1;
            if failures >= config.patience {
                step *= 0.5;
                failures = 0;
            }
        }
    }
    StartOutcome {
        value,
        basis: u,
        evaluations,
        final_step: step,
        converged: step < config.min_step || value <= zero,
    }
}

fn minimize_stochastic<T: Real>(state: &BipartiteState<T>, config: &MinimizerConfig) -> MinimizationReport<T> {
    let outcomes: Vec<StartOutcome<T>> = (0..config.restarts.max(1))
        .into_par_iter()
        .map(|s| descend(state, config, s))
        .collect();
    let mut best = 0;
    for (i, o) in outcomes.iter().enumerate() {
        if o.value < outcomes[best].value {
            best = i;
        }
    }
    MinimizationReport {
        d_value: outcomes[best].value,
        optimal_basis: outcomes[best].basis.clone(),
        evaluations: outcomes.iter().map(|o| o.evaluations).sum(),
        converged: outcomes[best].converged,
        history: outcomes
            .iter()
            .enumerate()
            .map(|(i, o)| (vec![T::from_usize(i).expect("fits"), T::lit(o.final_step)], o.value))
            .collect(),
    }
}

/// Result of a downhill-simplex run.
#[derive(Debug, Clone)]
pub struct SimplexOutcome<T: Real> {
    pub point: Vec<T>,
    pub value: T,
    pub evaluations: usize,
    pub converged: bool,
    pub history: Vec<(Vec<T>, T)>,
}

/// Nelder-Mead with standard coefficients (reflection 1, expansion 2,
/// contraction 1/2, shrink 1/2). Stops when `max f − min f` over the simplex
/// is below `tol` or after `max_evals` evaluations.
pub fn nelder_mead<T: Real>(f: impl Fn(&[T]) -> T, x0: &[T], step: T, tol: T, max_evals: usize) -> SimplexOutcome<T> {
    let dim = x0.len();
    let half = T::lit(0.5);
    let two = T::lit(2.0);
    let mut pts: Vec<Vec<T>> = vec![x0.to_vec()];
    for k in 0..dim {
        let mut p = x0.to_vec();
        p[k] = p[k] + step;
        pts.push(p);
    }
    let mut vals: Vec<T> = pts.iter().map(|p| f(p)).collect();
    let mut evals = pts.len();
    let mut history = Vec::new();
    let mut converged = false;

    loop {
        let mut order: Vec<usize> = (0..=dim).collect();
        order.sort_by(|&a, &b| vals[a].partial_cmp(&vals[b]).unwrap_or(std::cmp::Ordering::Equal));
        pts = order.iter().map(|&i| pts[i].clone()).collect();
        vals = order.iter().map(|&i| vals[i]).collect();
        history.push((pts[0].clone(), vals[0]));

        if vals[dim] - vals[0] < tol {
            converged = true;
            break;
        }
        if evals >= max_evals {
            break;
        }

        let n = T::from_usize(dim).expect("fits");
        let centroid: Vec<T> = (0..dim)
            .map(|k| pts[..dim].iter().fold(T::zero(), |a, p| a + p[k]) / n)
            .collect();
        let along = |coef: T| -> Vec<T> {
            (0..dim)
                .map(|k| centroid[k] + coef * (pts[dim][k] - centroid[k]))
                .collect()
        };

        let xr = along(-T::one());
        let fr = f(&xr);
        evals += 1;
        if fr < vals[0] {
            let xe = along(-two);
            let fe = f(&xe);
            evals += 1;
            if fe < fr {
                pts[dim] = xe;
                vals[dim] = fe;
            } else {
                pts[dim] = xr;
                vals[dim] = fr;
            }
            continue;
        }
        if fr < vals[dim - 1] {
            pts[dim] = xr;
            vals[dim] = fr;
            continue;
        }
        let (xc, fc) = if fr < vals[dim] {
            let xc = along(-half);
            let fc = f(&xc);
            (xc, fc)
        } else {
            let xc = along(half);
            let fc = f(&xc);
            (xc, fc)
        };
        evals += 1;
        if fc < vals[dim].min(fr) {
            pts[dim] = xc;
            vals[dim] = fc;
            continue;
        }
        let best = pts[0].clone();
        for i in 1..=dim {
            for (x, &b) in pts[i].iter_mut().zip(&best) {
                *x = b + half * (*x - b);
            }
            vals[i] = f(&pts[i]);
        }
        evals += dim;
    }

    SimplexOutcome {
        point: pts[0].clone(),
        value: vals[0],
        evaluations: evals,
        converged,
        history,
    }
}
