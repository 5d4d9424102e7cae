//! Noise-versus-sample-size robustness sweeps.
//!
//! For a grid of noise levels and data sizes, many datasets are generated
//! with derived seeds, each algorithm is fit to each dataset, and
//! reconstruction MSE over the data window is aggregated per cell. The
//! summary of interest is `log10(MSE_Bayes / MSE_baseline)`: negative means
//! the filtering-based posterior beats the least-squares baseline.

use nalgebra::{DMatrix, DVector};
use rayon::prelude::*;

use crate::baselines::{dmd_fit, sindy_fit, tdmd_fit};
use crate::error::{Error, Result};
use crate::filters::{FilterSettings, InitBelief};
use crate::mcmc::{dram_sample, theta_estimators, DramConfig};
use crate::models::{
    observe, simulate_truth, uniform_grid, CovSpec, DictionaryLibrary, IdentityObs,
    LinearDynamics, ObservationSet, StateSpaceModel, Trajectory, TruthSystem,
};
use crate::posterior::{find_map, LikelihoodKind, MapOptions, Posterior, PriorSpec};
use crate::prediction::mse_at_observations;
use crate::rng::derive_seed;

use std::sync::Arc;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SweepAlgorithm {
    BayesKf,
    BayesUkf,
    Dmd,
    Tdmd,
    Sindy,
}

impl SweepAlgorithm {
    pub fn label(&self) -> &'static str {
        match self {
            SweepAlgorithm::BayesKf => "bayes_kf",
            SweepAlgorithm::BayesUkf => "bayes_ukf",
            SweepAlgorithm::Dmd => "dmd",
            SweepAlgorithm::Tdmd => "tdmd",
            SweepAlgorithm::Sindy => "sindy",
        }
    }
}

/// Data-generating system for the sweep.
#[derive(Debug, Clone)]
pub enum SweepTruth {
    /// The small-angle pendulum observed in full state.
    LinearPendulum { g: f64, length: f64, x0: [f64; 2] },
    /// A state that never moves; useful for degenerate checks where every
    /// algorithm should reach zero error.
    StaticState { x0: Vec<f64> },
}

#[derive(Debug, Clone)]
pub struct SweepSpec {
    pub truth: SweepTruth,
    pub noise_levels: Vec<f64>,
    pub n_values: Vec<usize>,
    pub realizations: usize,
    pub algorithms: Vec<SweepAlgorithm>,
    pub base_seed: u64,
    /// Length of the observation window in seconds; the sampling interval of
    /// a cell with `n` observations is `horizon / n`.
    pub horizon: f64,
    /// Discard each algorithm's single worst realization before averaging
    /// (skipped when fewer than two realizations succeeded).
    pub drop_worst: bool,
    /// MCMC chain length for the Bayes algorithms.
    pub chain_len: usize,
    pub burn_in: f64,
}

impl SweepSpec {
    pub fn validate(&self) -> Result<()> {
        if self.noise_levels.is_empty() || self.n_values.is_empty() || self.algorithms.is_empty() {
            return Err(Error::InvalidArgument(
                "sweep needs nonempty noise, size and algorithm lists".into(),
            ));
        }
        if self.realizations == 0 {
            return Err(Error::InvalidArgument("need at least one realization".into()));
        }
        if self.drop_worst && self.realizations < 2 {
            return Err(Error::InvalidArgument(
                "drop-worst needs at least two realizations".into(),
            ));
        }
        if self.n_values.iter().any(|&n| n < 4) {
            return Err(Error::InvalidArgument(
                "each cell needs at least 4 observations".into(),
            ));
        }
        if self.horizon <= 0.0 {
            return Err(Error::InvalidArgument("horizon must be positive".into()));
        }
        Ok(())
    }
}

/// One aggregated `(noise, n, algorithm)` cell.
#[derive(Debug, Clone)]
pub struct SweepCell {
    pub noise_sd: f64,
    pub n_obs: usize,
    pub algorithm: SweepAlgorithm,
    /// Per-realization MSEs in realization order; `None` marks a failed fit.
    pub mses: Vec<Option<f64>>,
    /// Mean over surviving realizations after the optional worst-drop;
    /// `None` when no realization succeeded.
    pub mean_mse: Option<f64>,
    pub n_used: usize,
    /// `log10(mean_Bayes / mean_this)` against the Bayes reference in the
    /// same `(noise, n)` block; `None` for the reference itself or when
    /// either mean is missing.
    pub log10_ratio_vs_bayes: Option<f64>,
}

#[derive(Debug, Clone)]
pub struct SweepTable {
    pub cells: Vec<SweepCell>,
}

impl SweepTable {
    pub fn cell(&self, noise_sd: f64, n_obs: usize, algorithm: SweepAlgorithm) -> Option<&SweepCell> {
        self.cells.iter().find(|c| {
            c.noise_sd == noise_sd && c.n_obs == n_obs && c.algorithm == algorithm
        })
    }
}

/// Run the full sweep. Realizations are independent work units; the table
/// is assembled in deterministic `(noise, n, algorithm)` order regardless of
/// scheduling.
pub fn mse_ratio_sweep(spec: &SweepSpec) -> Result<SweepTable> {
    spec.validate()?;
    let n_algos = spec.algorithms.len();

    // flatten (sigma, n, realization) into independent jobs
    let mut jobs = Vec::new();
    for (si, &sigma) in spec.noise_levels.iter().enumerate() {
        for (ni, &n) in spec.n_values.iter().enumerate() {
            for r in 0..spec.realizations {
                jobs.push((si, ni, r, sigma, n));
            }
        }
    }

    let results: Vec<Vec<Option<f64>>> = jobs
        .par_iter()
        .map(|&(si, ni, r, sigma, n)| {
            let seed = derive_seed(spec.base_seed, &[si as u64, ni as u64, r as u64]);
            let data = match generate_realization(&spec.truth, n, spec.horizon, sigma, seed) {
                Ok(d) => d,
                Err(_) => return vec![None; n_algos],
            };
            spec.algorithms
                .iter()
                .map(|algo| fit_and_score(*algo, &data, spec, seed).filter(|m| m.is_finite()))
                .collect()
        })
        .collect();

    // regroup into cells
    let mut cells = Vec::new();
    for (si, &sigma) in spec.noise_levels.iter().enumerate() {
        for (ni, &n) in spec.n_values.iter().enumerate() {
            let block_means: Vec<(SweepAlgorithm, Option<f64>, Vec<Option<f64>>, usize)> = spec
                .algorithms
                .iter()
                .enumerate()
                .map(|(ai, &algo)| {
                    let mses: Vec<Option<f64>> = (0..spec.realizations)
                        .map(|r| {
                            let job_ix = (si * spec.n_values.len() + ni) * spec.realizations + r;
                            results[job_ix][ai]
                        })
                        .collect();
                    let (mean, used) = aggregate(&mses, spec.drop_worst);
                    (algo, mean, mses, used)
                })
                .collect();
            let bayes_mean = block_means
                .iter()
                .find(|(a, ..)| *a == SweepAlgorithm::BayesKf)
                .or_else(|| {
                    block_means
                        .iter()
                        .find(|(a, ..)| *a == SweepAlgorithm::BayesUkf)
                })
                .and_then(|(_, m, _, _)| *m);
            for (algo, mean, mses, used) in block_means {
                let is_reference = matches!(algo, SweepAlgorithm::BayesKf)
                    || (matches!(algo, SweepAlgorithm::BayesUkf)
                        && !spec.algorithms.contains(&SweepAlgorithm::BayesKf));
                let ratio = match (bayes_mean, mean, is_reference) {
                    (_, _, true) => None,
                    (Some(b), Some(m), false) => Some((b / m).log10()),
                    _ => None,
                };
                cells.push(SweepCell {
                    noise_sd: sigma,
                    n_obs: n,
                    algorithm: algo,
                    mses,
                    mean_mse: mean,
                    n_used: used,
                    log10_ratio_vs_bayes: ratio,
                });
            }
        }
    }
    Ok(SweepTable { cells })
}

fn aggregate(mses: &[Option<f64>], drop_worst: bool) -> (Option<f64>, usize) {
    let mut ok: Vec<f64> = mses.iter().flatten().copied().collect();
    if ok.is_empty() {
        return (None, 0);
    }
    if drop_worst && ok.len() >= 2 {
        let worst = ok
            .iter()
            .enumerate()
            .max_by(|a, b| a.1.partial_cmp(b.1).unwrap_or(std::cmp::Ordering::Equal))
            .map(|(i, _)| i)
            .unwrap();
        ok.swap_remove(worst);
    }
    let n = ok.len();
    (Some(ok.iter().sum::<f64>() / n as f64), n)
}

fn generate_realization(
    truth: &SweepTruth,
    n: usize,
    horizon: f64,
    sigma: f64,
    seed: u64,
) -> Result<ObservationSet> {
    let dt = horizon / n as f64;
    match truth {
        SweepTruth::LinearPendulum { g, length, x0 } => {
            let sys = TruthSystem::LinearPendulum {
                g: *g,
                length: *length,
                x0: *x0,
            };
            let grid = uniform_grid(0.0, dt, n);
            let traj = simulate_truth(&sys, &grid)?;
            observe(&traj, &IdentityObs { dim: 2 }, sigma, seed, 1, &[])
        }
        SweepTruth::StaticState { x0 } => {
            let x = DVector::from_row_slice(x0);
            let grid = uniform_grid(0.0, dt, n);
            let traj = Trajectory::new(grid, vec![x; n])?;
            observe(
                &traj,
                &IdentityObs { dim: x0.len() },
                sigma,
                seed,
                1,
                &[],
            )
        }
    }
}

fn fit_and_score(
    algo: SweepAlgorithm,
    data: &ObservationSet,
    spec: &SweepSpec,
    seed: u64,
) -> Option<f64> {
    match algo {
        SweepAlgorithm::Dmd => {
            let a = dmd_fit(data).ok()?;
            score_linear_rollout(&a, data)
        }
        SweepAlgorithm::Tdmd => {
            let a = tdmd_fit(data).ok()?;
            score_linear_rollout(&a, data)
        }
        SweepAlgorithm::Sindy => {
            let lib = DictionaryLibrary::total_degree(data.obs_dim, 1);
            let fit = sindy_fit(data, &lib, 1e-3, 10).ok()?;
            let dt = fit.dt;
            let (_, first) = data.first_present()?;
            let mut x = first.clone();
            let mut states = vec![x.clone()];
            for _ in 1..data.len() {
                x = &x + fit.eval(&x) * dt;
                if !x.iter().all(|v| v.is_finite()) {
                    return None;
                }
                states.push(x.clone());
            }
            let pred = Trajectory::new(data.times.clone(), states).ok()?;
            mse_at_observations(&pred, data, 1e-9).ok()
        }
        SweepAlgorithm::BayesKf | SweepAlgorithm::BayesUkf => {
            let d = data.obs_dim;
            let model = StateSpaceModel::new(
                data.times.get(1).map(|t| t - data.times[0])?,
                Arc::new(LinearDynamics { dim: d }),
                Arc::new(IdentityObs { dim: d }),
                CovSpec::Isotropic { dim: d },
                CovSpec::Isotropic { dim: d },
            )
            .ok()?;
            let prior = PriorSpec::uninformative(model.partition());

            // start from the plain least-squares propagator and a residual
            // based noise split
            let a0 = dmd_fit(data).unwrap_or_else(|_| DMatrix::identity(d, d));
            let resid = one_step_residual_var(&a0, data)?;
            let var0 = (resid * 0.5).max(1e-6);
            let mut theta0 = Vec::with_capacity(d * d + 2);
            theta0.extend(a0.transpose().iter().copied()); // row-major read-out
            theta0.push(var0);
            theta0.push(var0);
            let theta0 = DVector::from_vec(theta0);

            let likelihood = if matches!(algo, SweepAlgorithm::BayesKf) {
                LikelihoodKind::Kalman
            } else {
                LikelihoodKind::Unscented
            };
            let post = Posterior::new(
                model,
                data.clone(),
                prior,
                likelihood,
                InitBelief::FromFirstObservation,
                FilterSettings::default(),
            )
            .ok()?;
            let map = find_map(&post, &theta0, &MapOptions::default()).ok()?;
            let mut cfg = DramConfig::new(spec.chain_len, derive_seed(seed, &[9]));
            cfg.n0 = 200.min(spec.chain_len / 5).max(10);
            let chain = dram_sample(&post, &map.theta, &map.proposal_cov, &cfg).ok()?;
            let est = theta_estimators(&chain, spec.burn_in);
            let a_hat = DMatrix::from_row_slice(d, d, &est.map.as_slice()[..d * d]);
            score_linear_rollout(&a_hat, data)
        }
    }
}

fn one_step_residual_var(a: &DMatrix<f64>, data: &ObservationSet) -> Option<f64> {
    let cols = data.dense_columns().ok()?;
    if cols.len() < 2 {
        return None;
    }
    let mut acc = 0.0;
    let mut count = 0usize;
    for w in cols.windows(2) {
        let r = w[1] - a * w[0];
        acc += r.norm_squared();
        count += r.len();
    }
    Some(acc / count as f64)
}

/// Deterministic power-iteration rollout from the first observation, scored
/// against the full data window.
fn score_linear_rollout(a: &DMatrix<f64>, data: &ObservationSet) -> Option<f64> {
    let (_, first) = data.first_present()?;
    let mut x = first.clone();
    let mut states = vec![x.clone()];
    for _ in 1..data.len() {
        x = a * x;
        if !x.iter().all(|v| v.is_finite()) {
            return None;
        }
        states.push(x.clone());
    }
    let pred = Trajectory::new(data.times.clone(), states).ok()?;
    mse_at_observations(&pred, data, 1e-9).ok()
}
