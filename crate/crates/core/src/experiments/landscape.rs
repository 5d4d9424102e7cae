//! Objective-function landscapes for the two-parameter pendulum.
//!
//! Three ways of scoring a parameter pair against the same data, each the
//! natural objective when one noise source is ignored: a pure
//! trajectory-matching cost (no process noise), a one-step propagator
//! residual cost (no measurement noise), and the full marginal log
//! posterior. The parameterization is the continuous system
//! `x1' = theta1 x2, x2' = theta2 x1`, whose exact discrete propagator over
//! a span `t` is the matrix exponential of the off-diagonal pair.

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::filters::{FilterSettings, GaussianBelief, InitBelief};
use crate::linalg::expm_offdiag2;
use crate::models::{
    observe, simulate_truth, uniform_grid, CovSpec, Dynamics, IdentityObs, ObservationSet,
    StateSpaceModel, TruthSystem,
};
use crate::posterior::{LikelihoodKind, LogDensity, Posterior, PriorSpec};
use crate::rng::derive_seed;

use std::sync::Arc;

/// Exact one-step propagator of the off-diagonal pendulum parameterization.
#[derive(Debug, Clone)]
struct PendulumExpmDynamics {
    dt: f64,
}

impl Dynamics for PendulumExpmDynamics {
    fn dim(&self) -> usize {
        2
    }
    fn param_len(&self) -> usize {
        2
    }
    fn step(&self, x: &DVector<f64>, theta: &[f64]) -> DVector<f64> {
        expm_offdiag2(theta[0], theta[1], self.dt) * x
    }
    fn linear_matrix(&self, theta: &[f64]) -> Option<DMatrix<f64>> {
        Some(expm_offdiag2(theta[0], theta[1], self.dt))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LandscapeObjective {
    /// Trajectory-matching squared error from a known initial state
    /// (smaller is better).
    NoProcessNoise,
    /// One-step propagator residual squared error between consecutive
    /// observations (smaller is better).
    NoMeasurementNoise,
    /// Marginal log posterior through the Kalman filter (larger is better).
    LogPosterior,
}

impl LandscapeObjective {
    /// True when the objective is a cost to minimize rather than a
    /// log-density to maximize.
    pub fn is_cost(&self) -> bool {
        !matches!(self, LandscapeObjective::LogPosterior)
    }
}

#[derive(Debug, Clone)]
pub struct LandscapeConfig {
    /// Known initial state, one sampling interval before the first
    /// observation row.
    pub x0: DVector<f64>,
    /// Time at which `x0` holds.
    pub x0_time: f64,
    /// Fixed process variance used by the log-posterior objective.
    pub proc_var: f64,
    /// Fixed measurement variance used by the log-posterior objective.
    pub meas_var: f64,
}

#[derive(Debug, Clone)]
pub struct LandscapeGrid {
    pub objective: LandscapeObjective,
    pub theta1: Vec<f64>,
    pub theta2: Vec<f64>,
    /// `values[(i, j)]` is the objective at `(theta1[i], theta2[j])`.
    pub values: DMatrix<f64>,
    /// Indices of the best grid point: the minimum for costs, the maximum
    /// for the log posterior.
    pub best: (usize, usize),
}

impl LandscapeGrid {
    pub fn best_point(&self) -> (f64, f64) {
        (self.theta1[self.best.0], self.theta2[self.best.1])
    }
}

/// Quadratic cost of a frequency mismatch: the squared error between
/// `cos(2t)` and `cos(omega t)` integrated over `[0, T]` by the composite
/// trapezoid rule with step at most `quad_step`.
pub fn ls_frequency_cost(omega: f64, t_final: f64, quad_step: f64) -> f64 {
    assert!(t_final > 0.0 && quad_step > 0.0);
    let n = (t_final / quad_step).ceil().max(1.0) as usize;
    let h = t_final / n as f64;
    let f = |t: f64| ((2.0 * t).cos() - (omega * t).cos()).powi(2);
    let mut acc = 0.5 * (f(0.0) + f(t_final));
    for k in 1..n {
        acc += f(k as f64 * h);
    }
    acc * h
}

/// Evaluate one objective over the cartesian grid `theta1 x theta2`.
///
/// Grid points where a rollout diverges keep their slot: costs become
/// `+inf`, the log posterior `-inf`, so the returned grid is always
/// rectangular and the best point is well defined whenever any point is
/// finite.
pub fn objective_landscape(
    objective: LandscapeObjective,
    theta1: &[f64],
    theta2: &[f64],
    data: &ObservationSet,
    cfg: &LandscapeConfig,
) -> Result<LandscapeGrid> {
    if theta1.is_empty() || theta2.is_empty() {
        return Err(Error::InvalidArgument("empty parameter grid".into()));
    }
    if data.obs_dim != 2 {
        return Err(Error::DimensionMismatch(
            "pendulum landscape expects 2-component observations".into(),
        ));
    }
    if cfg.x0.len() != 2 {
        return Err(Error::DimensionMismatch("x0 must have dimension 2".into()));
    }
    if data.times.first().is_some_and(|&t| t <= cfg.x0_time) {
        return Err(Error::InvalidArgument(
            "observations must start after the initial-state time".into(),
        ));
    }

    let mut values = DMatrix::zeros(theta1.len(), theta2.len());
    match objective {
        LandscapeObjective::NoProcessNoise => {
            for (i, &a) in theta1.iter().enumerate() {
                for (j, &b) in theta2.iter().enumerate() {
                    values[(i, j)] = trajectory_cost(a, b, data, cfg);
                }
            }
        }
        LandscapeObjective::NoMeasurementNoise => {
            for (i, &a) in theta1.iter().enumerate() {
                for (j, &b) in theta2.iter().enumerate() {
                    values[(i, j)] = propagator_cost(a, b, data);
                }
            }
        }
        LandscapeObjective::LogPosterior => {
            let post = pendulum_log_posterior(data, cfg)?;
            for (i, &a) in theta1.iter().enumerate() {
                for (j, &b) in theta2.iter().enumerate() {
                    values[(i, j)] = post.log_density(&DVector::from_vec(vec![a, b]));
                }
            }
        }
    }

    let mut best = (0, 0);
    for i in 0..theta1.len() {
        for j in 0..theta2.len() {
            let better = if objective.is_cost() {
                values[(i, j)] < values[best]
            } else {
                values[(i, j)] > values[best]
            };
            if better {
                best = (i, j);
            }
        }
    }
    Ok(LandscapeGrid {
        objective,
        theta1: theta1.to_vec(),
        theta2: theta2.to_vec(),
        values,
        best,
    })
}

/// The marginal log posterior used by the `LogPosterior` objective, exposed
/// so callers can score individual points through the identical code path.
pub fn pendulum_log_posterior(data: &ObservationSet, cfg: &LandscapeConfig) -> Result<Posterior> {
    let dt = infer_uniform_dt(data)?;
    let model = StateSpaceModel::new(
        dt,
        Arc::new(PendulumExpmDynamics { dt }),
        Arc::new(IdentityObs { dim: 2 }),
        CovSpec::fixed_isotropic(2, cfg.proc_var),
        CovSpec::fixed_isotropic(2, cfg.meas_var),
    )?;
    let prior = PriorSpec::uninformative(model.partition());
    let init = InitBelief::Fixed(GaussianBelief::new(
        cfg.x0.clone(),
        DMatrix::zeros(2, 2),
    )?);
    Posterior::new(
        model,
        data.clone(),
        prior,
        LikelihoodKind::Kalman,
        init,
        FilterSettings::default(),
    )
}

fn infer_uniform_dt(data: &ObservationSet) -> Result<f64> {
    if data.len() < 2 {
        return Err(Error::InvalidArgument(
            "need at least two observation rows".into(),
        ));
    }
    let dt = data.times[1] - data.times[0];
    for w in data.times.windows(2) {
        if ((w[1] - w[0]) - dt).abs() > 1e-9 * dt.abs().max(1.0) {
            return Err(Error::InvalidArgument(
                "landscape objectives require a uniform observation grid".into(),
            ));
        }
    }
    Ok(dt)
}

fn trajectory_cost(a: f64, b: f64, data: &ObservationSet, cfg: &LandscapeConfig) -> f64 {
    let mut acc = 0.0;
    for (t, v) in data.times.iter().zip(&data.values) {
        let Some(y) = v else { continue };
        let x = expm_offdiag2(a, b, t - cfg.x0_time) * &cfg.x0;
        if !x.iter().all(|u| u.is_finite()) {
            return f64::INFINITY;
        }
        acc += (y - x).norm_squared();
    }
    if acc.is_finite() {
        acc
    } else {
        f64::INFINITY
    }
}

fn propagator_cost(a: f64, b: f64, data: &ObservationSet) -> f64 {
    let mut acc = 0.0;
    let mut prev: Option<(f64, &DVector<f64>)> = None;
    for (t, v) in data.times.iter().zip(&data.values) {
        let Some(y) = v else {
            prev = None;
            continue;
        };
        if let Some((tp, yp)) = prev {
            let pred = expm_offdiag2(a, b, t - tp) * yp;
            if !pred.iter().all(|u| u.is_finite()) {
                return f64::INFINITY;
            }
            acc += (y - pred).norm_squared();
        }
        prev = Some((*t, y));
    }
    if acc.is_finite() {
        acc
    } else {
        f64::INFINITY
    }
}

/// Pendulum data for the landscape studies: the truth starts at `x0` at time
/// zero and is observed at `dt, 2 dt, .., n dt` with isotropic noise. The
/// observation window grows with `n` at a fixed sampling interval.
pub fn pendulum_window_data(
    n: usize,
    dt: f64,
    noise_sd: f64,
    seed: u64,
    x0: [f64; 2],
) -> Result<(ObservationSet, DVector<f64>)> {
    if n == 0 {
        return Err(Error::InvalidArgument("need at least one observation".into()));
    }
    let sys = TruthSystem::LinearPendulum {
        g: 9.81,
        length: 1.0,
        x0,
    };
    let grid = uniform_grid(0.0, dt, n + 1);
    let traj = simulate_truth(&sys, &grid)?;
    let full = observe(
        &traj,
        &IdentityObs { dim: 2 },
        noise_sd,
        derive_seed(seed, &[0]),
        1,
        &[],
    )?;
    // drop the initial row: x0 is treated as known, data starts one step in
    let set = ObservationSet::new(
        full.times[1..].to_vec(),
        full.values[1..].to_vec(),
        full.obs_dim,
    )?;
    Ok((set, sys.initial_state()))
}
