//! Benchmark truth systems, trajectory containers and the observation
//! process that turns clean trajectories into noisy, possibly gappy data.

use nalgebra::DVector;
use rand::Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};
use crate::linalg::expm_offdiag2;
use crate::rng::rng_from_seed;

use super::fields::{
    Lorenz63Field, NonlinearPendulumField, ReactionDiffusionField, VanDerPolField,
};
use super::integrate::rk4_path;
use super::Observation;

/// Default cap on the internal integrator step used when generating truth
/// data, small enough that discretization error is negligible next to the
/// observation noise in every benchmark configuration.
pub const DEFAULT_TRUTH_MAX_STEP: f64 = 1e-3;

/// Uniform 1-D spatial grid with `n_points` nodes spanning `[x_left, x_right]`.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct Grid1d {
    pub x_left: f64,
    pub x_right: f64,
    pub n_points: usize,
}

impl Grid1d {
    pub fn new(x_left: f64, x_right: f64, n_points: usize) -> Self {
        assert!(n_points >= 3, "grid needs at least 3 points");
        assert!(x_right > x_left);
        Grid1d {
            x_left,
            x_right,
            n_points,
        }
    }

    pub fn dx(&self) -> f64 {
        (self.x_right - self.x_left) / (self.n_points - 1) as f64
    }
}

/// A sampled state trajectory.
#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    pub times: Vec<f64>,
    pub states: Vec<DVector<f64>>,
}

impl Trajectory {
    pub fn new(times: Vec<f64>, states: Vec<DVector<f64>>) -> Result<Self> {
        if times.len() != states.len() {
            return Err(Error::DimensionMismatch(format!(
                "{} times vs {} states",
                times.len(),
                states.len()
            )));
        }
        if times.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::InvalidArgument(
                "trajectory times must be strictly increasing".into(),
            ));
        }
        if let Some(first) = states.first() {
            let d = first.len();
            if states.iter().any(|s| s.len() != d) {
                return Err(Error::DimensionMismatch(
                    "trajectory states have inconsistent dimensions".into(),
                ));
            }
        }
        Ok(Trajectory { times, states })
    }

    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    pub fn state_dim(&self) -> usize {
        self.states.first().map_or(0, |s| s.len())
    }

    /// State at time `t`, matched within `tol`.
    pub fn at_time(&self, t: f64, tol: f64) -> Option<&DVector<f64>> {
        self.times
            .iter()
            .position(|&ti| (ti - t).abs() <= tol)
            .map(|i| &self.states[i])
    }

    /// Clone of rows `[start, end)`.
    pub fn window(&self, start: usize, end: usize) -> Trajectory {
        Trajectory {
            times: self.times[start..end].to_vec(),
            states: self.states[start..end].to_vec(),
        }
    }
}

/// Observations on a strictly increasing time grid. A `None` entry is a
/// scheduled observation time at which no data arrived; filters skip the
/// update there and carry the prediction forward.
#[derive(Debug, Clone, PartialEq)]
pub struct ObservationSet {
    pub times: Vec<f64>,
    pub values: Vec<Option<DVector<f64>>>,
    pub obs_dim: usize,
}

impl ObservationSet {
    pub fn new(times: Vec<f64>, values: Vec<Option<DVector<f64>>>, obs_dim: usize) -> Result<Self> {
        if times.len() != values.len() {
            return Err(Error::DimensionMismatch(format!(
                "{} times vs {} observation slots",
                times.len(),
                values.len()
            )));
        }
        if times.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::InvalidArgument(
                "observation times must be strictly increasing".into(),
            ));
        }
        if values
            .iter()
            .flatten()
            .any(|v| v.len() != obs_dim)
        {
            return Err(Error::DimensionMismatch(
                "observation entries have inconsistent dimensions".into(),
            ));
        }
        Ok(ObservationSet {
            times,
            values,
            obs_dim,
        })
    }

    /// Build a fully observed set from plain vectors.
    pub fn fully_observed(times: Vec<f64>, values: Vec<DVector<f64>>) -> Result<Self> {
        let obs_dim = values.first().map_or(0, |v| v.len());
        Self::new(times, values.into_iter().map(Some).collect(), obs_dim)
    }

    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    pub fn n_present(&self) -> usize {
        self.values.iter().filter(|v| v.is_some()).count()
    }

    pub fn is_fully_observed(&self) -> bool {
        self.values.iter().all(|v| v.is_some())
    }

    pub fn first_present(&self) -> Option<(usize, &DVector<f64>)> {
        self.values
            .iter()
            .enumerate()
            .find_map(|(i, v)| v.as_ref().map(|y| (i, y)))
    }

    /// Observed values as matrix columns, erroring on gaps.
    pub fn dense_columns(&self) -> Result<Vec<&DVector<f64>>> {
        self.values
            .iter()
            .map(|v| {
                v.as_ref().ok_or_else(|| {
                    Error::InvalidArgument(
                        "dense data required: the observation set has missing rows".into(),
                    )
                })
            })
            .collect()
    }
}

/// `t_0 + k dt` for `k = 0..n`, computed from integer multiples so repeated
/// runs produce bit-identical grids.
pub fn uniform_grid(t0: f64, dt: f64, n: usize) -> Vec<f64> {
    (0..n).map(|k| t0 + k as f64 * dt).collect()
}

/// The five benchmark systems with their generating constants.
#[derive(Debug, Clone)]
pub enum TruthSystem {
    /// Small-angle pendulum `x'' = -(g/L) x`, solved exactly through the
    /// matrix exponential of `[[0, 1], [-g/L, 0]]`.
    LinearPendulum { g: f64, length: f64, x0: [f64; 2] },
    NonlinearPendulum { g: f64, length: f64, x0: [f64; 2] },
    VanDerPol { mu: f64, x0: [f64; 2] },
    Lorenz63 {
        sigma: f64,
        rho: f64,
        beta: f64,
        x0: [f64; 3],
    },
    /// Reaction-diffusion with a random initial field: each grid value of
    /// both species drawn independently from `U(ic_low, ic_high)` using
    /// `ic_seed`, so the trajectory is reproducible from the config alone.
    ReactionDiffusion {
        grid: Grid1d,
        d1: f64,
        d2: f64,
        k: f64,
        literal_c2_factor: bool,
        ic_seed: u64,
        ic_low: f64,
        ic_high: f64,
    },
}

impl TruthSystem {
    pub fn state_dim(&self) -> usize {
        match self {
            TruthSystem::LinearPendulum { .. }
            | TruthSystem::NonlinearPendulum { .. }
            | TruthSystem::VanDerPol { .. } => 2,
            TruthSystem::Lorenz63 { .. } => 3,
            TruthSystem::ReactionDiffusion { grid, .. } => 2 * grid.n_points,
        }
    }

    pub fn initial_state(&self) -> DVector<f64> {
        match self {
            TruthSystem::LinearPendulum { x0, .. }
            | TruthSystem::NonlinearPendulum { x0, .. }
            | TruthSystem::VanDerPol { x0, .. } => DVector::from_row_slice(x0),
            TruthSystem::Lorenz63 { x0, .. } => DVector::from_row_slice(x0),
            TruthSystem::ReactionDiffusion {
                grid,
                ic_seed,
                ic_low,
                ic_high,
                ..
            } => {
                let mut rng = rng_from_seed(*ic_seed);
                let n = 2 * grid.n_points;
                DVector::from_iterator(
                    n,
                    (0..n).map(|_| rng.gen_range(*ic_low..*ic_high)),
                )
            }
        }
    }
}

/// Integrate a truth system through `t_grid` (which must be strictly
/// increasing and start at the initial time of the system state).
pub fn simulate_truth_with_step(
    sys: &TruthSystem,
    t_grid: &[f64],
    max_step: f64,
) -> Result<Trajectory> {
    if t_grid.is_empty() {
        return Err(Error::InvalidArgument("empty time grid".into()));
    }
    if t_grid.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::InvalidArgument(
            "time grid must be strictly increasing".into(),
        ));
    }
    let x0 = sys.initial_state();
    let t0 = t_grid[0];
    let states = match sys {
        TruthSystem::LinearPendulum { g, length, .. } => t_grid
            .iter()
            .map(|&t| expm_offdiag2(1.0, -g / length, t - t0) * &x0)
            .collect(),
        TruthSystem::NonlinearPendulum { g, length, .. } => {
            rk4_path(&NonlinearPendulumField, &x0, &[g / length], t_grid, max_step)
        }
        TruthSystem::VanDerPol { mu, .. } => {
            rk4_path(&VanDerPolField, &x0, &[*mu], t_grid, max_step)
        }
        TruthSystem::Lorenz63 {
            sigma, rho, beta, ..
        } => rk4_path(&Lorenz63Field, &x0, &[*sigma, *rho, *beta], t_grid, max_step),
        TruthSystem::ReactionDiffusion {
            grid,
            d1,
            d2,
            k,
            literal_c2_factor,
            ..
        } => {
            let field = ReactionDiffusionField {
                grid: *grid,
                literal_c2_factor: *literal_c2_factor,
            };
            rk4_path(&field, &x0, &[*d1, *d2, *k], t_grid, max_step)
        }
    };
    Trajectory::new(t_grid.to_vec(), states)
}

pub fn simulate_truth(sys: &TruthSystem, t_grid: &[f64]) -> Result<Trajectory> {
    simulate_truth_with_step(sys, t_grid, DEFAULT_TRUTH_MAX_STEP)
}

/// Push a trajectory through an observation map and add isotropic Gaussian
/// noise with standard deviation `noise_sd`.
///
/// `keep_every` subsamples the trajectory rows (1 keeps all). `missing`
/// lists row indices, counted after subsampling, that are scheduled but
/// carry no data. Noise is drawn for every kept row in time order whether
/// or not it ends up missing, so changing the gap pattern does not change
/// the noise hitting the remaining rows.
pub fn observe(
    traj: &Trajectory,
    h: &dyn Observation,
    noise_sd: f64,
    seed: u64,
    keep_every: usize,
    missing: &[usize],
) -> Result<ObservationSet> {
    if keep_every == 0 {
        return Err(Error::InvalidArgument("keep_every must be >= 1".into()));
    }
    if h.state_dim() != traj.state_dim() {
        return Err(Error::DimensionMismatch(format!(
            "observation expects state dim {}, trajectory has {}",
            h.state_dim(),
            traj.state_dim()
        )));
    }
    if noise_sd < 0.0 {
        return Err(Error::InvalidArgument("noise_sd must be nonnegative".into()));
    }
    let mut rng = rng_from_seed(seed);
    let m = h.obs_dim();
    let mut times = Vec::new();
    let mut values = Vec::new();
    let mut kept_index = 0usize;
    for (row, (&t, x)) in traj.times.iter().zip(&traj.states).enumerate() {
        if row % keep_every != 0 {
            continue;
        }
        let mut y = h.apply(x, &[]);
        for j in 0..m {
            let z: f64 = rng.sample(StandardNormal);
            y[j] += noise_sd * z;
        }
        times.push(t);
        if missing.contains(&kept_index) {
            values.push(None);
        } else {
            values.push(Some(y));
        }
        kept_index += 1;
    }
    ObservationSet::new(times, values, m)
}
