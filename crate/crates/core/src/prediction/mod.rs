//! Posterior-predictive rollouts and their summaries.
//!
//! An ensemble is one forward simulation per posterior draw, all starting
//! from the same state. Draws are independently seeded from the draw index,
//! so the ensemble is reproducible and insensitive to thread scheduling.

use nalgebra::{DMatrix, DVector};
use rand::Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::linalg::safe_cholesky;
use crate::models::{uniform_grid, ObservationSet, StateSpaceModel, Trajectory};
use crate::rng::{derive_seed, rng_from_seed};

#[derive(Debug, Clone)]
pub struct RolloutOptions {
    pub n_steps: usize,
    /// Add one process-noise increment per discrete model step.
    pub with_process_noise: bool,
    /// A draw whose state norm exceeds this is marked invalid and padded
    /// with NaN from the first bad step onward.
    pub blowup_norm: f64,
    pub seed: u64,
}

impl RolloutOptions {
    pub fn new(n_steps: usize, seed: u64) -> Self {
        RolloutOptions {
            n_steps,
            with_process_noise: true,
            blowup_norm: 1e8,
            seed,
        }
    }
}

#[derive(Debug, Clone)]
pub struct EnsembleDraw {
    /// States at `t0, t0 + dt, ..`, including the shared initial state.
    pub states: Vec<DVector<f64>>,
    pub valid: bool,
}

#[derive(Debug, Clone)]
pub struct Ensemble {
    pub times: Vec<f64>,
    pub draws: Vec<EnsembleDraw>,
    pub state_dim: usize,
}

impl Ensemble {
    pub fn n_valid(&self) -> usize {
        self.draws.iter().filter(|d| d.valid).count()
    }
}

/// Roll the model forward once per parameter draw.
pub fn ensemble_rollout(
    model: &StateSpaceModel,
    thetas: &[DVector<f64>],
    x0: &DVector<f64>,
    t0: f64,
    options: &RolloutOptions,
) -> Result<Ensemble> {
    if thetas.is_empty() {
        return Err(Error::InvalidArgument("empty draw list".into()));
    }
    if x0.len() != model.state_dim() {
        return Err(Error::DimensionMismatch(format!(
            "initial state has dim {}, model expects {}",
            x0.len(),
            model.state_dim()
        )));
    }
    let d = model.state_dim();
    let n_rows = options.n_steps + 1;

    let draws: Vec<EnsembleDraw> = thetas
        .par_iter()
        .enumerate()
        .map(|(i, values)| {
            let theta = match model.params(values) {
                Ok(t) => t,
                Err(_) => {
                    return EnsembleDraw {
                        states: vec![DVector::from_element(d, f64::NAN); n_rows],
                        valid: false,
                    }
                }
            };
            let noise_chol = if options.with_process_noise {
                match safe_cholesky(&model.sigma(&theta), 0.0) {
                    Some(c) => Some(c),
                    None => {
                        return EnsembleDraw {
                            states: vec![DVector::from_element(d, f64::NAN); n_rows],
                            valid: false,
                        }
                    }
                }
            } else {
                None
            };
            let mut rng = rng_from_seed(derive_seed(options.seed, &[i as u64]));
            let mut states = Vec::with_capacity(n_rows);
            states.push(x0.clone());
            let mut x = x0.clone();
            let mut valid = true;
            for _ in 0..options.n_steps {
                x = model.psi(&x, &theta);
                if let Some(chol) = &noise_chol {
                    let z = DVector::from_fn(d, |_, _| rng.sample(StandardNormal));
                    x += chol.l() * z;
                }
                if !x.iter().all(|v| v.is_finite()) || x.norm() > options.blowup_norm {
                    valid = false;
                    break;
                }
                states.push(x.clone());
            }
            if !valid {
                while states.len() < n_rows {
                    states.push(DVector::from_element(d, f64::NAN));
                }
            }
            EnsembleDraw { states, valid }
        })
        .collect();

    Ok(Ensemble {
        times: uniform_grid(t0, model.dt, n_rows),
        draws,
        state_dim: d,
    })
}

/// How to collapse the ensemble to a single series per state.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Reduction {
    Mean,
    /// Pointwise quantile band; the center is the median.
    QuantileBand { lo: f64, hi: f64 },
    /// Pointwise kernel-density mode over the draws.
    Mode,
}

#[derive(Debug, Clone)]
pub struct ReducedSeries {
    pub times: Vec<f64>,
    pub center: Vec<DVector<f64>>,
    pub lower: Option<Vec<DVector<f64>>>,
    pub upper: Option<Vec<DVector<f64>>>,
    pub n_draws_used: usize,
}

impl ReducedSeries {
    /// The center line as a trajectory.
    pub fn center_trajectory(&self) -> Result<Trajectory> {
        Trajectory::new(self.times.clone(), self.center.clone())
    }
}

/// Empirical quantile with linear interpolation between order statistics
/// (the convention of Hyndman & Fan's type 7, the numpy default).
pub fn quantile(sorted: &[f64], q: f64) -> f64 {
    debug_assert!(!sorted.is_empty());
    debug_assert!((0.0..=1.0).contains(&q));
    let n = sorted.len();
    if n == 1 {
        return sorted[0];
    }
    let h = q * (n - 1) as f64;
    let lo = h.floor() as usize;
    let hi = (lo + 1).min(n - 1);
    let frac = h - lo as f64;
    sorted[lo] + frac * (sorted[hi] - sorted[lo])
}

/// Mode of a sample by a Gaussian kernel density estimate evaluated at the
/// sample points, with Silverman's bandwidth.
pub fn kde_mode(values: &[f64]) -> f64 {
    let n = values.len();
    debug_assert!(n >= 2);
    let nf = n as f64;
    let mean = values.iter().sum::<f64>() / nf;
    let sd = (values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (nf - 1.0)).sqrt();
    let mut sorted = values.to_vec();
    sorted.sort_by(|a, b| a.partial_cmp(b).unwrap_or(std::cmp::Ordering::Equal));
    let iqr = quantile(&sorted, 0.75) - quantile(&sorted, 0.25);
    let spread = if iqr > 0.0 { sd.min(iqr / 1.34) } else { sd };
    if spread <= 0.0 {
        return sorted[n / 2];
    }
    let bw = 0.9 * spread * nf.powf(-0.2);
    let mut best = (f64::NEG_INFINITY, sorted[0]);
    for &center in &sorted {
        let mut dens = 0.0;
        for &v in &sorted {
            let u = (v - center) / bw;
            dens += (-0.5 * u * u).exp();
        }
        if dens > best.0 {
            best = (dens, center);
        }
    }
    best.1
}

/// Collapse the ensemble pointwise in time and state.
pub fn reduce_ensemble(ensemble: &Ensemble, reduction: Reduction) -> Result<ReducedSeries> {
    let valid: Vec<&EnsembleDraw> = ensemble.draws.iter().filter(|d| d.valid).collect();
    let k = valid.len();
    if k == 0 {
        return Err(Error::InvalidArgument(
            "every rollout draw diverged; nothing to reduce".into(),
        ));
    }
    if matches!(reduction, Reduction::Mode) && k < 30 {
        return Err(Error::InvalidArgument(format!(
            "mode reduction needs at least 30 valid draws, got {k}"
        )));
    }
    if let Reduction::QuantileBand { lo, hi } = reduction {
        if !(0.0..=1.0).contains(&lo) || !(0.0..=1.0).contains(&hi) || lo >= hi {
            return Err(Error::InvalidArgument(format!(
                "bad quantile band [{lo}, {hi}]"
            )));
        }
    }

    let n_rows = ensemble.times.len();
    let d = ensemble.state_dim;
    let mut center = Vec::with_capacity(n_rows);
    let mut lower = Vec::with_capacity(n_rows);
    let mut upper = Vec::with_capacity(n_rows);
    let mut buf = vec![0.0; k];
    for t in 0..n_rows {
        let mut c = DVector::zeros(d);
        let mut l = DVector::zeros(d);
        let mut u = DVector::zeros(d);
        for j in 0..d {
            for (slot, draw) in buf.iter_mut().zip(&valid) {
                *slot = draw.states[t][j];
            }
            match reduction {
                Reduction::Mean => {
                    c[j] = buf.iter().sum::<f64>() / k as f64;
                }
                Reduction::QuantileBand { lo, hi } => {
                    buf.sort_by(|a, b| a.partial_cmp(b).unwrap_or(std::cmp::Ordering::Equal));
                    c[j] = quantile(&buf, 0.5);
                    l[j] = quantile(&buf, lo);
                    u[j] = quantile(&buf, hi);
                }
                Reduction::Mode => {
                    c[j] = kde_mode(&buf);
                }
            }
        }
        center.push(c);
        if matches!(reduction, Reduction::QuantileBand { .. }) {
            lower.push(l);
            upper.push(u);
        }
    }
    let has_band = matches!(reduction, Reduction::QuantileBand { .. });
    Ok(ReducedSeries {
        times: ensemble.times.clone(),
        center,
        lower: has_band.then_some(lower),
        upper: has_band.then_some(upper),
        n_draws_used: k,
    })
}

/// Mean squared error between a predicted series and observed data, averaged
/// over every present observation row and component. Prediction times are
/// matched to observation times within `tol`.
pub fn mse_at_observations(pred: &Trajectory, data: &ObservationSet, tol: f64) -> Result<f64> {
    if pred.state_dim() != data.obs_dim {
        return Err(Error::DimensionMismatch(format!(
            "prediction dim {} != observation dim {}",
            pred.state_dim(),
            data.obs_dim
        )));
    }
    let mut acc = 0.0;
    let mut count = 0usize;
    for (t, v) in data.times.iter().zip(&data.values) {
        let Some(y) = v else { continue };
        let Some(x) = pred.at_time(*t, tol) else {
            return Err(Error::InvalidArgument(format!(
                "prediction has no sample within {tol} of observation time {t}"
            )));
        };
        acc += (y - x).norm_squared();
        count += y.len();
    }
    if count == 0 {
        return Err(Error::InvalidArgument(
            "no present observations to score against".into(),
        ));
    }
    Ok(acc / count as f64)
}

/// Evenly spaced subsample of at most `max_n` rows, always keeping the last.
pub fn thin_draws(samples: &[DVector<f64>], max_n: usize) -> Vec<DVector<f64>> {
    assert!(max_n > 0);
    let n = samples.len();
    if n <= max_n {
        return samples.to_vec();
    }
    (0..max_n)
        .map(|i| {
            let idx = ((i as f64 + 1.0) * n as f64 / max_n as f64).ceil() as usize - 1;
            samples[idx.min(n - 1)].clone()
        })
        .collect()
}

/// Project an ensemble's valid draws through the model's observation map,
/// yielding matrices `(draws x times)` per observed component.
pub fn observe_ensemble(
    model: &StateSpaceModel,
    ensemble: &Ensemble,
    theta: &DVector<f64>,
) -> Result<Vec<DMatrix<f64>>> {
    let params = model.params(theta)?;
    let m = model.obs_dim();
    let valid: Vec<&EnsembleDraw> = ensemble.draws.iter().filter(|d| d.valid).collect();
    let mut out = vec![DMatrix::zeros(valid.len(), ensemble.times.len()); m];
    for (i, draw) in valid.iter().enumerate() {
        for (t, x) in draw.states.iter().enumerate() {
            let y = model.h(x, &params);
            for j in 0..m {
                out[j][(i, t)] = y[j];
            }
        }
    }
    Ok(out)
}
