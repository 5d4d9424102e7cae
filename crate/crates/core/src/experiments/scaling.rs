//! Empirical wall-clock scaling of the filter evaluations.
//!
//! The flop counts in [`super::flops`] predict cost linear in the number of
//! observations at fixed state dimension. This module measures it: run a
//! filter likelihood over synthetic data for a grid of `(d, n)` sizes and
//! fit `log t` against `log n` per dimension.

use nalgebra::{DMatrix, DVector};
use rand::Rng;
use rand_distr::StandardNormal;
use std::sync::Arc;
use std::time::Instant;

use crate::error::{Error, Result};
use crate::filters::{kf_marginal_loglik, ukf_marginal_loglik, FilterSettings, GaussianBelief};
use crate::models::{
    uniform_grid, CovSpec, IdentityObs, LinearDynamics, ObservationSet, StateSpaceModel,
};
use crate::rng::{derive_seed, rng_from_seed};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ScalingFilter {
    Kf,
    Ukf,
}

#[derive(Debug, Clone)]
pub struct ScalingPoint {
    pub d: usize,
    pub n: usize,
    pub median_seconds: f64,
}

/// Least-squares line through `(ln n, ln t)` at one state dimension.
#[derive(Debug, Clone)]
pub struct ScalingFitLine {
    pub d: usize,
    pub slope: f64,
    pub intercept: f64,
    pub r_squared: f64,
}

#[derive(Debug, Clone)]
pub struct ScalingReport {
    pub filter: ScalingFilter,
    pub points: Vec<ScalingPoint>,
    /// One fit per dimension; empty when `n_list` has fewer than two sizes.
    pub fits: Vec<ScalingFitLine>,
}

/// Time `trials` likelihood evaluations per `(d, n)` pair and keep the
/// median. The data are synthetic standard-normal observations; their
/// content does not affect the operation count.
pub fn scaling_probe(
    filter: ScalingFilter,
    d_list: &[usize],
    n_list: &[usize],
    trials: usize,
    seed: u64,
) -> Result<ScalingReport> {
    if d_list.is_empty() || n_list.is_empty() {
        return Err(Error::InvalidArgument("need at least one d and one n".into()));
    }
    if trials == 0 {
        return Err(Error::InvalidArgument("trials must be >= 1".into()));
    }
    if d_list.iter().chain(n_list).any(|&v| v == 0) {
        return Err(Error::InvalidArgument("sizes must be positive".into()));
    }

    let mut points = Vec::with_capacity(d_list.len() * n_list.len());
    for &d in d_list {
        for &n in n_list {
            let (model, theta, data, init) =
                timing_instance(d, n, derive_seed(seed, &[d as u64, n as u64]))?;
            let params = model.params(&theta)?;
            let settings = FilterSettings::default();
            let mut samples = Vec::with_capacity(trials);
            for _ in 0..trials {
                let start = Instant::now();
                let result = match filter {
                    ScalingFilter::Kf => {
                        kf_marginal_loglik(&model, &params, &data, &init, &settings)?
                    }
                    ScalingFilter::Ukf => {
                        ukf_marginal_loglik(&model, &params, &data, &init, &settings)?
                    }
                };
                let elapsed = start.elapsed().as_secs_f64();
                if !result.log_lik.is_finite() {
                    return Err(Error::Numerical(
                        "timing run produced a non-finite likelihood".into(),
                    ));
                }
                samples.push(elapsed);
            }
            points.push(ScalingPoint {
                d,
                n,
                median_seconds: median(&mut samples),
            });
        }
    }

    let mut fits = Vec::new();
    if n_list.len() >= 2 {
        for &d in d_list {
            let xs: Vec<f64> = points
                .iter()
                .filter(|p| p.d == d)
                .map(|p| (p.n as f64).ln())
                .collect();
            let ys: Vec<f64> = points
                .iter()
                .filter(|p| p.d == d)
                .map(|p| p.median_seconds.ln())
                .collect();
            let (slope, intercept, r_squared) = log_log_fit(&xs, &ys)?;
            fits.push(ScalingFitLine {
                d,
                slope,
                intercept,
                r_squared,
            });
        }
    }
    Ok(ScalingReport {
        filter,
        points,
        fits,
    })
}

fn timing_instance(
    d: usize,
    n: usize,
    seed: u64,
) -> Result<(StateSpaceModel, DVector<f64>, ObservationSet, GaussianBelief)> {
    let model = StateSpaceModel::new(
        0.1,
        Arc::new(LinearDynamics { dim: d }),
        Arc::new(IdentityObs { dim: d }),
        CovSpec::Isotropic { dim: d },
        CovSpec::Isotropic { dim: d },
    )?;
    // mildly contracting dynamics keep the state bounded over long runs
    let mut theta = Vec::with_capacity(d * d + 2);
    let a = DMatrix::<f64>::identity(d, d) * 0.9;
    theta.extend(a.transpose().iter().copied());
    theta.push(0.01);
    theta.push(0.04);
    let theta = DVector::from_vec(theta);

    let mut rng = rng_from_seed(seed);
    let times = uniform_grid(0.0, 0.1, n);
    let values = (0..n)
        .map(|_| {
            Some(DVector::from_fn(d, |_, _| {
                rng.sample::<f64, _>(StandardNormal)
            }))
        })
        .collect();
    let data = ObservationSet::new(times, values, d)?;
    let init = GaussianBelief::new(DVector::zeros(d), DMatrix::identity(d, d))?;
    Ok((model, theta, data, init))
}

fn median(samples: &mut [f64]) -> f64 {
    samples.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let n = samples.len();
    if n % 2 == 1 {
        samples[n / 2]
    } else {
        0.5 * (samples[n / 2 - 1] + samples[n / 2])
    }
}

/// Simple least squares of `ys` on `xs`, returning slope, intercept and R^2.
pub fn log_log_fit(xs: &[f64], ys: &[f64]) -> Result<(f64, f64, f64)> {
    if xs.len() != ys.len() || xs.len() < 2 {
        return Err(Error::InvalidArgument(
            "regression needs two or more paired points".into(),
        ));
    }
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let mut sxx = 0.0;
    let mut sxy = 0.0;
    let mut syy = 0.0;
    for (&x, &y) in xs.iter().zip(ys) {
        sxx += (x - mx) * (x - mx);
        sxy += (x - mx) * (y - my);
        syy += (y - my) * (y - my);
    }
    if sxx == 0.0 {
        return Err(Error::InvalidArgument(
            "regression abscissae are all identical".into(),
        ));
    }
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let r_squared = if syy == 0.0 { 1.0 } else { sxy * sxy / (sxx * syy) };
    Ok((slope, intercept, r_squared))
}
