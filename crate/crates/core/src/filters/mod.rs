//! Gaussian filtering and the marginal likelihood of observed data.
//!
//! Conditioned on a parameter vector, the data likelihood of a state-space
//! model factorizes over time into one-step evidence terms
//! `p(y_k | y_{1:k-1}, theta) = N(y_k; mu_k, S_k)`, where `(mu_k, S_k)` come
//! out of the predict stage of a Gaussian filter (Sarkka, *Bayesian
//! Filtering and Smoothing*, ch. 12). Running the filter once therefore
//! yields both the filtered state beliefs and the exact (linear case) or
//! approximate (unscented case) log marginal likelihood.
//!
//! Numerical failures never panic or error here: the evaluation returns a
//! result whose `log_lik` is `-inf` so samplers treat the parameter point as
//! infeasible. Structural misuse (wrong dimensions, a nonlinear model handed
//! to the linear filter) is a real [`Error`].

mod degenerate;
mod kalman;
mod unscented;

pub use degenerate::{det_loglik, noiseless_loglik};
pub use kalman::kf_marginal_loglik;
pub use unscented::{sigma_points, ukf_marginal_loglik, unscented_weights, UnscentedWeights};

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::linalg::DEFAULT_NUGGET;
use crate::models::{ObservationSet, ParameterVector, StateSpaceModel};

/// Mean and covariance of a Gaussian state belief.
#[derive(Debug, Clone, PartialEq)]
pub struct GaussianBelief {
    pub mean: DVector<f64>,
    pub cov: DMatrix<f64>,
}

impl GaussianBelief {
    pub fn new(mean: DVector<f64>, cov: DMatrix<f64>) -> Result<Self> {
        if cov.nrows() != mean.len() || cov.ncols() != mean.len() {
            return Err(Error::DimensionMismatch(format!(
                "belief mean has dim {} but covariance is {}x{}",
                mean.len(),
                cov.nrows(),
                cov.ncols()
            )));
        }
        let scale = cov.iter().fold(0.0_f64, |a, v| a.max(v.abs()));
        let tol = 1e-12 * (1.0 + scale);
        for i in 0..cov.nrows() {
            for j in (i + 1)..cov.ncols() {
                if (cov[(i, j)] - cov[(j, i)]).abs() > tol {
                    return Err(Error::InvalidArgument(
                        "belief covariance is not symmetric".into(),
                    ));
                }
            }
        }
        Ok(GaussianBelief { mean, cov })
    }

    pub fn dim(&self) -> usize {
        self.mean.len()
    }
}

/// Settings shared by the filter-based likelihood evaluators.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FilterSettings {
    /// Sigma-point spread parameter.
    pub alpha: f64,
    /// Secondary scaling parameter.
    pub kappa: f64,
    /// Prior-distribution weighting of the zeroth covariance weight.
    pub beta: f64,
    /// Diagonal jitter used to rescue a covariance whose Cholesky
    /// factorization fails; never added on the healthy path.
    pub eps: f64,
    /// Replace the standard `K S K^T` covariance downdate of the unscented
    /// update with `K S^{-1} K^T`, a variant found in some published
    /// pseudocode. Kept selectable for comparison; the default form is the
    /// one that reproduces the Kalman filter exactly on linear models.
    pub triple_inverse_downdate: bool,
}

impl Default for FilterSettings {
    fn default() -> Self {
        FilterSettings {
            alpha: 1e-3,
            kappa: 0.0,
            beta: 1.0,
            eps: DEFAULT_NUGGET,
            triple_inverse_downdate: false,
        }
    }
}

/// One-step predictive evidence `N(mu, s)` for the observation at `step`.
#[derive(Debug, Clone, PartialEq)]
pub struct EvidenceTerm {
    pub step: usize,
    pub mean: DVector<f64>,
    pub cov: DMatrix<f64>,
}

/// Output of a filtering pass.
///
/// `beliefs[k]` is the filtered belief after processing row `k` of the data
/// (the prediction itself when that row carries no observation). `evidences`
/// holds one entry per row that did carry an observation, and `log_lik` is
/// the sum of their log densities evaluated at the data. If the pass failed
/// numerically, `log_lik` is `-inf`, `failed_at` records the offending row,
/// and the recorded sequences stop there.
#[derive(Debug, Clone)]
pub struct FilterResult {
    pub log_lik: f64,
    pub beliefs: Vec<GaussianBelief>,
    pub evidences: Vec<EvidenceTerm>,
    pub failed_at: Option<usize>,
}

impl FilterResult {
    pub(crate) fn failed(at: usize, beliefs: Vec<GaussianBelief>, evidences: Vec<EvidenceTerm>) -> Self {
        FilterResult {
            log_lik: f64::NEG_INFINITY,
            beliefs,
            evidences,
            failed_at: Some(at),
        }
    }
}

/// How the filter obtains its belief about the pre-data state `X_0`.
#[derive(Debug, Clone)]
pub enum InitBelief {
    /// Mean set to the first present observation pulled back through the
    /// observation inverse; covariance set to `Gamma(theta)`. Requires an
    /// invertible observation map.
    FromFirstObservation,
    /// A caller-supplied belief.
    Fixed(GaussianBelief),
}

impl InitBelief {
    /// Materialize the initial belief for a particular parameter vector.
    pub fn resolve(
        &self,
        model: &StateSpaceModel,
        theta: &ParameterVector,
        data: &ObservationSet,
    ) -> Result<GaussianBelief> {
        match self {
            InitBelief::Fixed(b) => {
                if b.dim() != model.state_dim() {
                    return Err(Error::DimensionMismatch(format!(
                        "initial belief dim {} != state dim {}",
                        b.dim(),
                        model.state_dim()
                    )));
                }
                Ok(b.clone())
            }
            InitBelief::FromFirstObservation => {
                let (_, y) = data.first_present().ok_or_else(|| {
                    Error::InvalidArgument("data set has no observations".into())
                })?;
                let mean = model
                    .observation
                    .invert(y, theta.obs_block())
                    .ok_or_else(|| {
                        Error::InvalidArgument(
                            "observation map has no inverse; supply a fixed initial belief"
                                .into(),
                        )
                    })?;
                let cov = model.gamma(theta);
                // Gamma is m x m; for invertible observations m == d.
                if cov.nrows() != model.state_dim() {
                    return Err(Error::DimensionMismatch(
                        "cannot seed state covariance from Gamma: dimensions differ".into(),
                    ));
                }
                GaussianBelief::new(mean, cov)
            }
        }
    }
}

pub(crate) fn check_filter_inputs(
    model: &StateSpaceModel,
    theta: &ParameterVector,
    data: &ObservationSet,
    init: &GaussianBelief,
) -> Result<()> {
    if theta.partition() != model.partition() {
        return Err(Error::DimensionMismatch(
            "parameter partition does not match the model".into(),
        ));
    }
    if data.obs_dim != model.obs_dim() {
        return Err(Error::DimensionMismatch(format!(
            "data has obs dim {} but model expects {}",
            data.obs_dim,
            model.obs_dim()
        )));
    }
    if init.dim() != model.state_dim() {
        return Err(Error::DimensionMismatch(format!(
            "initial belief dim {} != state dim {}",
            init.dim(),
            model.state_dim()
        )));
    }
    Ok(())
}
