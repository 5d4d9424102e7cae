//! Kalman filter with marginal-likelihood accumulation for linear models.

use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::linalg::{mvn_logpdf, safe_cholesky, symmetrize};
use crate::models::{ObservationSet, ParameterVector, StateSpaceModel};

use super::{check_filter_inputs, EvidenceTerm, FilterResult, FilterSettings, GaussianBelief};

/// Exact log marginal likelihood of `data` under a linear-Gaussian model,
/// computed by one pass of the Kalman filter.
///
/// Per step: predict `m- = A m`, `P- = A P A^T + Sigma`; when a row carries
/// an observation, score it against the evidence `N(H m-, H P- H^T + Gamma)`
/// and condition the belief on it; when it does not, the prediction is
/// carried forward unchanged. Formed covariances are symmetrized; the
/// evidence covariance is factorized by Cholesky (which also supplies its
/// log determinant), with `settings.eps` used only to rescue a failed
/// factorization so the healthy path stays exact.
pub fn kf_marginal_loglik(
    model: &StateSpaceModel,
    theta: &ParameterVector,
    data: &ObservationSet,
    init: &GaussianBelief,
    settings: &FilterSettings,
) -> Result<FilterResult> {
    check_filter_inputs(model, theta, data, init)?;
    let a = model
        .dynamics
        .linear_matrix(theta.dyn_block())
        .ok_or_else(|| {
            Error::InvalidArgument(
                "Kalman filter requires linear dynamics; use the unscented filter".into(),
            )
        })?;
    let h = model
        .observation
        .linear_matrix(theta.obs_block())
        .ok_or_else(|| {
            Error::InvalidArgument(
                "Kalman filter requires a linear observation map; use the unscented filter"
                    .into(),
            )
        })?;
    let sigma = model.sigma(theta);
    let gamma = model.gamma(theta);
    let eps = settings.eps;

    let n = data.len();
    let mut beliefs = Vec::with_capacity(n);
    let mut evidences = Vec::new();
    let mut log_lik = 0.0;
    let mut mean = init.mean.clone();
    let mut cov = init.cov.clone();

    let finite = |m: &DMatrix<f64>| m.iter().all(|v| v.is_finite());
    if !finite(&a) || !finite(&h) || !finite(&sigma) || !finite(&gamma) {
        return Ok(FilterResult::failed(0, beliefs, evidences));
    }

    for (k, maybe_y) in data.values.iter().enumerate() {
        // Predict.
        mean = &a * &mean;
        cov = &a * &cov * a.transpose() + &sigma;
        symmetrize(&mut cov);
        if !mean.iter().all(|v| v.is_finite()) || !cov.iter().all(|v| v.is_finite()) {
            return Ok(FilterResult::failed(k, beliefs, evidences));
        }

        if let Some(y) = maybe_y {
            // Evidence for this observation.
            let mu = &h * &mean;
            let pht = &cov * h.transpose();
            let mut s = &h * &pht + &gamma;
            symmetrize(&mut s);
            let chol = match safe_cholesky(&s, eps) {
                Some(c) => c,
                None => return Ok(FilterResult::failed(k, beliefs, evidences)),
            };
            let term = mvn_logpdf(y, &mu, &chol);
            if !term.is_finite() {
                return Ok(FilterResult::failed(k, beliefs, evidences));
            }
            log_lik += term;
            evidences.push(EvidenceTerm {
                step: k,
                mean: mu.clone(),
                cov: s.clone(),
            });

            // Condition on the observation: K = P- H^T S^{-1}, computed by
            // solving against the factored S instead of inverting it.
            let gain = chol.solve(&pht.transpose()).transpose();
            mean += &gain * (y - &mu);
            cov -= &gain * &s * gain.transpose();
            symmetrize(&mut cov);
            if !mean.iter().all(|v| v.is_finite()) || !cov.iter().all(|v| v.is_finite()) {
                return Ok(FilterResult::failed(k, beliefs, evidences));
            }
        }

        beliefs.push(GaussianBelief {
            mean: mean.clone(),
            cov: cov.clone(),
        });
    }

    Ok(FilterResult {
        log_lik,
        beliefs,
        evidences,
        failed_at: None,
    })
}
