//! Unscented Kalman filter with marginal-likelihood accumulation.
//!
//! The unscented transform (Julier & Uhlmann 1997; Wan & van der Merwe 2000)
//! pushes `2d + 1` deterministically chosen sigma points through the
//! nonlinear maps and reconstructs means and covariances from weighted
//! sums. Sigma points are regenerated from the predicted belief before the
//! observation transform, so the cross covariance couples the predicted
//! state to the predicted observation.

use nalgebra::{DMatrix, DVector};

use crate::error::Result;
use crate::linalg::{mvn_logpdf, safe_cholesky, symmetrize};
use crate::models::{ObservationSet, ParameterVector, StateSpaceModel};

use super::{check_filter_inputs, EvidenceTerm, FilterResult, FilterSettings, GaussianBelief};

/// Scaled sigma-point weights for state dimension `d`.
///
/// `lambda = alpha^2 (d + kappa) - d`; the center point carries
/// `lambda / (d + lambda)` mean weight and additionally `1 - alpha^2 + beta`
/// covariance weight, while the `2d` symmetric points share
/// `1 / (2 (d + lambda))` each. Mean weights always sum to one.
#[derive(Debug, Clone)]
pub struct UnscentedWeights {
    pub lambda: f64,
    pub spread: f64,
    pub wm: Vec<f64>,
    pub wc: Vec<f64>,
}

pub fn unscented_weights(d: usize, settings: &FilterSettings) -> UnscentedWeights {
    let df = d as f64;
    let alpha2 = settings.alpha * settings.alpha;
    let lambda = alpha2 * (df + settings.kappa) - df;
    let denom = df + lambda;
    let mut wm = vec![lambda / denom; 1];
    let mut wc = vec![lambda / denom + (1.0 - alpha2 + settings.beta); 1];
    let side = 1.0 / (2.0 * denom);
    wm.extend(std::iter::repeat(side).take(2 * d));
    wc.extend(std::iter::repeat(side).take(2 * d));
    UnscentedWeights {
        lambda,
        spread: denom.sqrt(),
        wm,
        wc,
    }
}

/// The `2d + 1` sigma points of `N(mean, cov)`: the mean itself plus
/// `mean +- spread * L_i` over the columns `L_i` of the lower Cholesky
/// factor. Returns `None` when the covariance cannot be factorized even
/// after jitter escalation.
pub fn sigma_points(
    mean: &DVector<f64>,
    cov: &DMatrix<f64>,
    spread: f64,
    eps: f64,
) -> Option<Vec<DVector<f64>>> {
    let chol = safe_cholesky(cov, eps)?;
    let l = chol.l();
    let d = mean.len();
    let mut pts = Vec::with_capacity(2 * d + 1);
    pts.push(mean.clone());
    for i in 0..d {
        let col = l.column(i) * spread;
        pts.push(mean + &col);
        pts.push(mean - &col);
    }
    Some(pts)
}

fn weighted_mean(points: &[DVector<f64>], wm: &[f64]) -> DVector<f64> {
    let mut acc = DVector::zeros(points[0].len());
    for (p, &w) in points.iter().zip(wm) {
        acc.axpy(w, p, 1.0);
    }
    acc
}

fn weighted_cov(
    left: &[DVector<f64>],
    left_mean: &DVector<f64>,
    right: &[DVector<f64>],
    right_mean: &DVector<f64>,
    wc: &[f64],
) -> DMatrix<f64> {
    let mut acc = DMatrix::zeros(left_mean.len(), right_mean.len());
    for ((l, r), &w) in left.iter().zip(right).zip(wc) {
        let dl = l - left_mean;
        let dr = r - right_mean;
        acc.ger(w, &dl, &dr, 1.0);
    }
    acc
}

/// Approximate log marginal likelihood of `data` under a (possibly
/// nonlinear) model, by one pass of the unscented Kalman filter. Exact for
/// linear models, where it reproduces [`super::kf_marginal_loglik`] to
/// floating-point accuracy.
pub fn ukf_marginal_loglik(
    model: &StateSpaceModel,
    theta: &ParameterVector,
    data: &ObservationSet,
    init: &GaussianBelief,
    settings: &FilterSettings,
) -> Result<FilterResult> {
    check_filter_inputs(model, theta, data, init)?;
    let d = model.state_dim();
    let weights = unscented_weights(d, settings);
    let sigma = model.sigma(theta);
    let gamma = model.gamma(theta);
    let eps = settings.eps;

    let n = data.len();
    let mut beliefs = Vec::with_capacity(n);
    let mut evidences = Vec::new();
    let mut log_lik = 0.0;
    let mut mean = init.mean.clone();
    let mut cov = init.cov.clone();

    let finite_v = |v: &DVector<f64>| v.iter().all(|x| x.is_finite());
    let finite_m = |m: &DMatrix<f64>| m.iter().all(|x| x.is_finite());
    if !finite_m(&sigma) || !finite_m(&gamma) || !finite_v(&mean) || !finite_m(&cov) {
        return Ok(FilterResult::failed(0, beliefs, evidences));
    }

    for (k, maybe_y) in data.values.iter().enumerate() {
        // Predict: propagate sigma points of the current belief.
        let pts = match sigma_points(&mean, &cov, weights.spread, eps) {
            Some(p) => p,
            None => return Ok(FilterResult::failed(k, beliefs, evidences)),
        };
        let propagated: Vec<DVector<f64>> = pts
            .iter()
            .map(|p| model.dynamics.step(p, theta.dyn_block()))
            .collect();
        if propagated.iter().any(|p| !finite_v(p)) {
            return Ok(FilterResult::failed(k, beliefs, evidences));
        }
        mean = weighted_mean(&propagated, &weights.wm);
        cov = weighted_cov(&propagated, &mean, &propagated, &mean, &weights.wc) + &sigma;
        symmetrize(&mut cov);
        if !finite_v(&mean) || !finite_m(&cov) {
            return Ok(FilterResult::failed(k, beliefs, evidences));
        }

        if let Some(y) = maybe_y {
            // Regenerate sigma points from the predicted belief and push
            // them through the observation map.
            let xs = match sigma_points(&mean, &cov, weights.spread, eps) {
                Some(p) => p,
                None => return Ok(FilterResult::failed(k, beliefs, evidences)),
            };
            let ys: Vec<DVector<f64>> = xs
                .iter()
                .map(|p| model.observation.apply(p, theta.obs_block()))
                .collect();
            if ys.iter().any(|p| !finite_v(p)) {
                return Ok(FilterResult::failed(k, beliefs, evidences));
            }
            let mu = weighted_mean(&ys, &weights.wm);
            let mut s = weighted_cov(&ys, &mu, &ys, &mu, &weights.wc) + &gamma;
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

            // Update: K = C S^{-1} via the factored S.
            let cross = weighted_cov(&xs, &mean, &ys, &mu, &weights.wc);
            let gain = chol.solve(&cross.transpose()).transpose();
            mean += &gain * (y - &mu);
            if settings.triple_inverse_downdate {
                let s_inv_gain_t = chol.solve(&gain.transpose());
                cov -= &gain * s_inv_gain_t;
            } else {
                cov -= &gain * &s * gain.transpose();
            }
            symmetrize(&mut cov);
            if !finite_v(&mean) || !finite_m(&cov) {
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
