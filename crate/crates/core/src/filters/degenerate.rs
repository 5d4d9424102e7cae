//! Closed-form likelihoods for the two degenerate noise regimes.
//!
//! With zero process noise the state path is a deterministic function of the
//! initial condition, so the likelihood is a product of measurement
//! densities along that path. With zero measurement noise and an invertible
//! observation map, the data pin the states exactly and the likelihood
//! reduces to one-step transition densities between the pulled-back
//! observations (plus the change-of-variables Jacobian). Both forms avoid
//! the filter recursion entirely, which makes them useful as independent
//! cross-checks and as the exact objectives behind the least-squares
//! baselines.

use crate::error::{Error, Result};
use crate::linalg::{mvn_logpdf, safe_cholesky};
use crate::models::{ObservationSet, ParameterVector, StateSpaceModel};

use nalgebra::DVector;

/// Log likelihood when the process noise is identically zero.
///
/// The state is rolled forward deterministically from the known initial
/// condition `x0` (the state one step before the first data row), and every
/// present observation contributes `log N(y_k; h(x_k), Gamma)`. Rows without
/// data advance the state but add nothing. Returns `-inf` on numerical
/// failure rather than erroring.
pub fn det_loglik(
    model: &StateSpaceModel,
    theta: &ParameterVector,
    data: &ObservationSet,
    x0: &DVector<f64>,
) -> Result<f64> {
    if theta.partition() != model.partition() {
        return Err(Error::DimensionMismatch(
            "parameter partition does not match the model".into(),
        ));
    }
    if x0.len() != model.state_dim() {
        return Err(Error::DimensionMismatch(format!(
            "x0 has dim {}, state dim is {}",
            x0.len(),
            model.state_dim()
        )));
    }
    if data.obs_dim != model.obs_dim() {
        return Err(Error::DimensionMismatch(
            "data dimension does not match the observation map".into(),
        ));
    }

    let gamma = model.gamma(theta);
    let chol = match safe_cholesky(&gamma, 0.0) {
        Some(c) => c,
        None => return Ok(f64::NEG_INFINITY),
    };

    let mut x = x0.clone();
    let mut log_lik = 0.0;
    for maybe_y in &data.values {
        x = model.psi(&x, theta);
        if !x.iter().all(|v| v.is_finite()) {
            return Ok(f64::NEG_INFINITY);
        }
        if let Some(y) = maybe_y {
            let mu = model.h(&x, theta);
            let term = mvn_logpdf(y, &mu, &chol);
            if !term.is_finite() {
                return Ok(f64::NEG_INFINITY);
            }
            log_lik += term;
        }
    }
    Ok(log_lik)
}

/// Log likelihood when the measurement noise is identically zero and the
/// observation map is invertible.
///
/// Each consecutive pair of observations is scored as a one-step transition
/// of the pulled-back states:
///
/// ```text
///   sum_{k=2}^{n}  log |det grad h^{-1}(y_k)|
///                + log N( h^{-1}(y_k); Psi(h^{-1}(y_{k-1})), Sigma )
/// ```
///
/// so `n` observations contribute `n - 1` scored steps. The marginal term
/// for the first observation is a parameter-independent constant (the data
/// include the initial condition) and is dropped. Requires a fully observed
/// data set.
pub fn noiseless_loglik(
    model: &StateSpaceModel,
    theta: &ParameterVector,
    data: &ObservationSet,
) -> Result<f64> {
    if theta.partition() != model.partition() {
        return Err(Error::DimensionMismatch(
            "parameter partition does not match the model".into(),
        ));
    }
    if !data.is_fully_observed() {
        return Err(Error::InvalidArgument(
            "noiseless-observation likelihood requires a fully observed data set".into(),
        ));
    }
    if data.obs_dim != model.obs_dim() {
        return Err(Error::DimensionMismatch(
            "data dimension does not match the observation map".into(),
        ));
    }

    let sigma = model.sigma(theta);
    let chol = match safe_cholesky(&sigma, 0.0) {
        Some(c) => c,
        None => return Ok(f64::NEG_INFINITY),
    };

    let obs_theta = theta.obs_block();
    let invert = |y: &DVector<f64>| -> Result<DVector<f64>> {
        model.observation.invert(y, obs_theta).ok_or_else(|| {
            Error::InvalidArgument(
                "noiseless-observation likelihood requires an invertible observation map".into(),
            )
        })
    };

    let mut log_lik = 0.0;
    let mut prev_state = match data.values.first() {
        Some(Some(y)) => invert(y)?,
        _ => return Ok(0.0),
    };
    for y in data.values.iter().skip(1) {
        let y = y.as_ref().expect("checked fully observed");
        let state = invert(y)?;
        let jac = model
            .observation
            .inverse_jacobian_ln_det(y, obs_theta)
            .ok_or_else(|| {
                Error::InvalidArgument(
                    "observation map does not expose an inverse Jacobian determinant".into(),
                )
            })?;
        let pred = model.psi(&prev_state, theta);
        if !pred.iter().all(|v| v.is_finite()) {
            return Ok(f64::NEG_INFINITY);
        }
        let term = jac + mvn_logpdf(&state, &pred, &chol);
        if !term.is_finite() {
            return Ok(f64::NEG_INFINITY);
        }
        log_lik += term;
        prev_state = state;
    }
    Ok(log_lik)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::filters::FilterSettings;
    use crate::models::{
        make_model, CovConfig, DynamicsConfig, ModelConfig, ObservationConfig, ObservationSet,
    };
    use approx::assert_relative_eq;
    use nalgebra::DVector;

    fn scalar_linear_model(proc_var: f64, meas_var: f64) -> crate::models::StateSpaceModel {
        make_model(&ModelConfig {
            dt: 1.0,
            dynamics: DynamicsConfig::Linear { dim: 1 },
            observation: ObservationConfig::Identity,
            proc_cov: CovConfig::FixedIsotropic { variance: proc_var },
            meas_cov: CovConfig::FixedIsotropic { variance: meas_var },
        })
        .unwrap()
    }

    #[test]
    fn det_loglik_perfect_fit_is_pure_constant() {
        // Data generated noiselessly from theta with Gamma = I: every
        // residual vanishes and only the normalization remains.
        let model = scalar_linear_model(0.0, 1.0);
        let theta = model
            .params(&DVector::from_vec(vec![0.5]))
            .unwrap();
        let x0 = DVector::from_vec(vec![2.0]);
        let mut x = x0.clone();
        let mut times = Vec::new();
        let mut vals = Vec::new();
        for k in 0..4 {
            x = &x * 0.5;
            times.push((k + 1) as f64);
            vals.push(x.clone());
        }
        let data = ObservationSet::fully_observed(times, vals).unwrap();
        let ll = det_loglik(&model, &theta, &data, &x0).unwrap();
        let expected = -(4.0 * 1.0 / 2.0) * (2.0 * std::f64::consts::PI).ln();
        assert_relative_eq!(ll, expected, epsilon = 1e-12);
    }

    #[test]
    fn det_loglik_matches_kalman_in_zero_noise_limit() {
        let model = scalar_linear_model(0.0, 0.04);
        let theta = model.params(&DVector::from_vec(vec![0.9])).unwrap();
        let x0 = DVector::from_vec(vec![1.5]);
        let data = ObservationSet::fully_observed(
            vec![1.0, 2.0, 3.0],
            vec![
                DVector::from_vec(vec![1.40]),
                DVector::from_vec(vec![1.20]),
                DVector::from_vec(vec![1.05]),
            ],
        )
        .unwrap();
        let direct = det_loglik(&model, &theta, &data, &x0).unwrap();
        let init = crate::filters::GaussianBelief::new(
            x0.clone(),
            nalgebra::DMatrix::from_vec(1, 1, vec![1e-14]),
        )
        .unwrap();
        let settings = FilterSettings {
            eps: 0.0,
            ..Default::default()
        };
        let kf =
            crate::filters::kf_marginal_loglik(&model, &theta, &data, &init, &settings).unwrap();
        assert_relative_eq!(direct, kf.log_lik, epsilon = 1e-4);
    }

    #[test]
    fn noiseless_loglik_trivial_cases() {
        let model = scalar_linear_model(1.0, 0.0);
        let theta_fit = model.params(&DVector::from_vec(vec![2.0])).unwrap();
        // y = (1, 2): one scored step with residual 2 - theta*1.
        let data = ObservationSet::fully_observed(
            vec![0.0, 1.0],
            vec![DVector::from_vec(vec![1.0]), DVector::from_vec(vec![2.0])],
        )
        .unwrap();
        let ll = noiseless_loglik(&model, &theta_fit, &data).unwrap();
        let expected = -0.5 * (2.0_f64 * std::f64::consts::PI).ln();
        assert_relative_eq!(ll, expected, epsilon = 1e-12);

        let theta_off = model.params(&DVector::from_vec(vec![1.0])).unwrap();
        let ll_off = noiseless_loglik(&model, &theta_off, &data).unwrap();
        assert_relative_eq!(ll_off, expected - 0.5, epsilon = 1e-12);
    }

    #[test]
    fn noiseless_loglik_perfect_predictions_count_scored_steps() {
        // Perfect one-step predictions, identity h, Sigma = I: the value is
        // the pure normalization over n - 1 scored steps.
        let model = scalar_linear_model(1.0, 0.0);
        let theta = model.params(&DVector::from_vec(vec![3.0])).unwrap();
        let n = 5;
        let mut vals = vec![DVector::from_vec(vec![1.0])];
        for _ in 1..n {
            let prev = vals.last().unwrap()[0];
            vals.push(DVector::from_vec(vec![3.0 * prev]));
        }
        let data =
            ObservationSet::fully_observed((0..n).map(|k| k as f64).collect(), vals).unwrap();
        let ll = noiseless_loglik(&model, &theta, &data).unwrap();
        let expected = -((n - 1) as f64 / 2.0) * (2.0 * std::f64::consts::PI).ln();
        assert_relative_eq!(ll, expected, epsilon = 1e-12);
    }

    #[test]
    fn noiseless_loglik_rejects_gaps() {
        let model = scalar_linear_model(1.0, 0.0);
        let theta = model.params(&DVector::from_vec(vec![1.0])).unwrap();
        let data = ObservationSet::new(
            vec![0.0, 1.0],
            vec![Some(DVector::from_vec(vec![1.0])), None],
            1,
        )
        .unwrap();
        assert!(noiseless_loglik(&model, &theta, &data).is_err());
    }
}
