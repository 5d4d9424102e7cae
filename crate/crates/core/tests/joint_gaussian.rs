//! The filter likelihood against a brute-force oracle.
//!
//! For a linear-Gaussian model the observations are jointly Gaussian with
//! moments available in closed form, so the marginal likelihood can be
//! evaluated in one shot from the stacked covariance. The Kalman filter
//! must reproduce that number to near machine precision, and the unscented
//! filter must reproduce the Kalman filter.

use nalgebra::{Cholesky, DMatrix, DVector};
use rand::Rng;
use rand_distr::StandardNormal;
use std::sync::Arc;

use gaussid_core::filters::{
    kf_marginal_loglik, sigma_points, ukf_marginal_loglik, unscented_weights, FilterSettings,
    GaussianBelief,
};
use gaussid_core::models::{
    uniform_grid, CovSpec, LinearDynamics, MatrixObs, ObservationSet, StateSpaceModel,
};
use gaussid_core::rng::{derive_seed, rng_from_seed};

struct Instance {
    model: StateSpaceModel,
    theta: DVector<f64>,
    data: ObservationSet,
    init: GaussianBelief,
    a: DMatrix<f64>,
    h: DMatrix<f64>,
    sigma: DMatrix<f64>,
    gamma: DMatrix<f64>,
}

fn spd(rng: &mut impl Rng, d: usize, floor: f64) -> DMatrix<f64> {
    let r = DMatrix::from_fn(d, d, |_, _| rng.sample::<f64, _>(StandardNormal) * 0.5);
    &r * r.transpose() + DMatrix::identity(d, d) * floor
}

fn random_instance(seed: u64) -> Instance {
    let mut rng = rng_from_seed(seed);
    let d = rng.gen_range(1..=4usize);
    let m = rng.gen_range(1..=3usize);
    let n = rng.gen_range(3..=8usize);

    let a = DMatrix::from_fn(d, d, |_, _| rng.sample::<f64, _>(StandardNormal) * 0.5);
    let h = DMatrix::from_fn(m, d, |_, _| rng.sample::<f64, _>(StandardNormal));
    let sigma = spd(&mut rng, d, 0.2);
    let gamma = spd(&mut rng, m, 0.3);
    let p0 = spd(&mut rng, d, 0.5);
    let m0 = DVector::from_fn(d, |_, _| rng.sample::<f64, _>(StandardNormal));

    let model = StateSpaceModel::new(
        0.1,
        Arc::new(LinearDynamics { dim: d }),
        Arc::new(MatrixObs { h: h.clone() }),
        CovSpec::Fixed {
            matrix: sigma.clone(),
        },
        CovSpec::Fixed {
            matrix: gamma.clone(),
        },
    )
    .unwrap();

    // arbitrary observation values; the identity holds pointwise in y
    let times = uniform_grid(0.0, 0.1, n);
    let values: Vec<Option<DVector<f64>>> = (0..n)
        .map(|k| {
            let gap = n >= 4 && rng.gen_bool(0.2) && k != 0;
            if gap {
                None
            } else {
                Some(DVector::from_fn(m, |_, _| {
                    rng.sample::<f64, _>(StandardNormal) * 1.5
                }))
            }
        })
        .collect();
    let data = ObservationSet::new(times, values, m).unwrap();

    let mut theta = Vec::with_capacity(d * d);
    theta.extend(a.transpose().iter().copied()); // row-major block
    Instance {
        model,
        theta: DVector::from_vec(theta),
        data,
        init: GaussianBelief::new(m0, p0).unwrap(),
        a,
        h,
        sigma,
        gamma,
    }
}

/// Density of the stacked present observations, from first principles:
/// with `x_0 ~ N(m0, P0)` one step before the first row and row index `r`
/// counted from 1,
///
/// ```text
/// E[y_r]          = H A^r m0
/// Cov(y_r, y_s)   = H [ A^r P0 (A^s)^T + sum_{i=1..min(r,s)} A^{r-i} Sigma (A^{s-i})^T ] H^T
///                   + delta_{rs} Gamma
/// ```
fn joint_loglik(inst: &Instance) -> f64 {
    let d = inst.a.nrows();
    let m = inst.h.nrows();
    let n = inst.data.len();

    // powers[k] = A^k
    let mut powers = vec![DMatrix::identity(d, d)];
    for k in 1..=n {
        powers.push(&inst.a * &powers[k - 1]);
    }

    let present: Vec<(usize, &DVector<f64>)> = inst
        .data
        .values
        .iter()
        .enumerate()
        .filter_map(|(k, v)| v.as_ref().map(|y| (k + 1, y)))
        .collect();
    let big = present.len() * m;

    let mut mean = DVector::zeros(big);
    let mut cov = DMatrix::zeros(big, big);
    for (bi, &(r, _)) in present.iter().enumerate() {
        mean
            .rows_mut(bi * m, m)
            .copy_from(&(&inst.h * &powers[r] * &inst.init.mean));
        for (bj, &(s, _)) in present.iter().enumerate() {
            let mut state_cov = &powers[r] * &inst.init.cov * powers[s].transpose();
            for i in 1..=r.min(s) {
                state_cov += &powers[r - i] * &inst.sigma * powers[s - i].transpose();
            }
            let mut block = &inst.h * state_cov * inst.h.transpose();
            if r == s {
                block += &inst.gamma;
            }
            cov.view_mut((bi * m, bj * m), (m, m)).copy_from(&block);
        }
    }

    let mut y = DVector::zeros(big);
    for (bi, &(_, yv)) in present.iter().enumerate() {
        y.rows_mut(bi * m, m).copy_from(yv);
    }

    let chol = Cholesky::new(cov).expect("oracle covariance must be positive definite");
    let ln_det: f64 = chol.l().diagonal().iter().map(|v| 2.0 * v.ln()).sum();
    let r = &y - &mean;
    let alpha = chol.solve(&r);
    -0.5 * (big as f64 * (2.0 * std::f64::consts::PI).ln() + ln_det + r.dot(&alpha))
}

#[test]
fn kalman_matches_brute_force_joint_density() {
    let settings = FilterSettings::default();
    for i in 0..25u64 {
        let inst = random_instance(derive_seed(42, &[i]));
        let params = inst.model.params(&inst.theta).unwrap();
        let kf = kf_marginal_loglik(&inst.model, &params, &inst.data, &inst.init, &settings)
            .unwrap();
        assert!(kf.failed_at.is_none(), "filter failed on instance {i}");
        let oracle = joint_loglik(&inst);
        let err = (kf.log_lik - oracle).abs();
        assert!(
            err <= 1e-10 * oracle.abs().max(1.0),
            "instance {i}: kf {} vs oracle {} (err {err:.3e})",
            kf.log_lik,
            oracle
        );
        assert_eq!(kf.evidences.len(), inst.data.n_present());
        assert_eq!(kf.beliefs.len(), inst.data.len());
    }
}

#[test]
fn unscented_matches_kalman_on_linear_models() {
    let settings = FilterSettings::default();
    for i in 0..25u64 {
        let inst = random_instance(derive_seed(43, &[i]));
        let params = inst.model.params(&inst.theta).unwrap();
        let kf = kf_marginal_loglik(&inst.model, &params, &inst.data, &inst.init, &settings)
            .unwrap();
        let ukf = ukf_marginal_loglik(&inst.model, &params, &inst.data, &inst.init, &settings)
            .unwrap();
        let err = (kf.log_lik - ukf.log_lik).abs();
        assert!(
            err <= 1e-8 * kf.log_lik.abs().max(1.0),
            "instance {i}: kf {} vs ukf {} (err {err:.3e})",
            kf.log_lik,
            ukf.log_lik
        );
    }
}

#[test]
fn unscented_transform_integrates_cubics_exactly() {
    // with lambda = 0 the transform has no center weight and the side
    // points sit at m +- sqrt(P), so E[x^3] = m^3 + 3 m P comes out exactly
    let settings = FilterSettings {
        alpha: 0.5,
        kappa: 3.0,
        beta: 0.0,
        ..Default::default()
    };
    let w = unscented_weights(1, &settings);
    let (m, p) = (0.7, 0.9);
    let pts = sigma_points(
        &DVector::from_row_slice(&[m]),
        &DMatrix::from_row_slice(1, 1, &[p]),
        w.spread,
        settings.eps,
    )
    .unwrap();
    let est: f64 = pts
        .iter()
        .zip(w.wm.iter())
        .map(|(x, wi)| wi * x[0].powi(3))
        .sum();
    let exact = m * m * m + 3.0 * m * p;
    assert!((est - exact).abs() < 1e-12, "{est} vs {exact}");
}
