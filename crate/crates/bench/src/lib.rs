//! Shared fixtures for the criterion benchmarks.

use nalgebra::{DMatrix, DVector};
use std::sync::Arc;

use gaussid_core::filters::GaussianBelief;
use gaussid_core::models::{
    observe, simulate_truth, uniform_grid, CovSpec, IdentityObs, LinearDynamics, ObservationSet,
    StateSpaceModel, TruthSystem,
};

/// A linear pendulum model with identity observations, its true parameter
/// vector, `n` noisy observations and a unit init belief.
pub fn pendulum_instance(
    n: usize,
    noise_sd: f64,
    seed: u64,
) -> (StateSpaceModel, DVector<f64>, ObservationSet, GaussianBelief) {
    let dt = 0.1;
    let model = StateSpaceModel::new(
        dt,
        Arc::new(LinearDynamics { dim: 2 }),
        Arc::new(IdentityObs { dim: 2 }),
        CovSpec::Isotropic { dim: 2 },
        CovSpec::Isotropic { dim: 2 },
    )
    .unwrap();

    let sys = TruthSystem::LinearPendulum {
        g: 9.81,
        length: 1.0,
        x0: [0.2, 0.0],
    };
    let grid = uniform_grid(0.0, dt, n);
    let traj = simulate_truth(&sys, &grid).unwrap();
    let data = observe(&traj, &IdentityObs { dim: 2 }, noise_sd, seed, 1, &[]).unwrap();

    // exact discrete propagator of the small-angle pendulum
    let w = 9.81f64.sqrt();
    let (c, s) = ((w * dt).cos(), (w * dt).sin());
    let a = DMatrix::from_row_slice(2, 2, &[c, s / w, -w * s, c]);
    let mut theta = Vec::with_capacity(6);
    theta.extend(a.transpose().iter().copied());
    theta.push(1e-6);
    theta.push(noise_sd * noise_sd + 1e-8);
    let theta = DVector::from_vec(theta);

    let init = GaussianBelief::new(DVector::from_row_slice(&[0.2, 0.0]), DMatrix::identity(2, 2))
        .unwrap();
    (model, theta, data, init)
}
