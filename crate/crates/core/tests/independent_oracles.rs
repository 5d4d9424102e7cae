//! Cross-checks against independently coded numerics: a Taylor-series
//! matrix exponential for the DMD propagator, and an adaptive
//! Runge-Kutta-Fehlberg integrator for the fixed-step Lorenz trajectories.

use nalgebra::{DMatrix, DVector};
use rand::Rng;
use rand_distr::StandardNormal;

use gaussid_core::baselines::dmd_fit;
use gaussid_core::models::{
    simulate_truth, uniform_grid, Lorenz63Field, ObservationSet, TruthSystem, VectorField,
};
use gaussid_core::rng::rng_from_seed;

/// Scaling-and-squaring Taylor expansion of `exp(M)`.
fn expm_taylor(m: &DMatrix<f64>) -> DMatrix<f64> {
    let norm = m.amax() * m.nrows() as f64;
    let squarings = norm.log2().ceil().max(0.0) as u32 + 1;
    let scaled = m / 2f64.powi(squarings as i32);
    let d = m.nrows();
    let mut term = DMatrix::identity(d, d);
    let mut acc = DMatrix::identity(d, d);
    for k in 1..=24 {
        term = &term * &scaled / k as f64;
        acc += &term;
    }
    for _ in 0..squarings {
        acc = &acc * &acc;
    }
    acc
}

#[test]
fn dmd_recovers_the_flow_map_of_a_linear_ode() {
    for seed in 0..10u64 {
        let mut rng = rng_from_seed(1000 + seed);
        let d = 3;
        let g = DMatrix::from_fn(d, d, |_, _| rng.sample::<f64, _>(StandardNormal) * 0.4);
        let dt = 0.2;
        let flow = expm_taylor(&(&g * dt));

        // one noiseless trajectory; generic g makes the Krylov span full
        let mut x = DVector::from_fn(d, |_, _| rng.sample::<f64, _>(StandardNormal) + 0.5);
        let n = 12;
        let mut values = Vec::with_capacity(n);
        for _ in 0..n {
            values.push(Some(x.clone()));
            x = &flow * &x;
        }
        let data = ObservationSet::new(uniform_grid(0.0, dt, n), values, d).unwrap();

        let a = dmd_fit(&data).unwrap();
        let err = (&a - &flow).amax();
        assert!(err < 1e-8, "seed {seed}: entrywise error {err:.3e}");
    }
}

/// One adaptive Runge-Kutta-Fehlberg 4(5) pass, test-local.
fn rkf45(f: &dyn VectorField, x0: &DVector<f64>, theta: &[f64], t_end: f64, tol: f64) -> DVector<f64> {
    let mut x = x0.clone();
    let mut t = 0.0;
    let mut h: f64 = 1e-3;
    let eval = |x: &DVector<f64>| {
        let mut out = DVector::zeros(x.len());
        f.eval(x, theta, &mut out);
        out
    };
    while t < t_end {
        h = h.min(t_end - t);
        let k1 = eval(&x) * h;
        let k2 = eval(&(&x + &k1 * 0.25)) * h;
        let k3 = eval(&(&x + &k1 * (3.0 / 32.0) + &k2 * (9.0 / 32.0))) * h;
        let k4 = eval(
            &(&x + &k1 * (1932.0 / 2197.0) - &k2 * (7200.0 / 2197.0) + &k3 * (7296.0 / 2197.0)),
        ) * h;
        let k5 = eval(
            &(&x + &k1 * (439.0 / 216.0) - &k2 * 8.0 + &k3 * (3680.0 / 513.0)
                - &k4 * (845.0 / 4104.0)),
        ) * h;
        let k6 = eval(
            &(&x - &k1 * (8.0 / 27.0) + &k2 * 2.0 - &k3 * (3544.0 / 2565.0)
                + &k4 * (1859.0 / 4104.0)
                - &k5 * (11.0 / 40.0)),
        ) * h;
        let x4 = &x + &k1 * (25.0 / 216.0) + &k3 * (1408.0 / 2565.0) + &k4 * (2197.0 / 4104.0)
            - &k5 * 0.2;
        let x5 = &x + &k1 * (16.0 / 135.0) + &k3 * (6656.0 / 12825.0)
            + &k4 * (28561.0 / 56430.0)
            - &k5 * (9.0 / 50.0)
            + &k6 * (2.0 / 55.0);
        let err = (&x5 - &x4).amax().max(1e-300);
        if err <= tol * h.max(1e-12) {
            t += h;
            x = x5;
        }
        let scale = 0.84 * (tol * h / err).powf(0.25);
        h *= scale.clamp(0.1, 4.0);
        h = h.max(1e-10);
    }
    x
}

#[test]
fn lorenz_endpoint_matches_adaptive_integrator() {
    let (sigma, rho, beta) = (10.0, 28.0, 8.0 / 3.0);
    let x0 = [-8.0, 7.0, 27.0];
    let sys = TruthSystem::Lorenz63 {
        sigma,
        rho,
        beta,
        x0,
    };
    let t_end = 1.0;
    let grid = uniform_grid(0.0, 0.05, 21);
    let traj = simulate_truth(&sys, &grid).unwrap();
    let fixed = traj.states.last().unwrap();

    let adaptive = rkf45(
        &Lorenz63Field,
        &DVector::from_row_slice(&x0),
        &[sigma, rho, beta],
        t_end,
        1e-10,
    );
    // a short horizon keeps chaotic error growth bounded
    let rel = (fixed - &adaptive).norm() / adaptive.norm();
    assert!(rel < 1e-5, "relative endpoint error {rel:.3e}");
}
