//! Fixed-step Runge-Kutta integration for autonomous vector fields.

use nalgebra::DVector;

/// An autonomous vector field `dx/dt = f(x; theta)`.
pub trait VectorField: Send + Sync {
    fn dim(&self) -> usize;
    fn param_len(&self) -> usize;
    fn eval(&self, x: &DVector<f64>, theta: &[f64], out: &mut DVector<f64>);
}

/// One classical RK4 step of size `h`.
pub fn rk4_step(f: &dyn VectorField, x: &DVector<f64>, theta: &[f64], h: f64) -> DVector<f64> {
    let d = x.len();
    let mut k1 = DVector::zeros(d);
    let mut k2 = DVector::zeros(d);
    let mut k3 = DVector::zeros(d);
    let mut k4 = DVector::zeros(d);
    f.eval(x, theta, &mut k1);
    f.eval(&(x + &k1 * (h / 2.0)), theta, &mut k2);
    f.eval(&(x + &k2 * (h / 2.0)), theta, &mut k3);
    f.eval(&(x + &k3 * h), theta, &mut k4);
    x + (k1 + k2 * 2.0 + k3 * 2.0 + k4) * (h / 6.0)
}

/// Advance over a span of length `t_span` using `substeps` equal RK4 steps.
pub fn rk4_span(
    f: &dyn VectorField,
    x0: &DVector<f64>,
    theta: &[f64],
    t_span: f64,
    substeps: usize,
) -> DVector<f64> {
    debug_assert!(substeps >= 1);
    let h = t_span / substeps as f64;
    let mut x = x0.clone();
    for _ in 0..substeps {
        x = rk4_step(f, &x, theta, h);
    }
    x
}

/// Integrate through `t_grid`, choosing per-segment substeps so the internal
/// step never exceeds `max_step`. Returns the state at every grid point,
/// including the first (which is `x0` itself; `t_grid[0]` is its time).
pub fn rk4_path(
    f: &dyn VectorField,
    x0: &DVector<f64>,
    theta: &[f64],
    t_grid: &[f64],
    max_step: f64,
) -> Vec<DVector<f64>> {
    assert!(max_step > 0.0);
    let mut states = Vec::with_capacity(t_grid.len());
    states.push(x0.clone());
    let mut x = x0.clone();
    for w in t_grid.windows(2) {
        let span = w[1] - w[0];
        debug_assert!(span > 0.0, "time grid must be strictly increasing");
        let substeps = (span / max_step).ceil().max(1.0) as usize;
        x = rk4_span(f, &x, theta, span, substeps);
        states.push(x.clone());
    }
    states
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    struct Decay;
    impl VectorField for Decay {
        fn dim(&self) -> usize {
            1
        }
        fn param_len(&self) -> usize {
            1
        }
        fn eval(&self, x: &DVector<f64>, theta: &[f64], out: &mut DVector<f64>) {
            out[0] = theta[0] * x[0];
        }
    }

    #[test]
    fn rk4_matches_exponential_decay() {
        let x0 = DVector::from_vec(vec![2.0]);
        let x1 = rk4_span(&Decay, &x0, &[-1.5], 1.0, 100);
        assert_relative_eq!(x1[0], 2.0 * (-1.5_f64).exp(), epsilon = 1e-9);
    }

    #[test]
    fn rk4_is_fourth_order() {
        let x0 = DVector::from_vec(vec![1.0]);
        let exact = (-1.0_f64).exp();
        let err = |n: usize| (rk4_span(&Decay, &x0, &[-1.0], 1.0, n)[0] - exact).abs();
        let ratio = err(10) / err(20);
        // Halving the step should shrink the error by about 2^4.
        assert!(ratio > 12.0 && ratio < 20.0, "ratio = {ratio}");
    }
}
