//! Parameterized vector fields for the benchmark family of systems.
//!
//! Each field implements [`VectorField`] with its physical constants exposed
//! as parameters, so the same code serves both truth simulation (parameters
//! pinned at the generating values) and identification through a `KnownOde`
//! dynamics model (parameters free).

use nalgebra::DVector;

use super::integrate::VectorField;
use super::systems::Grid1d;

/// Frictionless pendulum written with free off-diagonal entries:
/// `dx1/dt = theta1 * x2`, `dx2/dt = theta2 * x1`.
/// The physical small-angle pendulum is `theta = (1, -g/L)`.
#[derive(Debug, Clone)]
pub struct PendulumOffdiagField;

impl VectorField for PendulumOffdiagField {
    fn dim(&self) -> usize {
        2
    }
    fn param_len(&self) -> usize {
        2
    }
    fn eval(&self, x: &DVector<f64>, theta: &[f64], out: &mut DVector<f64>) {
        out[0] = theta[0] * x[1];
        out[1] = theta[1] * x[0];
    }
}

/// Full nonlinear pendulum `dx2/dt = -theta * sin(x1)` with `theta = g/L`.
#[derive(Debug, Clone)]
pub struct NonlinearPendulumField;

impl VectorField for NonlinearPendulumField {
    fn dim(&self) -> usize {
        2
    }
    fn param_len(&self) -> usize {
        1
    }
    fn eval(&self, x: &DVector<f64>, theta: &[f64], out: &mut DVector<f64>) {
        out[0] = x[1];
        out[1] = -theta[0] * x[0].sin();
    }
}

/// Van der Pol oscillator, `theta = (mu,)`.
#[derive(Debug, Clone)]
pub struct VanDerPolField;

impl VectorField for VanDerPolField {
    fn dim(&self) -> usize {
        2
    }
    fn param_len(&self) -> usize {
        1
    }
    fn eval(&self, x: &DVector<f64>, theta: &[f64], out: &mut DVector<f64>) {
        out[0] = x[1];
        out[1] = theta[0] * (1.0 - x[0] * x[0]) * x[1] - x[0];
    }
}

/// Lorenz 63 with `theta = (sigma, rho, beta)`.
#[derive(Debug, Clone)]
pub struct Lorenz63Field;

impl VectorField for Lorenz63Field {
    fn dim(&self) -> usize {
        3
    }
    fn param_len(&self) -> usize {
        3
    }
    fn eval(&self, x: &DVector<f64>, theta: &[f64], out: &mut DVector<f64>) {
        out[0] = theta[0] * (x[1] - x[0]);
        out[1] = x[0] * (theta[1] - x[2]) - x[1];
        out[2] = x[0] * x[1] - theta[2] * x[2];
    }
}

/// Two-species reaction-diffusion system on a 1-D interval, discretized by
/// the method of lines with second-order central differences and ghost-point
/// Neumann (zero-flux) boundaries. The state stacks the two concentration
/// fields: `x = [c1(grid), c2(grid)]`.
///
/// Kinetics:
/// ```text
///   dc1/dt = theta1 * c1_xx + 0.1 - c1 + theta3 * c1^2 * c2
///   dc2/dt = theta2 * c2_xx + 0.9 - c1^2 * c2
/// ```
/// When `literal_c2_factor` is set, the diffusion term of the second species
/// is multiplied by `c2` itself (a nonstandard variant kept selectable for
/// comparison runs); the default is the plain Fickian term above.
#[derive(Debug, Clone)]
pub struct ReactionDiffusionField {
    pub grid: Grid1d,
    pub literal_c2_factor: bool,
}

impl ReactionDiffusionField {
    pub fn new(grid: Grid1d) -> Self {
        ReactionDiffusionField {
            grid,
            literal_c2_factor: false,
        }
    }
}

impl VectorField for ReactionDiffusionField {
    fn dim(&self) -> usize {
        2 * self.grid.n_points
    }
    fn param_len(&self) -> usize {
        3
    }
    fn eval(&self, x: &DVector<f64>, theta: &[f64], out: &mut DVector<f64>) {
        let n = self.grid.n_points;
        let inv_dx2 = 1.0 / (self.grid.dx() * self.grid.dx());
        let (c1, c2) = (x.as_slice().split_at(n).0, &x.as_slice()[n..]);

        let lap = |c: &[f64], i: usize| -> f64 {
            if i == 0 {
                2.0 * (c[1] - c[0]) * inv_dx2
            } else if i == n - 1 {
                2.0 * (c[n - 2] - c[n - 1]) * inv_dx2
            } else {
                (c[i - 1] - 2.0 * c[i] + c[i + 1]) * inv_dx2
            }
        };

        for i in 0..n {
            let quad = c1[i] * c1[i] * c2[i];
            out[i] = theta[0] * lap(c1, i) + 0.1 - c1[i] + theta[2] * quad;
            let diff2 = if self.literal_c2_factor {
                theta[1] * lap(c2, i) * c2[i]
            } else {
                theta[1] * lap(c2, i)
            };
            out[n + i] = diff2 + 0.9 - quad;
        }
    }
}
