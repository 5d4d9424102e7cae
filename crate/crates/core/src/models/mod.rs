//! Discrete-time stochastic state-space models.
//!
//! The object of study is the hidden Markov model
//!
//! ```text
//!   X_k = Psi(X_{k-1}; theta_dyn) + xi_k,    xi_k ~ N(0, Sigma(theta_proc))
//!   Y_k = h(X_k; theta_obs)       + eta_k,   eta_k ~ N(0, Gamma(theta_meas))
//! ```
//!
//! with the unknown parameters partitioned into four blocks: dynamics,
//! observation, process-noise and measurement-noise. A [`StateSpaceModel`]
//! bundles the four ingredients; [`ParameterVector`] carries a flat parameter
//! vector together with the block partition.

pub mod dictionary;
pub mod fields;
pub mod integrate;
pub mod systems;

use std::sync::Arc;

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
pub use dictionary::DictionaryLibrary;
pub use fields::{
    Lorenz63Field, NonlinearPendulumField, PendulumOffdiagField, ReactionDiffusionField,
    VanDerPolField,
};
pub use integrate::{rk4_path, rk4_span, rk4_step, VectorField};
pub use systems::{
    observe, simulate_truth, simulate_truth_with_step, uniform_grid, Grid1d, ObservationSet,
    Trajectory, TruthSystem, DEFAULT_TRUTH_MAX_STEP,
};

/// Lengths of the four contiguous parameter blocks, in the fixed order
/// dynamics, observation, process noise, measurement noise.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub struct ParamPartition {
    pub dyn_len: usize,
    pub obs_len: usize,
    pub proc_len: usize,
    pub meas_len: usize,
}

impl ParamPartition {
    pub fn total(&self) -> usize {
        self.dyn_len + self.obs_len + self.proc_len + self.meas_len
    }

    pub fn dyn_range(&self) -> std::ops::Range<usize> {
        0..self.dyn_len
    }

    pub fn obs_range(&self) -> std::ops::Range<usize> {
        let s = self.dyn_len;
        s..s + self.obs_len
    }

    pub fn proc_range(&self) -> std::ops::Range<usize> {
        let s = self.dyn_len + self.obs_len;
        s..s + self.proc_len
    }

    pub fn meas_range(&self) -> std::ops::Range<usize> {
        let s = self.dyn_len + self.obs_len + self.proc_len;
        s..s + self.meas_len
    }
}

/// A flat parameter vector plus the partition that gives its entries meaning.
#[derive(Debug, Clone, PartialEq)]
pub struct ParameterVector {
    values: DVector<f64>,
    partition: ParamPartition,
}

impl ParameterVector {
    pub fn new(values: DVector<f64>, partition: ParamPartition) -> Result<Self> {
        if values.len() != partition.total() {
            return Err(Error::DimensionMismatch(format!(
                "parameter vector has {} entries but the partition needs {}",
                values.len(),
                partition.total()
            )));
        }
        Ok(ParameterVector { values, partition })
    }

    pub fn from_slice(values: &[f64], partition: ParamPartition) -> Result<Self> {
        Self::new(DVector::from_row_slice(values), partition)
    }

    pub fn values(&self) -> &DVector<f64> {
        &self.values
    }

    pub fn partition(&self) -> ParamPartition {
        self.partition
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.len() == 0
    }

    pub fn dyn_block(&self) -> &[f64] {
        &self.values.as_slice()[self.partition.dyn_range()]
    }

    pub fn obs_block(&self) -> &[f64] {
        &self.values.as_slice()[self.partition.obs_range()]
    }

    pub fn proc_block(&self) -> &[f64] {
        &self.values.as_slice()[self.partition.proc_range()]
    }

    pub fn meas_block(&self) -> &[f64] {
        &self.values.as_slice()[self.partition.meas_range()]
    }
}

/// Parameterization of a covariance matrix block.
#[derive(Debug, Clone, PartialEq)]
pub enum CovSpec {
    /// `theta * I` with a single variance parameter.
    Isotropic { dim: usize },
    /// `diag(theta_1 .. theta_dim)`.
    Diagonal { dim: usize },
    /// A known, fixed matrix; contributes no parameters.
    Fixed { matrix: DMatrix<f64> },
}

impl CovSpec {
    pub fn fixed_isotropic(dim: usize, variance: f64) -> Self {
        CovSpec::Fixed {
            matrix: DMatrix::identity(dim, dim) * variance,
        }
    }

    pub fn dim(&self) -> usize {
        match self {
            CovSpec::Isotropic { dim } | CovSpec::Diagonal { dim } => *dim,
            CovSpec::Fixed { matrix } => matrix.nrows(),
        }
    }

    pub fn param_len(&self) -> usize {
        match self {
            CovSpec::Isotropic { .. } => 1,
            CovSpec::Diagonal { dim } => *dim,
            CovSpec::Fixed { .. } => 0,
        }
    }

    pub fn eval(&self, theta: &[f64]) -> DMatrix<f64> {
        debug_assert_eq!(theta.len(), self.param_len());
        match self {
            CovSpec::Isotropic { dim } => DMatrix::identity(*dim, *dim) * theta[0],
            CovSpec::Diagonal { dim } => {
                DMatrix::from_diagonal(&DVector::from_row_slice(&theta[..*dim]))
            }
            CovSpec::Fixed { matrix } => matrix.clone(),
        }
    }
}

/// One-step state transition map `Psi(x; theta_dyn)`.
pub trait Dynamics: Send + Sync {
    fn dim(&self) -> usize;
    fn param_len(&self) -> usize;
    fn step(&self, x: &DVector<f64>, theta: &[f64]) -> DVector<f64>;

    /// For linear maps, the matrix `A(theta)` with `Psi(x) = A x`.
    fn linear_matrix(&self, _theta: &[f64]) -> Option<DMatrix<f64>> {
        None
    }
}

/// Observation map `h(x; theta_obs)`.
pub trait Observation: Send + Sync {
    fn state_dim(&self) -> usize;
    fn obs_dim(&self) -> usize;
    fn param_len(&self) -> usize;
    fn apply(&self, x: &DVector<f64>, theta: &[f64]) -> DVector<f64>;

    /// For linear maps, the matrix `H(theta)` with `h(x) = H x`.
    fn linear_matrix(&self, _theta: &[f64]) -> Option<DMatrix<f64>> {
        None
    }

    /// Inverse map where it exists (square, invertible observations).
    fn invert(&self, _y: &DVector<f64>, _theta: &[f64]) -> Option<DVector<f64>> {
        None
    }

    /// `log |det grad h^{-1}(y)|` where the inverse exists.
    fn inverse_jacobian_ln_det(&self, _y: &DVector<f64>, _theta: &[f64]) -> Option<f64> {
        None
    }
}

/// Fully observed state, `h = identity`.
#[derive(Debug, Clone)]
pub struct IdentityObs {
    pub dim: usize,
}

impl Observation for IdentityObs {
    fn state_dim(&self) -> usize {
        self.dim
    }
    fn obs_dim(&self) -> usize {
        self.dim
    }
    fn param_len(&self) -> usize {
        0
    }
    fn apply(&self, x: &DVector<f64>, _theta: &[f64]) -> DVector<f64> {
        x.clone()
    }
    fn linear_matrix(&self, _theta: &[f64]) -> Option<DMatrix<f64>> {
        Some(DMatrix::identity(self.dim, self.dim))
    }
    fn invert(&self, y: &DVector<f64>, _theta: &[f64]) -> Option<DVector<f64>> {
        Some(y.clone())
    }
    fn inverse_jacobian_ln_det(&self, _y: &DVector<f64>, _theta: &[f64]) -> Option<f64> {
        Some(0.0)
    }
}

/// Fixed linear observation `y = H x`.
#[derive(Debug, Clone)]
pub struct MatrixObs {
    pub h: DMatrix<f64>,
}

impl Observation for MatrixObs {
    fn state_dim(&self) -> usize {
        self.h.ncols()
    }
    fn obs_dim(&self) -> usize {
        self.h.nrows()
    }
    fn param_len(&self) -> usize {
        0
    }
    fn apply(&self, x: &DVector<f64>, _theta: &[f64]) -> DVector<f64> {
        &self.h * x
    }
    fn linear_matrix(&self, _theta: &[f64]) -> Option<DMatrix<f64>> {
        Some(self.h.clone())
    }
    fn invert(&self, y: &DVector<f64>, _theta: &[f64]) -> Option<DVector<f64>> {
        if self.h.is_square() {
            self.h.clone().lu().solve(y)
        } else {
            None
        }
    }
    fn inverse_jacobian_ln_det(&self, _y: &DVector<f64>, _theta: &[f64]) -> Option<f64> {
        if self.h.is_square() {
            let det = self.h.clone().lu().determinant();
            if det != 0.0 && det.is_finite() {
                return Some(-det.abs().ln());
            }
        }
        None
    }
}

/// Spatial moment observations for the reaction-diffusion system:
/// `y1 = integral of c1 dx`, `y2 = integral of c1^2 dx`, both by the
/// trapezoid rule on the model grid.
#[derive(Debug, Clone)]
pub struct MomentObs {
    pub grid: Grid1d,
}

impl Observation for MomentObs {
    fn state_dim(&self) -> usize {
        2 * self.grid.n_points
    }
    fn obs_dim(&self) -> usize {
        2
    }
    fn param_len(&self) -> usize {
        0
    }
    fn apply(&self, x: &DVector<f64>, _theta: &[f64]) -> DVector<f64> {
        let n = self.grid.n_points;
        let dx = self.grid.dx();
        let mut m1 = 0.0;
        let mut m2 = 0.0;
        for i in 0..n {
            let w = if i == 0 || i == n - 1 { 0.5 * dx } else { dx };
            m1 += w * x[i];
            m2 += w * x[i] * x[i];
        }
        DVector::from_vec(vec![m1, m2])
    }
}

/// Linear dynamics `Psi(x) = A x` with `A` read row-major from the
/// dynamics parameter block.
#[derive(Debug, Clone)]
pub struct LinearDynamics {
    pub dim: usize,
}

impl Dynamics for LinearDynamics {
    fn dim(&self) -> usize {
        self.dim
    }
    fn param_len(&self) -> usize {
        self.dim * self.dim
    }
    fn step(&self, x: &DVector<f64>, theta: &[f64]) -> DVector<f64> {
        self.linear_matrix(theta).unwrap() * x
    }
    fn linear_matrix(&self, theta: &[f64]) -> Option<DMatrix<f64>> {
        Some(DMatrix::from_row_slice(self.dim, self.dim, theta))
    }
}

/// Forward-Euler dictionary dynamics
/// `Psi(x)_j = x_j + dt * Xi(x) . theta_j` where `Xi` is a monomial library
/// and `theta_j` is the coefficient block of state `j`. Coefficient blocks
/// are stored back to back, state 1 first.
#[derive(Debug, Clone)]
pub struct EulerDictionaryDynamics {
    pub library: DictionaryLibrary,
    pub dt: f64,
}

impl Dynamics for EulerDictionaryDynamics {
    fn dim(&self) -> usize {
        self.library.dim_in()
    }
    fn param_len(&self) -> usize {
        self.library.dim_in() * self.library.len()
    }
    fn step(&self, x: &DVector<f64>, theta: &[f64]) -> DVector<f64> {
        let d = self.dim();
        let l = self.library.len();
        let mut feats = vec![0.0; l];
        self.library.eval_into(x, &mut feats);
        let mut out = x.clone();
        for j in 0..d {
            let block = &theta[j * l..(j + 1) * l];
            let mut dot = 0.0;
            for (f, c) in feats.iter().zip(block.iter()) {
                dot += f * c;
            }
            out[j] += self.dt * dot;
        }
        out
    }
}

/// Dynamics defined by integrating a known ODE right-hand side over one
/// sampling interval with a fixed number of RK4 substeps. Process noise, if
/// any, enters once per discrete step, not per substep.
#[derive(Clone)]
pub struct KnownOdeDynamics {
    pub field: Arc<dyn VectorField>,
    pub dt: f64,
    pub substeps: usize,
}

impl Dynamics for KnownOdeDynamics {
    fn dim(&self) -> usize {
        self.field.dim()
    }
    fn param_len(&self) -> usize {
        self.field.param_len()
    }
    fn step(&self, x: &DVector<f64>, theta: &[f64]) -> DVector<f64> {
        rk4_span(self.field.as_ref(), x, theta, self.dt, self.substeps)
    }
}

/// The assembled model: transition map, observation map and the two noise
/// covariances, with a shared sampling interval `dt`.
#[derive(Clone)]
pub struct StateSpaceModel {
    pub dt: f64,
    pub dynamics: Arc<dyn Dynamics>,
    pub observation: Arc<dyn Observation>,
    pub proc_cov: CovSpec,
    pub meas_cov: CovSpec,
}

impl StateSpaceModel {
    pub fn new(
        dt: f64,
        dynamics: Arc<dyn Dynamics>,
        observation: Arc<dyn Observation>,
        proc_cov: CovSpec,
        meas_cov: CovSpec,
    ) -> Result<Self> {
        if dt <= 0.0 || !dt.is_finite() {
            return Err(Error::InvalidArgument(format!(
                "sampling interval must be positive, got {dt}"
            )));
        }
        if observation.state_dim() != dynamics.dim() {
            return Err(Error::DimensionMismatch(format!(
                "observation expects state dim {} but dynamics has {}",
                observation.state_dim(),
                dynamics.dim()
            )));
        }
        if proc_cov.dim() != dynamics.dim() {
            return Err(Error::DimensionMismatch(format!(
                "process covariance dim {} != state dim {}",
                proc_cov.dim(),
                dynamics.dim()
            )));
        }
        if meas_cov.dim() != observation.obs_dim() {
            return Err(Error::DimensionMismatch(format!(
                "measurement covariance dim {} != observation dim {}",
                meas_cov.dim(),
                observation.obs_dim()
            )));
        }
        Ok(StateSpaceModel {
            dt,
            dynamics,
            observation,
            proc_cov,
            meas_cov,
        })
    }

    pub fn state_dim(&self) -> usize {
        self.dynamics.dim()
    }

    pub fn obs_dim(&self) -> usize {
        self.observation.obs_dim()
    }

    pub fn partition(&self) -> ParamPartition {
        ParamPartition {
            dyn_len: self.dynamics.param_len(),
            obs_len: self.observation.param_len(),
            proc_len: self.proc_cov.param_len(),
            meas_len: self.meas_cov.param_len(),
        }
    }

    pub fn param_len(&self) -> usize {
        self.partition().total()
    }

    /// Wrap a flat vector in a [`ParameterVector`] with this model's partition.
    pub fn params(&self, values: &DVector<f64>) -> Result<ParameterVector> {
        ParameterVector::new(values.clone(), self.partition())
    }

    pub fn psi(&self, x: &DVector<f64>, theta: &ParameterVector) -> DVector<f64> {
        self.dynamics.step(x, theta.dyn_block())
    }

    pub fn h(&self, x: &DVector<f64>, theta: &ParameterVector) -> DVector<f64> {
        self.observation.apply(x, theta.obs_block())
    }

    pub fn sigma(&self, theta: &ParameterVector) -> DMatrix<f64> {
        self.proc_cov.eval(theta.proc_block())
    }

    pub fn gamma(&self, theta: &ParameterVector) -> DMatrix<f64> {
        self.meas_cov.eval(theta.meas_block())
    }
}

/// Declarative model description consumed by [`make_model`].
#[derive(Debug, Clone)]
pub struct ModelConfig {
    pub dt: f64,
    pub dynamics: DynamicsConfig,
    pub observation: ObservationConfig,
    pub proc_cov: CovConfig,
    pub meas_cov: CovConfig,
}

#[derive(Debug, Clone)]
pub enum DynamicsConfig {
    /// `A(theta) x` with a free row-major `dim x dim` matrix.
    Linear { dim: usize },
    /// Forward-Euler monomial dictionary up to `max_degree`.
    EulerDictionary { dim: usize, max_degree: u32 },
    /// RK4-integrated known ODE structure.
    KnownOde {
        field: KnownFieldConfig,
        substeps: usize,
    },
}

#[derive(Debug, Clone)]
pub enum KnownFieldConfig {
    PendulumOffdiag,
    NonlinearPendulum,
    VanDerPol,
    Lorenz63,
    ReactionDiffusion { grid: Grid1d, literal_c2_factor: bool },
}

#[derive(Debug, Clone)]
pub enum ObservationConfig {
    Identity,
    Matrix { rows: Vec<Vec<f64>> },
    /// Spatial moments of the first species on the model grid.
    Moments { grid: Grid1d },
}

#[derive(Debug, Clone)]
pub enum CovConfig {
    Isotropic,
    Diagonal,
    FixedIsotropic { variance: f64 },
    FixedDiagonal { variances: Vec<f64> },
}

impl CovConfig {
    fn build(&self, dim: usize) -> Result<CovSpec> {
        Ok(match self {
            CovConfig::Isotropic => CovSpec::Isotropic { dim },
            CovConfig::Diagonal => CovSpec::Diagonal { dim },
            CovConfig::FixedIsotropic { variance } => CovSpec::fixed_isotropic(dim, *variance),
            CovConfig::FixedDiagonal { variances } => {
                if variances.len() != dim {
                    return Err(Error::DimensionMismatch(format!(
                        "fixed diagonal covariance has {} entries, expected {dim}",
                        variances.len()
                    )));
                }
                CovSpec::Fixed {
                    matrix: DMatrix::from_diagonal(&DVector::from_row_slice(variances)),
                }
            }
        })
    }
}

/// Build a [`StateSpaceModel`] from a declarative configuration.
pub fn make_model(cfg: &ModelConfig) -> Result<StateSpaceModel> {
    let dynamics: Arc<dyn Dynamics> = match &cfg.dynamics {
        DynamicsConfig::Linear { dim } => {
            if *dim == 0 {
                return Err(Error::InvalidArgument("state dimension is zero".into()));
            }
            Arc::new(LinearDynamics { dim: *dim })
        }
        DynamicsConfig::EulerDictionary { dim, max_degree } => Arc::new(EulerDictionaryDynamics {
            library: DictionaryLibrary::total_degree(*dim, *max_degree),
            dt: cfg.dt,
        }),
        DynamicsConfig::KnownOde { field, substeps } => {
            if *substeps == 0 {
                return Err(Error::InvalidArgument(
                    "known-ODE dynamics needs at least one substep".into(),
                ));
            }
            let field: Arc<dyn VectorField> = match field {
                KnownFieldConfig::PendulumOffdiag => Arc::new(PendulumOffdiagField),
                KnownFieldConfig::NonlinearPendulum => Arc::new(NonlinearPendulumField),
                KnownFieldConfig::VanDerPol => Arc::new(VanDerPolField),
                KnownFieldConfig::Lorenz63 => Arc::new(Lorenz63Field),
                KnownFieldConfig::ReactionDiffusion {
                    grid,
                    literal_c2_factor,
                } => Arc::new(ReactionDiffusionField {
                    grid: *grid,
                    literal_c2_factor: *literal_c2_factor,
                }),
            };
            Arc::new(KnownOdeDynamics {
                field,
                dt: cfg.dt,
                substeps: *substeps,
            })
        }
    };

    let state_dim = dynamics.dim();
    let observation: Arc<dyn Observation> = match &cfg.observation {
        ObservationConfig::Identity => Arc::new(IdentityObs { dim: state_dim }),
        ObservationConfig::Matrix { rows } => {
            let nrows = rows.len();
            if nrows == 0 || rows.iter().any(|r| r.len() != state_dim) {
                return Err(Error::DimensionMismatch(
                    "observation matrix rows must all have state-dim entries".into(),
                ));
            }
            let flat: Vec<f64> = rows.iter().flatten().copied().collect();
            Arc::new(MatrixObs {
                h: DMatrix::from_row_slice(nrows, state_dim, &flat),
            })
        }
        ObservationConfig::Moments { grid } => Arc::new(MomentObs { grid: *grid }),
    };

    let proc_cov = cfg.proc_cov.build(state_dim)?;
    let meas_cov = cfg.meas_cov.build(observation.obs_dim())?;
    StateSpaceModel::new(cfg.dt, dynamics, observation, proc_cov, meas_cov)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn partition_blocks_are_disjoint_and_cover() {
        let p = ParamPartition {
            dyn_len: 4,
            obs_len: 0,
            proc_len: 1,
            meas_len: 1,
        };
        assert_eq!(p.total(), 6);
        assert_eq!(p.dyn_range(), 0..4);
        assert_eq!(p.obs_range(), 4..4);
        assert_eq!(p.proc_range(), 4..5);
        assert_eq!(p.meas_range(), 5..6);
    }

    #[test]
    fn parameter_vector_rejects_wrong_length() {
        let p = ParamPartition {
            dyn_len: 2,
            obs_len: 0,
            proc_len: 1,
            meas_len: 1,
        };
        assert!(ParameterVector::from_slice(&[1.0, 2.0, 3.0], p).is_err());
        let pv = ParameterVector::from_slice(&[1.0, 2.0, 3.0, 4.0], p).unwrap();
        assert_eq!(pv.dyn_block(), &[1.0, 2.0]);
        assert_eq!(pv.proc_block(), &[3.0]);
        assert_eq!(pv.meas_block(), &[4.0]);
    }

    #[test]
    fn linear_model_round_trip() {
        let cfg = ModelConfig {
            dt: 0.1,
            dynamics: DynamicsConfig::Linear { dim: 2 },
            observation: ObservationConfig::Identity,
            proc_cov: CovConfig::Isotropic,
            meas_cov: CovConfig::Isotropic,
        };
        let model = make_model(&cfg).unwrap();
        assert_eq!(model.param_len(), 6);
        let theta = model
            .params(&DVector::from_row_slice(&[
                0.0, 1.0, -1.0, 0.0, 0.01, 0.04,
            ]))
            .unwrap();
        let x = DVector::from_vec(vec![2.0, 3.0]);
        let next = model.psi(&x, &theta);
        assert_relative_eq!(next[0], 3.0);
        assert_relative_eq!(next[1], -2.0);
        assert_relative_eq!(model.gamma(&theta)[(1, 1)], 0.04);
    }

    #[test]
    fn euler_dictionary_step_matches_hand_computation() {
        let cfg = ModelConfig {
            dt: 0.5,
            dynamics: DynamicsConfig::EulerDictionary {
                dim: 1,
                max_degree: 2,
            },
            observation: ObservationConfig::Identity,
            proc_cov: CovConfig::FixedIsotropic { variance: 0.0 },
            meas_cov: CovConfig::FixedIsotropic { variance: 1.0 },
        };
        let model = make_model(&cfg).unwrap();
        // library: [1, x, x^2]; theta picks dx/dt = 2 - x + 0.5 x^2
        let theta = model
            .params(&DVector::from_row_slice(&[2.0, -1.0, 0.5]))
            .unwrap();
        let x = DVector::from_vec(vec![2.0]);
        let next = model.psi(&x, &theta);
        assert_relative_eq!(next[0], 2.0 + 0.5 * (2.0 - 2.0 + 0.5 * 4.0), epsilon = 1e-14);
    }

    #[test]
    fn known_ode_step_converges_to_flow() {
        let cfg = ModelConfig {
            dt: 0.2,
            dynamics: DynamicsConfig::KnownOde {
                field: KnownFieldConfig::PendulumOffdiag,
                substeps: 50,
            },
            observation: ObservationConfig::Identity,
            proc_cov: CovConfig::Isotropic,
            meas_cov: CovConfig::Isotropic,
        };
        let model = make_model(&cfg).unwrap();
        let theta = model
            .params(&DVector::from_row_slice(&[1.0, -9.81, 0.0, 0.0]))
            .unwrap();
        let x0 = DVector::from_vec(vec![0.1, -0.5]);
        let got = model.psi(&x0, &theta);
        let exact = crate::linalg::expm_offdiag2(1.0, -9.81, 0.2) * &x0;
        assert_relative_eq!(got[0], exact[0], epsilon = 1e-9);
        assert_relative_eq!(got[1], exact[1], epsilon = 1e-9);
    }

    #[test]
    fn moment_observation_uses_trapezoid_weights() {
        let grid = Grid1d::new(0.0, 2.0, 3);
        let obs = MomentObs { grid };
        // c1 = [1, 2, 3], c2 arbitrary
        let x = DVector::from_vec(vec![1.0, 2.0, 3.0, 0.0, 0.0, 0.0]);
        let y = obs.apply(&x, &[]);
        // dx = 1: integral c1 = 0.5*1 + 2 + 0.5*3 = 4; integral c1^2 = 0.5 + 4 + 4.5 = 9
        assert_relative_eq!(y[0], 4.0, epsilon = 1e-14);
        assert_relative_eq!(y[1], 9.0, epsilon = 1e-14);
    }
}
