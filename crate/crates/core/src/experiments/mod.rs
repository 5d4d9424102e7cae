//! Numerical studies built on top of the estimation stack: cost-surface
//! landscapes, noise/sample-size robustness sweeps, operation-count models
//! and wall-clock scaling probes.

pub mod flops;
pub mod landscape;
pub mod scaling;
pub mod sweep;

pub use flops::{flop_model, tls_solve_flops, FlopAlgorithm, FlopDims};
pub use landscape::{
    ls_frequency_cost, objective_landscape, pendulum_log_posterior, pendulum_window_data,
    LandscapeConfig, LandscapeGrid, LandscapeObjective,
};
pub use scaling::{log_log_fit, scaling_probe, ScalingFilter, ScalingFitLine, ScalingPoint, ScalingReport};
pub use sweep::{
    mse_ratio_sweep, SweepAlgorithm, SweepCell, SweepSpec, SweepTable, SweepTruth,
};
