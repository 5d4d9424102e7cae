//! Bayesian identification of dynamical systems from noisy time series.
//!
//! The central object is a discrete-time hidden Markov model
//!
//! ```text
//! x_k = psi(x_{k-1}, theta) + xi_k,    xi_k ~ N(0, Sigma(theta))
//! y_k = h(x_k, theta) + eta_k,         eta_k ~ N(0, Gamma(theta))
//! ```
//!
//! whose states are marginalized by a Gaussian filter (Kalman for linear
//! models, unscented otherwise), turning the parameter likelihood into a
//! cheap deterministic function. That likelihood feeds a delayed-rejection
//! adaptive Metropolis sampler, giving samples from the marginal parameter
//! posterior. Least-squares identification methods (dynamic mode
//! decomposition, its total-least-squares variant, and sparse dictionary
//! regression) are included as baselines, along with experiment drivers
//! that compare them on reconstruction error, cost landscapes and
//! operation counts.

pub mod baselines;
pub mod error;
pub mod experiments;
pub mod filters;
pub mod linalg;
pub mod mcmc;
pub mod models;
pub mod posterior;
pub mod prediction;
pub mod rng;

pub use error::{Error, Result};
