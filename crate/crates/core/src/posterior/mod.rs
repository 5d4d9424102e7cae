//! Priors, the log posterior, and its MAP point.

mod optimize;

pub use optimize::{find_map, MapMethod, MapOptions, MapResult};

use nalgebra::DVector;

use crate::error::{Error, Result};
use crate::filters::{
    det_loglik, kf_marginal_loglik, noiseless_loglik, ukf_marginal_loglik, FilterSettings,
    GaussianBelief, InitBelief,
};
use crate::models::{ObservationSet, ParamPartition, StateSpaceModel};

const LN_2PI: f64 = 1.8378770664093453;

/// Marginal prior for a single parameter.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
pub enum PriorKind {
    /// Flat improper prior; contributes zero to the log density everywhere.
    ImproperUniform,
    /// Half-normal on `[0, inf)` with the given scale, the usual weakly
    /// informative choice for variance parameters.
    HalfNormal { scale: f64 },
    /// Double-exponential with the given rate, the sparsity prior for
    /// dictionary coefficients.
    Laplace { rate: f64 },
}

impl PriorKind {
    pub fn log_density(&self, x: f64) -> f64 {
        match self {
            PriorKind::ImproperUniform => 0.0,
            PriorKind::HalfNormal { scale } => {
                if x < 0.0 {
                    f64::NEG_INFINITY
                } else {
                    2.0_f64.ln() - scale.ln() - 0.5 * LN_2PI - 0.5 * (x / scale).powi(2)
                }
            }
            PriorKind::Laplace { rate } => (rate / 2.0).ln() - rate * x.abs(),
        }
    }
}

/// Independent marginal priors for every parameter.
#[derive(Debug, Clone, PartialEq)]
pub struct PriorSpec {
    kinds: Vec<PriorKind>,
}

impl PriorSpec {
    pub fn new(kinds: Vec<PriorKind>) -> Self {
        PriorSpec { kinds }
    }

    /// One prior kind per block of the parameter partition: dynamics and
    /// observation parameters get `dyn_kind` / `obs_kind`, both covariance
    /// blocks get `var_kind`.
    pub fn from_blocks(
        partition: ParamPartition,
        dyn_kind: PriorKind,
        obs_kind: PriorKind,
        var_kind: PriorKind,
    ) -> Self {
        let mut kinds = Vec::with_capacity(partition.total());
        kinds.extend(std::iter::repeat(dyn_kind).take(partition.dyn_len));
        kinds.extend(std::iter::repeat(obs_kind).take(partition.obs_len));
        kinds.extend(std::iter::repeat(var_kind).take(partition.proc_len + partition.meas_len));
        PriorSpec { kinds }
    }

    /// The default benchmark prior: flat on dynamics and observation
    /// parameters, standard half-normal on variances.
    pub fn uninformative(partition: ParamPartition) -> Self {
        Self::from_blocks(
            partition,
            PriorKind::ImproperUniform,
            PriorKind::ImproperUniform,
            PriorKind::HalfNormal { scale: 1.0 },
        )
    }

    pub fn len(&self) -> usize {
        self.kinds.len()
    }

    pub fn is_empty(&self) -> bool {
        self.kinds.is_empty()
    }

    pub fn kinds(&self) -> &[PriorKind] {
        &self.kinds
    }

    pub fn log_prior(&self, values: &DVector<f64>) -> f64 {
        debug_assert_eq!(values.len(), self.kinds.len());
        let mut acc = 0.0;
        for (v, k) in values.iter().zip(&self.kinds) {
            let term = k.log_density(*v);
            if term == f64::NEG_INFINITY {
                return f64::NEG_INFINITY;
            }
            acc += term;
        }
        acc
    }
}

/// Which likelihood the posterior is built on.
#[derive(Debug, Clone)]
pub enum LikelihoodKind {
    /// Exact marginal likelihood by Kalman filtering (linear models).
    Kalman,
    /// Approximate marginal likelihood by unscented Kalman filtering.
    Unscented,
    /// Zero process noise: deterministic path from a known `x0`.
    DeterministicPath { x0: DVector<f64> },
    /// Zero measurement noise with an invertible observation map.
    NoiselessObservations,
}

/// A log-density target over parameter vectors. Implemented by [`Posterior`]
/// and by plain closures wrapped in [`FnDensity`], so samplers and
/// optimizers can be exercised against analytic targets.
pub trait LogDensity: Sync {
    fn dim(&self) -> usize;
    fn log_density(&self, x: &DVector<f64>) -> f64;
}

/// Closure-backed [`LogDensity`] for tests and synthetic targets.
pub struct FnDensity<F: Fn(&DVector<f64>) -> f64 + Sync> {
    dim: usize,
    f: F,
}

impl<F: Fn(&DVector<f64>) -> f64 + Sync> FnDensity<F> {
    pub fn new(dim: usize, f: F) -> Self {
        FnDensity { dim, f }
    }
}

impl<F: Fn(&DVector<f64>) -> f64 + Sync> LogDensity for FnDensity<F> {
    fn dim(&self) -> usize {
        self.dim
    }
    fn log_density(&self, x: &DVector<f64>) -> f64 {
        (self.f)(x)
    }
}

/// The (unnormalized) log posterior `log p(theta) + log L(theta; data)`.
///
/// Evaluation never panics on bad parameter values: infeasible priors and
/// numerically failing likelihoods both come back as `-inf`.
///
/// With [`InitBelief::FromFirstObservation`] the anchoring observation is
/// consumed by the initial belief rather than scored: its own likelihood
/// term would be a parameter-independent constant, so the filter starts at
/// that row's state and scores the rows after it. A posterior built this
/// way is conditional on the first observation.
pub struct Posterior {
    model: StateSpaceModel,
    data: ObservationSet,
    // observation consumed by the initial belief, when the belief is
    // anchored on the data rather than supplied by the caller
    anchor: Option<DVector<f64>>,
    prior: PriorSpec,
    likelihood: LikelihoodKind,
    init: InitBelief,
    settings: FilterSettings,
}

impl Posterior {
    pub fn new(
        model: StateSpaceModel,
        data: ObservationSet,
        prior: PriorSpec,
        likelihood: LikelihoodKind,
        init: InitBelief,
        settings: FilterSettings,
    ) -> Result<Self> {
        if prior.len() != model.param_len() {
            return Err(Error::DimensionMismatch(format!(
                "prior covers {} parameters but the model has {}",
                prior.len(),
                model.param_len()
            )));
        }
        if data.obs_dim != model.obs_dim() {
            return Err(Error::DimensionMismatch(format!(
                "data obs dim {} != model obs dim {}",
                data.obs_dim,
                model.obs_dim()
            )));
        }
        if data.n_present() == 0 {
            return Err(Error::InvalidArgument(
                "cannot build a posterior from a data set with no observations".into(),
            ));
        }
        // Structural checks up front so evaluation can stay soft-failing.
        let probe = DVector::zeros(model.param_len());
        let probe_params = model.params(&probe)?;
        match &likelihood {
            LikelihoodKind::Kalman => {
                if model
                    .dynamics
                    .linear_matrix(probe_params.dyn_block())
                    .is_none()
                    || model
                        .observation
                        .linear_matrix(probe_params.obs_block())
                        .is_none()
                {
                    return Err(Error::InvalidArgument(
                        "Kalman likelihood requires linear dynamics and observations".into(),
                    ));
                }
            }
            LikelihoodKind::DeterministicPath { x0 } => {
                if x0.len() != model.state_dim() {
                    return Err(Error::DimensionMismatch(
                        "deterministic-path x0 has the wrong dimension".into(),
                    ));
                }
            }
            LikelihoodKind::NoiselessObservations => {
                if !data.is_fully_observed() {
                    return Err(Error::InvalidArgument(
                        "noiseless-observation likelihood requires fully observed data".into(),
                    ));
                }
            }
            LikelihoodKind::Unscented => {}
        }
        let mut data = data;
        let mut anchor = None;
        if matches!(
            likelihood,
            LikelihoodKind::Kalman | LikelihoodKind::Unscented
        ) {
            if let InitBelief::FromFirstObservation = init {
                let (i0, y) = data.first_present().expect("checked n_present > 0");
                if model.observation.invert(y, probe_params.obs_block()).is_none() {
                    return Err(Error::InvalidArgument(
                        "initial belief from data requires an invertible observation map; \
                         supply a fixed initial belief"
                            .into(),
                    ));
                }
                anchor = Some(y.clone());
                data = ObservationSet::new(
                    data.times[i0 + 1..].to_vec(),
                    data.values[i0 + 1..].to_vec(),
                    data.obs_dim,
                )?;
                if data.n_present() == 0 {
                    return Err(Error::InvalidArgument(
                        "anchoring the initial belief on the data needs at least two \
                         observations"
                            .into(),
                    ));
                }
            }
        }
        Ok(Posterior {
            model,
            data,
            anchor,
            prior,
            likelihood,
            init,
            settings,
        })
    }

    pub fn model(&self) -> &StateSpaceModel {
        &self.model
    }

    pub fn data(&self) -> &ObservationSet {
        &self.data
    }

    pub fn prior(&self) -> &PriorSpec {
        &self.prior
    }

    pub fn settings(&self) -> &FilterSettings {
        &self.settings
    }

    pub fn log_likelihood(&self, values: &DVector<f64>) -> f64 {
        let theta = match self.model.params(values) {
            Ok(t) => t,
            Err(_) => return f64::NEG_INFINITY,
        };
        match &self.likelihood {
            LikelihoodKind::Kalman | LikelihoodKind::Unscented => {
                let init = if let Some(y) = &self.anchor {
                    let mean = match self.model.observation.invert(y, theta.obs_block()) {
                        Some(m) => m,
                        None => return f64::NEG_INFINITY,
                    };
                    match GaussianBelief::new(mean, self.model.gamma(&theta)) {
                        Ok(b) => b,
                        Err(_) => return f64::NEG_INFINITY,
                    }
                } else {
                    match self.init.resolve(&self.model, &theta, &self.data) {
                        Ok(b) => b,
                        Err(_) => return f64::NEG_INFINITY,
                    }
                };
                let run = match self.likelihood {
                    LikelihoodKind::Kalman => kf_marginal_loglik(
                        &self.model,
                        &theta,
                        &self.data,
                        &init,
                        &self.settings,
                    ),
                    _ => ukf_marginal_loglik(
                        &self.model,
                        &theta,
                        &self.data,
                        &init,
                        &self.settings,
                    ),
                };
                run.map_or(f64::NEG_INFINITY, |r| r.log_lik)
            }
            LikelihoodKind::DeterministicPath { x0 } => {
                det_loglik(&self.model, &theta, &self.data, x0)
                    .unwrap_or(f64::NEG_INFINITY)
            }
            LikelihoodKind::NoiselessObservations => {
                noiseless_loglik(&self.model, &theta, &self.data)
                    .unwrap_or(f64::NEG_INFINITY)
            }
        }
    }

    pub fn log_posterior(&self, values: &DVector<f64>) -> f64 {
        let lp = self.prior.log_prior(values);
        if lp == f64::NEG_INFINITY {
            return f64::NEG_INFINITY;
        }
        let ll = self.log_likelihood(values);
        if ll == f64::NEG_INFINITY {
            return f64::NEG_INFINITY;
        }
        lp + ll
    }
}

impl LogDensity for Posterior {
    fn dim(&self) -> usize {
        self.model.param_len()
    }
    fn log_density(&self, x: &DVector<f64>) -> f64 {
        self.log_posterior(x)
    }
}
