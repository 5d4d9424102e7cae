//! The TOML configuration schema.
//!
//! One file drives every subcommand; each command reads only the sections
//! it needs. Unknown keys are hard errors, and the schema itself is
//! versioned, so a stale or misspelled config fails loudly instead of
//! silently running something else.

use serde::Deserialize;
use std::path::Path;
use std::sync::Arc;

use gaussid_core::error::{Error, Result};
use gaussid_core::filters::{FilterSettings, GaussianBelief, InitBelief};
use gaussid_core::models::{
    make_model, CovConfig, DynamicsConfig, Grid1d, IdentityObs, KnownFieldConfig, MatrixObs,
    ModelConfig, MomentObs, Observation, ObservationConfig, StateSpaceModel, TruthSystem,
};
use gaussid_core::posterior::{LikelihoodKind, MapMethod, PriorKind, PriorSpec};
use nalgebra::{DMatrix, DVector};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Config {
    pub schema_version: u32,
    #[serde(default)]
    pub simulate: Option<SimulateSection>,
    #[serde(default)]
    pub model: Option<ModelSection>,
    #[serde(default)]
    pub prior: Option<PriorSection>,
    #[serde(default)]
    pub fit: Option<FitSection>,
    #[serde(default)]
    pub predict: Option<PredictSection>,
    #[serde(default)]
    pub suite: Option<SuiteSection>,
}

/// Parse and version-check a config file. TOML errors are mapped onto
/// line-numbered parse errors.
pub fn load_config(path: &Path) -> Result<(Config, String)> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::Io(std::io::Error::new(e.kind(), format!("{}: {e}", path.display()))))?;
    let cfg: Config = toml::from_str(&text).map_err(|e| {
        let line = e
            .span()
            .map(|s| text[..s.start.min(text.len())].lines().count().max(1))
            .unwrap_or(0);
        Error::Parse {
            line,
            msg: format!("{}: {}", path.display(), e.message()),
        }
    })?;
    if cfg.schema_version != SCHEMA_VERSION {
        return Err(Error::InvalidArgument(format!(
            "config schema version {} not supported (expected {SCHEMA_VERSION})",
            cfg.schema_version
        )));
    }
    Ok((cfg, text))
}

fn missing(section: &str) -> Error {
    Error::InvalidArgument(format!("config is missing the [{section}] section"))
}

impl Config {
    pub fn simulate(&self) -> Result<&SimulateSection> {
        self.simulate.as_ref().ok_or_else(|| missing("simulate"))
    }
    pub fn model(&self) -> Result<&ModelSection> {
        self.model.as_ref().ok_or_else(|| missing("model"))
    }
    pub fn fit(&self) -> Result<&FitSection> {
        self.fit.as_ref().ok_or_else(|| missing("fit"))
    }
    pub fn predict(&self) -> Result<&PredictSection> {
        self.predict.as_ref().ok_or_else(|| missing("predict"))
    }
    pub fn suite(&self) -> Result<&SuiteSection> {
        self.suite.as_ref().ok_or_else(|| missing("suite"))
    }

    /// Prior over the model parameters; defaults to flat dynamics and
    /// observation blocks with half-normal(1) variances.
    pub fn build_prior(&self, model: &StateSpaceModel) -> Result<PriorSpec> {
        match &self.prior {
            None => Ok(PriorSpec::uninformative(model.partition())),
            Some(p) => Ok(PriorSpec::from_blocks(
                model.partition(),
                p.dynamics.clone().unwrap_or(PriorKindSpec::Flat).build()?,
                p.observation
                    .clone()
                    .unwrap_or(PriorKindSpec::Flat)
                    .build()?,
                p.variances
                    .clone()
                    .unwrap_or(PriorKindSpec::HalfNormal { scale: 1.0 })
                    .build()?,
            )),
        }
    }
}

// ---------------------------------------------------------------------------
// [simulate]

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SimulateSection {
    pub truth: TruthSpec,
    #[serde(default)]
    pub t0: f64,
    pub dt: f64,
    pub n: usize,
    pub noise_sd: f64,
    pub seed: u64,
    #[serde(default = "one")]
    pub keep_every: usize,
    #[serde(default)]
    pub missing: Vec<usize>,
    /// Observation map applied to the truth; identity when omitted.
    #[serde(default)]
    pub observation: Option<ObservationSpec>,
}

fn one() -> usize {
    1
}

#[derive(Debug, Clone, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum TruthSpec {
    LinearPendulum {
        g: f64,
        length: f64,
        x0: [f64; 2],
    },
    NonlinearPendulum {
        g: f64,
        length: f64,
        x0: [f64; 2],
    },
    VanDerPol {
        mu: f64,
        x0: [f64; 2],
    },
    Lorenz63 {
        sigma: f64,
        rho: f64,
        beta: f64,
        x0: [f64; 3],
    },
    ReactionDiffusion {
        x_left: f64,
        x_right: f64,
        n_points: usize,
        d1: f64,
        d2: f64,
        k: f64,
        #[serde(default)]
        literal_c2_factor: bool,
        ic_seed: u64,
        ic_low: f64,
        ic_high: f64,
    },
}

impl TruthSpec {
    pub fn build(&self) -> TruthSystem {
        match self.clone() {
            TruthSpec::LinearPendulum { g, length, x0 } => {
                TruthSystem::LinearPendulum { g, length, x0 }
            }
            TruthSpec::NonlinearPendulum { g, length, x0 } => {
                TruthSystem::NonlinearPendulum { g, length, x0 }
            }
            TruthSpec::VanDerPol { mu, x0 } => TruthSystem::VanDerPol { mu, x0 },
            TruthSpec::Lorenz63 {
                sigma,
                rho,
                beta,
                x0,
            } => TruthSystem::Lorenz63 {
                sigma,
                rho,
                beta,
                x0,
            },
            TruthSpec::ReactionDiffusion {
                x_left,
                x_right,
                n_points,
                d1,
                d2,
                k,
                literal_c2_factor,
                ic_seed,
                ic_low,
                ic_high,
            } => TruthSystem::ReactionDiffusion {
                grid: Grid1d::new(x_left, x_right, n_points),
                d1,
                d2,
                k,
                literal_c2_factor,
                ic_seed,
                ic_low,
                ic_high,
            },
        }
    }

    pub fn grid(&self) -> Option<Grid1d> {
        match self {
            TruthSpec::ReactionDiffusion {
                x_left,
                x_right,
                n_points,
                ..
            } => Some(Grid1d::new(*x_left, *x_right, *n_points)),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum ObservationSpec {
    Identity,
    Matrix { rows: Vec<Vec<f64>> },
    /// Spatial moments of the first species; the grid comes from the
    /// reaction-diffusion truth or model.
    Moments,
}

impl ObservationSpec {
    pub fn build(&self, state_dim: usize, grid: Option<Grid1d>) -> Result<Arc<dyn Observation>> {
        Ok(match self {
            ObservationSpec::Identity => Arc::new(IdentityObs { dim: state_dim }),
            ObservationSpec::Matrix { rows } => {
                if rows.is_empty() || rows.iter().any(|r| r.len() != state_dim) {
                    return Err(Error::DimensionMismatch(format!(
                        "observation matrix rows must all have {state_dim} entries"
                    )));
                }
                let m = rows.len();
                let flat: Vec<f64> = rows.iter().flatten().copied().collect();
                Arc::new(MatrixObs {
                    h: DMatrix::from_row_slice(m, state_dim, &flat),
                })
            }
            ObservationSpec::Moments => {
                let grid = grid.ok_or_else(|| {
                    Error::InvalidArgument(
                        "moment observations need a reaction-diffusion grid".into(),
                    )
                })?;
                Arc::new(MomentObs { grid })
            }
        })
    }
}

// ---------------------------------------------------------------------------
// [model]

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelSection {
    pub dt: f64,
    pub dynamics: DynamicsSpec,
    #[serde(default)]
    pub observation: Option<ObservationSpec>,
    pub proc_cov: CovSpecToml,
    pub meas_cov: CovSpecToml,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum DynamicsSpec {
    Linear {
        dim: usize,
    },
    EulerDictionary {
        dim: usize,
        max_degree: u32,
    },
    KnownOde {
        field: String,
        substeps: usize,
        #[serde(default)]
        grid: Option<GridSpec>,
        #[serde(default)]
        literal_c2_factor: bool,
    },
}

#[derive(Debug, Clone, Copy, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridSpec {
    pub x_left: f64,
    pub x_right: f64,
    pub n_points: usize,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum CovSpecToml {
    Isotropic,
    Diagonal,
    FixedIsotropic { variance: f64 },
    FixedDiagonal { variances: Vec<f64> },
}

impl CovSpecToml {
    fn build(&self) -> CovConfig {
        match self {
            CovSpecToml::Isotropic => CovConfig::Isotropic,
            CovSpecToml::Diagonal => CovConfig::Diagonal,
            CovSpecToml::FixedIsotropic { variance } => CovConfig::FixedIsotropic {
                variance: *variance,
            },
            CovSpecToml::FixedDiagonal { variances } => CovConfig::FixedDiagonal {
                variances: variances.clone(),
            },
        }
    }
}

impl ModelSection {
    pub fn build(&self) -> Result<StateSpaceModel> {
        let dynamics = match &self.dynamics {
            DynamicsSpec::Linear { dim } => DynamicsConfig::Linear { dim: *dim },
            DynamicsSpec::EulerDictionary { dim, max_degree } => DynamicsConfig::EulerDictionary {
                dim: *dim,
                max_degree: *max_degree,
            },
            DynamicsSpec::KnownOde {
                field,
                substeps,
                grid,
                literal_c2_factor,
            } => {
                let field = match field.as_str() {
                    "pendulum_offdiag" => KnownFieldConfig::PendulumOffdiag,
                    "nonlinear_pendulum" => KnownFieldConfig::NonlinearPendulum,
                    "van_der_pol" => KnownFieldConfig::VanDerPol,
                    "lorenz63" => KnownFieldConfig::Lorenz63,
                    "reaction_diffusion" => {
                        let g = grid.ok_or_else(|| {
                            Error::InvalidArgument(
                                "reaction-diffusion dynamics needs a grid".into(),
                            )
                        })?;
                        KnownFieldConfig::ReactionDiffusion {
                            grid: Grid1d::new(g.x_left, g.x_right, g.n_points),
                            literal_c2_factor: *literal_c2_factor,
                        }
                    }
                    other => {
                        return Err(Error::InvalidArgument(format!(
                            "unknown vector field '{other}'"
                        )))
                    }
                };
                DynamicsConfig::KnownOde {
                    field,
                    substeps: *substeps,
                }
            }
        };
        let observation = match &self.observation {
            None | Some(ObservationSpec::Identity) => ObservationConfig::Identity,
            Some(ObservationSpec::Matrix { rows }) => {
                ObservationConfig::Matrix { rows: rows.clone() }
            }
            Some(ObservationSpec::Moments) => {
                let g = match &self.dynamics {
                    DynamicsSpec::KnownOde { grid: Some(g), .. } => *g,
                    _ => {
                        return Err(Error::InvalidArgument(
                            "moment observations need reaction-diffusion dynamics with a grid"
                                .into(),
                        ))
                    }
                };
                ObservationConfig::Moments {
                    grid: Grid1d::new(g.x_left, g.x_right, g.n_points),
                }
            }
        };
        make_model(&ModelConfig {
            dt: self.dt,
            dynamics,
            observation,
            proc_cov: self.proc_cov.build(),
            meas_cov: self.meas_cov.build(),
        })
    }
}

// ---------------------------------------------------------------------------
// [prior]

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PriorSection {
    #[serde(default)]
    pub dynamics: Option<PriorKindSpec>,
    #[serde(default)]
    pub observation: Option<PriorKindSpec>,
    #[serde(default)]
    pub variances: Option<PriorKindSpec>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum PriorKindSpec {
    Flat,
    HalfNormal { scale: f64 },
    Laplace { rate: f64 },
}

impl PriorKindSpec {
    fn build(self) -> Result<PriorKind> {
        Ok(match self {
            PriorKindSpec::Flat => PriorKind::ImproperUniform,
            PriorKindSpec::HalfNormal { scale } => {
                if scale <= 0.0 {
                    return Err(Error::InvalidArgument("half-normal scale must be > 0".into()));
                }
                PriorKind::HalfNormal { scale }
            }
            PriorKindSpec::Laplace { rate } => {
                if rate <= 0.0 {
                    return Err(Error::InvalidArgument("laplace rate must be > 0".into()));
                }
                PriorKind::Laplace { rate }
            }
        })
    }
}

// ---------------------------------------------------------------------------
// [fit]

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FitSection {
    /// Observation CSV, relative to the output directory.
    pub observations: String,
    #[serde(default)]
    pub likelihood: Option<LikelihoodSpec>,
    #[serde(default)]
    pub init: Option<InitSpec>,
    #[serde(default)]
    pub theta0: Option<Vec<f64>>,
    #[serde(default)]
    pub map_method: Option<String>,
    #[serde(default)]
    pub max_evals: Option<usize>,
    #[serde(default = "default_n_samples")]
    pub n_samples: usize,
    #[serde(default = "default_burn_in")]
    pub burn_in: f64,
    #[serde(default)]
    pub seed: u64,
    #[serde(default)]
    pub n0: Option<usize>,
    #[serde(default)]
    pub gamma: Option<f64>,
    #[serde(default)]
    pub adapt_every: Option<usize>,
    #[serde(default)]
    pub sd_scale: Option<f64>,
    #[serde(default)]
    pub dr_enabled: Option<bool>,
    // filter settings overrides
    #[serde(default)]
    pub alpha: Option<f64>,
    #[serde(default)]
    pub kappa: Option<f64>,
    #[serde(default)]
    pub beta: Option<f64>,
    #[serde(default)]
    pub eps: Option<f64>,
    #[serde(default)]
    pub triple_inverse_downdate: Option<bool>,
    // baseline knobs
    #[serde(default = "default_sindy_threshold")]
    pub sindy_threshold: f64,
    #[serde(default = "default_sindy_degree")]
    pub sindy_max_degree: u32,
    #[serde(default = "default_sindy_iters")]
    pub sindy_max_iterations: usize,
}

fn default_n_samples() -> usize {
    4000
}
fn default_burn_in() -> f64 {
    0.25
}
fn default_sindy_threshold() -> f64 {
    0.1
}
fn default_sindy_degree() -> u32 {
    2
}
fn default_sindy_iters() -> usize {
    10
}

#[derive(Debug, Clone, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum LikelihoodSpec {
    Kalman,
    Unscented,
    DetPath { x0: Vec<f64> },
    Noiseless,
}

impl LikelihoodSpec {
    pub fn build(&self) -> LikelihoodKind {
        match self {
            LikelihoodSpec::Kalman => LikelihoodKind::Kalman,
            LikelihoodSpec::Unscented => LikelihoodKind::Unscented,
            LikelihoodSpec::DetPath { x0 } => LikelihoodKind::DeterministicPath {
                x0: DVector::from_row_slice(x0),
            },
            LikelihoodSpec::Noiseless => LikelihoodKind::NoiselessObservations,
        }
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum InitSpec {
    FromFirstObservation,
    Fixed { mean: Vec<f64>, cov_diag: Vec<f64> },
}

impl InitSpec {
    pub fn build(&self) -> Result<InitBelief> {
        Ok(match self {
            InitSpec::FromFirstObservation => InitBelief::FromFirstObservation,
            InitSpec::Fixed { mean, cov_diag } => {
                if mean.len() != cov_diag.len() {
                    return Err(Error::DimensionMismatch(format!(
                        "init mean has {} entries, cov_diag {}",
                        mean.len(),
                        cov_diag.len()
                    )));
                }
                InitBelief::Fixed(GaussianBelief::new(
                    DVector::from_row_slice(mean),
                    DMatrix::from_diagonal(&DVector::from_row_slice(cov_diag)),
                )?)
            }
        })
    }
}

impl FitSection {
    pub fn filter_settings(&self) -> FilterSettings {
        let d = FilterSettings::default();
        FilterSettings {
            alpha: self.alpha.unwrap_or(d.alpha),
            kappa: self.kappa.unwrap_or(d.kappa),
            beta: self.beta.unwrap_or(d.beta),
            eps: self.eps.unwrap_or(d.eps),
            triple_inverse_downdate: self
                .triple_inverse_downdate
                .unwrap_or(d.triple_inverse_downdate),
        }
    }

    pub fn map_method(&self) -> Result<MapMethod> {
        match self.map_method.as_deref() {
            None | Some("nelder_mead") => Ok(MapMethod::NelderMead),
            Some("bfgs") => Ok(MapMethod::BfgsNumGrad),
            Some(other) => Err(Error::InvalidArgument(format!(
                "unknown map method '{other}' (expected nelder_mead or bfgs)"
            ))),
        }
    }
}

// ---------------------------------------------------------------------------
// [predict]

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PredictSection {
    /// Chain CSV from a previous bayes fit, relative to the output directory.
    pub chain: String,
    /// Observation CSV supplying the default start state and time.
    pub observations: String,
    pub n_steps: usize,
    pub draws: usize,
    #[serde(default)]
    pub seed: u64,
    #[serde(default = "default_true")]
    pub with_process_noise: bool,
    #[serde(default)]
    pub burn_in: f64,
    /// Alternate start state; when given, rollouts begin there at time 0
    /// instead of continuing from the last observation.
    #[serde(default)]
    pub x0: Option<Vec<f64>>,
    #[serde(default = "default_band")]
    pub band: [f64; 2],
}

fn default_true() -> bool {
    true
}
fn default_band() -> [f64; 2] {
    [0.025, 0.975]
}

// ---------------------------------------------------------------------------
// [suite]

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SuiteSection {
    #[serde(default)]
    pub landscape: Option<LandscapeSuite>,
    #[serde(default)]
    pub sweep: Option<SweepSuite>,
    #[serde(default)]
    pub flops: Option<FlopsSuite>,
    #[serde(default)]
    pub scaling: Option<ScalingSuite>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LandscapeSuite {
    pub theta1: AxisSpec,
    pub theta2: AxisSpec,
    pub n: usize,
    pub dt: f64,
    pub noise_sd: f64,
    pub seed: u64,
    pub x0: [f64; 2],
    pub proc_var: f64,
    pub meas_var: f64,
}

#[derive(Debug, Clone, Copy, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AxisSpec {
    pub min: f64,
    pub max: f64,
    pub count: usize,
}

impl AxisSpec {
    pub fn values(&self) -> Vec<f64> {
        if self.count == 1 {
            return vec![self.min];
        }
        let step = (self.max - self.min) / (self.count - 1) as f64;
        (0..self.count).map(|i| self.min + i as f64 * step).collect()
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepSuite {
    pub noise_levels: Vec<f64>,
    pub n_values: Vec<usize>,
    pub realizations: usize,
    /// Realization count used when the command runs with `--full`.
    #[serde(default = "default_full_realizations")]
    pub full_realizations: usize,
    pub algorithms: Vec<String>,
    pub base_seed: u64,
    pub horizon: f64,
    #[serde(default = "default_true")]
    pub drop_worst: bool,
    pub chain_len: usize,
    #[serde(default = "default_burn_in")]
    pub burn_in: f64,
    #[serde(default)]
    pub truth: Option<TruthSpec>,
}

fn default_full_realizations() -> usize {
    500
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FlopsSuite {
    pub rows: Vec<FlopRowSpec>,
}

#[derive(Debug, Clone, Copy, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FlopRowSpec {
    pub d: i64,
    pub m: i64,
    pub n: i64,
    #[serde(default)]
    pub p: i64,
    #[serde(default)]
    pub f_dyn: i64,
    #[serde(default)]
    pub h_obs: i64,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScalingSuite {
    pub filter: String,
    pub d_list: Vec<usize>,
    pub n_list: Vec<usize>,
    pub trials: usize,
    #[serde(default)]
    pub seed: u64,
}

#[cfg(test)]
mod tests {
    use super::*;

    fn write_tmp(text: &str) -> (tempfile::TempDir, std::path::PathBuf) {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("config.toml");
        std::fs::write(&p, text).unwrap();
        (dir, p)
    }

    #[test]
    fn minimal_simulate_config_parses() {
        let (_d, p) = write_tmp(
            r#"
schema_version = 1

[simulate]
dt = 0.1
n = 40
noise_sd = 0.1
seed = 7

[simulate.truth]
kind = "linear_pendulum"
g = 9.81
length = 1.0
x0 = [0.2, 0.0]
"#,
        );
        let (cfg, _) = load_config(&p).unwrap();
        let sim = cfg.simulate().unwrap();
        assert_eq!(sim.n, 40);
        assert_eq!(sim.keep_every, 1);
        assert!(matches!(sim.truth, TruthSpec::LinearPendulum { .. }));
    }

    #[test]
    fn unknown_keys_are_rejected_with_a_line() {
        let (_d, p) = write_tmp(
            "schema_version = 1\n\n[simulate]\ndt = 0.1\nn = 4\nnoise_sd = 0.0\nseed = 1\nbogus_key = 3\n\n[simulate.truth]\nkind = \"van_der_pol\"\nmu = 1.0\nx0 = [0.0, 2.0]\n",
        );
        match load_config(&p) {
            Err(Error::Parse { line, msg }) => {
                assert!(msg.contains("bogus_key"), "{msg}");
                assert!(line > 0);
            }
            other => panic!("expected parse error, got {other:?}"),
        }
    }

    #[test]
    fn wrong_schema_version_is_rejected() {
        let (_d, p) = write_tmp("schema_version = 99\n");
        assert!(load_config(&p).is_err());
    }

    #[test]
    fn model_section_builds_a_linear_model() {
        let (_d, p) = write_tmp(
            r#"
schema_version = 1

[model]
dt = 0.1
dynamics = { kind = "linear", dim = 2 }
proc_cov = { kind = "isotropic" }
meas_cov = { kind = "fixed_isotropic", variance = 0.01 }
"#,
        );
        let (cfg, _) = load_config(&p).unwrap();
        let model = cfg.model().unwrap().build().unwrap();
        assert_eq!(model.state_dim(), 2);
        assert_eq!(model.param_len(), 5); // 4 dynamics + 1 process variance
    }

    #[test]
    fn axis_values_are_inclusive_and_even() {
        let ax = AxisSpec {
            min: -1.0,
            max: 1.0,
            count: 5,
        };
        let v = ax.values();
        assert_eq!(v.len(), 5);
        assert_eq!(v[0], -1.0);
        assert_eq!(v[4], 1.0);
        assert_eq!(v[2], 0.0);
    }
}
