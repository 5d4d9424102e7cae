//! The four subcommands. Each one validates everything it can before
//! touching the filesystem, then writes its outputs plus a manifest into
//! the output directory. Paths inside the config are resolved relative to
//! that directory.

use std::path::PathBuf;

use gaussid_core::baselines::{continuous_rates, dmd_fit, eig_analysis, sindy_fit, tdmd_fit};
use gaussid_core::error::{Error, Result};
use gaussid_core::experiments::{
    flop_model, mse_ratio_sweep, objective_landscape, pendulum_window_data, scaling_probe,
    FlopAlgorithm, FlopDims, LandscapeConfig, LandscapeObjective, ScalingFilter, SweepAlgorithm,
    SweepSpec, SweepTruth,
};
use gaussid_core::filters::InitBelief;
use gaussid_core::mcmc::{acceptance_stats, dram_sample, ess_per_coordinate, theta_estimators, DramConfig};
use gaussid_core::models::{
    observe, simulate_truth, uniform_grid, DictionaryLibrary, ObservationSet,
};
use gaussid_core::posterior::{find_map, LikelihoodKind, MapOptions, Posterior};
use gaussid_core::prediction::{ensemble_rollout, reduce_ensemble, thin_draws, Reduction, RolloutOptions};
use nalgebra::DVector;

use crate::config::{Config, FitSection, ObservationSpec};
use crate::io::{self, Manifest};

/// Everything a command needs besides the parsed config: the output
/// directory, the raw config text for the manifest echo, and the flags.
pub struct RunContext {
    pub out_dir: PathBuf,
    pub config_echo: String,
    pub seed_override: Option<u64>,
    pub force: bool,
    pub full: bool,
}

impl RunContext {
    pub fn resolve(&self, rel: &str) -> PathBuf {
        self.out_dir.join(rel)
    }

    fn effective_seed(&self, config_seed: u64) -> (u64, bool) {
        match self.seed_override {
            Some(s) => (s, true),
            None => (config_seed, false),
        }
    }

    /// Refuse to clobber existing files unless `--force` was given. Checked
    /// against the complete list of planned outputs before anything is
    /// written, so a refused run leaves the directory untouched.
    fn check_overwrite(&self, planned: &[&str]) -> Result<()> {
        if self.force {
            return Ok(());
        }
        for name in planned {
            let p = self.resolve(name);
            if p.exists() {
                return Err(Error::InvalidArgument(format!(
                    "refusing to overwrite {} (use --force)",
                    p.display()
                )));
            }
        }
        Ok(())
    }

    fn write_outputs(&self, files: &[(&str, String)], manifest: Manifest) -> Result<Vec<PathBuf>> {
        let mut written = Vec::new();
        for (name, contents) in files {
            let p = self.resolve(name);
            io::write_file(&p, contents)?;
            written.push(p);
        }
        let mp = self.resolve(&manifest_name(&manifest));
        io::write_file(&mp, &manifest.to_json())?;
        written.push(mp);
        Ok(written)
    }
}

/// Manifests are named after the command so that a pipeline run into one
/// directory (simulate, then fit, then predict) keeps the provenance of
/// every step instead of overwriting a single manifest.
fn manifest_name(manifest: &Manifest) -> String {
    match (&manifest.method, &manifest.suite) {
        (Some(m), _) => format!("manifest_{}_{m}.json", manifest.command),
        (_, Some(s)) => format!("manifest_{}_{s}.json", manifest.command),
        _ => format!("manifest_{}.json", manifest.command),
    }
}

fn planned_names<'a>(files: &[(&'a str, String)], manifest_file: &'a str) -> Vec<&'a str> {
    let mut v: Vec<&str> = files.iter().map(|(n, _)| *n).collect();
    v.push(manifest_file);
    v
}

/// Shared tail of every command: refuse to overwrite, record the planned
/// outputs in the manifest, then write everything.
fn finish(ctx: &RunContext, files: &[(&str, String)], mut manifest: Manifest) -> Result<Vec<PathBuf>> {
    let mname = manifest_name(&manifest);
    let names = planned_names(files, &mname);
    ctx.check_overwrite(&names)?;
    manifest.outputs = names.iter().map(|s| s.to_string()).collect();
    ctx.write_outputs(files, manifest)
}

// ---------------------------------------------------------------------------
// simulate

pub fn cmd_simulate(cfg: &Config, ctx: &RunContext) -> Result<Vec<PathBuf>> {
    let sim = cfg.simulate()?;
    if sim.n == 0 {
        return Err(Error::InvalidArgument(
            "simulate needs n >= 1 observations".into(),
        ));
    }
    let (seed, overridden) = ctx.effective_seed(sim.seed);

    let truth = sim.truth.build();
    let grid = uniform_grid(sim.t0, sim.dt, sim.n);
    let traj = simulate_truth(&truth, &grid)?;
    let state_dim = traj.states[0].len();
    let h = sim
        .observation
        .as_ref()
        .unwrap_or(&ObservationSpec::Identity)
        .build(state_dim, sim.truth.grid())?;
    let obs = observe(&traj, h.as_ref(), sim.noise_sd, seed, sim.keep_every, &sim.missing)?;

    let files = [
        ("trajectory.csv", io::trajectory_csv(&traj)),
        ("observations.csv", io::observations_csv(&obs)),
    ];
    let manifest = Manifest::new("simulate", seed, overridden, &ctx.config_echo);
    finish(ctx, &files, manifest)
}

// ---------------------------------------------------------------------------
// fit

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FitMethod {
    Bayes,
    Dmd,
    Tdmd,
    Sindy,
}

impl FitMethod {
    pub fn parse(s: &str) -> Result<Self> {
        Ok(match s {
            "bayes" => FitMethod::Bayes,
            "dmd" => FitMethod::Dmd,
            "tdmd" => FitMethod::Tdmd,
            "sindy" => FitMethod::Sindy,
            other => {
                return Err(Error::InvalidArgument(format!(
                    "unknown fit method '{other}' (expected bayes, dmd, tdmd or sindy)"
                )))
            }
        })
    }

    fn label(self) -> &'static str {
        match self {
            FitMethod::Bayes => "bayes",
            FitMethod::Dmd => "dmd",
            FitMethod::Tdmd => "tdmd",
            FitMethod::Sindy => "sindy",
        }
    }
}

pub fn cmd_fit(cfg: &Config, ctx: &RunContext, method: FitMethod) -> Result<Vec<PathBuf>> {
    let fit = cfg.fit()?;
    let obs = io::read_observations(&ctx.resolve(&fit.observations))?;
    let (seed, overridden) = ctx.effective_seed(fit.seed);

    let files: Vec<(&str, String)> = match method {
        FitMethod::Bayes => bayes_outputs(cfg, fit, &obs, seed)?,
        FitMethod::Dmd | FitMethod::Tdmd => {
            let a = match method {
                FitMethod::Dmd => dmd_fit(&obs)?,
                _ => tdmd_fit(&obs)?,
            };
            let dt = infer_dt(&obs)?;
            let d = a.nrows();
            let header: Vec<String> = (1..=d).map(|j| format!("a{j}")).collect();
            let header_refs: Vec<&str> = header.iter().map(String::as_str).collect();
            let op_rows: Vec<Vec<String>> = (0..d)
                .map(|i| (0..d).map(|j| io::fmt_f64(a[(i, j)])).collect())
                .collect();
            let eigs = eig_analysis(&a);
            let rates = continuous_rates(&eigs, dt);
            let eig_rows: Vec<Vec<String>> = eigs
                .iter()
                .zip(&rates)
                .map(|(e, r)| {
                    vec![
                        io::fmt_f64(e.re),
                        io::fmt_f64(e.im),
                        io::fmt_f64(r.re),
                        io::fmt_f64(r.im),
                    ]
                })
                .collect();
            vec![
                ("operator.csv", io::table_csv(&header_refs, &op_rows)),
                (
                    "eigenvalues.csv",
                    io::table_csv(&["eig_re", "eig_im", "rate_re", "rate_im"], &eig_rows),
                ),
            ]
        }
        FitMethod::Sindy => {
            let library = DictionaryLibrary::total_degree(obs.obs_dim, fit.sindy_max_degree);
            let sf = sindy_fit(&obs, &library, fit.sindy_threshold, fit.sindy_max_iterations)?;
            let mut header = vec!["term".to_string()];
            header.extend((1..=obs.obs_dim).map(|j| format!("dx{j}")));
            let header_refs: Vec<&str> = header.iter().map(String::as_str).collect();
            let rows: Vec<Vec<String>> = library
                .labels()
                .iter()
                .enumerate()
                .map(|(i, label)| {
                    let mut row = vec![label.clone()];
                    row.extend((0..obs.obs_dim).map(|j| io::fmt_f64(sf.coefficients[(i, j)])));
                    row
                })
                .collect();
            vec![("coefficients.csv", io::table_csv(&header_refs, &rows))]
        }
    };

    let mut manifest = Manifest::new("fit", seed, overridden, &ctx.config_echo);
    manifest.method = Some(method.label().into());
    finish(ctx, &files, manifest)
}

fn bayes_outputs(
    cfg: &Config,
    fit: &FitSection,
    obs: &ObservationSet,
    seed: u64,
) -> Result<Vec<(&'static str, String)>> {
    let model = cfg.model()?.build()?;
    let prior = cfg.build_prior(&model)?;
    let likelihood = fit
        .likelihood
        .as_ref()
        .map(|l| l.build())
        .unwrap_or(LikelihoodKind::Kalman);
    let init = fit
        .init
        .as_ref()
        .map(|i| i.build())
        .transpose()?
        .unwrap_or(InitBelief::FromFirstObservation);
    let theta0 = fit.theta0.as_ref().ok_or_else(|| {
        Error::InvalidArgument("a bayes fit needs theta0 in the [fit] section".into())
    })?;
    if theta0.len() != model.param_len() {
        return Err(Error::DimensionMismatch(format!(
            "theta0 has {} entries but the model has {} parameters",
            theta0.len(),
            model.param_len()
        )));
    }
    let settings = fit.filter_settings();
    let post = Posterior::new(model.clone(), obs.clone(), prior, likelihood, init, settings)?;

    let theta0 = DVector::from_row_slice(theta0);
    let mut map_opts = MapOptions {
        method: fit.map_method()?,
        ..MapOptions::default()
    };
    if let Some(me) = fit.max_evals {
        map_opts.max_evals = me;
    }
    let map = find_map(&post, &theta0, &map_opts)?;

    let mut dram = DramConfig::new(fit.n_samples, seed);
    if let Some(v) = fit.n0 {
        dram.n0 = v;
    }
    if let Some(v) = fit.gamma {
        dram.gamma = v;
    }
    if let Some(v) = fit.adapt_every {
        dram.adapt_every = v;
    }
    if let Some(v) = fit.sd_scale {
        dram.sd_scale = Some(v);
    }
    if let Some(v) = fit.dr_enabled {
        dram.dr_enabled = v;
    }
    let chain = dram_sample(&post, &map.theta, &map.proposal_cov, &dram)?;

    let stats = acceptance_stats(&chain);
    let ess = ess_per_coordinate(&chain, fit.burn_in);
    let est = theta_estimators(&chain, fit.burn_in);

    let map_json = serde_json::json!({
        "theta": map.theta.as_slice(),
        "log_post": map.log_post,
        "converged": map.converged,
        "n_evals": map.n_evals,
        "hessian_fallback": map.hessian_fallback,
    });
    let diag_json = serde_json::json!({
        "n_iterations": stats.n_iterations,
        "accepted_total": stats.accepted_total,
        "accepted_stage1": stats.accepted_stage1,
        "accepted_stage2": stats.accepted_stage2,
        "stage2_attempts": stats.stage2_attempts,
        "acceptance_rate": stats.rate,
        "burn_in": fit.burn_in,
        "ess": ess,
        "posterior_mean": est.mean.as_slice(),
        "posterior_median": est.median.as_slice(),
        "chain_map": est.map.as_slice(),
    });

    Ok(vec![
        ("chain.csv", io::chain_csv(&chain)),
        ("map.json", format!("{:#}\n", map_json)),
        ("diagnostics.json", format!("{:#}\n", diag_json)),
    ])
}

fn infer_dt(obs: &ObservationSet) -> Result<f64> {
    if obs.times.len() < 2 {
        return Err(Error::InvalidArgument(
            "need at least two observation times to infer the sampling interval".into(),
        ));
    }
    Ok(obs.times[1] - obs.times[0])
}

// ---------------------------------------------------------------------------
// predict

pub fn cmd_predict(cfg: &Config, ctx: &RunContext) -> Result<Vec<PathBuf>> {
    let pred = cfg.predict()?;
    let model = cfg.model()?.build()?;
    let chain = io::read_chain(&ctx.resolve(&pred.chain))?;
    let obs = io::read_observations(&ctx.resolve(&pred.observations))?;
    let (seed, overridden) = ctx.effective_seed(pred.seed);

    if pred.draws == 0 {
        return Err(Error::InvalidArgument("draws must be >= 1".into()));
    }
    if pred.draws > chain.len() {
        return Err(Error::InvalidArgument(format!(
            "requested {} draws but the chain has only {} samples",
            pred.draws,
            chain.len()
        )));
    }
    if chain.dim() != model.param_len() {
        return Err(Error::DimensionMismatch(format!(
            "chain has {} parameters but the model expects {}",
            chain.dim(),
            model.param_len()
        )));
    }
    if !(pred.band[0] < pred.band[1] && pred.band[0] > 0.0 && pred.band[1] < 1.0) {
        return Err(Error::InvalidArgument(
            "band quantiles must satisfy 0 < lo < hi < 1".into(),
        ));
    }

    // Rollouts either continue from the last observation, or start from an
    // explicitly supplied state at time zero.
    let (x0, t0) = match &pred.x0 {
        Some(v) => (DVector::from_row_slice(v), 0.0),
        None => {
            if obs.obs_dim != model.state_dim() {
                return Err(Error::InvalidArgument(
                    "observations are not full-state; supply x0 in [predict] explicitly".into(),
                ));
            }
            let (ix, y) = obs
                .times
                .iter()
                .zip(&obs.values)
                .enumerate()
                .rev()
                .find_map(|(i, (_, v))| v.as_ref().map(|y| (i, y)))
                .ok_or_else(|| {
                    Error::InvalidArgument("observation file has no present rows".into())
                })?;
            (y.clone(), obs.times[ix])
        }
    };

    let draws = thin_draws(chain.post_burn(pred.burn_in), pred.draws);
    let mut options = RolloutOptions::new(pred.n_steps, seed);
    options.with_process_noise = pred.with_process_noise;
    let ensemble = ensemble_rollout(&model, &draws, &x0, t0, &options)?;

    // long-format ensemble: draw,t,x1..xd,valid
    let d = ensemble.state_dim;
    let mut header = vec!["draw".to_string(), "t".to_string()];
    header.extend((1..=d).map(|j| format!("x{j}")));
    header.push("valid".into());
    let header_refs: Vec<&str> = header.iter().map(String::as_str).collect();
    let mut rows = Vec::new();
    for (k, draw) in ensemble.draws.iter().enumerate() {
        for (t, x) in ensemble.times.iter().zip(&draw.states) {
            let mut row = vec![k.to_string(), io::fmt_f64(*t)];
            row.extend(x.iter().map(|v| io::fmt_f64(*v)));
            row.push(u8::from(draw.valid).to_string());
            rows.push(row);
        }
    }
    let ensemble_csv = io::table_csv(&header_refs, &rows);

    // reductions: mean, band (median + quantiles), mode when enough draws
    let mean = reduce_ensemble(&ensemble, Reduction::Mean)?;
    let band = reduce_ensemble(
        &ensemble,
        Reduction::QuantileBand {
            lo: pred.band[0],
            hi: pred.band[1],
        },
    )?;
    let mode = if ensemble.n_valid() >= 30 {
        Some(reduce_ensemble(&ensemble, Reduction::Mode)?)
    } else {
        None
    };

    let mut rheader = vec!["t".to_string(), "statistic".to_string()];
    rheader.extend((1..=d).map(|j| format!("x{j}")));
    let rheader_refs: Vec<&str> = rheader.iter().map(String::as_str).collect();
    let mut rrows = Vec::new();
    let mut push_series = |name: &str, times: &[f64], series: &Vec<DVector<f64>>| {
        for (t, x) in times.iter().zip(series) {
            let mut row = vec![io::fmt_f64(*t), name.to_string()];
            row.extend(x.iter().map(|v| io::fmt_f64(*v)));
            rrows.push(row);
        }
    };
    push_series("mean", &mean.times, &mean.center);
    push_series("median", &band.times, &band.center);
    push_series("lower", &band.times, band.lower.as_ref().unwrap());
    push_series("upper", &band.times, band.upper.as_ref().unwrap());
    if let Some(m) = &mode {
        push_series("mode", &m.times, &m.center);
    }
    let reduced_csv = io::table_csv(&rheader_refs, &rrows);

    let files = [
        ("ensemble.csv", ensemble_csv),
        ("reduced.csv", reduced_csv),
    ];
    let manifest = Manifest::new("predict", seed, overridden, &ctx.config_echo);
    finish(ctx, &files, manifest)
}

// ---------------------------------------------------------------------------
// suite

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SuiteKind {
    Landscape,
    Sweep,
    Flops,
    Scaling,
}

impl SuiteKind {
    pub fn parse(s: &str) -> Result<Self> {
        Ok(match s {
            "landscape" => SuiteKind::Landscape,
            "sweep" => SuiteKind::Sweep,
            "flops" => SuiteKind::Flops,
            "scaling" => SuiteKind::Scaling,
            other => {
                return Err(Error::InvalidArgument(format!(
                    "unknown suite '{other}' (expected landscape, sweep, flops or scaling)"
                )))
            }
        })
    }

    fn label(self) -> &'static str {
        match self {
            SuiteKind::Landscape => "landscape",
            SuiteKind::Sweep => "sweep",
            SuiteKind::Flops => "flops",
            SuiteKind::Scaling => "scaling",
        }
    }
}

pub fn cmd_suite(cfg: &Config, ctx: &RunContext, kind: SuiteKind) -> Result<Vec<PathBuf>> {
    let suite = cfg.suite()?;
    let (files, seed, overridden): (Vec<(&str, String)>, u64, bool) = match kind {
        SuiteKind::Landscape => {
            let ls = suite
                .landscape
                .as_ref()
                .ok_or_else(|| Error::InvalidArgument("config has no [suite.landscape]".into()))?;
            let (seed, overridden) = ctx.effective_seed(ls.seed);
            let (data, x0) = pendulum_window_data(ls.n, ls.dt, ls.noise_sd, seed, ls.x0)?;
            let lcfg = LandscapeConfig {
                x0,
                x0_time: 0.0,
                proc_var: ls.proc_var,
                meas_var: ls.meas_var,
            };
            let t1 = ls.theta1.values();
            let t2 = ls.theta2.values();
            let mut files = Vec::new();
            for (objective, name) in [
                (LandscapeObjective::NoProcessNoise, "landscape_no_process_noise.csv"),
                (
                    LandscapeObjective::NoMeasurementNoise,
                    "landscape_no_measurement_noise.csv",
                ),
                (LandscapeObjective::LogPosterior, "landscape_log_posterior.csv"),
            ] {
                let grid = objective_landscape(objective, &t1, &t2, &data, &lcfg)?;
                let mut rows = Vec::with_capacity(t1.len() * t2.len());
                for (i, a) in grid.theta1.iter().enumerate() {
                    for (j, b) in grid.theta2.iter().enumerate() {
                        rows.push(vec![
                            io::fmt_f64(*a),
                            io::fmt_f64(*b),
                            io::fmt_f64(grid.values[(i, j)]),
                        ]);
                    }
                }
                files.push((name, io::table_csv(&["theta1", "theta2", "value"], &rows)));
            }
            (files, seed, overridden)
        }
        SuiteKind::Sweep => {
            let sw = suite
                .sweep
                .as_ref()
                .ok_or_else(|| Error::InvalidArgument("config has no [suite.sweep]".into()))?;
            let (seed, overridden) = ctx.effective_seed(sw.base_seed);
            let algorithms = sw
                .algorithms
                .iter()
                .map(|s| parse_sweep_algorithm(s))
                .collect::<Result<Vec<_>>>()?;
            let truth = match &sw.truth {
                None => SweepTruth::LinearPendulum {
                    g: 9.81,
                    length: 1.0,
                    x0: [0.2, 0.0],
                },
                Some(t) => sweep_truth(t)?,
            };
            let spec = SweepSpec {
                truth,
                noise_levels: sw.noise_levels.clone(),
                n_values: sw.n_values.clone(),
                realizations: if ctx.full {
                    sw.full_realizations
                } else {
                    sw.realizations
                },
                algorithms,
                base_seed: seed,
                horizon: sw.horizon,
                drop_worst: sw.drop_worst,
                chain_len: sw.chain_len,
                burn_in: sw.burn_in,
            };
            let table = mse_ratio_sweep(&spec)?;
            let rows: Vec<Vec<String>> = table
                .cells
                .iter()
                .map(|c| {
                    vec![
                        io::fmt_f64(c.noise_sd),
                        c.n_obs.to_string(),
                        c.algorithm.label().to_string(),
                        io::fmt_opt_f64(c.mean_mse),
                        c.n_used.to_string(),
                        c.mses.iter().filter(|m| m.is_none()).count().to_string(),
                        io::fmt_opt_f64(c.log10_ratio_vs_bayes),
                    ]
                })
                .collect();
            let csv = io::table_csv(
                &[
                    "noise_sd",
                    "n",
                    "algorithm",
                    "mean_mse",
                    "n_used",
                    "n_failed",
                    "log10_ratio_vs_bayes",
                ],
                &rows,
            );
            (vec![("sweep.csv", csv)], seed, overridden)
        }
        SuiteKind::Flops => {
            let fl = suite
                .flops
                .as_ref()
                .ok_or_else(|| Error::InvalidArgument("config has no [suite.flops]".into()))?;
            let mut rows = Vec::new();
            for spec in &fl.rows {
                let mut dims = FlopDims::new(spec.d, spec.m, spec.n);
                dims.p = spec.p;
                dims.f_dyn = spec.f_dyn;
                dims.h_obs = spec.h_obs;
                if !dims.validate() {
                    return Err(Error::InvalidArgument(format!(
                        "flop dimensions d={} m={} n={} are not positive",
                        spec.d, spec.m, spec.n
                    )));
                }
                for alg in FlopAlgorithm::ALL {
                    let count = flop_model(alg, &dims);
                    rows.push(vec![
                        alg.label().to_string(),
                        spec.d.to_string(),
                        spec.m.to_string(),
                        spec.n.to_string(),
                        spec.p.to_string(),
                        spec.f_dyn.to_string(),
                        spec.h_obs.to_string(),
                        count.numer().to_string(),
                        count.denom().to_string(),
                    ]);
                }
            }
            let csv = io::table_csv(
                &["algorithm", "d", "m", "n", "p", "f_dyn", "h_obs", "flops_num", "flops_den"],
                &rows,
            );
            // deterministic suite: no randomness involved
            let (seed, overridden) = ctx.effective_seed(0);
            (vec![("flops.csv", csv)], seed, overridden)
        }
        SuiteKind::Scaling => {
            let sc = suite
                .scaling
                .as_ref()
                .ok_or_else(|| Error::InvalidArgument("config has no [suite.scaling]".into()))?;
            let filter = match sc.filter.as_str() {
                "kf" => ScalingFilter::Kf,
                "ukf" => ScalingFilter::Ukf,
                other => {
                    return Err(Error::InvalidArgument(format!(
                        "unknown filter '{other}' (expected kf or ukf)"
                    )))
                }
            };
            let (seed, overridden) = ctx.effective_seed(sc.seed);
            let report = scaling_probe(filter, &sc.d_list, &sc.n_list, sc.trials, seed)?;
            let rows: Vec<Vec<String>> = report
                .points
                .iter()
                .map(|p| {
                    let fit = report.fits.iter().find(|f| f.d == p.d);
                    vec![
                        p.d.to_string(),
                        p.n.to_string(),
                        io::fmt_f64(p.median_seconds),
                        io::fmt_opt_f64(fit.map(|f| f.slope)),
                        io::fmt_opt_f64(fit.map(|f| f.intercept)),
                        io::fmt_opt_f64(fit.map(|f| f.r_squared)),
                    ]
                })
                .collect();
            let csv = io::table_csv(
                &["d", "n", "median_seconds", "slope", "intercept", "r_squared"],
                &rows,
            );
            (vec![("scaling.csv", csv)], seed, overridden)
        }
    };

    let mut manifest = Manifest::new("suite", seed, overridden, &ctx.config_echo);
    manifest.suite = Some(kind.label().into());
    manifest.full = ctx.full;
    finish(ctx, &files, manifest)
}

fn parse_sweep_algorithm(s: &str) -> Result<SweepAlgorithm> {
    Ok(match s {
        "bayes_kf" => SweepAlgorithm::BayesKf,
        "bayes_ukf" => SweepAlgorithm::BayesUkf,
        "dmd" => SweepAlgorithm::Dmd,
        "tdmd" => SweepAlgorithm::Tdmd,
        "sindy" => SweepAlgorithm::Sindy,
        other => {
            return Err(Error::InvalidArgument(format!(
                "unknown sweep algorithm '{other}'"
            )))
        }
    })
}

fn sweep_truth(t: &crate::config::TruthSpec) -> Result<SweepTruth> {
    match t {
        crate::config::TruthSpec::LinearPendulum { g, length, x0 } => {
            Ok(SweepTruth::LinearPendulum {
                g: *g,
                length: *length,
                x0: *x0,
            })
        }
        _ => Err(Error::InvalidArgument(
            "the sweep suite supports only the linear pendulum truth".into(),
        )),
    }
}
