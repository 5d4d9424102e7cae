//! End-to-end tests of the command layer, driving the same `run` entry the
//! binary uses.

use clap::Parser;
use gaussid_cli::{run, Cli};
use gaussid_core::Error;
use std::path::Path;

fn run_args(args: &[&str]) -> gaussid_core::Result<Vec<std::path::PathBuf>> {
    let mut argv = vec!["gaussid"];
    argv.extend_from_slice(args);
    let cli = Cli::parse_from(argv);
    run(&cli)
}

fn write_config(dir: &Path, text: &str) -> String {
    let p = dir.join("config.toml");
    std::fs::write(&p, text).unwrap();
    p.to_string_lossy().into_owned()
}

const PENDULUM_PIPELINE: &str = r#"
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

[model]
dt = 0.1
dynamics = { kind = "linear", dim = 2 }
proc_cov = { kind = "isotropic" }
meas_cov = { kind = "isotropic" }

[fit]
observations = "observations.csv"
theta0 = [1.0, 0.1, -0.9, 1.0, 0.01, 0.01]
n_samples = 800
seed = 11

[predict]
chain = "chain.csv"
observations = "observations.csv"
n_steps = 20
draws = 50
seed = 5
burn_in = 0.25
"#;

#[test]
fn simulate_writes_the_requested_rows_and_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), PENDULUM_PIPELINE);
    let out_a = dir.path().join("a");
    let out_b = dir.path().join("b");
    run_args(&["simulate", "--config", &cfg, "--out", out_a.to_str().unwrap()]).unwrap();
    run_args(&["simulate", "--config", &cfg, "--out", out_b.to_str().unwrap()]).unwrap();

    let obs = std::fs::read_to_string(out_a.join("observations.csv")).unwrap();
    assert_eq!(obs.lines().count(), 41); // header + 40 rows
    for f in ["trajectory.csv", "observations.csv", "manifest_simulate.json"] {
        let a = std::fs::read(out_a.join(f)).unwrap();
        let b = std::fs::read(out_b.join(f)).unwrap();
        assert_eq!(a, b, "{f} differs between identical runs");
    }
}

#[test]
fn simulate_with_zero_rows_fails_before_writing_anything() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(
        dir.path(),
        r#"
schema_version = 1

[simulate]
dt = 0.1
n = 0
noise_sd = 0.1
seed = 7
truth = { kind = "van_der_pol", mu = 1.0, x0 = [0.5, 0.0] }
"#,
    );
    let out = dir.path().join("out");
    assert!(run_args(&["simulate", "--config", &cfg, "--out", out.to_str().unwrap()]).is_err());
    assert!(!out.exists(), "failed run must not create output files");
}

#[test]
fn overwrite_needs_force() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), PENDULUM_PIPELINE);
    let out = dir.path().join("out");
    run_args(&["simulate", "--config", &cfg, "--out", out.to_str().unwrap()]).unwrap();
    let err = run_args(&["simulate", "--config", &cfg, "--out", out.to_str().unwrap()])
        .unwrap_err();
    assert!(
        err.to_string().contains("trajectory.csv") && err.to_string().contains("--force"),
        "unexpected message: {err}"
    );
    run_args(&[
        "simulate",
        "--config",
        &cfg,
        "--out",
        out.to_str().unwrap(),
        "--force",
    ])
    .unwrap();
}

#[test]
fn seed_override_changes_the_data_and_the_manifest() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), PENDULUM_PIPELINE);
    let out_a = dir.path().join("a");
    let out_b = dir.path().join("b");
    run_args(&["simulate", "--config", &cfg, "--out", out_a.to_str().unwrap()]).unwrap();
    run_args(&[
        "simulate",
        "--config",
        &cfg,
        "--out",
        out_b.to_str().unwrap(),
        "--seed-override",
        "1234",
    ])
    .unwrap();
    let obs_a = std::fs::read_to_string(out_a.join("observations.csv")).unwrap();
    let obs_b = std::fs::read_to_string(out_b.join("observations.csv")).unwrap();
    assert_ne!(obs_a, obs_b);

    let manifest: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(out_b.join("manifest_simulate.json")).unwrap())
            .unwrap();
    assert_eq!(manifest["effective_seed"], 1234);
    assert_eq!(manifest["seed_overridden"], true);
    // the trajectory is seed-independent, only the noise changes
    let tr_a = std::fs::read_to_string(out_a.join("trajectory.csv")).unwrap();
    let tr_b = std::fs::read_to_string(out_b.join("trajectory.csv")).unwrap();
    assert_eq!(tr_a, tr_b);
}

#[test]
fn bayes_fit_writes_a_chain_of_the_configured_length() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), PENDULUM_PIPELINE);
    let out = dir.path().join("out");
    run_args(&["simulate", "--config", &cfg, "--out", out.to_str().unwrap()]).unwrap();
    run_args(&[
        "fit",
        "--method",
        "bayes",
        "--config",
        &cfg,
        "--out",
        out.to_str().unwrap(),
    ])
    .unwrap();

    let chain = gaussid_cli::io::read_chain(&out.join("chain.csv")).unwrap();
    assert_eq!(chain.len(), 801); // start point + configured iterations

    let diag: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(out.join("diagnostics.json")).unwrap())
            .unwrap();
    let rate = diag["acceptance_rate"].as_f64().unwrap();
    assert!(rate > 0.0 && rate < 1.0, "acceptance rate {rate}");

    // predict off the chain written above
    run_args(&["predict", "--config", &cfg, "--out", out.to_str().unwrap()]).unwrap();
    let reduced = std::fs::read_to_string(out.join("reduced.csv")).unwrap();
    for stat in ["mean", "median", "lower", "upper", "mode"] {
        assert!(
            reduced.lines().any(|l| l.split(',').nth(1) == Some(stat)),
            "reduced.csv is missing the {stat} rows"
        );
    }
    // 21 time points per statistic, 5 statistics, 1 header
    assert_eq!(reduced.lines().count(), 1 + 5 * 21);
}

#[test]
fn fit_errors_are_reported_before_any_output() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), PENDULUM_PIPELINE);
    let out = dir.path().join("out");
    run_args(&["simulate", "--config", &cfg, "--out", out.to_str().unwrap()]).unwrap();

    // single-observation file: no snapshot pair to regress on
    std::fs::write(out.join("observations.csv"), "t,y1,y2,present\n0,0.1,0.2,1\n").unwrap();
    let err = run_args(&[
        "fit",
        "--method",
        "dmd",
        "--config",
        &cfg,
        "--out",
        out.to_str().unwrap(),
    ])
    .unwrap_err();
    assert!(!out.join("operator.csv").exists(), "no output on error: {err}");
}

#[test]
fn sindy_demands_dense_data() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), PENDULUM_PIPELINE);
    let out = dir.path().join("out");
    run_args(&["simulate", "--config", &cfg, "--out", out.to_str().unwrap()]).unwrap();

    // punch a hole into the observation file
    let obs_path = out.join("observations.csv");
    let text = std::fs::read_to_string(&obs_path).unwrap();
    let mut lines: Vec<String> = text.lines().map(String::from).collect();
    let t = lines[5].split(',').next().unwrap().to_string();
    lines[5] = format!("{t},,,0");
    std::fs::write(&obs_path, lines.join("\n") + "\n").unwrap();

    let err = run_args(&[
        "fit",
        "--method",
        "sindy",
        "--config",
        &cfg,
        "--out",
        out.to_str().unwrap(),
    ])
    .unwrap_err();
    assert!(
        err.to_string().contains("dense data required"),
        "unexpected message: {err}"
    );
}

#[test]
fn predict_rejects_more_draws_than_the_chain_has() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(
        dir.path(),
        &PENDULUM_PIPELINE.replace("draws = 50", "draws = 5000"),
    );
    let out = dir.path().join("out");
    run_args(&["simulate", "--config", &cfg, "--out", out.to_str().unwrap()]).unwrap();
    run_args(&[
        "fit",
        "--method",
        "bayes",
        "--config",
        &cfg,
        "--out",
        out.to_str().unwrap(),
    ])
    .unwrap();
    let err = run_args(&["predict", "--config", &cfg, "--out", out.to_str().unwrap()])
        .unwrap_err();
    assert!(err.to_string().contains("chain has only"), "{err}");
}

#[test]
fn predict_with_a_corrupt_chain_names_the_row() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), PENDULUM_PIPELINE);
    let out = dir.path().join("out");
    run_args(&["simulate", "--config", &cfg, "--out", out.to_str().unwrap()]).unwrap();
    std::fs::write(
        out.join("chain.csv"),
        "iter,theta_1,theta_2,theta_3,theta_4,theta_5,theta_6,log_post,accepted,stage\n\
         0,1,0,0,1,0.01,0.01,-3.0,1,0\n\
         1,1,0,broken,1,0.01,0.01,-3.0,1,1\n",
    )
    .unwrap();
    match run_args(&["predict", "--config", &cfg, "--out", out.to_str().unwrap()]) {
        Err(Error::Parse { line, .. }) => assert_eq!(line, 3),
        other => panic!("expected a parse error with the row number, got {other:?}"),
    }
}

#[test]
fn predict_alternate_start_state_begins_at_time_zero() {
    let dir = tempfile::tempdir().unwrap();
    let with_x0 = PENDULUM_PIPELINE.replace(
        "burn_in = 0.25",
        "burn_in = 0.25\nx0 = [1.0, 0.0]\nwith_process_noise = false",
    );
    let cfg = write_config(dir.path(), &with_x0);
    let out = dir.path().join("out");
    run_args(&["simulate", "--config", &cfg, "--out", out.to_str().unwrap()]).unwrap();
    run_args(&[
        "fit",
        "--method",
        "bayes",
        "--config",
        &cfg,
        "--out",
        out.to_str().unwrap(),
    ])
    .unwrap();
    run_args(&["predict", "--config", &cfg, "--out", out.to_str().unwrap()]).unwrap();
    let ens = std::fs::read_to_string(out.join("ensemble.csv")).unwrap();
    let first_row = ens.lines().nth(1).unwrap();
    let cells: Vec<&str> = first_row.split(',').collect();
    assert_eq!(cells[1], "0"); // t0
    assert_eq!(cells[2], "1"); // x1 = supplied state
    assert_eq!(cells[3], "0");
}

#[test]
fn landscape_suite_writes_three_full_grids() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(
        dir.path(),
        r#"
schema_version = 1

[suite.landscape]
theta1 = { min = 0.6, max = 1.4, count = 7 }
theta2 = { min = -12.0, max = -8.0, count = 6 }
n = 20
dt = 0.1
noise_sd = 0.1
seed = 3
x0 = [0.2, 0.0]
proc_var = 1e-6
meas_var = 0.01
"#,
    );
    let out = dir.path().join("out");
    run_args(&[
        "suite",
        "landscape",
        "--config",
        &cfg,
        "--out",
        out.to_str().unwrap(),
    ])
    .unwrap();
    for f in [
        "landscape_no_process_noise.csv",
        "landscape_no_measurement_noise.csv",
        "landscape_log_posterior.csv",
    ] {
        let text = std::fs::read_to_string(out.join(f)).unwrap();
        assert_eq!(text.lines().count(), 1 + 7 * 6, "{f} has the wrong shape");
    }
}

#[test]
fn sweep_suite_respects_the_realization_count() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(
        dir.path(),
        r#"
schema_version = 1

[suite.sweep]
noise_levels = [0.1]
n_values = [8]
realizations = 2
algorithms = ["dmd", "tdmd"]
base_seed = 42
horizon = 4.0
drop_worst = false
chain_len = 400
"#,
    );
    let out = dir.path().join("out");
    // dmd/tdmd only: no Bayes reference, so ratios stay empty but MSEs exist
    run_args(&[
        "suite",
        "sweep",
        "--config",
        &cfg,
        "--out",
        out.to_str().unwrap(),
    ])
    .unwrap();
    let text = std::fs::read_to_string(out.join("sweep.csv")).unwrap();
    assert_eq!(text.lines().count(), 3); // header + one row per algorithm
    for line in text.lines().skip(1) {
        let cells: Vec<&str> = line.split(',').collect();
        assert_eq!(cells[4], "2", "n_used should equal realizations: {line}");
    }
}

#[test]
fn unknown_config_keys_fail_with_a_parse_error() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(
        dir.path(),
        "schema_version = 1\n\n[simulate]\ndt = 0.1\nn = 4\nnoise_sd = 0.0\nseed = 1\nnot_a_key = true\ntruth = { kind = \"van_der_pol\", mu = 1.0, x0 = [0.5, 0.0] }\n",
    );
    let out = dir.path().join("out");
    match run_args(&["simulate", "--config", &cfg, "--out", out.to_str().unwrap()]) {
        Err(Error::Parse { line, msg }) => {
            assert!(line > 0);
            assert!(msg.contains("not_a_key"), "{msg}");
        }
        other => panic!("expected a parse error, got {other:?}"),
    }
}
