//! File formats: CSV readers/writers and the run manifest.
//!
//! Everything is plain CSV with a header row. Floats are written with `{}`
//! (shortest round-trip representation), so a file read back reproduces the
//! exact values that were written. Missing entries are empty fields.

use std::fmt::Write as _;
use std::path::Path;

use gaussid_core::error::{Error, Result};
use gaussid_core::mcmc::Chain;
use gaussid_core::models::{ObservationSet, Trajectory};
use nalgebra::DVector;

pub fn write_file(path: &Path, contents: &str) -> Result<()> {
    if let Some(parent) = path.parent() {
        std::fs::create_dir_all(parent)?;
    }
    std::fs::write(path, contents)?;
    Ok(())
}

fn parse_field<T: std::str::FromStr>(field: &str, line: usize, what: &str) -> Result<T> {
    field.trim().parse().map_err(|_| Error::Parse {
        line,
        msg: format!("could not parse {what} from '{}'", field.trim()),
    })
}

/// Split a CSV line on commas. Fields never contain commas or quotes in any
/// format this tool writes, so no quoting rules are needed.
fn fields(line: &str) -> Vec<&str> {
    line.split(',').collect()
}

// ---------------------------------------------------------------------------
// trajectory.csv: t,x1,...,xd

pub fn trajectory_csv(traj: &Trajectory) -> String {
    let d = traj.states[0].len();
    let mut out = String::from("t");
    for j in 1..=d {
        let _ = write!(out, ",x{j}");
    }
    out.push('\n');
    for (t, x) in traj.times.iter().zip(&traj.states) {
        let _ = write!(out, "{t}");
        for v in x.iter() {
            let _ = write!(out, ",{v}");
        }
        out.push('\n');
    }
    out
}

// ---------------------------------------------------------------------------
// observations.csv: t,y1,...,ym,present  (missing rows keep their time stamp
// and leave the value fields empty)

pub fn observations_csv(obs: &ObservationSet) -> String {
    let m = obs.obs_dim;
    let mut out = String::from("t");
    for j in 1..=m {
        let _ = write!(out, ",y{j}");
    }
    out.push_str(",present\n");
    for (t, row) in obs.times.iter().zip(&obs.values) {
        let _ = write!(out, "{t}");
        match row {
            Some(y) => {
                for v in y.iter() {
                    let _ = write!(out, ",{v}");
                }
                out.push_str(",1\n");
            }
            None => {
                for _ in 0..m {
                    out.push(',');
                }
                out.push_str(",0\n");
            }
        }
    }
    out
}

pub fn read_observations(path: &Path) -> Result<ObservationSet> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::Io(std::io::Error::new(e.kind(), format!("{}: {e}", path.display()))))?;
    let mut lines = text.lines().enumerate();
    let (_, header) = lines.next().ok_or(Error::Parse {
        line: 1,
        msg: "empty observation file".into(),
    })?;
    let cols = fields(header);
    if cols.len() < 3 || cols[0] != "t" || *cols.last().unwrap() != "present" {
        return Err(Error::Parse {
            line: 1,
            msg: "expected header t,y1,...,present".into(),
        });
    }
    let m = cols.len() - 2;
    let mut times = Vec::new();
    let mut values = Vec::new();
    for (ix, line) in lines {
        if line.trim().is_empty() {
            continue;
        }
        let lineno = ix + 1;
        let f = fields(line);
        if f.len() != m + 2 {
            return Err(Error::Parse {
                line: lineno,
                msg: format!("expected {} fields, found {}", m + 2, f.len()),
            });
        }
        times.push(parse_field::<f64>(f[0], lineno, "time")?);
        let present: u8 = parse_field(f[m + 1], lineno, "presence flag")?;
        if present == 1 {
            let mut y = Vec::with_capacity(m);
            for field in &f[1..=m] {
                y.push(parse_field::<f64>(field, lineno, "observation value")?);
            }
            values.push(Some(DVector::from_row_slice(&y)));
        } else {
            values.push(None);
        }
    }
    ObservationSet::new(times, values, m)
}

// ---------------------------------------------------------------------------
// chain.csv: iter,theta_1,...,theta_p,log_post,accepted,stage

pub fn chain_csv(chain: &Chain) -> String {
    let p = chain.dim();
    let mut out = String::from("iter");
    for j in 1..=p {
        let _ = write!(out, ",theta_{j}");
    }
    out.push_str(",log_post,accepted,stage\n");
    for i in 0..chain.len() {
        let _ = write!(out, "{i}");
        for v in chain.samples[i].iter() {
            let _ = write!(out, ",{v}");
        }
        let _ = writeln!(
            out,
            ",{},{},{}",
            chain.log_posts[i],
            u8::from(chain.accepted[i]),
            chain.stage[i]
        );
    }
    out
}

pub fn read_chain(path: &Path) -> Result<Chain> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::Io(std::io::Error::new(e.kind(), format!("{}: {e}", path.display()))))?;
    let mut lines = text.lines().enumerate();
    let (_, header) = lines.next().ok_or(Error::Parse {
        line: 1,
        msg: "empty chain file".into(),
    })?;
    let cols = fields(header);
    if cols.len() < 5 || cols[0] != "iter" || cols[cols.len() - 3] != "log_post" {
        return Err(Error::Parse {
            line: 1,
            msg: "expected header iter,theta_1,...,log_post,accepted,stage".into(),
        });
    }
    let p = cols.len() - 4;
    let mut samples = Vec::new();
    let mut log_posts = Vec::new();
    let mut accepted = Vec::new();
    let mut stage = Vec::new();
    for (ix, line) in lines {
        if line.trim().is_empty() {
            continue;
        }
        let lineno = ix + 1;
        let f = fields(line);
        if f.len() != p + 4 {
            return Err(Error::Parse {
                line: lineno,
                msg: format!("expected {} fields, found {}", p + 4, f.len()),
            });
        }
        let mut theta = Vec::with_capacity(p);
        for field in &f[1..=p] {
            theta.push(parse_field::<f64>(field, lineno, "parameter value")?);
        }
        samples.push(DVector::from_row_slice(&theta));
        log_posts.push(parse_field::<f64>(f[p + 1], lineno, "log posterior")?);
        let acc: u8 = parse_field(f[p + 2], lineno, "acceptance flag")?;
        accepted.push(acc == 1);
        stage.push(parse_field::<u8>(f[p + 3], lineno, "stage")?);
    }
    if samples.is_empty() {
        return Err(Error::Parse {
            line: 1,
            msg: "chain file has no samples".into(),
        });
    }
    Ok(Chain {
        samples,
        log_posts,
        accepted,
        stage,
    })
}

// ---------------------------------------------------------------------------
// generic numeric tables

/// Write a table with the given header and rows of display-formatted cells.
pub fn table_csv(header: &[&str], rows: &[Vec<String>]) -> String {
    let mut out = header.join(",");
    out.push('\n');
    for row in rows {
        out.push_str(&row.join(","));
        out.push('\n');
    }
    out
}

pub fn fmt_f64(v: f64) -> String {
    format!("{v}")
}

pub fn fmt_opt_f64(v: Option<f64>) -> String {
    v.map(fmt_f64).unwrap_or_default()
}

// ---------------------------------------------------------------------------
// manifest.json

/// Everything needed to reproduce a run bit for bit: the tool version, the
/// resolved command and seed, the outputs written, and a verbatim echo of
/// the config file. No timestamps or host information on purpose.
#[derive(Debug, serde::Serialize, serde::Deserialize)]
pub struct Manifest {
    pub tool: String,
    pub tool_version: String,
    pub schema_version: u32,
    pub rng: String,
    pub command: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub method: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub suite: Option<String>,
    pub effective_seed: u64,
    pub seed_overridden: bool,
    pub full: bool,
    pub outputs: Vec<String>,
    pub config_echo: String,
}

impl Manifest {
    pub fn new(command: &str, effective_seed: u64, seed_overridden: bool, config_echo: &str) -> Self {
        Manifest {
            tool: "gaussid".into(),
            tool_version: env!("CARGO_PKG_VERSION").into(),
            schema_version: crate::config::SCHEMA_VERSION,
            rng: "chacha8".into(),
            command: command.into(),
            method: None,
            suite: None,
            effective_seed,
            seed_overridden,
            full: false,
            outputs: Vec::new(),
            config_echo: config_echo.into(),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("manifest serialization cannot fail")
    }
}
