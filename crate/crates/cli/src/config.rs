//! Run configuration: strict JSON (unknown keys are errors, so typos fail
//! loudly instead of silently using a default), then validation into
//! ready-to-use values with the defaults filled in.

use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};

use gapdirac_core::geom::Vec2;
use gapdirac_core::potentials::PhysicalParams;
use serde::{Deserialize, Serialize};

use crate::tasks::KNOWN_TASKS;

#[derive(Debug)]
pub enum ConfigError {
    Io(std::io::Error),
    /// Syntax or shape problems; serde names the offending key.
    Parse(serde_json::Error),
    Validation(String),
}

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ConfigError::Io(e) => write!(f, "{e}"),
            ConfigError::Parse(e) => write!(f, "{e}"),
            ConfigError::Validation(msg) => write!(f, "{msg}"),
        }
    }
}

impl std::error::Error for ConfigError {}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct FileConfig {
    physical: FilePhysical,
    #[serde(default)]
    solver: FileSolver,
    /// Absent means the standard pipeline; an explicit empty list means
    /// "do nothing".
    tasks: Option<Vec<String>>,
    #[serde(default)]
    output: FileOutput,
    #[serde(default)]
    seed: u64,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct FilePhysical {
    gamma: f64,
    mass: f64,
    x0: [f64; 2],
}

#[derive(Deserialize, Default)]
#[serde(deny_unknown_fields)]
struct FileSolver {
    r_min: Option<f64>,
    r_max: Option<f64>,
    per_decade: Option<usize>,
    r_cut: Option<f64>,
    eps: Option<f64>,
    j_pairs: Option<usize>,
    dirac_r_max: Option<f64>,
    dirac_per_decade: Option<usize>,
    certified_target: Option<usize>,
    deltas: Option<Vec<f64>>,
    delta0: Option<f64>,
    bound_cases: Option<usize>,
}

#[derive(Deserialize, Default)]
#[serde(deny_unknown_fields)]
struct FileOutput {
    dir: Option<String>,
    format: Option<OutputFormat>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Deserialize, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    Csv,
    Json,
}

impl OutputFormat {
    pub fn extension(self) -> &'static str {
        match self {
            OutputFormat::Csv => "csv",
            OutputFormat::Json => "json",
        }
    }
}

/// Everything the solver tasks read, validated, with defaults applied.
/// Geometry defaults scale with |x0| so the minimal config stays sensible
/// away from unit separation.
#[derive(Clone, Debug, Serialize)]
pub struct SolverConfig {
    pub r_min: f64,
    pub r_max: f64,
    pub per_decade: usize,
    pub r_cut: f64,
    pub eps: f64,
    pub j_pairs: usize,
    pub dirac_r_max: f64,
    pub dirac_per_decade: usize,
    pub certified_target: usize,
    pub deltas: Vec<f64>,
    pub delta0: f64,
    pub bound_cases: usize,
}

#[derive(Clone, Debug)]
pub struct RunConfig {
    pub physical: PhysicalParams,
    pub solver: SolverConfig,
    pub tasks: Vec<String>,
    pub out_dir: PathBuf,
    pub format: OutputFormat,
    pub seed: u64,
}

/// The standard pipeline when the config names no tasks.
pub const DEFAULT_TASKS: [&str; 4] = ["count", "towers", "moments", "bounds"];

fn invalid(msg: String) -> ConfigError {
    ConfigError::Validation(msg)
}

pub fn validate_tasks(tasks: &[String]) -> Result<(), ConfigError> {
    for t in tasks {
        if !KNOWN_TASKS.contains(&t.as_str()) {
            return Err(invalid(format!(
                "unknown task \"{t}\"; known tasks: {}",
                KNOWN_TASKS.join(", ")
            )));
        }
    }
    Ok(())
}

pub fn load_config(path: &Path) -> Result<RunConfig, ConfigError> {
    let text = fs::read_to_string(path).map_err(ConfigError::Io)?;
    let file: FileConfig = serde_json::from_str(&text).map_err(ConfigError::Parse)?;

    let [x, y] = file.physical.x0;
    let physical = PhysicalParams::new(file.physical.gamma, file.physical.mass, Vec2::new(x, y))
        .map_err(|e| invalid(format!("physical: {e}")))?;
    let x0_norm = physical.x0.norm();

    let s = file.solver;
    let solver = SolverConfig {
        r_min: s.r_min.unwrap_or(0.01 * x0_norm),
        r_max: s.r_max.unwrap_or(1e8 * x0_norm),
        per_decade: s.per_decade.unwrap_or(32),
        r_cut: s.r_cut.unwrap_or(x0_norm),
        eps: s.eps.unwrap_or(0.5 * x0_norm),
        j_pairs: s.j_pairs.unwrap_or(4),
        dirac_r_max: s.dirac_r_max.unwrap_or(1e7 * x0_norm),
        dirac_per_decade: s.dirac_per_decade.unwrap_or(16),
        certified_target: s.certified_target.unwrap_or(5),
        deltas: s.deltas.unwrap_or_else(|| vec![0.5, 1.0, 2.0]),
        delta0: s.delta0.unwrap_or(0.5),
        bound_cases: s.bound_cases.unwrap_or(8),
    };

    if !(solver.r_min > 0.0 && solver.r_max > solver.r_min && solver.r_max.is_finite()) {
        return Err(invalid(format!(
            "solver: need 0 < r_min < r_max < inf, got [{}, {}]",
            solver.r_min, solver.r_max
        )));
    }
    if solver.per_decade == 0 || solver.dirac_per_decade == 0 {
        return Err(invalid("solver: per_decade must be positive".into()));
    }
    if !(solver.r_cut >= solver.r_min) {
        return Err(invalid(format!(
            "solver: r_cut {} must be at least r_min {}",
            solver.r_cut, solver.r_min
        )));
    }
    if !(solver.eps > 0.0) {
        return Err(invalid("solver: eps must be positive".into()));
    }
    if solver.j_pairs == 0 {
        return Err(invalid("solver: j_pairs must be positive".into()));
    }
    if !(solver.dirac_r_max > solver.r_min && solver.dirac_r_max.is_finite()) {
        return Err(invalid("solver: dirac_r_max must exceed r_min".into()));
    }
    if solver.certified_target == 0 {
        return Err(invalid("solver: certified_target must be positive".into()));
    }
    if !(solver.delta0 > 0.0 && solver.delta0 < 1.0) {
        return Err(invalid(format!(
            "solver: delta0 must lie in (0, 1), got {}",
            solver.delta0
        )));
    }
    if solver.deltas.is_empty() {
        return Err(invalid("solver: deltas must not be empty".into()));
    }
    for &d in &solver.deltas {
        if !(d >= solver.delta0 && d.is_finite()) {
            return Err(invalid(format!(
                "solver: every delta must be >= delta0 = {}, got {d}",
                solver.delta0
            )));
        }
    }

    let tasks: Vec<String> = match file.tasks {
        Some(list) => list,
        None => DEFAULT_TASKS.iter().map(|s| s.to_string()).collect(),
    };
    validate_tasks(&tasks)?;

    Ok(RunConfig {
        physical,
        solver,
        tasks,
        out_dir: PathBuf::from(file.output.dir.unwrap_or_else(|| "out".into())),
        format: file.output.format.unwrap_or(OutputFormat::Csv),
        seed: file.seed,
    })
}

/// Copy of the effective configuration for the manifest, in plain
/// serializable types.
#[derive(Serialize)]
pub struct ConfigEcho {
    pub gamma: f64,
    pub mass: f64,
    pub x0: [f64; 2],
    pub solver: SolverConfig,
    pub tasks: Vec<String>,
    pub out_dir: String,
    pub format: OutputFormat,
    pub seed: u64,
}

impl ConfigEcho {
    pub fn from_config(cfg: &RunConfig) -> Self {
        ConfigEcho {
            gamma: cfg.physical.gamma,
            mass: cfg.physical.mass,
            x0: [cfg.physical.x0.x, cfg.physical.x0.y],
            solver: cfg.solver.clone(),
            tasks: cfg.tasks.clone(),
            out_dir: cfg.out_dir.display().to_string(),
            format: cfg.format,
            seed: cfg.seed,
        }
    }
}
