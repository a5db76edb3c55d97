//! The pipeline: run the configured tasks in order, write each artifact,
//! isolate failures to the task that caused them, and describe everything
//! in a manifest that is written even when tasks fail.

use std::fs;
use std::time::Instant;

use gapdirac_core::bounds::{
    critical_coupling, herbst_check, moment_report, resolvent_bound_constant, sandwich_check,
    sharpness_probe, ChannelSpinor, GaussianMixture, GaussianTerm, RadialProfile,
};
use gapdirac_core::forms::certified_lower_bound;
use gapdirac_core::geom::Vec2;
use gapdirac_core::mathieu::{count_negative, mathieu_eigs};
use gapdirac_core::spectrum::{solve_dirac_block, solve_towers, RadialGrid, RejectReason};
use serde::Serialize;

use crate::config::{ConfigEcho, RunConfig};
use crate::emit::{num, opt, Table};

pub const KNOWN_TASKS: [&str; 6] = ["mathieu", "count", "towers", "moments", "bounds", "dirac"];

pub const MANIFEST_NAME: &str = "run_manifest.json";

#[derive(Serialize)]
pub struct RunManifest {
    pub version: &'static str,
    pub config: ConfigEcho,
    pub tasks: Vec<TaskRecord>,
    /// Every file this run created, the manifest included.
    pub files: Vec<String>,
}

#[derive(Serialize)]
pub struct TaskRecord {
    pub name: String,
    pub status: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
    /// Informational only; excluded from the determinism contract.
    pub wall_ms: u64,
    pub files: Vec<String>,
    /// Tolerances, grids, and filter settings the task actually used.
    pub applied: Vec<(String, String)>,
}

impl RunManifest {
    pub fn all_ok(&self) -> bool {
        self.tasks.iter().all(|t| t.status == "ok")
    }
}

type TaskResult = Result<(Vec<Table>, Vec<(String, String)>), String>;

pub fn run_pipeline(cfg: &RunConfig) -> std::io::Result<RunManifest> {
    fs::create_dir_all(&cfg.out_dir)?;
    let mut records = Vec::new();
    let mut files = Vec::new();
    for name in &cfg.tasks {
        let start = Instant::now();
        let outcome = run_task(name, cfg);
        let wall_ms = start.elapsed().as_millis() as u64;
        let record = match outcome {
            Ok((tables, applied)) => {
                let mut task_files = Vec::new();
                for table in &tables {
                    let file = table.file_name(cfg.format);
                    fs::write(cfg.out_dir.join(&file), table.render(cfg.format))?;
                    task_files.push(file);
                }
                files.extend(task_files.iter().cloned());
                TaskRecord {
                    name: name.clone(),
                    status: "ok",
                    error: None,
                    wall_ms,
                    files: task_files,
                    applied,
                }
            }
            Err(msg) => TaskRecord {
                name: name.clone(),
                status: "failed",
                error: Some(msg),
                wall_ms,
                files: Vec::new(),
                applied: Vec::new(),
            },
        };
        records.push(record);
    }

    files.push(MANIFEST_NAME.to_string());
    let manifest = RunManifest {
        version: env!("CARGO_PKG_VERSION"),
        config: ConfigEcho::from_config(cfg),
        tasks: records,
        files,
    };
    let mut text = serde_json::to_string_pretty(&manifest)?;
    text.push('\n');
    fs::write(cfg.out_dir.join(MANIFEST_NAME), text)?;
    Ok(manifest)
}

fn run_task(name: &str, cfg: &RunConfig) -> TaskResult {
    match name {
        "mathieu" => task_mathieu(cfg),
        "count" => task_count(cfg),
        "towers" => task_towers(cfg),
        "moments" => task_moments(cfg),
        "bounds" => task_bounds(cfg),
        "dirac" => task_dirac(cfg),
        other => Err(format!("unknown task \"{other}\"")),
    }
}

fn pair(key: &str, value: impl Into<String>) -> (String, String) {
    (key.to_string(), value.into())
}

/// Angular levels: every negative one plus a few above, so the output
/// shows where the well stops binding.
fn task_mathieu(cfg: &RunConfig) -> TaskResult {
    let q = cfg.physical.dipole_strength();
    let n_neg = count_negative(q).map_err(|e| e.to_string())?;
    let levels = n_neg + 3;
    let spec = mathieu_eigs(q, levels).map_err(|e| e.to_string())?;
    let rows = spec
        .eigenvalues
        .iter()
        .take(levels)
        .enumerate()
        .map(|(i, &lam)| vec![i.to_string(), num(lam)])
        .collect();
    let table = Table {
        name: "mathieu",
        header: vec!["level", "lambda"],
        rows,
    };
    let applied = vec![
        pair("q", num(q)),
        pair("negative_levels", n_neg.to_string()),
        pair("fourier_truncation", spec.truncation.to_string()),
    ];
    Ok((vec![table], applied))
}

/// Certified variational count: a family of disjoint trial states, each
/// with a negative margin of three quadrature errors.
fn task_count(cfg: &RunConfig) -> TaskResult {
    let target = cfg.solver.certified_target;
    let q = cfg.physical.dipole_strength();
    let n_neg = count_negative(q).map_err(|e| e.to_string())?;
    let family = certified_lower_bound(&cfg.physical, target).map_err(|e| e.to_string())?;
    let weakest = family
        .margins
        .iter()
        .cloned()
        .fold(f64::NEG_INFINITY, f64::max);
    let rows = vec![
        vec!["negative_channels".into(), n_neg.to_string()],
        vec!["certified_target".into(), target.to_string()],
        vec!["certified_count".into(), family.count.to_string()],
        vec!["weakest_margin".into(), num(weakest)],
        vec!["gram_defect".into(), num(family.gram_defect)],
    ];
    let table = Table {
        name: "count",
        header: vec!["name", "value"],
        rows,
    };
    let applied = vec![
        pair("margin_rule", "total + 3 * quadrature_error < 0"),
        pair("k", num(family.specs[0].k)),
        pair("first_big_r", num(family.specs[0].big_r)),
    ];
    Ok((vec![table], applied))
}

fn task_towers(cfg: &RunConfig) -> TaskResult {
    let s = &cfg.solver;
    let grid = RadialGrid::log(s.r_min, s.r_max, s.per_decade).map_err(|e| e.to_string())?;
    let towers = solve_towers(&cfg.physical, &grid, s.r_cut).map_err(|e| e.to_string())?;
    let mut rows = Vec::new();
    for ch in &towers {
        for j in 0..ch.energies.len() {
            let ratio = if j == 0 {
                String::new()
            } else {
                num(ch.ratios[j - 1])
            };
            rows.push(vec![
                ch.channel.to_string(),
                j.to_string(),
                num(ch.energies[j]),
                num(ch.gap_to_edge[j]),
                ratio,
            ]);
        }
    }
    let table = Table {
        name: "towers",
        header: vec!["channel", "j", "energy", "m_minus_e", "ratio"],
        rows,
    };
    let applied = vec![
        pair("r_min", num(s.r_min)),
        pair("r_max", num(s.r_max)),
        pair("per_decade", s.per_decade.to_string()),
        pair("r_cut", num(s.r_cut)),
        pair("channels", towers.len().to_string()),
    ];
    Ok((vec![table], applied))
}

/// Gap moments of whatever the towers task previously wrote; the dataflow
/// goes through the artifact on disk, so the file is the interface.
fn task_moments(cfg: &RunConfig) -> TaskResult {
    let file = format!("towers.{}", cfg.format.extension());
    let path = cfg.out_dir.join(&file);
    let text = fs::read_to_string(&path)
        .map_err(|e| format!("cannot read {} (run the towers task first): {e}", file))?;
    let energies = read_column(&text, "energy", cfg.format)?;
    if energies.is_empty() {
        return Err(format!("{file} holds no levels"));
    }
    let report = moment_report(
        &energies,
        &cfg.solver.deltas,
        &cfg.physical,
        cfg.solver.delta0,
    )
    .map_err(|e| e.to_string())?;
    let rows = report
        .entries
        .iter()
        .map(|entry| {
            vec![
                num(entry.delta),
                entry.partial_sums.len().to_string(),
                num(*entry.partial_sums.last().unwrap()),
                opt(entry.tail_estimate),
                num(entry.reduction_bound),
                opt(entry.bound_factor),
            ]
        })
        .collect();
    let table = Table {
        name: "moments",
        header: vec![
            "delta",
            "levels",
            "partial_sum",
            "tail_estimate",
            "reduction_bound",
            "bound_factor",
        ],
        rows,
    };
    let applied = vec![
        pair("source", file),
        pair("delta0", num(cfg.solver.delta0)),
        pair("tail_rule", "geometric extrapolation when ratio < 0.99"),
    ];
    Ok((vec![table], applied))
}

/// Inequality spot checks on seeded random test functions, plus the closed
/// constants, so a run leaves a machine-readable record that the bounds
/// hold on this build.
fn task_bounds(cfg: &RunConfig) -> TaskResult {
    let mut rows = Vec::new();
    let ch = critical_coupling();
    rows.push(vec![
        "critical_coupling".into(),
        String::new(),
        num(ch),
        String::new(),
        String::new(),
        String::new(),
        "true".into(),
    ]);
    let x0 = cfg.physical.x0.norm();
    let c =
        resolvent_bound_constant(x0, 0.0, cfg.physical.mass).map_err(|e| e.to_string())?;
    rows.push(vec![
        "resolvent_constant".into(),
        String::new(),
        num(c),
        String::new(),
        String::new(),
        String::new(),
        "true".into(),
    ]);

    let mut state = cfg.seed ^ 0x9E37_79B9_7F4A_7C15;
    let mut all_ok = true;
    for case in 0..cfg.solver.bound_cases {
        let (psi, alpha, center) = random_mixture(&mut state);
        let r = herbst_check(&psi, alpha, center).map_err(|e| e.to_string())?;
        let ok = r.margin >= -10.0 * r.quadrature_error;
        all_ok &= ok;
        rows.push(vec![
            "herbst".into(),
            case.to_string(),
            num(r.lhs),
            num(r.constant * r.rhs),
            num(r.margin),
            num(r.quadrature_error),
            ok.to_string(),
        ]);
    }
    for case in 0..cfg.solver.bound_cases {
        let (a, b, c_root, wf, wg, j, m, eta) = random_spinor_params(&mut state);
        let value_f = move |r: f64| wf * (r - a).powi(2) * (b - r).powi(2);
        let slope_f = move |r: f64| wf * 2.0 * (r - a) * (b - r) * (a + b - 2.0 * r);
        let value_g = move |r: f64| wg * (r - a).powi(2) * (b - r).powi(2) * (r - c_root);
        let slope_g = move |r: f64| {
            wg * ((r - a).powi(2) * (b - r).powi(2)
                + 2.0 * (r - a) * (b - r) * (a + b - 2.0 * r) * (r - c_root))
        };
        let spinor = ChannelSpinor {
            j,
            upper: RadialProfile {
                value: &value_f,
                slope: &slope_f,
            },
            lower: RadialProfile {
                value: &value_g,
                slope: &slope_g,
            },
            support: (a, b),
        };
        let r = sandwich_check(&spinor, m, eta).map_err(|e| e.to_string())?;
        let margin = r.lhs - r.rhs;
        let ok = margin >= -10.0 * r.quadrature_error;
        all_ok &= ok;
        rows.push(vec![
            "sandwich".into(),
            case.to_string(),
            num(r.lhs),
            num(r.rhs),
            num(margin),
            num(r.quadrature_error),
            ok.to_string(),
        ]);
    }
    let probe = sharpness_probe(20.0).map_err(|e| e.to_string())?;
    let ratio_ok = probe.lhs / probe.rhs < 1.05;
    all_ok &= ratio_ok;
    rows.push(vec![
        "sharpness".into(),
        String::new(),
        num(probe.lhs),
        num(probe.rhs),
        num(probe.lhs - probe.rhs),
        num(probe.quadrature_error),
        ratio_ok.to_string(),
    ]);
    if !all_ok {
        return Err("a bound check failed; see the emitted table".into());
    }

    let table = Table {
        name: "bounds",
        header: vec![
            "check",
            "case",
            "lhs",
            "rhs",
            "margin",
            "quadrature_error",
            "pass",
        ],
        rows,
    };
    let applied = vec![
        pair("seed", cfg.seed.to_string()),
        pair("cases", cfg.solver.bound_cases.to_string()),
        pair("pass_rule", "margin >= -10 * quadrature_error"),
        pair("sharpness_window", "20"),
        pair("sharpness_threshold", "1.05"),
    ];
    Ok((vec![table], applied))
}

fn task_dirac(cfg: &RunConfig) -> TaskResult {
    let s = &cfg.solver;
    let grid =
        RadialGrid::log(s.r_min, s.dirac_r_max, s.dirac_per_decade).map_err(|e| e.to_string())?;
    let gap = solve_dirac_block(&cfg.physical, s.eps, &grid, s.j_pairs).map_err(|e| e.to_string())?;
    let rows = gap
        .eigenvalues
        .iter()
        .zip(&gap.residuals)
        .enumerate()
        .map(|(i, (&e, &res))| vec![i.to_string(), num(e), num(res)])
        .collect();
    let spectrum = Table {
        name: "dirac",
        header: vec!["index", "energy", "residual"],
        rows,
    };
    let rejected = Table {
        name: "dirac_rejected",
        header: vec!["energy", "reason"],
        rows: gap
            .rejected
            .iter()
            .map(|(e, reason)| {
                let label = match reason {
                    RejectReason::Residual => "residual",
                    RejectReason::TruncationTooSmall => "truncation_too_small",
                    RejectReason::PollutionSuspected => "pollution_suspected",
                };
                vec![num(*e), label.to_string()]
            })
            .collect(),
    };
    let meta = gap.meta;
    let applied = vec![
        pair("eps", num(meta.eps)),
        pair("j_pairs", meta.j_pairs.to_string()),
        pair("nodes_per_decade", num(meta.nodes_per_decade)),
        pair("r_min", num(meta.r_min)),
        pair("r_max", num(meta.r_max)),
        pair("residual_scale", num(meta.scale)),
        pair("energy_window", num(meta.window)),
    ];
    Ok((vec![spectrum, rejected], applied))
}

/// Pull one named column back out of an artifact this binary wrote.
fn read_column(text: &str, column: &str, format: crate::config::OutputFormat) -> Result<Vec<f64>, String> {
    let parse = |s: &str| {
        s.parse::<f64>()
            .map_err(|_| format!("bad {column} value {s:?}"))
    };
    match format {
        crate::config::OutputFormat::Csv => {
            let mut lines = text.lines();
            let header = lines.next().ok_or("empty file")?;
            let idx = header
                .split(',')
                .position(|h| h == column)
                .ok_or_else(|| format!("no {column} column in {header:?}"))?;
            lines
                .map(|line| {
                    let cell = line
                        .split(',')
                        .nth(idx)
                        .ok_or_else(|| format!("short row {line:?}"))?;
                    parse(cell)
                })
                .collect()
        }
        crate::config::OutputFormat::Json => {
            let value: serde_json::Value =
                serde_json::from_str(text).map_err(|e| e.to_string())?;
            let array = value.as_array().ok_or("expected a JSON array")?;
            array
                .iter()
                .map(|obj| {
                    let cell = obj
                        .get(column)
                        .and_then(|v| v.as_str())
                        .ok_or_else(|| format!("row without {column}"))?;
                    parse(cell)
                })
                .collect()
        }
    }
}

// deterministic generator for the randomized checks; one stream per run
fn next_unit(state: &mut u64) -> f64 {
    *state = state.wrapping_add(0x9E37_79B9_7F4A_7C15);
    let mut z = *state;
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^= z >> 31;
    (z >> 11) as f64 / (1u64 << 53) as f64
}

fn uniform(state: &mut u64, lo: f64, hi: f64) -> f64 {
    lo + (hi - lo) * next_unit(state)
}

fn random_mixture(state: &mut u64) -> (GaussianMixture, f64, Vec2) {
    let n = 1 + (next_unit(state) * 3.0) as usize;
    let mut terms = Vec::with_capacity(n);
    for _ in 0..n {
        terms.push(GaussianTerm {
            weight: uniform(state, -1.0, 1.0),
            width: uniform(state, 0.2, 2.0),
            center: Vec2::new(uniform(state, -2.0, 2.0), uniform(state, -2.0, 2.0)),
        });
    }
    // keep the state comfortably normalizable
    terms[0].weight = terms[0].weight.signum() * (terms[0].weight.abs() + 0.5);
    let alpha = uniform(state, 0.2, 1.8);
    let center = Vec2::new(uniform(state, -1.0, 1.0), uniform(state, -1.0, 1.0));
    (GaussianMixture { terms }, alpha, center)
}

#[allow(clippy::type_complexity)]
fn random_spinor_params(state: &mut u64) -> (f64, f64, f64, f64, f64, i32, f64, f64) {
    let a = uniform(state, 0.1, 1.0);
    let b = a + uniform(state, 0.5, 3.0);
    let c_root = uniform(state, a, b);
    let wf = uniform(state, -2.0, 2.0);
    let wg = uniform(state, -2.0, 2.0);
    let j = uniform(state, -3.0, 4.0).floor() as i32;
    let m = uniform(state, 0.2, 2.0);
    let eta = uniform(state, -2.0, 2.0);
    (a, b, c_root, wf, wg, j, m, eta)
}
