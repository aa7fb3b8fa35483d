//! Experiment orchestration: run directories, CSV/record/plot emission,
//! and one runner per CLI subcommand.
//!
//! Conventions shared by every runner:
//!
//! * each run gets a fresh timestamped directory under the output root and
//!   writes exactly one `manifest.json` there (partial runs are flagged);
//! * CSV files are RFC-4180 style with a header row, `\n` line endings,
//!   and `.` decimal separators; floats print in shortest round-trip form,
//!   so identical configs and seeds reproduce files bit for bit;
//! * exit status 0 means the experiment ran and passed, 1 means it ran and
//!   failed (probe violation, lost contraction, stalled continuation),
//!   2 means the run never started (config or environment);
//! * plot output is data-first: curves are CSV columns, and the optional
//!   `svg` format renders simple static polylines of the same data.

use std::fmt;
use std::fs;
use std::io;
use std::path::{Path, PathBuf};

use serde_json::{json, Value};

use crate::config::{DataKind, OutputFormat, PairSetChoice, RunConfig};
use crate::data;
use crate::dynamics::stability_bound;
use crate::exponents::{
    contraction_pairs, theta1, theta2, to_f64, validate_params, Params, Regime,
};
use crate::grid::{write_snapshot, Field, GridMode};
use crate::manifest::{pair_row, Manifest};
use crate::norms::{
    besov_norm, default_pairs, mixed_norm, sobolev_norm, w_norm, BesovSpec, MixedNormSpec,
};
use crate::picard::{
    continue_solution, solve_local, working_pairs, ContinuationOutcome, PicardConfig, PicardError,
    PicardProblem, WorkingNorm,
};
use crate::probes::{
    bounded_ratio_pass, growth_slope, linear_trajectory, nonlinear_t_sweep, run_probe, ProbeName,
    ProbeSpec,
};

/// Why a run could not produce its result. `exit_code` maps the taxonomy
/// onto the process exit convention.
#[derive(Debug)]
pub enum RunFailure {
    /// The configuration (or CLI argument set) is unusable. Exit 2.
    Config(String),
    /// The experiment started and hit a hard stop (non-finite state,
    /// impossible request). Exit 1.
    Experiment(String),
    /// Filesystem trouble while persisting results. Exit 2.
    Io(String),
}

impl RunFailure {
    pub fn exit_code(&self) -> i32 {
        match self {
            RunFailure::Config(_) | RunFailure::Io(_) => 2,
            RunFailure::Experiment(_) => 1,
        }
    }
}

impl fmt::Display for RunFailure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RunFailure::Config(m) => write!(f, "configuration: {}", m),
            RunFailure::Experiment(m) => write!(f, "experiment: {}", m),
            RunFailure::Io(m) => write!(f, "io: {}", m),
        }
    }
}

impl std::error::Error for RunFailure {}

fn io_at(path: &Path, e: io::Error) -> RunFailure {
    RunFailure::Io(format!("{}: {}", path.display(), e))
}

/// What a completed run hands back to the caller: where it wrote, what to
/// print, and the process exit status.
#[derive(Debug)]
pub struct RunOutput {
    pub dir: PathBuf,
    pub exit_code: i32,
    pub summary: String,
}

pub const SUBCOMMANDS: [&str; 7] =
    ["check-exponents", "simulate", "picard", "continue", "norms", "probe", "sweep"];

/// Shortest round-trip decimal form; the reproducibility contract for CSV
/// cells.
fn fmt_f(x: f64) -> String {
    format!("{:?}", x)
}

/// Compact label form: integers without a trailing `.0`.
fn trim_float(x: f64) -> String {
    if x.is_finite() && x == x.trunc() && x.abs() < 1e15 {
        format!("{}", x as i64)
    } else {
        fmt_f(x)
    }
}

fn csv_cell(s: &str) -> String {
    if s.contains(',') || s.contains('"') || s.contains('\n') {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

/// Write an RFC-4180-style CSV: header row, `\n` endings, minimal quoting.
pub fn write_csv(path: &Path, header: &[&str], rows: &[Vec<String>]) -> io::Result<()> {
    let mut text = String::new();
    text.push_str(&header.iter().map(|h| csv_cell(h)).collect::<Vec<_>>().join(","));
    text.push('\n');
    for row in rows {
        text.push_str(&row.iter().map(|c| csv_cell(c)).collect::<Vec<_>>().join(","));
        text.push('\n');
    }
    fs::write(path, text)
}

/// Create `root/<command>-<unix-millis>[-k]/`, uniquified against
/// collisions from rapid successive runs.
pub fn create_run_dir(root: &Path, command: &str) -> io::Result<PathBuf> {
    fs::create_dir_all(root)?;
    let stamp = crate::manifest::now_unix_ms();
    for k in 0..1000 {
        let name = if k == 0 {
            format!("{}-{}", command, stamp)
        } else {
            format!("{}-{}-{}", command, stamp, k)
        };
        let dir = root.join(name);
        match fs::create_dir(&dir) {
            Ok(()) => return Ok(dir),
            Err(e) if e.kind() == io::ErrorKind::AlreadyExists => continue,
            Err(e) => return Err(e),
        }
    }
    Err(io::Error::new(io::ErrorKind::AlreadyExists, "could not find a free run directory name"))
}

/// Build `(φ, ψ)` from the data section: the configured profile at
/// `data.amplitude` for `φ` and at `data.psi_amplitude` for `ψ` (zero
/// amplitude gives the zero field). Radial grids get the reduced odd
/// representative of the same radial profile.
pub fn initial_data(cfg: &RunConfig) -> (Field, Field) {
    let grid = cfg.grid_spec();
    let make = |amplitude: f64| -> Field {
        if amplitude == 0.0 || cfg.data.kind == DataKind::Zero {
            return Field::zeros(grid);
        }
        let width = cfg.data.width;
        match (cfg.data.kind, grid.mode) {
            (DataKind::Gaussian, GridMode::Full3d) => data::gaussian(&grid, amplitude, width),
            (DataKind::Gaussian, GridMode::Radial1d) => {
                data::reduced_gaussian(&grid, amplitude, width)
            }
            (DataKind::Bump, GridMode::Full3d) => data::bump(&grid, amplitude, width),
            (DataKind::Bump, GridMode::Radial1d) => data::reduced_bump(&grid, amplitude, width),
            (DataKind::Zero, _) => unreachable!("handled above"),
        }
    };
    (make(cfg.data.amplitude), make(cfg.data.psi_amplitude))
}

fn wants(cfg: &RunConfig, format: OutputFormat) -> bool {
    cfg.output.formats.contains(&format)
}

/// Minimal static vector plot: one polyline over labeled axes.
fn write_svg_curve(path: &Path, title: &str, points: &[(f64, f64)]) -> io::Result<()> {
    const W: f64 = 640.0;
    const H: f64 = 400.0;
    const PAD: f64 = 56.0;
    let (mut x0, mut x1) = (f64::INFINITY, f64::NEG_INFINITY);
    let (mut y0, mut y1) = (f64::INFINITY, f64::NEG_INFINITY);
    for (x, y) in points {
        x0 = x0.min(*x);
        x1 = x1.max(*x);
        y0 = y0.min(*y);
        y1 = y1.max(*y);
    }
    if points.is_empty() || !x0.is_finite() || !y0.is_finite() {
        x0 = 0.0;
        x1 = 1.0;
        y0 = 0.0;
        y1 = 1.0;
    }
    if x1 - x0 < 1e-300 {
        x1 = x0 + 1.0;
    }
    if y1 - y0 < 1e-300 {
        y1 = y0 + 1.0;
    }
    let px = |x: f64| PAD + (x - x0) / (x1 - x0) * (W - 2.0 * PAD);
    let py = |y: f64| H - PAD - (y - y0) / (y1 - y0) * (H - 2.0 * PAD);
    let pts: Vec<String> = points
        .iter()
        .filter(|(x, y)| x.is_finite() && y.is_finite())
        .map(|(x, y)| format!("{:.2},{:.2}", px(*x), py(*y)))
        .collect();
    let svg = format!(
        concat!(
            "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"0 0 {w} {h}\" ",
            "font-family=\"monospace\" font-size=\"12\">\n",
            "<rect width=\"{w}\" height=\"{h}\" fill=\"#ffffff\"/>\n",
            "<text x=\"{tx}\" y=\"20\" text-anchor=\"middle\" font-size=\"14\">{title}</text>\n",
            "<line x1=\"{pad}\" y1=\"{yaxis}\" x2=\"{xend}\" y2=\"{yaxis}\" stroke=\"#444444\"/>\n",
            "<line x1=\"{pad}\" y1=\"{pad}\" x2=\"{pad}\" y2=\"{yaxis}\" stroke=\"#444444\"/>\n",
            "<text x=\"{pad}\" y=\"{below}\" text-anchor=\"middle\">{x0}</text>\n",
            "<text x=\"{xend}\" y=\"{below}\" text-anchor=\"middle\">{x1}</text>\n",
            "<text x=\"{left}\" y=\"{yaxis}\" text-anchor=\"end\">{y0}</text>\n",
            "<text x=\"{left}\" y=\"{padtext}\" text-anchor=\"end\">{y1}</text>\n",
            "<polyline points=\"{pts}\" fill=\"none\" stroke=\"#0a6a6a\" stroke-width=\"1.5\"/>\n",
            "</svg>\n"
        ),
        w = W,
        h = H,
        tx = W / 2.0,
        title = title,
        pad = PAD,
        yaxis = H - PAD,
        xend = W - PAD,
        below = H - PAD + 18.0,
        left = PAD - 8.0,
        padtext = PAD + 4.0,
        x0 = format!("{:.3}", x0),
        x1 = format!("{:.3}", x1),
        y0 = format!("{:.3e}", y0),
        y1 = format!("{:.3e}", y1),
        pts = pts.join(" "),
    );
    fs::write(path, svg)
}

fn picard_config(cfg: &RunConfig) -> PicardConfig {
    PicardConfig {
        t: cfg.time.t,
        max_iters: cfg.picard.max_iters,
        tol: cfg.picard.tol,
        a_policy: cfg.picard.a_policy,
        snapshots: cfg.time.snapshots,
    }
}

fn picard_problem(cfg: &RunConfig) -> Result<PicardProblem, RunFailure> {
    let pairs = match cfg.picard.pair_set {
        PairSetChoice::Default => default_pairs(),
        PairSetChoice::Working => working_pairs(&cfg.eq.alpha, &cfg.eq.gamma, &cfg.eq.b)
            .map_err(|e| RunFailure::Config(format!("working pair set: {}", e)))?,
    };
    let working_norm = if cfg.picard.working_norm_hs {
        WorkingNorm::Hs { s: cfg.eq.s_f64() }
    } else {
        WorkingNorm::L2
    };
    Ok(PicardProblem {
        equation: cfg.equation(),
        working_norm,
        pairs,
        gamma: Some(cfg.eq.gamma_f64()),
    })
}

/// Run a subcommand: create the run directory, execute, and guarantee a
/// manifest (flagged partial when the run aborted). The `Err` side carries
/// failures that prevented a result; experiment-level failures that still
/// produced a report come back as `Ok` with exit code 1.
pub fn run(
    command: &str,
    cfg: &RunConfig,
    out_override: Option<&Path>,
    seed_override: Option<u64>,
) -> Result<RunOutput, RunFailure> {
    let root = out_override
        .map(Path::to_path_buf)
        .unwrap_or_else(|| PathBuf::from(&cfg.output.dir));
    let dir = create_run_dir(&root, command).map_err(|e| io_at(&root, e))?;
    match run_in(command, cfg, &dir, seed_override) {
        Ok(out) => Ok(out),
        Err(failure) => {
            let mut manifest = Manifest::begin(command, cfg);
            manifest.partial = true;
            let found: Vec<String> = fs::read_dir(&dir)
                .map(|entries| {
                    let mut names: Vec<String> = entries
                        .filter_map(|e| e.ok())
                        .map(|e| e.file_name().to_string_lossy().into_owned())
                        .collect();
                    names.sort();
                    names
                })
                .unwrap_or_default();
            manifest.finish(
                json!({"status": "error", "message": failure.to_string()}),
                found,
            );
            let _ = manifest.write(&dir);
            Err(failure)
        }
    }
}

/// Dispatch into an existing run directory (no partial-manifest wrapper).
pub fn run_in(
    command: &str,
    cfg: &RunConfig,
    dir: &Path,
    seed_override: Option<u64>,
) -> Result<RunOutput, RunFailure> {
    match command {
        "check-exponents" => run_check_exponents(cfg, dir),
        "simulate" => run_simulate(cfg, dir),
        "picard" => run_picard(cfg, dir),
        "continue" => run_continue(cfg, dir),
        "norms" => run_norms(cfg, dir),
        "probe" => run_probe_cmd(cfg, dir, seed_override),
        "sweep" => run_sweep(cfg, dir),
        other => Err(RunFailure::Config(format!(
            "unknown subcommand `{}` (expected one of {})",
            other,
            SUBCOMMANDS.join(", ")
        ))),
    }
}

fn checks_json(checks: &[crate::exponents::HypothesisCheck]) -> Value {
    Value::Array(
        checks
            .iter()
            .map(|c| json!({"name": c.name, "holds": c.holds, "detail": c.detail}))
            .collect(),
    )
}

fn run_check_exponents(cfg: &RunConfig, dir: &Path) -> Result<RunOutput, RunFailure> {
    let mut manifest = Manifest::begin("check-exponents", cfg);
    let (alpha, b, s, gamma) = (&cfg.eq.alpha, &cfg.eq.b, &cfg.eq.s, &cfg.eq.gamma);
    let mut lines: Vec<String> = Vec::new();
    lines.push(format!("parameters: alpha = {}, b = {}, s = {}, gamma = {}", alpha, b, s, gamma));

    let regimes: Vec<Regime> = match cfg.eq.theorem {
        Some(r) => vec![r],
        None => vec![Regime::EnergyLocal, Regime::EnergySmallGlobal, Regime::SobolevLocal],
    };
    let mut regime_reports = Vec::new();
    match Params::new(alpha.clone(), b.clone(), s.clone(), 3) {
        Ok(params) => {
            for regime in &regimes {
                let report = validate_params(&params, *regime);
                lines.push(report.to_string().trim_end().to_string());
                regime_reports.push(json!({
                    "regime": regime.label(),
                    "eligible": report.eligible(),
                    "checks": checks_json(&report.checks),
                    "auxiliary": checks_json(&report.auxiliary),
                }));
            }
        }
        Err(e) => {
            lines.push(format!("hypothesis checks unavailable: {}", e));
            regime_reports.push(json!({"error": e.to_string()}));
        }
    }

    let theta1_json = match theta1(alpha, b) {
        Ok(v) => {
            let f = to_f64(&v);
            lines.push(format!("theta1 = {} ({}), positive: {}", v, f, f > 0.0));
            json!({"exact": v.to_string(), "value": f})
        }
        Err(e) => {
            lines.push(format!("theta1 unavailable: {}", e));
            json!({"error": e.to_string()})
        }
    };
    let theta2_json = match theta2(alpha, gamma, b) {
        Ok(v) => {
            let f = to_f64(&v);
            lines.push(format!("theta2 = {} ({}), positive: {}", v, f, f > 0.0));
            json!({"exact": v.to_string(), "value": f})
        }
        Err(e) => {
            lines.push(format!("theta2 unavailable: {}", e));
            json!({"error": e.to_string()})
        }
    };

    let contraction_json = match contraction_pairs(alpha, gamma, b) {
        Ok(cp) => {
            lines.push(format!("contraction pair 1: {}", cp.first));
            lines.push(format!("contraction pair 2: {}", cp.second));
            let encode = |p: &crate::exponents::ContractionPair| {
                let row = pair_row(&p.pair);
                json!({
                    "q": row.q,
                    "r": row.r,
                    "space_exponent": row.space_exponent,
                    "class": row.class,
                    "identity_numeric": p.identity_numeric,
                    "identity_symbolic": p.identity_symbolic,
                    "sign_anomaly": p.sign_anomaly,
                })
            };
            json!({"first": encode(&cp.first), "second": encode(&cp.second)})
        }
        Err(e) => {
            lines.push(format!("contraction pairs unavailable: {}", e));
            json!({"error": e.to_string()})
        }
    };

    let constant_rows: Vec<Value> = default_pairs()
        .iter()
        .map(|p| {
            let row = pair_row(p);
            lines.push(format!(
                "constant pair (q = {}, r = {}): spatial exponent {}, {}",
                row.q, row.r, row.space_exponent, row.class
            ));
            serde_json::to_value(row).expect("plain strings")
        })
        .collect();

    let outcome = json!({
        "status": "ok",
        "regimes": regime_reports,
        "theta1": theta1_json,
        "theta2": theta2_json,
        "contraction_pairs": contraction_json,
        "constant_pairs": constant_rows,
    });
    manifest.finish(outcome, Vec::new());
    manifest.write(dir).map_err(|e| io_at(dir, e))?;
    Ok(RunOutput { dir: dir.to_path_buf(), exit_code: 0, summary: lines.join("\n") })
}

fn run_simulate(cfg: &RunConfig, dir: &Path) -> Result<RunOutput, RunFailure> {
    let mut manifest = Manifest::begin("simulate", cfg);
    let equation = cfg.equation();
    let grid = equation.grid;
    let (phi, psi) = initial_data(cfg);
    let dt0 = cfg.time.dt.unwrap_or_else(|| 0.5 * stability_bound(&grid));
    let segments = cfg.time.snapshots - 1;
    let per_segment = ((cfg.time.t / segments as f64) / dt0).ceil().max(1.0) as u64;
    let dt = cfg.time.t / (segments as f64 * per_segment as f64);

    let mut integrator = equation
        .integrator(phi.clone(), psi.clone(), dt)
        .map_err(|e| RunFailure::Experiment(e.to_string()))?;
    let mut artifacts: Vec<String> = Vec::new();
    let mut rows: Vec<Vec<String>> = Vec::new();
    let mut curve: Vec<(f64, f64)> = Vec::new();
    let mut records = Vec::with_capacity(cfg.time.snapshots);
    for node in 0..cfg.time.snapshots {
        if node > 0 {
            integrator
                .run_steps(per_segment)
                .map_err(|e| RunFailure::Experiment(e.to_string()))?;
        }
        let t = node as f64 * cfg.time.t / segments as f64;
        let (u, ut) = integrator.state();
        if !u.all_finite() || !ut.all_finite() {
            return Err(RunFailure::Experiment(format!(
                "state lost finiteness at t = {} (step size {} too coarse?)",
                t, dt
            )));
        }
        let record = equation.energy(t, u, ut);
        rows.push(vec![
            fmt_f(record.t),
            fmt_f(record.kinetic),
            fmt_f(record.gradient),
            fmt_f(record.potential),
            fmt_f(record.total),
        ]);
        curve.push((record.t, record.total));
        if wants(cfg, OutputFormat::Snapshots) {
            let u_name = format!("snapshot-{:04}-u.field", node);
            let ut_name = format!("snapshot-{:04}-ut.field", node);
            write_snapshot(u, t, &dir.join(&u_name)).map_err(|e| io_at(dir, e))?;
            write_snapshot(ut, t, &dir.join(&ut_name)).map_err(|e| io_at(dir, e))?;
            artifacts.push(u_name);
            artifacts.push(ut_name);
        }
        records.push(record);
    }
    let energy_path = dir.join("energy.csv");
    write_csv(&energy_path, &["t", "kinetic", "gradient", "potential", "total"], &rows)
        .map_err(|e| io_at(&energy_path, e))?;
    artifacts.insert(0, "energy.csv".to_string());
    if wants(cfg, OutputFormat::Svg) {
        let svg_path = dir.join("energy.svg");
        write_svg_curve(&svg_path, "total energy", &curve).map_err(|e| io_at(&svg_path, e))?;
        artifacts.push("energy.svg".to_string());
    }

    let baseline = records[0].total;
    let denom = baseline.abs().max(1e-300);
    let drift = records
        .iter()
        .map(|r| (r.total - baseline).abs() / denom)
        .fold(0.0f64, f64::max);
    let outcome = json!({
        "status": "ok",
        "dt": dt,
        "steps": segments as u64 * per_segment,
        "nodes": cfg.time.snapshots,
        "energy_initial": baseline,
        "energy_final": records.last().map(|r| r.total),
        "relative_energy_drift": drift,
    });
    manifest.finish(outcome, artifacts);
    manifest.write(dir).map_err(|e| io_at(dir, e))?;
    Ok(RunOutput {
        dir: dir.to_path_buf(),
        exit_code: 0,
        summary: format!(
            "simulate: {} steps at dt = {:.3e} over [0, {}], relative energy drift {:.3e}",
            segments as u64 * per_segment,
            dt,
            cfg.time.t,
            drift
        ),
    })
}

/// Picard execution plus emission into `dir`; shared by `picard` and each
/// leg of `sweep`. Returns the outcome record and the exit code.
fn picard_into(cfg: &RunConfig, dir: &Path) -> Result<(Value, i32, String), RunFailure> {
    let mut manifest = Manifest::begin("picard", cfg);
    let (phi, psi) = initial_data(cfg);
    let pcfg = picard_config(cfg);
    let problem = picard_problem(cfg)?;
    let mut artifacts: Vec<String> = Vec::new();

    let (outcome, exit_code, summary) = match solve_local(&phi, &psi, &pcfg, &problem) {
        Ok((iterate, report)) => {
            let rows: Vec<Vec<String>> = report
                .iterations
                .iter()
                .map(|it| {
                    vec![
                        it.k.to_string(),
                        fmt_f(it.distance),
                        it.ratio.map(fmt_f).unwrap_or_default(),
                        fmt_f(it.ball_norm),
                    ]
                })
                .collect();
            let csv_path = dir.join("picard.csv");
            write_csv(&csv_path, &["k", "distance", "ratio", "ball_norm"], &rows)
                .map_err(|e| io_at(&csv_path, e))?;
            artifacts.push("picard.csv".to_string());
            if wants(cfg, OutputFormat::Svg) {
                let curve: Vec<(f64, f64)> = report
                    .iterations
                    .iter()
                    .map(|it| (it.k as f64, it.distance.max(1e-300).log10()))
                    .collect();
                let svg_path = dir.join("contraction.svg");
                write_svg_curve(&svg_path, "log10 iterate distance", &curve)
                    .map_err(|e| io_at(&svg_path, e))?;
                artifacts.push("contraction.svg".to_string());
            }
            if wants(cfg, OutputFormat::Snapshots) {
                let (u, ut) = iterate.final_state();
                write_snapshot(u, cfg.time.t, &dir.join("final-u.field"))
                    .map_err(|e| io_at(dir, e))?;
                write_snapshot(ut, cfg.time.t, &dir.join("final-ut.field"))
                    .map_err(|e| io_at(dir, e))?;
                artifacts.push("final-u.field".to_string());
                artifacts.push("final-ut.field".to_string());
            }
            let outcome = json!({
                "status": report.outcome.label(),
                "interval": report.interval,
                "ball_radius": report.ball_radius,
                "linear_ball_norm": report.linear_ball_norm,
                "iterations": report.iterations.len(),
                "final_distance": report.final_distance(),
                "max_ratio": report.max_ratio(),
            });
            let exit = if report.converged() { 0 } else { 1 };
            let summary = format!(
                "picard: {} on [0, {}] after {} iteration(s), final distance {:.3e}, max ratio {:.3}",
                report.outcome.label(),
                report.interval,
                report.iterations.len(),
                report.final_distance(),
                report.max_ratio()
            );
            (outcome, exit, summary)
        }
        Err(PicardError::Diverged { iteration }) => (
            json!({"status": "diverged", "iteration": iteration}),
            1,
            format!("picard: diverged at iteration {}", iteration),
        ),
        Err(e) => return Err(RunFailure::Experiment(e.to_string())),
    };
    manifest.finish(outcome.clone(), artifacts);
    manifest.write(dir).map_err(|e| io_at(dir, e))?;
    Ok((outcome, exit_code, summary))
}

fn run_picard(cfg: &RunConfig, dir: &Path) -> Result<RunOutput, RunFailure> {
    let (_, exit_code, summary) = picard_into(cfg, dir)?;
    Ok(RunOutput { dir: dir.to_path_buf(), exit_code, summary })
}

fn run_continue(cfg: &RunConfig, dir: &Path) -> Result<RunOutput, RunFailure> {
    let mut manifest = Manifest::begin("continue", cfg);
    let equation = cfg.equation();
    let (phi, psi) = initial_data(cfg);
    let pcfg = picard_config(cfg);
    let problem = picard_problem(cfg)?;
    let mut artifacts: Vec<String> = Vec::new();

    let (outcome, exit_code, summary) =
        match continue_solution(&phi, &psi, cfg.cont.horizon, &pcfg, &problem) {
            Ok(cont) => {
                let rows: Vec<Vec<String>> = cont
                    .intervals
                    .iter()
                    .map(|iv| {
                        vec![
                            fmt_f(iv.start),
                            fmt_f(iv.length),
                            iv.picard_iterations.to_string(),
                            fmt_f(iv.max_ratio),
                            fmt_f(iv.data_norm),
                            iv.rejections.to_string(),
                        ]
                    })
                    .collect();
                let intervals_path = dir.join("intervals.csv");
                write_csv(
                    &intervals_path,
                    &["start", "length", "picard_iterations", "max_ratio", "data_norm", "rejections"],
                    &rows,
                )
                .map_err(|e| io_at(&intervals_path, e))?;
                artifacts.push("intervals.csv".to_string());

                let mut energy_rows: Vec<Vec<String>> = Vec::new();
                let mut curve: Vec<(f64, f64)> = Vec::new();
                for (i, t) in cont.solution.times.iter().enumerate() {
                    let record =
                        equation.energy(*t, &cont.solution.fields[i], &cont.derivative.fields[i]);
                    energy_rows.push(vec![
                        fmt_f(record.t),
                        fmt_f(record.kinetic),
                        fmt_f(record.gradient),
                        fmt_f(record.potential),
                        fmt_f(record.total),
                    ]);
                    curve.push((record.t, record.total));
                }
                let energy_path = dir.join("energy.csv");
                write_csv(&energy_path, &["t", "kinetic", "gradient", "potential", "total"], &energy_rows)
                    .map_err(|e| io_at(&energy_path, e))?;
                artifacts.push("energy.csv".to_string());
                if wants(cfg, OutputFormat::Svg) {
                    let svg_path = dir.join("energy.svg");
                    write_svg_curve(&svg_path, "total energy along the chained solution", &curve)
                        .map_err(|e| io_at(&svg_path, e))?;
                    artifacts.push("energy.svg".to_string());
                }
                let reached_horizon = cont.outcome == ContinuationOutcome::ReachedHorizon;
                let status = match cont.outcome {
                    ContinuationOutcome::ReachedHorizon => "reached_horizon",
                    ContinuationOutcome::Stalled => "stalled",
                };
                let outcome = json!({
                    "status": status,
                    "reached": cont.reached,
                    "horizon": cont.horizon,
                    "intervals": cont.intervals.len(),
                    "solution_nodes": cont.solution.times.len(),
                });
                let exit = if reached_horizon { 0 } else { 1 };
                let summary = format!(
                    "continue: {} at t = {:.4} of horizon {} in {} interval(s)",
                    status,
                    cont.reached,
                    cont.horizon,
                    cont.intervals.len()
                );
                (outcome, exit, summary)
            }
            Err(PicardError::Diverged { iteration }) => (
                json!({"status": "diverged", "iteration": iteration}),
                1,
                format!("continue: diverged at iteration {}", iteration),
            ),
            Err(e) => return Err(RunFailure::Experiment(e.to_string())),
        };
    manifest.finish(outcome, artifacts);
    manifest.write(dir).map_err(|e| io_at(dir, e))?;
    Ok(RunOutput { dir: dir.to_path_buf(), exit_code, summary })
}

fn run_norms(cfg: &RunConfig, dir: &Path) -> Result<RunOutput, RunFailure> {
    let mut manifest = Manifest::begin("norms", cfg);
    let equation = cfg.equation();
    let grid = equation.grid;
    let (phi, psi) = initial_data(cfg);
    let s = cfg.eq.s_f64();
    let problem = picard_problem(cfg)?;
    let traj = linear_trajectory(&phi, &psi, cfg.time.t, cfg.time.snapshots);

    let fail = |e: crate::norms::NormError| RunFailure::Experiment(e.to_string());
    let mut rows: Vec<(String, f64)> = Vec::new();
    rows.push(("sobolev phi order=1".into(), sobolev_norm(&phi, 1.0).map_err(fail)?));
    rows.push(("l2 psi".into(), sobolev_norm(&psi, 0.0).map_err(fail)?));
    if s > 0.0 {
        rows.push((format!("sobolev phi order={}", cfg.eq.s), sobolev_norm(&phi, s).map_err(fail)?));
        rows.push((format!("sobolev psi order={}", cfg.eq.s), sobolev_norm(&psi, s).map_err(fail)?));
    }
    for pair in &problem.pairs {
        let spec = MixedNormSpec::new(pair.q.to_f64(), pair.norm_space_exponent().to_f64())
            .map_err(fail)?;
        let value = mixed_norm(&traj, &spec, s).map_err(fail)?;
        rows.push((format!("mixed q={} r={} order={}", pair.q, pair.r, cfg.eq.s), value));
    }
    rows.push((
        format!("pair-norm order={}", cfg.eq.s),
        w_norm(&traj, &problem.pairs, s).map_err(fail)?,
    ));
    let besov_spec = BesovSpec::full_band(&grid, to_f64(&cfg.norms.sigma), cfg.norms.p, cfg.norms.q)
        .map_err(fail)?;
    rows.push((
        format!(
            "dyadic phi sigma={} p={} q={}",
            cfg.norms.sigma,
            trim_float(cfg.norms.p),
            trim_float(cfg.norms.q)
        ),
        besov_norm(&phi, &besov_spec),
    ));
    rows.push(("energy total t=0".into(), equation.energy(0.0, &phi, &psi).total));

    let csv_rows: Vec<Vec<String>> =
        rows.iter().map(|(k, v)| vec![k.clone(), fmt_f(*v)]).collect();
    let csv_path = dir.join("norms.csv");
    write_csv(&csv_path, &["quantity", "value"], &csv_rows).map_err(|e| io_at(&csv_path, e))?;

    let outcome_map: serde_json::Map<String, Value> = rows
        .iter()
        .map(|(k, v)| (k.clone(), json!(v)))
        .collect();
    let outcome = json!({"status": "ok", "values": Value::Object(outcome_map)});
    manifest.finish(outcome, vec!["norms.csv".to_string()]);
    manifest.write(dir).map_err(|e| io_at(dir, e))?;
    let summary: Vec<String> =
        rows.iter().map(|(k, v)| format!("{} = {}", k, fmt_f(*v))).collect();
    Ok(RunOutput { dir: dir.to_path_buf(), exit_code: 0, summary: summary.join("\n") })
}

/// Maximum allowed relative drift of the embedding ratio across the dyadic
/// dilation sweep in the scaling probe.
pub const DILATION_DRIFT_ACCEPT: f64 = 0.15;

fn run_probe_cmd(
    cfg: &RunConfig,
    dir: &Path,
    seed_override: Option<u64>,
) -> Result<RunOutput, RunFailure> {
    let mut manifest = Manifest::begin("probe", cfg);
    let name = cfg
        .probes
        .name
        .ok_or_else(|| RunFailure::Config("probes.name is required for probe runs".into()))?;
    let seed = seed_override.or(cfg.probes.seed).ok_or_else(|| {
        RunFailure::Config(
            "probes.seed is required for probe runs (pass --seed or set probes.seed)".into(),
        )
    })?;
    let grid = cfg.grid_spec();
    let base = ProbeSpec {
        count: cfg.probes.samples,
        seed,
        alpha: cfg.eq.alpha_f64(),
        b: cfg.eq.b_f64(),
        s: cfg.eq.s_f64(),
        gamma: cfg.eq.gamma_f64(),
        interval: cfg.time.t,
        snapshots: cfg.time.snapshots,
        ..ProbeSpec::new(grid, cfg.probes.samples, seed)
    };
    let large_spec = ProbeSpec { count: 4 * cfg.probes.samples, ..base };

    let small = run_probe(name, &base).map_err(|e| RunFailure::Experiment(e.to_string()))?;
    let large = run_probe(name, &large_spec).map_err(|e| RunFailure::Experiment(e.to_string()))?;

    let mut artifacts = Vec::new();
    for report in [&small, &large] {
        let rows: Vec<Vec<String>> = report
            .ratios
            .iter()
            .enumerate()
            .map(|(i, r)| vec![i.to_string(), fmt_f(*r)])
            .collect();
        let file = format!("ratios-{}.csv", report.count);
        let path = dir.join(&file);
        write_csv(&path, &["sample", "ratio"], &rows).map_err(|e| io_at(&path, e))?;
        artifacts.push(file);
    }
    if name == ProbeName::NonlinearEstimate {
        let sweep =
            nonlinear_t_sweep(&base, 2).map_err(|e| RunFailure::Experiment(e.to_string()))?;
        let rows: Vec<Vec<String>> = sweep
            .iter()
            .map(|row| vec![fmt_f(row.interval), fmt_f(row.lhs), fmt_f(row.ratio)])
            .collect();
        let path = dir.join("tsweep.csv");
        write_csv(&path, &["interval", "lhs", "ratio"], &rows).map_err(|e| io_at(&path, e))?;
        artifacts.push("tsweep.csv".to_string());
    }

    let slope = growth_slope(&small, &large);
    let mut pass = bounded_ratio_pass(&small, &large);
    let drift = large.dilation_drift;
    if let Some(d) = drift {
        pass = pass && d <= DILATION_DRIFT_ACCEPT;
    }
    let outcome = json!({
        "status": if pass { "pass" } else { "fail" },
        "probe": name.label(),
        "family": small.family,
        "seed": seed,
        "counts": [small.count, large.count],
        "max_ratios": [small.max_ratio, large.max_ratio],
        "growth_slope": slope,
        "violations": small.violations + large.violations,
        "dilation_drift": drift,
    });
    manifest.finish(outcome, artifacts);
    manifest.write(dir).map_err(|e| io_at(dir, e))?;
    let summary = format!(
        "probe {}: max ratio {:.4} -> {:.4} across {}x -> {}x samples, growth slope {:.4}{}{} [{}]",
        name.label(),
        small.max_ratio,
        large.max_ratio,
        small.count,
        large.count,
        slope,
        match drift {
            Some(d) => format!(", dilation drift {:.4}", d),
            None => String::new(),
        },
        if small.violations + large.violations > 0 {
            format!(", {} violation(s)", small.violations + large.violations)
        } else {
            String::new()
        },
        if pass { "PASS" } else { "FAIL" }
    );
    Ok(RunOutput { dir: dir.to_path_buf(), exit_code: if pass { 0 } else { 1 }, summary })
}

fn run_sweep(cfg: &RunConfig, dir: &Path) -> Result<RunOutput, RunFailure> {
    let mut manifest = Manifest::begin("sweep", cfg);
    let mut rows: Vec<Vec<String>> = Vec::new();
    let mut runs = Vec::new();
    let mut lines = Vec::new();
    let mut all_converged = true;
    for divisor in [1u32, 2, 4] {
        let mut sub_cfg = cfg.clone();
        sub_cfg.time.t = cfg.time.t / divisor as f64;
        let sub_name = format!("interval-div{}", divisor);
        let sub_dir = dir.join(&sub_name);
        fs::create_dir(&sub_dir).map_err(|e| io_at(&sub_dir, e))?;
        let (outcome, exit, summary) = picard_into(&sub_cfg, &sub_dir)?;
        let status = outcome["status"].as_str().unwrap_or("?").to_string();
        let iterations = outcome["iterations"].as_u64().unwrap_or(0);
        let max_ratio = outcome["max_ratio"].as_f64().unwrap_or(f64::NAN);
        rows.push(vec![
            fmt_f(sub_cfg.time.t),
            iterations.to_string(),
            fmt_f(max_ratio),
            status.clone(),
        ]);
        runs.push(json!({
            "directory": sub_name,
            "interval": sub_cfg.time.t,
            "status": status,
            "iterations": iterations,
            "max_ratio": max_ratio,
        }));
        all_converged = all_converged && exit == 0;
        lines.push(format!("  {}", summary));
    }
    let csv_path = dir.join("sweep.csv");
    write_csv(&csv_path, &["interval", "iterations", "max_ratio", "outcome"], &rows)
        .map_err(|e| io_at(&csv_path, e))?;
    let outcome = json!({
        "status": if all_converged { "converged" } else { "partial" },
        "runs": runs,
    });
    manifest.finish(outcome, vec!["sweep.csv".to_string()]);
    manifest.write(dir).map_err(|e| io_at(dir, e))?;
    let mut summary = vec![format!(
        "sweep over [T, T/2, T/4] from T = {}: {}",
        cfg.time.t,
        if all_converged { "all converged" } else { "not all converged" }
    )];
    summary.extend(lines);
    Ok(RunOutput {
        dir: dir.to_path_buf(),
        exit_code: if all_converged { 0 } else { 1 },
        summary: summary.join("\n"),
    })
}
