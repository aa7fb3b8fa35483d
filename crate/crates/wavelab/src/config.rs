//! Run configuration: a flat, typed `section.key = value` text format.
//!
//! Grammar: one assignment per line, `#` starts a comment anywhere, blank
//! lines are ignored, UTF-8 throughout. Every key is known to the loader;
//! unknown keys are rejected by name. Parsing and validation collect every
//! problem in the file instead of stopping at the first, so one round trip
//! fixes a config.
//!
//! Keys and defaults (a missing key takes its default; an empty file is a
//! valid config):
//!
//! ```text
//! grid.mode        = radial1d        # radial1d | full3d
//! grid.n           = 256             # grid points per axis
//! grid.box_length  = 16              # periodic box edge
//! eq.alpha         = 1               # nonlinearity power (exact rational)
//! eq.b             = 1/2             # weight power (exact rational)
//! eq.s             = 0               # regularity index (exact rational)
//! eq.gamma         = (2 + 3/b)/2     # weight Lebesgue exponent (exact rational)
//! eq.epsilon       = auto            # weight regularization; auto = grid spacing
//! eq.theorem       = (unset)         # t1.1 | t1.2 | t1.3: check eligibility at load
//! time.T           = 1               # interval length
//! time.dt          = auto            # reference integrator step; auto = half the stability bound
//! time.snapshots   = 33              # stored time nodes
//! picard.max_iters = 25
//! picard.tol       = 1e-10           # fixed-point stopping distance
//! picard.a_policy  = auto            # auto | explicit ball radius
//! picard.pair_set  = default         # default | working (adds contraction pairs)
//! picard.working_norm = l2           # l2 | hs (hs needs eq.s > 0)
//! continue.horizon = 10              # target time for interval chaining
//! probes.name      = (unset)         # probe label or letter; required to run a probe
//! probes.samples   = 100
//! probes.seed      = (unset)         # required to run a probe (reproducibility)
//! data.kind        = gaussian        # gaussian | bump | zero
//! data.amplitude   = 0.1
//! data.width       = 1
//! data.psi_amplitude = 0             # initial velocity = psi_amplitude/amplitude times the profile
//! norms.sigma      = 1/2             # dyadic-scale norm order (exact rational)
//! norms.p          = 2               # dyadic-scale space exponent (inf allowed)
//! norms.q          = 2               # dyadic-scale summation exponent (inf allowed)
//! output.dir       = runs
//! output.formats   = csv             # comma list: csv, svg, snapshots
//! ```

use std::collections::HashMap;
use std::fmt;
use std::path::Path;

use num::{Signed, Zero};

use crate::dynamics::Equation;
use crate::exponents::{default_gamma, rat, to_f64, validate_params, Params, Rational, Regime};
use crate::grid::{GridMode, GridSpec};
use crate::picard::BallPolicy;
use crate::probes::ProbeName;

/// One problem found while loading a config, tied to its line when the
/// problem has one.
#[derive(Clone, Debug, PartialEq)]
pub struct ConfigProblem {
    pub line: Option<usize>,
    pub message: String,
}

/// Every problem in the file, collected in one pass.
#[derive(Clone, Debug, PartialEq)]
pub struct ConfigErrors {
    pub problems: Vec<ConfigProblem>,
}

impl fmt::Display for ConfigErrors {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{} config problem(s):", self.problems.len())?;
        for p in &self.problems {
            match p.line {
                Some(n) => writeln!(f, "  line {}: {}", n, p.message)?,
                None => writeln!(f, "  {}", p.message)?,
            }
        }
        Ok(())
    }
}

impl std::error::Error for ConfigErrors {}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PairSetChoice {
    /// The two constant pairs.
    Default,
    /// Constant pairs plus the optimal contraction pairs for the run's
    /// exponents.
    Working,
}

impl PairSetChoice {
    pub fn label(&self) -> &'static str {
        match self {
            PairSetChoice::Default => "default",
            PairSetChoice::Working => "working",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DataKind {
    Gaussian,
    Bump,
    Zero,
}

impl DataKind {
    pub fn label(&self) -> &'static str {
        match self {
            DataKind::Gaussian => "gaussian",
            DataKind::Bump => "bump",
            DataKind::Zero => "zero",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum OutputFormat {
    Csv,
    Svg,
    Snapshots,
}

impl OutputFormat {
    pub fn label(&self) -> &'static str {
        match self {
            OutputFormat::Csv => "csv",
            OutputFormat::Svg => "svg",
            OutputFormat::Snapshots => "snapshots",
        }
    }
}

#[derive(Clone, Debug)]
pub struct GridSection {
    pub mode: GridMode,
    pub n: usize,
    pub box_length: f64,
}

#[derive(Clone, Debug)]
pub struct EqSection {
    pub alpha: Rational,
    pub b: Rational,
    pub s: Rational,
    pub gamma: Rational,
    /// `None` = auto: the grid spacing.
    pub epsilon: Option<f64>,
    /// When set, the parameter window of that statement is checked at load.
    pub theorem: Option<Regime>,
}

impl EqSection {
    pub fn alpha_f64(&self) -> f64 {
        to_f64(&self.alpha)
    }

    pub fn b_f64(&self) -> f64 {
        to_f64(&self.b)
    }

    pub fn s_f64(&self) -> f64 {
        to_f64(&self.s)
    }

    pub fn gamma_f64(&self) -> f64 {
        to_f64(&self.gamma)
    }
}

#[derive(Clone, Debug)]
pub struct TimeSection {
    pub t: f64,
    /// `None` = auto: half the reference integrator's stability bound.
    pub dt: Option<f64>,
    pub snapshots: usize,
}

#[derive(Clone, Debug)]
pub struct PicardSection {
    pub max_iters: usize,
    pub tol: f64,
    pub a_policy: BallPolicy,
    pub pair_set: PairSetChoice,
    /// `true` selects the fractional working norm (needs `eq.s > 0`).
    pub working_norm_hs: bool,
}

#[derive(Clone, Debug)]
pub struct ContinueSection {
    pub horizon: f64,
}

#[derive(Clone, Debug)]
pub struct ProbeSection {
    pub name: Option<ProbeName>,
    pub samples: usize,
    /// Mandatory for probe runs; reproducibility is part of the contract.
    pub seed: Option<u64>,
}

#[derive(Clone, Debug)]
pub struct DataSection {
    pub kind: DataKind,
    pub amplitude: f64,
    pub width: f64,
    pub psi_amplitude: f64,
}

#[derive(Clone, Debug)]
pub struct NormsSection {
    pub sigma: Rational,
    pub p: f64,
    pub q: f64,
}

#[derive(Clone, Debug)]
pub struct OutputSection {
    pub dir: String,
    pub formats: Vec<OutputFormat>,
}

/// A fully resolved, validated run configuration.
#[derive(Clone, Debug)]
pub struct RunConfig {
    pub grid: GridSection,
    pub eq: EqSection,
    pub time: TimeSection,
    pub picard: PicardSection,
    pub cont: ContinueSection,
    pub probes: ProbeSection,
    pub data: DataSection,
    pub norms: NormsSection,
    pub output: OutputSection,
}

impl RunConfig {
    /// The grid, re-validated (the loader already did; this cannot fail on
    /// a loaded config).
    pub fn grid_spec(&self) -> GridSpec {
        GridSpec::new(self.grid.mode, self.grid.n, self.grid.box_length)
            .expect("validated at load")
    }

    pub fn resolved_epsilon(&self) -> f64 {
        self.eq.epsilon.unwrap_or_else(|| self.grid_spec().spacing())
    }

    pub fn equation(&self) -> Equation {
        Equation::new(
            self.grid_spec(),
            self.eq.alpha_f64(),
            self.eq.b_f64(),
            self.resolved_epsilon(),
        )
        .expect("validated at load")
    }

    /// Every resolved key in grammar form, for manifests and echoing.
    pub fn echo(&self) -> Vec<(String, String)> {
        let mut rows: Vec<(String, String)> = vec![
            ("grid.mode".into(), self.grid.mode.label().into()),
            ("grid.n".into(), self.grid.n.to_string()),
            ("grid.box_length".into(), trim_float(self.grid.box_length)),
            ("eq.alpha".into(), self.eq.alpha.to_string()),
            ("eq.b".into(), self.eq.b.to_string()),
            ("eq.s".into(), self.eq.s.to_string()),
            ("eq.gamma".into(), self.eq.gamma.to_string()),
            (
                "eq.epsilon".into(),
                match self.eq.epsilon {
                    None => "auto".into(),
                    Some(e) => trim_float(e),
                },
            ),
        ];
        if let Some(reg) = self.eq.theorem {
            rows.push(("eq.theorem".into(), reg.label().into()));
        }
        rows.extend([
            ("time.T".into(), trim_float(self.time.t)),
            (
                "time.dt".into(),
                match self.time.dt {
                    None => "auto".into(),
                    Some(dt) => trim_float(dt),
                },
            ),
            ("time.snapshots".into(), self.time.snapshots.to_string()),
            ("picard.max_iters".into(), self.picard.max_iters.to_string()),
            ("picard.tol".into(), trim_float(self.picard.tol)),
            (
                "picard.a_policy".into(),
                match self.picard.a_policy {
                    BallPolicy::Auto => "auto".into(),
                    BallPolicy::Explicit(a) => trim_float(a),
                },
            ),
            ("picard.pair_set".into(), self.picard.pair_set.label().into()),
            (
                "picard.working_norm".into(),
                if self.picard.working_norm_hs { "hs".into() } else { "l2".into() },
            ),
            ("continue.horizon".into(), trim_float(self.cont.horizon)),
        ]);
        if let Some(name) = self.probes.name {
            rows.push(("probes.name".into(), name.label().into()));
        }
        rows.push(("probes.samples".into(), self.probes.samples.to_string()));
        if let Some(seed) = self.probes.seed {
            rows.push(("probes.seed".into(), seed.to_string()));
        }
        rows.extend([
            ("data.kind".into(), self.data.kind.label().into()),
            ("data.amplitude".into(), trim_float(self.data.amplitude)),
            ("data.width".into(), trim_float(self.data.width)),
            ("data.psi_amplitude".into(), trim_float(self.data.psi_amplitude)),
            ("norms.sigma".into(), self.norms.sigma.to_string()),
            ("norms.p".into(), trim_float(self.norms.p)),
            ("norms.q".into(), trim_float(self.norms.q)),
            ("output.dir".into(), self.output.dir.clone()),
            (
                "output.formats".into(),
                self.output
                    .formats
                    .iter()
                    .map(|f| f.label())
                    .collect::<Vec<_>>()
                    .join(","),
            ),
        ]);
        rows
    }

    /// Re-render this configuration with some keys replaced and parse the
    /// result, so overrides (CLI flags) go through exactly the same
    /// validation as a file would.
    pub fn with_overrides(
        &self,
        overrides: &[(String, String)],
    ) -> Result<RunConfig, ConfigErrors> {
        let mut rows = self.echo();
        for (key, value) in overrides {
            if value.is_empty() {
                // Empty override = unset: the parser falls back to the
                // derived default for this key.
                rows.retain(|(k, _)| k != key);
                continue;
            }
            match rows.iter_mut().find(|(k, _)| k == key) {
                Some(slot) => slot.1 = value.clone(),
                None => rows.push((key.clone(), value.clone())),
            }
        }
        let text: String =
            rows.iter().map(|(k, v)| format!("{} = {}\n", k, v)).collect();
        parse_config(&text)
    }
}

fn trim_float(x: f64) -> String {
    if x.is_infinite() {
        return if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    if x == x.trunc() && x.abs() < 1e15 {
        format!("{}", x as i64)
    } else {
        format!("{}", x)
    }
}

/// Exact rational from `p/q`, integer, or terminating decimal text.
pub fn parse_rational(text: &str) -> Option<Rational> {
    let text = text.trim();
    if let Some((n, d)) = text.split_once('/') {
        let n: i64 = n.trim().parse().ok()?;
        let d: i64 = d.trim().parse().ok()?;
        if d == 0 {
            return None;
        }
        return Some(rat(n, d));
    }
    if let Some((whole, frac)) = text.split_once('.') {
        let negative = whole.trim_start().starts_with('-');
        let whole_mag: i64 = match whole.trim() {
            "-" | "" => 0,
            w => w.parse::<i64>().ok()?.abs(),
        };
        if frac.is_empty() || frac.len() > 12 || !frac.bytes().all(|b| b.is_ascii_digit()) {
            return None;
        }
        let denom = 10i64.pow(frac.len() as u32);
        let frac_mag: i64 = frac.parse().ok()?;
        let mag = rat(whole_mag, 1) + rat(frac_mag, denom);
        return Some(if negative { -mag } else { mag });
    }
    text.parse::<i64>().ok().map(|n| rat(n, 1))
}

struct Loader {
    entries: HashMap<String, (usize, String)>,
    problems: Vec<ConfigProblem>,
}

impl Loader {
    fn problem(&mut self, line: Option<usize>, message: String) {
        self.problems.push(ConfigProblem { line, message });
    }

    fn take(&mut self, key: &str) -> Option<(usize, String)> {
        self.entries.remove(key)
    }

    fn parse_or<T>(
        &mut self,
        key: &str,
        default: T,
        parse: impl Fn(&str) -> Option<T>,
        expected: &str,
    ) -> T {
        match self.take(key) {
            None => default,
            Some((line, value)) => match parse(&value) {
                Some(v) => v,
                None => {
                    self.problem(
                        Some(line),
                        format!("{} = {}: expected {}", key, value, expected),
                    );
                    default
                }
            },
        }
    }

    fn f64_or(&mut self, key: &str, default: f64) -> f64 {
        self.parse_or(key, default, parse_f64, "a number")
    }

    fn rational_or(&mut self, key: &str, default: Rational) -> Rational {
        self.parse_or(key, default, parse_rational, "a rational (p/q, integer, or decimal)")
    }

    fn usize_or(&mut self, key: &str, default: usize) -> usize {
        self.parse_or(key, default, |v| v.parse().ok(), "a nonnegative integer")
    }
}

fn parse_f64(text: &str) -> Option<f64> {
    match text {
        "inf" => Some(f64::INFINITY),
        _ => text.parse().ok().filter(|v: &f64| !v.is_nan()),
    }
}

/// Parse and validate config text. All problems are collected; the config
/// is returned only when there are none.
pub fn parse_config(text: &str) -> Result<RunConfig, ConfigErrors> {
    let mut loader = Loader { entries: HashMap::new(), problems: Vec::new() };

    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = match raw.find('#') {
            Some(pos) => &raw[..pos],
            None => raw,
        };
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        let Some((key, value)) = line.split_once('=') else {
            loader.problem(Some(line_no), format!("expected `section.key = value`, got `{}`", line));
            continue;
        };
        let key = key.trim().to_string();
        let value = value.trim().to_string();
        if key.is_empty() || !key.contains('.') {
            loader.problem(Some(line_no), format!("key `{}` is not of the form section.key", key));
            continue;
        }
        if value.is_empty() {
            loader.problem(Some(line_no), format!("key `{}` has an empty value", key));
            continue;
        }
        if let Some((prev_line, _)) = loader.entries.get(&key) {
            let prev = *prev_line;
            loader.problem(Some(line_no), format!("key `{}` already set on line {}", key, prev));
            continue;
        }
        loader.entries.insert(key, (line_no, value));
    }

    // grid
    let mode = loader.parse_or("grid.mode", GridMode::Radial1d, GridMode::parse, "radial1d or full3d");
    let n = loader.usize_or("grid.n", 256);
    let box_length = loader.f64_or("grid.box_length", 16.0);

    // eq
    let alpha = loader.rational_or("eq.alpha", rat(1, 1));
    let b = loader.rational_or("eq.b", rat(1, 2));
    let s = loader.rational_or("eq.s", Rational::zero());
    let gamma_entry = loader.take("eq.gamma");
    let epsilon = loader.parse_or(
        "eq.epsilon",
        None,
        |v| {
            if v == "auto" {
                Some(None)
            } else {
                parse_f64(v).filter(|e| *e >= 0.0 && e.is_finite()).map(Some)
            }
        },
        "auto or a nonnegative number",
    );
    let theorem = loader.parse_or(
        "eq.theorem",
        None,
        |v| Regime::parse(v).map(Some),
        "t1.1, t1.2, or t1.3",
    );

    // time
    let t = loader.f64_or("time.T", 1.0);
    let dt = loader.parse_or(
        "time.dt",
        None,
        |v| {
            if v == "auto" {
                Some(None)
            } else {
                parse_f64(v).filter(|d| *d > 0.0 && d.is_finite()).map(Some)
            }
        },
        "auto or a positive number",
    );
    let snapshots = loader.usize_or("time.snapshots", 33);

    // picard
    let max_iters = loader.usize_or("picard.max_iters", 25);
    let tol = loader.f64_or("picard.tol", 1e-10);
    let a_policy = loader.parse_or(
        "picard.a_policy",
        BallPolicy::Auto,
        |v| {
            if v == "auto" {
                Some(BallPolicy::Auto)
            } else {
                parse_f64(v).filter(|a| *a > 0.0 && a.is_finite()).map(BallPolicy::Explicit)
            }
        },
        "auto or a positive radius",
    );
    let pair_set = loader.parse_or(
        "picard.pair_set",
        PairSetChoice::Default,
        |v| match v {
            "default" => Some(PairSetChoice::Default),
            "working" => Some(PairSetChoice::Working),
            _ => None,
        },
        "default or working",
    );
    let working_norm_hs = loader.parse_or(
        "picard.working_norm",
        false,
        |v| match v {
            "l2" => Some(false),
            "hs" => Some(true),
            _ => None,
        },
        "l2 or hs",
    );

    // continue
    let horizon = loader.f64_or("continue.horizon", 10.0);

    // probes
    let probe_name = loader.parse_or(
        "probes.name",
        None,
        |v| ProbeName::parse(v).map(Some),
        "a probe label (strichartz, besov-embedding, product-rule, chain-rule, nonlinear-estimate, gagliardo-nirenberg) or letter a-f",
    );
    let samples = loader.usize_or("probes.samples", 100);
    let seed = loader.parse_or("probes.seed", None, |v| v.parse::<u64>().ok().map(Some), "a u64");

    // data
    let kind = loader.parse_or(
        "data.kind",
        DataKind::Gaussian,
        |v| match v {
            "gaussian" => Some(DataKind::Gaussian),
            "bump" => Some(DataKind::Bump),
            "zero" => Some(DataKind::Zero),
            _ => None,
        },
        "gaussian, bump, or zero",
    );
    let amplitude = loader.f64_or("data.amplitude", 0.1);
    let width = loader.f64_or("data.width", 1.0);
    let psi_amplitude = loader.f64_or("data.psi_amplitude", 0.0);

    // norms
    let sigma = loader.rational_or("norms.sigma", rat(1, 2));
    let p = loader.f64_or("norms.p", 2.0);
    let q = loader.f64_or("norms.q", 2.0);

    // output
    let dir = loader
        .take("output.dir")
        .map(|(_, v)| v)
        .unwrap_or_else(|| "runs".to_string());
    let formats = loader.parse_or(
        "output.formats",
        vec![OutputFormat::Csv],
        |v| {
            let mut out = Vec::new();
            for part in v.split(',') {
                match part.trim() {
                    "csv" => out.push(OutputFormat::Csv),
                    "svg" => out.push(OutputFormat::Svg),
                    "snapshots" => out.push(OutputFormat::Snapshots),
                    _ => return None,
                }
            }
            if out.is_empty() {
                None
            } else {
                Some(out)
            }
        },
        "a comma list drawn from csv, svg, snapshots",
    );

    // Everything still in the map is an unknown key.
    let mut unknown: Vec<(usize, String)> = loader
        .entries
        .drain()
        .map(|(key, (line, _))| (line, key))
        .collect();
    unknown.sort();
    for (line, key) in unknown {
        loader.problem(Some(line), format!("unknown key `{}`", key));
    }

    // Resolve gamma: explicit value or the midpoint default for this b.
    let gamma = match gamma_entry {
        Some((line, value)) => match parse_rational(&value) {
            Some(g) => g,
            None => {
                loader.problem(
                    Some(line),
                    format!("eq.gamma = {}: expected a rational (p/q, integer, or decimal)", value),
                );
                rat(5, 2)
            }
        },
        None => match default_gamma(&b) {
            Ok(g) => g,
            Err(_) => rat(5, 2), // placeholder; the window check below reports the real problem
        },
    };

    // Cross-field validation, still collecting everything.
    if !(box_length > 0.0) || !box_length.is_finite() {
        loader.problem(None, format!("grid.box_length = {} must be positive and finite", box_length));
    } else if let Err(e) = GridSpec::new(mode, n, box_length) {
        loader.problem(None, format!("grid: {}", e));
    }
    if alpha.is_negative() {
        loader.problem(None, format!("eq.alpha = {} must be nonnegative", alpha));
    }
    if b.is_negative() {
        loader.problem(None, format!("eq.b = {} must be nonnegative", b));
    }
    if s.is_negative() {
        loader.problem(None, format!("eq.s = {} must be nonnegative", s));
    }
    if gamma <= rat(2, 1) {
        loader.problem(None, format!("eq.gamma = {} must exceed 2", gamma));
    } else if b.is_positive() && gamma >= rat(3, 1) / &b {
        loader.problem(
            None,
            format!("eq.gamma = {} outside the weight window (2, 3/b) = (2, {})", gamma, rat(3, 1) / &b),
        );
    }
    if let Ok(grid) = GridSpec::new(mode, n, box_length) {
        let eps = epsilon.unwrap_or_else(|| grid.spacing());
        if !alpha.is_negative() && !b.is_negative() {
            if let Err(e) = Equation::new(grid, to_f64(&alpha), to_f64(&b), eps) {
                loader.problem(None, format!("eq: {}", e));
            }
        }
    }
    if let Some(regime) = theorem {
        match Params::new(alpha.clone(), b.clone(), s.clone(), 3) {
            Ok(params) => {
                let report = validate_params(&params, regime);
                for violation in report.violations() {
                    loader.problem(None, format!("theorem {}: {}", regime, violation));
                }
            }
            Err(e) => loader.problem(None, format!("theorem {}: {}", regime, e)),
        }
    }
    if !(t > 0.0) || !t.is_finite() {
        loader.problem(None, format!("time.T = {} must be positive and finite", t));
    }
    if snapshots < 9 {
        loader.problem(
            None,
            format!("time.snapshots = {} too small: quadrature needs at least 9 nodes", snapshots),
        );
    }
    if max_iters < 1 {
        loader.problem(None, "picard.max_iters must be at least 1".to_string());
    }
    if !(tol > 0.0) || !tol.is_finite() {
        loader.problem(None, format!("picard.tol = {} must be positive and finite", tol));
    }
    if working_norm_hs && !s.is_positive() {
        loader.problem(
            None,
            format!("picard.working_norm = hs needs eq.s > 0, got eq.s = {}", s),
        );
    }
    if !(horizon > 0.0) || !horizon.is_finite() {
        loader.problem(None, format!("continue.horizon = {} must be positive and finite", horizon));
    }
    if samples < 2 {
        loader.problem(None, format!("probes.samples = {} must be at least 2", samples));
    }
    if !(width > 0.0) || !width.is_finite() {
        loader.problem(None, format!("data.width = {} must be positive and finite", width));
    }
    if !amplitude.is_finite() || !psi_amplitude.is_finite() {
        loader.problem(None, "data amplitudes must be finite".to_string());
    }
    if !(p >= 1.0) {
        loader.problem(None, format!("norms.p = {} must be at least 1", p));
    }
    if !(q >= 1.0) {
        loader.problem(None, format!("norms.q = {} must be at least 1", q));
    }
    if dir.is_empty() {
        loader.problem(None, "output.dir must be nonempty".to_string());
    }

    if !loader.problems.is_empty() {
        return Err(ConfigErrors { problems: loader.problems });
    }

    Ok(RunConfig {
        grid: GridSection { mode, n, box_length },
        eq: EqSection { alpha, b, s, gamma, epsilon, theorem },
        time: TimeSection { t, dt, snapshots },
        picard: PicardSection { max_iters, tol, a_policy, pair_set, working_norm_hs },
        cont: ContinueSection { horizon },
        probes: ProbeSection { name: probe_name, samples, seed },
        data: DataSection { kind, amplitude, width, psi_amplitude },
        norms: NormsSection { sigma, p, q },
        output: OutputSection { dir, formats },
    })
}

/// Load and validate a config file.
pub fn load_config(path: &Path) -> Result<RunConfig, ConfigErrors> {
    let text = std::fs::read_to_string(path).map_err(|e| ConfigErrors {
        problems: vec![ConfigProblem {
            line: None,
            message: format!("cannot read {}: {}", path.display(), e),
        }],
    })?;
    parse_config(&text)
}

/// A default config (everything at its documented default).
pub fn default_config() -> RunConfig {
    parse_config("").expect("defaults are valid")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_text_yields_the_documented_defaults() {
        let cfg = default_config();
        assert_eq!(cfg.grid.mode, GridMode::Radial1d);
        assert_eq!(cfg.grid.n, 256);
        assert_eq!(cfg.grid.box_length, 16.0);
        assert_eq!(cfg.eq.alpha, rat(1, 1));
        assert_eq!(cfg.eq.b, rat(1, 2));
        assert_eq!(cfg.eq.s, Rational::zero());
        // midpoint of (2, 3/b) = (2, 6) is 4
        assert_eq!(cfg.eq.gamma, rat(4, 1));
        assert!(cfg.eq.epsilon.is_none());
        assert_eq!(cfg.time.t, 1.0);
        assert_eq!(cfg.time.snapshots, 33);
        assert_eq!(cfg.picard.max_iters, 25);
        assert_eq!(cfg.picard.pair_set, PairSetChoice::Default);
        assert!(!cfg.picard.working_norm_hs);
        assert_eq!(cfg.cont.horizon, 10.0);
        assert!(cfg.probes.name.is_none());
        assert!(cfg.probes.seed.is_none());
        assert_eq!(cfg.data.kind, DataKind::Gaussian);
        assert_eq!(cfg.output.dir, "runs");
        assert_eq!(cfg.output.formats, vec![OutputFormat::Csv]);
    }

    #[test]
    fn comments_blanks_and_values_parse() {
        let text = "\
# a full config
grid.mode = full3d   # inline comment
grid.n = 32

grid.box_length = 8
eq.alpha = 1/2
eq.b = 0.25
eq.s = 1/4
eq.gamma = 29/10
eq.epsilon = 0.125
time.T = 2
time.dt = 0.01
time.snapshots = 17
picard.max_iters = 40
picard.tol = 1e-8
picard.a_policy = 3.5
picard.pair_set = working
picard.working_norm = hs
continue.horizon = 5
probes.name = d
probes.samples = 50
probes.seed = 42
data.kind = bump
data.amplitude = 0.2
data.width = 1.5
data.psi_amplitude = -0.1
norms.sigma = 3/4
norms.p = inf
norms.q = 2
output.dir = out
output.formats = csv,snapshots
";
        let cfg = parse_config(text).unwrap();
        assert_eq!(cfg.grid.mode, GridMode::Full3d);
        assert_eq!(cfg.grid.n, 32);
        assert_eq!(cfg.eq.alpha, rat(1, 2));
        assert_eq!(cfg.eq.b, rat(1, 4));
        assert_eq!(cfg.eq.gamma, rat(29, 10));
        assert_eq!(cfg.eq.epsilon, Some(0.125));
        assert_eq!(cfg.time.dt, Some(0.01));
        assert!(matches!(cfg.picard.a_policy, BallPolicy::Explicit(a) if a == 3.5));
        assert_eq!(cfg.picard.pair_set, PairSetChoice::Working);
        assert!(cfg.picard.working_norm_hs);
        assert_eq!(cfg.probes.name, Some(ProbeName::ChainRule));
        assert_eq!(cfg.probes.seed, Some(42));
        assert_eq!(cfg.data.kind, DataKind::Bump);
        assert_eq!(cfg.norms.sigma, rat(3, 4));
        assert!(cfg.norms.p.is_infinite());
        assert_eq!(cfg.output.formats, vec![OutputFormat::Csv, OutputFormat::Snapshots]);
    }

    #[test]
    fn unknown_keys_are_rejected_by_line() {
        let err = parse_config("eq.alphaa = 2\n").unwrap_err();
        assert_eq!(err.problems.len(), 1);
        assert_eq!(err.problems[0].line, Some(1));
        assert!(err.problems[0].message.contains("unknown key `eq.alphaa`"));
    }

    #[test]
    fn all_problems_are_collected_not_just_the_first() {
        let text = "\
eq.alphaa = 2
grid.n = lots
time.T = -1
picard.tol = 0
";
        let err = parse_config(text).unwrap_err();
        assert_eq!(err.problems.len(), 4);
        let rendered = err.to_string();
        assert!(rendered.contains("unknown key"));
        assert!(rendered.contains("grid.n"));
        assert!(rendered.contains("time.T"));
        assert!(rendered.contains("picard.tol"));
    }

    #[test]
    fn duplicate_keys_are_rejected() {
        let err = parse_config("grid.n = 64\ngrid.n = 128\n").unwrap_err();
        assert!(err.problems[0].message.contains("already set on line 1"));
    }

    #[test]
    fn theorem_window_is_checked_at_load() {
        let err = parse_config("eq.alpha = 2\neq.b = 1\neq.theorem = t1.1\n").unwrap_err();
        let rendered = err.to_string();
        assert!(rendered.contains("alpha < (4-2b)/3 violated"), "got: {}", rendered);
        // The same parameters without the theorem key are a valid lab setup.
        assert!(parse_config("eq.alpha = 2\neq.b = 1\neq.gamma = 14/5\n").is_ok());
    }

    #[test]
    fn gamma_window_is_validated() {
        let err = parse_config("eq.b = 1\neq.gamma = 3\n").unwrap_err();
        assert!(err.to_string().contains("(2, 3)"));
        let err = parse_config("eq.gamma = 2\n").unwrap_err();
        assert!(err.to_string().contains("must exceed 2"));
    }

    #[test]
    fn fractional_working_norm_needs_positive_order() {
        let err = parse_config("picard.working_norm = hs\n").unwrap_err();
        assert!(err.to_string().contains("needs eq.s > 0"));
        assert!(parse_config("picard.working_norm = hs\neq.s = 1/4\neq.b = 1\neq.gamma = 14/5\n").is_ok());
    }

    #[test]
    fn rational_texts_parse_exactly() {
        assert_eq!(parse_rational("1/2"), Some(rat(1, 2)));
        assert_eq!(parse_rational("2"), Some(rat(2, 1)));
        assert_eq!(parse_rational("0.5"), Some(rat(1, 2)));
        assert_eq!(parse_rational("-0.25"), Some(rat(-1, 4)));
        assert_eq!(parse_rational("-3/4"), Some(rat(-3, 4)));
        assert_eq!(parse_rational("2.9"), Some(rat(29, 10)));
        assert_eq!(parse_rational("1/0"), None);
        assert_eq!(parse_rational("x"), None);
        assert_eq!(parse_rational("1.2.3"), None);
    }

    #[test]
    fn grid_preconditions_are_revalidated() {
        let err = parse_config("grid.n = 7\n").unwrap_err();
        assert!(err.to_string().contains("grid"));
    }

    #[test]
    fn echo_round_trips_through_the_parser() {
        let cfg = parse_config("eq.alpha = 1/2\nprobes.seed = 9\nprobes.name = a\n").unwrap();
        let echoed: String = cfg
            .echo()
            .into_iter()
            .map(|(k, v)| format!("{} = {}\n", k, v))
            .collect();
        let reparsed = parse_config(&echoed).unwrap();
        assert_eq!(reparsed.eq.alpha, cfg.eq.alpha);
        assert_eq!(reparsed.probes.seed, cfg.probes.seed);
        assert_eq!(reparsed.probes.name, cfg.probes.name);
        assert_eq!(reparsed.grid.n, cfg.grid.n);
    }

    #[test]
    fn malformed_lines_report_their_numbers() {
        let err = parse_config("just words\n\nkey_without_dot = 3\n").unwrap_err();
        assert_eq!(err.problems.len(), 2);
        assert_eq!(err.problems[0].line, Some(1));
        assert_eq!(err.problems[1].line, Some(3));
    }
}
