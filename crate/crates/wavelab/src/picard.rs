//! Fixed-point engine. The solution map
//!
//! `H(u)(t) = K̇(t)φ + K(t)ψ - ∫₀ᵗ K(t-τ) w|u|^α u (τ) dτ`
//!
//! is iterated on trajectories sampled over `[0, T]` until the distance
//! between consecutive iterates (measured in the sup-over-pairs norm at
//! order zero) drops below tolerance. On top of the basic iteration sit
//! three experiments: a bisection for the largest interval on which the
//! measured contraction ratio stays at or below one half, continuation of
//! a local solution across consecutive intervals up to a horizon, and a
//! data-smallness bisection that hunts for the amplitude below which
//! continuation stays energy-bounded all the way out.
//!
//! Iterates live on the snapshot grid that the norms integrate over, so no
//! interpolation sits between the solver and its diagnostics. The retarded
//! integrals use the trapezoid rule on that grid: recording every node of
//! a prefix quadrature is only consistent for a rule whose prefixes close
//! at every node.

use std::fmt;

use serde::Serialize;

use crate::dynamics::Equation;
use crate::exponents::{contraction_pairs, AdmissiblePair, ExponentError, PairClass, Rational};
use crate::fft::forward;
use crate::grid::Field;
use crate::norms::{default_pairs, sobolev_norm, w_norm, NormError, Trajectory};
use crate::propagator::{PropagatorPlan, QuadRule};

#[derive(Clone, Debug, PartialEq)]
pub enum PicardError {
    BadConfig { what: &'static str },
    GridMismatch,
    /// Non-finite values in an iterate; the map is blowing up.
    Diverged { iteration: usize },
    /// T-bisection hit its floor without finding a contracting interval.
    ContractionNotFound { smallest: f64 },
    /// Amplitude bisection hit its floor without an accepted amplitude.
    ThresholdNotFound { smallest: f64 },
    Norm(NormError),
}

impl fmt::Display for PicardError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PicardError::BadConfig { what } => write!(f, "bad configuration: {}", what),
            PicardError::GridMismatch => f.write_str("data fields live on a different grid"),
            PicardError::Diverged { iteration } => {
                write!(f, "iteration {} produced non-finite values", iteration)
            }
            PicardError::ContractionNotFound { smallest } => {
                write!(f, "no contracting interval found down to T = {}", smallest)
            }
            PicardError::ThresholdNotFound { smallest } => {
                write!(f, "no accepted amplitude found down to delta = {}", smallest)
            }
            PicardError::Norm(e) => write!(f, "norm evaluation failed: {}", e),
        }
    }
}

impl std::error::Error for PicardError {}

impl From<NormError> for PicardError {
    fn from(e: NormError) -> Self {
        PicardError::Norm(e)
    }
}

/// Ball radius rule: `auto` derives the radius from the data norm at the
/// working regularity, doubled; `explicit` pins it.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum BallPolicy {
    Auto,
    Explicit(f64),
}

/// How iterates are measured against the ball. The contraction metric is
/// the order-zero pair norm in both modes; the mode changes the ball norm
/// and the data norm feeding the auto radius.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum WorkingNorm {
    /// Ball in the order-zero pair norm; radius from `‖φ‖_{Ḣ¹} + ‖ψ‖_{L²}`.
    L2,
    /// Ball in the sum of the order-zero and order-`s` pair norms; radius
    /// from `‖φ‖_{Ḣ^{s+1}} + ‖ψ‖_{Ḣ^s}`.
    Hs { s: f64 },
}

impl WorkingNorm {
    pub fn label(&self) -> &'static str {
        match self {
            WorkingNorm::L2 => "l2",
            WorkingNorm::Hs { .. } => "hs",
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct PicardConfig {
    /// Interval length; the iteration runs on `[0, T]`.
    pub t: f64,
    pub max_iters: usize,
    /// Stopping threshold on the distance between consecutive iterates.
    pub tol: f64,
    pub a_policy: BallPolicy,
    /// Time nodes stored per iterate; also the quadrature nodes.
    pub snapshots: usize,
}

impl PicardConfig {
    pub fn validate(&self) -> Result<(), PicardError> {
        if !(self.t > 0.0) || !self.t.is_finite() {
            return Err(PicardError::BadConfig { what: "interval length must be positive" });
        }
        if !(self.tol > 0.0) || !self.tol.is_finite() {
            return Err(PicardError::BadConfig { what: "tolerance must be positive" });
        }
        if self.max_iters == 0 {
            return Err(PicardError::BadConfig { what: "need at least one iteration" });
        }
        if self.snapshots < 9 {
            return Err(PicardError::BadConfig {
                what: "need at least 9 snapshots for interior quadrature nodes",
            });
        }
        if let BallPolicy::Explicit(a) = self.a_policy {
            if !(a > 0.0) || !a.is_finite() {
                return Err(PicardError::BadConfig { what: "explicit ball radius must be positive" });
            }
        }
        Ok(())
    }
}

/// Everything about the problem that is not the data: the equation, the
/// norm mode, the pair set behind the sup norm, and the Lebesgue split
/// exponent feeding the continuation's interval rule.
#[derive(Clone)]
pub struct PicardProblem {
    pub equation: Equation,
    pub working_norm: WorkingNorm,
    pub pairs: Vec<AdmissiblePair>,
    /// Split exponent for the second time power in the smallness rule;
    /// `None` drops that term.
    pub gamma: Option<f64>,
}

impl PicardProblem {
    /// The two smallness exponents `θ₁ = (4-α)/2` and (when a split
    /// exponent is set) `θ₂ = (αγ+4γ-6)/(2γ(α+1))`, as floats.
    pub fn smallness_exponents(&self) -> (f64, Option<f64>) {
        let alpha = self.equation.alpha;
        let theta1 = (4.0 - alpha) / 2.0;
        let theta2 = self
            .gamma
            .map(|g| (alpha * g + 4.0 * g - 6.0) / (2.0 * g * (alpha + 1.0)));
        (theta1, theta2)
    }

    /// Data norm at the working regularity, the quantity the auto radius
    /// doubles.
    pub fn data_norm(&self, phi: &Field, psi: &Field) -> Result<f64, PicardError> {
        let (sp, ss) = match self.working_norm {
            WorkingNorm::L2 => (1.0, 0.0),
            WorkingNorm::Hs { s } => (s + 1.0, s),
        };
        Ok(sobolev_norm(phi, sp)? + sobolev_norm(psi, ss)?)
    }

    fn ball_norm(&self, solution: &Trajectory) -> Result<f64, PicardError> {
        let base = w_norm(solution, &self.pairs, 0.0)?;
        Ok(match self.working_norm {
            WorkingNorm::L2 => base,
            WorkingNorm::Hs { s } => base + w_norm(solution, &self.pairs, s)?,
        })
    }
}

/// Pair set for the sup norm: the two exact pairs `(∞, 2)` and `(4, 4)`,
/// extended by the split pairs at `(α, γ)` whenever they classify as
/// optimal (the first never does below `α = 2`; the second drops out
/// exactly when its time exponent turns negative). Duplicates collapse.
pub fn working_pairs(
    alpha: &Rational,
    gamma: &Rational,
    b: &Rational,
) -> Result<Vec<AdmissiblePair>, ExponentError> {
    let mut pairs = default_pairs();
    let split = contraction_pairs(alpha, gamma, b)?;
    for cand in [split.first.pair, split.second.pair] {
        if cand.classify() == PairClass::Optimal
            && !pairs.iter().any(|p| p.q == cand.q && p.r == cand.r)
        {
            pairs.push(cand);
        }
    }
    Ok(pairs)
}

/// One Picard iterate: the solution samples and their time derivative on
/// the shared snapshot grid.
#[derive(Clone, Debug)]
pub struct PicardIterate {
    pub solution: Trajectory,
    pub derivative: Trajectory,
}

impl PicardIterate {
    fn all_finite(&self) -> bool {
        self.solution.fields.iter().all(|f| f.all_finite())
            && self.derivative.fields.iter().all(|f| f.all_finite())
    }

    /// State `(u, u_t)` at the final snapshot, the restart data for
    /// continuation.
    pub fn final_state(&self) -> (&Field, &Field) {
        let last = self.solution.fields.len() - 1;
        (&self.solution.fields[last], &self.derivative.fields[last])
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum PicardOutcome {
    Converged,
    BallEscape,
    MaxIters,
}

impl PicardOutcome {
    pub fn label(&self) -> &'static str {
        match self {
            PicardOutcome::Converged => "converged",
            PicardOutcome::BallEscape => "ball_escape",
            PicardOutcome::MaxIters => "max_iters",
        }
    }
}

/// One row of the iteration log.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct IterationRecord {
    pub k: usize,
    /// Distance to the previous iterate in the order-zero pair norm.
    pub distance: f64,
    /// `distance_k / distance_{k-1}`; absent on the first row and after a
    /// zero distance.
    pub ratio: Option<f64>,
    /// Working-norm size of this iterate, compared against the radius.
    pub ball_norm: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct PicardReport {
    pub outcome: PicardOutcome,
    pub interval: f64,
    pub ball_radius: f64,
    /// Working-norm size of the starting linear solution.
    pub linear_ball_norm: f64,
    pub iterations: Vec<IterationRecord>,
}

impl PicardReport {
    pub fn converged(&self) -> bool {
        self.outcome == PicardOutcome::Converged
    }

    /// Largest recorded consecutive-distance ratio; zero when the run never
    /// measured one (immediate convergence).
    pub fn max_ratio(&self) -> f64 {
        self.iterations.iter().filter_map(|r| r.ratio).fold(0.0, f64::max)
    }

    /// Last recorded ratio, if any iteration measured one.
    pub fn last_ratio(&self) -> Option<f64> {
        self.iterations.iter().rev().find_map(|r| r.ratio)
    }

    pub fn final_distance(&self) -> f64 {
        self.iterations.last().map(|r| r.distance).unwrap_or(0.0)
    }
}

fn snapshot_times(t: f64, snapshots: usize) -> (f64, Vec<f64>) {
    let m = snapshots - 1;
    let dtau = t / m as f64;
    (dtau, (0..snapshots).map(|j| j as f64 * dtau).collect())
}

/// Linear part of the map, evaluated once per solve: `(K̇φ + Kψ, ∂_t ...)`
/// at each snapshot time.
fn linear_iterate(
    plan: &PropagatorPlan,
    phi: &Field,
    psi: &Field,
    times: &[f64],
) -> Result<PicardIterate, PicardError> {
    let mut values = Vec::with_capacity(times.len());
    let mut derivatives = Vec::with_capacity(times.len());
    for &t in times {
        let (u, ut) = plan.linear_solve(phi, psi, t);
        values.push(u);
        derivatives.push(ut);
    }
    Ok(PicardIterate {
        solution: Trajectory::new(times.to_vec(), values)?,
        derivative: Trajectory::new(times.to_vec(), derivatives)?,
    })
}

/// One application of the map to `u`, with the linear part precomputed.
fn apply_map(
    plan: &PropagatorPlan,
    equation: &Equation,
    linear: &PicardIterate,
    u: &PicardIterate,
    dtau: f64,
) -> PicardIterate {
    let forces: Vec<_> = u
        .solution
        .fields
        .iter()
        .map(|field| {
            let mut force = equation.nonlinearity(field);
            force.scale(-1.0);
            forward(&force)
        })
        .collect();
    let points = plan.duhamel_trajectory(&forces, dtau, 1, QuadRule::Trapezoid);
    let times = linear.solution.times.clone();
    let mut values = Vec::with_capacity(times.len());
    let mut derivatives = Vec::with_capacity(times.len());
    for (j, point) in points.into_iter().enumerate() {
        values.push(linear.solution.fields[j].add(&point.value));
        derivatives.push(linear.derivative.fields[j].add(&point.derivative));
    }
    PicardIterate {
        solution: Trajectory { times: times.clone(), fields: values },
        derivative: Trajectory { times, fields: derivatives },
    }
}

/// One application of the solution map to an iterate. The fixed points of
/// this map are the solutions of the equation with data `(φ, ψ)`; see
/// [`solve_local`] for the iteration wrapped around it.
pub fn contraction_map(
    u: &PicardIterate,
    phi: &Field,
    psi: &Field,
    cfg: &PicardConfig,
    problem: &PicardProblem,
) -> Result<PicardIterate, PicardError> {
    cfg.validate()?;
    let grid = problem.equation.grid;
    if phi.grid != grid || psi.grid != grid || u.solution.grid() != grid {
        return Err(PicardError::GridMismatch);
    }
    if u.solution.len() != cfg.snapshots {
        return Err(PicardError::BadConfig { what: "iterate is not on the snapshot grid" });
    }
    let plan = PropagatorPlan::new(grid);
    let (dtau, times) = snapshot_times(cfg.t, cfg.snapshots);
    let linear = linear_iterate(&plan, phi, psi, &times)?;
    let next = apply_map(&plan, &problem.equation, &linear, u, dtau);
    if !next.all_finite() {
        return Err(PicardError::Diverged { iteration: 1 });
    }
    Ok(next)
}

/// Iterate the map from the linear solution until consecutive iterates are
/// `tol`-close in the order-zero pair norm. Ball escapes and iteration
/// budget exhaustion are outcomes in the report; non-finite blow-up is an
/// error.
pub fn solve_local(
    phi: &Field,
    psi: &Field,
    cfg: &PicardConfig,
    problem: &PicardProblem,
) -> Result<(PicardIterate, PicardReport), PicardError> {
    cfg.validate()?;
    let grid = problem.equation.grid;
    if phi.grid != grid || psi.grid != grid {
        return Err(PicardError::GridMismatch);
    }
    let plan = PropagatorPlan::new(grid);
    let (dtau, times) = snapshot_times(cfg.t, cfg.snapshots);
    let linear = linear_iterate(&plan, phi, psi, &times)?;

    let radius = match cfg.a_policy {
        BallPolicy::Explicit(a) => a,
        BallPolicy::Auto => 2.0 * problem.data_norm(phi, psi)?,
    };
    let linear_ball_norm = problem.ball_norm(&linear.solution)?;

    let mut current = linear.clone();
    let mut iterations = Vec::new();
    let mut previous_distance: Option<f64> = None;
    let mut outcome = PicardOutcome::MaxIters;

    for k in 1..=cfg.max_iters {
        let next = apply_map(&plan, &problem.equation, &linear, &current, dtau);
        if !next.all_finite() {
            return Err(PicardError::Diverged { iteration: k });
        }
        let difference = next.solution.difference(&current.solution)?;
        let distance = w_norm(&difference, &problem.pairs, 0.0)?;
        if !distance.is_finite() {
            return Err(PicardError::Diverged { iteration: k });
        }
        let ratio = previous_distance
            .filter(|d| *d > 0.0)
            .map(|d| distance / d);
        let ball_norm = problem.ball_norm(&next.solution)?;
        iterations.push(IterationRecord { k, distance, ratio, ball_norm });

        current = next;
        previous_distance = Some(distance);
        if ball_norm > radius {
            outcome = PicardOutcome::BallEscape;
            break;
        }
        if distance <= cfg.tol {
            outcome = PicardOutcome::Converged;
            break;
        }
    }

    let report = PicardReport {
        outcome,
        interval: cfg.t,
        ball_radius: radius,
        linear_ball_norm,
        iterations,
    };
    Ok((current, report))
}

/// One probe of the T-bisection.
#[derive(Clone, Debug, Serialize)]
pub struct BisectionStep {
    pub t: f64,
    pub accepted: bool,
    /// Largest measured ratio at this interval; absent when the run
    /// diverged before measuring one.
    pub max_ratio: Option<f64>,
    pub outcome: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct ContractionWindow {
    /// Largest probed interval that converged with every measured ratio at
    /// or below one half.
    pub t_star: f64,
    pub steps: Vec<BisectionStep>,
    /// The doubling phase ran out of budget while still accepting; `t_star`
    /// is then a lower bound rather than a threshold.
    pub expanded_to_cap: bool,
}

const RATIO_ACCEPT: f64 = 0.5;

fn probe_interval(
    phi: &Field,
    psi: &Field,
    cfg: &PicardConfig,
    problem: &PicardProblem,
    t: f64,
    steps: &mut Vec<BisectionStep>,
) -> Result<bool, PicardError> {
    let local = PicardConfig { t, ..cfg.clone() };
    match solve_local(phi, psi, &local, problem) {
        Ok((_, report)) => {
            let accepted = report.converged() && report.max_ratio() <= RATIO_ACCEPT;
            steps.push(BisectionStep {
                t,
                accepted,
                max_ratio: Some(report.max_ratio()),
                outcome: report.outcome.label().to_string(),
            });
            Ok(accepted)
        }
        Err(PicardError::Diverged { .. }) => {
            steps.push(BisectionStep { t, accepted: false, max_ratio: None, outcome: "diverged".to_string() });
            Ok(false)
        }
        Err(e) => Err(e),
    }
}

/// Bisect for the largest interval length on which the iteration converges
/// with measured contraction ratio ≤ 1/2. Starts from `cfg.t`, doubles
/// while accepted (bounded), halves while rejected (bounded), then runs
/// `refine` geometric bisection steps inside the bracket.
pub fn contraction_threshold(
    phi: &Field,
    psi: &Field,
    cfg: &PicardConfig,
    problem: &PicardProblem,
    refine: usize,
) -> Result<ContractionWindow, PicardError> {
    cfg.validate()?;
    let mut steps = Vec::new();
    let probe =
        |t: f64, steps: &mut Vec<BisectionStep>| probe_interval(phi, psi, cfg, problem, t, steps);

    const MAX_DOUBLINGS: usize = 10;
    const MAX_HALVINGS: usize = 30;
    let (mut lo, mut hi);
    if probe(cfg.t, &mut steps)? {
        lo = cfg.t;
        let mut capped = true;
        hi = cfg.t;
        for _ in 0..MAX_DOUBLINGS {
            let next = lo * 2.0;
            if probe(next, &mut steps)? {
                lo = next;
            } else {
                hi = next;
                capped = false;
                break;
            }
        }
        if capped {
            return Ok(ContractionWindow { t_star: lo, steps, expanded_to_cap: true });
        }
    } else {
        hi = cfg.t;
        let mut bracket = None;
        for _ in 0..MAX_HALVINGS {
            let next = hi / 2.0;
            if probe(next, &mut steps)? {
                bracket = Some(next);
                break;
            }
            hi = next;
        }
        match bracket {
            Some(passing) => lo = passing,
            None => return Err(PicardError::ContractionNotFound { smallest: hi }),
        }
    }

    for _ in 0..refine {
        let mid = (lo * hi).sqrt();
        if probe(mid, &mut steps)? {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(ContractionWindow { t_star: lo, steps, expanded_to_cap: false })
}

/// One accepted continuation interval.
#[derive(Clone, Debug, Serialize)]
pub struct IntervalRecord {
    pub start: f64,
    pub length: f64,
    pub picard_iterations: usize,
    pub max_ratio: f64,
    /// Data norm at the interval start, the size the rechoice rule reads.
    pub data_norm: f64,
    /// Rejected lengths tried before this one was accepted.
    pub rejections: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ContinuationOutcome {
    ReachedHorizon,
    /// Interval lengths shrank to the retry floor before the horizon;
    /// consistent with norm growth of the candidate solution.
    Stalled,
}

impl ContinuationOutcome {
    pub fn label(&self) -> &'static str {
        match self {
            ContinuationOutcome::ReachedHorizon => "reached_horizon",
            ContinuationOutcome::Stalled => "stalled",
        }
    }
}

#[derive(Clone, Debug)]
pub struct Continuation {
    pub outcome: ContinuationOutcome,
    pub reached: f64,
    pub horizon: f64,
    pub intervals: Vec<IntervalRecord>,
    /// Concatenated solution samples across all accepted intervals.
    pub solution: Trajectory,
    pub derivative: Trajectory,
}

/// Interval length with `data^α · (T^{θ₁} + T^{θ₂})` equal to `budget`,
/// found by bisection on the increasing left side. `None` when the data
/// norm is (numerically) zero, meaning any length is admissible.
fn interval_from_smallness(
    budget: f64,
    data_norm: f64,
    alpha: f64,
    thetas: (f64, Option<f64>),
    cap: f64,
) -> Option<f64> {
    if data_norm <= 1e-300 {
        return None;
    }
    let g = |t: f64| {
        let (t1, t2) = thetas;
        t.powf(t1) + t2.map(|t2| t.powf(t2)).unwrap_or(0.0)
    };
    let target = budget / data_norm.powf(alpha);
    if g(cap) <= target {
        return Some(cap);
    }
    let (mut lo, mut hi) = (0.0, cap);
    for _ in 0..80 {
        let mid = 0.5 * (lo + hi);
        if g(mid) <= target {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Some(lo)
}

/// Continue a local solution across consecutive intervals until `horizon`.
/// The first interval calibrates the smallness budget `data^α(T^{θ₁}+T^{θ₂})`
/// at its accepted length; later intervals re-solve that rule for the
/// current data size. Every interval must converge with measured ratio
/// ≤ 1/2; rejected lengths are halved and retried. Shrinking to the retry
/// floor ends the run as stalled.
pub fn continue_solution(
    phi: &Field,
    psi: &Field,
    horizon: f64,
    cfg: &PicardConfig,
    problem: &PicardProblem,
) -> Result<Continuation, PicardError> {
    cfg.validate()?;
    if !(horizon > 0.0) || !horizon.is_finite() {
        return Err(PicardError::BadConfig { what: "horizon must be positive" });
    }
    let alpha = problem.equation.alpha;
    let thetas = problem.smallness_exponents();
    let floor = cfg.t * 2.0f64.powi(-30);

    let mut phi_cur = phi.clone();
    let mut psi_cur = psi.clone();
    let mut t_cur = 0.0;
    let mut budget: Option<f64> = None;
    let mut intervals = Vec::new();
    let mut times: Vec<f64> = Vec::new();
    let mut values: Vec<Field> = Vec::new();
    let mut derivatives: Vec<Field> = Vec::new();
    let mut outcome = ContinuationOutcome::ReachedHorizon;

    while horizon - t_cur > 1e-12 * horizon {
        let remaining = horizon - t_cur;
        let data_norm = problem.data_norm(&phi_cur, &psi_cur)?;
        let mut length = match budget {
            None => cfg.t,
            Some(s) => interval_from_smallness(s, data_norm, alpha, thetas, remaining.max(cfg.t))
                .unwrap_or(remaining),
        }
        .min(remaining);

        let mut rejections = 0;
        let accepted = loop {
            if length < floor {
                break None;
            }
            let local = PicardConfig { t: length, ..cfg.clone() };
            match solve_local(&phi_cur, &psi_cur, &local, problem) {
                Ok((iterate, report))
                    if report.converged() && report.max_ratio() <= RATIO_ACCEPT =>
                {
                    break Some((iterate, report));
                }
                Ok(_) | Err(PicardError::Diverged { .. }) => {
                    rejections += 1;
                    length /= 2.0;
                }
                Err(e) => return Err(e),
            }
        };

        let Some((iterate, report)) = accepted else {
            outcome = ContinuationOutcome::Stalled;
            break;
        };
        if budget.is_none() && data_norm > 1e-300 {
            let (t1, t2) = thetas;
            let g = length.powf(t1) + t2.map(|t2| length.powf(t2)).unwrap_or(0.0);
            budget = Some(data_norm.powf(alpha) * g);
        }
        intervals.push(IntervalRecord {
            start: t_cur,
            length,
            picard_iterations: report.iterations.len(),
            max_ratio: report.max_ratio(),
            data_norm,
            rejections,
        });

        let skip = usize::from(!times.is_empty());
        for (j, t) in iterate.solution.times.iter().enumerate().skip(skip) {
            times.push(t_cur + t);
            values.push(iterate.solution.fields[j].clone());
            derivatives.push(iterate.derivative.fields[j].clone());
        }
        let (u_end, ut_end) = iterate.final_state();
        phi_cur = u_end.clone();
        psi_cur = ut_end.clone();
        t_cur += length;
    }

    let reached = t_cur.min(horizon);
    Ok(Continuation {
        outcome,
        reached,
        horizon,
        intervals,
        solution: Trajectory::new(times.clone(), values)?,
        derivative: Trajectory::new(times, derivatives)?,
    })
}

/// One amplitude evaluation of the small-data experiment.
#[derive(Clone, Debug, Serialize)]
pub struct SmallDataCheck {
    pub delta: f64,
    pub reached_horizon: bool,
    /// `sup_t (‖u_t‖_{L²} + ‖D¹u‖_{L²})` along the continued solution.
    pub energy_sup: f64,
    /// Same functional along the linear evolution of the same data.
    pub linear_sup: f64,
    /// Reached the horizon with `energy_sup ≤ 2 · linear_sup`.
    pub within_bound: bool,
    pub interval_lengths: Vec<f64>,
}

#[derive(Clone, Debug, Serialize)]
pub struct SmallDataProbe {
    /// Largest probed amplitude whose continuation stayed within bound.
    pub delta_star: f64,
    pub checks: Vec<SmallDataCheck>,
    /// The same check at ten times the accepted amplitude.
    pub at_ten_delta: SmallDataCheck,
    pub bound_violated_at_ten: bool,
    pub intervals_shrink_at_ten: bool,
}

fn energy_functional(solution: &Trajectory, derivative: &Trajectory) -> Result<f64, PicardError> {
    let mut sup = 0.0f64;
    for (u, ut) in solution.fields.iter().zip(&derivative.fields) {
        sup = sup.max(sobolev_norm(ut, 0.0)? + sobolev_norm(u, 1.0)?);
    }
    Ok(sup)
}

fn small_data_check(
    phi_unit: &Field,
    psi_unit: &Field,
    delta: f64,
    linear_sup_unit: f64,
    horizon: f64,
    cfg: &PicardConfig,
    problem: &PicardProblem,
) -> Result<SmallDataCheck, PicardError> {
    let phi = phi_unit.scaled(delta);
    let psi = psi_unit.scaled(delta);
    let run = continue_solution(&phi, &psi, horizon, cfg, problem)?;
    let reached_horizon = run.outcome == ContinuationOutcome::ReachedHorizon;
    let energy_sup = energy_functional(&run.solution, &run.derivative)?;
    let linear_sup = delta * linear_sup_unit;
    Ok(SmallDataCheck {
        delta,
        reached_horizon,
        energy_sup,
        linear_sup,
        within_bound: reached_horizon && energy_sup <= 2.0 * linear_sup,
        interval_lengths: run.intervals.iter().map(|i| i.length).collect(),
    })
}

fn shrinks_monotonically(lengths: &[f64]) -> bool {
    lengths.len() >= 2
        && lengths.windows(2).all(|w| w[1] <= w[0] * (1.0 + 1e-9))
        && lengths[lengths.len() - 1] < 0.9 * lengths[0]
}

/// Bisect for the largest amplitude `δ*` whose continuation of `δ·(φ, ψ)`
/// reaches the horizon with the sup-in-time energy functional at most
/// twice its linear-evolution value, then rerun at `10·δ*` and report how
/// the bound fails there.
pub fn small_data_threshold(
    phi_unit: &Field,
    psi_unit: &Field,
    horizon: f64,
    cfg: &PicardConfig,
    problem: &PicardProblem,
    delta0: f64,
    refine: usize,
) -> Result<SmallDataProbe, PicardError> {
    cfg.validate()?;
    if !(delta0 > 0.0) || !delta0.is_finite() {
        return Err(PicardError::BadConfig { what: "starting amplitude must be positive" });
    }

    // The linear functional scales linearly in δ; sample it once at δ = 1
    // on a fixed node count.
    let plan = PropagatorPlan::new(problem.equation.grid);
    let nodes = 257;
    let mut linear_sup_unit = 0.0f64;
    for j in 0..nodes {
        let t = horizon * j as f64 / (nodes - 1) as f64;
        let (u, ut) = plan.linear_solve(phi_unit, psi_unit, t);
        linear_sup_unit = linear_sup_unit.max(sobolev_norm(&ut, 0.0)? + sobolev_norm(&u, 1.0)?);
    }

    let mut checks = Vec::new();
    let run = |delta: f64, checks: &mut Vec<SmallDataCheck>| -> Result<bool, PicardError> {
        let check = small_data_check(
            phi_unit,
            psi_unit,
            delta,
            linear_sup_unit,
            horizon,
            cfg,
            problem,
        )?;
        let ok = check.within_bound;
        checks.push(check);
        Ok(ok)
    };

    const MAX_DOUBLINGS: usize = 16;
    const MAX_HALVINGS: usize = 40;
    let (mut lo, mut hi);
    if run(delta0, &mut checks)? {
        lo = delta0;
        hi = delta0;
        let mut bracketed = false;
        for _ in 0..MAX_DOUBLINGS {
            let next = lo * 2.0;
            if run(next, &mut checks)? {
                lo = next;
            } else {
                hi = next;
                bracketed = true;
                break;
            }
        }
        if !bracketed {
            hi = lo; // accepted everywhere probed; treat the cap as δ*
        }
    } else {
        hi = delta0;
        let mut bracket = None;
        for _ in 0..MAX_HALVINGS {
            let next = hi / 2.0;
            if run(next, &mut checks)? {
                bracket = Some(next);
                break;
            }
            hi = next;
        }
        match bracket {
            Some(passing) => lo = passing,
            None => return Err(PicardError::ThresholdNotFound { smallest: hi }),
        }
    }

    if hi > lo {
        for _ in 0..refine {
            let mid = (lo * hi).sqrt();
            if run(mid, &mut checks)? {
                lo = mid;
            } else {
                hi = mid;
            }
        }
    }

    let delta_star = lo;
    let at_ten_delta = small_data_check(
        phi_unit,
        psi_unit,
        10.0 * delta_star,
        linear_sup_unit,
        horizon,
        cfg,
        problem,
    )?;
    let bound_violated_at_ten = !at_ten_delta.within_bound;
    let intervals_shrink_at_ten = shrinks_monotonically(&at_ten_delta.interval_lengths);
    Ok(SmallDataProbe {
        delta_star,
        checks,
        at_ten_delta,
        bound_violated_at_ten,
        intervals_shrink_at_ten,
    })
}
