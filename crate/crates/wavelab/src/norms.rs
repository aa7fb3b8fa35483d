//! Norm laboratory: Sobolev and Besov norms of single fields, mixed
//! space-time norms of sampled trajectories, and the sup-over-pairs norm
//! built from optimal exponent pairs.
//!
//! A trajectory here is a finite list of snapshots on a shared grid with
//! strictly increasing times. Time integrals use trapezoid quadrature on
//! that snapshot grid; `q = ∞` takes the maximum over snapshots. Spatial
//! norms are grid-quadrature Lebesgue norms, with a fractional derivative
//! applied first when the smoothness order is positive.
//!
//! Convention for order zero: `s = 0` means the plain field. The operator
//! `D^0` annihilates the mean (a property of the multiplier, which ignores
//! constants at every order), but the `s = 0` member of the norm scale is
//! the ordinary Lebesgue norm, so norms never apply `D^0`.

use std::fmt;

use crate::exponents::{AdmissiblePair, ExtRat, PairClass};
use crate::fft::{block_project, fractional_derivative, resolvable_dyads};
use crate::grid::{Field, GridSpec};

#[derive(Clone, Debug, PartialEq)]
pub enum NormError {
    EmptyTrajectory,
    LengthMismatch { times: usize, fields: usize },
    NonIncreasingTimes { index: usize },
    NonFiniteTime { index: usize },
    GridMismatch { index: usize },
    TimeGridMismatch,
    BadExponent { what: &'static str, value: f64 },
    NegativeOrder { s: f64 },
    EmptyPairSet,
    NotOptimal { pair: String, why: String },
    EmptyDyadRange { j_min: i32, j_max: i32 },
    DyadOutOfBand { j: i32, lo: i32, hi: i32 },
}

impl fmt::Display for NormError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            NormError::EmptyTrajectory => f.write_str("trajectory has no snapshots"),
            NormError::LengthMismatch { times, fields } => {
                write!(f, "{} times but {} fields", times, fields)
            }
            NormError::NonIncreasingTimes { index } => {
                write!(f, "times must be strictly increasing (violated at index {})", index)
            }
            NormError::NonFiniteTime { index } => {
                write!(f, "non-finite time at index {}", index)
            }
            NormError::GridMismatch { index } => {
                write!(f, "snapshot {} lives on a different grid", index)
            }
            NormError::TimeGridMismatch => {
                f.write_str("trajectories are sampled at different times")
            }
            NormError::BadExponent { what, value } => {
                write!(f, "{} exponent must be >= 1, got {}", what, value)
            }
            NormError::NegativeOrder { s } => {
                write!(f, "smoothness order must be >= 0, got {}", s)
            }
            NormError::EmptyPairSet => f.write_str("pair set is empty"),
            NormError::NotOptimal { pair, why } => {
                write!(f, "pair {} is not optimal: {}", pair, why)
            }
            NormError::EmptyDyadRange { j_min, j_max } => {
                write!(f, "dyadic range [{}, {}] is empty", j_min, j_max)
            }
            NormError::DyadOutOfBand { j, lo, hi } => {
                write!(f, "dyad {} outside the resolvable band [{}, {}]", j, lo, hi)
            }
        }
    }
}

impl std::error::Error for NormError {}

/// A sampled trajectory: snapshots on one grid at strictly increasing times.
#[derive(Clone, Debug)]
pub struct Trajectory {
    pub times: Vec<f64>,
    pub fields: Vec<Field>,
}

impl Trajectory {
    pub fn new(times: Vec<f64>, fields: Vec<Field>) -> Result<Trajectory, NormError> {
        if times.is_empty() {
            return Err(NormError::EmptyTrajectory);
        }
        if times.len() != fields.len() {
            return Err(NormError::LengthMismatch { times: times.len(), fields: fields.len() });
        }
        for (i, t) in times.iter().enumerate() {
            if !t.is_finite() {
                return Err(NormError::NonFiniteTime { index: i });
            }
            if i > 0 && *t <= times[i - 1] {
                return Err(NormError::NonIncreasingTimes { index: i });
            }
        }
        let grid = fields[0].grid;
        for (i, field) in fields.iter().enumerate() {
            if field.grid != grid || field.values.len() != grid.len() {
                return Err(NormError::GridMismatch { index: i });
            }
        }
        Ok(Trajectory { times, fields })
    }

    pub fn grid(&self) -> GridSpec {
        self.fields[0].grid
    }

    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    /// Length of the sampled time interval.
    pub fn span(&self) -> f64 {
        self.times[self.times.len() - 1] - self.times[0]
    }

    /// Snapshot-wise difference of two trajectories sampled at the same
    /// times. This is what contraction distances are computed from.
    pub fn difference(&self, other: &Trajectory) -> Result<Trajectory, NormError> {
        if self.times != other.times {
            return Err(NormError::TimeGridMismatch);
        }
        let fields = self
            .fields
            .iter()
            .zip(other.fields.iter())
            .map(|(a, b)| a.sub(b))
            .collect::<Vec<_>>();
        Trajectory::new(self.times.clone(), fields)
    }
}

/// Exponent pair for a mixed norm `L^q_t L^p_x`; either slot may be `∞`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MixedNormSpec {
    pub q: f64,
    pub p: f64,
}

impl MixedNormSpec {
    pub fn new(q: f64, p: f64) -> Result<MixedNormSpec, NormError> {
        if !(q >= 1.0) {
            return Err(NormError::BadExponent { what: "time", value: q });
        }
        if !(p >= 1.0) {
            return Err(NormError::BadExponent { what: "space", value: p });
        }
        Ok(MixedNormSpec { q, p })
    }
}

fn spatial_norm(field: &Field, p: f64, s: f64) -> Result<f64, NormError> {
    let smoothed;
    let target = if s > 0.0 {
        smoothed = fractional_derivative(field, s)
            .map_err(|_| NormError::NegativeOrder { s })?;
        &smoothed
    } else {
        field
    };
    Ok(if p.is_infinite() { target.linf_norm() } else { target.lp_norm(p) })
}

/// Trapezoid weights of a (possibly nonuniform) strictly increasing grid.
fn trapezoid_weights(times: &[f64]) -> Vec<f64> {
    let m = times.len();
    let mut w = vec![0.0; m];
    for i in 0..m.saturating_sub(1) {
        let half = 0.5 * (times[i + 1] - times[i]);
        w[i] += half;
        w[i + 1] += half;
    }
    w
}

/// Mixed space-time norm `‖ D^s u ‖_{L^q_t L^p_x}` over the sampled
/// interval. Time integration is trapezoid quadrature on the snapshot
/// times; `q = ∞` is the maximum over snapshots. A single-snapshot
/// trajectory has a zero-length time interval, so every finite-`q` norm
/// of it is zero.
pub fn mixed_norm(traj: &Trajectory, spec: &MixedNormSpec, s: f64) -> Result<f64, NormError> {
    if !(s >= 0.0) {
        return Err(NormError::NegativeOrder { s });
    }
    let mut slices = Vec::with_capacity(traj.len());
    for field in &traj.fields {
        slices.push(spatial_norm(field, spec.p, s)?);
    }
    if spec.q.is_infinite() {
        return Ok(slices.iter().fold(0.0, |m, v| m.max(*v)));
    }
    let weights = trapezoid_weights(&traj.times);
    let sum: f64 = slices.iter().zip(&weights).map(|(v, w)| w * v.powf(spec.q)).sum();
    Ok(sum.powf(1.0 / spec.q))
}

/// The two exact optimal pairs every run can use: `(q, r) = (∞, 2)` and
/// `(4, 4)`. Their mixed norms are `L^∞_t L^6_x` and `L^4_t L^{12}_x`
/// (spatial exponent `3r`).
pub fn default_pairs() -> Vec<AdmissiblePair> {
    let sup = AdmissiblePair::new(ExtRat::Infinity, ExtRat::finite(2, 1), 3)
        .expect("constant pair");
    let four = AdmissiblePair::new(ExtRat::finite(4, 1), ExtRat::finite(4, 1), 3)
        .expect("constant pair");
    vec![sup, four]
}

/// Sup-over-pairs norm: the maximum of `‖ D^s u ‖_{L^q_t L^{3r}_x}` over a
/// finite set of exponent pairs, each of which must classify as optimal.
pub fn w_norm(traj: &Trajectory, pairs: &[AdmissiblePair], s: f64) -> Result<f64, NormError> {
    if pairs.is_empty() {
        return Err(NormError::EmptyPairSet);
    }
    let mut worst = 0.0f64;
    for pair in pairs {
        match pair.classify() {
            PairClass::Optimal => {}
            PairClass::Admissible => {
                return Err(NormError::NotOptimal {
                    pair: pair.to_string(),
                    why: "the scaling identity 2/q = gamma(r) is strict".to_string(),
                });
            }
            PairClass::NotAdmissible { violations } => {
                let why = violations
                    .iter()
                    .map(|v| v.to_string())
                    .collect::<Vec<_>>()
                    .join(", ");
                return Err(NormError::NotOptimal { pair: pair.to_string(), why });
            }
        }
        let spec = MixedNormSpec::new(pair.q.to_f64(), pair.norm_space_exponent().to_f64())?;
        worst = worst.max(mixed_norm(traj, &spec, s)?);
    }
    Ok(worst)
}

/// Homogeneous Sobolev norm `‖ D^s f ‖_{L²}`, evaluated spectrally. At
/// `s = 0` this is the plain `L²` norm, zero mode included; see the module
/// notes on the order-zero convention.
pub fn sobolev_norm(f: &Field, s: f64) -> Result<f64, NormError> {
    if !(s >= 0.0) {
        return Err(NormError::NegativeOrder { s });
    }
    let spectral = crate::fft::forward(f);
    let grid = f.grid;
    let xi = grid.mode_xi_abs();
    let sum: f64 = spectral
        .coeffs
        .iter()
        .zip(&xi)
        .map(|(c, xi)| weight_sq(*xi, s) * c.norm_sqr())
        .sum();
    Ok((sum * grid.box_length.powi(grid.dim() as i32)).sqrt())
}

fn weight_sq(xi: f64, s: f64) -> f64 {
    if s == 0.0 {
        1.0
    } else if xi == 0.0 {
        0.0
    } else {
        xi.powf(2.0 * s)
    }
}

/// Parameters of a Besov norm `‖f‖ = ( Σ_j (2^{jσ} ‖P_j f‖_{L^p})^q )^{1/q}`
/// over a dyadic range the grid can resolve.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BesovSpec {
    pub sigma: f64,
    pub p: f64,
    pub q: f64,
    pub j_min: i32,
    pub j_max: i32,
}

impl BesovSpec {
    pub fn new(
        grid: &GridSpec,
        sigma: f64,
        p: f64,
        q: f64,
        j_min: i32,
        j_max: i32,
    ) -> Result<BesovSpec, NormError> {
        if !sigma.is_finite() {
            return Err(NormError::BadExponent { what: "smoothness", value: sigma });
        }
        if !(p >= 1.0) {
            return Err(NormError::BadExponent { what: "space", value: p });
        }
        if !(q >= 1.0) {
            return Err(NormError::BadExponent { what: "summation", value: q });
        }
        if j_min > j_max {
            return Err(NormError::EmptyDyadRange { j_min, j_max });
        }
        let band = resolvable_dyads(grid);
        let (lo, hi) = (band[0], band[band.len() - 1]);
        for j in [j_min, j_max] {
            if j < lo || j > hi {
                return Err(NormError::DyadOutOfBand { j, lo, hi });
            }
        }
        Ok(BesovSpec { sigma, p, q, j_min, j_max })
    }

    /// Spec covering every dyad the grid resolves.
    pub fn full_band(grid: &GridSpec, sigma: f64, p: f64, q: f64) -> Result<BesovSpec, NormError> {
        let band = resolvable_dyads(grid);
        BesovSpec::new(grid, sigma, p, q, band[0], band[band.len() - 1])
    }
}

/// Besov norm from dyadic block norms. The block decomposition only
/// resolves the grid's frequency band, so this is the norm of the
/// band-limited part of `f`; spectra concentrated near one dyad reproduce
/// `2^{jσ} ‖P_j f‖_p` exactly.
pub fn besov_norm(f: &Field, spec: &BesovSpec) -> f64 {
    let mut terms = Vec::with_capacity((spec.j_max - spec.j_min + 1) as usize);
    for j in spec.j_min..=spec.j_max {
        let block = block_project(f, j);
        debug_assert!(block.in_band, "spec construction keeps dyads in band");
        let size = if spec.p.is_infinite() {
            block.field.linf_norm()
        } else {
            block.field.lp_norm(spec.p)
        };
        terms.push((spec.sigma * j as f64).exp2() * size);
    }
    if spec.q.is_infinite() {
        terms.iter().fold(0.0, |m, v| m.max(*v))
    } else {
        terms.iter().map(|v| v.powf(spec.q)).sum::<f64>().powf(1.0 / spec.q)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::data::gaussian;
    use crate::fft::filtered;
    use crate::grid::GridMode;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn line_grid(n: usize, box_length: f64) -> GridSpec {
        GridSpec::new(GridMode::Radial1d, n, box_length).unwrap()
    }

    fn random_field(grid: GridSpec, seed: u64) -> Field {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let values = (0..grid.len()).map(|_| rng.gen_range(-1.0..1.0)).collect();
        Field { grid, values }
    }

    fn constant_trajectory(f: &Field, t_end: f64, nodes: usize) -> Trajectory {
        let times = (0..nodes).map(|i| t_end * i as f64 / (nodes - 1) as f64).collect();
        Trajectory::new(times, vec![f.clone(); nodes]).unwrap()
    }

    fn random_trajectory(grid: GridSpec, nodes: usize, seed: u64) -> Trajectory {
        let times = (0..nodes).map(|i| i as f64 * 0.25).collect();
        let fields = (0..nodes).map(|i| random_field(grid, seed * 1000 + i as u64)).collect();
        Trajectory::new(times, fields).unwrap()
    }

    #[test]
    fn trajectory_validation_catches_shape_problems() {
        let grid = line_grid(16, 4.0);
        let f = Field::zeros(grid);
        assert_eq!(
            Trajectory::new(vec![], vec![]).unwrap_err(),
            NormError::EmptyTrajectory
        );
        assert_eq!(
            Trajectory::new(vec![0.0, 1.0], vec![f.clone()]).unwrap_err(),
            NormError::LengthMismatch { times: 2, fields: 1 }
        );
        assert_eq!(
            Trajectory::new(vec![0.0, 0.0], vec![f.clone(), f.clone()]).unwrap_err(),
            NormError::NonIncreasingTimes { index: 1 }
        );
        let other = Field::zeros(line_grid(32, 4.0));
        assert_eq!(
            Trajectory::new(vec![0.0, 1.0], vec![f.clone(), other]).unwrap_err(),
            NormError::GridMismatch { index: 1 }
        );
        let ok = Trajectory::new(vec![0.0, 0.5, 2.0], vec![f.clone(), f.clone(), f]).unwrap();
        assert_eq!(ok.len(), 3);
        assert!((ok.span() - 2.0).abs() < 1e-15);
    }

    #[test]
    fn difference_needs_matching_times() {
        let grid = line_grid(16, 4.0);
        let a = constant_trajectory(&random_field(grid, 1), 1.0, 3);
        let mut b = a.clone();
        b.times[1] += 1e-3;
        assert_eq!(a.difference(&b).unwrap_err(), NormError::TimeGridMismatch);
        let d = a.difference(&a).unwrap();
        for f in &d.fields {
            assert_eq!(f.linf_norm(), 0.0);
        }
    }

    // A trajectory constant in time: the sup norm is the spatial norm and
    // the L^q_t norm picks up exactly span^{1/q}.
    #[test]
    fn constant_trajectory_reduces_to_spatial_norm() {
        let grid = line_grid(64, 8.0);
        let f = random_field(grid, 7);
        let traj = constant_trajectory(&f, 2.0, 9);

        let sup = MixedNormSpec::new(f64::INFINITY, 2.0).unwrap();
        assert!((mixed_norm(&traj, &sup, 0.0).unwrap() - f.l2_norm()).abs() < 1e-13);

        let l4 = MixedNormSpec::new(4.0, 3.0).unwrap();
        let expect = f.lp_norm(3.0) * traj.span().powf(0.25);
        assert!((mixed_norm(&traj, &l4, 0.0).unwrap() - expect).abs() < 1e-12);
    }

    // Frozen oracle: ‖exp(-|x|²)‖_{L²(R³)} = (π/2)^{3/4}, constant in time
    // over [0, 1], so the (2, 2) mixed norm equals the same number.
    #[test]
    fn gaussian_l2_l2_matches_closed_form() {
        let grid = GridSpec::new(GridMode::Full3d, 64, 16.0).unwrap();
        let f = gaussian(&grid, 1.0, 1.0);
        let traj = constant_trajectory(&f, 1.0, 5);
        let spec = MixedNormSpec::new(2.0, 2.0).unwrap();
        let expect = (std::f64::consts::PI / 2.0).powf(0.75);
        assert!((mixed_norm(&traj, &spec, 0.0).unwrap() - expect).abs() < 1e-8);
    }

    #[test]
    fn mixed_norm_is_homogeneous() {
        let grid = line_grid(64, 8.0);
        let traj = random_trajectory(grid, 5, 11);
        let scaled = Trajectory::new(
            traj.times.clone(),
            traj.fields.iter().map(|f| f.scaled(-3.0)).collect(),
        )
        .unwrap();
        for (q, p) in [(2.0, 2.0), (4.0, 12.0), (f64::INFINITY, 6.0), (3.0, f64::INFINITY)] {
            let spec = MixedNormSpec::new(q, p).unwrap();
            for s in [0.0, 0.5] {
                let base = mixed_norm(&traj, &spec, s).unwrap();
                let big = mixed_norm(&scaled, &spec, s).unwrap();
                assert!(
                    (big - 3.0 * base).abs() <= 1e-12 * (1.0 + big),
                    "q = {}, p = {}, s = {}: {} vs {}",
                    q,
                    p,
                    s,
                    big,
                    3.0 * base
                );
            }
        }
    }

    #[test]
    fn mixed_norm_satisfies_triangle_inequality() {
        let grid = line_grid(64, 8.0);
        let specs = [
            MixedNormSpec::new(2.0, 2.0).unwrap(),
            MixedNormSpec::new(f64::INFINITY, 4.0).unwrap(),
            MixedNormSpec::new(3.0, 3.0).unwrap(),
        ];
        for seed in 0..100u64 {
            let a = random_trajectory(grid, 4, 2 * seed);
            let b = random_trajectory(grid, 4, 2 * seed + 1);
            let sum = Trajectory::new(
                a.times.clone(),
                a.fields.iter().zip(&b.fields).map(|(x, y)| x.add(y)).collect(),
            )
            .unwrap();
            for spec in &specs {
                for s in [0.0, 0.5] {
                    let na = mixed_norm(&a, spec, s).unwrap();
                    let nb = mixed_norm(&b, spec, s).unwrap();
                    let nsum = mixed_norm(&sum, spec, s).unwrap();
                    assert!(
                        nsum <= na + nb + 1e-12 * (1.0 + na + nb),
                        "seed {}: {} > {} + {}",
                        seed,
                        nsum,
                        na,
                        nb
                    );
                }
            }
        }
    }

    #[test]
    fn mixed_norm_rejects_bad_parameters() {
        let grid = line_grid(16, 4.0);
        let traj = constant_trajectory(&Field::zeros(grid), 1.0, 2);
        assert!(MixedNormSpec::new(0.5, 2.0).is_err());
        assert!(MixedNormSpec::new(2.0, f64::NAN).is_err());
        let spec = MixedNormSpec::new(2.0, 2.0).unwrap();
        assert_eq!(
            mixed_norm(&traj, &spec, -1.0).unwrap_err(),
            NormError::NegativeOrder { s: -1.0 }
        );
    }

    // The sup-over-pairs norm uses the 3r spatial convention: the pair
    // (∞, 2) measures sup_t L^6, not sup_t L².
    #[test]
    fn pair_norm_uses_three_r_spatial_exponent() {
        let grid = line_grid(64, 8.0);
        let f = random_field(grid, 3);
        let traj = constant_trajectory(&f, 1.0, 4);
        let sup_pair = vec![AdmissiblePair::new(ExtRat::Infinity, ExtRat::finite(2, 1), 3).unwrap()];
        let got = w_norm(&traj, &sup_pair, 0.0).unwrap();
        assert!((got - f.lp_norm(6.0)).abs() < 1e-12);
        assert!((got - f.l2_norm()).abs() > 1e-3, "should differ from plain L2");
    }

    #[test]
    fn pair_norm_takes_maximum_over_the_set() {
        let grid = line_grid(64, 8.0);
        let traj = random_trajectory(grid, 5, 23);
        let pairs = default_pairs();
        let all = w_norm(&traj, &pairs, 0.5).unwrap();
        let mut best = 0.0f64;
        for pair in &pairs {
            let single = w_norm(&traj, std::slice::from_ref(pair), 0.5).unwrap();
            assert!(single <= all + 1e-15);
            best = best.max(single);
        }
        assert!((all - best).abs() < 1e-15);
    }

    #[test]
    fn pair_norm_rejects_non_optimal_pairs() {
        let grid = line_grid(16, 4.0);
        let traj = constant_trajectory(&Field::zeros(grid), 1.0, 2);
        assert_eq!(w_norm(&traj, &[], 0.0).unwrap_err(), NormError::EmptyPairSet);

        let merely_admissible = AdmissiblePair::new(ExtRat::finite(6, 1), ExtRat::finite(6, 1), 3).unwrap();
        match w_norm(&traj, &[merely_admissible], 0.0).unwrap_err() {
            NormError::NotOptimal { why, .. } => assert!(why.contains("strict")),
            other => panic!("expected NotOptimal, got {:?}", other),
        }

        let inadmissible = AdmissiblePair::new(ExtRat::finite(2, 1), ExtRat::finite(2, 1), 3).unwrap();
        match w_norm(&traj, &[inadmissible], 0.0).unwrap_err() {
            NormError::NotOptimal { why, .. } => assert!(why.contains("2/q > gamma(r)")),
            other => panic!("expected NotOptimal, got {:?}", other),
        }
    }

    #[test]
    fn default_pairs_are_optimal() {
        for pair in default_pairs() {
            assert_eq!(pair.classify(), PairClass::Optimal);
        }
    }

    // Single mode cos(ξx): D^s scales it by ξ^s, so the Sobolev norm is
    // ξ^s times the L² norm.
    #[test]
    fn sobolev_norm_of_single_mode() {
        let grid = line_grid(64, 2.0 * std::f64::consts::PI);
        let k = 4.0;
        let f = grid.evaluate(|x| (k * x[0]).cos());
        for s in [0.0, 0.5, 1.0, 2.0] {
            let got = sobolev_norm(&f, s).unwrap();
            let expect = k.powf(s) * f.l2_norm();
            assert!((got - expect).abs() < 1e-10 * expect, "s = {}: {} vs {}", s, got, expect);
        }
    }

    // Order zero keeps the mean: the norm scale at s = 0 is plain L²,
    // unlike the operator D^0 which removes constants.
    #[test]
    fn sobolev_norm_order_zero_keeps_the_mean() {
        let grid = line_grid(32, 4.0);
        let f = grid.evaluate(|_| 2.5);
        let got = sobolev_norm(&f, 0.0).unwrap();
        assert!((got - f.l2_norm()).abs() < 1e-12);
        assert!(got > 1.0);
        let d0 = fractional_derivative(&f, 0.0).unwrap();
        assert!(d0.linf_norm() < 1e-12, "operator D^0 annihilates constants");
    }

    #[test]
    fn sobolev_norm_agrees_with_derivative_plus_l2() {
        let grid = line_grid(128, 8.0);
        let f = random_field(grid, 41);
        for s in [0.5, 1.0, 1.5] {
            let spectral = sobolev_norm(&f, s).unwrap();
            let physical = fractional_derivative(&f, s).unwrap().l2_norm();
            assert!((spectral - physical).abs() < 1e-10 * (1.0 + spectral));
        }
    }

    #[test]
    fn besov_spec_validates_the_dyad_range() {
        let grid = line_grid(256, 2.0 * std::f64::consts::PI);
        let band = resolvable_dyads(&grid);
        let (lo, hi) = (band[0], band[band.len() - 1]);
        assert!(BesovSpec::new(&grid, 0.0, 2.0, 2.0, lo, hi).is_ok());
        assert_eq!(
            BesovSpec::new(&grid, 0.0, 2.0, 2.0, hi, lo).unwrap_err(),
            NormError::EmptyDyadRange { j_min: hi, j_max: lo }
        );
        assert_eq!(
            BesovSpec::new(&grid, 0.0, 2.0, 2.0, lo - 1, hi).unwrap_err(),
            NormError::DyadOutOfBand { j: lo - 1, lo, hi }
        );
        assert!(BesovSpec::new(&grid, f64::NAN, 2.0, 2.0, lo, hi).is_err());
        let full = BesovSpec::full_band(&grid, 1.0, 2.0, 1.0).unwrap();
        assert_eq!((full.j_min, full.j_max), (lo, hi));
    }

    // A mode sitting exactly on one dyadic scale lands in exactly one
    // block with weight one, so the Besov norm is 2^{jσ} times its L^p
    // norm, for every p and q.
    #[test]
    fn besov_norm_of_a_dyadic_mode_is_exact() {
        let grid = line_grid(256, 2.0 * std::f64::consts::PI);
        let f = grid.evaluate(|x| (4.0 * x[0]).cos());
        for (sigma, p) in [(0.5, 2.0), (1.0, 4.0), (0.0, f64::INFINITY)] {
            let spec = BesovSpec::full_band(&grid, sigma, p, 2.0).unwrap();
            let got = besov_norm(&f, &spec);
            let base = if p.is_infinite() { f.linf_norm() } else { f.lp_norm(p) };
            let expect = (sigma * 2.0).exp2() * base;
            assert!(
                (got - expect).abs() < 1e-10 * (1.0 + expect),
                "sigma = {}, p = {}: {} vs {}",
                sigma,
                p,
                got,
                expect
            );
        }
    }

    // For band-limited fields the blocks overlap in pairs that sum to one,
    // so the (0, 2, 2) Besov norm sits between √(1/2) and 1 times the L²
    // norm. Both bounds are sharp over spectra, hence the honest interval.
    #[test]
    fn besov_zero_two_two_brackets_the_l2_norm() {
        let grid = line_grid(256, 2.0 * std::f64::consts::PI);
        let band = resolvable_dyads(&grid);
        let (lo, hi) = ((band[0] as f64).exp2(), (band[band.len() - 1] as f64).exp2());
        for seed in 0..20u64 {
            let raw = random_field(grid, 100 + seed);
            let f = filtered(&raw, |xi| if xi >= lo && xi <= hi { 1.0 } else { 0.0 });
            assert!(f.linf_norm() > 0.05, "degenerate sample");
            let spec = BesovSpec::full_band(&grid, 0.0, 2.0, 2.0).unwrap();
            let ratio = besov_norm(&f, &spec) / f.l2_norm();
            assert!(
                (0.5f64.sqrt() - 1e-9..=1.0 + 1e-9).contains(&ratio),
                "seed {}: ratio {}",
                seed,
                ratio
            );
        }
    }

    #[test]
    fn besov_infinite_summation_takes_the_peak_block() {
        let grid = line_grid(256, 2.0 * std::f64::consts::PI);
        let f = grid.evaluate(|x| (4.0 * x[0]).cos() + 0.125 * (32.0 * x[0]).cos());
        let sup = BesovSpec::full_band(&grid, 0.0, 2.0, f64::INFINITY).unwrap();
        let got = besov_norm(&f, &sup);
        let single = grid.evaluate(|x| (4.0 * x[0]).cos());
        assert!((got - single.lp_norm(2.0)).abs() < 1e-9);
    }
}
