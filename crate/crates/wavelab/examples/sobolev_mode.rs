//! Local solving at fractional regularity: the ball lives in the sum of the
//! order-zero and order-s pair norms, the ball radius comes from the
//! homogeneous Sobolev data norm, and the working pair set is derived from
//! the exponent calculus instead of the fixed defaults.

use wavelab::data;
use wavelab::dynamics::Equation;
use wavelab::exponents::{rat, validate_params, Params, Regime};
use wavelab::grid::{GridMode, GridSpec};
use wavelab::picard::{
    solve_local, working_pairs, BallPolicy, PicardConfig, PicardProblem, WorkingNorm,
};

fn main() {
    // Parameters inside the fractional-regularity window: s must sit in
    // (0, b - 1/2) and alpha below (4 - 2b)/(3 - 2s) = 4/5.
    let (alpha, b, s) = (rat(1, 2), rat(1, 1), rat(1, 4));
    let params = Params::new(alpha.clone(), b.clone(), s.clone(), 3).unwrap();
    let report = validate_params(&params, Regime::SobolevLocal);
    print!("{}", report);
    assert!(report.eligible());

    let gamma = rat(29, 10);
    let pairs = working_pairs(&alpha, &gamma, &b).unwrap();
    println!("working pair set ({} pairs):", pairs.len());
    for pair in &pairs {
        println!("  (q = {}, r = {}) -> spatial exponent {}", pair.q, pair.r, pair.norm_space_exponent());
    }

    let grid = GridSpec::new(GridMode::Radial1d, 256, 16.0).unwrap();
    let equation = Equation::new(grid, 0.5, 1.0, grid.spacing()).unwrap();
    let phi = data::reduced_bump(&grid, 0.05, 2.0);
    let psi = data::reduced_bump(&grid, 0.025, 2.0);

    let problem = PicardProblem {
        equation,
        working_norm: WorkingNorm::Hs { s: 0.25 },
        pairs,
        gamma: Some(2.9),
    };
    let cfg = PicardConfig {
        t: 0.25,
        max_iters: 30,
        tol: 1e-11,
        a_policy: BallPolicy::Auto,
        snapshots: 17,
    };
    let (iterate, report) = solve_local(&phi, &psi, &cfg, &problem).unwrap();
    println!(
        "fractional-regularity solve on [0, {}]: {} after {} iterations (max ratio {:.4})",
        cfg.t,
        report.outcome.label(),
        report.iterations.len(),
        report.max_ratio()
    );
    let (u, _) = iterate.final_state();
    println!("final state l2 = {:.6e}, ball radius was {:.4e}", u.l2_norm(), report.ball_radius);
}
