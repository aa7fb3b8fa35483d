//! Small data live globally: bisect for the largest amplitude whose
//! interval-chained continuation reaches a fixed horizon with energy no
//! more than twice the linear evolution's, then watch the certificate fail
//! at ten times that amplitude.

use wavelab::data;
use wavelab::dynamics::Equation;
use wavelab::grid::{GridMode, GridSpec};
use wavelab::norms::default_pairs;
use wavelab::picard::{
    small_data_threshold, BallPolicy, PicardConfig, PicardProblem, WorkingNorm,
};

fn main() {
    let grid = GridSpec::new(GridMode::Radial1d, 256, 16.0).unwrap();
    let equation = Equation::new(grid, 1.0, 0.25, grid.spacing()).unwrap();
    let phi_unit = data::reduced_bump(&grid, 1.0, 2.0);
    let psi_unit = data::reduced_bump(&grid, 0.5, 2.0);

    let problem = PicardProblem {
        equation,
        working_norm: WorkingNorm::L2,
        pairs: default_pairs(),
        gamma: Some(4.0),
    };
    let cfg = PicardConfig {
        t: 0.5,
        max_iters: 30,
        tol: 1e-10,
        a_policy: BallPolicy::Auto,
        snapshots: 17,
    };

    let horizon = 5.0;
    let probe =
        small_data_threshold(&phi_unit, &psi_unit, horizon, &cfg, &problem, 0.05, 4).unwrap();

    println!("horizon {}, bisected over {} amplitude checks", horizon, probe.checks.len());
    for check in &probe.checks {
        println!(
            "  delta = {:.5}: reached = {}, energy sup {:.4e} vs 2x linear {:.4e} -> within = {}",
            check.delta,
            check.reached_horizon,
            check.energy_sup,
            2.0 * check.linear_sup,
            check.within_bound
        );
    }
    println!("delta* = {:.5}", probe.delta_star);

    let ten = &probe.at_ten_delta;
    println!(
        "at 10 delta* = {:.5}: reached = {}, energy sup {:.4e} vs 2x linear {:.4e}",
        ten.delta,
        ten.reached_horizon,
        ten.energy_sup,
        2.0 * ten.linear_sup
    );
    println!(
        "  bound violated: {}, continuation intervals shrink monotonically: {}",
        probe.bound_violated_at_ten, probe.intervals_shrink_at_ten
    );
    println!(
        "  first/last interval: {:.4} / {:.4}",
        ten.interval_lengths.first().copied().unwrap_or(f64::NAN),
        ten.interval_lengths.last().copied().unwrap_or(f64::NAN)
    );
}
