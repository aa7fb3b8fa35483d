//! Two solvers, one equation: the Picard fixed point built from exact
//! linear propagation plus Duhamel quadrature, and the leapfrog time
//! stepper. They share no discretization in time, so agreement in the
//! sup-in-time L2 distance is strong evidence both solve the same dynamics.
//! Refining both should shrink the gap at second order.

use wavelab::data;
use wavelab::dynamics::Equation;
use wavelab::grid::{Field, GridMode, GridSpec};
use wavelab::norms::default_pairs;
use wavelab::picard::{solve_local, BallPolicy, PicardConfig, PicardProblem, WorkingNorm};

const HORIZON: f64 = 0.5;

/// Sup over the shared snapshot nodes of the L2 gap between the Picard
/// trajectory and a fresh leapfrog run taking `per_node` steps per node.
fn oracle_gap(equation: &Equation, phi: &Field, psi: &Field, snapshots: usize, per_node: u64) -> f64 {
    let cfg = PicardConfig {
        t: HORIZON,
        max_iters: 40,
        tol: 1e-12,
        a_policy: BallPolicy::Auto,
        snapshots,
    };
    let problem = PicardProblem {
        equation: equation.clone(),
        working_norm: WorkingNorm::L2,
        pairs: default_pairs(),
        gamma: Some(4.0),
    };
    let (iterate, report) = solve_local(phi, psi, &cfg, &problem).unwrap();
    assert!(report.converged(), "picard must converge for the comparison");

    // Node spacing and step size are powers of two over the horizon, so
    // every snapshot time is hit exactly.
    let dt = HORIZON / ((snapshots - 1) as f64 * per_node as f64);
    let mut integrator = equation.integrator(phi.clone(), psi.clone(), dt).unwrap();
    let mut worst = 0.0f64;
    for node in 0..snapshots {
        if node > 0 {
            integrator.run_steps(per_node).unwrap();
        }
        let (u, _) = integrator.state();
        let mut gap = iterate.solution.fields[node].clone();
        gap.axpy(-1.0, u);
        worst = worst.max(gap.l2_norm());
    }
    worst
}

fn main() {
    let grid = GridSpec::new(GridMode::Radial1d, 256, 16.0).unwrap();
    let equation = Equation::new(grid, 1.0, 0.25, grid.spacing()).unwrap();
    let phi = data::reduced_bump(&grid, 0.1, 2.0);
    let psi = data::reduced_bump(&grid, 0.05, 2.0);

    // Refine the Picard quadrature (more nodes) and the leapfrog step
    // together; the gap between the two solvers should fall at the slower
    // of the two orders, which is 2.
    let mut previous: Option<f64> = None;
    for snapshots in [17usize, 33, 65] {
        let gap = oracle_gap(&equation, &phi, &psi, snapshots, 8);
        let dt = HORIZON / ((snapshots - 1) as f64 * 8.0);
        match previous {
            None => println!("nodes {:>3}, dt {:.2e}: sup-t L2 gap {:.4e}", snapshots, dt, gap),
            Some(last) => println!(
                "nodes {:>3}, dt {:.2e}: sup-t L2 gap {:.4e} (observed order {:.2})",
                snapshots,
                dt,
                gap,
                (last / gap).log2()
            ),
        }
        previous = Some(gap);
    }
}
