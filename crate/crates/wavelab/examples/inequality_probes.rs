//! Fire every bounded-ratio probe once at desk scale. Each probe samples
//! random data, forms the ratio LHS/RHS of one inequality the contraction
//! argument rests on, and passes when the worst ratio shows no growth trend
//! as the sample family quadruples.

use wavelab::grid::{GridMode, GridSpec};
use wavelab::probes::{bounded_ratio_pass, growth_slope, run_probe, ProbeName, ProbeSpec};

fn main() {
    let line = GridSpec::new(GridMode::Radial1d, 256, 8.0).unwrap();
    let volume = GridSpec::new(GridMode::Full3d, 32, 16.0).unwrap();

    println!("{:<22} {:>7} {:>12} {:>12} {:>8} {:>6}", "probe", "samples", "max ratio", "4x ratio", "slope", "pass");
    for name in ProbeName::all() {
        // Estimates tied to three-dimensional scaling need the volume grid;
        // the pointwise product and chain rules are dimension-agnostic, so
        // the fast line grid serves.
        let (grid, count) = match name {
            ProbeName::ProductRule | ProbeName::ChainRule | ProbeName::BesovEmbedding => {
                (line, 24)
            }
            _ => (volume, 6),
        };
        let mut spec = ProbeSpec::new(grid, count, 2024);
        spec.snapshots = 9;
        let small = run_probe(name, &spec).unwrap();
        let large = run_probe(name, &ProbeSpec { count: 4 * count, ..spec }).unwrap();
        let slope = growth_slope(&small, &large);
        let pass = bounded_ratio_pass(&small, &large);
        println!(
            "{:<22} {:>7} {:>12.5} {:>12.5} {:>8.4} {:>6}",
            name.label(),
            count,
            small.max_ratio,
            large.max_ratio,
            slope,
            pass
        );
        if let Some(drift) = large.dilation_drift {
            println!("{:<22} dilation drift across dyadic rescaling: {:.4}", "", drift);
        }
    }
    println!("a pass means: no violations and max-ratio growth slope <= 0.05");
}
