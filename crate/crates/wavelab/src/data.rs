//! Initial-data generators shared by experiments and tests.

use crate::grid::{Field, GridMode, GridSpec};

/// Smooth compactly supported profile: `exp(1 - 1/(1 - (r/R)²))` for
/// `r < R`, zero outside. Equals 1 at the center.
pub fn bump_profile(r: f64, radius: f64) -> f64 {
    let t = r / radius;
    if t >= 1.0 {
        0.0
    } else {
        (1.0 - 1.0 / (1.0 - t * t)).exp()
    }
}

/// Centered bump `A·exp(1 - 1/(1 - (|x|/R)²))`, supported in `|x| < R`.
pub fn bump(grid: &GridSpec, amplitude: f64, radius: f64) -> Field {
    grid.evaluate(|x| {
        let r = x.iter().map(|c| c * c).sum::<f64>().sqrt();
        amplitude * bump_profile(r, radius)
    })
}

/// Radial reduction of bump data: the odd field `r·A·bump(|r|)` that
/// represents `u(r) = A·bump(r)` in `radial1d` mode.
pub fn reduced_bump(grid: &GridSpec, amplitude: f64, radius: f64) -> Field {
    debug_assert_eq!(grid.mode, GridMode::Radial1d);
    grid.evaluate(|x| x[0] * amplitude * bump_profile(x[0].abs(), radius))
}

/// Centered Gaussian `A·exp(-|x|²/width²)`.
pub fn gaussian(grid: &GridSpec, amplitude: f64, width: f64) -> Field {
    grid.evaluate(|x| {
        let rr = x.iter().map(|c| c * c).sum::<f64>();
        amplitude * (-rr / (width * width)).exp()
    })
}

/// Radial reduction of Gaussian data: the odd field `r·A·exp(-r²/width²)`
/// that represents `u(r) = A·exp(-r²/width²)` in `radial1d` mode.
pub fn reduced_gaussian(grid: &GridSpec, amplitude: f64, width: f64) -> Field {
    debug_assert_eq!(grid.mode, GridMode::Radial1d);
    grid.evaluate(|x| x[0] * amplitude * (-x[0] * x[0] / (width * width)).exp())
}
