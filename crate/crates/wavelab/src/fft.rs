//! Transforms and Fourier-multiplier operators on grid fields: forward and
//! inverse DFT, isotropic multipliers, fractional derivatives, and the
//! dyadic frequency-block projections used by Besov norms.

use std::sync::{Arc, Mutex, OnceLock};

use rustfft::num_complex::Complex64;
use rustfft::{Fft, FftDirection, FftPlanner};

use crate::grid::{Field, GridError, GridMode, GridSpec, SpectralField};

fn plan(n: usize, direction: FftDirection) -> Arc<dyn Fft<f64>> {
    static PLANNER: OnceLock<Mutex<FftPlanner<f64>>> = OnceLock::new();
    let mut planner = PLANNER.get_or_init(|| Mutex::new(FftPlanner::new())).lock().unwrap();
    planner.plan_fft(n, direction)
}

/// In-place DFT along every axis of the flat buffer.
fn transform_all_axes(data: &mut [Complex64], grid: &GridSpec, direction: FftDirection) {
    let n = grid.n;
    let fft = plan(n, direction);
    let mut scratch = vec![Complex64::new(0.0, 0.0); fft.get_inplace_scratch_len()];
    match grid.mode {
        GridMode::Radial1d => {
            fft.process_with_scratch(data, &mut scratch);
        }
        GridMode::Full3d => {
            // Contiguous axis.
            for line in data.chunks_exact_mut(n) {
                fft.process_with_scratch(line, &mut scratch);
            }
            // Strided axes go through a gather buffer.
            let mut buf = vec![Complex64::new(0.0, 0.0); n];
            for (stride, bases) in [
                (n, (0..n).flat_map(|i| (0..n).map(move |k| i * n * n + k)).collect::<Vec<_>>()),
                (n * n, (0..n).flat_map(|j| (0..n).map(move |k| j * n + k)).collect::<Vec<_>>()),
            ] {
                for base in bases {
                    for (t, slot) in buf.iter_mut().enumerate() {
                        *slot = data[base + t * stride];
                    }
                    fft.process_with_scratch(&mut buf, &mut scratch);
                    for (t, slot) in buf.iter().enumerate() {
                        data[base + t * stride] = *slot;
                    }
                }
            }
        }
    }
}

/// Forward transform: real samples to normalized DFT coefficients.
pub fn forward(f: &Field) -> SpectralField {
    let mut data: Vec<Complex64> =
        f.values.iter().map(|&v| Complex64::new(v, 0.0)).collect();
    transform_all_axes(&mut data, &f.grid, FftDirection::Forward);
    let norm = 1.0 / f.grid.len() as f64;
    for c in &mut data {
        *c *= norm;
    }
    SpectralField { grid: f.grid, coeffs: data }
}

/// Inverse transform back to real samples. The imaginary residue (zero up
/// to roundoff for conjugate-symmetric input) is discarded.
pub fn inverse(spectral: &SpectralField) -> Field {
    let mut data = spectral.coeffs.clone();
    transform_all_axes(&mut data, &spectral.grid, FftDirection::Inverse);
    Field { grid: spectral.grid, values: data.into_iter().map(|c| c.re).collect() }
}

/// Multiply each coefficient by `m(|ξ|)`. Real-valued isotropic multipliers
/// preserve conjugate symmetry, so real fields stay real.
pub fn apply_isotropic_multiplier(spectral: &mut SpectralField, mut m: impl FnMut(f64) -> f64) {
    let grid = spectral.grid;
    match grid.mode {
        GridMode::Radial1d => {
            for (i, c) in spectral.coeffs.iter_mut().enumerate() {
                *c *= m(grid.xi(i).abs());
            }
        }
        GridMode::Full3d => {
            let n = grid.n;
            let sq: Vec<f64> = (0..n).map(|i| grid.xi(i) * grid.xi(i)).collect();
            let mut idx = 0;
            for i in 0..n {
                for j in 0..n {
                    let sij = sq[i] + sq[j];
                    for k in 0..n {
                        spectral.coeffs[idx] *= m((sij + sq[k]).sqrt());
                        idx += 1;
                    }
                }
            }
        }
    }
}

/// Round-trip helper: forward, multiply by `m(|ξ|)`, inverse.
pub fn filtered(f: &Field, m: impl FnMut(f64) -> f64) -> Field {
    let mut spectral = forward(f);
    apply_isotropic_multiplier(&mut spectral, m);
    inverse(&spectral)
}

/// Fractional derivative `D^s`: multiplier `|ξ|^s` with the zero mode
/// annihilated. The zero-mode convention makes `D^0 f = f - mean(f)`;
/// homogeneous-space operators ignore constants.
pub fn fractional_derivative(f: &Field, s: f64) -> Result<Field, GridError> {
    if !(s >= 0.0) {
        return Err(GridError::NegativeOrder { s });
    }
    Ok(filtered(f, |xi| if xi == 0.0 { 0.0 } else { xi.powf(s) }))
}

/// Spectral Laplacian: multiplier `-|ξ|²`.
pub fn laplacian(f: &Field) -> Field {
    filtered(f, |xi| -(xi * xi))
}

/// The fixed dyadic cutoff profile: `1` on `[0, 1]`, smooth descent to `0`
/// at `2` via `exp(1 - 1/(1 - (t-1)²))`, `0` from `2` on.
pub fn dyadic_bump(t: f64) -> f64 {
    if t <= 1.0 {
        1.0
    } else if t >= 2.0 {
        0.0
    } else {
        let u = t - 1.0;
        (1.0 - 1.0 / (1.0 - u * u)).exp()
    }
}

/// Annulus weight of the block at scale `N`: `φ(|ξ|/N) - φ(2|ξ|/N)`,
/// supported in `N/2 < |ξ| < 2N` and equal to `1` at `|ξ| = N`.
pub fn block_weight(xi_abs: f64, scale: f64) -> f64 {
    dyadic_bump(xi_abs / scale) - dyadic_bump(2.0 * xi_abs / scale)
}

/// One dyadic frequency block of a field.
pub struct BlockProjection {
    pub field: Field,
    /// Whether `2^j` lies in the resolvable band `[2π/L, πn/L]`. Out-of-band
    /// projections are zero fields, flagged rather than fatal.
    pub in_band: bool,
    pub scale: f64,
}

/// Project onto the dyadic block at scale `N = 2^j`.
pub fn block_project(f: &Field, j: i32) -> BlockProjection {
    let scale = (j as f64).exp2();
    let in_band = scale >= f.grid.xi_min() && scale <= f.grid.xi_max();
    if !in_band {
        return BlockProjection { field: Field::zeros(f.grid), in_band, scale };
    }
    let field = filtered(f, |xi| block_weight(xi, scale));
    BlockProjection { field, in_band, scale }
}

/// Dyadic exponents `j` whose scale `2^j` the grid resolves.
pub fn resolvable_dyads(grid: &GridSpec) -> Vec<i32> {
    let lo = grid.xi_min().log2().ceil() as i32;
    let hi = grid.xi_max().log2().floor() as i32;
    (lo..=hi).collect()
}
