//! Periodic-box discretization: grid geometry, real-space fields, and
//! Fourier-space fields.
//!
//! The box is `[-L/2, L/2)^d` sampled on `n` points per axis, `d = 3` for the
//! full model and `d = 1` for the radial reduction. Frequencies are
//! `ξ = 2πk/L` with integer `k ∈ [-n/2, n/2)`.

use std::fmt;

use rustfft::num_complex::Complex64;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GridMode {
    Full3d,
    Radial1d,
}

impl GridMode {
    pub fn label(&self) -> &'static str {
        match self {
            GridMode::Full3d => "full3d",
            GridMode::Radial1d => "radial1d",
        }
    }

    pub fn parse(s: &str) -> Option<GridMode> {
        match s {
            "full3d" => Some(GridMode::Full3d),
            "radial1d" => Some(GridMode::Radial1d),
            _ => None,
        }
    }
}

impl fmt::Display for GridMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum GridError {
    BadPointCount { n: usize },
    BadBoxLength { l: f64 },
    ShapeMismatch { expected: usize, got: usize },
    NegativeOrder { s: f64 },
    NonFinite { what: &'static str },
}

impl fmt::Display for GridError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GridError::BadPointCount { n } => {
                write!(f, "points per axis must be a power of two >= 8, got {}", n)
            }
            GridError::BadBoxLength { l } => write!(f, "box length must be positive, got {}", l),
            GridError::ShapeMismatch { expected, got } => {
                write!(f, "field has {} values, grid needs {}", got, expected)
            }
            GridError::NegativeOrder { s } => {
                write!(f, "derivative order must be >= 0, got {}", s)
            }
            GridError::NonFinite { what } => write!(f, "non-finite value in {}", what),
        }
    }
}

impl std::error::Error for GridError {}

/// Geometry of the periodic box. Cheap to copy; everything else borrows it.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GridSpec {
    pub mode: GridMode,
    /// Points per axis; power of two.
    pub n: usize,
    /// Box side length `L`; the domain is `[-L/2, L/2)` per axis.
    pub box_length: f64,
}

impl GridSpec {
    pub fn new(mode: GridMode, n: usize, box_length: f64) -> Result<Self, GridError> {
        if n < 8 || !n.is_power_of_two() {
            return Err(GridError::BadPointCount { n });
        }
        if !(box_length > 0.0) || !box_length.is_finite() {
            return Err(GridError::BadBoxLength { l: box_length });
        }
        Ok(GridSpec { mode, n, box_length })
    }

    pub fn dim(&self) -> usize {
        match self.mode {
            GridMode::Full3d => 3,
            GridMode::Radial1d => 1,
        }
    }

    /// Total number of grid points, `n^d`.
    pub fn len(&self) -> usize {
        self.n.pow(self.dim() as u32)
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Grid spacing `h = L/n`.
    pub fn spacing(&self) -> f64 {
        self.box_length / self.n as f64
    }

    /// Quadrature weight of one grid cell, `h^d`.
    pub fn cell_volume(&self) -> f64 {
        self.spacing().powi(self.dim() as i32)
    }

    /// Coordinate of axis index `i`: `-L/2 + i·h`.
    pub fn coord(&self, i: usize) -> f64 {
        -0.5 * self.box_length + i as f64 * self.spacing()
    }

    /// Signed integer wavenumber for axis index `i`: `k ∈ [-n/2, n/2)`.
    pub fn wavenumber(&self, i: usize) -> i64 {
        if i < self.n / 2 {
            i as i64
        } else {
            i as i64 - self.n as i64
        }
    }

    /// Frequency `ξ = 2πk/L` for axis index `i`.
    pub fn xi(&self, i: usize) -> f64 {
        2.0 * std::f64::consts::PI * self.wavenumber(i) as f64 / self.box_length
    }

    /// Smallest positive resolvable `|ξ|`.
    pub fn xi_min(&self) -> f64 {
        2.0 * std::f64::consts::PI / self.box_length
    }

    /// Largest resolvable `|ξ|` (Nyquist).
    pub fn xi_max(&self) -> f64 {
        std::f64::consts::PI * self.n as f64 / self.box_length
    }

    /// Row-major flat index of a 3-d point.
    pub fn idx3(&self, i: usize, j: usize, k: usize) -> usize {
        (i * self.n + j) * self.n + k
    }

    /// `|ξ|` for every mode, in flat storage order.
    pub fn mode_xi_abs(&self) -> Vec<f64> {
        match self.mode {
            GridMode::Radial1d => (0..self.n).map(|i| self.xi(i).abs()).collect(),
            GridMode::Full3d => {
                let sq: Vec<f64> = (0..self.n).map(|i| self.xi(i) * self.xi(i)).collect();
                let mut out = Vec::with_capacity(self.len());
                for i in 0..self.n {
                    for j in 0..self.n {
                        let sij = sq[i] + sq[j];
                        for k in 0..self.n {
                            out.push((sij + sq[k]).sqrt());
                        }
                    }
                }
                out
            }
        }
    }

    /// Apply `f(coords)` at every grid point, in flat storage order.
    pub fn evaluate(&self, f: impl Fn(&[f64]) -> f64) -> Field {
        let mut values = Vec::with_capacity(self.len());
        match self.mode {
            GridMode::Radial1d => {
                for i in 0..self.n {
                    values.push(f(&[self.coord(i)]));
                }
            }
            GridMode::Full3d => {
                let xs: Vec<f64> = (0..self.n).map(|i| self.coord(i)).collect();
                for &x in &xs {
                    for &y in &xs {
                        for &z in &xs {
                            values.push(f(&[x, y, z]));
                        }
                    }
                }
            }
        }
        Field { grid: *self, values }
    }

    /// Distance from the origin at every grid point.
    pub fn radius(&self) -> Vec<f64> {
        self.evaluate(|x| x.iter().map(|c| c * c).sum::<f64>().sqrt()).values
    }
}

/// Real-space sample of one scalar field (a `u` or `u_t` snapshot).
#[derive(Clone, Debug, PartialEq)]
pub struct Field {
    pub grid: GridSpec,
    pub values: Vec<f64>,
}

impl Field {
    pub fn zeros(grid: GridSpec) -> Field {
        Field { grid, values: vec![0.0; grid.len()] }
    }

    pub fn from_values(grid: GridSpec, values: Vec<f64>) -> Result<Field, GridError> {
        if values.len() != grid.len() {
            return Err(GridError::ShapeMismatch { expected: grid.len(), got: values.len() });
        }
        Ok(Field { grid, values })
    }

    pub fn all_finite(&self) -> bool {
        self.values.iter().all(|v| v.is_finite())
    }

    pub fn scale(&mut self, c: f64) {
        for v in &mut self.values {
            *v *= c;
        }
    }

    pub fn scaled(&self, c: f64) -> Field {
        let mut out = self.clone();
        out.scale(c);
        out
    }

    /// `self += c * other`.
    pub fn axpy(&mut self, c: f64, other: &Field) {
        debug_assert_eq!(self.grid, other.grid);
        for (v, w) in self.values.iter_mut().zip(&other.values) {
            *v += c * w;
        }
    }

    pub fn add(&self, other: &Field) -> Field {
        let mut out = self.clone();
        out.axpy(1.0, other);
        out
    }

    pub fn sub(&self, other: &Field) -> Field {
        let mut out = self.clone();
        out.axpy(-1.0, other);
        out
    }

    pub fn linf_norm(&self) -> f64 {
        self.values.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    /// Grid-quadrature `L²` norm: `(h^d Σ f²)^{1/2}`.
    pub fn l2_norm(&self) -> f64 {
        let s: f64 = self.values.iter().map(|v| v * v).sum();
        (s * self.grid.cell_volume()).sqrt()
    }

    /// Grid-quadrature `L^p` norm for finite `p >= 1`.
    pub fn lp_norm(&self, p: f64) -> f64 {
        debug_assert!(p >= 1.0);
        let s: f64 = self.values.iter().map(|v| v.abs().powf(p)).sum();
        (s * self.grid.cell_volume()).powf(1.0 / p)
    }

    pub fn mean(&self) -> f64 {
        self.values.iter().sum::<f64>() / self.values.len() as f64
    }
}

/// Fourier-space state: normalized DFT coefficients of the grid samples.
///
/// `coeffs[m]` is `(1/n^d) Σ f(x) e^{-2πi k·m/n}` in flat mode order. For a
/// real field the coefficients are conjugate-symmetric. Every operation in
/// this crate (multipliers, norms) depends only on `|ξ_k|` and `|coeffs|`,
/// so the centered-grid phase convention never appears explicitly; Parseval
/// reads `‖f‖²_{L²} = L^d Σ |coeffs|²`.
#[derive(Clone, Debug)]
pub struct SpectralField {
    pub grid: GridSpec,
    pub coeffs: Vec<Complex64>,
}

impl SpectralField {
    pub fn zeros(grid: GridSpec) -> SpectralField {
        SpectralField { grid, coeffs: vec![Complex64::new(0.0, 0.0); grid.len()] }
    }

    /// `L²` norm via Parseval.
    pub fn l2_norm(&self) -> f64 {
        let s: f64 = self.coeffs.iter().map(|c| c.norm_sqr()).sum();
        (s * self.grid.box_length.powi(self.grid.dim() as i32)).sqrt()
    }

    /// Largest relative deviation from conjugate symmetry; near zero for
    /// transforms of real fields.
    pub fn conjugate_asymmetry(&self) -> f64 {
        let n = self.grid.n;
        let scale = self.coeffs.iter().fold(0.0f64, |m, c| m.max(c.norm())).max(1e-300);
        let mut worst = 0.0f64;
        let mut check = |a: Complex64, b: Complex64| {
            let d = (a - b.conj()).norm();
            if d > worst {
                worst = d;
            }
        };
        match self.grid.mode {
            GridMode::Radial1d => {
                for i in 0..n {
                    let ni = (n - i) % n;
                    check(self.coeffs[i], self.coeffs[ni]);
                }
            }
            GridMode::Full3d => {
                for i in 0..n {
                    for j in 0..n {
                        for k in 0..n {
                            let m = self.grid.idx3(i, j, k);
                            let mm = self.grid.idx3((n - i) % n, (n - j) % n, (n - k) % n);
                            check(self.coeffs[m], self.coeffs[mm]);
                        }
                    }
                }
            }
        }
        worst / scale
    }
}

/// Serialize a field snapshot to the flat binary layout: a little-endian
/// header of four 64-bit values (mode code = spatial dimension, point
/// count per axis, box length, sample time) followed by the grid values
/// as row-major 64-bit floats.
pub fn write_snapshot(field: &Field, time: f64, path: &std::path::Path) -> std::io::Result<()> {
    use std::io::Write;
    let mut bytes =
        Vec::with_capacity(4 * 8 + field.values.len() * 8);
    let mode_code: u64 = field.grid.dim() as u64;
    bytes.extend_from_slice(&mode_code.to_le_bytes());
    bytes.extend_from_slice(&(field.grid.n as u64).to_le_bytes());
    bytes.extend_from_slice(&field.grid.box_length.to_le_bytes());
    bytes.extend_from_slice(&time.to_le_bytes());
    for v in &field.values {
        bytes.extend_from_slice(&v.to_le_bytes());
    }
    let mut file = std::fs::File::create(path)?;
    file.write_all(&bytes)
}

/// Read a snapshot written by [`write_snapshot`]; returns the field and
/// its sample time. A malformed header or a short value section is an
/// `InvalidData` error.
pub fn read_snapshot(path: &std::path::Path) -> std::io::Result<(Field, f64)> {
    use std::io::{Error, ErrorKind};
    let bytes = std::fs::read(path)?;
    let bad = |what: &str| Error::new(ErrorKind::InvalidData, format!("snapshot {}: {}", path.display(), what));
    if bytes.len() < 32 {
        return Err(bad("shorter than the 32-byte header"));
    }
    let word = |i: usize| -> [u8; 8] { bytes[8 * i..8 * i + 8].try_into().unwrap() };
    let mode = match u64::from_le_bytes(word(0)) {
        1 => GridMode::Radial1d,
        3 => GridMode::Full3d,
        other => return Err(bad(&format!("unknown mode code {}", other))),
    };
    let n = u64::from_le_bytes(word(1)) as usize;
    let box_length = f64::from_le_bytes(word(2));
    let time = f64::from_le_bytes(word(3));
    let grid = GridSpec::new(mode, n, box_length).map_err(|e| bad(&e.to_string()))?;
    let expected = 32 + grid.len() * 8;
    if bytes.len() != expected {
        return Err(bad(&format!("expected {} bytes, found {}", expected, bytes.len())));
    }
    let values: Vec<f64> = bytes[32..]
        .chunks_exact(8)
        .map(|c| f64::from_le_bytes(c.try_into().unwrap()))
        .collect();
    Ok((Field { grid, values }, time))
}
