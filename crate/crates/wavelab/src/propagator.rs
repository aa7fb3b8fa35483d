//! Exact linear wave propagation and the retarded Duhamel integral.
//!
//! The linear group is applied as Fourier multipliers, so the only linear
//! error is roundoff for resolved modes; there is no CFL constraint and no
//! time-stepping error. Time discretization enters solely through the
//! quadrature of the Duhamel integral.
//!
//! Multipliers, for data `(φ, ψ)` and frequency magnitude `ω = |ξ|`:
//!
//! * `u(t)`:   `cos(ωt)·φ̂ + sin(ωt)/ω·ψ̂`   (the `ω = 0` limit of the second
//!   factor is `t`)
//! * `u_t(t)`: `-ω·sin(ωt)·φ̂ + cos(ωt)·ψ̂`

use std::fmt;

use rustfft::num_complex::Complex64;

use crate::fft::{forward, inverse};
use crate::grid::{Field, GridSpec, SpectralField};

#[derive(Clone, Debug, PartialEq)]
pub enum PropagatorError {
    /// A force sample contained NaN/Inf; named by quadrature node.
    NonFiniteSample { node_index: usize, tau: f64 },
    BadQuadrature { why: String },
}

impl fmt::Display for PropagatorError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PropagatorError::NonFiniteSample { node_index, tau } => {
                write!(f, "non-finite force sample at node {} (tau = {})", node_index, tau)
            }
            PropagatorError::BadQuadrature { why } => write!(f, "bad quadrature: {}", why),
        }
    }
}

impl std::error::Error for PropagatorError {}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum QuadRule {
    Trapezoid,
    Simpson,
}

impl QuadRule {
    pub fn label(&self) -> &'static str {
        match self {
            QuadRule::Trapezoid => "trapezoid",
            QuadRule::Simpson => "simpson",
        }
    }
}

/// Composite quadrature layout over one time interval.
#[derive(Clone, Copy, Debug)]
pub struct QuadSpec {
    pub rule: QuadRule,
    /// Number of subintervals (nodes = intervals + 1). Simpson needs an
    /// even count.
    pub intervals: usize,
}

impl QuadSpec {
    pub fn new(rule: QuadRule, intervals: usize) -> Result<QuadSpec, PropagatorError> {
        if intervals == 0 {
            return Err(PropagatorError::BadQuadrature { why: "zero intervals".into() });
        }
        if rule == QuadRule::Simpson && intervals % 2 != 0 {
            return Err(PropagatorError::BadQuadrature {
                why: format!("Simpson rule needs an even interval count, got {}", intervals),
            });
        }
        Ok(QuadSpec { rule, intervals })
    }

    /// Default rule: composite Simpson on 64 subintervals.
    pub fn default_simpson() -> QuadSpec {
        QuadSpec { rule: QuadRule::Simpson, intervals: 64 }
    }
}

/// The value and time derivative of a retarded integral at one time node.
pub struct DuhamelPoint {
    pub value: Field,
    pub derivative: Field,
}

/// Precomputed `|ξ|` table for one grid; share one plan per run.
pub struct PropagatorPlan {
    pub grid: GridSpec,
    xi: Vec<f64>,
}

impl PropagatorPlan {
    pub fn new(grid: GridSpec) -> PropagatorPlan {
        PropagatorPlan { grid, xi: grid.mode_xi_abs() }
    }

    fn apply_spec(&self, spectral: &mut SpectralField, m: impl Fn(f64) -> f64) {
        for (c, &xi) in spectral.coeffs.iter_mut().zip(&self.xi) {
            *c *= m(xi);
        }
    }

    fn filtered(&self, f: &Field, m: impl Fn(f64) -> f64) -> Field {
        let mut spectral = forward(f);
        self.apply_spec(&mut spectral, m);
        inverse(&spectral)
    }

    /// `cos(|ξ|t)` multiplier: evolution of position data.
    pub fn apply_kdot(&self, phi: &Field, t: f64) -> Field {
        self.filtered(phi, |xi| (xi * t).cos())
    }

    /// `sin(|ξ|t)/|ξ|` multiplier with value `t` at `ξ = 0`: evolution of
    /// velocity data.
    pub fn apply_k(&self, psi: &Field, t: f64) -> Field {
        self.filtered(psi, |xi| k_multiplier(xi, t))
    }

    /// Exact linear state `(u, u_t)` at time `t` from data `(φ, ψ)`.
    pub fn linear_solve(&self, phi: &Field, psi: &Field, t: f64) -> (Field, Field) {
        let mut phi_hat = forward(phi);
        let mut psi_hat = forward(psi);
        let mut u_hat = SpectralField::zeros(self.grid);
        let mut ut_hat = SpectralField::zeros(self.grid);
        for i in 0..u_hat.coeffs.len() {
            let xi = self.xi[i];
            let (s, c) = (xi * t).sin_cos();
            let k = k_multiplier(xi, t);
            u_hat.coeffs[i] = c * phi_hat.coeffs[i] + k * psi_hat.coeffs[i];
            ut_hat.coeffs[i] = -xi * s * phi_hat.coeffs[i] + c * psi_hat.coeffs[i];
        }
        // Reuse the buffers' allocations for the inverse transforms.
        phi_hat.coeffs.copy_from_slice(&u_hat.coeffs);
        psi_hat.coeffs.copy_from_slice(&ut_hat.coeffs);
        (inverse(&phi_hat), inverse(&psi_hat))
    }

    /// `∫₀ᵗ K(t-τ) h(τ) dτ` by composite quadrature; `h` is sampled on the
    /// uniform node grid of `quad`.
    pub fn duhamel(
        &self,
        mut h: impl FnMut(f64) -> Field,
        t: f64,
        quad: &QuadSpec,
    ) -> Result<Field, PropagatorError> {
        let m = quad.intervals;
        let dtau = t / m as f64;
        let mut forces = Vec::with_capacity(m + 1);
        for node in 0..=m {
            let tau = node as f64 * dtau;
            let sample = h(tau);
            if !sample.all_finite() {
                return Err(PropagatorError::NonFiniteSample { node_index: node, tau });
            }
            forces.push(forward(&sample));
        }
        let mut traj = self.duhamel_trajectory(&forces, dtau, m, quad.rule);
        Ok(traj.pop().expect("at least the endpoint is recorded").value)
    }

    /// Retarded integrals at every `record_every`-th quadrature node, from
    /// force spectra on the full node grid. One pass over the nodes:
    /// `sin(ω(t-τ))` splits into `sin(ωt)cos(ωτ) - cos(ωt)sin(ωτ)`, so two
    /// prefix quadratures (cos- and sin-weighted force) determine the
    /// integral at every recorded time. The derivative in `t` reuses the
    /// same prefixes with the complementary combination. The `ω = 0` mode
    /// integrates `(t-τ)ĥ₀` via plain and `τ`-weighted prefixes.
    ///
    /// For the Simpson rule, `record_every` must be even so every recorded
    /// prefix closes on a whole pair of subintervals.
    pub fn duhamel_trajectory(
        &self,
        forces: &[SpectralField],
        dtau: f64,
        record_every: usize,
        rule: QuadRule,
    ) -> Vec<DuhamelPoint> {
        let nodes = forces.len();
        assert!(nodes >= 2, "need at least one quadrature interval");
        let m = nodes - 1;
        assert!(record_every >= 1 && m % record_every == 0);
        if rule == QuadRule::Simpson {
            assert!(m % 2 == 0 && record_every % 2 == 0, "Simpson prefixes close on pairs");
        }
        let len = self.grid.len();
        for f in forces {
            debug_assert_eq!(f.coeffs.len(), len);
        }

        // Per-mode phase tables for one node step are recomputed per node
        // instead; the trig cost is dominated by the transforms around this.
        let zero = Complex64::new(0.0, 0.0);
        let mut cos_acc = vec![zero; len];
        let mut sin_acc = vec![zero; len];
        // Zero-mode companions: plain and τ-weighted prefixes.
        let mut out = Vec::with_capacity(m / record_every + 1);

        let record = |node: usize, cos_acc: &[Complex64], sin_acc: &[Complex64]| {
            let t = node as f64 * dtau;
            let mut value = SpectralField::zeros(self.grid);
            let mut derivative = SpectralField::zeros(self.grid);
            for i in 0..len {
                let xi = self.xi[i];
                if xi == 0.0 {
                    // cos_acc holds ∫ĥ₀, sin_acc holds ∫τĥ₀ for this mode.
                    value.coeffs[i] = t * cos_acc[i] - sin_acc[i];
                    derivative.coeffs[i] = cos_acc[i];
                } else {
                    let (s, c) = (xi * t).sin_cos();
                    value.coeffs[i] = (s * cos_acc[i] - c * sin_acc[i]) / xi;
                    derivative.coeffs[i] = c * cos_acc[i] + s * sin_acc[i];
                }
            }
            DuhamelPoint { value: inverse(&value), derivative: inverse(&derivative) }
        };

        let add_node = |cos_acc: &mut [Complex64],
                        sin_acc: &mut [Complex64],
                        node: usize,
                        weight: f64| {
            let tau = node as f64 * dtau;
            let fhat = &forces[node].coeffs;
            for i in 0..len {
                let xi = self.xi[i];
                if xi == 0.0 {
                    cos_acc[i] += weight * fhat[i];
                    sin_acc[i] += weight * tau * fhat[i];
                } else {
                    let (s, c) = (xi * tau).sin_cos();
                    cos_acc[i] += weight * c * fhat[i];
                    sin_acc[i] += weight * s * fhat[i];
                }
            }
        };

        out.push(record(0, &cos_acc, &sin_acc));
        match rule {
            QuadRule::Trapezoid => {
                let w = 0.5 * dtau;
                for node in 1..=m {
                    add_node(&mut cos_acc, &mut sin_acc, node - 1, w);
                    add_node(&mut cos_acc, &mut sin_acc, node, w);
                    if node % record_every == 0 {
                        out.push(record(node, &cos_acc, &sin_acc));
                    }
                }
            }
            QuadRule::Simpson => {
                let w = dtau / 3.0;
                for pair in 1..=m / 2 {
                    let node = 2 * pair;
                    add_node(&mut cos_acc, &mut sin_acc, node - 2, w);
                    add_node(&mut cos_acc, &mut sin_acc, node - 1, 4.0 * w);
                    add_node(&mut cos_acc, &mut sin_acc, node, w);
                    if node % record_every == 0 {
                        out.push(record(node, &cos_acc, &sin_acc));
                    }
                }
            }
        }
        out
    }
}

fn k_multiplier(xi: f64, t: f64) -> f64 {
    if xi == 0.0 {
        t
    } else {
        (xi * t).sin() / xi
    }
}
