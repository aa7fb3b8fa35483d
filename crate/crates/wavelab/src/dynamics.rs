//! The nonlinear side of the equation: the regularized singular weight, the
//! pointwise nonlinearity, the conserved energy, and an independent
//! leapfrog reference integrator used as the brute-force oracle for every
//! solver claim.
//!
//! Radial reduction: in `radial1d` mode a field stores `w(r) = r·u(r)` on
//! the symmetric 1-d box. Substituting `u = w/r` turns the 3-d radial
//! equation into the 1-d wave equation with nonlinearity
//! `|r|^{-(b+α)}|w|^α w`, and the 1-d weighted energy corresponds to the
//! 3-d one up to a constant angular factor. [`Equation`] selects the
//! effective weight exponent per mode so callers never hand-adjust it.

use std::fmt;

use crate::fft::laplacian;
use crate::grid::{Field, GridMode, GridSpec};

#[derive(Clone, Debug, PartialEq)]
pub enum DynamicsError {
    NegativeAlpha { alpha: f64 },
    /// ε = 0 is only meaningful where the origin node can be excluded.
    ZeroEpsilonOffRadial,
    BadEpsilon { epsilon: f64 },
    /// Explicit leapfrog needs `dt ≤ 2/|ξ|_max = 2L/(πn)`.
    UnstableTimestep { dt: f64, bound: f64 },
    ShapeMismatch,
}

impl fmt::Display for DynamicsError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DynamicsError::NegativeAlpha { alpha } => {
                write!(f, "nonlinearity power must be >= 0, got {}", alpha)
            }
            DynamicsError::ZeroEpsilonOffRadial => {
                write!(f, "epsilon = 0 requires radial1d mode (origin node excluded)")
            }
            DynamicsError::BadEpsilon { epsilon } => {
                write!(f, "weight regularization must be finite and >= 0, got {}", epsilon)
            }
            DynamicsError::UnstableTimestep { dt, bound } => {
                write!(f, "dt = {} exceeds the leapfrog stability bound 2L/(pi n) = {}", dt, bound)
            }
            DynamicsError::ShapeMismatch => write!(f, "field shapes disagree"),
        }
    }
}

impl std::error::Error for DynamicsError {}

/// Precomputed regularized weight `w_ε(x) = (|x|² + ε²)^{-p/2}` for a
/// weight exponent `p`. Positive everywhere and radially nonincreasing,
/// except that `ε = 0` (radial mode only) zeroes the origin node instead of
/// evaluating the singularity.
#[derive(Clone, Debug)]
pub struct WeightField {
    pub grid: GridSpec,
    pub values: Vec<f64>,
    pub exponent: f64,
    pub epsilon: f64,
}

impl WeightField {
    pub fn new(grid: GridSpec, exponent: f64, epsilon: f64) -> Result<WeightField, DynamicsError> {
        if !(epsilon >= 0.0) || !epsilon.is_finite() {
            return Err(DynamicsError::BadEpsilon { epsilon });
        }
        if epsilon == 0.0 && grid.mode != GridMode::Radial1d && exponent != 0.0 {
            return Err(DynamicsError::ZeroEpsilonOffRadial);
        }
        let values = grid
            .radius()
            .into_iter()
            .map(|r| {
                let rr = r * r + epsilon * epsilon;
                if rr == 0.0 {
                    0.0
                } else {
                    rr.powf(-exponent / 2.0)
                }
            })
            .collect();
        Ok(WeightField { grid, values, exponent, epsilon })
    }

    /// All-zero weight: switches the potential term off for linear
    /// diagnostics. Not a valid equation weight.
    pub fn disabled(grid: GridSpec) -> WeightField {
        WeightField { grid, values: vec![0.0; grid.len()], exponent: 0.0, epsilon: 0.0 }
    }
}

/// Pointwise nonlinearity `w(x)·|u|^α·u`.
pub fn nonlinearity(u: &Field, w: &WeightField, alpha: f64) -> Result<Field, DynamicsError> {
    if !(alpha >= 0.0) {
        return Err(DynamicsError::NegativeAlpha { alpha });
    }
    if u.grid != w.grid {
        return Err(DynamicsError::ShapeMismatch);
    }
    let values = u
        .values
        .iter()
        .zip(&w.values)
        .map(|(&v, &wv)| wv * v.abs().powf(alpha) * v)
        .collect();
    Ok(Field { grid: u.grid, values })
}

/// One row of an energy time series.
#[derive(Clone, Copy, Debug, serde::Serialize)]
pub struct EnergyRecord {
    pub t: f64,
    /// `½ ∫ u_t²`
    pub kinetic: f64,
    /// `½ ∫ |∇u|²` (spectral gradient)
    pub gradient: f64,
    /// `1/(α+2) ∫ w_ε |u|^{α+2}`
    pub potential: f64,
    pub total: f64,
}

/// Weighted energy of a state. Conserved by the regularized flow; the
/// integrator tests measure exactly how well.
pub fn energy(t: f64, u: &Field, ut: &Field, w: &WeightField, alpha: f64) -> EnergyRecord {
    let cell = u.grid.cell_volume();
    let kinetic = 0.5 * ut.values.iter().map(|v| v * v).sum::<f64>() * cell;
    let gradient = {
        let spectral = crate::fft::forward(u);
        let sum: f64 = spectral
            .coeffs
            .iter()
            .zip(u.grid.mode_xi_abs())
            .map(|(c, xi)| xi * xi * c.norm_sqr())
            .sum();
        0.5 * sum * u.grid.box_length.powi(u.grid.dim() as i32)
    };
    let potential = u
        .values
        .iter()
        .zip(&w.values)
        .map(|(&v, &wv)| wv * v.abs().powf(alpha + 2.0))
        .sum::<f64>()
        * cell
        / (alpha + 2.0);
    EnergyRecord { t, kinetic, gradient, potential, total: kinetic + gradient + potential }
}

/// Largest stable leapfrog step on this grid: `2/|ξ|_max`.
pub fn stability_bound(grid: &GridSpec) -> f64 {
    2.0 / grid.xi_max()
}

/// One velocity-Verlet step of `u_tt = Δu - w|u|^α u`. Stateless; loops
/// that care about the redundant force evaluation use [`ReferenceIntegrator`].
pub fn reference_step(
    u: &Field,
    ut: &Field,
    dt: f64,
    w: &WeightField,
    alpha: f64,
) -> Result<(Field, Field), DynamicsError> {
    let bound = stability_bound(&u.grid);
    if !(dt > 0.0) || dt > bound {
        return Err(DynamicsError::UnstableTimestep { dt, bound });
    }
    let accel = acceleration(u, w, alpha)?;
    let mut vt = ut.clone();
    vt.axpy(0.5 * dt, &accel);
    let mut u1 = u.clone();
    u1.axpy(dt, &vt);
    let accel1 = acceleration(&u1, w, alpha)?;
    vt.axpy(0.5 * dt, &accel1);
    Ok((u1, vt))
}

fn acceleration(u: &Field, w: &WeightField, alpha: f64) -> Result<Field, DynamicsError> {
    let mut a = laplacian(u);
    a.axpy(-1.0, &nonlinearity(u, w, alpha)?);
    Ok(a)
}

/// Leapfrog loop with the end-of-step force reused as the next start-of-step
/// force; numerically identical to iterating [`reference_step`].
pub struct ReferenceIntegrator<'w> {
    w: &'w WeightField,
    alpha: f64,
    dt: f64,
    u: Field,
    ut: Field,
    accel: Field,
    steps: u64,
}

impl<'w> ReferenceIntegrator<'w> {
    pub fn new(
        u0: Field,
        ut0: Field,
        w: &'w WeightField,
        alpha: f64,
        dt: f64,
    ) -> Result<Self, DynamicsError> {
        let bound = stability_bound(&u0.grid);
        if !(dt > 0.0) || dt > bound {
            return Err(DynamicsError::UnstableTimestep { dt, bound });
        }
        let accel = acceleration(&u0, w, alpha)?;
        Ok(ReferenceIntegrator { w, alpha, dt, u: u0, ut: ut0, accel, steps: 0 })
    }

    pub fn t(&self) -> f64 {
        self.steps as f64 * self.dt
    }

    pub fn state(&self) -> (&Field, &Field) {
        (&self.u, &self.ut)
    }

    pub fn step(&mut self) -> Result<(), DynamicsError> {
        self.ut.axpy(0.5 * self.dt, &self.accel);
        self.u.axpy(self.dt, &self.ut);
        self.accel = acceleration(&self.u, self.w, self.alpha)?;
        self.ut.axpy(0.5 * self.dt, &self.accel);
        self.steps += 1;
        Ok(())
    }

    pub fn run_steps(&mut self, count: u64) -> Result<(), DynamicsError> {
        for _ in 0..count {
            self.step()?;
        }
        Ok(())
    }
}

/// Mode-aware bundle of grid, parameters, and the weight actually applied:
/// exponent `b` on the full grid, `b + α` in the radial reduction.
#[derive(Clone)]
pub struct Equation {
    pub grid: GridSpec,
    pub alpha: f64,
    pub b: f64,
    pub epsilon: f64,
    pub weight: WeightField,
}

impl Equation {
    pub fn new(grid: GridSpec, alpha: f64, b: f64, epsilon: f64) -> Result<Equation, DynamicsError> {
        if !(alpha >= 0.0) {
            return Err(DynamicsError::NegativeAlpha { alpha });
        }
        let exponent = match grid.mode {
            GridMode::Full3d => b,
            GridMode::Radial1d => b + alpha,
        };
        let weight = WeightField::new(grid, exponent, epsilon)?;
        Ok(Equation { grid, alpha, b, epsilon, weight })
    }

    pub fn nonlinearity(&self, u: &Field) -> Field {
        nonlinearity(u, &self.weight, self.alpha).expect("validated at construction")
    }

    pub fn energy(&self, t: f64, u: &Field, ut: &Field) -> EnergyRecord {
        energy(t, u, ut, &self.weight, self.alpha)
    }

    pub fn integrator(&self, u0: Field, ut0: Field, dt: f64) -> Result<ReferenceIntegrator<'_>, DynamicsError> {
        ReferenceIntegrator::new(u0, ut0, &self.weight, self.alpha, dt)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::data;
    use crate::grid::GridMode;
    use crate::propagator::PropagatorPlan;

    fn grid1d(n: usize, l: f64) -> GridSpec {
        GridSpec::new(GridMode::Radial1d, n, l).unwrap()
    }

    #[test]
    fn weight_shape_and_monotonicity() {
        let g = GridSpec::new(GridMode::Full3d, 16, 8.0).unwrap();
        let w = WeightField::new(g, 0.5, g.spacing()).unwrap();
        assert!(w.values.iter().all(|&v| v > 0.0));
        // Radially nonincreasing along the positive x-axis from the center.
        let c = 8usize;
        let along: Vec<f64> = (c..16).map(|i| w.values[g.idx3(i, c, c)]).collect();
        assert!(along.windows(2).all(|p| p[1] <= p[0]));

        // Exponent 0 means w ≡ 1.
        let w1 = WeightField::new(g, 0.0, 0.1).unwrap();
        assert!(w1.values.iter().all(|&v| (v - 1.0).abs() < 1e-15));
    }

    #[test]
    fn zero_epsilon_rules() {
        let g3 = GridSpec::new(GridMode::Full3d, 8, 4.0).unwrap();
        assert!(matches!(
            WeightField::new(g3, 0.5, 0.0),
            Err(DynamicsError::ZeroEpsilonOffRadial)
        ));
        let g1 = grid1d(16, 4.0);
        let w = WeightField::new(g1, 1.5, 0.0).unwrap();
        // Origin node exists on this grid and gets weight zero; all others positive.
        let origin = (0..16).find(|&i| g1.coord(i) == 0.0).unwrap();
        assert_eq!(w.values[origin], 0.0);
        assert!(w.values.iter().enumerate().all(|(i, &v)| i == origin || v > 0.0));
    }

    #[test]
    fn nonlinearity_pointwise_properties() {
        let g = grid1d(32, 4.0);
        let w = WeightField::new(g, 0.0, 0.5).unwrap();

        let zero = nonlinearity(&Field::zeros(g), &w, 1.5).unwrap();
        assert_eq!(zero.linf_norm(), 0.0);

        let ones = g.evaluate(|_| 1.0);
        for alpha in [0.0, 0.5, 1.0, 2.0] {
            let n = nonlinearity(&ones, &w, alpha).unwrap();
            assert!(n.sub(&ones).linf_norm() < 1e-15);
        }

        let u = g.evaluate(|x| (x[0] * 1.3).sin() + 0.2);
        let n_pos = nonlinearity(&u, &w, 0.7).unwrap();
        let n_neg = nonlinearity(&u.scaled(-1.0), &w, 0.7).unwrap();
        assert_eq!(n_pos.scaled(-1.0).values, n_neg.values);

        // Positive homogeneity of degree α+1.
        let lam = 1.7f64;
        let alpha = 0.5f64;
        let a = nonlinearity(&u.scaled(lam), &w, alpha).unwrap();
        let b = nonlinearity(&u, &w, alpha).unwrap().scaled(lam.powf(alpha + 1.0));
        assert!(a.sub(&b).linf_norm() <= 1e-12 * a.linf_norm());

        assert!(matches!(
            nonlinearity(&u, &w, -0.5),
            Err(DynamicsError::NegativeAlpha { .. })
        ));
    }

    #[test]
    fn energy_of_zero_state_is_zero() {
        let g = grid1d(32, 4.0);
        let w = WeightField::new(g, 1.0, 0.1).unwrap();
        let e = energy(0.0, &Field::zeros(g), &Field::zeros(g), &w, 1.0);
        assert_eq!((e.kinetic, e.gradient, e.potential, e.total), (0.0, 0.0, 0.0, 0.0));
    }

    #[test]
    fn linear_energy_constant_with_potential_off() {
        let g = grid1d(64, 8.0);
        let plan = PropagatorPlan::new(g);
        let w = WeightField::disabled(g);
        let phi = data::reduced_bump(&g, 1.0, 2.0);
        let psi = Field::zeros(g);
        let e0 = energy(0.0, &phi, &psi, &w, 1.0);
        for k in 1..=5 {
            let t = 0.3 * k as f64;
            let (u, ut) = plan.linear_solve(&phi, &psi, t);
            let e = energy(t, &u, &ut, &w, 1.0);
            assert!((e.total - e0.total).abs() <= 1e-10 * e0.total);
            assert_eq!(e.potential, 0.0);
        }
    }

    #[test]
    fn integrator_keeps_zero_state() {
        let g = grid1d(32, 4.0);
        let w = WeightField::new(g, 1.0, 0.1).unwrap();
        let mut it = ReferenceIntegrator::new(Field::zeros(g), Field::zeros(g), &w, 1.0, 1e-2).unwrap();
        it.run_steps(100).unwrap();
        assert_eq!(it.state().0.linf_norm(), 0.0);
        assert_eq!(it.state().1.linf_norm(), 0.0);
    }

    #[test]
    fn timestep_bound_enforced() {
        let g = grid1d(64, 8.0);
        let w = WeightField::disabled(g);
        let bound = stability_bound(&g);
        assert!((bound - 2.0 * 8.0 / (std::f64::consts::PI * 64.0)).abs() < 1e-15);
        assert!(matches!(
            ReferenceIntegrator::new(Field::zeros(g), Field::zeros(g), &w, 0.0, 1.5 * bound),
            Err(DynamicsError::UnstableTimestep { .. })
        ));
    }

    #[test]
    fn stateless_and_cached_paths_agree() {
        let g = grid1d(64, 8.0);
        let w = WeightField::new(g, 1.5, g.spacing()).unwrap();
        let u0 = data::reduced_bump(&g, 0.5, 2.0);
        let ut0 = data::reduced_bump(&g, 0.2, 1.5);
        let dt = 1e-2;

        let mut it = ReferenceIntegrator::new(u0.clone(), ut0.clone(), &w, 1.0, dt).unwrap();
        it.run_steps(20).unwrap();

        let (mut u, mut ut) = (u0, ut0);
        for _ in 0..20 {
            let next = reference_step(&u, &ut, dt, &w, 1.0).unwrap();
            u = next.0;
            ut = next.1;
        }
        assert!(it.state().0.sub(&u).linf_norm() < 1e-12);
        assert!(it.state().1.sub(&ut).linf_norm() < 1e-12);
    }

    #[test]
    fn linear_runs_match_exact_propagator_at_second_order() {
        let g = grid1d(64, 8.0);
        let plan = PropagatorPlan::new(g);
        let w = WeightField::disabled(g);
        let phi = data::reduced_bump(&g, 1.0, 2.0);
        let psi = data::reduced_bump(&g, -0.3, 2.5);
        let t_end = 0.5;
        let (exact, _) = plan.linear_solve(&phi, &psi, t_end);

        let mut errs = Vec::new();
        for steps in [100u64, 200, 400] {
            let dt = t_end / steps as f64;
            let mut it = ReferenceIntegrator::new(phi.clone(), psi.clone(), &w, 0.0, dt).unwrap();
            it.run_steps(steps).unwrap();
            errs.push(it.state().0.sub(&exact).linf_norm());
        }
        let o1 = (errs[0] / errs[1]).log2();
        let o2 = (errs[1] / errs[2]).log2();
        assert!(o1 > 1.9 && o2 > 1.9, "orders {o1:.2} {o2:.2} from {errs:?}");
    }

    #[test]
    fn radial_equation_uses_shifted_weight_exponent() {
        let g = grid1d(32, 8.0);
        let eq = Equation::new(g, 1.0, 0.5, 0.25).unwrap();
        assert_eq!(eq.weight.exponent, 1.5);
        let g3 = GridSpec::new(GridMode::Full3d, 8, 8.0).unwrap();
        let eq3 = Equation::new(g3, 1.0, 0.5, 0.25).unwrap();
        assert_eq!(eq3.weight.exponent, 0.5);
    }
}
