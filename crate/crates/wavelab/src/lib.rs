//! Pseudospectral laboratory for the defocusing semilinear wave equation
//! `u_tt - Δu + |x|^{-b} |u|^α u = 0` on a periodic box in dimension 3
//! (and its radial 1d reduction).
//!
//! The crate has two halves that check each other:
//!
//! * an exact side: rational exponent calculus for the admissible-pair
//!   geometry, contraction exponents, and hypothesis checks, with symbolic
//!   identity verification ([`exponents`]);
//! * a numerical side: spectral grids and transforms ([`grid`]), exact
//!   linear propagation and Duhamel quadrature ([`propagator`]), a leapfrog
//!   reference integrator ([`dynamics`]), a Picard contraction engine
//!   ([`picard`]), mixed space-time norms ([`norms`]), and randomized
//!   bounded-ratio probes of the inequalities the theory rests on
//!   ([`probes`]).
//!
//! [`config`], [`manifest`] and [`harness`] wire both halves into runnable
//! experiments; the `wavelab` binary and the examples are thin shells over
//! [`harness`].

pub mod config;
pub mod data;
pub mod dynamics;
pub mod exponents;
pub mod fft;
pub mod grid;
pub mod harness;
pub mod manifest;
pub mod norms;
pub mod picard;
pub mod probes;
pub mod propagator;
