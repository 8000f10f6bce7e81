//! Explicit Green's-function solution of the first initial-boundary value
//! problem for the sub-diffusion equation
//!
//! ```text
//! D u(t, x) - u_xx(t, x) = f(t, x),   0 < t < T, 0 < x < a,
//! u(t, 0) = phi0(t),  u(t, a) = phi1(t),  u(0, x) = tau(x),
//! ```
//!
//! where `D` is the regularized (Caputo-type) Prabhakar derivative
//! `D g(t) = int_0^t (t - s)^(-beta) E^(-gamma)_(alpha, 1 - beta)[delta (t - s)^alpha] g'(s) ds`.
//!
//! The crate provides the special functions behind the kernels ([`specfun`]),
//! the Prabhakar operators ([`operators`]), the kernels themselves
//! ([`greens`]), the assembled solution ([`solver`]) and an independent
//! finite-difference solver used as a cross-check ([`oracle`]).
//!
//! ```
//! use std::f64::consts::PI;
//! use prabhakar_green::solver::{solve_u, ProblemSpec};
//! use prabhakar_green::{DomainSpec, FracParams, QuadratureSpec, SeriesControl};
//!
//! let p = FracParams::new(0.8, 0.5, 0.3, 0.5)?;
//! let ps = ProblemSpec::new(DomainSpec::new(PI, 2.0)?, p).with_tau(f64::sin);
//! let q = QuadratureSpec { n_panels: 16, ..Default::default() };
//! let field = solve_u(&ps, &[0.5, 1.0, 2.0], &[0.5, PI / 2.0], &q, &SeriesControl::default())?;
//! assert!(field.value(2, 1) > 0.0 && field.value(2, 1) < field.value(0, 1));
//! # Ok::<(), prabhakar_green::Error>(())
//! ```

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod error;
pub mod greens;
pub mod operators;
pub mod oracle;
pub mod params;
pub mod quadrature;
pub mod solver;
pub mod specfun;

pub use error::{Error, Result};
pub use params::{DomainSpec, FracParams, SeriesControl};
pub use quadrature::QuadratureSpec;
