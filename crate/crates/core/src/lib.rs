//! Spline-based differential quadrature (DQ) solvers for time- and
//! space-fractional advection-diffusion equations.
//!
//! The crate is organised bottom-up:
//!
//! - [`grid`] and [`splines`]: uniform lattices, cubic trigonometric B-splines
//!   (CTB) and cubic B-splines together with their end-corrected variants.
//! - [`frac_calculus`]: temporal fractional-difference coefficients, the
//!   Caputo memory term, Gamma / Mittag-Leffler functions and closed-form
//!   Riemann-Liouville derivatives of cubic B-splines.
//! - [`dq_weights`]: DQ weighted-coefficient matrices (first order by
//!   collocation, higher orders by recursion, fractional orders by collocation
//!   against the closed-form derivatives).
//! - [`operators`]: Kronecker-structured spatial operators and load vectors.
//! - [`steppers`]: the implicit fractional scheme, Runge-Kutta Gill,
//!   Crank-Nicolson and the Newton loop for the coupled Schrodinger system.
//! - [`stability`]: spectra and resolvent-norm diagnostics.
//! - [`problems`]: the benchmark problems and error norms.
//!
//! Unknowns on 2D lattices are always ordered x-fastest:
//! `[U_11, U_21, ..., U_{Mx-1,1}, U_12, ...]`.

pub mod dq_weights;
pub mod error;
pub mod frac_calculus;
pub mod grid;
pub mod linalg;
pub mod operators;
pub mod problems;
pub mod splines;
pub mod stability;
pub mod steppers;

pub use error::{FadeError, Result};
pub use grid::{Grid, Grid2d};
