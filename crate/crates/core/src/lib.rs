//! Numerical laboratory for Hilbert-type singular integral operators and the
//! orthogonal martingale inequalities that share their sharp constants.
//!
//! The crate is organised bottom-up:
//!
//! * [`space`], [`piecewise`], [`boxes`], [`grid`], [`gauge`]: value spaces
//!   `ℓ_q^n`, step functions on the torus, the line and the integers, sampled
//!   grid functions, and the convex gauges `Φ`, `Ψ`.
//! * [`transforms`]: periodic, real-line, discrete, semidiscrete, directional
//!   and Riesz-type transforms, each with an exact closed form for step
//!   functions and an independent FFT or quadrature route.
//! * [`norms`]: lower bounds for `L^p` and `Φ,Ψ` operator norms by nonlinear
//!   power iteration and ratio ascent, plus the closed-form constants.
//! * [`mcsim`]: Brownian exit simulation, harmonic/conjugate extensions and
//!   the Monte Carlo martingale experiments.
//!
//! Everything except [`mcsim`] is generic over [`Real`]; the `*64` aliases
//! below fix the scalar to `f64`.

// `!(x > 0)` is used on purpose: it also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod boxes;
pub mod error;
pub mod gauge;
pub mod grid;
pub mod mcsim;
pub mod norms;
pub mod piecewise;
pub mod quadrature;
pub mod space;
pub mod transforms;

mod real;

pub use error::{Error, Result};
pub use real::Real;

pub use boxes::BoxStepFunction;
pub use gauge::{Gauge, GaugePair};
pub use grid::{GridDomain, GridFunction};
pub use piecewise::{Domain, Piece, PiecewiseFunction, Support};
pub use space::{Exponent, NormedSpace};

pub type NormedSpace64 = NormedSpace<f64>;
pub type NormedSpace32 = NormedSpace<f32>;
pub type PiecewiseFunction64 = PiecewiseFunction<f64>;
pub type PiecewiseFunction32 = PiecewiseFunction<f32>;
pub type BoxStepFunction64 = BoxStepFunction<f64>;
pub type GridFunction64 = GridFunction<f64>;
pub type GridFunction32 = GridFunction<f32>;
pub type Gauge64 = Gauge<f64>;
pub type GaugePair64 = GaugePair<f64>;
pub type NormEstimate64 = norms::NormEstimate<f64>;
pub type OperatorKind64 = transforms::OperatorKind<f64>;
