//! Kinetic-to-fluid limit toolkit.
//!
//! The crate has two halves that check each other:
//!
//! * an exact-arithmetic half ([`moment_algebra`], [`kinetic_model`]) that
//!   does polynomial algebra in the velocity variable with big-rational
//!   coefficients against the standard Maxwellian weight, and
//! * a numerical half ([`quadrature`], [`spectral`], [`solver`], [`fluid`])
//!   that integrates the scaled BGK fluctuation equation on a 2D periodic
//!   torus with a 3D Gauss-Hermite velocity grid and compares its steady
//!   moments to stationary fluid solutions.
//!
//! Numerical modules are generic over the scalar type through the [`Real`]
//! trait; `f64` aliases are exported at the crate root.

pub mod checkpoint;
pub mod error;
pub mod fluid;
pub mod kinetic_model;
pub mod moment_algebra;
pub mod quadrature;
pub mod solver;
pub mod spectral;

use std::fmt;
use std::iter::Sum;

use num_traits::{Float, FloatConst, FromPrimitive, ToPrimitive};

/// Scalar trait for the numerical half of the crate.
///
/// Anything float-like that rustfft can transform. Implemented for `f32`
/// and `f64` through the blanket impl.
pub trait Real:
    Float + FloatConst + FromPrimitive + ToPrimitive + rustfft::FftNum + Sum + fmt::Display + fmt::LowerExp
{
}

impl<T> Real for T where
    T: Float + FloatConst + FromPrimitive + ToPrimitive + rustfft::FftNum + Sum + fmt::Display + fmt::LowerExp
{
}

/// Default scalar for solvers and references.
pub type Scalar = f64;

pub use error::{FluidError, KineticError, ModelError};
pub use kinetic_model::{
    classify_regime, BgkOperator, HatSolution, RegimeClass, ScalingRegime, TransportCoefficients,
};
pub use moment_algebra::{Axis, Rational, VelocityPolynomial};

/// f64 spectral field on the torus.
pub type SpectralField64 = spectral::SpectralField<Scalar>;
/// f64 velocity grid.
pub type VelocityGrid64 = quadrature::VelocityGrid<Scalar>;
/// f64 kinetic solver.
pub type KineticSolver64 = solver::KineticSolver<Scalar>;
