//! Spectral workbench for compactly supported stationary axisymmetric
//! Euler flows obtained from an overdetermined Grad-Shafranov boundary
//! problem.
//!
//! The pipeline: a semilinear Dirichlet solve on a perturbed disk
//! (`gs`), a quasi-Newton iteration on the boundary shape that also
//! enforces the Neumann condition (`shape`), assembly of the physical
//! velocity/pressure/vorticity fields with zero extension (`euler`),
//! and an order-fitting validation harness for the known asymptotic
//! expansions (`validate`).
//!
//! All numerics are generic over the scalar type via [`scalar::Scalar`];
//! the `*64` aliases below pin `f64`, which every shipped tolerance is
//! tuned for.

pub mod constants;
pub mod error;
pub mod euler;
pub mod field;
pub mod fourier;
pub mod grid;
pub mod gs;
pub mod linalg;
pub mod map;
pub mod operator;
pub mod profile;
pub mod scalar;
pub mod shape;
pub mod spectral;
pub mod validate;

pub use error::{GsError, Result};

/// `f64` aliases for the main domain types.
pub type FourierSeries64 = fourier::FourierSeries<f64>;
pub type DiskField64 = field::DiskField<f64>;
pub type DiskGrid64 = grid::DiskGrid<f64>;
pub type ProfileFunctions64 = profile::ProfileFunctions<f64>;
pub type ProblemConstants64 = constants::ProblemConstants<f64>;
pub type DomainMap64 = map::DomainMap<f64>;
pub type ShapeState64 = shape::ShapeState<f64>;
pub type SolutionBundle64 = euler::SolutionBundle<f64>;
