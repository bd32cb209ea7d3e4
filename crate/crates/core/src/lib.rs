//! Volumes of stacks presented by groupoids.
//!
//! Two engines live here:
//!
//! * the **finite** side ([`groupoid`], [`morita`]) works with finite
//!   groupoids given by explicit tables and computes cardinalities, weighted
//!   volumes and orbit-space measures in exact arithmetic;
//! * the **smooth** side ([`smooth`], backed by [`quadrature`]) evaluates the
//!   same quantities numerically for a fixed catalog of Lie groupoid models.
//!
//! Arithmetic is generic: finite-side routines accept any [`Scalar`] (the
//! canonical choice is [`Rational`]), numeric routines accept any
//! [`num_traits::Float`] (canonically [`Real`]).

pub mod error;
pub mod group;
pub mod groupoid;
pub mod json;
pub mod morita;
pub mod quadrature;
pub mod scalar;
pub mod smooth;

pub use error::{Error, Result};
pub use group::FiniteGroup;
pub use groupoid::{
    Block, FiniteGroupoid, Orbit, OrbitDecomposition, RandomBounds, ValidationReport, Violation,
    WeightData,
};
pub use morita::{Bibundle, MoritaReport};
pub use quadrature::QuadratureResult;
pub use scalar::{FloatScalar, Scalar};

/// Exact big-integer rational, the scalar used for all finite-side results.
pub type Rational = num_rational::BigRational;

/// Floating-point scalar used by the numeric engine.
pub type Real = f64;

/// Weights with exact rational values.
pub type RationalWeights = WeightData<Rational>;

/// Quadrature result in double precision.
pub type RealQuadrature = QuadratureResult<Real>;

/// Action model in double precision.
pub type RealActionModel = smooth::ActionModel<Real>;
