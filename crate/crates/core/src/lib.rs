//! Convex lattice geometry and entropy of multidimensional cellular automata.
//!
//! Geometry is generic over [`Scalar`]; the exact path uses [`Rational`].

pub mod ca;
pub mod entropy;
pub mod error;
pub mod geometry;
pub mod lyapunov;
pub mod scalar;

pub use error::{Error, Result};
pub use geometry::{LatticeVector, Polytope};
pub use scalar::Scalar;

/// Exact rational scalar used by all lattice decisions.
pub type Rational = num_rational::Ratio<i128>;
/// Polytope with exact rational coordinates.
pub type RatPolytope = Polytope<Rational>;
/// Polytope with floating-point coordinates (metric constructions).
pub type FloatPolytope = Polytope<f64>;
