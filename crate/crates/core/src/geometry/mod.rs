//! Exact convex geometry over ℤᵈ and ℚᵈ for `d ≤ 3`.

pub mod counting;
pub mod lattice;
pub mod linalg;
pub mod metric;
pub mod polytope;
pub mod random;
pub mod sphere;

pub use counting::{
    boundary_injection, morphological_boundary_counts, semiopen_rectangle_count, with_origin, BoundaryCounts,
    Orientation, DEFAULT_BOX_CAP,
};
pub use lattice::{lattice_sum, LatticeVector};
pub use metric::{quermass, AreaMeasureAtoms};
pub use polytope::{Halfspace, Polytope};
pub use sphere::{
    classify_bounding_sphere, dual_polytope, slab_dual, smallest_bounding_sphere,
    BoundingSphere, FacetCategory, IsometryChoice, SlabDual, SphereClass,
};
