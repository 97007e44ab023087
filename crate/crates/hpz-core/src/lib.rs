//! Hybrid polynomial zonotopes: an exact set representation closed under
//! linear maps, Minkowski sums, Cartesian products, intersections,
//! halfspace cuts, unions and quadratic-affine maps, plus an exact forward
//! reachability engine for piecewise quadratic-affine discrete-time
//! systems.
//!
//! The crate is `no_std`-compatible (requires `alloc`); the `std` feature
//! (default) only adds `std::error::Error` impls and wall-clock timing in
//! the reachability diagnostics.

#![cfg_attr(not(feature = "std"), no_std)]

extern crate alloc;
#[cfg(feature = "std")]
extern crate std;

pub mod error;
pub mod feasibility;
pub mod matrix;
pub mod nonlinear;
pub mod ops;
pub mod reach;
pub mod sample;
pub mod set;
mod solve;

pub use error::HpzError;
pub use feasibility::{
    approx_member, coordinate_bounds, functional_bounds, is_provably_empty, leaf_provably_empty,
    provably_empty_leaves, MembershipParams, SupportBounds,
};
pub use matrix::{ExpMat, Mat};
pub use nonlinear::{quadratic_map, quadratic_map_leaf, QuadraticAffineMap};
pub use ops::{
    cartesian_product, generalized_intersection, halfspace_assignment, halfspace_intersection,
    intersection, intersection_assignment, linear_map, minkowski_sum, polyhedron_intersection,
    product_assignment, union, union_assignment_left, union_assignment_right, Halfspace,
};
pub use reach::{reach, step, Mode, Polyhedron, PwnaModel, ReachResult, StepDiagnostics};
pub use sample::{sample, sample_leaves, sample_with_assignments, SampleParams};
pub use set::{
    FactorAssignment, HybridPolynomialZonotope, PointCloud, DEFAULT_LEAF_CAP_LOG2, FEAS_TOL,
};
