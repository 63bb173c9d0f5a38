//! Exact l1 cut decompositions of finite point sets in planar Busemann
//! geometries.
//!
//! Three straight-line models are supported: the Euclidean plane, strictly
//! convex `l_p` Minkowski planes and the Klein model of the hyperbolic plane.
//! In every one of them geodesic lines are Euclidean straight lines (chords of
//! the unit disk for Klein), so all combinatorics run on exact orientation
//! predicates and only the weights go through floating point.
//!
//! The pipeline is
//!
//! 1. [`separations::enumerate_classes`] lists every line-separable bipartition
//!    of a configuration in general position,
//! 2. each class gets a nonnegative weight from its extremal segments
//!    ([`separations::sigma`]),
//! 3. [`embedding::crofton_embed`] turns the weighted classes into cuts whose
//!    l1 metric reproduces the input distances exactly.
//!
//! Degenerate inputs are moved to general position by
//! [`embedding::perturb_to_general_position`]. The [`graphs`] module covers the
//! graph side: interval convexity certificates and polygon shortcut bounds.

pub mod convexity;
pub mod embedding;
pub mod error;
pub mod geometry;
pub mod graphs;
pub mod io;
pub mod separations;

pub use embedding::{CutDecomposition, PointConfig};
pub use error::{Error, Result};
pub use geometry::{GeometryModel, OrientedLine, Point, Side};
