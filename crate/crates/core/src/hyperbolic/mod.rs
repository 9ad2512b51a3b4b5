//! Numeric kernel for the Poincaré disk model.
//!
//! Points are complex numbers of modulus less than one. Orientation
//! preserving isometries are `SU(1,1)` matrices acting by Möbius
//! transformations. The Klein model (geodesics are chords) and the hyperboloid
//! model (distances are Minkowski products) are used internally where they
//! make a computation linear.

mod geodesic;
mod isometry;
mod point;
mod polygon;
mod predicates;

pub use geodesic::{geodesic_intersection, Geodesic};
pub use isometry::Isometry;
pub use point::{dist, minkowski, minkowski_cross, DiskPoint};
pub use polygon::{corner_angle, direction, interior_angles, polygon_area, HyperbolicPolygon};
pub use predicates::{
    circumcenter, in_circle, in_circle_det, orientation, relative_orientation, segments_cross, CircleSide,
};
