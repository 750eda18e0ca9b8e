//! Convex bodies in R^d with support-function calculus, Minkowski
//! operations, hull distances and extreme points.

mod body;
mod directions;
mod distance;
mod point;

pub use body::{
    extreme_points, hausdorff_cloud_interval_1d, Ball, Body, PointCloud, TOL_SET_EQ,
};
pub use directions::DirectionSet;
pub use distance::{distance_to_hull, raw_distance_to_hull, TOL_FW, TOL_MEMBERSHIP};
pub use point::{axpy, Point};
