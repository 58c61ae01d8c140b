//! Convex-geometry toolkit for Minkowski sums of thick sets: Shapley–Folkman
//! rounding, thickness certificates and finite-depth interior certificates.

pub mod error;
pub mod geometry;
pub mod interior;
pub mod io;
pub mod oracle;
pub mod shapley_folkman;
pub mod thick;
pub mod thresholds;

pub use error::{Error, Result};
pub use geometry::{Ball, Point, PointCloud, Tolerance};
