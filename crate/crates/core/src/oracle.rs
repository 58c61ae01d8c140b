//! Exhaustive nearest-point search in a small Minkowski sum.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{for_each_sum, sum_cardinality, Point, PointCloud};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct NearestSum {
    pub distance: f64,
    /// Index into each cloud of the first minimizing tuple in odometer order.
    pub indices: Vec<usize>,
    pub point: Point,
    pub enumerated: u128,
}

/// `min |x − (a_1 + ... + a_n)|` over all tuples.
pub fn nearest_sum_point(clouds: &[PointCloud], x: &Point, cap: usize) -> Result<NearestSum> {
    let first = clouds
        .first()
        .ok_or_else(|| Error::Empty("no summands".into()))?;
    for c in clouds {
        c.check_dim(first.dim())?;
    }
    x.check_dim(first.dim())?;
    let size = sum_cardinality(clouds);
    if size > cap as u128 {
        return Err(Error::CapExceeded { size, cap });
    }
    let mut best = f64::INFINITY;
    let mut idx = Vec::new();
    let mut point = Vec::new();
    for_each_sum(clouds, |i, s| {
        let d2: f64 = s
            .iter()
            .zip(x.coords())
            .map(|(a, b)| (a - b) * (a - b))
            .sum();
        if d2 < best {
            best = d2;
            idx = i.to_vec();
            point = s.to_vec();
        }
    });
    Ok(NearestSum {
        distance: best.sqrt(),
        indices: idx,
        point: Point::from_vec(point),
        enumerated: size,
    })
}
