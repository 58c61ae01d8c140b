//! Derandomized rounding of convexified summands back to cloud points.

use serde::{Deserialize, Serialize};

use super::{check_common_dim, rad, sf_decompose, SfDecomposition};
use crate::error::{Error, Result};
use crate::geometry::{distance, hull_membership, Point, PointCloud, Tolerance};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RoundingResult {
    pub chosen: Vec<Point>,
    /// Index of each chosen point within its cloud.
    pub chosen_indices: Vec<usize>,
    /// `|Σ y_i − Σ a_i|`.
    pub error: f64,
    /// `R √m`.
    pub bound: f64,
}

/// Picks `a_i ∈ A_i` with `|Σ y_i − Σ a_i| ≤ R √m`.
///
/// Processes summands in order, keeping `S = Σ_{j<i} (a_j − y_j)` and choosing
/// the `a_i` that minimizes `|S + a_i − y_i|²` (lowest index on ties). Since
/// `y_i` is a mean of `A_i` and `A_i ⊂ B(c_i, R)`, the minimum never exceeds
/// `|S|² + R²`, so `|S|² ≤ m R²` at the end.
pub fn greedy_round(
    clouds: &[PointCloud],
    ys: &[Point],
    centers: &[Point],
    radius: f64,
    tol: Tolerance,
) -> Result<RoundingResult> {
    if clouds.len() != ys.len() || clouds.len() != centers.len() {
        return Err(Error::InvalidParameter(format!(
            "{} clouds, {} targets, {} centers",
            clouds.len(),
            ys.len(),
            centers.len()
        )));
    }
    if !(radius >= 0.0) || !radius.is_finite() {
        return Err(Error::InvalidParameter(format!("radius {radius}")));
    }
    let m = clouds.len();
    if m == 0 {
        return Ok(RoundingResult {
            chosen: Vec::new(),
            chosen_indices: Vec::new(),
            error: 0.0,
            bound: 0.0,
        });
    }
    let d = check_common_dim(clouds)?;
    for (i, (c, (y, z))) in clouds.iter().zip(ys.iter().zip(centers)).enumerate() {
        y.check_dim(d)?;
        z.check_dim(d)?;
        let worst = c.points().iter().map(|p| p.distance(z)).fold(0.0, f64::max);
        if worst > radius + tol.eps() {
            return Err(Error::ContainmentViolated {
                index: i,
                distance: worst,
                radius,
            });
        }
        if hull_membership(c, y, tol)?.is_none() {
            return Err(Error::NotInHull { index: i });
        }
    }

    let mut s = vec![0.0; d];
    let mut chosen = Vec::with_capacity(m);
    let mut chosen_indices = Vec::with_capacity(m);
    let mut shifted = vec![0.0; d];
    for (c, y) in clouds.iter().zip(ys) {
        let mut best = (usize::MAX, f64::INFINITY);
        for (j, a) in c.points().iter().enumerate() {
            for k in 0..d {
                shifted[k] = s[k] + a.coords()[k] - y.coords()[k];
            }
            let v = crate::geometry::dot(&shifted, &shifted);
            if v < best.1 {
                best = (j, v);
            }
        }
        let a = &c.points()[best.0];
        for k in 0..d {
            s[k] += a.coords()[k] - y.coords()[k];
        }
        chosen.push(a.clone());
        chosen_indices.push(best.0);
    }
    let error = crate::geometry::norm(&s);
    let bound = radius * (m as f64).sqrt();
    if error > bound + tol.eps() {
        return Err(Error::Internal(format!(
            "rounding error {error} exceeds R√m = {bound}"
        )));
    }
    Ok(RoundingResult {
        chosen,
        chosen_indices,
        error,
        bound,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RadiusRounding {
    pub decomposition: SfDecomposition,
    /// `a_i` for every summand, in input order.
    pub chosen: Vec<Point>,
    pub chosen_indices: Vec<usize>,
    pub sum: Point,
    pub target: Point,
    /// Largest minimal-enclosing radius among the clouds.
    pub radius: f64,
    /// `|x − Σ a_i|`.
    pub error: f64,
    /// `R √min(n, d)`.
    pub bound: f64,
}

/// Decomposes `x` and rounds only the exceptional summands, giving
/// `|x − Σ a_i| ≤ R √min(n, d)` with `R` the largest cloud radius.
pub fn sf_round_radius(
    clouds: &[PointCloud],
    coeffs: &[Vec<f64>],
    tol: Tolerance,
) -> Result<RadiusRounding> {
    let decomposition = sf_decompose(clouds, coeffs, tol)?;
    let d = decomposition.dim;
    let n = clouds.len();
    let balls: Vec<_> = clouds.iter().map(rad).collect();
    let radius = balls.iter().map(|b| b.radius).fold(0.0, f64::max);

    let sub_clouds: Vec<PointCloud> = decomposition
        .convexified
        .iter()
        .map(|c| clouds[c.summand].clone())
        .collect();
    let ys: Vec<Point> = decomposition
        .convexified
        .iter()
        .map(|c| c.y.clone())
        .collect();
    let centers: Vec<Point> = decomposition
        .convexified
        .iter()
        .map(|c| balls[c.summand].center.clone())
        .collect();
    let rounded = greedy_round(&sub_clouds, &ys, &centers, radius, tol)?;

    let mut chosen = vec![Point::zeros(d); n];
    let mut chosen_indices = vec![0usize; n];
    for e in &decomposition.exact {
        chosen[e.summand] = e.point.clone();
        chosen_indices[e.summand] = e.index;
    }
    for (k, c) in decomposition.convexified.iter().enumerate() {
        chosen[c.summand] = rounded.chosen[k].clone();
        chosen_indices[c.summand] = rounded.chosen_indices[k];
    }
    let mut sum = Point::zeros(d);
    for a in &chosen {
        sum.add_assign(a);
    }
    let target = decomposition.target.clone();
    let error = distance(sum.coords(), target.coords());
    let bound = radius * (n.min(d) as f64).sqrt();
    if error > bound + tol.eps() {
        return Err(Error::Internal(format!(
            "radius-form error {error} exceeds R√min(n,d) = {bound}"
        )));
    }
    Ok(RadiusRounding {
        decomposition,
        chosen,
        chosen_indices,
        sum,
        target,
        radius,
        error,
        bound,
    })
}
