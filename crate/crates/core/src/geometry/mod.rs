//! Finite point clouds in R^d and the primitives everything else is built on:
//! support functions, convex hulls in H-representation, Chebyshev centers,
//! ball-in-hull decisions, covering checks and brute-force Minkowski sums.
//!
//! All comparisons go through a single absolute [`Tolerance`].

pub mod hull;
pub mod linalg;
pub mod lp;

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use hull::{
    affine_dimension, ball_in_hull, chebyshev_center, convex_hull, hull_membership,
    BallContainment, Facet, HRepresentation, MAX_HULL_DIM,
};

/// Default cap on the number of points any brute-force enumeration may produce.
pub const DEFAULT_POINT_CAP: usize = 1_000_000;

/// Absolute comparison tolerance shared by every geometric predicate.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Tolerance(f64);

impl Tolerance {
    pub const DEFAULT: f64 = 1e-9;

    pub fn new(eps: f64) -> Result<Self> {
        if !eps.is_finite() || eps <= 0.0 {
            return Err(Error::InvalidParameter(format!(
                "tolerance must be a positive finite number, got {eps}"
            )));
        }
        Ok(Tolerance(eps))
    }

    #[inline]
    pub fn eps(self) -> f64 {
        self.0
    }
}

impl Default for Tolerance {
    fn default() -> Self {
        Tolerance(Self::DEFAULT)
    }
}

/// A point of R^d.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Point(Vec<f64>);

impl Point {
    /// Validating constructor: at least one coordinate, all finite.
    pub fn new(coords: Vec<f64>) -> Result<Self> {
        if coords.is_empty() {
            return Err(Error::Empty("point with no coordinates".into()));
        }
        if let Some(bad) = coords.iter().find(|c| !c.is_finite()) {
            return Err(Error::NonFinite(format!("coordinate {bad}")));
        }
        Ok(Point(coords))
    }

    pub fn zeros(dim: usize) -> Self {
        Point(vec![0.0; dim])
    }

    /// Internal constructor for values produced by arithmetic on valid points.
    pub(crate) fn from_vec(coords: Vec<f64>) -> Self {
        debug_assert!(coords.iter().all(|c| c.is_finite()));
        Point(coords)
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.0.len()
    }

    #[inline]
    pub fn coords(&self) -> &[f64] {
        &self.0
    }

    pub fn into_vec(self) -> Vec<f64> {
        self.0
    }

    #[inline]
    pub fn dot(&self, other: &Point) -> f64 {
        dot(&self.0, &other.0)
    }

    pub fn norm(&self) -> f64 {
        norm(&self.0)
    }

    pub fn distance(&self, other: &Point) -> f64 {
        distance(&self.0, &other.0)
    }

    pub fn add(&self, other: &Point) -> Point {
        Point(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn sub(&self, other: &Point) -> Point {
        Point(self.0.iter().zip(&other.0).map(|(a, b)| a - b).collect())
    }

    pub fn scale(&self, s: f64) -> Point {
        Point(self.0.iter().map(|a| a * s).collect())
    }

    pub fn add_assign(&mut self, other: &Point) {
        for (a, b) in self.0.iter_mut().zip(&other.0) {
            *a += b;
        }
    }

    pub(crate) fn check_dim(&self, dim: usize) -> Result<()> {
        if self.dim() != dim {
            return Err(Error::DimensionMismatch {
                expected: dim,
                found: self.dim(),
            });
        }
        Ok(())
    }
}

impl From<f64> for Point {
    fn from(x: f64) -> Self {
        Point::from_vec(vec![x])
    }
}

#[inline]
pub(crate) fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

#[inline]
pub(crate) fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

#[inline]
pub(crate) fn distance(a: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y) * (x - y))
        .sum::<f64>()
        .sqrt()
}

/// Closed Euclidean ball.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Ball {
    pub center: Point,
    pub radius: f64,
}

impl Ball {
    pub fn new(center: Point, radius: f64) -> Result<Self> {
        if !radius.is_finite() || radius < 0.0 {
            return Err(Error::InvalidParameter(format!(
                "ball radius must be finite and nonnegative, got {radius}"
            )));
        }
        Ok(Ball { center, radius })
    }

    pub fn contains(&self, p: &Point, tol: Tolerance) -> bool {
        self.center.distance(p) <= self.radius + tol.eps()
    }
}

/// A nonempty finite set of points sharing one ambient dimension, deduplicated at
/// the construction tolerance (first occurrence wins).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PointCloud {
    dim: usize,
    points: Vec<Point>,
}

impl PointCloud {
    pub fn new(points: Vec<Point>) -> Result<Self> {
        Self::with_tolerance(points, Tolerance::default())
    }

    pub fn with_tolerance(points: Vec<Point>, tol: Tolerance) -> Result<Self> {
        Self::with_index_map(points, tol).map(|(cloud, _)| cloud)
    }

    /// Builds a cloud and also returns, for every input index, the index of the
    /// cloud point it was merged into.
    pub fn with_index_map(points: Vec<Point>, tol: Tolerance) -> Result<(Self, Vec<usize>)> {
        let first = points
            .first()
            .ok_or_else(|| Error::Empty("point cloud with no points".into()))?;
        let dim = first.dim();
        for p in &points {
            p.check_dim(dim)?;
        }
        let (kept, map) = dedup_indices(&points, tol);
        let mut slots: Vec<Option<Point>> = points.into_iter().map(Some).collect();
        let points = kept.iter().map(|&i| slots[i].take().unwrap()).collect();
        Ok((PointCloud { dim, points }, map))
    }

    /// Convenience for one-dimensional clouds.
    pub fn from_scalars(values: &[f64]) -> Result<Self> {
        let pts = values
            .iter()
            .map(|&v| Point::new(vec![v]))
            .collect::<Result<Vec<_>>>()?;
        Self::new(pts)
    }

    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let pts = rows
            .iter()
            .map(|r| Point::new(r.clone()))
            .collect::<Result<Vec<_>>>()?;
        Self::new(pts)
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.dim
    }

    #[inline]
    pub fn points(&self) -> &[Point] {
        &self.points
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.points.len()
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn check_dim(&self, dim: usize) -> Result<()> {
        if self.dim != dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                found: dim,
            });
        }
        Ok(())
    }

    /// Points within `r` (plus tolerance) of `x`, as a new cloud. `None` when empty.
    pub fn within(&self, x: &Point, r: f64, tol: Tolerance) -> Option<PointCloud> {
        let pts: Vec<Point> = self
            .points
            .iter()
            .filter(|p| p.distance(x) <= r + tol.eps())
            .cloned()
            .collect();
        if pts.is_empty() {
            None
        } else {
            Some(PointCloud {
                dim: self.dim,
                points: pts,
            })
        }
    }

    /// Euclidean distance from `x` to the nearest cloud point.
    pub fn distance_to(&self, x: &Point) -> f64 {
        self.points
            .iter()
            .map(|p| p.distance(x))
            .fold(f64::INFINITY, f64::min)
    }

    pub fn centroid(&self) -> Point {
        let mut c = Point::zeros(self.dim);
        for p in &self.points {
            c.add_assign(p);
        }
        c.scale(1.0 / self.points.len() as f64)
    }

    pub fn translate(&self, t: &Point) -> PointCloud {
        PointCloud {
            dim: self.dim,
            points: self.points.iter().map(|p| p.add(t)).collect(),
        }
    }

    /// Applies `p -> s * M p + t` to every point; `M` is given row-major.
    pub fn transform(&self, m: &[Vec<f64>], s: f64, t: &Point) -> PointCloud {
        let points = self
            .points
            .iter()
            .map(|p| {
                let v: Vec<f64> = m
                    .iter()
                    .zip(t.coords())
                    .map(|(row, ti)| s * dot(row, p.coords()) + ti)
                    .collect();
                Point::from_vec(v)
            })
            .collect();
        PointCloud {
            dim: self.dim,
            points,
        }
    }

    pub(crate) fn from_points_unchecked(dim: usize, points: Vec<Point>) -> PointCloud {
        PointCloud { dim, points }
    }
}

/// Greedy first-seen-wins deduplication at `tol`. Returns the kept indices and,
/// for every input index, the position in the kept list it maps to.
pub(crate) fn dedup_indices(points: &[Point], tol: Tolerance) -> (Vec<usize>, Vec<usize>) {
    let mut kept: Vec<usize> = Vec::new();
    let mut map = Vec::with_capacity(points.len());
    let Some(first) = points.first() else {
        return (kept, map);
    };
    let dim = first.dim();
    let eps = tol.eps();
    if dim > 6 {
        for (i, p) in points.iter().enumerate() {
            match kept.iter().position(|&k| points[k].distance(p) <= eps) {
                Some(pos) => map.push(pos),
                None => {
                    map.push(kept.len());
                    kept.push(i);
                }
            }
        }
        return (kept, map);
    }
    let mut grid: HashMap<Vec<i64>, Vec<usize>> = HashMap::new();
    for (i, p) in points.iter().enumerate() {
        let cell = grid_cell(p.coords(), eps);
        let mut hit: Option<usize> = None;
        for_each_neighbor(&cell, |nb| {
            if let Some(bucket) = grid.get(nb) {
                for &pos in bucket {
                    if points[kept[pos]].distance(p) <= eps && hit.is_none_or(|h| pos < h) {
                        hit = Some(pos);
                    }
                }
            }
        });
        match hit {
            Some(pos) => map.push(pos),
            None => {
                let pos = kept.len();
                kept.push(i);
                map.push(pos);
                grid.entry(cell).or_default().push(pos);
            }
        }
    }
    (kept, map)
}

pub(crate) fn grid_cell(coords: &[f64], cell: f64) -> Vec<i64> {
    coords
        .iter()
        .map(|&c| (c / cell).floor().clamp(-9.0e18, 9.0e18) as i64)
        .collect()
}

/// Calls `f` on every cell in the 3^d neighbourhood of `cell` (including itself).
pub(crate) fn for_each_neighbor(cell: &[i64], mut f: impl FnMut(&Vec<i64>)) {
    let d = cell.len();
    let mut offs = vec![-1i64; d];
    let mut nb = cell.to_vec();
    loop {
        for k in 0..d {
            nb[k] = cell[k].saturating_add(offs[k]);
        }
        f(&nb);
        let mut k = 0;
        loop {
            if k == d {
                return;
            }
            offs[k] += 1;
            if offs[k] <= 1 {
                break;
            }
            offs[k] = -1;
            k += 1;
        }
    }
}

/// Greedy ε-net in input order: every cloud point lies within `eps` of a
/// returned point, and returned points are cloud points. Returns indices.
pub(crate) fn greedy_net(points: &[Point], eps: f64) -> Vec<usize> {
    if points.is_empty() {
        return Vec::new();
    }
    if eps <= 0.0 {
        return (0..points.len()).collect();
    }
    let dim = points[0].dim();
    let mut net: Vec<usize> = Vec::new();
    if dim > 6 {
        for (i, p) in points.iter().enumerate() {
            if !net.iter().any(|&j| points[j].distance(p) <= eps) {
                net.push(i);
            }
        }
        return net;
    }
    let mut grid: HashMap<Vec<i64>, Vec<usize>> = HashMap::new();
    for (i, p) in points.iter().enumerate() {
        let cell = grid_cell(p.coords(), eps);
        let mut covered = false;
        for_each_neighbor(&cell, |nb| {
            if covered {
                return;
            }
            if let Some(bucket) = grid.get(nb) {
                covered = bucket.iter().any(|&j| points[j].distance(p) <= eps);
            }
        });
        if !covered {
            net.push(i);
            grid.entry(cell).or_default().push(i);
        }
    }
    net
}

/// h_K(u) = max over cloud points of <x, u>.
pub fn support_function(cloud: &PointCloud, u: &Point) -> Result<f64> {
    u.check_dim(cloud.dim())?;
    Ok(cloud
        .points()
        .iter()
        .map(|p| p.dot(u))
        .fold(f64::NEG_INFINITY, f64::max))
}

/// Largest pairwise Euclidean distance. Zero for a singleton.
pub fn diameter(cloud: &PointCloud) -> f64 {
    let pts = cloud.points();
    if cloud.dim() == 1 {
        let (lo, hi) = pts
            .iter()
            .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), p| {
                (lo.min(p.coords()[0]), hi.max(p.coords()[0]))
            });
        return hi - lo;
    }
    let mut best = 0.0f64;
    for i in 0..pts.len() {
        for j in (i + 1)..pts.len() {
            best = best.max(pts[i].distance(&pts[j]));
        }
    }
    best
}

/// True iff every point of `a` is within `eps` (plus tolerance) of some point of `f`,
/// i.e. `a ⊂ f + B(0, eps)`.
pub fn covering_check(a: &PointCloud, f: &PointCloud, eps: f64, tol: Tolerance) -> Result<bool> {
    a.check_dim(f.dim())?;
    if !eps.is_finite() || eps < 0.0 {
        return Err(Error::InvalidParameter(format!(
            "covering radius must be nonnegative, got {eps}"
        )));
    }
    let reach = eps + tol.eps();
    let dim = f.dim();
    if dim > 6 || reach <= 0.0 {
        return Ok(a.points().iter().all(|p| f.distance_to(p) <= reach));
    }
    let mut grid: HashMap<Vec<i64>, Vec<usize>> = HashMap::new();
    for (j, q) in f.points().iter().enumerate() {
        grid.entry(grid_cell(q.coords(), reach))
            .or_default()
            .push(j);
    }
    Ok(a.points().iter().all(|p| {
        let cell = grid_cell(p.coords(), reach);
        let mut hit = false;
        for_each_neighbor(&cell, |nb| {
            if hit {
                return;
            }
            if let Some(bucket) = grid.get(nb) {
                hit = bucket.iter().any(|&j| f.points()[j].distance(p) <= reach);
            }
        });
        hit
    }))
}

/// Product of the cloud sizes, saturating.
pub fn sum_cardinality(clouds: &[PointCloud]) -> u128 {
    clouds
        .iter()
        .fold(1u128, |acc, c| acc.saturating_mul(c.len() as u128))
}

/// Brute-force Minkowski sum `A_1 + ... + A_n`, deduplicated at `tol`.
/// Enumeration order is odometer order with the last cloud varying fastest.
pub fn minkowski_sum_points(
    clouds: &[PointCloud],
    cap: usize,
    tol: Tolerance,
) -> Result<PointCloud> {
    let first = clouds
        .first()
        .ok_or_else(|| Error::Empty("Minkowski sum of zero clouds".into()))?;
    let dim = first.dim();
    for c in clouds {
        c.check_dim(dim)?;
    }
    let size = sum_cardinality(clouds);
    if size > cap as u128 {
        return Err(Error::CapExceeded { size, cap });
    }
    let mut sums = Vec::with_capacity(size as usize);
    for_each_sum(clouds, |_, s| sums.push(Point::from_vec(s.to_vec())));
    PointCloud::with_tolerance(sums, tol)
}

/// Visits every tuple `(a_1, ..., a_n)` with `a_i ∈ clouds[i]`, passing the index
/// tuple and the coordinate sum. Caller is responsible for the size cap.
pub(crate) fn for_each_sum(clouds: &[PointCloud], mut f: impl FnMut(&[usize], &[f64])) {
    let n = clouds.len();
    if n == 0 {
        return;
    }
    let dim = clouds[0].dim();
    let mut idx = vec![0usize; n];
    // partial[k] = sum of the first k chosen points
    let mut partial = vec![vec![0.0; dim]; n + 1];
    let mut level = 0;
    loop {
        while level < n {
            let p = clouds[level].points()[idx[level]].coords();
            let (head, tail) = partial.split_at_mut(level + 1);
            for ((t, h), c) in tail[0].iter_mut().zip(&head[level]).zip(p) {
                *t = h + c;
            }
            level += 1;
        }
        f(&idx, &partial[n]);
        // advance odometer
        let mut k = n;
        loop {
            if k == 0 {
                return;
            }
            k -= 1;
            idx[k] += 1;
            if idx[k] < clouds[k].len() {
                level = k;
                break;
            }
            idx[k] = 0;
        }
    }
}
