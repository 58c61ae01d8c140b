//! Convex hulls by incremental (beneath-beyond) facet enumeration, and the
//! decisions built on them: ball-in-hull margins, Chebyshev centers, and
//! hull membership with explicit convex weights.
//!
//! Facets are kept simplicial during construction; coplanar duplicates are
//! merged at the end. One-dimensional clouds take a direct min/max path.

use std::collections::HashMap;

use super::linalg;
use super::lp::{LinearProgram, LpOutcome, Relation};
use super::{dot, Ball, Point, PointCloud, Tolerance};
use crate::error::{Error, Result};

/// Largest ambient dimension accepted by [`convex_hull`].
pub const MAX_HULL_DIM: usize = 6;

/// Half-space `{x : <normal, x> <= offset}` with a unit normal.
#[derive(Clone, Debug, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct Facet {
    pub normal: Point,
    pub offset: f64,
}

impl Facet {
    /// Signed slack of `x`: positive inside.
    #[inline]
    pub fn slack(&self, x: &[f64]) -> f64 {
        self.offset - dot(self.normal.coords(), x)
    }
}

#[derive(Clone, Debug, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct HRepresentation {
    pub dim: usize,
    pub facets: Vec<Facet>,
    /// Indices (into the source cloud) of hull vertices, ascending.
    pub vertices: Vec<usize>,
}

impl HRepresentation {
    /// `min_f (offset_f - <n_f, center>) - radius`; nonnegative iff the ball is inside.
    pub fn margin(&self, ball: &Ball) -> f64 {
        self.facets
            .iter()
            .map(|f| f.slack(ball.center.coords()))
            .fold(f64::INFINITY, f64::min)
            - ball.radius
    }

    pub fn contains_point(&self, x: &Point, tol: Tolerance) -> bool {
        self.facets
            .iter()
            .all(|f| f.slack(x.coords()) >= -tol.eps())
    }
}

/// Dimension of the affine hull of the cloud, at tolerance.
pub fn affine_dimension(cloud: &PointCloud, tol: Tolerance) -> usize {
    initial_simplex(cloud, tol).len() - 1
}

/// Greedily picks up to `dim + 1` affinely independent points: start from the
/// first point, then repeatedly take the point farthest from the current affine
/// span. Stops early when every remaining point is within `tol` of the span.
fn initial_simplex(cloud: &PointCloud, tol: Tolerance) -> Vec<usize> {
    let pts = cloud.points();
    let d = cloud.dim();
    let origin = pts[0].coords();
    let mut chosen = vec![0usize];
    let mut basis: Vec<Vec<f64>> = Vec::new();
    while chosen.len() <= d {
        let mut best = (0usize, -1.0f64);
        for (i, p) in pts.iter().enumerate() {
            let mut r: Vec<f64> = p.coords().iter().zip(origin).map(|(a, b)| a - b).collect();
            for b in &basis {
                let c = dot(&r, b);
                for (x, y) in r.iter_mut().zip(b) {
                    *x -= c * y;
                }
            }
            let n = super::norm(&r);
            if n > best.1 {
                best = (i, n);
            }
        }
        if best.1 <= tol.eps() {
            break;
        }
        let p = pts[best.0].coords();
        let mut r: Vec<f64> = p.iter().zip(origin).map(|(a, b)| a - b).collect();
        // two passes of Gram-Schmidt against the basis for stability
        for _ in 0..2 {
            for b in &basis {
                let c = dot(&r, b);
                for (x, y) in r.iter_mut().zip(b) {
                    *x -= c * y;
                }
            }
        }
        let n = super::norm(&r);
        basis.push(r.into_iter().map(|x| x / n).collect());
        chosen.push(best.0);
    }
    chosen
}

struct SimplicialFacet {
    verts: Vec<usize>,
    normal: Vec<f64>,
    offset: f64,
    alive: bool,
}

fn hyperplane(pts: &[Point], verts: &[usize], interior: &[f64]) -> Option<(Vec<f64>, f64)> {
    let v0 = pts[verts[0]].coords();
    let d = v0.len();
    let rows: Vec<Vec<f64>> = verts[1..]
        .iter()
        .map(|&v| pts[v].coords().iter().zip(v0).map(|(a, b)| a - b).collect())
        .collect();
    // normal spans the null space of the edge rows
    let mut mat = rows;
    let pivots = linalg::rref(&mut mat, 1e-13);
    if pivots.len() != d - 1 {
        return None;
    }
    let free = (0..d).find(|j| !pivots.contains(j))?;
    let mut n = vec![0.0; d];
    n[free] = 1.0;
    for (r, &pc) in pivots.iter().enumerate() {
        n[pc] = -mat[r][free];
    }
    let len = super::norm(&n);
    for x in n.iter_mut() {
        *x /= len;
    }
    let mut off = dot(&n, v0);
    if dot(&n, interior) > off {
        for x in n.iter_mut() {
            *x = -*x;
        }
        off = -off;
    }
    Some((n, off))
}

/// Facet enumeration of `conv(cloud)`.
///
/// Errors on lower-dimensional input with the affine-hull dimension, and on
/// ambient dimension above [`MAX_HULL_DIM`].
pub fn convex_hull(cloud: &PointCloud, tol: Tolerance) -> Result<HRepresentation> {
    let d = cloud.dim();
    if d > MAX_HULL_DIM {
        return Err(Error::DimensionTooLarge {
            dim: d,
            max: MAX_HULL_DIM,
        });
    }
    let pts = cloud.points();
    if d == 1 {
        let (mut lo, mut hi) = (0usize, 0usize);
        for (i, p) in pts.iter().enumerate() {
            if p.coords()[0] < pts[lo].coords()[0] {
                lo = i;
            }
            if p.coords()[0] > pts[hi].coords()[0] {
                hi = i;
            }
        }
        let (a, b) = (pts[lo].coords()[0], pts[hi].coords()[0]);
        if b - a <= tol.eps() {
            return Err(Error::Degenerate {
                affine_dim: 0,
                dim: 1,
            });
        }
        let mut vertices = vec![lo, hi];
        vertices.sort_unstable();
        return Ok(HRepresentation {
            dim: 1,
            facets: vec![
                Facet {
                    normal: Point::from_vec(vec![-1.0]),
                    offset: -a,
                },
                Facet {
                    normal: Point::from_vec(vec![1.0]),
                    offset: b,
                },
            ],
            vertices,
        });
    }

    let simplex = initial_simplex(cloud, tol);
    if simplex.len() < d + 1 {
        return Err(Error::Degenerate {
            affine_dim: simplex.len() - 1,
            dim: d,
        });
    }
    let mut interior = vec![0.0; d];
    for &i in &simplex {
        for (c, x) in interior.iter_mut().zip(pts[i].coords()) {
            *c += x / (d + 1) as f64;
        }
    }
    let mut facets: Vec<SimplicialFacet> = Vec::new();
    for skip in 0..simplex.len() {
        let mut verts: Vec<usize> = simplex
            .iter()
            .enumerate()
            .filter(|&(k, _)| k != skip)
            .map(|(_, &v)| v)
            .collect();
        verts.sort_unstable();
        let (normal, offset) = hyperplane(pts, &verts, &interior)
            .ok_or_else(|| Error::Internal("initial simplex facet is degenerate".into()))?;
        facets.push(SimplicialFacet {
            verts,
            normal,
            offset,
            alive: true,
        });
    }

    let in_simplex: Vec<bool> = {
        let mut v = vec![false; pts.len()];
        for &i in &simplex {
            v[i] = true;
        }
        v
    };
    let eps = tol.eps();
    for (p_idx, p) in pts.iter().enumerate() {
        if in_simplex[p_idx] {
            continue;
        }
        let x = p.coords();
        let visible: Vec<usize> = facets
            .iter()
            .enumerate()
            .filter(|(_, f)| f.alive && dot(&f.normal, x) - f.offset > eps)
            .map(|(i, _)| i)
            .collect();
        if visible.is_empty() {
            continue;
        }
        // A ridge of a visible facet is on the horizon iff no other visible
        // facet shares it.
        let mut ridge_count: HashMap<Vec<usize>, usize> = HashMap::new();
        let mut ridge_order: Vec<Vec<usize>> = Vec::new();
        for &fi in &visible {
            let verts = &facets[fi].verts;
            for skip in 0..verts.len() {
                let ridge: Vec<usize> = verts
                    .iter()
                    .enumerate()
                    .filter(|&(k, _)| k != skip)
                    .map(|(_, &v)| v)
                    .collect();
                let e = ridge_count.entry(ridge.clone()).or_insert(0);
                if *e == 0 {
                    ridge_order.push(ridge);
                }
                *e += 1;
            }
        }
        for &fi in &visible {
            facets[fi].alive = false;
        }
        for ridge in ridge_order {
            if ridge_count[&ridge] != 1 {
                continue;
            }
            let mut verts = ridge;
            verts.push(p_idx);
            verts.sort_unstable();
            if let Some((normal, offset)) = hyperplane(pts, &verts, &interior) {
                facets.push(SimplicialFacet {
                    verts,
                    normal,
                    offset,
                    alive: true,
                });
            }
        }
        facets.retain(|f| f.alive);
    }

    let mut merged: Vec<Facet> = Vec::new();
    let mut vertex_set: Vec<usize> = Vec::new();
    let merge_tol = 1e3 * eps;
    for f in facets.iter().filter(|f| f.alive) {
        vertex_set.extend_from_slice(&f.verts);
        let dup = merged.iter().any(|g| {
            (g.offset - f.offset).abs() <= merge_tol
                && g.normal
                    .coords()
                    .iter()
                    .zip(&f.normal)
                    .all(|(a, b)| (a - b).abs() <= merge_tol)
        });
        if !dup {
            merged.push(Facet {
                normal: Point::from_vec(f.normal.clone()),
                offset: f.offset,
            });
        }
    }
    vertex_set.sort_unstable();
    vertex_set.dedup();
    // Drop vertices lying strictly inside every merged facet but one (coplanar
    // interior points of merged faces are not vertices).
    let vertices = vertex_set
        .into_iter()
        .filter(|&v| {
            let tight = merged
                .iter()
                .filter(|f| f.slack(pts[v].coords()).abs() <= merge_tol)
                .count();
            tight >= d
        })
        .collect();
    Ok(HRepresentation {
        dim: d,
        facets: merged,
        vertices,
    })
}

/// Result of a ball-in-hull decision.
#[derive(Clone, Debug, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct BallContainment {
    pub contained: bool,
    /// `min_f (offset_f - <n_f, center>) - radius`. For degenerate hulls this is
    /// the negated radius, or the phase-one residual for zero-radius queries.
    pub margin: f64,
    /// Affine dimension when the hull was lower-dimensional.
    pub degenerate_dim: Option<usize>,
}

/// Decides `B ⊂ conv(cloud)` at tolerance: contained iff margin >= -tol.
pub fn ball_in_hull(cloud: &PointCloud, ball: &Ball, tol: Tolerance) -> Result<BallContainment> {
    cloud.check_dim(ball.center.dim())?;
    match convex_hull(cloud, tol) {
        Ok(h) => {
            let margin = h.margin(ball);
            Ok(BallContainment {
                contained: margin >= -tol.eps(),
                margin,
                degenerate_dim: None,
            })
        }
        Err(Error::Degenerate { affine_dim, .. }) => {
            if ball.radius <= tol.eps() {
                let (weights, residual) = membership_lp(cloud, &ball.center, tol)?;
                Ok(BallContainment {
                    contained: weights.is_some(),
                    margin: if weights.is_some() {
                        -ball.radius
                    } else {
                        -residual
                    },
                    degenerate_dim: Some(affine_dim),
                })
            } else {
                Ok(BallContainment {
                    contained: false,
                    margin: -ball.radius,
                    degenerate_dim: Some(affine_dim),
                })
            }
        }
        Err(e) => Err(e),
    }
}

/// Largest ball inside `conv(cloud)`. Degenerate hulls give radius 0 centered
/// at the first cloud point.
pub fn chebyshev_center(cloud: &PointCloud, tol: Tolerance) -> Result<Ball> {
    match convex_hull(cloud, tol) {
        Ok(h) => chebyshev_of_hull(cloud, &h, tol),
        Err(Error::Degenerate { .. }) => Ok(Ball {
            center: cloud.points()[0].clone(),
            radius: 0.0,
        }),
        Err(e) => Err(e),
    }
}

/// Chebyshev ball of an already enumerated hull of `cloud`:
/// `max ρ  s.t.  <n_f, y> + ρ <= offset_f`.
pub fn chebyshev_of_hull(cloud: &PointCloud, h: &HRepresentation, tol: Tolerance) -> Result<Ball> {
    let d = h.dim;
    if d == 1 {
        let lo = -h.facets[0].offset;
        let hi = h.facets[1].offset;
        return Ok(Ball {
            center: Point::from_vec(vec![0.5 * (lo + hi)]),
            radius: 0.5 * (hi - lo),
        });
    }
    // Shift by an interior point so every right-hand side is nonnegative.
    let mut c = vec![0.0; d];
    for &v in &h.vertices {
        for (ci, x) in c.iter_mut().zip(cloud.points()[v].coords()) {
            *ci += x / h.vertices.len() as f64;
        }
    }
    // variables: w+ (d), w- (d), rho
    let nv = 2 * d + 1;
    let mut obj = vec![0.0; nv];
    obj[2 * d] = -1.0;
    let mut lp = LinearProgram::minimize(obj);
    for f in &h.facets {
        let mut row = vec![0.0; nv];
        for k in 0..d {
            row[k] = f.normal.coords()[k];
            row[d + k] = -f.normal.coords()[k];
        }
        row[2 * d] = 1.0;
        lp.add(row, Relation::Le, f.slack(&c).max(0.0));
    }
    match lp.solve(tol.eps())? {
        LpOutcome::Optimal { x, .. } => {
            let center: Vec<f64> = (0..d).map(|k| c[k] + x[k] - x[d + k]).collect();
            Ok(Ball {
                center: Point::from_vec(center),
                radius: x[2 * d].max(0.0),
            })
        }
        other => Err(Error::Lp(format!("Chebyshev program: {other:?}"))),
    }
}

/// Convex weights `w` over the cloud points with `Σ w_j p_j = y`, if `y` lies in
/// `conv(cloud)` at tolerance.
pub fn hull_membership(cloud: &PointCloud, y: &Point, tol: Tolerance) -> Result<Option<Vec<f64>>> {
    cloud.check_dim(y.dim())?;
    Ok(membership_lp(cloud, y, tol)?.0)
}

fn membership_lp(cloud: &PointCloud, y: &Point, tol: Tolerance) -> Result<(Option<Vec<f64>>, f64)> {
    let n = cloud.len();
    let d = cloud.dim();
    if n == 1 {
        let dist = cloud.points()[0].distance(y);
        return Ok(if dist <= tol.eps() {
            (Some(vec![1.0]), 0.0)
        } else {
            (None, dist)
        });
    }
    let mut lp = LinearProgram::minimize(vec![0.0; n]);
    for k in 0..d {
        let row = cloud.points().iter().map(|p| p.coords()[k]).collect();
        lp.add(row, Relation::Eq, y.coords()[k]);
    }
    lp.add(vec![1.0; n], Relation::Eq, 1.0);
    match lp.solve(tol.eps())? {
        LpOutcome::Optimal { x, .. } => Ok((Some(x), 0.0)),
        LpOutcome::Infeasible { phase_one_value } => Ok((None, phase_one_value)),
        LpOutcome::Unbounded => Err(Error::Lp("membership program unbounded".into())),
    }
}
