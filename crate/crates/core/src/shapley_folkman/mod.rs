//! Shapley–Folkman machinery: conic reduction, the lifted exchange argument,
//! greedy rounding of convexified summands and an empirical residual oracle.

mod conic;
mod radius;
mod residual;
mod rounding;

pub use conic::{conic_reduce, ConicCombination, ConicTerm};
pub use radius::rad;
pub use residual::{residual_measure, ResidualReport};
pub use rounding::{greedy_round, sf_round_radius, RadiusRounding, RoundingResult};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{hull_membership, Point, PointCloud, Tolerance};

/// A summand kept as a single cloud point.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExactChoice {
    pub summand: usize,
    pub index: usize,
    pub point: Point,
}

/// A summand kept as a convex combination over its cloud.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Convexified {
    pub summand: usize,
    /// Point indices into the summand's cloud, aligned with `combination.terms`.
    pub indices: Vec<usize>,
    pub combination: ConicCombination,
    pub y: Point,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SfDecomposition {
    pub dim: usize,
    /// Summands represented by more than one term, ascending.
    pub exceptional: Vec<usize>,
    pub exact: Vec<ExactChoice>,
    pub convexified: Vec<Convexified>,
    pub target: Point,
    /// `|Σ exact + Σ y - target|`.
    pub reconstruction_error: f64,
}

impl SfDecomposition {
    pub fn reconstruction(&self) -> Point {
        let mut s = Point::zeros(self.dim);
        for e in &self.exact {
            s.add_assign(&e.point);
        }
        for c in &self.convexified {
            s.add_assign(&c.y);
        }
        s
    }
}

/// Validates per-cloud convex weights: lengths match, entries ≥ −tol (tiny
/// negatives are clamped to zero), sums within tol of 1.
pub(crate) fn validate_coeffs(
    clouds: &[PointCloud],
    coeffs: &[Vec<f64>],
    tol: Tolerance,
) -> Result<Vec<Vec<f64>>> {
    if clouds.len() != coeffs.len() {
        return Err(Error::InvalidCombination(format!(
            "{} clouds but {} coefficient rows",
            clouds.len(),
            coeffs.len()
        )));
    }
    let mut out = Vec::with_capacity(coeffs.len());
    for (i, (c, w)) in clouds.iter().zip(coeffs).enumerate() {
        if w.len() != c.len() {
            return Err(Error::InvalidCombination(format!(
                "row {i} has {} coefficients for {} points",
                w.len(),
                c.len()
            )));
        }
        if let Some(&bad) = w.iter().find(|x| !x.is_finite()) {
            return Err(Error::NonFinite(format!("coefficient {bad} in row {i}")));
        }
        if let Some(&neg) = w.iter().find(|&&x| x < -tol.eps()) {
            return Err(Error::InvalidCombination(format!(
                "row {i} has negative coefficient {neg}"
            )));
        }
        let s: f64 = w.iter().sum();
        if (s - 1.0).abs() > tol.eps() {
            return Err(Error::InvalidCombination(format!(
                "row {i} sums to {s}, not 1"
            )));
        }
        out.push(w.iter().map(|&x| x.max(0.0)).collect());
    }
    Ok(out)
}

pub(crate) fn check_common_dim(clouds: &[PointCloud]) -> Result<usize> {
    let first = clouds
        .first()
        .ok_or_else(|| Error::Empty("no summands".into()))?;
    for c in clouds {
        c.check_dim(first.dim())?;
    }
    Ok(first.dim())
}

/// Convex weights witnessing `ys[i] ∈ conv(clouds[i])`, computed by LP.
pub fn convex_witnesses(
    clouds: &[PointCloud],
    ys: &[Point],
    tol: Tolerance,
) -> Result<Vec<Vec<f64>>> {
    if clouds.len() != ys.len() {
        return Err(Error::InvalidCombination(format!(
            "{} clouds but {} points",
            clouds.len(),
            ys.len()
        )));
    }
    clouds
        .iter()
        .zip(ys)
        .enumerate()
        .map(|(i, (c, y))| hull_membership(c, y, tol)?.ok_or(Error::NotInHull { index: i }))
        .collect()
}

/// Rewrites `x = Σ x_i`, `x_i = Σ_j coeffs[i][j] p_ij`, so that all but at most
/// `d` summands use a single cloud point.
///
/// Lifts each `p_ij` to `(p_ij, e_i) ∈ R^{d+n}` and reduces the lifted conic
/// combination. Every summand keeps at least one term because its `e_i`
/// coordinate must still sum to 1, so at most `d` summands keep two or more.
pub fn sf_decompose(
    clouds: &[PointCloud],
    coeffs: &[Vec<f64>],
    tol: Tolerance,
) -> Result<SfDecomposition> {
    let d = check_common_dim(clouds)?;
    let coeffs = validate_coeffs(clouds, coeffs, tol)?;
    let n = clouds.len();
    let m = d + n;

    let mut owner = Vec::new();
    let mut lifted: Vec<Vec<f64>> = Vec::new();
    let mut weights = Vec::new();
    for (i, (c, w)) in clouds.iter().zip(&coeffs).enumerate() {
        for (j, (p, &l)) in c.points().iter().zip(w).enumerate() {
            if l > 0.0 {
                let mut v = Vec::with_capacity(m);
                v.extend_from_slice(p.coords());
                v.extend((0..n).map(|k| if k == i { 1.0 } else { 0.0 }));
                lifted.push(v);
                weights.push(l);
                owner.push((i, j));
            }
        }
    }
    let vectors: Vec<&[f64]> = lifted.iter().map(|v| v.as_slice()).collect();
    let reduced = conic::reduce_weights(&vectors, &weights, m, tol);

    let mut groups: Vec<Vec<(usize, f64)>> = vec![Vec::new(); n];
    for (k, &w) in reduced.iter().enumerate() {
        if w > 0.0 {
            let (i, j) = owner[k];
            groups[i].push((j, w));
        }
    }

    let mut target = Point::zeros(d);
    for (c, w) in clouds.iter().zip(&coeffs) {
        for (p, &l) in c.points().iter().zip(w) {
            target.add_assign(&p.scale(l));
        }
    }

    let mut exceptional = Vec::new();
    let mut exact = Vec::new();
    let mut convexified = Vec::new();
    for (i, g) in groups.into_iter().enumerate() {
        match g.len() {
            0 => {
                return Err(Error::Internal(format!(
                    "summand {i} lost all terms in reduction"
                )));
            }
            1 => exact.push(ExactChoice {
                summand: i,
                index: g[0].0,
                point: clouds[i].points()[g[0].0].clone(),
            }),
            _ => {
                let total: f64 = g.iter().map(|&(_, w)| w).sum();
                let terms: Vec<ConicTerm> = g
                    .iter()
                    .map(|&(j, w)| ConicTerm {
                        coeff: w / total,
                        point: clouds[i].points()[j].clone(),
                    })
                    .collect();
                let combination = ConicCombination { dim: d, terms };
                let y = combination.value();
                exceptional.push(i);
                convexified.push(Convexified {
                    summand: i,
                    indices: g.iter().map(|&(j, _)| j).collect(),
                    combination,
                    y,
                });
            }
        }
    }
    let mut out = SfDecomposition {
        dim: d,
        exceptional,
        exact,
        convexified,
        target,
        reconstruction_error: 0.0,
    };
    out.reconstruction_error = out.reconstruction().distance(&out.target);
    if out.exceptional.len() > d {
        return Err(Error::Internal(format!(
            "{} exceptional summands exceed dimension {d}",
            out.exceptional.len()
        )));
    }
    Ok(out)
}
