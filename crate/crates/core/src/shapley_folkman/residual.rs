//! Sampling oracle for how far `conv(A_1 + ... + A_n)` strays from the sum itself.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{check_common_dim, rad};
use crate::error::{Error, Result};
use crate::geometry::{distance, minkowski_sum_points, Point, PointCloud, Tolerance};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ResidualReport {
    /// Largest distance from a sampled hull point to the sum point set.
    pub max_distance: f64,
    /// The sample attaining `max_distance`.
    pub worst_sample: Point,
    /// `R √min(n, d)`.
    pub bound: f64,
    /// `R √d`.
    pub coarse_bound: f64,
    pub radius: f64,
    pub sum_points: usize,
    pub samples: usize,
    pub seed: u64,
}

/// Samples random convex combinations of `min(d+1, N)` sum points (Dirichlet(1)
/// weights) and measures their distance to the brute-force Minkowski sum.
pub fn residual_measure(
    clouds: &[PointCloud],
    samples: usize,
    seed: u64,
    cap: usize,
    tol: Tolerance,
) -> Result<ResidualReport> {
    if samples == 0 {
        return Err(Error::InvalidParameter("samples must be positive".into()));
    }
    let d = check_common_dim(clouds)?;
    let sum = minkowski_sum_points(clouds, cap, tol)?;
    let radius = clouds.iter().map(|c| rad(c).radius).fold(0.0, f64::max);
    let n_pts = sum.len();
    let k = (d + 1).min(n_pts);

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let draws: Vec<Vec<f64>> = (0..samples)
        .map(|_| {
            let picks = rand::seq::index::sample(&mut rng, n_pts, k);
            let w: Vec<f64> = (0..k).map(|_| -(1.0 - rng.gen::<f64>()).ln()).collect();
            let total: f64 = w.iter().sum();
            let mut q = vec![0.0; d];
            for (idx, wi) in picks.iter().zip(&w) {
                for (a, b) in q.iter_mut().zip(sum.points()[idx].coords()) {
                    *a += wi / total * b;
                }
            }
            q
        })
        .collect();
    let dists: Vec<f64> = draws
        .par_iter()
        .map(|q| {
            sum.points()
                .iter()
                .map(|p| distance(p.coords(), q))
                .fold(f64::INFINITY, f64::min)
        })
        .collect();
    let (worst, max_distance) = dists.iter().enumerate().fold(
        (0, f64::NEG_INFINITY),
        |acc, (i, &v)| if v > acc.1 { (i, v) } else { acc },
    );
    let n = clouds.len();
    Ok(ResidualReport {
        max_distance,
        worst_sample: Point::from_vec(draws[worst].clone()),
        bound: radius * (n.min(d) as f64).sqrt(),
        coarse_bound: radius * (d as f64).sqrt(),
        radius,
        sum_points: n_pts,
        samples,
        seed,
    })
}
