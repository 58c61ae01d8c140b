//! Minimal enclosing balls (Welzl's recursion on a shuffled copy of the input).

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::geometry::{distance, linalg, Ball, Point, PointCloud};

const SHUFFLE_SEED: u64 = 0x5eed_ba11;

/// Smallest ball containing every cloud point. The returned radius is the exact
/// maximum distance from the computed center, so the ball always encloses.
pub fn rad(cloud: &PointCloud) -> Ball {
    let pts = cloud.points();
    let d = cloud.dim();
    if d == 1 {
        let (lo, hi) = pts
            .iter()
            .fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), p| {
                (a.min(p.coords()[0]), b.max(p.coords()[0]))
            });
        return Ball {
            center: Point::from_vec(vec![0.5 * (lo + hi)]),
            radius: 0.5 * (hi - lo),
        };
    }
    let mut order: Vec<&[f64]> = pts.iter().map(|p| p.coords()).collect();
    order.shuffle(&mut ChaCha8Rng::seed_from_u64(SHUFFLE_SEED));
    let mut support = Vec::with_capacity(d + 1);
    let (center, _) = welzl(&order, order.len(), &mut support, d);
    let radius = pts
        .iter()
        .map(|p| distance(p.coords(), &center))
        .fold(0.0, f64::max);
    Ball {
        center: Point::from_vec(center),
        radius,
    }
}

fn welzl<'a>(
    pts: &[&'a [f64]],
    n: usize,
    support: &mut Vec<&'a [f64]>,
    d: usize,
) -> (Vec<f64>, f64) {
    let mut ball = ball_from_support(support, d);
    if support.len() == d + 1 {
        return ball;
    }
    for i in 0..n {
        let p = pts[i];
        if ball.1 < 0.0 || distance(p, &ball.0) > ball.1 * (1.0 + 1e-12) + 1e-15 {
            support.push(p);
            ball = welzl(pts, i, support, d);
            support.pop();
        }
    }
    ball
}

/// Smallest ball with every support point on its boundary, within their affine
/// span. Radius −1 encodes the empty ball.
fn ball_from_support(support: &[&[f64]], d: usize) -> (Vec<f64>, f64) {
    match support.len() {
        0 => (vec![0.0; d], -1.0),
        1 => (support[0].to_vec(), 0.0),
        k => {
            let p0 = support[0];
            let diffs: Vec<Vec<f64>> = support[1..]
                .iter()
                .map(|p| p.iter().zip(p0).map(|(a, b)| a - b).collect())
                .collect();
            let m = k - 1;
            let gram: Vec<Vec<f64>> = (0..m)
                .map(|i| {
                    (0..m)
                        .map(|j| 2.0 * crate::geometry::dot(&diffs[i], &diffs[j]))
                        .collect()
                })
                .collect();
            let rhs: Vec<f64> = diffs.iter().map(|v| crate::geometry::dot(v, v)).collect();
            match linalg::solve(gram, rhs, 1e-12) {
                Some(t) => {
                    let mut c = p0.to_vec();
                    for (ti, v) in t.iter().zip(&diffs) {
                        for (ci, vi) in c.iter_mut().zip(v) {
                            *ci += ti * vi;
                        }
                    }
                    let r = distance(&c, p0);
                    (c, r)
                }
                None => {
                    let mut c = vec![0.0; d];
                    for p in support {
                        for (ci, x) in c.iter_mut().zip(p.iter()) {
                            *ci += x / k as f64;
                        }
                    }
                    let r = support.iter().map(|p| distance(p, &c)).fold(0.0, f64::max);
                    (c, r)
                }
            }
        }
    }
}
