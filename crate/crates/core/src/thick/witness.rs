//! Local witnesses: a finite subset `Y ⊂ E ∩ B(x, r)` whose hull contains a ball
//! of radius `α r`.

use serde::{Deserialize, Serialize};

use super::DiscretizedSet;
use crate::error::{Error, Result};
use crate::geometry::{
    ball_in_hull, chebyshev_center, convex_hull, greedy_net, Ball, Point, PointCloud, Tolerance,
};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DiscretizationWitness {
    /// `cloud ∩ B(x, r)`.
    pub sub: PointCloud,
    /// Hull vertices of an ε-net of `sub`; `B(ball.center, α r) ⊂ conv(children)`.
    pub children: PointCloud,
    pub chebyshev: Ball,
    /// Radius exactly `α r`, centered at the Chebyshev center of `sub`.
    pub ball: Ball,
    /// `chebyshev.radius / r`.
    pub achieved: f64,
    pub epsilon: f64,
    pub margin: f64,
}

/// Builds the witness at `(x, r)`.
///
/// The Chebyshev ball of `conv(sub)` has radius at least `α r` or the call
/// fails. Thinning `sub` to an ε-net with `ε = min((β − α) r, radius − α r)`
/// loses at most `ε` of that radius, so `B(z, α r)` stays inside the hull of
/// the net; only the net's hull vertices are kept.
pub fn finite_discretization_witness(
    set: &DiscretizedSet,
    x: &Point,
    r: f64,
    alpha: f64,
    beta: f64,
    tol: Tolerance,
) -> Result<DiscretizationWitness> {
    if !(alpha > 0.0 && alpha < beta) {
        return Err(Error::InvalidParameter(format!(
            "need 0 < alpha < beta, got {alpha}, {beta}"
        )));
    }
    witness_with(set, x, r, alpha, Some(beta), tol)
}

/// As [`finite_discretization_witness`]; with `beta = None` the midpoint of `α`
/// and the locally achieved ratio is used.
pub(crate) fn witness_with(
    set: &DiscretizedSet,
    x: &Point,
    r: f64,
    alpha: f64,
    beta: Option<f64>,
    tol: Tolerance,
) -> Result<DiscretizationWitness> {
    if !(alpha > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "alpha {alpha} must be positive"
        )));
    }
    if !(r > 0.0) || r > set.diam + tol.eps() {
        return Err(Error::InvalidParameter(format!(
            "scale {r} outside (0, diam = {}]",
            set.diam
        )));
    }
    set.cloud.check_dim(x.dim())?;
    let gap = set.cloud.distance_to(x);
    if gap > set.resolution + tol.eps() {
        return Err(Error::InvalidParameter(format!(
            "center is {gap} from the cloud, beyond resolution {}",
            set.resolution
        )));
    }
    let sub = set
        .cloud
        .within(x, r, tol)
        .ok_or_else(|| Error::WitnessFailure {
            x: x.coords().to_vec(),
            r,
            achieved: 0.0,
            required: alpha,
        })?;
    let chebyshev = chebyshev_center(&sub, tol)?;
    let achieved = chebyshev.radius / r;
    if chebyshev.radius < alpha * r - tol.eps() {
        return Err(Error::WitnessFailure {
            x: x.coords().to_vec(),
            r,
            achieved,
            required: alpha,
        });
    }
    let beta = beta.unwrap_or(0.5 * (alpha + achieved));
    let epsilon = ((beta - alpha) * r)
        .min(chebyshev.radius - alpha * r)
        .max(0.0);
    let net: Vec<Point> = if epsilon > 0.0 {
        greedy_net(sub.points(), epsilon)
            .into_iter()
            .map(|i| sub.points()[i].clone())
            .collect()
    } else {
        sub.points().to_vec()
    };
    let net = PointCloud::from_points_unchecked(sub.dim(), net);
    let children = match convex_hull(&net, tol) {
        Ok(h) => PointCloud::from_points_unchecked(
            net.dim(),
            h.vertices
                .iter()
                .map(|&v| net.points()[v].clone())
                .collect(),
        ),
        Err(Error::Degenerate { .. }) => net,
        Err(e) => return Err(e),
    };
    let ball = Ball {
        center: chebyshev.center.clone(),
        radius: alpha * r,
    };
    let check = ball_in_hull(&children, &ball, tol)?;
    if !check.contained {
        return Err(Error::WitnessFailure {
            x: x.coords().to_vec(),
            r,
            achieved,
            required: alpha,
        });
    }
    Ok(DiscretizationWitness {
        sub,
        children,
        chebyshev,
        ball,
        achieved,
        epsilon,
        margin: check.margin,
    })
}
