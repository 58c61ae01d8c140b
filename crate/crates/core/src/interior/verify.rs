//! Local checks on witness trees. Each returns margins (positive means slack);
//! `None` marks a vacuous check.

use rand::Rng;
use serde::{Deserialize, Serialize};

use super::intervals::{IntervalUnion, MinkowskiChain};
use super::{CertifierParams, TreeVertex};
use crate::error::{Error, Result};
use crate::geometry::{ball_in_hull, Ball, PointCloud, Tolerance};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Step1Margins {
    /// `min_u (1−α) r_{k+1} − |z_u − x_u|`.
    pub distance: f64,
    /// Margin of `B(z_v, q_k) ⊂ conv{z_u}`.
    pub ball: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Step2Margins {
    /// `min_u (1+λ) r_k − |z_u − x_v|`.
    pub radius: f64,
    /// `min_u (1+λ−αλ) r_k − |z_u − x_v|`.
    pub sharp: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Step3Report {
    /// `n λ(α−λ) − √d (1+λ)`; scale-free.
    pub value: f64,
    /// `√d (1+λ) / (λ(α−λ))`, which `n` must strictly exceed.
    pub required_n: f64,
    pub pass: bool,
}

fn child_zs(v: &TreeVertex) -> Option<Vec<&crate::geometry::Point>> {
    if v.children.is_empty() {
        return None;
    }
    v.children.iter().map(|c| c.z.as_ref()).collect()
}

/// Children's `z` stay near their `x`, and their hull holds `B(z_v, q_k)`.
pub fn verify_step1(
    v: &TreeVertex,
    params: &CertifierParams,
    r0: f64,
    tol: Tolerance,
) -> Result<Option<Step1Margins>> {
    let (Some(zv), Some(zs)) = (v.z.as_ref(), child_zs(v)) else {
        return Ok(None);
    };
    let k = v.depth;
    let lim = (1.0 - params.alpha) * params.r(r0, k + 1);
    let distance = v
        .children
        .iter()
        .zip(&zs)
        .map(|(c, z)| lim - z.distance(&c.x))
        .fold(f64::INFINITY, f64::min);
    let cloud = PointCloud::from_points_unchecked(zv.dim(), zs.into_iter().cloned().collect());
    let ball = Ball {
        center: zv.clone(),
        radius: params.q(r0, k),
    };
    let ball = ball_in_hull(&cloud, &ball, tol)?.margin;
    Ok(Some(Step1Margins { distance, ball }))
}

/// Children's `z` lie in `B(x_v, (1+λ) r_k)`, and in the sharper `(1+λ−αλ) r_k`.
pub fn verify_step2(v: &TreeVertex, params: &CertifierParams, r0: f64) -> Option<Step2Margins> {
    let zs = child_zs(v)?;
    let r = params.r(r0, v.depth);
    let worst = zs.iter().map(|z| z.distance(&v.x)).fold(0.0, f64::max);
    Some(Step2Margins {
        radius: (1.0 + params.lambda) * r - worst,
        sharp: (1.0 + params.lambda - params.alpha * params.lambda) * r - worst,
    })
}

pub fn verify_step3_inequality(params: &CertifierParams) -> Step3Report {
    let (a, l) = (params.alpha, params.lambda);
    let sd = (params.d as f64).sqrt();
    let value = params.n as f64 * l * (a - l) - sd * (1.0 + l);
    Step3Report {
        value,
        required_n: sd * (1.0 + l) / (l * (a - l)),
        pass: value > 0.0,
    }
}

/// `(1−α) r_k − |z_v − x_v|`.
pub fn verify_step4(v: &TreeVertex, params: &CertifierParams, r0: f64) -> Option<f64> {
    let z = v.z.as_ref()?;
    Some((1.0 - params.alpha) * params.r(r0, v.depth) - z.distance(&v.x))
}

/// Margin of `B(z_v, α r_k) ⊂ conv(children x)`.
pub fn alpha_ball_margin(
    v: &TreeVertex,
    params: &CertifierParams,
    r0: f64,
    tol: Tolerance,
) -> Result<Option<f64>> {
    let Some(z) = v.z.as_ref() else {
        return Ok(None);
    };
    let xs = PointCloud::from_points_unchecked(
        z.dim(),
        v.children.iter().map(|c| c.x.clone()).collect(),
    );
    let ball = Ball {
        center: z.clone(),
        radius: params.alpha * params.r(r0, v.depth),
    };
    Ok(Some(ball_in_hull(&xs, &ball, tol)?.margin))
}

/// `(1−λ) r_k − q_k − dist(z_v, cloud)`: every point of `B(z_v, q_k)` is within
/// `(1−λ) r_k` of the cloud when this is nonnegative.
pub fn containment_margin(
    v: &TreeVertex,
    cloud: &PointCloud,
    params: &CertifierParams,
    r0: f64,
) -> Option<f64> {
    let z = v.z.as_ref()?;
    let k = v.depth;
    Some((1.0 - params.lambda) * params.r(r0, k) - params.q(r0, k) - cloud.distance_to(z))
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AbsorptionReport {
    pub depth: usize,
    /// Worst margin of `B(z_{v_i}, q_k) ⊂ conv(children z)` over the tuple.
    pub premise_ball: f64,
    /// Worst margin of `children z ⊂ B(x_{v_i}, R_k)` over the tuple.
    pub premise_radius: f64,
    /// `n q_{k+1} − √d R_k`.
    pub premise_scale: f64,
    /// All three premises hold, so `B(Σ z_{v_i}, n q_k) ⊂ Σ_i ∪_u B(z_u, q_{k+1})`.
    pub holds: bool,
}

/// Premises of one absorption step for a tuple `(v_1, ..., v_n)` at a common
/// depth, one vertex per summand.
pub fn absorption_check(
    tuple: &[&TreeVertex],
    params: &CertifierParams,
    r0: f64,
    tol: Tolerance,
) -> Result<AbsorptionReport> {
    let depth = tuple
        .first()
        .ok_or_else(|| Error::Empty("absorption tuple".into()))?
        .depth;
    let mut premise_ball = f64::INFINITY;
    let mut premise_radius = f64::INFINITY;
    for v in tuple {
        if v.depth != depth {
            return Err(Error::InvalidParameter(
                "tuple vertices at different depths".into(),
            ));
        }
        let s1 = verify_step1(v, params, r0, tol)?.ok_or_else(|| {
            Error::InvalidParameter(format!("vertex at depth {depth} has no grandchildren"))
        })?;
        let s2 = verify_step2(v, params, r0).expect("children carry z");
        premise_ball = premise_ball.min(s1.ball);
        premise_radius = premise_radius.min(s2.radius);
    }
    let premise_scale = scale_premise(params, r0, depth);
    Ok(AbsorptionReport {
        depth,
        premise_ball,
        premise_radius,
        premise_scale,
        holds: premise_ball >= -tol.eps() && premise_radius >= -tol.eps() && premise_scale >= 0.0,
    })
}

pub(crate) fn scale_premise(params: &CertifierParams, r0: f64, k: usize) -> f64 {
    params.n as f64 * params.q(r0, k + 1) - (params.d as f64).sqrt() * params.big_r(r0, k)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AbsorptionOracle {
    pub depth: usize,
    pub samples: usize,
    /// Samples written as a sum of points from the child ball unions.
    pub decomposed: usize,
    /// Largest reconstruction error among decomposed samples.
    pub worst_residual: f64,
}

/// One-dimensional end-to-end check of an absorption step: samples points of
/// `B(Σ z_{v_i}, n q_k)` and decomposes each in `Σ_i ∪_u [z_u − q_{k+1}, z_u + q_{k+1}]`
/// by interval arithmetic.
pub fn absorption_oracle_1d(
    tuple: &[&TreeVertex],
    params: &CertifierParams,
    r0: f64,
    samples: usize,
    rng: &mut impl Rng,
    tol: Tolerance,
) -> Result<AbsorptionOracle> {
    if params.d != 1 {
        return Err(Error::InvalidParameter(
            "interval oracle needs d = 1".into(),
        ));
    }
    let depth = tuple
        .first()
        .ok_or_else(|| Error::Empty("absorption tuple".into()))?
        .depth;
    let big_q = params.q(r0, depth + 1);
    let mut center = 0.0;
    let mut unions = Vec::with_capacity(tuple.len());
    for v in tuple {
        let zv =
            v.z.as_ref()
                .ok_or_else(|| Error::InvalidParameter("tuple vertex without z".into()))?;
        center += zv.coords()[0];
        let zs = child_zs(v)
            .ok_or_else(|| Error::InvalidParameter("tuple vertex without grandchildren".into()))?;
        unions.push(IntervalUnion::around(
            zs.iter().map(|z| z.coords()[0]),
            big_q,
        ));
    }
    let chain = MinkowskiChain::new(unions);
    let half = tuple.len() as f64 * params.q(r0, depth);
    let mut decomposed = 0;
    let mut worst_residual: f64 = 0.0;
    for s in 0..samples {
        let p = match s {
            0 => center - half,
            1 => center + half,
            _ => center + half * rng.gen_range(-1.0..=1.0),
        };
        if let Some(parts) = chain.decompose(p, tol.eps()) {
            decomposed += 1;
            worst_residual = worst_residual.max((parts.iter().sum::<f64>() - p).abs());
        }
    }
    Ok(AbsorptionOracle {
        depth,
        samples,
        decomposed,
        worst_residual,
    })
}
