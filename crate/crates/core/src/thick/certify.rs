//! Grid thickness certificates over (center, scale) cells.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::DiscretizedSet;
use crate::error::{Error, Result};
use crate::geometry::{ball_in_hull, chebyshev_center, Ball, Point, Tolerance};

/// Which cloud points serve as centers.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub enum CenterPlan {
    All,
    /// Every `k`-th cloud point, starting at the first.
    Stride(usize),
    Indices(Vec<usize>),
}

impl CenterPlan {
    fn resolve(&self, len: usize) -> Result<Vec<usize>> {
        match self {
            CenterPlan::All => Ok((0..len).collect()),
            CenterPlan::Stride(0) => Err(Error::InvalidParameter(
                "center stride must be positive".into(),
            )),
            CenterPlan::Stride(k) => Ok((0..len).step_by(*k).collect()),
            CenterPlan::Indices(v) => {
                if let Some(&bad) = v.iter().find(|&&i| i >= len) {
                    return Err(Error::InvalidParameter(format!(
                        "center index {bad} out of range {len}"
                    )));
                }
                if v.is_empty() {
                    return Err(Error::Empty("no centers".into()));
                }
                Ok(v.clone())
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ThicknessParams {
    pub target: f64,
    /// Scale ratio `ρ ∈ (0,1)`.
    pub ratio: f64,
    /// Smallest scale examined.
    pub floor: f64,
    pub centers: CenterPlan,
}

/// Chebyshev ball found for `cloud ∩ B(x_center, scales[scale])`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CellWitness {
    pub center: usize,
    pub scale: usize,
    pub ball: Ball,
    pub ratio: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ThicknessCertificate {
    /// Worst Chebyshev ratio over the grid.
    pub c_raw: f64,
    /// `c_raw · ρ`: valid for every scale in `[floor_scale, diam]`, not only grid scales.
    pub c_certified: f64,
    pub target: f64,
    pub scale_ratio: f64,
    pub scales: Vec<f64>,
    /// Finest scale certified; nothing is claimed below it.
    pub caveat_floor: f64,
    pub resolution: f64,
    pub centers: Vec<usize>,
    pub worst: CellWitness,
    pub witnesses: Vec<CellWitness>,
}

impl ThicknessCertificate {
    pub fn passed(&self) -> bool {
        self.c_certified >= self.target
    }

    /// Re-checks every stored witness: a ball of radius `c_raw · r_j` at the
    /// witness center must lie in the hull of the cell. Returns the cell count.
    pub fn replay(&self, set: &DiscretizedSet, tol: Tolerance) -> Result<usize> {
        for w in &self.witnesses {
            let x = &set.cloud.points()[w.center];
            let r = self.scales[w.scale];
            let sub = set
                .cloud
                .within(x, r, tol)
                .expect("center belongs to its own cell");
            let ball = Ball {
                center: w.ball.center.clone(),
                radius: self.c_raw * r,
            };
            let res = ball_in_hull(&sub, &ball, tol)?;
            if !res.contained {
                return Err(Error::PremiseFailed {
                    check: "thickness replay".into(),
                    summand: 0,
                    path: vec![w.center, w.scale],
                    margin: res.margin,
                });
            }
        }
        Ok(self.witnesses.len())
    }
}

/// `diam · ρ^j` for `j = 0, 1, ...` while at least `floor`.
pub(crate) fn scale_ladder(diam: f64, ratio: f64, floor: f64) -> Vec<f64> {
    let mut v = Vec::new();
    let mut j = 0;
    loop {
        let r = diam * ratio.powi(j);
        if r < floor * (1.0 - 1e-12) {
            break;
        }
        v.push(r);
        j += 1;
    }
    v
}

fn validate(set: &DiscretizedSet, p: &ThicknessParams) -> Result<()> {
    if !(p.ratio > 0.0 && p.ratio < 1.0) {
        return Err(Error::InvalidParameter(format!(
            "scale ratio {} not in (0,1)",
            p.ratio
        )));
    }
    if !(p.target > 0.0 && p.target <= 1.0) {
        return Err(Error::InvalidParameter(format!(
            "target {} not in (0,1]",
            p.target
        )));
    }
    if set.diam <= 0.0 {
        return Err(Error::Singleton { index: 0 });
    }
    if !(p.floor > 0.0) || p.floor > set.diam {
        return Err(Error::InvalidParameter(format!(
            "scale floor {} not in (0, diam = {}]",
            p.floor, set.diam
        )));
    }
    if set.resolution > p.floor {
        return Err(Error::ResolutionTooCoarse {
            resolution: set.resolution,
            floor: p.floor,
        });
    }
    Ok(())
}

/// Computes the certificate without comparing against the target.
pub fn measure_thickness(
    set: &DiscretizedSet,
    params: &ThicknessParams,
    tol: Tolerance,
) -> Result<ThicknessCertificate> {
    validate(set, params)?;
    let centers = params.centers.resolve(set.cloud.len())?;
    let scales = scale_ladder(set.diam, params.ratio, params.floor);

    let sorted: Option<Vec<f64>> = (set.dim() == 1).then(|| {
        let mut v: Vec<f64> = set.cloud.points().iter().map(|p| p.coords()[0]).collect();
        v.sort_by(f64::total_cmp);
        v
    });

    let cells: Vec<Vec<CellWitness>> = centers
        .par_iter()
        .map(|&ci| {
            let x = &set.cloud.points()[ci];
            scales
                .iter()
                .enumerate()
                .map(|(si, &r)| {
                    let ball = match &sorted {
                        Some(v) => interval_cell(v, x.coords()[0], r, tol),
                        None => {
                            let sub = set
                                .cloud
                                .within(x, r, tol)
                                .expect("center belongs to its own cell");
                            chebyshev_center(&sub, tol)?
                        }
                    };
                    Ok(CellWitness {
                        center: ci,
                        scale: si,
                        ratio: ball.radius / r,
                        ball,
                    })
                })
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    let witnesses: Vec<CellWitness> = cells.into_iter().flatten().collect();
    let worst = witnesses
        .iter()
        .fold(None::<&CellWitness>, |acc, w| match acc {
            Some(a) if a.ratio <= w.ratio => Some(a),
            _ => Some(w),
        })
        .expect("at least one cell")
        .clone();
    let c_raw = worst.ratio;
    Ok(ThicknessCertificate {
        c_raw,
        c_certified: c_raw * params.ratio,
        target: params.target,
        scale_ratio: params.ratio,
        caveat_floor: *scales.last().expect("diam is at least the floor"),
        scales,
        resolution: set.resolution,
        centers,
        worst,
        witnesses,
    })
}

/// Certifies `c_certified ≥ target`, failing with the worst cell otherwise.
pub fn certify_thickness(
    set: &DiscretizedSet,
    params: &ThicknessParams,
    tol: Tolerance,
) -> Result<ThicknessCertificate> {
    let cert = measure_thickness(set, params, tol)?;
    if !cert.passed() {
        return Err(Error::ThicknessShortfall {
            certified: cert.c_certified,
            target: cert.target,
            x: set.cloud.points()[cert.worst.center].coords().to_vec(),
            r: cert.scales[cert.worst.scale],
            ratio: cert.worst.ratio,
        });
    }
    Ok(cert)
}

/// Chebyshev ball of the cell on the line: the midpoint of the extreme points.
fn interval_cell(sorted: &[f64], x: f64, r: f64, tol: Tolerance) -> Ball {
    let lo = sorted.partition_point(|&v| v < x - r - tol.eps());
    let hi = sorted.partition_point(|&v| v <= x + r + tol.eps()) - 1;
    let (a, b) = (sorted[lo], sorted[hi]);
    Ball {
        center: Point::from(0.5 * (a + b)),
        radius: 0.5 * (b - a),
    }
}
