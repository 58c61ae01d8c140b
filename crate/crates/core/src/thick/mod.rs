//! Compact thick sets at finite resolution: similarity IFS attractors, explicit
//! clouds, local witnesses and grid thickness certificates.

mod certify;
mod witness;

pub use certify::{
    certify_thickness, measure_thickness, CellWitness, CenterPlan, ThicknessCertificate,
    ThicknessParams,
};
pub(crate) use witness::witness_with;
pub use witness::{finite_discretization_witness, DiscretizationWitness};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{diameter, linalg, Point, PointCloud, Tolerance};

/// `x ↦ ratio · O x + offset` with `O` orthogonal (identity when absent).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SimilarityMap {
    pub ratio: f64,
    pub offset: Point,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub orthogonal: Option<Vec<Vec<f64>>>,
}

impl SimilarityMap {
    pub fn new(ratio: f64, offset: Point, orthogonal: Option<Vec<Vec<f64>>>) -> Result<Self> {
        if !(ratio > 0.0 && ratio < 1.0) {
            return Err(Error::InvalidParameter(format!(
                "contraction ratio {ratio} not in (0,1)"
            )));
        }
        let d = offset.dim();
        if let Some(o) = &orthogonal {
            if o.len() != d || o.iter().any(|row| row.len() != d) {
                return Err(Error::InvalidParameter(format!(
                    "orthogonal part is not {d}x{d}"
                )));
            }
            for i in 0..d {
                for j in 0..d {
                    let g: f64 = (0..d).map(|k| o[k][i] * o[k][j]).sum();
                    let want = if i == j { 1.0 } else { 0.0 };
                    if !g.is_finite() || (g - want).abs() > 1e-9 {
                        return Err(Error::InvalidParameter(
                            "linear part is not orthogonal".into(),
                        ));
                    }
                }
            }
        }
        Ok(SimilarityMap {
            ratio,
            offset,
            orthogonal,
        })
    }

    pub fn dim(&self) -> usize {
        self.offset.dim()
    }

    pub fn apply(&self, x: &[f64]) -> Vec<f64> {
        let d = x.len();
        let mut y: Vec<f64> = match &self.orthogonal {
            Some(o) => (0..d)
                .map(|i| (0..d).map(|j| o[i][j] * x[j]).sum())
                .collect(),
            None => x.to_vec(),
        };
        for (yi, t) in y.iter_mut().zip(self.offset.coords()) {
            *yi = self.ratio * *yi + t;
        }
        y
    }

    /// The unique fixed point, solving `(I − ratio·O) x = offset`.
    pub fn fixed_point(&self) -> Point {
        let d = self.dim();
        let a: Vec<Vec<f64>> = (0..d)
            .map(|i| {
                (0..d)
                    .map(|j| {
                        let o = match &self.orthogonal {
                            Some(o) => o[i][j],
                            None => f64::from(u8::from(i == j)),
                        };
                        f64::from(u8::from(i == j)) - self.ratio * o
                    })
                    .collect()
            })
            .collect();
        // ratio < 1 and O orthogonal keep I − ratio·O invertible
        let x = linalg::solve(a, self.offset.coords().to_vec(), 1e-14)
            .expect("contraction has a fixed point");
        Point::from_vec(x)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct IfsModel {
    pub dim: usize,
    pub maps: Vec<SimilarityMap>,
}

impl IfsModel {
    pub fn new(maps: Vec<SimilarityMap>) -> Result<Self> {
        let first = maps
            .first()
            .ok_or_else(|| Error::Empty("IFS with no maps".into()))?;
        let dim = first.dim();
        for m in &maps {
            m.offset.check_dim(dim)?;
            SimilarityMap::new(m.ratio, m.offset.clone(), m.orthogonal.clone())?;
        }
        Ok(IfsModel { dim, maps })
    }

    /// Middle-thirds Cantor set: `x/3` and `x/3 + 2/3`.
    pub fn cantor() -> Self {
        Self::uniform_1d(&[0.0, 2.0 / 3.0], 1.0 / 3.0)
    }

    /// `[0,1]` as the attractor of `x/2` and `x/2 + 1/2`.
    pub fn unit_interval() -> Self {
        Self::uniform_1d(&[0.0, 0.5], 0.5)
    }

    fn uniform_1d(offsets: &[f64], ratio: f64) -> Self {
        IfsModel {
            dim: 1,
            maps: offsets
                .iter()
                .map(|&t| SimilarityMap {
                    ratio,
                    offset: Point::from(t),
                    orthogonal: None,
                })
                .collect(),
        }
    }

    /// Product attractor `A × B`. Each pair of maps must share its ratio so the
    /// product map is again a similarity.
    pub fn product(&self, other: &IfsModel) -> Result<Self> {
        let mut maps = Vec::with_capacity(self.maps.len() * other.maps.len());
        for f in &self.maps {
            for g in &other.maps {
                if (f.ratio - g.ratio).abs() > 1e-15 {
                    return Err(Error::InvalidParameter(format!(
                        "product of maps with ratios {} and {} is not a similarity",
                        f.ratio, g.ratio
                    )));
                }
                let d = self.dim + other.dim;
                let orthogonal = if f.orthogonal.is_none() && g.orthogonal.is_none() {
                    None
                } else {
                    let mut o = vec![vec![0.0; d]; d];
                    for i in 0..self.dim {
                        for j in 0..self.dim {
                            o[i][j] = f
                                .orthogonal
                                .as_ref()
                                .map_or(f64::from(u8::from(i == j)), |m| m[i][j]);
                        }
                    }
                    for i in 0..other.dim {
                        for j in 0..other.dim {
                            o[self.dim + i][self.dim + j] = g
                                .orthogonal
                                .as_ref()
                                .map_or(f64::from(u8::from(i == j)), |m| m[i][j]);
                        }
                    }
                    Some(o)
                };
                let mut offset = f.offset.coords().to_vec();
                offset.extend_from_slice(g.offset.coords());
                maps.push(SimilarityMap {
                    ratio: f.ratio,
                    offset: Point::from_vec(offset),
                    orthogonal,
                });
            }
        }
        Ok(IfsModel {
            dim: self.dim + other.dim,
            maps,
        })
    }

    pub fn max_ratio(&self) -> f64 {
        self.maps.iter().map(|m| m.ratio).fold(0.0, f64::max)
    }

    /// Fixed points of the maps, deduplicated. They lie on the attractor.
    pub fn base_points(&self, tol: Tolerance) -> PointCloud {
        let pts = self.maps.iter().map(SimilarityMap::fixed_point).collect();
        PointCloud::with_tolerance(pts, tol).expect("maps are nonempty with one dimension")
    }
}

/// A finite cloud standing in for a compact set `E`: every point of `E` is within
/// `resolution` of the cloud.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DiscretizedSet {
    pub cloud: PointCloud,
    pub resolution: f64,
    /// Used as `diam(E)`. For clouds contained in `E` this is the cloud diameter,
    /// which never overstates the true diameter.
    pub diam: f64,
}

impl DiscretizedSet {
    pub fn new(cloud: PointCloud, resolution: f64) -> Result<Self> {
        if !(resolution >= 0.0) || !resolution.is_finite() {
            return Err(Error::InvalidParameter(format!("resolution {resolution}")));
        }
        let diam = diameter(&cloud);
        Ok(DiscretizedSet {
            cloud,
            resolution,
            diam,
        })
    }

    /// The cloud is the whole set.
    pub fn exact(cloud: PointCloud) -> Self {
        Self::new(cloud, 0.0).expect("zero resolution is valid")
    }

    pub fn dim(&self) -> usize {
        self.cloud.dim()
    }
}

/// All depth-`k` images of the base points. Resolution is
/// `ρ_max^k · diam(base) / (1 − ρ_max)`.
pub fn discretize(
    model: &IfsModel,
    depth: usize,
    cap: usize,
    tol: Tolerance,
) -> Result<DiscretizedSet> {
    let base = model.base_points(tol);
    let mut level: Vec<Vec<f64>> = base.points().iter().map(|p| p.coords().to_vec()).collect();
    for _ in 0..depth {
        let size = (level.len() as u128) * (model.maps.len() as u128);
        if size > cap as u128 {
            return Err(Error::CapExceeded { size, cap });
        }
        let next: Vec<Point> = model
            .maps
            .iter()
            .flat_map(|m| level.iter().map(move |x| Point::from_vec(m.apply(x))))
            .collect();
        let cloud = PointCloud::with_tolerance(next, tol)?;
        level = cloud.points().iter().map(|p| p.coords().to_vec()).collect();
    }
    let cloud = PointCloud::from_points_unchecked(
        model.dim,
        level.into_iter().map(Point::from_vec).collect(),
    );
    let rho = model.max_ratio();
    let resolution = rho.powi(depth as i32) * diameter(&base) / (1.0 - rho);
    DiscretizedSet::new(cloud, resolution)
}

/// Uniform samples of `[lo, hi]` with `steps + 1` points.
pub fn interval_cloud(lo: f64, hi: f64, steps: usize) -> Result<PointCloud> {
    if !(hi > lo) || steps == 0 {
        return Err(Error::InvalidParameter(format!(
            "interval [{lo}, {hi}] with {steps} steps"
        )));
    }
    let h = (hi - lo) / steps as f64;
    let v: Vec<f64> = (0..=steps)
        .map(|i| if i == steps { hi } else { lo + h * i as f64 })
        .collect();
    PointCloud::from_scalars(&v)
}

/// Uniform samples of `[lo, hi]` plus the points at distance `ρ^j (hi − lo)` from
/// either endpoint for every scale down to `floor`. With these anchors, a
/// certificate at ratio `ρ` and that floor sees the full half-interval at every
/// endpoint cell, provided the step is at most `floor / 2`.
pub fn anchored_interval(
    lo: f64,
    hi: f64,
    steps: usize,
    rho: f64,
    floor: f64,
) -> Result<PointCloud> {
    if !(rho > 0.0 && rho < 1.0) || !(floor > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "ratio {rho}, floor {floor}"
        )));
    }
    let base = interval_cloud(lo, hi, steps)?;
    let len = hi - lo;
    let mut v: Vec<f64> = base.points().iter().map(|p| p.coords()[0]).collect();
    let mut r = len;
    while r >= floor * (1.0 - 1e-12) {
        v.push(lo + r);
        v.push(hi - r);
        r *= rho;
    }
    let mut pts: Vec<f64> = v.into_iter().filter(|x| (lo..=hi).contains(x)).collect();
    pts.sort_by(f64::total_cmp);
    PointCloud::from_scalars(&pts)
}
