//! Finite-depth interior certificates for sums of thick sets.
//!
//! Each summand gets a tree of local witnesses down to depth `K`; every vertex
//! is re-verified, the absorption premises are checked per depth, and the
//! result is a ball `B(Σ z_root, n q_0)` all of whose points lie within
//! `n (1−λ) r_K` of the sum of the clouds.

pub mod intervals;
mod tree;
mod verify;

pub use intervals::{sum_within_gap_1d, GapOracle1d, IntervalUnion, MinkowskiChain, SumWitness1d};
pub use tree::{build_tree, TreeVertex};
pub use verify::{
    absorption_check, absorption_oracle_1d, alpha_ball_margin, containment_margin, verify_step1,
    verify_step2, verify_step3_inequality, verify_step4, AbsorptionOracle, AbsorptionReport,
    Step1Margins, Step2Margins, Step3Report,
};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{Ball, Point, Tolerance};
use crate::thick::{measure_thickness, CenterPlan, DiscretizedSet, ThicknessParams};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct CertifierParams {
    pub alpha: f64,
    pub lambda: f64,
    /// Deepest level `K` carrying witness points `z`.
    pub depth: usize,
    pub n: usize,
    pub d: usize,
}

impl CertifierParams {
    pub fn new(alpha: f64, lambda: f64, depth: usize, n: usize, d: usize) -> Result<Self> {
        if !(lambda > 0.0 && lambda < alpha && alpha < 1.0) {
            return Err(Error::InvalidParameter(format!(
                "need 0 < lambda < alpha < 1, got lambda = {lambda}, alpha = {alpha}"
            )));
        }
        if n == 0 || d == 0 {
            return Err(Error::InvalidParameter("n and d must be positive".into()));
        }
        Ok(CertifierParams {
            alpha,
            lambda,
            depth,
            n,
            d,
        })
    }

    /// `r_k = λ^k r_0`.
    pub fn r(&self, r0: f64, k: usize) -> f64 {
        r0 * self.lambda.powi(k as i32)
    }

    /// `q_k = (α − λ) r_k`.
    pub fn q(&self, r0: f64, k: usize) -> f64 {
        (self.alpha - self.lambda) * self.r(r0, k)
    }

    /// `R_k = (1 + λ) r_k`.
    pub fn big_r(&self, r0: f64, k: usize) -> f64 {
        (1.0 + self.lambda) * self.r(r0, k)
    }

    /// `n (1 − λ) r_K`.
    pub fn gap(&self, r0: f64) -> f64 {
        self.n as f64 * (1.0 - self.lambda) * self.r(r0, self.depth)
    }
}

/// Smallest depth `K` with `n (1 − λ) λ^K r_0 ≤ gap`.
pub fn depth_for_gap(n: usize, lambda: f64, r0: f64, gap: f64) -> Result<usize> {
    if !(lambda > 0.0 && lambda < 1.0) || !(gap > 0.0) || !(r0 > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "lambda {lambda}, gap {gap}, r0 {r0}"
        )));
    }
    let mut k = 0usize;
    let mut g = n as f64 * (1.0 - lambda) * r0;
    while g > gap {
        g *= lambda;
        k += 1;
    }
    Ok(k)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ThicknessPrecheck {
    pub ratio: f64,
    /// Centers are a stride through the cloud giving at most this many.
    pub max_centers: usize,
}

impl Default for ThicknessPrecheck {
    fn default() -> Self {
        ThicknessPrecheck {
            ratio: 0.99,
            max_centers: 64,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CertifierOptions {
    pub beta: Option<f64>,
    pub thickness: Option<ThicknessPrecheck>,
    /// Samples per depth for the interval absorption oracle (d = 1 only; 0 skips).
    pub oracle_samples: usize,
    pub seed: u64,
    pub vertex_cap: usize,
}

impl Default for CertifierOptions {
    fn default() -> Self {
        CertifierOptions {
            beta: None,
            thickness: Some(ThicknessPrecheck::default()),
            oracle_samples: 128,
            seed: 0,
            vertex_cap: 1_000_000,
        }
    }
}

/// Worst margin of one check across all vertices where it applies.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct CheckSummary {
    pub checked: usize,
    pub worst_margin: Option<f64>,
    pub worst_summand: Option<usize>,
    pub worst_path: Vec<usize>,
}

impl CheckSummary {
    fn record(&mut self, margin: f64, summand: usize, path: &[usize]) {
        self.checked += 1;
        if self.worst_margin.is_none_or(|w| margin < w) {
            self.worst_margin = Some(margin);
            self.worst_summand = Some(summand);
            self.worst_path = path.to_vec();
        }
    }

    fn merge(&mut self, other: &CheckSummary) {
        self.checked += other.checked;
        if let Some(m) = other.worst_margin {
            if self.worst_margin.is_none_or(|w| m < w) {
                self.worst_margin = Some(m);
                self.worst_summand = other.worst_summand;
                self.worst_path = other.worst_path.clone();
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AbsorptionDepth {
    pub depth: usize,
    pub q: f64,
    pub next_q: f64,
    pub big_r: f64,
    pub premise_ball: Option<f64>,
    pub premise_radius: Option<f64>,
    pub premise_scale: f64,
    pub holds: bool,
    pub oracle: Option<AbsorptionOracle>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Checks {
    pub step1_distance: CheckSummary,
    pub step1_ball: CheckSummary,
    pub step2: CheckSummary,
    pub step2_sharp: CheckSummary,
    pub step3: Step3Report,
    pub step4: CheckSummary,
    pub alpha_ball: CheckSummary,
    pub containment: CheckSummary,
    pub absorption: Vec<AbsorptionDepth>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct InteriorCertificate {
    /// `B(Σ z_root, n q_0)`.
    pub ball: Ball,
    /// `n (1 − λ) r_K`.
    pub residual_gap: f64,
    pub verified_depth: usize,
    pub params: CertifierParams,
    pub r0: f64,
    /// Thickness lower bound per distinct set, when the precheck ran.
    pub thickness: Vec<f64>,
    /// Distinct-set index of each summand.
    pub summand_tree: Vec<usize>,
    pub tree_sizes: Vec<usize>,
    pub checks: Checks,
}

#[derive(Default)]
struct TreeChecks {
    step1_distance: CheckSummary,
    step1_ball: CheckSummary,
    step2: CheckSummary,
    step2_sharp: CheckSummary,
    step4: CheckSummary,
    alpha_ball: CheckSummary,
    containment: CheckSummary,
    /// Per depth: worst step-1 ball and step-2 radius margins.
    by_depth: Vec<(Option<f64>, Option<f64>)>,
}

fn fail(check: &str, summand: usize, path: &[usize], margin: f64) -> Error {
    Error::PremiseFailed {
        check: check.into(),
        summand,
        path: path.to_vec(),
        margin,
    }
}

fn min_opt(a: Option<f64>, b: f64) -> Option<f64> {
    Some(a.map_or(b, |a| a.min(b)))
}

/// Verifies every vertex of one tree; fails on the first violated check.
fn verify_tree(
    tree: &TreeVertex,
    set: &DiscretizedSet,
    params: &CertifierParams,
    r0: f64,
    summand: usize,
    tol: Tolerance,
) -> Result<TreeChecks> {
    let mut out = TreeChecks {
        by_depth: vec![(None, None); params.depth + 1],
        ..Default::default()
    };
    let mut err = None;
    let eps = tol.eps();
    tree.walk(&mut |path, v| {
        if err.is_some() {
            return;
        }
        let res = (|| -> Result<()> {
            if let Some(m) = alpha_ball_margin(v, params, r0, tol)? {
                out.alpha_ball.record(m, summand, path);
                if m < -eps {
                    return Err(fail("alpha ball", summand, path, m));
                }
            }
            if let Some(m) = verify_step4(v, params, r0) {
                out.step4.record(m, summand, path);
                if m < -eps {
                    return Err(fail("step 4 distance", summand, path, m));
                }
            }
            if let Some(m) = containment_margin(v, &set.cloud, params, r0) {
                out.containment.record(m, summand, path);
                if m < -eps {
                    return Err(fail("containment", summand, path, m));
                }
            }
            if let Some(m) = verify_step1(v, params, r0, tol)? {
                out.step1_distance.record(m.distance, summand, path);
                out.step1_ball.record(m.ball, summand, path);
                out.by_depth[v.depth].0 = min_opt(out.by_depth[v.depth].0, m.ball);
                if m.distance < -eps {
                    return Err(fail("step 1 distance", summand, path, m.distance));
                }
                if m.ball < -eps {
                    return Err(fail("step 1 ball", summand, path, m.ball));
                }
            }
            if let Some(m) = verify_step2(v, params, r0) {
                out.step2.record(m.radius, summand, path);
                out.step2_sharp.record(m.sharp, summand, path);
                out.by_depth[v.depth].1 = min_opt(out.by_depth[v.depth].1, m.radius);
                if m.radius < -eps {
                    return Err(fail("step 2 radius", summand, path, m.radius));
                }
                if m.sharp < -eps {
                    return Err(fail("step 2 sharp radius", summand, path, m.sharp));
                }
            }
            Ok(())
        })();
        if let Err(e) = res {
            err = Some(e);
        }
    });
    match err {
        Some(e) => Err(e),
        None => Ok(out),
    }
}

/// Builds and verifies the trees for `sets` and returns the interior certificate.
pub fn certify_interior(
    sets: &[DiscretizedSet],
    params: &CertifierParams,
    options: &CertifierOptions,
    tol: Tolerance,
) -> Result<InteriorCertificate> {
    let n = sets.len();
    if n == 0 {
        return Err(Error::Empty("no summands".into()));
    }
    if params.n != n {
        return Err(Error::InvalidParameter(format!(
            "params.n = {} but {n} sets",
            params.n
        )));
    }
    for (i, s) in sets.iter().enumerate() {
        s.cloud.check_dim(params.d)?;
        if s.diam <= 0.0 {
            return Err(Error::Singleton { index: i });
        }
    }
    CertifierParams::new(
        params.alpha,
        params.lambda,
        params.depth,
        params.n,
        params.d,
    )?;
    let step3 = verify_step3_inequality(params);
    if !step3.pass {
        return Err(Error::ThresholdViolation {
            n,
            required: step3.required_n,
        });
    }

    let mut unique: Vec<&DiscretizedSet> = Vec::new();
    let mut summand_tree = Vec::with_capacity(n);
    let mut first_summand = Vec::new();
    for (i, s) in sets.iter().enumerate() {
        match unique.iter().position(|u| *u == s) {
            Some(t) => summand_tree.push(t),
            None => {
                summand_tree.push(unique.len());
                unique.push(s);
                first_summand.push(i);
            }
        }
    }
    let r0 = sets.iter().map(|s| s.diam).fold(f64::INFINITY, f64::min);
    let finest = params.r(r0, params.depth);

    let mut thickness = Vec::new();
    if let Some(pre) = &options.thickness {
        let certs = unique
            .par_iter()
            .map(|s| {
                let stride = s.cloud.len().div_ceil(pre.max_centers.max(1)).max(1);
                let tp = ThicknessParams {
                    target: params.alpha,
                    ratio: pre.ratio,
                    floor: finest.min(s.diam),
                    centers: CenterPlan::Stride(stride),
                };
                measure_thickness(s, &tp, tol).map(|c| c.c_certified)
            })
            .collect::<Result<Vec<f64>>>()?;
        for (t, &c) in certs.iter().enumerate() {
            if !(c > params.alpha) {
                return Err(Error::ThicknessPrecondition {
                    index: first_summand[t],
                    certified: c,
                    alpha: params.alpha,
                });
            }
        }
        thickness = certs;
    }

    let trees = unique
        .par_iter()
        .map(|s| build_tree(s, params, r0, options.beta, options.vertex_cap, tol))
        .collect::<Result<Vec<_>>>()?;
    let reports = trees
        .par_iter()
        .zip(unique.par_iter())
        .enumerate()
        .map(|(t, (tree, s))| verify_tree(tree, s, params, r0, first_summand[t], tol))
        .collect::<Result<Vec<_>>>()?;

    let mut checks = Checks {
        step1_distance: CheckSummary::default(),
        step1_ball: CheckSummary::default(),
        step2: CheckSummary::default(),
        step2_sharp: CheckSummary::default(),
        step3,
        step4: CheckSummary::default(),
        alpha_ball: CheckSummary::default(),
        containment: CheckSummary::default(),
        absorption: Vec::new(),
    };
    for r in &reports {
        checks.step1_distance.merge(&r.step1_distance);
        checks.step1_ball.merge(&r.step1_ball);
        checks.step2.merge(&r.step2);
        checks.step2_sharp.merge(&r.step2_sharp);
        checks.step4.merge(&r.step4);
        checks.alpha_ball.merge(&r.alpha_ball);
        checks.containment.merge(&r.containment);
    }

    let mut rng = ChaCha8Rng::seed_from_u64(options.seed);
    for k in 0..params.depth {
        let mut premise_ball = None;
        let mut premise_radius = None;
        for r in &reports {
            if let Some(m) = r.by_depth[k].0 {
                premise_ball = min_opt(premise_ball, m);
            }
            if let Some(m) = r.by_depth[k].1 {
                premise_radius = min_opt(premise_radius, m);
            }
        }
        let premise_scale = verify::scale_premise(params, r0, k);
        let holds = premise_ball.is_some_and(|m| m >= -tol.eps())
            && premise_radius.is_some_and(|m| m >= -tol.eps())
            && premise_scale >= 0.0;
        if !holds {
            return Err(fail(
                "absorption premise",
                0,
                &[k],
                premise_ball
                    .unwrap_or(f64::NAN)
                    .min(premise_radius.unwrap_or(f64::NAN))
                    .min(premise_scale),
            ));
        }
        let oracle = if params.d == 1 && options.oracle_samples > 0 {
            let levels: Vec<Vec<(Vec<usize>, &TreeVertex)>> =
                trees.iter().map(|t| t.at_depth(k)).collect();
            let tuple: Vec<&TreeVertex> = summand_tree
                .iter()
                .map(|&t| levels[t][rng.gen_range(0..levels[t].len())].1)
                .collect();
            let o =
                absorption_oracle_1d(&tuple, params, r0, options.oracle_samples, &mut rng, tol)?;
            if o.decomposed != o.samples {
                return Err(fail(
                    "absorption oracle",
                    0,
                    &[k],
                    (o.decomposed as f64) - (o.samples as f64),
                ));
            }
            Some(o)
        } else {
            None
        };
        checks.absorption.push(AbsorptionDepth {
            depth: k,
            q: params.q(r0, k),
            next_q: params.q(r0, k + 1),
            big_r: params.big_r(r0, k),
            premise_ball,
            premise_radius,
            premise_scale,
            holds,
            oracle,
        });
    }

    let mut center = Point::zeros(params.d);
    for &t in &summand_tree {
        center.add_assign(trees[t].z.as_ref().expect("root carries z"));
    }
    Ok(InteriorCertificate {
        ball: Ball {
            center,
            radius: n as f64 * params.q(r0, 0),
        },
        residual_gap: params.gap(r0),
        verified_depth: params.depth,
        params: *params,
        r0,
        thickness,
        summand_tree,
        tree_sizes: trees.iter().map(TreeVertex::size).collect(),
        checks,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GapOracle {
    pub samples: usize,
    pub within: usize,
    pub worst_distance: f64,
    pub seed: u64,
}

/// Samples points of the certified ball (including both endpoints) and checks
/// each is within the residual gap of the sum of the clouds (d = 1).
pub fn check_certificate_1d(
    cert: &InteriorCertificate,
    sets: &[DiscretizedSet],
    samples: usize,
    seed: u64,
    tol: Tolerance,
) -> Result<GapOracle> {
    if cert.params.d != 1 {
        return Err(Error::InvalidParameter(
            "interval oracle needs d = 1".into(),
        ));
    }
    let clouds: Vec<_> = sets.iter().map(|s| &s.cloud).collect();
    let oracle = GapOracle1d::new(&clouds, cert.residual_gap);
    let c = cert.ball.center.coords()[0];
    let r = cert.ball.radius;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut within = 0;
    let mut worst_distance: f64 = 0.0;
    for s in 0..samples {
        let p = match s {
            0 => c - r,
            1 => c + r,
            _ => c + r * rng.gen_range(-1.0..=1.0),
        };
        if let Some(w) = oracle.witness(p, tol) {
            within += 1;
            worst_distance = worst_distance.max(w.distance);
        }
    }
    Ok(GapOracle {
        samples,
        within,
        worst_distance,
        seed,
    })
}

#[cfg(test)]
mod tests;
