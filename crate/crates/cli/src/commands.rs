use std::collections::HashMap;
use std::path::{Path, PathBuf};

use serde_json::{json, Value};

use thicksum::geometry::{hull_membership, minkowski_sum_points, Point, PointCloud, Tolerance};
use thicksum::interior::{
    certify_interior, check_certificate_1d, depth_for_gap, CertifierOptions, CertifierParams,
    InteriorCertificate,
};
use thicksum::io::{
    parse_json, read_cloud, read_json, CloudFile, CoeffsFile, IfsFile, RunConfig, Status,
};
use thicksum::oracle::nearest_sum_point;
use thicksum::shapley_folkman::{rad, residual_measure, sf_decompose, sf_round_radius};
use thicksum::thick::{discretize, measure_thickness, CenterPlan, DiscretizedSet, ThicknessParams};
use thicksum::thresholds::{lambda_star, threshold_report};
use thicksum::{Error, Result};

use crate::args::{AbsorptionArgs, CertifyArgs, Command, OracleCommand, SumInput, ThicknessArgs};

pub struct Outcome {
    pub status: Status,
    pub results: Value,
}

impl Outcome {
    fn new(pass: bool, results: Value) -> Self {
        Outcome {
            status: if pass { Status::Pass } else { Status::Fail },
            results,
        }
    }
}

pub fn run(cmd: &Command, cfg: &RunConfig, tol: Tolerance) -> Result<Outcome> {
    match cmd {
        Command::SfDecompose(a) => sf(a, tol),
        Command::Round(a) => round(a, tol),
        Command::Thickness(a) => thickness(a, cfg, tol),
        Command::Certify(a) => certify(a, cfg, tol),
        Command::Threshold(a) => {
            let r = threshold_report(a.c, a.d)?;
            Ok(Outcome::new(true, json!(r)))
        }
        Command::Oracle(OracleCommand::SumDistance(a)) => {
            let clouds = repeat(load_clouds(&a.clouds, tol)?, a.copies)?;
            let x = Point::new(a.x.clone())?;
            let near = nearest_sum_point(&clouds, &x, cfg.sum_cap)?;
            let d = clouds[0].dim();
            let big_r = clouds.iter().map(|c| rad(c).radius).fold(0.0, f64::max);
            let bound = big_r * (clouds.len().min(d) as f64).sqrt();
            let sum = minkowski_sum_points(&clouds, cfg.sum_cap, tol)?;
            let in_hull = hull_membership(&sum, &x, tol)?.is_some();
            let pass = !in_hull || near.distance <= bound + tol.eps();
            Ok(Outcome::new(
                pass,
                json!({
                    "distance": near.distance,
                    "bound": bound,
                    "radius": big_r,
                    "in_hull": in_hull,
                    "indices": near.indices,
                    "point": near.point,
                    "enumerated": u64::try_from(near.enumerated).unwrap_or(u64::MAX),
                }),
            ))
        }
        Command::Oracle(OracleCommand::Residual(a)) => {
            let clouds = repeat(load_clouds(&a.clouds, tol)?, a.copies)?;
            let r = residual_measure(&clouds, a.samples, cfg.seed, cfg.sum_cap, tol)?;
            Ok(Outcome::new(
                r.max_distance <= r.bound + tol.eps(),
                json!(r),
            ))
        }
        Command::Oracle(OracleCommand::Absorption(a)) => absorption(a, cfg, tol),
    }
}

fn repeat<T: Clone>(items: Vec<T>, copies: usize) -> Result<Vec<T>> {
    if copies == 0 {
        return Err(Error::InvalidParameter("copies must be positive".into()));
    }
    let n = items.len();
    Ok(items.into_iter().cycle().take(n * copies).collect())
}

fn load_clouds(paths: &[PathBuf], tol: Tolerance) -> Result<Vec<PointCloud>> {
    paths.iter().map(|p| read_cloud(p, tol)).collect()
}

fn read_text(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| Error::Io {
        path: path.display().to_string(),
        detail: e.to_string(),
    })
}

fn malformed(path: &Path, e: Error) -> Error {
    match e {
        Error::Malformed { .. } => e,
        other => Error::Malformed {
            source_name: path.display().to_string(),
            detail: other.to_string(),
        },
    }
}

/// A set file is an IFS when it has a `maps` key, otherwise a point cloud.
struct LoadedSet {
    set: DiscretizedSet,
    ifs_ratio: Option<f64>,
}

fn load_set(path: &Path, depth: usize, cfg: &RunConfig, tol: Tolerance) -> Result<LoadedSet> {
    let name = path.display().to_string();
    let text = read_text(path)?;
    let raw: Value = parse_json(&text, &name)?;
    if raw.get("maps").is_some() {
        let f: IfsFile = parse_json(&text, &name)?;
        let model = f.into_model().map_err(|e| malformed(path, e))?;
        let set = discretize(&model, depth, cfg.point_cap, tol)?;
        Ok(LoadedSet {
            set,
            ifs_ratio: Some(model.max_ratio()),
        })
    } else {
        let f: CloudFile = parse_json(&text, &name)?;
        let cloud = f.into_cloud(tol).map_err(|e| malformed(path, e))?;
        Ok(LoadedSet {
            set: DiscretizedSet::exact(cloud),
            ifs_ratio: None,
        })
    }
}

fn load_sets(
    paths: &[PathBuf],
    copies: usize,
    depth: usize,
    cfg: &RunConfig,
    tol: Tolerance,
) -> Result<Vec<DiscretizedSet>> {
    let mut cache: HashMap<&Path, DiscretizedSet> = HashMap::new();
    let mut sets = Vec::new();
    for p in paths {
        if !cache.contains_key(p.as_path()) {
            cache.insert(p, load_set(p, depth, cfg, tol)?.set);
        }
        sets.push(cache[p.as_path()].clone());
    }
    repeat(sets, copies)
}

fn load_sum_input(a: &SumInput, tol: Tolerance) -> Result<(Vec<PointCloud>, Vec<Vec<f64>>)> {
    let clouds = load_clouds(&a.clouds, tol)?;
    let coeffs: CoeffsFile = read_json(&a.coeffs)?;
    Ok((clouds, coeffs.coeffs))
}

fn sf(a: &SumInput, tol: Tolerance) -> Result<Outcome> {
    let (clouds, coeffs) = load_sum_input(a, tol)?;
    let dec = sf_decompose(&clouds, &coeffs, tol)?;
    // the decomposition is exact; the bound is the numerical reconstruction tolerance
    let bound = 10.0 * tol.eps() * dec.target.norm().max(1.0);
    let pass = dec.exceptional.len() <= dec.dim && dec.reconstruction_error <= bound;
    Ok(Outcome::new(
        pass,
        json!({
            "dim": dec.dim,
            "exceptional": dec.exceptional,
            "exact": dec.exact,
            "convexified": dec.convexified,
            "target": dec.target,
            "error": dec.reconstruction_error,
            "bound": bound,
        }),
    ))
}

fn round(a: &SumInput, tol: Tolerance) -> Result<Outcome> {
    let (clouds, coeffs) = load_sum_input(a, tol)?;
    let r = sf_round_radius(&clouds, &coeffs, tol)?;
    Ok(Outcome::new(
        r.error <= r.bound + tol.eps(),
        json!({
            "exceptional": r.decomposition.exceptional,
            "exact": r.decomposition.exact,
            "convexified": r.decomposition.convexified,
            "chosen": r.chosen,
            "chosen_indices": r.chosen_indices,
            "sum": r.sum,
            "target": r.target,
            "radius": r.radius,
            "error": r.error,
            "bound": r.bound,
        }),
    ))
}

fn thickness(a: &ThicknessArgs, cfg: &RunConfig, tol: Tolerance) -> Result<Outcome> {
    let loaded = load_set(&a.set, a.depth, cfg, tol)?;
    let set = &loaded.set;
    let floor = match (a.floor, loaded.ifs_ratio) {
        (Some(f), _) => f,
        (None, Some(rho)) => (set.diam * rho.powi(a.depth as i32 - 2)).max(set.resolution),
        (None, None) => 0.01 * set.diam,
    };
    let params = ThicknessParams {
        target: a.target,
        ratio: a.ratio,
        floor,
        centers: if a.stride > 1 {
            CenterPlan::Stride(a.stride)
        } else {
            CenterPlan::All
        },
    };
    let cert = measure_thickness(set, &params, tol)?;
    let w = &cert.worst;
    let mut results = json!({
        "kind": if loaded.ifs_ratio.is_some() { "ifs" } else { "cloud" },
        "points": set.cloud.len(),
        "resolution": set.resolution,
        "diam": set.diam,
        "c_raw": cert.c_raw,
        "c_certified": cert.c_certified,
        "target": cert.target,
        "scale_ratio": cert.scale_ratio,
        "caveat_floor": cert.caveat_floor,
        "scales": cert.scales.len(),
        "centers": cert.centers.len(),
        "worst": {
            "x": set.cloud.points()[w.center],
            "r": cert.scales[w.scale],
            "ratio": w.ratio,
            "ball": w.ball,
        },
    });
    if a.witnesses {
        results["witnesses"] = json!(cert.witnesses);
    }
    Ok(Outcome::new(cert.passed(), results))
}

fn build_params(
    sets: &[DiscretizedSet],
    alpha: f64,
    lambda: Option<f64>,
    depth: Option<usize>,
    gap: Option<f64>,
) -> Result<CertifierParams> {
    let lambda = match lambda {
        Some(l) => l,
        None => lambda_star(alpha)?,
    };
    let n = sets.len();
    let depth = match (depth, gap) {
        (_, Some(g)) => {
            let r0 = sets.iter().map(|s| s.diam).fold(f64::INFINITY, f64::min);
            depth_for_gap(n, lambda, r0, g)?
        }
        (Some(k), None) => k,
        (None, None) => 3,
    };
    CertifierParams::new(alpha, lambda, depth, n, sets[0].dim())
}

fn certificate_json(cert: &InteriorCertificate) -> Value {
    let c = &cert.checks;
    json!({
        "ball": { "center": cert.ball.center, "radius": cert.ball.radius },
        "gap": cert.residual_gap,
        "depth": cert.verified_depth,
        "r0": cert.r0,
        "params": cert.params,
        "checks": {
            "step1": { "distance": c.step1_distance, "ball": c.step1_ball },
            "step2": { "radius": c.step2, "sharp": c.step2_sharp },
            "step3": c.step3,
            "step4": c.step4,
            "alpha_ball": c.alpha_ball,
            "containment": c.containment,
            "absorption": c.absorption,
        },
        "thickness": cert.thickness,
        "summand_tree": cert.summand_tree,
        "tree_sizes": cert.tree_sizes,
    })
}

fn certify(a: &CertifyArgs, cfg: &RunConfig, tol: Tolerance) -> Result<Outcome> {
    let sets = load_sets(&a.sets, a.copies, a.set.disc_depth, cfg, tol)?;
    let params = build_params(&sets, a.alpha, a.lambda, a.depth, a.gap)?;
    let options = CertifierOptions {
        seed: cfg.seed,
        ..CertifierOptions::default()
    };
    let cert = certify_interior(&sets, &params, &options, tol)?;
    let mut results = certificate_json(&cert);
    if let Some(g) = a.gap {
        results["requested_gap"] = json!(g);
    }
    let mut pass = true;
    if a.samples > 0 && params.d == 1 {
        let oracle = check_certificate_1d(&cert, &sets, a.samples, cfg.seed, tol)?;
        pass = oracle.within == oracle.samples;
        results["gap_oracle"] = json!(oracle);
    }
    Ok(Outcome::new(pass, results))
}

fn absorption(a: &AbsorptionArgs, cfg: &RunConfig, tol: Tolerance) -> Result<Outcome> {
    let sets = load_sets(&a.sets, a.copies, a.set.disc_depth, cfg, tol)?;
    let params = build_params(&sets, a.alpha, a.lambda, Some(a.depth), None)?;
    if params.d != 1 {
        return Err(Error::InvalidParameter(
            "the absorption oracle needs d = 1".into(),
        ));
    }
    let options = CertifierOptions {
        seed: cfg.seed,
        oracle_samples: a.samples,
        ..CertifierOptions::default()
    };
    let cert = certify_interior(&sets, &params, &options, tol)?;
    let gap = check_certificate_1d(&cert, &sets, a.samples, cfg.seed, tol)?;
    let absorbed = cert
        .checks
        .absorption
        .iter()
        .all(|d| d.holds && d.oracle.as_ref().is_none_or(|o| o.decomposed == o.samples));
    Ok(Outcome::new(
        absorbed && gap.within == gap.samples,
        json!({
            "ball": { "center": cert.ball.center, "radius": cert.ball.radius },
            "gap": cert.residual_gap,
            "depth": cert.verified_depth,
            "absorption": cert.checks.absorption,
            "gap_oracle": gap,
        }),
    ))
}

/// 2 for failed premises or certificates, 3 for invalid input, 65 for unreadable files.
pub fn exit_code(e: &Error) -> u8 {
    match e {
        Error::Malformed { .. } | Error::Io { .. } => 65,
        Error::PremiseFailed { .. }
        | Error::ThresholdViolation { .. }
        | Error::ThicknessPrecondition { .. }
        | Error::ThicknessShortfall { .. }
        | Error::WitnessFailure { .. }
        | Error::ResolutionTooCoarse { .. }
        | Error::Singleton { .. }
        | Error::Degenerate { .. }
        | Error::ContainmentViolated { .. } => 2,
        Error::Lp(_) | Error::Internal(_) => 1,
        _ => 3,
    }
}

fn kind(e: &Error) -> String {
    let dbg = format!("{e:?}");
    dbg.split([' ', '(', '{']).next().unwrap_or("").to_string()
}

pub fn failure_payload(e: &Error) -> Value {
    let mut v = json!({ "error": e.to_string(), "kind": kind(e) });
    let detail = match e {
        Error::PremiseFailed {
            check,
            summand,
            path,
            margin,
        } => {
            json!({ "check": check, "summand": summand, "path": path, "margin": margin })
        }
        Error::ThresholdViolation { n, required } => json!({ "n": n, "required": required }),
        Error::ThicknessShortfall {
            certified,
            target,
            x,
            r,
            ratio,
        } => {
            json!({ "certified": certified, "target": target, "x": x, "r": r, "ratio": ratio })
        }
        Error::WitnessFailure {
            x,
            r,
            achieved,
            required,
        } => {
            json!({ "x": x, "r": r, "achieved": achieved, "required": required })
        }
        Error::ThicknessPrecondition {
            index,
            certified,
            alpha,
        } => {
            json!({ "summand": index, "certified": certified, "alpha": alpha })
        }
        Error::Malformed {
            source_name,
            detail,
        } => json!({ "path": source_name, "detail": detail }),
        Error::Io { path, detail } => json!({ "path": path, "detail": detail }),
        _ => Value::Null,
    };
    if !detail.is_null() {
        v["detail"] = detail;
    }
    v
}
