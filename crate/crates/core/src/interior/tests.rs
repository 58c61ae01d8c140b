use super::*;
use crate::geometry::{PointCloud, DEFAULT_POINT_CAP};
use crate::thick::{discretize, IfsModel};

fn tol() -> Tolerance {
    Tolerance::default()
}

fn lambda_star(a: f64) -> f64 {
    (1.0 + a).sqrt() - 1.0
}

fn interval(depth: usize) -> DiscretizedSet {
    discretize(&IfsModel::unit_interval(), depth, DEFAULT_POINT_CAP, tol()).unwrap()
}

fn params(n: usize, depth: usize) -> CertifierParams {
    CertifierParams::new(0.49, lambda_star(0.49), depth, n, 1).unwrap()
}

#[test]
fn step3_at_the_threshold() {
    let r = verify_step3_inequality(&params(21, 3));
    assert!(r.pass && (r.value - 0.0275).abs() < 1e-3, "{}", r.value);
    let r = verify_step3_inequality(&params(20, 3));
    assert!(!r.pass && (r.value + 0.0319).abs() < 1e-3, "{}", r.value);
    assert!(verify_step3_inequality(&params(1000, 3)).pass);
    assert!(r.required_n > 20.0 && r.required_n < 21.0);
}

#[test]
fn scale_recursions() {
    let p = params(21, 6);
    for k in 0..6 {
        let (r, r1) = (p.r(1.3, k), p.r(1.3, k + 1));
        assert!((r1 - p.lambda * r).abs() <= 1e-15 * r);
        assert!((p.q(1.3, k) - (p.alpha - p.lambda) * r).abs() <= 1e-15 * r);
        assert!((p.big_r(1.3, k) - (1.0 + p.lambda) * r).abs() <= 1e-15 * r);
    }
    let g2 = params(21, 2).gap(1.0);
    let g3 = params(21, 3).gap(1.0);
    assert!((g3 - p.lambda * g2).abs() < 1e-15);
}

#[test]
fn interval_tree_every_witness_has_radius_alpha_r() {
    let set = interval(12);
    let p = params(21, 2);
    let tree = build_tree(&set, &p, set.diam, None, 10_000, tol()).unwrap();
    assert_eq!(tree.at_depth(3).len(), 8);
    tree.walk(&mut |_, v| {
        if v.depth <= 2 {
            let m = alpha_ball_margin(v, &p, set.diam, tol()).unwrap().unwrap();
            assert!(m >= -1e-9);
            let r = p.r(set.diam, v.depth);
            let xs: Vec<f64> = v.children.iter().map(|c| c.x.coords()[0]).collect();
            assert!(xs.iter().all(|&c| (c - v.x.coords()[0]).abs() <= r + 1e-9));
        }
    });
}

#[test]
fn depth_zero_certificate() {
    let set = interval(12);
    let p = params(21, 0);
    let c = certify_interior(&vec![set; 21], &p, &CertifierOptions::default(), tol()).unwrap();
    assert!((c.ball.radius - 21.0 * p.q(c.r0, 0)).abs() < 1e-12);
    assert!((c.residual_gap - 21.0 * (1.0 - p.lambda) * c.r0).abs() < 1e-12);
    assert!(c.checks.absorption.is_empty());
    assert_eq!(c.checks.step1_ball.checked, 0);
}

#[test]
fn twenty_one_intervals_depth_three() {
    let set = interval(14);
    let p = params(21, 3);
    let sets = vec![set; 21];
    let c = certify_interior(&sets, &p, &CertifierOptions::default(), tol()).unwrap();
    assert_eq!(c.tree_sizes.len(), 1);
    assert!((c.ball.radius - 21.0 * 0.269344).abs() < 1e-3);
    assert!((c.residual_gap - 21.0 * 0.779344 * 0.220656f64.powi(3)).abs() < 1e-4);
    assert!((c.ball.center.coords()[0] - 10.5).abs() < 0.01);
    assert!(c.checks.absorption.iter().all(|a| a.holds));
    let o = check_certificate_1d(&c, &sets, 200, 5, tol()).unwrap();
    assert_eq!(o.within, o.samples);
}

#[test]
fn rejects_below_threshold() {
    let set = interval(10);
    let e = certify_interior(
        &vec![set; 20],
        &params(20, 3),
        &CertifierOptions::default(),
        tol(),
    )
    .unwrap_err();
    assert!(matches!(e, Error::ThresholdViolation { n: 20, .. }));
}

#[test]
fn rejects_singleton() {
    let mut sets = vec![interval(10); 21];
    sets[4] = DiscretizedSet::exact(PointCloud::from_scalars(&[0.5]).unwrap());
    let e =
        certify_interior(&sets, &params(21, 3), &CertifierOptions::default(), tol()).unwrap_err();
    assert_eq!(e, Error::Singleton { index: 4 });
}

#[test]
fn rejects_alpha_above_thickness() {
    // Cantor thickness is far below 0.49
    let set = discretize(&IfsModel::cantor(), 8, DEFAULT_POINT_CAP, tol()).unwrap();
    let e = certify_interior(
        &vec![set; 21],
        &params(21, 1),
        &CertifierOptions::default(),
        tol(),
    )
    .unwrap_err();
    assert!(matches!(e, Error::ThicknessPrecondition { index: 0, .. }));
}

#[test]
fn displaced_z_is_caught_with_its_path() {
    let set = interval(12);
    let p = params(21, 2);
    let mut tree = build_tree(&set, &p, set.diam, None, 10_000, tol()).unwrap();
    let r1 = p.r(set.diam, 1);
    let z = tree.children[1].z.as_mut().unwrap();
    *z = z.add(&Point::from(2.0 * r1));
    let e = verify_tree(&tree, &set, &p, set.diam, 3, tol())
        .err()
        .unwrap();
    match e {
        Error::PremiseFailed {
            summand,
            path,
            margin,
            ..
        } => {
            assert_eq!(summand, 3);
            assert!(path.is_empty() || path == [1], "{path:?}");
            assert!(margin < 0.0);
        }
        other => panic!("{other:?}"),
    }
}

#[test]
fn step2_negative_control() {
    let set = interval(12);
    let p = params(21, 2);
    let mut tree = build_tree(&set, &p, set.diam, None, 10_000, tol()).unwrap();
    assert!(verify_step2(&tree, &p, set.diam).unwrap().radius >= 0.0);
    let far = tree.x.add(&Point::from((1.0 + 2.0 * p.lambda) * set.diam));
    tree.children[0].z = Some(far);
    assert!(verify_step2(&tree, &p, set.diam).unwrap().radius < 0.0);
    let leaf = &tree.children[0].children[0].children[0];
    assert!(verify_step2(leaf, &p, set.diam).is_none());
}

#[test]
fn depth_k_vertices_are_vacuous_for_step1() {
    let set = interval(12);
    let p = params(21, 1);
    let tree = build_tree(&set, &p, set.diam, None, 10_000, tol()).unwrap();
    assert!(verify_step1(&tree, &p, set.diam, tol()).unwrap().is_some());
    for c in &tree.children {
        assert!(verify_step1(c, &p, set.diam, tol()).unwrap().is_none());
    }
}

#[test]
fn absorption_on_diagonal_tuple() {
    let set = interval(12);
    let p = params(21, 2);
    let tree = build_tree(&set, &p, set.diam, None, 10_000, tol()).unwrap();
    let tuple = vec![&tree; 21];
    let a = absorption_check(&tuple, &p, set.diam, tol()).unwrap();
    assert!(a.holds && a.premise_scale > 0.0);
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let o = absorption_oracle_1d(&tuple, &p, set.diam, 150, &mut rng, tol()).unwrap();
    assert_eq!(o.decomposed, 150);
    assert!(o.worst_residual < 1e-9);

    let few = CertifierParams { n: 5, ..p };
    let tuple = vec![&tree; 5];
    let a = absorption_check(&tuple, &few, set.diam, tol()).unwrap();
    assert!(a.premise_scale < 0.0 && !a.holds);
}

#[test]
fn certificates_are_deterministic() {
    let sets = vec![interval(12); 21];
    let p = params(21, 2);
    let o = CertifierOptions {
        seed: 9,
        ..Default::default()
    };
    let a = certify_interior(&sets, &p, &o, tol()).unwrap();
    let b = certify_interior(&sets, &p, &o, tol()).unwrap();
    assert_eq!(a, b);
    assert_eq!(
        a.ball.center.coords()[0].to_bits(),
        b.ball.center.coords()[0].to_bits()
    );
}

#[test]
fn gap_depth() {
    let p = params(21, 0);
    let k = depth_for_gap(21, p.lambda, 1.0, 0.2).unwrap();
    assert_eq!(k, 3);
    assert!(params(21, k).gap(1.0) <= 0.2 && params(21, k - 1).gap(1.0) > 0.2);
}
