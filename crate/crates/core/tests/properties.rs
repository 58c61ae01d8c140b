use proptest::prelude::*;

use thicksum::geometry::{
    ball_in_hull, chebyshev_center, covering_check, minkowski_sum_points, Point, PointCloud,
    Tolerance,
};
use thicksum::interior::IntervalUnion;
use thicksum::oracle::nearest_sum_point;
use thicksum::shapley_folkman::{
    conic_reduce, greedy_round, rad, sf_decompose, sf_round_radius, ConicCombination,
};
use thicksum::thick::{measure_thickness, CenterPlan, DiscretizedSet, ThicknessParams};
use thicksum::thresholds::{lambda_star, n_main, phi};

const TAU: f64 = 1e-9;

fn tol() -> Tolerance {
    Tolerance::default()
}

fn rows(d: usize, max: usize) -> impl Strategy<Value = Vec<Vec<f64>>> {
    prop::collection::vec(prop::collection::vec(-1.0f64..1.0, d), 1..=max)
}

fn cloud(d: usize, max: usize) -> impl Strategy<Value = PointCloud> {
    rows(d, max).prop_map(|r| PointCloud::from_rows(&r).unwrap())
}

fn clouds(max_n: usize, max_k: usize) -> impl Strategy<Value = Vec<PointCloud>> {
    (1usize..=3).prop_flat_map(move |d| prop::collection::vec(cloud(d, max_k), 1..=max_n))
}

fn weights(k: usize) -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(0.01f64..1.0, k).prop_map(|w| {
        let s: f64 = w.iter().sum();
        w.into_iter().map(|x| x / s).collect()
    })
}

fn with_coeffs(
    max_n: usize,
    max_k: usize,
) -> impl Strategy<Value = (Vec<PointCloud>, Vec<Vec<f64>>)> {
    clouds(max_n, max_k).prop_flat_map(|cs| {
        let ws: Vec<_> = cs.iter().map(|c| weights(c.len())).collect();
        (Just(cs), ws)
    })
}

fn convex_point(c: &PointCloud, w: &[f64]) -> Point {
    let mut y = Point::zeros(c.dim());
    for (p, &l) in c.points().iter().zip(w) {
        y.add_assign(&p.scale(l));
    }
    y
}

fn rotation(theta: f64, flip: bool) -> Vec<Vec<f64>> {
    let (s, c) = theta.sin_cos();
    let f = if flip { -1.0 } else { 1.0 };
    vec![vec![c, -s * f], vec![s, c * f]]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn conic_reduction_keeps_value_with_at_most_m_terms(
        (m, terms) in (1usize..=4).prop_flat_map(|m| {
            (Just(m), prop::collection::vec((0.0f64..2.0, prop::collection::vec(-1.0f64..1.0, m)), 1..=12))
        })
    ) {
        let terms: Vec<(f64, Point)> = terms.into_iter().map(|(l, v)| (l, Point::new(v).unwrap())).collect();
        let comb = ConicCombination::new(m, terms).unwrap();
        let out = conic_reduce(&comb, m, tol()).unwrap();
        prop_assert!(out.len() <= m);
        prop_assert!(out.terms.iter().all(|t| t.coeff > 0.0));
        prop_assert!(out.value().distance(&comb.value()) <= 10.0 * TAU);
    }

    #[test]
    fn decomposition_has_at_most_d_exceptional_summands((cs, ws) in with_coeffs(8, 5)) {
        let d = cs[0].dim();
        let dec = sf_decompose(&cs, &ws, tol()).unwrap();
        prop_assert!(dec.exceptional.len() <= d);
        prop_assert_eq!(dec.exact.len() + dec.convexified.len(), cs.len());
        for e in &dec.exact {
            prop_assert_eq!(&cs[e.summand].points()[e.index], &e.point);
        }
        prop_assert!(dec.reconstruction_error <= 1e-8);
    }

    #[test]
    fn greedy_rounding_within_r_sqrt_m((cs, ws) in with_coeffs(10, 6)) {
        let ys: Vec<Point> = cs.iter().zip(&ws).map(|(c, w)| convex_point(c, w)).collect();
        let centers: Vec<Point> = cs.iter().map(|c| c.centroid()).collect();
        let r = cs.iter().zip(&centers)
            .map(|(c, z)| c.points().iter().map(|p| p.distance(z)).fold(0.0, f64::max))
            .fold(0.0, f64::max);
        let res = greedy_round(&cs, &ys, &centers, r, tol()).unwrap();
        prop_assert!(res.error <= r * (cs.len() as f64).sqrt() + TAU);
    }

    #[test]
    fn rounding_is_never_better_than_exhaustive_search((cs, ws) in with_coeffs(5, 4)) {
        let res = sf_round_radius(&cs, &ws, tol()).unwrap();
        let best = nearest_sum_point(&cs, &res.target, 1 << 20).unwrap();
        prop_assert!(res.error >= best.distance - TAU);
        prop_assert!(res.error <= res.bound + TAU);
    }

    #[test]
    fn enclosing_and_inscribed_balls_commute_with_translation(
        c in cloud(2, 12), t in prop::collection::vec(-5.0f64..5.0, 2)
    ) {
        let t = Point::new(t).unwrap();
        let moved = c.translate(&t);
        let (a, b) = (rad(&c), rad(&moved));
        prop_assert!((a.radius - b.radius).abs() <= 1e-9);
        prop_assert!(a.center.add(&t).distance(&b.center) <= 1e-8);
        let x = Point::new(vec![0.3, -0.2]).unwrap();
        let s1 = nearest_sum_point(std::slice::from_ref(&c), &x, 100).unwrap();
        let s2 = nearest_sum_point(std::slice::from_ref(&moved), &x.add(&t), 100).unwrap();
        prop_assert!((s1.distance - s2.distance).abs() <= 1e-9);
        if let (Ok(p), Ok(q)) = (chebyshev_center(&c, tol()), chebyshev_center(&moved, tol())) {
            prop_assert!((p.radius - q.radius).abs() <= 1e-8);
        }
    }

    #[test]
    fn minkowski_sum_is_commutative(a in cloud(2, 6), b in cloud(2, 6)) {
        let ab = minkowski_sum_points(&[a.clone(), b.clone()], 1000, tol()).unwrap();
        let ba = minkowski_sum_points(&[b, a], 1000, tol()).unwrap();
        prop_assert_eq!(ab.len(), ba.len());
        for p in ab.points() {
            prop_assert!(ba.distance_to(p) <= 1e-9);
        }
    }

    #[test]
    fn a_cloud_covers_itself(c in cloud(3, 20)) {
        prop_assert!(covering_check(&c, &c, 0.0, tol()).unwrap());
    }

    #[test]
    fn chebyshev_ball_touches_the_hull(c in cloud(2, 15)) {
        if let Ok(ball) = chebyshev_center(&c, tol()) {
            let r = ball_in_hull(&c, &ball, tol()).unwrap();
            prop_assert!(r.margin.abs() <= 1e-7, "margin {}", r.margin);
        }
    }

    #[test]
    fn thickness_is_invariant_under_similarities(
        c in cloud(2, 14), theta in 0.0f64..6.3, flip in any::<bool>(), s in 0.2f64..5.0,
        t in prop::collection::vec(-3.0f64..3.0, 2)
    ) {
        prop_assume!(thicksum::geometry::diameter(&c) > 0.2);
        let params = |f: f64| ThicknessParams { target: 0.5, ratio: 0.7, floor: f, centers: CenterPlan::All };
        let base = DiscretizedSet::exact(c.clone());
        let moved = DiscretizedSet::exact(c.transform(&rotation(theta, flip), s, &Point::new(t).unwrap()));
        let floor = 0.3 * base.diam;
        let a = measure_thickness(&base, &params(floor), tol()).unwrap();
        let b = measure_thickness(&moved, &params(floor * s), tol()).unwrap();
        prop_assert!((a.c_raw - b.c_raw).abs() <= 1e-6, "{} vs {}", a.c_raw, b.c_raw);
    }

    #[test]
    fn local_inscribed_radius_grows_with_scale(
        c in cloud(2, 25), x in 0usize..25, r1 in 0.1f64..2.0, dr in 0.0f64..1.0
    ) {
        let x = &c.points()[x % c.len()];
        let small = c.within(x, r1, tol()).unwrap();
        let large = c.within(x, r1 + dr, tol()).unwrap();
        if let Ok(a) = chebyshev_center(&small, tol()) {
            let b = chebyshev_center(&large, tol()).unwrap();
            prop_assert!(b.radius >= a.radius - 1e-8);
        }
    }

    #[test]
    fn interval_sum_contains_pointwise_sums(
        a in prop::collection::vec(-2.0f64..2.0, 1..6), b in prop::collection::vec(-2.0f64..2.0, 1..6),
        h in 0.0f64..0.3, u in 0.0f64..1.0, v in 0.0f64..1.0
    ) {
        let ua = IntervalUnion::around(a.iter().copied(), h);
        let ub = IntervalUnion::around(b.iter().copied(), h);
        let sum = ua.minkowski(&ub);
        for &x in &a {
            for &y in &b {
                let p = (x - h + 2.0 * h * u) + (y - h + 2.0 * h * v);
                prop_assert!(sum.contains(p, 1e-12));
            }
        }
    }

    #[test]
    fn lambda_star_minimizes_phi(alpha in 1e-4f64..=1.0, t in 1e-6f64..0.999999, d in 1usize..50) {
        let ls = lambda_star(alpha).unwrap();
        prop_assert!(ls > 0.0 && ls < alpha);
        let best = phi(alpha, ls, d).unwrap();
        prop_assert!(best <= phi(alpha, t * alpha, d).unwrap() * (1.0 + 1e-12));
    }

    #[test]
    fn n_main_is_monotone(c1 in 0.01f64..=1.0, c2 in 0.01f64..=1.0, d1 in 1usize..100, d2 in 1usize..100) {
        let (lo, hi) = if c1 <= c2 { (c1, c2) } else { (c2, c1) };
        let (dl, dh) = if d1 <= d2 { (d1, d2) } else { (d2, d1) };
        prop_assert!(n_main(hi, dl).unwrap() <= n_main(lo, dl).unwrap());
        prop_assert!(n_main(lo, dl).unwrap() <= n_main(lo, dh).unwrap());
    }

    #[test]
    fn threshold_forms_agree(c in 0.001f64..=1.0, d in 1usize..1000) {
        let sd = (d as f64).sqrt();
        let ls = lambda_star(c).unwrap();
        let v = n_main(c, d).unwrap();
        // α − λ* = λ*(1 + λ*), so phi(c, λ*) = √d / λ*²
        prop_assert!((c - ls - ls * (1.0 + ls)).abs() <= 1e-12);
        prop_assert!((phi(c, ls, d).unwrap() - v).abs() <= 1e-9 * v);
        prop_assert!((sd / (ls * ls) - v).abs() <= 1e-9 * v);
        prop_assert!(v < 6.0 * sd / (c * c));
    }
}
