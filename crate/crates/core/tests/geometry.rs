use std::f64::consts::PI;

use nonlocal_core::field::presets as fields;
use nonlocal_core::geometry::*;
use nonlocal_core::quad::{gauss_legendre, integrate_1d, integrate_power_tail, integrate_with_breaks, Weight};
use nonlocal_core::rng::RngStream;
use nonlocal_core::specfun::{beta, gamma};
use nonlocal_core::{Error, QuadSpec};

fn iu(parts: &[(f64, f64)]) -> IntervalUnion {
    IntervalUnion::new(parts)
}

fn half_line_perimeter(s: f64) -> f64 {
    2f64.powf(1.0 - s) / (s * (1.0 - s))
}

/// Unit-disk curvature at a boundary point from the angular measure of the
/// complement on circles around it: 2 pi 2^{-s}/s + int_0^2 4 asin(t/2) t^{-1-s}.
fn disk_curvature(s: f64) -> f64 {
    let spec = QuadSpec::new(1e-13, 1e-15);
    let rest = integrate_with_breaks(
        |t: f64| (4.0 * (t / 2.0).asin() - 2.0 * t) * t.powf(-1.0 - s),
        0.0,
        2.0,
        &[1.0, 1.9, 1.99],
        &spec,
    )
    .unwrap()
    .value;
    2.0 * PI * 2f64.powf(-s) / s + 2.0 * 2f64.powf(1.0 - s) / (1.0 - s) + rest
}

#[test]
fn interaction_matches_product_quadrature() {
    let s = 0.5;
    let v = interaction_1d(&iu(&[(0.0, 1.0)]), &iu(&[(2.0, 3.0)]), s).unwrap();
    let g = gauss_legendre(40);
    let mut brute = 0.0;
    for (x, wx) in g.nodes.iter().zip(&g.weights) {
        for (y, wy) in g.nodes.iter().zip(&g.weights) {
            let (a, b) = (0.5 + 0.5 * x, 2.5 + 0.5 * y);
            brute += 0.25 * wx * wy * (b - a).powf(-1.0 - s);
        }
    }
    assert!((v - brute).abs() < 1e-12, "{v} vs {brute}");
    let closed = (3f64.powf(1.0 - s) - 2.0 * 2f64.powf(1.0 - s) + 1.0) / (s * (1.0 - s));
    // the closed form with the opposite sign convention, for the record
    assert!((v + closed).abs() < 1e-12);
    assert!(v > 0.0);
}

#[test]
fn interaction_with_half_line_by_quadrature() {
    for s in [0.3, 0.5, 0.8] {
        let v = interaction_1d(&iu(&[(0.0, 1.0)]), &iu(&[(f64::NEG_INFINITY, 0.0)]), s).unwrap();
        assert!((v - 1.0 / (s * (1.0 - s))).abs() < 1e-12);
        // int_0^1 dx [int_0^1 + int_1^inf] (x + u)^{-1-s} du, numerically
        let spec = QuadSpec::new(1e-11, 1e-13);
        // the inner integral is x^{-s}/s, so the weight carries the singularity
        let direct = integrate_1d(
            |x| {
                let near = integrate_1d(|u| (x + u).powf(-1.0 - s), 0.0, 1.0, Weight::None, &spec)
                    .unwrap()
                    .value;
                let far = integrate_power_tail(|u| (x + u).powf(-1.0 - s), 1.0, 1.0 + s, &spec)
                    .unwrap()
                    .value;
                (near + far) * x.powf(s)
            },
            0.0,
            1.0,
            Weight::LeftPower(-s),
            &spec,
        )
        .unwrap()
        .value;
        assert!((direct - v).abs() < 1e-7 * v, "s={s}: {direct} vs {v}");
    }
}

#[test]
fn half_line_perimeter_scan_and_limits() {
    let e = parse_set("intervals:0,inf").unwrap();
    let om = parse_set("intervals:-1,1").unwrap();
    let spec = QuadSpec::default();
    let grid: Vec<f64> = (1..=19).map(|k| 0.05 * k as f64).collect();
    let scan = asymptotic_scan(&grid, |s| {
        frac_perimeter(&e, &om, s, &PerimeterMethod::ClosedForm1d, &spec)
    })
    .unwrap();
    for (s, v) in scan.s.iter().zip(&scan.values) {
        assert!((v.value - half_line_perimeter(*s)).abs() < 1e-8 * v.value);
    }
    let lo = frac_perimeter(&e, &om, 0.01, &PerimeterMethod::ClosedForm1d, &spec).unwrap();
    assert!((0.01 * lo.value - 2.0).abs() < 0.02 * 2.0);
    let hi = frac_perimeter(&e, &om, 0.99, &PerimeterMethod::ClosedForm1d, &spec).unwrap();
    assert!((0.01 * hi.value - 1.0).abs() < 0.02);
}

#[test]
fn empty_and_distant_sets() {
    let om = parse_set("intervals:-1,1").unwrap();
    let spec = QuadSpec::default();
    let empty = GeomSet::from_intervals(IntervalUnion::empty());
    let v = frac_perimeter(&empty, &om, 0.4, &PerimeterMethod::ClosedForm1d, &spec).unwrap();
    assert_eq!(v.value, 0.0);
    let far = parse_set("intervals:100,101").unwrap();
    let v = frac_perimeter(&far, &om, 0.4, &PerimeterMethod::ClosedForm1d, &spec).unwrap();
    assert!(v.value > 0.0 && v.value < 1e-2);
}

/// Per_s(half-plane, B_1) for n = 2 split as in the estimator: points of the
/// upper half-disk see the lower half-plane (closed form), points of the
/// lower half-disk see the upper half-plane outside B_1 (nested quadrature).
fn half_plane_oracle(s: f64) -> f64 {
    let a = PI.sqrt() * gamma((1.0 + s) / 2.0).unwrap() / gamma(1.0 + s / 2.0).unwrap();
    let part1 = beta((1.0 - s) / 2.0, 1.5).unwrap() * a / s;
    let spec = QuadSpec::new(1e-7, 1e-9);
    let inner_spec = QuadSpec::new(1e-9, 1e-11);
    let part2 = integrate_1d(
        |rho| {
            integrate_1d(
                |phi| {
                    let x = [rho * phi.cos(), rho * phi.sin()];
                    let g = integrate_1d(
                        |th: f64| {
                            let d = [th.cos(), th.sin()];
                            let xd = x[0] * d[0] + x[1] * d[1];
                            let exit = -xd + (xd * xd + 1.0 - rho * rho).sqrt();
                            let t0 = -x[1] / d[1];
                            exit.max(t0).powf(-s) / s
                        },
                        0.0,
                        PI,
                        Weight::None,
                        &inner_spec,
                    )
                    .unwrap()
                    .value;
                    g * rho
                },
                PI,
                2.0 * PI,
                Weight::None,
                &inner_spec,
            )
            .unwrap()
            .value
        },
        0.0,
        1.0,
        Weight::None,
        &spec,
    )
    .unwrap()
    .value;
    part1 + part2
}

#[test]
fn half_plane_perimeter_monte_carlo() {
    let s = 0.5;
    let e = parse_set("halfspace:nu=0,1;a=0").unwrap();
    let om = parse_set("ball:c=0,0;R=1").unwrap();
    let method = PerimeterMethod::MonteCarlo {
        samples: 1_000_000,
        stream: RngStream::new(11, 0),
    };
    let mc = frac_perimeter(&e, &om, s, &method, &QuadSpec::default()).unwrap();
    let oracle = half_plane_oracle(s);
    assert!(
        (mc.value - oracle).abs() < 3.0 * mc.stderr,
        "{} +- {} vs {oracle}",
        mc.value,
        mc.stderr
    );
}

#[test]
fn exterior_data_perimeter_limit() {
    let e0 = parse_set("diff(halfspace:nu=0,1;a=0,ball:c=0,0;R=1)").unwrap();
    let om = parse_set("ball:c=0,0;R=1").unwrap();
    let s = 0.01;
    let method = PerimeterMethod::MonteCarlo {
        samples: 200_000,
        stream: RngStream::new(3, 0),
    };
    let v = frac_perimeter(&e0, &om, s, &method, &QuadSpec::default()).unwrap();
    let target = PI * PI;
    assert!((s * v.value - target).abs() < 0.03 * target, "{}", s * v.value);
}

#[test]
fn mc_perimeter_is_deterministic() {
    let e = parse_set("halfspace:nu=0,1;a=0").unwrap();
    let om = parse_set("ball:c=0,0;R=1").unwrap();
    let m = PerimeterMethod::MonteCarlo {
        samples: 20_000,
        stream: RngStream::new(5, 2),
    };
    let a = frac_perimeter(&e, &om, 0.3, &m, &QuadSpec::default()).unwrap();
    let b = frac_perimeter(&e, &om, 0.3, &m, &QuadSpec::default()).unwrap();
    assert_eq!(a, b);
}

fn disk() -> (GeomSet, LocalGraph) {
    let e = parse_set("ball:c=0,0;R=1").unwrap();
    let g = LocalGraph::ball([0.0, 0.0], 1.0, [1.0, 0.0]).unwrap();
    (e, g)
}

#[test]
fn flat_boundary_has_zero_curvature() {
    let e = parse_set("halfspace:nu=0,1;a=0").unwrap();
    let q = CurvatureQuery::new(0.5, 0.5);
    for s in [0.2, 0.5, 0.8] {
        let v = frac_mean_curvature_supergraph(&presets::flat(), 0.3, s, &q).unwrap();
        assert!(v.value.abs() < 1e-8, "{}", v.value);
        let tb = TangentBall {
            center: vec![0.0, 1.0],
            radius: 1.0,
        };
        for rho in PV_GRID {
            let t = curvature_truncated(&e, &[0.0, 0.0], s, rho, &tb, &QuadSpec::new(1e-10, 1e-12)).unwrap();
            assert!(t.value.abs() < 1e-8 * rho.powf(-s) / s, "{}", t.value);
        }
    }
}

#[test]
fn disk_curvature_graph_formula() {
    let (e, g) = disk();
    let q = CurvatureQuery::for_radius(1.0);
    for s in [0.01, 0.1, 0.5, 0.9, 0.99] {
        let v = frac_mean_curvature_graph(&e, &g, s, &q).unwrap();
        let exact = disk_curvature(s);
        assert!((v.value - exact).abs() < 1e-7 * exact, "s={s}: {} vs {exact}", v.value);
    }
    let lo = frac_mean_curvature_graph(&e, &g, 0.01, &q).unwrap().value * 0.01;
    assert!((lo - 2.0 * PI).abs() < 0.02 * 2.0 * PI);
}

#[test]
fn disk_curvature_near_one_is_the_oracle_value() {
    // (1 - s) I_s at s = 0.99 is 2.048..., about 2.4% above its limit 2
    let (e, g) = disk();
    let v = frac_mean_curvature_graph(&e, &g, 0.99, &CurvatureQuery::for_radius(1.0)).unwrap();
    let scaled = 0.01 * v.value;
    assert!((scaled - 0.01 * disk_curvature(0.99)).abs() < 1e-7);
    assert!(scaled > 2.04 && scaled < 2.05);
    let v = frac_mean_curvature_graph(&e, &g, 0.999, &CurvatureQuery::for_radius(1.0)).unwrap();
    assert!((0.001 * v.value - 2.0).abs() < 0.006);
}

#[test]
fn principal_value_agrees_with_graph_formula() {
    let (e, g) = disk();
    let tb = TangentBall {
        center: vec![0.0, 0.0],
        radius: 1.0,
    };
    let spec = QuadSpec::new(1e-11, 1e-13);
    for s in [0.3, 0.5, 0.8] {
        let pv = frac_mean_curvature_pv(&e, &[1.0, 0.0], s, &tb, &PV_GRID, &spec).unwrap();
        let gr = frac_mean_curvature_graph(&e, &g, s, &CurvatureQuery::for_radius(1.0)).unwrap();
        assert!((pv.value - gr.value).abs() < 1e-4, "s={s}: {} vs {}", pv.value, gr.value);
    }
}

#[test]
fn dimple_curvature_changes_sign_once() {
    let e = presets::dimple();
    let tb = TangentBall {
        center: vec![2.0, 0.0],
        radius: 1.0,
    };
    let spec = QuadSpec::new(1e-10, 1e-12);
    let grid: Vec<f64> = (1..=19).map(|k| 0.05 * k as f64).collect();
    let scan = asymptotic_scan(&grid, |s| frac_mean_curvature_pv(&e, &[1.0, 0.0], s, &tb, &PV_GRID, &spec)).unwrap();
    assert!(scan.values[0].value > 0.0 && scan.values[1].value > 0.0);
    assert!(scan.values[17].value < 0.0 && scan.values[18].value < 0.0);
    assert_eq!(scan.sign_changes(), 1);
    // the graph formula sees the same value
    let g = LocalGraph::ball_exterior([2.0, 0.0], 1.0, [1.0, 0.0]).unwrap();
    let gr = frac_mean_curvature_graph(&e, &g, 0.5, &CurvatureQuery::for_radius(1.0)).unwrap();
    assert!((gr.value - scan.values[9].value).abs() < 1e-4);
}

#[test]
fn corner_has_no_plateau() {
    // the quarter plane at its vertex has no tangent ball
    let e = parse_set("cone2d:arcs=0,1.5707963267948966").unwrap();
    let tb = TangentBall {
        center: vec![-1.0, -1.0],
        radius: 1.0,
    };
    let r = frac_mean_curvature_pv(&e, &[0.0, 0.0], 0.5, &tb, &PV_GRID, &QuadSpec::new(1e-10, 1e-12));
    assert!(matches!(r, Err(Error::NoPlateau { .. })), "{r:?}");
}

#[test]
fn rough_graph_is_rejected() {
    let r = frac_mean_curvature_supergraph(&presets::sqrt_sublinear(), 0.0, 0.3, &CurvatureQuery::new(0.1, 0.5));
    assert!(matches!(r, Err(Error::Regularity(_))));
}

#[test]
fn disk_curvature_scan_is_smooth() {
    let (e, g) = disk();
    let grid: Vec<f64> = (1..=19).map(|k| 0.05 * k as f64).collect();
    let q = CurvatureQuery::for_radius(1.0);
    let scan = asymptotic_scan(&grid, |s| frac_mean_curvature_graph(&e, &g, s, &q)).unwrap();
    let v = scan.s_scaled();
    let d: Vec<f64> = v.windows(2).map(|w| w[1] - w[0]).collect();
    for i in 1..d.len() - 1 {
        let trend = 0.5 * (d[i - 1].abs() + d[i + 1].abs());
        assert!(d[i].abs() <= 5.0 * trend, "jump at {i}");
    }
    let lo = scan.s_scaled()[0];
    let hi = scan.one_minus_s_scaled()[18];
    assert!(lo > 0.0 && hi > 0.0);
}

#[test]
fn cone_alpha_is_its_opening() {
    let e = parse_set("cone2d:arcs=0.3,1.5").unwrap();
    for (k, s) in [0.01, 0.2, 0.7].into_iter().enumerate() {
        let r = alpha_estimate(&e, s, 200_000, &RngStream::new(21, k as u64)).unwrap();
        assert!((r.s_alpha - 1.2).abs() < 3.0 * r.stderr, "{r:?}");
        assert!(r.s_alpha >= 0.0 && r.s_alpha <= 2.0 * PI + 3.0 * r.stderr);
    }
}

#[test]
fn alpha_of_graph_presets() {
    let st = RngStream::new(7, 0);
    for name in ["cubic", "tanh"] {
        let e = parse_set(&format!("graph:{name}")).unwrap();
        let r = alpha_estimate(&e, 0.01, 1_000_000, &st).unwrap();
        assert!((r.s_alpha - PI).abs() < 3.0 * r.stderr, "{name}: {r:?}");
    }
    // the band above and below sqrt|y1| decays like r^{-1/2}, so the raw
    // value sits about s / (s + 1/2) below the limit
    let e = parse_set("graph:sqrt-sublinear").unwrap();
    let r = alpha_estimate(&e, 0.01, 1_000_000, &st).unwrap();
    assert!(r.s_alpha < PI);
    let x = r.extrapolated.unwrap();
    assert!((x.value - PI).abs() < 3.0 * x.stderr, "{r:?}");
}

/// s alpha_s(0, 1, parabola) = int_0^1 m(U^{-1/s}) dU with m(r) the angle
/// of the circle of radius r inside {y2 > y1^2}.
fn parabola_alpha(s: f64) -> f64 {
    let m = |r: f64| {
        let sig = (-1.0 + (1.0 + 4.0 * r * r).sqrt()) / (2.0 * r);
        PI - 2.0 * sig.min(1.0).asin()
    };
    integrate_with_breaks(
        |u: f64| m((-u.ln() / s).exp().min(1e300)),
        0.0,
        1.0,
        &[0.5, 0.9, 0.99],
        &QuadSpec::new(1e-10, 1e-12),
    )
    .unwrap()
    .value
}

#[test]
fn parabola_alpha_and_extrapolation() {
    let e = parse_set("graph:parabola").unwrap();
    let r = alpha_estimate(&e, 0.01, 1_000_000, &RngStream::new(9, 0)).unwrap();
    let exact = parabola_alpha(0.01);
    assert!((r.s_alpha - exact).abs() < 3.0 * r.stderr + 1e-12, "{r:?} vs {exact}");
    let x = r.extrapolated.unwrap();
    assert!(x.value.abs() < 0.02, "{x:?}");
    assert!(r.alpha_underbar.unwrap() <= r.alpha_bar.unwrap());
}

#[test]
fn candy_alpha_vanishes_in_the_limit() {
    let e = presets::candy();
    let r = alpha_estimate(&e, 0.01, 1_000_000, &RngStream::new(13, 0)).unwrap();
    // the raw value carries a sqrt-width band at finite s
    assert!(r.s_alpha < 0.2);
    assert!(r.extrapolated.unwrap().value.abs() < 0.02);
}

#[test]
fn alpha_structure_per_sample() {
    let e = parse_set("graph:cubic").unwrap();
    let ce = e.clone().complement();
    let st = RngStream::new(1, 4);
    let a = alpha_estimate(&e, 0.05, 100_000, &st).unwrap();
    let b = alpha_estimate(&ce, 0.05, 100_000, &st).unwrap();
    assert!((a.s_alpha + b.s_alpha - 2.0 * PI).abs() < 1e-12);

    // monotonicity and additivity for nested / disjoint cones
    let small = parse_set("cone2d:arcs=0,0.5").unwrap();
    let big = parse_set("cone2d:arcs=-0.2,1").unwrap();
    let other = parse_set("cone2d:arcs=2,3").unwrap();
    let both = GeomSet::union(small.clone(), other.clone()).unwrap();
    let f = |e: &GeomSet| alpha_estimate(e, 0.3, 50_000, &st).unwrap().s_alpha;
    assert!(f(&small) <= f(&big));
    assert!((f(&both) - f(&small) - f(&other)).abs() < 1e-12);

    let sampler = AlphaSampler {
        e: &small,
        s: 0.3,
        q: vec![0.0, 0.0],
        r: 1.0,
    };
    let mut c = st.cursor();
    for _ in 0..10_000 {
        let y = sampler.point(&mut c);
        assert!(!small.contains(&y) || big.contains(&y));
        assert_eq!(both.contains(&y), small.contains(&y) || other.contains(&y));
        assert_ne!(e.contains(&y), ce.contains(&y));
    }
}

#[test]
fn alpha_scaling_identity() {
    let e = parse_set("graph:parabola").unwrap();
    let lambda = 3.0;
    let s = 0.2;
    let st = RngStream::new(2, 2);
    let scaled = e.clone().scaled(lambda).unwrap();
    let a = alpha_estimate_at(&scaled, &[0.0, 0.0], 1.0, s, 100_000, &st).unwrap();
    let b = alpha_estimate_at(&e, &[0.0, 0.0], 1.0 / lambda, s, 100_000, &st).unwrap();
    assert!((a.value - lambda.powf(-s) * b.value).abs() < 1e-12 * a.value.abs().max(1.0));
}

#[test]
fn alpha_rotation_invariance() {
    let e = parse_set("graph:cubic").unwrap();
    let rot = e.clone().rotated(0.7).unwrap();
    let a = alpha_estimate(&e, 0.1, 400_000, &RngStream::new(31, 0)).unwrap();
    let b = alpha_estimate(&rot, 0.1, 400_000, &RngStream::new(31, 1)).unwrap();
    let sd = (a.stderr.powi(2) + b.stderr.powi(2)).sqrt();
    assert!((a.s_alpha - b.s_alpha).abs() < 3.0 * sd);
}

#[test]
fn alpha_stabilizes_for_the_cone() {
    let e = parse_set("cone2d:arcs=0.3,1.5").unwrap();
    let st = RngStream::new(17, 0);
    let mut gaps = Vec::new();
    for s in [0.3, 0.1, 0.03, 0.01] {
        let far = alpha_estimate_at(&e, &[1.0, 1.0], 2.0, s, 400_000, &st).unwrap();
        let base = alpha_estimate_at(&e, &[0.0, 0.0], 1.0, s, 400_000, &st).unwrap();
        gaps.push((far.value - base.value).abs());
    }
    assert!(gaps.windows(2).all(|w| w[1] < w[0]), "{gaps:?}");
}

#[test]
fn stickiness_threshold_values() {
    for s in [0.1, 0.5, 0.9] {
        let d = stickiness_threshold(0.0, 2, s).unwrap();
        assert!((d - (5.0f64 / 6.0).powf(1.0 / s)).abs() < 1e-15);
    }
    let p = StickinessParams::new(PI - 1e-12, 2).unwrap();
    assert!((p.delta(0.5).unwrap() - 1.0).abs() < 1e-9);
    let p = StickinessParams::new(0.4, 2).unwrap();
    let ds: Vec<f64> = [0.01, 0.05, 0.1, 0.3, 0.6, 0.9].iter().map(|&s| p.delta(s).unwrap()).collect();
    assert!(ds.windows(2).all(|w| w[0] < w[1]));
    assert!(ds[0] < 1e-5 && ds.iter().all(|d| *d > 0.0 && *d < 1.0));
    assert!(stickiness_threshold(PI, 2, 0.5).is_err());
}

#[test]
fn coarea_cases() {
    let om = parse_set("intervals:0,1").unwrap();
    let spec = QuadSpec::new(1e-9, 1e-11);
    let (l, r) = coarea_check(&fields::constant(1, 0.4), &om, 0.5, &spec).unwrap();
    assert_eq!((l.value, r.value), (0.0, 0.0));

    let u = nonlocal_core::ScalarField::new(1, |x| x[0]);
    for s in [0.3, 0.5, 0.7] {
        let (l, r) = coarea_check(&u, &om, s, &spec).unwrap();
        let exact = 1.0 / ((1.0 - s) * (2.0 - s));
        assert!((l.value - exact).abs() < 1e-6, "lhs {s}: {} vs {exact}", l.value);
        assert!((r.value - exact).abs() < 1e-6, "rhs {s}: {} vs {exact}", r.value);
    }

    let chi = fields::indicator(&[(0.25, 0.6)]);
    let (l, r) = coarea_check(&chi, &om, 0.5, &spec).unwrap();
    let e = iu(&[(0.25, 0.6)]);
    let exact = interaction_1d(&e, &iu(&[(0.0, 1.0)]).difference(&e), 0.5).unwrap();
    assert!((l.value - exact).abs() < 1e-4 * exact, "{} vs {exact}", l.value);
    assert!((r.value - exact).abs() < 1e-9 * exact);
}
