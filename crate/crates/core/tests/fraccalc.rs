use std::f64::consts::PI;

use nonlocal_core::fraccalc::*;
use nonlocal_core::specfun::gamma;
use nonlocal_core::QuadSpec;

fn ramp_solution(x: f64) -> f64 {
    2.0 / PI * (x * (1.0 / x.sqrt()).asin() - (x - 1.0).sqrt())
}

fn well_solution(x: f64) -> f64 {
    let q = 96.0 * x * x - 144.0 * x;
    (27.0 * PI + (x - 1.0).sqrt() * (-48.0 * x + 52.0) + (1.0 / x.sqrt()).asin() * q
        - (1.0 / (4.0 * x - 3.0).sqrt()).asin() * (q + 54.0))
        / (27.0 * PI)
}

#[test]
fn well_extension_matches_closed_form() {
    let spec = QuadSpec::new(1e-11, 1e-13);
    let w = presets::quadratic_well();
    for &x in &[1.25, 2.0, 3.5] {
        let v = caputo_extend(&w, 0.0, 1.0, 0.5, x, &spec).unwrap();
        assert!((v.value - well_solution(x)).abs() < 1e-9, "x={x}: {} vs {}", v.value, well_solution(x));
    }
    let near = caputo_extend(&w, 0.0, 1.0, 0.5, 1.0 + 1e-10, &spec).unwrap().value;
    assert!(near.abs() < 1e-4 && near > 0.0, "{near}");
}

#[test]
fn constant_history_stays_constant() {
    let spec = QuadSpec::default();
    let c = CausalFunction::new(0.0, |_| 2.5).with_derivative(|_| 0.0);
    for &x in &[1.1, 3.0] {
        let v = caputo_extend(&c, 0.0, 1.0, 0.3, x, &spec).unwrap().value;
        assert!((v - 2.5).abs() < 1e-14);
    }
}

#[test]
fn closed_form_solution_is_caputo_stationary() {
    let spec = QuadSpec::new(1e-10, 1e-12);
    let u = CausalFunction::new(0.0, |x| if x <= 1.0 { x } else { ramp_solution(x) })
        .with_derivative(|x| {
            if x <= 1.0 {
                1.0
            } else {
                2.0 / PI * ((1.0 / x.sqrt()).asin() - 1.0 / (x - 1.0).sqrt())
            }
        })
        .with_break(1.0, -0.5);
    let d = caputo_derivative(&u, 0.5, 2.0, &spec).unwrap().value;
    assert!(d.abs() < 1e-6, "{d}");
}

fn round_trip(phi: CausalFunction, s: f64, x: f64) -> f64 {
    let u = CaputoExtension::new(phi, 0.0, 1.0, s, QuadSpec::new(1e-9, 1e-11))
        .unwrap()
        .into_function();
    caputo_derivative(&u, s, x, &QuadSpec::new(1e-9, 1e-10)).unwrap().value
}

#[test]
fn representation_round_trip() {
    let r = round_trip(presets::ramp(), 0.5, 2.0);
    assert!(r.abs() < 1e-6, "ramp {r}");
    let r = round_trip(presets::quadratic_well(), 0.5, 1.7);
    assert!(r.abs() < 1e-6, "well {r}");
    // a generic smooth history with a kink at the initial point
    let (c1, c2, c3) = (0.7, -0.4, 2.3);
    let phi = CausalFunction::new(0.0, move |t| 1.0 + c1 * t + c2 * (c3 * t).sin())
        .with_derivative(move |t| c1 + c2 * c3 * (c3 * t).cos());
    let r = round_trip(phi, 0.35, 1.6);
    assert!(r.abs() < 1e-6, "generic {r}");
}

#[test]
fn sequence_converges_to_power() {
    let spec = QuadSpec::new(1e-11, 1e-13);
    let p = CaputoSequenceParams::new(presets::quadratic_well(), 0.5, 4, &spec).unwrap();
    // g(1)/s by direct quadrature of -2 int_0^{3/4} (32/9)(t - 3/4)(1 - t)^{-1/2} dt
    assert!((p.kappa * PI - 64.0 / 27.0).abs() < 1e-10, "{}", p.kappa);
    let xs: Vec<f64> = (0..=15).map(|i| 0.5 + 0.1 * i as f64).collect();
    let mut sup = Vec::new();
    for &j in &[4u32, 16, 64] {
        let q = p.with_index(j);
        let e = xs
            .iter()
            .map(|&x| (caputo_sequence(&q, x, &spec).unwrap() - q.kappa * x.sqrt()).abs())
            .fold(0.0f64, f64::max);
        sup.push(e);
    }
    assert!(sup[0] > sup[1] && sup[1] > sup[2], "{sup:?}");
    assert!(sup[2] < 0.02, "{sup:?}");
}

#[test]
fn caputo_order_limits() {
    let spec = QuadSpec::new(1e-11, 1e-13);
    let u = CausalFunction::new(0.0, |t| t.sin()).with_derivative(|t| t.cos());
    let d = |s: f64| caputo_derivative(&u, s, 1.0, &spec).unwrap().value;
    let lo: Vec<f64> = [0.05, 0.02].iter().map(|&s| (d(s) - 1f64.sin()).abs()).collect();
    let hi: Vec<f64> = [0.95, 0.98].iter().map(|&s| (d(s) - 1f64.cos()).abs()).collect();
    assert!(lo[1] < lo[0] && lo[1] < 0.05, "{lo:?}");
    assert!(hi[1] < hi[0] && hi[1] < 0.05, "{hi:?}");
}

#[test]
fn kernel_has_unit_mass() {
    let spec = QuadSpec::new(1e-13, 1e-15);
    for &x in &[0.1, 1.0, 10.0] {
        for &s in &[0.25, 0.5, 0.75] {
            let m = extension_kernel_mass(s, x, &spec).unwrap().value;
            assert!((m - 1.0).abs() < 1e-10, "x={x} s={s}: {m}");
        }
    }
}

#[test]
fn extension_of_constant_and_boundary_limit() {
    let spec = QuadSpec::new(1e-11, 1e-13);
    let c = CausalFunction::global(|_| 1.7).with_bound(1.7);
    let ext = MarchaudExtension::new(c, 0.4).unwrap();
    for &(x, t) in &[(0.1, 0.0), (2.0, -3.0)] {
        assert!((marchaud_extend(&ext, x, t, &spec).unwrap().value - 1.7).abs() < 1e-12);
    }
    // U - phi is of order x^{2s}
    for &(s, x) in &[(0.3, 1e-6), (0.5, 1e-3), (0.7, 1e-3)] {
        let ext = MarchaudExtension::new(presets::cosine(), s).unwrap();
        let v = marchaud_extend(&ext, x, 0.4, &spec).unwrap().value;
        assert!((v - 0.4f64.cos()).abs() < 1e-3, "s={s}: {v}");
    }
}

#[test]
fn extension_solves_degenerate_heat_equation() {
    let spec = QuadSpec::new(1e-13, 1e-14);
    for &s in &[0.3, 0.5, 0.8] {
        let ext = MarchaudExtension::new(presets::cosine(), s).unwrap();
        let u = |x: f64, t: f64| marchaud_extend(&ext, x, t, &spec).unwrap().value;
        let (x, t, h) = (0.5, 0.0, 1e-3);
        let ut = (u(x, t + h) - u(x, t - h)) / (2.0 * h);
        let ux = (u(x + h, t) - u(x - h, t)) / (2.0 * h);
        let uxx = (u(x + h, t) - 2.0 * u(x, t) + u(x - h, t)) / (h * h);
        let res = ut - (1.0 - 2.0 * s) / x * ux - uxx;
        assert!(res.abs() < 1e-5, "s={s}: residual {res}");
    }
}

#[test]
fn trace_recovers_marchaud_derivative() {
    let spec = QuadSpec::new(1e-11, 1e-13);
    for &s in &[0.3, 0.5, 0.7] {
        let ext = MarchaudExtension::new(presets::cosine(), s).unwrap();
        let tr = marchaud_trace(&ext, 0.3, &TRACE_GRID, &spec).unwrap();
        let direct = marchaud_derivative(&presets::cosine(), s, 0.3, false, &spec).unwrap();
        assert!((tr.value - direct.value).abs() < 1e-3, "s={s}: {} vs {}", tr.value, direct.value);
    }
    let c = CausalFunction::global(|_| -2.0).with_bound(2.0);
    let ext = MarchaudExtension::new(c, 0.5).unwrap();
    for v in trace_samples(&ext, 1.0, &TRACE_GRID, &spec).unwrap() {
        assert!(v.abs() < 1e-12);
    }
}

#[test]
fn right_sided_extension() {
    let spec = QuadSpec::new(1e-11, 1e-13);
    let s = 0.5;
    // a non-symmetric datum so that left and right differ
    let phi = CausalFunction::global(|t| (t + 0.3).sin() + 0.5 * (2.0 * t).cos())
        .with_bound(1.5)
        .with_period(2.0 * PI);
    let back = MarchaudExtension::backward(phi.clone(), s).unwrap();
    let fwd_reflected = MarchaudExtension::new(phi.reflect(), s).unwrap();
    for &(x, t) in &[(0.3, 0.2), (1.2, -0.7)] {
        let a = marchaud_extend(&back, x, t, &spec).unwrap().value;
        let b = marchaud_extend(&fwd_reflected, x, -t, &spec).unwrap().value;
        assert!((a - b).abs() < 1e-10, "{a} vs {b}");
    }
    let tr = marchaud_trace(&back, 0.2, &TRACE_GRID, &spec).unwrap().value;
    let direct = marchaud_derivative_sided(&phi, s, 0.2, Side::Right, false, &spec).unwrap().value;
    let left = marchaud_derivative(&phi, s, 0.2, false, &spec).unwrap().value;
    assert!((tr - direct).abs() < 1e-3, "{tr} vs {direct}");
    assert!((direct - left).abs() > 0.1);
}

#[test]
fn normalized_composition_gives_derivative() {
    let spec = QuadSpec::new(1e-7, 1e-9);
    let inner = QuadSpec::new(1e-10, 1e-12);
    for &s in &[0.3, 0.5, 0.7] {
        let first = CausalFunction::global(move |t| {
            marchaud_derivative(&presets::cosine(), s, t, true, &inner).map_or(f64::NAN, |e| e.value)
        })
        .with_bound(1.0)
        .with_period(2.0 * PI);
        let t = 0.4;
        let v = marchaud_derivative(&first, 1.0 - s, t, true, &spec).unwrap().value;
        assert!((v + t.sin()).abs() < 1e-3, "s={s}: {v}");
    }
}

#[test]
fn unnormalized_composition_factor() {
    let spec = QuadSpec::new(1e-10, 1e-12);
    let inner = QuadSpec::new(1e-12, 1e-14);
    let s = 0.4;
    let first = CausalFunction::global(move |t| {
        marchaud_derivative(&presets::exponential(1.0), s, t, false, &inner).map_or(f64::NAN, |e| e.value)
    });
    let v = marchaud_derivative(&first, 1.0 - s, 0.0, false, &spec).unwrap().value;
    let factor = gamma(s).unwrap() * gamma(1.0 - s).unwrap() / (s * (1.0 - s));
    assert!((v - factor).abs() < 1e-6 * factor, "{v} vs {factor}");
}

#[test]
fn marchaud_rejects_rough_data() {
    let spec = QuadSpec::default();
    let phi = CausalFunction::global(|t: f64| t.abs().sqrt().min(1.0)).with_holder(0.5);
    assert!(matches!(
        marchaud_derivative(&phi, 0.6, 0.0, false, &spec),
        Err(nonlocal_core::Error::Integrability(_))
    ));
    assert!(MarchaudExtension::new(phi, 0.5).is_err());
}
