use std::f64::consts::PI;

use proptest::prelude::*;

use nonlocal_core::balls::BallGeometry;
use nonlocal_core::dynamics::{velocity, DislocationState, Stress};
use nonlocal_core::field::presets;
use nonlocal_core::geometry::{interaction_1d, parse_set, IntervalUnion};
use nonlocal_core::rng::RngStream;
use nonlocal_core::specfun::{beta, gamma};
use nonlocal_core::stats::Moments;
use nonlocal_core::walk::WalkConfig;
use nonlocal_core::FracParams;

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs().max(1e-300)
}

/// Sorted, disjoint, bounded intervals.
fn intervals() -> impl Strategy<Value = Vec<(f64, f64)>> {
    prop::collection::vec((0.05f64..1.0, 0.05f64..1.0), 1..4).prop_map(|steps| {
        let mut x = -2.0;
        steps
            .into_iter()
            .map(|(gap, len)| {
                x += gap;
                let a = x;
                x += len;
                (a, x)
            })
            .collect()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn gamma_reflection_and_duplication(x in 0.01f64..0.99) {
        let refl = gamma(x).unwrap() * gamma(1.0 - x).unwrap();
        prop_assert!(rel(refl, PI / (PI * x).sin()) < 1e-12);
        let dup = gamma(x).unwrap() * gamma(x + 0.5).unwrap();
        let other = 2f64.powf(1.0 - 2.0 * x) * PI.sqrt() * gamma(2.0 * x).unwrap();
        prop_assert!(rel(dup, other) < 1e-12);
        prop_assert!(rel(beta(x, 1.0 - x).unwrap(), PI / (PI * x).sin()) < 1e-12);
    }

    #[test]
    fn moments_merge_in_any_split(xs in prop::collection::vec(-1e3f64..1e3, 2..200), cut in 0usize..200) {
        let cut = cut % xs.len();
        let mut whole = Moments::default();
        xs.iter().for_each(|&x| whole.push(x));
        let (mut a, mut b) = (Moments::default(), Moments::default());
        xs[..cut].iter().for_each(|&x| a.push(x));
        xs[cut..].iter().for_each(|&x| b.push(x));
        let m = a.merge(&b);
        prop_assert_eq!(m.n, whole.n);
        prop_assert!((m.mean - whole.mean).abs() < 1e-9 * (1.0 + whole.mean.abs()));
        prop_assert!((m.m2 - whole.m2).abs() < 1e-8 * (1.0 + whole.m2));
    }

    #[test]
    fn substreams_are_reproducible(seed in any::<u64>(), id in any::<u64>(), i in 0u64..1000) {
        let a = RngStream::new(seed, id).split(i).cursor().next_u64();
        let b = RngStream::new(seed, id).split(i).cursor().next_u64();
        prop_assert_eq!(a, b);
    }

    #[test]
    fn interval_algebra(a in intervals(), b in intervals()) {
        let (a, b) = (IntervalUnion::new(&a), IntervalUnion::new(&b));
        prop_assert_eq!(a.complement().complement(), a.clone());
        let lhs = a.union(&b).measure() + a.intersect(&b).measure();
        prop_assert!((lhs - a.measure() - b.measure()).abs() < 1e-12);
        prop_assert!((a.difference(&b).measure() + a.intersect(&b).measure() - a.measure()).abs() < 1e-12);
    }

    #[test]
    fn interaction_symmetry_and_scaling(a in intervals(), s in 0.05f64..0.95, lambda in 0.2f64..5.0, shift in -3f64..3.0) {
        let ea = IntervalUnion::new(&a);
        let eb = IntervalUnion::new(&[(-2.0, 2.5)]).difference(&ea);
        prop_assume!(!eb.is_empty());
        let ab = interaction_1d(&ea, &eb, s).unwrap();
        let ba = interaction_1d(&eb, &ea, s).unwrap();
        prop_assert!(rel(ab, ba) < 1e-10);
        let map = |u: &IntervalUnion| {
            let parts: Vec<(f64, f64)> = u.parts().iter().map(|&(x, y)| (lambda * x + shift, lambda * y + shift)).collect();
            IntervalUnion::new(&parts)
        };
        let scaled = interaction_1d(&map(&ea), &map(&eb), s).unwrap();
        prop_assert!(rel(scaled, lambda.powf(1.0 - s) * ab) < 1e-9);
        prop_assert!(ab > 0.0);
    }

    #[test]
    fn rays_agree_with_membership(
        ox in -2f64..2.0, oy in -2f64..2.0, th in 0f64..6.283, t in 0.01f64..8.0,
        which in 0usize..5,
    ) {
        let desc = ["ball:c=0.3,0;R=1", "graph:cubic", "graph:tanh", "preset:dimple", "diff(halfspace:nu=0,1;a=0,ball:c=0,0;R=1)"][which];
        let e = parse_set(desc).unwrap();
        let x = [ox, oy];
        let d = [th.cos(), th.sin()];
        let iv = e.ray_intervals(&x, &d);
        let y = [ox + t * d[0], oy + t * d[1]];
        // skip points within rounding of a crossing
        let near = iv.parts().iter().any(|&(a, b)| (a - t).abs() < 1e-9 || (b - t).abs() < 1e-9);
        prop_assume!(!near);
        prop_assert_eq!(iv.contains(t), e.contains(&y), "{} at t={}", desc, t);
        let ce = e.clone().complement();
        prop_assert_ne!(e.contains(&y), ce.contains(&y));
    }

    #[test]
    fn pair_forces_cancel(
        gaps in prop::collection::vec(0.05f64..2.0, 1..6),
        signs in prop::collection::vec(any::<bool>(), 6),
        s in 0.05f64..0.95, g in 0.1f64..3.0, shift in -5f64..5.0,
    ) {
        let mut x = vec![0.0];
        for gp in &gaps {
            x.push(x.last().unwrap() + gp);
        }
        let xi: Vec<i8> = x.iter().zip(&signs).map(|(_, &b)| if b { 1 } else { -1 }).collect();
        let st = DislocationState::new(x.clone(), xi.clone(), s, g, Stress::Zero).unwrap();
        let v = velocity(&st).unwrap();
        let scale: f64 = v.iter().map(|a| a.abs()).sum();
        prop_assert!(v.iter().sum::<f64>().abs() < 1e-12 * (1.0 + scale));
        let moved = DislocationState::new(x.iter().map(|a| a + shift).collect(), xi, s, g, Stress::Zero).unwrap();
        let w = velocity(&moved).unwrap();
        for (a, b) in v.iter().zip(&w) {
            prop_assert!((a - b).abs() < 1e-9 * (1.0 + a.abs()));
        }
    }

    #[test]
    fn jump_law_is_normalized(s in 0.02f64..0.98, h in 1e-3f64..1.0) {
        let p = FracParams::new(1, s).unwrap();
        let cfg = WalkConfig::new(p, h, BallGeometry::new(1.0, p).unwrap(), presets::constant(1, 1.0).with_support(10.0)).unwrap();
        prop_assert!((cfg.normalization() - 1.0).abs() < 1e-12);
        prop_assert_eq!(cfg.tau, h.powf(2.0 * s));
    }
}
