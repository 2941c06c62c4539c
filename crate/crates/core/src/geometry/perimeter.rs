//! Fractional perimeter relative to a domain, and the 1D coarea identity.

use alloc::vec;
use alloc::vec::Vec;

use super::intervals::{interaction_1d, IntervalUnion};
use super::set::GeomSet;
use crate::field::ScalarField;
use crate::quad::{integrate_1d, integrate_singular, Piece, Weight};
use crate::rng::{Cursor, RngStream};
use crate::specfun::omega;
use crate::stats::{sequential, Runner, Sampler};
use crate::{check_order, Error, Estimate, QuadSpec, Result};
#[allow(unused_imports)]
use crate::prelude::*;

#[derive(Clone, Debug)]
pub enum PerimeterMethod {
    /// Exact interval interactions, n = 1.
    ClosedForm1d,
    /// Uniform points of the domain and uniform directions, with the radial
    /// kernel integrated exactly along each ray.
    MonteCarlo { samples: u64, stream: RngStream },
}

/// int over the intervals of t^{-1-s} dt.
pub(crate) fn radial_mass(iv: &IntervalUnion, s: f64) -> f64 {
    iv.parts()
        .iter()
        .map(|&(a, b)| {
            let hi = if b.is_finite() { b.powf(-s) } else { 0.0 };
            (a.powf(-s) - hi) / s
        })
        .sum()
}

/// Per_s(E, Omega) = I(E n Omega, CE) + I(E \ Omega, Omega \ E).
pub fn frac_perimeter(
    e: &GeomSet,
    omega_set: &GeomSet,
    s: f64,
    method: &PerimeterMethod,
    spec: &QuadSpec,
) -> Result<Estimate> {
    frac_perimeter_with(e, omega_set, s, method, spec, &sequential)
}

pub fn frac_perimeter_with(
    e: &GeomSet,
    omega_set: &GeomSet,
    s: f64,
    method: &PerimeterMethod,
    _spec: &QuadSpec,
    run: Runner,
) -> Result<Estimate> {
    check_order(s)?;
    if e.n != omega_set.n {
        return Err(Error::Domain("set and domain live in different dimensions"));
    }
    match method {
        PerimeterMethod::ClosedForm1d => {
            let ei = e.as_intervals()?;
            let oi = omega_set.as_intervals()?;
            if !oi.is_bounded() {
                return Err(Error::Domain("the domain must be bounded"));
            }
            let first = interaction_1d(&ei.intersect(&oi), &ei.complement(), s)?;
            let second = interaction_1d(&ei.difference(&oi), &oi.difference(&ei), s)?;
            Ok(Estimate::exact(first + second))
        }
        PerimeterMethod::MonteCarlo { samples, stream } => {
            let sampler = PerimeterSampler::new(e, omega_set, s)?;
            let mut est = run(&sampler, stream, *samples).estimate();
            est.converged = est.value.is_finite();
            Ok(est)
        }
    }
}

/// Unbiased single-sample estimator of Per_s(E, Omega) for n >= 2.
pub struct PerimeterSampler<'a> {
    e: &'a GeomSet,
    omega_set: &'a GeomSet,
    s: f64,
    center: Vec<f64>,
    radius: f64,
    /// |bounding ball| * |S^{n-1}|
    factor: f64,
}

impl<'a> PerimeterSampler<'a> {
    pub fn new(e: &'a GeomSet, omega_set: &'a GeomSet, s: f64) -> Result<Self> {
        check_order(s)?;
        let (center, radius) = omega_set
            .bounding_ball()
            .ok_or(Error::Domain("the domain must be bounded"))?;
        let n = omega_set.n;
        let vol = omega(n) / n as f64 * radius.powi(n as i32);
        Ok(PerimeterSampler {
            e,
            omega_set,
            s,
            center,
            radius,
            factor: vol * omega(n),
        })
    }
}

impl Sampler for PerimeterSampler<'_> {
    fn sample(&self, c: &mut Cursor) -> f64 {
        let n = self.center.len();
        let mut x = vec![0.0; n];
        c.unit_vector(&mut x);
        let r = self.radius * c.uniform().powf(1.0 / n as f64);
        for i in 0..n {
            x[i] = self.center[i] + r * x[i];
        }
        let mut d = vec![0.0; n];
        c.unit_vector(&mut d);
        if !self.omega_set.contains(&x) {
            return 0.0;
        }
        let ei = self.e.ray_intervals(&x, &d);
        let target = if self.e.contains(&x) {
            IntervalUnion::new(&[(0.0, f64::INFINITY)]).difference(&ei)
        } else {
            ei.difference(&self.omega_set.ray_intervals(&x, &d))
        };
        self.factor * radial_mass(&target, self.s)
    }
}

/// Both sides of the generalized coarea formula on an interval Omega, n = 1:
/// (1/2) int_Omega int_Omega |u(x) - u(y)| |x - y|^{-1-s} and
/// int_0^1 I({u > t} n Omega, {u <= t} n Omega) dt.
pub fn coarea_check(
    u: &ScalarField,
    omega_set: &GeomSet,
    s: f64,
    spec: &QuadSpec,
) -> Result<(Estimate, Estimate)> {
    check_order(s)?;
    if u.dim != 1 {
        return Err(Error::UnsupportedDimension(u.dim));
    }
    let oi = omega_set.as_intervals()?;
    if oi.parts().len() != 1 || !oi.is_bounded() {
        return Err(Error::Domain("coarea check needs a single bounded interval"));
    }
    let (a, b) = oi.parts()[0];
    let mut jumps = Vec::new();
    let mut breaks = Vec::new();
    for k in &u.kinks {
        for p in [k.center[0] - k.radius, k.center[0] + k.radius] {
            if a < p && p < b {
                breaks.push(p);
                if k.exponent == 0.0 {
                    jumps.push(p);
                }
            }
        }
    }
    breaks.sort_by(|x, y| x.partial_cmp(y).unwrap());
    breaks.dedup();

    let inner_spec = spec.scaled(1e-2);
    let mut failure = None;
    let mut inner_ok = true;
    let outer = |x: f64| -> f64 {
        let ux = u.eval1(x);
        let mut pts: Vec<f64> = breaks.iter().copied().filter(|&p| p != x).collect();
        pts.push(x);
        pts.sort_by(|p, q| p.partial_cmp(q).unwrap());
        let mut pieces = Vec::with_capacity(pts.len() + 1);
        let mut lo = a;
        for &p in pts.iter().chain(core::iter::once(&b)) {
            if p > lo {
                let left = if lo == x { -s } else { 0.0 };
                let right = if p == x { -s } else { 0.0 };
                pieces.push(Piece::new(lo, p, left, right));
            }
            lo = p;
        }
        let f = |y: f64| (ux - u.eval1(y)).abs() * (x - y).abs().powf(-1.0 - s);
        match integrate_singular(f, &pieces, &inner_spec) {
            Ok(e) => {
                inner_ok &= e.converged;
                e.value
            }
            Err(err) => {
                failure.get_or_insert(err);
                0.0
            }
        }
    };
    let mut pieces = Vec::new();
    let mut lo = a;
    for &p in breaks.iter().chain(core::iter::once(&b)) {
        let left = if jumps.contains(&lo) { -s } else { 0.0 };
        let right = if jumps.contains(&p) { -s } else { 0.0 };
        pieces.push(Piece::new(lo, p, left, right));
        lo = p;
    }
    // the outer integrand is |x - p|^{-s} near a jump p, hence the weights
    let lhs = integrate_singular(outer, &pieces, spec)?.scale(0.5);
    if let Some(err) = failure {
        return Err(err);
    }
    let lhs = Estimate {
        converged: lhs.converged && inner_ok,
        ..lhs
    };

    let mut level_failure = None;
    let rhs = integrate_1d(
        |t| {
            let above = level_set(u, a, b, t);
            let below = oi.difference(&above);
            match interaction_1d(&above, &below, s) {
                Ok(v) => v,
                Err(e) => {
                    level_failure.get_or_insert(e);
                    0.0
                }
            }
        },
        0.0,
        1.0,
        Weight::None,
        spec,
    )?;
    if let Some(err) = level_failure {
        return Err(err);
    }
    Ok((lhs, rhs))
}

/// {x in (a, b) : u(x) > t}, located on a grid and refined by bisection.
fn level_set(u: &ScalarField, a: f64, b: f64, t: f64) -> IntervalUnion {
    const GRID: usize = 2048;
    let h = |x: f64| u.eval1(x) - t;
    let mut grid: Vec<f64> = (0..=GRID).map(|k| a + (b - a) * k as f64 / GRID as f64).collect();
    for k in &u.kinks {
        for p in [k.center[0] - k.radius, k.center[0] + k.radius] {
            if a < p && p < b {
                grid.push(p);
            }
        }
    }
    grid.sort_by(|p, q| p.partial_cmp(q).unwrap());
    grid.dedup();
    // the ends are nudged inside so a jump exactly at a or b is not sampled
    let eps = 1e-13 * (b - a);
    let last = grid.len() - 1;
    grid[0] = a + eps;
    grid[last] = b - eps;
    let mut parts = Vec::new();
    let mut start = if h(grid[0]) > 0.0 { Some(a) } else { None };
    for w in grid.windows(2) {
        let (x0, x1) = (w[0], w[1]);
        let (h0, h1) = (h(x0), h(x1));
        if (h0 > 0.0) == (h1 > 0.0) {
            continue;
        }
        let (mut lo, mut hi) = (x0, x1);
        for _ in 0..100 {
            let mid = 0.5 * (lo + hi);
            if mid <= lo || mid >= hi {
                break;
            }
            if (h(mid) > 0.0) == (h0 > 0.0) {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        let root = 0.5 * (lo + hi);
        match start.take() {
            Some(st) => parts.push((st, root)),
            None => start = Some(root),
        }
    }
    if let Some(st) = start {
        parts.push((st, b));
    }
    IntervalUnion::new(&parts)
}
