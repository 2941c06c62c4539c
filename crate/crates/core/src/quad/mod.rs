//! Adaptive quadrature with algebraic endpoint weights.
//!
//! The workhorse is [`integrate_pieces`]: a global adaptive bisection over a
//! list of panels, each carrying the exponents of its endpoint singularities.
//! Subintervals touching a singular endpoint use Gauss-Jacobi nodes for that
//! exponent; everything else uses the 21-point Gauss-Kronrod pair.

mod nd;
mod rules;

pub use nd::{integrate_nd, polar, Region};
pub use rules::{gauss_jacobi, gauss_laguerre, gauss_legendre, GaussRule};

use alloc::collections::BinaryHeap;
use alloc::vec::Vec;
use core::cmp::Ordering;

use crate::{Error, Result};
#[allow(unused_imports)]
use crate::prelude::*;

/// Tolerances and budget for deterministic quadrature.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct QuadSpec {
    pub rel_tol: f64,
    pub abs_tol: f64,
    pub max_subdivisions: usize,
    /// Outer cutoff for infinite domains when no analytic tail is available.
    pub truncation_radius: f64,
}

impl Default for QuadSpec {
    fn default() -> Self {
        QuadSpec {
            rel_tol: 1e-8,
            abs_tol: 1e-10,
            max_subdivisions: 2000,
            truncation_radius: 1e3,
        }
    }
}

impl QuadSpec {
    pub fn new(rel_tol: f64, abs_tol: f64) -> Self {
        QuadSpec {
            rel_tol,
            abs_tol,
            ..Default::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.rel_tol > 0.0 && self.abs_tol > 0.0) {
            return Err(Error::Domain("tolerances must be positive"));
        }
        if self.max_subdivisions < 1 {
            return Err(Error::Domain("max_subdivisions must be at least 1"));
        }
        if !(self.truncation_radius > 0.0) {
            return Err(Error::Domain("truncation radius must be positive"));
        }
        Ok(())
    }

    /// Same spec with both tolerances scaled, used for inner integrals.
    pub fn scaled(&self, factor: f64) -> Self {
        QuadSpec {
            rel_tol: self.rel_tol * factor,
            abs_tol: self.abs_tol * factor,
            ..*self
        }
    }

    pub(crate) fn target(&self, value: f64) -> f64 {
        self.abs_tol.max(self.rel_tol * value.abs())
    }
}

/// A computed value with its error information.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Estimate {
    pub value: f64,
    /// Standard error for Monte Carlo, error estimate for quadrature.
    pub stderr: f64,
    pub samples_or_nodes: u64,
    pub converged: bool,
}

impl Estimate {
    pub fn exact(value: f64) -> Self {
        Estimate {
            value,
            stderr: 0.0,
            samples_or_nodes: 0,
            converged: true,
        }
    }

    /// Sum of two independent estimates.
    pub fn add(self, other: Estimate) -> Estimate {
        Estimate {
            value: self.value + other.value,
            stderr: self.stderr + other.stderr,
            samples_or_nodes: self.samples_or_nodes + other.samples_or_nodes,
            converged: self.converged && other.converged,
        }
    }

    pub fn scale(self, c: f64) -> Estimate {
        Estimate {
            value: self.value * c,
            stderr: self.stderr * c.abs(),
            ..self
        }
    }

    pub fn shift(self, c: f64) -> Estimate {
        Estimate {
            value: self.value + c,
            ..self
        }
    }
}

/// Weight attached to a one-dimensional integral over [a, b].
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Weight {
    None,
    /// (t - a)^alpha
    LeftPower(f64),
    /// (b - t)^alpha
    RightPower(f64),
    /// (t - a)^alpha (b - t)^beta
    Jacobi(f64, f64),
    /// (t - a)^alpha e^{-(t - a)}, b must be +inf
    Laguerre(f64),
}

/// Panel [a, b] whose integrand is (t - a)^left (b - t)^right f(t).
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Piece {
    pub a: f64,
    pub b: f64,
    pub left: f64,
    pub right: f64,
}

impl Piece {
    pub fn plain(a: f64, b: f64) -> Self {
        Piece {
            a,
            b,
            left: 0.0,
            right: 0.0,
        }
    }

    pub fn new(a: f64, b: f64, left: f64, right: f64) -> Self {
        Piece { a, b, left, right }
    }
}

/// Builds plain pieces between sorted breakpoints, ignoring points outside
/// (a, b) and duplicates.
pub fn split_at(a: f64, b: f64, points: &[f64]) -> Vec<Piece> {
    let mut pts: Vec<f64> = points
        .iter()
        .copied()
        .filter(|&p| p > a && p < b && p.is_finite())
        .collect();
    pts.sort_by(|x, y| x.total_cmp(y));
    pts.dedup_by(|x, y| (*x - *y).abs() <= 1e-14 * (1.0 + x.abs()));
    let mut out = Vec::with_capacity(pts.len() + 1);
    let mut lo = a;
    for p in pts {
        if p - lo > 1e-14 * (1.0 + p.abs()) {
            out.push(Piece::plain(lo, p));
            lo = p;
        }
    }
    out.push(Piece::plain(lo, b));
    out
}

const JACOBI_LO: usize = 10;
const JACOBI_HI: usize = 20;

struct EndRule {
    exponent: f64,
    lo: GaussRule,
    hi: GaussRule,
}

#[derive(Clone, Copy, PartialEq)]
enum Side {
    Plain,
    Left,
    Right,
}

#[derive(Clone, Copy)]
struct Cell {
    a: f64,
    b: f64,
    piece: usize,
    side: Side,
    value: f64,
    err: f64,
}

impl PartialEq for Cell {
    fn eq(&self, other: &Self) -> bool {
        self.err == other.err
    }
}
impl Eq for Cell {}
impl PartialOrd for Cell {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Cell {
    fn cmp(&self, other: &Self) -> Ordering {
        self.err.total_cmp(&other.err)
    }
}

fn rule_for(rules: &mut Vec<EndRule>, exponent: f64) -> usize {
    if let Some(i) = rules.iter().position(|r| r.exponent == exponent) {
        return i;
    }
    // weight (1 + x)^exponent on [-1, 1]
    rules.push(EndRule {
        exponent,
        lo: gauss_jacobi(JACOBI_LO, 0.0, exponent),
        hi: gauss_jacobi(JACOBI_HI, 0.0, exponent),
    });
    rules.len() - 1
}

struct Engine<'a, F> {
    f: F,
    pieces: &'a [Piece],
    rules: Vec<EndRule>,
    left_rule: Vec<Option<usize>>,
    right_rule: Vec<Option<usize>>,
    evals: u64,
}

impl<'a, F: FnMut(f64) -> f64> Engine<'a, F> {
    fn eval(&mut self, a: f64, b: f64, piece: usize, side: Side) -> Cell {
        let p = self.pieces[piece];
        let (value, err) = match side {
            Side::Plain => {
                let (pa, pb, al, be) = (p.a, p.b, p.left, p.right);
                let f = &mut self.f;
                let mut g = |t: f64| {
                    let mut v = f(t);
                    if al != 0.0 {
                        v *= (t - pa).powf(al);
                    }
                    if be != 0.0 {
                        v *= (pb - t).powf(be);
                    }
                    v
                };
                let (k, gg, abs, asc) = rules::gk21(&mut g, a, b);
                self.evals += 21;
                (k, rules::qk_error(k, gg, abs, asc))
            }
            Side::Left | Side::Right => {
                let (ri, other_exp, far) = if side == Side::Left {
                    (self.left_rule[piece].unwrap(), p.right, p.b)
                } else {
                    (self.right_rule[piece].unwrap(), p.left, p.a)
                };
                let rule = &self.rules[ri];
                let h = b - a;
                let scale = (0.5 * h).powf(rule.exponent + 1.0);
                let f = &mut self.f;
                let mut quad = |r: &GaussRule| {
                    let mut acc = 0.0;
                    for (x, w) in r.nodes.iter().zip(r.weights.iter()) {
                        let t = if side == Side::Left {
                            a + 0.5 * h * (x + 1.0)
                        } else {
                            b - 0.5 * h * (x + 1.0)
                        };
                        let mut v = f(t);
                        if other_exp != 0.0 {
                            v *= (far - t).abs().powf(other_exp);
                        }
                        acc += w * v;
                    }
                    acc * scale
                };
                let lo = quad(&rule.lo);
                let hi = quad(&rule.hi);
                self.evals += (JACOBI_LO + JACOBI_HI) as u64;
                let err = (hi - lo).abs().max(50.0 * f64::EPSILON * hi.abs());
                (hi, err)
            }
        };
        Cell {
            a,
            b,
            piece,
            side,
            value,
            err,
        }
    }
}

/// Adaptive integration of `f` over a union of weighted panels.
///
/// Each panel contributes the integral of (t - a)^left (b - t)^right f(t);
/// exponents must exceed -1. The error budget is global across panels.
pub fn integrate_pieces<F: FnMut(f64) -> f64>(
    f: F,
    pieces: &[Piece],
    spec: &QuadSpec,
) -> Result<Estimate> {
    spec.validate()?;
    let mut eng = Engine {
        f,
        pieces,
        rules: Vec::new(),
        left_rule: Vec::with_capacity(pieces.len()),
        right_rule: Vec::with_capacity(pieces.len()),
        evals: 0,
    };
    for p in pieces {
        if !(p.a < p.b) || !p.a.is_finite() || !p.b.is_finite() {
            return Err(Error::Domain("quadrature panel must satisfy a < b, both finite"));
        }
        if p.left <= -1.0 || p.right <= -1.0 {
            return Err(Error::Domain("power weight exponent must exceed -1"));
        }
        let l = if p.left != 0.0 {
            Some(rule_for(&mut eng.rules, p.left))
        } else {
            None
        };
        let r = if p.right != 0.0 {
            Some(rule_for(&mut eng.rules, p.right))
        } else {
            None
        };
        eng.left_rule.push(l);
        eng.right_rule.push(r);
    }
    let mut heap: BinaryHeap<Cell> = BinaryHeap::new();
    let mut done: Vec<Cell> = Vec::new();
    for (i, p) in pieces.iter().enumerate() {
        match (p.left != 0.0, p.right != 0.0) {
            (false, false) => heap.push(eng.eval(p.a, p.b, i, Side::Plain)),
            (true, false) => heap.push(eng.eval(p.a, p.b, i, Side::Left)),
            (false, true) => heap.push(eng.eval(p.a, p.b, i, Side::Right)),
            (true, true) => {
                let m = 0.5 * (p.a + p.b);
                heap.push(eng.eval(p.a, m, i, Side::Left));
                heap.push(eng.eval(m, p.b, i, Side::Right));
            }
        }
    }
    let mut splits = 0usize;
    let mut converged = false;
    // running sums, refreshed now and then to shed rounding drift
    let mut total: f64 = heap.iter().map(|c| c.value).sum();
    let mut err: f64 = heap.iter().map(|c| c.err).sum();
    loop {
        if splits % 64 == 63 {
            total = heap.iter().chain(done.iter()).map(|c| c.value).sum();
            err = heap.iter().chain(done.iter()).map(|c| c.err).sum();
        }
        if !total.is_finite() || !err.is_finite() {
            return Err(Error::NonConvergence("integrand produced a non-finite value"));
        }
        if err <= spec.target(total) {
            converged = true;
            break;
        }
        if splits >= spec.max_subdivisions {
            break;
        }
        let Some(worst) = heap.pop() else { break };
        let m = 0.5 * (worst.a + worst.b);
        let width = worst.b - worst.a;
        if width <= 2e-12 * worst.a.abs().max(worst.b.abs()).max(1e-290) {
            done.push(worst);
            continue;
        }
        let (sl, sr) = match worst.side {
            Side::Plain => (Side::Plain, Side::Plain),
            Side::Left => (Side::Left, Side::Plain),
            Side::Right => (Side::Plain, Side::Right),
        };
        let c1 = eng.eval(worst.a, m, worst.piece, sl);
        let c2 = eng.eval(m, worst.b, worst.piece, sr);
        total += c1.value + c2.value - worst.value;
        err += c1.err + c2.err - worst.err;
        heap.push(c1);
        heap.push(c2);
        splits += 1;
    }
    let mut cells: Vec<Cell> = heap.into_vec();
    cells.extend(done);
    cells.sort_by(|x, y| x.a.total_cmp(&y.a));
    let value = cells.iter().map(|c| c.value).sum();
    let err = cells.iter().map(|c| c.err).sum();
    Ok(Estimate {
        value,
        stderr: err,
        samples_or_nodes: eng.evals,
        converged,
    })
}

/// Like [`integrate_pieces`], but `f` is the full integrand: the endpoint
/// power factors of each panel are divided out before quadrature. Panels must
/// be sorted and non-overlapping.
pub fn integrate_singular<F: FnMut(f64) -> f64>(
    mut f: F,
    pieces: &[Piece],
    spec: &QuadSpec,
) -> Result<Estimate> {
    let g = |t: f64| {
        let i = match pieces.binary_search_by(|p| {
            if t < p.a {
                Ordering::Greater
            } else if t > p.b {
                Ordering::Less
            } else {
                Ordering::Equal
            }
        }) {
            Ok(i) => i,
            Err(_) => return 0.0,
        };
        let p = pieces[i];
        let v = f(t);
        if v == 0.0 {
            return 0.0;
        }
        let mut w = 1.0;
        if p.left != 0.0 {
            w *= (t - p.a).powf(p.left);
        }
        if p.right != 0.0 {
            w *= (p.b - t).powf(p.right);
        }
        v / w
    };
    integrate_pieces(g, pieces, spec)
}

/// One-dimensional integral of `f` against `weight` over [a, b].
///
/// `b = +inf` is allowed with the Laguerre weight (fixed Gauss-Laguerre
/// rules) and with no weight or a left power weight, in which case the
/// tail is summed over geometrically growing panels up to
/// `spec.truncation_radius` and extrapolated beyond it.
pub fn integrate_1d<F: FnMut(f64) -> f64>(
    mut f: F,
    a: f64,
    b: f64,
    weight: Weight,
    spec: &QuadSpec,
) -> Result<Estimate> {
    spec.validate()?;
    if let Weight::Laguerre(alpha) = weight {
        if b != f64::INFINITY {
            return Err(Error::Domain("Laguerre weight requires an infinite upper limit"));
        }
        if alpha <= -1.0 {
            return Err(Error::Domain("power weight exponent must exceed -1"));
        }
        return laguerre(f, a, alpha, spec);
    }
    if !(a < b) || a.is_nan() {
        return Err(Error::Domain("integration limits must satisfy a < b"));
    }
    if b == f64::INFINITY {
        let alpha = match weight {
            Weight::None => 0.0,
            Weight::LeftPower(al) => al,
            _ => return Err(Error::Domain("weight needs a finite upper limit")),
        };
        let first = (a.abs()).max(1.0);
        let head = integrate_pieces(&mut f, &[Piece::new(a, a + first, alpha, 0.0)], spec)?;
        let tail = geometric_tail(
            |t| f(t) * if alpha != 0.0 { (t - a).powf(alpha) } else { 1.0 },
            a + first,
            first,
            spec,
        )?;
        return Ok(head.add(tail));
    }
    let piece = match weight {
        Weight::None => Piece::plain(a, b),
        Weight::LeftPower(al) => Piece::new(a, b, al, 0.0),
        Weight::RightPower(be) => Piece::new(a, b, 0.0, be),
        Weight::Jacobi(al, be) => Piece::new(a, b, al, be),
        Weight::Laguerre(_) => unreachable!(),
    };
    integrate_pieces(f, &[piece], spec)
}

fn laguerre<F: FnMut(f64) -> f64>(mut f: F, a: f64, alpha: f64, spec: &QuadSpec) -> Result<Estimate> {
    let lo = gauss_laguerre(40, alpha);
    let hi = gauss_laguerre(80, alpha);
    let mut q = |r: &GaussRule| -> f64 {
        r.nodes
            .iter()
            .zip(r.weights.iter())
            .map(|(x, w)| w * f(a + x))
            .sum()
    };
    let vlo = q(&lo);
    let vhi = q(&hi);
    let err = (vhi - vlo).abs();
    Ok(Estimate {
        value: vhi,
        stderr: err,
        samples_or_nodes: 120,
        converged: err <= spec.target(vhi),
    })
}

/// Sum of integrals over [start + w (2^k - 1), start + w (2^{k+1} - 1)] until
/// the truncation radius, with a geometric extrapolation of the remainder.
fn geometric_tail<F: FnMut(f64) -> f64>(
    mut f: F,
    start: f64,
    width: f64,
    spec: &QuadSpec,
) -> Result<Estimate> {
    let mut lo = start;
    let mut w = width;
    let mut acc = Estimate::exact(0.0);
    let mut prev: Option<f64> = None;
    let mut ratio: Option<f64> = None;
    let mut last: f64;
    let inner = spec.scaled(0.1);
    loop {
        let hi = lo + w;
        let e = integrate_pieces(&mut f, &[Piece::plain(lo, hi)], &inner)?;
        acc = acc.add(e);
        if let Some(p) = prev {
            if p != 0.0 {
                ratio = Some(e.value / p);
            }
        }
        prev = Some(e.value);
        last = e.value;
        lo = hi;
        w *= 2.0;
        if lo >= spec.truncation_radius.max(start + 64.0 * width) {
            break;
        }
        if e.value.abs() < 0.01 * spec.abs_tol && ratio.map_or(false, |r| r.abs() < 0.9) {
            break;
        }
    }
    let (rest, ok) = match ratio {
        Some(r) if r.abs() < 0.95 => (last * r / (1.0 - r), true),
        _ => (0.0, last.abs() < spec.abs_tol),
    };
    acc.value += rest;
    acc.stderr += 0.5 * rest.abs();
    acc.converged = acc.converged && ok && 0.5 * rest.abs() <= spec.target(acc.value);
    Ok(acc)
}

/// Integral of `f` over [a, inf) for an integrand decaying like t^{-p}, p > 1.
///
/// Uses t = a/u, which maps the tail onto (0, 1] with the exact endpoint
/// weight u^{p-2}; the remaining factor f(a/u) a u^{-p} is smooth when f has
/// an expansion in integer powers of 1/t.
pub fn integrate_power_tail<F: FnMut(f64) -> f64>(
    mut f: F,
    a: f64,
    p: f64,
    spec: &QuadSpec,
) -> Result<Estimate> {
    if !(a > 0.0) {
        return Err(Error::Domain("power tail needs a positive start"));
    }
    if !(p > 1.0) {
        return Err(Error::Integrability("tail decay exponent must exceed 1"));
    }
    let g = |u: f64| {
        let t = a / u;
        if !t.is_finite() {
            return 0.0;
        }
        f(t) * a * u.powf(-p)
    };
    integrate_pieces(g, &[Piece::new(0.0, 1.0, p - 2.0, 0.0)], spec)
}

/// Integral over [a, b] with breakpoints, no endpoint weights.
pub fn integrate_with_breaks<F: FnMut(f64) -> f64>(
    f: F,
    a: f64,
    b: f64,
    points: &[f64],
    spec: &QuadSpec,
) -> Result<Estimate> {
    integrate_pieces(f, &split_at(a, b, points), spec)
}

/// Geometric breakpoints between `a` and `b` accumulating toward `a`:
/// a + (b - a) r^k for k = 1..count.
pub fn graded_points(a: f64, b: f64, ratio: f64, count: usize) -> Vec<f64> {
    let mut out = Vec::with_capacity(count);
    let mut h = b - a;
    for _ in 0..count {
        h *= ratio;
        out.push(a + h);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::specfun::beta;
    use std::f64::consts::PI;

    #[test]
    fn polynomials_are_exact() {
        let spec = QuadSpec::default();
        for d in 0..=10 {
            let e = integrate_1d(|t| t.powi(d), 0.0, 1.0, Weight::None, &spec).unwrap();
            assert!((e.value - 1.0 / (d as f64 + 1.0)).abs() < 1e-12, "degree {d}");
        }
    }

    #[test]
    fn jacobi_rule_reproduces_beta() {
        let spec = QuadSpec::new(1e-13, 1e-14);
        for &x in &[0.25, 0.5, 1.5] {
            for &y in &[0.25, 0.5, 1.5] {
                let e =
                    integrate_1d(|_| 1.0, 0.0, 1.0, Weight::Jacobi(x - 1.0, y - 1.0), &spec).unwrap();
                assert!((e.value - beta(x, y).unwrap()).abs() < 1e-10, "{x} {y}");
                let e = integrate_1d(
                    |t: f64| t.powf(x - 1.0),
                    0.0,
                    1.0,
                    Weight::RightPower(y - 1.0),
                    &spec,
                )
                .unwrap();
                assert!((e.value - beta(x, y).unwrap()).abs() < 1e-10, "{x} {y}");
            }
            // a bounded right factor needs no weight of its own
            let e = integrate_1d(
                |t: f64| (1.0 - t).powf(0.5),
                0.0,
                1.0,
                Weight::LeftPower(x - 1.0),
                &spec,
            )
            .unwrap();
            assert!((e.value - beta(x, 1.5).unwrap()).abs() < 1e-10, "{x}");
        }
    }

    #[test]
    fn arcsine_integral() {
        let spec = QuadSpec::default();
        let e = integrate_1d(|_| 1.0, 0.0, 1.0, Weight::Jacobi(-0.5, -0.5), &spec).unwrap();
        assert!((e.value - PI).abs() < 1e-12);
    }

    #[test]
    fn laguerre_gamma() {
        let spec = QuadSpec::default();
        let e = integrate_1d(|_| 1.0, 0.0, f64::INFINITY, Weight::Laguerre(-0.3), &spec).unwrap();
        assert!((e.value - crate::specfun::gamma(0.7).unwrap()).abs() < 1e-12);
    }

    #[test]
    fn power_tail_is_exact_on_powers() {
        let spec = QuadSpec::default();
        let e = integrate_power_tail(|t: f64| t.powf(-1.7), 2.0, 1.7, &spec).unwrap();
        let exact = 2.0f64.powf(-0.7) / 0.7;
        assert!((e.value - exact).abs() < 1e-13);
    }

    #[test]
    fn infinite_range_without_weight() {
        let spec = QuadSpec::default();
        let e = integrate_1d(|t: f64| 1.0 / (1.0 + t * t), 0.0, f64::INFINITY, Weight::None, &spec)
            .unwrap();
        assert!((e.value - PI / 2.0).abs() < 1e-6, "{:?}", e);
        let e = integrate_1d(|t: f64| (-t).exp(), 0.0, f64::INFINITY, Weight::None, &spec).unwrap();
        assert!((e.value - 1.0).abs() < 1e-10);
        assert!(e.converged);
    }

    #[test]
    fn rejects_bad_input() {
        let spec = QuadSpec::default();
        assert!(integrate_1d(|t| t, 1.0, 0.0, Weight::None, &spec).is_err());
        assert!(integrate_1d(|t| t, 0.0, 1.0, Weight::LeftPower(-1.0), &spec).is_err());
    }

    #[test]
    fn breakpoints_handle_kinks() {
        let spec = QuadSpec::new(1e-12, 1e-14);
        let e = integrate_with_breaks(|t: f64| (t - 0.3).abs(), 0.0, 1.0, &[0.3], &spec).unwrap();
        assert!((e.value - (0.045 + 0.245)).abs() < 1e-13);
    }
}
