//! Sets in R^n given by indicator queries and exact ray crossings.
//!
//! Every shape reports candidate parameters t > 0 at which the ray
//! x + t d may cross its boundary. Extra candidates are harmless: the
//! interval decomposition tests membership between consecutive candidates.
//! Missing a crossing is not, so each shape solves for its crossings
//! exactly (linear, quadratic, cubic) or brackets them on a grid that
//! covers every place a root can occur.

use alloc::boxed::Box;
use alloc::string::String;
use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::PI;

use super::intervals::IntervalUnion;
use crate::vec::{dot, norm2};
use crate::{Error, Result};
#[allow(unused_imports)]
use crate::prelude::*;

pub type GraphFn = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

/// How the ray crossings of a graph are located.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum GraphGrowth {
    /// u(y) = c[0] + c[1] y + c[2] y^2 + c[3] y^3; crossings are polynomial roots.
    Cubic([f64; 4]),
    /// |u(y)| <= a + b |y|^p with p < 1. Crossings are bracketed on a grid
    /// that is dense near `feature` (a kink or transition of u).
    Sublinear { a: f64, b: f64, p: f64, feature: f64 },
}

/// A function R -> R whose supergraph is a planar set.
#[derive(Clone)]
pub struct Graph {
    pub label: String,
    u: GraphFn,
    du: GraphFn,
    pub growth: GraphGrowth,
    /// Holder exponent of u' (1 for C^2 graphs).
    pub holder: f64,
}

impl core::fmt::Debug for Graph {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        f.debug_struct("Graph")
            .field("label", &self.label)
            .field("growth", &self.growth)
            .finish()
    }
}

impl Graph {
    pub fn new(label: &str, u: GraphFn, du: GraphFn, growth: GraphGrowth) -> Self {
        Graph {
            label: String::from(label),
            u,
            du,
            growth,
            holder: 1.0,
        }
    }

    pub fn eval(&self, y: f64) -> f64 {
        (self.u)(y)
    }

    pub fn slope(&self, y: f64) -> f64 {
        (self.du)(y)
    }

    pub fn cubic(label: &str, c: [f64; 4]) -> Self {
        Graph::new(
            label,
            Arc::new(move |y| c[0] + y * (c[1] + y * (c[2] + y * c[3]))),
            Arc::new(move |y| c[1] + y * (2.0 * c[2] + 3.0 * y * c[3])),
            GraphGrowth::Cubic(c),
        )
    }

    /// Positive t where x + t d meets the graph (d a unit vector).
    fn crossings(&self, x: &[f64], d: &[f64], out: &mut Vec<f64>) {
        match self.growth {
            GraphGrowth::Cubic(c) => {
                // h(t) = x2 + t d2 - sum c_k (x1 + t d1)^k
                let (x1, d1) = (x[0], d[0]);
                let mut e = [x[1], d[1], 0.0, 0.0];
                let binom = [[1.0, 0.0, 0.0, 0.0], [1.0, 1.0, 0.0, 0.0], [1.0, 2.0, 1.0, 0.0], [1.0, 3.0, 3.0, 1.0]];
                for k in 0..4 {
                    for j in 0..=k {
                        e[j] -= c[k] * binom[k][j] * x1.powi((k - j) as i32) * d1.powi(j as i32);
                    }
                }
                for t in poly_roots(e) {
                    if t > 0.0 {
                        out.push(t);
                    }
                }
            }
            GraphGrowth::Sublinear { a, b, p, feature } => {
                let h = |t: f64| x[1] + t * d[1] - (self.u)(x[0] + t * d[0]);
                let reach = sublinear_reach(x, d, a, b, p);
                let mut grid: Vec<f64> = Vec::with_capacity(700);
                for k in 1..=512 {
                    grid.push(reach * k as f64 / 512.0);
                }
                let mut g = reach;
                for _ in 0..60 {
                    g *= 0.5;
                    grid.push(g);
                }
                if d[0] != 0.0 {
                    let ts = (feature - x[0]) / d[0];
                    let w = 1.0f64.max(ts.abs());
                    let mut off = w;
                    for _ in 0..48 {
                        for t in [ts - off, ts + off] {
                            if t > 0.0 && t < reach {
                                grid.push(t);
                            }
                        }
                        off *= 0.5;
                    }
                    if ts > 0.0 && ts < reach {
                        grid.push(ts);
                    }
                }
                grid.sort_by(|u, v| u.partial_cmp(v).unwrap());
                grid.dedup();
                let mut lo = 0.0;
                let mut hlo = h(0.0);
                for &t in &grid {
                    let ht = h(t);
                    if hlo == 0.0 && lo > 0.0 {
                        out.push(lo);
                    } else if (hlo < 0.0) != (ht < 0.0) && ht != 0.0 {
                        out.push(bisect(&h, lo, t, hlo));
                    }
                    lo = t;
                    hlo = ht;
                }
            }
        }
    }
}

/// A t beyond which x + t d cannot meet a graph with |u(y)| <= a + b|y|^p.
fn sublinear_reach(x: &[f64], d: &[f64], a: f64, b: f64, p: f64) -> f64 {
    let bound = |t: f64| a + b * (x[0].abs() + t).powf(p);
    if d[1] == 0.0 {
        // the ray is parallel to the graph's domain axis: only a bounded
        // u (b = 0) has a finite reach, otherwise use a large cap
        return if b == 0.0 && x[1].abs() > a { 0.0 } else { 1e12 };
    }
    let v = d[1].abs();
    let mut t = 1.0f64;
    for _ in 0..400 {
        let slope_ok = b == 0.0 || p <= 0.0 || v > b * p * (x[0].abs() + t).powf(p - 1.0);
        if v * t - x[1].abs() > bound(t) && slope_ok {
            return t;
        }
        t *= 2.0;
    }
    t
}

fn bisect<F: Fn(f64) -> f64>(h: &F, mut lo: f64, mut hi: f64, hlo: f64) -> f64 {
    let neg = hlo < 0.0;
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if (h(mid) < 0.0) == neg {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// Real roots of e[0] + e[1] t + e[2] t^2 + e[3] t^3, by bisection on the
/// monotone pieces between critical points.
pub(crate) fn poly_roots(e: [f64; 4]) -> Vec<f64> {
    let deg = match (0..4).rev().find(|&k| e[k] != 0.0) {
        None | Some(0) => return Vec::new(),
        Some(k) => k,
    };
    if deg == 1 {
        return vec![-e[0] / e[1]];
    }
    if deg == 2 {
        return quadratic_roots(e[2], e[1], e[0]);
    }
    let bound = 1.0 + (0..deg).map(|k| (e[k] / e[deg]).abs()).fold(0.0, f64::max);
    let mut knots = vec![-bound];
    let mut crit = quadratic_roots(3.0 * e[3], 2.0 * e[2], e[1]);
    crit.retain(|c| c.abs() < bound);
    knots.extend(crit);
    knots.push(bound);
    let p = |t: f64| e[0] + t * (e[1] + t * (e[2] + t * e[3]));
    let mut out = Vec::new();
    for w in knots.windows(2) {
        let (a, b) = (w[0], w[1]);
        let (pa, pb) = (p(a), p(b));
        if pa == 0.0 {
            out.push(a);
        } else if (pa < 0.0) != (pb < 0.0) && pb != 0.0 {
            out.push(bisect(&p, a, b, pa));
        }
    }
    if p(bound) == 0.0 {
        out.push(bound);
    }
    out
}

/// Real roots of a t^2 + b t + c, computed without cancellation.
pub(crate) fn quadratic_roots(a: f64, b: f64, c: f64) -> Vec<f64> {
    if a == 0.0 {
        return if b == 0.0 { Vec::new() } else { vec![-c / b] };
    }
    let disc = b * b - 4.0 * a * c;
    if disc < 0.0 {
        return Vec::new();
    }
    let q = -0.5 * (b + b.signum() * disc.sqrt());
    if q == 0.0 {
        return vec![0.0];
    }
    let mut r = vec![q / a, c / q];
    r.sort_by(|u, v| u.partial_cmp(v).unwrap());
    r
}

#[derive(Clone, Debug)]
pub enum Shape {
    /// {y . normal > offset}
    HalfSpace { normal: Vec<f64>, offset: f64 },
    /// Open ball.
    Ball { center: Vec<f64>, radius: f64 },
    /// Planar cone with apex 0 over a union of angular arcs (t1, t2), t1 < t2.
    Cone2D { arcs: Vec<(f64, f64)> },
    /// Circular cone {angle(y, axis) < half_angle} in any dimension.
    ConeCap { axis: Vec<f64>, half_angle: f64 },
    /// {y_2 > u(y_1)} in the plane.
    Supergraph(Graph),
    /// Subset of the line.
    Intervals(IntervalUnion),
    Difference(Box<GeomSet>, Box<GeomSet>),
    Union(Box<GeomSet>, Box<GeomSet>),
    Complement(Box<GeomSet>),
    /// lambda E
    Scaled(Box<GeomSet>, f64),
    /// E + v
    Translated(Box<GeomSet>, Vec<f64>),
    /// Planar rotation of E by an angle.
    Rotated(Box<GeomSet>, f64),
}

/// A subset of R^n with deterministic indicator and ray queries.
#[derive(Clone, Debug)]
pub struct GeomSet {
    pub shape: Shape,
    pub n: usize,
}

fn rotate(y: &[f64], angle: f64) -> [f64; 2] {
    let (s, c) = angle.sin_cos();
    [c * y[0] - s * y[1], s * y[0] + c * y[1]]
}

fn cross(a: &[f64], b: &[f64]) -> f64 {
    a[0] * b[1] - a[1] * b[0]
}

fn in_arcs(arcs: &[(f64, f64)], y: &[f64]) -> bool {
    let phi = y[1].atan2(y[0]);
    arcs.iter().any(|&(a, b)| crate::rem_euclid(phi - a, 2.0 * PI) < b - a)
}

impl GeomSet {
    pub fn half_space(normal: Vec<f64>, offset: f64) -> Result<Self> {
        let len = norm2(&normal).sqrt();
        if normal.is_empty() || !(len > 0.0) {
            return Err(Error::Domain("half-space normal must be nonzero"));
        }
        let n = normal.len();
        let normal = normal.iter().map(|v| v / len).collect();
        Ok(GeomSet {
            shape: Shape::HalfSpace {
                normal,
                offset: offset / len,
            },
            n,
        })
    }

    pub fn ball(center: Vec<f64>, radius: f64) -> Result<Self> {
        if center.is_empty() || !(radius > 0.0) {
            return Err(Error::Domain("ball needs a center and a positive radius"));
        }
        let n = center.len();
        Ok(GeomSet {
            shape: Shape::Ball { center, radius },
            n,
        })
    }

    /// Cone over arcs (t1, t2) of the unit circle, angles in radians.
    pub fn cone2d(arcs: Vec<(f64, f64)>) -> Result<Self> {
        if arcs.iter().any(|&(a, b)| !(b > a && b - a <= 2.0 * PI)) {
            return Err(Error::Domain("cone arcs need t1 < t2 <= t1 + 2 pi"));
        }
        Ok(GeomSet {
            shape: Shape::Cone2D { arcs },
            n: 2,
        })
    }

    pub fn cone_cap(axis: Vec<f64>, half_angle: f64) -> Result<Self> {
        let len = norm2(&axis).sqrt();
        if axis.len() < 2 || !(len > 0.0) || !(half_angle > 0.0 && half_angle < PI) {
            return Err(Error::Domain("cone cap needs n >= 2, nonzero axis, angle in (0, pi)"));
        }
        let n = axis.len();
        Ok(GeomSet {
            shape: Shape::ConeCap {
                axis: axis.iter().map(|v| v / len).collect(),
                half_angle,
            },
            n,
        })
    }

    pub fn supergraph(g: Graph) -> Self {
        GeomSet {
            shape: Shape::Supergraph(g),
            n: 2,
        }
    }

    pub fn intervals(raw: &[(f64, f64)]) -> Result<Self> {
        Ok(GeomSet {
            shape: Shape::Intervals(IntervalUnion::strict(raw)?),
            n: 1,
        })
    }

    pub fn from_intervals(u: IntervalUnion) -> Self {
        GeomSet {
            shape: Shape::Intervals(u),
            n: 1,
        }
    }

    fn same_dim(a: &GeomSet, b: &GeomSet) -> Result<()> {
        if a.n != b.n {
            return Err(Error::Domain("sets live in different dimensions"));
        }
        Ok(())
    }

    pub fn difference(a: GeomSet, b: GeomSet) -> Result<Self> {
        Self::same_dim(&a, &b)?;
        let n = a.n;
        Ok(GeomSet {
            shape: Shape::Difference(Box::new(a), Box::new(b)),
            n,
        })
    }

    pub fn union(a: GeomSet, b: GeomSet) -> Result<Self> {
        Self::same_dim(&a, &b)?;
        let n = a.n;
        Ok(GeomSet {
            shape: Shape::Union(Box::new(a), Box::new(b)),
            n,
        })
    }

    pub fn complement(self) -> Self {
        let n = self.n;
        GeomSet {
            shape: Shape::Complement(Box::new(self)),
            n,
        }
    }

    pub fn scaled(self, lambda: f64) -> Result<Self> {
        if !(lambda > 0.0 && lambda.is_finite()) {
            return Err(Error::Domain("scale factor must be positive"));
        }
        let n = self.n;
        Ok(GeomSet {
            shape: Shape::Scaled(Box::new(self), lambda),
            n,
        })
    }

    pub fn translated(self, v: Vec<f64>) -> Result<Self> {
        if v.len() != self.n {
            return Err(Error::Domain("translation has the wrong dimension"));
        }
        let n = self.n;
        Ok(GeomSet {
            shape: Shape::Translated(Box::new(self), v),
            n,
        })
    }

    pub fn rotated(self, angle: f64) -> Result<Self> {
        if self.n != 2 {
            return Err(Error::UnsupportedDimension(self.n));
        }
        Ok(GeomSet {
            shape: Shape::Rotated(Box::new(self), angle),
            n: 2,
        })
    }

    /// chi_E(y).
    pub fn contains(&self, y: &[f64]) -> bool {
        match &self.shape {
            Shape::HalfSpace { normal, offset } => dot(y, normal) > *offset,
            Shape::Ball { center, radius } => {
                crate::vec::dist(y, center) < *radius
            }
            Shape::Cone2D { arcs } => in_arcs(arcs, y),
            Shape::ConeCap { axis, half_angle } => {
                dot(y, axis) > norm2(y).sqrt() * half_angle.cos()
            }
            Shape::Supergraph(g) => y[1] > g.eval(y[0]),
            Shape::Intervals(u) => u.contains(y[0]),
            Shape::Difference(a, b) => a.contains(y) && !b.contains(y),
            Shape::Union(a, b) => a.contains(y) || b.contains(y),
            Shape::Complement(a) => !a.contains(y),
            Shape::Scaled(a, l) => {
                let z: Vec<f64> = y.iter().map(|v| v / l).collect();
                a.contains(&z)
            }
            Shape::Translated(a, v) => {
                let z: Vec<f64> = y.iter().zip(v).map(|(p, q)| p - q).collect();
                a.contains(&z)
            }
            Shape::Rotated(a, phi) => a.contains(&rotate(y, -phi)),
        }
    }

    /// Candidate crossing parameters t > 0 of x + t d with the boundary.
    fn crossings(&self, x: &[f64], d: &[f64], out: &mut Vec<f64>) {
        match &self.shape {
            Shape::HalfSpace { normal, offset } => {
                let dn = dot(d, normal);
                if dn != 0.0 {
                    let t = (offset - dot(x, normal)) / dn;
                    if t > 0.0 {
                        out.push(t);
                    }
                }
            }
            Shape::Ball { center, radius } => {
                let mut b = 0.0;
                let mut c = -radius * radius;
                let mut a = 0.0;
                for i in 0..x.len() {
                    let w = x[i] - center[i];
                    a += d[i] * d[i];
                    b += 2.0 * w * d[i];
                    c += w * w;
                }
                out.extend(quadratic_roots(a, b, c).into_iter().filter(|&t| t > 0.0));
            }
            Shape::Cone2D { arcs } => {
                for &(a, b) in arcs {
                    for phi in [a, b] {
                        let e = [phi.cos(), phi.sin()];
                        let den = cross(d, &e);
                        if den != 0.0 {
                            let t = -cross(x, &e) / den;
                            if t > 0.0 {
                                out.push(t);
                            }
                        }
                    }
                }
            }
            Shape::ConeCap { axis, half_angle } => {
                let c2 = half_angle.cos().powi(2);
                let (xa, da) = (dot(x, axis), dot(d, axis));
                let e2 = da * da - c2 * norm2(d);
                let e1 = 2.0 * (xa * da - c2 * dot(x, d));
                let e0 = xa * xa - c2 * norm2(x);
                out.extend(quadratic_roots(e2, e1, e0).into_iter().filter(|&t| t > 0.0));
            }
            Shape::Supergraph(g) => g.crossings(x, d, out),
            Shape::Intervals(u) => {
                if d[0] != 0.0 {
                    for &(a, b) in u.parts() {
                        for e in [a, b] {
                            let t = (e - x[0]) / d[0];
                            if t > 0.0 && t.is_finite() {
                                out.push(t);
                            }
                        }
                    }
                }
            }
            Shape::Difference(a, b) | Shape::Union(a, b) => {
                a.crossings(x, d, out);
                b.crossings(x, d, out);
            }
            Shape::Complement(a) => a.crossings(x, d, out),
            Shape::Scaled(a, l) => {
                let z: Vec<f64> = x.iter().map(|v| v / l).collect();
                let start = out.len();
                a.crossings(&z, d, out);
                out[start..].iter_mut().for_each(|t| *t *= l);
            }
            Shape::Translated(a, v) => {
                let z: Vec<f64> = x.iter().zip(v).map(|(p, q)| p - q).collect();
                a.crossings(&z, d, out);
            }
            Shape::Rotated(a, phi) => a.crossings(&rotate(x, -phi), &rotate(d, -phi), out),
        }
    }

    /// {t > 0 : x + t d in E} as a union of open intervals.
    pub fn ray_intervals(&self, x: &[f64], d: &[f64]) -> IntervalUnion {
        let mut cand = Vec::new();
        self.crossings(x, d, &mut cand);
        cand.retain(|t| t.is_finite() && *t > 0.0);
        cand.sort_by(|a, b| a.partial_cmp(b).unwrap());
        cand.dedup();
        let mut y = vec![0.0; x.len()];
        let mut inside = |t: f64| {
            crate::vec::axpy(&mut y, x, t, d);
            self.contains(&y)
        };
        let mut parts = Vec::new();
        let mut lo = 0.0;
        for &t in &cand {
            if inside(0.5 * (lo + t)) {
                parts.push((lo, t));
            }
            lo = t;
        }
        let probe = if lo > 0.0 { 2.0 * lo + 1.0 } else { 1.0 };
        if inside(probe) {
            parts.push((lo, f64::INFINITY));
        }
        IntervalUnion::new(&parts)
    }

    /// A ball (center, radius) containing the set, if it is bounded.
    pub fn bounding_ball(&self) -> Option<(Vec<f64>, f64)> {
        match &self.shape {
            Shape::Ball { center, radius } => Some((center.clone(), *radius)),
            Shape::Intervals(u) if u.is_bounded() && !u.is_empty() => {
                let lo = u.parts()[0].0;
                let hi = u.parts()[u.parts().len() - 1].1;
                Some((vec![0.5 * (lo + hi)], 0.5 * (hi - lo)))
            }
            Shape::Difference(a, _) => a.bounding_ball(),
            Shape::Union(a, b) => {
                let (ca, ra) = a.bounding_ball()?;
                let (cb, rb) = b.bounding_ball()?;
                let r = crate::vec::dist(&ca, &cb) + ra.max(rb);
                Some((ca, r.max(ra)))
            }
            Shape::Scaled(a, l) => {
                let (c, r) = a.bounding_ball()?;
                Some((c.iter().map(|v| v * l).collect(), r * l))
            }
            Shape::Translated(a, v) => {
                let (c, r) = a.bounding_ball()?;
                Some((c.iter().zip(v).map(|(p, q)| p + q).collect(), r))
            }
            Shape::Rotated(a, phi) => {
                let (c, r) = a.bounding_ball()?;
                Some((rotate(&c, *phi).to_vec(), r))
            }
            _ => None,
        }
    }

    /// The set as a union of intervals (n = 1 only).
    pub fn as_intervals(&self) -> Result<IntervalUnion> {
        if self.n != 1 {
            return Err(Error::UnsupportedDimension(self.n));
        }
        Ok(match &self.shape {
            Shape::Intervals(u) => u.clone(),
            Shape::HalfSpace { normal, offset } => {
                let a = offset / normal[0];
                if normal[0] > 0.0 {
                    IntervalUnion::new(&[(a, f64::INFINITY)])
                } else {
                    IntervalUnion::new(&[(f64::NEG_INFINITY, a)])
                }
            }
            Shape::Ball { center, radius } => {
                IntervalUnion::new(&[(center[0] - radius, center[0] + radius)])
            }
            Shape::Difference(a, b) => a.as_intervals()?.difference(&b.as_intervals()?),
            Shape::Union(a, b) => a.as_intervals()?.union(&b.as_intervals()?),
            Shape::Complement(a) => a.as_intervals()?.complement(),
            Shape::Scaled(a, l) => {
                let u = a.as_intervals()?;
                let v: Vec<(f64, f64)> = u.parts().iter().map(|(p, q)| (p * l, q * l)).collect();
                IntervalUnion::new(&v)
            }
            Shape::Translated(a, v) => {
                let u = a.as_intervals()?;
                let w: Vec<(f64, f64)> =
                    u.parts().iter().map(|(p, q)| (p + v[0], q + v[0])).collect();
                IntervalUnion::new(&w)
            }
            _ => return Err(Error::UnsupportedDimension(1)),
        })
    }

    /// Angular measure of a cone (its asymptotic density), when the set is one.
    pub fn cone_opening(&self) -> Option<f64> {
        match &self.shape {
            Shape::Cone2D { arcs } => {
                let u = IntervalUnion::new(
                    &arcs
                        .iter()
                        .flat_map(|&(a, b)| {
                            let a0 = crate::rem_euclid(a, 2.0 * PI);
                            let b0 = a0 + (b - a);
                            [(a0, b0.min(2.0 * PI)), (0.0, (b0 - 2.0 * PI).max(0.0))]
                        })
                        .collect::<Vec<_>>(),
                );
                Some(u.measure())
            }
            Shape::ConeCap { half_angle, .. } if self.n == 2 => Some(2.0 * half_angle),
            Shape::ConeCap { half_angle, .. } if self.n == 3 => {
                Some(2.0 * PI * (1.0 - half_angle.cos()))
            }
            _ => None,
        }
    }
}

/// Named sets.
pub mod presets {
    use super::*;

    /// Supergraph of y^2.
    pub fn parabola() -> Graph {
        Graph::cubic("parabola", [0.0, 0.0, 1.0, 0.0])
    }

    /// Supergraph of y^3.
    pub fn cubic() -> Graph {
        Graph::cubic("cubic", [0.0, 0.0, 0.0, 1.0])
    }

    pub fn flat() -> Graph {
        Graph::cubic("flat", [0.0; 4])
    }

    /// Supergraph of tanh, a bounded graph.
    pub fn tanh() -> Graph {
        Graph::new(
            "tanh",
            Arc::new(|y: f64| y.tanh()),
            Arc::new(|y: f64| 1.0 / y.cosh().powi(2)),
            GraphGrowth::Sublinear {
                a: 1.0,
                b: 0.0,
                p: 0.0,
                feature: 0.0,
            },
        )
    }

    /// Supergraph of sqrt|y|.
    pub fn sqrt_sublinear() -> Graph {
        let mut g = Graph::new(
            "sqrt-sublinear",
            Arc::new(|y: f64| y.abs().sqrt()),
            Arc::new(|y: f64| if y == 0.0 { 0.0 } else { 0.5 * y.signum() / y.abs().sqrt() }),
            GraphGrowth::Sublinear {
                a: 0.0,
                b: 1.0,
                p: 0.5,
                feature: 0.0,
            },
        );
        g.holder = 0.0;
        g
    }

    fn root_band(c: f64, sign: f64) -> Graph {
        Graph::new(
            "root-band",
            Arc::new(move |y: f64| sign * c * y.abs().sqrt()),
            Arc::new(move |y: f64| {
                if y == 0.0 { 0.0 } else { sign * 0.5 * c * y.signum() / y.abs().sqrt() }
            }),
            GraphGrowth::Sublinear {
                a: 0.0,
                b: c,
                p: 0.5,
                feature: 0.0,
            },
        )
    }

    /// B_2 together with the band |y_2| < sqrt|y_1|: bounded core, sublinear wings.
    pub fn candy() -> GeomSet {
        let band = GeomSet::difference(
            GeomSet::supergraph(root_band(1.0, -1.0)),
            GeomSet::supergraph(root_band(1.0, 1.0)),
        )
        .unwrap();
        GeomSet::union(GeomSet::ball(vec![0.0, 0.0], 2.0).unwrap(), band).unwrap()
    }

    /// B_2 minus B_1(2 e_1); the point e_1 lies on the inner circle.
    pub fn dimple() -> GeomSet {
        GeomSet::difference(
            GeomSet::ball(vec![0.0, 0.0], 2.0).unwrap(),
            GeomSet::ball(vec![2.0, 0.0], 1.0).unwrap(),
        )
        .unwrap()
    }

    pub fn graph(name: &str) -> Option<Graph> {
        match name {
            "parabola" => Some(parabola()),
            "cubic" => Some(cubic()),
            "tanh" => Some(tanh()),
            "sqrt-sublinear" => Some(sqrt_sublinear()),
            "flat" => Some(flat()),
            _ => None,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn brute_intervals(e: &GeomSet, x: &[f64], d: &[f64], tmax: f64, n: usize) -> usize {
        // number of membership switches on a fine grid
        let mut y = vec![0.0; x.len()];
        let mut last = None;
        let mut switches = 0;
        for k in 1..=n {
            let t = tmax * k as f64 / n as f64;
            crate::vec::axpy(&mut y, x, t, d);
            let c = e.contains(&y);
            if let Some(l) = last {
                if l != c {
                    switches += 1;
                }
            }
            last = Some(c);
        }
        switches
    }

    #[test]
    fn cubic_roots() {
        // (t - 1)(t - 2)(t + 3) = t^3 - 7t + 6
        let r = poly_roots([6.0, -7.0, 0.0, 1.0]);
        assert_eq!(r.len(), 3);
        for (a, b) in r.iter().zip([-3.0, 1.0, 2.0]) {
            assert!((a - b).abs() < 1e-12);
        }
        assert_eq!(quadratic_roots(1.0, 0.0, 1.0), Vec::<f64>::new());
    }

    #[test]
    fn ray_intervals_of_a_ball() {
        let b = GeomSet::ball(vec![0.0, 0.0], 1.0).unwrap();
        let r = b.ray_intervals(&[-3.0, 0.0], &[1.0, 0.0]);
        assert_eq!(r.parts().len(), 1);
        assert!((r.parts()[0].0 - 2.0).abs() < 1e-15 && (r.parts()[0].1 - 4.0).abs() < 1e-15);
        let r = b.ray_intervals(&[0.0, 0.0], &[0.0, 1.0]);
        assert_eq!(r.parts(), &[(0.0, 1.0)]);
    }

    #[test]
    fn graph_crossings_match_brute_force() {
        let sets = [
            GeomSet::supergraph(presets::parabola()),
            GeomSet::supergraph(presets::cubic()),
            GeomSet::supergraph(presets::tanh()),
            GeomSet::supergraph(presets::sqrt_sublinear()),
            presets::candy(),
            presets::dimple(),
        ];
        let starts = [[0.3, -0.2], [-1.5, 0.7], [2.0, 3.0]];
        for e in &sets {
            for x in &starts {
                for k in 0..12 {
                    let a = 0.37 + k as f64 * 2.0 * PI / 12.0;
                    let d = [a.cos(), a.sin()];
                    let iv = e.ray_intervals(x, &d);
                    // boundary points within (0, 20] counted both ways
                    let inner: usize = iv
                        .parts()
                        .iter()
                        .map(|&(a, b)| (a > 0.0 && a <= 20.0) as usize + (b <= 20.0) as usize)
                        .sum();
                    assert_eq!(inner, brute_intervals(e, x, &d, 20.0, 200_000), "{e:?} {x:?} {k}");
                }
            }
        }
    }

    #[test]
    fn cone_membership_and_opening() {
        let c = GeomSet::cone2d(vec![(-0.5, 1.0)]).unwrap();
        assert!(c.contains(&[1.0, 0.0]));
        assert!(!c.contains(&[-1.0, 0.0]));
        assert!((c.cone_opening().unwrap() - 1.5).abs() < 1e-15);
        let r = c.ray_intervals(&[-2.0, 0.1], &[1.0, 0.0]);
        assert_eq!(r.parts().len(), 1);
        assert_eq!(r.parts()[0].1, f64::INFINITY);
    }
}
