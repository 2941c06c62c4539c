//! Fractional mean curvature in the plane: the graph representation and the
//! deleted-ball principal value.

use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::PI;

use super::perimeter::radial_mass;
use super::set::{GeomSet, Graph, GraphFn, Shape};
use crate::quad::{gauss_legendre, integrate_1d, integrate_singular, integrate_with_breaks, GaussRule, Piece, Weight};
use crate::{check_order, Error, Estimate, QuadSpec, Result};
#[allow(unused_imports)]
use crate::prelude::*;

/// Boundary near q written as a graph over the tangent line:
/// y = q + z tangent + w normal, and E is {w > v(z)} inside the cylinder.
#[derive(Clone)]
pub struct LocalGraph {
    pub q: [f64; 2],
    pub tangent: [f64; 2],
    /// Points into E.
    pub normal: [f64; 2],
    v: GraphFn,
    /// v'(0)
    pub slope: f64,
    /// Holder exponent of v'.
    pub holder: f64,
    /// Largest |z| for which v is defined.
    pub reach: f64,
}

impl core::fmt::Debug for LocalGraph {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        f.debug_struct("LocalGraph")
            .field("q", &self.q)
            .field("normal", &self.normal)
            .field("slope", &self.slope)
            .finish()
    }
}

impl LocalGraph {
    pub fn eval(&self, z: f64) -> f64 {
        (self.v)(z)
    }

    /// Supergraph of `g` seen from (q1, g(q1)).
    pub fn of_supergraph(g: &Graph, q1: f64) -> Self {
        let g0 = g.clone();
        let base = g.eval(q1);
        LocalGraph {
            q: [q1, base],
            tangent: [1.0, 0.0],
            normal: [0.0, 1.0],
            v: Arc::new(move |z| g0.eval(q1 + z) - base),
            slope: g.slope(q1),
            holder: g.holder,
            reach: f64::INFINITY,
        }
    }

    fn circle(center: [f64; 2], radius: f64, q: [f64; 2], inside: bool) -> Result<Self> {
        let dx = [q[0] - center[0], q[1] - center[1]];
        let len = (dx[0] * dx[0] + dx[1] * dx[1]).sqrt();
        if !(radius > 0.0) || (len - radius).abs() > 1e-12 * radius.max(1.0) {
            return Err(Error::Domain("q must lie on the circle"));
        }
        let out = [dx[0] / len, dx[1] / len];
        let sign = if inside { 1.0 } else { -1.0 };
        let normal = [-sign * out[0], -sign * out[1]];
        // (tangent, normal) positively oriented
        let tangent = [normal[1], -normal[0]];
        Ok(LocalGraph {
            q,
            tangent,
            normal,
            v: Arc::new(move |z: f64| {
                let w = z * z / (radius + (radius * radius - z * z).max(0.0).sqrt());
                sign * w
            }),
            slope: 0.0,
            holder: 1.0,
            reach: radius,
        })
    }

    /// E is the disk; q on its boundary.
    pub fn ball(center: [f64; 2], radius: f64, q: [f64; 2]) -> Result<Self> {
        Self::circle(center, radius, q, true)
    }

    /// E is outside the disk near q.
    pub fn ball_exterior(center: [f64; 2], radius: f64, q: [f64; 2]) -> Result<Self> {
        Self::circle(center, radius, q, false)
    }
}

/// Cylinder dimensions and tolerances for the graph formula.
#[derive(Clone, Copy, Debug)]
pub struct CurvatureQuery {
    pub r: f64,
    pub h: f64,
    pub spec: QuadSpec,
}

impl CurvatureQuery {
    pub fn new(r: f64, h: f64) -> Self {
        CurvatureQuery {
            r,
            h,
            spec: QuadSpec::new(1e-10, 1e-12),
        }
    }

    /// r = h = a quarter of the local radius of curvature.
    pub fn for_radius(curvature_radius: f64) -> Self {
        Self::new(0.25 * curvature_radius, 0.25 * curvature_radius)
    }
}

/// G_s(a) - G_s(b) for n = 2, as the integral of cos^s over (atan b, atan a).
fn g_difference(s: f64, a: f64, b: f64, rule: &GaussRule) -> f64 {
    let (hi, lo) = (a.atan(), b.atan());
    if hi == lo {
        return 0.0;
    }
    if hi.abs().max(lo.abs()) < 1.0 {
        let (m, h) = (0.5 * (hi + lo), 0.5 * (hi - lo));
        rule.nodes
            .iter()
            .zip(&rule.weights)
            .map(|(x, w)| w * (m + h * x).cos().powf(s))
            .sum::<f64>()
            * h
    } else {
        let (l, u, sign) = if lo < hi { (lo, hi, 1.0) } else { (hi, lo, -1.0) };
        let spec = QuadSpec::new(1e-13, 1e-15);
        sign * integrate_1d(|p| p.cos().max(0.0).powf(s), l, u, Weight::None, &spec)
            .map(|e| e.value)
            .unwrap_or(f64::NAN)
    }
}

/// Fractional mean curvature of E at q from its local graph, n = 2:
/// 2 int_{-r}^{r} [G_s(v(z)/|z|) - G_s(v'(0) sgn z)] |z|^{-1-s} dz plus the
/// exact kernel integral of chi_CE - chi_E outside the cylinder.
pub fn frac_mean_curvature_graph(
    e: &GeomSet,
    graph: &LocalGraph,
    s: f64,
    query: &CurvatureQuery,
) -> Result<Estimate> {
    check_order(s)?;
    if e.n != 2 {
        return Err(Error::UnsupportedDimension(e.n));
    }
    if s >= graph.holder {
        return Err(Error::Regularity("order must stay below the Holder exponent of the gradient"));
    }
    let (r, h) = (query.r, query.h);
    if !(r > 0.0 && h > 0.0) || r >= graph.reach {
        return Err(Error::Domain("cylinder dimensions must be positive and inside the chart"));
    }
    for k in 0..=200 {
        let z = -r + 2.0 * r * k as f64 / 200.0;
        if graph.eval(z).abs() >= h {
            return Err(Error::Domain("graph leaves the cylinder"));
        }
    }
    let spec = &query.spec;
    let rule = gauss_legendre(16);
    let slope = graph.slope;
    let bracket = |z: f64| {
        let az = z.abs();
        let sg = if z > 0.0 { 1.0 } else { -1.0 };
        g_difference(s, graph.eval(z) / az, slope * sg, &rule) * az.powf(-1.0 - s)
    };
    let pieces = [Piece::new(-r, 0.0, 0.0, -s), Piece::new(0.0, r, -s, 0.0)];
    let inner = integrate_singular(bracket, &pieces, spec)?.scale(2.0);

    let dir = |theta: f64| {
        let (sn, cs) = theta.sin_cos();
        [
            cs * graph.tangent[0] + sn * graph.normal[0],
            cs * graph.tangent[1] + sn * graph.normal[1],
        ]
    };
    let outer_f = |theta: f64| {
        let (sn, cs) = theta.sin_cos();
        let exit = (r / cs.abs()).min(h / sn.abs());
        let iv = e.ray_intervals(&graph.q, &dir(theta)).clip(exit, f64::INFINITY);
        exit.powf(-s) / s - 2.0 * radial_mass(&iv, s)
    };
    let corner = h.atan2(r);
    let mut breaks = vec![corner, PI - corner, PI + corner, 2.0 * PI - corner, PI];
    for z in [r, -r] {
        breaks.push(crate::rem_euclid(graph.eval(z).atan2(z), 2.0 * PI));
    }
    breaks.retain(|t| *t > 0.0 && *t < 2.0 * PI);
    breaks.sort_by(|a, b| a.partial_cmp(b).unwrap());
    breaks.dedup();
    let outer = integrate_with_breaks(outer_f, 0.0, 2.0 * PI, &breaks, spec)?;
    Ok(inner.add(outer))
}

/// Graph curvature of a supergraph at (q1, u(q1)), with E the whole supergraph.
pub fn frac_mean_curvature_supergraph(
    g: &Graph,
    q1: f64,
    s: f64,
    query: &CurvatureQuery,
) -> Result<Estimate> {
    let e = GeomSet::supergraph(g.clone());
    frac_mean_curvature_graph(&e, &LocalGraph::of_supergraph(g, q1), s, query)
}

/// A ball tangent to the boundary at q, inside E or inside CE.
#[derive(Clone, Debug, PartialEq)]
pub struct TangentBall {
    pub center: Vec<f64>,
    pub radius: f64,
}

/// Truncated curvature I_s^rho[E](q) = int_{C B_rho(q)} (chi_CE - chi_E)|y - q|^{-2-s}.
pub fn curvature_truncated(
    e: &GeomSet,
    q: &[f64],
    s: f64,
    rho: f64,
    tangent: &TangentBall,
    spec: &QuadSpec,
) -> Result<Estimate> {
    check_order(s)?;
    if e.n != 2 || q.len() != 2 {
        return Err(Error::UnsupportedDimension(e.n));
    }
    if !(rho > 0.0) {
        return Err(Error::Domain("deleted-ball radius must be positive"));
    }
    let nx = q[0] - tangent.center[0];
    let ny = q[1] - tangent.center[1];
    if !(nx * nx + ny * ny > 0.0) {
        return Err(Error::Domain("tangent ball center coincides with q"));
    }
    // the integrand is steep near the tangent directions, where the rays
    // graze the boundary; the kinks sit at angle ~asin(rho / 2R) from them
    let base = ny.atan2(nx) + 0.5 * PI;
    let d0 = (rho / (2.0 * tangent.radius)).min(1.0).asin();
    let mut breaks = vec![base + PI];
    for t in [base, base + PI, base + 2.0 * PI] {
        let mut off = d0 / 16.0;
        while off < 0.5 * PI {
            breaks.push(t - off);
            breaks.push(t + off);
            off *= 2.0;
        }
    }
    breaks.retain(|t| *t > base && *t < base + 2.0 * PI);
    breaks.sort_by(|a, b| a.partial_cmp(b).unwrap());
    breaks.dedup();
    let f = |theta: f64| {
        let (sn, cs) = theta.sin_cos();
        let iv = e.ray_intervals(q, &[cs, sn]).clip(rho, f64::INFINITY);
        rho.powf(-s) / s - 2.0 * radial_mass(&iv, s)
    };
    integrate_with_breaks(f, base, base + 2.0 * PI, &breaks, spec)
}

/// Default deleted-ball radii for the principal value.
pub const PV_GRID: [f64; 6] = [0.2, 0.1, 0.05, 0.025, 0.0125, 0.00625];

/// Principal-value curvature from truncations on a geometric radius grid.
///
/// For a boundary with a tangent ball the truncation error expands in
/// rho^{1-s}, rho^{3-s}, rho^{5-s}; those terms are eliminated in turn and
/// the last two extrapolants must agree (plateau) or NoPlateau is raised.
pub fn frac_mean_curvature_pv(
    e: &GeomSet,
    q: &[f64],
    s: f64,
    tangent: &TangentBall,
    rho_grid: &[f64],
    spec: &QuadSpec,
) -> Result<Estimate> {
    if rho_grid.len() < 3 || rho_grid.windows(2).any(|w| !(w[1] < w[0] && w[1] > 0.0)) {
        return Err(Error::Domain("need at least three decreasing radii"));
    }
    let ratio = rho_grid[1] / rho_grid[0];
    if rho_grid.windows(2).any(|w| (w[1] / w[0] - ratio).abs() > 1e-9) {
        return Err(Error::Domain("radius grid must be geometric"));
    }
    let mut vals = Vec::with_capacity(rho_grid.len());
    let mut nodes = 0;
    let mut converged = true;
    for &rho in rho_grid {
        let est = curvature_truncated(e, q, s, rho, tangent, spec)?;
        nodes += est.samples_or_nodes;
        converged &= est.converged;
        vals.push(est.value);
    }
    let levels = 3.min(rho_grid.len() - 2);
    let mut col = vals;
    for k in 0..levels {
        let p = (2 * k + 1) as f64 - s;
        col = (0..col.len() - 1)
            .map(|i| {
                let q = ratio.powf(p);
                (col[i + 1] - q * col[i]) / (1.0 - q)
            })
            .collect();
    }
    let last = col[col.len() - 1];
    let previous = col[col.len() - 2];
    let gap = (last - previous).abs();
    if !(gap <= PV_PLATEAU * last.abs().max(1.0)) {
        return Err(Error::NoPlateau { last, previous });
    }
    Ok(Estimate {
        value: last,
        stderr: gap,
        samples_or_nodes: nodes,
        converged,
    })
}

/// Relative agreement required between the last two extrapolants.
pub const PV_PLATEAU: f64 = 1e-6;

/// Truncations without extrapolation, for inspection.
pub fn curvature_truncations(
    e: &GeomSet,
    q: &[f64],
    s: f64,
    tangent: &TangentBall,
    rho_grid: &[f64],
    spec: &QuadSpec,
) -> Result<Vec<f64>> {
    rho_grid
        .iter()
        .map(|&rho| curvature_truncated(e, q, s, rho, tangent, spec).map(|e| e.value))
        .collect()
}

/// Local graph, tangent ball and curvature radius at a boundary point q of
/// a disk, a supergraph, or a set whose boundary near q is the sphere of a
/// removed or complemented disk.
pub fn boundary_chart(e: &GeomSet, q: &[f64]) -> Result<(LocalGraph, TangentBall, f64)> {
    if e.n != 2 || q.len() != 2 {
        return Err(Error::UnsupportedDimension(e.n));
    }
    let qq = [q[0], q[1]];
    let on_circle = |c: &[f64], r: f64| ((q[0] - c[0]).hypot(q[1] - c[1]) - r).abs() <= 1e-9 * r;
    let disk = |c: &[f64], r: f64, inside: bool| -> Result<(LocalGraph, TangentBall, f64)> {
        let cc = [c[0], c[1]];
        let g = if inside {
            LocalGraph::ball(cc, r, qq)?
        } else {
            LocalGraph::ball_exterior(cc, r, qq)?
        };
        let tb = TangentBall {
            center: c.to_vec(),
            radius: r,
        };
        Ok((g, tb, r))
    };
    match &e.shape {
        Shape::Ball { center, radius } if on_circle(center, *radius) => disk(center, *radius, true),
        Shape::Complement(inner) => match &inner.shape {
            Shape::Ball { center, radius } if on_circle(center, *radius) => disk(center, *radius, false),
            _ => Err(Error::Domain("no boundary chart for this set at q")),
        },
        Shape::Difference(_, cut) => match &cut.shape {
            Shape::Ball { center, radius } if on_circle(center, *radius) => disk(center, *radius, false),
            _ => Err(Error::Domain("no boundary chart for this set at q")),
        },
        Shape::Supergraph(g) => {
            if (g.eval(q[0]) - q[1]).abs() > 1e-9 * (1.0 + q[1].abs()) {
                return Err(Error::Domain("point is not on the graph"));
            }
            let m = g.slope(q[0]);
            let len = (1.0 + m * m).sqrt();
            let tb = TangentBall {
                center: vec![q[0] - m / len, q[1] + 1.0 / len],
                radius: 1.0,
            };
            Ok((LocalGraph::of_supergraph(g, q[0]), tb, 1.0))
        }
        _ => Err(Error::Domain("no boundary chart for this set at q")),
    }
}
