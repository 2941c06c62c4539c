//! Potential theory on balls centered at the origin: fundamental solution,
//! s-mean and Poisson kernels, the Green function and the two Dirichlet
//! solvers built on them.

use alloc::vec;
use alloc::vec::Vec;

use crate::field::{Kink, ScalarField};
use crate::quad::{gauss_jacobi, GaussRule, integrate_pieces, integrate_power_tail, polar, split_at, Estimate, Piece, QuadSpec};
use crate::specfun::{beta, constants, ConstantTable};
use crate::vec::{dist, dot, norm, norm2};
use crate::{Error, FracParams, Result};
#[allow(unused_imports)]
use crate::prelude::*;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BallGeometry {
    pub r: f64,
    pub p: FracParams,
}

impl BallGeometry {
    pub fn new(r: f64, p: FracParams) -> Result<Self> {
        if !(r > 0.0 && r.is_finite()) {
            return Err(Error::Domain("ball radius must be positive"));
        }
        if p.n() > 3 {
            return Err(Error::UnsupportedDimension(p.n()));
        }
        Ok(BallGeometry { r, p })
    }

    pub fn kernels(&self) -> KernelFamily {
        KernelFamily {
            geom: *self,
            k: constants(self.p),
            incomplete: GreenIncomplete::new(self.p.n(), self.p.s()).ok(),
        }
    }

    fn check_interior(&self, x: &[f64]) -> Result<()> {
        if x.len() != self.p.n() {
            return Err(Error::Domain("point dimension differs from the ball"));
        }
        if !(norm(x) < self.r) {
            return Err(Error::Domain("point must lie in the open ball"));
        }
        Ok(())
    }
}

/// Phi(x) = a(n,s) |x|^{2s-n}, or -(1/pi) log|x| when n = 2s.
pub fn phi(x: &[f64], p: FracParams) -> Result<f64> {
    let d = norm(x);
    if d == 0.0 {
        return Err(Error::SingularPoint);
    }
    Ok(phi_radial(d, p, &constants(p)))
}

fn phi_radial(d: f64, p: FracParams, k: &ConstantTable) -> f64 {
    if p.is_critical() {
        k.a_fund * d.ln()
    } else {
        k.a_fund * d.powf(2.0 * p.s() - p.nf())
    }
}

/// r0(x, z) = (r^2 - |x|^2)(r^2 - |z|^2) / (r^2 |x - z|^2).
pub fn r0(r: f64, x: &[f64], z: &[f64]) -> f64 {
    let r2 = r * r;
    (r2 - norm2(x)) * (r2 - norm2(z)) / (r2 * dist(x, z).powi(2))
}

/// Fixed-rule evaluator of I(r0) = int_0^{r0} t^{s-1} (1 + t)^{-n/2} dt.
///
/// After the substitutions below every remaining factor is analytic on the
/// panel with its nearest singularity at distance one panel length, so a
/// single Gauss-Jacobi rule with the exact endpoint exponent is accurate to
/// rounding.
#[derive(Clone, Debug)]
pub struct GreenIncomplete {
    h: f64,
    s: f64,
    near: GaussRule,
    far: GaussRule,
    // beta(s, n/2 - s) for n > 2s; for n < 2s, I(1) + int_0^1 q(u) u^{-b} du - 1/b
    far_const: f64,
}

const GREEN_NODES: usize = 30;

fn rule_sum<F: Fn(f64) -> f64>(rule: &GaussRule, e: f64, b: f64, f: F) -> f64 {
    // int_0^b t^e f(t) dt with the rule for (1 + x)^e on [-1, 1]
    let half = 0.5 * b;
    let acc: f64 = rule
        .nodes
        .iter()
        .zip(rule.weights.iter())
        .map(|(x, w)| w * f(half * (x + 1.0)))
        .sum();
    acc * half.powf(e + 1.0)
}

impl GreenIncomplete {
    pub fn new(n: usize, s: f64) -> Result<Self> {
        let h = 0.5 * n as f64;
        if h == s {
            return Err(Error::Domain("logarithmic case has its own closed form"));
        }
        let near = gauss_jacobi(GREEN_NODES, 0.0, s - 1.0);
        let far_exp = if h > s { h - s - 1.0 } else { h - s };
        let far = gauss_jacobi(GREEN_NODES, 0.0, far_exp);
        let mut g = GreenIncomplete {
            h,
            s,
            near,
            far,
            far_const: 0.0,
        };
        g.far_const = if h > s {
            beta(s, h - s)?
        } else {
            let b = s - h;
            g.head(1.0) + rule_sum(&g.far, -b, 1.0, |u| g.q(u)) - 1.0 / b
        };
        Ok(g)
    }

    fn head(&self, b: f64) -> f64 {
        let h = self.h;
        rule_sum(&self.near, self.s - 1.0, b, |t| (1.0 + t).powf(-h))
    }

    // ((1 + u)^{-n/2} - 1) / u
    fn q(&self, u: f64) -> f64 {
        if u == 0.0 {
            -self.h
        } else {
            (-self.h * u.ln_1p()).exp_m1() / u
        }
    }

    pub fn eval(&self, r0: f64) -> f64 {
        if !(r0 > 0.0) {
            return 0.0;
        }
        if r0 <= 1.0 {
            return self.head(r0);
        }
        // t = 1/u on [1, r0]: int_{1/r0}^1 u^{n/2 - s - 1} (1 + u)^{-n/2} du
        let (h, s) = (self.h, self.s);
        let w = 1.0 / r0;
        if h > s {
            let e = h - s - 1.0;
            self.far_const - rule_sum(&self.far, e, w, |u| (1.0 + u).powf(-h))
        } else {
            // split off the leading u^{-b-1} term, b = s - n/2
            let b = s - h;
            self.far_const + r0.powf(b) / b - rule_sum(&self.far, -b, w, |u| self.q(u))
        }
    }
}

pub fn green_incomplete(n: usize, s: f64, r0: f64) -> Result<f64> {
    Ok(GreenIncomplete::new(n, s)?.eval(r0))
}

/// The kernels of one ball, with their constants computed once.
#[derive(Clone, Debug)]
pub struct KernelFamily {
    pub geom: BallGeometry,
    pub k: ConstantTable,
    incomplete: Option<GreenIncomplete>,
}

impl KernelFamily {
    pub fn phi(&self, x: &[f64]) -> Result<f64> {
        let d = norm(x);
        if d == 0.0 {
            return Err(Error::SingularPoint);
        }
        Ok(phi_radial(d, self.geom.p, &self.k))
    }

    /// s-mean kernel c r^{2s} / ((|y|^2 - r^2)^s |y|^n), zero on the closed ball.
    pub fn a_r(&self, y: &[f64]) -> f64 {
        let (r, s, n) = (self.geom.r, self.geom.p.s(), self.geom.p.nf());
        let d = norm(y);
        if d <= r {
            return 0.0;
        }
        self.k.c_kernel * r.powf(2.0 * s) / (((d - r) * (d + r)).powf(s) * d.powf(n))
    }

    /// Poisson kernel c ((r^2 - |x|^2)/(|y|^2 - r^2))^s / |x - y|^n for |x| < r < |y|.
    pub fn p_r(&self, y: &[f64], x: &[f64]) -> f64 {
        let (r, s, n) = (self.geom.r, self.geom.p.s(), self.geom.p.nf());
        let d = norm(y);
        if d <= r {
            return 0.0;
        }
        let inner = r * r - norm2(x);
        self.k.c_kernel * (inner / ((d - r) * (d + r))).powf(s) / dist(x, y).powf(n)
    }

    pub fn r0(&self, x: &[f64], z: &[f64]) -> f64 {
        r0(self.geom.r, x, z)
    }

    pub fn green(&self, x: &[f64], z: &[f64]) -> Result<f64> {
        self.geom.check_interior(x)?;
        self.geom.check_interior(z)?;
        let d = dist(x, z);
        if d == 0.0 {
            return Err(Error::SingularPoint);
        }
        let r = self.geom.r;
        let r2 = r * r;
        self.green_parts(d, r2 - norm2(x), r2 - norm2(z), dot(x, z))
    }

    /// Green function from |x - z|, r^2 - |x|^2, r^2 - |z|^2 and x.z, which
    /// callers near the boundary can supply without cancellation.
    fn green_parts(&self, d: f64, ix: f64, iz: f64, xz: f64) -> Result<f64> {
        let p = self.geom.p;
        let r = self.geom.r;
        if p.is_critical() {
            let num = r * r - xz + (ix * iz).sqrt();
            return Ok(self.k.kappa * (num / (r * d)).ln());
        }
        let rr0 = ix * iz / (r * r * d * d);
        let inc = self.incomplete.as_ref().ok_or(Error::Domain("missing incomplete integral"))?;
        Ok(self.k.kappa * d.powf(2.0 * p.s() - p.nf()) * inc.eval(rr0))
    }
}

pub fn green(g: &BallGeometry, x: &[f64], z: &[f64]) -> Result<f64> {
    g.kernels().green(x, z)
}

/// Description of an integral over the complement of B_r of
/// F(y) (|y|^2 - r^2)^{boundary_power}.
pub(crate) struct Exterior<'a> {
    pub r: f64,
    pub boundary_power: f64,
    /// Decay of F(y) (|y|^2 - r^2)^q |y|^{n-1} along rays.
    pub decay: f64,
    /// F vanishes for |y| beyond this radius.
    pub support: Option<f64>,
    /// Spheres where F is not smooth.
    pub kinks: &'a [Kink],
    /// A point outside the closed ball where F ~ |y - p|^e (e = 0 for a log).
    pub singular: Option<(&'a [f64], f64)>,
}

fn angle_of(v: &[f64]) -> f64 {
    v[1].atan2(v[0])
}

pub(crate) fn exterior_integral<F: FnMut(&[f64]) -> f64>(
    n: usize,
    mut f: F,
    ex: &Exterior<'_>,
    spec: &QuadSpec,
) -> Result<Estimate> {
    if n == 0 || n > 3 {
        return Err(Error::UnsupportedDimension(n));
    }
    let r = ex.r;
    let q = ex.boundary_power;
    let inner = spec.scaled(0.1);
    let origin = vec![0.0; n];
    let mut kinks: Vec<Kink> = ex.kinks.to_vec();
    let mut total = Estimate::exact(0.0);
    let mut breaks: Vec<f64> = Vec::new();
    let mut hole: Option<(Vec<f64>, f64)> = None;

    if let Some((p, e)) = ex.singular {
        let pn = norm(p);
        if !(pn > r) {
            return Err(Error::Domain("singular point must lie outside the ball"));
        }
        let delta = 0.5 * (pn - r).min(r);
        // small disk about p in polar coordinates centered there
        let left = e + (n - 1) as f64;
        let mut y = vec![0.0; n];
        let mut err: Option<Error> = None;
        let disk = polar(
            n,
            &[],
            |d| {
                let piece = if left > -1.0 && left != 0.0 {
                    Piece::new(0.0, delta, left, 0.0)
                } else {
                    Piece::plain(0.0, delta)
                };
                let lw = piece.left;
                let res = integrate_pieces(
                    |t: f64| {
                        crate::vec::axpy(&mut y, p, t, d);
                        let rho = norm(&y);
                        let w = ((rho - r) * (rho + r)).powf(q);
                        let v = f(&y) * w * t.powi((n - 1) as i32);
                        if lw != 0.0 {
                            v * t.powf(-lw)
                        } else {
                            v
                        }
                    },
                    &[piece],
                    &inner,
                );
                match res {
                    Ok(e) => Ok(e.value),
                    Err(e2) => {
                        err = Some(e2.clone());
                        Err(e2)
                    }
                }
            },
            spec,
        )?;
        if let Some(e) = err {
            return Err(e);
        }
        total = total.add(disk);
        if n == 2 {
            let th = angle_of(p);
            let half = (delta / pn).asin();
            breaks.extend_from_slice(&[th - half, th, th + half]);
        }
        kinks.push(Kink {
            center: p.to_vec(),
            radius: delta,
            exponent: 0.0,
        });
        hole = Some((p.to_vec(), delta));
    }
    let mut y = vec![0.0; n];
    let mut cr: Vec<f64> = Vec::new();
    let mut f_masked = |y: &[f64]| match &hole {
        Some((c, d)) if dist(y, c) < *d => 0.0,
        _ => f(y),
    };
    let nm1 = (n - 1) as i32;
    let outer = polar(
        n,
        &breaks,
        |d| {
            cr.clear();
            for k in &kinks {
                k.ray_crossings(&origin, d, &mut cr);
            }
            cr.retain(|&c| c > r * (1.0 + 1e-12));
            cr.sort_by(|a, b| a.total_cmp(b));
            let mut b1 = 2.0 * r;
            if let Some(&c) = cr.first() {
                b1 = b1.min(c);
            }
            if let Some(sr) = ex.support {
                if sr <= r {
                    return Ok(0.0);
                }
                b1 = b1.min(sr);
            }
            let mut acc = integrate_pieces(
                |rho: f64| {
                    for i in 0..n {
                        y[i] = rho * d[i];
                    }
                    let v = f_masked(&y);
                    if v == 0.0 {
                        0.0
                    } else {
                        v * (rho + r).powf(q) * rho.powi(nm1)
                    }
                },
                &[Piece::new(r, b1, q, 0.0)],
                &inner,
            )?
            .value;
            let mut body = |rho: f64| {
                for i in 0..n {
                    y[i] = rho * d[i];
                }
                let v = f_masked(&y);
                if v == 0.0 {
                    0.0
                } else {
                    v * ((rho - r) * (rho + r)).powf(q) * rho.powi(nm1)
                }
            };
            let (big, tail) = match ex.support {
                Some(sr) => (sr, false),
                None => {
                    let far = cr.last().copied().unwrap_or(0.0);
                    ((4.0 * r).max(2.0 * far), true)
                }
            };
            if big > b1 {
                acc += integrate_pieces(&mut body, &split_at(b1, big, &cr), &inner)?.value;
            }
            if tail {
                acc += integrate_power_tail(&mut body, big.max(b1), ex.decay, &inner)?.value;
            }
            Ok(acc)
        },
        spec,
    )?;
    Ok(total.add(outer))
}

fn data_decay(g: &ScalarField, s: f64) -> Result<f64> {
    if g.growth_exponent >= 2.0 * s && g.support_radius.is_none() {
        return Err(Error::Integrability("exterior data must grow slower than |y|^{2s}"));
    }
    Ok(1.0 + 2.0 * s - g.growth_exponent)
}

/// u(x) = int_{|y| > r} P_r(y, x) g(y) dy for |x| < r.
///
/// The data field is read only outside the ball.
pub fn solve_dirichlet(
    g_data: &ScalarField,
    geom: &BallGeometry,
    x: &[f64],
    spec: &QuadSpec,
) -> Result<Estimate> {
    spec.validate()?;
    geom.check_interior(x)?;
    let p = geom.p;
    let s = p.s();
    let decay = data_decay(g_data, s)?;
    let kf = geom.kernels();
    let r = geom.r;
    let n = p.n();
    let pre = kf.k.c_kernel * (r * r - norm2(x)).powf(s);
    let ex = Exterior {
        r,
        boundary_power: -s,
        decay,
        support: g_data.support_radius,
        kinks: &g_data.kinks,
        singular: None,
    };
    let e = exterior_integral(
        n,
        |y| {
            let v = g_data.eval(y);
            if v == 0.0 {
                0.0
            } else {
                v / dist(x, y).powi(n as i32)
            }
        },
        &ex,
        spec,
    )?;
    Ok(e.scale(pre))
}

/// u(x) = int_{|y| > rho} A_rho(y) u(x - y) dy, the s-mean of u at x.
pub fn s_mean(
    u: &ScalarField,
    x: &[f64],
    rho: f64,
    p: FracParams,
    spec: &QuadSpec,
) -> Result<Estimate> {
    spec.validate()?;
    let geom = BallGeometry::new(rho, p)?;
    if x.len() != p.n() || u.dim != p.n() {
        return Err(Error::Domain("point, field and parameters disagree on the dimension"));
    }
    let s = p.s();
    let decay = data_decay(u, s)?;
    let kf = geom.kernels();
    let n = p.n();
    // kinks of y -> u(x - y) are the kinks of u reflected through x
    let kinks: Vec<Kink> = u
        .kinks
        .iter()
        .map(|k| Kink {
            center: x.iter().zip(&k.center).map(|(a, c)| a - c).collect(),
            ..k.clone()
        })
        .collect();
    let support = u.support_radius.map(|sr| sr + norm(x));
    let ex = Exterior {
        r: rho,
        boundary_power: -s,
        decay,
        support,
        kinks: &kinks,
        singular: None,
    };
    let mut z = vec![0.0; n];
    let e = exterior_integral(
        n,
        |y| {
            for i in 0..n {
                z[i] = x[i] - y[i];
            }
            let v = u.eval(&z);
            if v == 0.0 {
                0.0
            } else {
                v / norm(y).powi(n as i32)
            }
        },
        &ex,
        spec,
    )?;
    Ok(e.scale(kf.k.c_kernel * rho.powf(2.0 * s)))
}

/// u(x) = int_{B_r} h(y) G(x, y) dy, the solution with forcing h and zero
/// exterior data.
pub fn solve_poisson(
    h: &ScalarField,
    geom: &BallGeometry,
    x: &[f64],
    spec: &QuadSpec,
) -> Result<Estimate> {
    spec.validate()?;
    geom.check_interior(x)?;
    let p = geom.p;
    let (n, s) = (p.n(), p.s());
    let kf = geom.kernels();
    let r = geom.r;
    let ix = r * r - norm2(x);
    let nm1 = (n - 1) as i32;
    // near y = x the Green function behaves like |x - y|^{2s-n}
    let left = if p.is_critical() || p.nf() < 2.0 * s {
        0.0
    } else {
        2.0 * s - 1.0
    };
    let mut y = vec![0.0; n];
    let mut fail: Option<Error> = None;
    let inner = spec.scaled(0.1);
    let e = polar(
        n,
        &[],
        |d| {
            let b = dot(x, d);
            let root = (b * b + ix).sqrt();
            let t_max = -b + root;
            let t_o = b + root;
            let piece = Piece::new(0.0, t_max, left, s);
            let res = integrate_pieces(
                |t: f64| {
                    crate::vec::axpy(&mut y, x, t, d);
                    let hv = h.eval(&y);
                    if hv == 0.0 || t == 0.0 {
                        return 0.0;
                    }
                    // r^2 - |y|^2 = (t_max - t)(t + t_o) without cancellation
                    let iy = (t_max - t) * (t + t_o);
                    let xy = dot(x, &y);
                    match kf.green_parts(t, ix, iy, xy) {
                        Ok(gv) => {
                            let mut v = hv * gv * t.powi(nm1) / (t_max - t).powf(s);
                            if left != 0.0 {
                                v *= t.powf(-left);
                            }
                            v
                        }
                        Err(e) => {
                            fail = Some(e);
                            0.0
                        }
                    }
                },
                &[piece],
                &inner,
            )?;
            Ok(res.value)
        },
        spec,
    )?;
    if let Some(err) = fail {
        return Err(err);
    }
    Ok(e)
}

/// c(n,s) int_{B_r} (r^2 - |y|^2)^{-s} |x - y|^{2s-n} dy, equal to 1 for |x| < r.
pub fn interior_kernel_mass(geom: &BallGeometry, x: &[f64], spec: &QuadSpec) -> Result<Estimate> {
    geom.check_interior(x)?;
    let s = geom.p.s();
    let r = geom.r;
    let ix = r * r - norm2(x);
    let c = geom.kernels().k.c_kernel;
    let e = polar(
        geom.p.n(),
        &[],
        |d| {
            let b = dot(x, d);
            let root = (b * b + ix).sqrt();
            let (t_max, t_o) = (-b + root, b + root);
            Ok(integrate_pieces(
                |t: f64| (t + t_o).powf(-s),
                &[Piece::new(0.0, t_max, 2.0 * s - 1.0, -s)],
                &spec.scaled(0.1),
            )?
            .value)
        },
        spec,
    )?;
    Ok(e.scale(c))
}

/// int_{|y| > r} A_r(y) dy, equal to 1.
pub fn s_mean_kernel_mass(geom: &BallGeometry, spec: &QuadSpec) -> Result<Estimate> {
    let n = geom.p.n();
    s_mean(&crate::field::presets::constant(n, 1.0), &vec![0.0; n], geom.r, geom.p, spec)
}

/// int_{|y| > r} P_r(y, x) dy, equal to 1.
pub fn poisson_kernel_mass(geom: &BallGeometry, x: &[f64], spec: &QuadSpec) -> Result<Estimate> {
    solve_dirichlet(&crate::field::presets::constant(geom.p.n(), 1.0), geom, x, spec)
}

/// int_{|y| > r} A_r(y) Phi(x - y) dy, which reproduces Phi(x) for |x| > r.
pub fn s_mean_of_phi(geom: &BallGeometry, x: &[f64], spec: &QuadSpec) -> Result<Estimate> {
    poisson_of_phi(geom, &vec![0.0; geom.p.n()], x, spec)
}

/// int_{|y| > r} P_r(y, x0) Phi(x - y) dy, which reproduces Phi(x - x0) for
/// |x0| < r < |x|.
pub fn poisson_of_phi(geom: &BallGeometry, x0: &[f64], x: &[f64], spec: &QuadSpec) -> Result<Estimate> {
    geom.check_interior(x0)?;
    let p = geom.p;
    let (n, s) = (p.n(), p.s());
    if x.len() != n {
        return Err(Error::Domain("point dimension differs from the ball"));
    }
    let kf = geom.kernels();
    let r = geom.r;
    let pre = kf.k.c_kernel * (r * r - norm2(x0)).powf(s);
    let exponent = if p.is_critical() { 0.0 } else { 2.0 * s - p.nf() };
    // P_r Phi |y|^{n-1} ~ |y|^{-1-n}; at n = 2s a log factor, covered by a
    // slightly smaller exponent
    let decay = if p.is_critical() { 1.9 } else { 1.0 + p.nf() };
    let mut z = vec![0.0; n];
    let ex = Exterior {
        r,
        boundary_power: -s,
        decay,
        support: None,
        kinks: &[],
        singular: if norm(x) > r { Some((x, exponent)) } else { None },
    };
    let e = exterior_integral(
        n,
        |y| {
            for i in 0..n {
                z[i] = x[i] - y[i];
            }
            let d = norm(&z);
            if d == 0.0 {
                return 0.0;
            }
            phi_radial(d, p, &kf.k) / dist(x0, y).powi(n as i32)
        },
        &ex,
        spec,
    )?;
    Ok(e.scale(pre))
}

/// The Green function through its defining formula
/// Phi(x - z) - int_{|y| > r} Phi(z - y) P_r(y, x) dy, as an independent check
/// of the closed form.
pub fn green_by_convolution(geom: &BallGeometry, x: &[f64], z: &[f64], spec: &QuadSpec) -> Result<Estimate> {
    geom.check_interior(z)?;
    let kf = geom.kernels();
    let d = dist(x, z);
    if d == 0.0 {
        return Err(Error::SingularPoint);
    }
    let conv = poisson_of_phi(geom, x, z, spec)?;
    Ok(conv.scale(-1.0).shift(phi_radial(d, geom.p, &kf.k)))
}
