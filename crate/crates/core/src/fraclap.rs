//! Pointwise fractional Laplacian.
//!
//! Two independent evaluators: the second-difference singular integral and
//! the heat-semigroup formula. They share nothing but the field, which makes
//! them useful as oracles for each other.

use alloc::vec::Vec;
use core::f64::consts::PI;

use crate::field::ScalarField;
use crate::quad::{integrate_pieces, integrate_power_tail, polar, split_at, Estimate, Piece, QuadSpec};
use crate::specfun::{c_frac, gamma};
use crate::{Error, FracParams, Result};
#[allow(unused_imports)]
use crate::prelude::*;

fn check_field(f: &ScalarField, x: &[f64], p: FracParams) -> Result<()> {
    if f.dim != p.n() || x.len() != p.n() {
        return Err(Error::Domain("field, point and parameters disagree on the dimension"));
    }
    if p.n() > 3 {
        return Err(Error::UnsupportedDimension(p.n()));
    }
    if f.kink_distance(x) < 1e-12 {
        return Err(Error::Domain("evaluation point lies on a kink of the field"));
    }
    Ok(())
}

/// Kink crossings of the two rays x + t d and x - t d, sorted.
fn crossings(f: &ScalarField, x: &[f64], d: &[f64]) -> Vec<f64> {
    let mut out = Vec::new();
    let mut back = [0.0; 8];
    for (b, v) in back.iter_mut().zip(d) {
        *b = -v;
    }
    for k in &f.kinks {
        k.ray_crossings(x, d, &mut out);
        k.ray_crossings(x, &back[..d.len()], &mut out);
    }
    out.sort_by(|a, b| a.total_cmp(b));
    out
}

/// int_0^inf (2 f(x) - f(x + t d) - f(x - t d)) t^{-1-2s} dt.
fn radial_second_difference(
    f: &ScalarField,
    x: &[f64],
    d: &[f64],
    s: f64,
    spec: &QuadSpec,
) -> Result<Estimate> {
    let n = x.len();
    let fx = f.eval(x);
    let cr = crossings(f, x, d);
    let mut y = [0.0; 8];
    let mut z = [0.0; 8];
    let mut sum_pair = |t: f64| {
        crate::vec::axpy(&mut y[..n], x, t, d);
        crate::vec::axpy(&mut z[..n], x, -t, d);
        f.eval(&y[..n]) + f.eval(&z[..n])
    };
    let xn = crate::vec::norm(x);
    let (big_t, supported) = match f.support_radius {
        Some(r) => (xn + r, true),
        None => {
            let far = cr.last().copied().unwrap_or(0.0);
            ((2.0 * far).max(2.0 * (xn + 1.0)).max(4.0), false)
        }
    };
    let mut t1 = cr.first().map_or(0.5, |&c| (0.5 * c).min(0.5));
    if t1 >= big_t {
        t1 = 0.5 * big_t;
    }
    let inner = spec.scaled(0.25);

    // D(t)/t^2 is smooth and even for a C^2 field, so the t^{1-2s} weight is
    // exact. Below t_lo rounding in D dominates and an even quadratic fitted
    // at t_lo and 2 t_lo replaces it.
    let t_lo = 0.01 * t1;
    let g_lo = (2.0 * fx - sum_pair(t_lo)) / (t_lo * t_lo);
    let g_hi = (2.0 * fx - sum_pair(2.0 * t_lo)) / (4.0 * t_lo * t_lo);
    let g2 = (g_hi - g_lo) / (3.0 * t_lo * t_lo);
    let g0 = g_lo - g2 * t_lo * t_lo;
    let head = integrate_pieces(
        |t: f64| {
            if t < t_lo {
                g0 + g2 * t * t
            } else {
                (2.0 * fx - sum_pair(t)) / (t * t)
            }
        },
        &[Piece::new(0.0, t1, 1.0 - 2.0 * s, 0.0)],
        &inner,
    )?;
    let body = integrate_pieces(
        |t: f64| (2.0 * fx - sum_pair(t)) * t.powf(-1.0 - 2.0 * s),
        &split_at(t1, big_t, &cr),
        &inner,
    )?;
    let mut total = head.add(body).shift(fx * big_t.powf(-2.0 * s) / s);
    if !supported {
        let decay = 1.0 + 2.0 * s - f.growth_exponent;
        let tail = integrate_power_tail(
            |t: f64| -sum_pair(t) * t.powf(-1.0 - 2.0 * s),
            big_t,
            decay,
            &inner,
        )?;
        total = total.add(tail);
    }
    Ok(total)
}

/// (-Delta)^s f(x) = (C(n,s)/2) int (2 f(x) - f(x+y) - f(x-y)) |y|^{-n-2s} dy.
///
/// The field must be C^2 near `x` and grow slower than |x|^{2s}. Declared
/// kinks become quadrature breakpoints; a declared support radius cuts the
/// radial integral exactly, otherwise the tail uses the growth exponent.
pub fn frac_laplacian_si(
    f: &ScalarField,
    x: &[f64],
    p: FracParams,
    spec: &QuadSpec,
) -> Result<Estimate> {
    spec.validate()?;
    check_field(f, x, p)?;
    let s = p.s();
    if f.growth_exponent >= 2.0 * s {
        return Err(Error::Integrability("field grows at least like |x|^{2s}"));
    }
    let half_c = 0.5 * c_frac(p.n(), s);
    let mut conv = true;
    let mut err = 0.0;
    let mut nodes = 0;
    let e = polar(
        p.n(),
        &[],
        |d| {
            let r = radial_second_difference(f, x, d, s, spec)?;
            conv &= r.converged;
            err += r.stderr;
            nodes += r.samples_or_nodes;
            Ok(r.value)
        },
        spec,
    )?;
    let value = half_c * e.value;
    let stderr = half_c * (e.stderr + err / e.samples_or_nodes.max(1) as f64);
    Ok(Estimate {
        value,
        stderr,
        samples_or_nodes: nodes,
        converged: e.converged && conv,
    })
}

/// Heat extension U(x, t) = (G(., t) * f)(x) with the Gauss-Weierstrass kernel
/// G(x, t) = (4 pi t)^{-n/2} e^{-|x|^2/(4t)}.
#[derive(Clone, Debug)]
pub struct HeatExtension {
    pub base: ScalarField,
}

// beyond 9 standard deviations the Gaussian weight is below 1e-17
const Z_MAX: f64 = 9.0;

impl HeatExtension {
    pub fn new(base: ScalarField) -> Self {
        HeatExtension { base }
    }

    /// U(x, t) - f(x), computed from symmetric differences so that the
    /// small-t cancellation stays mild.
    pub fn increment(&self, x: &[f64], t: f64, spec: &QuadSpec) -> Result<Estimate> {
        let f = &self.base;
        let n = x.len();
        if n != f.dim {
            return Err(Error::Domain("point and field disagree on the dimension"));
        }
        if !(t > 0.0) {
            return Err(Error::Domain("heat time must be positive"));
        }
        let sigma = (2.0 * t).sqrt();
        let fx = f.eval(x);
        let mut y = [0.0; 8];
        let mut z = [0.0; 8];
        let mut diff = |d: &[f64], r: f64| {
            crate::vec::axpy(&mut y[..n], x, sigma * r, d);
            crate::vec::axpy(&mut z[..n], x, -sigma * r, d);
            0.5 * (f.eval(&y[..n]) + f.eval(&z[..n])) - fx
        };
        // standard normal density in polar form: (2 pi)^{-n/2} r^{n-1} e^{-r^2/2}
        let norm = (2.0 * PI).powf(-0.5 * n as f64);
        let nm1 = (n - 1) as i32;
        let mut conv = true;
        let e = polar(
            n,
            &[],
            |d| {
                let mut cr = crossings(f, x, d);
                cr.iter_mut().for_each(|c| *c /= sigma);
                let r = integrate_pieces(
                    |r: f64| norm * r.powi(nm1) * (-0.5 * r * r).exp() * diff(d, r),
                    &split_at(0.0, Z_MAX, &cr),
                    &spec.scaled(0.1),
                )?;
                conv &= r.converged;
                Ok(r.value)
            },
            spec,
        )?;
        Ok(Estimate {
            converged: e.converged && conv,
            ..e
        })
    }

    pub fn evaluate_heat(&self, x: &[f64], t: f64, spec: &QuadSpec) -> Result<Estimate> {
        Ok(self.increment(x, t, spec)?.shift(self.base.eval(x)))
    }
}

/// (-Delta)^s f(x) = (1/Gamma(-s)) int_0^inf t^{-s-1} (U(x,t) - f(x)) dt.
///
/// Meant for bounded fields smooth near `x`. With a declared support radius
/// the tail uses the t^{-n/2} decay of the heat extension.
pub fn frac_laplacian_semigroup(
    f: &ScalarField,
    x: &[f64],
    p: FracParams,
    spec: &QuadSpec,
) -> Result<Estimate> {
    spec.validate()?;
    check_field(f, x, p)?;
    if f.growth_exponent > 0.0 {
        return Err(Error::Integrability("semigroup evaluator needs a bounded field"));
    }
    let s = p.s();
    let nf = p.nf();
    let heat = HeatExtension::new(f.clone());
    let fx = f.eval(x);
    let inner = spec.scaled(0.1);
    let cell = core::cell::Cell::new(None::<Error>);
    let conv = core::cell::Cell::new(true);
    let inc = |t: f64| match heat.increment(x, t, &inner) {
        Ok(e) => {
            conv.set(conv.get() && e.converged);
            e.value
        }
        Err(e) => {
            cell.set(Some(e));
            0.0
        }
    };
    // 1/Gamma(-s) = -s/Gamma(1-s)
    let rg = -s / gamma(1.0 - s)?;
    let t1 = 1.0;
    let big_t = match f.support_radius {
        Some(r) => (r * r).max(4.0),
        None => 16.0,
    };
    // (U - f)/t is smooth at t = 0; below t_lo a linear fit replaces the
    // rounding-dominated quotient
    let t_lo = 1e-6;
    let q_lo = inc(t_lo) / t_lo;
    let q_hi = inc(2.0 * t_lo) / (2.0 * t_lo);
    let slope = (q_hi - q_lo) / t_lo;
    let head = integrate_pieces(
        |t: f64| {
            if t < t_lo {
                q_lo + slope * (t - t_lo)
            } else {
                inc(t) / t
            }
        },
        &[Piece::new(0.0, t1, -s, 0.0)],
        spec,
    )?;
    let body = integrate_pieces(|t: f64| inc(t) * t.powf(-s - 1.0), &[Piece::plain(t1, big_t)], spec)?;
    let mut total = head.add(body);
    let const_tail = -fx * big_t.powf(-s) / s;
    let decay = if f.support_radius.is_some() {
        1.0 + s + 0.5 * nf
    } else {
        1.0 + s
    };
    let tail = integrate_power_tail(
        |t: f64| (inc(t) + fx) * t.powf(-s - 1.0),
        big_t,
        decay,
        spec,
    )?;
    total = total.add(tail).shift(const_tail);
    if let Some(e) = cell.take() {
        return Err(e);
    }
    let mut out = total.scale(rg);
    out.converged &= conv.get();
    Ok(out)
}

/// The s-harmonic profile w_s(x) = x_+^s and its fractional Laplacian
/// -c_s |x|^{-s} on the negative half-line.
#[derive(Clone, Copy, Debug)]
pub struct WsReference {
    pub s: f64,
    /// c_s > 0, obtained from one quadrature at x = -1.
    pub c_hat: f64,
}

impl WsReference {
    pub fn new(s: f64, spec: &QuadSpec) -> Result<Self> {
        let p = FracParams::new(1, s)?;
        let f = crate::field::presets::positive_power(s);
        let e = frac_laplacian_si(&f, &[-1.0], p, spec)?;
        if !e.converged {
            return Err(Error::NonConvergence("reference constant did not converge"));
        }
        Ok(WsReference { s, c_hat: -e.value })
    }

    pub fn eval(&self, x: f64) -> Result<f64> {
        if x == 0.0 {
            return Err(Error::Domain("the reference profile is singular at 0"));
        }
        Ok(if x > 0.0 {
            0.0
        } else {
            -self.c_hat * (-x).powf(-self.s)
        })
    }
}

pub fn ws_reference(x: f64, s: f64) -> Result<f64> {
    WsReference::new(s, &QuadSpec::new(1e-10, 1e-12))?.eval(x)
}
