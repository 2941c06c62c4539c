//! Weighted density of a set at infinity and the stickiness threshold.

use alloc::vec;
use alloc::vec::Vec;

use super::set::GeomSet;
use crate::rng::{Cursor, RngStream};
use crate::specfun::omega;
use crate::stats::{sequential, Runner, Sampler};
use crate::{check_order, Error, Estimate, Result};
#[allow(unused_imports)]
use crate::prelude::*;

/// Radii beyond this are clamped. At s = 0.01 the draw U^{-1/s} overflows
/// for U < 1e-3; every preset's membership is already asymptotic long
/// before 1e100, and 1e100 cubed still fits in a double.
const RADIUS_CAP: f64 = 1e100;

/// s * alpha_s(0, 1, E) with optional extrapolation to s -> 0.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct AlphaResult {
    pub s_value: f64,
    pub s_alpha: f64,
    pub stderr: f64,
    /// 2 A(s) - A(2s) from the same draws, an estimate of the limit s -> 0.
    pub extrapolated: Option<Estimate>,
    /// Extrapolated value plus/minus three standard errors, clipped to [0, omega_n].
    pub alpha_bar: Option<f64>,
    pub alpha_underbar: Option<f64>,
}

/// Draws Y = q + r U^{-1/s} theta, whose density is (s/omega_n) r^s |y - q|^{-n-s}
/// on the complement of B_r(q).
pub struct AlphaSampler<'a> {
    pub e: &'a GeomSet,
    pub s: f64,
    pub q: Vec<f64>,
    pub r: f64,
}

impl AlphaSampler<'_> {
    /// Uniform variable and direction of one draw.
    pub fn draw(&self, c: &mut Cursor) -> (f64, Vec<f64>) {
        let u = c.uniform_open0();
        let mut d = vec![0.0; self.e.n];
        c.unit_vector(&mut d);
        (u, d)
    }

    /// The point for a given draw at order `s`.
    pub fn point_at(&self, u: f64, d: &[f64], s: f64) -> Vec<f64> {
        let rad = (self.r * (-u.ln() / s).exp()).min(RADIUS_CAP);
        self.q.iter().zip(d).map(|(q, v)| q + rad * v).collect()
    }

    pub fn point(&self, c: &mut Cursor) -> Vec<f64> {
        let (u, d) = self.draw(c);
        self.point_at(u, &d, self.s)
    }
}

impl Sampler for AlphaSampler<'_> {
    fn sample(&self, c: &mut Cursor) -> f64 {
        let y = self.point(c);
        omega(self.e.n) * self.e.contains(&y) as u8 as f64
    }
}

struct Extrapolating<'a>(AlphaSampler<'a>);

impl Sampler for Extrapolating<'_> {
    fn sample(&self, c: &mut Cursor) -> f64 {
        let (u, d) = self.0.draw(c);
        let a = self.0.e.contains(&self.0.point_at(u, &d, self.0.s)) as u8 as f64;
        let b = self.0.e.contains(&self.0.point_at(u, &d, 2.0 * self.0.s)) as u8 as f64;
        omega(self.0.e.n) * (2.0 * a - b)
    }
}

/// s * alpha_s(q, r, E), where alpha_s(q, r, E) = int_{C B_r(q)} chi_E |y - q|^{-n-s} dy,
/// estimated as omega_n r^{-s} P(Y in E).
pub fn alpha_estimate_at(
    e: &GeomSet,
    q: &[f64],
    r: f64,
    s: f64,
    samples: u64,
    stream: &RngStream,
) -> Result<Estimate> {
    alpha_estimate_at_with(e, q, r, s, samples, stream, &sequential)
}

pub fn alpha_estimate_at_with(
    e: &GeomSet,
    q: &[f64],
    r: f64,
    s: f64,
    samples: u64,
    stream: &RngStream,
    run: Runner,
) -> Result<Estimate> {
    check_order(s)?;
    if q.len() != e.n || !(r > 0.0) {
        return Err(Error::Domain("alpha needs a point of the right dimension and r > 0"));
    }
    let sampler = AlphaSampler {
        e,
        s,
        q: q.to_vec(),
        r,
    };
    Ok(run(&sampler, stream, samples).estimate().scale(r.powf(-s)))
}

/// Monte Carlo estimate of s * alpha_s(0, 1, E), plus the two-order
/// extrapolation when 2s < 1.
pub fn alpha_estimate(e: &GeomSet, s: f64, samples: u64, stream: &RngStream) -> Result<AlphaResult> {
    alpha_estimate_with(e, s, samples, stream, &sequential)
}

pub fn alpha_estimate_with(e: &GeomSet, s: f64, samples: u64, stream: &RngStream, run: Runner) -> Result<AlphaResult> {
    check_order(s)?;
    let q = vec![0.0; e.n];
    let base = alpha_estimate_at_with(e, &q, 1.0, s, samples, stream, run)?;
    let extrapolated = if 2.0 * s < 1.0 {
        let sampler = Extrapolating(AlphaSampler {
            e,
            s,
            q: q.clone(),
            r: 1.0,
        });
        Some(run(&sampler, stream, samples).estimate())
    } else {
        None
    };
    let w = omega(e.n);
    Ok(AlphaResult {
        s_value: s,
        s_alpha: base.value,
        stderr: base.stderr,
        extrapolated,
        alpha_bar: extrapolated.map(|x| (x.value + 3.0 * x.stderr).clamp(0.0, w)),
        alpha_underbar: extrapolated.map(|x| (x.value - 3.0 * x.stderr).clamp(0.0, w)),
    })
}

/// Stickiness data for an exterior datum with upper density alpha_bar.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct StickinessParams {
    pub alpha_bar: f64,
    pub n: usize,
    pub beta: f64,
}

impl StickinessParams {
    pub fn new(alpha_bar: f64, n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::Domain("dimension must be at least 1"));
        }
        let w = omega(n);
        if !(alpha_bar >= 0.0 && alpha_bar < 0.5 * w) {
            return Err(Error::Domain("alpha_bar must lie in [0, omega_n / 2)"));
        }
        Ok(StickinessParams {
            alpha_bar,
            n,
            beta: (w - 2.0 * alpha_bar) / 4.0,
        })
    }

    /// delta_s = ((omega_n + beta) / (omega_n + 2 beta))^{1/s}.
    pub fn delta(&self, s: f64) -> Result<f64> {
        check_order(s)?;
        let w = omega(self.n);
        Ok((-((w + 2.0 * self.beta) / (w + self.beta)).ln() / s).exp())
    }
}

pub fn stickiness_threshold(alpha_bar: f64, n: usize, s: f64) -> Result<f64> {
    StickinessParams::new(alpha_bar, n)?.delta(s)
}
