//! Scalar fields on R^n with the metadata the integral evaluators need.

use alloc::string::String;
use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;
#[allow(unused_imports)]
use crate::prelude::*;

type Func = dyn Fn(&[f64]) -> f64 + Send + Sync;

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Smoothness {
    /// Twice continuously differentiable away from the listed kinks.
    C2Local,
    Holder(f64),
}

/// A sphere {|y - center| = radius} (a point when radius = 0) across which
/// the field behaves like dist^exponent; exponent 0 marks a jump.
#[derive(Clone, Debug, PartialEq)]
pub struct Kink {
    pub center: Vec<f64>,
    pub radius: f64,
    pub exponent: f64,
}

impl Kink {
    pub fn point(center: Vec<f64>, exponent: f64) -> Self {
        Kink {
            center,
            radius: 0.0,
            exponent,
        }
    }

    /// Positive parameters t with |x + t d - center| = radius, d a unit vector.
    pub fn ray_crossings(&self, x: &[f64], d: &[f64], out: &mut Vec<f64>) {
        // |w + t d|^2 = r^2 with w = x - center
        let mut b = 0.0;
        let mut c = -self.radius * self.radius;
        for i in 0..x.len() {
            let w = x[i] - self.center[i];
            b += w * d[i];
            c += w * w;
        }
        let disc = b * b - c;
        if disc < 0.0 {
            return;
        }
        let sq = disc.sqrt();
        for t in [-b - sq, -b + sq] {
            if t > 0.0 {
                out.push(t);
            }
        }
    }

    pub fn distance(&self, x: &[f64]) -> f64 {
        (crate::vec::dist(x, &self.center) - self.radius).abs()
    }
}

/// Deterministic function on R^n with growth, regularity and support data.
#[derive(Clone)]
pub struct ScalarField {
    f: Arc<Func>,
    pub dim: usize,
    /// g with |f(x)| <= K (1 + |x|)^g; along rays f behaves like |x|^g.
    pub growth_exponent: f64,
    pub smoothness: Smoothness,
    /// f vanishes (or is below double precision) outside this ball about 0.
    pub support_radius: Option<f64>,
    pub kinks: Vec<Kink>,
    pub label: String,
}

impl core::fmt::Debug for ScalarField {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        f.debug_struct("ScalarField")
            .field("label", &self.label)
            .field("dim", &self.dim)
            .field("growth_exponent", &self.growth_exponent)
            .field("support_radius", &self.support_radius)
            .field("kinks", &self.kinks.len())
            .finish()
    }
}

impl ScalarField {
    pub fn new<F: Fn(&[f64]) -> f64 + Send + Sync + 'static>(dim: usize, f: F) -> Self {
        ScalarField {
            f: Arc::new(f),
            dim,
            growth_exponent: 0.0,
            smoothness: Smoothness::C2Local,
            support_radius: None,
            kinks: Vec::new(),
            label: String::from("custom"),
        }
    }

    pub fn eval(&self, x: &[f64]) -> f64 {
        (self.f)(x)
    }

    pub fn eval1(&self, x: f64) -> f64 {
        (self.f)(&[x])
    }

    pub fn with_growth(mut self, g: f64) -> Self {
        self.growth_exponent = g;
        self
    }

    pub fn with_support(mut self, r: f64) -> Self {
        self.support_radius = Some(r);
        self
    }

    pub fn with_kink(mut self, k: Kink) -> Self {
        self.kinks.push(k);
        self
    }

    pub fn with_smoothness(mut self, s: Smoothness) -> Self {
        self.smoothness = s;
        self
    }

    pub fn with_label(mut self, l: &str) -> Self {
        self.label = String::from(l);
        self
    }

    /// Distance from x to the nearest kink.
    pub fn kink_distance(&self, x: &[f64]) -> f64 {
        self.kinks
            .iter()
            .map(|k| k.distance(x))
            .fold(f64::INFINITY, f64::min)
    }

    /// y -> f(y - shift), the field moved by `shift`.
    pub fn translate(&self, shift: &[f64]) -> ScalarField {
        let f = self.f.clone();
        let sh: Vec<f64> = shift.to_vec();
        let n = self.dim;
        let g = move |y: &[f64]| {
            let mut z = [0.0; 8];
            for i in 0..n {
                z[i] = y[i] - sh[i];
            }
            f(&z[..n])
        };
        let mut out = ScalarField::new(n, g);
        out.growth_exponent = self.growth_exponent;
        out.smoothness = self.smoothness;
        out.support_radius = self.support_radius.map(|r| r + crate::vec::norm(shift));
        out.kinks = self
            .kinks
            .iter()
            .map(|k| Kink {
                center: k.center.iter().zip(shift).map(|(c, s)| c + s).collect(),
                ..k.clone()
            })
            .collect();
        out.label = self.label.clone();
        out
    }

    /// y -> f(lambda y).
    pub fn dilate(&self, lambda: f64) -> ScalarField {
        let f = self.f.clone();
        let n = self.dim;
        let g = move |y: &[f64]| {
            let mut z = [0.0; 8];
            for i in 0..n {
                z[i] = lambda * y[i];
            }
            f(&z[..n])
        };
        let mut out = ScalarField::new(n, g);
        out.growth_exponent = self.growth_exponent;
        out.smoothness = self.smoothness;
        out.support_radius = self.support_radius.map(|r| r / lambda);
        out.kinks = self
            .kinks
            .iter()
            .map(|k| Kink {
                center: k.center.iter().map(|c| c / lambda).collect(),
                radius: k.radius / lambda,
                exponent: k.exponent,
            })
            .collect();
        out.label = self.label.clone();
        out
    }

    /// a f + b g.
    pub fn combine(a: f64, f: &ScalarField, b: f64, g: &ScalarField) -> ScalarField {
        let (ff, gg) = (f.f.clone(), g.f.clone());
        let mut out = ScalarField::new(f.dim, move |y| a * ff(y) + b * gg(y));
        out.growth_exponent = f.growth_exponent.max(g.growth_exponent);
        out.support_radius = match (f.support_radius, g.support_radius) {
            (Some(x), Some(y)) => Some(x.max(y)),
            _ => None,
        };
        out.kinks = f.kinks.iter().chain(g.kinks.iter()).cloned().collect();
        out.label = String::from("combination");
        out
    }

    /// Same field multiplied by the indicator of the ball B_R(center).
    pub fn truncate(&self, center: &[f64], radius: f64) -> ScalarField {
        let f = self.f.clone();
        let c: Vec<f64> = center.to_vec();
        let cc = c.clone();
        let mut out = ScalarField::new(self.dim, move |y| {
            if crate::vec::dist(y, &cc) < radius {
                f(y)
            } else {
                0.0
            }
        });
        out.growth_exponent = 0.0;
        out.smoothness = self.smoothness;
        out.support_radius = Some(crate::vec::norm(center) + radius);
        out.kinks = self.kinks.clone();
        out.kinks.push(Kink {
            center: c,
            radius,
            exponent: 0.0,
        });
        out.label = self.label.clone();
        out
    }
}

/// Ready-made fields.
pub mod presets {
    use super::*;
    use core::f64::consts::PI;

    pub fn constant(n: usize, c: f64) -> ScalarField {
        ScalarField::new(n, move |_| c).with_label("constant")
    }

    /// e^{-pi |x|^2}.
    pub fn gaussian(n: usize) -> ScalarField {
        ScalarField::new(n, |x| (-PI * crate::vec::norm2(x)).exp())
            .with_support(7.0)
            .with_label("gaussian")
    }

    /// 1/cosh(x) in one dimension.
    pub fn sech() -> ScalarField {
        ScalarField::new(1, |x| 1.0 / x[0].cosh())
            .with_support(40.0)
            .with_label("sech")
    }

    /// e^{-x^2} (1 + x/2) in one dimension, an asymmetric bump.
    pub fn skew_bump() -> ScalarField {
        ScalarField::new(1, |x| (-x[0] * x[0]).exp() * (1.0 + 0.5 * x[0]))
            .with_support(28.0)
            .with_label("skew-bump")
    }

    /// x_+^s in one dimension.
    pub fn positive_power(s: f64) -> ScalarField {
        ScalarField::new(1, move |x| if x[0] > 0.0 { x[0].powf(s) } else { 0.0 })
            .with_growth(s)
            .with_smoothness(Smoothness::Holder(s))
            .with_kink(Kink::point(vec![0.0], s))
            .with_label("positive-power")
    }

    /// Indicator of a union of intervals, with jumps marked as kinks.
    pub fn indicator(parts: &[(f64, f64)]) -> ScalarField {
        let owned: Vec<(f64, f64)> = parts.to_vec();
        let mut f = ScalarField::new(1, move |x| {
            owned.iter().any(|&(a, b)| a < x[0] && x[0] < b) as u8 as f64
        })
        .with_smoothness(Smoothness::Holder(0.0))
        .with_label("indicator");
        for &(a, b) in parts {
            for e in [a, b] {
                if e.is_finite() {
                    f = f.with_kink(Kink::point(vec![e], 0.0));
                }
            }
        }
        f
    }

    /// (1 - |x|^2)_+^s.
    pub fn ball_bump(n: usize, s: f64) -> ScalarField {
        ScalarField::new(n, move |x| {
            let r2 = crate::vec::norm2(x);
            if r2 < 1.0 {
                (1.0 - r2).powf(s)
            } else {
                0.0
            }
        })
        .with_support(1.0)
        .with_smoothness(Smoothness::Holder(s))
        .with_kink(Kink {
            center: vec![0.0; n],
            radius: 1.0,
            exponent: s,
        })
        .with_label("ball-bump")
    }
}
