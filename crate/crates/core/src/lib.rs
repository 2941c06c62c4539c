//! Numerical core for fractional-order nonlocal analysis.
//!
//! Everything here is `no_std` with `alloc`: quadrature, special functions,
//! the fractional Laplacian, potential theory on balls, Caputo and Marchaud
//! calculus, fractional perimeter and curvature, long-jump random walks and
//! dislocation dynamics. IO, the CLI and file formats live in the `nonlocal`
//! crate.

#![no_std]
extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod balls;
pub mod dynamics;
mod error;
pub mod field;
pub mod fraccalc;
pub mod fraclap;
pub mod geometry;
pub mod quad;
pub mod rng;
pub mod specfun;
pub mod stats;
pub mod walk;

pub use error::{Error, Result};
pub use field::ScalarField;
pub use quad::{Estimate, QuadSpec};
pub use rng::RngStream;

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

/// Dimension `n` and fractional order `s`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FracParams {
    n: usize,
    s: f64,
}

impl FracParams {
    pub fn new(n: usize, s: f64) -> Result<Self> {
        if n == 0 {
            return Err(Error::Domain("dimension must be at least 1"));
        }
        if !(s > 0.0 && s < 1.0) {
            return Err(Error::Domain("fractional order must lie in (0, 1)"));
        }
        Ok(FracParams { n, s })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn s(&self) -> f64 {
        self.s
    }

    pub fn nf(&self) -> f64 {
        self.n as f64
    }

    /// True for the logarithmic case n = 2s, which only happens at (1, 1/2).
    pub fn is_critical(&self) -> bool {
        self.n == 1 && self.s == 0.5
    }
}

pub(crate) fn check_order(s: f64) -> Result<()> {
    if s > 0.0 && s < 1.0 {
        Ok(())
    } else {
        Err(Error::Domain("fractional order must lie in (0, 1)"))
    }
}

// Float methods for no_std builds; under test the inherent std methods win.
#[allow(unused_imports)]
pub(crate) mod prelude {
    pub use num_traits::Float;
}

/// Euclidean remainder in [0, m) for m > 0 (f64::rem_euclid is std-only).
pub(crate) fn rem_euclid(x: f64, m: f64) -> f64 {
    let r = x % m;
    if r < 0.0 {
        r + m
    } else {
        r
    }
}

pub(crate) mod vec {
    #[allow(unused_imports)]
    use crate::prelude::*;


    pub fn norm(x: &[f64]) -> f64 {
        x.iter().map(|v| v * v).sum::<f64>().sqrt()
    }

    pub fn norm2(x: &[f64]) -> f64 {
        x.iter().map(|v| v * v).sum::<f64>()
    }

    pub fn dist(x: &[f64], y: &[f64]) -> f64 {
        x.iter().zip(y).map(|(a, b)| (a - b) * (a - b)).sum::<f64>().sqrt()
    }

    pub fn dot(x: &[f64], y: &[f64]) -> f64 {
        x.iter().zip(y).map(|(a, b)| a * b).sum()
    }

    /// `x + t*d` written into `out`.
    pub fn axpy(out: &mut [f64], x: &[f64], t: f64, d: &[f64]) {
        for i in 0..out.len() {
            out[i] = x[i] + t * d[i];
        }
    }
}
