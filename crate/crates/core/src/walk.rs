//! Random walk with arbitrarily long jumps of length in hN, and the
//! first-exit payoff estimator for the fractional Dirichlet problem.
//!
//! One step moves by k h v with v uniform on the sphere and
//! P(k) = c k^{-1-2s}, k >= 1. The table covers k <= K_TABLE; beyond it the
//! exact remaining mass is spent on a continuous Pareto draw rounded to the
//! nearest integer, which matches k^{-1-2s} to relative O(k^{-2}).

use alloc::vec;
use alloc::vec::Vec;

use crate::balls::BallGeometry;
use crate::field::ScalarField;
use crate::rng::{Cursor, RngStream};
use crate::specfun::{hurwitz_zeta, zeta};
use crate::stats::{chunk_count, chunk_len, Moments};
use crate::vec::norm;
use crate::{Error, Estimate, FracParams, Result};
#[allow(unused_imports)]
use crate::prelude::*;

pub const K_TABLE: usize = 1 << 14;
pub const DEFAULT_MAX_STEPS: u64 = 1_000_000;
/// Share of paths allowed to hit `max_steps` before the estimate is refused.
pub const TRUNCATION_LIMIT: f64 = 0.01;

#[derive(Clone, Debug)]
pub struct WalkConfig {
    pub p: FracParams,
    pub h: f64,
    pub tau: f64,
    pub domain: BallGeometry,
    pub payoff: ScalarField,
    pub max_steps: u64,
    pub c_walk: f64,
    /// P(k <= K_TABLE) split as cumulative probabilities.
    cdf: Vec<f64>,
    /// c_walk * sum_{k > K_TABLE} k^{-1-2s}
    tail_mass: f64,
}

impl WalkConfig {
    pub fn new(p: FracParams, h: f64, domain: BallGeometry, payoff: ScalarField) -> Result<Self> {
        if !(h > 0.0 && h.is_finite()) {
            return Err(Error::Domain("space step must be positive"));
        }
        if domain.p != p {
            return Err(Error::Domain("walk and domain orders differ"));
        }
        if payoff.dim != p.n() {
            return Err(Error::Domain("payoff dimension differs from the walk"));
        }
        if payoff.support_radius.is_none() {
            return Err(Error::Domain("payoff must have bounded support"));
        }
        let s = p.s();
        let sigma = 1.0 + 2.0 * s;
        let c_walk = 1.0 / zeta(sigma)?;
        let mut cdf = Vec::with_capacity(K_TABLE);
        let mut acc = 0.0;
        for k in 1..=K_TABLE {
            acc += (k as f64).powf(-sigma);
            cdf.push(c_walk * acc);
        }
        let tail_mass = c_walk * hurwitz_zeta(sigma, K_TABLE as f64 + 1.0)?;
        Ok(WalkConfig {
            p,
            h,
            tau: h.powf(2.0 * s),
            domain,
            payoff,
            max_steps: DEFAULT_MAX_STEPS,
            c_walk,
            cdf,
            tail_mass,
        })
    }

    pub fn with_max_steps(mut self, m: u64) -> Self {
        self.max_steps = m;
        self
    }

    /// c_walk times the full series; 1 up to rounding.
    pub fn normalization(&self) -> f64 {
        self.cdf[K_TABLE - 1] + self.tail_mass
    }

    /// Jump length k >= 1 in lattice units.
    pub fn sample_k(&self, c: &mut Cursor) -> u64 {
        let u = c.uniform();
        let head = self.cdf[K_TABLE - 1];
        if u < head {
            return self.cdf.partition_point(|&x| x <= u) as u64 + 1;
        }
        // Pareto on (K + 1/2, inf) with P(X > x) = ((K + 1/2) / x)^{2s}
        let w = c.uniform_open0();
        let x0 = K_TABLE as f64 + 0.5;
        let x = x0 * (-w.ln() / (2.0 * self.p.s())).exp();
        if x >= 9.0e18 {
            u64::MAX
        } else {
            (x.round() as u64).max(K_TABLE as u64 + 1)
        }
    }
}

/// One displacement k h v.
pub fn sample_jump(cfg: &WalkConfig, c: &mut Cursor) -> Vec<f64> {
    let k = cfg.sample_k(c);
    let mut v = vec![0.0; cfg.p.n()];
    c.unit_vector(&mut v);
    let len = k as f64 * cfg.h;
    v.iter_mut().for_each(|x| *x *= len);
    v
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PayoffEstimate {
    pub value: f64,
    pub stderr: f64,
    pub exits: u64,
    pub truncated_paths: u64,
}

impl PayoffEstimate {
    pub fn estimate(&self) -> Estimate {
        Estimate {
            value: self.value,
            stderr: self.stderr,
            samples_or_nodes: self.exits,
            converged: self.truncated_paths == 0,
        }
    }
}

/// Payoff moments of the exited paths of one chunk, plus the truncated count.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct WalkChunk {
    pub payoff: Moments,
    pub truncated: u64,
}

impl WalkChunk {
    pub fn merge(&self, o: &WalkChunk) -> WalkChunk {
        WalkChunk {
            payoff: self.payoff.merge(&o.payoff),
            truncated: self.truncated + o.truncated,
        }
    }
}

/// First exit position from the domain, or None after `max_steps` steps.
pub fn exit_position(x0: &[f64], cfg: &WalkConfig, c: &mut Cursor) -> Option<Vec<f64>> {
    let r = cfg.domain.r;
    let mut x = x0.to_vec();
    if x.len() == 1 {
        // exact lattice index, so points at distance exactly r count as exits
        let mut m: i64 = 0;
        for _ in 0..cfg.max_steps {
            let k = cfg.sample_k(c).min(1 << 52) as i64;
            m += if c.next_u64() >> 63 == 0 { k } else { -k };
            x[0] = x0[0] + cfg.h * m as f64;
            if !(x[0].abs() < r) {
                return Some(x);
            }
        }
        return None;
    }
    let mut v = vec![0.0; x.len()];
    for _ in 0..cfg.max_steps {
        let len = cfg.sample_k(c) as f64 * cfg.h;
        c.unit_vector(&mut v);
        for (xi, vi) in x.iter_mut().zip(&v) {
            *xi += len * vi;
        }
        if !(norm(&x) < r) {
            return Some(x);
        }
    }
    None
}

pub fn check_start(x0: &[f64], cfg: &WalkConfig) -> Result<()> {
    if x0.len() != cfg.p.n() || !(norm(x0) < cfg.domain.r) {
        return Err(Error::Domain("start point must lie in the open ball"));
    }
    Ok(())
}

/// Trials of chunk `i` out of `trials`, on sub-stream `stream.split(i)`.
pub fn payoff_chunk(x0: &[f64], cfg: &WalkConfig, trials: u64, stream: &RngStream, i: u64) -> WalkChunk {
    let mut c = stream.split(i).cursor();
    let mut out = WalkChunk::default();
    for _ in 0..chunk_len(trials, i) {
        match exit_position(x0, cfg, &mut c) {
            Some(y) => {
                debug_assert!(norm(&y) >= cfg.domain.r);
                out.payoff.push(cfg.payoff.eval(&y));
            }
            None => out.truncated += 1,
        }
    }
    out
}

/// Turns merged chunk results into an estimate, refusing runs where too
/// many paths never left the domain.
pub fn finish_payoff(total: &WalkChunk, trials: u64) -> Result<PayoffEstimate> {
    if total.truncated as f64 > TRUNCATION_LIMIT * trials as f64 {
        return Err(Error::ExcessTruncation {
            truncated: total.truncated,
            trials,
        });
    }
    Ok(PayoffEstimate {
        value: total.payoff.mean,
        stderr: total.payoff.stderr(),
        exits: total.payoff.n,
        truncated_paths: total.truncated,
    })
}

/// Mean payoff at the first exit, u(x0) = E[g(X_exit)].
pub fn estimate_payoff(x0: &[f64], cfg: &WalkConfig, trials: u64, stream: &RngStream) -> Result<PayoffEstimate> {
    check_start(x0, cfg)?;
    if trials == 0 {
        return Err(Error::Domain("need at least one trial"));
    }
    let mut total = WalkChunk::default();
    for i in 0..chunk_count(trials) {
        total = total.merge(&payoff_chunk(x0, cfg, trials, stream, i));
    }
    finish_payoff(&total, trials)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::presets;

    fn cfg(n: usize, s: f64, h: f64) -> WalkConfig {
        let p = FracParams::new(n, s).unwrap();
        let g = presets::constant(n, 1.0).with_support(1e300);
        WalkConfig::new(p, h, BallGeometry::new(1.0, p).unwrap(), g).unwrap()
    }

    #[test]
    fn normalization_and_tau() {
        for s in [0.05, 0.3, 0.5, 0.9] {
            let c = cfg(1, s, 0.1);
            assert!((c.normalization() - 1.0).abs() < 1e-12);
            assert_eq!(c.tau, 0.1f64.powf(2.0 * s));
        }
    }

    #[test]
    fn constant_payoff_is_exact() {
        let c = cfg(2, 0.4, 0.05);
        let e = estimate_payoff(&[0.2, -0.1], &c, 5000, &RngStream::new(1, 0)).unwrap();
        assert_eq!(e.value, 1.0);
        assert_eq!(e.stderr, 0.0);
        assert_eq!(e.truncated_paths, 0);
    }

    #[test]
    fn truncation_guard() {
        let c = cfg(1, 0.5, 1e-4).with_max_steps(2);
        let r = estimate_payoff(&[0.0], &c, 1000, &RngStream::new(1, 0));
        assert!(matches!(r, Err(Error::ExcessTruncation { .. })));
    }
}
