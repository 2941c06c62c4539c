//! Particle system for dislocations with orientations:
//! x_i' = gamma (-xi_i sigma(t, x_i) + sum_{j != i} xi_i xi_j (x_i - x_j) / (2s |x_i - x_j|^{2s+1})).
//!
//! Integration is explicit Dormand-Prince 5(4) with the step also capped by
//! c (min gap)^{2s+1} / gamma, the time scale on which the closest pair moves
//! by a fixed fraction of its gap. A collision is the first time the minimum
//! gap drops below `epsilon_collision`, located by bisection on the last step.

use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;

use crate::{check_order, Error, Result};
#[allow(unused_imports)]
use crate::prelude::*;

pub type StressFn = dyn Fn(f64, f64) -> f64 + Send + Sync;

/// External stress sigma(t, x).
#[derive(Clone)]
pub enum Stress {
    Zero,
    Constant(f64),
    Field(Arc<StressFn>),
}

impl Stress {
    pub fn eval(&self, t: f64, x: f64) -> f64 {
        match self {
            Stress::Zero => 0.0,
            Stress::Constant(c) => *c,
            Stress::Field(f) => f(t, x),
        }
    }
}

impl core::fmt::Debug for Stress {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        match self {
            Stress::Zero => write!(f, "Zero"),
            Stress::Constant(c) => write!(f, "Constant({c})"),
            Stress::Field(_) => write!(f, "Field(..)"),
        }
    }
}

#[derive(Clone, Debug)]
pub struct DislocationState {
    pub positions: Vec<f64>,
    pub orientations: Vec<i8>,
    pub s: f64,
    pub gamma: f64,
    pub sigma: Stress,
    pub t: f64,
}

impl DislocationState {
    pub fn new(positions: Vec<f64>, orientations: Vec<i8>, s: f64, gamma: f64, sigma: Stress) -> Result<Self> {
        check_order(s)?;
        if positions.is_empty() || positions.len() != orientations.len() {
            return Err(Error::Domain("need one orientation per position"));
        }
        if orientations.iter().any(|&o| o != 1 && o != -1) {
            return Err(Error::Domain("orientations must be +1 or -1"));
        }
        if !(gamma > 0.0 && gamma.is_finite()) {
            return Err(Error::Domain("mobility must be positive"));
        }
        if positions.windows(2).any(|w| !(w[0] < w[1])) {
            return Err(Error::Domain("positions must be strictly increasing"));
        }
        Ok(DislocationState {
            positions,
            orientations,
            s,
            gamma,
            sigma,
            t: 0.0,
        })
    }

    /// All orientations +1.
    pub fn aligned(positions: Vec<f64>, s: f64, gamma: f64, sigma: Stress) -> Result<Self> {
        let xi = vec![1; positions.len()];
        Self::new(positions, xi, s, gamma, sigma)
    }

    pub fn min_gap(&self) -> f64 {
        min_gap(&self.positions)
    }

    pub fn mean(&self) -> f64 {
        self.positions.iter().sum::<f64>() / self.positions.len() as f64
    }
}

fn min_gap(x: &[f64]) -> f64 {
    x.windows(2).map(|w| w[1] - w[0]).fold(f64::INFINITY, f64::min)
}

fn rhs(st: &DislocationState, t: f64, x: &[f64], out: &mut [f64]) -> Result<()> {
    let n = x.len();
    let two_s = 2.0 * st.s;
    for i in 0..n {
        let xi = st.orientations[i] as f64;
        let mut acc = -xi * st.sigma.eval(t, x[i]);
        for j in 0..n {
            if j == i {
                continue;
            }
            let d = x[i] - x[j];
            let a = d.abs();
            if !(a > 0.0) {
                return Err(Error::SingularState);
            }
            let xj = st.orientations[j] as f64;
            acc += xi * xj * d.signum() / (two_s * a.powf(two_s));
        }
        out[i] = st.gamma * acc;
    }
    Ok(())
}

pub fn velocity(st: &DislocationState) -> Result<Vec<f64>> {
    let mut v = vec![0.0; st.positions.len()];
    rhs(st, st.t, &st.positions, &mut v)?;
    Ok(v)
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct StepControl {
    pub rel_tol: f64,
    pub abs_tol: f64,
    /// c in dt <= c (min gap)^{2s+1} / gamma
    pub gap_factor: f64,
    pub dt_max: f64,
    /// Smallest step tried before giving up.
    pub dt_min: f64,
    pub max_steps: u64,
}

impl Default for StepControl {
    fn default() -> Self {
        StepControl {
            rel_tol: 1e-11,
            abs_tol: 1e-13,
            gap_factor: 0.05,
            dt_max: 0.1,
            dt_min: 1e-300,
            max_steps: 10_000_000,
        }
    }
}

pub const DEFAULT_EPSILON_COLLISION: f64 = 1e-6;
/// Time width of the collision bracket.
pub const COLLISION_BRACKET: f64 = 1e-8;

#[derive(Clone, Debug, PartialEq)]
pub struct CollisionEvent {
    pub time: f64,
    /// The pair (i, i + 1) with the smallest gap.
    pub indices: (usize, usize),
    pub gap: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Termination {
    TEnd,
    Collision,
}

#[derive(Clone, Debug)]
pub struct TrajectoryResult {
    pub times: Vec<f64>,
    pub positions: Vec<Vec<f64>>,
    pub collision_events: Vec<CollisionEvent>,
    pub terminated: Termination,
}

impl TrajectoryResult {
    pub fn final_positions(&self) -> &[f64] {
        self.positions.last().map(|v| v.as_slice()).unwrap_or(&[])
    }
}

// Dormand-Prince 5(4) tableau
const C: [f64; 7] = [0.0, 1.0 / 5.0, 3.0 / 10.0, 4.0 / 5.0, 8.0 / 9.0, 1.0, 1.0];
const A: [[f64; 6]; 7] = [
    [0.0; 6],
    [1.0 / 5.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    [3.0 / 40.0, 9.0 / 40.0, 0.0, 0.0, 0.0, 0.0],
    [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0, 0.0, 0.0, 0.0],
    [19372.0 / 6561.0, -25360.0 / 2187.0, 64448.0 / 6561.0, -212.0 / 729.0, 0.0, 0.0],
    [9017.0 / 3168.0, -355.0 / 33.0, 46732.0 / 5247.0, 49.0 / 176.0, -5103.0 / 18656.0, 0.0],
    [35.0 / 384.0, 0.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0],
];
const B5: [f64; 7] = [35.0 / 384.0, 0.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0, 0.0];
const B4: [f64; 7] = [
    5179.0 / 57600.0,
    0.0,
    7571.0 / 16695.0,
    393.0 / 640.0,
    -92097.0 / 339200.0,
    187.0 / 2100.0,
    1.0 / 40.0,
];

/// One trial step; returns the fifth-order state and the scaled error norm.
/// A stage that runs into coincident particles comes back as an error.
fn dp_step(st: &DislocationState, t: f64, x: &[f64], dt: f64, ctl: &StepControl) -> Result<(Vec<f64>, f64)> {
    let n = x.len();
    let mut k = [(); 7].map(|_| vec![0.0; n]);
    let mut y = vec![0.0; n];
    for stage in 0..7 {
        for i in 0..n {
            let mut acc = x[i];
            for (j, kj) in k.iter().enumerate().take(stage) {
                acc += dt * A[stage][j] * kj[i];
            }
            y[i] = acc;
        }
        if stage > 0 && y.windows(2).any(|w| !(w[0] < w[1])) {
            return Err(Error::SingularState);
        }
        rhs(st, t + C[stage] * dt, &y, &mut k[stage])?;
    }
    let mut hi = vec![0.0; n];
    let mut err = 0.0f64;
    for i in 0..n {
        let mut a5 = 0.0;
        let mut a4 = 0.0;
        for j in 0..7 {
            a5 += B5[j] * k[j][i];
            a4 += B4[j] * k[j][i];
        }
        hi[i] = x[i] + dt * a5;
        let scale = ctl.abs_tol + ctl.rel_tol * x[i].abs().max(hi[i].abs());
        err = err.max((dt * (a5 - a4)).abs() / scale);
    }
    Ok((hi, err))
}

/// Integrates to `t_end`, stopping at the first collision.
pub fn integrate(
    state: &DislocationState,
    t_end: f64,
    ctl: &StepControl,
    epsilon_collision: f64,
) -> Result<TrajectoryResult> {
    if !(t_end >= state.t) {
        return Err(Error::Domain("t_end precedes the current time"));
    }
    if !(epsilon_collision > 0.0) {
        return Err(Error::Domain("collision threshold must be positive"));
    }
    let two_s1 = 2.0 * state.s + 1.0;
    let mut t = state.t;
    let mut x = state.positions.clone();
    let mut out = TrajectoryResult {
        times: vec![t],
        positions: vec![x.clone()],
        collision_events: Vec::new(),
        terminated: Termination::TEnd,
    };
    if x.len() > 1 && min_gap(&x) < epsilon_collision {
        return Err(Error::SingularState);
    }
    let cap = |x: &[f64]| -> f64 {
        if x.len() < 2 {
            ctl.dt_max
        } else {
            (ctl.gap_factor * min_gap(x).powf(two_s1) / state.gamma).min(ctl.dt_max)
        }
    };
    let mut dt = cap(&x);
    let mut steps = 0u64;
    while t < t_end {
        steps += 1;
        dt = dt.min(cap(&x)).min(t_end - t);
        if dt < ctl.dt_min || steps > ctl.max_steps {
            return Err(Error::BlowupGuard { t });
        }
        let (next, err) = match dp_step(state, t, &x, dt, ctl) {
            Ok(r) => r,
            Err(Error::SingularState) => (Vec::new(), f64::INFINITY),
            Err(e) => return Err(e),
        };
        if next.is_empty() {
            // a stage ran into coincident particles
            dt *= 0.5;
            continue;
        }
        if err > 1.0 {
            dt *= (0.9 * err.powf(-0.2)).max(0.2);
            continue;
        }
        if x.len() > 1 && min_gap(&next) < epsilon_collision {
            let (time, at, gap_hi) = bracket_collision(state, t, &x, dt, ctl, epsilon_collision)?;
            let (i, gap) = closest_pair(&at);
            out.times.push(time);
            out.positions.push(at);
            out.collision_events.push(CollisionEvent {
                time,
                indices: (i, i + 1),
                gap: gap.min(gap_hi),
            });
            out.terminated = Termination::Collision;
            return Ok(out);
        }
        t += dt;
        x = next;
        out.times.push(t);
        out.positions.push(x.clone());
        let grow = if err > 0.0 { (0.9 * err.powf(-0.2)).min(5.0) } else { 5.0 };
        dt *= grow;
    }
    Ok(out)
}

fn closest_pair(x: &[f64]) -> (usize, f64) {
    let mut best = (0, f64::INFINITY);
    for (i, w) in x.windows(2).enumerate() {
        if w[1] - w[0] < best.1 {
            best = (i, w[1] - w[0]);
        }
    }
    best
}

/// Bisects the step length for the time at which the minimum gap drops
/// below `eps`; returns the bracket midpoint, the state at the lower end and
/// the gap at the upper end.
fn bracket_collision(
    st: &DislocationState,
    t: f64,
    x: &[f64],
    dt: f64,
    ctl: &StepControl,
    eps: f64,
) -> Result<(f64, Vec<f64>, f64)> {
    let (mut lo, mut hi) = (0.0, dt);
    let mut at_lo = x.to_vec();
    let mut gap_hi = 0.0;
    while hi - lo > COLLISION_BRACKET.min(0.5 * dt) {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        match dp_step(st, t, x, mid, ctl) {
            Ok((y, _)) if min_gap(&y) >= eps => {
                lo = mid;
                at_lo = y;
            }
            Ok((y, _)) => {
                hi = mid;
                gap_hi = min_gap(&y);
            }
            Err(Error::SingularState) => hi = mid,
            Err(e) => return Err(e),
        }
    }
    Ok((t + 0.5 * (lo + hi), at_lo, gap_hi))
}

/// Collision time of an opposite pair with no stress:
/// theta' = -gamma / (s theta^{2s}) gives T = s theta0^{2s+1} / ((2s+1) gamma).
pub fn pair_collision_time(theta0: f64, s: f64, gamma: f64) -> f64 {
    s * theta0.powf(2.0 * s + 1.0) / ((2.0 * s + 1.0) * gamma)
}

/// Gap of an aligned pair with no stress: theta^{2s+1} = theta0^{2s+1} + (2s+1) gamma t / s.
pub fn pair_repulsion_gap(theta0: f64, s: f64, gamma: f64, t: f64) -> f64 {
    (theta0.powf(2.0 * s + 1.0) + (2.0 * s + 1.0) * gamma * t / s).powf(1.0 / (2.0 * s + 1.0))
}

/// Upper bound on the collision time of an opposite pair under a bounded
/// stress, valid when 2 s |sigma|_inf theta0^{2s} < 1: from
/// theta' <= -(gamma / (s theta^{2s})) (1 - 2 s |sigma|_inf theta^{2s}).
pub fn pair_collision_bound(theta0: f64, s: f64, gamma: f64, sigma_sup: f64) -> Option<f64> {
    let q = 2.0 * s * sigma_sup * theta0.powf(2.0 * s);
    if q < 1.0 {
        Some(pair_collision_time(theta0, s, gamma) / (1.0 - q))
    } else {
        None
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn velocities_of_small_systems() {
        let one = DislocationState::aligned(vec![0.3], 0.5, 1.0, Stress::Zero).unwrap();
        assert_eq!(velocity(&one).unwrap(), vec![0.0]);

        let (s, g, th) = (0.3, 0.7, 1.7);
        let pair = DislocationState::new(vec![0.0, th], vec![1, -1], s, g, Stress::Zero).unwrap();
        let v = velocity(&pair).unwrap();
        let m = g / (2.0 * s * th.powf(2.0 * s));
        assert!((v[0] - m).abs() < 1e-14 && (v[1] + m).abs() < 1e-14);

        let rep = DislocationState::aligned(vec![0.0, th], s, g, Stress::Zero).unwrap();
        let v = velocity(&rep).unwrap();
        assert!((v[0] + m).abs() < 1e-14 && (v[1] - m).abs() < 1e-14);
    }

    #[test]
    fn rejects_bad_states() {
        assert!(DislocationState::aligned(vec![1.0, 1.0], 0.5, 1.0, Stress::Zero).is_err());
        assert!(DislocationState::new(vec![0.0, 1.0], vec![1, 0], 0.5, 1.0, Stress::Zero).is_err());
        assert!(DislocationState::aligned(vec![0.0, 1.0], 0.5, 0.0, Stress::Zero).is_err());
    }
}
