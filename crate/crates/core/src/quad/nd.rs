use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::PI;

use super::{integrate_pieces, integrate_power_tail, split_at, Estimate, Piece, QuadSpec};
use crate::{Error, Result};
#[allow(unused_imports)]
use crate::prelude::*;

/// Integration regions for [`integrate_nd`].
#[derive(Clone, Copy, Debug)]
pub enum Region<'a> {
    /// r_in < |y - center| < r_out. `center_exponent` is the power of |y - center|
    /// the integrand behaves like at the center (only used when r_in = 0).
    BallShell {
        center: &'a [f64],
        r_in: f64,
        r_out: f64,
        center_exponent: f64,
    },
    Box {
        lo: &'a [f64],
        hi: &'a [f64],
    },
    /// |y - center| > r, integrand decaying like |y|^{-decay} (decay > n) and
    /// behaving like (|y - center| - r)^{boundary_exponent} at the sphere.
    BallComplement {
        center: &'a [f64],
        r: f64,
        decay: f64,
        boundary_exponent: f64,
    },
}

struct Trap {
    err: Option<Error>,
    converged: bool,
}

impl Trap {
    fn new() -> Self {
        Trap {
            err: None,
            converged: true,
        }
    }

    fn take(&mut self, r: Result<f64>) -> f64 {
        match r {
            Ok(v) => v,
            Err(e) => {
                if self.err.is_none() {
                    self.err = Some(e);
                }
                0.0
            }
        }
    }

    fn take_est(&mut self, r: Result<Estimate>) -> f64 {
        match r {
            Ok(e) => {
                self.converged &= e.converged;
                e.value
            }
            Err(e) => {
                if self.err.is_none() {
                    self.err = Some(e);
                }
                0.0
            }
        }
    }

    fn finish(self, mut e: Estimate) -> Result<Estimate> {
        if let Some(err) = self.err {
            return Err(err);
        }
        e.converged &= self.converged;
        Ok(e)
    }
}

/// Integral over the unit sphere S^{n-1} of `radial(direction)`.
///
/// `radial` usually returns a radial integral that already includes the
/// t^{n-1} Jacobian. In n = 2 the angle runs over [0, 2pi) and
/// `angular_breaks` lists angles where the integrand is not smooth; in n = 3
/// the breaks refer to the polar angle.
pub fn polar<R: FnMut(&[f64]) -> Result<f64>>(
    n: usize,
    angular_breaks: &[f64],
    mut radial: R,
    spec: &QuadSpec,
) -> Result<Estimate> {
    match n {
        1 => {
            let v = radial(&[1.0])? + radial(&[-1.0])?;
            Ok(Estimate {
                value: v,
                stderr: 0.0,
                samples_or_nodes: 2,
                converged: true,
            })
        }
        2 => {
            let mut trap = Trap::new();
            let breaks: Vec<f64> = angular_breaks
                .iter()
                .map(|&t| crate::rem_euclid(t, 2.0 * PI))
                .collect();
            let pieces = split_at(0.0, 2.0 * PI, &breaks);
            let e = integrate_pieces(
                |th: f64| {
                    let d = [th.cos(), th.sin()];
                    trap.take(radial(&d))
                },
                &pieces,
                spec,
            )?;
            trap.finish(e)
        }
        3 => {
            let mut trap = Trap::new();
            let pieces = split_at(0.0, PI, angular_breaks);
            let inner = spec.scaled(0.1);
            let e = integrate_pieces(
                |ph: f64| {
                    let (sp, cp) = (ph.sin(), ph.cos());
                    let r = integrate_pieces(
                        |th: f64| {
                            let d = [sp * th.cos(), sp * th.sin(), cp];
                            trap.take(radial(&d))
                        },
                        &[Piece::plain(0.0, 2.0 * PI)],
                        &inner,
                    );
                    sp * trap.take_est(r)
                },
                &pieces,
                spec,
            )?;
            trap.finish(e)
        }
        _ => Err(Error::UnsupportedDimension(n)),
    }
}

/// Integral of `f` over a region of R^n, n <= 3, in polar coordinates about
/// the region's center (boxes use nested one-dimensional rules).
pub fn integrate_nd<F: FnMut(&[f64]) -> f64>(
    mut f: F,
    region: Region<'_>,
    spec: &QuadSpec,
) -> Result<Estimate> {
    let inner = spec.scaled(0.1);
    match region {
        Region::BallShell {
            center,
            r_in,
            r_out,
            center_exponent,
        } => {
            let n = center.len();
            if n > 3 || n == 0 {
                return Err(Error::UnsupportedDimension(n));
            }
            if !(r_in >= 0.0 && r_out > r_in) {
                return Err(Error::Domain("shell radii must satisfy 0 <= r_in < r_out"));
            }
            let nm1 = (n - 1) as i32;
            let mut y = vec![0.0; n];
            let mut trap = Trap::new();
            let e = polar(
                n,
                &[],
                |d| {
                    let piece = if r_in == 0.0 {
                        Piece::new(0.0, r_out, center_exponent + nm1 as f64, 0.0)
                    } else {
                        Piece::plain(r_in, r_out)
                    };
                    let w = if r_in == 0.0 { 0 } else { nm1 };
                    let r = integrate_pieces(
                        |t: f64| {
                            crate::vec::axpy(&mut y, center, t, d);
                            let v = f(&y);
                            if r_in == 0.0 {
                                if v == 0.0 {
                                    0.0
                                } else {
                                    v * t.powf(-center_exponent)
                                }
                            } else {
                                v * t.powi(w)
                            }
                        },
                        &[piece],
                        &inner,
                    );
                    Ok(trap.take_est(r))
                },
                spec,
            )?;
            trap.finish(e)
        }
        Region::BallComplement {
            center,
            r,
            decay,
            boundary_exponent,
        } => {
            let n = center.len();
            if n > 3 || n == 0 {
                return Err(Error::UnsupportedDimension(n));
            }
            if !(decay > n as f64) {
                return Err(Error::Integrability("decay exponent must exceed the dimension"));
            }
            let nm1 = (n - 1) as i32;
            let mut y = vec![0.0; n];
            let mut trap = Trap::new();
            let e = polar(
                n,
                &[],
                |d| {
                    let near = integrate_pieces(
                        |t: f64| {
                            crate::vec::axpy(&mut y, center, t, d);
                            let v = f(&y) * t.powi(nm1);
                            if boundary_exponent != 0.0 && v != 0.0 {
                                v * (t - r).powf(-boundary_exponent)
                            } else {
                                v
                            }
                        },
                        &[Piece::new(r, 2.0 * r, boundary_exponent, 0.0)],
                        &inner,
                    );
                    let far = integrate_power_tail(
                        |t: f64| {
                            crate::vec::axpy(&mut y, center, t, d);
                            f(&y) * t.powi(nm1)
                        },
                        2.0 * r,
                        decay - nm1 as f64,
                        &inner,
                    );
                    Ok(trap.take_est(near) + trap.take_est(far))
                },
                spec,
            )?;
            trap.finish(e)
        }
        Region::Box { lo, hi } => {
            let n = lo.len();
            if n > 3 || n == 0 || hi.len() != n {
                return Err(Error::UnsupportedDimension(n));
            }
            let mut y = vec![0.0; n];
            box_rec(&mut f, lo, hi, &mut y, 0, spec)
        }
    }
}

fn box_rec<F: FnMut(&[f64]) -> f64>(
    f: &mut F,
    lo: &[f64],
    hi: &[f64],
    y: &mut Vec<f64>,
    k: usize,
    spec: &QuadSpec,
) -> Result<Estimate> {
    let n = lo.len();
    if k + 1 == n {
        return integrate_pieces(
            |t| {
                y[k] = t;
                f(y)
            },
            &[Piece::plain(lo[k], hi[k])],
            spec,
        );
    }
    let inner = spec.scaled(0.1);
    let mut trap = Trap::new();
    let e = integrate_pieces(
        |t| {
            y[k] = t;
            let r = box_rec(f, lo, hi, y, k + 1, &inner);
            trap.take_est(r)
        },
        &[Piece::plain(lo[k], hi[k])],
        spec,
    )?;
    trap.finish(e)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn circle_measure() {
        let e = polar(2, &[], |_| Ok(1.0), &QuadSpec::default()).unwrap();
        assert!((e.value - 2.0 * PI).abs() < 1e-12);
        let e = polar(3, &[], |_| Ok(1.0), &QuadSpec::default()).unwrap();
        assert!((e.value - 4.0 * PI).abs() < 1e-10);
    }

    #[test]
    fn exterior_power() {
        let c = [0.0, 0.0];
        let e = integrate_nd(
            |y| crate::vec::norm(y).powf(-2.5),
            Region::BallComplement {
                center: &c,
                r: 1.0,
                decay: 2.5,
                boundary_exponent: 0.0,
            },
            &QuadSpec::default(),
        )
        .unwrap();
        assert!((e.value - 4.0 * PI).abs() < 1e-9, "{}", e.value);
    }

    #[test]
    fn unit_box_and_ball() {
        let lo = [0.0, 0.0, 0.0];
        let hi = [1.0, 2.0, 1.0];
        let e = integrate_nd(|y| y[0] * y[1] * y[2], Region::Box { lo: &lo, hi: &hi }, &QuadSpec::default())
            .unwrap();
        assert!((e.value - 0.5).abs() < 1e-10);
        let c = [0.0, 0.0, 0.0];
        let e = integrate_nd(
            |_| 1.0,
            Region::BallShell {
                center: &c,
                r_in: 0.0,
                r_out: 1.0,
                center_exponent: 0.0,
            },
            &QuadSpec::default(),
        )
        .unwrap();
        assert!((e.value - 4.0 * PI / 3.0).abs() < 1e-10);
    }
}
