//! Running moments and chunked Monte Carlo.
//!
//! Samples are drawn in fixed-size chunks; chunk `i` always uses the
//! sub-stream `stream.split(i)` and chunk moments are merged in index order.
//! A parallel driver that evaluates chunks out of order and merges them in
//! order therefore reproduces the sequential result bit for bit.

use crate::quad::Estimate;
use crate::rng::{Cursor, RngStream};
#[allow(unused_imports)]
use crate::prelude::*;

pub const CHUNK: u64 = 8192;

/// Count, mean and centered second moment (Welford / Chan).
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct Moments {
    pub n: u64,
    pub mean: f64,
    pub m2: f64,
}

impl Moments {
    pub fn push(&mut self, x: f64) {
        self.n += 1;
        let d = x - self.mean;
        self.mean += d / self.n as f64;
        self.m2 += d * (x - self.mean);
    }

    pub fn merge(&self, o: &Moments) -> Moments {
        if self.n == 0 {
            return *o;
        }
        if o.n == 0 {
            return *self;
        }
        let n = self.n + o.n;
        let d = o.mean - self.mean;
        let mean = self.mean + d * (o.n as f64 / n as f64);
        let m2 = self.m2 + o.m2 + d * d * (self.n as f64 * o.n as f64 / n as f64);
        Moments { n, mean, m2 }
    }

    pub fn variance(&self) -> f64 {
        if self.n < 2 {
            0.0
        } else {
            self.m2 / (self.n - 1) as f64
        }
    }

    pub fn stderr(&self) -> f64 {
        if self.n < 2 {
            0.0
        } else {
            (self.variance() / self.n as f64).sqrt()
        }
    }

    pub fn estimate(&self) -> Estimate {
        Estimate {
            value: self.mean,
            stderr: self.stderr(),
            samples_or_nodes: self.n,
            converged: true,
        }
    }
}

pub fn chunk_count(samples: u64) -> u64 {
    samples.div_ceil(CHUNK)
}

/// Number of samples in chunk `i`.
pub fn chunk_len(samples: u64, i: u64) -> u64 {
    CHUNK.min(samples - i * CHUNK)
}

/// Moments of `sample` over chunk `i`.
pub fn run_chunk<F: FnMut(&mut Cursor) -> f64>(
    stream: &RngStream,
    samples: u64,
    i: u64,
    mut sample: F,
) -> Moments {
    let mut c = stream.split(i).cursor();
    let mut m = Moments::default();
    for _ in 0..chunk_len(samples, i) {
        m.push(sample(&mut c));
    }
    m
}

/// A Monte Carlo integrand that can be shared across worker threads.
pub trait Sampler: Sync {
    fn sample(&self, c: &mut Cursor) -> f64;
}

/// Sequential chunked Monte Carlo.
pub fn monte_carlo<F: FnMut(&mut Cursor) -> f64>(
    stream: &RngStream,
    samples: u64,
    mut sample: F,
) -> Moments {
    let mut total = Moments::default();
    for i in 0..chunk_count(samples) {
        let m = run_chunk(stream, samples, i, &mut sample);
        total = total.merge(&m);
    }
    total
}

/// [`monte_carlo`] over a [`Sampler`].
pub fn run_sampler<S: Sampler + ?Sized>(sampler: &S, stream: &RngStream, samples: u64) -> Moments {
    monte_carlo(stream, samples, |c| sampler.sample(c))
}

/// Something that evaluates a sampler over `samples` draws of a stream,
/// chunk by chunk; parallel drivers plug in here.
pub type Runner<'a> = &'a (dyn Fn(&dyn Sampler, &RngStream, u64) -> Moments + Sync);

/// The sequential [`Runner`].
pub fn sequential(sampler: &dyn Sampler, stream: &RngStream, samples: u64) -> Moments {
    run_sampler(sampler, stream, samples)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn merge_matches_single_pass() {
        let xs: std::vec::Vec<f64> = (0..1000).map(|i| ((i * 37) % 101) as f64 * 0.1).collect();
        let mut whole = Moments::default();
        xs.iter().for_each(|&x| whole.push(x));
        let mut a = Moments::default();
        let mut b = Moments::default();
        xs[..313].iter().for_each(|&x| a.push(x));
        xs[313..].iter().for_each(|&x| b.push(x));
        let m = a.merge(&b);
        assert_eq!(m.n, whole.n);
        assert!((m.mean - whole.mean).abs() < 1e-12);
        assert!((m.m2 - whole.m2).abs() < 1e-9);
    }

    #[test]
    fn chunked_mc_is_reproducible() {
        let s = RngStream::new(5, 1);
        let a = monte_carlo(&s, 20_000, |c| c.uniform());
        let b = monte_carlo(&s, 20_000, |c| c.uniform());
        assert_eq!(a, b);
        assert_eq!(a.n, 20_000);
        assert!((a.mean - 0.5).abs() < 4.0 * a.stderr());
    }
}
