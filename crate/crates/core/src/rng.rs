//! Counter-based random streams.
//!
//! A stream is identified by `(seed, stream_id)` and a position `counter`.
//! Sub-streams for parallel work are derived with [`RngStream::split`], so a
//! Monte Carlo run cut into numbered chunks draws the same numbers no matter
//! how the chunks are scheduled.

use core::f64::consts::PI;
use rand_chacha::rand_core::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
#[allow(unused_imports)]
use crate::prelude::*;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct RngStream {
    pub seed: u64,
    pub stream_id: u64,
    /// Number of 64-bit words consumed so far.
    pub counter: u64,
}

fn splitmix(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

impl RngStream {
    pub fn new(seed: u64, stream_id: u64) -> Self {
        RngStream {
            seed,
            stream_id,
            counter: 0,
        }
    }

    /// Independent child stream number `i`.
    pub fn split(&self, i: u64) -> RngStream {
        RngStream {
            seed: self.seed,
            stream_id: splitmix(self.stream_id ^ splitmix(i.wrapping_add(0x5851_F42D_4C95_7F2D))),
            counter: 0,
        }
    }

    pub fn cursor(&self) -> Cursor {
        let mut key = [0u8; 32];
        let a = splitmix(self.seed);
        let b = splitmix(a ^ self.stream_id);
        let c = splitmix(b ^ 0xD1B5_4A32_D192_ED03);
        let d = splitmix(c ^ self.seed.rotate_left(17));
        key[..8].copy_from_slice(&a.to_le_bytes());
        key[8..16].copy_from_slice(&b.to_le_bytes());
        key[16..24].copy_from_slice(&c.to_le_bytes());
        key[24..].copy_from_slice(&d.to_le_bytes());
        let mut rng = ChaCha8Rng::from_seed(key);
        rng.set_word_pos(2 * self.counter as u128);
        Cursor {
            rng,
            start: *self,
            used: 0,
        }
    }

    /// Uniform draw in [0, 1) and the advanced token.
    pub fn next_uniform(self) -> (f64, RngStream) {
        let mut c = self.cursor();
        let u = c.uniform();
        (u, c.token())
    }

    /// Uniform point on the unit sphere S^{n-1} and the advanced token.
    pub fn next_unit_vector(self, n: usize) -> (alloc::vec::Vec<f64>, RngStream) {
        let mut c = self.cursor();
        let mut v = alloc::vec![0.0; n];
        c.unit_vector(&mut v);
        (v, c.token())
    }
}

/// Mutable view of a stream for hot loops.
pub struct Cursor {
    rng: ChaCha8Rng,
    start: RngStream,
    used: u64,
}

impl Cursor {
    pub fn next_u64(&mut self) -> u64 {
        self.used += 1;
        self.rng.next_u64()
    }

    /// 53-bit uniform in [0, 1).
    pub fn uniform(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    /// Uniform in (0, 1].
    pub fn uniform_open0(&mut self) -> f64 {
        1.0 - self.uniform()
    }

    /// Standard normal by Box-Muller (one value per two uniforms).
    pub fn normal(&mut self) -> f64 {
        let u = self.uniform_open0();
        let v = self.uniform();
        (-2.0 * u.ln()).sqrt() * (2.0 * PI * v).cos()
    }

    /// Writes a uniform direction into `out`; its length is the dimension.
    pub fn unit_vector(&mut self, out: &mut [f64]) {
        match out.len() {
            0 => {}
            1 => out[0] = if self.next_u64() >> 63 == 0 { 1.0 } else { -1.0 },
            2 => {
                let t = 2.0 * PI * self.uniform();
                out[0] = t.cos();
                out[1] = t.sin();
            }
            3 => {
                let z = 2.0 * self.uniform() - 1.0;
                let t = 2.0 * PI * self.uniform();
                let r = (1.0 - z * z).max(0.0).sqrt();
                out[0] = r * t.cos();
                out[1] = r * t.sin();
                out[2] = z;
            }
            _ => loop {
                for x in out.iter_mut() {
                    *x = self.normal();
                }
                let r = crate::vec::norm(out);
                if r > 1e-300 {
                    out.iter_mut().for_each(|x| *x /= r);
                    break;
                }
            },
        }
    }

    /// Token positioned after everything drawn so far.
    pub fn token(&self) -> RngStream {
        RngStream {
            counter: self.start.counter + self.used,
            ..self.start
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn deterministic() {
        let a = RngStream::new(7, 0);
        let mut c1 = a.cursor();
        let mut c2 = a.cursor();
        for _ in 0..100 {
            assert_eq!(c1.uniform().to_bits(), c2.uniform().to_bits());
        }
    }

    #[test]
    fn tokens_resume_exactly() {
        let a = RngStream::new(11, 3);
        let mut c = a.cursor();
        let direct: std::vec::Vec<f64> = (0..10).map(|_| c.uniform()).collect();
        let mut tok = a;
        for d in direct {
            let (u, next) = tok.next_uniform();
            assert_eq!(u.to_bits(), d.to_bits());
            tok = next;
        }
    }

    #[test]
    fn interleaving_streams_matches_standalone() {
        let root = RngStream::new(42, 0);
        let (s1, s2) = (root.split(1), root.split(2));
        let solo1: std::vec::Vec<u64> = {
            let mut c = s1.cursor();
            (0..50).map(|_| c.next_u64()).collect()
        };
        let solo2: std::vec::Vec<u64> = {
            let mut c = s2.cursor();
            (0..50).map(|_| c.next_u64()).collect()
        };
        let (mut t1, mut t2) = (s1, s2);
        for i in 0..50 {
            let mut c = t1.cursor();
            assert_eq!(c.next_u64(), solo1[i]);
            t1 = c.token();
            let mut c = t2.cursor();
            assert_eq!(c.next_u64(), solo2[i]);
            t2 = c.token();
        }
        assert_ne!(solo1[0], solo2[0]);
    }

    #[test]
    fn uniform_mean() {
        let mut c = RngStream::new(1, 0).cursor();
        let n = 1_000_000;
        let m: f64 = (0..n).map(|_| c.uniform()).sum::<f64>() / n as f64;
        let sigma = (1.0 / 12.0f64).sqrt() / 1000.0;
        assert!((m - 0.5).abs() < 3.0 * sigma);
    }

    #[test]
    fn unit_vectors_are_centered() {
        let mut c = RngStream::new(2, 0).cursor();
        let n = 1_000_000;
        let mut v = [0.0; 2];
        let (mut sx, mut sy) = (0.0, 0.0);
        for _ in 0..n {
            c.unit_vector(&mut v);
            assert!((v[0] * v[0] + v[1] * v[1] - 1.0).abs() < 1e-12);
            sx += v[0];
            sy += v[1];
        }
        // each coordinate has variance 1/2
        let sigma = (0.5f64).sqrt() / 1000.0;
        assert!((sx / n as f64).abs() < 3.0 * sigma);
        assert!((sy / n as f64).abs() < 3.0 * sigma);
        let mut w = [0.0; 5];
        c.unit_vector(&mut w);
        assert!((crate::vec::norm(&w) - 1.0).abs() < 1e-12);
    }
}
