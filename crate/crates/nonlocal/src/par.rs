//! Chunk-parallel Monte Carlo driver.
//!
//! Chunks are evaluated on the rayon pool and merged sequentially in index
//! order, so results do not depend on the number of workers.

use nonlocal_core::rng::RngStream;
use nonlocal_core::stats::{chunk_count, run_chunk, Moments, Sampler};
use nonlocal_core::walk::{payoff_chunk, WalkChunk, WalkConfig};
use rayon::prelude::*;

pub fn parallel(sampler: &dyn Sampler, stream: &RngStream, samples: u64) -> Moments {
    let parts: Vec<Moments> = (0..chunk_count(samples))
        .into_par_iter()
        .map(|i| run_chunk(stream, samples, i, |c| sampler.sample(c)))
        .collect();
    parts.iter().fold(Moments::default(), |acc, m| acc.merge(m))
}

pub fn walk_total(x0: &[f64], cfg: &WalkConfig, trials: u64, stream: &RngStream) -> WalkChunk {
    let parts: Vec<WalkChunk> = (0..chunk_count(trials))
        .into_par_iter()
        .map(|i| payoff_chunk(x0, cfg, trials, stream, i))
        .collect();
    parts.iter().fold(WalkChunk::default(), |acc, m| acc.merge(m))
}

/// Worker cap from NONLOCAL_THREADS; unset or empty means rayon's default.
pub fn threads_from_env() -> Result<Option<usize>, String> {
    match std::env::var("NONLOCAL_THREADS") {
        Err(_) => Ok(None),
        Ok(v) if v.trim().is_empty() => Ok(None),
        Ok(v) => match v.trim().parse::<usize>() {
            Ok(n) if n > 0 => Ok(Some(n)),
            _ => Err(format!("NONLOCAL_THREADS must be a positive integer, got `{v}`")),
        },
    }
}
