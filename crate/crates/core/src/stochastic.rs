//! Monte Carlo oracle: for `x` in `[-1, 0]`, `phi(x)` is the probability that
//! `sum_{k>=1} u_k 2^{-k} <= x + 1` with `u_k` independent uniform on `[0, 1]`.
//!
//! Samples are split into `streams` contiguous chunks. Stream `i` draws from
//! ChaCha8 keyed by `seed` with stream id `i`, so the result depends only on
//! `(seed, samples, depth, streams)` and not on how the chunks are scheduled.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};

pub const DEFAULT_DEPTH: u32 = 40;
pub const DEFAULT_STREAMS: u64 = 8;
pub const MIN_DEPTH: u32 = 8;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct McConfig {
    pub samples: u64,
    pub depth: u32,
    pub seed: u64,
    pub streams: u64,
}

impl McConfig {
    pub fn new(samples: u64, seed: u64) -> Self {
        McConfig {
            samples,
            depth: DEFAULT_DEPTH,
            seed,
            streams: DEFAULT_STREAMS,
        }
    }

    fn validate(&self) -> Result<()> {
        if self.samples == 0 {
            return Err(Error::InvalidArgument("samples must be at least 1".into()));
        }
        if self.depth < MIN_DEPTH {
            return Err(Error::InvalidArgument(format!(
                "depth must be at least {MIN_DEPTH}, got {}",
                self.depth
            )));
        }
        if self.streams == 0 {
            return Err(Error::InvalidArgument("streams must be at least 1".into()));
        }
        Ok(())
    }

    /// Sample index range `[start, end)` owned by stream `i`.
    fn chunk(&self, i: u64) -> (u64, u64) {
        let base = self.samples / self.streams;
        let extra = self.samples % self.streams;
        let start = i * base + i.min(extra);
        let len = base + u64::from(i < extra);
        (start, start + len)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct McEstimate {
    pub x: f64,
    pub samples: u64,
    pub depth: u32,
    pub estimate: f64,
    pub stderr: f64,
    pub bias_bound: f64,
    pub seed: u64,
}

fn stream_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// Draws `S = sum_{k=1..depth} u_k 2^{-k}`.
fn draw_sum(rng: &mut ChaCha8Rng, depth: u32) -> f64 {
    let mut scale = 0.5;
    let mut s = 0.0;
    for _ in 0..depth {
        s += rng.gen::<f64>() * scale;
        scale *= 0.5;
    }
    s
}

/// Number of draws in stream `i` with `S <= threshold` (boundary counted in).
fn count_stream(cfg: &McConfig, stream: u64, threshold: f64) -> u64 {
    let (start, end) = cfg.chunk(stream);
    let mut rng = stream_rng(cfg.seed, stream);
    (start..end)
        .filter(|_| draw_sum(&mut rng, cfg.depth) <= threshold)
        .count() as u64
}

fn check_domain(x: f64) -> Result<()> {
    if !(-1.0..=0.0).contains(&x) {
        return Err(Error::OutOfDomain {
            what: "Monte Carlo abscissa",
            value: x.to_string(),
            domain: "[-1, 0]",
        });
    }
    Ok(())
}

fn finish(x: f64, cfg: &McConfig, hits: u64) -> McEstimate {
    let p = hits as f64 / cfg.samples as f64;
    McEstimate {
        x,
        samples: cfg.samples,
        depth: cfg.depth,
        estimate: p,
        stderr: (p * (1.0 - p) / cfg.samples as f64).sqrt(),
        bias_bound: f64::powi(2.0, -(cfg.depth as i32)),
        seed: cfg.seed,
    }
}

/// Estimates `phi(x)` for `x` in `[-1, 0]`, streams run in parallel.
pub fn mc_phi(x: f64, cfg: &McConfig) -> Result<McEstimate> {
    check_domain(x)?;
    cfg.validate()?;
    let hits: u64 = (0..cfg.streams)
        .into_par_iter()
        .map(|i| count_stream(cfg, i, x + 1.0))
        .sum();
    Ok(finish(x, cfg, hits))
}

/// Same as [`mc_phi`] with the streams run one after another.
pub fn mc_phi_sequential(x: f64, cfg: &McConfig) -> Result<McEstimate> {
    check_domain(x)?;
    cfg.validate()?;
    let hits: u64 = (0..cfg.streams).map(|i| count_stream(cfg, i, x + 1.0)).sum();
    Ok(finish(x, cfg, hits))
}

/// [`mc_phi`] extended to `[-1, 1]` through `phi(x) = phi(-x)`.
pub fn mc_phi_even(x: f64, cfg: &McConfig) -> Result<McEstimate> {
    if !(-1.0..=1.0).contains(&x) {
        return Err(Error::OutOfDomain {
            what: "Monte Carlo abscissa",
            value: x.to_string(),
            domain: "[-1, 1]",
        });
    }
    let mut est = mc_phi(-x.abs(), cfg)?;
    est.x = x;
    Ok(est)
}
