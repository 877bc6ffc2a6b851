//! Seeded uniform sampling of candidate guard positions in free space.
//!
//! Positions are drawn with a ChaCha8 stream seeded from a `u64`, so a given
//! `(world, n, seed)` yields the same positions on every platform. A sample
//! set of size `n` is a prefix of any larger set drawn with the same seed.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{Point2, World};

/// Consecutive rejected draws tolerated before giving up.
pub const MAX_CONSECUTIVE_REJECTIONS: usize = 10_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ResampleMode {
    /// One candidate set, sampled once and reused at every step.
    #[default]
    Fixed,
    /// A fresh set per step, seeded with `seed + k`.
    PerIteration,
}

impl ResampleMode {
    /// Seed used for the candidate set at step `k`.
    pub fn seed_for_step(self, seed: u64, k: usize) -> u64 {
        match self {
            ResampleMode::Fixed => seed,
            ResampleMode::PerIteration => seed.wrapping_add(k as u64),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CandidateSet {
    pub positions: Vec<Point2>,
    pub seed: u64,
}

impl CandidateSet {
    pub fn len(&self) -> usize {
        self.positions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.positions.is_empty()
    }
}

/// Draws `n` points i.i.d. uniform over the free region of `world` by
/// rejection from the bounding rectangle.
pub fn sample_candidates(world: &World, n: usize, seed: u64) -> Result<CandidateSet> {
    if n == 0 {
        return Err(Error::invalid("candidate_count", "must be at least 1"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let b = world.bounds;
    let mut positions = Vec::with_capacity(n);
    let mut rejections = 0;
    while positions.len() < n {
        let p = Point2::new(
            rng.gen_range(b.min.x..b.max.x),
            rng.gen_range(b.min.y..b.max.y),
        );
        if world.point_in_free_space(p) {
            positions.push(p);
            rejections = 0;
        } else {
            rejections += 1;
            if rejections >= MAX_CONSECUTIVE_REJECTIONS {
                return Err(Error::FreeSpaceTooSmall { rejections });
            }
        }
    }
    Ok(CandidateSet { positions, seed })
}
