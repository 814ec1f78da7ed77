//! Caller-owned worker pool.
//!
//! Library routines take a `&Workers` and split their rank space across it;
//! they never create threads of their own.

use rayon::prelude::*;

use crate::enumerate::{JointDistribution, RankRange};
use crate::error::{Error, Result};
use crate::perm::StatPair;

/// Rank ranges handed out per worker thread.
const CHUNKS_PER_THREAD: usize = 8;

pub struct Workers {
    pool: Option<rayon::ThreadPool>,
}

impl Workers {
    pub fn sequential() -> Self {
        Workers { pool: None }
    }

    pub fn new(threads: usize) -> Result<Self> {
        if threads == 0 {
            return Err(Error::InvalidParameter("parallelism must be >= 1".into()));
        }
        if threads == 1 {
            return Ok(Self::sequential());
        }
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .map_err(|e| Error::Pool(e.to_string()))?;
        Ok(Workers { pool: Some(pool) })
    }

    pub fn threads(&self) -> usize {
        self.pool.as_ref().map_or(1, |p| p.current_num_threads())
    }

    /// Joint histogram over all of `S_n`, computed range by range and merged.
    pub fn joint_distribution(&self, n: usize, statpair: StatPair) -> Result<JointDistribution> {
        match &self.pool {
            None => JointDistribution::count_range(n, statpair, RankRange::full_checked(n)?),
            Some(pool) => {
                let ranges = RankRange::split(n, self.threads() * CHUNKS_PER_THREAD);
                let parts: Vec<JointDistribution> = pool.install(|| {
                    ranges
                        .par_iter()
                        .map(|r| JointDistribution::count_range(n, statpair, *r))
                        .collect::<Result<_>>()
                })?;
                let mut total = JointDistribution::empty(n, statpair);
                for part in &parts {
                    total.merge(part);
                }
                Ok(total)
            }
        }
    }
}

impl Default for Workers {
    fn default() -> Self {
        Self::sequential()
    }
}
