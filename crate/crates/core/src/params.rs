use std::collections::BTreeMap;

use crate::error::{Error, Result};

/// Parameters `(alpha, theta)` of the two-parameter Poisson-Dirichlet prior,
/// restricted to `0 < alpha < 1` and `theta > -alpha`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PDParams {
    alpha: f64,
    theta: f64,
}

impl PDParams {
    pub fn new(alpha: f64, theta: f64) -> Result<Self> {
        if !(alpha > 0.0 && alpha < 1.0) {
            return Err(Error::InvalidParams(format!("alpha must lie in (0,1), got {alpha}")));
        }
        if !(theta.is_finite() && theta + alpha > 0.0) {
            return Err(Error::InvalidParams(format!(
                "theta must exceed -alpha = {}, got {theta}",
                -alpha
            )));
        }
        Ok(PDParams { alpha, theta })
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }

    /// The law left after deleting `k` classes: `(alpha, theta + k alpha)`.
    pub fn after_deletion(&self, k: usize) -> PDParams {
        PDParams { alpha: self.alpha, theta: self.theta + k as f64 * self.alpha }
    }
}

/// An observed sample summarized by its species multiplicities.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PartitionData {
    counts: Vec<u64>,
    n: u64,
}

impl PartitionData {
    pub fn new(counts: Vec<u64>) -> Result<Self> {
        if counts.is_empty() {
            return Err(Error::InvalidArgument("no species observed".into()));
        }
        if let Some(pos) = counts.iter().position(|&c| c == 0) {
            return Err(Error::InvalidArgument(format!("count #{} is zero", pos + 1)));
        }
        let n = counts.iter().sum();
        Ok(PartitionData { counts, n })
    }

    pub fn counts(&self) -> &[u64] {
        &self.counts
    }

    pub fn n(&self) -> usize {
        self.n as usize
    }

    pub fn k(&self) -> usize {
        self.counts.len()
    }

    /// Map block size -> number of blocks of that size. Order-free view of
    /// the counts.
    pub fn size_profile(&self) -> BTreeMap<u64, usize> {
        let mut profile = BTreeMap::new();
        for &c in &self.counts {
            *profile.entry(c).or_insert(0) += 1;
        }
        profile
    }
}
