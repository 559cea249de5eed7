//! Randomized learners for rooted DAGs with few root-to-vertex paths:
//! root and parent finding, separator search, arborescence learning, and
//! the almost-tree pipeline built from them.

mod chain_cover;
mod cross_edge;
mod narrowing;
mod separator;
mod spanning;

use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::LearnError;

pub use chain_cover::{hopcroft_karp, min_chain_cover};
pub use cross_edge::{learn_almost_tree, learn_cross_edge};
pub use narrowing::{bernoulli_sample, learn_parent, learn_root};
pub use separator::{
    estimate_counts, filter_separator, is_even_separator, is_even_separator_within, is_near_separator_split,
    learn_separator, SeparatorVerdict, Thresholds,
};
pub use spanning::{learn_spanning_tree, learn_spanning_tree_traced, SplitRecord};

pub type LearnRng = ChaCha8Rng;

/// Every tunable constant the learners use. None of the defaults are values
/// from the literature; they were picked with the bench suite.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct LearnerConfig {
    /// Sample size constant: `m = c1 * sqrt(|V|)`.
    pub c1: f64,
    /// Estimation constant: `K = ceil(c2 * ln |V|)`.
    pub c2: f64,
    /// Bound on in-degree plus out-degree.
    pub d: usize,
    /// Bound on the number of root-to-vertex paths.
    pub c_paths: usize,
    /// Vertex sets at most this large are learned by brute force.
    pub g_base: usize,
    /// Iteration cap for the root/parent narrowing loops.
    pub eps_cap: usize,
    /// Attempts per level of the separator loop; `None` means `64 * d`.
    pub loop_cap: Option<usize>,
    /// Butterfly sampling constant: samples of expected size `c_b * 2^(h/2) * h`.
    pub butterfly_c: f64,
    pub seed: u64,
}

impl Default for LearnerConfig {
    fn default() -> Self {
        LearnerConfig::new(3)
    }
}

impl LearnerConfig {
    pub fn new(d: usize) -> Self {
        LearnerConfig {
            c1: 6.0,
            c2: 32.0,
            d,
            c_paths: 2,
            g_base: 16.max(d + 2),
            eps_cap: 4,
            loop_cap: None,
            butterfly_c: 2.0,
            seed: 0,
        }
    }

    pub fn with_seed(self, seed: u64) -> Self {
        LearnerConfig { seed, ..self }
    }

    pub fn validate(&self) -> Result<(), LearnError> {
        let bad = |msg: String| Err(LearnError::InvalidConfig(msg));
        if !(self.c1 > 8.0 * std::f64::consts::LN_2) {
            return bad(format!("c1 = {} must exceed 8 ln 2", self.c1));
        }
        if !(self.c2 > 0.0) {
            return bad(format!("c2 = {} must be positive", self.c2));
        }
        if self.d < 2 {
            return bad(format!("d = {} must be at least 2", self.d));
        }
        if self.g_base < self.d + 2 {
            return bad(format!("g_base = {} must be at least d + 2 = {}", self.g_base, self.d + 2));
        }
        if self.eps_cap == 0 || self.loop_cap == Some(0) {
            return bad("iteration caps must be positive".into());
        }
        if !(self.butterfly_c > 0.0) {
            return bad(format!("butterfly_c = {} must be positive", self.butterfly_c));
        }
        Ok(())
    }

    /// `m` for a vertex set of size `n`.
    pub fn sample_size(&self, n: usize) -> f64 {
        self.c1 * (n as f64).sqrt()
    }

    /// `K` for a vertex set of size `n`, at least 1.
    pub fn estimation_size(&self, n: usize) -> usize {
        ((self.c2 * (n.max(2) as f64).ln()).ceil() as usize).max(1)
    }

    pub fn loop_cap(&self) -> usize {
        self.loop_cap.unwrap_or(64 * self.d)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_validate() {
        for d in 2..8 {
            LearnerConfig::new(d).validate().unwrap();
        }
        assert_eq!(LearnerConfig::new(3).g_base, 16);
        assert_eq!(LearnerConfig::new(20).g_base, 22);
        assert_eq!(LearnerConfig::new(3).loop_cap(), 192);
    }

    #[test]
    fn rejects_bad_constants() {
        let base = LearnerConfig::new(3);
        assert!(LearnerConfig { c1: 5.5, ..base }.validate().is_err());
        assert!(LearnerConfig { c2: 0.0, ..base }.validate().is_err());
        assert!(LearnerConfig { g_base: 4, ..base }.validate().is_err());
        assert!(LearnerConfig { eps_cap: 0, ..base }.validate().is_err());
    }

    #[test]
    fn sizes() {
        let c = LearnerConfig::new(3);
        assert!((c.sample_size(100) - 60.0).abs() < 1e-9);
        assert_eq!(c.estimation_size(1), c.estimation_size(2));
        assert_eq!(c.estimation_size(256), (32.0 * 256f64.ln()).ceil() as usize);
    }
}
