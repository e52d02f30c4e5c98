//! Per-pattern truncation orders for one integration step.

use crate::pattern::WeightPattern;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

/// Maps every admissible pattern to the series truncation order `q` used when
/// sampling it. The pool drawn for a step must provide basis indices up to
/// `q_max + 2`, where `q_max` is the largest order in the plan.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TruncationPlan {
    q: BTreeMap<WeightPattern, usize>,
}

impl TruncationPlan {
    /// Same order for all twelve patterns.
    pub fn uniform(q: usize) -> Self {
        TruncationPlan {
            q: WeightPattern::ALL.iter().map(|&p| (p, q)).collect(),
        }
    }

    pub fn set(&mut self, pattern: WeightPattern, q: usize) {
        self.q.insert(pattern, q);
    }

    pub fn q(&self, pattern: WeightPattern) -> usize {
        self.q[&pattern]
    }

    pub fn q_max(&self) -> usize {
        self.q.values().copied().max().unwrap_or(0)
    }

    /// Number of pool rows a step needs: indices `0 ..= q_max + 2`.
    pub fn pool_rows(&self) -> usize {
        self.q_max() + 3
    }

    pub fn iter(&self) -> impl Iterator<Item = (WeightPattern, usize)> + '_ {
        self.q.iter().map(|(&p, &q)| (p, q))
    }
}
