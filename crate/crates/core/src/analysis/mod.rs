//! Parallel classes, structural bounds and chromatic index.
//!
//! Searches take a [`SearchBudget`]. Running out of budget is not an error:
//! results carry a [`SearchStatus`] and, where meaningful, the best bounds
//! found so far.

mod bounds;
mod chromatic;
mod exact_cover;
mod heuristic;
mod packing;
mod pipeline;

use std::sync::atomic::{AtomicBool, AtomicU64, Ordering};
use std::time::{Duration, Instant};

use serde::{Deserialize, Serialize};

pub use bounds::{
    auto_mod3_weighting, pc_bound_exhaustive, pc_bound_mod3, pc_bound_ws, BoundMethod, CertificateWitness,
    PcBoundCertificate,
};
pub use chromatic::{chromatic_index_exact, ChromaticResult, ExactHints};
pub use exact_cover::{enumerate_parallel_classes, enumerate_parallel_classes_with, ParallelClassSearch};
pub use heuristic::{chromatic_index_heuristic, chromatic_index_heuristic_with, HeuristicConfig, HeuristicOutcome};
pub use packing::{max_disjoint_pcs, max_disjoint_pcs_with, pack_classes, PackingResult};
pub use pipeline::{theorem1_pipeline, theorem1_sweep, Theorem1Report, Theorem1Verdict, POSSIBLE_EXCEPTIONS};

/// Limits for one search call.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchBudget {
    pub max_nodes: u64,
    pub time_limit: Option<Duration>,
    /// Stop enumerating parallel classes after this many.
    pub max_classes: Option<usize>,
}

impl Default for SearchBudget {
    fn default() -> Self {
        SearchBudget { max_nodes: 100_000_000, time_limit: Some(Duration::from_secs(60)), max_classes: None }
    }
}

impl SearchBudget {
    pub fn nodes(max_nodes: u64) -> Self {
        SearchBudget { max_nodes, time_limit: None, max_classes: None }
    }

    pub fn unlimited() -> Self {
        SearchBudget { max_nodes: u64::MAX, time_limit: None, max_classes: None }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SearchStatus {
    Complete,
    Inconclusive,
}

/// Shared node counter and clock for one search.
pub(crate) struct Meter {
    budget: SearchBudget,
    nodes: AtomicU64,
    start: Instant,
    exhausted: AtomicBool,
}

impl Meter {
    pub(crate) fn new(budget: SearchBudget) -> Self {
        Meter { budget, nodes: AtomicU64::new(0), start: Instant::now(), exhausted: AtomicBool::new(false) }
    }

    /// Counts one node; false once the budget is spent.
    pub(crate) fn tick(&self) -> bool {
        if self.exhausted.load(Ordering::Relaxed) {
            return false;
        }
        let k = self.nodes.fetch_add(1, Ordering::Relaxed) + 1;
        let over_time =
            k.is_multiple_of(1024) && self.budget.time_limit.is_some_and(|limit| self.start.elapsed() > limit);
        if k > self.budget.max_nodes || over_time {
            self.exhausted.store(true, Ordering::Relaxed);
            return false;
        }
        true
    }

    pub(crate) fn exhausted(&self) -> bool {
        self.exhausted.load(Ordering::Relaxed)
    }

    pub(crate) fn nodes(&self) -> u64 {
        self.nodes.load(Ordering::Relaxed).min(self.budget.max_nodes)
    }

    pub(crate) fn status(&self) -> SearchStatus {
        if self.exhausted() {
            SearchStatus::Inconclusive
        } else {
            SearchStatus::Complete
        }
    }
}

/// Point masks for systems small enough for the bitmask kernels.
pub(crate) fn point_masks(system: &crate::designs::TripleSystem) -> crate::Result<Vec<u128>> {
    if system.order() > 128 {
        return Err(crate::Error::Unsupported(format!("search kernels handle v ≤ 128, got {}", system.order())));
    }
    Ok(system.triples().iter().map(|t| t.mask()).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn meter_stops_at_node_limit() {
        let m = Meter::new(SearchBudget::nodes(3));
        assert!(m.tick() && m.tick() && m.tick());
        assert!(!m.tick());
        assert_eq!(m.status(), SearchStatus::Inconclusive);
        assert_eq!(m.nodes(), 3);
    }
}
