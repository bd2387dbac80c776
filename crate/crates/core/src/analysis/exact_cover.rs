//! Parallel classes as exact covers of the point set by triples.

use std::sync::atomic::{AtomicUsize, Ordering};

use serde::{Deserialize, Serialize};

use super::{point_masks, Meter, SearchBudget, SearchStatus};
use crate::designs::{PartialParallelClass, TripleSystem};
use crate::{Error, Exec, Result};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ParallelClassSearch {
    /// Sorted lexicographically by triple indices.
    pub classes: Vec<PartialParallelClass>,
    pub status: SearchStatus,
    pub nodes: u64,
}

struct Cover<'a> {
    masks: Vec<u128>,
    incidence: Vec<Vec<usize>>,
    full: u128,
    meter: &'a Meter,
    found: &'a AtomicUsize,
    cap: usize,
}

impl Cover<'_> {
    /// Uncovered point with the fewest admissible triples, smallest index on ties.
    fn choose_point(&self, covered: u128) -> (usize, usize) {
        let mut best = (usize::MAX, usize::MAX);
        let mut open = self.full & !covered;
        while open != 0 {
            let p = open.trailing_zeros() as usize;
            open &= open - 1;
            let count = self.incidence[p].iter().filter(|&&t| self.masks[t] & covered == 0).count();
            if count < best.1 {
                best = (p, count);
                if count <= 1 {
                    break;
                }
            }
        }
        best
    }

    /// Returns false when the search was cut short.
    fn search(&self, covered: u128, chosen: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) -> bool {
        if covered == self.full {
            out.push(chosen.clone());
            return self.found.fetch_add(1, Ordering::Relaxed) + 1 < self.cap;
        }
        let (p, count) = self.choose_point(covered);
        if count == 0 {
            return true;
        }
        for &t in &self.incidence[p] {
            if self.masks[t] & covered != 0 {
                continue;
            }
            if !self.meter.tick() {
                return false;
            }
            chosen.push(t);
            let go_on = self.search(covered | self.masks[t], chosen, out);
            chosen.pop();
            if !go_on {
                return false;
            }
        }
        true
    }
}

/// All parallel classes of a system of order `v ≡ 3 (mod 6)`.
pub fn enumerate_parallel_classes(system: &TripleSystem, budget: &SearchBudget) -> Result<ParallelClassSearch> {
    enumerate_parallel_classes_with(system, budget, Exec::default())
}

pub fn enumerate_parallel_classes_with(
    system: &TripleSystem,
    budget: &SearchBudget,
    exec: Exec,
) -> Result<ParallelClassSearch> {
    let v = system.order();
    if v % 6 != 3 {
        return Err(Error::InvalidOrder { value: v.into(), reason: "parallel classes need v ≡ 3 (mod 6)" });
    }
    let meter = Meter::new(*budget);
    let found = AtomicUsize::new(0);
    let cover = Cover {
        masks: point_masks(system)?,
        incidence: system.incidence(),
        full: if v == 128 { u128::MAX } else { (1u128 << v) - 1 },
        meter: &meter,
        found: &found,
        cap: budget.max_classes.unwrap_or(usize::MAX),
    };
    let (root, _) = cover.choose_point(0);
    let branches: Vec<usize> = cover.incidence[root].clone();
    let parts = exec.map(branches, |t| {
        let mut out = Vec::new();
        if cover.meter.tick() {
            let mut chosen = vec![t];
            cover.search(cover.masks[t], &mut chosen, &mut out);
        }
        out
    });
    let truncated = found.load(Ordering::Relaxed) >= cover.cap;
    let mut classes: Vec<PartialParallelClass> = parts.into_iter().flatten().map(PartialParallelClass::new).collect();
    classes.sort();
    classes.truncate(cover.cap);
    let status = if truncated { SearchStatus::Inconclusive } else { meter.status() };
    Ok(ParallelClassSearch { classes, status, nodes: meter.nodes() })
}
