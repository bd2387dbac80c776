//! Maximum sets of pairwise triple-disjoint parallel classes.
//!
//! Every parallel class contains exactly one triple through point 0, so the
//! classes fall into groups keyed by that triple and a packing takes at most
//! one class per group. The search walks the groups in order, either picking
//! a compatible class or skipping the group. At each node the remaining
//! candidates are those compatible with everything chosen; for every point
//! `p` they use some number of distinct triples through `p`, and the least
//! such number bounds how many more classes can be added.

use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;

use serde::{Deserialize, Serialize};

use super::exact_cover::enumerate_parallel_classes_with;
use super::{Meter, SearchBudget, SearchStatus};
use crate::designs::{PartialParallelClass, TripleSystem};
use crate::{Exec, Result};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PackingResult {
    pub size: usize,
    pub witness: Vec<PartialParallelClass>,
    pub status: SearchStatus,
    /// Equal to `size` when complete.
    pub upper_bound: usize,
    pub classes_enumerated: usize,
    pub nodes: u64,
}

type Bits = Vec<u64>;

fn bits_of(class: &PartialParallelClass, words: usize) -> Bits {
    let mut b = vec![0u64; words];
    for &t in class.triples() {
        b[t / 64] |= 1 << (t % 64);
    }
    b
}

fn disjoint(a: &[u64], b: &[u64]) -> bool {
    a.iter().zip(b).all(|(x, y)| x & y == 0)
}

struct Packer<'a> {
    classes: &'a [PartialParallelClass],
    bits: Vec<Bits>,
    group: Vec<usize>,
    /// Triple bitsets per point.
    point_bits: Vec<Bits>,
    words: usize,
    meter: &'a Meter,
    best: AtomicUsize,
    witness: Mutex<Vec<usize>>,
}

impl Packer<'_> {
    fn bound(&self, cands: &[usize]) -> usize {
        if cands.is_empty() {
            return 0;
        }
        let mut union = vec![0u64; self.words];
        for &c in cands {
            for (u, b) in union.iter_mut().zip(&self.bits[c]) {
                *u |= b;
            }
        }
        self.point_bits
            .iter()
            .map(|pb| pb.iter().zip(&union).map(|(a, b)| (a & b).count_ones() as usize).sum())
            .min()
            .unwrap_or(0)
    }

    fn record(&self, chosen: &[usize]) {
        let mut w = self.witness.lock().expect("witness lock");
        if chosen.len() > self.best.load(Ordering::SeqCst) {
            self.best.store(chosen.len(), Ordering::SeqCst);
            *w = chosen.to_vec();
        }
    }

    /// `cands` are compatible with `chosen` and sorted by group.
    fn search(&self, chosen: &mut Vec<usize>, cands: &[usize]) {
        if chosen.len() > self.best.load(Ordering::Relaxed) {
            self.record(chosen);
        }
        if cands.is_empty() || chosen.len() + self.bound(cands) <= self.best.load(Ordering::Relaxed) {
            return;
        }
        let g = self.group[cands[0]];
        let split = cands.iter().position(|&c| self.group[c] != g).unwrap_or(cands.len());
        let (here, rest) = cands.split_at(split);
        for &c in here {
            if !self.meter.tick() {
                return;
            }
            let next: Vec<usize> = rest.iter().copied().filter(|&r| disjoint(&self.bits[c], &self.bits[r])).collect();
            chosen.push(c);
            self.search(chosen, &next);
            chosen.pop();
        }
        if self.meter.tick() {
            self.search(chosen, rest);
        }
    }
}

/// Maximum packing of the given parallel classes of `system`.
pub fn pack_classes(
    system: &TripleSystem,
    classes: &[PartialParallelClass],
    budget: &SearchBudget,
    exec: Exec,
) -> PackingResult {
    let meter = Meter::new(*budget);
    let words = system.len().div_ceil(64).max(1);
    let inc = system.incidence();
    let first_triple_group = |c: &PartialParallelClass| {
        c.triples().iter().find_map(|&t| inc[0].iter().position(|&x| x == t)).unwrap_or(usize::MAX)
    };
    let mut order: Vec<usize> = (0..classes.len()).collect();
    order.sort_by_key(|&i| (first_triple_group(&classes[i]), i));
    let sorted: Vec<PartialParallelClass> = order.iter().map(|&i| classes[i].clone()).collect();
    let point_bits = inc
        .iter()
        .map(|ts| {
            let mut b = vec![0u64; words];
            for &t in ts {
                b[t / 64] |= 1 << (t % 64);
            }
            b
        })
        .collect();
    let packer = Packer {
        bits: sorted.iter().map(|c| bits_of(c, words)).collect(),
        group: sorted.iter().map(first_triple_group).collect(),
        classes: &sorted,
        point_bits,
        words,
        meter: &meter,
        best: AtomicUsize::new(0),
        witness: Mutex::new(Vec::new()),
    };

    // greedy seed
    let mut greedy: Vec<usize> = Vec::new();
    for c in 0..sorted.len() {
        if greedy.iter().all(|&g| disjoint(&packer.bits[g], &packer.bits[c])) {
            greedy.push(c);
        }
    }
    packer.record(&greedy);

    let all: Vec<usize> = (0..sorted.len()).collect();
    let root_bound = packer.bound(&all);
    if !all.is_empty() && root_bound > packer.best.load(Ordering::SeqCst) {
        let g = packer.group[0];
        let split = all.iter().position(|&c| packer.group[c] != g).unwrap_or(all.len());
        // one task per class in the first group, plus the branch skipping it
        let tasks: Vec<Option<usize>> = (0..split).map(Some).chain([None]).collect();
        exec.map(tasks, |task| {
            let rest = &all[split..];
            match task {
                Some(c) => {
                    let next: Vec<usize> =
                        rest.iter().copied().filter(|&r| disjoint(&packer.bits[c], &packer.bits[r])).collect();
                    packer.search(&mut vec![c], &next);
                }
                None => packer.search(&mut Vec::new(), rest),
            }
        });
    }

    let size = packer.best.load(Ordering::SeqCst);
    let mut witness: Vec<PartialParallelClass> =
        packer.witness.into_inner().expect("witness lock").into_iter().map(|i| packer.classes[i].clone()).collect();
    witness.sort();
    let status = meter.status();
    let upper_bound = match status {
        SearchStatus::Complete => size,
        SearchStatus::Inconclusive => root_bound.max(size),
    };
    PackingResult { size, witness, status, upper_bound, classes_enumerated: classes.len(), nodes: meter.nodes() }
}

/// Largest number of pairwise triple-disjoint parallel classes.
pub fn max_disjoint_pcs(system: &TripleSystem, budget: &SearchBudget) -> Result<PackingResult> {
    max_disjoint_pcs_with(system, budget, Exec::default())
}

pub fn max_disjoint_pcs_with(system: &TripleSystem, budget: &SearchBudget, exec: Exec) -> Result<PackingResult> {
    let found = enumerate_parallel_classes_with(system, budget, exec)?;
    let mut result = pack_classes(system, &found.classes, budget, exec);
    result.nodes += found.nodes;
    if found.status == SearchStatus::Inconclusive {
        // classes were missed, so neither the optimum nor the bound is final
        result.status = SearchStatus::Inconclusive;
        result.upper_bound = (system.order() as usize).saturating_sub(1) / 2;
    }
    Ok(result)
}
