//! Heuristic colouring with a fixed number of classes.
//!
//! Partial-colouring tabu search: all classes stay valid, and triples that do
//! not fit are parked in an uncoloured pool. A move inserts a pooled triple
//! into a class and ejects the (at most three) triples of that class it
//! meets, which then go back to the pool and may not re-enter that class for
//! a few iterations. Each restart reseeds from a random first-fit colouring.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::point_masks;
use crate::designs::{m_lower, verify_colouring, Colouring, TripleSystem};
use crate::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HeuristicConfig {
    pub restarts: u32,
    pub iterations_per_restart: u64,
}

impl Default for HeuristicConfig {
    fn default() -> Self {
        HeuristicConfig { restarts: 10, iterations_per_restart: 20_000 }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "outcome", rename_all = "snake_case")]
pub enum HeuristicOutcome {
    Success {
        colouring: Colouring,
    },
    /// Not a proof that `target` colours are impossible.
    Failure {
        best_uncoloured: usize,
    },
}

impl HeuristicOutcome {
    pub fn colouring(&self) -> Option<&Colouring> {
        match self {
            HeuristicOutcome::Success { colouring } => Some(colouring),
            HeuristicOutcome::Failure { .. } => None,
        }
    }
}

/// Greedy DSATUR colouring: the returned class of each triple.
pub(crate) fn greedy_assignment(masks: &[u128]) -> Vec<usize> {
    let mut colour: Vec<Option<usize>> = vec![None; masks.len()];
    let mut class_masks: Vec<u128> = Vec::new();
    for _ in 0..masks.len() {
        let t = (0..masks.len())
            .filter(|&t| colour[t].is_none())
            .max_by_key(|&t| (class_masks.iter().filter(|&&m| m & masks[t] != 0).count(), std::cmp::Reverse(t)))
            .expect("an uncoloured triple remains");
        let c = match class_masks.iter().position(|&m| m & masks[t] == 0) {
            Some(c) => c,
            None => {
                class_masks.push(0);
                class_masks.len() - 1
            }
        };
        class_masks[c] |= masks[t];
        colour[t] = Some(c);
    }
    colour.into_iter().map(|c| c.expect("coloured")).collect()
}

const NONE: u32 = u32::MAX;

struct Tabu<'a> {
    system: &'a TripleSystem,
    k: usize,
    v: usize,
    /// occupant[c * v + p]: triple of class `c` through point `p`.
    occupant: Vec<u32>,
    colour: Vec<Option<usize>>,
    pool: Vec<usize>,
    pool_pos: Vec<usize>,
    tabu_until: Vec<u64>,
}

impl<'a> Tabu<'a> {
    fn new(system: &'a TripleSystem, k: usize) -> Self {
        let b = system.len();
        let v = system.order() as usize;
        Tabu {
            system,
            k,
            v,
            occupant: vec![NONE; k * v],
            colour: vec![None; b],
            pool: Vec::new(),
            pool_pos: vec![usize::MAX; b],
            tabu_until: vec![0; b * k],
        }
    }

    fn reset<R: Rng>(&mut self, rng: &mut R) {
        self.occupant.fill(NONE);
        self.colour.fill(None);
        self.pool.clear();
        self.pool_pos.fill(usize::MAX);
        self.tabu_until.fill(0);
        let mut order: Vec<usize> = (0..self.system.len()).collect();
        order.shuffle(rng);
        for t in order {
            match (0..self.k).find(|&c| self.conflicts(t, c).is_empty()) {
                Some(c) => self.place(t, c),
                None => self.park(t),
            }
        }
    }

    fn conflicts(&self, t: usize, c: usize) -> Vec<usize> {
        let mut out = Vec::with_capacity(3);
        for p in self.system.triple(t).points() {
            let o = self.occupant[c * self.v + p as usize];
            if o != NONE && !out.contains(&(o as usize)) {
                out.push(o as usize);
            }
        }
        out
    }

    fn place(&mut self, t: usize, c: usize) {
        for p in self.system.triple(t).points() {
            self.occupant[c * self.v + p as usize] = t as u32;
        }
        self.colour[t] = Some(c);
    }

    fn unplace(&mut self, t: usize) -> usize {
        let c = self.colour[t].take().expect("triple is coloured");
        for p in self.system.triple(t).points() {
            self.occupant[c * self.v + p as usize] = NONE;
        }
        c
    }

    fn park(&mut self, t: usize) {
        self.pool_pos[t] = self.pool.len();
        self.pool.push(t);
    }

    fn unpark(&mut self, t: usize) {
        let i = self.pool_pos[t];
        let last = *self.pool.last().expect("pool not empty");
        self.pool.swap_remove(i);
        if last != t {
            self.pool_pos[last] = i;
        }
        self.pool_pos[t] = usize::MAX;
    }

    /// Runs until the pool empties or `iterations` pass; returns the smallest pool seen.
    fn run<R: Rng>(&mut self, iterations: u64, rng: &mut R) -> usize {
        let mut best_pool = self.pool.len();
        for iter in 1..=iterations {
            if self.pool.is_empty() {
                return 0;
            }
            let mut chosen: Option<(usize, usize)> = None;
            let mut best_score = usize::MAX;
            let mut ties = 0u32;
            for &t in &self.pool {
                for c in 0..self.k {
                    let ejected = self.conflicts(t, c).len();
                    let tabu = self.tabu_until[t * self.k + c] >= iter;
                    let aspires = self.pool.len() - 1 + ejected < best_pool;
                    if tabu && !aspires {
                        continue;
                    }
                    if ejected < best_score {
                        best_score = ejected;
                        chosen = Some((t, c));
                        ties = 1;
                    } else if ejected == best_score {
                        ties += 1;
                        if rng.random_range(0..ties) == 0 {
                            chosen = Some((t, c));
                        }
                    }
                }
            }
            let (t, c) = chosen
                .unwrap_or_else(|| (self.pool[rng.random_range(0..self.pool.len())], rng.random_range(0..self.k)));
            let tenure = rng.random_range(0..10) + (self.pool.len() as u64 * 6) / 10;
            self.unpark(t);
            for u in self.conflicts(t, c) {
                self.unplace(u);
                self.park(u);
                self.tabu_until[u * self.k + c] = iter + tenure;
            }
            self.place(t, c);
            best_pool = best_pool.min(self.pool.len());
        }
        if self.pool.is_empty() {
            0
        } else {
            best_pool
        }
    }

    /// The current colouring with empty classes dropped.
    fn colouring(&self) -> Colouring {
        let mut relabel = vec![usize::MAX; self.k];
        let mut next = 0;
        let assignment: Vec<usize> = self
            .colour
            .iter()
            .map(|c| {
                let c = c.expect("coloured");
                if relabel[c] == usize::MAX {
                    relabel[c] = next;
                    next += 1;
                }
                relabel[c]
            })
            .collect();
        Colouring::from_assignment(&assignment)
    }
}

/// Tries to colour `system` with at most `target` classes.
pub fn chromatic_index_heuristic(
    system: &TripleSystem,
    target: usize,
    seed: u64,
    restarts: u32,
) -> Result<HeuristicOutcome> {
    let config = HeuristicConfig { restarts, ..HeuristicConfig::default() };
    chromatic_index_heuristic_with(system, target, seed, &config)
}

pub fn chromatic_index_heuristic_with(
    system: &TripleSystem,
    target: usize,
    seed: u64,
    config: &HeuristicConfig,
) -> Result<HeuristicOutcome> {
    let m = m_lower(system.order())? as usize;
    if target < m {
        return Err(Error::Unsupported(format!("target {target} is below the lower bound {m}")));
    }
    point_masks(system)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut tabu = Tabu::new(system, target);
    let mut best_uncoloured = system.len();
    for _ in 0..config.restarts.max(1) {
        tabu.reset(&mut rng);
        let left = tabu.run(config.iterations_per_restart, &mut rng);
        if left == 0 {
            let colouring = tabu.colouring();
            let report = verify_colouring(system, &colouring);
            if !report.is_ok() {
                return Err(Error::Colouring(report));
            }
            return Ok(HeuristicOutcome::Success { colouring });
        }
        best_uncoloured = best_uncoloured.min(left);
    }
    Ok(HeuristicOutcome::Failure { best_uncoloured })
}
