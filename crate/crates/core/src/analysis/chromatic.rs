//! Exact chromatic index by branch and bound.
//!
//! Triples are coloured one at a time, always picking the uncoloured triple
//! that sees the most distinct classes among its neighbours (ties: lowest
//! index). A triple may join any existing class it fits in, or open the next
//! unused class; class labels are therefore canonical and the first triple
//! always lands in class 0.

use serde::{Deserialize, Serialize};

use super::heuristic::{chromatic_index_heuristic_with, greedy_assignment, HeuristicConfig};
use super::{point_masks, Meter, PcBoundCertificate, SearchBudget, SearchStatus};
use crate::designs::{m_lower, verify_colouring, verify_sts, Colouring, TripleSystem};
use crate::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChromaticResult {
    pub lower: usize,
    pub upper: usize,
    pub status: SearchStatus,
    /// A colouring with `upper` classes.
    pub colouring: Colouring,
    pub nodes: u64,
}

impl ChromaticResult {
    /// The chromatic index, when the interval has closed.
    pub fn value(&self) -> Option<usize> {
        (self.lower == self.upper).then_some(self.upper)
    }
}

/// Optional inputs that tighten the starting interval.
#[derive(Clone, Copy, Debug, Default)]
pub struct ExactHints<'a> {
    /// A parallel-class bound for this system; below `(v+3)/6` it lifts the
    /// lower bound to `(v+3)/2`.
    pub certificate: Option<&'a PcBoundCertificate>,
    pub upper_witness: Option<&'a Colouring>,
}

struct Colourer<'a> {
    masks: &'a [u128],
    meter: &'a Meter,
    lower: usize,
    class_masks: Vec<u128>,
    colour: Vec<Option<usize>>,
    best: usize,
    best_assignment: Option<Vec<usize>>,
}

impl Colourer<'_> {
    fn pick(&self, used: usize) -> usize {
        let mut best = (0usize, usize::MAX);
        for (t, c) in self.colour.iter().enumerate() {
            if c.is_some() {
                continue;
            }
            let sat = self.class_masks[..used].iter().filter(|&&m| m & self.masks[t] != 0).count();
            if best.1 == usize::MAX || sat > best.0 {
                best = (sat, t);
            }
        }
        best.1
    }

    /// Returns false when the search must stop (budget or optimum reached).
    fn search(&mut self, coloured: usize, used: usize) -> bool {
        if coloured == self.masks.len() {
            self.best = used;
            self.best_assignment = Some(self.colour.iter().map(|c| c.expect("all coloured")).collect());
            return used > self.lower;
        }
        let t = self.pick(used);
        let options = (0..used).chain((used + 1 < self.best).then_some(used));
        for c in options.collect::<Vec<_>>() {
            if self.class_masks[c] & self.masks[t] != 0 || used.max(c + 1) >= self.best {
                continue;
            }
            if !self.meter.tick() {
                return false;
            }
            self.class_masks[c] |= self.masks[t];
            self.colour[t] = Some(c);
            let go_on = self.search(coloured + 1, used.max(c + 1));
            self.colour[t] = None;
            self.class_masks[c] &= !self.masks[t];
            if !go_on {
                return false;
            }
        }
        true
    }
}

pub fn chromatic_index_exact(
    system: &TripleSystem,
    budget: &SearchBudget,
    hints: ExactHints<'_>,
) -> Result<ChromaticResult> {
    let report = verify_sts(system);
    if !report.is_ok() {
        return Err(Error::NotSteiner(report));
    }
    let v = system.order();
    let mut lower = m_lower(v)? as usize;
    if let Some(cert) = hints.certificate {
        if v % 6 == 3 && cert.bound < (v as usize + 3) / 6 {
            lower = lower.max((v as usize + 3) / 2);
        }
    }
    let masks = point_masks(system)?;
    let mut upper_colouring = match hints.upper_witness {
        Some(w) => {
            let r = verify_colouring(system, w);
            if !r.is_ok() {
                return Err(Error::Colouring(r));
            }
            w.clone()
        }
        None => Colouring::from_assignment(&greedy_assignment(&masks)),
    };
    if lower < upper_colouring.num_classes() {
        // a short local search often meets the lower bound outright
        let config = HeuristicConfig { restarts: 2, iterations_per_restart: 5_000 };
        if let Some(c) = chromatic_index_heuristic_with(system, lower, 0, &config)?.colouring() {
            upper_colouring = c.clone();
        }
    }
    let meter = Meter::new(*budget);
    let mut upper = upper_colouring.num_classes();
    if lower < upper {
        let mut c = Colourer {
            masks: &masks,
            meter: &meter,
            lower,
            class_masks: vec![0; upper],
            colour: vec![None; masks.len()],
            best: upper,
            best_assignment: None,
        };
        c.search(0, 0);
        if let Some(a) = c.best_assignment {
            upper_colouring = Colouring::from_assignment(&a);
            upper = c.best;
        }
        if meter.status() == SearchStatus::Complete {
            lower = upper;
        }
    }
    debug_assert!(verify_colouring(system, &upper_colouring).is_ok());
    Ok(ChromaticResult {
        lower,
        upper,
        status: if lower == upper { SearchStatus::Complete } else { SearchStatus::Inconclusive },
        colouring: upper_colouring,
        nodes: meter.nodes(),
    })
}
