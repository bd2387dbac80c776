//! Certified upper bounds on the number of disjoint parallel classes.

use serde::{Deserialize, Serialize};

use super::packing::max_disjoint_pcs;
use super::{SearchBudget, SearchStatus};
use crate::designs::TripleSystem;
use crate::factorisation::{verify_factorisation_properties, OneFactorisation};
use crate::numtheory::f_of;
use crate::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum BoundMethod {
    Mod3Weighting,
    WsWeightArgument,
    Exhaustive,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum CertificateWitness {
    Mod3 {
        weighting: Vec<u8>,
        /// The common weight of the triples with nonzero weight, if any.
        nonzero_sum: Option<u8>,
        zero_sum_triples: usize,
        /// Fewest zero-sum triples any parallel class can contain.
        min_zero_sum_per_class: usize,
    },
    Ws {
        n: u64,
        f: u64,
        /// Classes through `{∞_0,∞_1,∞_2}`.
        type_i: usize,
        /// Nonzero-weight edges of `G_0`.
        type_ii: usize,
        /// Pairs of zero-weight edges in `G_1 ∪ G_2`.
        type_iii: usize,
    },
    Exhaustive {
        classes_enumerated: usize,
        nodes: u64,
        transcript_hash: String,
    },
}

/// A proven upper bound on the number of pairwise disjoint parallel classes.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PcBoundCertificate {
    pub bound: usize,
    pub method: BoundMethod,
    pub witness: CertificateWitness,
}

/// Bound from a point weighting `w: points → Z_3` with `Σ w ≡ 0` under which
/// every triple has weight 0 or one fixed `s ≠ 0`.
///
/// A parallel class with `a` zero-weight triples and `b` others needs
/// `b·s ≡ 0 (mod 3)`, so `a` is at least the least `a_min` with
/// `(v/3 − a_min) ≡ 0 (mod 3)`. Disjoint classes use distinct zero-weight
/// triples, giving at most `t_0 / a_min` of them.
pub fn pc_bound_mod3(system: &TripleSystem, weighting: &[u8]) -> Result<PcBoundCertificate> {
    let v = system.order() as usize;
    if v % 6 != 3 {
        return Err(Error::InvalidOrder { value: v as u64, reason: "parallel classes need v ≡ 3 (mod 6)" });
    }
    if weighting.len() != v || weighting.iter().any(|&w| w > 2) {
        return Err(Error::Weighting(format!("need {v} weights in 0..3")));
    }
    let total: usize = weighting.iter().map(|&w| usize::from(w)).sum();
    if !total.is_multiple_of(3) {
        return Err(Error::Weighting(format!("total weight {total} is not 0 mod 3")));
    }
    let mut zero_sum_triples = 0usize;
    let mut nonzero_sum = None;
    for t in system.triples() {
        let s = (t.points().iter().map(|&p| u32::from(weighting[p as usize])).sum::<u32>() % 3) as u8;
        if s == 0 {
            zero_sum_triples += 1;
        } else if *nonzero_sum.get_or_insert(s) != s {
            return Err(Error::Weighting(format!("triple {t} has weight {s}, others have {}", nonzero_sum.unwrap())));
        }
    }
    let per_class = v / 3;
    let min_zero = match nonzero_sum {
        None => 0,
        Some(s) => (0..=per_class).find(|&a| ((per_class - a) * usize::from(s)).is_multiple_of(3)).unwrap_or(per_class),
    };
    let trivial = (v - 1) / 2;
    let bound = zero_sum_triples.checked_div(min_zero).map_or(trivial, |b| b.min(trivial));
    Ok(PcBoundCertificate {
        bound,
        method: BoundMethod::Mod3Weighting,
        witness: CertificateWitness::Mod3 {
            weighting: weighting.to_vec(),
            nonzero_sum,
            zero_sum_triples,
            min_zero_sum_per_class: min_zero,
        },
    })
}

/// Tries the weightings `p mod 3` and `⌊p/(v/3)⌋` (the Bose layer layout)
/// and returns the valid one with the smaller bound.
pub fn auto_mod3_weighting(system: &TripleSystem) -> Option<Vec<u8>> {
    let v = system.order();
    if v % 6 != 3 {
        return None;
    }
    let candidates =
        [(0..v).map(|p| (p % 3) as u8).collect::<Vec<u8>>(), (0..v).map(|p| (p / (v / 3)) as u8).collect()];
    candidates
        .into_iter()
        .filter_map(|w| pc_bound_mod3(system, &w).ok().map(|c| (c.bound, w)))
        .min_by_key(|(b, _)| *b)
        .map(|(_, w)| w)
}

/// `3f(n) + 1` bound for a Wilson–Schreiber system built from `fact`.
/// Refuses unless `fact` has the weight properties with `f = f(n)`.
pub fn pc_bound_ws(n: u64, fact: &OneFactorisation) -> Result<PcBoundCertificate> {
    let f = f_of(n)?;
    if fact.graph().modulus() != n {
        return Err(Error::Factorisation(format!("factorisation is of G({}), not G({n})", fact.graph().modulus())));
    }
    let report = verify_factorisation_properties(fact, f);
    if !report.is_ok() {
        return Err(Error::CertificateRefused(report));
    }
    let g = fact.graph();
    let [g0, g1, g2] = fact.factors();
    let type_ii = g0.iter().filter(|&&e| g.weight(e) != 0).count();
    let type_iii = g1.iter().chain(g2).filter(|&&e| g.weight(e) == 0).count() / 2;
    Ok(PcBoundCertificate {
        bound: 1 + type_ii + type_iii,
        method: BoundMethod::WsWeightArgument,
        witness: CertificateWitness::Ws { n, f, type_i: 1, type_ii, type_iii },
    })
}

fn fnv1a(bytes: impl IntoIterator<Item = u8>) -> u64 {
    bytes.into_iter().fold(0xcbf2_9ce4_8422_2325, |h, b| (h ^ u64::from(b)).wrapping_mul(0x0100_0000_01b3))
}

/// Bound equal to the exact maximum, or `None` if the search did not finish.
pub fn pc_bound_exhaustive(system: &TripleSystem, budget: &SearchBudget) -> Result<Option<PcBoundCertificate>> {
    let r = max_disjoint_pcs(system, budget)?;
    if r.status != SearchStatus::Complete {
        return Ok(None);
    }
    let transcript = r
        .witness
        .iter()
        .flat_map(|c| c.triples().iter().flat_map(|&t| (t as u64).to_le_bytes()).chain([0xff]))
        .collect::<Vec<u8>>();
    Ok(Some(PcBoundCertificate {
        bound: r.size,
        method: BoundMethod::Exhaustive,
        witness: CertificateWitness::Exhaustive {
            classes_enumerated: r.classes_enumerated,
            nodes: r.nodes,
            transcript_hash: format!("{:016x}", fnv1a(transcript)),
        },
    }))
}
