//! Random Steiner triple systems by hill climbing, and a survey of how hard
//! they are to colour.
//!
//! All randomness comes from `ChaCha8Rng` (the `rand_chacha` crate) seeded
//! with a `u64`. Batch jobs derive one seed per item with SplitMix64, so item
//! `i` of a batch is the same whatever the thread count.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::analysis::{chromatic_index_heuristic_with, HeuristicConfig};
use crate::designs::{is_admissible, m_lower, verify_sts, Triple, TripleSystem};
use crate::{Error, Exec, Result};

pub const DEFAULT_STEP_LIMIT: u64 = 10_000_000;

const NONE: u32 = u32::MAX;

/// Seed for item `index` of a batch started with `seed`.
pub fn derive_seed(seed: u64, index: u64) -> u64 {
    let mut z = seed ^ index.wrapping_add(1).wrapping_mul(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d1_049b_b133_111b);
    z ^ (z >> 31)
}

/// Triples built so far, with the third point of every covered pair.
struct PartialSystem {
    v: usize,
    third: Vec<u32>,
    live: Vec<u32>,
    triples: usize,
}

impl PartialSystem {
    fn new(v: usize) -> Self {
        PartialSystem { v, third: vec![NONE; v * v], live: vec![v as u32 - 1; v], triples: 0 }
    }

    fn is_live(&self, a: usize, b: usize) -> bool {
        a != b && self.third[a * self.v + b] == NONE
    }

    fn set(&mut self, a: usize, b: usize, c: u32) {
        self.third[a * self.v + b] = c;
        self.third[b * self.v + a] = c;
    }

    fn add(&mut self, [x, y, z]: [usize; 3]) {
        self.set(x, y, z as u32);
        self.set(x, z, y as u32);
        self.set(y, z, x as u32);
        for p in [x, y, z] {
            self.live[p] -= 2;
        }
        self.triples += 1;
    }

    fn remove(&mut self, [x, y, z]: [usize; 3]) {
        self.set(x, y, NONE);
        self.set(x, z, NONE);
        self.set(y, z, NONE);
        for p in [x, y, z] {
            self.live[p] += 2;
        }
        self.triples -= 1;
    }

    fn random_live_partner<R: Rng>(&self, x: usize, skip: usize, rng: &mut R) -> usize {
        let count = (0..self.v).filter(|&y| y != skip && self.is_live(x, y)).count();
        let k = rng.random_range(0..count);
        (0..self.v).filter(|&y| y != skip && self.is_live(x, y)).nth(k).expect("live partner")
    }

    /// One hill-climbing move. Pairs covered never decrease.
    fn step<R: Rng>(&mut self, rng: &mut R) {
        let live_points = self.live.iter().filter(|&&l| l > 0).count();
        let k = rng.random_range(0..live_points);
        let x = (0..self.v).filter(|&p| self.live[p] > 0).nth(k).expect("live point");
        let y = self.random_live_partner(x, x, rng);
        let z = self.random_live_partner(x, y, rng);
        let w = self.third[y * self.v + z];
        if w != NONE {
            self.remove([y, z, w as usize]);
        }
        self.add([x, y, z]);
    }

    fn into_system(self) -> Result<TripleSystem> {
        let v = self.v;
        let mut triples = Vec::with_capacity(self.triples);
        for a in 0..v {
            for b in a + 1..v {
                let c = self.third[a * v + b] as usize;
                if c > b {
                    triples.push(Triple::new(a as u32, b as u32, c as u32));
                }
            }
        }
        TripleSystem::new(v as u32, triples)
    }
}

/// A random STS(v) from the hill climb, `v ≡ 1, 3 (mod 6)`, `v ≥ 7`.
pub fn random_sts(v: u32, seed: u64) -> Result<TripleSystem> {
    random_sts_with_limit(v, seed, DEFAULT_STEP_LIMIT)
}

pub fn random_sts_with_limit(v: u32, seed: u64, step_limit: u64) -> Result<TripleSystem> {
    if v < 7 || !is_admissible(v) {
        return Err(Error::InvalidOrder { value: v.into(), reason: "need v ≥ 7 and v ≡ 1, 3 (mod 6)" });
    }
    let target = (v as usize) * (v as usize - 1) / 6;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut partial = PartialSystem::new(v as usize);
    let mut steps = 0;
    while partial.triples < target {
        if steps == step_limit {
            return Err(Error::StepLimit { v, steps });
        }
        partial.step(&mut rng);
        steps += 1;
    }
    let system = partial.into_system()?;
    let report = verify_sts(&system);
    if !report.is_ok() {
        return Err(Error::NotSteiner(report));
    }
    Ok(system)
}

/// `count` systems generated from seeds derived from `seed`.
pub fn random_batch(v: u32, count: usize, seed: u64, exec: Exec) -> Vec<Result<TripleSystem>> {
    exec.map((0..count as u64).collect(), |i| random_sts(v, derive_seed(seed, i)))
}

/// How many systems were first coloured at `m`, `m+1`, `m+2` classes.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SurveyReport {
    pub v: u32,
    pub count: usize,
    pub seed: u64,
    pub m: u32,
    pub at_m: usize,
    pub at_m_plus_1: usize,
    pub at_m_plus_2: usize,
    /// Not coloured with `m+2` classes within the restart budget.
    pub failed: usize,
    pub generator_failures: usize,
    pub heuristic: HeuristicConfig,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Outcome {
    Coloured(u32),
    Failed,
    GeneratorFailed,
}

pub fn colouring_survey(v: u32, count: usize, seed: u64, exec: Exec) -> Result<SurveyReport> {
    let config = HeuristicConfig { restarts: 3, iterations_per_restart: 5_000 };
    colouring_survey_with(v, count, seed, &config, exec)
}

pub fn colouring_survey_with(
    v: u32,
    count: usize,
    seed: u64,
    config: &HeuristicConfig,
    exec: Exec,
) -> Result<SurveyReport> {
    if v < 7 || !is_admissible(v) {
        return Err(Error::InvalidOrder { value: v.into(), reason: "need v ≥ 7 and v ≡ 1, 3 (mod 6)" });
    }
    let m = m_lower(v)?;
    let outcomes = exec.map((0..count as u64).collect(), |i| {
        let item_seed = derive_seed(seed, i);
        let Ok(system) = random_sts(v, item_seed) else {
            return Ok(Outcome::GeneratorFailed);
        };
        for extra in 0..3 {
            let out = chromatic_index_heuristic_with(&system, (m + extra) as usize, item_seed, config)?;
            if out.colouring().is_some() {
                return Ok(Outcome::Coloured(extra));
            }
        }
        Ok(Outcome::Failed)
    });
    let mut report = SurveyReport {
        v,
        count,
        seed,
        m,
        at_m: 0,
        at_m_plus_1: 0,
        at_m_plus_2: 0,
        failed: 0,
        generator_failures: 0,
        heuristic: *config,
    };
    for o in outcomes {
        match o? {
            Outcome::Coloured(0) => report.at_m += 1,
            Outcome::Coloured(1) => report.at_m_plus_1 += 1,
            Outcome::Coloured(_) => report.at_m_plus_2 += 1,
            Outcome::Failed => report.failed += 1,
            Outcome::GeneratorFailed => report.generator_failures += 1,
        }
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analysis::{enumerate_parallel_classes, SearchBudget};

    #[test]
    fn order_7_is_fano() {
        let s = random_sts(7, 1).unwrap();
        assert_eq!(s.len(), 7);
        // in the Fano plane every two lines meet
        for (i, a) in s.triples().iter().enumerate() {
            for b in &s.triples()[i + 1..] {
                assert!(a.meets(b).is_some());
            }
        }
    }

    #[test]
    fn order_9_is_affine_plane() {
        let s = random_sts(9, 1).unwrap();
        assert_eq!(s.len(), 12);
        let pcs = enumerate_parallel_classes(&s, &SearchBudget::default()).unwrap();
        assert_eq!(pcs.classes.len(), 4);
    }

    #[test]
    fn order_21_and_determinism() {
        for seed in 0..5 {
            let s = random_sts(21, seed).unwrap();
            assert_eq!(s.len(), 70);
            assert_eq!(s, random_sts(21, seed).unwrap());
        }
        assert_ne!(random_sts(21, 0).unwrap(), random_sts(21, 1).unwrap());
    }

    #[test]
    fn bad_orders_and_step_limit() {
        assert!(random_sts(11, 0).is_err());
        assert!(random_sts(3, 0).is_err());
        assert!(matches!(random_sts_with_limit(31, 0, 10), Err(Error::StepLimit { steps: 10, .. })));
    }

    #[test]
    fn batch_modes_agree() {
        let a = random_batch(15, 6, 3, Exec::Parallel);
        let b = random_batch(15, 6, 3, Exec::Sequential);
        assert_eq!(
            a.into_iter().map(Result::unwrap).collect::<Vec<_>>(),
            b.into_iter().map(Result::unwrap).collect::<Vec<_>>()
        );
    }

    #[test]
    fn survey_of_nine() {
        let r = colouring_survey(9, 5, 0, Exec::default()).unwrap();
        assert_eq!((r.at_m, r.failed, r.generator_failures), (5, 0, 0));
    }

    #[test]
    fn survey_of_thirteen() {
        let r = colouring_survey(13, 20, 0, Exec::default()).unwrap();
        assert_eq!(r.at_m + r.at_m_plus_1, 20);
    }
}
