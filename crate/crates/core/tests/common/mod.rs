//! Independent oracles shared by the integration tests.
#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet};

use sts_core::designs::{Colouring, TripleSystem};

/// Every pair of distinct points lies in exactly one triple.
pub fn pairs_covered_once(system: &TripleSystem) -> bool {
    let v = system.order();
    let mut seen: BTreeMap<(u32, u32), usize> = BTreeMap::new();
    for t in system.triples() {
        let [a, b, c] = t.points();
        if a == b || b == c || a == c || c >= v {
            return false;
        }
        for pair in [(a, b), (a, c), (b, c)] {
            *seen.entry(pair).or_default() += 1;
        }
    }
    seen.len() as u32 == v * (v - 1) / 2 && seen.values().all(|&k| k == 1)
}

/// Quadratic check that `colouring` partitions the triples into classes of
/// pairwise disjoint triples.
pub fn colouring_is_valid(system: &TripleSystem, colouring: &Colouring) -> bool {
    let b = system.len();
    let mut count = vec![0usize; b];
    for class in colouring.classes() {
        if class.triples().is_empty() {
            return false;
        }
        for (i, &s) in class.triples().iter().enumerate() {
            if s >= b {
                return false;
            }
            count[s] += 1;
            for &t in &class.triples()[i + 1..] {
                let ps: BTreeSet<u32> = system.triple(s).points().into_iter().collect();
                if t >= b || system.triple(t).points().iter().any(|p| ps.contains(p)) {
                    return false;
                }
            }
        }
    }
    count.iter().all(|&k| k == 1)
}

/// Largest set of pairwise triple-disjoint parallel classes, by trying
/// subsets in decreasing size. Only for small class lists.
pub fn max_packing_brute(classes: &[Vec<usize>]) -> usize {
    let n = classes.len();
    assert!(n <= 24, "too many classes for brute force");
    let mut best = 0;
    for mask in 0u32..(1 << n) {
        let k = mask.count_ones() as usize;
        if k <= best {
            continue;
        }
        let mut used = BTreeSet::new();
        let ok = (0..n).filter(|i| mask >> i & 1 == 1).all(|i| classes[i].iter().all(|&t| used.insert(t)));
        if ok {
            best = k;
        }
    }
    best
}

/// Largest clique of the "no shared triple" graph on the classes, by plain
/// recursion. Slower than the subset scan on tiny inputs but has no size cap.
pub fn max_packing_clique(classes: &[Vec<usize>]) -> usize {
    let sets: Vec<BTreeSet<usize>> = classes.iter().map(|c| c.iter().copied().collect()).collect();
    let n = sets.len();
    let disjoint: Vec<Vec<bool>> =
        (0..n).map(|i| (0..n).map(|j| i != j && sets[i].is_disjoint(&sets[j])).collect()).collect();
    fn grow(cands: &[usize], size: usize, best: &mut usize, disjoint: &[Vec<bool>]) {
        if size > *best {
            *best = size;
        }
        for (k, &i) in cands.iter().enumerate() {
            if size + cands.len() - k <= *best {
                return;
            }
            let next: Vec<usize> = cands[k + 1..].iter().copied().filter(|&j| disjoint[i][j]).collect();
            grow(&next, size + 1, best, disjoint);
        }
    }
    let mut best = 0;
    grow(&(0..n).collect::<Vec<_>>(), 0, &mut best, &disjoint);
    best
}

pub mod props {
    //! Property checks driven by a seed, so the same bodies run under
    //! proptest and in the fixed-seed acceptance sweep.

    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;
    use sts_core::analysis::{
        chromatic_index_heuristic, max_disjoint_pcs, pc_bound_mod3, pc_bound_ws, SearchBudget, SearchStatus,
    };
    use sts_core::constructions::{bose, conjugate_square, half_sum_square, random_permutation, wilson_schreiber};
    use sts_core::designs::{verify_colouring, verify_sts, Colouring, PartialParallelClass};
    use sts_core::factorisation::{factorise_g, verify_factorisation_properties};
    use sts_core::generator::{random_batch, random_sts};
    use sts_core::numtheory::f_of;
    use sts_core::Exec;

    use super::{colouring_is_valid, pairs_covered_once};

    pub type Check = Result<(), String>;

    fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Check {
        if cond {
            Ok(())
        } else {
            Err(msg())
        }
    }

    const ORDERS: [u32; 8] = [7, 9, 13, 15, 19, 21, 25, 27];

    pub fn pair_coverage(seed: u64) -> Check {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let v = ORDERS[rng.random_range(0..ORDERS.len())];
        let s = random_sts(v, seed).map_err(|e| e.to_string())?;
        ensure(pairs_covered_once(&s) && verify_sts(&s).is_ok(), || format!("random STS({v}) seed {seed}"))?;
        let n = [5usize, 11, 17][rng.random_range(0..3)];
        let base = half_sum_square(n).unwrap();
        let squares: Vec<_> =
            (0..3).map(|_| conjugate_square(&base, &random_permutation(n, &mut rng)).unwrap()).collect();
        let b = bose([&squares[0], &squares[1], &squares[2]]).map_err(|e| e.to_string())?;
        ensure(pairs_covered_once(&b.system), || format!("Bose n={n} seed {seed}"))
    }

    pub fn conjugates_stay_idempotent_symmetric(seed: u64) -> Check {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let n = 2 * rng.random_range(1..30) + 1;
        let sq = conjugate_square(&half_sum_square(n).unwrap(), &random_permutation(n, &mut rng)).unwrap();
        ensure(sq.is_idempotent() && sq.is_symmetric(), || format!("conjugate of order {n}"))
    }

    /// `k` indexes `n = 6k + 7`.
    pub fn factorisation_properties(k: u64) -> Check {
        let n = 6 * (k % 166) + 7;
        let fact = factorise_g(n).map_err(|e| e.to_string())?;
        let report = verify_factorisation_properties(&fact, f_of(n).unwrap());
        ensure(report.is_ok(), || format!("G({n}): {report}"))
    }

    /// Any issued parallel-class bound is at least the searched maximum.
    pub fn certificate_dominates_search(seed: u64) -> Check {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let base = half_sum_square(5).unwrap();
        let squares: Vec<_> =
            (0..3).map(|_| conjugate_square(&base, &random_permutation(5, &mut rng)).unwrap()).collect();
        let b = bose([&squares[0], &squares[1], &squares[2]]).unwrap();
        let cert = pc_bound_mod3(&b.system, &b.mod3_weighting().unwrap()).map_err(|e| e.to_string())?;
        let found = max_disjoint_pcs(&b.system, &SearchBudget::default()).unwrap();
        ensure(found.status == SearchStatus::Complete && found.size <= cert.bound, || {
            format!("Bose(15) seed {seed}: found {} vs bound {}", found.size, cert.bound)
        })?;
        let n = [7u64, 13][rng.random_range(0..2)];
        let fact = factorise_g(n).unwrap();
        let ws = wilson_schreiber(n, &fact).unwrap();
        let cert = pc_bound_ws(n, &fact).unwrap();
        let found = max_disjoint_pcs(&ws.system, &SearchBudget::default()).unwrap();
        ensure(found.size <= cert.bound, || format!("WS({n}): found {} vs bound {}", found.size, cert.bound))
    }

    /// The library verifier accepts exactly the colourings the quadratic
    /// oracle accepts.
    pub fn colouring_verifier_matches_oracle(seed: u64) -> Check {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let v = [9u32, 13, 15][rng.random_range(0..3)];
        let s = random_sts(v, seed).unwrap();
        let b = s.len();
        let colouring = match rng.random_range(0..3) {
            // arbitrary assignment, usually invalid
            0 => {
                let k = rng.random_range(1..=b);
                Colouring::from_assignment(&(0..b).map(|_| rng.random_range(0..k)).collect::<Vec<_>>())
            }
            // a valid colouring, sometimes with one triple moved
            1 => {
                let out = chromatic_index_heuristic(&s, b, seed, 1).unwrap();
                let mut classes: Vec<Vec<usize>> =
                    out.colouring().unwrap().classes().iter().map(|c| c.triples().to_vec()).collect();
                if rng.random_bool(0.5) && classes.len() > 1 {
                    let from = rng.random_range(0..classes.len());
                    let to = rng.random_range(0..classes.len());
                    if let Some(t) = classes[from].pop() {
                        classes[to].push(t);
                    }
                }
                Colouring::new(classes.into_iter().map(PartialParallelClass::new).collect())
            }
            // raw classes with possible repeats and bad indices
            _ => {
                let k = rng.random_range(1..b);
                Colouring::new(
                    (0..k)
                        .map(|_| {
                            let len = rng.random_range(0..4);
                            PartialParallelClass::new((0..len).map(|_| rng.random_range(0..b + 2)).collect())
                        })
                        .collect(),
                )
            }
        };
        let lib = verify_colouring(&s, &colouring).is_ok();
        ensure(lib == colouring_is_valid(&s, &colouring), || format!("v={v} seed {seed}: library says {lib}"))
    }

    pub fn seed_determinism(seed: u64) -> Check {
        let v = ORDERS[(seed % ORDERS.len() as u64) as usize];
        ensure(random_sts(v, seed).unwrap() == random_sts(v, seed).unwrap(), || format!("STS({v}) seed {seed}"))?;
        let s = random_sts(15, seed).unwrap();
        let a = chromatic_index_heuristic(&s, 8, seed, 1).unwrap();
        let b = chromatic_index_heuristic(&s, 8, seed, 1).unwrap();
        ensure(a == b, || format!("heuristic seed {seed}"))?;
        let par: Vec<_> = random_batch(13, 3, seed, Exec::Parallel).into_iter().map(Result::unwrap).collect();
        let seq: Vec<_> = random_batch(13, 3, seed, Exec::Sequential).into_iter().map(Result::unwrap).collect();
        ensure(par == seq, || format!("batch seed {seed}"))
    }
}
