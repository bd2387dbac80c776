//! Search results against brute-force oracles on the constructed systems.

mod common;

use sts_core::analysis::{
    chromatic_index_exact, enumerate_parallel_classes, max_disjoint_pcs, pc_bound_mod3, pc_bound_ws, ExactHints,
    SearchBudget, SearchStatus,
};
use sts_core::constructions::{bose_half_sum, wilson_schreiber};
use sts_core::designs::{m_lower, verify_colouring};
use sts_core::factorisation::factorise_g;
use sts_core::generator::random_sts;

use common::{colouring_is_valid, max_packing_brute, max_packing_clique};

#[test]
fn ws_packings_match_brute_force() {
    for (n, want) in [(7u64, 4usize), (13, 1), (19, 4), (25, 1)] {
        let fact = factorise_g(n).unwrap();
        let s = wilson_schreiber(n, &fact).unwrap().system;
        let classes = enumerate_parallel_classes(&s, &SearchBudget::default()).unwrap();
        assert_eq!(classes.status, SearchStatus::Complete);
        let lists: Vec<Vec<usize>> = classes.classes.iter().map(|c| c.triples().to_vec()).collect();
        let found = max_disjoint_pcs(&s, &SearchBudget::default()).unwrap();
        assert_eq!(found.size, want, "WS({n})");
        if lists.len() <= 24 {
            assert_eq!(max_packing_brute(&lists), want, "WS({n}) brute force");
        }
        assert_eq!(max_packing_clique(&lists), want, "WS({n}) clique search");
        assert!(found.size <= pc_bound_ws(n, &fact).unwrap().bound);
    }
}

#[test]
fn bose_certificates_dominate_search() {
    for n in [5usize, 11] {
        let b = bose_half_sum(n).unwrap();
        let cert = pc_bound_mod3(&b.system, &b.mod3_weighting().unwrap()).unwrap();
        // v = 33 only gets a short budget: any packing found is still a lower bound
        let budget = if n == 5 { SearchBudget::default() } else { SearchBudget::nodes(200_000) };
        let r = max_disjoint_pcs(&b.system, &budget).unwrap();
        assert!(r.size <= cert.bound, "v={}: {} > {}", 3 * n, r.size, cert.bound);
        if r.status == SearchStatus::Complete {
            assert_eq!(r.upper_bound, r.size);
        }
    }
}

#[test]
fn exact_index_is_at_least_m_and_matches_witness() {
    for seed in 0..6 {
        let s = random_sts(13, seed).unwrap();
        let r = chromatic_index_exact(&s, &SearchBudget::default(), ExactHints::default()).unwrap();
        assert!(r.lower >= m_lower(13).unwrap() as usize);
        assert!(verify_colouring(&s, &r.colouring).is_ok());
        assert!(colouring_is_valid(&s, &r.colouring));
        assert_eq!(r.colouring.num_classes(), r.upper);
        if r.status == SearchStatus::Complete {
            assert_eq!(r.value(), Some(r.upper));
        }
    }
}
