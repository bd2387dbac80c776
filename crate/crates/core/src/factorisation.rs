//! The graph `G(n)` and its weight-aware 1-factorisation.
//!
//! For `n ≡ 1 (mod 6)`, `G(n)` has vertex set `Z_n \ {0}` and edges
//! `{x, −x}` and `{x, −2x}`. The weight of an edge `{x, y}` is `x + y mod n`.
//! `G(n)` splits by additive order into copies of `Cay(Z*_d, {−1,−2})`,
//! one for each divisor `d > 1` of `n`, via `θ_d(x) = (n/d)·x`.
//!
//! Each Cayley component is factorised on the subgroup `X = ⟨−1,−2⟩_d`
//! using the sequence `x_i = (−2)^i`, and the result is translated to every
//! coset of `X`. The factors then satisfy:
//!
//! * edges of weight `w` and `−w` (`w ≠ 0`) lie in the same factor;
//! * `G_0` has exactly `2f(n)` edges of nonzero weight and `G_1 ∪ G_2`
//!   exactly `2f(n)` edges of weight zero.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::designs::{VerificationReport, Violation};
use crate::numtheory::{divisors, euler_phi, gcd, pow_mod, subgroup_elements};
use crate::{Error, Exec, Result};

pub type Edge = (u64, u64);

fn edge(a: u64, b: u64) -> Edge {
    if a < b {
        (a, b)
    } else {
        (b, a)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WeightedGraph {
    modulus: u64,
    vertices: Vec<u64>,
    edges: Vec<Edge>,
}

impl WeightedGraph {
    fn from_parts(modulus: u64, mut vertices: Vec<u64>, edges: BTreeSet<Edge>) -> Self {
        vertices.sort_unstable();
        WeightedGraph { modulus, vertices, edges: edges.into_iter().collect() }
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn vertices(&self) -> &[u64] {
        &self.vertices
    }

    /// Edges sorted ascending, each as `(min, max)`.
    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn weight(&self, e: Edge) -> u64 {
        (e.0 + e.1) % self.modulus
    }

    pub fn has_edge(&self, a: u64, b: u64) -> bool {
        self.edges.binary_search(&edge(a, b)).is_ok()
    }

    pub fn degrees(&self) -> BTreeMap<u64, usize> {
        let mut deg: BTreeMap<u64, usize> = self.vertices.iter().map(|&v| (v, 0)).collect();
        for &(a, b) in &self.edges {
            *deg.entry(a).or_default() += 1;
            *deg.entry(b).or_default() += 1;
        }
        deg
    }
}

fn edges_neg_neg2(modulus: u64, vertices: &[u64]) -> BTreeSet<Edge> {
    let mut edges = BTreeSet::new();
    for &x in vertices {
        let neg = modulus - x;
        let neg2 = (modulus - (2 * x) % modulus) % modulus;
        edges.insert(edge(x, neg));
        edges.insert(edge(x, neg2));
    }
    edges
}

pub fn build_g(n: u64) -> Result<WeightedGraph> {
    if n < 7 || n % 6 != 1 {
        return Err(Error::InvalidOrder { value: n, reason: "G(n) needs n ≡ 1 (mod 6), n ≥ 7" });
    }
    let vertices: Vec<u64> = (1..n).collect();
    let edges = edges_neg_neg2(n, &vertices);
    let g = WeightedGraph::from_parts(n, vertices, edges);
    assert_eq!(g.edges.len() as u64, 3 * (n - 1) / 2);
    assert!(g.degrees().values().all(|&d| d == 3), "G({n}) is not cubic");
    Ok(g)
}

/// `Cay(Z*_d, {−1,−2})` with vertices the units mod `d`.
pub fn cayley_graph(d: u64) -> Result<WeightedGraph> {
    if d < 5 || d.is_multiple_of(2) {
        return Err(Error::InvalidOrder { value: d, reason: "odd d ≥ 5 required for a cubic Cayley graph" });
    }
    let units: Vec<u64> = (1..d).filter(|&x| gcd(x, d) == 1).collect();
    let edges = edges_neg_neg2(d, &units);
    Ok(WeightedGraph::from_parts(d, units, edges))
}

/// Three edge sets partitioning a host graph.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OneFactorisation {
    graph: WeightedGraph,
    factors: [Vec<Edge>; 3],
}

impl OneFactorisation {
    /// Wraps the factors without checking them; see [`check_structure`].
    pub fn new(graph: WeightedGraph, mut factors: [Vec<Edge>; 3]) -> Self {
        for f in &mut factors {
            for e in f.iter_mut() {
                *e = edge(e.0, e.1);
            }
            f.sort_unstable();
        }
        OneFactorisation { graph, factors }
    }

    pub fn graph(&self) -> &WeightedGraph {
        &self.graph
    }

    pub fn factors(&self) -> &[Vec<Edge>; 3] {
        &self.factors
    }

    pub fn factor_of(&self, e: Edge) -> Option<usize> {
        let e = edge(e.0, e.1);
        self.factors.iter().position(|f| f.binary_search(&e).is_ok())
    }

    /// Moves `e` from whichever factor holds it into `to`.
    pub fn move_edge(&mut self, e: Edge, to: usize) {
        let e = edge(e.0, e.1);
        for f in &mut self.factors {
            f.retain(|x| *x != e);
        }
        self.factors[to].push(e);
        self.factors[to].sort_unstable();
    }

    /// `FACTOR i` headers followed by `x y w` lines.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for (i, f) in self.factors.iter().enumerate() {
            out.push_str(&format!("FACTOR {i}\n"));
            for &e in f {
                out.push_str(&format!("{} {} {}\n", e.0, e.1, self.graph.weight(e)));
            }
        }
        out
    }
}

/// Checks that the factors are perfect matchings partitioning the host edges.
pub fn check_structure(fact: &OneFactorisation) -> VerificationReport {
    let mut report = VerificationReport::default();
    let g = &fact.graph;
    let mut covered: BTreeMap<Edge, usize> = BTreeMap::new();
    for (i, f) in fact.factors.iter().enumerate() {
        let mut hits: BTreeMap<u64, usize> = g.vertices.iter().map(|&v| (v, 0)).collect();
        for &e in f {
            if !g.has_edge(e.0, e.1) {
                report.push(Violation::ForeignEdge { factor: i, edge: e });
                continue;
            }
            *covered.entry(e).or_default() += 1;
            *hits.entry(e.0).or_default() += 1;
            *hits.entry(e.1).or_default() += 1;
        }
        for (&vertex, &h) in &hits {
            if h != 1 {
                report.push(Violation::NotPerfectMatching { factor: i, vertex });
            }
        }
    }
    for &e in &g.edges {
        if covered.get(&e).copied().unwrap_or(0) == 0 {
            report.push(Violation::EdgeNotCovered { edge: e });
        }
    }
    report
}

/// Structural check plus the weight properties, with `expected` standing for
/// `f(n)` (or `g(d)` on a single Cayley component). Weights are recounted
/// from scratch.
pub fn verify_factorisation_properties(fact: &OneFactorisation, expected: u64) -> VerificationReport {
    let mut report = check_structure(fact);
    let g = &fact.graph;
    let n = g.modulus;
    // canonical weight class min(w, n − w) → first edge seen and its factor
    let mut class_owner: BTreeMap<u64, (Edge, usize)> = BTreeMap::new();
    let mut nonzero_in_0 = 0usize;
    let mut zero_in_12 = 0usize;
    for (i, f) in fact.factors.iter().enumerate() {
        for &e in f {
            let w = g.weight(e);
            if w == 0 {
                if i != 0 {
                    zero_in_12 += 1;
                }
                continue;
            }
            if i == 0 {
                nonzero_in_0 += 1;
            }
            let key = w.min(n - w);
            match class_owner.get(&key) {
                Some(&(first, fi)) if fi != i => report.push(Violation::PairedWeightSplit {
                    weight: key,
                    first,
                    first_factor: fi,
                    second: e,
                    second_factor: i,
                }),
                Some(_) => {}
                None => {
                    class_owner.insert(key, (e, i));
                }
            }
        }
    }
    let want = 2 * expected as usize;
    if nonzero_in_0 != want {
        report.push(Violation::WeightCount {
            property: "nonzero-weight edges in factor 0".into(),
            expected: want,
            found: nonzero_in_0,
        });
    }
    if zero_in_12 != want {
        report.push(Violation::WeightCount {
            property: "zero-weight edges in factors 1 and 2".into(),
            expected: want,
            found: zero_in_12,
        });
    }
    report
}

/// 1-factorisation of `Cay(Z*_d, {−1,−2})` for odd `d ≥ 5`.
pub fn factorise_component(d: u64) -> Result<OneFactorisation> {
    let graph = cayley_graph(d)?;
    let x_set = subgroup_elements(d, &[-1, -2])?;
    let order = x_set.len() as u64;
    let s = order / 2;
    let minus_two = d - 2;
    let x = |i: u64| pow_mod(minus_two, i, d);
    let neg = |y: u64| d - y;
    let minus_one_in_cyclic = x(s) == neg(x(0));
    if !minus_one_in_cyclic && x(s) != x(0) {
        return Err(Error::Factorisation(format!("(−2)^{s} is neither ±1 mod {d}")));
    }
    // both cycle pieces, as index pairs into (x_i) and their negatives
    let pair = |i: u64, j: u64| [edge(x(i), x(j)), edge(neg(x(i)), neg(x(j)))];
    let mut h: [Vec<Edge>; 3] = Default::default();
    if order.is_multiple_of(4) {
        for i in 0..s {
            h[0].push(edge(x(i), neg(x(i))));
        }
        for i in 0..s / 2 {
            h[1].extend(pair(2 * i, 2 * i + 1));
            h[2].extend(pair(2 * i + 1, 2 * i + 2));
        }
    } else {
        if s < 3 {
            return Err(Error::Factorisation(format!("|X| = {order} leaves no room for the odd case")));
        }
        for i in 1..=s - 2 {
            h[0].push(edge(x(i), neg(x(i))));
        }
        h[0].extend(pair(s - 1, s));
        for i in 0..=(s - 3) / 2 {
            h[1].extend(pair(2 * i, 2 * i + 1));
            h[2].extend(pair(2 * i + 1, 2 * i + 2));
        }
        h[1].push(edge(x(s - 1), neg(x(s - 1))));
        h[2].push(edge(x(0), neg(x(0))));
    }
    check_component(d, &x_set, &h)?;

    let mut in_some_coset = vec![false; d as usize];
    let mut factors: [Vec<Edge>; 3] = Default::default();
    for a in 1..d {
        if gcd(a, d) != 1 || in_some_coset[a as usize] {
            continue;
        }
        for &y in &x_set {
            in_some_coset[(a * y % d) as usize] = true;
        }
        for (m, hi) in factors.iter_mut().zip(&h) {
            m.extend(hi.iter().map(|&(p, q)| edge(a * p % d, a * q % d)));
        }
    }
    let fact = OneFactorisation::new(graph, factors);
    let report = check_structure(&fact);
    if !report.is_ok() {
        return Err(Error::Factorisation(format!("component d={d}: {report}")));
    }
    Ok(fact)
}

fn check_component(d: u64, x_set: &[u64], h: &[Vec<Edge>; 3]) -> Result<()> {
    let expected = edges_neg_neg2(d, x_set);
    let mut seen = BTreeSet::new();
    for (i, hi) in h.iter().enumerate() {
        let mut touched = BTreeSet::new();
        for &(p, q) in hi {
            if !touched.insert(p) || !touched.insert(q) {
                return Err(Error::Factorisation(format!("H_{i} for d={d} is not a matching")));
            }
            if !seen.insert((p, q)) {
                return Err(Error::Factorisation(format!("edge ({p},{q}) repeated for d={d}")));
            }
        }
        if touched.len() != x_set.len() {
            return Err(Error::Factorisation(format!("H_{i} for d={d} is not perfect")));
        }
    }
    if seen != expected {
        return Err(Error::Factorisation(format!("H for d={d} differs from the component on X")));
    }
    Ok(())
}

/// 1-factorisation of `G(n)`, assembled from the Cayley components.
pub fn factorise_g(n: u64) -> Result<OneFactorisation> {
    factorise_g_with(n, Exec::default())
}

pub fn factorise_g_with(n: u64, exec: Exec) -> Result<OneFactorisation> {
    let graph = build_g(n)?;
    let ds: Vec<u64> = divisors(n).into_iter().skip(1).collect();
    let parts = exec.map(ds, |d| factorise_component(d).map(|m| (d, m)));
    let mut factors: [Vec<Edge>; 3] = Default::default();
    for part in parts {
        let (d, m) = part?;
        let scale = n / d;
        for (g, mi) in factors.iter_mut().zip(m.factors()) {
            g.extend(mi.iter().map(|&(p, q)| edge(scale * p, scale * q)));
        }
    }
    let fact = OneFactorisation::new(graph, factors);
    debug_assert!(check_structure(&fact).is_ok());
    Ok(fact)
}

/// The value `expected` takes in [`verify_factorisation_properties`] for a
/// single component: `0` when `|⟨−1,−2⟩_d| ≡ 0 (mod 4)`, else `φ(d)/|⟨−1,−2⟩_d|`.
pub fn component_weight_count(d: u64) -> Result<u64> {
    let order = subgroup_elements(d, &[-1, -2])?.len() as u64;
    Ok(if order.is_multiple_of(4) { 0 } else { euler_phi(d) / order })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numtheory::f_of;

    fn nonzero_in_0(f: &OneFactorisation) -> usize {
        f.factors()[0].iter().filter(|&&e| f.graph().weight(e) != 0).count()
    }

    #[test]
    fn g7_shape() {
        let g = build_g(7).unwrap();
        assert_eq!(g.vertices().len(), 6);
        assert_eq!(g.edges().len(), 9);
        let nbrs: BTreeSet<u64> = g
            .edges()
            .iter()
            .filter_map(|&(a, b)| {
                if a == 1 {
                    Some(b)
                } else if b == 1 {
                    Some(a)
                } else {
                    None
                }
            })
            .collect();
        assert_eq!(nbrs, BTreeSet::from([3, 5, 6]));
        assert_eq!(g.weight((1, 6)), 0);
        assert_eq!(build_g(13).unwrap().edges().len(), 18);
        assert!(build_g(11).is_err());
    }

    #[test]
    fn component_d7() {
        let m = factorise_component(7).unwrap();
        assert_eq!(nonzero_in_0(&m), 2);
        let zero_12 = m.factors()[1..].iter().flatten().filter(|&&e| m.graph().weight(e) == 0).count();
        assert_eq!(zero_12, 2);
        assert!(verify_factorisation_properties(&m, 1).is_ok());
    }

    #[test]
    fn component_d13() {
        let m = factorise_component(13).unwrap();
        let expected: Vec<Edge> = (1..=6).map(|x| edge(x, 13 - x)).collect();
        assert_eq!(m.factors()[0], expected);
        assert!(verify_factorisation_properties(&m, 0).is_ok());
    }

    #[test]
    fn component_d5() {
        let m = factorise_component(5).unwrap();
        assert_eq!(m.factors()[0], vec![(1, 4), (2, 3)]);
    }

    #[test]
    fn d3_rejected() {
        assert!(factorise_component(3).is_err());
    }

    #[test]
    fn every_odd_component_satisfies_lemma() {
        for d in (5..400u64).step_by(2) {
            let m = factorise_component(d).unwrap_or_else(|e| panic!("d={d}: {e}"));
            let r = verify_factorisation_properties(&m, component_weight_count(d).unwrap());
            assert!(r.is_ok(), "d={d}: {r}");
        }
    }

    #[test]
    fn g_examples() {
        let f7 = factorise_g(7).unwrap();
        assert_eq!(nonzero_in_0(&f7), 2);
        assert!(verify_factorisation_properties(&f7, 1).is_ok());
        assert_eq!(nonzero_in_0(&factorise_g(13).unwrap()), 0);
        let f91 = factorise_g(91).unwrap();
        let expected = component_weight_count(7).unwrap()
            + component_weight_count(13).unwrap()
            + component_weight_count(91).unwrap();
        assert_eq!(expected, f_of(91).unwrap());
        assert_eq!(nonzero_in_0(&f91) as u64, 2 * expected);
        let f25 = factorise_g(25).unwrap();
        assert_eq!(f_of(25).unwrap(), 0);
        assert!(verify_factorisation_properties(&f25, 0).is_ok());
    }

    #[test]
    fn swapped_edges_give_paired_weight_witness() {
        let mut f = factorise_g(7).unwrap();
        let zero = *f.factors()[0].iter().find(|&&e| f.graph().weight(e) == 0).unwrap();
        let other = *f.factors()[1].iter().find(|&&e| f.graph().weight(e) != 0).unwrap();
        f.move_edge(zero, 1);
        f.move_edge(other, 0);
        let r = verify_factorisation_properties(&f, 1);
        assert!(!r.is_ok());
        assert!(r.violations.iter().any(|v| matches!(v, Violation::PairedWeightSplit { .. })), "{r:?}");
    }

    #[test]
    fn split_weight_pair_detected() {
        // move both endpoints' weight class apart: take a nonzero-weight edge
        // and put it into another factor.
        let mut f = factorise_g(13).unwrap();
        let e = *f.factors()[1].iter().find(|&&e| f.graph().weight(e) != 0).unwrap();
        f.move_edge(e, 2);
        let r = verify_factorisation_properties(&f, 0);
        assert!(r.violations.iter().any(|v| matches!(v, Violation::PairedWeightSplit { .. })));
    }

    #[test]
    fn components_match_theta_images() {
        for n in (7..=200u64).step_by(6) {
            let g = build_g(n).unwrap();
            for d in divisors(n).into_iter().skip(1) {
                let scale = n / d;
                let cay = cayley_graph(d).unwrap();
                let image: BTreeSet<Edge> = cay.edges().iter().map(|&(a, b)| edge(scale * a, scale * b)).collect();
                let restricted: BTreeSet<Edge> =
                    g.edges().iter().copied().filter(|&(a, _)| n / gcd(a, n) == d).collect();
                assert_eq!(image, restricted, "n={n} d={d}");
            }
        }
    }

    #[test]
    fn text_format() {
        let t = factorise_g(7).unwrap().to_text();
        assert!(t.starts_with("FACTOR 0\n"));
        assert_eq!(t.lines().filter(|l| l.starts_with("FACTOR")).count(), 3);
        assert_eq!(t.lines().count(), 3 + 9);
    }
}
