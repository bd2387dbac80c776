//! Explicit Steiner triple systems.
//!
//! * [`wilson_schreiber`]: STS(n+2) on `Z_n \ {0} ∪ {∞_0,∞_1,∞_2}` from a
//!   1-factorisation of `G(n)`, `n ≡ 1 (mod 6)`.
//! * [`bose`]: STS(3n) on `X × Z_3` from three idempotent symmetric Latin
//!   squares of order `n ≡ 5 (mod 6)`.
//! * [`sts33_fixture`]: a cyclic STS(33) with a colouring in 18 classes.
//!
//! Every constructor re-verifies the Steiner property before returning.

use rand::seq::SliceRandom;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::designs::{verify_sts, Colouring, PartialParallelClass, Point, Triple, TripleSystem};
use crate::factorisation::{check_structure, OneFactorisation};
use crate::{Error, Result};

/// An `n × n` Latin square on the symbols `0..n`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LatinSquare {
    n: usize,
    cells: Vec<u32>,
}

impl LatinSquare {
    pub fn new(n: usize, cells: Vec<u32>) -> Result<Self> {
        if cells.len() != n * n {
            return Err(Error::LatinSquare(format!("expected {} cells, got {}", n * n, cells.len())));
        }
        let sq = LatinSquare { n, cells };
        for i in 0..n {
            let mut row = vec![false; n];
            let mut col = vec![false; n];
            for j in 0..n {
                for (seen, s) in [(&mut row, sq.get(i, j)), (&mut col, sq.get(j, i))] {
                    if s as usize >= n || std::mem::replace(&mut seen[s as usize], true) {
                        return Err(Error::LatinSquare(format!("symbol {s} repeated or out of range at line {i}")));
                    }
                }
            }
        }
        Ok(sq)
    }

    pub fn order(&self) -> usize {
        self.n
    }

    pub fn get(&self, x: usize, y: usize) -> u32 {
        self.cells[x * self.n + y]
    }

    pub fn is_idempotent(&self) -> bool {
        (0..self.n).all(|x| self.get(x, x) as usize == x)
    }

    pub fn is_symmetric(&self) -> bool {
        (0..self.n).all(|x| (0..x).all(|y| self.get(x, y) == self.get(y, x)))
    }
}

/// `L(i, j) = (i + j)/2 mod n` for odd `n`.
pub fn half_sum_square(n: usize) -> Result<LatinSquare> {
    if n.is_multiple_of(2) {
        return Err(Error::InvalidOrder { value: n as u64, reason: "half-sum square needs odd order" });
    }
    let half = n.div_ceil(2); // inverse of 2 mod n
    let cells = (0..n * n).map(|k| (((k / n + k % n) * half) % n) as u32).collect();
    LatinSquare::new(n, cells)
}

/// `L'(x, y) = π(L(π⁻¹x, π⁻¹y))`.
pub fn conjugate_square(square: &LatinSquare, perm: &[u32]) -> Result<LatinSquare> {
    let n = square.order();
    let mut inv = vec![u32::MAX; n];
    if perm.len() != n {
        return Err(Error::LatinSquare("permutation length differs from order".into()));
    }
    for (i, &p) in perm.iter().enumerate() {
        if p as usize >= n || inv[p as usize] != u32::MAX {
            return Err(Error::LatinSquare("not a permutation".into()));
        }
        inv[p as usize] = i as u32;
    }
    let cells = (0..n * n).map(|k| perm[square.get(inv[k / n] as usize, inv[k % n] as usize) as usize]).collect();
    LatinSquare::new(n, cells)
}

pub fn random_permutation<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Vec<u32> {
    let mut p: Vec<u32> = (0..n as u32).collect();
    p.shuffle(rng);
    p
}

/// Natural name of an internal point.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum PointLabel {
    /// A residue in `Z_n`.
    Residue {
        value: u64,
    },
    Infinity {
        index: u8,
    },
    /// `(x, layer)` in `X × Z_3`.
    Layered {
        x: u32,
        layer: u8,
    },
}

/// Which construction produced a system, with its distinguished triple
/// families as indices into the sorted triple list.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "construction", rename_all = "snake_case")]
pub enum Structure {
    WilsonSchreiber { n: u64, zero_sum: Vec<usize>, infinite: Vec<usize> },
    Bose { n: usize, transversal: Vec<usize>, layers: [Vec<usize>; 3], cyclic_squares: bool },
    Cyclic33 { base_blocks: Vec<usize>, developed: Vec<usize> },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LabelledSts {
    pub system: TripleSystem,
    pub labels: Vec<PointLabel>,
    pub structure: Structure,
}

impl LabelledSts {
    fn indices_of(system: &TripleSystem, triples: &[Triple]) -> Vec<usize> {
        let mut idx: Vec<usize> = triples.iter().map(|t| system.index_of(t).expect("triple present")).collect();
        idx.sort_unstable();
        idx
    }

    /// The `Z_3` weighting behind the mod-3 parallel-class bound, when the
    /// structure provides one: the layer for Bose systems, `p mod 3` for the
    /// cyclic STS(33).
    pub fn mod3_weighting(&self) -> Option<Vec<u8>> {
        match &self.structure {
            Structure::Bose { .. } => Some(
                self.labels
                    .iter()
                    .map(|l| match l {
                        PointLabel::Layered { layer, .. } => *layer,
                        _ => unreachable!("Bose points are layered"),
                    })
                    .collect(),
            ),
            Structure::Cyclic33 { .. } => Some((0..33u32).map(|p| (p % 3) as u8).collect()),
            Structure::WilsonSchreiber { .. } => None,
        }
    }
}

/// STS(n+2) from a 1-factorisation of `G(n)`. Residues `1..n` map to points
/// `0..n−1`, `∞_i` to `n−1+i`.
pub fn wilson_schreiber(n: u64, fact: &OneFactorisation) -> Result<LabelledSts> {
    if n < 7 || n % 6 != 1 || fact.graph().modulus() != n {
        return Err(Error::InvalidOrder { value: n, reason: "needs n ≡ 1 (mod 6) matching the factorisation" });
    }
    let p = |r: u64| (r - 1) as Point;
    let inf = |i: usize| (n - 1) as Point + i as Point;
    let mut zero_sum = Vec::new();
    for a in 1..n {
        for b in a + 1..n {
            let c = (2 * n - a - b) % n;
            if c > b {
                zero_sum.push(Triple::new(p(a), p(b), p(c)));
            }
        }
    }
    let mut infinite = vec![Triple::new(inf(0), inf(1), inf(2))];
    for (i, factor) in fact.factors().iter().enumerate() {
        infinite.extend(factor.iter().map(|&(x, y)| Triple::new(p(x), p(y), inf(i))));
    }
    let system = TripleSystem::new((n + 2) as u32, zero_sum.iter().chain(&infinite).copied())?;
    let report = verify_sts(&system);
    if !report.is_ok() {
        return Err(Error::NotSteiner(report));
    }
    let mut labels: Vec<PointLabel> = (1..n).map(|value| PointLabel::Residue { value }).collect();
    labels.extend((0..3).map(|index| PointLabel::Infinity { index }));
    let structure = Structure::WilsonSchreiber {
        n,
        zero_sum: LabelledSts::indices_of(&system, &zero_sum),
        infinite: LabelledSts::indices_of(&system, &infinite),
    };
    Ok(LabelledSts { system, labels, structure })
}

/// Recovers the 1-factorisation from a system laid out like
/// [`wilson_schreiber`] output: `v = n + 2`, the last three points are the
/// infinite points, and triples through exactly one of them give the edges.
pub fn ws_factorisation_of(system: &TripleSystem) -> Result<(u64, OneFactorisation)> {
    let v = u64::from(system.order());
    if v < 9 || v % 6 != 3 {
        return Err(Error::Unsupported(format!("order {v} is not n+2 with n ≡ 1 (mod 6)")));
    }
    let n = v - 2;
    let first_inf = (n - 1) as Point;
    let mut factors: [Vec<(u64, u64)>; 3] = Default::default();
    for t in system.triples() {
        let [a, b, c] = t.points();
        if a >= first_inf || b >= first_inf {
            continue;
        }
        if c >= first_inf {
            factors[(c - first_inf) as usize].push((u64::from(a) + 1, u64::from(b) + 1));
        }
    }
    if system.index_of(&Triple::new(first_inf, first_inf + 1, first_inf + 2)).is_none() {
        return Err(Error::Unsupported("the three infinite points do not form a triple".into()));
    }
    let fact = OneFactorisation::new(crate::factorisation::build_g(n)?, factors);
    let report = check_structure(&fact);
    if !report.is_ok() {
        return Err(Error::Factorisation(report.to_string()));
    }
    Ok((n, fact))
}

/// Bose STS(3n) with `(x, i) ↦ x + n·i`.
pub fn bose(squares: [&LatinSquare; 3]) -> Result<LabelledSts> {
    let n = squares[0].order();
    if n % 6 != 5 {
        return Err(Error::InvalidOrder { value: n as u64, reason: "Bose order must be 5 mod 6" });
    }
    for (i, sq) in squares.iter().enumerate() {
        if sq.order() != n {
            return Err(Error::LatinSquare(format!("square {i} has order {}, expected {n}", sq.order())));
        }
        if !sq.is_idempotent() || !sq.is_symmetric() {
            return Err(Error::LatinSquare(format!("square {i} is not idempotent and symmetric")));
        }
    }
    let pt = |x: usize, i: usize| (x + n * (i % 3)) as Point;
    let transversal: Vec<Triple> = (0..n).map(|x| Triple::new(pt(x, 0), pt(x, 1), pt(x, 2))).collect();
    let layers: [Vec<Triple>; 3] = std::array::from_fn(|i| {
        let mut out = Vec::with_capacity(n * (n - 1) / 2);
        for x in 0..n {
            for y in x + 1..n {
                out.push(Triple::new(pt(x, i), pt(y, i), pt(squares[i].get(x, y) as usize, i + 1)));
            }
        }
        out
    });
    let system = TripleSystem::new((3 * n) as u32, transversal.iter().chain(layers.iter().flatten()).copied())?;
    let report = verify_sts(&system);
    if !report.is_ok() {
        return Err(Error::NotSteiner(report));
    }
    let labels = (0..3 * n).map(|p| PointLabel::Layered { x: (p % n) as u32, layer: (p / n) as u8 }).collect();
    let cyclic_squares = squares.iter().all(|sq| **sq == *squares[0]) && *squares[0] == half_sum_square(n)?;
    let structure = Structure::Bose {
        n,
        transversal: LabelledSts::indices_of(&system, &transversal),
        layers: std::array::from_fn(|i| LabelledSts::indices_of(&system, &layers[i])),
        cyclic_squares,
    };
    Ok(LabelledSts { system, labels, structure })
}

/// Bose system from three copies of the half-sum square.
pub fn bose_half_sum(n: usize) -> Result<LabelledSts> {
    let sq = half_sum_square(n)?;
    bose([&sq, &sq, &sq])
}

/// True when `ρ(x, i) = (x+1 mod n, i+1 mod 3)` maps the triple set onto
/// itself and permutes all `3n` points in a single cycle.
pub fn verify_cyclic(sts: &LabelledSts) -> bool {
    let n = match &sts.structure {
        Structure::Bose { n, .. } => *n,
        _ => return false,
    };
    let v = 3 * n;
    let rho = |p: Point| {
        let (x, i) = (p as usize % n, p as usize / n);
        (((x + 1) % n) + n * ((i + 1) % 3)) as Point
    };
    let maps_onto = sts.system.triples().iter().all(|t| {
        let [a, b, c] = t.points();
        sts.system.index_of(&Triple::new(rho(a), rho(b), rho(c))).is_some()
    });
    let mut p = rho(0);
    let mut cycle = 1;
    while p != 0 {
        p = rho(p);
        cycle += 1;
    }
    maps_onto && cycle == v
}

const STS33_BASE_PAIRS: [(u32, u32); 5] = [(3, 7), (5, 17), (13, 15), (8, 14), (9, 10)];

const STS33_DEVELOPED_CLASS: [[u32; 3]; 10] = [
    [0, 23, 32],
    [1, 13, 29],
    [2, 5, 9],
    [3, 8, 20],
    [4, 12, 18],
    [7, 16, 17],
    [10, 15, 27],
    [11, 24, 26],
    [14, 22, 28],
    [21, 30, 31],
];

const STS33_EXTRA_CLASSES: [&[[u32; 3]]; 6] = [
    &[
        [0, 8, 14],
        [1, 5, 31],
        [2, 21, 29],
        [4, 6, 24],
        [7, 9, 27],
        [10, 13, 17],
        [12, 20, 26],
        [15, 18, 22],
        [16, 19, 23],
        [25, 28, 32],
    ],
    &[
        [0, 3, 7],
        [1, 27, 30],
        [4, 17, 19],
        [6, 14, 20],
        [8, 10, 28],
        [9, 12, 16],
        [11, 13, 31],
        [18, 26, 32],
        [22, 25, 29],
    ],
    &[
        [0, 4, 30],
        [1, 14, 16],
        [3, 6, 10],
        [7, 20, 22],
        [9, 17, 23],
        [12, 15, 19],
        [13, 26, 28],
        [18, 21, 25],
        [24, 27, 31],
    ],
    &[
        [0, 13, 15],
        [1, 4, 8],
        [2, 28, 31],
        [3, 16, 18],
        [5, 11, 30],
        [6, 19, 21],
        [7, 10, 14],
        [9, 22, 24],
        [12, 25, 27],
    ],
    &[
        [0, 18, 31],
        [1, 19, 32],
        [2, 4, 22],
        [3, 11, 17],
        [5, 7, 25],
        [10, 12, 30],
        [13, 16, 20],
        [15, 23, 29],
        [21, 24, 28],
    ],
    &[
        [1, 3, 21],
        [2, 8, 27],
        [4, 7, 11],
        [5, 24, 32],
        [6, 9, 13],
        [10, 23, 25],
        [15, 28, 30],
        [16, 29, 31],
        [19, 22, 26],
    ],
];

/// The cyclic STS(33) on `Z_33` with short orbit `{i, i+11, i+22}` and five
/// full difference orbits, together with its 18-class colouring.
pub fn sts33_fixture() -> Result<(LabelledSts, Colouring)> {
    let star: Vec<Triple> = (0..11).map(|i| Triple::new(i, i + 11, i + 22)).collect();
    let developed: Vec<Triple> = STS33_BASE_PAIRS
        .iter()
        .flat_map(|&(x, y)| (0..33).map(move |i| Triple::new(i, (x + i) % 33, (y + i) % 33)))
        .collect();
    let system = TripleSystem::new(33, star.iter().chain(&developed).copied())?;
    let report = verify_sts(&system);
    if !report.is_ok() {
        return Err(Error::NotSteiner(report));
    }
    let class_of = |triples: &mut dyn Iterator<Item = Triple>| -> Result<PartialParallelClass> {
        let idx = triples
            .map(|t| system.index_of(&t).ok_or_else(|| Error::Unsupported(format!("fixture triple {t} not in system"))))
            .collect::<Result<Vec<usize>>>()?;
        Ok(PartialParallelClass::new(idx))
    };
    let mut classes = vec![class_of(&mut star.iter().copied())?];
    for shift in (0..33).step_by(3) {
        let mut it = STS33_DEVELOPED_CLASS
            .iter()
            .map(|&[a, b, c]| Triple::new((a + shift) % 33, (b + shift) % 33, (c + shift) % 33));
        classes.push(class_of(&mut it)?);
    }
    for extra in STS33_EXTRA_CLASSES {
        classes.push(class_of(&mut extra.iter().map(|&[a, b, c]| Triple::new(a, b, c)))?);
    }
    let structure = Structure::Cyclic33 {
        base_blocks: LabelledSts::indices_of(&system, &star),
        developed: LabelledSts::indices_of(&system, &developed),
    };
    let labels = (0..33).map(|value| PointLabel::Residue { value }).collect();
    Ok((LabelledSts { system, labels, structure }, Colouring::new(classes)))
}
