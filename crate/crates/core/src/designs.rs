//! Triple systems, partial parallel classes and colourings.
//!
//! Points are always `0..v`. Triples are stored sorted, and the triple list
//! of a [`TripleSystem`] is sorted lexicographically, so triple indices are a
//! canonical reference used by colourings and parallel classes.

use std::fmt;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::{Error, Result};

pub type Point = u32;

/// A 3-subset of points, stored in ascending order.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Triple([Point; 3]);

impl Triple {
    pub fn new(a: Point, b: Point, c: Point) -> Self {
        let mut p = [a, b, c];
        p.sort_unstable();
        Triple(p)
    }

    pub fn points(&self) -> [Point; 3] {
        self.0
    }

    pub fn contains(&self, p: Point) -> bool {
        self.0.contains(&p)
    }

    /// False when a point is repeated.
    pub fn is_proper(&self) -> bool {
        self.0[0] != self.0[1] && self.0[1] != self.0[2]
    }

    /// The smallest point shared with `other`, if any.
    pub fn meets(&self, other: &Triple) -> Option<Point> {
        self.0.iter().copied().find(|p| other.contains(*p))
    }

    pub fn pairs(&self) -> [(Point, Point); 3] {
        let [a, b, c] = self.0;
        [(a, b), (a, c), (b, c)]
    }

    pub fn sum(&self) -> u64 {
        self.0.iter().map(|&p| u64::from(p)).sum()
    }

    pub fn mask(&self) -> u128 {
        self.0.iter().fold(0u128, |m, &p| m | (1u128 << p))
    }
}

impl fmt::Display for Triple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{{},{},{}}}", self.0[0], self.0[1], self.0[2])
    }
}

/// A set of triples on the points `0..v`.
///
/// Construction sorts and rejects duplicate triples and out-of-range points.
/// Whether the triples form a Steiner triple system is decided by
/// [`verify_sts`], not by the constructor.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TripleSystem {
    v: u32,
    triples: Vec<Triple>,
}

impl TripleSystem {
    pub fn new(v: u32, triples: impl IntoIterator<Item = Triple>) -> Result<Self> {
        let mut triples: Vec<Triple> = triples.into_iter().collect();
        for t in &triples {
            if let Some(&p) = t.points().iter().find(|&&p| p >= v) {
                return Err(Error::PointOutOfRange { point: p, v });
            }
        }
        triples.sort_unstable();
        if let Some(w) = triples.windows(2).find(|w| w[0] == w[1]) {
            return Err(Error::DuplicateTriple(w[0]));
        }
        Ok(TripleSystem { v, triples })
    }

    pub fn order(&self) -> u32 {
        self.v
    }

    pub fn triples(&self) -> &[Triple] {
        &self.triples
    }

    pub fn len(&self) -> usize {
        self.triples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.triples.is_empty()
    }

    pub fn triple(&self, index: usize) -> Triple {
        self.triples[index]
    }

    pub fn index_of(&self, t: &Triple) -> Option<usize> {
        self.triples.binary_search(t).ok()
    }

    /// For each point, the indices of the triples through it (ascending).
    pub fn incidence(&self) -> Vec<Vec<usize>> {
        let mut inc = vec![Vec::new(); self.v as usize];
        for (i, t) in self.triples.iter().enumerate() {
            for p in t.points() {
                inc[p as usize].push(i);
            }
        }
        inc
    }

    /// Renders the `STS v=<v>` text format.
    pub fn to_text(&self) -> String {
        let mut out = format!("STS v={}\n", self.v);
        for t in &self.triples {
            let [a, b, c] = t.points();
            let _ = writeln!(out, "{a} {b} {c}");
        }
        out
    }

    pub fn from_text(text: &str) -> Result<Self> {
        let mut lines = text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty());
        let (_, header) = lines.next().ok_or_else(|| parse_err(1, "empty input"))?;
        let v = parse_header(header, "STS", &["v"], 1)?[0];
        let v = u32::try_from(v).map_err(|_| parse_err(1, "order too large"))?;
        let mut triples = Vec::new();
        for (i, line) in lines {
            let nums = parse_numbers(line, i + 1)?;
            if nums.len() != 3 {
                return Err(parse_err(i + 1, "expected three points"));
            }
            let p = |k: usize| u32::try_from(nums[k]).map_err(|_| parse_err(i + 1, "point too large"));
            triples.push(Triple::new(p(0)?, p(1)?, p(2)?));
        }
        TripleSystem::new(v, triples)
    }
}

/// A set of pairwise disjoint triples, by index into a host system.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct PartialParallelClass {
    triples: Vec<usize>,
}

impl PartialParallelClass {
    pub fn new(mut triples: Vec<usize>) -> Self {
        triples.sort_unstable();
        PartialParallelClass { triples }
    }

    pub fn triples(&self) -> &[usize] {
        &self.triples
    }

    pub fn len(&self) -> usize {
        self.triples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.triples.is_empty()
    }

    /// True when the member triples are pairwise disjoint in `host`.
    pub fn is_disjoint_in(&self, host: &TripleSystem) -> bool {
        let mut used = vec![false; host.order() as usize];
        for &i in &self.triples {
            for p in host.triple(i).points() {
                if std::mem::replace(&mut used[p as usize], true) {
                    return false;
                }
            }
        }
        true
    }
}

/// A partition of the triples of a host system into colour classes.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Colouring {
    classes: Vec<PartialParallelClass>,
}

impl Colouring {
    pub fn new(classes: Vec<PartialParallelClass>) -> Self {
        Colouring { classes }
    }

    /// Builds a colouring from a per-triple class assignment.
    pub fn from_assignment(assignment: &[usize]) -> Self {
        let k = assignment.iter().map(|&c| c + 1).max().unwrap_or(0);
        let mut classes = vec![Vec::new(); k];
        for (t, &c) in assignment.iter().enumerate() {
            classes[c].push(t);
        }
        Colouring::new(classes.into_iter().map(PartialParallelClass::new).collect())
    }

    pub fn classes(&self) -> &[PartialParallelClass] {
        &self.classes
    }

    pub fn num_classes(&self) -> usize {
        self.classes.len()
    }

    /// Renders the `COLOURING v=<v> k=<classes>` text format.
    pub fn to_text(&self, v: u32) -> String {
        let mut out = format!("COLOURING v={} k={}\n", v, self.classes.len());
        for class in &self.classes {
            let line: Vec<String> = class.triples().iter().map(usize::to_string).collect();
            out.push_str(&line.join(" "));
            out.push('\n');
        }
        out
    }

    /// Parses the colouring text format, returning the declared order too.
    pub fn from_text(text: &str) -> Result<(u32, Self)> {
        let mut lines = text.lines().enumerate();
        let (_, header) = lines.next().ok_or_else(|| parse_err(1, "empty input"))?;
        let h = parse_header(header, "COLOURING", &["v", "k"], 1)?;
        let v = u32::try_from(h[0]).map_err(|_| parse_err(1, "order too large"))?;
        let mut classes = Vec::new();
        for (i, line) in lines {
            if classes.len() == h[1] as usize && line.trim().is_empty() {
                continue;
            }
            let idx = parse_numbers(line, i + 1)?;
            classes.push(PartialParallelClass::new(idx.into_iter().map(|x| x as usize).collect()));
        }
        if classes.len() as u64 != h[1] {
            return Err(parse_err(1, "class count does not match header"));
        }
        Ok((v, Colouring::new(classes)))
    }
}

fn parse_err(line: usize, message: &str) -> Error {
    Error::Parse { line, message: message.to_string() }
}

fn parse_header(line: &str, tag: &str, keys: &[&str], lineno: usize) -> Result<Vec<u64>> {
    let mut words = line.split_whitespace();
    if words.next() != Some(tag) {
        return Err(parse_err(lineno, &format!("expected `{tag}` header")));
    }
    let mut values = Vec::with_capacity(keys.len());
    for key in keys {
        let word = words.next().ok_or_else(|| parse_err(lineno, &format!("missing `{key}=`")))?;
        let value = word
            .strip_prefix(key)
            .and_then(|w| w.strip_prefix('='))
            .and_then(|w| w.parse().ok())
            .ok_or_else(|| parse_err(lineno, &format!("malformed `{key}=` field")))?;
        values.push(value);
    }
    if words.next().is_some() {
        return Err(parse_err(lineno, "trailing header fields"));
    }
    Ok(values)
}

fn parse_numbers(line: &str, lineno: usize) -> Result<Vec<u64>> {
    line.split_whitespace().map(|w| w.parse().map_err(|_| parse_err(lineno, &format!("not a number: `{w}`")))).collect()
}

/// One failed check, with enough context to locate it.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Violation {
    InadmissibleOrder { v: u32 },
    WrongTripleCount { expected: usize, found: usize },
    MalformedTriple { index: usize, triple: Triple },
    DuplicatePair { pair: (Point, Point), first: Triple, second: Triple },
    UncoveredPair { pair: (Point, Point) },
    IndexOutOfRange { class: usize, index: usize },
    TripleInTwoClasses { triple: usize, first_class: usize, second_class: usize },
    MissingTriple { triple: usize },
    EmptyClass { class: usize },
    SharedPoint { class: usize, first: usize, second: usize, point: Point },
    NotPerfectMatching { factor: usize, vertex: u64 },
    ForeignEdge { factor: usize, edge: (u64, u64) },
    EdgeNotCovered { edge: (u64, u64) },
    PairedWeightSplit { weight: u64, first: (u64, u64), first_factor: usize, second: (u64, u64), second_factor: usize },
    WeightCount { property: String, expected: usize, found: usize },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        use Violation::*;
        match self {
            InadmissibleOrder { v } => write!(f, "order {v} is not 1 or 3 mod 6"),
            WrongTripleCount { expected, found } => {
                write!(f, "expected {expected} triples, found {found}")
            }
            MalformedTriple { index, triple } => {
                write!(f, "triple {index} {triple} repeats a point")
            }
            DuplicatePair { pair: (a, b), first, second } => {
                write!(f, "pair {{{a},{b}}} covered twice (by {first} and {second})")
            }
            UncoveredPair { pair: (a, b) } => write!(f, "pair {{{a},{b}}} not covered"),
            IndexOutOfRange { class, index } => {
                write!(f, "class {class} references missing triple {index}")
            }
            TripleInTwoClasses { triple, first_class, second_class } => {
                write!(f, "triple {triple} in classes {first_class} and {second_class}")
            }
            MissingTriple { triple } => write!(f, "triple {triple} has no class"),
            EmptyClass { class } => write!(f, "class {class} is empty"),
            SharedPoint { class, first, second, point } => {
                write!(f, "triples {first} and {second} in class {class} share point {point}")
            }
            NotPerfectMatching { factor, vertex } => {
                write!(f, "factor {factor} does not cover vertex {vertex} exactly once")
            }
            ForeignEdge { factor, edge: (x, y) } => {
                write!(f, "factor {factor} contains {{{x},{y}}}, which is not an edge")
            }
            EdgeNotCovered { edge: (x, y) } => write!(f, "edge {{{x},{y}}} in no factor"),
            PairedWeightSplit { weight, first, first_factor, second, second_factor } => write!(
                f,
                "edges {first:?} (factor {first_factor}) and {second:?} (factor {second_factor}) \
                 have weights ±{weight} but lie in different factors"
            ),
            WeightCount { property, expected, found } => {
                write!(f, "{property}: expected {expected}, found {found}")
            }
        }
    }
}

/// Outcome of a verification: every violation found, in discovery order.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub violations: Vec<Violation>,
    /// Number of colour classes, for colouring checks.
    pub classes: Option<usize>,
}

impl VerificationReport {
    pub fn is_ok(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn first(&self) -> Option<&Violation> {
        self.violations.first()
    }

    pub fn count(&self) -> usize {
        self.violations.len()
    }

    pub(crate) fn push(&mut self, v: Violation) {
        self.violations.push(v);
    }
}

impl fmt::Display for VerificationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.first() {
            None => write!(f, "ok"),
            Some(v) if self.count() == 1 => write!(f, "{v}"),
            Some(v) => write!(f, "{v} (and {} more)", self.count() - 1),
        }
    }
}

pub fn is_admissible(v: u32) -> bool {
    v >= 3 && matches!(v % 6, 1 | 3)
}

pub fn verify_sts(system: &TripleSystem) -> VerificationReport {
    let mut report = VerificationReport::default();
    let v = system.order();
    let n = v as usize;
    if !is_admissible(v) {
        report.push(Violation::InadmissibleOrder { v });
    }
    let expected = n * n.saturating_sub(1) / 6;
    if system.len() != expected {
        report.push(Violation::WrongTripleCount { expected, found: system.len() });
    }
    // cover[a * v + b] holds 1 + index of the first triple covering {a,b}.
    let mut cover = vec![0usize; n * n];
    for (i, t) in system.triples().iter().enumerate() {
        if !t.is_proper() {
            report.push(Violation::MalformedTriple { index: i, triple: *t });
            continue;
        }
        for (a, b) in t.pairs() {
            let slot = &mut cover[a as usize * n + b as usize];
            if *slot == 0 {
                *slot = i + 1;
            } else {
                report.push(Violation::DuplicatePair { pair: (a, b), first: system.triple(*slot - 1), second: *t });
            }
        }
    }
    for a in 0..v {
        for b in a + 1..v {
            if cover[a as usize * n + b as usize] == 0 {
                report.push(Violation::UncoveredPair { pair: (a, b) });
            }
        }
    }
    report
}

pub fn verify_colouring(system: &TripleSystem, colouring: &Colouring) -> VerificationReport {
    let mut report = VerificationReport { classes: Some(colouring.num_classes()), ..Default::default() };
    let b = system.len();
    let mut owner: Vec<Option<usize>> = vec![None; b];
    let mut at_point: Vec<Option<usize>> = vec![None; system.order() as usize];
    for (c, class) in colouring.classes().iter().enumerate() {
        if class.is_empty() {
            report.push(Violation::EmptyClass { class: c });
        }
        let mut touched = Vec::new();
        for &t in class.triples() {
            if t >= b {
                report.push(Violation::IndexOutOfRange { class: c, index: t });
                continue;
            }
            match owner[t] {
                Some(first) => {
                    report.push(Violation::TripleInTwoClasses { triple: t, first_class: first, second_class: c })
                }
                None => owner[t] = Some(c),
            }
            for p in system.triple(t).points() {
                match at_point[p as usize] {
                    Some(other) if other != t => {
                        report.push(Violation::SharedPoint { class: c, first: other, second: t, point: p })
                    }
                    Some(_) => {}
                    None => {
                        at_point[p as usize] = Some(t);
                        touched.push(p as usize);
                    }
                }
            }
        }
        for p in touched {
            at_point[p] = None;
        }
    }
    for (t, o) in owner.iter().enumerate() {
        if o.is_none() {
            report.push(Violation::MissingTriple { triple: t });
        }
    }
    report
}

/// The trivial lower bound `m(v)` on the chromatic index.
pub fn m_lower(v: u32) -> Result<u32> {
    match v % 6 {
        3 => Ok((v - 1) / 2),
        1 if v > 1 => Ok(v.div_ceil(2)),
        _ => Err(Error::InvalidOrder { value: v.into(), reason: "must be 1 or 3 mod 6" }),
    }
}

/// Minimum number of disjoint parallel classes in any STS(v), `v ≡ 3 (mod 6)`,
/// whose chromatic index is at most `(v+1)/2`.
pub fn min_pc_for_low_chi(v: u32) -> Result<u32> {
    if v % 6 != 3 {
        return Err(Error::InvalidOrder { value: v.into(), reason: "must be 3 mod 6" });
    }
    Ok((v + 3) / 6)
}

#[cfg(test)]
mod tests {
    use super::*;

    pub(crate) fn fano() -> TripleSystem {
        let t = [[0, 1, 3], [1, 2, 4], [2, 3, 5], [3, 4, 6], [4, 5, 0], [5, 6, 1], [6, 0, 2]];
        TripleSystem::new(7, t.iter().map(|&[a, b, c]| Triple::new(a, b, c))).unwrap()
    }

    fn ag23() -> TripleSystem {
        // points (x, y) ↦ 3x + y; lines of AG(2,3)
        let mut t = Vec::new();
        for dir in [(0u32, 1u32), (1, 0), (1, 1), (1, 2)] {
            let mut seen = std::collections::BTreeSet::new();
            for x in 0..3 {
                for y in 0..3 {
                    let pts: Vec<u32> = (0..3).map(|k| 3 * ((x + k * dir.0) % 3) + (y + k * dir.1) % 3).collect();
                    let tr = Triple::new(pts[0], pts[1], pts[2]);
                    if seen.insert(tr) {
                        t.push(tr);
                    }
                }
            }
        }
        TripleSystem::new(9, t).unwrap()
    }

    #[test]
    fn fano_is_steiner() {
        assert!(verify_sts(&fano()).is_ok());
    }

    #[test]
    fn ag23_is_steiner() {
        let s = ag23();
        assert_eq!(s.len(), 12);
        assert!(verify_sts(&s).is_ok());
    }

    #[test]
    fn modified_fano_reports_double_cover() {
        let mut t: Vec<Triple> = fano().triples().to_vec();
        t.retain(|x| *x != Triple::new(0, 1, 3));
        t.push(Triple::new(0, 1, 4));
        let r = verify_sts(&TripleSystem::new(7, t).unwrap());
        assert!(!r.is_ok());
        assert!(r.violations.iter().any(|v| matches!(v, Violation::DuplicatePair { pair: (1, 4), .. })));
        let msg = r.violations.iter().map(|v| v.to_string()).collect::<Vec<_>>();
        assert!(msg.iter().any(|m| m.starts_with("pair {1,4} covered twice")));
        // {0,4} and {1,4} doubled, {0,3} and {1,3} uncovered
        assert_eq!(r.count(), 4);
    }

    #[test]
    fn malformed_and_count_violations() {
        let s = TripleSystem::new(7, [Triple::new(0, 0, 1)]).unwrap();
        let r = verify_sts(&s);
        assert_eq!(r.first(), Some(&Violation::WrongTripleCount { expected: 7, found: 1 }));
        assert!(r.violations.iter().any(|v| matches!(v, Violation::MalformedTriple { index: 0, .. })));
    }

    #[test]
    fn constructor_rejects_duplicates_and_range() {
        let d = TripleSystem::new(7, [Triple::new(0, 1, 3), Triple::new(3, 1, 0)]);
        assert!(matches!(d, Err(Error::DuplicateTriple(_))));
        let r = TripleSystem::new(7, [Triple::new(0, 1, 7)]);
        assert!(matches!(r, Err(Error::PointOutOfRange { point: 7, v: 7 })));
    }

    #[test]
    fn lower_bounds() {
        assert_eq!(m_lower(9).unwrap(), 4);
        assert_eq!(m_lower(13).unwrap(), 7);
        assert_eq!(m_lower(33).unwrap(), 16);
        assert!(m_lower(11).is_err());
        assert_eq!(min_pc_for_low_chi(15).unwrap(), 3);
        assert_eq!(min_pc_for_low_chi(33).unwrap(), 6);
        assert_eq!(min_pc_for_low_chi(9).unwrap(), 2);
        assert!(min_pc_for_low_chi(13).is_err());
    }

    #[test]
    fn min_pc_counting_argument() {
        // p full classes plus ((v+1)/2 - p) classes of at most (v-3)/3 triples
        // must hold all v(v-1)/6 triples; the least such p is (v+3)/6.
        for v in (9..200u32).step_by(6) {
            let need = v * (v - 1) / 6;
            let k = v.div_ceil(2);
            let p = (0..=k).find(|&p| p * (v / 3) + (k - p) * ((v - 3) / 3) >= need).unwrap();
            assert_eq!(p, min_pc_for_low_chi(v).unwrap(), "v={v}");
        }
    }

    #[test]
    fn ag23_parallel_classes_colouring() {
        let s = ag23();
        // brute-force resolution: greedily group triples into 4 disjoint classes
        let mut classes: Vec<Vec<usize>> = Vec::new();
        for i in 0..s.len() {
            let slot = classes.iter_mut().find(|c| c.iter().all(|&j| s.triple(i).meets(&s.triple(j)).is_none()));
            match slot {
                Some(c) => c.push(i),
                None => classes.push(vec![i]),
            }
        }
        let col = Colouring::new(classes.into_iter().map(PartialParallelClass::new).collect());
        let r = verify_colouring(&s, &col);
        assert!(r.is_ok(), "{r}");
        assert_eq!(r.classes, Some(4));
    }

    #[test]
    fn fano_singleton_colouring() {
        let s = fano();
        let col = Colouring::from_assignment(&(0..7).collect::<Vec<_>>());
        let r = verify_colouring(&s, &col);
        assert!(r.is_ok());
        assert_eq!(r.classes, Some(7));
    }

    #[test]
    fn fano_shared_point_detected() {
        let s = fano();
        let a = s.index_of(&Triple::new(0, 1, 3)).unwrap();
        let b = s.index_of(&Triple::new(1, 2, 4)).unwrap();
        let mut classes = vec![PartialParallelClass::new(vec![a, b])];
        for i in (0..7).filter(|&i| i != a && i != b) {
            classes.push(PartialParallelClass::new(vec![i]));
        }
        let r = verify_colouring(&s, &Colouring::new(classes));
        assert_eq!(r.count(), 1);
        assert!(r.first().unwrap().to_string().ends_with("share point 1"));
    }

    #[test]
    fn colouring_missing_and_double() {
        let s = fano();
        let col = Colouring::new(vec![
            PartialParallelClass::new(vec![0]),
            PartialParallelClass::new(vec![0]),
            PartialParallelClass::new(vec![9]),
        ]);
        let r = verify_colouring(&s, &col);
        assert!(r.violations.contains(&Violation::TripleInTwoClasses { triple: 0, first_class: 0, second_class: 1 }));
        assert!(r.violations.contains(&Violation::IndexOutOfRange { class: 2, index: 9 }));
        assert_eq!(r.violations.iter().filter(|v| matches!(v, Violation::MissingTriple { .. })).count(), 6);
    }

    #[test]
    fn text_formats() {
        let s = fano();
        let text = s.to_text();
        assert!(text.starts_with("STS v=7\n0 1 3\n"));
        assert_eq!(TripleSystem::from_text(&text).unwrap(), s);
        let col = Colouring::from_assignment(&[0, 1, 2, 3, 4, 5, 6]);
        let ct = col.to_text(7);
        assert!(ct.starts_with("COLOURING v=7 k=7\n0\n"));
        assert_eq!(Colouring::from_text(&ct).unwrap(), (7, col));
        assert!(TripleSystem::from_text("STS v=7\n0 1\n").is_err());
        assert!(TripleSystem::from_text("STX v=7\n").is_err());
        assert!(Colouring::from_text("COLOURING v=7 k=2\n0 1\n").is_err());
    }
}
