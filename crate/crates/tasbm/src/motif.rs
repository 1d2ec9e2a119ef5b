//! Temporal motifs: small directed multigraph patterns with a strict total
//! order on their edges, the canonical catalog of all 36 motifs on 2-3
//! nodes with 3 edges, and the delta-instance predicate.
//!
//! Catalog identity is canonical: each equivalence class under slot
//! relabeling is represented by its lexicographically smallest edge list,
//! and classes are ordered within their structural category to fill the
//! A1..F6 label grid (triangles A1-4/B1-4, two-node A5-6/B5-6,
//! reciprocated C1-6/D1-6, double edge E1-6/F1-6).

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::graph::{Timestamp};

/// Slot index inside a motif (node ids of the pattern, `0..k`).
pub type Slot = u8;

/// A k-node, z-edge directed multigraph pattern whose edge-list order is
/// the temporal order of the motif.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct TemporalMotif {
    k: usize,
    edges: Vec<(Slot, Slot)>,
}

impl TemporalMotif {
    /// Validates slot coverage (`every slot 0..k appears`), slot bounds,
    /// and the no-self-edge rule.
    pub fn new(k: usize, edges: Vec<(Slot, Slot)>) -> Result<Self> {
        if k < 2 {
            return Err(Error::InvalidMotif("a motif needs at least 2 nodes".into()));
        }
        if edges.is_empty() {
            return Err(Error::InvalidMotif("a motif needs at least 1 edge".into()));
        }
        let mut used = vec![false; k];
        for &(s, d) in &edges {
            if s == d {
                return Err(Error::InvalidMotif(format!("self edge on slot {s}")));
            }
            if s as usize >= k || d as usize >= k {
                return Err(Error::InvalidMotif(format!(
                    "edge ({s}, {d}) outside slot range 0..{k}"
                )));
            }
            used[s as usize] = true;
            used[d as usize] = true;
        }
        if let Some(unused) = used.iter().position(|&u| !u) {
            return Err(Error::InvalidMotif(format!("slot {unused} is isolated")));
        }
        Ok(TemporalMotif { k, edges })
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn z(&self) -> usize {
        self.edges.len()
    }

    /// Edges in temporal order.
    pub fn edges(&self) -> &[(Slot, Slot)] {
        &self.edges
    }

    /// Lexicographically smallest edge list over all slot relabelings.
    /// Two motifs are equivalent iff their canonical forms are equal.
    pub fn canonical_edges(&self) -> Vec<(Slot, Slot)> {
        let mut perm: Vec<Slot> = (0..self.k as Slot).collect();
        let mut best: Option<Vec<(Slot, Slot)>> = None;
        loop {
            let relabeled: Vec<(Slot, Slot)> = self
                .edges
                .iter()
                .map(|&(s, d)| (perm[s as usize], perm[d as usize]))
                .collect();
            if best.as_ref().is_none_or(|b| relabeled < *b) {
                best = Some(relabeled);
            }
            if !next_permutation(&mut perm) {
                break;
            }
        }
        best.unwrap()
    }
}

fn next_permutation(p: &mut [Slot]) -> bool {
    let n = p.len();
    if n < 2 {
        return false;
    }
    let mut i = n - 1;
    while i > 0 && p[i - 1] >= p[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = n - 1;
    while p[j] <= p[i - 1] {
        j -= 1;
    }
    p.swap(i - 1, j);
    p[i..].reverse();
    true
}

/// Motif literal format: `k=3; 0>1, 1>2, 2>0` with edge order = list order.
impl FromStr for TemporalMotif {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = |msg: &str| Error::InvalidMotif(format!("{msg} in literal {s:?}"));
        let mut parts = s.splitn(2, ';');
        let head = parts.next().ok_or_else(|| bad("missing k="))?.trim();
        let body = parts.next().ok_or_else(|| bad("missing edge list"))?;
        let k: usize = head
            .strip_prefix("k=")
            .ok_or_else(|| bad("expected k=<count>"))?
            .trim()
            .parse()
            .map_err(|_| bad("node count is not an integer"))?;
        let mut edges = Vec::new();
        for item in body.split(',') {
            let item = item.trim();
            if item.is_empty() {
                continue;
            }
            let mut ends = item.splitn(2, '>');
            let src: Slot = ends
                .next()
                .ok_or_else(|| bad("missing edge source"))?
                .trim()
                .parse()
                .map_err(|_| bad("edge source is not a slot index"))?;
            let dst: Slot = ends
                .next()
                .ok_or_else(|| bad("expected src>dst"))?
                .trim()
                .parse()
                .map_err(|_| bad("edge destination is not a slot index"))?;
            edges.push((src, dst));
        }
        TemporalMotif::new(k, edges)
    }
}

impl fmt::Display for TemporalMotif {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "k={}; ", self.k)?;
        for (i, (s, d)) in self.edges.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{s}>{d}")?;
        }
        Ok(())
    }
}

/// Position in the A1..F6 catalog grid.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct MotifLabel {
    /// 0..=5 for rows A..F.
    pub row: u8,
    /// 1..=6.
    pub col: u8,
}

impl MotifLabel {
    pub fn new(row: u8, col: u8) -> Result<Self> {
        if row > 5 || !(1..=6).contains(&col) {
            return Err(Error::InvalidArgument(format!(
                "motif label row {row} col {col} outside the A1..F6 grid"
            )));
        }
        Ok(MotifLabel { row, col })
    }
}

impl fmt::Display for MotifLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", (b'A' + self.row) as char, self.col)
    }
}

impl FromStr for MotifLabel {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bytes = s.as_bytes();
        if bytes.len() != 2 || !(b'A'..=b'F').contains(&bytes[0]) || !(b'1'..=b'6').contains(&bytes[1])
        {
            return Err(Error::InvalidArgument(format!(
                "motif label {s:?} is not of the form A1..F6"
            )));
        }
        Ok(MotifLabel {
            row: bytes[0] - b'A',
            col: bytes[1] - b'0',
        })
    }
}

/// Structural category of a 3-edge motif.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Category {
    Triangle,
    TwoNode,
    Reciprocated,
    DoubleEdge,
}

impl fmt::Display for Category {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Category::Triangle => "triangle",
            Category::TwoNode => "two_node",
            Category::Reciprocated => "reciprocated",
            Category::DoubleEdge => "double_edge",
        };
        f.write_str(s)
    }
}

/// Classifies a motif with k <= 3 and z = 3: triangle when the three edges
/// cover three distinct unordered slot pairs, two-node when k = 2,
/// reciprocated when some unordered pair carries both directions, double
/// edge otherwise.
pub fn category(motif: &TemporalMotif) -> Result<Category> {
    if motif.k > 3 || motif.z() != 3 {
        return Err(Error::InvalidArgument(format!(
            "category is defined for k <= 3, z = 3 motifs, got k={} z={}",
            motif.k,
            motif.z()
        )));
    }
    let unordered: Vec<(Slot, Slot)> = motif
        .edges
        .iter()
        .map(|&(s, d)| if s < d { (s, d) } else { (d, s) })
        .collect();
    let mut distinct = unordered.clone();
    distinct.sort_unstable();
    distinct.dedup();
    if motif.k == 3 && distinct.len() == 3 {
        return Ok(Category::Triangle);
    }
    if motif.k == 2 {
        return Ok(Category::TwoNode);
    }
    let has_reciprocal = motif.edges.iter().any(|&(s, d)| {
        motif.edges.iter().any(|&(s2, d2)| s2 == d && d2 == s)
    });
    if has_reciprocal {
        Ok(Category::Reciprocated)
    } else {
        Ok(Category::DoubleEdge)
    }
}

/// The ordered 36-motif catalog of all 2- and 3-node, 3-edge temporal
/// motifs, labeled A1..F6 row-major.
pub fn catalog_36() -> Vec<(MotifLabel, TemporalMotif)> {
    let mut classes: Vec<TemporalMotif> = Vec::new();
    let mut seen: std::collections::HashSet<Vec<(Slot, Slot)>> = std::collections::HashSet::new();

    // all 3-edge lists over 2 or 3 slots, every slot used
    for k in 2..=3usize {
        let pairs: Vec<(Slot, Slot)> = (0..k as Slot)
            .flat_map(|s| (0..k as Slot).filter(move |&d| d != s).map(move |d| (s, d)))
            .collect();
        for &e1 in &pairs {
            for &e2 in &pairs {
                for &e3 in &pairs {
                    let Ok(m) = TemporalMotif::new(k, vec![e1, e2, e3]) else {
                        continue; // skips lists leaving a slot isolated
                    };
                    let canon = m.canonical_edges();
                    if seen.insert(canon.clone()) {
                        classes.push(TemporalMotif::new(k, canon).unwrap());
                    }
                }
            }
        }
    }

    let mut by_cat: [Vec<TemporalMotif>; 4] = Default::default();
    for m in classes {
        let idx = match category(&m).unwrap() {
            Category::Triangle => 0,
            Category::TwoNode => 1,
            Category::Reciprocated => 2,
            Category::DoubleEdge => 3,
        };
        by_cat[idx].push(m);
    }
    for group in &mut by_cat {
        group.sort_by(|a, b| a.edges.cmp(&b.edges));
    }

    // fill the label grid per category block
    let mut grid: Vec<(MotifLabel, TemporalMotif)> = Vec::with_capacity(36);
    let slots_for = |cat: usize| -> Vec<(u8, u8)> {
        match cat {
            // triangles: A1-4 then B1-4
            0 => (0..8).map(|i| ((i / 4) as u8, (i % 4 + 1) as u8)).collect(),
            // two-node: A5, A6, B5, B6
            1 => vec![(0, 5), (0, 6), (1, 5), (1, 6)],
            // reciprocated: C1-6 then D1-6
            2 => (0..12).map(|i| (2 + (i / 6) as u8, (i % 6 + 1) as u8)).collect(),
            // double edge: E1-6 then F1-6
            _ => (0..12).map(|i| (4 + (i / 6) as u8, (i % 6 + 1) as u8)).collect(),
        }
    };
    for (cat, group) in by_cat.into_iter().enumerate() {
        let labels = slots_for(cat);
        assert_eq!(labels.len(), group.len(), "catalog category size mismatch");
        for ((row, col), m) in labels.into_iter().zip(group) {
            grid.push((MotifLabel::new(row, col).unwrap(), m));
        }
    }
    grid.sort_by_key(|(l, _)| *l);
    grid
}

/// Looks up a catalog motif by its label.
pub fn catalog_motif(label: MotifLabel) -> TemporalMotif {
    catalog_36()
        .into_iter()
        .find(|(l, _)| *l == label)
        .map(|(_, m)| m)
        .expect("label grid is total")
}

/// Checks Definition-style delta-instance membership for an ordered edge
/// sequence: one consistent slot-node bijection, strictly increasing
/// timestamps, and a span of at most `delta`. Sequence position i is
/// matched against motif edge i.
pub fn is_delta_instance(
    edges: &[(u64, u64, Timestamp)],
    motif: &TemporalMotif,
    delta: u64,
) -> Result<bool> {
    if edges.len() != motif.z() {
        return Err(Error::InvalidArgument(format!(
            "edge sequence length {} does not match motif edge count {}",
            edges.len(),
            motif.z()
        )));
    }
    // temporal ordering and window
    for pair in edges.windows(2) {
        if pair[1].2 <= pair[0].2 {
            return Ok(false);
        }
    }
    if (edges[motif.z() - 1].2 - edges[0].2) as u64 > delta {
        return Ok(false);
    }
    // a single bijection must map slots onto nodes
    let mut slot_node: Vec<Option<u64>> = vec![None; motif.k];
    let mut bound_nodes: Vec<u64> = Vec::with_capacity(motif.k);
    let bind = |slot: Slot, node: u64, slot_node: &mut Vec<Option<u64>>, bound: &mut Vec<u64>| {
        match slot_node[slot as usize] {
            Some(existing) => existing == node,
            None => {
                if bound.contains(&node) {
                    return false; // two slots cannot share a node
                }
                slot_node[slot as usize] = Some(node);
                bound.push(node);
                true
            }
        }
    };
    for (&(u, v, _), &(s, d)) in edges.iter().zip(motif.edges()) {
        if !bind(s, u, &mut slot_node, &mut bound_nodes)
            || !bind(d, v, &mut slot_node, &mut bound_nodes)
        {
            return Ok(false);
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn motif(lit: &str) -> TemporalMotif {
        lit.parse().unwrap()
    }

    #[test]
    fn catalog_has_36_distinct_motifs() {
        let cat = catalog_36();
        assert_eq!(cat.len(), 36);
        let mut canon: Vec<_> = cat.iter().map(|(_, m)| m.canonical_edges()).collect();
        canon.sort();
        canon.dedup();
        assert_eq!(canon.len(), 36);
        for (_, m) in &cat {
            assert_eq!(m.z(), 3);
            assert!(m.k() == 2 || m.k() == 3);
        }
    }

    #[test]
    fn two_node_motifs_are_a5_a6_b5_b6() {
        let cat = catalog_36();
        let two: Vec<String> = cat
            .iter()
            .filter(|(_, m)| m.k() == 2)
            .map(|(l, _)| l.to_string())
            .collect();
        assert_eq!(two, vec!["A5", "A6", "B5", "B6"]);
    }

    #[test]
    fn no_two_catalog_motifs_are_relabelings() {
        let cat = catalog_36();
        for i in 0..cat.len() {
            for j in 0..cat.len() {
                if i != j {
                    assert_ne!(
                        cat[i].1.canonical_edges(),
                        cat[j].1.canonical_edges(),
                        "{} and {} coincide",
                        cat[i].0,
                        cat[j].0
                    );
                }
            }
        }
    }

    #[test]
    fn category_blocks_match_grid() {
        let cat = catalog_36();
        let mut sizes = std::collections::HashMap::new();
        for (label, m) in &cat {
            let c = category(m).unwrap();
            *sizes.entry(c).or_insert(0usize) += 1;
            let expected = match (label.row, label.col) {
                (0 | 1, 1..=4) => Category::Triangle,
                (0 | 1, _) => Category::TwoNode,
                (2 | 3, _) => Category::Reciprocated,
                _ => Category::DoubleEdge,
            };
            assert_eq!(c, expected, "label {label}");
        }
        assert_eq!(sizes[&Category::Triangle], 8);
        assert_eq!(sizes[&Category::TwoNode], 4);
        assert_eq!(sizes[&Category::Reciprocated], 12);
        assert_eq!(sizes[&Category::DoubleEdge], 12);
    }

    #[test]
    fn category_examples() {
        assert_eq!(
            category(&motif("k=3; 0>1, 1>2, 2>0")).unwrap(),
            Category::Triangle
        );
        assert_eq!(
            category(&motif("k=2; 0>1, 1>0, 0>1")).unwrap(),
            Category::TwoNode
        );
        assert_eq!(
            category(&motif("k=3; 0>1, 1>0, 1>2")).unwrap(),
            Category::Reciprocated
        );
        assert_eq!(
            category(&motif("k=3; 0>1, 0>1, 1>2")).unwrap(),
            Category::DoubleEdge
        );
        assert!(category(&motif("k=2; 0>1, 1>0")).is_err());
    }

    #[test]
    fn delta_instance_examples() {
        let tri = motif("k=3; 0>1, 1>2, 2>0");
        let seq = [(10u64, 11u64, 1i64), (11, 12, 2), (12, 10, 3)];
        assert!(is_delta_instance(&seq, &tri, 5).unwrap());
        // window violated: span 2 > 1
        assert!(!is_delta_instance(&seq, &tri, 1).unwrap());
        // ordering violated
        let bad = [(10u64, 11u64, 1i64), (11, 12, 3), (12, 10, 2)];
        assert!(!is_delta_instance(&bad, &tri, 5).unwrap());
        // length mismatch
        assert!(is_delta_instance(&seq[..2], &tri, 5).is_err());
    }

    #[test]
    fn delta_instance_requires_consistent_bijection() {
        let tri = motif("k=3; 0>1, 1>2, 2>0");
        // third edge returns to the wrong node
        let seq = [(1u64, 2u64, 1i64), (2, 3, 2), (3, 2, 3)];
        assert!(!is_delta_instance(&seq, &tri, 10).unwrap());
        // two slots bound to one node
        let squashed = [(1u64, 2u64, 1i64), (2, 1, 2), (1, 1, 3)];
        assert!(is_delta_instance(&squashed, &tri, 10).is_err() == false);
        assert!(!is_delta_instance(&squashed, &tri, 10).unwrap());
    }

    #[test]
    fn delta_instance_invariant_under_renaming() {
        let m = motif("k=3; 0>1, 1>0, 1>2");
        let seq = [(5u64, 9u64, 100i64), (9, 5, 101), (9, 2, 105)];
        let renamed = [(50u64, 90u64, 100i64), (90, 50, 101), (90, 20, 105)];
        assert_eq!(
            is_delta_instance(&seq, &m, 10).unwrap(),
            is_delta_instance(&renamed, &m, 10).unwrap()
        );
        assert!(is_delta_instance(&seq, &m, 10).unwrap());
    }

    #[test]
    fn delta_flip_below_span() {
        let m = motif("k=2; 0>1, 0>1, 0>1");
        let seq = [(1u64, 2u64, 0i64), (1, 2, 4), (1, 2, 9)];
        assert!(is_delta_instance(&seq, &m, 9).unwrap());
        assert!(!is_delta_instance(&seq, &m, 8).unwrap());
    }

    #[test]
    fn literal_round_trip() {
        let m = motif("k=3; 0>1, 1>2, 2>0");
        let text = m.to_string();
        assert_eq!(text, "k=3; 0>1, 1>2, 2>0");
        let again: TemporalMotif = text.parse().unwrap();
        assert_eq!(m, again);
    }

    #[test]
    fn invalid_motifs_rejected() {
        assert!("k=3; 0>1, 1>0".parse::<TemporalMotif>().is_err()); // slot 2 isolated
        assert!("k=2; 0>0".parse::<TemporalMotif>().is_err()); // self edge
        assert!("k=2; 0>5".parse::<TemporalMotif>().is_err()); // out of range
        assert!("k=1; 0>1".parse::<TemporalMotif>().is_err());
    }

    #[test]
    fn labels_parse_and_print() {
        let l: MotifLabel = "C3".parse().unwrap();
        assert_eq!(l, MotifLabel::new(2, 3).unwrap());
        assert_eq!(l.to_string(), "C3");
        assert!("G1".parse::<MotifLabel>().is_err());
        assert!("A7".parse::<MotifLabel>().is_err());
        assert!("A".parse::<MotifLabel>().is_err());
    }
}
