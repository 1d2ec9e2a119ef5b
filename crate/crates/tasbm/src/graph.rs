//! Timestamped edge lists: parsing, preprocessing, and slicing into
//! analysis windows.
//!
//! A temporal graph is a multiset of directed edges `(src, dst, t)` over a
//! contiguous node-id range `0..n`. Edges are kept sorted by timestamp with
//! ties broken by input order, so every downstream computation is
//! deterministic. Graphs are immutable once built.

use std::collections::HashMap;
use std::io::{BufRead, Write};

use crate::error::{Error, Result};

pub type NodeId = u32;
pub type Timestamp = i64;

/// A directed edge active at a single instant.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct TemporalEdge {
    pub src: NodeId,
    pub dst: NodeId,
    pub t: Timestamp,
}

impl TemporalEdge {
    pub fn new(src: NodeId, dst: NodeId, t: Timestamp) -> Self {
        TemporalEdge { src, dst, t }
    }
}

/// Time-sorted multiset of directed timestamped edges over nodes `0..n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TemporalGraph {
    n: usize,
    edges: Vec<TemporalEdge>,
}

/// Result of parsing an edge list: the compacted graph plus the map from
/// compact id back to the id that appeared in the input.
#[derive(Debug, Clone)]
pub struct ParsedGraph {
    pub graph: TemporalGraph,
    /// `original_ids[c]` is the input id of compact node `c`, in
    /// first-appearance order.
    pub original_ids: Vec<u64>,
}

/// Half-open analysis window `[start, start + len)` over a borrowed,
/// contiguous slice of the parent graph's edge sequence.
#[derive(Debug, Clone, Copy)]
pub struct WindowView<'a> {
    pub start: Timestamp,
    pub len: u64,
    edges: &'a [TemporalEdge],
    n: usize,
}

impl<'a> WindowView<'a> {
    pub fn edges(&self) -> &'a [TemporalEdge] {
        self.edges
    }

    pub fn end(&self) -> Timestamp {
        self.start + self.len as Timestamp
    }

    /// Node count of the parent graph (windows share the node set).
    pub fn node_count(&self) -> usize {
        self.n
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }
}

/// Day-of-week mask: calendar days flagged here are excised from the time
/// axis before windowing, so window lengths count only unmasked time.
/// Edges falling on masked days are dropped.
#[derive(Debug, Clone)]
pub struct DayMask {
    /// Length of one day in the graph's time units.
    pub day_len: u64,
    /// Timestamp at which day-of-week 0 begins.
    pub epoch: Timestamp,
    /// `masked[d]` marks day-of-week `d` for removal.
    pub masked: [bool; 7],
}

impl DayMask {
    pub fn new(day_len: u64, epoch: Timestamp, masked_days: &[usize]) -> Result<Self> {
        if day_len == 0 {
            return Err(Error::InvalidArgument("day length must be positive".into()));
        }
        let mut masked = [false; 7];
        for &d in masked_days {
            if d > 6 {
                return Err(Error::InvalidArgument(format!(
                    "day-of-week index {d} out of range 0..=6"
                )));
            }
            masked[d] = true;
        }
        Ok(DayMask {
            day_len,
            epoch,
            masked,
        })
    }

    fn day_of_week(&self, t: Timestamp) -> usize {
        let rel = t - self.epoch;
        let day = rel.div_euclid(self.day_len as i64);
        day.rem_euclid(7) as usize
    }

    /// Maps a timestamp to the excised axis: the amount of unmasked time
    /// between the epoch and `t`. Only meaningful for `t` on an unmasked day.
    fn excised(&self, t: Timestamp) -> Timestamp {
        let rel = t - self.epoch;
        let day = rel.div_euclid(self.day_len as i64);
        let within = rel.rem_euclid(self.day_len as i64);
        let weeks = day.div_euclid(7);
        let day_in_week = day.rem_euclid(7) as usize;
        let unmasked_per_week = self.masked.iter().filter(|&&m| !m).count() as i64;
        let mut whole_days = weeks * unmasked_per_week;
        for d in 0..day_in_week {
            if !self.masked[d] {
                whole_days += 1;
            }
        }
        whole_days * self.day_len as i64 + within
    }
}

impl TemporalGraph {
    /// Builds a graph from an edge list, sorting by timestamp (stable, so
    /// equal timestamps keep their input order). Every endpoint must be
    /// below `n`.
    pub fn from_edges(n: usize, mut edges: Vec<TemporalEdge>) -> Result<Self> {
        for e in &edges {
            if e.src as usize >= n || e.dst as usize >= n {
                return Err(Error::InvalidArgument(format!(
                    "edge ({}, {}) outside node range 0..{}",
                    e.src, e.dst, n
                )));
            }
        }
        edges.sort_by_key(|e| e.t);
        Ok(TemporalGraph { n, edges })
    }

    pub fn node_count(&self) -> usize {
        self.n
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[TemporalEdge] {
        &self.edges
    }

    /// `(t_min, t_max)` over the stored edges; `None` when empty.
    pub fn time_span(&self) -> Option<(Timestamp, Timestamp)> {
        if self.edges.is_empty() {
            None
        } else {
            Some((self.edges[0].t, self.edges[self.edges.len() - 1].t))
        }
    }

    /// A view of the whole graph as a single window spanning its edges.
    pub fn full_window(&self) -> WindowView<'_> {
        let (start, len) = match self.time_span() {
            Some((lo, hi)) => (lo, (hi - lo) as u64 + 1),
            None => (0, 1),
        };
        WindowView {
            start,
            len,
            edges: &self.edges,
            n: self.n,
        }
    }

    /// Parses the plain-text edge-list format: one `src dst t` triple per
    /// line, whitespace separated, `#` starting a comment line. Node ids are
    /// compacted to `0..n` in first-appearance order; the returned map
    /// recovers the input ids.
    pub fn parse_edge_list<R: BufRead>(reader: R) -> Result<ParsedGraph> {
        let mut ids: HashMap<u64, NodeId> = HashMap::new();
        let mut original_ids: Vec<u64> = Vec::new();
        let mut edges: Vec<TemporalEdge> = Vec::new();
        let mut compact = |raw: u64, original_ids: &mut Vec<u64>| -> NodeId {
            *ids.entry(raw).or_insert_with(|| {
                let id = original_ids.len() as NodeId;
                original_ids.push(raw);
                id
            })
        };
        for (lineno, line) in reader.lines().enumerate() {
            let line = line?;
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let mut parts = line.split_whitespace();
            let err = |msg: &str| Error::Parse {
                line: lineno + 1,
                msg: msg.to_string(),
            };
            let src: u64 = parts
                .next()
                .ok_or_else(|| err("missing source node"))?
                .parse()
                .map_err(|_| err("source node is not a non-negative integer"))?;
            let dst: u64 = parts
                .next()
                .ok_or_else(|| err("missing destination node"))?
                .parse()
                .map_err(|_| err("destination node is not a non-negative integer"))?;
            let t: i64 = parts
                .next()
                .ok_or_else(|| err("missing timestamp"))?
                .parse()
                .map_err(|_| err("timestamp is not an integer"))?;
            if parts.next().is_some() {
                return Err(err("trailing fields after src dst t"));
            }
            if t < 0 {
                return Err(err("negative timestamp"));
            }
            let src = compact(src, &mut original_ids);
            let dst = compact(dst, &mut original_ids);
            edges.push(TemporalEdge::new(src, dst, t));
        }
        let n = original_ids.len();
        Ok(ParsedGraph {
            graph: TemporalGraph::from_edges(n, edges)?,
            original_ids,
        })
    }

    /// Writes the canonical edge-list form: timestamp-sorted `src dst t`
    /// lines with compact ids.
    pub fn write_edge_list<W: Write>(&self, mut w: W) -> Result<()> {
        for e in &self.edges {
            writeln!(w, "{} {} {}", e.src, e.dst, e.t)?;
        }
        Ok(())
    }

    /// Drops self-loops, removes nodes whose total (in + out) incidence
    /// count over the full span falls below `degree_fraction` times the
    /// maximum such count, and optionally keeps only the largest weakly
    /// connected component of the induced static graph. Surviving nodes are
    /// re-compacted; `kept_nodes[new]` gives the old id.
    pub fn preprocess(&self, degree_fraction: f64, keep_largest_component: bool) -> Preprocessed {
        let no_loops: Vec<TemporalEdge> = self
            .edges
            .iter()
            .copied()
            .filter(|e| e.src != e.dst)
            .collect();

        let mut degree = vec![0u64; self.n];
        for e in &no_loops {
            degree[e.src as usize] += 1;
            degree[e.dst as usize] += 1;
        }
        let max_degree = degree.iter().copied().max().unwrap_or(0);
        let threshold = degree_fraction * max_degree as f64;
        let mut keep: Vec<bool> = degree.iter().map(|&d| d as f64 >= threshold).collect();

        if keep_largest_component {
            let comp = largest_weak_component(self.n, &no_loops, &keep);
            for (i, k) in keep.iter_mut().enumerate() {
                *k = *k && comp[i];
            }
        }

        let mut remap = vec![NodeId::MAX; self.n];
        let mut kept_nodes = Vec::new();
        for (old, &k) in keep.iter().enumerate() {
            if k {
                remap[old] = kept_nodes.len() as NodeId;
                kept_nodes.push(old as NodeId);
            }
        }
        let edges: Vec<TemporalEdge> = no_loops
            .into_iter()
            .filter(|e| keep[e.src as usize] && keep[e.dst as usize])
            .map(|e| TemporalEdge::new(remap[e.src as usize], remap[e.dst as usize], e.t))
            .collect();
        Preprocessed {
            graph: TemporalGraph {
                n: kept_nodes.len(),
                edges,
            },
            kept_nodes,
        }
    }

    /// Slices the span into consecutive half-open windows
    /// `[origin + i*len, origin + (i+1)*len)`. The origin fixes the phase:
    /// windows extend backwards as well, so every edge lands in exactly one
    /// window whatever origin inside the span is chosen.
    pub fn window_slices(&self, len: u64, origin: Timestamp) -> Result<Vec<WindowView<'_>>> {
        if len == 0 {
            return Err(Error::InvalidArgument(
                "window length must be positive".into(),
            ));
        }
        let Some((t_min, t_max)) = self.time_span() else {
            return Ok(Vec::new());
        };
        let len_i = len as i64;
        let i_min = (t_min - origin).div_euclid(len_i);
        let i_max = (t_max - origin).div_euclid(len_i);
        let mut out = Vec::with_capacity((i_max - i_min + 1) as usize);
        let mut lo = 0usize;
        for i in i_min..=i_max {
            let start = origin + i * len_i;
            let end = start + len_i;
            let mut hi = lo;
            while hi < self.edges.len() && self.edges[hi].t < end {
                hi += 1;
            }
            out.push(WindowView {
                start,
                len,
                edges: &self.edges[lo..hi],
                n: self.n,
            });
            lo = hi;
        }
        Ok(out)
    }

    /// Removes masked calendar days from the time axis: edges on masked days
    /// are dropped and remaining timestamps are shifted down by the excised
    /// time, so windows cut on the result count only unmasked time.
    pub fn excise_days(&self, mask: &DayMask) -> TemporalGraph {
        let edges: Vec<TemporalEdge> = self
            .edges
            .iter()
            .filter(|e| !mask.masked[mask.day_of_week(e.t)])
            .map(|e| TemporalEdge::new(e.src, e.dst, mask.excised(e.t)))
            .collect();
        TemporalGraph {
            n: self.n,
            edges,
        }
    }
}

/// Output of [`TemporalGraph::preprocess`].
#[derive(Debug, Clone)]
pub struct Preprocessed {
    pub graph: TemporalGraph,
    /// `kept_nodes[new]` is the pre-preprocessing id of node `new`.
    pub kept_nodes: Vec<NodeId>,
}

/// Marks the largest weakly connected component among nodes with `keep`
/// set, ignoring edges touching dropped nodes.
fn largest_weak_component(n: usize, edges: &[TemporalEdge], keep: &[bool]) -> Vec<bool> {
    let mut adj: Vec<Vec<NodeId>> = vec![Vec::new(); n];
    for e in edges {
        if keep[e.src as usize] && keep[e.dst as usize] && e.src != e.dst {
            adj[e.src as usize].push(e.dst);
            adj[e.dst as usize].push(e.src);
        }
    }
    let mut comp = vec![usize::MAX; n];
    let mut sizes: Vec<usize> = Vec::new();
    let mut stack = Vec::new();
    for s in 0..n {
        if !keep[s] || comp[s] != usize::MAX {
            continue;
        }
        let c = sizes.len();
        sizes.push(0);
        comp[s] = c;
        stack.push(s);
        while let Some(v) = stack.pop() {
            sizes[c] += 1;
            for &w in &adj[v] {
                if comp[w as usize] == usize::MAX {
                    comp[w as usize] = c;
                    stack.push(w as usize);
                }
            }
        }
    }
    let best = (0..sizes.len()).max_by_key(|&c| sizes[c]);
    (0..n)
        .map(|v| keep[v] && best.is_some_and(|b| comp[v] == b))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::io::Cursor;

    fn parse(s: &str) -> ParsedGraph {
        TemporalGraph::parse_edge_list(Cursor::new(s)).unwrap()
    }

    #[test]
    fn parse_empty_stream() {
        let p = parse("");
        assert_eq!(p.graph.node_count(), 0);
        assert_eq!(p.graph.edge_count(), 0);
    }

    #[test]
    fn parse_sorts_by_timestamp() {
        let p = parse("0 1 5\n1 2 3\n");
        assert_eq!(p.graph.node_count(), 3);
        assert_eq!(p.graph.edge_count(), 2);
        assert_eq!(
            p.graph.edges(),
            &[TemporalEdge::new(1, 2, 3), TemporalEdge::new(0, 1, 5)]
        );
    }

    #[test]
    fn parse_keeps_duplicates_in_stable_order() {
        let p = parse("0 1 7\n2 3 7\n0 1 7\n");
        assert_eq!(p.graph.edge_count(), 3);
        assert_eq!(
            p.graph.edges(),
            &[
                TemporalEdge::new(0, 1, 7),
                TemporalEdge::new(2, 3, 7),
                TemporalEdge::new(0, 1, 7)
            ]
        );
    }

    #[test]
    fn parse_compacts_by_first_appearance() {
        let p = parse("# comment\n100 7 1\n7 100 2\n42 100 0\n");
        assert_eq!(p.original_ids, vec![100, 7, 42]);
        assert_eq!(p.graph.edges()[0], TemporalEdge::new(2, 0, 0));
    }

    #[test]
    fn parse_rejects_malformed_lines() {
        let err = TemporalGraph::parse_edge_list(Cursor::new("0 1\n")).unwrap_err();
        match err {
            Error::Parse { line, .. } => assert_eq!(line, 1),
            other => panic!("unexpected error {other:?}"),
        }
        let err = TemporalGraph::parse_edge_list(Cursor::new("0 1 2\n3 x 4\n")).unwrap_err();
        match err {
            Error::Parse { line, .. } => assert_eq!(line, 2),
            other => panic!("unexpected error {other:?}"),
        }
        assert!(TemporalGraph::parse_edge_list(Cursor::new("0 1 -5\n")).is_err());
    }

    #[test]
    fn round_trip_is_canonical() {
        let p = parse("0 1 9\n1 2 4\n0 2 4\n");
        let mut buf = Vec::new();
        p.graph.write_edge_list(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert_eq!(text, "1 2 4\n0 2 4\n0 1 9\n");
        // one parse reaches the canonical form: a second round trip is a
        // byte-level fixpoint
        let once = parse(&text);
        let mut canon = Vec::new();
        once.graph.write_edge_list(&mut canon).unwrap();
        let twice = parse(std::str::from_utf8(&canon).unwrap());
        let mut canon2 = Vec::new();
        twice.graph.write_edge_list(&mut canon2).unwrap();
        assert_eq!(canon, canon2);
    }

    #[test]
    fn preprocess_degree_threshold_star() {
        // hub 0 with 100 leaves, each leaf degree 1, hub degree 100
        let mut edges = Vec::new();
        for leaf in 1..=100u32 {
            edges.push(TemporalEdge::new(0, leaf, leaf as i64));
        }
        // a clique-ish tail so some nodes reach degree >= 10
        for i in 1..=10u32 {
            for j in 1..=10u32 {
                if i != j {
                    edges.push(TemporalEdge::new(i, j, 1000 + (i * 13 + j) as i64));
                }
            }
        }
        let g = TemporalGraph::from_edges(101, edges).unwrap();
        let pre = g.preprocess(0.1, false);
        // nodes 1..=10 have degree 1 + 18 = 19 >= 11.9; leaves 11.. have 1
        assert!(pre.kept_nodes.contains(&0));
        for v in 1..=10u32 {
            assert!(pre.kept_nodes.contains(&v));
        }
        for v in 11..=100u32 {
            assert!(!pre.kept_nodes.contains(&v));
        }
        // only edges among kept nodes remain
        for e in pre.graph.edges() {
            assert!((e.src as usize) < pre.graph.node_count());
            assert!((e.dst as usize) < pre.graph.node_count());
        }
    }

    #[test]
    fn preprocess_identity_except_self_loops() {
        let g = TemporalGraph::from_edges(
            3,
            vec![
                TemporalEdge::new(0, 1, 1),
                TemporalEdge::new(2, 2, 2),
                TemporalEdge::new(1, 2, 3),
            ],
        )
        .unwrap();
        let pre = g.preprocess(0.0, false);
        assert_eq!(pre.graph.node_count(), 3);
        assert_eq!(pre.graph.edge_count(), 2);
        assert!(pre.graph.edges().iter().all(|e| e.src != e.dst));
    }

    #[test]
    fn preprocess_largest_component() {
        // components {0..4} (5 nodes) and {5..7} (3 nodes)
        let edges = vec![
            TemporalEdge::new(0, 1, 1),
            TemporalEdge::new(1, 2, 2),
            TemporalEdge::new(2, 3, 3),
            TemporalEdge::new(3, 4, 4),
            TemporalEdge::new(5, 6, 5),
            TemporalEdge::new(6, 7, 6),
        ];
        let g = TemporalGraph::from_edges(8, edges).unwrap();
        let pre = g.preprocess(0.0, true);
        assert_eq!(pre.kept_nodes, vec![0, 1, 2, 3, 4]);
        assert_eq!(pre.graph.edge_count(), 4);
    }

    #[test]
    fn windows_cover_span() {
        let edges: Vec<TemporalEdge> = (0..100)
            .map(|t| TemporalEdge::new(0, 1, t))
            .collect();
        let g = TemporalGraph::from_edges(2, edges).unwrap();
        let ws = g.window_slices(25, 0).unwrap();
        assert_eq!(ws.len(), 4);
        for w in &ws {
            assert_eq!(w.edge_count(), 25);
        }
    }

    #[test]
    fn single_partial_window() {
        let edges: Vec<TemporalEdge> = (0..10).map(|t| TemporalEdge::new(0, 1, t)).collect();
        let g = TemporalGraph::from_edges(2, edges).unwrap();
        let ws = g.window_slices(25, 0).unwrap();
        assert_eq!(ws.len(), 1);
        assert_eq!(ws[0].edge_count(), 10);
    }

    #[test]
    fn half_open_boundary() {
        let g = TemporalGraph::from_edges(
            2,
            vec![TemporalEdge::new(0, 1, 3), TemporalEdge::new(0, 1, 25)],
        )
        .unwrap();
        let ws = g.window_slices(25, 0).unwrap();
        assert_eq!(ws.len(), 2);
        assert_eq!(ws[0].edges(), &[TemporalEdge::new(0, 1, 3)]);
        assert_eq!(ws[1].edges(), &[TemporalEdge::new(0, 1, 25)]);
    }

    #[test]
    fn windows_partition_for_interior_origin() {
        let edges: Vec<TemporalEdge> = (0..100).map(|t| TemporalEdge::new(0, 1, t)).collect();
        let g = TemporalGraph::from_edges(2, edges).unwrap();
        for origin in [0, 13, 50, 99] {
            let ws = g.window_slices(30, origin).unwrap();
            let total: usize = ws.iter().map(|w| w.edge_count()).sum();
            assert_eq!(total, 100, "origin {origin}");
        }
    }

    #[test]
    fn zero_window_length_rejected() {
        let g = TemporalGraph::from_edges(1, vec![]).unwrap();
        assert!(g.window_slices(0, 0).is_err());
    }

    #[test]
    fn excise_days_drops_and_shifts() {
        // day length 10, week = 70 units; mask days 5 and 6 (t in [50,70))
        let mask = DayMask::new(10, 0, &[5, 6]).unwrap();
        let g = TemporalGraph::from_edges(
            2,
            vec![
                TemporalEdge::new(0, 1, 5),
                TemporalEdge::new(0, 1, 55),  // masked day 5
                TemporalEdge::new(0, 1, 72), // day 0 of week 2
            ],
        )
        .unwrap();
        let ex = g.excise_days(&mask);
        assert_eq!(ex.edge_count(), 2);
        assert_eq!(ex.edges()[0].t, 5);
        // 72 = week 1 day 0 offset 2 -> 5 unmasked days of week 0 + 2
        assert_eq!(ex.edges()[1].t, 52);
    }

    #[test]
    fn preprocess_monotone() {
        let edges = vec![
            TemporalEdge::new(0, 1, 1),
            TemporalEdge::new(1, 2, 2),
            TemporalEdge::new(3, 3, 2),
            TemporalEdge::new(2, 0, 5),
            TemporalEdge::new(3, 0, 7),
        ];
        let g = TemporalGraph::from_edges(4, edges).unwrap();
        let pre = g.preprocess(0.5, true);
        // mapped-back edges must be a sub-multiset of the originals
        for e in pre.graph.edges() {
            let orig = TemporalEdge::new(
                pre.kept_nodes[e.src as usize],
                pre.kept_nodes[e.dst as usize],
                e.t,
            );
            assert!(g.edges().contains(&orig));
        }
        assert!(pre.kept_nodes.iter().all(|&v| (v as usize) < 4));
    }
}
