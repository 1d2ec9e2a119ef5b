//! Exact counting of delta-instances inside a window.
//!
//! Two routes are provided and tested against each other:
//!
//! * [`count_instances`]: brute-force depth-first enumeration for a single
//!   arbitrary motif — each window edge is tried as the first motif edge
//!   and extended over strictly later edges within the delta horizon while
//!   a partial slot-node binding stays consistent.
//! * [`count_all`]: one shared enumeration over the window classifying
//!   every valid 3-edge tuple against a whole catalog of 2-3-node motifs at
//!   once. Tuples are grouped by their node support (a single node pair, a
//!   wedge of two pairs, or a triangle of three pairs), and each support is
//!   swept with a sliding delta window that maintains ordered-pair counts
//!   per (pair, direction) class, so a tuple is never materialized.

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::graph::{NodeId, Timestamp, WindowView};
use crate::motif::{MotifLabel, Slot, TemporalMotif};

/// Exact number of delta-instances of one motif in one window.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CountResult {
    /// Catalog label or motif literal.
    pub motif: String,
    pub window_start: Timestamp,
    pub window_end: Timestamp,
    pub count: u64,
}

impl CountResult {
    /// CSV row `window_start,window_end,motif_label,count`.
    pub fn csv_row(&self) -> String {
        format!(
            "{},{},{},{}",
            self.window_start, self.window_end, self.motif, self.count
        )
    }
}

/// Counts delta-instances of `motif` by depth-first enumeration. Exact and
/// general, but intended for desk-scale windows; the analytics module is
/// the fast path for expectations.
pub fn count_instances(
    window: &WindowView<'_>,
    motif: &TemporalMotif,
    delta: u64,
) -> Result<CountResult> {
    if delta == 0 {
        return Err(Error::InvalidArgument("delta must be positive".into()));
    }
    let edges = window.edges();
    let mut slot_node: Vec<Option<NodeId>> = vec![None; motif.k()];
    let mut node_used: Vec<NodeId> = Vec::with_capacity(motif.k());
    let mut count: u64 = 0;
    for first in 0..edges.len() {
        extend(
            edges,
            motif,
            delta,
            0,
            first,
            edges[first].t,
            &mut slot_node,
            &mut node_used,
            &mut count,
        )?;
    }
    Ok(CountResult {
        motif: motif.to_string(),
        window_start: window.start,
        window_end: window.end(),
        count,
    })
}

#[allow(clippy::too_many_arguments)]
fn extend(
    edges: &[crate::graph::TemporalEdge],
    motif: &TemporalMotif,
    delta: u64,
    pos: usize,
    idx: usize,
    t_first: Timestamp,
    slot_node: &mut [Option<NodeId>],
    node_used: &mut Vec<NodeId>,
    count: &mut u64,
) -> Result<()> {
    let e = edges[idx];
    let (s, d) = motif.edges()[pos];
    let Some(undo_s) = bind(slot_node, node_used, s, e.src) else {
        return Ok(());
    };
    let Some(undo_d) = bind(slot_node, node_used, d, e.dst) else {
        unbind(slot_node, node_used, s, undo_s);
        return Ok(());
    };
    if pos + 1 == motif.z() {
        *count = count.checked_add(1).ok_or(Error::CountOverflow)?;
    } else {
        let horizon = t_first + delta as Timestamp;
        for next in idx + 1..edges.len() {
            if edges[next].t > horizon {
                break;
            }
            if edges[next].t <= e.t {
                continue; // strict temporal ordering
            }
            extend(
                edges, motif, delta, pos + 1, next, t_first, slot_node, node_used, count,
            )?;
        }
    }
    unbind(slot_node, node_used, d, undo_d);
    unbind(slot_node, node_used, s, undo_s);
    Ok(())
}

/// Binds `slot` to `node` if consistent. Returns `Some(fresh)` on success,
/// where `fresh` records whether the binding must be undone later.
fn bind(
    slot_node: &mut [Option<NodeId>],
    node_used: &mut Vec<NodeId>,
    slot: Slot,
    node: NodeId,
) -> Option<bool> {
    match slot_node[slot as usize] {
        Some(existing) if existing == node => Some(false),
        Some(_) => None,
        None => {
            if node_used.contains(&node) {
                return None;
            }
            slot_node[slot as usize] = Some(node);
            node_used.push(node);
            Some(true)
        }
    }
}

fn unbind(slot_node: &mut [Option<NodeId>], node_used: &mut Vec<NodeId>, slot: Slot, fresh: bool) {
    if fresh {
        let node = slot_node[slot as usize].take().unwrap();
        let pos = node_used.iter().rposition(|&n| n == node).unwrap();
        node_used.remove(pos);
    }
}

// ---------------------------------------------------------------------------
// Shared-pass catalog counting
// ---------------------------------------------------------------------------

const SKIP: u16 = u16::MAX;
const MAX_CLASSES: usize = 6;

/// Sliding delta-window over one support's event list, maintaining per-class
/// counts and strictly-ordered pair counts. Events enter and leave in groups
/// of equal timestamps so that ties never count as ordered.
struct PairWindow {
    nc: usize,
    cnt: [u64; MAX_CLASSES],
    ord: [u64; MAX_CLASSES * MAX_CLASSES],
}

impl PairWindow {
    fn new(nc: usize) -> Self {
        PairWindow {
            nc,
            cnt: [0; MAX_CLASSES],
            ord: [0; MAX_CLASSES * MAX_CLASSES],
        }
    }

    fn insert_group(&mut self, classes: &[u8]) {
        let mut bc = [0u64; MAX_CLASSES];
        for &c in classes {
            bc[c as usize] += 1;
        }
        for c1 in 0..self.nc {
            if self.cnt[c1] == 0 {
                continue;
            }
            for (c2, &b) in bc.iter().enumerate().take(self.nc) {
                self.ord[c1 * self.nc + c2] += self.cnt[c1] * b;
            }
        }
        for c in 0..self.nc {
            self.cnt[c] += bc[c];
        }
    }

    fn remove_front_group(&mut self, classes: &[u8]) {
        let mut bc = [0u64; MAX_CLASSES];
        for &c in classes {
            bc[c as usize] += 1;
        }
        for c in 0..self.nc {
            self.cnt[c] -= bc[c];
        }
        for (c1, &b) in bc.iter().enumerate().take(self.nc) {
            if b == 0 {
                continue;
            }
            for c2 in 0..self.nc {
                self.ord[c1 * self.nc + c2] -= b * self.cnt[c2];
            }
        }
    }
}

/// Sweeps one support: for every event as first tuple edge, tuples are
/// completed by strictly-ordered event pairs inside `(t, t + delta]`, and
/// each (class, class, class) pattern is routed to a motif bucket via `map`.
fn sweep_support(
    events: &[(Timestamp, u8)],
    nc: usize,
    delta: u64,
    map: &[u16],
    counts: &mut [u64],
) -> Result<()> {
    debug_assert_eq!(map.len(), nc * nc * nc);
    let len = events.len();
    if len < 3 {
        return Ok(());
    }
    let mut win = PairWindow::new(nc);
    let mut front = 0usize;
    let mut back = 0usize;
    let mut scratch: Vec<u8> = Vec::with_capacity(8);
    let mut i = 0usize;
    while i < len {
        let ti = events[i].0;
        let horizon = ti + delta as Timestamp;
        while back < len && events[back].0 <= horizon {
            let t = events[back].0;
            scratch.clear();
            while back < len && events[back].0 == t {
                scratch.push(events[back].1);
                back += 1;
            }
            win.insert_group(&scratch);
        }
        while front < back && events[front].0 <= ti {
            let t = events[front].0;
            scratch.clear();
            while front < back && events[front].0 == t {
                scratch.push(events[front].1);
                front += 1;
            }
            win.remove_front_group(&scratch);
        }
        // all events sharing t_i act as first edges over the same window
        let group_end = {
            let mut j = i;
            while j < len && events[j].0 == ti {
                j += 1;
            }
            j
        };
        for &(_, c1) in &events[i..group_end] {
            let base = c1 as usize * nc * nc;
            for rest in 0..nc * nc {
                let m = map[base + rest];
                if m != SKIP {
                    let add = win.ord[rest];
                    if add != 0 {
                        counts[m as usize] =
                            counts[m as usize].checked_add(add).ok_or(Error::CountOverflow)?;
                    }
                }
            }
        }
        i = group_end;
    }
    Ok(())
}

/// Pattern tables routing (class, class, class) tuples to catalog indices.
struct PatternMaps {
    pair: Vec<u16>,
    /// Indexed by the shared node's rank among the wedge's sorted nodes.
    wedge: [Vec<u16>; 3],
    triangle: Vec<u16>,
}

fn build_maps(canon_index: &HashMap<Vec<(Slot, Slot)>, u16>) -> PatternMaps {
    let lookup = |k: usize, edges: Vec<(Slot, Slot)>| -> u16 {
        match TemporalMotif::new(k, edges) {
            Ok(m) => *canon_index.get(&m.canonical_edges()).unwrap_or(&SKIP),
            Err(_) => SKIP,
        }
    };

    // single pair: slots 0 < 1, class = direction (0 = low to high)
    let pair_edge = |c: u8| -> (Slot, Slot) {
        if c == 0 {
            (0, 1)
        } else {
            (1, 0)
        }
    };
    let mut pair = vec![SKIP; 8];
    for c1 in 0..2u8 {
        for c2 in 0..2u8 {
            for c3 in 0..2u8 {
                let idx = (c1 as usize * 2 + c2 as usize) * 2 + c3 as usize;
                pair[idx] = lookup(2, vec![pair_edge(c1), pair_edge(c2), pair_edge(c3)]);
            }
        }
    }

    // wedge: nodes sorted into slots 0 < 1 < 2; the two pairs depend on the
    // shared node's rank. class = pair_role * 2 + dir (dir 0 = low to high).
    let wedge_pairs_by_rank: [[(Slot, Slot); 2]; 3] = [
        [(0, 1), (0, 2)], // shared node is the smallest
        [(0, 1), (1, 2)], // shared node is the middle
        [(0, 2), (1, 2)], // shared node is the largest
    ];
    let wedge = std::array::from_fn(|rank| {
        let pairs = wedge_pairs_by_rank[rank];
        let edge = |c: u8| -> (Slot, Slot) {
            let (lo, hi) = pairs[(c / 2) as usize];
            if c % 2 == 0 {
                (lo, hi)
            } else {
                (hi, lo)
            }
        };
        let mut map = vec![SKIP; 64];
        for c1 in 0..4u8 {
            for c2 in 0..4u8 {
                for c3 in 0..4u8 {
                    let roles = [c1 / 2, c2 / 2, c3 / 2];
                    let from_first = roles.iter().filter(|&&r| r == 0).count();
                    // exactly two edges on one pair and one on the other;
                    // pure single-pair tuples belong to the pair sweep
                    if from_first == 0 || from_first == 3 {
                        continue;
                    }
                    let idx = (c1 as usize * 4 + c2 as usize) * 4 + c3 as usize;
                    map[idx] = lookup(3, vec![edge(c1), edge(c2), edge(c3)]);
                }
            }
        }
        map
    });

    // triangle: nodes sorted into slots 0 < 1 < 2, pair_role 0 = {0,1},
    // 1 = {0,2}, 2 = {1,2}; class = pair_role * 2 + dir.
    let tri_pairs: [(Slot, Slot); 3] = [(0, 1), (0, 2), (1, 2)];
    let tri_edge = |c: u8| -> (Slot, Slot) {
        let (lo, hi) = tri_pairs[(c / 2) as usize];
        if c % 2 == 0 {
            (lo, hi)
        } else {
            (hi, lo)
        }
    };
    let mut triangle = vec![SKIP; 216];
    for c1 in 0..6u8 {
        for c2 in 0..6u8 {
            for c3 in 0..6u8 {
                let mut roles = [c1 / 2, c2 / 2, c3 / 2];
                roles.sort_unstable();
                if roles != [0, 1, 2] {
                    continue; // one edge per pair; others belong elsewhere
                }
                let idx = (c1 as usize * 6 + c2 as usize) * 6 + c3 as usize;
                triangle[idx] = lookup(3, vec![tri_edge(c1), tri_edge(c2), tri_edge(c3)]);
            }
        }
    }

    PatternMaps {
        pair,
        wedge,
        triangle,
    }
}

/// Counts delta-instances of every catalog motif in one shared pass.
/// All motifs must have z = 3 and k <= 3; the result order matches the
/// input catalog order and is identical to independent [`count_instances`]
/// calls per motif.
pub fn count_all(
    window: &WindowView<'_>,
    catalog: &[(MotifLabel, TemporalMotif)],
    delta: u64,
) -> Result<Vec<CountResult>> {
    if delta == 0 {
        return Err(Error::InvalidArgument("delta must be positive".into()));
    }
    let mut canon_index: HashMap<Vec<(Slot, Slot)>, u16> = HashMap::new();
    for (i, (label, m)) in catalog.iter().enumerate() {
        if m.z() != 3 || m.k() > 3 {
            return Err(Error::InvalidArgument(format!(
                "shared-pass counting needs k <= 3, z = 3 motifs; {label} has k={} z={}",
                m.k(),
                m.z()
            )));
        }
        if canon_index.insert(m.canonical_edges(), i as u16).is_some() {
            return Err(Error::InvalidArgument(format!(
                "catalog motif {label} duplicates an earlier entry"
            )));
        }
    }
    let maps = build_maps(&canon_index);
    let mut counts = vec![0u64; catalog.len()];

    // group window edges by unordered node pair
    let mut pair_index: HashMap<(NodeId, NodeId), u32> = HashMap::new();
    let mut pair_nodes: Vec<(NodeId, NodeId)> = Vec::new();
    let mut pair_events: Vec<Vec<(Timestamp, u8)>> = Vec::new();
    for e in window.edges() {
        if e.src == e.dst {
            continue; // self loops never match a motif (slots are distinct)
        }
        let (lo, hi) = if e.src < e.dst {
            (e.src, e.dst)
        } else {
            (e.dst, e.src)
        };
        let dir = u8::from(e.src != lo);
        let idx = *pair_index.entry((lo, hi)).or_insert_with(|| {
            pair_nodes.push((lo, hi));
            pair_events.push(Vec::new());
            (pair_nodes.len() - 1) as u32
        });
        pair_events[idx as usize].push((e.t, dir));
    }

    // pair supports
    for events in &pair_events {
        sweep_support(events, 2, delta, &maps.pair, &mut counts)?;
    }

    // adjacency over present pairs, sorted by neighbor id
    let n = window.node_count();
    let mut adj: Vec<Vec<(NodeId, u32)>> = vec![Vec::new(); n];
    for (idx, &(lo, hi)) in pair_nodes.iter().enumerate() {
        adj[lo as usize].push((hi, idx as u32));
        adj[hi as usize].push((lo, idx as u32));
    }
    for list in &mut adj {
        list.sort_unstable();
    }

    let mut events: Vec<(Timestamp, u8)> = Vec::new();

    // wedge supports: shared node m with two distinct incident pairs
    for m in 0..n {
        let nbrs = &adj[m];
        for a in 0..nbrs.len() {
            let (x, px) = nbrs[a];
            let lx = &pair_events[px as usize];
            for &(y, py) in &nbrs[a + 1..] {
                let ly = &pair_events[py as usize];
                if lx.len() + ly.len() < 3 || (lx.len() < 2 && ly.len() < 2) {
                    continue;
                }
                // rank of the shared node among {x, m, y}; x < y by sort order
                let m = m as NodeId;
                let rank = if m < x {
                    0
                } else if m < y {
                    1
                } else {
                    2
                };
                // pair_role 0 must be the slot pair listed first in the map;
                // with nodes sorted, {x,m} precedes {y,m} exactly when x < y,
                // which the neighbor ordering guarantees
                merge_classified(lx, 0, ly, 1, &mut events);
                sweep_support(&events, 4, delta, &maps.wedge[rank], &mut counts)?;
            }
        }
    }

    // triangle supports: three mutually present pairs
    for u in 0..n {
        let u_id = u as NodeId;
        for &(v, puv) in &adj[u] {
            if v <= u_id {
                continue;
            }
            // two-pointer intersection over w > v
            let (au, av) = (&adj[u], &adj[v as usize]);
            let mut iu = au.partition_point(|&(w, _)| w <= v);
            let mut iv = av.partition_point(|&(w, _)| w <= v);
            while iu < au.len() && iv < av.len() {
                let (wu, puw) = au[iu];
                let (wv, pvw) = av[iv];
                match wu.cmp(&wv) {
                    std::cmp::Ordering::Less => iu += 1,
                    std::cmp::Ordering::Greater => iv += 1,
                    std::cmp::Ordering::Equal => {
                        let (l_uv, l_uw, l_vw) = (
                            &pair_events[puv as usize],
                            &pair_events[puw as usize],
                            &pair_events[pvw as usize],
                        );
                        merge_classified3(l_uv, l_uw, l_vw, &mut events);
                        sweep_support(&events, 6, delta, &maps.triangle, &mut counts)?;
                        iu += 1;
                        iv += 1;
                    }
                }
            }
        }
    }

    Ok(catalog
        .iter()
        .zip(counts)
        .map(|((label, _), count)| CountResult {
            motif: label.to_string(),
            window_start: window.start,
            window_end: window.end(),
            count,
        })
        .collect())
}

/// Merges two time-sorted pair lists, tagging classes `role*2 + dir`.
/// Equal timestamps keep list-1-first order; ties are neutralized inside
/// the sweep, so only determinism matters here.
fn merge_classified(
    l1: &[(Timestamp, u8)],
    role1: u8,
    l2: &[(Timestamp, u8)],
    role2: u8,
    out: &mut Vec<(Timestamp, u8)>,
) {
    out.clear();
    out.reserve(l1.len() + l2.len());
    let (mut i, mut j) = (0, 0);
    while i < l1.len() || j < l2.len() {
        let take_first = j >= l2.len() || (i < l1.len() && l1[i].0 <= l2[j].0);
        if take_first {
            out.push((l1[i].0, role1 * 2 + l1[i].1));
            i += 1;
        } else {
            out.push((l2[j].0, role2 * 2 + l2[j].1));
            j += 1;
        }
    }
}

fn merge_classified3(
    l1: &[(Timestamp, u8)],
    l2: &[(Timestamp, u8)],
    l3: &[(Timestamp, u8)],
    out: &mut Vec<(Timestamp, u8)>,
) {
    out.clear();
    out.reserve(l1.len() + l2.len() + l3.len());
    let lists = [l1, l2, l3];
    let mut idx = [0usize; 3];
    loop {
        let mut best: Option<(Timestamp, usize)> = None;
        for (r, list) in lists.iter().enumerate() {
            if idx[r] < list.len() {
                let t = list[idx[r]].0;
                if best.is_none_or(|(bt, _)| t < bt) {
                    best = Some((t, r));
                }
            }
        }
        let Some((t, r)) = best else { break };
        out.push((t, r as u8 * 2 + lists[r][idx[r]].1));
        idx[r] += 1;
        let _ = t;
    }
}
