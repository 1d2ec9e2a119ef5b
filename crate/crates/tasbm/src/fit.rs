//! TASBM parameter inference.
//!
//! Nodes are assigned per window to an out-activity state and an
//! in-activity state by bucketing their empirical edge rates
//! (degree / window length). The rate matrix theta then holds the expected
//! number of edges per ordered node pair per unit time between every
//! (out-state, in-state) combination.
//!
//! Two fits are provided. The approximate fit uses a single pass over the
//! edges: group totals of out- and in-degrees are known after bucketing,
//! and each out-state's total is split across in-states proportionally to
//! the in-state degree totals. The exact fit makes a second pass to tally
//! the actual per-state-pair edge counts m_rs and sets
//! theta_rs = m_rs / ((n_r * n_s - overlap_rs) * T), where the overlap term
//! removes self-pairs from the ordered-pair count.

use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::graph::{NodeId, TemporalGraph, Timestamp, WindowView};

/// Dense C_out x C_in matrix of non-negative per-pair rates.
#[derive(Debug, Clone, PartialEq)]
pub struct RateMatrix {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

impl RateMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        RateMatrix {
            rows,
            cols,
            data: vec![0.0; rows * cols],
        }
    }

    pub fn from_rows(rows: Vec<Vec<f64>>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::InvalidArgument("ragged rate matrix".into()));
        }
        let data: Vec<f64> = rows.into_iter().flatten().collect();
        if data.iter().any(|v| !v.is_finite() || *v < 0.0) {
            return Err(Error::InvalidArgument(
                "rates must be finite and non-negative".into(),
            ));
        }
        Ok(RateMatrix {
            rows: r,
            cols: c,
            data,
        })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, s: usize) -> f64 {
        self.data[r * self.cols + s]
    }

    pub fn set(&mut self, r: usize, s: usize, v: f64) {
        self.data[r * self.cols + s] = v;
    }

    pub fn scale(&mut self, factor: f64) {
        for v in &mut self.data {
            *v *= factor;
        }
    }

    pub fn values(&self) -> &[f64] {
        &self.data
    }
}

/// Rate thresholds partitioning `[0, inf)` into buckets
/// `[0, b_1), [b_1, b_2), ..., [b_last, inf)`. The same thresholds are
/// applied independently to out-rates and in-rates.
#[derive(Debug, Clone, PartialEq)]
pub struct BucketConfig {
    boundaries: Vec<f64>,
}

impl BucketConfig {
    pub fn new(boundaries: Vec<f64>) -> Result<Self> {
        if boundaries.iter().any(|b| !b.is_finite() || *b <= 0.0) {
            return Err(Error::InvalidArgument(
                "bucket boundaries must be finite and positive".into(),
            ));
        }
        if boundaries.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::InvalidArgument(
                "bucket boundaries must be strictly increasing".into(),
            ));
        }
        Ok(BucketConfig { boundaries })
    }

    /// One bucket covering everything.
    pub fn single() -> Self {
        BucketConfig {
            boundaries: Vec::new(),
        }
    }

    /// Factor-10 boundaries spanning `[1/(n*t_total), max_rate]`: the
    /// default when nothing better is known.
    pub fn log_decades(n: usize, t_total: f64, max_rate: f64) -> Self {
        if n == 0 || t_total <= 0.0 || !max_rate.is_finite() || max_rate <= 0.0 {
            return Self::single();
        }
        let lo = 1.0 / (n as f64 * t_total);
        let mut boundaries = Vec::new();
        let mut b = lo;
        while b <= max_rate && boundaries.len() < 64 {
            boundaries.push(b);
            b *= 10.0;
        }
        BucketConfig { boundaries }
    }

    /// Exactly `buckets` buckets with log-spaced interior boundaries over
    /// `[lo, hi]`.
    pub fn log_spaced(lo: f64, hi: f64, buckets: usize) -> Result<Self> {
        if buckets == 0 {
            return Err(Error::InvalidArgument("need at least one bucket".into()));
        }
        if buckets == 1 {
            return Ok(Self::single());
        }
        if !(lo > 0.0 && hi > lo) {
            return Err(Error::InvalidArgument(
                "log spacing needs 0 < lo < hi".into(),
            ));
        }
        let ratio = hi / lo;
        let boundaries = (1..buckets)
            .map(|i| lo * ratio.powf(i as f64 / buckets as f64))
            .collect();
        Self::new(boundaries)
    }

    pub fn boundaries(&self) -> &[f64] {
        &self.boundaries
    }

    pub fn bucket_count(&self) -> usize {
        self.boundaries.len() + 1
    }

    pub fn bucket_of(&self, rate: f64) -> usize {
        self.boundaries.partition_point(|&b| b <= rate)
    }
}

/// Per-node state assignments backing an exact fit.
#[derive(Debug, Clone)]
pub struct Memberships {
    pub out_of: Vec<u32>,
    pub in_of: Vec<u32>,
    pub c_out: usize,
    pub c_in: usize,
}

/// Fitted per-window model: state structure plus the per-unit-time rate
/// matrix. theta is stored per unit time (the per-window rate divided by
/// T), so downstream integrals are plain products of rate and duration.
#[derive(Debug, Clone, PartialEq)]
pub struct TasbmModel {
    /// Window length in time units.
    pub t: f64,
    /// Bucket boundaries the fit used.
    pub boundaries: Vec<f64>,
    /// C_out x C_in rates per ordered node pair per unit time.
    pub theta: RateMatrix,
    /// Row-major C_out x C_in counts of nodes in out-state r and in-state s.
    pub combined: Vec<u64>,
    /// Empirical state probabilities (member count / n); stored for
    /// completeness, no downstream formula consumes them.
    pub pi_out: Vec<f64>,
    pub pi_in: Vec<f64>,
    /// Member node lists, present when fitted from data.
    pub out_members: Option<Vec<Vec<NodeId>>>,
    pub in_members: Option<Vec<Vec<NodeId>>>,
    /// Number of passes over the edge sequence the fit performed.
    pub edge_passes: u32,
}

impl TasbmModel {
    pub fn c_out(&self) -> usize {
        self.theta.rows()
    }

    pub fn c_in(&self) -> usize {
        self.theta.cols()
    }

    pub fn n(&self) -> u64 {
        self.combined.iter().sum()
    }

    pub fn combined_count(&self, r: usize, s: usize) -> u64 {
        self.combined[r * self.c_in() + s]
    }

    pub fn out_count(&self, r: usize) -> u64 {
        (0..self.c_in()).map(|s| self.combined_count(r, s)).sum()
    }

    pub fn in_count(&self, s: usize) -> u64 {
        (0..self.c_out()).map(|r| self.combined_count(r, s)).sum()
    }

    /// Model assembled from known structure rather than a fit; pi vectors
    /// are derived from the combined counts.
    pub fn from_parts(
        t: f64,
        c_out: usize,
        c_in: usize,
        combined: Vec<u64>,
        theta: RateMatrix,
    ) -> Result<Self> {
        if theta.rows() != c_out || theta.cols() != c_in || combined.len() != c_out * c_in {
            return Err(Error::InvalidArgument(
                "model dimensions do not agree".into(),
            ));
        }
        if t <= 0.0 || !t.is_finite() {
            return Err(Error::InvalidArgument(
                "window length must be positive".into(),
            ));
        }
        let mut model = TasbmModel {
            t,
            boundaries: Vec::new(),
            theta,
            combined,
            pi_out: vec![0.0; c_out],
            pi_in: vec![0.0; c_in],
            out_members: None,
            in_members: None,
            edge_passes: 0,
        };
        let n = model.n() as f64;
        if n > 0.0 {
            for r in 0..c_out {
                model.pi_out[r] = model.out_count(r) as f64 / n;
            }
            for s in 0..c_in {
                model.pi_in[s] = model.in_count(s) as f64 / n;
            }
        }
        Ok(model)
    }

    /// Memberships in the model's own state numbering, available when the
    /// model was fitted from data.
    pub fn memberships(&self) -> Option<Memberships> {
        let out_members = self.out_members.as_ref()?;
        let in_members = self.in_members.as_ref()?;
        let n = self.n() as usize;
        let mut out_of = vec![u32::MAX; n];
        let mut in_of = vec![u32::MAX; n];
        for (r, members) in out_members.iter().enumerate() {
            for &v in members {
                out_of[v as usize] = r as u32;
            }
        }
        for (s, members) in in_members.iter().enumerate() {
            for &v in members {
                in_of[v as usize] = s as u32;
            }
        }
        Some(Memberships {
            out_of,
            in_of,
            c_out: self.c_out(),
            c_in: self.c_in(),
        })
    }
}

/// One-pass approximate fit: tallies per-node degrees, buckets rates,
/// drops empty buckets, and splits each out-state's degree total across
/// in-states in proportion to the in-state totals.
pub fn fit_window_approx(window: &WindowView<'_>, buckets: &BucketConfig) -> Result<TasbmModel> {
    if window.len == 0 {
        return Err(Error::InvalidArgument(
            "window length must be positive".into(),
        ));
    }
    let n = window.node_count();
    let t = window.len as f64;

    let mut out_deg = vec![0u64; n];
    let mut in_deg = vec![0u64; n];
    for e in window.edges() {
        // edge pass 1
        out_deg[e.src as usize] += 1;
        in_deg[e.dst as usize] += 1;
    }

    let assign = |deg: &[u64]| -> (Vec<u32>, Vec<Vec<NodeId>>, Vec<u64>) {
        let mut bucket_ids: Vec<usize> = Vec::with_capacity(n);
        let mut used = vec![false; buckets.bucket_count()];
        for &d in deg {
            let b = buckets.bucket_of(d as f64 / t);
            bucket_ids.push(b);
            used[b] = true;
        }
        // empty buckets are dropped; the survivors keep their rate order
        let mut state_of_bucket = vec![u32::MAX; buckets.bucket_count()];
        let mut states = 0u32;
        for (b, &u) in used.iter().enumerate() {
            if u {
                state_of_bucket[b] = states;
                states += 1;
            }
        }
        let mut members: Vec<Vec<NodeId>> = vec![Vec::new(); states as usize];
        let mut totals: Vec<u64> = vec![0; states as usize];
        let mut of = Vec::with_capacity(n);
        for (v, &b) in bucket_ids.iter().enumerate() {
            let st = state_of_bucket[b];
            of.push(st);
            members[st as usize].push(v as NodeId);
            totals[st as usize] += deg[v];
        }
        (of, members, totals)
    };

    let (out_of, out_members, r_out) = assign(&out_deg);
    let (in_of, in_members, r_in) = assign(&in_deg);
    let c_out = out_members.len();
    let c_in = in_members.len();

    let mut combined = vec![0u64; c_out * c_in];
    for v in 0..n {
        combined[out_of[v] as usize * c_in + in_of[v] as usize] += 1;
    }

    let in_total: u64 = r_in.iter().sum();
    let mut theta = RateMatrix::zeros(c_out, c_in);
    if in_total > 0 {
        for r in 0..c_out {
            let n_r = out_members[r].len() as f64;
            for s in 0..c_in {
                let n_s = in_members[s].len() as f64;
                let m_rs = r_out[r] as f64 * r_in[s] as f64 / in_total as f64;
                theta.set(r, s, m_rs / (n_r * n_s * t));
            }
        }
    }

    let nf = (n as f64).max(1.0);
    let pi = |members: &[Vec<NodeId>]| -> Vec<f64> {
        members.iter().map(|m| m.len() as f64 / nf).collect()
    };
    Ok(TasbmModel {
        t,
        boundaries: buckets.boundaries().to_vec(),
        pi_out: pi(&out_members),
        pi_in: pi(&in_members),
        theta,
        combined,
        out_members: Some(out_members),
        in_members: Some(in_members),
        edge_passes: 1,
    })
}

/// Second-pass exact rates for fixed memberships:
/// theta_rs = m_rs / ((n_r * n_s - overlap_rs) * T), zero where no ordered
/// pair exists.
pub fn fit_window_exact(window: &WindowView<'_>, memberships: &Memberships) -> Result<RateMatrix> {
    let n = memberships.out_of.len();
    if memberships.in_of.len() != n {
        return Err(Error::InvalidArgument(
            "out and in membership vectors differ in length".into(),
        ));
    }
    let (c_out, c_in) = (memberships.c_out, memberships.c_in);
    let t = window.len as f64;

    let mut n_out = vec![0u64; c_out];
    let mut n_in = vec![0u64; c_in];
    let mut overlap = vec![0u64; c_out * c_in];
    for v in 0..n {
        let (r, s) = (memberships.out_of[v], memberships.in_of[v]);
        if r as usize >= c_out || s as usize >= c_in {
            return Err(Error::InvalidArgument(format!(
                "node {v} has state ({r}, {s}) outside ({c_out}, {c_in})"
            )));
        }
        n_out[r as usize] += 1;
        n_in[s as usize] += 1;
        overlap[r as usize * c_in + s as usize] += 1;
    }

    let mut m = vec![0u64; c_out * c_in];
    for e in window.edges() {
        // edge pass 2
        if e.src as usize >= n || e.dst as usize >= n {
            return Err(Error::InvalidArgument(format!(
                "memberships cover {n} nodes but edge ({}, {}) occurs in the window",
                e.src, e.dst
            )));
        }
        let r = memberships.out_of[e.src as usize] as usize;
        let s = memberships.in_of[e.dst as usize] as usize;
        m[r * c_in + s] += 1;
    }

    let mut theta = RateMatrix::zeros(c_out, c_in);
    for r in 0..c_out {
        for s in 0..c_in {
            let pairs = n_out[r] * n_in[s] - overlap[r * c_in + s];
            if pairs > 0 {
                theta.set(r, s, m[r * c_in + s] as f64 / (pairs as f64 * t));
            }
        }
    }
    Ok(theta)
}

/// A per-window fit with its window position.
#[derive(Debug, Clone)]
pub struct FittedWindow {
    pub start: Timestamp,
    pub model: TasbmModel,
}

/// Fits every window slice independently; memberships may differ across
/// windows. With `exact` set, each window's theta is replaced by the
/// two-pass posterior rates on the bucketed memberships.
pub fn fit_series(
    graph: &TemporalGraph,
    window_len: u64,
    origin: Timestamp,
    buckets: &BucketConfig,
    exact: bool,
) -> Result<Vec<FittedWindow>> {
    let mut out = Vec::new();
    for w in graph.window_slices(window_len, origin)? {
        let mut model = fit_window_approx(&w, buckets)?;
        if exact {
            let memberships = model.memberships().expect("fresh fit keeps members");
            model.theta = fit_window_exact(&w, &memberships)?;
            model.edge_passes = 2;
        }
        out.push(FittedWindow {
            start: w.start,
            model,
        });
    }
    Ok(out)
}

// ---------------------------------------------------------------------------
// Serialization: human-readable key/value blocks with deterministic order
// ---------------------------------------------------------------------------

/// Renders one model block. With `with_members` the per-state node lists
/// are included.
pub fn write_model(model: &TasbmModel, with_members: bool) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "tasbm_model");
    let _ = writeln!(s, "T {}", model.t);
    let mut line = String::from("buckets");
    for b in &model.boundaries {
        let _ = write!(line, " {b}");
    }
    let _ = writeln!(s, "{line}");
    let _ = writeln!(s, "out_states {}", model.c_out());
    for r in 0..model.c_out() {
        let _ = writeln!(
            s,
            "out_state {r} count {} pi {}",
            model.out_count(r),
            model.pi_out[r]
        );
    }
    let _ = writeln!(s, "in_states {}", model.c_in());
    for t in 0..model.c_in() {
        let _ = writeln!(
            s,
            "in_state {t} count {} pi {}",
            model.in_count(t),
            model.pi_in[t]
        );
    }
    let _ = writeln!(s, "combined {} {}", model.c_out(), model.c_in());
    for r in 0..model.c_out() {
        let row: Vec<String> = (0..model.c_in())
            .map(|c| model.combined_count(r, c).to_string())
            .collect();
        let _ = writeln!(s, "{}", row.join(" "));
    }
    let _ = writeln!(s, "theta {} {}", model.c_out(), model.c_in());
    for r in 0..model.c_out() {
        let row: Vec<String> = (0..model.c_in())
            .map(|c| model.theta.get(r, c).to_string())
            .collect();
        let _ = writeln!(s, "{}", row.join(" "));
    }
    if with_members {
        if let (Some(out_m), Some(in_m)) = (&model.out_members, &model.in_members) {
            for (r, members) in out_m.iter().enumerate() {
                let ids: Vec<String> = members.iter().map(|v| v.to_string()).collect();
                let _ = writeln!(s, "out_members {r} {}", ids.join(" "));
            }
            for (t, members) in in_m.iter().enumerate() {
                let ids: Vec<String> = members.iter().map(|v| v.to_string()).collect();
                let _ = writeln!(s, "in_members {t} {}", ids.join(" "));
            }
        }
    }
    let _ = writeln!(s, "end_model");
    s
}

/// Renders a fitted series: a header then one block per window.
pub fn write_model_series(series: &[FittedWindow], with_members: bool) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "tasbm_model_series {}", series.len());
    for (i, fw) in series.iter().enumerate() {
        let _ = writeln!(s, "window {i} start {}", fw.start);
        s.push_str(&write_model(&fw.model, with_members));
    }
    s
}

struct LineReader<'a> {
    lines: std::iter::Enumerate<std::str::Lines<'a>>,
}

impl<'a> LineReader<'a> {
    fn new(text: &'a str) -> Self {
        LineReader {
            lines: text.lines().enumerate(),
        }
    }

    fn next_content(&mut self) -> Option<(usize, &'a str)> {
        for (i, line) in self.lines.by_ref() {
            let line = line.trim();
            if !line.is_empty() && !line.starts_with('#') {
                return Some((i + 1, line));
            }
        }
        None
    }

    fn expect(&mut self, what: &str) -> Result<(usize, &'a str)> {
        self.next_content().ok_or_else(|| Error::Parse {
            line: 0,
            msg: format!("unexpected end of input, expected {what}"),
        })
    }
}

fn parse_err(line: usize, msg: impl Into<String>) -> Error {
    Error::Parse {
        line,
        msg: msg.into(),
    }
}

fn parse_model_block(r: &mut LineReader<'_>) -> Result<TasbmModel> {
    let (ln, head) = r.expect("tasbm_model")?;
    if head != "tasbm_model" {
        return Err(parse_err(ln, format!("expected tasbm_model, got {head:?}")));
    }
    let (ln, tline) = r.expect("T")?;
    let t: f64 = tline
        .strip_prefix("T ")
        .ok_or_else(|| parse_err(ln, "expected T <value>"))?
        .trim()
        .parse()
        .map_err(|_| parse_err(ln, "bad window length"))?;
    let (ln, bline) = r.expect("buckets")?;
    let rest = bline
        .strip_prefix("buckets")
        .ok_or_else(|| parse_err(ln, "expected buckets line"))?;
    let boundaries: Vec<f64> = rest
        .split_whitespace()
        .map(|v| v.parse().map_err(|_| parse_err(ln, "bad bucket boundary")))
        .collect::<Result<_>>()?;

    let read_states = |r: &mut LineReader<'_>, tag: &str| -> Result<Vec<f64>> {
        let (ln, line) = r.expect(tag)?;
        let count: usize = line
            .strip_prefix(tag)
            .and_then(|v| v.trim().parse().ok())
            .ok_or_else(|| parse_err(ln, format!("expected {tag} <count>")))?;
        let mut pis = Vec::with_capacity(count);
        let item_tag = &tag[..tag.len() - 1]; // out_states -> out_state
        for i in 0..count {
            let (ln, line) = r.expect(item_tag)?;
            let fields: Vec<&str> = line.split_whitespace().collect();
            if fields.len() != 6
                || fields[0] != item_tag
                || fields[2] != "count"
                || fields[4] != "pi"
            {
                return Err(parse_err(
                    ln,
                    format!("expected {item_tag} <id> count <n> pi <p>"),
                ));
            }
            let id: usize = fields[1].parse().map_err(|_| parse_err(ln, "bad state id"))?;
            if id != i {
                return Err(parse_err(ln, "state ids must be consecutive from 0"));
            }
            let pi: f64 = fields[5].parse().map_err(|_| parse_err(ln, "bad pi"))?;
            pis.push(pi);
        }
        Ok(pis)
    };
    let pi_out = read_states(r, "out_states")?;
    let pi_in = read_states(r, "in_states")?;
    let c_out = pi_out.len();
    let c_in = pi_in.len();

    let expect_dims = |r: &mut LineReader<'_>, tag: &str| -> Result<()> {
        let (ln, line) = r.expect(tag)?;
        let fields: Vec<&str> = line.split_whitespace().collect();
        if fields.len() != 3
            || fields[0] != tag
            || fields[1].parse::<usize>().ok() != Some(c_out)
            || fields[2].parse::<usize>().ok() != Some(c_in)
        {
            return Err(parse_err(ln, format!("expected {tag} {c_out} {c_in}")));
        }
        Ok(())
    };
    expect_dims(r, "combined")?;
    let mut combined = Vec::with_capacity(c_out * c_in);
    for _ in 0..c_out {
        let (ln, line) = r.expect("combined row")?;
        let row: Vec<u64> = line
            .split_whitespace()
            .map(|v| v.parse().map_err(|_| parse_err(ln, "bad combined count")))
            .collect::<Result<_>>()?;
        if row.len() != c_in {
            return Err(parse_err(ln, "combined row width mismatch"));
        }
        combined.extend(row);
    }
    expect_dims(r, "theta")?;
    let mut theta = RateMatrix::zeros(c_out, c_in);
    for row_idx in 0..c_out {
        let (ln, line) = r.expect("theta row")?;
        let row: Vec<f64> = line
            .split_whitespace()
            .map(|v| v.parse().map_err(|_| parse_err(ln, "bad rate")))
            .collect::<Result<_>>()?;
        if row.len() != c_in {
            return Err(parse_err(ln, "theta row width mismatch"));
        }
        for (s, v) in row.into_iter().enumerate() {
            theta.set(row_idx, s, v);
        }
    }

    let mut out_members: Option<Vec<Vec<NodeId>>> = None;
    let mut in_members: Option<Vec<Vec<NodeId>>> = None;
    loop {
        let (ln, line) = r.expect("end_model")?;
        if line == "end_model" {
            break;
        }
        let fields: Vec<&str> = line.split_whitespace().collect();
        let (target, expected_states) = match fields[0] {
            "out_members" => (&mut out_members, c_out),
            "in_members" => (&mut in_members, c_in),
            other => return Err(parse_err(ln, format!("unexpected line {other:?}"))),
        };
        let id: usize = fields
            .get(1)
            .and_then(|v| v.parse().ok())
            .ok_or_else(|| parse_err(ln, "bad member state id"))?;
        if id >= expected_states {
            return Err(parse_err(ln, "member state id out of range"));
        }
        let lists = target.get_or_insert_with(|| vec![Vec::new(); expected_states]);
        lists[id] = fields[2..]
            .iter()
            .map(|v| v.parse().map_err(|_| parse_err(ln, "bad node id")))
            .collect::<Result<_>>()?;
    }

    Ok(TasbmModel {
        t,
        boundaries,
        theta,
        combined,
        pi_out,
        pi_in,
        out_members,
        in_members,
        edge_passes: 0,
    })
}

/// Parses a single model block.
pub fn parse_model(text: &str) -> Result<TasbmModel> {
    parse_model_block(&mut LineReader::new(text))
}

/// Parses a model series document.
pub fn parse_model_series(text: &str) -> Result<Vec<FittedWindow>> {
    let mut r = LineReader::new(text);
    let (ln, head) = r.expect("tasbm_model_series")?;
    let count: usize = head
        .strip_prefix("tasbm_model_series")
        .and_then(|v| v.trim().parse().ok())
        .ok_or_else(|| parse_err(ln, "expected tasbm_model_series <count>"))?;
    let mut out = Vec::with_capacity(count);
    for i in 0..count {
        let (ln, wline) = r.expect("window")?;
        let fields: Vec<&str> = wline.split_whitespace().collect();
        if fields.len() != 4 || fields[0] != "window" || fields[2] != "start" {
            return Err(parse_err(ln, "expected window <i> start <t>"));
        }
        let idx: usize = fields[1]
            .parse()
            .map_err(|_| parse_err(ln, "bad window index"))?;
        if idx != i {
            return Err(parse_err(ln, "window indices must be consecutive"));
        }
        let start: Timestamp = fields[3]
            .parse()
            .map_err(|_| parse_err(ln, "bad window start"))?;
        out.push(FittedWindow {
            start,
            model: parse_model_block(&mut r)?,
        });
    }
    Ok(out)
}
