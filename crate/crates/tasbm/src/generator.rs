//! Seeded sampling of synthetic temporal networks from a TASBM
//! specification, with optional planted anomalies.
//!
//! For every ordered node pair and every rate interval, the edge count is
//! a Poisson draw with mean rate x length and timestamps land uniformly at
//! random on the interval's integer grid (a homogeneous Poisson process up
//! to integer rounding; within-pair collisions are re-drawn so a pair
//! never repeats a timestamp). Each (pair, interval) uses its own
//! counter-derived ChaCha stream, so output is fully determined by the
//! seed and independent of evaluation order.

use std::fmt::Write as _;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Poisson};

use crate::error::{Error, Result};
use crate::fit::RateMatrix;
use crate::graph::{NodeId, TemporalEdge, TemporalGraph, Timestamp};

/// Block sizes, per-interval rate matrices, and the seed that fully
/// determines the sample.
#[derive(Debug, Clone, PartialEq)]
pub struct GeneratorSpec {
    /// Out-group sizes; nodes are assigned contiguously in order.
    pub out_group_sizes: Vec<u32>,
    /// In-group sizes over the same node range.
    pub in_group_sizes: Vec<u32>,
    /// Interval boundaries `b_0 < b_1 < ... < b_P`; interval i covers
    /// `[b_i, b_{i+1})`.
    pub boundaries: Vec<Timestamp>,
    /// One C_out x C_in rate matrix per interval, per ordered pair per
    /// unit time.
    pub theta: Vec<RateMatrix>,
    pub seed: u64,
}

impl GeneratorSpec {
    pub fn validate(&self) -> Result<()> {
        if self.out_group_sizes.is_empty() || self.out_group_sizes.iter().any(|&s| s == 0) {
            return Err(Error::InvalidArgument(
                "out-group sizes must be positive".into(),
            ));
        }
        if self.in_group_sizes.is_empty() || self.in_group_sizes.iter().any(|&s| s == 0) {
            return Err(Error::InvalidArgument(
                "in-group sizes must be positive".into(),
            ));
        }
        let n_out: u64 = self.out_group_sizes.iter().map(|&s| s as u64).sum();
        let n_in: u64 = self.in_group_sizes.iter().map(|&s| s as u64).sum();
        if n_out != n_in {
            return Err(Error::InvalidArgument(format!(
                "out-group sizes sum to {n_out} but in-group sizes sum to {n_in}"
            )));
        }
        if self.boundaries.len() < 2 || self.boundaries.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::InvalidArgument(
                "interval boundaries must be increasing with at least one interval".into(),
            ));
        }
        if self.theta.len() != self.boundaries.len() - 1 {
            return Err(Error::InvalidArgument(format!(
                "{} intervals but {} rate matrices",
                self.boundaries.len() - 1,
                self.theta.len()
            )));
        }
        for m in &self.theta {
            if m.rows() != self.out_group_sizes.len() || m.cols() != self.in_group_sizes.len() {
                return Err(Error::InvalidArgument(
                    "rate matrix dimensions do not match group counts".into(),
                ));
            }
            if m.values().iter().any(|v| !v.is_finite() || *v < 0.0) {
                return Err(Error::InvalidArgument(
                    "rates must be finite and non-negative".into(),
                ));
            }
        }
        Ok(())
    }

    pub fn node_count(&self) -> usize {
        self.out_group_sizes.iter().map(|&s| s as usize).sum()
    }

    pub fn interval_count(&self) -> usize {
        self.theta.len()
    }

    pub fn interval_bounds(&self, index: usize) -> Result<(Timestamp, Timestamp)> {
        if index + 1 >= self.boundaries.len() {
            return Err(Error::InvalidArgument(format!(
                "interval index {index} out of range 0..{}",
                self.boundaries.len() - 1
            )));
        }
        Ok((self.boundaries[index], self.boundaries[index + 1]))
    }

    /// Group of each node under a contiguous block assignment.
    fn group_of(sizes: &[u32]) -> Vec<u32> {
        let mut of = Vec::new();
        for (g, &size) in sizes.iter().enumerate() {
            of.extend(std::iter::repeat_n(g as u32, size as usize));
        }
        of
    }

    pub fn out_group_of(&self) -> Vec<u32> {
        Self::group_of(&self.out_group_sizes)
    }

    pub fn in_group_of(&self) -> Vec<u32> {
        Self::group_of(&self.in_group_sizes)
    }

    /// The exact model this spec samples from on one interval: combined
    /// member counts from the block assignment plus that interval's rates.
    /// Ground truth for oracle experiments.
    pub fn true_model(&self, interval: usize) -> Result<crate::fit::TasbmModel> {
        self.validate()?;
        let (start, end) = self.interval_bounds(interval)?;
        let out_of = self.out_group_of();
        let in_of = self.in_group_of();
        let c_out = self.out_group_sizes.len();
        let c_in = self.in_group_sizes.len();
        let mut combined = vec![0u64; c_out * c_in];
        for v in 0..self.node_count() {
            combined[out_of[v] as usize * c_in + in_of[v] as usize] += 1;
        }
        crate::fit::TasbmModel::from_parts(
            (end - start) as f64,
            c_out,
            c_in,
            combined,
            self.theta[interval].clone(),
        )
    }

    /// Scales every rate matrix by its interval's factor.
    pub fn rate_schedule_scaled(&self, scales: &[f64]) -> Result<GeneratorSpec> {
        if scales.len() != self.theta.len() {
            return Err(Error::InvalidArgument(format!(
                "{} scale factors for {} intervals",
                scales.len(),
                self.theta.len()
            )));
        }
        if scales.iter().any(|s| !s.is_finite() || *s < 0.0) {
            return Err(Error::InvalidArgument(
                "scale factors must be finite and non-negative".into(),
            ));
        }
        let mut out = self.clone();
        for (m, &s) in out.theta.iter_mut().zip(scales) {
            m.scale(s);
        }
        Ok(out)
    }
}

fn splitmix64(mut x: u64) -> u64 {
    x = x.wrapping_add(0x9e3779b97f4a7c15);
    x = (x ^ (x >> 30)).wrapping_mul(0xbf58476d1ce4e5b9);
    x = (x ^ (x >> 27)).wrapping_mul(0x94d049bb133111eb);
    x ^ (x >> 31)
}

fn stream_rng(seed: u64, a: u64, b: u64, c: u64) -> ChaCha8Rng {
    let key = splitmix64(splitmix64(splitmix64(seed ^ splitmix64(a)) ^ b) ^ c);
    ChaCha8Rng::seed_from_u64(key)
}

/// Samples a temporal network: per ordered pair and interval, edge count
/// ~ Poisson(rate x length), timestamps uniform on the interval. Identical
/// specs produce byte-identical graphs.
pub fn sample_network(spec: &GeneratorSpec) -> Result<TemporalGraph> {
    spec.validate()?;
    let n = spec.node_count();
    let out_of = spec.out_group_of();
    let in_of = spec.in_group_of();
    let mut edges: Vec<TemporalEdge> = Vec::new();

    for (interval, theta) in spec.theta.iter().enumerate() {
        let (start, end) = spec.interval_bounds(interval)?;
        let length = (end - start) as u64;
        for u in 0..n {
            let row = out_of[u] as usize;
            for v in 0..n {
                if u == v {
                    continue;
                }
                let rate = theta.get(row, in_of[v] as usize);
                let mean = rate * length as f64;
                if mean <= 0.0 {
                    continue;
                }
                let mut rng = stream_rng(spec.seed, u as u64, v as u64, interval as u64);
                let poisson = Poisson::new(mean)
                    .map_err(|e| Error::InvalidArgument(format!("bad rate: {e}")))?;
                // more events than integer slots cannot keep timestamps
                // distinct within the pair; clamp at the slot count
                let count = (poisson.sample(&mut rng) as u64).min(length);
                let mut times: Vec<Timestamp> = Vec::with_capacity(count as usize);
                while (times.len() as u64) < count {
                    let t = start + rng.random_range(0..length) as Timestamp;
                    if !times.contains(&t) {
                        times.push(t);
                    }
                }
                for t in times {
                    edges.push(TemporalEdge::new(u as NodeId, v as NodeId, t));
                }
            }
        }
    }
    TemporalGraph::from_edges(n, edges)
}

/// What to inject after sampling.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AnomalyKind {
    /// For a base edge (u, v, t), inject (v, u, t').
    Reciprocated,
    /// For a base edge (u, v, t), inject (u, v, t').
    Repeated,
}

impl std::fmt::Display for AnomalyKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            AnomalyKind::Reciprocated => "reciprocated",
            AnomalyKind::Repeated => "repeated",
        })
    }
}

/// Injection plan for one target interval: every base edge inside it
/// spawns an anomalous companion with probability `probability`, lagged
/// uniformly within `[lag_min, lag_max]`.
#[derive(Debug, Clone, PartialEq)]
pub struct AnomalyPlan {
    pub kind: AnomalyKind,
    pub probability: f64,
    pub lag_min: u64,
    pub lag_max: u64,
    pub target_interval: usize,
}

impl AnomalyPlan {
    pub fn validate(&self) -> Result<()> {
        if !(0.0..=1.0).contains(&self.probability) {
            return Err(Error::InvalidArgument(
                "anomaly probability must be in [0, 1]".into(),
            ));
        }
        if self.lag_min > self.lag_max {
            return Err(Error::InvalidArgument("lag_min exceeds lag_max".into()));
        }
        Ok(())
    }
}

/// A planted graph plus the injected-edge audit list (ground truth for
/// detection experiments; kept out of the main edge list so that file
/// stays format-identical to real data).
#[derive(Debug, Clone)]
pub struct Planted {
    pub graph: TemporalGraph,
    pub injected: Vec<TemporalEdge>,
}

/// Applies a plan to the base edges inside `[interval.0, interval.1)`.
/// Deterministic in (graph, plan, seed): base edges are visited in the
/// graph's canonical time order.
pub fn plant_anomalies(
    graph: &TemporalGraph,
    plan: &AnomalyPlan,
    interval: (Timestamp, Timestamp),
    seed: u64,
) -> Result<Planted> {
    plan.validate()?;
    let (start, end) = interval;
    if start >= end {
        return Err(Error::InvalidArgument(
            "anomaly interval must be non-empty".into(),
        ));
    }
    if let Some((t_min, t_max)) = graph.time_span() {
        if end <= t_min || start > t_max {
            return Err(Error::InvalidArgument(
                "anomaly interval lies outside the graph span".into(),
            ));
        }
    }
    let mut rng = stream_rng(seed, 0xA40, plan.target_interval as u64, 0);
    let mut injected = Vec::new();
    for e in graph.edges() {
        if e.t < start || e.t >= end {
            continue;
        }
        if rng.random::<f64>() >= plan.probability {
            continue;
        }
        let lag = rng.random_range(plan.lag_min..=plan.lag_max) as Timestamp;
        let t = e.t + lag;
        let injected_edge = match plan.kind {
            AnomalyKind::Reciprocated => TemporalEdge::new(e.dst, e.src, t),
            AnomalyKind::Repeated => TemporalEdge::new(e.src, e.dst, t),
        };
        injected.push(injected_edge);
    }
    let mut all = graph.edges().to_vec();
    all.extend(injected.iter().copied());
    Ok(Planted {
        graph: TemporalGraph::from_edges(graph.node_count(), all)?,
        injected,
    })
}

// ---------------------------------------------------------------------------
// Spec file format
// ---------------------------------------------------------------------------

/// Renders the spec file: seed, group sizes, interval boundaries, one
/// theta block per interval, and any anomaly plans.
pub fn write_spec(spec: &GeneratorSpec, plans: &[AnomalyPlan]) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "tasbm_generator");
    let _ = writeln!(s, "seed {}", spec.seed);
    let join = |v: &[u32]| {
        v.iter()
            .map(|x| x.to_string())
            .collect::<Vec<_>>()
            .join(" ")
    };
    let _ = writeln!(s, "out_groups {}", join(&spec.out_group_sizes));
    let _ = writeln!(s, "in_groups {}", join(&spec.in_group_sizes));
    let bounds: Vec<String> = spec.boundaries.iter().map(|b| b.to_string()).collect();
    let _ = writeln!(s, "boundaries {}", bounds.join(" "));
    for theta in &spec.theta {
        let _ = writeln!(s, "theta");
        for r in 0..theta.rows() {
            let row: Vec<String> = (0..theta.cols()).map(|c| theta.get(r, c).to_string()).collect();
            let _ = writeln!(s, "{}", row.join(" "));
        }
    }
    for p in plans {
        let _ = writeln!(
            s,
            "anomaly {} {} {} {} {}",
            p.kind, p.probability, p.lag_min, p.lag_max, p.target_interval
        );
    }
    s
}

/// Parses the spec file format written by [`write_spec`].
pub fn parse_spec(text: &str) -> Result<(GeneratorSpec, Vec<AnomalyPlan>)> {
    let err = |line: usize, msg: &str| Error::Parse {
        line,
        msg: msg.to_string(),
    };
    let mut seed: Option<u64> = None;
    let mut out_groups: Option<Vec<u32>> = None;
    let mut in_groups: Option<Vec<u32>> = None;
    let mut boundaries: Option<Vec<Timestamp>> = None;
    let mut theta: Vec<RateMatrix> = Vec::new();
    let mut plans: Vec<AnomalyPlan> = Vec::new();
    let mut pending_rows: Vec<Vec<f64>> = Vec::new();
    let mut in_theta = false;
    let mut saw_header = false;

    let flush_theta = |rows: &mut Vec<Vec<f64>>, theta: &mut Vec<RateMatrix>| -> Result<()> {
        if !rows.is_empty() {
            theta.push(RateMatrix::from_rows(std::mem::take(rows))?);
        }
        Ok(())
    };

    for (i, raw) in text.lines().enumerate() {
        let ln = i + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        if !saw_header {
            if line != "tasbm_generator" {
                return Err(err(ln, "expected tasbm_generator header"));
            }
            saw_header = true;
            continue;
        }
        let mut fields = line.split_whitespace();
        let key = fields.next().unwrap();
        match key {
            "seed" | "out_groups" | "in_groups" | "boundaries" | "anomaly" | "theta" => {
                if in_theta {
                    flush_theta(&mut pending_rows, &mut theta)?;
                    in_theta = false;
                }
            }
            _ => {}
        }
        match key {
            "seed" => {
                seed = Some(
                    fields
                        .next()
                        .and_then(|v| v.parse().ok())
                        .ok_or_else(|| err(ln, "bad seed"))?,
                );
            }
            "out_groups" | "in_groups" => {
                let sizes: Vec<u32> = fields
                    .map(|v| v.parse().map_err(|_| err(ln, "bad group size")))
                    .collect::<Result<_>>()?;
                if key == "out_groups" {
                    out_groups = Some(sizes);
                } else {
                    in_groups = Some(sizes);
                }
            }
            "boundaries" => {
                boundaries = Some(
                    fields
                        .map(|v| v.parse().map_err(|_| err(ln, "bad boundary")))
                        .collect::<Result<_>>()?,
                );
            }
            "theta" => {
                in_theta = true;
            }
            "anomaly" => {
                let kind = match fields.next() {
                    Some("reciprocated") => AnomalyKind::Reciprocated,
                    Some("repeated") => AnomalyKind::Repeated,
                    _ => return Err(err(ln, "anomaly kind must be reciprocated or repeated")),
                };
                let mut num = |what: &str| -> Result<f64> {
                    fields
                        .next()
                        .and_then(|v| v.parse().ok())
                        .ok_or_else(|| err(ln, what))
                };
                let probability = num("bad probability")?;
                let lag_min = num("bad lag_min")? as u64;
                let lag_max = num("bad lag_max")? as u64;
                let target_interval = num("bad target interval")? as usize;
                plans.push(AnomalyPlan {
                    kind,
                    probability,
                    lag_min,
                    lag_max,
                    target_interval,
                });
            }
            _ if in_theta => {
                let row: Vec<f64> = line
                    .split_whitespace()
                    .map(|v| v.parse().map_err(|_| err(ln, "bad rate")))
                    .collect::<Result<_>>()?;
                pending_rows.push(row);
            }
            other => return Err(err(ln, &format!("unexpected key {other:?}"))),
        }
    }
    flush_theta(&mut pending_rows, &mut theta)?;

    let spec = GeneratorSpec {
        out_group_sizes: out_groups.ok_or_else(|| err(0, "missing out_groups"))?,
        in_group_sizes: in_groups.ok_or_else(|| err(0, "missing in_groups"))?,
        boundaries: boundaries.ok_or_else(|| err(0, "missing boundaries"))?,
        theta,
        seed: seed.ok_or_else(|| err(0, "missing seed"))?,
    };
    spec.validate()?;
    for p in &plans {
        p.validate()?;
        if p.target_interval >= spec.interval_count() {
            return Err(Error::InvalidArgument(format!(
                "anomaly targets interval {} of {}",
                p.target_interval,
                spec.interval_count()
            )));
        }
    }
    Ok((spec, plans))
}
