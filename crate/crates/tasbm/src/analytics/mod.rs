//! Closed-form expected motif frequencies.
//!
//! The expected number of delta-instances of a k-node z-edge motif in a
//! window of length T factors into (a) the expected number of isomorphic
//! subgraphs — a sum over activity-state assignments of the motif's node
//! slots, where each assignment contributes a placement count (ordered
//! selections of distinct nodes per state) times a product of expected
//! per-pair edge counts — and (b) the probability that the edge timestamps
//! respect the motif's total order inside the window.
//!
//! For T <= delta every in-window tuple automatically satisfies the span
//! constraint, so with constant rates the ordering factor is exactly 1/z!.
//! For T > delta the count splits into instances fully inside the trailing
//! delta-length stretch (the T = delta value) plus instances whose first
//! edge falls in the leading T - delta stretch; the latter carry one
//! first-edge factor over T - delta, z - 1 factors over delta, and an
//! ordering factor 1/(z-1)!.
//!
//! The assignment loop runs over all (C_out * C_in)^k combined-state
//! tuples; assignments demanding more nodes than a state holds contribute
//! a zero placement and drop out on their own. Cost is therefore O(C^k)
//! per motif, independent of node and edge counts.

mod variance;

pub use variance::variance;

use crate::combinatorics::factorial;
use crate::error::{Error, Result};
use crate::fit::TasbmModel;
use crate::motif::{MotifLabel, TemporalMotif};

/// Window length, motif window, and window origin for one evaluation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AnalysisConfig {
    /// Analysis window length T.
    pub t: f64,
    /// Motif window delta.
    pub delta: f64,
    /// Window start; only reported, the constant-rate formulas are
    /// translation invariant.
    pub t0: f64,
}

impl AnalysisConfig {
    pub fn new(t: f64, delta: f64) -> Result<Self> {
        if !(t.is_finite() && t > 0.0) || !(delta.is_finite() && delta > 0.0) {
            return Err(Error::InvalidArgument(
                "T and delta must be positive and finite".into(),
            ));
        }
        Ok(AnalysisConfig { t, delta, t0: 0.0 })
    }

    pub fn with_origin(mut self, t0: f64) -> Self {
        self.t0 = t0;
        self
    }
}

/// Piecewise-constant rate profile over a window: pieces of
/// (duration, rate) laid end to end from the window start.
#[derive(Debug, Clone, PartialEq)]
pub struct RateProfile {
    pieces: Vec<(f64, f64)>,
}

impl RateProfile {
    pub fn new(pieces: Vec<(f64, f64)>) -> Result<Self> {
        if pieces.is_empty() {
            return Err(Error::InvalidArgument("profile needs pieces".into()));
        }
        if pieces
            .iter()
            .any(|&(d, r)| !(d.is_finite() && d > 0.0) || !(r.is_finite() && r >= 0.0))
        {
            return Err(Error::InvalidArgument(
                "profile pieces need positive durations and non-negative rates".into(),
            ));
        }
        Ok(RateProfile { pieces })
    }

    pub fn constant(rate: f64, duration: f64) -> Result<Self> {
        Self::new(vec![(duration, rate)])
    }

    pub fn pieces(&self) -> &[(f64, f64)] {
        &self.pieces
    }

    pub fn duration(&self) -> f64 {
        self.pieces.iter().map(|&(d, _)| d).sum()
    }

    /// Total expected edge count along the profile: the integral of the
    /// rate.
    pub fn mass(&self) -> f64 {
        self.pieces.iter().map(|&(d, r)| d * r).sum()
    }

    /// Expected edge count over the profile's first `duration` time units
    /// (rate times overlapped sub-duration, summed over pieces).
    pub fn mass_over(&self, duration: f64) -> f64 {
        let mut left = duration;
        let mut total = 0.0;
        for &(d, r) in &self.pieces {
            if left <= 0.0 {
                break;
            }
            let step = d.min(left);
            total += step * r;
            left -= step;
        }
        total
    }

    /// Cumulative piece boundaries, starting after the first piece.
    fn boundaries(&self) -> Vec<f64> {
        let mut acc = 0.0;
        let mut out = Vec::with_capacity(self.pieces.len());
        for &(d, _) in &self.pieces {
            acc += d;
            out.push(acc);
        }
        out
    }

    /// Rate at offsets inside each segment defined by `cuts` (cumulative
    /// boundaries of the refinement).
    fn rates_on_segments(&self, cuts: &[f64]) -> Vec<f64> {
        let own = self.boundaries();
        let mut rates = Vec::with_capacity(cuts.len());
        let mut piece = 0usize;
        let mut prev = 0.0;
        for &cut in cuts {
            let mid = 0.5 * (prev + cut);
            while piece + 1 < own.len() && own[piece] <= mid {
                piece += 1;
            }
            rates.push(self.pieces[piece].1);
            prev = cut;
        }
        rates
    }
}

/// Probability that z independent arrivals, one per profile, land in
/// strictly increasing order across a shared window. Evaluates the nested
/// order integral in closed form over the common piece refinement: for
/// every monotone assignment of edges to segments, edges sharing a segment
/// contribute width^g / g! times their densities, and segment-separated
/// edges factor outright.
pub fn ordering_probability_multi(profiles: &[&RateProfile]) -> Result<f64> {
    let z = profiles.len();
    if z == 0 {
        return Err(Error::InvalidArgument("no profiles given".into()));
    }
    let total = profiles[0].duration();
    if profiles
        .iter()
        .any(|p| (p.duration() - total).abs() > 1e-9 * total.max(1.0))
    {
        return Err(Error::InvalidArgument(
            "ordering profiles must share one window".into(),
        ));
    }
    // common refinement of piece boundaries
    let mut cuts: Vec<f64> = profiles.iter().flat_map(|p| p.boundaries()).collect();
    cuts.sort_by(|a, b| a.partial_cmp(b).unwrap());
    cuts.dedup_by(|a, b| (*a - *b).abs() <= 1e-12 * total.max(1.0));
    let widths: Vec<f64> = cuts
        .iter()
        .scan(0.0, |prev, &c| {
            let w = c - *prev;
            *prev = c;
            Some(w)
        })
        .collect();
    // per-profile densities on each segment; a zero-mass profile cannot
    // place its edge, treat it as uniform so the factor stays neutral
    let densities: Vec<Vec<f64>> = profiles
        .iter()
        .map(|p| {
            let mass = p.mass();
            let rates = p.rates_on_segments(&cuts);
            if mass > 0.0 {
                rates.iter().map(|r| r / mass).collect()
            } else {
                vec![1.0 / total; widths.len()]
            }
        })
        .collect();

    // sum over monotone segment assignments p_1 <= ... <= p_z
    fn recurse(
        edge: usize,
        min_seg: usize,
        z: usize,
        widths: &[f64],
        densities: &[Vec<f64>],
        acc: f64,
        streak_seg: usize,
        streak_len: u64,
        out: &mut f64,
    ) {
        if edge == z {
            *out += acc;
            return;
        }
        for seg in min_seg..widths.len() {
            let (start_len, base) = if seg == streak_seg {
                (streak_len, acc)
            } else {
                (0, acc)
            };
            // entering `seg` with start_len prior edges already in it:
            // multiply density * width and divide by the growing run length
            let run = start_len + 1;
            let factor = densities[edge][seg] * widths[seg] / run as f64;
            recurse(
                edge + 1,
                seg,
                z,
                widths,
                densities,
                base * factor,
                seg,
                run,
                out,
            );
        }
    }

    let mut out = 0.0;
    recurse(
        0,
        0,
        profiles.len(),
        &widths,
        &densities,
        1.0,
        usize::MAX,
        0,
        &mut out,
    );
    Ok(out)
}

/// Ordering probability when all z edges share one rate profile. Constant
/// rates give exactly 1/z!.
pub fn ordering_probability(z: usize, profile: &RateProfile) -> Result<f64> {
    if z == 0 {
        return Err(Error::InvalidArgument("z must be at least 1".into()));
    }
    if profile.pieces.len() == 1 {
        return Ok(1.0 / factorial(z as u64));
    }
    let refs: Vec<&RateProfile> = std::iter::repeat_n(profile, z).collect();
    ordering_probability_multi(&refs)
}

/// Expected number of edges from one ordered node pair across the given
/// duration under the model's constant window rate.
pub fn expected_edges(
    model: &TasbmModel,
    out_state: usize,
    in_state: usize,
    duration: f64,
) -> Result<f64> {
    if out_state >= model.c_out() || in_state >= model.c_in() {
        return Err(Error::InvalidArgument(format!(
            "state pair ({out_state}, {in_state}) outside ({}, {})",
            model.c_out(),
            model.c_in()
        )));
    }
    Ok(model.theta.get(out_state, in_state) * duration)
}

/// Instrumentation from one expectation evaluation.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct EvalStats {
    /// Number of activity-state assignments the loop visited: always
    /// (C_out * C_in)^k.
    pub assignment_terms: u64,
}

/// Walks all (C_out*C_in)^k combined-state assignments; for each one,
/// calls `per_edge(assignment, edge_index) -> expected edge count` on every
/// motif edge and accumulates placement x product.
fn assignment_sum<F>(model: &TasbmModel, motif: &TemporalMotif, stats: &mut EvalStats, per_edge: F) -> f64
where
    F: Fn(&[(usize, usize)], usize) -> f64,
{
    let c_out = model.c_out();
    let c_in = model.c_in();
    let states: Vec<(usize, usize)> = (0..c_out)
        .flat_map(|r| (0..c_in).map(move |s| (r, s)))
        .collect();
    let k = motif.k();
    let mut assignment: Vec<usize> = vec![0; k]; // indices into `states`
    let mut slot_states: Vec<(usize, usize)> = vec![(0, 0); k];
    let mut total = 0.0;
    loop {
        stats.assignment_terms += 1;
        for (slot, &idx) in assignment.iter().enumerate() {
            slot_states[slot] = states[idx];
        }
        // placement: ordered selection of distinct nodes per combined state
        let mut placement = 1.0;
        for i in 0..k {
            let prior = (0..i).filter(|&j| assignment[j] == assignment[i]).count() as u64;
            let members = model.combined_count(slot_states[i].0, slot_states[i].1);
            if members <= prior {
                placement = 0.0;
                break;
            }
            placement *= (members - prior) as f64;
        }
        if placement > 0.0 {
            let mut product = placement;
            for e in 0..motif.z() {
                product *= per_edge(&slot_states, e);
                if product == 0.0 {
                    break;
                }
            }
            total += product;
        }
        // odometer
        let mut slot = 0;
        loop {
            if slot == k {
                return total;
            }
            assignment[slot] += 1;
            if assignment[slot] < states.len() {
                break;
            }
            assignment[slot] = 0;
            slot += 1;
        }
    }
}

fn edge_rate(model: &TasbmModel, motif: &TemporalMotif, slots: &[(usize, usize)], e: usize) -> f64 {
    let (a, b) = motif.edges()[e];
    model.theta.get(slots[a as usize].0, slots[b as usize].1)
}

/// Expected delta-instances for T <= delta: the span constraint is vacuous
/// inside the window, so the count is the isomorphic-subgraph expectation
/// times 1/z!.
pub fn expected_count_t_le_delta(
    model: &TasbmModel,
    motif: &TemporalMotif,
    config: &AnalysisConfig,
) -> Result<(f64, EvalStats)> {
    if config.t > config.delta {
        return Err(Error::InvalidArgument(
            "this path needs T <= delta".into(),
        ));
    }
    let mut stats = EvalStats::default();
    let t = config.t;
    let sum = assignment_sum(model, motif, &mut stats, |slots, e| {
        edge_rate(model, motif, slots, e) * t
    });
    Ok((sum / factorial(motif.z() as u64), stats))
}

/// Expected delta-instances for T > delta: instances fully inside a
/// trailing delta-length stretch plus instances whose first edge arrives
/// in the leading T - delta stretch (first edge integrated over T - delta,
/// the remaining z - 1 edges over delta, ordering 1/(z-1)!).
pub fn expected_count_t_gt_delta(
    model: &TasbmModel,
    motif: &TemporalMotif,
    config: &AnalysisConfig,
) -> Result<(f64, EvalStats)> {
    if config.t <= config.delta {
        return Err(Error::InvalidArgument("this path needs T > delta".into()));
    }
    let tail = AnalysisConfig {
        t: config.delta,
        delta: config.delta,
        t0: config.t0,
    };
    let (inside, mut stats) = expected_count_t_le_delta(model, motif, &tail)?;
    let lead = config.t - config.delta;
    let delta = config.delta;
    let early = assignment_sum(model, motif, &mut stats, |slots, e| {
        let duration = if e == 0 { lead } else { delta };
        edge_rate(model, motif, slots, e) * duration
    });
    let z = motif.z() as u64;
    Ok((inside + early / factorial(z - 1), stats))
}

/// Expected delta-instances of one motif, dispatching on T vs delta.
pub fn expected_count(
    model: &TasbmModel,
    motif: &TemporalMotif,
    config: &AnalysisConfig,
) -> Result<f64> {
    expected_count_detailed(model, motif, config).map(|(v, _)| v)
}

/// As [`expected_count`], also returning loop instrumentation.
pub fn expected_count_detailed(
    model: &TasbmModel,
    motif: &TemporalMotif,
    config: &AnalysisConfig,
) -> Result<(f64, EvalStats)> {
    if config.t <= config.delta {
        expected_count_t_le_delta(model, motif, config)
    } else {
        expected_count_t_gt_delta(model, motif, config)
    }
}

/// Expected count and, where computed, variance for one motif and window.
#[derive(Debug, Clone, PartialEq)]
pub struct ExpectationResult {
    pub motif: String,
    pub window_start: f64,
    pub window_end: f64,
    pub expected: f64,
    pub variance: Option<f64>,
}

impl ExpectationResult {
    /// CSV row `window_start,window_end,motif_label,expected,variance`
    /// with the variance field left blank when unsupported.
    pub fn csv_row(&self) -> String {
        match self.variance {
            Some(v) => format!(
                "{},{},{},{},{}",
                self.window_start, self.window_end, self.motif, self.expected, v
            ),
            None => format!(
                "{},{},{},{},",
                self.window_start, self.window_end, self.motif, self.expected
            ),
        }
    }
}

/// Maps the appropriate expectation over a catalog. With `with_variance`,
/// the variance is attached where its supported regime (T = delta,
/// constant rates) holds and left out elsewhere.
pub fn expected_all(
    model: &TasbmModel,
    catalog: &[(MotifLabel, TemporalMotif)],
    config: &AnalysisConfig,
    with_variance: bool,
) -> Result<Vec<ExpectationResult>> {
    let mut out = Vec::with_capacity(catalog.len());
    let variance_supported = with_variance && config.t == config.delta;
    for (label, motif) in catalog {
        let expected = expected_count(model, motif, config)?;
        let variance = if variance_supported {
            Some(variance(model, motif, config)?)
        } else {
            None
        };
        out.push(ExpectationResult {
            motif: label.to_string(),
            window_start: config.t0,
            window_end: config.t0 + config.t,
            expected,
            variance,
        });
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fit::RateMatrix;
    use crate::motif::catalog_36;

    pub(crate) fn uniform_model(n: u64, c: usize, theta: f64, t: f64) -> TasbmModel {
        // c x c combined grid with members spread as evenly as possible
        let mut combined = vec![0u64; c * c];
        for i in 0..n {
            let cell = (i as usize) % (c * c);
            combined[cell] += 1;
        }
        let mut m = RateMatrix::zeros(c, c);
        for r in 0..c {
            for s in 0..c {
                m.set(r, s, theta);
            }
        }
        TasbmModel::from_parts(t, c, c, combined, m).unwrap()
    }

    fn motif(lit: &str) -> TemporalMotif {
        lit.parse().unwrap()
    }

    #[test]
    fn expected_edges_is_rate_times_duration() {
        let model = uniform_model(3, 1, 1e-3, 1000.0);
        assert_eq!(expected_edges(&model, 0, 0, 1000.0).unwrap(), 1.0);
        assert_eq!(expected_edges(&model, 0, 0, 0.0).unwrap(), 0.0);
        assert!(expected_edges(&model, 1, 0, 10.0).is_err());
    }

    #[test]
    fn profile_mass_over_pieces() {
        let p = RateProfile::new(vec![(2.0, 1.0), (1.0, 3.0)]).unwrap();
        assert_eq!(p.mass(), 5.0);
        assert_eq!(p.mass_over(3.0), 5.0);
        assert_eq!(p.mass_over(2.5), 3.5);
        assert_eq!(p.mass_over(0.0), 0.0);
    }

    #[test]
    fn ordering_constant_is_inverse_factorial() {
        let p = RateProfile::constant(0.3, 10.0).unwrap();
        assert_eq!(ordering_probability(3, &p).unwrap(), 1.0 / 6.0);
        assert_eq!(ordering_probability(1, &p).unwrap(), 1.0);
        // piecewise but shared: still 1/z! (iid arrivals), via the integral
        let q = RateProfile::new(vec![(5.0, 0.4), (5.0, 0.1)]).unwrap();
        let got = ordering_probability(2, &q).unwrap();
        assert!((got - 0.5).abs() < 1e-12);
        // the spec's decomposition: p^2/2 + p(1-p) + (1-p)^2/2 with
        // p = piece-one mass fraction = 0.8
        let frac: f64 = 0.8;
        let want = frac * frac / 2.0 + frac * (1.0 - frac) + (1.0 - frac) * (1.0 - frac) / 2.0;
        assert!((got - want).abs() < 1e-12);
    }

    #[test]
    fn ordering_multi_matches_direct_two_edge_integral() {
        // two different two-piece profiles; P(t1 < t2) has a closed form:
        // masses m1 = (a1, a2), m2 = (b1, b2) per half, widths w:
        // P = a1*b1/2 + a1*b2 + a2*b2/2 (normalized pieces)
        let w = 5.0;
        let p1 = RateProfile::new(vec![(w, 0.6), (w, 0.2)]).unwrap();
        let p2 = RateProfile::new(vec![(w, 0.1), (w, 0.5)]).unwrap();
        let a1 = 0.6 * w / p1.mass();
        let a2 = 0.2 * w / p1.mass();
        let b1 = 0.1 * w / p2.mass();
        let b2 = 0.5 * w / p2.mass();
        let want = a1 * b1 / 2.0 + a1 * b2 + a2 * b2 / 2.0;
        let got = ordering_probability_multi(&[&p1, &p2]).unwrap();
        assert!((got - want).abs() < 1e-12, "{got} vs {want}");
    }

    #[test]
    fn ordering_probabilities_sum_to_one_over_permutations() {
        // distinct profiles; all 3! orderings of the edges partition the
        // probability space
        let p1 = RateProfile::new(vec![(2.0, 0.9), (3.0, 0.1), (5.0, 0.4)]).unwrap();
        let p2 = RateProfile::new(vec![(4.0, 0.2), (6.0, 0.7)]).unwrap();
        let p3 = RateProfile::new(vec![(10.0, 0.5)]).unwrap();
        let profs = [&p1, &p2, &p3];
        let perms: [[usize; 3]; 6] = [
            [0, 1, 2],
            [0, 2, 1],
            [1, 0, 2],
            [1, 2, 0],
            [2, 0, 1],
            [2, 1, 0],
        ];
        let mut total = 0.0;
        for perm in perms {
            let ordered: Vec<&RateProfile> = perm.iter().map(|&i| profs[i]).collect();
            total += ordering_probability_multi(&ordered).unwrap();
        }
        assert!((total - 1.0).abs() < 1e-12, "sum {total}");
    }

    #[test]
    fn closed_form_exactness_triangle() {
        // C = 1, n = 3, theta*T = 1: P(3,3) * 1 * 1/3! = 1 exactly
        let model = uniform_model(3, 1, 1e-3, 1000.0);
        let config = AnalysisConfig::new(1000.0, 1000.0).unwrap();
        let (e, stats) = expected_count_detailed(&model, &motif("k=3; 0>1, 1>2, 2>0"), &config)
            .map(|(v, s)| (v, s))
            .unwrap();
        assert_eq!(e, 1.0);
        assert_eq!(stats.assignment_terms, 1);
    }

    #[test]
    fn too_few_nodes_gives_zero() {
        let model = uniform_model(2, 1, 1e-3, 1000.0);
        let config = AnalysisConfig::new(1000.0, 1000.0).unwrap();
        for (_, m) in catalog_36().iter().filter(|(_, m)| m.k() == 3) {
            assert_eq!(expected_count(&model, m, &config).unwrap(), 0.0);
        }
    }

    #[test]
    fn continuity_at_t_equals_delta() {
        let model = uniform_model(5, 1, 2e-3, 500.0);
        let m = motif("k=3; 0>1, 1>2, 2>0");
        let at = expected_count(&model, &m, &AnalysisConfig::new(500.0, 500.0).unwrap()).unwrap();
        let just_above = expected_count(
            &model,
            &m,
            &AnalysisConfig::new(500.0 + 1e-9, 500.0).unwrap(),
        )
        .unwrap();
        assert!((just_above - at).abs() < 1e-9 * at.max(1.0));
        // and a sweep of delta in (0.5 T, T] stays continuous
        let t = 500.0;
        let mut prev = None;
        let mut max_jump: f64 = 0.0;
        for i in 0..=100 {
            let delta = 0.5 * t + 0.5 * t * i as f64 / 100.0;
            let v = expected_count(&model, &m, &AnalysisConfig::new(t, delta).unwrap()).unwrap();
            if let Some(p) = prev {
                max_jump = max_jump.max((v - p as f64).abs());
            }
            prev = Some(v);
        }
        let scale = prev.unwrap();
        assert!(max_jump < 0.05 * scale, "jump {max_jump} vs scale {scale}");
    }

    #[test]
    fn assignment_counter_is_c_to_the_k() {
        let model = uniform_model(10, 2, 1e-3, 100.0);
        let config = AnalysisConfig::new(100.0, 100.0).unwrap();
        let m = motif("k=3; 0>1, 1>2, 2>0");
        let (_, stats) = expected_count_detailed(&model, &m, &config).unwrap();
        assert_eq!(stats.assignment_terms, 4u64.pow(3)); // (C_out*C_in)^k
        let bigger = uniform_model(1000, 2, 5e-5, 100.0);
        let (_, stats2) = expected_count_detailed(&bigger, &m, &config).unwrap();
        assert_eq!(stats2.assignment_terms, stats.assignment_terms);
    }

    #[test]
    fn theta_scaling_law() {
        // multiplying theta by s scales E by s^z (T = delta here)
        let base = uniform_model(6, 2, 1e-3, 200.0);
        let mut scaled = base.clone();
        scaled.theta.scale(3.0);
        let config = AnalysisConfig::new(200.0, 200.0).unwrap();
        for (_, m) in catalog_36().iter().take(8) {
            let e0 = expected_count(&base, m, &config).unwrap();
            let e1 = expected_count(&scaled, m, &config).unwrap();
            if e0 > 0.0 {
                assert!((e1 / e0 - 27.0).abs() < 1e-9, "{}", e1 / e0);
            }
        }
    }

    #[test]
    fn c_collapse_equivalence() {
        // a C > 1 model with equal rates equals the C = 1 model with the
        // same node count
        let flat = uniform_model(12, 1, 4e-4, 300.0);
        let split = uniform_model(12, 3, 4e-4, 300.0);
        let config = AnalysisConfig::new(300.0, 150.0).unwrap(); // T > delta path too
        for (_, m) in catalog_36() {
            let a = expected_count(&flat, &m, &config).unwrap();
            let b = expected_count(&split, &m, &config).unwrap();
            let scale = a.abs().max(1e-300);
            assert!((a - b).abs() / scale < 1e-9, "{a} vs {b}");
        }
    }

    #[test]
    fn assignment_sum_reproduces_bijection_count() {
        // sum over assignments of the placement products must equal P(n, k)
        // when every edge factor is 1
        let model = uniform_model(9, 2, 1.0, 1.0);
        let m = motif("k=3; 0>1, 1>2, 2>0");
        let mut stats = EvalStats::default();
        let total = assignment_sum(&model, &m, &mut stats, |_, _| 1.0);
        assert_eq!(total, (9 * 8 * 7) as f64);
    }

    #[test]
    fn zero_theta_all_expectations_zero() {
        let model = uniform_model(8, 2, 0.0, 100.0);
        let config = AnalysisConfig::new(100.0, 100.0).unwrap();
        let all = expected_all(&model, &catalog_36(), &config, false).unwrap();
        assert!(all.iter().all(|r| r.expected == 0.0));
    }

    #[test]
    fn single_rate_triangles_share_one_expectation() {
        let model = uniform_model(7, 1, 3e-3, 400.0);
        let config = AnalysisConfig::new(400.0, 400.0).unwrap();
        let catalog = catalog_36();
        let all = expected_all(&model, &catalog, &config, false).unwrap();
        let tri: Vec<f64> = all
            .iter()
            .zip(&catalog)
            .filter(|(_, (_, m))| m.k() == 3)
            .filter(|(_, (_, m))| crate::motif::category(m).unwrap() == crate::motif::Category::Triangle)
            .map(|(r, _)| r.expected)
            .collect();
        assert_eq!(tri.len(), 8);
        for v in &tri {
            assert!((v - tri[0]).abs() < 1e-12);
        }
    }
}
