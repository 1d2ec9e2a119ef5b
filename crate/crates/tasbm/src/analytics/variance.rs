//! Variance of motif counts via pair enumeration.
//!
//! V[N] = E[N^2] - E[N]^2, where E[N^2] runs over ordered pairs of
//! instance templates. A pair is described by two slot-state assignments,
//! a node-overlap pattern (a partial injection between the two slot sets)
//! and an edge-sharing pattern (a partial matching between edge positions
//! whose endpoint slots are identified). Each pattern contributes
//!
//!   joint placement  x  product of expected edge counts over the union of
//!   edge positions (shared edges once)  x  L / q!
//!
//! with q the number of distinct events and L the number of linear
//! extensions of the two edge chains glued at shared positions.
//!
//! Pairs that share no edge sum exactly to E[N]^2 (the overlap patterns
//! partition all pairs of node placements), so the variance is computed
//! directly as the sum over patterns with at least one shared edge. That
//! keeps it positive by construction and free of cancellation. Shared
//! events force equal timestamps across the two chains, which is only
//! consistent with a single window at T = delta and constant rates; other
//! regimes are rejected.

use crate::combinatorics::{factorial, PartialOrder};
use crate::error::{Error, Result};
use crate::fit::TasbmModel;
use crate::motif::TemporalMotif;

use super::{expected_count_t_le_delta, AnalysisConfig};

/// Node-overlap pattern: `to[a] = Some(b)` identifies slot a of the first
/// instance with slot b of the second.
type Overlap = Vec<Option<u8>>;

fn enumerate_overlaps(k: usize) -> Vec<Overlap> {
    fn recurse(
        slot: usize,
        k: usize,
        current: &mut Overlap,
        used: &mut [bool],
        out: &mut Vec<Overlap>,
    ) {
        if slot == k {
            out.push(current.clone());
            return;
        }
        recurse(slot + 1, k, current, used, out);
        for b in 0..k {
            if !used[b] {
                used[b] = true;
                current[slot] = Some(b as u8);
                recurse(slot + 1, k, current, used, out);
                current[slot] = None;
                used[b] = false;
            }
        }
    }
    let mut out = Vec::new();
    recurse(0, k, &mut vec![None; k], &mut vec![false; k], &mut out);
    out
}

/// Edge-sharing pattern: `with[i] = Some(j)` shares first-instance edge i
/// with second-instance edge j. Valid only when the overlap identifies the
/// endpoints position-wise. Only patterns with at least one shared edge
/// are returned.
type Sharing = Vec<Option<u8>>;

fn enumerate_sharings(motif: &TemporalMotif, overlap: &Overlap) -> Vec<Sharing> {
    let z = motif.z();
    let edges = motif.edges();
    let sharable: Vec<Vec<u8>> = (0..z)
        .map(|i| {
            let (s1, d1) = edges[i];
            (0..z as u8)
                .filter(|&j| {
                    let (s2, d2) = edges[j as usize];
                    overlap[s1 as usize] == Some(s2) && overlap[d1 as usize] == Some(d2)
                })
                .collect()
        })
        .collect();
    fn recurse(
        i: usize,
        z: usize,
        sharable: &[Vec<u8>],
        current: &mut Sharing,
        taken: &mut [bool],
        out: &mut Vec<Sharing>,
    ) {
        if i == z {
            if current.iter().any(|s| s.is_some()) {
                out.push(current.clone());
            }
            return;
        }
        recurse(i + 1, z, sharable, current, taken, out);
        for &j in &sharable[i] {
            if !taken[j as usize] {
                taken[j as usize] = true;
                current[i] = Some(j);
                recurse(i + 1, z, sharable, current, taken, out);
                current[i] = None;
                taken[j as usize] = false;
            }
        }
    }
    let mut out = Vec::new();
    recurse(
        0,
        z,
        &sharable,
        &mut vec![None; z],
        &mut vec![false; z],
        &mut out,
    );
    out
}

/// L / q! for a sharing pattern: two z-chains with shared positions
/// merged. Order-inconsistent sharings have no linear extension and give 0.
fn order_factor(z: usize, sharing: &Sharing) -> f64 {
    let shared = sharing.iter().filter(|s| s.is_some()).count();
    let q = 2 * z - shared;
    // first-instance positions keep ids 0..z; unshared second-instance
    // positions get fresh ids
    let mut second_id = vec![0usize; z];
    let mut next = z;
    for j in 0..z {
        if let Some(i) = sharing.iter().position(|&s| s == Some(j as u8)) {
            second_id[j] = i;
        } else {
            second_id[j] = next;
            next += 1;
        }
    }
    debug_assert_eq!(next, q);
    let mut po = PartialOrder::new(q);
    for i in 1..z {
        po.add_lt(i - 1, i);
        po.add_lt(second_id[i - 1], second_id[i]);
    }
    po.linear_extensions() as f64 / factorial(q as u64)
}

fn decode(mut idx: u64, digits: usize, base: usize, out: &mut [usize]) {
    for slot in out.iter_mut().take(digits) {
        *slot = (idx % base as u64) as usize;
        idx /= base as u64;
    }
}

/// Analytical variance of the delta-instance count in the supported
/// regime T = delta with constant window rates.
pub fn variance(model: &TasbmModel, motif: &TemporalMotif, config: &AnalysisConfig) -> Result<f64> {
    let scale = config.t.max(config.delta);
    if (config.t - config.delta).abs() > 1e-9 * scale {
        return Err(Error::Unsupported(format!(
            "variance needs T = delta (got T = {}, delta = {})",
            config.t, config.delta
        )));
    }
    let t = config.t;
    let k = motif.k();
    let z = motif.z();
    let edges = motif.edges();
    let states: Vec<(usize, usize)> = (0..model.c_out())
        .flat_map(|r| (0..model.c_in()).map(move |s| (r, s)))
        .collect();
    let nc = states.len();
    let members: Vec<u64> = states
        .iter()
        .map(|&(r, s)| model.combined_count(r, s))
        .collect();
    let rate_of = |assign: &[usize], e: usize| -> f64 {
        let (a, b) = edges[e];
        let out = states[assign[a as usize]].0;
        let inn = states[assign[b as usize]].1;
        model.theta.get(out, inn) * t
    };

    let mut excess = 0.0;
    let mut a1 = vec![0usize; k];
    let mut a2 = vec![0usize; k];
    let mut demanded: Vec<usize> = Vec::with_capacity(2 * k);

    for overlap in enumerate_overlaps(k) {
        let sharings = enumerate_sharings(motif, &overlap);
        if sharings.is_empty() {
            continue;
        }
        let factors: Vec<f64> = sharings.iter().map(|s| order_factor(z, s)).collect();
        let free_slots: Vec<usize> = (0..k)
            .filter(|&b| !overlap.contains(&Some(b as u8)))
            .collect();
        let n_a1 = (nc as u64).pow(k as u32);
        let n_free = (nc as u64).pow(free_slots.len() as u32);

        for a1_idx in 0..n_a1 {
            decode(a1_idx, k, nc, &mut a1);
            // placement over the first instance's slots
            demanded.clear();
            let mut placement1 = 1.0;
            for &st in &a1 {
                let prior = demanded.iter().filter(|&&d| d == st).count() as u64;
                if members[st] <= prior {
                    placement1 = 0.0;
                    break;
                }
                placement1 *= (members[st] - prior) as f64;
                demanded.push(st);
            }
            if placement1 == 0.0 {
                continue;
            }
            let first_rates: f64 = (0..z).map(|e| rate_of(&a1, e)).product();
            if first_rates == 0.0 {
                continue;
            }
            let demanded_len = demanded.len();
            for a in 0..k {
                if let Some(b) = overlap[a] {
                    a2[b as usize] = a1[a];
                }
            }
            let mut free = vec![0usize; free_slots.len()];
            for free_idx in 0..n_free {
                decode(free_idx, free_slots.len(), nc, &mut free);
                demanded.truncate(demanded_len);
                let mut placement = placement1;
                for (i, &b) in free_slots.iter().enumerate() {
                    let st = free[i];
                    a2[b] = st;
                    let prior = demanded.iter().filter(|&&d| d == st).count() as u64;
                    if members[st] <= prior {
                        placement = 0.0;
                        break;
                    }
                    placement *= (members[st] - prior) as f64;
                    demanded.push(st);
                }
                if placement == 0.0 {
                    continue;
                }
                for (sharing, &of) in sharings.iter().zip(&factors) {
                    if of == 0.0 {
                        continue;
                    }
                    let mut product = first_rates;
                    for j in 0..z {
                        let shared = sharing.iter().any(|&s| s == Some(j as u8));
                        if !shared {
                            product *= rate_of(&a2, j);
                        }
                    }
                    excess += placement * product * of;
                }
            }
        }
    }
    Ok(excess)
}

/// E[N^2] for diagnostics and tests.
pub fn second_moment(
    model: &TasbmModel,
    motif: &TemporalMotif,
    config: &AnalysisConfig,
) -> Result<f64> {
    let v = variance(model, motif, config)?;
    let (e, _) = expected_count_t_le_delta(model, motif, config)?;
    Ok(v + e * e)
}

#[cfg(test)]
mod tests {
    use super::super::tests::uniform_model;
    use super::super::AnalysisConfig;
    use super::*;

    fn motif(lit: &str) -> TemporalMotif {
        lit.parse().unwrap()
    }

    #[test]
    fn single_edge_count_is_poisson() {
        // z = 1: N is a sum of independent Poissons, variance = mean
        for (n, theta_t) in [(3u64, 0.4), (5, 1.3), (8, 0.05)] {
            let model = uniform_model(n, 1, theta_t / 100.0, 100.0);
            let config = AnalysisConfig::new(100.0, 100.0).unwrap();
            let m = motif("k=2; 0>1");
            let (e, _) = expected_count_t_le_delta(&model, &m, &config).unwrap();
            let v = variance(&model, &m, &config).unwrap();
            assert!((v - e).abs() < 1e-9 * e, "n={n}: v={v} e={e}");
        }
    }

    #[test]
    fn single_edge_poisson_with_states() {
        // the identity must survive C > 1 and unequal rates
        let mut model = uniform_model(6, 2, 0.0, 100.0);
        model.theta.set(0, 0, 2e-3);
        model.theta.set(0, 1, 5e-4);
        model.theta.set(1, 0, 1e-3);
        model.theta.set(1, 1, 4e-3);
        let config = AnalysisConfig::new(100.0, 100.0).unwrap();
        let m = motif("k=2; 0>1");
        let (e, _) = expected_count_t_le_delta(&model, &m, &config).unwrap();
        let v = variance(&model, &m, &config).unwrap();
        assert!(e > 0.0);
        assert!((v - e).abs() < 1e-9 * e, "v={v} e={e}");
    }

    #[test]
    fn rare_event_limit_variance_equals_expectation() {
        // as rates vanish the fully-shared pair term dominates: V/E -> 1
        let model = uniform_model(6, 1, 1e-10, 100.0);
        let config = AnalysisConfig::new(100.0, 100.0).unwrap();
        for lit in ["k=3; 0>1, 1>2, 2>0", "k=2; 0>1, 1>0, 0>1"] {
            let m = motif(lit);
            let (e, _) = expected_count_t_le_delta(&model, &m, &config).unwrap();
            let v = variance(&model, &m, &config).unwrap();
            assert!(e > 0.0);
            assert!((v / e - 1.0).abs() < 1e-6, "{lit}: ratio {}", v / e);
        }
    }

    #[test]
    fn variance_non_negative_and_second_moment_dominates() {
        let config = AnalysisConfig::new(50.0, 50.0).unwrap();
        for c in [1usize, 2] {
            let model = uniform_model(7, c, 8e-3, 50.0);
            for lit in [
                "k=3; 0>1, 1>2, 2>0",
                "k=3; 0>1, 1>0, 1>2",
                "k=2; 0>1, 0>1, 0>1",
                "k=2; 0>1",
            ] {
                let m = motif(lit);
                let v = variance(&model, &m, &config).unwrap();
                assert!(v >= 0.0);
                let (e, _) = expected_count_t_le_delta(&model, &m, &config).unwrap();
                let m2 = second_moment(&model, &m, &config).unwrap();
                assert!(m2 >= e * e);
            }
        }
    }

    #[test]
    fn unsupported_regime_rejected() {
        let model = uniform_model(4, 1, 1e-3, 100.0);
        let m = motif("k=2; 0>1");
        let bad = AnalysisConfig::new(200.0, 100.0).unwrap();
        assert!(matches!(
            variance(&model, &m, &bad),
            Err(Error::Unsupported(_))
        ));
    }

    #[test]
    fn order_factor_matches_hand_counts() {
        // fully shared: one chain of z, q = z, L = 1
        let full: Sharing = vec![Some(0), Some(1), Some(2)];
        assert_eq!(order_factor(3, &full), 1.0 / 6.0);
        // sharing only the last edge: chains glued at the top, q = 5, L = 6
        let top: Sharing = vec![None, None, Some(2)];
        assert_eq!(order_factor(3, &top), 6.0 / 120.0);
        // order-inconsistent cross sharing dies
        let cross: Sharing = vec![Some(1), Some(0), None];
        assert_eq!(order_factor(3, &cross), 0.0);
    }
}
