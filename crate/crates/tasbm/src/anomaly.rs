//! Observed-versus-expected comparison: ensemble MSRE, per-window
//! log-ratio series, and robust threshold flagging.

use crate::error::{Error, Result};
use crate::graph::Timestamp;

/// Per-window observed counts and model expectations for one motif.
#[derive(Debug, Clone, PartialEq)]
pub struct MotifSeries {
    pub motif: String,
    /// `(window_start, observed, expected)` with strictly increasing
    /// window starts.
    pub points: Vec<(Timestamp, f64, f64)>,
}

impl MotifSeries {
    pub fn new(motif: String, points: Vec<(Timestamp, f64, f64)>) -> Result<Self> {
        if points.windows(2).any(|w| w[0].0 >= w[1].0) {
            return Err(Error::InvalidArgument(
                "series windows must be strictly increasing".into(),
            ));
        }
        if points.iter().any(|&(_, o, e)| o < 0.0 || e < 0.0) {
            return Err(Error::InvalidArgument(
                "observed and expected values must be non-negative".into(),
            ));
        }
        Ok(MotifSeries { motif, points })
    }
}

/// Mean squared relative error of an observed ensemble against one
/// expectation: mean over i of ((N_i - N) / N_i)^2. Zero observations are
/// excluded and reported.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Msre {
    pub value: f64,
    pub excluded: usize,
}

pub fn msre(observed: &[f64], expected: f64) -> Result<Msre> {
    let mut sum = 0.0;
    let mut used = 0usize;
    for &n_i in observed {
        if n_i > 0.0 {
            let rel = (n_i - expected) / n_i;
            sum += rel * rel;
            used += 1;
        }
    }
    if used == 0 {
        return Err(Error::Undefined(
            "msre needs at least one non-zero observation".into(),
        ));
    }
    Ok(Msre {
        value: sum / used as f64,
        excluded: observed.len() - used,
    })
}

/// One window's log-ratio value.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LogRatioPoint {
    pub window_start: Timestamp,
    /// `ln(observed / expected)`; `None` when the expectation is not
    /// positive (undefined, never fabricated), negative infinity when the
    /// observation is zero.
    pub value: Option<f64>,
}

impl LogRatioPoint {
    /// Explicit serialization of the degenerate cases.
    pub fn render(&self) -> String {
        match self.value {
            None => "undef".to_string(),
            Some(v) if v == f64::NEG_INFINITY => "-inf".to_string(),
            Some(v) => v.to_string(),
        }
    }
}

/// ln(observed / expected) per window.
pub fn log_ratio_series(series: &MotifSeries) -> Vec<LogRatioPoint> {
    series
        .points
        .iter()
        .map(|&(w, observed, expected)| LogRatioPoint {
            window_start: w,
            value: if expected > 0.0 {
                Some((observed / expected).ln())
            } else {
                None
            },
        })
        .collect()
}

/// A window whose log-ratio deviates from the series median by more than
/// the threshold in median-absolute-deviation units.
#[derive(Debug, Clone, PartialEq)]
pub struct AnomalyFlag {
    pub window_start: Timestamp,
    pub motif: String,
    /// |log-ratio - median| / MAD.
    pub score: f64,
}

fn median(sorted: &[f64]) -> f64 {
    let n = sorted.len();
    if n % 2 == 1 {
        sorted[n / 2]
    } else {
        0.5 * (sorted[n / 2 - 1] + sorted[n / 2])
    }
}

/// Flags windows where the log-ratio sits more than `threshold` MADs from
/// the series median, sorted by score descending. Undefined points carry
/// no information and are skipped; a -inf point is infinitely many MADs
/// out and always flags.
pub fn flag_anomalies(
    series: &MotifSeries,
    threshold: f64,
) -> Result<Vec<AnomalyFlag>> {
    let ratios = log_ratio_series(series);
    let mut finite: Vec<f64> = ratios
        .iter()
        .filter_map(|p| p.value)
        .filter(|v| v.is_finite())
        .collect();
    if finite.len() < 5 {
        return Err(Error::InvalidArgument(format!(
            "robust flagging needs at least 5 usable windows, got {}",
            finite.len()
        )));
    }
    finite.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let med = median(&finite);
    let mut deviations: Vec<f64> = finite.iter().map(|v| (v - med).abs()).collect();
    deviations.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let mad = median(&deviations);

    let mut flags = Vec::new();
    for p in &ratios {
        let Some(v) = p.value else { continue };
        let score = if mad > 0.0 {
            (v - med).abs() / mad
        } else if v == med {
            0.0
        } else {
            f64::INFINITY
        };
        if score > threshold {
            flags.push(AnomalyFlag {
                window_start: p.window_start,
                motif: series.motif.clone(),
                score,
            });
        }
    }
    flags.sort_by(|a, b| b.score.partial_cmp(&a.score).unwrap());
    Ok(flags)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn series(points: Vec<(Timestamp, f64, f64)>) -> MotifSeries {
        MotifSeries::new("C3".into(), points).unwrap()
    }

    #[test]
    fn msre_perfect_model_is_zero() {
        let m = msre(&[5.0, 5.0, 5.0], 5.0).unwrap();
        assert_eq!(m.value, 0.0);
        assert_eq!(m.excluded, 0);
    }

    #[test]
    fn msre_single_observation() {
        let m = msre(&[2.0], 1.0).unwrap();
        assert_eq!(m.value, 0.25);
    }

    #[test]
    fn msre_excludes_zero_observations() {
        let m = msre(&[0.0, 2.0], 1.0).unwrap();
        assert_eq!(m.excluded, 1);
        assert_eq!(m.value, 0.25);
        assert!(msre(&[0.0, 0.0], 1.0).is_err());
    }

    #[test]
    fn msre_permutation_invariant() {
        let a = msre(&[1.0, 2.0, 3.0, 4.0], 2.5).unwrap();
        let b = msre(&[4.0, 2.0, 1.0, 3.0], 2.5).unwrap();
        assert_eq!(a.value, b.value);
    }

    #[test]
    fn log_ratio_examples() {
        let s = series(vec![
            (0, 3.0, 3.0),
            (1, 3.0 * std::f64::consts::E, 3.0),
            (2, 0.0, 3.0),
            (3, 1.0, 0.0),
        ]);
        let r = log_ratio_series(&s);
        assert_eq!(r[0].value, Some(0.0));
        assert!((r[1].value.unwrap() - 1.0).abs() < 1e-12);
        assert_eq!(r[2].value, Some(f64::NEG_INFINITY));
        assert_eq!(r[2].render(), "-inf");
        assert_eq!(r[3].value, None);
        assert_eq!(r[3].render(), "undef");
    }

    #[test]
    fn log_ratio_antisymmetric() {
        let s1 = series(vec![(0, 4.0, 2.0)]);
        let s2 = series(vec![(0, 2.0, 4.0)]);
        let a = log_ratio_series(&s1)[0].value.unwrap();
        let b = log_ratio_series(&s2)[0].value.unwrap();
        assert!((a + b).abs() < 1e-12);
    }

    #[test]
    fn constant_series_never_flags() {
        let s = series((0..10).map(|i| (i as i64, 7.0, 7.0)).collect());
        assert!(flag_anomalies(&s, 3.0).unwrap().is_empty());
    }

    #[test]
    fn single_spike_flags_once() {
        // jittered baseline so the MAD is positive, one large spike
        let mut points: Vec<(Timestamp, f64, f64)> = (0..11)
            .map(|i| {
                let obs = 10.0 * (1.0 + 0.01 * ((i % 3) as f64 - 1.0));
                (i as i64, obs, 10.0)
            })
            .collect();
        points[6].1 = 40.0;
        let s = series(points);
        let flags = flag_anomalies(&s, 3.0).unwrap();
        assert_eq!(flags.len(), 1);
        assert_eq!(flags[0].window_start, 6);
        assert!(flags[0].score > 3.0);
    }

    #[test]
    fn flag_count_non_increasing_in_threshold() {
        let points: Vec<(Timestamp, f64, f64)> = (0..20)
            .map(|i| {
                let obs = 10.0 + ((i * 7) % 5) as f64;
                (i as i64, obs, 10.0)
            })
            .collect();
        let s = series(points);
        let mut last = usize::MAX;
        for threshold in [0.5, 1.0, 2.0, 3.0, 5.0] {
            let n = flag_anomalies(&s, threshold).unwrap().len();
            assert!(n <= last);
            last = n;
        }
    }

    #[test]
    fn short_series_rejected() {
        let s = series((0..4).map(|i| (i as i64, 1.0, 1.0)).collect());
        assert!(flag_anomalies(&s, 3.0).is_err());
    }

    #[test]
    fn series_validation() {
        assert!(MotifSeries::new("A1".into(), vec![(0, 1.0, 1.0), (0, 1.0, 1.0)]).is_err());
        assert!(MotifSeries::new("A1".into(), vec![(0, -1.0, 1.0)]).is_err());
    }
}
