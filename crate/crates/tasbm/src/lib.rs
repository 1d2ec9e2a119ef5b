//! Temporal Activity State Block Model (TASBM) toolkit.
//!
//! Models a timestamped edge stream as Poisson edge arrivals between
//! per-window node activity states, and computes closed-form expected
//! frequencies and variances of delta-instances of temporal motifs in time
//! independent of graph size. An exact enumerating counter provides the
//! observed side of every comparison, a seeded generator samples networks
//! from the model (with optional planted anomalies), and a log-ratio scorer
//! flags windows where observed and expected counts diverge.

#![forbid(unsafe_code)]

pub mod analytics;
pub mod anomaly;
pub mod combinatorics;
pub mod count;
pub mod error;
pub mod fit;
pub mod generator;
pub mod graph;
pub mod motif;

pub use error::{Error, Result};
pub use graph::{TemporalEdge, TemporalGraph, WindowView};
pub use motif::{MotifLabel, TemporalMotif};
