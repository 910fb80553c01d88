//! Best-relay selection from instantaneous channel amplitudes.
//!
//! Each relay scores its source→relay→destination path from a first-hop
//! quality `a2` and a second-hop quality `d2` (both squared amplitudes) and
//! the relay with the largest score forwards. Bottleneck selection scores
//! `min(a2, d2)`; harmonic selection scores `2·a2·d2 / (a2 + d2)`. Since
//! `min ≤ harmonic ≤ 2·min`, the two rules rarely disagree on the winner.

use ndarray::ArrayView1;
use serde::{Deserialize, Serialize};

use crate::channel::ChannelRealization;
use crate::{Complex, Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum SelectionRule {
    /// `min(a2, d2)`
    Rule1,
    /// Harmonic mean of `a2` and `d2`.
    Rule2,
    /// Uniformly random relay, a no-selection baseline.
    Random,
}

impl SelectionRule {
    pub fn name(self) -> &'static str {
        match self {
            Self::Rule1 => "Rule1",
            Self::Rule2 => "Rule2",
            Self::Random => "Random",
        }
    }
}

impl std::fmt::Display for SelectionRule {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

/// How the first-hop quality `a2` is derived from a channel row.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FirstHopMetric {
    /// Square of the mean entry magnitude, `((|h_1| + … + |h_t|) / t)²`.
    #[default]
    MeanAmplitude,
    /// The combining gain `Σ_j |h_j|²`.
    CombiningGain,
}

/// Per-relay amplitudes and scores for one channel realization.
#[derive(Debug, Clone, PartialEq)]
pub struct RelayMetrics {
    pub alpha_si: Vec<f64>,
    pub alpha_id: Vec<f64>,
    pub h_metric: Vec<f64>,
    pub rule: SelectionRule,
}

/// Mean magnitude of a channel row.
pub fn alpha_si(row: ArrayView1<Complex>) -> Result<f64> {
    if row.is_empty() {
        return Err(Error::InvalidDimension("empty channel row".into()));
    }
    Ok(row.iter().map(|h| h.norm()).sum::<f64>() / row.len() as f64)
}

pub fn metric_rule1(a2: f64, d2: f64) -> f64 {
    a2.min(d2)
}

/// Harmonic mean; zero when both inputs are zero.
pub fn metric_rule2(a2: f64, d2: f64) -> f64 {
    let sum = a2 + d2;
    if sum == 0.0 {
        0.0
    } else {
        2.0 * a2 * d2 / sum
    }
}

/// Index of the largest metric, lowest index on ties.
pub fn select_best(metrics: &[f64]) -> Result<usize> {
    if metrics.is_empty() {
        return Err(Error::InvalidInput("no relays to select from".into()));
    }
    let mut best = 0;
    for (i, &m) in metrics.iter().enumerate().skip(1) {
        if m > metrics[best] {
            best = i;
        }
    }
    Ok(best)
}

/// Score every relay of `ch`. For [`SelectionRule::Random`] the scores are the
/// Rule1 scores, which the caller ignores when picking.
pub fn relay_metrics(
    ch: &ChannelRealization,
    rule: SelectionRule,
    first_hop: FirstHopMetric,
) -> Result<RelayMetrics> {
    let mut alpha_si_v = Vec::with_capacity(ch.relays());
    let mut h_metric = Vec::with_capacity(ch.relays());
    let alpha_id_v: Vec<f64> = ch.g_rd.iter().map(|g| g.norm()).collect();
    for (row, &d) in ch.h_sr.rows().into_iter().zip(&alpha_id_v) {
        let a = alpha_si(row)?;
        let a2 = match first_hop {
            FirstHopMetric::MeanAmplitude => a * a,
            FirstHopMetric::CombiningGain => row.iter().map(|h| h.norm_sqr()).sum(),
        };
        let d2 = d * d;
        h_metric.push(match rule {
            SelectionRule::Rule2 => metric_rule2(a2, d2),
            SelectionRule::Rule1 | SelectionRule::Random => metric_rule1(a2, d2),
        });
        alpha_si_v.push(a);
    }
    Ok(RelayMetrics {
        alpha_si: alpha_si_v,
        alpha_id: alpha_id_v,
        h_metric,
        rule,
    })
}
