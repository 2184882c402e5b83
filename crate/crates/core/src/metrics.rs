//! Frame- and sequence-level evaluation.
//!
//! Inference is greedy: each probability is thresholded at 0.5 and the
//! resulting decisions are scored with the standard confusion-based rates
//! (accuracy, sensitivity, specificity, precision, F1) plus AUC computed
//! from the pre-threshold probabilities. Frame metrics pool every frame of
//! every episode (micro-averaging); sequence metrics score one decision per
//! episode.
//!
//! AUC uses the rank formulation: tie-averaged ranks give the fraction of
//! (positive, negative) pairs the scores order correctly, with ties worth
//! half credit. That equals the trapezoidal area under the ROC curve, which
//! the tests verify independently.
//!
//! Degenerate denominators (say, no positive predictions) report the metric
//! as 0 and flag it, rather than erroring, so batch evaluation never aborts.
//! An AUC over single-class labels is genuinely undefined and is reported as
//! a missing value.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::agents::{greedy_actions, AgentError, PolicyParams};
use crate::sim::Episode;

#[derive(Debug, Error)]
pub enum MetricsError {
    #[error("length mismatch: {predictions} predictions vs {labels} labels")]
    LengthMismatch { predictions: usize, labels: usize },
    #[error("nothing to evaluate")]
    Empty,
    #[error("label at index {index} is {value}, expected 0 or 1")]
    NonBinaryLabel { index: usize, value: u8 },
    #[error("prediction at index {index} is {value}, expected 0 or 1")]
    NonBinaryPrediction { index: usize, value: u8 },
    #[error("score at index {index} is not finite")]
    NonFiniteScore { index: usize },
    #[error("AUC undefined: need both classes, found {n_pos} positive and {n_neg} negative")]
    SingleClass { n_pos: usize, n_neg: usize },
    #[error(transparent)]
    Agent(#[from] AgentError),
}

/// Standard confusion counts with class 1 ("qualified") positive.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConfusionCounts {
    pub true_pos: usize,
    pub false_pos: usize,
    pub true_neg: usize,
    pub false_neg: usize,
}

impl ConfusionCounts {
    pub fn total(&self) -> usize {
        self.true_pos + self.false_pos + self.true_neg + self.false_neg
    }
}

/// Counts prediction/label agreement over equal-length binary sequences.
pub fn confusion(predictions: &[u8], labels: &[u8]) -> Result<ConfusionCounts, MetricsError> {
    if predictions.len() != labels.len() {
        return Err(MetricsError::LengthMismatch {
            predictions: predictions.len(),
            labels: labels.len(),
        });
    }
    if predictions.is_empty() {
        return Err(MetricsError::Empty);
    }
    let mut counts = ConfusionCounts { true_pos: 0, false_pos: 0, true_neg: 0, false_neg: 0 };
    for (index, (&p, &l)) in predictions.iter().zip(labels).enumerate() {
        if p > 1 {
            return Err(MetricsError::NonBinaryPrediction { index, value: p });
        }
        if l > 1 {
            return Err(MetricsError::NonBinaryLabel { index, value: l });
        }
        match (p, l) {
            (1, 1) => counts.true_pos += 1,
            (1, 0) => counts.false_pos += 1,
            (0, 0) => counts.true_neg += 1,
            _ => counts.false_neg += 1,
        }
    }
    Ok(counts)
}

/// Confusion-derived rates; metrics whose denominator was zero are 0 and
/// listed in `degenerate`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Rates {
    pub acc: f64,
    pub sen: f64,
    pub spe: f64,
    pub pre: f64,
    pub f1: f64,
    pub degenerate: Vec<String>,
}

pub fn metrics_from_confusion(c: &ConfusionCounts) -> Rates {
    let mut degenerate = Vec::new();
    let mut ratio = |name: &str, num: usize, den: usize| -> f64 {
        if den == 0 {
            degenerate.push(name.to_string());
            0.0
        } else {
            num as f64 / den as f64
        }
    };
    let acc = ratio("acc", c.true_pos + c.true_neg, c.total());
    let sen = ratio("sen", c.true_pos, c.true_pos + c.false_neg);
    let spe = ratio("spe", c.true_neg, c.true_neg + c.false_pos);
    let pre = ratio("pre", c.true_pos, c.true_pos + c.false_pos);
    let f1 = if pre + sen > 0.0 {
        2.0 * pre * sen / (pre + sen)
    } else {
        degenerate.push("f1".to_string());
        0.0
    };
    Rates { acc, sen, spe, pre, f1, degenerate }
}

/// Probability that a random positive outscores a random negative, ties
/// counted half, computed via tie-averaged ranks.
pub fn auc(scores: &[f64], labels: &[u8]) -> Result<f64, MetricsError> {
    if scores.len() != labels.len() {
        return Err(MetricsError::LengthMismatch { predictions: scores.len(), labels: labels.len() });
    }
    if scores.is_empty() {
        return Err(MetricsError::Empty);
    }
    for (index, &s) in scores.iter().enumerate() {
        if !s.is_finite() {
            return Err(MetricsError::NonFiniteScore { index });
        }
    }
    let mut n_pos = 0usize;
    for (index, &l) in labels.iter().enumerate() {
        if l > 1 {
            return Err(MetricsError::NonBinaryLabel { index, value: l });
        }
        n_pos += usize::from(l == 1);
    }
    let n_neg = labels.len() - n_pos;
    if n_pos == 0 || n_neg == 0 {
        return Err(MetricsError::SingleClass { n_pos, n_neg });
    }

    let n = scores.len();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| scores[a].total_cmp(&scores[b]));
    // Tie groups share the average of the 1-based ranks they span, so rank
    // sums stay exact in floating point (integers and half-integers only).
    let mut rank_sum_pos = 0.0f64;
    let mut i = 0;
    while i < n {
        let mut j = i;
        while j + 1 < n && scores[order[j + 1]] == scores[order[i]] {
            j += 1;
        }
        let avg_rank = (i + j + 2) as f64 / 2.0;
        for &item in &order[i..=j] {
            if labels[item] == 1 {
                rank_sum_pos += avg_rank;
            }
        }
        i = j + 1;
    }
    let u = rank_sum_pos - (n_pos * (n_pos + 1)) as f64 / 2.0;
    Ok(u / (n_pos as f64 * n_neg as f64))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MetricLevel {
    Frame,
    Video,
}

/// Presentation view of a report: percentages with two decimals, `--` where
/// a value is undefined.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PercentView {
    pub acc: String,
    pub sen: String,
    pub spe: String,
    pub pre: String,
    pub f1: String,
    pub auc: String,
}

fn percent(value: f64) -> String {
    format!("{:.2}", value * 100.0)
}

/// One level's evaluation: raw fractions at full precision plus the
/// percentage view.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MetricsReport {
    pub level: MetricLevel,
    pub n_items: usize,
    pub confusion: ConfusionCounts,
    pub acc: f64,
    pub sen: f64,
    pub spe: f64,
    pub pre: f64,
    pub f1: f64,
    /// Missing when the labels contain a single class.
    pub auc: Option<f64>,
    pub degenerate: Vec<String>,
    pub percent: PercentView,
}

fn build_report(
    level: MetricLevel,
    predictions: &[u8],
    labels: &[u8],
    scores: &[f64],
) -> Result<MetricsReport, MetricsError> {
    let counts = confusion(predictions, labels)?;
    let rates = metrics_from_confusion(&counts);
    let auc_value = match auc(scores, labels) {
        Ok(v) => Some(v),
        Err(MetricsError::SingleClass { .. }) => None,
        Err(e) => return Err(e),
    };
    Ok(MetricsReport {
        level,
        n_items: labels.len(),
        confusion: counts,
        acc: rates.acc,
        sen: rates.sen,
        spe: rates.spe,
        pre: rates.pre,
        f1: rates.f1,
        auc: auc_value,
        percent: PercentView {
            acc: percent(rates.acc),
            sen: percent(rates.sen),
            spe: percent(rates.spe),
            pre: percent(rates.pre),
            f1: percent(rates.f1),
            auc: auc_value.map_or_else(|| "--".to_string(), percent),
        },
        degenerate: rates.degenerate,
    })
}

/// Greedy inference for one episode: thresholded actions plus the
/// probabilities they came from, alongside the ground truth.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EpisodePrediction {
    pub episode_id: String,
    pub frame_probs: Vec<f64>,
    pub frame_actions: Vec<u8>,
    pub frame_labels: Vec<u8>,
    pub video_prob: f64,
    pub video_action: u8,
    pub video_label: u8,
}

/// Runs greedy inference over a corpus.
pub fn predict_corpus(
    params: &PolicyParams,
    corpus: &[Episode],
) -> Result<Vec<EpisodePrediction>, MetricsError> {
    if corpus.is_empty() {
        return Err(MetricsError::Empty);
    }
    corpus
        .iter()
        .map(|episode| {
            let pass = params.forward(episode)?;
            let trace = greedy_actions(pass.frame_probs(), pass.video_prob());
            Ok(EpisodePrediction {
                episode_id: episode.id.clone(),
                frame_probs: trace.frame_probs,
                frame_actions: trace.frame_actions,
                frame_labels: episode.frame_labels.as_slice().to_vec(),
                video_prob: trace.video_prob,
                video_action: trace.video_action,
                video_label: episode.video_label,
            })
        })
        .collect()
}

/// Scores already-computed predictions at both levels.
pub fn evaluate_predictions(
    predictions: &[EpisodePrediction],
) -> Result<(MetricsReport, MetricsReport), MetricsError> {
    if predictions.is_empty() {
        return Err(MetricsError::Empty);
    }
    let mut frame_preds = Vec::new();
    let mut frame_labels = Vec::new();
    let mut frame_scores = Vec::new();
    let mut video_preds = Vec::new();
    let mut video_labels = Vec::new();
    let mut video_scores = Vec::new();
    for p in predictions {
        frame_preds.extend_from_slice(&p.frame_actions);
        frame_labels.extend_from_slice(&p.frame_labels);
        frame_scores.extend_from_slice(&p.frame_probs);
        video_preds.push(p.video_action);
        video_labels.push(p.video_label);
        video_scores.push(p.video_prob);
    }
    let frame = build_report(MetricLevel::Frame, &frame_preds, &frame_labels, &frame_scores)?;
    let video = build_report(MetricLevel::Video, &video_preds, &video_labels, &video_scores)?;
    Ok((frame, video))
}

/// Greedy inference plus scoring in one call.
pub fn evaluate_corpus(
    params: &PolicyParams,
    corpus: &[Episode],
) -> Result<(MetricsReport, MetricsReport), MetricsError> {
    evaluate_predictions(&predict_corpus(params, corpus)?)
}
