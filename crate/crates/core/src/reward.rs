//! Reward shaping for frame selection and sequence rating.
//!
//! A binary frame-quality track decomposes into rectangular pulses, one per
//! maximal run of qualified frames. Each pulse is smoothed into a trapezoid
//! that pays full credit on the plateau and partial credit on linear ramps to
//! either side; everywhere else the value is -1 so that selecting a frame far
//! from any qualified cluster is punished. The per-frame reward profile is the
//! pointwise-maximum envelope of all trapezoids, which handles overlapping and
//! far-apart clusters uniformly. The sequence-level rating is scored with a
//! cubic penalty on the distance between the predicted quality and the label.

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum RewardError {
    #[error("label track must not be empty")]
    EmptyLabels,
    #[error("label at index {index} is {value}, expected 0 or 1")]
    NonBinaryLabel { index: usize, value: u8 },
    #[error("length mismatch: {actions} actions vs {profile} profile entries")]
    LengthMismatch { actions: usize, profile: usize },
    #[error("action sequence must not be empty")]
    EmptyActions,
    #[error("action at index {index} is {value}, expected 0 or 1")]
    NonBinaryAction { index: usize, value: u8 },
    #[error("predicted quality {value} outside [0, 1]")]
    PredictionOutOfRange { value: f64 },
    #[error("trapezoid ramp width must be >= 1, got {0}")]
    InvalidRampWidth(usize),
    #[error("trapezoid amplitude must be > 0, got {0}")]
    InvalidAmplitude(f64),
    #[error("pulse list invalid: {0}")]
    InvalidPulses(String),
}

/// Per-frame binary quality track. Every entry is 0 (unqualified) or 1
/// (qualified); the track is never empty.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "Vec<u8>", into = "Vec<u8>")]
pub struct FrameLabels(Vec<u8>);

impl FrameLabels {
    pub fn new(values: Vec<u8>) -> Result<Self, RewardError> {
        if values.is_empty() {
            return Err(RewardError::EmptyLabels);
        }
        for (index, &value) in values.iter().enumerate() {
            if value > 1 {
                return Err(RewardError::NonBinaryLabel { index, value });
            }
        }
        Ok(Self(values))
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn as_slice(&self) -> &[u8] {
        &self.0
    }

    /// Number of qualified frames.
    pub fn ones(&self) -> usize {
        self.0.iter().filter(|&&v| v == 1).count()
    }
}

impl TryFrom<Vec<u8>> for FrameLabels {
    type Error = RewardError;
    fn try_from(values: Vec<u8>) -> Result<Self, Self::Error> {
        Self::new(values)
    }
}

impl From<FrameLabels> for Vec<u8> {
    fn from(labels: FrameLabels) -> Self {
        labels.0
    }
}

/// One rectangular pulse: a maximal run of qualified frames starting at
/// `start` and covering `extent + 1` frames (a single qualified frame has
/// extent 0).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Pulse {
    pub start: usize,
    pub extent: usize,
}

impl Pulse {
    /// Index of the last frame on the plateau.
    pub fn end(&self) -> usize {
        self.start + self.extent
    }
}

/// The pulse decomposition of a label track: one pulse per maximal run of
/// 1s, sorted, disjoint, and separated by at least one 0 frame.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PulseTrain {
    pulses: Vec<Pulse>,
    n_frames: usize,
}

impl PulseTrain {
    /// Builds a train from an explicit pulse list, enforcing the maximal-run
    /// invariants (sorted, non-adjacent, in bounds).
    pub fn new(pulses: Vec<Pulse>, n_frames: usize) -> Result<Self, RewardError> {
        if n_frames == 0 {
            return Err(RewardError::InvalidPulses("n_frames must be >= 1".into()));
        }
        for (i, p) in pulses.iter().enumerate() {
            if p.end() > n_frames - 1 {
                return Err(RewardError::InvalidPulses(format!(
                    "pulse {i} ends at {} but last frame is {}",
                    p.end(),
                    n_frames - 1
                )));
            }
            if i > 0 {
                let prev = &pulses[i - 1];
                // Maximal runs are separated by at least one zero frame.
                if p.start <= prev.end() + 1 {
                    return Err(RewardError::InvalidPulses(format!(
                        "pulse {i} at {} is not past pulse {} ending at {}",
                        p.start,
                        i - 1,
                        prev.end()
                    )));
                }
            }
        }
        Ok(Self { pulses, n_frames })
    }

    pub fn pulses(&self) -> &[Pulse] {
        &self.pulses
    }

    /// Total number of pulses.
    pub fn count(&self) -> usize {
        self.pulses.len()
    }

    pub fn n_frames(&self) -> usize {
        self.n_frames
    }

    /// Reconstructs the binary track this train was decomposed from.
    pub fn indicator(&self) -> FrameLabels {
        let mut values = vec![0u8; self.n_frames];
        for p in &self.pulses {
            for v in &mut values[p.start..=p.end()] {
                *v = 1;
            }
        }
        FrameLabels(values)
    }
}

/// Decomposes a label track into its maximal runs of qualified frames.
///
/// A run covering frames `f..=l` yields `Pulse { start: f, extent: l - f }`;
/// an all-zero track yields an empty train.
pub fn pulses_from_labels(labels: &FrameLabels) -> PulseTrain {
    let mut pulses = Vec::new();
    let mut run_start: Option<usize> = None;
    for (i, &v) in labels.as_slice().iter().enumerate() {
        match (v, run_start) {
            (1, None) => run_start = Some(i),
            (0, Some(s)) => {
                pulses.push(Pulse { start: s, extent: i - 1 - s });
                run_start = None;
            }
            _ => {}
        }
    }
    if let Some(s) = run_start {
        pulses.push(Pulse { start: s, extent: labels.len() - 1 - s });
    }
    PulseTrain { pulses, n_frames: labels.len() }
}

/// Shape of the trapezoidal credit around each pulse: `ramp_width` frames of
/// linear ramp on each side, `amplitude` on the plateau.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TrapezoidParams {
    pub ramp_width: usize,
    pub amplitude: f64,
}

impl Default for TrapezoidParams {
    fn default() -> Self {
        Self { ramp_width: 5, amplitude: 1.0 }
    }
}

impl TrapezoidParams {
    pub fn new(ramp_width: usize, amplitude: f64) -> Result<Self, RewardError> {
        let params = Self { ramp_width, amplitude };
        params.validate()?;
        Ok(params)
    }

    pub fn validate(&self) -> Result<(), RewardError> {
        if self.ramp_width < 1 {
            return Err(RewardError::InvalidRampWidth(self.ramp_width));
        }
        if self.amplitude <= 0.0 || !self.amplitude.is_finite() {
            return Err(RewardError::InvalidAmplitude(self.amplitude));
        }
        Ok(())
    }
}

/// Trapezoidal credit of a single pulse at position `id`.
///
/// Rises linearly from 0 at `start - ramp` to `amplitude` at `start`, holds
/// the plateau through `start + extent`, falls back to 0 at
/// `start + extent + ramp`, and is -1 everywhere else. Defined for real `id`
/// even though profiles sample it at integer frames. The ramp is computed as
/// `amplitude * (offset / ramp)` so the boundary values at `start` and
/// `start + extent` are exactly `amplitude`.
pub fn trapezoid_value(id: f64, start: f64, extent: f64, params: &TrapezoidParams) -> f64 {
    let d = params.ramp_width as f64;
    let a = params.amplitude;
    let end = start + extent;
    if id >= start - d && id <= start {
        a * ((id - start + d) / d)
    } else if id > start && id <= end {
        a
    } else if id > end && id <= end + d {
        a * ((end + d - id) / d)
    } else {
        -1.0
    }
}

/// Per-frame reward values over one episode, in `[-1, amplitude]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RewardProfile {
    values: Vec<f64>,
}

impl RewardProfile {
    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }
}

/// Pointwise-maximum envelope of all pulse trapezoids, sampled at frames
/// `0..n_frames`. With no pulses every value is -1.
pub fn envelope_profile(
    train: &PulseTrain,
    n_frames: usize,
    params: &TrapezoidParams,
) -> RewardProfile {
    let values = (0..n_frames)
        .map(|id| {
            train.pulses.iter().fold(-1.0f64, |acc, p| {
                acc.max(trapezoid_value(id as f64, p.start as f64, p.extent as f64, params))
            })
        })
        .collect();
    RewardProfile { values }
}

/// Frame-selection reward: the mean of `action * profile` over all frames.
///
/// Selecting a frame outside every trapezoid contributes its -1 penalty;
/// unselected frames contribute nothing.
pub fn frame_reward(actions: &[u8], profile: &RewardProfile) -> Result<f64, RewardError> {
    if actions.len() != profile.len() {
        return Err(RewardError::LengthMismatch {
            actions: actions.len(),
            profile: profile.len(),
        });
    }
    if actions.is_empty() {
        return Err(RewardError::EmptyActions);
    }
    let mut sum = 0.0;
    for (index, (&a, &v)) in actions.iter().zip(profile.values()).enumerate() {
        if a > 1 {
            return Err(RewardError::NonBinaryAction { index, value: a });
        }
        sum += a as f64 * v;
    }
    Ok(sum / actions.len() as f64)
}

/// Sequence-rating reward: cubic penalty `-(|q_hat - label|)^3`, zero iff the
/// prediction is exact.
pub fn video_reward(q_hat: f64, video_label: u8) -> Result<f64, RewardError> {
    if !(0.0..=1.0).contains(&q_hat) {
        return Err(RewardError::PredictionOutOfRange { value: q_hat });
    }
    if video_label > 1 {
        return Err(RewardError::NonBinaryLabel { index: 0, value: video_label });
    }
    Ok(-(q_hat - video_label as f64).abs().powi(3))
}

/// Combined objective `r_sub + beta * r_sup`. With `beta == 0` the rating
/// reward is excluded entirely.
pub fn total_reward(r_sub: f64, r_sup: f64, beta: f64) -> f64 {
    r_sub + beta * r_sup
}
