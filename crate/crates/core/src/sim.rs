//! Seeded synthetic-episode generator.
//!
//! Real scan recordings are not available here, so training and evaluation
//! run on generated episodes that keep the same structure: a fixed-length
//! sequence of feature vectors, a few planted clusters of qualified frames
//! (possibly overlapping, in which case the runs merge), and a sequence-level
//! quality label derived from how much of the sequence is qualified.
//!
//! Frames are drawn from one of two class-conditional means (qualified vs
//! unqualified) plus additive noise scaled by `1 / signal_to_noise`, then
//! smoothed over a 3-frame window so adjacent frames correlate. Everything is
//! a pure function of `(config, index)`: the same seed always reproduces the
//! same corpus byte-for-byte.

use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::Path;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::reward::FrameLabels;

#[derive(Debug, Error)]
pub enum SimError {
    #[error("invalid config field `{field}`: {reason}")]
    InvalidConfig { field: &'static str, reason: String },
    #[error("corpus I/O failed: {0}")]
    Io(#[from] std::io::Error),
    #[error("corpus parse error at line {line}: {source}")]
    Parse {
        line: usize,
        #[source]
        source: serde_json::Error,
    },
}

/// Generator settings. All randomness flows from `seed`; every other field
/// shapes the planted structure.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SimConfig {
    /// Frames per episode.
    #[serde(default = "default_n_frames")]
    pub n_frames: usize,
    /// Length of each per-frame feature vector.
    #[serde(default = "default_feature_dim")]
    pub feature_dim: usize,
    /// Inclusive (min, max) number of qualified clusters planted per episode.
    #[serde(default = "default_cluster_count_range")]
    pub cluster_count_range: (usize, usize),
    /// Inclusive (min, max) cluster width in frames.
    #[serde(default = "default_cluster_width_range")]
    pub cluster_width_range: (usize, usize),
    /// Chance that a cluster is placed overlapping an earlier one.
    #[serde(default = "default_overlap_probability")]
    pub overlap_probability: f64,
    /// Class-mean separation over noise scale; noise std is `1 / this`.
    #[serde(default = "default_signal_to_noise")]
    pub signal_to_noise: f64,
    /// An episode is labeled good overall when at least this fraction of its
    /// frames is qualified.
    #[serde(default = "default_video_quality_threshold")]
    pub video_quality_threshold: f64,
    #[serde(default)]
    pub seed: u64,
}

fn default_n_frames() -> usize {
    128
}
fn default_feature_dim() -> usize {
    16
}
fn default_cluster_count_range() -> (usize, usize) {
    (0, 3)
}
fn default_cluster_width_range() -> (usize, usize) {
    (8, 24)
}
fn default_overlap_probability() -> f64 {
    0.2
}
fn default_signal_to_noise() -> f64 {
    10.0
}
fn default_video_quality_threshold() -> f64 {
    0.25
}

impl Default for SimConfig {
    fn default() -> Self {
        Self {
            n_frames: default_n_frames(),
            feature_dim: default_feature_dim(),
            cluster_count_range: default_cluster_count_range(),
            cluster_width_range: default_cluster_width_range(),
            overlap_probability: default_overlap_probability(),
            signal_to_noise: default_signal_to_noise(),
            video_quality_threshold: default_video_quality_threshold(),
            seed: 0,
        }
    }
}

impl SimConfig {
    pub fn validate(&self) -> Result<(), SimError> {
        let err = |field: &'static str, reason: String| Err(SimError::InvalidConfig { field, reason });
        if self.n_frames < 1 {
            return err("n_frames", "must be >= 1".into());
        }
        if self.feature_dim < 1 {
            return err("feature_dim", "must be >= 1".into());
        }
        let (cmin, cmax) = self.cluster_count_range;
        if cmin > cmax {
            return err("cluster_count_range", format!("min {cmin} > max {cmax}"));
        }
        let (wmin, wmax) = self.cluster_width_range;
        if wmin < 1 || wmin > wmax {
            return err("cluster_width_range", format!("need 1 <= min <= max, got ({wmin}, {wmax})"));
        }
        if wmax > self.n_frames {
            return err(
                "cluster_width_range",
                format!("max width {wmax} exceeds n_frames {}", self.n_frames),
            );
        }
        if !(0.0..=1.0).contains(&self.overlap_probability) {
            return err("overlap_probability", format!("{} outside [0, 1]", self.overlap_probability));
        }
        if self.signal_to_noise <= 0.0 || !self.signal_to_noise.is_finite() {
            return err("signal_to_noise", format!("must be > 0, got {}", self.signal_to_noise));
        }
        if !(0.0..=1.0).contains(&self.video_quality_threshold) {
            return err(
                "video_quality_threshold",
                format!("{} outside [0, 1]", self.video_quality_threshold),
            );
        }
        Ok(())
    }
}

/// One generated sequence: per-frame features, per-frame quality labels, and
/// the overall sequence label.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Episode {
    pub id: String,
    pub video_label: u8,
    pub frame_labels: FrameLabels,
    pub features: Vec<Vec<f32>>,
}

impl Episode {
    pub fn n_frames(&self) -> usize {
        self.features.len()
    }

    pub fn feature_dim(&self) -> usize {
        self.features.first().map_or(0, Vec::len)
    }
}

/// Class-conditional feature means. Both depend only on the seed, so every
/// episode of a corpus shares them; they sit at +/- 0.5 along one random
/// unit direction.
fn class_means(config: &SimConfig) -> (Vec<f64>, Vec<f64>) {
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    rng.set_stream(0);
    let mut direction: Vec<f64> =
        (0..config.feature_dim).map(|_| rng.sample(StandardNormal)).collect();
    let norm = direction.iter().map(|v| v * v).sum::<f64>().sqrt();
    if norm > 1e-12 {
        for v in &mut direction {
            *v /= norm;
        }
    } else {
        direction[0] = 1.0;
    }
    let qualified = direction.iter().map(|v| 0.5 * v).collect();
    let unqualified = direction.iter().map(|v| -0.5 * v).collect();
    (qualified, unqualified)
}

/// Generates the episode at `index`. Deterministic for fixed `(config.seed,
/// index)`; distinct indices use distinct generator streams.
pub fn generate_episode(config: &SimConfig, index: usize) -> Result<Episode, SimError> {
    config.validate()?;
    let n = config.n_frames;
    let (mean_q, mean_u) = class_means(config);

    // Stream 0 is reserved for the corpus-level class means.
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    rng.set_stream(index as u64 + 1);

    // Plant clusters; overlapping placements merge into longer runs of 1s.
    let mut labels = vec![0u8; n];
    let (cmin, cmax) = config.cluster_count_range;
    let cluster_count = rng.gen_range(cmin..=cmax);
    let mut placed: Vec<(usize, usize)> = Vec::with_capacity(cluster_count);
    for _ in 0..cluster_count {
        let (wmin, wmax) = config.cluster_width_range;
        let width = rng.gen_range(wmin..=wmax);
        let overlap = !placed.is_empty() && rng.gen_bool(config.overlap_probability);
        let start = if overlap {
            let (ps, pw) = placed[rng.gen_range(0..placed.len())];
            // Any start in this interval intersects the chosen cluster.
            let lo = ps.saturating_sub(width - 1);
            let hi = (n - width).min(ps + pw - 1);
            rng.gen_range(lo..=hi)
        } else {
            rng.gen_range(0..=n - width)
        };
        for l in &mut labels[start..start + width] {
            *l = 1;
        }
        placed.push((start, width));
    }

    // Class-conditional features with additive noise, then a 3-frame moving
    // average so neighboring frames correlate.
    let noise_std = 1.0 / config.signal_to_noise;
    let raw: Vec<Vec<f64>> = labels
        .iter()
        .map(|&l| {
            let mean = if l == 1 { &mean_q } else { &mean_u };
            mean.iter()
                .map(|&m| m + noise_std * rng.sample::<f64, _>(StandardNormal))
                .collect()
        })
        .collect();
    let features: Vec<Vec<f32>> = (0..n)
        .map(|t| {
            let lo = t.saturating_sub(1);
            let hi = (t + 1).min(n - 1);
            let window = (hi - lo + 1) as f64;
            (0..config.feature_dim)
                .map(|d| {
                    let sum: f64 = (lo..=hi).map(|s| raw[s][d]).sum();
                    (sum / window) as f32
                })
                .collect()
        })
        .collect();

    let qualified_fraction = labels.iter().filter(|&&l| l == 1).count() as f64 / n as f64;
    let video_label = u8::from(qualified_fraction >= config.video_quality_threshold);

    Ok(Episode {
        id: format!("ep{index:06}"),
        video_label,
        frame_labels: FrameLabels::new(labels).expect("planted labels are binary and non-empty"),
        features,
    })
}

/// Generates a train/test split over disjoint index ranges (`0..n_train` and
/// `n_train..n_train + n_test`), so episode ids never collide.
pub fn generate_corpus(
    config: &SimConfig,
    n_train: usize,
    n_test: usize,
) -> Result<(Vec<Episode>, Vec<Episode>), SimError> {
    config.validate()?;
    let train = (0..n_train)
        .map(|i| generate_episode(config, i))
        .collect::<Result<Vec<_>, _>>()?;
    let test = (n_train..n_train + n_test)
        .map(|i| generate_episode(config, i))
        .collect::<Result<Vec<_>, _>>()?;
    Ok((train, test))
}

/// Writes episodes as JSON Lines, one episode per line.
pub fn write_corpus(episodes: &[Episode], path: &Path) -> Result<(), SimError> {
    let mut writer = BufWriter::new(File::create(path)?);
    for episode in episodes {
        serde_json::to_writer(&mut writer, episode)
            .map_err(|e| SimError::Io(std::io::Error::from(e)))?;
        writer.write_all(b"\n")?;
    }
    writer.flush()?;
    Ok(())
}

/// Reads a JSON Lines corpus; a malformed record reports its 1-based line.
pub fn read_corpus(path: &Path) -> Result<Vec<Episode>, SimError> {
    let reader = BufReader::new(File::open(path)?);
    let mut episodes = Vec::new();
    for (i, line) in reader.lines().enumerate() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let episode =
            serde_json::from_str(&line).map_err(|source| SimError::Parse { line: i + 1, source })?;
        episodes.push(episode);
    }
    Ok(episodes)
}
