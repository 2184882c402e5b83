//! Policy-gradient training.
//!
//! Training runs in two phases. First the frame-selection policy is
//! pretrained alone against the frame reward, to warm its recurrence up
//! before the rating head depends on it. Then both policies train jointly
//! against the combined reward `r_sub + beta * r_sup`.
//!
//! Each update rolls out a fixed number of sampled action traces (default
//! 5, one per distinct episode of a shuffled pass), weights every trace's
//! log-probability gradient by its reward minus a running baseline, averages
//! over the rollouts, and applies one momentum-SGD ascent step. The baseline
//! is an exponential moving average of recent rewards; without it,
//! score-function gradients at this scale are too noisy to be useful.
//!
//! The rating reward is a differentiable function of the rating probability,
//! so alongside the score-function term its pathwise derivative is fed into
//! the same backward pass by default. Both estimator routes share one
//! backward evaluation because gradient seeds combine linearly.

use std::time::Instant;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::agents::{sample_actions, AgentDims, AgentError, PolicyParams};
use crate::reward::{
    envelope_profile, frame_reward, pulses_from_labels, total_reward, video_reward, RewardError,
    RewardProfile, TrapezoidParams,
};
use crate::sim::Episode;

/// Generator streams, keeping the two phases' randomness independent of each
/// other for a shared seed.
const PRETRAIN_STREAM: u64 = 1;
const JOINT_STREAM: u64 = 2;

const LOG_CSV_HEADER: &str = "epoch,r_sub,r_sup,r_total,lr,baseline,seconds";

#[derive(Debug, Error)]
pub enum TrainError {
    #[error("invalid training config field `{field}`: {reason}")]
    InvalidConfig { field: &'static str, reason: String },
    #[error("training corpus is empty")]
    EmptyCorpus,
    #[error("non-finite gradient in parameter block {block} at epoch {epoch}")]
    NonFiniteGradient { block: &'static str, epoch: usize },
    #[error("epoch callback failed at epoch {epoch}: {reason}")]
    Observer { epoch: usize, reason: String },
    #[error(transparent)]
    Agent(#[from] AgentError),
    #[error(transparent)]
    Reward(#[from] RewardError),
    #[error("training log parse error at line {line}: {reason}")]
    LogParse { line: usize, reason: String },
}

/// Training hyperparameters. The defaults are the reference settings: 5
/// rollouts per update, learning rate 1e-5 halved every 30 epochs, momentum
/// 0.9.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct TrainConfig {
    /// Sampled rollouts folded into each gradient update.
    pub episodes_per_update: usize,
    pub learning_rate: f64,
    pub momentum: f64,
    /// Learning-rate multiplier applied every `lr_decay_every` epochs.
    pub lr_decay_factor: f64,
    pub lr_decay_every: usize,
    /// Weight of the rating reward inside the combined objective; 0 removes
    /// the rating reward from training entirely.
    pub beta: f64,
    pub pretrain_epochs: usize,
    pub joint_epochs: usize,
    /// Momentum of the exponential-moving-average reward baseline.
    pub baseline_momentum: f64,
    pub seed: u64,
    /// Shape of the per-frame reward profile built from each episode's
    /// labels.
    pub trapezoid: TrapezoidParams,
    /// Optional max-norm gradient clip; off by default.
    pub grad_clip: Option<f64>,
    /// Feed the rating reward's pathwise derivative alongside the
    /// score-function term (on by default).
    pub pathwise_sup: bool,
    /// Replace reward-driven pretraining with direct likelihood ascent on
    /// the frame labels (off by default).
    pub supervised_warmup: bool,
    /// Zero the fusion weights and their updates, so the rating policy
    /// never reads the selection policy's features (rating-only ablation).
    pub ablate_sub_fusion: bool,
    /// Policy sizes used when initializing parameters for this run.
    pub dims: AgentDims,
}

impl Default for TrainConfig {
    fn default() -> Self {
        Self {
            episodes_per_update: 5,
            learning_rate: 1e-5,
            momentum: 0.9,
            lr_decay_factor: 0.5,
            lr_decay_every: 30,
            beta: 1.0,
            pretrain_epochs: 30,
            joint_epochs: 30,
            baseline_momentum: 0.9,
            seed: 0,
            trapezoid: TrapezoidParams::default(),
            grad_clip: None,
            pathwise_sup: true,
            supervised_warmup: false,
            ablate_sub_fusion: false,
            dims: AgentDims::default(),
        }
    }
}

impl TrainConfig {
    pub fn validate(&self) -> Result<(), TrainError> {
        let err = |field: &'static str, reason: String| Err(TrainError::InvalidConfig { field, reason });
        if self.episodes_per_update < 1 {
            return err("episodes_per_update", "must be >= 1".into());
        }
        // A zero learning rate is allowed deliberately: it turns training
        // into a dry run whose parameters provably never move.
        if self.learning_rate < 0.0 || !self.learning_rate.is_finite() {
            return err("learning_rate", format!("must be finite and >= 0, got {}", self.learning_rate));
        }
        if !(0.0..1.0).contains(&self.momentum) {
            return err("momentum", format!("{} outside [0, 1)", self.momentum));
        }
        if !(self.lr_decay_factor > 0.0 && self.lr_decay_factor <= 1.0) {
            return err("lr_decay_factor", format!("{} outside (0, 1]", self.lr_decay_factor));
        }
        if self.lr_decay_every < 1 {
            return err("lr_decay_every", "must be >= 1".into());
        }
        if !self.beta.is_finite() || self.beta < 0.0 {
            return err("beta", format!("must be finite and >= 0, got {}", self.beta));
        }
        if !(0.0..1.0).contains(&self.baseline_momentum) {
            return err("baseline_momentum", format!("{} outside [0, 1)", self.baseline_momentum));
        }
        if let Some(clip) = self.grad_clip {
            if clip <= 0.0 || !clip.is_finite() {
                return err("grad_clip", format!("must be finite and > 0, got {clip}"));
            }
        }
        self.trapezoid
            .validate()
            .map_err(|e| TrainError::InvalidConfig { field: "trapezoid", reason: e.to_string() })?;
        self.dims
            .validate()
            .map_err(|e| TrainError::InvalidConfig { field: "dims", reason: e.to_string() })?;
        Ok(())
    }
}

/// Stepwise-decayed learning rate for a phase-local epoch index:
/// `learning_rate * lr_decay_factor ^ floor(epoch / lr_decay_every)`.
pub fn learning_rate_at(config: &TrainConfig, epoch: usize) -> f64 {
    config.learning_rate * config.lr_decay_factor.powi((epoch / config.lr_decay_every) as i32)
}

/// One epoch's summary row.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EpochRecord {
    pub epoch: usize,
    /// Mean frame-selection reward over the epoch's rollouts.
    pub r_sub: f64,
    /// Mean rating reward over the epoch's rollouts (observed even when it
    /// is excluded from the objective).
    pub r_sup: f64,
    /// Mean optimized objective over the epoch's rollouts.
    pub r_total: f64,
    pub lr: f64,
    /// Baseline value at the end of the epoch.
    pub baseline: f64,
    pub seconds: f64,
}

/// Per-epoch training history.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct TrainLog {
    pub records: Vec<EpochRecord>,
}

impl TrainLog {
    /// Serializes as CSV with full-precision floats, so parsing the file
    /// back reproduces every value exactly.
    pub fn to_csv(&self) -> String {
        let mut out = String::from(LOG_CSV_HEADER);
        out.push('\n');
        for r in &self.records {
            out.push_str(&format!(
                "{},{},{},{},{},{},{}\n",
                r.epoch, r.r_sub, r.r_sup, r.r_total, r.lr, r.baseline, r.seconds
            ));
        }
        out
    }

    pub fn from_csv(text: &str) -> Result<Self, TrainError> {
        let mut lines = text.lines().enumerate();
        match lines.next() {
            Some((_, header)) if header == LOG_CSV_HEADER => {}
            Some((_, header)) => {
                return Err(TrainError::LogParse {
                    line: 1,
                    reason: format!("unexpected header `{header}`"),
                })
            }
            None => return Err(TrainError::LogParse { line: 1, reason: "empty log".into() }),
        }
        let mut records = Vec::new();
        for (i, line) in lines {
            if line.trim().is_empty() {
                continue;
            }
            let fields: Vec<&str> = line.split(',').collect();
            if fields.len() != 7 {
                return Err(TrainError::LogParse {
                    line: i + 1,
                    reason: format!("expected 7 fields, found {}", fields.len()),
                });
            }
            let parse_f = |idx: usize| -> Result<f64, TrainError> {
                fields[idx].parse().map_err(|e| TrainError::LogParse {
                    line: i + 1,
                    reason: format!("field {}: {e}", idx + 1),
                })
            };
            records.push(EpochRecord {
                epoch: fields[0].parse().map_err(|e| TrainError::LogParse {
                    line: i + 1,
                    reason: format!("field 1: {e}"),
                })?,
                r_sub: parse_f(1)?,
                r_sup: parse_f(2)?,
                r_total: parse_f(3)?,
                lr: parse_f(4)?,
                baseline: parse_f(5)?,
                seconds: parse_f(6)?,
            });
        }
        Ok(Self { records })
    }

    /// Copy with the wall-clock column zeroed, for artifacts that must be
    /// byte-stable across reruns.
    pub fn with_zeroed_seconds(&self) -> Self {
        let mut out = self.clone();
        for r in &mut out.records {
            r.seconds = 0.0;
        }
        out
    }
}

/// One momentum-SGD ascent step:
/// `velocity = momentum * velocity + gradient; params += lr * velocity`.
pub fn update_step(
    params: &mut PolicyParams,
    gradient: &PolicyParams,
    velocity: &mut PolicyParams,
    lr: f64,
    momentum: f64,
) {
    velocity.scale(momentum);
    velocity.add_scaled(gradient, 1.0);
    params.add_scaled(velocity, lr);
}

/// Rescales the gradient to `max_norm` when it exceeds it.
pub(crate) fn clip_gradient(gradient: &mut PolicyParams, max_norm: f64) {
    let norm = gradient.l2_norm();
    if norm > max_norm {
        gradient.scale(max_norm / norm);
    }
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Phase {
    Pretrain,
    Joint,
}

fn zero_sup_blocks(grad: &mut PolicyParams) {
    for (name, block) in grad.blocks_mut() {
        if name.starts_with("sup.") {
            block.fill(0.0);
        }
    }
}

/// Pretrains the frame-selection policy alone: rating parameters receive no
/// updates and the objective is the frame reward only.
pub fn pretrain_sub(
    params: &mut PolicyParams,
    corpus: &[Episode],
    config: &TrainConfig,
) -> Result<TrainLog, TrainError> {
    run_phase(params, corpus, config, Phase::Pretrain, |_, _| Ok(()))
}

/// Trains both policies end to end against the combined reward.
pub fn train_joint(
    params: &mut PolicyParams,
    corpus: &[Episode],
    config: &TrainConfig,
) -> Result<TrainLog, TrainError> {
    run_phase(params, corpus, config, Phase::Joint, |_, _| Ok(()))
}

/// Like [`train_joint`], invoking `on_epoch` after every completed epoch
/// (for periodic checkpointing).
pub fn train_joint_observed(
    params: &mut PolicyParams,
    corpus: &[Episode],
    config: &TrainConfig,
    on_epoch: impl FnMut(usize, &PolicyParams) -> Result<(), String>,
) -> Result<TrainLog, TrainError> {
    run_phase(params, corpus, config, Phase::Joint, on_epoch)
}

fn run_phase(
    params: &mut PolicyParams,
    corpus: &[Episode],
    config: &TrainConfig,
    phase: Phase,
    mut on_epoch: impl FnMut(usize, &PolicyParams) -> Result<(), String>,
) -> Result<TrainLog, TrainError> {
    config.validate()?;
    if corpus.is_empty() {
        return Err(TrainError::EmptyCorpus);
    }
    params.validate_shapes()?;

    let epochs = match phase {
        Phase::Pretrain => config.pretrain_epochs,
        Phase::Joint => config.joint_epochs,
    };
    let beta = match phase {
        Phase::Pretrain => 0.0,
        Phase::Joint => config.beta,
    };
    if config.ablate_sub_fusion {
        params.sup.fusion_sub_w.fill(0.0);
    }

    // Reward profiles depend only on labels, so build them once.
    let profiles: Vec<RewardProfile> = corpus
        .iter()
        .map(|ep| {
            envelope_profile(&pulses_from_labels(&ep.frame_labels), ep.n_frames(), &config.trapezoid)
        })
        .collect();

    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    rng.set_stream(match phase {
        Phase::Pretrain => PRETRAIN_STREAM,
        Phase::Joint => JOINT_STREAM,
    });

    let mut velocity = params.zeros_like();
    let mut baseline = 0.0;
    let mut log = TrainLog::default();

    for epoch in 0..epochs {
        let started = Instant::now();
        let lr = learning_rate_at(config, epoch);
        let mut order: Vec<usize> = (0..corpus.len()).collect();
        order.shuffle(&mut rng);

        let (mut sum_sub, mut sum_sup, mut sum_obj) = (0.0, 0.0, 0.0);
        let mut rollouts = 0usize;

        for chunk in order.chunks(config.episodes_per_update) {
            let mut grad = params.zeros_like();
            let mut chunk_objective = 0.0;
            for &idx in chunk {
                let episode = &corpus[idx];
                let pass = params.forward(episode)?;
                let rollout_seed: u64 = rng.gen();
                let trace = sample_actions(pass.frame_probs(), pass.video_prob(), rollout_seed);
                let r_sub = frame_reward(&trace.frame_actions, &profiles[idx])?;
                let q = pass.video_prob();
                let r_sup = video_reward(q, episode.video_label)?;
                let objective = match phase {
                    Phase::Pretrain => r_sub,
                    Phase::Joint => total_reward(r_sub, r_sup, beta),
                };
                let advantage = objective - baseline;

                let dlogit_frames: Vec<f64> =
                    if phase == Phase::Pretrain && config.supervised_warmup {
                        // Likelihood ascent straight on the ground-truth
                        // frame labels, no reward weighting.
                        episode
                            .frame_labels
                            .as_slice()
                            .iter()
                            .zip(pass.frame_probs())
                            .map(|(&l, &p)| l as f64 - p)
                            .collect()
                    } else {
                        trace
                            .frame_actions
                            .iter()
                            .zip(pass.frame_probs())
                            .map(|(&a, &p)| advantage * (a as f64 - p))
                            .collect()
                    };
                let dlogit_video = match phase {
                    Phase::Pretrain => 0.0,
                    Phase::Joint => {
                        let score = advantage * (trace.video_action as f64 - q);
                        let pathwise = if config.pathwise_sup {
                            // d(-|q - label|^3)/dq = -3 (q - label) |q - label|,
                            // chained through the logistic output.
                            let diff = q - episode.video_label as f64;
                            beta * (-3.0 * diff * diff.abs()) * q * (1.0 - q)
                        } else {
                            0.0
                        };
                        score + pathwise
                    }
                };
                grad.add_scaled(&params.backward(&pass, &dlogit_frames, dlogit_video), 1.0);

                chunk_objective += objective;
                sum_sub += r_sub;
                sum_sup += r_sup;
                sum_obj += objective;
                rollouts += 1;
            }
            grad.scale(1.0 / chunk.len() as f64);
            if phase == Phase::Pretrain {
                zero_sup_blocks(&mut grad);
            }
            if config.ablate_sub_fusion {
                grad.sup.fusion_sub_w.fill(0.0);
            }
            if let Some(max_norm) = config.grad_clip {
                clip_gradient(&mut grad, max_norm);
            }
            if let Some(block) = grad.first_non_finite_block() {
                return Err(TrainError::NonFiniteGradient { block, epoch });
            }
            update_step(params, &grad, &mut velocity, lr, config.momentum);
            baseline = config.baseline_momentum * baseline
                + (1.0 - config.baseline_momentum) * (chunk_objective / chunk.len() as f64);
        }

        let denom = rollouts as f64;
        log.records.push(EpochRecord {
            epoch,
            r_sub: sum_sub / denom,
            r_sup: sum_sup / denom,
            r_total: sum_obj / denom,
            lr,
            baseline,
            seconds: started.elapsed().as_secs_f64(),
        });
        on_epoch(epoch, params).map_err(|reason| TrainError::Observer { epoch, reason })?;
    }
    Ok(log)
}
