//! Dual-agent policy-gradient framework for joint frame-level and
//! sequence-level quality assessment.
//!
//! A subordinate agent scores every frame of a sequence and selects the
//! qualified ones; a superordinate agent rates the overall sequence quality
//! from pooled temporal features fused with the subordinate's features. Both
//! are trained with REINFORCE against a shaped reward: a trapezoidal envelope
//! over the ground-truth quality track credits selections near qualified
//! clusters and penalizes false positives, while a cubic penalty drives the
//! sequence-level rating toward the ground-truth label.
//!
//! Modules:
//! - [`reward`]: the deterministic reward mathematics (pulse decomposition,
//!   trapezoidal credit, envelope, cubic rating penalty).
//! - [`sim`]: seeded generator of synthetic episodes with planted qualified
//!   clusters, plus the JSONL corpus format.
//! - [`agents`]: the two stochastic policies with exact, finite-difference
//!   checked log-probability gradients.
//! - [`train`]: REINFORCE training with a moving-average baseline, momentum
//!   SGD, and a step learning-rate schedule.
//! - [`metrics`]: confusion-based rates and Mann-Whitney AUC at both the
//!   frame and the sequence level.
//! - [`checkpoint`]: versioned JSON parameter checkpoints.

pub mod agents;
pub mod checkpoint;
pub mod metrics;
pub mod reward;
pub mod sim;
pub mod tensor;
pub mod train;

pub use agents::{ActionTrace, AgentDims, PolicyParams};
pub use reward::{FrameLabels, PulseTrain, RewardProfile, TrapezoidParams};
pub use sim::{Episode, SimConfig};
pub use train::{TrainConfig, TrainLog};
