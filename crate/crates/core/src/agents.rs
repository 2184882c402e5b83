//! The two stochastic policies and their exact gradients.
//!
//! The frame-selection policy encodes each frame with an affine layer plus
//! tanh, aggregates temporal context with a bidirectional single-gate
//! recurrence, and emits an independent Bernoulli probability per frame. The
//! sequence-rating policy runs a temporal convolution over the raw frame
//! features, pools it over time, fuses the result with the mean of the
//! selection policy's recurrent features, and emits one Bernoulli probability
//! for the whole sequence. That fusion is the hierarchical coupling: rating
//! gradients flow back into the selection policy's recurrence.
//!
//! There is no autodiff here. The backward pass is written out by hand and is
//! seeded with per-logit sensitivities, so the same machinery serves the
//! score-function gradient (seed `action - prob`) and the pathwise gradient
//! of the rating probability (seed `prob * (1 - prob)`). Every derivative is
//! checked against central finite differences in the tests.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::sim::Episode;
use crate::tensor::{axpy, dot, Mat};

/// Output logits are clamped to this magnitude before the logistic squash so
/// probabilities stay strictly inside (0, 1) and log-probabilities finite.
const LOGIT_CLAMP: f64 = 35.0;

#[derive(Debug, Error)]
pub enum AgentError {
    #[error("invalid agent dimensions: {0}")]
    InvalidDims(String),
    #[error("{what}: expected {expected}, found {found}")]
    DimensionMismatch { what: &'static str, expected: usize, found: usize },
    #[error("episode has no frames")]
    EmptyEpisode,
    #[error("action trace is stale at {location}: stored and recomputed probabilities differ by {delta:.3e}")]
    StaleTrace { location: String, delta: f64 },
}

/// Sizes shared by both policies.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct AgentDims {
    /// Per-frame feature vector length; must match the corpus.
    #[serde(default = "default_feature_dim")]
    pub feature_dim: usize,
    /// Hidden size of each recurrence direction.
    #[serde(default = "default_hidden_size")]
    pub hidden_size: usize,
    /// Channels of the temporal convolution in the rating policy.
    #[serde(default = "default_conv_channels")]
    pub conv_channels: usize,
    /// Temporal convolution kernel width; odd so padding is symmetric.
    #[serde(default = "default_conv_kernel")]
    pub conv_kernel: usize,
}

fn default_feature_dim() -> usize {
    16
}
fn default_hidden_size() -> usize {
    32
}
fn default_conv_channels() -> usize {
    8
}
fn default_conv_kernel() -> usize {
    3
}

impl Default for AgentDims {
    fn default() -> Self {
        Self {
            feature_dim: default_feature_dim(),
            hidden_size: default_hidden_size(),
            conv_channels: default_conv_channels(),
            conv_kernel: default_conv_kernel(),
        }
    }
}

impl AgentDims {
    pub fn validate(&self) -> Result<(), AgentError> {
        if self.feature_dim < 1 || self.hidden_size < 1 || self.conv_channels < 1 {
            return Err(AgentError::InvalidDims(format!(
                "all sizes must be >= 1, got feature_dim={}, hidden_size={}, conv_channels={}",
                self.feature_dim, self.hidden_size, self.conv_channels
            )));
        }
        if self.conv_kernel < 1 || self.conv_kernel.is_multiple_of(2) {
            return Err(AgentError::InvalidDims(format!(
                "conv_kernel must be odd and >= 1, got {}",
                self.conv_kernel
            )));
        }
        Ok(())
    }
}

/// One recurrence direction: a logistic update gate blending the previous
/// state with a tanh candidate,
/// `h = z * h_prev + (1 - z) * c` where
/// `z = sigmoid(A_z x + R_z h_prev + b_z)` and
/// `c = tanh(A_c x + R_c h_prev + b_c)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GateCell {
    pub update_input: Mat,
    pub update_recur: Mat,
    pub update_bias: Vec<f64>,
    pub cand_input: Mat,
    pub cand_recur: Mat,
    pub cand_bias: Vec<f64>,
}

/// Frame-selection policy parameters: frame encoder, the two recurrence
/// directions, and the per-frame output head over the concatenated states.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SubAgentParams {
    pub encoder_w: Mat,
    pub encoder_b: Vec<f64>,
    pub forward_cell: GateCell,
    pub backward_cell: GateCell,
    pub head_w: Vec<f64>,
    pub head_b: Vec<f64>,
}

/// Sequence-rating policy parameters: temporal convolution over raw frame
/// features, a head over the pooled convolution channels, and fusion weights
/// over the pooled selection-policy features.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SupAgentParams {
    pub conv_w: Mat,
    pub conv_b: Vec<f64>,
    pub video_head_w: Vec<f64>,
    pub fusion_sub_w: Vec<f64>,
    pub head_b: Vec<f64>,
}

/// All parameters of both policies. Doubles as the gradient container: a
/// gradient has the same shape as the parameters it differentiates.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PolicyParams {
    pub dims: AgentDims,
    pub sub: SubAgentParams,
    pub sup: SupAgentParams,
}

fn random_vec(rng: &mut ChaCha8Rng, len: usize) -> Vec<f64> {
    (0..len).map(|_| rng.gen::<f64>() * 0.2 - 0.1).collect()
}

fn random_mat(rng: &mut ChaCha8Rng, rows: usize, cols: usize) -> Mat {
    Mat::from_fn(rows, cols, |_, _| rng.gen::<f64>() * 0.2 - 0.1)
}

fn random_cell(rng: &mut ChaCha8Rng, hidden: usize) -> GateCell {
    GateCell {
        update_input: random_mat(rng, hidden, hidden),
        update_recur: random_mat(rng, hidden, hidden),
        update_bias: vec![0.0; hidden],
        cand_input: random_mat(rng, hidden, hidden),
        cand_recur: random_mat(rng, hidden, hidden),
        cand_bias: vec![0.0; hidden],
    }
}

impl PolicyParams {
    /// Fresh parameters: weights uniform in [-0.1, 0.1] from the seed,
    /// biases zero.
    pub fn init(dims: AgentDims, seed: u64) -> Result<Self, AgentError> {
        dims.validate()?;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (f, h, ch, k) = (dims.feature_dim, dims.hidden_size, dims.conv_channels, dims.conv_kernel);
        Ok(Self {
            dims,
            sub: SubAgentParams {
                encoder_w: random_mat(&mut rng, h, f),
                encoder_b: vec![0.0; h],
                forward_cell: random_cell(&mut rng, h),
                backward_cell: random_cell(&mut rng, h),
                head_w: random_vec(&mut rng, 2 * h),
                head_b: vec![0.0],
            },
            sup: SupAgentParams {
                conv_w: random_mat(&mut rng, ch, k * f),
                conv_b: vec![0.0; ch],
                video_head_w: random_vec(&mut rng, ch),
                fusion_sub_w: random_vec(&mut rng, 2 * h),
                head_b: vec![0.0],
            },
        })
    }

    /// All parameters as named flat blocks, in a fixed canonical order.
    pub fn blocks(&self) -> Vec<(&'static str, &[f64])> {
        let s = &self.sub;
        let p = &self.sup;
        vec![
            ("sub.encoder_w", &s.encoder_w.data),
            ("sub.encoder_b", &s.encoder_b),
            ("sub.forward_cell.update_input", &s.forward_cell.update_input.data),
            ("sub.forward_cell.update_recur", &s.forward_cell.update_recur.data),
            ("sub.forward_cell.update_bias", &s.forward_cell.update_bias),
            ("sub.forward_cell.cand_input", &s.forward_cell.cand_input.data),
            ("sub.forward_cell.cand_recur", &s.forward_cell.cand_recur.data),
            ("sub.forward_cell.cand_bias", &s.forward_cell.cand_bias),
            ("sub.backward_cell.update_input", &s.backward_cell.update_input.data),
            ("sub.backward_cell.update_recur", &s.backward_cell.update_recur.data),
            ("sub.backward_cell.update_bias", &s.backward_cell.update_bias),
            ("sub.backward_cell.cand_input", &s.backward_cell.cand_input.data),
            ("sub.backward_cell.cand_recur", &s.backward_cell.cand_recur.data),
            ("sub.backward_cell.cand_bias", &s.backward_cell.cand_bias),
            ("sub.head_w", &s.head_w),
            ("sub.head_b", &s.head_b),
            ("sup.conv_w", &p.conv_w.data),
            ("sup.conv_b", &p.conv_b),
            ("sup.video_head_w", &p.video_head_w),
            ("sup.fusion_sub_w", &p.fusion_sub_w),
            ("sup.head_b", &p.head_b),
        ]
    }

    /// Mutable view of the same blocks, in the same order as [`blocks`].
    ///
    /// [`blocks`]: PolicyParams::blocks
    pub fn blocks_mut(&mut self) -> Vec<(&'static str, &mut [f64])> {
        let s = &mut self.sub;
        let p = &mut self.sup;
        vec![
            ("sub.encoder_w", s.encoder_w.data.as_mut_slice()),
            ("sub.encoder_b", s.encoder_b.as_mut_slice()),
            ("sub.forward_cell.update_input", s.forward_cell.update_input.data.as_mut_slice()),
            ("sub.forward_cell.update_recur", s.forward_cell.update_recur.data.as_mut_slice()),
            ("sub.forward_cell.update_bias", s.forward_cell.update_bias.as_mut_slice()),
            ("sub.forward_cell.cand_input", s.forward_cell.cand_input.data.as_mut_slice()),
            ("sub.forward_cell.cand_recur", s.forward_cell.cand_recur.data.as_mut_slice()),
            ("sub.forward_cell.cand_bias", s.forward_cell.cand_bias.as_mut_slice()),
            ("sub.backward_cell.update_input", s.backward_cell.update_input.data.as_mut_slice()),
            ("sub.backward_cell.update_recur", s.backward_cell.update_recur.data.as_mut_slice()),
            ("sub.backward_cell.update_bias", s.backward_cell.update_bias.as_mut_slice()),
            ("sub.backward_cell.cand_input", s.backward_cell.cand_input.data.as_mut_slice()),
            ("sub.backward_cell.cand_recur", s.backward_cell.cand_recur.data.as_mut_slice()),
            ("sub.backward_cell.cand_bias", s.backward_cell.cand_bias.as_mut_slice()),
            ("sub.head_w", s.head_w.as_mut_slice()),
            ("sub.head_b", s.head_b.as_mut_slice()),
            ("sup.conv_w", p.conv_w.data.as_mut_slice()),
            ("sup.conv_b", p.conv_b.as_mut_slice()),
            ("sup.video_head_w", p.video_head_w.as_mut_slice()),
            ("sup.fusion_sub_w", p.fusion_sub_w.as_mut_slice()),
            ("sup.head_b", p.head_b.as_mut_slice()),
        ]
    }

    /// A same-shaped parameter set with every value zeroed — the natural
    /// starting point for gradient accumulation and optimizer velocity.
    pub fn zeros_like(&self) -> Self {
        let mut out = self.clone();
        for (_, block) in out.blocks_mut() {
            block.fill(0.0);
        }
        out
    }

    /// `self += alpha * other`, blockwise.
    pub fn add_scaled(&mut self, other: &Self, alpha: f64) {
        for ((name, mine), (other_name, theirs)) in
            self.blocks_mut().into_iter().zip(other.blocks())
        {
            debug_assert_eq!(name, other_name);
            assert_eq!(mine.len(), theirs.len(), "shape mismatch in block {name}");
            axpy(alpha, theirs, mine);
        }
    }

    /// `self *= alpha`, blockwise.
    pub fn scale(&mut self, alpha: f64) {
        for (_, block) in self.blocks_mut() {
            for v in block {
                *v *= alpha;
            }
        }
    }

    /// Euclidean norm over every parameter.
    pub fn l2_norm(&self) -> f64 {
        self.blocks()
            .iter()
            .flat_map(|(_, b)| b.iter())
            .map(|v| v * v)
            .sum::<f64>()
            .sqrt()
    }

    /// Name of the first block containing a NaN or infinity, if any — used
    /// to attribute diverged updates to a parameter group.
    pub fn first_non_finite_block(&self) -> Option<&'static str> {
        self.blocks()
            .into_iter()
            .find(|(_, b)| b.iter().any(|v| !v.is_finite()))
            .map(|(name, _)| name)
    }

    /// Checks every tensor against `self.dims`.
    pub fn validate_shapes(&self) -> Result<(), AgentError> {
        self.dims.validate()?;
        let (f, h, ch, k) =
            (self.dims.feature_dim, self.dims.hidden_size, self.dims.conv_channels, self.dims.conv_kernel);
        let expected: Vec<(&'static str, usize)> = vec![
            ("sub.encoder_w", h * f),
            ("sub.encoder_b", h),
            ("sub.forward_cell.update_input", h * h),
            ("sub.forward_cell.update_recur", h * h),
            ("sub.forward_cell.update_bias", h),
            ("sub.forward_cell.cand_input", h * h),
            ("sub.forward_cell.cand_recur", h * h),
            ("sub.forward_cell.cand_bias", h),
            ("sub.backward_cell.update_input", h * h),
            ("sub.backward_cell.update_recur", h * h),
            ("sub.backward_cell.update_bias", h),
            ("sub.backward_cell.cand_input", h * h),
            ("sub.backward_cell.cand_recur", h * h),
            ("sub.backward_cell.cand_bias", h),
            ("sub.head_w", 2 * h),
            ("sub.head_b", 1),
            ("sup.conv_w", ch * k * f),
            ("sup.conv_b", ch),
            ("sup.video_head_w", ch),
            ("sup.fusion_sub_w", 2 * h),
            ("sup.head_b", 1),
        ];
        for ((name, block), (expected_name, want)) in self.blocks().into_iter().zip(expected) {
            debug_assert_eq!(name, expected_name);
            if block.len() != want {
                return Err(AgentError::DimensionMismatch {
                    what: name,
                    expected: want,
                    found: block.len(),
                });
            }
        }
        if self.sub.encoder_w.cols != f {
            return Err(AgentError::DimensionMismatch {
                what: "sub.encoder_w columns",
                expected: f,
                found: self.sub.encoder_w.cols,
            });
        }
        if self.sup.conv_w.cols != k * f {
            return Err(AgentError::DimensionMismatch {
                what: "sup.conv_w columns",
                expected: k * f,
                found: self.sup.conv_w.cols,
            });
        }
        Ok(())
    }

    /// Every parameter concatenated in canonical block order.
    pub fn flatten(&self) -> Vec<f64> {
        self.blocks().iter().flat_map(|(_, b)| b.iter().copied()).collect()
    }

    /// Inverse of [`flatten`]: writes a flat vector back into the blocks.
    ///
    /// [`flatten`]: PolicyParams::flatten
    pub fn assign_flat(&mut self, flat: &[f64]) {
        let mut offset = 0;
        for (name, block) in self.blocks_mut() {
            let next = offset + block.len();
            assert!(next <= flat.len(), "flat vector too short at block {name}");
            block.copy_from_slice(&flat[offset..next]);
            offset = next;
        }
        assert_eq!(offset, flat.len(), "flat vector longer than parameters");
    }
}

/// Numerically stable logistic function.
fn sigmoid(x: f64) -> f64 {
    if x >= 0.0 {
        1.0 / (1.0 + (-x).exp())
    } else {
        let e = x.exp();
        e / (1.0 + e)
    }
}

/// Logistic squash for output probabilities, clamped so the result is
/// strictly inside (0, 1).
fn squash(logit: f64) -> f64 {
    sigmoid(logit.clamp(-LOGIT_CLAMP, LOGIT_CLAMP))
}

fn bernoulli_log_prob(action: u8, p: f64) -> f64 {
    if action == 1 {
        p.ln()
    } else {
        (1.0 - p).ln()
    }
}

/// One sampled (or thresholded) set of actions with the probabilities they
/// were drawn from and their joint log-probability.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ActionTrace {
    pub frame_actions: Vec<u8>,
    pub frame_probs: Vec<f64>,
    pub video_action: u8,
    pub video_prob: f64,
    pub log_prob_sum: f64,
}

impl ActionTrace {
    fn assemble(frame_actions: Vec<u8>, frame_probs: Vec<f64>, video_action: u8, video_prob: f64) -> Self {
        let log_prob_sum = frame_actions
            .iter()
            .zip(&frame_probs)
            .map(|(&a, &p)| bernoulli_log_prob(a, p))
            .sum::<f64>()
            + bernoulli_log_prob(video_action, video_prob);
        Self { frame_actions, frame_probs, video_action, video_prob, log_prob_sum }
    }

    /// Recomputes the joint log-probability from the stored actions and
    /// probabilities; always equals `log_prob_sum`.
    pub fn recompute_log_prob(&self) -> f64 {
        self.frame_actions
            .iter()
            .zip(&self.frame_probs)
            .map(|(&a, &p)| bernoulli_log_prob(a, p))
            .sum::<f64>()
            + bernoulli_log_prob(self.video_action, self.video_prob)
    }
}

/// Draws every frame action and the video action from independent Bernoulli
/// distributions. Deterministic for a fixed seed.
pub fn sample_actions(frame_probs: &[f64], video_prob: f64, rng_seed: u64) -> ActionTrace {
    debug_assert!(frame_probs.iter().all(|p| (0.0..=1.0).contains(p)));
    let mut rng = ChaCha8Rng::seed_from_u64(rng_seed);
    let frame_actions: Vec<u8> =
        frame_probs.iter().map(|&p| u8::from(rng.gen_bool(p))).collect();
    let video_action = u8::from(rng.gen_bool(video_prob));
    ActionTrace::assemble(frame_actions, frame_probs.to_vec(), video_action, video_prob)
}

/// Deterministic inference: action 1 wherever the probability is at least
/// 0.5 (ties count as positive).
pub fn greedy_actions(frame_probs: &[f64], video_prob: f64) -> ActionTrace {
    let frame_actions: Vec<u8> = frame_probs.iter().map(|&p| u8::from(p >= 0.5)).collect();
    let video_action = u8::from(video_prob >= 0.5);
    ActionTrace::assemble(frame_actions, frame_probs.to_vec(), video_action, video_prob)
}

/// Per-step state of one recurrence direction, kept for backpropagation.
struct DirectionCache {
    h: Vec<Vec<f64>>,
    z: Vec<Vec<f64>>,
    c: Vec<Vec<f64>>,
}

struct SubCache {
    /// Raw frame features promoted to f64, N x feature_dim.
    feats: Vec<Vec<f64>>,
    /// Encoded frames after tanh, N x hidden.
    x: Vec<Vec<f64>>,
    fwd: DirectionCache,
    bwd: DirectionCache,
    /// Concatenated [forward; backward] states, N x 2*hidden.
    u: Vec<Vec<f64>>,
    frame_probs: Vec<f64>,
}

struct SupCache {
    /// Post-tanh convolution activations, N x channels.
    g: Vec<Vec<f64>>,
    f_v: Vec<f64>,
    f_f: Vec<f64>,
    video_prob: f64,
}

/// Everything one forward evaluation produced, including the intermediate
/// state the backward pass needs.
pub struct ForwardPass {
    sub: SubCache,
    sup: SupCache,
}

impl ForwardPass {
    pub fn frame_probs(&self) -> &[f64] {
        &self.sub.frame_probs
    }

    pub fn video_prob(&self) -> f64 {
        self.sup.video_prob
    }

    /// Concatenated recurrent states per frame (the features the rating
    /// policy fuses in).
    pub fn sub_features(&self) -> &[Vec<f64>] {
        &self.sub.u
    }

    pub fn n_frames(&self) -> usize {
        self.sub.frame_probs.len()
    }
}

fn cell_step(cell: &GateCell, x: &[f64], h_prev: &[f64]) -> (Vec<f64>, Vec<f64>, Vec<f64>) {
    let hidden = cell.update_bias.len();
    let z: Vec<f64> = (0..hidden)
        .map(|r| {
            sigmoid(
                dot(cell.update_input.row(r), x)
                    + dot(cell.update_recur.row(r), h_prev)
                    + cell.update_bias[r],
            )
        })
        .collect();
    let c: Vec<f64> = (0..hidden)
        .map(|r| {
            (dot(cell.cand_input.row(r), x)
                + dot(cell.cand_recur.row(r), h_prev)
                + cell.cand_bias[r])
                .tanh()
        })
        .collect();
    let h: Vec<f64> =
        (0..hidden).map(|j| z[j] * h_prev[j] + (1.0 - z[j]) * c[j]).collect();
    (z, c, h)
}

/// Runs one recurrence direction over the encoded frames. `reverse_time`
/// processes last-to-first, so state `t` summarizes frames `t..N`.
fn run_direction(cell: &GateCell, x: &[Vec<f64>], reverse_time: bool) -> DirectionCache {
    let n = x.len();
    let hidden = cell.update_bias.len();
    let mut cache = DirectionCache {
        h: vec![Vec::new(); n],
        z: vec![Vec::new(); n],
        c: vec![Vec::new(); n],
    };
    let order: Vec<usize> = if reverse_time { (0..n).rev().collect() } else { (0..n).collect() };
    let mut prev = vec![0.0; hidden];
    for t in order {
        let (z, c, h) = cell_step(cell, &x[t], &prev);
        prev.clone_from(&h);
        cache.z[t] = z;
        cache.c[t] = c;
        cache.h[t] = h;
    }
    cache
}

impl PolicyParams {
    fn episode_features(&self, episode: &Episode) -> Result<Vec<Vec<f64>>, AgentError> {
        if episode.n_frames() == 0 {
            return Err(AgentError::EmptyEpisode);
        }
        let f = self.dims.feature_dim;
        let mut feats = Vec::with_capacity(episode.n_frames());
        for row in &episode.features {
            if row.len() != f {
                return Err(AgentError::DimensionMismatch {
                    what: "episode feature dimension",
                    expected: f,
                    found: row.len(),
                });
            }
            feats.push(row.iter().map(|&v| v as f64).collect());
        }
        Ok(feats)
    }

    fn run_sub(&self, episode: &Episode) -> Result<SubCache, AgentError> {
        let feats = self.episode_features(episode)?;
        let h = self.dims.hidden_size;
        let x: Vec<Vec<f64>> = feats
            .iter()
            .map(|row| {
                let mut pre = vec![0.0; h];
                self.sub.encoder_w.matvec(row, &mut pre);
                pre.iter().zip(&self.sub.encoder_b).map(|(&p, &b)| (p + b).tanh()).collect()
            })
            .collect();
        let fwd = run_direction(&self.sub.forward_cell, &x, false);
        let bwd = run_direction(&self.sub.backward_cell, &x, true);
        let u: Vec<Vec<f64>> = (0..x.len())
            .map(|t| fwd.h[t].iter().chain(&bwd.h[t]).copied().collect())
            .collect();
        let frame_probs: Vec<f64> = u
            .iter()
            .map(|ut| squash(dot(&self.sub.head_w, ut) + self.sub.head_b[0]))
            .collect();
        Ok(SubCache { feats, x, fwd, bwd, u, frame_probs })
    }

    fn run_sup(&self, feats: &[Vec<f64>], sub_features: &[Vec<f64>]) -> Result<SupCache, AgentError> {
        let n = feats.len();
        let (f, ch, k) = (self.dims.feature_dim, self.dims.conv_channels, self.dims.conv_kernel);
        let pad = k / 2;
        if sub_features.len() != n {
            return Err(AgentError::DimensionMismatch {
                what: "fused feature rows",
                expected: n,
                found: sub_features.len(),
            });
        }
        let fused_dim = self.sup.fusion_sub_w.len();
        for row in sub_features {
            if row.len() != fused_dim {
                return Err(AgentError::DimensionMismatch {
                    what: "fused feature dimension",
                    expected: fused_dim,
                    found: row.len(),
                });
            }
        }
        // Zero-padded temporal convolution followed by tanh.
        let g: Vec<Vec<f64>> = (0..n)
            .map(|t| {
                (0..ch)
                    .map(|c| {
                        let mut s = self.sup.conv_b[c];
                        for kk in 0..k {
                            let Some(src) = (t + kk).checked_sub(pad) else { continue };
                            if src >= n {
                                continue;
                            }
                            let w = &self.sup.conv_w.row(c)[kk * f..(kk + 1) * f];
                            s += dot(w, &feats[src]);
                        }
                        s.tanh()
                    })
                    .collect()
            })
            .collect();
        let inv_n = 1.0 / n as f64;
        let f_v: Vec<f64> =
            (0..ch).map(|c| g.iter().map(|row| row[c]).sum::<f64>() * inv_n).collect();
        let f_f: Vec<f64> = (0..fused_dim)
            .map(|j| sub_features.iter().map(|row| row[j]).sum::<f64>() * inv_n)
            .collect();
        let logit = dot(&self.sup.video_head_w, &f_v)
            + dot(&self.sup.fusion_sub_w, &f_f)
            + self.sup.head_b[0];
        Ok(SupCache { g, f_v, f_f, video_prob: squash(logit) })
    }

    /// Frame-selection forward pass alone: per-frame probabilities plus the
    /// recurrent features the rating policy fuses.
    pub fn sub_forward(&self, episode: &Episode) -> Result<(Vec<f64>, Vec<Vec<f64>>), AgentError> {
        let cache = self.run_sub(episode)?;
        Ok((cache.frame_probs, cache.u))
    }

    /// Sequence-rating forward pass from the raw episode and externally
    /// supplied fused features.
    pub fn sup_forward(&self, episode: &Episode, sub_features: &[Vec<f64>]) -> Result<f64, AgentError> {
        let feats = self.episode_features(episode)?;
        Ok(self.run_sup(&feats, sub_features)?.video_prob)
    }

    /// Full forward evaluation of both policies, retaining the state needed
    /// for gradients.
    pub fn forward(&self, episode: &Episode) -> Result<ForwardPass, AgentError> {
        let sub = self.run_sub(episode)?;
        let sup = self.run_sup(&sub.feats, &sub.u)?;
        Ok(ForwardPass { sub, sup })
    }

    /// Backpropagates per-logit sensitivities through both policies.
    ///
    /// `dlogit_frames[t]` seeds the derivative with respect to frame `t`'s
    /// pre-squash output, `dlogit_video` the derivative with respect to the
    /// rating logit. The score-function gradient of a trace's joint
    /// log-probability uses seeds `action - prob`; the pathwise gradient of
    /// the rating probability itself uses `prob * (1 - prob)`. Seeding both
    /// at once yields the sum of the two gradients, which is how training
    /// fuses them in a single pass.
    pub(crate) fn backward(
        &self,
        pass: &ForwardPass,
        dlogit_frames: &[f64],
        dlogit_video: f64,
    ) -> PolicyParams {
        let n = pass.n_frames();
        debug_assert_eq!(dlogit_frames.len(), n);
        let h = self.dims.hidden_size;
        let (f, ch, k) = (self.dims.feature_dim, self.dims.conv_channels, self.dims.conv_kernel);
        let pad = k / 2;
        let inv_n = 1.0 / n as f64;
        let mut grad = self.zeros_like();

        // Rating head and its two pooled inputs.
        grad.sup.head_b[0] += dlogit_video;
        axpy(dlogit_video, &pass.sup.f_v, &mut grad.sup.video_head_w);
        axpy(dlogit_video, &pass.sup.f_f, &mut grad.sup.fusion_sub_w);

        // Convolution path: d f_v -> d g -> d s -> conv weights.
        for t in 0..n {
            for c in 0..ch {
                let dg = dlogit_video * self.sup.video_head_w[c] * inv_n;
                let gv = pass.sup.g[t][c];
                let ds = dg * (1.0 - gv * gv);
                if ds == 0.0 {
                    continue;
                }
                grad.sup.conv_b[c] += ds;
                for kk in 0..k {
                    let Some(src) = (t + kk).checked_sub(pad) else { continue };
                    if src >= n {
                        continue;
                    }
                    let wrow = &mut grad.sup.conv_w.data[c * k * f + kk * f..c * k * f + (kk + 1) * f];
                    axpy(ds, &pass.sub.feats[src], wrow);
                }
            }
        }

        // Per-frame sensitivities of the concatenated recurrent states: the
        // frame head contributes per frame, the fusion mean contributes the
        // rating sensitivity spread uniformly over frames.
        let mut du = vec![vec![0.0; 2 * h]; n];
        for t in 0..n {
            let dl = dlogit_frames[t];
            grad.sub.head_b[0] += dl;
            axpy(dl, &pass.sub.u[t], &mut grad.sub.head_w);
            for (j, slot) in du[t].iter_mut().enumerate() {
                *slot = dl * self.sub.head_w[j] + dlogit_video * self.sup.fusion_sub_w[j] * inv_n;
            }
        }

        // Backpropagation through time, one direction at a time.
        let mut dx = vec![vec![0.0; h]; n];
        backprop_direction(
            &self.sub.forward_cell,
            &mut grad.sub.forward_cell,
            &pass.sub.fwd,
            &pass.sub.x,
            &du,
            0,
            &mut dx,
            false,
        );
        backprop_direction(
            &self.sub.backward_cell,
            &mut grad.sub.backward_cell,
            &pass.sub.bwd,
            &pass.sub.x,
            &du,
            h,
            &mut dx,
            true,
        );

        // Frame encoder: through the tanh into the affine map.
        for (dxt, (xt, ft)) in dx.iter().zip(pass.sub.x.iter().zip(&pass.sub.feats)) {
            let dpre: Vec<f64> =
                dxt.iter().zip(xt).map(|(&d, &xv)| d * (1.0 - xv * xv)).collect();
            grad.sub.encoder_w.add_outer(&dpre, ft);
            axpy(1.0, &dpre, &mut grad.sub.encoder_b);
        }
        grad
    }

    /// Exact gradient of a trace's joint log-probability with respect to
    /// every parameter of both policies.
    ///
    /// The trace must have been produced from these parameters on this
    /// episode; recomputed probabilities are checked against the stored ones
    /// and a drift beyond 1e-9 is rejected as stale.
    pub fn log_prob_gradient(
        &self,
        episode: &Episode,
        trace: &ActionTrace,
    ) -> Result<PolicyParams, AgentError> {
        let pass = self.forward(episode)?;
        if trace.frame_actions.len() != pass.n_frames() {
            return Err(AgentError::DimensionMismatch {
                what: "trace frame count",
                expected: pass.n_frames(),
                found: trace.frame_actions.len(),
            });
        }
        for (t, (&stored, &fresh)) in
            trace.frame_probs.iter().zip(pass.frame_probs()).enumerate()
        {
            let delta = (stored - fresh).abs();
            if delta > 1e-9 {
                return Err(AgentError::StaleTrace { location: format!("frame {t}"), delta });
            }
        }
        let video_delta = (trace.video_prob - pass.video_prob()).abs();
        if video_delta > 1e-9 {
            return Err(AgentError::StaleTrace {
                location: "video rating".into(),
                delta: video_delta,
            });
        }
        // d log p / d logit for a Bernoulli under a logistic output is
        // exactly (action - prob).
        let dlogit_frames: Vec<f64> = trace
            .frame_actions
            .iter()
            .zip(pass.frame_probs())
            .map(|(&a, &p)| a as f64 - p)
            .collect();
        let dlogit_video = trace.video_action as f64 - pass.video_prob();
        Ok(self.backward(&pass, &dlogit_frames, dlogit_video))
    }

    /// Pathwise gradient of the rating probability itself (not of a
    /// log-probability) with respect to every parameter.
    pub fn video_prob_gradient(&self, episode: &Episode) -> Result<PolicyParams, AgentError> {
        let pass = self.forward(episode)?;
        let q = pass.video_prob();
        let dlogit_frames = vec![0.0; pass.n_frames()];
        Ok(self.backward(&pass, &dlogit_frames, q * (1.0 - q)))
    }
}

/// Reverse-mode sweep through one recurrence direction. `du_offset` selects
/// which half of the concatenated state sensitivities feeds this direction;
/// `reverse_time` mirrors the visit order used in the forward sweep.
#[allow(clippy::too_many_arguments)]
fn backprop_direction(
    cell: &GateCell,
    grad_cell: &mut GateCell,
    cache: &DirectionCache,
    x: &[Vec<f64>],
    du: &[Vec<f64>],
    du_offset: usize,
    dx: &mut [Vec<f64>],
    reverse_time: bool,
) {
    let n = x.len();
    let hidden = cell.update_bias.len();
    let zeros = vec![0.0; hidden];
    // Visit steps opposite to the forward processing order so each state's
    // downstream sensitivity is complete before it is consumed.
    let order: Vec<usize> = if reverse_time { (0..n).collect() } else { (0..n).rev().collect() };
    let mut carry = vec![0.0; hidden];
    for t in order {
        let h_prev: &[f64] = if reverse_time {
            if t + 1 == n { &zeros } else { &cache.h[t + 1] }
        } else if t == 0 {
            &zeros
        } else {
            &cache.h[t - 1]
        };
        let z = &cache.z[t];
        let c = &cache.c[t];
        let dh: Vec<f64> =
            (0..hidden).map(|j| du[t][du_offset + j] + carry[j]).collect();
        // h = z*h_prev + (1-z)*c, z = sigmoid(zeta), c = tanh(gamma).
        let dzeta: Vec<f64> = (0..hidden)
            .map(|j| dh[j] * (h_prev[j] - c[j]) * z[j] * (1.0 - z[j]))
            .collect();
        let dgamma: Vec<f64> =
            (0..hidden).map(|j| dh[j] * (1.0 - z[j]) * (1.0 - c[j] * c[j])).collect();
        grad_cell.update_input.add_outer(&dzeta, &x[t]);
        grad_cell.update_recur.add_outer(&dzeta, h_prev);
        axpy(1.0, &dzeta, &mut grad_cell.update_bias);
        grad_cell.cand_input.add_outer(&dgamma, &x[t]);
        grad_cell.cand_recur.add_outer(&dgamma, h_prev);
        axpy(1.0, &dgamma, &mut grad_cell.cand_bias);
        let mut next_carry: Vec<f64> = (0..hidden).map(|j| dh[j] * z[j]).collect();
        cell.update_recur.matvec_transpose_add(&dzeta, &mut next_carry);
        cell.cand_recur.matvec_transpose_add(&dgamma, &mut next_carry);
        carry = next_carry;
        cell.update_input.matvec_transpose_add(&dzeta, &mut dx[t]);
        cell.cand_input.matvec_transpose_add(&dgamma, &mut dx[t]);
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::reward::FrameLabels;
    use crate::sim::{generate_episode, SimConfig};

    fn small_dims() -> AgentDims {
        AgentDims { feature_dim: 2, hidden_size: 3, conv_channels: 2, conv_kernel: 3 }
    }

    fn small_episode(n_frames: usize, seed: u64) -> Episode {
        let config = SimConfig {
            n_frames,
            feature_dim: 2,
            cluster_count_range: (0, 2),
            cluster_width_range: (1, n_frames.min(3)),
            seed,
            ..SimConfig::default()
        };
        generate_episode(&config, 0).unwrap()
    }

    fn manual_episode(features: Vec<Vec<f32>>, labels: Vec<u8>) -> Episode {
        Episode {
            id: "manual".into(),
            video_label: 0,
            frame_labels: FrameLabels::new(labels).unwrap(),
            features,
        }
    }

    /// Joint log-probability of the trace's actions under freshly computed
    /// probabilities — the scalar the analytic gradient differentiates.
    fn log_prob_under(params: &PolicyParams, episode: &Episode, trace: &ActionTrace) -> f64 {
        let pass = params.forward(episode).unwrap();
        trace
            .frame_actions
            .iter()
            .zip(pass.frame_probs())
            .map(|(&a, &p)| if a == 1 { p.ln() } else { (1.0 - p).ln() })
            .sum::<f64>()
            + if trace.video_action == 1 {
                pass.video_prob().ln()
            } else {
                (1.0 - pass.video_prob()).ln()
            }
    }

    /// Central-difference comparison against an analytic gradient. The
    /// relative error uses a floored denominator so near-zero components
    /// compare absolutely: at step 1e-5 the difference quotient itself
    /// carries roundoff noise around 1e-10, so the floor sits at 1e-5 to
    /// keep that noise well under the 1e-4 acceptance threshold.
    fn assert_matches_finite_differences(
        params: &PolicyParams,
        analytic: &PolicyParams,
        mut scalar: impl FnMut(&PolicyParams) -> f64,
        label: &str,
    ) {
        let flat = params.flatten();
        let analytic_flat = analytic.flatten();
        let step = 1e-5;
        for i in 0..flat.len() {
            let mut probe = params.clone();
            let mut values = flat.clone();
            values[i] += step;
            probe.assign_flat(&values);
            let plus = scalar(&probe);
            values[i] -= 2.0 * step;
            probe.assign_flat(&values);
            let minus = scalar(&probe);
            let numeric = (plus - minus) / (2.0 * step);
            let denom = numeric.abs().max(analytic_flat[i].abs()).max(1e-5);
            let rel = (numeric - analytic_flat[i]).abs() / denom;
            assert!(
                rel <= 1e-4,
                "{label}: component {i} numeric {numeric} vs analytic {} (rel {rel})",
                analytic_flat[i]
            );
        }
    }

    #[test]
    fn zero_weights_output_half_everywhere() {
        let params = PolicyParams::init(small_dims(), 0).unwrap().zeros_like();
        let episode = small_episode(6, 1);
        let pass = params.forward(&episode).unwrap();
        assert!(pass.frame_probs().iter().all(|&p| p == 0.5));
        assert_eq!(pass.video_prob(), 0.5);
    }

    #[test]
    fn probabilities_stay_strictly_inside_unit_interval() {
        // Blow the head bias up; the clamp must keep probabilities off 0/1.
        let mut params = PolicyParams::init(small_dims(), 3).unwrap();
        params.sub.head_b[0] = 1e6;
        params.sup.head_b[0] = -1e6;
        let episode = small_episode(4, 2);
        let pass = params.forward(&episode).unwrap();
        for &p in pass.frame_probs() {
            assert!(p > 0.0 && p < 1.0);
        }
        let q = pass.video_prob();
        assert!(q > 0.0 && q < 1.0);
        let trace = greedy_actions(pass.frame_probs(), q);
        assert!(trace.log_prob_sum.is_finite());
    }

    #[test]
    fn reversing_frames_and_swapping_directions_reverses_probs() {
        let params = PolicyParams::init(small_dims(), 7).unwrap();
        let episode = small_episode(9, 4);

        let mut swapped = params.clone();
        std::mem::swap(&mut swapped.sub.forward_cell, &mut swapped.sub.backward_cell);
        let h = params.dims.hidden_size;
        for j in 0..h {
            swapped.sub.head_w.swap(j, h + j);
        }

        let mut reversed = episode.clone();
        reversed.features.reverse();

        let (probs, _) = params.sub_forward(&episode).unwrap();
        let (probs_rev, _) = swapped.sub_forward(&reversed).unwrap();
        let n = probs.len();
        for t in 0..n {
            assert!(
                (probs[t] - probs_rev[n - 1 - t]).abs() < 1e-12,
                "frame {t}: {} vs {}",
                probs[t],
                probs_rev[n - 1 - t]
            );
        }
    }

    #[test]
    fn single_frame_episode_runs_both_directions_one_step() {
        let params = PolicyParams::init(small_dims(), 5).unwrap();
        let episode = small_episode(1, 6);
        let (probs, features) = params.sub_forward(&episode).unwrap();
        assert_eq!(probs.len(), 1);
        assert!(probs[0] > 0.0 && probs[0] < 1.0);
        assert_eq!(features[0].len(), 2 * params.dims.hidden_size);
        let q = params.sup_forward(&episode, &features).unwrap();
        assert!(q > 0.0 && q < 1.0);
    }

    #[test]
    fn zero_fusion_weight_decouples_rating_from_sub_features() {
        let mut params = PolicyParams::init(small_dims(), 11).unwrap();
        params.sup.fusion_sub_w.fill(0.0);
        let episode = small_episode(7, 8);
        let (_, features) = params.sub_forward(&episode).unwrap();
        let mut perturbed = features.clone();
        for row in &mut perturbed {
            for v in row.iter_mut() {
                *v += 0.7;
            }
        }
        let a = params.sup_forward(&episode, &features).unwrap();
        let b = params.sup_forward(&episode, &perturbed).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn nonzero_fusion_weight_keeps_rating_coupled() {
        let params = PolicyParams::init(small_dims(), 11).unwrap();
        let episode = small_episode(7, 8);
        let (_, features) = params.sub_forward(&episode).unwrap();
        let mut perturbed = features.clone();
        for row in &mut perturbed {
            for v in row.iter_mut() {
                *v += 0.7;
            }
        }
        let a = params.sup_forward(&episode, &features).unwrap();
        let b = params.sup_forward(&episode, &perturbed).unwrap();
        assert!((a - b).abs() > 1e-9, "fusion pathway is dead: {a} vs {b}");
    }

    #[test]
    fn rating_is_sensitive_to_frame_order() {
        let params = PolicyParams::init(small_dims(), 13).unwrap();
        let episode = small_episode(10, 9);
        let mut shuffled = episode.clone();
        shuffled.features.rotate_left(3);
        // Identical fused features isolate the convolution path.
        let zeros = vec![vec![0.0; 2 * params.dims.hidden_size]; episode.n_frames()];
        let a = params.sup_forward(&episode, &zeros).unwrap();
        let b = params.sup_forward(&shuffled, &zeros).unwrap();
        assert!((a - b).abs() > 1e-12, "temporal convolution ignores frame order");
    }

    #[test]
    fn sampling_is_seeded_and_unbiased() {
        let probs = vec![0.3; 10_000];
        let trace = sample_actions(&probs, 0.5, 99);
        let again = sample_actions(&probs, 0.5, 99);
        assert_eq!(trace, again);
        let mean = trace.frame_actions.iter().map(|&a| a as f64).sum::<f64>() / probs.len() as f64;
        assert!((mean - 0.3).abs() <= 0.02, "empirical mean {mean} too far from 0.3");
    }

    #[test]
    fn near_certain_probabilities_sample_all_ones() {
        let probs = vec![1.0 - 1e-12; 50];
        let trace = sample_actions(&probs, 1.0 - 1e-12, 0);
        assert!(trace.frame_actions.iter().all(|&a| a == 1));
        assert_eq!(trace.video_action, 1);
    }

    #[test]
    fn log_prob_of_uniform_coin_flips() {
        let trace = ActionTrace::assemble(vec![1, 0], vec![0.5, 0.5], 1, 0.5);
        assert!((trace.log_prob_sum - 3.0 * 0.5f64.ln()).abs() < 1e-12);
        assert_eq!(trace.recompute_log_prob(), trace.log_prob_sum);
    }

    #[test]
    fn greedy_thresholds_with_ties_positive() {
        let trace = greedy_actions(&[0.49, 0.51, 0.5], 0.5);
        assert_eq!(trace.frame_actions, vec![0, 1, 1]);
        assert_eq!(trace.video_action, 1);
        let low = greedy_actions(&[0.5 - 1e-9, 0.5 - 1e-9], 0.4);
        assert_eq!(low.frame_actions, vec![0, 0]);
        assert_eq!(low.video_action, 0);
    }

    #[test]
    fn stale_trace_is_rejected() {
        let params = PolicyParams::init(small_dims(), 17).unwrap();
        let episode = small_episode(5, 10);
        let pass = params.forward(&episode).unwrap();
        let trace = sample_actions(pass.frame_probs(), pass.video_prob(), 1);
        let mut drifted = params.clone();
        drifted.sub.head_b[0] += 0.05;
        assert!(matches!(
            drifted.log_prob_gradient(&episode, &trace),
            Err(AgentError::StaleTrace { .. })
        ));
        // The original parameters still accept it.
        params.log_prob_gradient(&episode, &trace).unwrap();
    }

    #[test]
    fn feature_dimension_mismatch_is_reported() {
        let params = PolicyParams::init(small_dims(), 19).unwrap();
        let episode = manual_episode(vec![vec![0.1, 0.2, 0.3]], vec![1]);
        assert!(matches!(
            params.forward(&episode),
            Err(AgentError::DimensionMismatch { expected: 2, found: 3, .. })
        ));
    }

    #[test]
    fn symmetric_parameters_on_a_palindrome_give_mirrored_gradients() {
        // Same cell in both directions, equal head halves, palindromic
        // frames: the two directions compute mirror images of each other, so
        // their gradient blocks must match.
        let mut params = PolicyParams::init(small_dims(), 23).unwrap();
        params.sub.backward_cell = params.sub.forward_cell.clone();
        let h = params.dims.hidden_size;
        for j in 0..h {
            params.sub.head_w[h + j] = params.sub.head_w[j];
        }
        let episode = manual_episode(
            vec![
                vec![0.1, -0.2],
                vec![0.3, 0.4],
                vec![0.5, 0.0],
                vec![0.3, 0.4],
                vec![0.1, -0.2],
            ],
            vec![0, 1, 1, 1, 0],
        );
        let pass = params.forward(&episode).unwrap();
        let probs = pass.frame_probs();
        for t in 0..probs.len() {
            assert!((probs[t] - probs[probs.len() - 1 - t]).abs() < 1e-12);
        }
        // Seed only the frame logits (palindromic by construction since all
        // actions are 1 and the probabilities mirror).
        let seeds: Vec<f64> = probs.iter().map(|&p| 1.0 - p).collect();
        let grad = params.backward(&pass, &seeds, 0.0);
        let fwd = &grad.sub.forward_cell;
        let bwd = &grad.sub.backward_cell;
        for (a, b) in [
            (&fwd.update_input.data, &bwd.update_input.data),
            (&fwd.update_recur.data, &bwd.update_recur.data),
            (&fwd.cand_input.data, &bwd.cand_input.data),
            (&fwd.cand_recur.data, &bwd.cand_recur.data),
        ] {
            for (x, y) in a.iter().zip(b) {
                assert!((x - y).abs() < 1e-12, "direction gradients diverge: {x} vs {y}");
            }
        }
        for j in 0..h {
            assert!((grad.sub.head_w[j] - grad.sub.head_w[h + j]).abs() < 1e-12);
        }
    }

    #[test]
    fn zero_fusion_kills_rating_gradient_into_selection_params() {
        let mut params = PolicyParams::init(small_dims(), 29).unwrap();
        params.sup.fusion_sub_w.fill(0.0);
        let episode = small_episode(6, 12);
        let grad = params.video_prob_gradient(&episode).unwrap();
        for (name, block) in grad.blocks() {
            if name.starts_with("sub.") {
                assert!(
                    block.iter().all(|&v| v == 0.0),
                    "rating gradient leaked into {name} despite zero fusion weights"
                );
            }
        }
        assert!(grad.sup.video_head_w.iter().any(|&v| v != 0.0));
    }

    #[test]
    fn log_prob_gradient_matches_finite_differences() {
        for (instance, n_frames) in [(0u64, 1usize), (1, 2), (2, 5), (3, 8)].into_iter() {
            let params = PolicyParams::init(small_dims(), 31 + instance).unwrap();
            let episode = small_episode(n_frames, 40 + instance);
            let pass = params.forward(&episode).unwrap();
            let trace = sample_actions(pass.frame_probs(), pass.video_prob(), instance);
            let analytic = params.log_prob_gradient(&episode, &trace).unwrap();
            assert_matches_finite_differences(
                &params,
                &analytic,
                |p| log_prob_under(p, &episode, &trace),
                &format!("log-prob instance {instance}"),
            );
        }
    }

    #[test]
    fn rating_probability_gradient_matches_finite_differences() {
        let params = PolicyParams::init(small_dims(), 53).unwrap();
        let episode = small_episode(6, 60);
        let analytic = params.video_prob_gradient(&episode).unwrap();
        assert_matches_finite_differences(
            &params,
            &analytic,
            |p| p.forward(&episode).unwrap().video_prob(),
            "rating probability",
        );
    }

    #[test]
    fn flatten_assign_round_trip() {
        let params = PolicyParams::init(small_dims(), 61).unwrap();
        let flat = params.flatten();
        let mut rebuilt = params.zeros_like();
        rebuilt.assign_flat(&flat);
        assert_eq!(rebuilt, params);
    }

    #[test]
    fn block_views_agree_on_names_and_sizes() {
        let mut params = PolicyParams::init(small_dims(), 67).unwrap();
        let read: Vec<(&'static str, usize)> =
            params.blocks().iter().map(|(n, b)| (*n, b.len())).collect();
        let written: Vec<(&'static str, usize)> =
            params.blocks_mut().iter().map(|(n, b)| (*n, b.len())).collect();
        assert_eq!(read, written);
        params.validate_shapes().unwrap();
    }

    #[test]
    fn non_finite_values_name_their_block() {
        let mut params = PolicyParams::init(small_dims(), 71).unwrap();
        assert_eq!(params.first_non_finite_block(), None);
        params.sup.conv_b[0] = f64::NAN;
        assert_eq!(params.first_non_finite_block(), Some("sup.conv_b"));
    }

    #[test]
    fn add_scaled_and_norm_behave_linearly() {
        let a = PolicyParams::init(small_dims(), 73).unwrap();
        let mut b = a.zeros_like();
        b.add_scaled(&a, 2.0);
        let mut c = a.clone();
        c.scale(2.0);
        assert_eq!(b, c);
        assert!((b.l2_norm() - 2.0 * a.l2_norm()).abs() < 1e-12);
    }
}
