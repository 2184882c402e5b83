//! Command-line surface. Flags override config-file values, which override
//! built-in defaults; `--help` states the effective default for every flag.

use std::path::PathBuf;

use clap::{Parser, Subcommand};

#[derive(Debug, Parser)]
#[command(
    name = "seqqa",
    version,
    about = "Dual-agent sequence quality assessment: simulate, train, evaluate",
    propagate_version = true
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Generate a seeded synthetic corpus as train/test JSONL files.
    Simulate(SimulateArgs),
    /// Render the shaped per-frame reward envelope for a label track.
    RewardProfile(RewardProfileArgs),
    /// Pretrain the frame-selection policy, then train both policies jointly.
    Train(TrainArgs),
    /// Score a checkpoint on a corpus at the frame and sequence level.
    Eval(EvalArgs),
}

#[derive(Debug, Parser)]
pub struct SimulateArgs {
    /// Generator settings as JSON; omitted fields keep their defaults.
    #[arg(long, value_name = "FILE")]
    pub config: Option<PathBuf>,
    /// Output directory for train.jsonl, test.jsonl, and manifest.json.
    #[arg(long, value_name = "DIR")]
    pub out: PathBuf,
    /// Number of training episodes.
    #[arg(long, value_name = "N", default_value_t = 200)]
    pub n_train: usize,
    /// Number of held-out episodes.
    #[arg(long, value_name = "N", default_value_t = 50)]
    pub n_test: usize,
    /// Frames per episode [default: 128].
    #[arg(long, value_name = "N")]
    pub n_frames: Option<usize>,
    /// Per-frame feature vector length [default: 16].
    #[arg(long, value_name = "N")]
    pub feature_dim: Option<usize>,
    /// Class separation over noise scale [default: 10].
    #[arg(long, value_name = "RATIO")]
    pub signal_to_noise: Option<f64>,
    /// Generator seed [default: 0].
    #[arg(long, value_name = "SEED")]
    pub seed: Option<u64>,
}

#[derive(Debug, Parser)]
pub struct RewardProfileArgs {
    /// A JSON array of 0/1 frame labels, or a JSONL corpus to read one
    /// episode's labels from.
    #[arg(value_name = "LABELS_OR_CORPUS")]
    pub input: PathBuf,
    /// Episode index to use when the input is a corpus [default: 0].
    #[arg(long, value_name = "INDEX")]
    pub episode: Option<usize>,
    /// Ramp width in frames on each side of a qualified cluster.
    #[arg(long, value_name = "FRAMES", default_value_t = 5)]
    pub ramp_width: usize,
    /// Plateau amplitude of the shaped reward.
    #[arg(long, value_name = "VALUE", default_value_t = 1.0)]
    pub amplitude: f64,
    /// Output directory for profile.csv, profile.svg, and manifest.json.
    #[arg(long, value_name = "DIR")]
    pub out: PathBuf,
}

#[derive(Debug, Parser)]
pub struct TrainArgs {
    /// Training corpus (JSON Lines, one episode per line).
    #[arg(value_name = "CORPUS")]
    pub corpus: PathBuf,
    /// Trainer settings as JSON; omitted fields keep their defaults.
    #[arg(long, value_name = "FILE")]
    pub config: Option<PathBuf>,
    /// Output directory for checkpoints, epoch logs, and manifest.json.
    #[arg(long, value_name = "DIR")]
    pub out: PathBuf,
    /// Drop the rating reward from the optimized objective (sets the rating
    /// weight to zero); the log still reports the rating reward column.
    #[arg(long)]
    pub ablate_sup: bool,
    /// Episodes sampled into each gradient update [default: 5].
    #[arg(long, value_name = "N")]
    pub episodes_per_update: Option<usize>,
    /// Base learning rate [default: 0.00001].
    #[arg(long, value_name = "RATE")]
    pub learning_rate: Option<f64>,
    /// Factor applied to the learning rate at every decay step [default: 0.5].
    #[arg(long, value_name = "FACTOR")]
    pub lr_decay_factor: Option<f64>,
    /// Epochs between learning-rate decays [default: 30].
    #[arg(long, value_name = "EPOCHS")]
    pub lr_decay_every: Option<usize>,
    /// Epochs of frame-selection pretraining [default: 30].
    #[arg(long, value_name = "EPOCHS")]
    pub pretrain_epochs: Option<usize>,
    /// Epochs of joint training [default: 30].
    #[arg(long, value_name = "EPOCHS")]
    pub joint_epochs: Option<usize>,
    /// Training seed [default: 0].
    #[arg(long, value_name = "SEED")]
    pub seed: Option<u64>,
    /// Write an extra numbered checkpoint after every N completed joint
    /// epochs [default: off].
    #[arg(long, value_name = "N")]
    pub checkpoint_every: Option<usize>,
}

#[derive(Debug, Parser)]
pub struct EvalArgs {
    /// Parameter checkpoint (JSON).
    #[arg(value_name = "CHECKPOINT")]
    pub checkpoint: PathBuf,
    /// Corpus to score (JSON Lines).
    #[arg(value_name = "CORPUS")]
    pub corpus: PathBuf,
    /// Output directory for report.json, predictions.csv, and manifest.json.
    #[arg(long, value_name = "DIR")]
    pub out: PathBuf,
}
