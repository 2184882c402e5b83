//! `seqqa train`: frame-selection pretraining followed by joint training,
//! with checkpoints and per-epoch logs.

use std::fs;

use anyhow::anyhow;
use seqqa_core::checkpoint;
use seqqa_core::train::{pretrain_sub, train_joint, train_joint_observed};
use seqqa_core::{PolicyParams, TrainConfig};

use crate::args::TrainArgs;
use crate::manifest::{write_manifest, ManifestBuilder};
use crate::stage::StagingDir;

use super::{runtime_err, CommandError};

pub fn run(args: &TrainArgs) -> Result<(), CommandError> {
    let mut config: TrainConfig = match &args.config {
        Some(path) => super::read_config(path)?,
        None => TrainConfig::default(),
    };
    if let Some(n) = args.episodes_per_update {
        config.episodes_per_update = n;
    }
    if let Some(lr) = args.learning_rate {
        config.learning_rate = lr;
    }
    if let Some(factor) = args.lr_decay_factor {
        config.lr_decay_factor = factor;
    }
    if let Some(every) = args.lr_decay_every {
        config.lr_decay_every = every;
    }
    if let Some(epochs) = args.pretrain_epochs {
        config.pretrain_epochs = epochs;
    }
    if let Some(epochs) = args.joint_epochs {
        config.joint_epochs = epochs;
    }
    if let Some(seed) = args.seed {
        config.seed = seed;
    }
    if args.ablate_sup {
        config.beta = 0.0;
    }
    if args.checkpoint_every == Some(0) {
        return Err(CommandError::usage(anyhow!("--checkpoint-every must be at least 1")));
    }
    config.validate().map_err(CommandError::usage)?;

    let corpus = super::read_corpus(&args.corpus)?;

    let resolved = serde_json::to_value(&config)
        .map_err(|e| CommandError::runtime(anyhow!("cannot serialize config: {e}")))?;
    let mut builder = ManifestBuilder::new("train", resolved, vec![config.seed]);
    builder
        .record_input(&args.corpus)
        .map_err(runtime_err(format!("hashing {}", args.corpus.display())))?;
    if let Some(path) = &args.config {
        builder
            .record_input(path)
            .map_err(runtime_err(format!("hashing {}", path.display())))?;
    }

    // Bad sizes come straight from the configuration, so they are reported
    // as a configuration error rather than a training failure.
    let mut params = PolicyParams::init(config.dims, config.seed).map_err(CommandError::usage)?;

    let staged = StagingDir::new(&args.out)
        .map_err(runtime_err(format!("cannot stage outputs for {}", args.out.display())))?;
    let pretrain_log =
        pretrain_sub(&mut params, &corpus, &config).map_err(runtime_err("pretraining failed"))?;
    checkpoint::save(&params, &staged.path("checkpoint_pretrain.json"))
        .map_err(runtime_err("writing checkpoint_pretrain.json"))?;
    // Periodic snapshots are written by the epoch observer as training runs,
    // so an interval of K yields one file per K completed joint epochs.
    let mut snapshots: Vec<String> = Vec::new();
    let joint_log = match args.checkpoint_every {
        None => train_joint(&mut params, &corpus, &config)
            .map_err(runtime_err("joint training failed"))?,
        Some(every) => train_joint_observed(&mut params, &corpus, &config, |epoch, snapshot| {
            if (epoch + 1) % every != 0 {
                return Ok(());
            }
            let name = format!("checkpoint_epoch_{:04}.json", epoch + 1);
            checkpoint::save(snapshot, &staged.path(&name))
                .map_err(|e| format!("writing {name}: {e}"))?;
            snapshots.push(name);
            Ok(())
        })
        .map_err(runtime_err("joint training failed"))?,
    };
    checkpoint::save(&params, &staged.path("checkpoint.json"))
        .map_err(runtime_err("writing checkpoint.json"))?;
    // Wall-clock times are zeroed in the persisted logs so identical runs
    // produce identical bytes; the manifest carries the real timestamps.
    fs::write(staged.path("pretrain_log.csv"), pretrain_log.with_zeroed_seconds().to_csv())
        .map_err(runtime_err("writing pretrain_log.csv"))?;
    fs::write(staged.path("joint_log.csv"), joint_log.with_zeroed_seconds().to_csv())
        .map_err(runtime_err("writing joint_log.csv"))?;

    let mut outputs =
        vec!["checkpoint_pretrain.json", "checkpoint.json", "pretrain_log.csv", "joint_log.csv"];
    outputs.extend(snapshots.iter().map(String::as_str));
    let manifest =
        builder.finish(&staged, &outputs).map_err(runtime_err("hashing outputs"))?;
    write_manifest(&manifest, &staged).map_err(runtime_err("writing manifest"))?;
    staged.commit().map_err(runtime_err("committing outputs"))?;

    println!(
        "trained on {} episodes: {} pretrain + {} joint epochs, outputs in {}",
        corpus.len(),
        config.pretrain_epochs,
        config.joint_epochs,
        args.out.display()
    );
    if let Some(last) = joint_log.records.last() {
        println!(
            "final joint epoch: frame reward {:.4}, rating reward {:.4}, objective {:.4}",
            last.r_sub, last.r_sup, last.r_total
        );
    }
    Ok(())
}
