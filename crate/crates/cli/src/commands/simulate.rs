//! `seqqa simulate`: generate a seeded synthetic corpus.

use anyhow::anyhow;
use seqqa_core::sim::{generate_corpus, write_corpus};
use seqqa_core::{Episode, SimConfig};

use crate::args::SimulateArgs;
use crate::manifest::{write_manifest, ManifestBuilder};
use crate::stage::StagingDir;

use super::{runtime_err, CommandError};

pub fn run(args: &SimulateArgs) -> Result<(), CommandError> {
    let mut config: SimConfig = match &args.config {
        Some(path) => super::read_config(path)?,
        None => SimConfig::default(),
    };
    if let Some(n_frames) = args.n_frames {
        config.n_frames = n_frames;
    }
    if let Some(feature_dim) = args.feature_dim {
        config.feature_dim = feature_dim;
    }
    if let Some(snr) = args.signal_to_noise {
        config.signal_to_noise = snr;
    }
    if let Some(seed) = args.seed {
        config.seed = seed;
    }
    config.validate().map_err(CommandError::usage)?;

    let resolved = serde_json::to_value(&config)
        .map_err(|e| CommandError::runtime(anyhow!("cannot serialize config: {e}")))?;
    let mut builder = ManifestBuilder::new("simulate", resolved, vec![config.seed]);
    if let Some(path) = &args.config {
        builder
            .record_input(path)
            .map_err(runtime_err(format!("hashing {}", path.display())))?;
    }

    let (train, test) = generate_corpus(&config, args.n_train, args.n_test)
        .map_err(runtime_err("generation failed"))?;

    let staged = StagingDir::new(&args.out)
        .map_err(runtime_err(format!("cannot stage outputs for {}", args.out.display())))?;
    write_corpus(&train, &staged.path("train.jsonl"))
        .map_err(runtime_err("writing train.jsonl"))?;
    write_corpus(&test, &staged.path("test.jsonl"))
        .map_err(runtime_err("writing test.jsonl"))?;
    let manifest = builder
        .finish(&staged, &["train.jsonl", "test.jsonl"])
        .map_err(runtime_err("hashing outputs"))?;
    write_manifest(&manifest, &staged).map_err(runtime_err("writing manifest"))?;
    staged.commit().map_err(runtime_err("committing outputs"))?;

    println!(
        "wrote {} train + {} test episodes to {}",
        train.len(),
        test.len(),
        args.out.display()
    );
    print_split_summary("train", &train);
    print_split_summary("test", &test);
    Ok(())
}

/// Prints positive prevalence at both label levels for one split.
fn print_split_summary(name: &str, episodes: &[Episode]) {
    if episodes.is_empty() {
        println!("{name}: empty");
        return;
    }
    let positive_videos = episodes.iter().filter(|e| e.video_label == 1).count();
    let total_frames: usize = episodes.iter().map(Episode::n_frames).sum();
    let positive_frames: usize = episodes.iter().map(|e| e.frame_labels.ones()).sum();
    println!(
        "{name}: {} episodes, video prevalence {:.2}%, frame prevalence {:.2}%",
        episodes.len(),
        100.0 * positive_videos as f64 / episodes.len() as f64,
        100.0 * positive_frames as f64 / total_frames as f64
    );
}
