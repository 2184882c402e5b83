//! `seqqa reward-profile`: render the shaped per-frame reward for a label
//! track as a CSV table and an SVG chart.

use std::fmt::Write as _;
use std::fs;

use anyhow::anyhow;
use seqqa_core::reward::{envelope_profile, pulses_from_labels};
use seqqa_core::{FrameLabels, TrapezoidParams};
use serde_json::json;

use crate::args::RewardProfileArgs;
use crate::chart::envelope_chart;
use crate::manifest::{write_manifest, ManifestBuilder};
use crate::stage::StagingDir;

use super::{runtime_err, CommandError};

pub fn run(args: &RewardProfileArgs) -> Result<(), CommandError> {
    let params =
        TrapezoidParams::new(args.ramp_width, args.amplitude).map_err(CommandError::usage)?;
    let labels = load_labels(args)?;
    let pulses = pulses_from_labels(&labels);
    let profile = envelope_profile(&pulses, labels.len(), &params);

    let resolved = json!({
        "ramp_width": args.ramp_width,
        "amplitude": args.amplitude,
        "episode": args.episode,
    });
    let mut builder = ManifestBuilder::new("reward-profile", resolved, Vec::new());
    builder
        .record_input(&args.input)
        .map_err(runtime_err(format!("hashing {}", args.input.display())))?;

    let mut csv = String::from("frame,label,envelope\n");
    for (i, (&label, &value)) in
        labels.as_slice().iter().zip(profile.values()).enumerate()
    {
        // `{}` prints the shortest representation that parses back to the
        // same f64, so the table is exact.
        let _ = writeln!(csv, "{i},{label},{value}");
    }
    let svg = envelope_chart(labels.as_slice(), profile.values(), args.amplitude);

    let staged = StagingDir::new(&args.out)
        .map_err(runtime_err(format!("cannot stage outputs for {}", args.out.display())))?;
    fs::write(staged.path("profile.csv"), csv).map_err(runtime_err("writing profile.csv"))?;
    fs::write(staged.path("profile.svg"), svg).map_err(runtime_err("writing profile.svg"))?;
    let manifest = builder
        .finish(&staged, &["profile.csv", "profile.svg"])
        .map_err(runtime_err("hashing outputs"))?;
    write_manifest(&manifest, &staged).map_err(runtime_err("writing manifest"))?;
    staged.commit().map_err(runtime_err("committing outputs"))?;

    println!(
        "wrote envelope over {} frames ({} qualified clusters) to {}",
        labels.len(),
        pulses.count(),
        args.out.display()
    );
    Ok(())
}

/// Reads the label track: either a bare JSON array of 0/1, or one episode
/// out of a JSONL corpus.
fn load_labels(args: &RewardProfileArgs) -> Result<FrameLabels, CommandError> {
    let text = fs::read_to_string(&args.input)
        .map_err(runtime_err(format!("cannot read {}", args.input.display())))?;
    if text.trim_start().starts_with('[') {
        if args.episode.is_some() {
            return Err(CommandError::usage(anyhow!(
                "--episode only applies when the input is a JSONL corpus"
            )));
        }
        let raw: Vec<i64> = serde_json::from_str(&text).map_err(|e| {
            CommandError::runtime(anyhow!(
                "{} is not a JSON array of integers: {e}",
                args.input.display()
            ))
        })?;
        for (index, &value) in raw.iter().enumerate() {
            if value != 0 && value != 1 {
                return Err(CommandError::runtime(anyhow!(
                    "label at index {index} is {value}, expected 0 or 1"
                )));
            }
        }
        FrameLabels::new(raw.iter().map(|&v| v as u8).collect())
            .map_err(CommandError::runtime)
    } else {
        let corpus = super::read_corpus(&args.input)?;
        let index = args.episode.unwrap_or(0);
        let episode = corpus.get(index).ok_or_else(|| {
            CommandError::runtime(anyhow!(
                "episode {index} out of range: {} holds {} episodes",
                args.input.display(),
                corpus.len()
            ))
        })?;
        Ok(episode.frame_labels.clone())
    }
}
