//! `seqqa eval`: score a checkpoint on a corpus and dump per-frame
//! predictions for timeline-style figures.

use std::fmt::Write as _;
use std::fs;

use anyhow::anyhow;
use seqqa_core::checkpoint;
use seqqa_core::metrics::{evaluate_predictions, predict_corpus, MetricsReport};
use serde_json::json;

use crate::args::EvalArgs;
use crate::manifest::{write_manifest, ManifestBuilder};
use crate::stage::StagingDir;

use super::{runtime_err, CommandError};

pub fn run(args: &EvalArgs) -> Result<(), CommandError> {
    let params = checkpoint::load(&args.checkpoint)
        .map_err(runtime_err(format!("checkpoint {}", args.checkpoint.display())))?;
    let corpus = super::read_corpus(&args.corpus)?;

    // An incompatible checkpoint surfaces here with the expected and found
    // dimensions in the message.
    let predictions =
        predict_corpus(&params, &corpus).map_err(runtime_err("inference failed"))?;
    let (frame, video) =
        evaluate_predictions(&predictions).map_err(runtime_err("scoring failed"))?;

    let mut builder =
        ManifestBuilder::new("eval", json!({ "dims": params.dims }), Vec::new());
    builder
        .record_input(&args.checkpoint)
        .map_err(runtime_err(format!("hashing {}", args.checkpoint.display())))?;
    builder
        .record_input(&args.corpus)
        .map_err(runtime_err(format!("hashing {}", args.corpus.display())))?;

    let report = json!({ "frame": frame, "video": video });
    let mut report_text = serde_json::to_string_pretty(&report)
        .map_err(|e| CommandError::runtime(anyhow!("cannot serialize report: {e}")))?;
    report_text.push('\n');

    let mut csv = String::from("episode_id,frame_idx,prob,action,label\n");
    for p in &predictions {
        for (idx, ((&prob, &action), &label)) in p
            .frame_probs
            .iter()
            .zip(&p.frame_actions)
            .zip(&p.frame_labels)
            .enumerate()
        {
            let _ = writeln!(csv, "{},{idx},{prob},{action},{label}", p.episode_id);
        }
    }

    let staged = StagingDir::new(&args.out)
        .map_err(runtime_err(format!("cannot stage outputs for {}", args.out.display())))?;
    fs::write(staged.path("report.json"), report_text)
        .map_err(runtime_err("writing report.json"))?;
    fs::write(staged.path("predictions.csv"), csv)
        .map_err(runtime_err("writing predictions.csv"))?;
    let manifest = builder
        .finish(&staged, &["report.json", "predictions.csv"])
        .map_err(runtime_err("hashing outputs"))?;
    write_manifest(&manifest, &staged).map_err(runtime_err("writing manifest"))?;
    staged.commit().map_err(runtime_err("committing outputs"))?;

    println!("evaluated {} episodes from {}", corpus.len(), args.corpus.display());
    print_level_summary(&frame);
    print_level_summary(&video);
    Ok(())
}

fn print_level_summary(report: &MetricsReport) {
    println!(
        "{:?}: n={}, ACC {}%, SEN {}%, SPE {}%, AUC {}",
        report.level,
        report.n_items,
        report.percent.acc,
        report.percent.sen,
        report.percent.spe,
        report.percent.auc
    );
}
