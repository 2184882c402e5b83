//! Acceptance gate: nine end-to-end checks covering the reward math, the
//! gradients, the metrics, the learning behavior, the schedule, and the
//! reproducibility contract. One test per criterion; each prints a single
//! `ACCEPTANCE <n> <name>: PASS` or `... FAIL` line. Tolerances and runtime
//! budgets are stated inline where each check runs.

use std::fs;
use std::io::Write as _;
use std::path::Path;
use std::process::{Command, Output};
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use seqqa_core::agents::{sample_actions, ActionTrace, AgentDims, PolicyParams};
use seqqa_core::metrics::{auc, evaluate_corpus};
use seqqa_core::reward::{
    envelope_profile, pulses_from_labels, trapezoid_value, video_reward,
};
use seqqa_core::sim::{generate_corpus, SimConfig};
use seqqa_core::train::{pretrain_sub, train_joint, TrainConfig, TrainLog};
use seqqa_core::{Episode, FrameLabels, TrapezoidParams};
use tempfile::TempDir;

/// Runs one criterion body, prints its verdict line, and fails the test on
/// a FAIL so the suite stays honest.
fn criterion(number: usize, name: &str, body: impl FnOnce() -> Result<(), String>) {
    match body() {
        Ok(()) => report(format!("ACCEPTANCE {number} {name}: PASS")),
        Err(message) => {
            report(format!("ACCEPTANCE {number} {name}: FAIL - {message}"));
            panic!("acceptance criterion {number} ({name}) failed: {message}");
        }
    }
}

/// Writes a verdict line to the process stdout directly, past the harness's
/// per-test output capture, so the nine lines show up in a plain
/// `cargo test` run too.
fn report(line: String) {
    let mut out = std::io::stdout().lock();
    let _ = writeln!(out, "{line}");
    let _ = out.flush();
}

macro_rules! check {
    ($cond:expr, $($msg:tt)+) => {
        let holds: bool = $cond;
        if !holds {
            return Err(format!($($msg)+));
        }
    };
}

fn within_budget(started: Instant, budget: Duration, what: &str) -> Result<(), String> {
    let elapsed = started.elapsed();
    if elapsed > budget {
        return Err(format!("{what} took {elapsed:?}, over the {budget:?} budget"));
    }
    Ok(())
}

// --- criterion 1 -----------------------------------------------------------

/// Independent route to the envelope: find maximal label runs by scanning,
/// then credit each frame from its integer distance to the nearest run.
/// Both routes reduce to `a * ((d - distance) / d)` on ramps, evaluated on
/// exactly representable integers, so agreement is exact.
fn oracle_envelope_value(labels: &[u8], id: usize, d: usize, a: f64) -> f64 {
    let mut best = -1.0f64;
    let mut i = 0;
    while i < labels.len() {
        if labels[i] == 1 {
            let start = i;
            while i + 1 < labels.len() && labels[i + 1] == 1 {
                i += 1;
            }
            let end = i;
            let candidate = if id >= start && id <= end {
                a
            } else if id < start && start - id <= d {
                a * ((d - (start - id)) as f64 / d as f64)
            } else if id > end && id - end <= d {
                a * ((d - (id - end)) as f64 / d as f64)
            } else {
                -1.0
            };
            if candidate > best {
                best = candidate;
            }
        }
        i += 1;
    }
    best
}

#[test]
fn envelope_matches_brute_force_oracle_exhaustively() {
    criterion(1, "envelope equals the brute-force oracle on every short label track", || {
        let started = Instant::now();
        let mut rng = ChaCha8Rng::seed_from_u64(0xACC1);
        for len in 1usize..=12 {
            for bits in 0u32..(1 << len) {
                let labels: Vec<u8> = (0..len).map(|i| ((bits >> i) & 1) as u8).collect();
                // Two randomized shape configurations per track.
                for _ in 0..2 {
                    let d = rng.gen_range(1..=7);
                    let a = rng.gen_range(0.05..2.0);
                    let params = TrapezoidParams::new(d, a).map_err(|e| e.to_string())?;
                    let frame_labels =
                        FrameLabels::new(labels.clone()).map_err(|e| e.to_string())?;
                    let profile =
                        envelope_profile(&pulses_from_labels(&frame_labels), len, &params);
                    for id in 0..len {
                        let got = profile.values()[id];
                        let expected = oracle_envelope_value(&labels, id, d, a);
                        check!(
                            got == expected,
                            "labels {labels:?}, d={d}, a={a}: frame {id} gave {got}, oracle {expected}"
                        );
                    }
                }
            }
        }
        within_budget(started, Duration::from_secs(60), "exhaustive envelope check")
    });
}

// --- criterion 2 -----------------------------------------------------------

#[test]
fn trapezoid_branch_values_and_boundary_continuity() {
    criterion(2, "trapezoid branches match hand-evaluated values and meet at the plateau", || {
        let started = Instant::now();
        let mut rng = ChaCha8Rng::seed_from_u64(0xACC2);
        for case in 0..120 {
            let d = rng.gen_range(1usize..=10);
            let a = rng.gen_range(0.1..3.0);
            let params = TrapezoidParams::new(d, a).map_err(|e| e.to_string())?;
            let start = rng.gen_range(0usize..50) as f64;
            let extent = rng.gen_range(0usize..20) as f64;
            let end = start + extent;
            let df = d as f64;

            let foot = trapezoid_value(start - df, start, extent, &params);
            check!(foot == 0.0, "case {case}: ramp foot gave {foot}, expected 0");

            let inside = start + rng.gen_range(0..=extent as usize) as f64;
            let plateau = trapezoid_value(inside, start, extent, &params);
            check!(plateau == a, "case {case}: plateau at {inside} gave {plateau}, expected {a}");

            if d > 1 {
                let k = rng.gen_range(1..d);
                let descent = trapezoid_value(end + k as f64, start, extent, &params);
                let expected = a * ((d - k) as f64 / df);
                check!(
                    descent == expected,
                    "case {case}: descent offset {k} gave {descent}, expected {expected}"
                );
            }

            let far = end + df + 1.0 + rng.gen_range(0..100) as f64;
            let outside = trapezoid_value(far, start, extent, &params);
            check!(outside == -1.0, "case {case}: far field at {far} gave {outside}");

            // Continuity: the rising and falling ramps meet the plateau
            // amplitude exactly at its two endpoints.
            let at_start = trapezoid_value(start, start, extent, &params);
            let at_end = trapezoid_value(end, start, extent, &params);
            check!(
                at_start == a && at_end == a,
                "case {case}: boundary values {at_start}/{at_end}, expected {a}"
            );
        }
        within_budget(started, Duration::from_secs(60), "trapezoid branch check")
    });
}

// --- criterion 3 -----------------------------------------------------------

#[test]
fn rating_penalty_identity_examples_and_monotonicity() {
    criterion(3, "rating penalty is zero only at a perfect rating and strictly worsens with error", || {
        let started = Instant::now();
        // The two target values the rating is scored against are binary, so
        // a perfect rating is expressible exactly at both of them.
        let at_zero = video_reward(0.0, 0).map_err(|e| e.to_string())?;
        let at_one = video_reward(1.0, 1).map_err(|e| e.to_string())?;
        check!(at_zero == 0.0 && at_one == 0.0, "perfect ratings scored {at_zero}/{at_one}");

        let halfway = video_reward(0.5, 1).map_err(|e| e.to_string())?;
        check!(halfway == -0.125, "half-confident rating scored {halfway}, expected -0.125");

        for label in [0u8, 1u8] {
            let target = f64::from(label);
            let mut previous: Option<(f64, f64)> = None;
            for i in 0..=100 {
                let q = i as f64 / 100.0;
                let reward = video_reward(q, label).map_err(|e| e.to_string())?;
                let distance = (q - target).abs();
                check!(reward <= 0.0, "reward {reward} above 0 at q={q}, label {label}");
                check!(
                    (reward == 0.0) == (distance == 0.0),
                    "zero reward must coincide with a perfect rating (q={q}, label {label})"
                );
                if let Some((prev_distance, prev_reward)) = previous {
                    if distance > prev_distance {
                        check!(
                            reward < prev_reward,
                            "not strictly decreasing at q={q}, label {label}"
                        );
                    } else {
                        check!(
                            reward > prev_reward,
                            "not strictly increasing toward the target at q={q}, label {label}"
                        );
                    }
                }
                previous = Some((distance, reward));
            }
        }
        within_budget(started, Duration::from_secs(60), "rating penalty grid")
    });
}

// --- criterion 4 -----------------------------------------------------------

fn random_episode(rng: &mut ChaCha8Rng, n_frames: usize, feature_dim: usize) -> Episode {
    let labels: Vec<u8> = (0..n_frames).map(|_| u8::from(rng.gen_bool(0.5))).collect();
    let features = (0..n_frames)
        .map(|_| (0..feature_dim).map(|_| rng.gen_range(-1.0f32..1.0)).collect())
        .collect();
    Episode {
        id: "fd-instance".to_string(),
        video_label: u8::from(rng.gen_bool(0.5)),
        frame_labels: FrameLabels::new(labels).expect("binary by construction"),
        features,
    }
}

fn trace_log_prob(params: &PolicyParams, episode: &Episode, trace: &ActionTrace) -> f64 {
    let pass = params.forward(episode).expect("forward should succeed");
    let bernoulli = |action: u8, p: f64| if action == 1 { p.ln() } else { (1.0 - p).ln() };
    trace
        .frame_actions
        .iter()
        .zip(pass.frame_probs())
        .map(|(&a, &p)| bernoulli(a, p))
        .sum::<f64>()
        + bernoulli(trace.video_action, pass.video_prob())
}

#[test]
fn log_prob_gradients_match_finite_differences() {
    criterion(4, "analytic log-probability gradients agree with central differences", || {
        let started = Instant::now();
        let mut rng = ChaCha8Rng::seed_from_u64(0xACC4);
        for case in 0..20 {
            let dims = AgentDims {
                feature_dim: rng.gen_range(1..=3),
                hidden_size: rng.gen_range(2..=4),
                conv_channels: rng.gen_range(1..=3),
                conv_kernel: [1, 3][rng.gen_range(0..2)],
            };
            let n_frames = rng.gen_range(1..=8);
            let episode = random_episode(&mut rng, n_frames, dims.feature_dim);
            let params = PolicyParams::init(dims, rng.gen()).map_err(|e| e.to_string())?;
            let pass = params.forward(&episode).map_err(|e| e.to_string())?;
            let trace = sample_actions(pass.frame_probs(), pass.video_prob(), rng.gen());

            let analytic =
                params.log_prob_gradient(&episode, &trace).map_err(|e| e.to_string())?.flatten();
            let base = params.flatten();
            let step = 1e-5;
            for j in 0..base.len() {
                let mut probe = params.clone();
                let mut values = base.clone();
                values[j] = base[j] + step;
                probe.assign_flat(&values);
                let upper = trace_log_prob(&probe, &episode, &trace);
                values[j] = base[j] - step;
                probe.assign_flat(&values);
                let lower = trace_log_prob(&probe, &episode, &trace);
                let numeric = (upper - lower) / (2.0 * step);

                // Central differences carry ~1e-10 of cancellation noise at
                // this step size, so components smaller than 1e-5 are
                // compared against that floor instead of their own size.
                let denom = numeric.abs().max(analytic[j].abs()).max(1e-5);
                let rel = (numeric - analytic[j]).abs() / denom;
                check!(
                    rel <= 1e-4,
                    "case {case}, component {j}: numeric {numeric:.6e} vs analytic {:.6e} (rel {rel:.3e})",
                    analytic[j]
                );
            }
        }
        within_budget(started, Duration::from_secs(60), "gradient check")
    });
}

// --- criterion 5 -----------------------------------------------------------

/// Second route to the ranking statistic: sweep thresholds from high to
/// low tracing (FPR, TPR) and integrate with the trapezoid rule. Tied
/// scores advance both coordinates at once; the trapezoid over that jump
/// matches the tie-averaged rank treatment.
fn trapezoid_roc_auc(scores: &[f64], labels: &[u8]) -> f64 {
    let mut order: Vec<usize> = (0..scores.len()).collect();
    order.sort_by(|&a, &b| scores[b].total_cmp(&scores[a]));
    let n_pos = labels.iter().filter(|&&l| l == 1).count() as f64;
    let n_neg = labels.len() as f64 - n_pos;
    let (mut tp, mut fp) = (0.0f64, 0.0f64);
    let (mut prev_tpr, mut prev_fpr) = (0.0f64, 0.0f64);
    let mut area = 0.0;
    let mut i = 0;
    while i < order.len() {
        let threshold = scores[order[i]];
        while i < order.len() && scores[order[i]] == threshold {
            if labels[order[i]] == 1 {
                tp += 1.0;
            } else {
                fp += 1.0;
            }
            i += 1;
        }
        let (tpr, fpr) = (tp / n_pos, fp / n_neg);
        area += (fpr - prev_fpr) * (tpr + prev_tpr) / 2.0;
        prev_tpr = tpr;
        prev_fpr = fpr;
    }
    area
}

#[test]
fn auc_dual_route_agreement_and_worked_example() {
    criterion(5, "rank-based AUC equals trapezoidal ROC area and the worked example", || {
        let started = Instant::now();
        let mut rng = ChaCha8Rng::seed_from_u64(0xACC5);
        let mut checked = 0;
        while checked < 1000 {
            let n = rng.gen_range(2usize..=40);
            let labels: Vec<u8> = (0..n).map(|_| u8::from(rng.gen_bool(0.5))).collect();
            if labels.iter().all(|&l| l == 1) || labels.iter().all(|&l| l == 0) {
                continue;
            }
            // Half the instances quantize scores to one decimal so ties are
            // exercised heavily.
            let quantize = rng.gen_bool(0.5);
            let scores: Vec<f64> = (0..n)
                .map(|_| {
                    if quantize {
                        rng.gen_range(0..=10) as f64 / 10.0
                    } else {
                        rng.gen::<f64>()
                    }
                })
                .collect();
            let by_ranks = auc(&scores, &labels).map_err(|e| e.to_string())?;
            let by_roc = trapezoid_roc_auc(&scores, &labels);
            let gap = (by_ranks - by_roc).abs();
            check!(
                gap <= 1e-12,
                "instance {checked}: rank route {by_ranks} vs ROC route {by_roc} (gap {gap:.3e})"
            );
            checked += 1;
        }
        let example = auc(&[0.8, 0.6, 0.4, 0.2], &[1, 0, 1, 0]).map_err(|e| e.to_string())?;
        check!(example == 0.75, "worked example gave {example}, expected exactly 0.75");
        within_budget(started, Duration::from_secs(60), "AUC dual-route check")
    });
}

// --- criteria 6 and 7 ------------------------------------------------------

/// Corpus for the learning checks: the generator defaults (128 frames, 16
/// features, signal-to-noise 10) at a fixed seed, split 200 train / 50 test.
const LEARNING_CORPUS_SEED: u64 = 601;

fn learning_corpus() -> (Vec<Episode>, Vec<Episode>) {
    let config = SimConfig { seed: LEARNING_CORPUS_SEED, ..SimConfig::default() };
    generate_corpus(&config, 200, 50).expect("default generator config is valid")
}

/// Trainer settings for the learning checks. The corpus is fixed above;
/// these sizes and rates are tuned only for reaching a clear signal inside
/// the runtime budget.
fn learning_config(seed: u64) -> TrainConfig {
    TrainConfig {
        learning_rate: 0.02,
        pretrain_epochs: 30,
        joint_epochs: 30,
        grad_clip: Some(5.0),
        trapezoid: TrapezoidParams::new(2, 1.0).expect("valid shape"),
        dims: AgentDims {
            feature_dim: 16,
            hidden_size: 16,
            conv_channels: 4,
            conv_kernel: 3,
        },
        seed,
        ..TrainConfig::default()
    }
}

/// Runs the full two-phase pipeline from the config's own initialization.
fn train_pipeline(
    train_set: &[Episode],
    config: &TrainConfig,
) -> Result<PolicyParams, String> {
    let mut params =
        PolicyParams::init(config.dims, config.seed).map_err(|e| e.to_string())?;
    pretrain_sub(&mut params, train_set, config).map_err(|e| e.to_string())?;
    train_joint(&mut params, train_set, config).map_err(|e| e.to_string())?;
    Ok(params)
}

#[test]
fn joint_training_lifts_frame_auc_on_the_default_corpus() {
    criterion(6, "joint training lifts frame-level AUC past 0.90 and +0.30 over untrained", || {
        let started = Instant::now();
        let (train_set, test_set) = learning_corpus();
        let config = learning_config(602);

        let untrained =
            PolicyParams::init(config.dims, config.seed).map_err(|e| e.to_string())?;
        let (frame_before, _) = evaluate_corpus(&untrained, &test_set).map_err(|e| e.to_string())?;
        let auc_before =
            frame_before.auc.ok_or("test split has a single frame class")?;

        let trained = train_pipeline(&train_set, &config)?;
        let (frame_after, _) = evaluate_corpus(&trained, &test_set).map_err(|e| e.to_string())?;
        let auc_after = frame_after.auc.ok_or("test split has a single frame class")?;

        eprintln!("criterion 6: frame AUC untrained {auc_before:.4} -> trained {auc_after:.4}");
        check!(auc_after > 0.90, "trained frame AUC {auc_after:.4} is not above 0.90");
        check!(
            auc_after - auc_before >= 0.30,
            "AUC lift {:.4} is below 0.30 (untrained {auc_before:.4}, trained {auc_after:.4})",
            auc_after - auc_before
        );
        within_budget(started, Duration::from_secs(600), "learning direction-check")
    });
}

#[test]
fn ablation_direction_checks_across_seeds() {
    criterion(7, "full training beats rating-only on video ACC and beta=0 on frame SEN (majority of 3 seeds)", || {
        let started = Instant::now();
        let (train_set, test_set) = learning_corpus();
        let mut video_acc_holds = 0;
        let mut frame_sen_holds = 0;
        for seed in [701u64, 702, 703] {
            let full = train_pipeline(&train_set, &learning_config(seed))?;
            let fusion_ablated = train_pipeline(
                &train_set,
                &TrainConfig { ablate_sub_fusion: true, ..learning_config(seed) },
            )?;
            let rating_ablated = train_pipeline(
                &train_set,
                &TrainConfig { beta: 0.0, ..learning_config(seed) },
            )?;

            let (frame_full, video_full) =
                evaluate_corpus(&full, &test_set).map_err(|e| e.to_string())?;
            let (_, video_fusionless) =
                evaluate_corpus(&fusion_ablated, &test_set).map_err(|e| e.to_string())?;
            let (frame_rewardless, _) =
                evaluate_corpus(&rating_ablated, &test_set).map_err(|e| e.to_string())?;

            eprintln!(
                "criterion 7 seed {seed}: video ACC full {:.4} vs rating-only {:.4}; frame SEN full {:.4} vs beta=0 {:.4}",
                video_full.acc, video_fusionless.acc, frame_full.sen, frame_rewardless.sen
            );
            if video_full.acc >= video_fusionless.acc {
                video_acc_holds += 1;
            }
            if frame_full.sen >= frame_rewardless.sen {
                frame_sen_holds += 1;
            }
        }
        check!(
            video_acc_holds >= 2,
            "video ACC direction held on only {video_acc_holds} of 3 seeds"
        );
        check!(
            frame_sen_holds >= 2,
            "frame SEN direction held on only {frame_sen_holds} of 3 seeds"
        );
        within_budget(started, Duration::from_secs(1800), "ablation direction-check")
    });
}

// --- criterion 8 -----------------------------------------------------------

#[test]
fn learning_rate_schedule_is_bit_exact_over_65_epochs() {
    criterion(8, "65-epoch learning-rate column is bit-exact through two halvings", || {
        let sim = SimConfig {
            n_frames: 8,
            feature_dim: 3,
            cluster_count_range: (1, 1),
            cluster_width_range: (2, 3),
            seed: 801,
            ..SimConfig::default()
        };
        let (corpus, _) = generate_corpus(&sim, 2, 0).map_err(|e| e.to_string())?;
        let config = TrainConfig {
            pretrain_epochs: 0,
            joint_epochs: 65,
            dims: AgentDims { feature_dim: 3, hidden_size: 2, conv_channels: 2, conv_kernel: 3 },
            ..TrainConfig::default()
        };
        let mut params =
            PolicyParams::init(config.dims, config.seed).map_err(|e| e.to_string())?;
        let log = train_joint(&mut params, &corpus, &config).map_err(|e| e.to_string())?;

        check!(log.records.len() == 65, "expected 65 epochs, got {}", log.records.len());
        let expected: Vec<f64> =
            [vec![1e-5; 30], vec![5e-6; 30], vec![2.5e-6; 5]].concat();
        for (record, want) in log.records.iter().zip(&expected) {
            check!(
                record.lr == *want,
                "epoch {}: lr {:e} differs from {want:e}",
                record.epoch,
                record.lr
            );
        }
        // The CSV form preserves the column bit for bit as well.
        let parsed = TrainLog::from_csv(&log.to_csv()).map_err(|e| e.to_string())?;
        for (record, want) in parsed.records.iter().zip(&expected) {
            check!(
                record.lr == *want,
                "CSV round-trip epoch {}: lr {:e} differs from {want:e}",
                record.epoch,
                record.lr
            );
        }
        Ok(())
    });
}

// --- criterion 9 -----------------------------------------------------------

fn seqqa(dir: &Path, args: &[String]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_seqqa"))
        .args(args)
        .current_dir(dir)
        .output()
        .expect("binary should spawn")
}

fn run_ok(dir: &Path, args: &[&str]) -> Result<(), String> {
    let args: Vec<String> = args.iter().map(|s| s.to_string()).collect();
    let output = seqqa(dir, &args);
    if !output.status.success() {
        return Err(format!(
            "`seqqa {}` failed: {}",
            args.join(" "),
            String::from_utf8_lossy(&output.stderr)
        ));
    }
    Ok(())
}

fn load_manifest(dir: &Path, run: &str) -> Result<serde_json::Value, String> {
    let path = dir.join(run).join("manifest.json");
    let text = fs::read_to_string(&path).map_err(|e| format!("{}: {e}", path.display()))?;
    serde_json::from_str(&text).map_err(|e| format!("{}: {e}", path.display()))
}

/// Re-issues the command recorded in a run's manifest with only the output
/// directory swapped, then demands byte equality of every declared output.
fn rerun_and_compare(dir: &Path, original: &str, replica: &str) -> Result<(), String> {
    let manifest = load_manifest(dir, original)?;
    let argv: Vec<String> = manifest["argv"]
        .as_array()
        .ok_or("manifest argv is not an array")?
        .iter()
        .map(|v| v.as_str().unwrap_or_default().to_string())
        .collect();
    let mut args: Vec<String> = argv[1..].to_vec();
    let out_flag = args
        .iter()
        .position(|a| a == "--out")
        .ok_or("manifest argv does not contain --out")?;
    args[out_flag + 1] = replica.to_string();

    let output = seqqa(dir, &args);
    if !output.status.success() {
        return Err(format!(
            "rerun `seqqa {}` failed: {}",
            args.join(" "),
            String::from_utf8_lossy(&output.stderr)
        ));
    }

    let replica_manifest = load_manifest(dir, replica)?;
    if manifest["outputs"] != replica_manifest["outputs"] {
        return Err(format!(
            "{original}: recorded output hashes changed on rerun:\n{}\nvs\n{}",
            manifest["outputs"], replica_manifest["outputs"]
        ));
    }
    for record in manifest["outputs"].as_array().ok_or("outputs is not an array")? {
        let name = record["path"].as_str().ok_or("output path is not a string")?;
        let first = fs::read(dir.join(original).join(name)).map_err(|e| format!("{name}: {e}"))?;
        let second = fs::read(dir.join(replica).join(name)).map_err(|e| format!("{name}: {e}"))?;
        if first != second {
            return Err(format!("{original}: {name} differs between run and rerun"));
        }
    }
    Ok(())
}

#[test]
fn rerun_from_manifest_reproduces_outputs_byte_identically() {
    criterion(9, "every command re-run from its manifest reproduces identical bytes", || {
        let tmp = TempDir::new().map_err(|e| e.to_string())?;
        let dir = tmp.path();
        fs::write(dir.join("labels.json"), "[0,1,1,0,1,1,1,0]").map_err(|e| e.to_string())?;
        fs::write(
            dir.join("tc.json"),
            r#"{
  "pretrain_epochs": 2,
  "joint_epochs": 2,
  "dims": { "feature_dim": 6, "hidden_size": 4, "conv_channels": 2, "conv_kernel": 3 }
}"#,
        )
        .map_err(|e| e.to_string())?;

        run_ok(
            dir,
            &[
                "simulate",
                "--out",
                "sim1",
                "--n-train",
                "6",
                "--n-test",
                "3",
                "--n-frames",
                "24",
                "--feature-dim",
                "6",
                "--seed",
                "9",
            ],
        )?;
        rerun_and_compare(dir, "sim1", "sim2")?;

        run_ok(dir, &["reward-profile", "labels.json", "--ramp-width", "3", "--out", "prof1"])?;
        rerun_and_compare(dir, "prof1", "prof2")?;

        run_ok(dir, &["train", "sim1/train.jsonl", "--config", "tc.json", "--out", "run1"])?;
        rerun_and_compare(dir, "run1", "run2")?;

        run_ok(dir, &["eval", "run1/checkpoint.json", "sim1/test.jsonl", "--out", "ev1"])?;
        rerun_and_compare(dir, "ev1", "ev2")?;
        Ok(())
    });
}
