//! Command-line front end: detect events in a tweet stream, evaluate a
//! report against annotations, and export plot data.

use std::collections::{BTreeMap, BTreeSet};
use std::fs::{self, File};
use std::io::BufReader;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use serde::{Deserialize, Serialize};

use threatstream_core::eval::{confusion, ranking_sse, ConfusionReport};
use threatstream_core::ingest::{load_annotations, read_tweets};
use threatstream_core::pipeline::{plot_data_csv, run_detection, DetectionReport};
use threatstream_core::{Resources, RunConfig};

#[derive(Parser)]
#[command(
    name = "threatstream",
    version,
    about = "Detect and rank trendy, novel, and first-story events in tweet streams"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the detection pipeline over a JSON-lines tweet file.
    Detect(DetectArgs),
    /// Compare a detection report against annotated ground truth.
    Eval(EvalArgs),
    /// Export the per-event plot series from a report.
    PlotData(PlotDataArgs),
}

#[derive(Args)]
struct DetectArgs {
    /// Input tweet stream, one JSON object per line.
    #[arg(long)]
    input: PathBuf,
    /// Flat key=value config file; flags override it.
    #[arg(long, env = "THREATSTREAM_CONFIG")]
    config: Option<PathBuf>,
    /// Number of equal time chunks.
    #[arg(long)]
    intervals: Option<usize>,
    /// Minimum tweet count for a trendy event.
    #[arg(long)]
    tweet_thresh: Option<usize>,
    /// Novelty similarity threshold.
    #[arg(long)]
    cosine_thresh: Option<f64>,
    /// Apply suffix stemming during cleaning.
    #[arg(long, num_args = 0..=1, default_missing_value = "true")]
    stemming: Option<bool>,
    /// Entity recognizer: gazetteer or remote.
    #[arg(long)]
    ner_mode: Option<String>,
    /// Directory receiving report.json and plot.csv.
    #[arg(long, default_value = "out")]
    out_dir: PathBuf,
}

#[derive(Args)]
struct EvalArgs {
    /// Report written by `detect`.
    #[arg(long)]
    report: PathBuf,
    /// JSON-lines annotations plus a non_event_clusters header object.
    #[arg(long)]
    annotations: PathBuf,
    /// JSON-lines alignment of detected clusters to event keys.
    #[arg(long)]
    alignment: PathBuf,
    /// Where to write the evaluation JSON.
    #[arg(long, default_value = "eval.json")]
    out: PathBuf,
}

#[derive(Args)]
struct PlotDataArgs {
    /// Report written by `detect`.
    #[arg(long)]
    report: PathBuf,
    /// CSV output path; stdout when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
}

fn main() -> Result<()> {
    match Cli::parse().command {
        Command::Detect(args) => cmd_detect(args),
        Command::Eval(args) => cmd_eval(args),
        Command::PlotData(args) => cmd_plot_data(args),
    }
}

fn resolve_config(args: &DetectArgs) -> Result<RunConfig> {
    let mut config = RunConfig::default();
    if let Some(path) = &args.config {
        let reader = BufReader::new(
            File::open(path).with_context(|| format!("opening config {}", path.display()))?,
        );
        config
            .apply_file(reader)
            .with_context(|| format!("parsing config {}", path.display()))?;
    }
    if let Some(n) = args.intervals {
        config.intervals = n;
    }
    if let Some(t) = args.tweet_thresh {
        config.tweet_thresh = t;
    }
    if let Some(c) = args.cosine_thresh {
        config.cosine_thresh = c;
    }
    if let Some(s) = args.stemming {
        config.stemming = s;
    }
    if let Some(mode) = &args.ner_mode {
        config.set("ner.mode", mode)?;
    }
    config.validate()?;
    Ok(config)
}

fn cmd_detect(args: DetectArgs) -> Result<()> {
    let config = resolve_config(&args)?;
    let resources = Resources::load(&config)?;

    let reader = BufReader::new(
        File::open(&args.input)
            .with_context(|| format!("opening input {}", args.input.display()))?,
    );
    let tweets = read_tweets(reader).context("parsing input records")?;

    let report = run_detection(&tweets, &config, &resources)?;

    fs::create_dir_all(&args.out_dir)
        .with_context(|| format!("creating {}", args.out_dir.display()))?;
    let report_path = args.out_dir.join("report.json");
    let plot_path = args.out_dir.join("plot.csv");
    fs::write(&report_path, report.to_json())?;
    fs::write(&plot_path, plot_data_csv(&report))?;

    for warning in &report.warnings {
        eprintln!("warning: {warning}");
    }
    for interval in &report.intervals {
        println!(
            "interval {}: {} tweets, {} events",
            interval.interval,
            interval.tweet_count,
            interval.events.len()
        );
        for event in &interval.events {
            println!(
                "  rank {:>2}  cluster {:>3}  {:<16} tweets {:>4}  score {:.4}",
                event.rank,
                event.cluster_id,
                format!("{:?}", event.event_type),
                event.tweet_count,
                event.total_score
            );
        }
    }
    println!("report: {}", report_path.display());
    println!("plot data: {}", plot_path.display());
    Ok(())
}

#[derive(Debug, Deserialize)]
struct AlignmentRecord {
    detected_cluster_id: usize,
    event_key: String,
    /// Needed only when a report spans several intervals and cluster ids
    /// repeat across them.
    interval: Option<usize>,
}

#[derive(Debug, Serialize)]
struct EvalOutput {
    confusion: ConfusionReport,
    ranking_sse: u64,
    matched_events: usize,
}

fn load_alignment(path: &Path) -> Result<Vec<AlignmentRecord>> {
    let text = fs::read_to_string(path)
        .with_context(|| format!("opening alignment {}", path.display()))?;
    let mut records = Vec::new();
    for (idx, line) in text.lines().enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let record: AlignmentRecord =
            serde_json::from_str(line).with_context(|| format!("alignment line {}", idx + 1))?;
        records.push(record);
    }
    Ok(records)
}

fn cmd_eval(args: EvalArgs) -> Result<()> {
    let report = DetectionReport::from_json(
        &fs::read_to_string(&args.report)
            .with_context(|| format!("opening report {}", args.report.display()))?,
    )?;
    let annotations = load_annotations(BufReader::new(
        File::open(&args.annotations)
            .with_context(|| format!("opening annotations {}", args.annotations.display()))?,
    ))?;
    let alignment = load_alignment(&args.alignment)?;

    // Index detected events by (interval, cluster); alignment records may
    // omit the interval as long as cluster ids stay unambiguous.
    let mut by_cluster: BTreeMap<usize, Vec<(usize, usize)>> = BTreeMap::new();
    let mut ranks: BTreeMap<(usize, usize), u32> = BTreeMap::new();
    for interval in &report.intervals {
        for event in &interval.events {
            by_cluster
                .entry(event.cluster_id)
                .or_default()
                .push((interval.interval, event.cluster_id));
            ranks.insert((interval.interval, event.cluster_id), event.rank as u32);
        }
    }

    let mut aligned: BTreeMap<(usize, usize), String> = BTreeMap::new();
    for record in &alignment {
        let key = match record.interval {
            Some(interval) => {
                let key = (interval, record.detected_cluster_id);
                if !ranks.contains_key(&key) {
                    bail!(
                        "alignment names cluster {} in interval {interval}, but the report has no such event",
                        record.detected_cluster_id
                    );
                }
                key
            }
            None => {
                let candidates = by_cluster.get(&record.detected_cluster_id).ok_or_else(|| {
                    anyhow::anyhow!(
                        "alignment names cluster {}, but the report has no such event",
                        record.detected_cluster_id
                    )
                })?;
                if candidates.len() > 1 {
                    bail!(
                        "cluster id {} is ambiguous across intervals; add an `interval` field to the alignment record",
                        record.detected_cluster_id
                    );
                }
                candidates[0]
            }
        };
        if aligned.insert(key, record.event_key.clone()).is_some() {
            bail!("cluster {} in interval {} is aligned twice", key.1, key.0);
        }
    }

    // Detected key set: aligned keys, plus a synthetic key per unaligned
    // detected event so it still counts as a false positive.
    let mut detected: BTreeSet<String> = aligned.values().cloned().collect();
    for key in ranks.keys() {
        if !aligned.contains_key(key) {
            detected.insert(format!("unaligned:{}:{}", key.0, key.1));
        }
    }

    let truth = annotations.event_keys();
    let report_confusion = confusion(&detected, &truth, annotations.non_event_clusters)?;

    // Ranking SSE over the true positives: the events aligned to a truth key.
    let mut system_ranks: BTreeMap<String, u32> = BTreeMap::new();
    for (cluster_key, event_key) in &aligned {
        if truth.contains(event_key) {
            system_ranks.insert(event_key.clone(), ranks[cluster_key]);
        }
    }
    let annotator_ranks: BTreeMap<String, u32> = annotations
        .events
        .iter()
        .filter(|e| system_ranks.contains_key(&e.event_key))
        .map(|e| (e.event_key.clone(), e.annotator_rank))
        .collect();
    let sse = ranking_sse(&system_ranks, &annotator_ranks)?;

    let output = EvalOutput {
        matched_events: system_ranks.len(),
        ranking_sse: sse,
        confusion: report_confusion,
    };

    println!(
        "counts: tp {} fp {} fn {} tn {}",
        output.confusion.true_positives,
        output.confusion.false_positives,
        output.confusion.false_negatives,
        output.confusion.true_negatives
    );
    println!(
        "rates: tp {:.2}% fp {:.2}% fn {:.2}% tn {:.2}%",
        output.confusion.tp_rate,
        output.confusion.fp_rate,
        output.confusion.fn_rate,
        output.confusion.tn_rate
    );
    if output.confusion.precision_defined {
        println!("precision: {:.2}%", output.confusion.precision);
    } else {
        println!("precision: undefined (no detections), reported as 0");
    }
    println!(
        "ranking SSE over {} matched events: {}",
        output.matched_events, output.ranking_sse
    );

    let json = serde_json::to_string_pretty(&output)? + "\n";
    fs::write(&args.out, json)?;
    println!("evaluation: {}", args.out.display());
    Ok(())
}

fn cmd_plot_data(args: PlotDataArgs) -> Result<()> {
    let report = DetectionReport::from_json(
        &fs::read_to_string(&args.report)
            .with_context(|| format!("opening report {}", args.report.display()))?,
    )?;
    let csv = plot_data_csv(&report);
    match &args.out {
        Some(path) => {
            fs::write(path, csv)?;
            println!("plot data: {}", path.display());
        }
        None => print!("{csv}"),
    }
    Ok(())
}
