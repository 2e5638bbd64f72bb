//! Annotation-based validation: confusion rates, precision, and ranking
//! sum-squared error.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Confusion counts and the derived percentage rates.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConfusionReport {
    pub true_positives: usize,
    pub false_positives: usize,
    pub false_negatives: usize,
    pub true_negatives: usize,
    /// tp / (tp + fn), as a percentage.
    pub tp_rate: f64,
    /// fp / (fp + tn), as a percentage.
    pub fp_rate: f64,
    /// fn / (tp + fn), as a percentage.
    pub fn_rate: f64,
    /// tn / (fp + tn), as a percentage.
    pub tn_rate: f64,
    /// tp / (tp + fp), as a percentage; 0 when nothing was detected.
    pub precision: f64,
    /// False when precision was undefined (no detections) and reported as 0.
    pub precision_defined: bool,
}

fn percentage(numerator: usize, denominator: usize) -> f64 {
    if denominator == 0 {
        0.0
    } else {
        numerator as f64 / denominator as f64 * 100.0
    }
}

/// Compare detected event keys against the annotated ground truth.
///
/// `ground_truth_non_events` is the number of clusters annotators marked as
/// not events; detections outside the truth set consume it as false
/// positives, the rest are true negatives.
pub fn confusion(
    detected: &BTreeSet<String>,
    ground_truth_events: &BTreeSet<String>,
    ground_truth_non_events: usize,
) -> Result<ConfusionReport> {
    let true_positives = detected.intersection(ground_truth_events).count();
    let false_positives = detected.difference(ground_truth_events).count();
    let false_negatives = ground_truth_events.difference(detected).count();
    if false_positives > ground_truth_non_events {
        return Err(Error::Alignment(format!(
            "{false_positives} false positives exceed the {ground_truth_non_events} annotated non-event clusters"
        )));
    }
    let true_negatives = ground_truth_non_events - false_positives;

    let precision_defined = true_positives + false_positives > 0;
    Ok(ConfusionReport {
        true_positives,
        false_positives,
        false_negatives,
        true_negatives,
        tp_rate: percentage(true_positives, true_positives + false_negatives),
        fp_rate: percentage(false_positives, false_positives + true_negatives),
        fn_rate: percentage(false_negatives, true_positives + false_negatives),
        tn_rate: percentage(true_negatives, false_positives + true_negatives),
        precision: percentage(true_positives, true_positives + false_positives),
        precision_defined,
    })
}

/// Sum of squared rank differences between the system and the annotator.
///
/// Both maps must cover exactly the same keys; any mismatch is reported with
/// the offending keys listed.
pub fn ranking_sse(
    system_ranks: &BTreeMap<String, u32>,
    annotator_ranks: &BTreeMap<String, u32>,
) -> Result<u64> {
    let system_keys: BTreeSet<&String> = system_ranks.keys().collect();
    let annotator_keys: BTreeSet<&String> = annotator_ranks.keys().collect();
    if system_keys != annotator_keys {
        let only_system: Vec<&str> = system_keys
            .difference(&annotator_keys)
            .map(|k| k.as_str())
            .collect();
        let only_annotator: Vec<&str> = annotator_keys
            .difference(&system_keys)
            .map(|k| k.as_str())
            .collect();
        return Err(Error::Alignment(format!(
            "rank key sets differ (system only: {only_system:?}, annotator only: {only_annotator:?})"
        )));
    }

    Ok(system_ranks
        .iter()
        .map(|(key, system)| {
            let annotator = annotator_ranks[key];
            let diff = i64::from(*system) - i64::from(annotator);
            (diff * diff) as u64
        })
        .sum())
}
