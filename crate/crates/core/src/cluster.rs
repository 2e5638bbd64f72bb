//! From-scratch DBSCAN over TFIDF rows, cluster assembly, and noise
//! discarding.

use std::collections::VecDeque;

use crate::error::{Error, Result};
use crate::ingest::Tweet;
use crate::vectorize::SparseVector;

/// DBSCAN assignment for one row.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Label {
    Cluster(usize),
    Noise,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DbscanParams {
    pub eps: f64,
    pub min_pts: usize,
}

impl Default for DbscanParams {
    fn default() -> Self {
        Self {
            eps: 1.0,
            min_pts: 3,
        }
    }
}

/// A grouped tweet set with its concatenated raw text.
#[derive(Debug, Clone, PartialEq)]
pub struct Cluster {
    pub cluster_id: usize,
    pub tweet_ids: Vec<String>,
    pub member_rows: Vec<usize>,
    pub aggregated_text: String,
}

/// Density-based clustering with euclidean distance.
///
/// The eps-neighborhood is closed (distance ≤ eps) and includes the query
/// point itself in the `min_pts` count. Rows are scanned in index order and
/// the expansion frontier is a FIFO queue, so border points always join the
/// first core point that reaches them and the labeling is deterministic.
pub fn dbscan(rows: &[SparseVector], params: &DbscanParams) -> Result<Vec<Label>> {
    if params.eps <= 0.0 || !params.eps.is_finite() {
        return Err(Error::InvalidArgument(format!(
            "eps must be a positive finite number, got {}",
            params.eps
        )));
    }
    if params.min_pts == 0 {
        return Err(Error::InvalidArgument(
            "min_pts must be at least 1".to_owned(),
        ));
    }

    let n = rows.len();
    let neighbors = |i: usize| -> Vec<usize> {
        (0..n)
            .filter(|&j| rows[i].euclidean_distance(&rows[j]) <= params.eps)
            .collect()
    };

    let mut labels = vec![Label::Noise; n];
    let mut visited = vec![false; n];
    let mut next_cluster = 0usize;

    for i in 0..n {
        if visited[i] {
            continue;
        }
        visited[i] = true;
        let seeds = neighbors(i);
        if seeds.len() < params.min_pts {
            continue; // stays Noise unless later claimed as a border point
        }

        let cluster = next_cluster;
        next_cluster += 1;
        labels[i] = Label::Cluster(cluster);

        let mut queue: VecDeque<usize> = seeds.into_iter().collect();
        while let Some(j) = queue.pop_front() {
            if labels[j] == Label::Noise {
                labels[j] = Label::Cluster(cluster);
            }
            if visited[j] {
                continue;
            }
            visited[j] = true;
            let adjacent = neighbors(j);
            if adjacent.len() >= params.min_pts {
                queue.extend(adjacent);
            }
        }
    }

    Ok(labels)
}

/// Assemble one [`Cluster`] per non-noise label, renumbered by first
/// appearance in row order. The aggregated text joins the members' resolved
/// raw texts with single spaces, in input order.
pub fn build_clusters(labels: &[Label], tweets: &[Tweet]) -> Vec<Cluster> {
    debug_assert_eq!(labels.len(), tweets.len());
    let mut clusters: Vec<Cluster> = Vec::new();
    let mut renumbered: Vec<(usize, usize)> = Vec::new(); // (old id, new id)

    for (row, label) in labels.iter().enumerate() {
        let Label::Cluster(old_id) = label else {
            continue;
        };
        let new_id = match renumbered.iter().find(|(old, _)| old == old_id) {
            Some((_, new_id)) => *new_id,
            None => {
                let new_id = clusters.len();
                renumbered.push((*old_id, new_id));
                clusters.push(Cluster {
                    cluster_id: new_id,
                    tweet_ids: Vec::new(),
                    member_rows: Vec::new(),
                    aggregated_text: String::new(),
                });
                new_id
            }
        };
        let cluster = &mut clusters[new_id];
        cluster.tweet_ids.push(tweets[row].id.clone());
        cluster.member_rows.push(row);
        if !cluster.aggregated_text.is_empty() {
            cluster.aggregated_text.push(' ');
        }
        cluster.aggregated_text.push_str(&tweets[row].text);
    }

    clusters
}
