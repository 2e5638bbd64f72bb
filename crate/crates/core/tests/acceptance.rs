//! Acceptance suite: one test per criterion, each printing a PASS line and
//! holding its stated runtime budget.

use std::collections::{BTreeMap, BTreeSet};
use std::io::Cursor;
use std::time::{Duration, Instant};

use chrono::{DateTime, Utc};

use threatstream_core::cluster::{dbscan, DbscanParams, Label};
use threatstream_core::eval::{confusion, ranking_sse};
use threatstream_core::events::{
    classify_event, novelty_similarity, score_event, DetectionParams, EventType, NoveltyMemory,
};
use threatstream_core::extract::{textrank_keywords, ScoredTerm, TermSets, TextRankParams};
use threatstream_core::influence::build_phrase_weights;
use threatstream_core::ingest::{chunk_intervals, read_tweets, Interval, Tweet};
use threatstream_core::pipeline::run_detection;
use threatstream_core::vectorize::SparseVector;
use threatstream_core::{Resources, RunConfig};

use rand::prelude::*;
use rand::rngs::StdRng;

fn budget(start: Instant, limit: Duration, label: &str) {
    let elapsed = start.elapsed();
    assert!(
        elapsed < limit,
        "{label} exceeded its {limit:?} budget: {elapsed:?}"
    );
}

#[test]
fn acceptance_01_eval_math_reproduction() {
    let start = Instant::now();

    let truth: BTreeSet<String> = (0..20).map(|i| format!("ev{i}")).collect();
    let mut detected: BTreeSet<String> = truth.iter().take(15).cloned().collect();
    detected.insert("spurious".to_owned());
    let report = confusion(&detected, &truth, 6).unwrap();

    assert!((report.tp_rate - 75.00).abs() <= 0.01);
    assert!((report.fp_rate - 16.67).abs() <= 0.01);
    assert!((report.fn_rate - 25.00).abs() <= 0.01);
    assert!((report.tn_rate - 83.33).abs() <= 0.01);
    assert!((report.precision - 93.75).abs() <= 0.01);

    budget(start, Duration::from_secs(1), "criterion 1");
    println!("acceptance 1 (eval math reproduction): PASS");
}

#[test]
fn acceptance_02_ranking_sse_reproduction() {
    let start = Instant::now();

    let system = [5, 3, 4, 10, 9, 8, 14, 7, 6, 2, 13, 12, 1, 11, 15];
    let annotator = [4, 2, 3, 13, 7, 8, 10, 5, 6, 9, 14, 12, 1, 11, 15];
    let system_ranks: BTreeMap<String, u32> = system
        .iter()
        .enumerate()
        .map(|(i, r)| (format!("ev{i}"), *r))
        .collect();
    let annotator_ranks: BTreeMap<String, u32> = annotator
        .iter()
        .enumerate()
        .map(|(i, r)| (format!("ev{i}"), *r))
        .collect();
    assert_eq!(ranking_sse(&system_ranks, &annotator_ranks).unwrap(), 86);

    budget(start, Duration::from_secs(1), "criterion 2");
    println!("acceptance 2 (ranking SSE reproduction): PASS");
}

#[test]
fn acceptance_03_interval_boundary_reproduction() {
    let start = Instant::now();

    let ts = |s: &str| -> DateTime<Utc> { s.parse().unwrap() };
    let tweet = |id: &str, at: &str| Tweet {
        id: id.to_owned(),
        author_id: "u".to_owned(),
        created_at: ts(at),
        text: "x".to_owned(),
        follower_count: 0,
        relevance_label: None,
    };
    let tweets = vec![
        tweet("a", "2018-08-30T23:00:08Z"),
        tweet("b", "2018-09-12T10:11:04Z"),
    ];
    let intervals = chunk_intervals(&tweets, 5).unwrap();
    let boundaries: Vec<DateTime<Utc>> = intervals.iter().map(|iv| iv.end).collect();
    assert_eq!(boundaries[0], ts("2018-09-02T10:50:19.200Z"));
    assert_eq!(boundaries[1], ts("2018-09-04T22:40:30.400Z"));
    assert_eq!(boundaries[2], ts("2018-09-07T10:30:41.600Z"));
    assert_eq!(boundaries[3], ts("2018-09-09T22:20:52.800Z"));
    assert_eq!(boundaries[4], ts("2018-09-12T10:11:04Z"));
    for (i, interval) in intervals.iter().enumerate().skip(1) {
        assert_eq!(interval.start, intervals[i - 1].end);
    }

    budget(start, Duration::from_secs(1), "criterion 3");
    println!("acceptance 3 (interval boundary reproduction): PASS");
}

/// Brute-force DBSCAN, written independently of the library: core points from
/// the full distance matrix, clusters as connected components of core points,
/// border points attached afterwards.
fn brute_force_dbscan(points: &[Vec<f64>], eps: f64, min_pts: usize) -> Vec<Option<usize>> {
    let n = points.len();
    let dist = |a: &[f64], b: &[f64]| -> f64 {
        a.iter()
            .zip(b)
            .map(|(x, y)| (x - y) * (x - y))
            .sum::<f64>()
            .sqrt()
    };
    let mut adjacent = vec![vec![false; n]; n];
    for i in 0..n {
        for j in 0..n {
            adjacent[i][j] = dist(&points[i], &points[j]) <= eps;
        }
    }
    let core: Vec<bool> = (0..n)
        .map(|i| (0..n).filter(|&j| adjacent[i][j]).count() >= min_pts)
        .collect();

    let mut labels: Vec<Option<usize>> = vec![None; n];
    let mut next = 0usize;
    for i in 0..n {
        if !core[i] || labels[i].is_some() {
            continue;
        }
        let mut stack = vec![i];
        labels[i] = Some(next);
        while let Some(p) = stack.pop() {
            for q in 0..n {
                if core[q] && adjacent[p][q] && labels[q].is_none() {
                    labels[q] = Some(next);
                    stack.push(q);
                }
            }
        }
        next += 1;
    }
    for i in 0..n {
        if labels[i].is_some() {
            continue;
        }
        for j in 0..n {
            if core[j] && adjacent[i][j] {
                labels[i] = labels[j];
                break;
            }
        }
    }
    labels
}

/// Group core-point indices by label, as a canonical sorted set-of-sets.
fn core_partition<L: PartialEq>(labels: &[L], is_core: &[bool], noise: &L) -> Vec<Vec<usize>> {
    let mut groups: Vec<(usize, Vec<usize>)> = Vec::new(); // (first member, members)
    'outer: for i in 0..labels.len() {
        if !is_core[i] || labels[i] == *noise {
            continue;
        }
        for (anchor, members) in groups.iter_mut() {
            if labels[*anchor] == labels[i] {
                members.push(i);
                continue 'outer;
            }
        }
        groups.push((i, vec![i]));
    }
    let mut partition: Vec<Vec<usize>> = groups.into_iter().map(|(_, m)| m).collect();
    partition.sort();
    partition
}

#[test]
fn acceptance_04_dbscan_oracle_equivalence() {
    let start = Instant::now();
    let mut rng = StdRng::seed_from_u64(0xdb5ca);

    for case in 0..200 {
        let n = rng.random_range(2..=200usize);
        let dims = rng.random_range(1..=20usize);
        let eps = rng.random_range(0.1..2.0f64);
        let min_pts = rng.random_range(1..=8usize);
        let points: Vec<Vec<f64>> = (0..n)
            .map(|_| (0..dims).map(|_| rng.random_range(0.0..3.0)).collect())
            .collect();

        let rows: Vec<SparseVector> = points.iter().map(|p| SparseVector::from_dense(p)).collect();
        let got = dbscan(&rows, &DbscanParams { eps, min_pts }).unwrap();
        let want = brute_force_dbscan(&points, eps, min_pts);

        let is_core: Vec<bool> = (0..n)
            .map(|i| {
                (0..n)
                    .filter(|&j| rows[i].euclidean_distance(&rows[j]) <= eps)
                    .count()
                    >= min_pts
            })
            .collect();

        let got_partition = core_partition(&got, &is_core, &Label::Noise);
        let want_partition = core_partition(&want, &is_core, &None);
        assert_eq!(
            got_partition, want_partition,
            "case {case}: core partition diverged (n={n}, dims={dims}, eps={eps}, min_pts={min_pts})"
        );

        // Noise must agree exactly as well: a point is noise iff it has no
        // core neighbor.
        for i in 0..n {
            assert_eq!(
                got[i] == Label::Noise,
                want[i].is_none(),
                "case {case}: noise status diverged at row {i}"
            );
        }
    }

    budget(start, Duration::from_secs(30), "criterion 4");
    println!("acceptance 4 (DBSCAN oracle equivalence, 200 instances): PASS");
}

#[test]
fn acceptance_05_textrank_fixed_point() {
    let start = Instant::now();
    let mut rng = StdRng::seed_from_u64(0x7e77);
    let params = TextRankParams {
        window: 2,
        damping: 0.85,
        tol: 1e-9,
        max_iter: 500,
    };

    for case in 0..100 {
        let vocab_size = rng.random_range(2..=40usize);
        let length = rng.random_range(2..=150usize);
        let tokens: Vec<String> = (0..length)
            .map(|_| format!("tok{}", rng.random_range(0..vocab_size)))
            .collect();

        let ranked = textrank_keywords(&tokens, &params);
        let score: BTreeMap<&str, f64> = ranked
            .iter()
            .map(|s| (s.term.as_str(), s.raw_score))
            .collect();

        // Rebuild the adjacency independently from the token sequence.
        let mut adjacency: BTreeMap<&str, BTreeSet<&str>> = BTreeMap::new();
        for pair in tokens.windows(2) {
            let (a, b) = (pair[0].as_str(), pair[1].as_str());
            if a != b {
                adjacency.entry(a).or_default().insert(b);
                adjacency.entry(b).or_default().insert(a);
            }
        }
        for term in score.keys() {
            adjacency.entry(term).or_default();
        }

        for (term, neighbors) in &adjacency {
            let incoming: f64 = neighbors
                .iter()
                .map(|u| score[u] / adjacency[u].len() as f64)
                .sum();
            let expected = 0.15 + 0.85 * incoming;
            let residual = (score[term] - expected).abs();
            assert!(
                residual <= 1e-5,
                "case {case}: vertex {term} residual {residual}"
            );
        }
    }

    // Automorphic vertices: cycles, complete graphs, and star leaves.
    for size in [3usize, 5, 8] {
        // Cycle: t0 t1 ... t(k-1) t0 closes the loop.
        let mut tokens: Vec<String> = (0..size).map(|i| format!("c{i}")).collect();
        tokens.push("c0".to_owned());
        let ranked = textrank_keywords(&tokens, &params);
        for pair in ranked.windows(2) {
            assert!(
                (pair[0].raw_score - pair[1].raw_score).abs() <= 1e-6,
                "cycle orbit split: {pair:?}"
            );
        }
    }
    {
        // Complete graph over 4 tokens: list every unordered pair adjacently.
        let mut tokens = Vec::new();
        for i in 0..4usize {
            for j in (i + 1)..4usize {
                tokens.push(format!("k{i}"));
                tokens.push(format!("k{j}"));
            }
        }
        let ranked = textrank_keywords(&tokens, &params);
        for pair in ranked.windows(2) {
            assert!((pair[0].raw_score - pair[1].raw_score).abs() <= 1e-6);
        }
    }
    {
        // Star: hub adjacent to every leaf; leaves form one orbit.
        let mut tokens = Vec::new();
        for leaf in 0..6usize {
            tokens.push("hub".to_owned());
            tokens.push(format!("leaf{leaf}"));
        }
        let ranked = textrank_keywords(&tokens, &params);
        let leaves: Vec<f64> = ranked
            .iter()
            .filter(|s| s.term.starts_with("leaf"))
            .map(|s| s.raw_score)
            .collect();
        assert_eq!(leaves.len(), 6);
        for w in leaves.windows(2) {
            assert!((w[0] - w[1]).abs() <= 1e-6);
        }
    }

    budget(start, Duration::from_secs(10), "criterion 5");
    println!("acceptance 5 (TextRank fixed point, 100 graphs): PASS");
}

fn synthetic_sets(common: usize, entity_only: usize) -> TermSets {
    let keywords: Vec<ScoredTerm> = (0..common)
        .map(|i| ScoredTerm::keyword(format!("c{i}"), 1.0))
        .collect();
    let mut entities: Vec<ScoredTerm> = (0..common)
        .map(|i| ScoredTerm::entity(format!("c{i}"), 0.5))
        .collect();
    entities.extend((0..entity_only).map(|i| ScoredTerm::entity(format!("e{i}"), 0.5)));
    threatstream_core::extract::build_term_sets(&keywords, &entities, 0.0)
}

#[test]
fn acceptance_06_classification_decision_table() {
    let start = Instant::now();
    let params = DetectionParams {
        cosine_thresh: 0.5,
        tweet_thresh: 10,
        min_event_tweets: 3,
        common_to_entity_ratio: 0.20,
        ratio_uses_full_entity_set: false,
    };
    let focused = synthetic_sets(3, 2); // |common|=3 > 0.2·2
    let unfocused = synthetic_sets(1, 10); // |common|=1 ≤ 0.2·10

    use EventType::*;
    let cases: [(f64, usize, &TermSets, bool, EventType); 12] = [
        // similar, not first: ratio and size gates
        (0.8, 20, &focused, false, JustTrendy),
        (0.8, 20, &unfocused, false, NotEvent),
        (0.8, 9, &focused, false, NotEvent),
        (0.8, 2, &focused, false, NotEvent),
        // similar but very first cluster: treated as novel
        (0.8, 20, &focused, true, NovelAndTrendy),
        (0.8, 5, &focused, true, FirstStory),
        (0.8, 2, &focused, true, NotEvent),
        // dissimilar: size decides
        (0.3, 2, &focused, false, NotEvent),
        (0.3, 3, &focused, false, FirstStory),
        (0.3, 9, &unfocused, false, FirstStory),
        (0.3, 10, &focused, false, NovelAndTrendy),
        (0.3, 51, &unfocused, false, NovelAndTrendy),
    ];
    for (i, (sim, count, sets, first, expected)) in cases.iter().enumerate() {
        let got = classify_event(*count, *sim, sets, &params, *first);
        assert_eq!(got, *expected, "decision table case {i}");
    }

    budget(start, Duration::from_secs(1), "criterion 6");
    println!("acceptance 6 (classification decision table, 12 cases): PASS");
}

#[test]
fn acceptance_07_score_formula_fixtures() {
    let start = Instant::now();
    let params = DetectionParams::default();

    // Binary-cosine novelty: |A| = 4, |B| = 16, |A ∩ B| = 2 → 0.25.
    let cluster_tokens: BTreeSet<String> =
        ["a", "b", "c", "d"].iter().map(|s| s.to_string()).collect();
    let mut memory = NoveltyMemory::new();
    let stored: Vec<ScoredTerm> = (0..14)
        .map(|i| ScoredTerm::entity(format!("m{i}"), 0.5))
        .chain([ScoredTerm::entity("a", 0.5), ScoredTerm::entity("b", 0.5)])
        .collect();
    memory.update(&threatstream_core::extract::build_term_sets(
        &[],
        &stored,
        0.0,
    ));
    assert_eq!(memory.len(), 16);
    assert!((novelty_similarity(&cluster_tokens, &memory) - 0.25).abs() <= 1e-9);

    // Just-trendy: common scores {0.9, 0.6}, 4 tweets, phrase weights
    // {0.5, 0.25} → entity 6.0, influence 0.75, total 6.75.
    let mut sets = synthetic_sets(2, 0);
    sets.token_scores.insert("c0".to_owned(), 0.9);
    sets.token_scores.insert("c1".to_owned(), 0.6);
    let at: DateTime<Utc> = "2018-09-01T00:00:00Z".parse().unwrap();
    let mk_tweet = |id: &str, author: &str, followers: u64| Tweet {
        id: id.to_owned(),
        author_id: author.to_owned(),
        created_at: at,
        text: "x".to_owned(),
        follower_count: followers,
        relevance_label: None,
    };
    let interval = Interval {
        index: 0,
        start: at,
        end: at,
        tweets: vec![
            mk_tweet("t0", "zero", 0),
            mk_tweet("t1", "full", 1000),
            mk_tweet("t2", "half", 500),
            mk_tweet("t3", "quarter", 250),
        ],
    };
    let phrases: BTreeMap<String, Vec<String>> = [
        ("t2".to_owned(), vec!["alpha phrase".to_owned()]),
        ("t3".to_owned(), vec!["beta phrase".to_owned()]),
    ]
    .into_iter()
    .collect();
    let weights = build_phrase_weights(&interval, &phrases);
    let event_phrases: BTreeSet<String> = ["alpha phrase", "beta phrase"]
        .iter()
        .map(|s| s.to_string())
        .collect();
    let scores = score_event(
        EventType::JustTrendy,
        &sets,
        4,
        &weights,
        &event_phrases,
        &params,
    );
    assert!((scores.entity_score - 6.0).abs() <= 1e-9);
    assert!((scores.influence_score - 0.75).abs() <= 1e-9);
    assert!((scores.total_score - 6.75).abs() <= 1e-9);

    // First story: scoring-set sum 1.2, tweet_thresh 10, no phrases → 12.0.
    let mut fs_sets = synthetic_sets(1, 1);
    fs_sets.token_scores.insert("c0".to_owned(), 0.7);
    fs_sets.token_scores.insert("e0".to_owned(), 0.5);
    let empty_weights = build_phrase_weights(
        &Interval {
            index: 0,
            start: at,
            end: at,
            tweets: vec![],
        },
        &BTreeMap::new(),
    );
    let fs = score_event(
        EventType::FirstStory,
        &fs_sets,
        4,
        &empty_weights,
        &BTreeSet::new(),
        &params,
    );
    assert!((fs.entity_score - 12.0).abs() <= 1e-9);
    assert!((fs.total_score - 12.0).abs() <= 1e-9);

    budget(start, Duration::from_secs(1), "criterion 7");
    println!("acceptance 7 (score formula fixtures): PASS");
}

#[test]
fn acceptance_08_end_to_end_determinism() {
    let start = Instant::now();

    let corpus = include_str!("fixtures/corpus_301.jsonl");
    let tweets = read_tweets(Cursor::new(corpus)).unwrap();
    assert_eq!(tweets.len(), 301);

    let config = RunConfig {
        intervals: 1,
        tweet_thresh: 10,
        ..RunConfig::default()
    };
    let resources = Resources::defaults();

    let first = run_detection(&tweets, &config, &resources).unwrap();
    let second = run_detection(&tweets, &config, &resources).unwrap();
    assert_eq!(
        first.to_json(),
        second.to_json(),
        "reports must be byte-identical across runs"
    );

    let events = &first.intervals[0].events;
    // Every planted topic must surface as an event with at least the
    // minimum supporting tweets; the marker is a gazetteer entity unique to
    // the topic, so it must appear in the event's union keyword set.
    let planted = [
        ("skype", 51),
        ("bank of spain", 8),
        ("apache struts", 7),
        ("android", 6),
        ("microsoft windows", 5),
        ("ransomwarrior", 5),
        ("cisco anyconnect", 5),
        ("bd alaris", 4),
    ];
    for (marker, planted_count) in planted {
        let event = events
            .iter()
            .find(|e| e.keywords.iter().any(|k| k == marker))
            .unwrap_or_else(|| panic!("planted event `{marker}` not detected"));
        assert!(
            event.tweet_count >= 3,
            "event `{marker}` has only {} supporting tweets",
            event.tweet_count
        );
        assert!(
            event.tweet_count <= planted_count,
            "event `{marker}` absorbed {} tweets, more than the {planted_count} planted",
            event.tweet_count
        );
    }

    let burst = events
        .iter()
        .find(|e| e.keywords.iter().any(|k| k == "skype"))
        .expect("burst event");
    assert_eq!(
        burst.event_type,
        EventType::NovelAndTrendy,
        "the planted burst crosses tweet_thresh and must be novel and trendy"
    );
    assert!(burst.tweet_count >= config.tweet_thresh);

    budget(start, Duration::from_secs(30), "criterion 8");
    println!("acceptance 8 (end-to-end determinism on the 301-tweet corpus): PASS");
}
