//! Python bindings for the detection pipeline: the main kernels as free
//! functions plus a whole-pipeline entry point returning the report as a
//! Python dict.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fs;
use std::io::{BufReader, Cursor};
use std::path::PathBuf;
use std::sync::OnceLock;

use pyo3::exceptions::{PyIOError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::{PyDict, PyList};
use serde_json::Value;

use threatstream_core::cluster::{self, DbscanParams, Label};
use threatstream_core::error::Error;
use threatstream_core::eval;
use threatstream_core::events::{self, NoveltyMemory};
use threatstream_core::extract::{self, ScoredTerm, TextRankParams};
use threatstream_core::ingest;
use threatstream_core::pipeline::{plot_data_csv, run_detection};
use threatstream_core::preprocess;
use threatstream_core::vectorize::SparseVector;
use threatstream_core::{Resources, RunConfig};

fn to_py_err(error: Error) -> PyErr {
    match error {
        Error::Io(e) => PyIOError::new_err(e.to_string()),
        other => PyValueError::new_err(other.to_string()),
    }
}

fn default_resources() -> &'static Resources {
    static RESOURCES: OnceLock<Resources> = OnceLock::new();
    RESOURCES.get_or_init(Resources::defaults)
}

fn json_to_py(py: Python<'_>, value: &Value) -> PyResult<Py<PyAny>> {
    Ok(match value {
        Value::Null => py.None(),
        Value::Bool(b) => (*b).into_pyobject(py)?.to_owned().into_any().unbind(),
        Value::Number(n) => {
            if let Some(i) = n.as_i64() {
                i.into_pyobject(py)?.into_any().unbind()
            } else if let Some(u) = n.as_u64() {
                u.into_pyobject(py)?.into_any().unbind()
            } else {
                n.as_f64()
                    .unwrap_or(f64::NAN)
                    .into_pyobject(py)?
                    .into_any()
                    .unbind()
            }
        }
        Value::String(s) => s.into_pyobject(py)?.into_any().unbind(),
        Value::Array(items) => {
            let list = PyList::empty(py);
            for item in items {
                list.append(json_to_py(py, item)?)?;
            }
            list.into_any().unbind()
        }
        Value::Object(map) => {
            let dict = PyDict::new(py);
            for (key, item) in map {
                dict.set_item(key, json_to_py(py, item)?)?;
            }
            dict.into_any().unbind()
        }
    })
}

/// Logistic normalization onto (0, 1).
#[pyfunction]
fn sigmoid(x: f64) -> f64 {
    extract::sigmoid(x)
}

/// Porter suffix stripping for one lowercase token.
#[pyfunction]
fn porter_stem(token: &str) -> String {
    preprocess::stem(token)
}

/// Correct one token against the bundled frequency dictionary.
#[pyfunction]
fn correct_spelling(token: &str) -> String {
    preprocess::correct_spelling(token, &default_resources().dictionary)
}

/// Clean raw text into tokens with the bundled stopwords and dictionary.
#[pyfunction]
#[pyo3(signature = (text, stemming = false))]
fn clean_text(text: &str, stemming: bool) -> Vec<String> {
    let resources = default_resources();
    preprocess::clean_text(text, &resources.stopwords, stemming, &resources.dictionary)
}

/// Noun phrases of a text, tagged with the bundled POS lexicon.
#[pyfunction]
fn extract_noun_phrases(text: &str) -> Vec<String> {
    preprocess::extract_noun_phrases(text, &default_resources().lexicon)
}

/// Cosine similarity of two dense vectors.
#[pyfunction]
fn cosine_similarity(a: Vec<f64>, b: Vec<f64>) -> f64 {
    threatstream_core::vectorize::cosine_sim(
        &SparseVector::from_dense(&a),
        &SparseVector::from_dense(&b),
    )
}

/// Density-based clustering of dense points; returns one label per point,
/// with -1 for noise.
#[pyfunction]
fn dbscan(points: Vec<Vec<f64>>, eps: f64, min_pts: usize) -> PyResult<Vec<i64>> {
    let rows: Vec<SparseVector> = points.iter().map(|p| SparseVector::from_dense(p)).collect();
    let labels = cluster::dbscan(&rows, &DbscanParams { eps, min_pts }).map_err(to_py_err)?;
    Ok(labels
        .into_iter()
        .map(|label| match label {
            Label::Cluster(id) => id as i64,
            Label::Noise => -1,
        })
        .collect())
}

/// Score tokens over their co-occurrence graph; returns (token, score)
/// pairs in descending score order.
#[pyfunction]
#[pyo3(signature = (tokens, window = 2, damping = 0.85))]
fn textrank(tokens: Vec<String>, window: usize, damping: f64) -> Vec<(String, f64)> {
    let params = TextRankParams {
        window,
        damping,
        ..TextRankParams::default()
    };
    extract::textrank_keywords(&tokens, &params)
        .into_iter()
        .map(|term| (term.term, term.raw_score))
        .collect()
}

/// Gazetteer entity recognition; returns (surface form, confidence) pairs.
#[pyfunction]
fn recognize_entities(text: &str) -> Vec<(String, f64)> {
    default_resources()
        .gazetteer
        .recognize(text)
        .into_iter()
        .map(|term| (term.term, term.raw_score))
        .collect()
}

/// Binary-cosine novelty of a token set against a stored memory set.
#[pyfunction]
fn novelty_similarity(cluster_tokens: Vec<String>, memory_tokens: Vec<String>) -> f64 {
    let cluster: BTreeSet<String> = cluster_tokens.into_iter().collect();
    let mut memory = NoveltyMemory::new();
    let stored: Vec<ScoredTerm> = memory_tokens
        .into_iter()
        .map(|token| ScoredTerm::entity(token, 0.5))
        .collect();
    memory.update(&extract::build_term_sets(&[], &stored, 0.0));
    events::novelty_similarity(&cluster, &memory)
}

/// The boundary instants that divide `[start, end]` into `n` equal chunks.
#[pyfunction]
fn chunk_boundaries(start: &str, end: &str, n: usize) -> PyResult<Vec<String>> {
    let parse = |s: &str| -> PyResult<chrono::DateTime<chrono::Utc>> {
        chrono::DateTime::parse_from_rfc3339(s)
            .map(|dt| dt.with_timezone(&chrono::Utc))
            .map_err(|e| PyValueError::new_err(format!("bad timestamp `{s}`: {e}")))
    };
    if n == 0 {
        return Err(PyValueError::new_err("n must be at least 1"));
    }
    let start_ms = parse(start)?.timestamp_millis();
    let end_ms = parse(end)?.timestamp_millis();
    Ok(ingest::interval_boundaries_ms(start_ms, end_ms, n)
        .into_iter()
        .map(|ms| {
            chrono::DateTime::<chrono::Utc>::from_timestamp_millis(ms)
                .expect("in-range")
                .to_rfc3339_opts(chrono::SecondsFormat::Millis, true)
        })
        .collect())
}

/// Confusion rates and precision for detected vs annotated event keys.
#[pyfunction]
fn confusion(
    py: Python<'_>,
    detected: Vec<String>,
    ground_truth: Vec<String>,
    non_event_clusters: usize,
) -> PyResult<Py<PyAny>> {
    let detected: BTreeSet<String> = detected.into_iter().collect();
    let truth: BTreeSet<String> = ground_truth.into_iter().collect();
    let report = eval::confusion(&detected, &truth, non_event_clusters).map_err(to_py_err)?;
    let value = serde_json::to_value(&report).map_err(|e| PyValueError::new_err(e.to_string()))?;
    json_to_py(py, &value)
}

/// Sum of squared rank differences; both dicts must share the same keys.
#[pyfunction]
fn ranking_sse(system: HashMap<String, u32>, annotator: HashMap<String, u32>) -> PyResult<u64> {
    let system: BTreeMap<String, u32> = system.into_iter().collect();
    let annotator: BTreeMap<String, u32> = annotator.into_iter().collect();
    eval::ranking_sse(&system, &annotator).map_err(to_py_err)
}

/// The default run configuration as a dict.
#[pyfunction]
fn default_config(py: Python<'_>) -> PyResult<Py<PyAny>> {
    let value = serde_json::to_value(RunConfig::default())
        .map_err(|e| PyValueError::new_err(e.to_string()))?;
    json_to_py(py, &value)
}

/// Run the whole detection pipeline over a JSON-lines tweet file.
///
/// Writes `report.json` and `plot.csv` into `out_dir` when given, and
/// returns the report as a dict. `config_path` points at a flat key=value
/// file; `overrides` maps config keys to values applied after the file.
#[pyfunction]
#[pyo3(signature = (input_path, out_dir = None, config_path = None, overrides = None))]
fn detect_file(
    py: Python<'_>,
    input_path: &str,
    out_dir: Option<&str>,
    config_path: Option<&str>,
    overrides: Option<HashMap<String, String>>,
) -> PyResult<Py<PyAny>> {
    let mut config = RunConfig::default();
    if let Some(path) = config_path {
        let file = fs::File::open(path).map_err(|e| PyIOError::new_err(e.to_string()))?;
        config.apply_file(BufReader::new(file)).map_err(to_py_err)?;
    }
    if let Some(overrides) = overrides {
        let ordered: BTreeMap<String, String> = overrides.into_iter().collect();
        for (key, value) in &ordered {
            config.set(key, value).map_err(to_py_err)?;
        }
    }
    config.validate().map_err(to_py_err)?;
    let resources = Resources::load(&config).map_err(to_py_err)?;

    let text = fs::read_to_string(input_path).map_err(|e| PyIOError::new_err(e.to_string()))?;
    let tweets = ingest::read_tweets(Cursor::new(text)).map_err(to_py_err)?;
    let report = run_detection(&tweets, &config, &resources).map_err(to_py_err)?;

    if let Some(out_dir) = out_dir {
        let dir = PathBuf::from(out_dir);
        fs::create_dir_all(&dir).map_err(|e| PyIOError::new_err(e.to_string()))?;
        fs::write(dir.join("report.json"), report.to_json())
            .map_err(|e| PyIOError::new_err(e.to_string()))?;
        fs::write(dir.join("plot.csv"), plot_data_csv(&report))
            .map_err(|e| PyIOError::new_err(e.to_string()))?;
    }

    let value = serde_json::to_value(&report).map_err(|e| PyValueError::new_err(e.to_string()))?;
    json_to_py(py, &value)
}

#[pymodule]
fn threatstream(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_function(wrap_pyfunction!(sigmoid, m)?)?;
    m.add_function(wrap_pyfunction!(porter_stem, m)?)?;
    m.add_function(wrap_pyfunction!(correct_spelling, m)?)?;
    m.add_function(wrap_pyfunction!(clean_text, m)?)?;
    m.add_function(wrap_pyfunction!(extract_noun_phrases, m)?)?;
    m.add_function(wrap_pyfunction!(cosine_similarity, m)?)?;
    m.add_function(wrap_pyfunction!(dbscan, m)?)?;
    m.add_function(wrap_pyfunction!(textrank, m)?)?;
    m.add_function(wrap_pyfunction!(recognize_entities, m)?)?;
    m.add_function(wrap_pyfunction!(novelty_similarity, m)?)?;
    m.add_function(wrap_pyfunction!(chunk_boundaries, m)?)?;
    m.add_function(wrap_pyfunction!(confusion, m)?)?;
    m.add_function(wrap_pyfunction!(ranking_sse, m)?)?;
    m.add_function(wrap_pyfunction!(default_config, m)?)?;
    m.add_function(wrap_pyfunction!(detect_file, m)?)?;
    Ok(())
}
