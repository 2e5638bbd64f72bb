//! Detection and ranking of trendy, novel, and first-story events in
//! time-chunked tweet streams.
//!
//! The pipeline chunks a resolved tweet stream into equal time intervals,
//! cleans and vectorizes each interval's text, clusters it with DBSCAN,
//! extracts keywords and named entities per cluster, classifies every
//! cluster against a growing novelty memory, and scores and ranks the
//! resulting events from named-entity/keyword evidence weighted by user
//! influence.

pub mod cluster;
pub mod config;
pub mod error;
pub mod eval;
pub mod events;
pub mod extract;
pub mod influence;
pub mod ingest;
pub mod pipeline;
pub mod preprocess;
pub mod resources;
pub mod vectorize;

pub use config::{NerMode, RunConfig};
pub use error::{Error, Result};
pub use pipeline::{plot_data_csv, run_detection, DetectionReport, IntervalReport};
pub use resources::Resources;
