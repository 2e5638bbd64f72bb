//! Named-entity recognition: a gazetteer longest-match scanner plus an
//! optional remote recognizer speaking a small JSON-over-HTTP protocol.

use std::collections::HashMap;
use std::io::BufRead;
use std::sync::{Condvar, Mutex};
use std::time::Duration;

use serde::Deserialize;

use crate::error::{Error, Result};

use super::{ScoredTerm, TermKind};

/// Gazetteer of known entity surface forms with base confidences.
#[derive(Debug, Clone, Default)]
pub struct Gazetteer {
    /// Tokenized surface form (space-joined) → (type, confidence).
    entries: HashMap<String, (String, f64)>,
    /// Longest surface form, in tokens.
    max_tokens: usize,
}

impl Gazetteer {
    pub fn new() -> Self {
        Self::default()
    }

    /// Parse `surface form<tab>type<tab>confidence` lines.
    pub fn load<R: BufRead>(reader: R) -> Result<Self> {
        let mut gazetteer = Self::new();
        for (idx, line) in reader.lines().enumerate() {
            let line = line?;
            let trimmed = line.trim();
            if trimmed.is_empty() || trimmed.starts_with('#') {
                continue;
            }
            let mut parts = trimmed.split('\t');
            let (Some(surface), Some(kind), Some(confidence)) =
                (parts.next(), parts.next(), parts.next())
            else {
                return Err(Error::Parse {
                    line: idx + 1,
                    message: "expected `surface<tab>type<tab>confidence`".to_owned(),
                });
            };
            let confidence: f64 = confidence.trim().parse().map_err(|e| Error::Parse {
                line: idx + 1,
                message: format!("bad confidence for `{surface}`: {e}"),
            })?;
            if !(0.0..=1.0).contains(&confidence) {
                return Err(Error::Parse {
                    line: idx + 1,
                    message: format!("confidence for `{surface}` must be within [0, 1]"),
                });
            }
            gazetteer.insert(surface, kind.trim(), confidence);
        }
        Ok(gazetteer)
    }

    pub fn insert(&mut self, surface: &str, entity_type: &str, confidence: f64) {
        let normalized = normalize_surface(surface);
        if normalized.is_empty() {
            return;
        }
        let tokens = normalized.split(' ').count();
        self.max_tokens = self.max_tokens.max(tokens);
        self.entries
            .insert(normalized, (entity_type.to_owned(), confidence));
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Longest-match scan of the lowercased text.
    ///
    /// At each position the longest matching surface form wins and the scan
    /// resumes after it, so shorter overlapping matches are suppressed.
    /// Repeated mentions are deduplicated, keeping first-occurrence order.
    pub fn recognize(&self, text: &str) -> Vec<ScoredTerm> {
        let lowered = text.to_lowercase();
        let tokens: Vec<&str> = lowered
            .split(|c: char| !c.is_ascii_alphanumeric())
            .filter(|t| !t.is_empty())
            .collect();

        let mut found: Vec<ScoredTerm> = Vec::new();
        let mut i = 0;
        while i < tokens.len() {
            let longest = self.max_tokens.min(tokens.len() - i);
            let mut matched = None;
            for len in (1..=longest).rev() {
                let candidate = tokens[i..i + len].join(" ");
                if let Some((_, confidence)) = self.entries.get(&candidate) {
                    matched = Some((candidate, *confidence, len));
                    break;
                }
            }
            match matched {
                Some((term, confidence, len)) => {
                    if !found.iter().any(|s| s.term == term) {
                        found.push(ScoredTerm {
                            term,
                            raw_score: confidence,
                            kind: TermKind::Entity,
                        });
                    }
                    i += len;
                }
                None => i += 1,
            }
        }
        found
    }
}

fn normalize_surface(surface: &str) -> String {
    surface
        .to_lowercase()
        .split(|c: char| !c.is_ascii_alphanumeric())
        .filter(|t| !t.is_empty())
        .collect::<Vec<_>>()
        .join(" ")
}

/// Counting semaphore bounding concurrent remote requests.
#[derive(Debug)]
struct Semaphore {
    permits: Mutex<usize>,
    available: Condvar,
}

impl Semaphore {
    fn new(permits: usize) -> Self {
        Self {
            permits: Mutex::new(permits),
            available: Condvar::new(),
        }
    }

    fn acquire(&self) -> SemaphoreGuard<'_> {
        let mut permits = self.permits.lock().expect("semaphore poisoned");
        while *permits == 0 {
            permits = self.available.wait(permits).expect("semaphore poisoned");
        }
        *permits -= 1;
        SemaphoreGuard { semaphore: self }
    }
}

struct SemaphoreGuard<'a> {
    semaphore: &'a Semaphore,
}

impl Drop for SemaphoreGuard<'_> {
    fn drop(&mut self) {
        let mut permits = self.semaphore.permits.lock().expect("semaphore poisoned");
        *permits += 1;
        self.semaphore.available.notify_one();
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RemoteNerConfig {
    pub endpoint: String,
    pub timeout: Duration,
    pub retries: u32,
    /// Maximum concurrent in-flight requests across threads.
    pub max_in_flight: usize,
}

impl Default for RemoteNerConfig {
    fn default() -> Self {
        Self {
            endpoint: String::new(),
            timeout: Duration::from_millis(5000),
            retries: 2,
            max_in_flight: 4,
        }
    }
}

#[derive(Deserialize)]
struct RemoteEntity {
    matched_text: String,
    #[serde(rename = "type")]
    #[allow(dead_code)]
    entity_type: String,
    confidence: f64,
}

#[derive(Deserialize)]
struct RemoteResponse {
    entities: Vec<RemoteEntity>,
}

/// Client for the remote recognizer protocol:
/// `POST {"text": ...}` → `{"entities": [{"matched_text", "type", "confidence"}]}`.
#[derive(Debug)]
pub struct RemoteNerClient {
    config: RemoteNerConfig,
    agent: ureq::Agent,
    semaphore: Semaphore,
}

impl RemoteNerClient {
    pub fn new(config: RemoteNerConfig) -> Self {
        let agent = ureq::Agent::config_builder()
            .timeout_global(Some(config.timeout))
            .http_status_as_error(false)
            .build()
            .new_agent();
        let semaphore = Semaphore::new(config.max_in_flight.max(1));
        Self {
            config,
            agent,
            semaphore,
        }
    }

    pub fn endpoint(&self) -> &str {
        &self.config.endpoint
    }

    /// Recognize entities remotely.
    ///
    /// Transport failures are retried up to `retries` extra attempts; a
    /// non-200 status or a response outside the protocol schema is a
    /// [`Error::Protocol`]. Callers fall back to the gazetteer on any error.
    pub fn recognize(&self, text: &str) -> Result<Vec<ScoredTerm>> {
        let _permit = self.semaphore.acquire();
        let attempts = self.config.retries + 1;
        let mut last_transport = String::new();
        for _ in 0..attempts {
            match self
                .agent
                .post(&self.config.endpoint)
                .send_json(serde_json::json!({ "text": text }))
            {
                Ok(mut response) => {
                    if response.status() != 200 {
                        return Err(Error::Protocol(format!(
                            "unexpected status {}",
                            response.status()
                        )));
                    }
                    let parsed: RemoteResponse = response
                        .body_mut()
                        .read_json()
                        .map_err(|e| Error::Protocol(format!("malformed response body: {e}")))?;
                    let mut found: Vec<ScoredTerm> = Vec::new();
                    for entity in parsed.entities {
                        let term = entity.matched_text.to_lowercase();
                        if !found.iter().any(|s| s.term == term) {
                            found.push(ScoredTerm {
                                term,
                                raw_score: entity.confidence,
                                kind: TermKind::Entity,
                            });
                        }
                    }
                    return Ok(found);
                }
                Err(e) => last_transport = e.to_string(),
            }
        }
        Err(Error::Transport {
            attempts,
            message: last_transport,
        })
    }
}

/// NER front end: gazetteer by default, remote with gazetteer fallback when
/// configured.
#[derive(Debug)]
pub struct EntityRecognizer {
    gazetteer: Gazetteer,
    remote: Option<RemoteNerClient>,
}

/// Outcome of one recognition call.
pub struct Recognition {
    pub entities: Vec<ScoredTerm>,
    /// Set when the remote recognizer failed and the gazetteer answered
    /// instead; carries the failure for the run log.
    pub fallback: Option<String>,
}

impl EntityRecognizer {
    pub fn gazetteer_only(gazetteer: Gazetteer) -> Self {
        Self {
            gazetteer,
            remote: None,
        }
    }

    pub fn with_remote(gazetteer: Gazetteer, client: RemoteNerClient) -> Self {
        Self {
            gazetteer,
            remote: Some(client),
        }
    }

    pub fn recognize(&self, text: &str) -> Recognition {
        if let Some(remote) = &self.remote {
            match remote.recognize(text) {
                Ok(entities) => {
                    return Recognition {
                        entities,
                        fallback: None,
                    }
                }
                Err(e) => {
                    return Recognition {
                        entities: self.gazetteer.recognize(text),
                        fallback: Some(e.to_string()),
                    }
                }
            }
        }
        Recognition {
            entities: self.gazetteer.recognize(text),
            fallback: None,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::io::{Read, Write};
    use std::net::TcpListener;
    use std::sync::atomic::{AtomicUsize, Ordering};
    use std::sync::Arc;

    fn gazetteer() -> Gazetteer {
        let mut g = Gazetteer::new();
        g.insert("microsoft", "organization", 0.8);
        g.insert("microsoft windows", "product", 0.9);
        g.insert("twitter", "organization", 0.8);
        g.insert("windows", "product", 0.7);
        g
    }

    #[test]
    fn longest_match_suppresses_shorter_overlap() {
        let found = gazetteer().recognize("flaw in Microsoft Windows disclosed");
        assert_eq!(found.len(), 1);
        assert_eq!(found[0].term, "microsoft windows");
        assert_eq!(found[0].raw_score, 0.9);
    }

    #[test]
    fn no_hits_is_empty() {
        assert!(gazetteer().recognize("nothing to see here").is_empty());
    }

    #[test]
    fn separate_mentions_all_recognized() {
        let found =
            gazetteer().recognize("hacker discloses microsoft bug on twitter, windows affected");
        let terms: Vec<&str> = found.iter().map(|s| s.term.as_str()).collect();
        assert_eq!(terms, vec!["microsoft", "twitter", "windows"]);
    }

    #[test]
    fn repeated_mentions_deduplicated() {
        let found = gazetteer().recognize("twitter and twitter again");
        assert_eq!(found.len(), 1);
    }

    #[test]
    fn punctuation_does_not_block_matching() {
        let found = gazetteer().recognize("Microsoft-Windows!");
        assert_eq!(found[0].term, "microsoft windows");
    }

    #[test]
    fn load_rejects_out_of_range_confidence() {
        let input = "microsoft\torganization\t1.5\n";
        assert!(Gazetteer::load(std::io::Cursor::new(input)).is_err());
    }

    #[test]
    fn load_parses_entries() {
        let input = "microsoft\torganization\t0.8\napache struts\tproduct\t0.9\n";
        let g = Gazetteer::load(std::io::Cursor::new(input)).unwrap();
        assert_eq!(g.len(), 2);
        let found = g.recognize("apache struts exploited");
        assert_eq!(found[0].term, "apache struts");
    }

    /// Minimal one-shot HTTP server for exercising the remote protocol.
    fn spawn_server<F>(handler: F) -> (String, std::thread::JoinHandle<()>)
    where
        F: Fn(usize) -> String + Send + 'static,
    {
        let listener = TcpListener::bind("127.0.0.1:0").unwrap();
        let addr = listener.local_addr().unwrap();
        let handle = std::thread::spawn(move || {
            let mut served = 0usize;
            while let Ok((mut stream, _)) = listener.accept() {
                let mut buf = [0u8; 4096];
                let mut request = Vec::new();
                // Read until the end of headers plus the JSON body.
                loop {
                    match stream.read(&mut buf) {
                        Ok(0) => break,
                        Ok(n) => {
                            request.extend_from_slice(&buf[..n]);
                            let text = String::from_utf8_lossy(&request);
                            if let Some(header_end) = text.find("\r\n\r\n") {
                                let content_length = text
                                    .lines()
                                    .find(|l| l.to_lowercase().starts_with("content-length:"))
                                    .and_then(|l| l.split(':').nth(1))
                                    .and_then(|v| v.trim().parse::<usize>().ok())
                                    .unwrap_or(0);
                                if request.len() >= header_end + 4 + content_length {
                                    break;
                                }
                            }
                        }
                        Err(_) => break,
                    }
                }
                let body = handler(served);
                served += 1;
                let response = format!(
                    "HTTP/1.1 200 OK\r\ncontent-type: application/json\r\ncontent-length: {}\r\nconnection: close\r\n\r\n{}",
                    body.len(),
                    body
                );
                let _ = stream.write_all(response.as_bytes());
                if served >= 16 {
                    break;
                }
            }
        });
        (format!("http://{addr}/ner"), handle)
    }

    fn client_for(endpoint: &str) -> RemoteNerClient {
        RemoteNerClient::new(RemoteNerConfig {
            endpoint: endpoint.to_owned(),
            timeout: Duration::from_millis(2000),
            retries: 1,
            max_in_flight: 4,
        })
    }

    #[test]
    fn remote_passes_entities_through() {
        let (endpoint, _handle) = spawn_server(|_| {
            r#"{"entities":[{"matched_text":"Skype","type":"product","confidence":0.7}]}"#
                .to_owned()
        });
        let client = client_for(&endpoint);
        let found = client.recognize("skype is down").unwrap();
        assert_eq!(found.len(), 1);
        assert_eq!(found[0].term, "skype");
        assert_eq!(found[0].raw_score, 0.7);
    }

    #[test]
    fn remote_schema_violation_is_protocol_error() {
        let (endpoint, _handle) =
            spawn_server(|_| r#"{"entities":[{"matched_text":"Skype","type":"x"}]}"#.to_owned());
        let client = client_for(&endpoint);
        let err = client.recognize("skype").unwrap_err();
        assert!(matches!(err, Error::Protocol(_)), "{err}");
    }

    #[test]
    fn remote_down_exhausts_retries_then_errors() {
        // Bind then drop a listener so the port is closed.
        let endpoint = {
            let listener = TcpListener::bind("127.0.0.1:0").unwrap();
            format!("http://{}/ner", listener.local_addr().unwrap())
        };
        let client = client_for(&endpoint);
        let err = client.recognize("anything").unwrap_err();
        assert!(matches!(err, Error::Transport { attempts: 2, .. }), "{err}");
    }

    #[test]
    fn recognizer_falls_back_to_gazetteer() {
        let endpoint = {
            let listener = TcpListener::bind("127.0.0.1:0").unwrap();
            format!("http://{}/ner", listener.local_addr().unwrap())
        };
        let recognizer = EntityRecognizer::with_remote(gazetteer(), client_for(&endpoint));
        let result = recognizer.recognize("microsoft windows flaw");
        assert!(result.fallback.is_some());
        assert_eq!(result.entities[0].term, "microsoft windows");
    }

    #[test]
    fn semaphore_caps_concurrent_requests() {
        let peak = Arc::new(AtomicUsize::new(0));
        let current = Arc::new(AtomicUsize::new(0));
        let (peak_s, current_s) = (Arc::clone(&peak), Arc::clone(&current));

        let listener = TcpListener::bind("127.0.0.1:0").unwrap();
        let addr = listener.local_addr().unwrap();
        std::thread::spawn(move || {
            loop {
                let Ok((mut stream, _)) = listener.accept() else {
                    break;
                };
                let peak = Arc::clone(&peak_s);
                let current = Arc::clone(&current_s);
                std::thread::spawn(move || {
                    let now = current.fetch_add(1, Ordering::SeqCst) + 1;
                    peak.fetch_max(now, Ordering::SeqCst);
                    std::thread::sleep(Duration::from_millis(60));
                    let mut buf = [0u8; 2048];
                    let _ = stream.read(&mut buf);
                    let body = r#"{"entities":[]}"#;
                    let response = format!(
                        "HTTP/1.1 200 OK\r\ncontent-type: application/json\r\ncontent-length: {}\r\nconnection: close\r\n\r\n{}",
                        body.len(),
                        body
                    );
                    // Decrement before responding: the client only releases
                    // its permit after the response arrives.
                    current.fetch_sub(1, Ordering::SeqCst);
                    let _ = stream.write_all(response.as_bytes());
                });
            }
        });

        let client = Arc::new(RemoteNerClient::new(RemoteNerConfig {
            endpoint: format!("http://{addr}/ner"),
            timeout: Duration::from_millis(5000),
            retries: 0,
            max_in_flight: 2,
        }));
        let workers: Vec<_> = (0..8)
            .map(|_| {
                let client = Arc::clone(&client);
                std::thread::spawn(move || {
                    let _ = client.recognize("text");
                })
            })
            .collect();
        for worker in workers {
            worker.join().unwrap();
        }
        assert!(
            peak.load(Ordering::SeqCst) <= 2,
            "peak concurrency {} exceeded the cap",
            peak.load(Ordering::SeqCst)
        );
    }
}
