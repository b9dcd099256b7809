//! Batch verification across primes, extensions and characters, with JSON-lines reports.

mod config;
mod suites;

use std::io::Write;
use std::time::Instant;

use rayon::prelude::*;
use serde::Serialize;
use serde_json::Value;

pub use config::{ConfigError, RunConfig, Suite};

use crate::padic::ExtKind;

pub const ARTIFACT_VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Pass,
    Fail,
    Error,
}

/// One checked statement on one input.
#[derive(Clone, Debug, Serialize)]
pub struct VerificationReport {
    pub suite: Suite,
    pub check: &'static str,
    /// Names the statement of the source that the check exercises.
    pub anchor: &'static str,
    pub p: u64,
    pub ext: ExtKind,
    pub item: String,
    pub status: Status,
    pub detail: Value,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub elapsed_ms: Option<f64>,
}

#[derive(Clone, Debug, Serialize)]
pub struct Summary {
    pub kind: &'static str,
    pub suite: Suite,
    pub version: &'static str,
    pub total: usize,
    pub passed: usize,
    pub failed: usize,
    pub errors: usize,
    pub config: RunConfig,
}

#[derive(Clone, Debug, Serialize)]
pub struct SuiteReport {
    pub items: Vec<VerificationReport>,
    pub summary: Summary,
}

impl SuiteReport {
    pub fn all_passed(&self) -> bool {
        self.summary.failed == 0 && self.summary.errors == 0
    }

    /// One JSON object per item, then the summary, each on its own line.
    pub fn write_jsonl<W: Write>(&self, mut w: W) -> std::io::Result<()> {
        for item in &self.items {
            serde_json::to_writer(&mut w, item)?;
            w.write_all(b"\n")?;
        }
        serde_json::to_writer(&mut w, &self.summary)?;
        w.write_all(b"\n")
    }

    pub fn to_jsonl(&self) -> String {
        let mut buf = Vec::new();
        self.write_jsonl(&mut buf).expect("writing to a vector");
        String::from_utf8(buf).expect("serde_json emits UTF-8")
    }
}

/// A unit of work: one suite on one field, producing items in a fixed order.
struct Task {
    suite: Suite,
    p: u64,
    ext: ExtKind,
}

/// Runs `suite` (or every suite in `config.suites` for `Suite::All`). Items are computed on a
/// worker pool and assembled in sweep order, so the report does not depend on scheduling.
pub fn run_suite(config: &RunConfig, suite: Suite) -> Result<SuiteReport, ConfigError> {
    config.validate()?;
    let suites = if suite == Suite::All { config.suites.clone() } else { vec![suite] };
    let tasks: Vec<Task> =
        suites.iter().flat_map(|&s| config.fields().into_iter().map(move |(p, ext)| Task { suite: s, p, ext })).collect();
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(config.threads)
        .build()
        .map_err(|e| ConfigError::BadValue { key: "threads".into(), reason: e.to_string() })?;
    let chunks: Vec<Vec<VerificationReport>> = pool.install(|| {
        tasks
            .par_iter()
            .map(|t| {
                let start = Instant::now();
                let mut items = suites::run(config, t.suite, t.p, t.ext);
                if config.timing {
                    let ms = start.elapsed().as_secs_f64() * 1e3 / items.len().max(1) as f64;
                    for item in &mut items {
                        item.elapsed_ms = Some(ms);
                    }
                }
                items
            })
            .collect()
    });
    let items: Vec<VerificationReport> = chunks.into_iter().flatten().collect();
    let count = |s: Status| items.iter().filter(|i| i.status == s).count();
    let summary = Summary {
        kind: "summary",
        suite,
        version: ARTIFACT_VERSION,
        total: items.len(),
        passed: count(Status::Pass),
        failed: count(Status::Fail),
        errors: count(Status::Error),
        config: config.clone(),
    };
    Ok(SuiteReport { items, summary })
}
