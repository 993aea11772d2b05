//! Search-space instrumentation: per-expansion statistics and bound traces.

use std::collections::BTreeMap;
use std::fmt;
use std::time::Instant;

use crate::rational::Rational;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum SpaceTag {
    /// Ordinary regression (IDA*).
    Normal,
    /// OR nodes of the m-regression space.
    Or,
    /// AND nodes of the m-regression space.
    And,
}

impl fmt::Display for SpaceTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SpaceTag::Normal => "normal",
            SpaceTag::Or => "or",
            SpaceTag::And => "and",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExpansionEvent {
    pub space: SpaceTag,
    pub size: usize,
    pub successor_sizes: Vec<usize>,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SpaceSummary {
    pub avg_size: f64,
    /// Mean of `|s'| / |s|` over all (parent, successor) pairs.
    pub avg_ratio: f64,
    pub avg_branching: f64,
    pub expansions: u64,
}

#[derive(Clone, Copy, Debug, Default, PartialEq)]
struct Acc {
    expansions: u64,
    size_sum: u64,
    ratio_sum: f64,
    pairs: u64,
    succ_sum: u64,
}

impl Acc {
    fn add(&mut self, e: &ExpansionEvent) {
        self.expansions += 1;
        self.size_sum += e.size as u64;
        self.succ_sum += e.successor_sizes.len() as u64;
        for &s in &e.successor_sizes {
            self.pairs += 1;
            self.ratio_sum += if e.size == 0 { s as f64 } else { s as f64 / e.size as f64 };
        }
    }

    fn summary(&self) -> SpaceSummary {
        let n = self.expansions as f64;
        SpaceSummary {
            avg_size: self.size_sum as f64 / n,
            avg_ratio: if self.pairs == 0 { 0.0 } else { self.ratio_sum / self.pairs as f64 },
            avg_branching: self.succ_sum as f64 / n,
            expansions: self.expansions,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Phase {
    Gbf,
    Idao(usize),
    Ida,
}

impl fmt::Display for Phase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Phase::Gbf => f.write_str("gbf"),
            Phase::Idao(m) => write!(f, "idao:{m}"),
            Phase::Ida => f.write_str("ida"),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct TraceRecord {
    pub elapsed_ms: f64,
    pub phase: Phase,
    pub bound: Rational,
    /// Expansions made by the whole run before this record.
    pub expansions: u64,
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct MetricsReport {
    pub spaces: BTreeMap<SpaceTag, SpaceSummary>,
    pub trace: Vec<TraceRecord>,
    pub solved_hits: u64,
    pub solved_misses: u64,
}

impl MetricsReport {
    pub fn solved_hit_rate(&self) -> Option<f64> {
        let total = self.solved_hits + self.solved_misses;
        (total > 0).then(|| self.solved_hits as f64 / total as f64)
    }

    pub fn is_empty(&self) -> bool {
        self.spaces.is_empty()
    }

    /// `space,avg_size,avg_ratio,avg_branching,expansions`.
    pub fn to_csv(&self) -> String {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(["space", "avg_size", "avg_ratio", "avg_branching", "expansions"])
            .expect("in-memory write");
        for (tag, s) in &self.spaces {
            w.write_record([
                tag.to_string(),
                format!("{:.4}", s.avg_size),
                format!("{:.4}", s.avg_ratio),
                format!("{:.4}", s.avg_branching),
                s.expansions.to_string(),
            ])
            .expect("in-memory write");
        }
        String::from_utf8(w.into_inner().expect("in-memory flush")).expect("csv is utf-8")
    }
}

/// `elapsed_ms,phase,bound`.
pub fn trace_to_csv(trace: &[TraceRecord]) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["elapsed_ms", "phase", "bound"]).expect("in-memory write");
    for r in trace {
        w.write_record([format!("{:.3}", r.elapsed_ms), r.phase.to_string(), r.bound.to_string()])
            .expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("in-memory flush")).expect("csv is utf-8")
}

/// Aggregates a complete event log.
pub fn collect_metrics(events: &[ExpansionEvent]) -> MetricsReport {
    let mut acc: BTreeMap<SpaceTag, Acc> = BTreeMap::new();
    for e in events {
        acc.entry(e.space).or_default().add(e);
    }
    MetricsReport {
        spaces: acc.iter().map(|(k, a)| (*k, a.summary())).collect(),
        ..MetricsReport::default()
    }
}

/// Online collector shared by the searches of one planning run.
#[derive(Clone, Debug)]
pub struct Recorder {
    acc: BTreeMap<SpaceTag, Acc>,
    log: Option<Vec<ExpansionEvent>>,
    /// Whether expansion statistics are currently being recorded.
    pub recording: bool,
    expansions: u64,
    start: Instant,
    trace: Vec<TraceRecord>,
    pub solved_hits: u64,
    pub solved_misses: u64,
}

impl Default for Recorder {
    fn default() -> Self {
        Recorder::new(false)
    }
}

impl Recorder {
    /// `keep_log` also retains every event for later recounting.
    pub fn new(keep_log: bool) -> Recorder {
        Recorder {
            acc: BTreeMap::new(),
            log: keep_log.then(Vec::new),
            recording: true,
            expansions: 0,
            start: Instant::now(),
            trace: Vec::new(),
            solved_hits: 0,
            solved_misses: 0,
        }
    }

    /// Counts an expansion and, when recording, its statistics.
    pub fn expansion(&mut self, space: SpaceTag, size: usize, successor_sizes: impl FnOnce() -> Vec<usize>) {
        self.expansions += 1;
        if !self.recording {
            return;
        }
        let e = ExpansionEvent { space, size, successor_sizes: successor_sizes() };
        self.acc.entry(space).or_default().add(&e);
        if let Some(log) = &mut self.log {
            log.push(e);
        }
    }

    pub fn expansions(&self) -> u64 {
        self.expansions
    }

    pub fn bound(&mut self, phase: Phase, bound: Rational) {
        self.trace.push(TraceRecord {
            elapsed_ms: self.start.elapsed().as_secs_f64() * 1000.0,
            phase,
            bound,
            expansions: self.expansions,
        });
    }

    pub fn events(&self) -> Option<&[ExpansionEvent]> {
        self.log.as_deref()
    }

    pub fn report(&self) -> MetricsReport {
        MetricsReport {
            spaces: self.acc.iter().map(|(k, a)| (*k, a.summary())).collect(),
            trace: self.trace.clone(),
            solved_hits: self.solved_hits,
            solved_misses: self.solved_misses,
        }
    }
}
