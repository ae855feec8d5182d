use std::str::FromStr;

use num_rational::Ratio;
use serde::{Deserialize, Serialize};

use super::SchemeSpec;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ReportFormat {
    Csv,
    Json,
}

impl FromStr for ReportFormat {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "csv" => Ok(ReportFormat::Csv),
            "json" => Ok(ReportFormat::Json),
            other => Err(format!("unknown format {other:?} (csv or json)")),
        }
    }
}

/// One scheme built on one graph.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReportRow {
    pub scheme: String,
    pub model: String,
    pub n: usize,
    pub seed: u64,
    pub graph_seed: u64,
    /// Graphs rejected by the lemma checks before this one.
    pub retries: u32,
    pub status: String,
    pub diameter_two: bool,
    pub degree_lemma: bool,
    pub coverage_lemma: bool,
    pub total_bits: u64,
    pub function_bits: u64,
    pub label_bits: u64,
    pub max_node_bits: u64,
    pub claim_violations: usize,
    pub pairs: usize,
    pub delivered: usize,
    /// Path stretch as `p/q`.
    pub max_stretch: String,
    pub max_traversals: usize,
    pub guarantee_met: bool,
}

pub(crate) const REPORT_COLUMNS: [&str; 20] = [
    "scheme",
    "model",
    "n",
    "seed",
    "graph_seed",
    "retries",
    "status",
    "diameter_two",
    "degree_lemma",
    "coverage_lemma",
    "total_bits",
    "function_bits",
    "label_bits",
    "max_node_bits",
    "claim_violations",
    "pairs",
    "delivered",
    "max_stretch",
    "max_traversals",
    "guarantee_met",
];

impl ReportRow {
    pub(crate) fn new(spec: SchemeSpec, n: usize, seed: u64) -> Self {
        ReportRow {
            scheme: spec.kind.name().to_string(),
            model: spec.model.to_string(),
            n,
            seed,
            graph_seed: seed,
            retries: 0,
            status: "ok".to_string(),
            diameter_two: false,
            degree_lemma: false,
            coverage_lemma: false,
            total_bits: 0,
            function_bits: 0,
            label_bits: 0,
            max_node_bits: 0,
            claim_violations: 0,
            pairs: 0,
            delivered: 0,
            max_stretch: "0/1".to_string(),
            max_traversals: 0,
            guarantee_met: false,
        }
    }

    pub(crate) fn sort_key(&self) -> (usize, u64, &str, &str) {
        (self.n, self.seed, &self.scheme, &self.model)
    }
}

/// Seed-averaged view of one `(scheme, model, n)` group.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SummaryRow {
    pub scheme: String,
    pub model: String,
    pub n: usize,
    pub seeds: usize,
    pub ok_seeds: usize,
    pub mean_total_bits: f64,
    pub mean_max_node_bits: f64,
    pub mean_label_bits: f64,
    pub max_stretch: String,
    pub max_traversals: usize,
    pub all_guarantees_met: bool,
}

const SUMMARY_COLUMNS: [&str; 11] = [
    "scheme",
    "model",
    "n",
    "seeds",
    "ok_seeds",
    "mean_total_bits",
    "mean_max_node_bits",
    "mean_label_bits",
    "max_stretch",
    "max_traversals",
    "all_guarantees_met",
];

pub(crate) fn parse_ratio(s: &str) -> Option<Ratio<u32>> {
    let (p, q) = s.split_once('/')?;
    let (p, q): (u32, u32) = (p.parse().ok()?, q.parse().ok()?);
    (q != 0).then(|| Ratio::new(p, q))
}

fn emit<T: Serialize>(rows: &[T], columns: &[&str], format: ReportFormat) -> String {
    match format {
        ReportFormat::Json => {
            let mut out = serde_json::to_string_pretty(rows).expect("rows serialize to JSON");
            out.push('\n');
            out
        }
        ReportFormat::Csv => {
            let mut w = csv::WriterBuilder::new()
                .has_headers(false)
                .from_writer(Vec::new());
            w.write_record(columns).expect("in-memory write");
            for row in rows {
                w.serialize(row).expect("in-memory write");
            }
            String::from_utf8(w.into_inner().expect("in-memory flush")).expect("CSV is UTF-8")
        }
    }
}

/// Renders per-seed rows with a fixed column order.
pub fn emit_report(rows: &[ReportRow], format: ReportFormat) -> String {
    emit(rows, &REPORT_COLUMNS, format)
}

pub fn emit_summary(rows: &[SummaryRow], format: ReportFormat) -> String {
    emit(rows, &SUMMARY_COLUMNS, format)
}

pub fn parse_report_csv(text: &str) -> Result<Vec<ReportRow>, csv::Error> {
    csv::Reader::from_reader(text.as_bytes())
        .deserialize()
        .collect()
}
