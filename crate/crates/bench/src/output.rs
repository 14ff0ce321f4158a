//! Writing and reading records, summaries and per-trial dumps.

use std::fs;
use std::io::{Read, Write};
use std::path::Path;

use priced_core::extensions::TraceStep;
use priced_core::json::InstanceJson;
use priced_core::{Certificate, Instance};
use serde::{Deserialize, Serialize};

use crate::experiment::{TrialOutcome, TrialRecord};
use crate::summary::SummaryRow;
use crate::BenchError;

pub const CSV_HEADER: &str = "model,algorithm,n,p,k,trial,cost,probes,cert_valid,output_correct,min_cert_cost,elapsed_us";

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Csv,
    Json,
}

impl std::str::FromStr for Format {
    type Err = BenchError;
    fn from_str(s: &str) -> Result<Self, BenchError> {
        match s {
            "csv" => Ok(Format::Csv),
            "json" => Ok(Format::Json),
            _ => Err(BenchError::Config(format!("unknown format {s:?} (csv, json)"))),
        }
    }
}

pub fn write_csv<W: Write, T: Serialize>(rows: &[T], out: W) -> Result<(), BenchError> {
    let mut w = csv::Writer::from_writer(out);
    for r in rows {
        w.serialize(r)?;
    }
    w.flush()?;
    Ok(())
}

pub fn read_csv<R: Read>(input: R) -> Result<Vec<TrialRecord>, BenchError> {
    let mut r = csv::Reader::from_reader(input);
    Ok(r.deserialize().collect::<Result<_, _>>()?)
}

#[derive(Debug, Serialize, Deserialize)]
pub struct JsonReport {
    pub records: Vec<TrialRecord>,
    pub summary: Vec<SummaryRow>,
}

/// Records go to `path`; with CSV the summary goes next to it as
/// `<stem>.summary.csv`, with JSON both share one document.
pub fn write_report(path: &Path, format: Format, records: &[TrialRecord], summary: &[SummaryRow]) -> Result<(), BenchError> {
    match format {
        Format::Csv => {
            write_csv(records, fs::File::create(path)?)?;
            write_csv(summary, fs::File::create(path.with_extension("summary.csv"))?)?;
        }
        Format::Json => {
            let report = JsonReport { records: records.to_vec(), summary: summary.to_vec() };
            let f = fs::File::create(path)?;
            serde_json::to_writer_pretty(f, &report)?;
        }
    }
    Ok(())
}

/// File name stem shared by one trial's dump files.
pub fn trial_stem(r: &TrialRecord) -> String {
    let mut s = format!("{}-{}-n{}", r.model, r.algorithm, r.n);
    if let Some(p) = r.p {
        s += &format!("-p{p}");
    }
    if let Some(k) = r.k {
        s += &format!("-k{k}");
    }
    s + &format!("-t{}", r.trial)
}

/// Writes `<stem>.instance.json`, `<stem>.certificate.json` and, for the
/// balanced sorter, `<stem>.trace.json` into `dir`.
pub fn dump_trial(dir: &Path, instance: &Instance, outcome: &TrialOutcome, cert: &Certificate) -> Result<(), BenchError> {
    let stem = trial_stem(&outcome.record);
    fs::write(dir.join(format!("{stem}.instance.json")), serde_json::to_string(&InstanceJson::from(instance))?)?;
    fs::write(dir.join(format!("{stem}.certificate.json")), serde_json::to_string(cert)?)?;
    if !outcome.detail.trace.is_empty() {
        let trace: &[TraceStep] = &outcome.detail.trace;
        fs::write(dir.join(format!("{stem}.trace.json")), serde_json::to_string_pretty(trace)?)?;
    }
    Ok(())
}

fn opt<T: std::fmt::Display>(v: Option<T>) -> String {
    v.map_or_else(|| "-".to_string(), |v| v.to_string())
}

/// Plain-text summary table.
pub fn render_summary(rows: &[SummaryRow]) -> String {
    let mut out = format!(
        "{:<9} {:<17} {:>6} {:>5} {:>6} {:>7} {:>12} {:>10} {:>12}  {:<27} {:>12} {:>10}  {}\n",
        "model", "algorithm", "n", "p", "k", "trials", "mean_cost", "stderr", "min_cert", "bound", "value", "measured", "result"
    );
    for r in rows {
        let result = match (r.pass, r.all_valid) {
            (true, true) => "pass",
            (false, true) => "FAIL bound",
            (true, false) => "FAIL invalid",
            (false, false) => "FAIL both",
        };
        out += &format!(
            "{:<9} {:<17} {:>6} {:>5} {:>6} {:>7} {:>12.4} {:>10.4} {:>12}  {:<27} {:>12} {:>10}  {}\n",
            r.model.name(),
            r.algorithm.name(),
            r.n,
            opt(r.p),
            opt(r.k),
            r.trials,
            r.mean_cost,
            r.stderr,
            r.mean_min_cert.map_or("-".into(), |m| format!("{m:.4}")),
            r.bound_name.as_deref().unwrap_or("-"),
            r.bound_value.map_or("-".into(), |v| format!("{v:.4}")),
            r.metric_mean.map_or("-".into(), |v| format!("{v:.4}")),
            result
        );
    }
    out
}
