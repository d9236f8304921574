//! Error-rate tables, CSV/JSON reports, and the linear extrapolation fit.

use std::fmt;
use std::str::FromStr;

use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::{stats, BenchError};
use crate::circuit::OracleKind;

/// Row key for the repetition column: a numbered repetition or the mean
/// over all repetitions of the same (n, oracle) cell.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Repetition {
    Index(usize),
    Mean,
}

impl fmt::Display for Repetition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Repetition::Index(i) => write!(f, "{i}"),
            Repetition::Mean => write!(f, "mean"),
        }
    }
}

impl FromStr for Repetition {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        if s == "mean" {
            return Ok(Repetition::Mean);
        }
        s.parse()
            .map(Repetition::Index)
            .map_err(|_| format!("invalid repetition {s:?}"))
    }
}

impl Serialize for Repetition {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        match self {
            Repetition::Index(i) => serializer.serialize_u64(*i as u64),
            Repetition::Mean => serializer.serialize_str("mean"),
        }
    }
}

impl<'de> Deserialize<'de> for Repetition {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Number(u64),
            Text(String),
        }
        match Raw::deserialize(deserializer)? {
            Raw::Number(i) => Ok(Repetition::Index(i as usize)),
            Raw::Text(s) => s.parse().map_err(D::Error::custom),
        }
    }
}

/// One measured algorithmic error rate.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ErrorRateRecord {
    pub n: usize,
    pub oracle: OracleKind,
    pub backend: String,
    pub repetition: Repetition,
    pub shots: usize,
    pub error_rate: f64,
    pub seed: u64,
}

/// Experiment results in canonical (n, oracle, repetition) order, with the
/// mean row after its repetitions.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct ErrorRateTable {
    pub rows: Vec<ErrorRateRecord>,
}

impl ErrorRateTable {
    pub fn new(mut rows: Vec<ErrorRateRecord>) -> Self {
        rows.sort_by(|a, b| {
            (a.n, a.oracle.name(), a.repetition).cmp(&(b.n, b.oracle.name(), b.repetition))
        });
        ErrorRateTable { rows }
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    /// Per-repetition rows for one oracle, as (n, error_rate) points.
    pub fn repetition_points(&self, oracle: OracleKind) -> Vec<(usize, f64)> {
        self.rows
            .iter()
            .filter(|r| r.oracle == oracle && matches!(r.repetition, Repetition::Index(_)))
            .map(|r| (r.n, r.error_rate))
            .collect()
    }

    /// Mean error rate per n, preferring per-repetition rows and falling
    /// back to mean rows when the table only carries aggregates.
    pub fn mean_by_n(&self, oracle: Option<OracleKind>) -> Vec<(usize, f64)> {
        let matches_oracle = |r: &&ErrorRateRecord| oracle.is_none_or(|o| r.oracle == o);
        let mut source: Vec<&ErrorRateRecord> = self
            .rows
            .iter()
            .filter(matches_oracle)
            .filter(|r| matches!(r.repetition, Repetition::Index(_)))
            .collect();
        if source.is_empty() {
            source = self
                .rows
                .iter()
                .filter(matches_oracle)
                .filter(|r| r.repetition == Repetition::Mean)
                .collect();
        }
        let mut ns: Vec<usize> = source.iter().map(|r| r.n).collect();
        ns.sort_unstable();
        ns.dedup();
        ns.into_iter()
            .map(|n| {
                let rates: Vec<f64> = source
                    .iter()
                    .filter(|r| r.n == n)
                    .map(|r| r.error_rate)
                    .collect();
                (n, stats::mean(&rates))
            })
            .collect()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ReportFormat {
    Csv,
    Json,
}

impl FromStr for ReportFormat {
    type Err = BenchError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "csv" => Ok(ReportFormat::Csv),
            "json" => Ok(ReportFormat::Json),
            other => Err(BenchError::UnknownFormat(other.to_string())),
        }
    }
}

const CSV_HEADER: &str = "n,oracle,backend,repetition,shots,error_rate,seed";

/// Renders the table. CSV columns are exactly
/// `n,oracle,backend,repetition,shots,error_rate,seed`; output is
/// byte-stable for a given table.
pub fn report(table: &ErrorRateTable, format: ReportFormat) -> Result<String, BenchError> {
    if table.is_empty() {
        return Err(BenchError::EmptyTable);
    }
    let canonical = ErrorRateTable::new(table.rows.clone());
    match format {
        ReportFormat::Csv => {
            let mut out = String::from(CSV_HEADER);
            out.push('\n');
            for r in &canonical.rows {
                out.push_str(&format!(
                    "{},{},{},{},{},{},{}\n",
                    r.n, r.oracle.name(), r.backend, r.repetition, r.shots, r.error_rate, r.seed
                ));
            }
            Ok(out)
        }
        ReportFormat::Json => {
            let mut out =
                serde_json::to_string_pretty(&canonical).expect("table serializes to JSON");
            out.push('\n');
            Ok(out)
        }
    }
}

/// Parses a report produced by [`report`], auto-detecting CSV or JSON.
pub fn parse_report(text: &str) -> Result<ErrorRateTable, BenchError> {
    let trimmed = text.trim_start();
    if trimmed.starts_with('{') {
        let table: ErrorRateTable = serde_json::from_str(trimmed)
            .map_err(|e| BenchError::ReportParse(e.to_string()))?;
        return Ok(ErrorRateTable::new(table.rows));
    }
    let mut lines = text.lines().filter(|l| !l.trim().is_empty());
    let header = lines.next().ok_or_else(|| {
        BenchError::ReportParse("empty report".to_string())
    })?;
    if header.trim() != CSV_HEADER {
        return Err(BenchError::ReportParse(format!(
            "unexpected CSV header {header:?}"
        )));
    }
    let mut rows = Vec::new();
    for (i, line) in lines.enumerate() {
        let fields: Vec<&str> = line.trim().split(',').collect();
        if fields.len() != 7 {
            return Err(BenchError::ReportParse(format!(
                "row {}: expected 7 fields, got {}",
                i + 1,
                fields.len()
            )));
        }
        let parse_err = |what: &str| BenchError::ReportParse(format!("row {}: bad {what}", i + 1));
        rows.push(ErrorRateRecord {
            n: fields[0].parse().map_err(|_| parse_err("n"))?,
            oracle: fields[1].parse().map_err(|_| parse_err("oracle"))?,
            backend: fields[2].to_string(),
            repetition: fields[3].parse().map_err(|_| parse_err("repetition"))?,
            shots: fields[4].parse().map_err(|_| parse_err("shots"))?,
            error_rate: fields[5].parse().map_err(|_| parse_err("error_rate"))?,
            seed: fields[6].parse().map_err(|_| parse_err("seed"))?,
        });
    }
    Ok(ErrorRateTable::new(rows))
}

/// Least-squares line through the per-n mean error rates, projected out to
/// a larger problem size.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct FitResult {
    pub slope: f64,
    pub intercept: f64,
    pub projected_n: usize,
    /// Projection clipped to [0, 0.5]; 0.5 is the random-guessing ceiling.
    pub projected_rate: f64,
}

pub fn linear_fit_extrapolate(
    table: &ErrorRateTable,
    projected_n: usize,
) -> Result<FitResult, BenchError> {
    let points = table.mean_by_n(None);
    if points.len() < 2 {
        return Err(BenchError::DegenerateFit {
            distinct_n: points.len(),
        });
    }
    let xs: Vec<f64> = points.iter().map(|&(n, _)| n as f64).collect();
    let ys: Vec<f64> = points.iter().map(|&(_, r)| r).collect();
    let mx = stats::mean(&xs);
    let my = stats::mean(&ys);
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let raw = intercept + slope * projected_n as f64;
    Ok(FitResult {
        slope,
        intercept,
        projected_n,
        projected_rate: raw.clamp(0.0, 0.5),
    })
}
