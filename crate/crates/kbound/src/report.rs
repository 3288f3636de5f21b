//! Machine-readable result rows and the three output encodings.
//!
//! JSON output is one document per run:
//! `{"schema_version": 1, "rows": [...], "summary": ...}` with `summary`
//! populated only by batch runs. CSV columns are fixed (see [`CSV_HEADER`]);
//! the aligned table is for terminals.

use serde::{Deserialize, Serialize};
use std::io::{self, Write};

pub const SCHEMA_VERSION: u32 = 1;

pub const CSV_HEADER: &str =
    "graph,n,m,k,method,bound,integer_bound,exact,exhausted,gap,certificate,wall_ms";

/// One bound/exact evaluation. `bound` is an upper bound on `alpha_k` for
/// the alpha methods, a lower bound for the theta and chi methods, and the
/// oracle value itself for `exact` rows.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct ReportRow {
    pub graph: String,
    pub n: usize,
    pub m: usize,
    pub k: usize,
    pub method: String,
    pub bound: f64,
    pub integer_bound: Option<u64>,
    pub exact: Option<u64>,
    /// Set when the oracle hit its node budget; such rows are excluded from
    /// gap statistics.
    pub exhausted: Option<bool>,
    /// `integer_bound - exact` for upper bounds, `exact - integer_bound`
    /// for lower bounds; never negative when the implementation is sound.
    pub gap: Option<i64>,
    pub certificate: String,
    pub wall_ms: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct BatchSummary {
    pub graphs: usize,
    pub rows: usize,
    pub failures: usize,
    /// Mean gap over rows that have one (exact present, not exhausted).
    pub mean_gap: Option<f64>,
    /// Rows whose gap is exactly zero.
    pub tight_count: usize,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct Document {
    pub schema_version: u32,
    pub rows: Vec<ReportRow>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub summary: Option<BatchSummary>,
}

impl BatchSummary {
    pub fn from_rows(graphs: usize, failures: usize, rows: &[ReportRow]) -> Self {
        let gaps: Vec<i64> = rows.iter().filter_map(|r| r.gap).collect();
        BatchSummary {
            graphs,
            rows: rows.len(),
            failures,
            mean_gap: if gaps.is_empty() {
                None
            } else {
                Some(gaps.iter().sum::<i64>() as f64 / gaps.len() as f64)
            },
            tight_count: gaps.iter().filter(|&&g| g == 0).count(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OutputFormat {
    Table,
    Csv,
    Json,
}

impl OutputFormat {
    pub fn from_name(name: &str) -> Option<OutputFormat> {
        match name {
            "table" => Some(OutputFormat::Table),
            "csv" => Some(OutputFormat::Csv),
            "json" => Some(OutputFormat::Json),
            _ => None,
        }
    }
}

fn opt<T: ToString>(v: &Option<T>) -> String {
    v.as_ref().map_or(String::new(), T::to_string)
}

pub fn write_document(
    out: &mut dyn Write,
    format: OutputFormat,
    rows: &[ReportRow],
    summary: Option<&BatchSummary>,
) -> io::Result<()> {
    match format {
        OutputFormat::Json => {
            let doc = Document {
                schema_version: SCHEMA_VERSION,
                rows: rows.to_vec(),
                summary: summary.cloned(),
            };
            serde_json::to_writer_pretty(&mut *out, &doc)?;
            writeln!(out)
        }
        OutputFormat::Csv => {
            writeln!(out, "{CSV_HEADER}")?;
            for r in rows {
                writeln!(
                    out,
                    "{},{},{},{},{},{},{},{},{},{},{},{:.3}",
                    r.graph,
                    r.n,
                    r.m,
                    r.k,
                    r.method,
                    r.bound,
                    opt(&r.integer_bound),
                    opt(&r.exact),
                    opt(&r.exhausted),
                    opt(&r.gap),
                    r.certificate,
                    r.wall_ms
                )?;
            }
            if let Some(s) = summary {
                writeln!(
                    out,
                    "# summary graphs={} rows={} failures={} mean_gap={} tight={}",
                    s.graphs,
                    s.rows,
                    s.failures,
                    s.mean_gap.map_or(String::from("-"), |g| format!("{g:.4}")),
                    s.tight_count
                )?;
            }
            Ok(())
        }
        OutputFormat::Table => {
            let header = [
                "graph",
                "n",
                "m",
                "k",
                "method",
                "bound",
                "int",
                "exact",
                "gap",
                "certificate",
                "ms",
            ];
            let mut table: Vec<[String; 11]> = vec![header.map(String::from)];
            for r in rows {
                let exact = match (r.exact, r.exhausted) {
                    (Some(e), Some(true)) => format!("{e}?"),
                    (Some(e), _) => e.to_string(),
                    (None, _) => String::new(),
                };
                table.push([
                    r.graph.clone(),
                    r.n.to_string(),
                    r.m.to_string(),
                    r.k.to_string(),
                    r.method.clone(),
                    format!("{:.6}", r.bound),
                    opt(&r.integer_bound),
                    exact,
                    opt(&r.gap),
                    r.certificate.clone(),
                    format!("{:.2}", r.wall_ms),
                ]);
            }
            let mut widths = [0usize; 11];
            for row in &table {
                for (w, cell) in widths.iter_mut().zip(row) {
                    *w = (*w).max(cell.len());
                }
            }
            for row in &table {
                let mut line = String::new();
                for (w, cell) in widths.iter().zip(row) {
                    line.push_str(&format!("{cell:<width$}  ", width = w));
                }
                writeln!(out, "{}", line.trim_end())?;
            }
            if let Some(s) = summary {
                writeln!(
                    out,
                    "summary: graphs={} rows={} failures={} mean_gap={} tight={}",
                    s.graphs,
                    s.rows,
                    s.failures,
                    s.mean_gap.map_or(String::from("-"), |g| format!("{g:.4}")),
                    s.tight_count
                )?;
            }
            Ok(())
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample_row() -> ReportRow {
        ReportRow {
            graph: "petersen".into(),
            n: 10,
            m: 15,
            k: 2,
            method: "optlp".into(),
            bound: 1.0,
            integer_bound: Some(1),
            exact: Some(1),
            exhausted: Some(false),
            gap: Some(0),
            certificate: "p=[-0.2; 0.1; 0.1]".into(),
            wall_ms: 0.42,
        }
    }

    #[test]
    fn json_round_trips_every_field() {
        let rows = vec![sample_row()];
        let summary = BatchSummary::from_rows(1, 0, &rows);
        let mut buf = Vec::new();
        write_document(&mut buf, OutputFormat::Json, &rows, Some(&summary)).unwrap();
        let doc: Document = serde_json::from_slice(&buf).unwrap();
        assert_eq!(doc.schema_version, SCHEMA_VERSION);
        assert_eq!(doc.rows, rows);
        assert_eq!(doc.summary.unwrap(), summary);
    }

    #[test]
    fn csv_has_fixed_columns() {
        let mut buf = Vec::new();
        write_document(&mut buf, OutputFormat::Csv, &[sample_row()], None).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let mut lines = text.lines();
        assert_eq!(lines.next().unwrap(), CSV_HEADER);
        let fields: Vec<&str> = lines.next().unwrap().split(',').collect();
        assert_eq!(fields.len(), CSV_HEADER.split(',').count());
        assert_eq!(fields[0], "petersen");
        assert_eq!(fields[4], "optlp");
    }

    #[test]
    fn summary_statistics() {
        let mut r0 = sample_row();
        let mut r1 = sample_row();
        r1.gap = Some(2);
        r0.gap = Some(0);
        let mut r2 = sample_row();
        r2.gap = None;
        let s = BatchSummary::from_rows(3, 1, &[r0, r1, r2]);
        assert_eq!(s.mean_gap, Some(1.0));
        assert_eq!(s.tight_count, 1);
        assert_eq!(s.failures, 1);
    }
}
