use std::collections::BTreeMap;
use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};
use walsh_hardy::kernels::KernelReport;
use walsh_hardy::table::TableRow;
use walsh_hardy::{ExperimentTable, SuiteReport};

use crate::args::Format;
use crate::error::CliError;

pub const GIT_DESCRIBE: &str = env!("WALSH_GIT_DESCRIBE");

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DocumentKind {
    Table,
    KernelReport,
    Suites,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Metadata {
    pub kind: DocumentKind,
    pub experiment: Option<String>,
    pub p: Option<f64>,
    pub resolution: Option<u32>,
    pub schedule: Option<String>,
    pub truncation: Option<usize>,
    pub seed: Option<u64>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub extra: BTreeMap<String, String>,
    pub git_describe: String,
}

impl Metadata {
    pub fn new(kind: DocumentKind) -> Self {
        Self {
            kind,
            experiment: None,
            p: None,
            resolution: None,
            schedule: None,
            truncation: None,
            seed: None,
            extra: BTreeMap::new(),
            git_describe: GIT_DESCRIBE.to_owned(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Document<R> {
    pub metadata: Metadata,
    pub records: Vec<R>,
}

/// Every output the harness can produce.
#[derive(Debug, Clone, PartialEq)]
pub enum Output {
    Table(Document<TableRow>),
    Kernels(Document<KernelReport>),
    Suites(Document<SuiteReport>),
}

impl Output {
    pub fn table(table: ExperimentTable) -> Self {
        let meta = table.meta;
        let mut metadata = Metadata::new(DocumentKind::Table);
        metadata.experiment = Some(meta.experiment);
        metadata.p = meta.p;
        metadata.resolution = meta.resolution;
        metadata.schedule = meta.schedule;
        metadata.truncation = meta.truncation;
        metadata.seed = meta.seed;
        metadata.extra = meta.extra;
        Output::Table(Document {
            metadata,
            records: table.rows,
        })
    }

    pub fn kernels(reports: Vec<KernelReport>, resolution: u32) -> Self {
        let mut metadata = Metadata::new(DocumentKind::KernelReport);
        metadata.experiment = Some("kernel_report".into());
        metadata.resolution = Some(resolution);
        Output::Kernels(Document {
            metadata,
            records: reports,
        })
    }

    pub fn suites(reports: Vec<SuiteReport>, resolution: u32, seed: u64) -> Self {
        let mut metadata = Metadata::new(DocumentKind::Suites);
        metadata.experiment = Some("verify".into());
        metadata.resolution = Some(resolution);
        metadata.seed = Some(seed);
        Output::Suites(Document {
            metadata,
            records: reports,
        })
    }

    /// Parses a document written with [`Output::write_json`].
    pub fn from_json(text: &str) -> Result<Self, CliError> {
        #[derive(Deserialize)]
        struct Probe {
            metadata: Metadata,
        }
        let probe: Probe = serde_json::from_str(text).map_err(|e| CliError::BadInput(e.to_string()))?;
        let bad = |e: serde_json::Error| CliError::BadInput(e.to_string());
        Ok(match probe.metadata.kind {
            DocumentKind::Table => Output::Table(serde_json::from_str(text).map_err(bad)?),
            DocumentKind::KernelReport => Output::Kernels(serde_json::from_str(text).map_err(bad)?),
            DocumentKind::Suites => Output::Suites(serde_json::from_str(text).map_err(bad)?),
        })
    }

    pub fn failed_checks(&self) -> usize {
        match self {
            Output::Suites(doc) => doc.records.iter().map(|r| r.failures().count()).sum(),
            _ => 0,
        }
    }

    pub fn write(&self, format: Format, out: &mut dyn Write) -> io::Result<()> {
        match format {
            Format::Json => self.write_json(out),
            Format::Csv => self.write_csv(out),
            Format::Text => match self {
                Output::Suites(doc) => write_text(doc, out),
                _ => self.write_csv(out),
            },
        }
    }

    pub fn write_json(&self, out: &mut dyn Write) -> io::Result<()> {
        match self {
            Output::Table(doc) => serde_json::to_writer_pretty(&mut *out, doc),
            Output::Kernels(doc) => serde_json::to_writer_pretty(&mut *out, doc),
            Output::Suites(doc) => serde_json::to_writer_pretty(&mut *out, doc),
        }
        .map_err(io::Error::other)?;
        writeln!(out)
    }

    pub fn write_csv(&self, out: &mut dyn Write) -> io::Result<()> {
        let mut w = csv::WriterBuilder::new().has_headers(false).from_writer(out);
        match self {
            Output::Table(doc) => {
                w.write_record(["k", "index", "statistic", "value"])?;
                for row in &doc.records {
                    w.serialize(row)?;
                }
            }
            Output::Kernels(doc) => {
                w.write_record(["n", "l1_norm", "variation", "lower_bound_ok", "upper_bound_ok", "max_ratio"])?;
                for row in &doc.records {
                    w.serialize(row)?;
                }
            }
            Output::Suites(doc) => {
                w.write_record(["suite", "check", "statement", "value", "bound", "passed"])?;
                for report in &doc.records {
                    for c in &report.checks {
                        w.serialize((report.suite.name(), &c.name, &c.statement, c.value, c.bound, c.passed))?;
                    }
                }
            }
        }
        w.flush()
    }
}

fn write_text(doc: &Document<SuiteReport>, out: &mut dyn Write) -> io::Result<()> {
    let mut total = 0;
    let mut failed = 0;
    for report in &doc.records {
        writeln!(
            out,
            "== {} ({}) [{} ms]",
            report.suite.name(),
            report.description,
            report.elapsed_ms
        )?;
        for c in &report.checks {
            total += 1;
            if !c.passed {
                failed += 1;
            }
            writeln!(
                out,
                "  {} {:<28} value={:<24} bound={:<24} {}",
                if c.passed { "PASS" } else { "FAIL" },
                c.name,
                c.value,
                c.bound,
                c.statement
            )?;
        }
    }
    writeln!(
        out,
        "{} suites, {total} checks, {failed} failed (seed {}, resolution {}, build {})",
        doc.records.len(),
        doc.metadata.seed.unwrap_or_default(),
        doc.metadata.resolution.unwrap_or_default(),
        doc.metadata.git_describe
    )
}

/// Writes `output` to `path`, or to stdout when no path is given.
pub fn emit(output: &Output, format: Format, path: Option<&Path>) -> Result<(), CliError> {
    let io_err = |source: io::Error| CliError::Io {
        path: path.map_or_else(|| "<stdout>".into(), |p| p.display().to_string()),
        source,
    };
    match path {
        Some(p) => {
            let file = File::create(p).map_err(io_err)?;
            let mut w = BufWriter::new(file);
            output.write(format, &mut w).map_err(io_err)?;
            w.flush().map_err(io_err)
        }
        None => {
            let stdout = io::stdout();
            let mut lock = stdout.lock();
            output.write(format, &mut lock).map_err(io_err)?;
            lock.flush().map_err(io_err)
        }
    }
}
