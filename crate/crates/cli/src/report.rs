//! The verification report and its JSON and CSV forms.

use serde::{Deserialize, Serialize};
use ttw_core::probe::ResidualReport;
use ttw_core::suites::Suite;

use crate::config::{Format, RunConfig};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Entry {
    pub suite: Suite,
    #[serde(flatten)]
    pub report: ResidualReport,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SuiteSummary {
    pub suite: Suite,
    pub checks: usize,
    pub pass: bool,
    /// Wall-clock seconds; only recorded on request, since it would make
    /// otherwise identical reports differ.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seconds: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ReportDocument {
    pub tool: String,
    pub version: String,
    pub config: RunConfig,
    pub suites: Vec<SuiteSummary>,
    pub entries: Vec<Entry>,
    pub pass: bool,
}

impl ReportDocument {
    pub fn new(config: RunConfig) -> Self {
        Self { tool: "ttw".into(), version: env!("CARGO_PKG_VERSION").into(), config, suites: Vec::new(), entries: Vec::new(), pass: true }
    }

    pub fn push_suite(&mut self, suite: Suite, reports: Vec<ResidualReport>, seconds: Option<f64>) {
        let pass = reports.iter().all(|r| r.pass);
        self.suites.push(SuiteSummary { suite, checks: reports.len(), pass, seconds });
        self.entries.extend(reports.into_iter().map(|report| Entry { suite, report }));
        self.pass = self.entries.iter().all(|e| e.report.pass);
    }
}

/// CSV row: the flat form of an [`Entry`].
#[derive(Serialize, Deserialize)]
struct Row {
    suite: Suite,
    check: String,
    residual: f64,
    scale: f64,
    tolerance: f64,
    pass: bool,
}

pub fn write_report(doc: &ReportDocument, format: Format) -> Vec<u8> {
    match format {
        Format::Json => {
            let mut out = serde_json::to_vec_pretty(doc).expect("report serializes");
            out.push(b'\n');
            out
        }
        Format::Csv => {
            // header even when there are no rows
            let mut w = csv::WriterBuilder::new().has_headers(false).from_writer(Vec::new());
            w.write_record(["suite", "check", "residual", "scale", "tolerance", "pass"]).expect("in-memory write");
            for e in &doc.entries {
                let r = &e.report;
                w.serialize(Row { suite: e.suite, check: r.check.clone(), residual: r.residual, scale: r.scale, tolerance: r.tolerance, pass: r.pass })
                    .expect("in-memory write");
            }
            w.into_inner().expect("in-memory write")
        }
    }
}

pub fn parse_json(bytes: &[u8]) -> serde_json::Result<ReportDocument> {
    serde_json::from_slice(bytes)
}

/// Entries back from the CSV form.
pub fn parse_csv(bytes: &[u8]) -> csv::Result<Vec<Entry>> {
    let mut r = csv::Reader::from_reader(bytes);
    r.deserialize::<Row>()
        .map(|row| {
            row.map(|x| Entry { suite: x.suite, report: ResidualReport { check: x.check, residual: x.residual, scale: x.scale, tolerance: x.tolerance, pass: x.pass } })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::{ConfigFile, Overrides};

    fn doc() -> ReportDocument {
        let cfg = RunConfig::merge(&ConfigFile::default(), &Overrides::default(), Some(&["trig".into()])).unwrap();
        ReportDocument::new(cfg)
    }

    #[test]
    fn empty_document_passes() {
        let d = doc();
        assert!(d.pass);
        assert!(d.entries.is_empty());
        assert_eq!(parse_csv(&write_report(&d, Format::Csv)).unwrap(), vec![]);
    }

    #[test]
    fn one_failure_fails_the_document() {
        let mut d = doc();
        d.push_suite(Suite::Trig, vec![ResidualReport::new("ok", 1e-14, 1.0, 1e-12), ResidualReport::new("bad", 1.0, 1.0, 1e-12)], None);
        assert!(!d.pass);
        assert!(!d.suites[0].pass);
    }

    #[test]
    fn round_trips() {
        let mut d = doc();
        d.push_suite(Suite::Trig, vec![ResidualReport::new("a, \"quoted\"", 0.1 + 0.2, 3.0f64.sqrt(), 1e-12)], Some(1.25));
        assert_eq!(parse_json(&write_report(&d, Format::Json)).unwrap(), d);
        assert_eq!(parse_csv(&write_report(&d, Format::Csv)).unwrap(), d.entries);
    }
}
