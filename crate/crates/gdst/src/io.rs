//! Document formats and report emitters for the CLI.
//!
//! Two JSON document kinds exist: CBBA documents carrying complex mass
//! assignments, and dataset documents carrying one experiment's observed
//! probabilities. Both are hand-auditable against the source tables.
//! Emitted numbers use plain decimal formatting, never locale-dependent.

use std::fs;
use std::io::Write as _;
use std::path::Path;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::evidence::{Cbba, EvidenceError, Frame, SurfacePoint, DEFAULT_TOLERANCE};
use crate::fit::{reference_rows, ObservedDataset, Report};
use crate::scalar::Complex;

#[derive(Debug, Error)]
pub enum IoError {
    #[error("parse error: {0}")]
    Parse(String),
    #[error("validation failed: {0}")]
    Validation(String),
    #[error(transparent)]
    File(#[from] std::io::Error),
}

fn default_tolerance() -> f64 {
    DEFAULT_TOLERANCE
}

/// Serialized CBBA: a frame, a validation tolerance and one complex mass
/// per focal set.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CbbaDocument {
    pub frame: Vec<String>,
    #[serde(default = "default_tolerance")]
    pub tolerance: f64,
    pub masses: Vec<MassEntry>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MassEntry {
    pub focal: Vec<String>,
    pub re: f64,
    pub im: f64,
}

impl CbbaDocument {
    pub fn from_slice(bytes: &[u8]) -> Result<CbbaDocument, IoError> {
        serde_json::from_slice(bytes).map_err(|e| IoError::Parse(e.to_string()))
    }

    pub fn from_path(path: &Path) -> Result<CbbaDocument, IoError> {
        Self::from_slice(&fs::read(path)?)
    }

    /// Builds and validates the in-memory CBBA at the document-declared
    /// tolerance.
    pub fn to_cbba(&self) -> Result<Cbba, IoError> {
        if !(self.tolerance.is_finite() && self.tolerance >= 0.0) {
            return Err(IoError::Validation(format!("tolerance {}", self.tolerance)));
        }
        let frame = Frame::new(self.frame.clone()).map_err(evidence_to_validation)?;
        let mut masses = Vec::with_capacity(self.masses.len());
        for entry in &self.masses {
            if entry.focal.is_empty() {
                return Err(IoError::Validation("empty focal list".into()));
            }
            let h = frame.hypothesis(&entry.focal).map_err(evidence_to_validation)?;
            masses.push((h, Complex::new(entry.re, entry.im)));
        }
        let cbba = Cbba::new(frame, masses);
        cbba.validate(self.tolerance).map_err(evidence_to_validation)?;
        Ok(cbba)
    }

    /// Canonical serialization of a CBBA: focal sets ascending by subset
    /// index, member labels in frame order.
    pub fn from_cbba(cbba: &Cbba, tolerance: f64) -> CbbaDocument {
        let masses = cbba
            .iter()
            .map(|(h, m)| MassEntry {
                focal: cbba.frame().members(h).iter().map(|s| s.to_string()).collect(),
                re: m.re,
                im: m.im,
            })
            .collect();
        CbbaDocument {
            frame: cbba.frame().labels().to_vec(),
            tolerance,
            masses,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("document serialization cannot fail")
    }
}

fn evidence_to_validation(e: EvidenceError) -> IoError {
    IoError::Validation(e.to_string())
}

/// Serialized observed dataset, field names as in the source tables.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DatasetDocument {
    pub name: String,
    pub p_g: f64,
    pub p_a_given_g: f64,
    pub p_b: f64,
    pub p_a_given_b: f64,
    pub p_t: f64,
    pub p_a: f64,
}

impl DatasetDocument {
    pub fn from_slice(bytes: &[u8]) -> Result<DatasetDocument, IoError> {
        serde_json::from_slice(bytes).map_err(|e| IoError::Parse(e.to_string()))
    }

    pub fn from_path(path: &Path) -> Result<DatasetDocument, IoError> {
        Self::from_slice(&fs::read(path)?)
    }

    pub fn to_observed(&self) -> Result<ObservedDataset, IoError> {
        let obs = ObservedDataset {
            name: self.name.clone(),
            p_g: self.p_g,
            p_a_given_g: self.p_a_given_g,
            p_b: self.p_b,
            p_a_given_b: self.p_a_given_b,
            p_t: self.p_t,
            p_a_alone: self.p_a,
        };
        obs.validate().map_err(|e| IoError::Validation(e.to_string()))?;
        Ok(obs)
    }

    pub fn from_observed(obs: &ObservedDataset) -> DatasetDocument {
        DatasetDocument {
            name: obs.name.clone(),
            p_g: obs.p_g,
            p_a_given_g: obs.p_a_given_g,
            p_b: obs.p_b,
            p_a_given_b: obs.p_a_given_b,
            p_t: obs.p_t,
            p_a: obs.p_a_alone,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("document serialization cannot fail")
    }
}

/// `x,y,k_abs` rows at six decimals.
pub fn render_surface_csv(points: &[SurfacePoint]) -> String {
    let mut out = String::from("x,y,k_abs\n");
    for p in points {
        out.push_str(&format!("{:.6},{:.6},{:.6}\n", p.x, p.y, p.k_abs));
    }
    out
}

fn push_row(out: &mut String, name: &str, method: &str, v: &[f64; 6], interference: Option<f64>) {
    out.push_str(&format!("{name},{method}"));
    for x in v {
        out.push_str(&format!(",{x:.4}"));
    }
    match interference {
        Some(d) => out.push_str(&format!(",{d:.4}\n")),
        None => out.push('\n'),
    }
}

/// CSV mirroring the comparison-table layout, one line per dataset/method.
pub fn render_report_csv(report: &Report) -> String {
    let mut out =
        String::from("dataset,method,p_g,p_a_given_g,p_b,p_a_given_b,p_t,p_a,interference\n");
    for row in &report.rows {
        push_row(&mut out, &row.name, "observed", &row.observed, Some(row.interference_observed));
        push_row(&mut out, &row.name, "fitted", &row.fitted, Some(row.interference_fitted));
        for r in reference_rows(&row.name) {
            let interference = r.values[5] - r.values[4];
            push_row(&mut out, &row.name, r.method, &r.values, Some(interference));
        }
    }
    push_row(&mut out, "average", "observed", &report.average_observed, None);
    push_row(&mut out, "average", "fitted", &report.average_fitted, None);
    out
}

/// Aligned text table of observed vs fitted rows, with the reference
/// model rows for the known datasets.
pub fn render_report_text(report: &Report) -> String {
    let mut out = String::new();
    out.push_str(&format!(
        "{:<22} {:<9} {:>6} {:>7} {:>6} {:>7} {:>6} {:>6} {:>7}\n",
        "dataset", "method", "P(G)", "P(A|G)", "P(B)", "P(A|B)", "P_T", "P(A)", "P(A)-P_T"
    ));
    let mut line = |name: &str, method: &str, v: &[f64; 6], interference: Option<f64>| {
        out.push_str(&format!(
            "{:<22} {:<9} {:>6.2} {:>7.2} {:>6.2} {:>7.2} {:>6.2} {:>6.2}",
            name, method, v[0], v[1], v[2], v[3], v[4], v[5]
        ));
        match interference {
            Some(d) => out.push_str(&format!(" {d:>+8.2}\n")),
            None => out.push('\n'),
        }
    };
    for row in &report.rows {
        line(&row.name, "observed", &row.observed, Some(row.interference_observed));
        line(&row.name, "fitted", &row.fitted, Some(row.interference_fitted));
        for r in reference_rows(&row.name) {
            line(&row.name, r.method, &r.values, Some(r.values[5] - r.values[4]));
        }
    }
    line("average", "observed", &report.average_observed, None);
    line("average", "fitted", &report.average_fitted, None);
    out
}

/// Writes via a sibling temp file and rename, so failures never leave a
/// partial output behind.
pub fn write_atomic(path: &Path, contents: &str) -> Result<(), IoError> {
    let tmp = path.with_extension("tmp~");
    {
        let mut f = fs::File::create(&tmp)?;
        f.write_all(contents.as_bytes())?;
    }
    fs::rename(&tmp, path)?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::evidence::conflict_surface;

    const EXAMPLE: &str = r#"{
        "frame": ["A", "B"],
        "tolerance": 1e-6,
        "masses": [
            {"focal": ["A"], "re": 0.1, "im": -0.176776695297},
            {"focal": ["B"], "re": 0.7, "im": 0.353553390593},
            {"focal": ["A", "B"], "re": 0.2, "im": -0.176776695297}
        ]
    }"#;

    #[test]
    fn parses_and_validates_cbba_documents() {
        let doc = CbbaDocument::from_slice(EXAMPLE.as_bytes()).unwrap();
        let cbba = doc.to_cbba().unwrap();
        assert_eq!(cbba.frame().size(), 2);
        let a = cbba.frame().hypothesis(&["A"]).unwrap();
        assert!((cbba.mass(a).re - 0.1).abs() < 1e-15);
    }

    #[test]
    fn tolerance_defaults_when_absent() {
        let doc: CbbaDocument = serde_json::from_str(
            r#"{"frame": ["A"], "masses": [{"focal": ["A"], "re": 1.0, "im": 0.0}]}"#,
        )
        .unwrap();
        assert_eq!(doc.tolerance, DEFAULT_TOLERANCE);
        assert!(doc.to_cbba().is_ok());
    }

    #[test]
    fn rejects_malformed_documents() {
        assert!(matches!(
            CbbaDocument::from_slice(b"not json"),
            Err(IoError::Parse(_))
        ));
        let unknown_label: CbbaDocument = serde_json::from_str(
            r#"{"frame": ["A"], "masses": [{"focal": ["Z"], "re": 1.0, "im": 0.0}]}"#,
        )
        .unwrap();
        assert!(matches!(unknown_label.to_cbba(), Err(IoError::Validation(_))));
        let empty_focal: CbbaDocument = serde_json::from_str(
            r#"{"frame": ["A"], "masses": [{"focal": [], "re": 1.0, "im": 0.0}]}"#,
        )
        .unwrap();
        assert!(matches!(empty_focal.to_cbba(), Err(IoError::Validation(_))));
        let bad_sum: CbbaDocument = serde_json::from_str(
            r#"{"frame": ["A"], "masses": [{"focal": ["A"], "re": 0.5, "im": 0.0}]}"#,
        )
        .unwrap();
        assert!(matches!(bad_sum.to_cbba(), Err(IoError::Validation(_))));
    }

    #[test]
    fn cbba_round_trip_is_idempotent() {
        let doc = CbbaDocument::from_slice(EXAMPLE.as_bytes()).unwrap();
        let cbba = doc.to_cbba().unwrap();
        let doc2 = CbbaDocument::from_cbba(&cbba, doc.tolerance);
        let doc3 = CbbaDocument::from_slice(doc2.to_json().as_bytes()).unwrap();
        assert_eq!(doc2, doc3);
        assert_eq!(doc3.to_cbba().unwrap(), cbba);
    }

    #[test]
    fn dataset_document_round_trip() {
        let json = r#"{"name": "busemeyer2009-narrow", "p_g": 0.17, "p_a_given_g": 0.41,
                       "p_b": 0.83, "p_a_given_b": 0.63, "p_t": 0.59, "p_a": 0.69}"#;
        let doc = DatasetDocument::from_slice(json.as_bytes()).unwrap();
        let obs = doc.to_observed().unwrap();
        assert_eq!(obs.p_a_alone, 0.69);
        let doc2 = DatasetDocument::from_observed(&obs);
        assert_eq!(doc, doc2);

        let bad = DatasetDocument { p_g: 0.5, ..doc };
        assert!(matches!(bad.to_observed(), Err(IoError::Validation(_))));
    }

    #[test]
    fn surface_csv_format() {
        let rows = conflict_surface(0.5).unwrap();
        let csv = render_surface_csv(&rows);
        let mut lines = csv.lines();
        assert_eq!(lines.next(), Some("x,y,k_abs"));
        assert!(csv.contains("1.000000,0.000000,0.707107"));
        assert!(csv.contains("0.500000,-0.500000,0.000000"));
        assert!(csv.ends_with('\n'));
    }

    #[test]
    fn atomic_write_replaces_file() {
        let dir = std::env::temp_dir().join(format!("gdst-io-test-{}", std::process::id()));
        fs::create_dir_all(&dir).unwrap();
        let path = dir.join("out.csv");
        write_atomic(&path, "first\n").unwrap();
        write_atomic(&path, "second\n").unwrap();
        assert_eq!(fs::read_to_string(&path).unwrap(), "second\n");
        fs::remove_dir_all(&dir).unwrap();
    }
}
