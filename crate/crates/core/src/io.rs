//! Matrix and hierarchy files.
//!
//! CSV matrices carry a header row of labels and a leading label column;
//! the corner cell is ignored. JSON matrices are
//! `{"labels": [...], "entries": [[...]]}` with entries as numbers or
//! judgment text. Hierarchies are JSON documents:
//!
//! ```json
//! {
//!   "goal": "Select a car",
//!   "criteria": {"labels": ["Price", "MPG"], "entries": [["1", "3"], ["1/3", "1"]]},
//!   "alternatives": ["a", "b"],
//!   "alt_matrices": {
//!     "Price": {"entries": [["1", "2"], ["1/2", "1"]]},
//!     "MPG": {"entries": [["1", "1/4"], ["4", "1"]]}
//!   }
//! }
//! ```

use std::fmt;
use std::path::Path;

use serde::{Deserialize, Serialize};
use serde_json::Map;
use thiserror::Error;

use crate::cell::Cell;
use crate::error::Error;
use crate::hierarchy::{Dependence, HierarchyModel};
use crate::pcm::{default_labels, IntervalMatrix, PairwiseMatrix};

#[derive(Debug, Error)]
pub enum IoError {
    #[error("line {line}, column {column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },
    #[error(transparent)]
    Invalid(#[from] Error),
    #[error("{path}: {source}")]
    Read { path: String, source: std::io::Error },
    #[error("cannot tell the format of {0:?}; use .csv or .json")]
    UnknownFormat(String),
}

impl IoError {
    /// True for problems with the input itself rather than the machinery.
    pub fn is_validation(&self) -> bool {
        matches!(self, IoError::Syntax { .. } | IoError::Invalid(_))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Csv,
    Json,
}

impl Format {
    pub fn from_path(path: &Path) -> Result<Self, IoError> {
        match path
            .extension()
            .and_then(|e| e.to_str())
            .map(str::to_ascii_lowercase)
            .as_deref()
        {
            Some("csv") => Ok(Format::Csv),
            Some("json") => Ok(Format::Json),
            _ => Err(IoError::UnknownFormat(path.display().to_string())),
        }
    }
}

impl fmt::Display for Format {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Format::Csv => "csv",
            Format::Json => "json",
        })
    }
}

pub fn read_text(path: &Path) -> Result<String, IoError> {
    std::fs::read_to_string(path).map_err(|source| IoError::Read {
        path: path.display().to_string(),
        source,
    })
}

pub fn read_matrix(path: &Path) -> Result<PairwiseMatrix, IoError> {
    parse_matrix(&read_text(path)?, Format::from_path(path)?)
}

pub fn parse_matrix(text: &str, format: Format) -> Result<PairwiseMatrix, IoError> {
    match format {
        Format::Csv => parse_csv(text),
        Format::Json => parse_matrix_json(text),
    }
}

pub fn parse_csv(text: &str) -> Result<PairwiseMatrix, IoError> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .flexible(true)
        .trim(csv::Trim::All)
        .comment(Some(b'#'))
        .from_reader(text.as_bytes());
    let mut records = Vec::new();
    for rec in reader.records() {
        let rec = rec.map_err(|e| {
            let line = e.position().map_or(0, |p| p.line() as usize);
            IoError::Syntax {
                line,
                column: 0,
                message: e.to_string(),
            }
        })?;
        let line = rec.position().map_or(0, |p| p.line() as usize);
        if rec.iter().all(str::is_empty) {
            continue;
        }
        records.push((line, rec));
    }
    let Some(((header_line, header), body)) = records.split_first() else {
        return Err(Error::Empty.into());
    };
    let labels: Vec<String> = header.iter().skip(1).map(str::to_string).collect();
    let n = labels.len();
    if body.len() != n {
        return Err(IoError::Syntax {
            line: *header_line,
            column: 1,
            message: format!("header lists {n} labels but {} data rows follow", body.len()),
        });
    }
    let mut rows = Vec::with_capacity(n);
    for (i, (line, rec)) in body.iter().enumerate() {
        if rec.len() != n + 1 {
            return Err(IoError::Syntax {
                line: *line,
                column: rec.len().min(n + 1),
                message: format!("expected {} fields, found {}", n + 1, rec.len()),
            });
        }
        if rec[0] != labels[i] {
            return Err(IoError::Syntax {
                line: *line,
                column: 1,
                message: format!("row label {:?} does not match column label {:?}", &rec[0], labels[i]),
            });
        }
        let mut row = Vec::with_capacity(n);
        for (j, field) in rec.iter().skip(1).enumerate() {
            let cell = field.parse::<Cell>().map_err(|e| IoError::Syntax {
                line: *line,
                column: j + 2,
                message: e.to_string(),
            })?;
            row.push(cell);
        }
        rows.push(row);
    }
    Ok(PairwiseMatrix::validate(labels, rows)?)
}

pub fn write_csv(matrix: &PairwiseMatrix) -> String {
    let mut w = csv::WriterBuilder::new().from_writer(Vec::new());
    let header = std::iter::once(String::new()).chain(matrix.labels().iter().cloned());
    w.write_record(header).expect("in-memory write");
    for (i, label) in matrix.labels().iter().enumerate() {
        let row = std::iter::once(label.clone()).chain(matrix.row_cells(i).iter().map(Cell::to_text));
        w.write_record(row).expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("in-memory flush")).expect("utf-8 input")
}

/// Serialized matrix. Labels may be omitted on input.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MatrixDoc {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub labels: Option<Vec<String>>,
    pub entries: Vec<Vec<Cell>>,
}

impl MatrixDoc {
    pub fn from_matrix(m: &PairwiseMatrix) -> Self {
        MatrixDoc {
            labels: Some(m.labels().to_vec()),
            entries: m.rows(),
        }
    }

    pub fn into_matrix(self, fallback: Option<&[String]>) -> Result<PairwiseMatrix, Error> {
        let labels = self
            .labels
            .or_else(|| fallback.map(<[String]>::to_vec))
            .unwrap_or_else(|| default_labels(self.entries.len()));
        PairwiseMatrix::validate(labels, self.entries)
    }
}

fn json_error(e: serde_json::Error) -> IoError {
    IoError::Syntax {
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    }
}

pub fn parse_matrix_json(text: &str) -> Result<PairwiseMatrix, IoError> {
    let doc: MatrixDoc = serde_json::from_str(text).map_err(json_error)?;
    Ok(doc.into_matrix(None)?)
}

/// Canonical JSON: exact entries as judgment text, others as numbers;
/// two-space indentation and a trailing newline.
pub fn matrix_to_json(matrix: &PairwiseMatrix) -> String {
    let doc = MatrixDoc {
        labels: Some(matrix.labels().to_vec()),
        entries: matrix.rows(),
    };
    let mut s = serde_json::to_string_pretty(&doc).expect("plain data");
    s.push('\n');
    s
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct IntervalDoc {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub labels: Option<Vec<String>>,
    pub lower: Vec<Vec<Cell>>,
    pub upper: Vec<Vec<Cell>>,
}

impl IntervalDoc {
    pub fn from_interval(labels: &[String], m: &IntervalMatrix) -> Self {
        IntervalDoc {
            labels: Some(labels.to_vec()),
            lower: m.lower_rows(),
            upper: m.upper_rows(),
        }
    }
}

pub fn parse_interval_json(text: &str) -> Result<(Vec<String>, IntervalMatrix), IoError> {
    let doc: IntervalDoc = serde_json::from_str(text).map_err(json_error)?;
    let labels = doc.labels.unwrap_or_else(|| default_labels(doc.lower.len()));
    let m = IntervalMatrix::new(doc.lower, doc.upper)?;
    if labels.len() != m.n() {
        return Err(Error::LabelCount {
            expected: m.n(),
            got: labels.len(),
        }
        .into());
    }
    Ok((labels, m))
}

/// Serialized hierarchy; see the module docs.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct HierarchyDoc {
    pub goal: String,
    pub criteria: MatrixDoc,
    pub alternatives: Vec<String>,
    /// Keyed by criterion label; kept in criteria order on output.
    pub alt_matrices: Map<String, serde_json::Value>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dependence: Option<Dependence>,
}

impl HierarchyDoc {
    pub fn from_model(model: &HierarchyModel) -> Self {
        let mut alt_matrices = Map::new();
        for (c, m) in model.criteria().iter().zip(model.alt_matrices()) {
            let doc = MatrixDoc {
                labels: None,
                entries: m.rows(),
            };
            alt_matrices.insert(c.clone(), serde_json::to_value(doc).expect("plain data"));
        }
        let dependence = (model.dependence() != &Dependence::default()).then(|| model.dependence().clone());
        HierarchyDoc {
            goal: model.goal().to_string(),
            criteria: MatrixDoc::from_matrix(model.criteria_matrix()),
            alternatives: model.alternatives().to_vec(),
            alt_matrices,
            dependence,
        }
    }

    pub fn into_model(self) -> Result<HierarchyModel, IoError> {
        let criteria_labels = self
            .criteria
            .labels
            .clone()
            .ok_or_else(|| Error::Hierarchy("criteria matrix needs labels".into()))?;
        let criteria_matrix = if criteria_labels.len() == 1 {
            let only = self.criteria.entries.first().and_then(|r| r.first()).copied();
            if self.criteria.entries.len() != 1 || only != Some(Cell::ONE) {
                return Err(Error::Hierarchy("a single criterion needs the matrix [[1]]".into()).into());
            }
            PairwiseMatrix::unit(criteria_labels[0].clone())
        } else {
            self.criteria.into_matrix(None)?
        };
        for key in self.alt_matrices.keys() {
            if !criteria_labels.contains(key) {
                return Err(Error::UnknownLabel(key.clone()).into());
            }
        }
        let mut alt_matrices = Vec::with_capacity(criteria_labels.len());
        for c in &criteria_labels {
            let value = self
                .alt_matrices
                .get(c)
                .ok_or_else(|| Error::Hierarchy(format!("no alternative matrix for criterion {c:?}")))?;
            let doc: MatrixDoc = serde_json::from_value(value.clone()).map_err(json_error)?;
            alt_matrices.push(doc.into_matrix(Some(&self.alternatives))?);
        }
        Ok(HierarchyModel::new(
            self.goal,
            criteria_matrix,
            self.alternatives,
            alt_matrices,
            self.dependence.unwrap_or_default(),
        )?)
    }
}

pub fn parse_hierarchy_json(text: &str) -> Result<HierarchyModel, IoError> {
    let doc: HierarchyDoc = serde_json::from_str(text).map_err(json_error)?;
    doc.into_model()
}

pub fn read_hierarchy(path: &Path) -> Result<HierarchyModel, IoError> {
    parse_hierarchy_json(&read_text(path)?)
}

pub fn hierarchy_to_json(model: &HierarchyModel) -> String {
    let mut s = serde_json::to_string_pretty(&HierarchyDoc::from_model(model)).expect("plain data");
    s.push('\n');
    s
}
