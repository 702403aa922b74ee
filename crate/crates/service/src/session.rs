use ahp_core::hierarchy::Action;
use ahp_core::report::Provenance;
use ahp_core::{analyze_matrix, AnalysisReport, Execution, MatrixReport, ReversalWeights, WhatIfReport};
use chrono::{DateTime, Utc};
use serde::{Deserialize, Serialize};

use crate::draft::{DraftModel, PairView};
use crate::error::ApiError;

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Session {
    pub id: String,
    pub created: DateTime<Utc>,
    pub updated: DateTime<Utc>,
    pub revision: u64,
    pub model: DraftModel,
}

impl Session {
    pub fn new(id: String, model: DraftModel) -> Self {
        let now = Utc::now();
        Session {
            id,
            created: now,
            updated: now,
            revision: 1,
            model,
        }
    }

    pub(crate) fn bump(&mut self) {
        self.revision += 1;
        self.updated = Utc::now();
    }

    pub fn view(&self) -> SessionView {
        SessionView {
            id: self.id.clone(),
            revision: self.revision,
            created: self.created,
            updated: self.updated,
            goal: self.model.goal.clone(),
            criteria: self.model.criteria.labels.clone(),
            alternatives: self.model.alternatives.clone(),
            dependence: self.model.dependence.clone(),
            matrices: self
                .model
                .matrices()
                .into_iter()
                .map(|(name, m)| MatrixView {
                    name: name.to_string(),
                    labels: m.labels.clone(),
                    entries: m.entries.clone(),
                    complete: m.is_complete(),
                    completion: m.completion(),
                    pairs: m.pairs(),
                })
                .collect(),
        }
    }

    /// Analysis of every complete matrix, plus the full hierarchy
    /// evaluation once nothing is missing.
    pub fn report(&self, nu: Option<&ReversalWeights>) -> Result<SessionReport, ApiError> {
        let provenance = Provenance {
            tool_version: env!("CARGO_PKG_VERSION").to_string(),
            inputs: Vec::new(),
        };
        let incomplete: Vec<Completion> = self
            .model
            .matrices()
            .into_iter()
            .filter(|(_, m)| !m.is_complete())
            .map(|(name, m)| Completion {
                matrix: name.to_string(),
                completion: m.completion(),
            })
            .collect();
        let report = if incomplete.is_empty() {
            let model = self.model.to_model()?;
            AnalysisReport::for_hierarchy(&model, nu, Execution::default(), provenance)?
        } else {
            let mut matrices: Vec<MatrixReport> = Vec::new();
            for (name, m) in self.model.matrices() {
                if let Some(pm) = m.to_matrix() {
                    matrices.push(analyze_matrix(name, &pm)?);
                }
            }
            AnalysisReport {
                schema_version: ahp_core::report::SCHEMA_VERSION,
                matrices,
                hierarchy: None,
                provenance,
            }
        };
        Ok(SessionReport {
            revision: self.revision,
            complete: incomplete.is_empty(),
            incomplete,
            report,
        })
    }

    pub fn what_if(&self, action: &Action) -> Result<WhatIfReport, ApiError> {
        Ok(self.model.to_model()?.what_if(action)?)
    }

    /// Applies the action to the complete model and returns the report
    /// computed before applying it.
    pub fn commit(&mut self, action: &Action) -> Result<WhatIfReport, ApiError> {
        let model = self.model.to_model()?;
        let report = model.what_if(action)?;
        let next = model.apply(action)?;
        self.model = DraftModel::from_model(&next)?;
        self.bump();
        Ok(report)
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct SessionView {
    pub id: String,
    pub revision: u64,
    pub created: DateTime<Utc>,
    pub updated: DateTime<Utc>,
    pub goal: String,
    pub criteria: Vec<String>,
    pub alternatives: Vec<String>,
    pub dependence: ahp_core::Dependence,
    pub matrices: Vec<MatrixView>,
}

#[derive(Clone, Debug, Serialize)]
pub struct MatrixView {
    /// `"criteria"` or a criterion label.
    pub name: String,
    pub labels: Vec<String>,
    pub entries: Vec<Vec<Option<ahp_core::Cell>>>,
    pub complete: bool,
    /// Percent of off-diagonal cells entered.
    pub completion: f64,
    pub pairs: Vec<PairView>,
}

#[derive(Clone, Debug, Serialize)]
pub struct Completion {
    pub matrix: String,
    pub completion: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct SessionReport {
    pub revision: u64,
    pub complete: bool,
    pub incomplete: Vec<Completion>,
    pub report: AnalysisReport,
}
