//! Hierarchies under construction. Every off-diagonal cell starts unset
//! and is entered independently of its mirror.

use ahp_core::hierarchy::{Dependence, HierarchyModel, Selector};
use ahp_core::pcm::ADMISSIBILITY_TOL;
use ahp_core::{Cell, PairwiseMatrix};
use serde::{Deserialize, Serialize};

use crate::error::ApiError;

/// Name under which the criteria matrix is addressed.
pub const CRITERIA: &str = "criteria";

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DraftMatrix {
    pub labels: Vec<String>,
    pub entries: Vec<Vec<Option<Cell>>>,
}

impl DraftMatrix {
    pub fn empty(labels: Vec<String>) -> Self {
        let n = labels.len();
        let entries = (0..n)
            .map(|i| (0..n).map(|j| (i == j).then_some(Cell::ONE)).collect())
            .collect();
        DraftMatrix { labels, entries }
    }

    pub fn from_matrix(m: &PairwiseMatrix) -> Self {
        DraftMatrix {
            labels: m.labels().to_vec(),
            entries: m
                .rows()
                .into_iter()
                .map(|r| r.into_iter().map(Some).collect())
                .collect(),
        }
    }

    pub fn n(&self) -> usize {
        self.labels.len()
    }

    /// Share of off-diagonal cells entered, in percent.
    pub fn completion(&self) -> f64 {
        let n = self.n();
        if n < 2 {
            return 100.0;
        }
        let filled = self.entries.iter().flatten().filter(|c| c.is_some()).count() - n;
        100.0 * filled as f64 / (n * (n - 1)) as f64
    }

    pub fn is_complete(&self) -> bool {
        self.entries.iter().flatten().all(Option::is_some)
    }

    pub fn to_matrix(&self) -> Option<PairwiseMatrix> {
        if !self.is_complete() {
            return None;
        }
        if self.n() == 1 {
            return Some(PairwiseMatrix::unit(self.labels[0].clone()));
        }
        let rows = self
            .entries
            .iter()
            .map(|r| r.iter().map(|c| c.unwrap()).collect())
            .collect();
        PairwiseMatrix::validate(self.labels.clone(), rows).ok()
    }

    /// Sets `a_ij` alone. Rejects a value whose product with an entered
    /// mirror exceeds 1.
    pub fn set(&mut self, name: &str, i: usize, j: usize, value: Option<Cell>) -> Result<(), ApiError> {
        if i == j {
            return match value {
                Some(v) if (v.value() - 1.0).abs() <= ADMISSIBILITY_TOL => Ok(()),
                _ => Err(ApiError::unprocessable(
                    "unit_diagonal",
                    "diagonal judgments are fixed at 1",
                )),
            };
        }
        if let (Some(v), Some(mirror)) = (value, self.entries[j][i]) {
            let theta = v.mul(&mirror);
            if theta.value() > 1.0 + ADMISSIBILITY_TOL {
                return Err(ApiError::product_bound(name, &self.labels, i, j, v, mirror, theta));
            }
        }
        self.entries[i][j] = value;
        Ok(())
    }

    pub fn pairs(&self) -> Vec<PairView> {
        let n = self.n();
        let mut out = Vec::with_capacity(n * n.saturating_sub(1) / 2);
        for i in 0..n {
            for j in i + 1..n {
                let (a_ij, a_ji) = (self.entries[i][j], self.entries[j][i]);
                let theta = a_ij.zip(a_ji).map(|(a, b)| a.mul(&b));
                out.push(PairView {
                    i: i + 1,
                    j: j + 1,
                    row: self.labels[i].clone(),
                    col: self.labels[j].clone(),
                    a_ij,
                    a_ji,
                    theta,
                    mirror_theta: theta.map(|t| t.recip()),
                    reciprocal: theta.map(|t| t == Cell::ONE),
                });
            }
        }
        out
    }
}

/// Both orientations of one pair, with the live product and its mirror
/// image.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PairView {
    pub i: usize,
    pub j: usize,
    pub row: String,
    pub col: String,
    pub a_ij: Option<Cell>,
    pub a_ji: Option<Cell>,
    pub theta: Option<Cell>,
    pub mirror_theta: Option<Cell>,
    pub reciprocal: Option<bool>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DraftModel {
    pub goal: String,
    pub criteria: DraftMatrix,
    pub alternatives: Vec<String>,
    /// One per criterion, in criteria order.
    pub alt_matrices: Vec<DraftMatrix>,
    #[serde(default)]
    pub dependence: Dependence,
}

impl DraftModel {
    pub fn empty(goal: String, criteria: Vec<String>, alternatives: Vec<String>) -> Result<Self, ApiError> {
        check_labels("criteria", &criteria, 1)?;
        check_labels("alternatives", &alternatives, 2)?;
        if criteria.iter().any(|c| c == CRITERIA) {
            return Err(ApiError::unprocessable(
                "reserved_label",
                format!("{CRITERIA:?} names the criteria matrix and cannot be a criterion"),
            ));
        }
        Ok(DraftModel {
            goal,
            alt_matrices: criteria
                .iter()
                .map(|_| DraftMatrix::empty(alternatives.clone()))
                .collect(),
            criteria: DraftMatrix::empty(criteria),
            alternatives,
            dependence: Dependence::default(),
        })
    }

    pub fn from_model(model: &HierarchyModel) -> Result<Self, ApiError> {
        if model.criteria().iter().any(|c| c == CRITERIA) {
            return Err(ApiError::unprocessable(
                "reserved_label",
                format!("{CRITERIA:?} names the criteria matrix and cannot be a criterion"),
            ));
        }
        Ok(DraftModel {
            goal: model.goal().to_string(),
            criteria: DraftMatrix::from_matrix(model.criteria_matrix()),
            alternatives: model.alternatives().to_vec(),
            alt_matrices: model.alt_matrices().iter().map(DraftMatrix::from_matrix).collect(),
            dependence: model.dependence().clone(),
        })
    }

    /// `(name, matrix)` for the criteria matrix followed by each
    /// criterion's alternative matrix.
    pub fn matrices(&self) -> Vec<(&str, &DraftMatrix)> {
        std::iter::once((CRITERIA, &self.criteria))
            .chain(self.criteria.labels.iter().map(String::as_str).zip(&self.alt_matrices))
            .collect()
    }

    pub fn matrix_mut(&mut self, name: &str) -> Result<&mut DraftMatrix, ApiError> {
        if name == CRITERIA {
            return Ok(&mut self.criteria);
        }
        match self.criteria.labels.iter().position(|c| c == name) {
            Some(k) => Ok(&mut self.alt_matrices[k]),
            None => Err(ApiError::unprocessable(
                "unknown_matrix",
                format!("no matrix named {name:?}"),
            )),
        }
    }

    pub fn set_judgment(
        &mut self,
        name: &str,
        i: &Selector,
        j: &Selector,
        value: Option<Cell>,
    ) -> Result<(), ApiError> {
        let m = self.matrix_mut(name)?;
        let i = i.resolve(&m.labels).map_err(ApiError::from)?;
        let j = j.resolve(&m.labels).map_err(ApiError::from)?;
        m.set(name, i, j, value)
    }

    pub fn is_complete(&self) -> bool {
        self.matrices().iter().all(|(_, m)| m.is_complete())
    }

    pub fn to_model(&self) -> Result<HierarchyModel, ApiError> {
        let incomplete: Vec<&str> = self
            .matrices()
            .into_iter()
            .filter(|(_, m)| !m.is_complete())
            .map(|(name, _)| name)
            .collect();
        if !incomplete.is_empty() {
            return Err(ApiError::unprocessable(
                "incomplete",
                format!("matrices with unset judgments: {}", incomplete.join(", ")),
            ));
        }
        let criteria = self
            .criteria
            .to_matrix()
            .ok_or_else(|| ApiError::internal("criteria matrix invalid"))?;
        let alts = self
            .alt_matrices
            .iter()
            .map(|m| {
                m.to_matrix()
                    .ok_or_else(|| ApiError::internal("alternative matrix invalid"))
            })
            .collect::<Result<Vec<_>, _>>()?;
        HierarchyModel::new(
            self.goal.clone(),
            criteria,
            self.alternatives.clone(),
            alts,
            self.dependence.clone(),
        )
        .map_err(ApiError::from)
    }
}

fn check_labels(what: &str, labels: &[String], min: usize) -> Result<(), ApiError> {
    if labels.len() < min {
        return Err(ApiError::unprocessable(
            "too_small",
            format!("need at least {min} {what}"),
        ));
    }
    let mut seen = std::collections::HashSet::new();
    if let Some(dup) = labels.iter().find(|l| !seen.insert(l.as_str())) {
        return Err(ApiError::unprocessable(
            "duplicate_label",
            format!("duplicate label {dup:?}"),
        ));
    }
    Ok(())
}
