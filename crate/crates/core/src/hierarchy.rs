//! Three-level hierarchies (goal, criteria, alternatives), synthesis of
//! final weights, and what-if add/delete actions with ranking-equilibrium
//! verdicts.
//!
//! An action is certified as leaving the ranking unchanged when one of
//! the following premises holds:
//!
//! * deleting an alternative from a single approximately consistent
//!   matrix;
//! * adding an alternative to a single matrix when both the old and the
//!   extended matrix are approximately consistent;
//! * deleting an alternative or criterion when every criterion ranks the
//!   alternatives identically (`K(W) = 1`) and, for alternative deletion,
//!   every alternative matrix is approximately consistent;
//! * adding an alternative or criterion when the rankings are identical
//!   across criteria both before and after.
//!
//! Outside those premises nothing is promised; the report carries the
//! possibility degrees instead.

use serde::{Deserialize, Serialize};

use crate::cell::Cell;
use crate::consistency::is_approx_consistent;
use crate::error::{Error, Result};
use crate::kendall::{kendall_w, pd_global, ReversalWeights};
use crate::par::{self, Execution};
use crate::pcm::PairwiseMatrix;
use crate::priorities::rank_alternatives;
use crate::report::{analyze_matrix, MatrixReport};

/// Tolerance on column sums of a weight table.
pub const STOCHASTIC_TOL: f64 = 1e-9;

/// Declared dependence between levels. Only the standard shape is
/// supported: alternatives depend on criteria, nothing depends on
/// elements of its own level.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Dependence {
    #[serde(default = "yes")]
    pub outer: bool,
    #[serde(default)]
    pub inner: bool,
}

fn yes() -> bool {
    true
}

impl Default for Dependence {
    fn default() -> Self {
        Dependence {
            outer: true,
            inner: false,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct HierarchyModel {
    goal: String,
    criteria_matrix: PairwiseMatrix,
    alternatives: Vec<String>,
    alt_matrices: Vec<PairwiseMatrix>,
    dependence: Dependence,
}

impl HierarchyModel {
    /// `alt_matrices[j]` compares the alternatives under criterion `j`.
    pub fn new(
        goal: impl Into<String>,
        criteria_matrix: PairwiseMatrix,
        alternatives: Vec<String>,
        alt_matrices: Vec<PairwiseMatrix>,
        dependence: Dependence,
    ) -> Result<Self> {
        let m = criteria_matrix.n();
        let n = alternatives.len();
        if !dependence.outer {
            return Err(Error::Hierarchy(
                "alternatives must be outer dependent on the criteria".into(),
            ));
        }
        if dependence.inner {
            return Err(Error::Hierarchy("inner dependence is not supported".into()));
        }
        if n < 2 {
            return Err(Error::Hierarchy(format!("need at least 2 alternatives, got {n}")));
        }
        if alt_matrices.len() != m {
            return Err(Error::Hierarchy(format!(
                "{m} criteria but {} alternative matrices",
                alt_matrices.len()
            )));
        }
        for (j, a) in alt_matrices.iter().enumerate() {
            if a.labels() != alternatives.as_slice() {
                return Err(Error::Hierarchy(format!(
                    "matrix for criterion {:?} does not list the alternatives {:?} in order",
                    criteria_matrix.labels()[j],
                    alternatives
                )));
            }
        }
        Ok(HierarchyModel {
            goal: goal.into(),
            criteria_matrix,
            alternatives,
            alt_matrices,
            dependence,
        })
    }

    /// Single-criterion model around one matrix.
    pub fn single(criterion: impl Into<String>, matrix: PairwiseMatrix) -> Result<Self> {
        let criterion = criterion.into();
        let alternatives = matrix.labels().to_vec();
        Self::new(
            criterion.clone(),
            PairwiseMatrix::unit(criterion),
            alternatives,
            vec![matrix],
            Dependence::default(),
        )
    }

    /// Model whose matrices are the consistent ratio matrices
    /// `w_i / w_j` of a weight table given as exact judgments.
    pub fn from_weight_cells(
        goal: impl Into<String>,
        criteria: Vec<String>,
        alternatives: Vec<String>,
        criteria_weights: &[Cell],
        alt_weights: &[Vec<Cell>],
    ) -> Result<Self> {
        let m = criteria.len();
        if criteria_weights.len() != m {
            return Err(Error::DimensionMismatch {
                expected: m,
                got: criteria_weights.len(),
            });
        }
        if alt_weights.len() != alternatives.len() {
            return Err(Error::DimensionMismatch {
                expected: alternatives.len(),
                got: alt_weights.len(),
            });
        }
        let ratio =
            |w: &[Cell]| -> Vec<Vec<Cell>> { w.iter().map(|wi| w.iter().map(|wj| wi.div(wj)).collect()).collect() };
        let criteria_matrix = PairwiseMatrix::validate_min(criteria, ratio(criteria_weights), 1)?;
        let mut alt_matrices = Vec::with_capacity(m);
        for j in 0..m {
            let col: Vec<Cell> = alt_weights
                .iter()
                .map(|r| {
                    r.get(j).copied().ok_or(Error::DimensionMismatch {
                        expected: m,
                        got: r.len(),
                    })
                })
                .collect::<Result<_>>()?;
            alt_matrices.push(PairwiseMatrix::validate(alternatives.clone(), ratio(&col))?);
        }
        Self::new(goal, criteria_matrix, alternatives, alt_matrices, Dependence::default())
    }

    pub fn goal(&self) -> &str {
        &self.goal
    }

    pub fn criteria(&self) -> &[String] {
        self.criteria_matrix.labels()
    }

    pub fn criteria_matrix(&self) -> &PairwiseMatrix {
        &self.criteria_matrix
    }

    pub fn alternatives(&self) -> &[String] {
        &self.alternatives
    }

    pub fn alt_matrices(&self) -> &[PairwiseMatrix] {
        &self.alt_matrices
    }

    pub fn dependence(&self) -> &Dependence {
        &self.dependence
    }

    pub fn alt_matrix(&self, criterion: &str) -> Option<&PairwiseMatrix> {
        self.criteria()
            .iter()
            .position(|c| c == criterion)
            .map(|j| &self.alt_matrices[j])
    }

    pub fn evaluate(&self) -> Result<Evaluation> {
        self.evaluate_with(None, Execution::default())
    }

    /// Full evaluation; the per-criterion matrices are analysed in
    /// parallel when `exec` allows it.
    pub fn evaluate_with(&self, nu: Option<&ReversalWeights>, exec: Execution) -> Result<Evaluation> {
        let criteria = analyze_matrix(format!("{} (criteria)", self.goal), &self.criteria_matrix)?;
        let named: Vec<(String, &PairwiseMatrix)> =
            self.criteria().iter().cloned().zip(self.alt_matrices.iter()).collect();
        let alternatives = par::map(exec, &named, |(name, m)| analyze_matrix(name.clone(), m))
            .into_iter()
            .collect::<Result<Vec<_>>>()?;

        let alt_weights: Vec<Vec<f64>> = (0..self.alternatives.len())
            .map(|i| alternatives.iter().map(|r| r.priorities.weights[i]).collect())
            .collect();
        let table = WeightTable::new(
            self.criteria().to_vec(),
            self.alternatives.clone(),
            criteria.priorities.weights.clone(),
            alt_weights,
        )?;
        let final_weights = synthesize(&table);
        let ranking = rank_alternatives(&final_weights, &self.alternatives)?;

        let pd_alt: Vec<f64> = alternatives.iter().map(|r| r.pd).collect();
        let pd_c = criteria.pd;
        let pd_w = 1.0 - kendall_w(table.alt_weights())?.k;
        let all_consistent = alternatives
            .iter()
            .all(|r| r.approximate_consistency.approximately_consistent);
        let nu = match nu {
            Some(w) => w.clone(),
            None => ReversalWeights::default_for(all_consistent, &pd_alt, pd_c, pd_w),
        };
        let global = pd_global(&pd_alt, pd_c, pd_w, &nu)?;
        Ok(Evaluation {
            goal: self.goal.clone(),
            criteria,
            alternatives,
            weight_table: table,
            final_weights,
            ranking,
            pd: PdSummary {
                alternatives: pd_alt,
                criteria: pd_c,
                weights: pd_w,
                global,
                nu,
            },
        })
    }

    pub fn delete_alternative(&self, k: usize) -> Result<Self> {
        let n = self.alternatives.len();
        if k >= n {
            return Err(Error::IndexOutOfRange { index: k, n });
        }
        if n < 3 {
            return Err(Error::Hierarchy("cannot drop below 2 alternatives".into()));
        }
        let alt_matrices = self
            .alt_matrices
            .iter()
            .map(|a| remove_index(a, k))
            .collect::<Result<Vec<_>>>()?;
        let mut alternatives = self.alternatives.clone();
        alternatives.remove(k);
        Self::new(
            self.goal.clone(),
            self.criteria_matrix.clone(),
            alternatives,
            alt_matrices,
            self.dependence.clone(),
        )
    }

    /// Appends an alternative; `judgments[j]` extends the matrix of
    /// criterion `j`.
    pub fn add_alternative(&self, label: &str, judgments: &[Extension]) -> Result<Self> {
        if self.alternatives.iter().any(|a| a == label) {
            return Err(Error::DuplicateLabel(label.to_string()));
        }
        if judgments.len() != self.alt_matrices.len() {
            return Err(Error::DimensionMismatch {
                expected: self.alt_matrices.len(),
                got: judgments.len(),
            });
        }
        let alt_matrices = self
            .alt_matrices
            .iter()
            .zip(judgments)
            .map(|(a, ext)| extend(a, label, ext, 2))
            .collect::<Result<Vec<_>>>()?;
        let mut alternatives = self.alternatives.clone();
        alternatives.push(label.to_string());
        Self::new(
            self.goal.clone(),
            self.criteria_matrix.clone(),
            alternatives,
            alt_matrices,
            self.dependence.clone(),
        )
    }

    pub fn delete_criterion(&self, j: usize) -> Result<Self> {
        let m = self.alt_matrices.len();
        if j >= m {
            return Err(Error::IndexOutOfRange { index: j, n: m });
        }
        if m < 2 {
            return Err(Error::Hierarchy("cannot drop below 1 criterion".into()));
        }
        let criteria_matrix = remove_index(&self.criteria_matrix, j)?;
        let mut alt_matrices = self.alt_matrices.clone();
        alt_matrices.remove(j);
        Self::new(
            self.goal.clone(),
            criteria_matrix,
            self.alternatives.clone(),
            alt_matrices,
            self.dependence.clone(),
        )
    }

    /// Appends a criterion with its goal-level judgments and the matrix
    /// comparing the alternatives under it.
    pub fn add_criterion(&self, label: &str, goal: &Extension, matrix: PairwiseMatrix) -> Result<Self> {
        if self.criteria().iter().any(|c| c == label) {
            return Err(Error::DuplicateLabel(label.to_string()));
        }
        let matrix = matrix.with_labels(self.alternatives.clone())?;
        let criteria_matrix = extend(&self.criteria_matrix, label, goal, 2)?;
        let mut alt_matrices = self.alt_matrices.clone();
        alt_matrices.push(matrix);
        Self::new(
            self.goal.clone(),
            criteria_matrix,
            self.alternatives.clone(),
            alt_matrices,
            self.dependence.clone(),
        )
    }

    pub fn apply(&self, action: &Action) -> Result<Self> {
        match action {
            Action::DeleteAlternative { alternative } => {
                self.delete_alternative(alternative.resolve(&self.alternatives)?)
            }
            Action::AddAlternative { label, judgments } => self.add_alternative(label, judgments),
            Action::DeleteCriterion { criterion } => self.delete_criterion(criterion.resolve(self.criteria())?),
            Action::AddCriterion { label, goal, matrix } => {
                let rows = matrix.iter().map(|r| r.to_vec()).collect();
                let m = PairwiseMatrix::validate(self.alternatives.clone(), rows)?;
                self.add_criterion(label, goal, m)
            }
        }
    }

    /// Evaluates an action without changing the model.
    pub fn what_if(&self, action: &Action) -> Result<WhatIfReport> {
        let before = self.evaluate()?;
        let after_model = self.apply(action)?;
        let after = after_model.evaluate()?;
        let basis = certify(self, &before, &after_model, &after, action);
        let survivors: Vec<&String> = after_model
            .alternatives
            .iter()
            .filter(|a| self.alternatives.contains(a))
            .collect();
        let restrict =
            |ranking: &[String]| -> Vec<String> { ranking.iter().filter(|a| survivors.contains(a)).cloned().collect() };
        let ranking_preserved = restrict(&before.ranking) == restrict(&after.ranking);
        Ok(WhatIfReport {
            action: action.describe(self),
            ranking_before: before.ranking,
            ranking_after: after.ranking,
            ranking_preserved,
            equilibrium: !matches!(basis, TheoremBasis::NoGuarantee { .. }),
            theorem_basis: basis,
            pd_summary: before.pd,
            pd_after: after.pd,
        })
    }

    /// What-if reports for every single-alternative and single-criterion
    /// deletion that the model allows.
    pub fn deletion_sweep(&self, exec: Execution) -> Result<Vec<WhatIfReport>> {
        let mut actions = Vec::new();
        if self.alternatives.len() >= 3 {
            actions.extend(self.alternatives.iter().map(|a| Action::DeleteAlternative {
                alternative: Selector::Label(a.clone()),
            }));
        }
        if self.criteria().len() >= 2 {
            actions.extend(self.criteria().iter().map(|c| Action::DeleteCriterion {
                criterion: Selector::Label(c.clone()),
            }));
        }
        par::map(exec, &actions, |a| self.what_if(a)).into_iter().collect()
    }
}

fn remove_index(m: &PairwiseMatrix, k: usize) -> Result<PairwiseMatrix> {
    let n = m.n();
    let keep: Vec<usize> = (0..n).filter(|&i| i != k).collect();
    let rows = keep
        .iter()
        .map(|&i| keep.iter().map(|&j| *m.cell(i, j)).collect())
        .collect();
    let labels = keep.iter().map(|&i| m.labels()[i].clone()).collect();
    PairwiseMatrix::validate_min(labels, rows, 1)
}

fn extend(m: &PairwiseMatrix, label: &str, ext: &Extension, min: usize) -> Result<PairwiseMatrix> {
    let n = m.n();
    if ext.row.len() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            got: ext.row.len(),
        });
    }
    if ext.column.len() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            got: ext.column.len(),
        });
    }
    let mut rows = m.rows();
    for (r, c) in rows.iter_mut().zip(&ext.column) {
        r.push(*c);
    }
    let mut last = ext.row.clone();
    last.push(Cell::ONE);
    rows.push(last);
    let mut labels = m.labels().to_vec();
    labels.push(label.to_string());
    PairwiseMatrix::validate_min(labels, rows, min)
}

fn concordant(table: &WeightTable) -> bool {
    kendall_w(table.alt_weights()).map(|c| c.k == 1.0).unwrap_or(true)
}

fn certify(
    model: &HierarchyModel,
    before: &Evaluation,
    after_model: &HierarchyModel,
    after: &Evaluation,
    action: &Action,
) -> TheoremBasis {
    let single = model.alt_matrices.len() == 1;
    let all_ac = |m: &HierarchyModel| m.alt_matrices.iter().all(is_approx_consistent);
    let none = |reason: &str| TheoremBasis::NoGuarantee {
        reason: reason.to_string(),
    };
    match action {
        Action::DeleteAlternative { .. } => {
            if single && all_ac(model) {
                TheoremBasis::ApproxConsistentDeletion
            } else if all_ac(model) && concordant(&before.weight_table) {
                TheoremBasis::ConcordantDeletion
            } else if single {
                none("the comparison matrix is not approximately consistent")
            } else {
                none("criteria rank the alternatives differently or a matrix is not approximately consistent")
            }
        }
        Action::AddAlternative { .. } => {
            if single {
                if !all_ac(model) {
                    none("the original matrix is not approximately consistent")
                } else if !all_ac(after_model) {
                    none("the extended matrix is not approximately consistent")
                } else {
                    TheoremBasis::ApproxConsistentAddition
                }
            } else if all_ac(model)
                && all_ac(after_model)
                && concordant(&before.weight_table)
                && concordant(&after.weight_table)
            {
                TheoremBasis::ConcordantAddition
            } else {
                none("rankings are not identical across criteria before and after the addition")
            }
        }
        Action::DeleteCriterion { .. } => {
            if concordant(&before.weight_table) {
                TheoremBasis::ConcordantDeletion
            } else {
                none("criteria rank the alternatives differently")
            }
        }
        Action::AddCriterion { .. } => {
            if concordant(&before.weight_table) && concordant(&after.weight_table) {
                TheoremBasis::ConcordantAddition
            } else {
                none("the new criterion does not share the common ranking")
            }
        }
    }
}

/// Row/column judgments that extend a matrix by one element.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Extension {
    /// `a_{new,j}` for each existing element `j`.
    pub row: Vec<Cell>,
    /// `a_{j,new}` for each existing element `j`.
    pub column: Vec<Cell>,
}

/// An element addressed by label or by 1-based position.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Selector {
    Position(usize),
    Label(String),
}

impl Selector {
    pub fn resolve(&self, labels: &[String]) -> Result<usize> {
        match self {
            Selector::Position(p) if (1..=labels.len()).contains(p) => Ok(p - 1),
            Selector::Position(p) => Err(Error::IndexOutOfRange {
                index: *p,
                n: labels.len(),
            }),
            Selector::Label(l) => labels
                .iter()
                .position(|x| x == l)
                .ok_or_else(|| Error::UnknownLabel(l.clone())),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "action", rename_all = "snake_case")]
pub enum Action {
    DeleteAlternative {
        alternative: Selector,
    },
    AddAlternative {
        label: String,
        /// One extension per criterion, in criteria order.
        judgments: Vec<Extension>,
    },
    DeleteCriterion {
        criterion: Selector,
    },
    AddCriterion {
        label: String,
        /// Judgments against the existing criteria.
        goal: Extension,
        /// Alternatives compared under the new criterion.
        matrix: Vec<Vec<Cell>>,
    },
}

impl Action {
    pub fn describe(&self, model: &HierarchyModel) -> String {
        let name = |s: &Selector, labels: &[String]| match s.resolve(labels) {
            Ok(i) => labels[i].clone(),
            Err(_) => format!("{s:?}"),
        };
        match self {
            Action::DeleteAlternative { alternative } => {
                format!("delete alternative {}", name(alternative, model.alternatives()))
            }
            Action::AddAlternative { label, .. } => format!("add alternative {label}"),
            Action::DeleteCriterion { criterion } => {
                format!("delete criterion {}", name(criterion, model.criteria()))
            }
            Action::AddCriterion { label, .. } => format!("add criterion {label}"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum TheoremBasis {
    /// Deleting from an approximately consistent single matrix.
    ApproxConsistentDeletion,
    /// Adding to a single matrix that stays approximately consistent.
    ApproxConsistentAddition,
    /// Deleting while all criteria share one ranking.
    ConcordantDeletion,
    /// Adding while all criteria share one ranking before and after.
    ConcordantAddition,
    NoGuarantee {
        reason: String,
    },
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PdSummary {
    /// Per criterion's alternative matrix.
    pub alternatives: Vec<f64>,
    pub criteria: f64,
    pub weights: f64,
    pub global: f64,
    pub nu: ReversalWeights,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct WhatIfReport {
    pub action: String,
    pub ranking_before: Vec<String>,
    pub ranking_after: Vec<String>,
    /// Survivors keep their relative order.
    pub ranking_preserved: bool,
    /// The unchanged ranking is guaranteed, not merely observed.
    pub equilibrium: bool,
    pub theorem_basis: TheoremBasis,
    /// Possibility degrees of the model before the action.
    pub pd_summary: PdSummary,
    pub pd_after: PdSummary,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Evaluation {
    pub goal: String,
    pub criteria: MatrixReport,
    pub alternatives: Vec<MatrixReport>,
    pub weight_table: WeightTable,
    pub final_weights: Vec<f64>,
    pub ranking: Vec<String>,
    pub pd: PdSummary,
}

/// Criteria weights and the column-stochastic alternative-by-criterion
/// weight block.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct WeightTable {
    criteria: Vec<String>,
    alternatives: Vec<String>,
    criteria_weights: Vec<f64>,
    /// `n` rows (alternatives) by `m` columns (criteria).
    alt_weights: Vec<Vec<f64>>,
}

impl WeightTable {
    pub fn new(
        criteria: Vec<String>,
        alternatives: Vec<String>,
        criteria_weights: Vec<f64>,
        alt_weights: Vec<Vec<f64>>,
    ) -> Result<Self> {
        let (n, m) = (alternatives.len(), criteria.len());
        if criteria_weights.len() != m {
            return Err(Error::DimensionMismatch {
                expected: m,
                got: criteria_weights.len(),
            });
        }
        if alt_weights.len() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                got: alt_weights.len(),
            });
        }
        if let Some(r) = alt_weights.iter().find(|r| r.len() != m) {
            return Err(Error::DimensionMismatch {
                expected: m,
                got: r.len(),
            });
        }
        let check = |sum: f64| {
            if (sum - 1.0).abs() > STOCHASTIC_TOL {
                Err(Error::WeightSum(sum))
            } else {
                Ok(())
            }
        };
        for &w in criteria_weights.iter().chain(alt_weights.iter().flatten()) {
            if !(0.0..=1.0).contains(&w) {
                return Err(Error::WeightRange(w));
            }
        }
        check(criteria_weights.iter().sum())?;
        for j in 0..m {
            check(alt_weights.iter().map(|r| r[j]).sum())?;
        }
        Ok(WeightTable {
            criteria,
            alternatives,
            criteria_weights,
            alt_weights,
        })
    }

    pub fn criteria(&self) -> &[String] {
        &self.criteria
    }

    pub fn alternatives(&self) -> &[String] {
        &self.alternatives
    }

    pub fn criteria_weights(&self) -> &[f64] {
        &self.criteria_weights
    }

    pub fn alt_weights(&self) -> &[Vec<f64>] {
        &self.alt_weights
    }

    /// Weights of the alternatives under criterion `j`.
    pub fn column(&self, j: usize) -> Vec<f64> {
        self.alt_weights.iter().map(|r| r[j]).collect()
    }
}

/// `omega_i = sum_j w_j * w_ij`.
pub fn synthesize(table: &WeightTable) -> Vec<f64> {
    table
        .alt_weights
        .iter()
        .map(|row| row.iter().zip(&table.criteria_weights).map(|(a, c)| a * c).sum())
        .collect()
}
