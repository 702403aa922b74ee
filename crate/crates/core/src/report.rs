//! Analysis records produced for single matrices and whole hierarchies.

use serde::Serialize;

use crate::consistency::{approx_consistency, is_consistent, ApproxConsistency, CONSISTENCY_TOL};
use crate::error::Result;
use crate::hierarchy::{Evaluation, HierarchyModel};
use crate::kendall::{kendall_single, ReversalWeights, SingleConcordance};
use crate::par::{self, Execution};
use crate::pcm::PairwiseMatrix;
use crate::priorities::{principal_eigen, rank_alternatives, PowerIteration, PriorityVector};

/// Version of the JSON report layout.
pub const SCHEMA_VERSION: u32 = 1;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MatrixReport {
    pub name: String,
    pub labels: Vec<String>,
    pub n: usize,
    /// `None` for a `1x1` matrix.
    pub sbd: Option<f64>,
    pub reciprocal: bool,
    pub approximate_consistency: ApproxConsistency,
    pub consistent: bool,
    pub priorities: PriorityVector,
    pub ranking: Vec<String>,
    pub kendall: Option<SingleConcordance>,
    /// Possibility degree of ranking reversal, `1 - K`.
    pub pd: f64,
}

pub fn analyze_matrix(name: impl Into<String>, matrix: &PairwiseMatrix) -> Result<MatrixReport> {
    let n = matrix.n();
    let priorities = principal_eigen(matrix, PowerIteration::default())?;
    let ranking = rank_alternatives(&priorities.weights, matrix.labels())?;
    let (sbd, kendall) = if n >= 2 {
        (Some(matrix.sbd()?), Some(kendall_single(matrix)?))
    } else {
        (None, None)
    };
    let pd = kendall.as_ref().map_or(0.0, |k| 1.0 - k.k);
    Ok(MatrixReport {
        name: name.into(),
        labels: matrix.labels().to_vec(),
        n,
        sbd,
        reciprocal: matrix.is_reciprocal(),
        approximate_consistency: approx_consistency(matrix),
        consistent: is_consistent(matrix, CONSISTENCY_TOL),
        priorities,
        ranking,
        kendall,
        pd,
    })
}

/// Analyses many independent matrices, in parallel when available.
pub fn analyze_batch(matrices: &[(String, PairwiseMatrix)], exec: Execution) -> Vec<Result<MatrixReport>> {
    par::map(exec, matrices, |(name, m)| analyze_matrix(name.clone(), m))
}

#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct Provenance {
    pub tool_version: String,
    pub inputs: Vec<InputDigest>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct InputDigest {
    pub name: String,
    pub sha256: String,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct AnalysisReport {
    pub schema_version: u32,
    pub matrices: Vec<MatrixReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub hierarchy: Option<Evaluation>,
    pub provenance: Provenance,
}

impl AnalysisReport {
    pub fn for_matrix(report: MatrixReport, provenance: Provenance) -> Self {
        AnalysisReport {
            schema_version: SCHEMA_VERSION,
            matrices: vec![report],
            hierarchy: None,
            provenance,
        }
    }

    /// Full evaluation of a hierarchy; `nu` overrides the default
    /// reversal mixing weights.
    pub fn for_hierarchy(
        model: &HierarchyModel,
        nu: Option<&ReversalWeights>,
        exec: Execution,
        provenance: Provenance,
    ) -> Result<Self> {
        let eval = model.evaluate_with(nu, exec)?;
        let mut matrices = vec![eval.criteria.clone()];
        matrices.extend(eval.alternatives.iter().cloned());
        Ok(AnalysisReport {
            schema_version: SCHEMA_VERSION,
            matrices,
            hierarchy: Some(eval),
            provenance,
        })
    }
}
