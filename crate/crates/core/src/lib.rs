//! Analytic hierarchy process without the reciprocal axiom.
//!
//! Comparison matrices only need `0 < a_ij * a_ji <= 1`. The crate
//! measures how far a matrix departs from reciprocity, detects
//! approximate consistency, derives eigenvector priorities, synthesizes
//! three-level hierarchies and estimates how likely an add/delete action
//! is to reverse the ranking, via Kendall's coefficient of concordance.
//!
//! ```
//! use ahp_core::{analyze_matrix, PairwiseMatrix};
//!
//! let m = PairwiseMatrix::from_text_rows(
//!     vec!["a".into(), "b".into()],
//!     &[&["1", "2"], &["1/3", "1"]],
//! )
//! .unwrap();
//! assert!((m.sbd().unwrap() - 2.0 / 3.0).abs() < 1e-12);
//! let report = analyze_matrix("m", &m).unwrap();
//! assert_eq!(report.ranking, ["a", "b"]);
//! ```

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cell;
pub mod consistency;
pub mod error;
pub mod hierarchy;
pub mod io;
pub mod kendall;
pub mod par;
pub mod pcm;
pub mod priorities;
pub mod report;

#[cfg(test)]
mod fixtures;

pub use cell::Cell;
pub use consistency::{
    apply_permutation, approx_consistency, canonical_permutation, induced_ranking, is_approx_consistent, is_consistent,
    rank_vector, ApproxConsistency, Axis, Permutation, RankVector,
};
pub use error::{AdmissibilityReport, CellParseError, Error, Result, Violation, ViolationKind};
pub use hierarchy::{
    synthesize, Action, Dependence, Evaluation, Extension, HierarchyModel, PdSummary, Selector, TheoremBasis,
    WeightTable, WhatIfReport,
};
pub use kendall::{
    kendall_single, kendall_w, pd_global, pd_single, rank_matrix, Concordance, Orientation, RankMatrix,
    ReversalWeights, SingleConcordance,
};
pub use par::Execution;
pub use pcm::{HomogeneityVerdict, IntervalMatrix, PairwiseMatrix, ThetaMatrix};
pub use priorities::{principal_eigen, rank_alternatives, PowerIteration, PriorityVector};
pub use report::{analyze_batch, analyze_matrix, AnalysisReport, InputDigest, MatrixReport, Provenance};
