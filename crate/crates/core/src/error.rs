use std::fmt;

use serde::Serialize;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CellParseError {
    #[error("empty cell")]
    Empty,
    #[error("not a number: {0:?}")]
    Syntax(String),
    #[error("zero denominator in {0:?}")]
    ZeroDenominator(String),
    #[error("judgments must be positive, got {0}")]
    NonPositive(String),
}

/// Which admissibility rule a cell pair breaks.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "rule", rename_all = "snake_case")]
pub enum ViolationKind {
    NonPositive {
        value: f64,
    },
    UnitDiagonal {
        value: f64,
    },
    /// `a_ij * a_ji > 1`.
    ProductBound {
        theta: f64,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Violation {
    pub row: usize,
    pub col: usize,
    #[serde(flatten)]
    pub kind: ViolationKind,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (i, j) = (self.row + 1, self.col + 1);
        match self.kind {
            ViolationKind::NonPositive { value } => {
                write!(f, "({i},{j}): entry {value:.4} is not positive")
            }
            ViolationKind::UnitDiagonal { value } => {
                write!(f, "({i},{j}): diagonal entry {value:.4} is not 1")
            }
            ViolationKind::ProductBound { theta } => {
                write!(f, "({i},{j}): a_ij*a_ji = {theta:.4} exceeds 1")
            }
        }
    }
}

/// Every rule violation found in a candidate matrix.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AdmissibilityReport {
    pub violations: Vec<Violation>,
}

impl fmt::Display for AdmissibilityReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} violation(s)", self.violations.len())?;
        for v in &self.violations {
            write!(f, "; {v}")?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("matrix is not square: row {row} has {len} entries, expected {expected}")]
    NotSquare { row: usize, len: usize, expected: usize },
    #[error("matrix order {n} is below the minimum of {min}")]
    TooSmall { n: usize, min: usize },
    #[error("expected {expected} labels, got {got}")]
    LabelCount { expected: usize, got: usize },
    #[error("duplicate label {0:?}")]
    DuplicateLabel(String),
    #[error("inadmissible matrix: {0}")]
    Inadmissible(AdmissibilityReport),
    #[error("invalid interval matrix at ({row},{col}): {reason}")]
    InvalidInterval {
        row: usize,
        col: usize,
        reason: &'static str,
    },
    #[error("homogeneity bound rho must be >= 1, got {0}")]
    InvalidRho(f64),
    #[error("cell ({}, {}): {source}", row + 1, col + 1)]
    Cell {
        row: usize,
        col: usize,
        source: CellParseError,
    },
    #[error("empty input")]
    Empty,
    #[error("index {index} out of range for order {n}")]
    IndexOutOfRange { index: usize, n: usize },
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("matrix is not approximately consistent: {0}")]
    NotApproximatelyConsistent(String),
    #[error("zero priority weight at index {0}")]
    ZeroWeight(usize),
    #[error("weights must sum to 1 (got {0})")]
    WeightSum(f64),
    #[error("weight {0} outside [0, 1]")]
    WeightRange(f64),
    #[error("invalid hierarchy: {0}")]
    Hierarchy(String),
    #[error("unknown label {0:?}")]
    UnknownLabel(String),
    #[error("invalid power-iteration settings: {0}")]
    IterationSettings(&'static str),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
