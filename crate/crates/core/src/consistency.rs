//! Rank vectors, induced rankings and the two consistency notions.
//!
//! Ties are always broken by the "first method": of two equal entries the
//! one with the smaller index receives the smaller rank, so a rank vector
//! is always a permutation of `1..=n`.

use std::cmp::Ordering;
use std::fmt;

use serde::Serialize;

use crate::cell::Cell;
use crate::error::{Error, Result};
use crate::pcm::PairwiseMatrix;

/// Relative tolerance for the exact-consistency triple test.
pub const CONSISTENCY_TOL: f64 = 1e-9;

/// Ranks `1..=n`, rank `n` for the largest value.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(transparent)]
pub struct RankVector(Vec<usize>);

impl RankVector {
    pub fn ranks(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Indices ordered from rank `n` down to rank 1.
    pub fn descending_order(&self) -> Vec<usize> {
        let mut order = vec![0; self.0.len()];
        for (i, &r) in self.0.iter().enumerate() {
            order[self.0.len() - r] = i;
        }
        order
    }

    pub fn into_inner(self) -> Vec<usize> {
        self.0
    }
}

/// Ranks by an arbitrary comparator with first-method tie breaking.
pub fn rank_by<F>(len: usize, mut cmp: F) -> Result<RankVector>
where
    F: FnMut(usize, usize) -> Ordering,
{
    if len == 0 {
        return Err(Error::Empty);
    }
    let mut order: Vec<usize> = (0..len).collect();
    // Stable sort keeps earlier indices first among equals.
    order.sort_by(|&a, &b| cmp(a, b));
    let mut ranks = vec![0; len];
    for (pos, &i) in order.iter().enumerate() {
        ranks[i] = pos + 1;
    }
    Ok(RankVector(ranks))
}

pub fn rank_vector(values: &[f64]) -> Result<RankVector> {
    rank_by(values.len(), |a, b| values[a].total_cmp(&values[b]))
}

pub fn rank_cells(cells: &[Cell]) -> Result<RankVector> {
    rank_by(cells.len(), |a, b| cells[a].cmp_value(&cells[b]))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Axis {
    Row,
    Column,
}

/// One row or column of a matrix, 0-based.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Line {
    pub axis: Axis,
    pub index: usize,
}

impl fmt::Display for Line {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = match self.axis {
            Axis::Row => "row",
            Axis::Column => "column",
        };
        write!(f, "{name} {}", self.index + 1)
    }
}

/// Ranking of the alternatives read off one row or column.
///
/// A column `j` ranks `x_i` above `x_k` when `a_ij > a_kj`. A row `i`
/// ranks `x_j` above `x_k` when `a_ij < a_ik`, since a large `a_ij` means
/// `x_i` dominates `x_j`.
pub fn induced_ranking(matrix: &PairwiseMatrix, axis: Axis, index: usize) -> Result<RankVector> {
    let n = matrix.n();
    if index >= n {
        return Err(Error::IndexOutOfRange { index, n });
    }
    match axis {
        Axis::Column => {
            let col = matrix.column_cells(index);
            rank_cells(&col)
        }
        Axis::Row => {
            let row = matrix.row_cells(index);
            rank_by(n, |a, b| row[b].cmp_value(&row[a]))
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Disagreement {
    pub first: Line,
    pub second: Line,
    pub first_ranking: RankVector,
    pub second_ranking: RankVector,
}

impl fmt::Display for Disagreement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} ranks {:?} but {} ranks {:?}",
            self.first,
            self.first_ranking.ranks(),
            self.second,
            self.second_ranking.ranks()
        )
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ApproxConsistency {
    pub approximately_consistent: bool,
    /// Ranking induced by the first column.
    pub ranking: RankVector,
    pub witness: Option<Disagreement>,
}

/// All `2n` row and column rankings must coincide.
pub fn approx_consistency(matrix: &PairwiseMatrix) -> ApproxConsistency {
    let n = matrix.n();
    let first = Line {
        axis: Axis::Column,
        index: 0,
    };
    let reference = induced_ranking(matrix, Axis::Column, 0).expect("n >= 1");
    let lines = (1..n)
        .map(|index| Line {
            axis: Axis::Column,
            index,
        })
        .chain((0..n).map(|index| Line { axis: Axis::Row, index }));
    for line in lines {
        let r = induced_ranking(matrix, line.axis, line.index).expect("index < n");
        if r != reference {
            return ApproxConsistency {
                approximately_consistent: false,
                ranking: reference.clone(),
                witness: Some(Disagreement {
                    first,
                    second: line,
                    first_ranking: reference,
                    second_ranking: r,
                }),
            };
        }
    }
    ApproxConsistency {
        approximately_consistent: true,
        ranking: reference,
        witness: None,
    }
}

pub fn is_approx_consistent(matrix: &PairwiseMatrix) -> bool {
    approx_consistency(matrix).approximately_consistent
}

/// `|a_ij * a_jk - a_ik| <= tol * a_ik` for every triple.
pub fn is_consistent(matrix: &PairwiseMatrix, tol: f64) -> bool {
    let n = matrix.n();
    (0..n).all(|i| {
        (0..n).all(|j| {
            (0..n).all(|k| {
                let ik = matrix.get(i, k);
                (matrix.get(i, j) * matrix.get(j, k) - ik).abs() <= tol * ik
            })
        })
    })
}

/// A bijection on `0..n`; `map[k]` is the original index placed at `k`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(transparent)]
pub struct Permutation {
    map: Vec<usize>,
}

impl Permutation {
    pub fn new(map: Vec<usize>) -> Result<Self> {
        let n = map.len();
        let mut seen = vec![false; n];
        for &k in &map {
            if k >= n || seen[k] {
                return Err(Error::IndexOutOfRange { index: k, n });
            }
            seen[k] = true;
        }
        Ok(Permutation { map })
    }

    /// From 1-based positions, e.g. `(1, 3, 4, 5, 2)`.
    pub fn from_one_based(map: &[usize]) -> Result<Self> {
        if map.contains(&0) {
            return Err(Error::IndexOutOfRange { index: 0, n: map.len() });
        }
        Self::new(map.iter().map(|k| k - 1).collect())
    }

    pub fn identity(n: usize) -> Self {
        Permutation { map: (0..n).collect() }
    }

    pub fn len(&self) -> usize {
        self.map.len()
    }

    pub fn is_empty(&self) -> bool {
        self.map.is_empty()
    }

    pub fn get(&self, k: usize) -> usize {
        self.map[k]
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.map
    }

    pub fn is_identity(&self) -> bool {
        self.map.iter().enumerate().all(|(k, &v)| k == v)
    }

    pub fn inverse(&self) -> Permutation {
        let mut inv = vec![0; self.map.len()];
        for (k, &v) in self.map.iter().enumerate() {
            inv[v] = k;
        }
        Permutation { map: inv }
    }

    /// `out[k] = items[map[k]]`.
    pub fn apply<T: Clone>(&self, items: &[T]) -> Vec<T> {
        self.map.iter().map(|&k| items[k].clone()).collect()
    }
}

/// `A_sigma = (a_{sigma(i) sigma(j)})`, labels permuted alongside.
pub fn apply_permutation(matrix: &PairwiseMatrix, sigma: &Permutation) -> Result<PairwiseMatrix> {
    let n = matrix.n();
    if sigma.len() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            got: sigma.len(),
        });
    }
    let rows = (0..n)
        .map(|i| (0..n).map(|j| *matrix.cell(sigma.get(i), sigma.get(j))).collect())
        .collect();
    PairwiseMatrix::validate_min(sigma.apply(matrix.labels()), rows, 1)
}

/// Orders the alternatives from most to least preferred under the common
/// induced ranking. The permuted matrix has nondecreasing rows and
/// nonincreasing columns.
pub fn canonical_permutation(matrix: &PairwiseMatrix) -> Result<Permutation> {
    let verdict = approx_consistency(matrix);
    if let Some(w) = verdict.witness {
        return Err(Error::NotApproximatelyConsistent(w.to_string()));
    }
    Permutation::new(verdict.ranking.descending_order())
}
