//! Kendall's coefficient of concordance and the possibility degree of
//! ranking reversal built on it.
//!
//! For an `n x m` table ranked within columns, with row sums `R_i`,
//!
//! ```text
//! S     = sum_i (R_i - m(n+1)/2)^2
//! S_max = m^2 n (n^2 - 1) / 12
//! K     = S / S_max
//! ```
//!
//! No tied-rank correction is applied: ranks are always permutations.
//! A pairwise matrix is scored on both its within-column and within-row
//! rank matrices and the two `S` values are pooled. The possibility
//! degree of reversal is `1 - K`.

use num_rational::Rational64;
use serde::Serialize;

use crate::cell::Cell;
use crate::consistency::{rank_cells, rank_vector, RankVector};
use crate::error::{Error, Result};
use crate::hierarchy::WeightTable;
use crate::pcm::PairwiseMatrix;

/// Tolerance on `sum(nu) = 1`.
pub const WEIGHT_SUM_TOL: f64 = 1e-9;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Orientation {
    /// Each column is a permutation of `1..=rows`.
    WithinColumns,
    /// Each row is a permutation of `1..=cols`.
    WithinRows,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RankMatrix {
    rows: usize,
    cols: usize,
    ranks: Vec<usize>,
    orientation: Orientation,
}

impl RankMatrix {
    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn orientation(&self) -> Orientation {
        self.orientation
    }

    pub fn get(&self, i: usize, j: usize) -> usize {
        self.ranks[i * self.cols + j]
    }

    pub fn to_rows(&self) -> Vec<Vec<usize>> {
        self.ranks.chunks(self.cols).map(<[usize]>::to_vec).collect()
    }

    pub fn row_sums(&self) -> Vec<usize> {
        (0..self.rows)
            .map(|i| (0..self.cols).map(|j| self.get(i, j)).sum())
            .collect()
    }

    pub fn column_sums(&self) -> Vec<usize> {
        (0..self.cols)
            .map(|j| (0..self.rows).map(|i| self.get(i, j)).sum())
            .collect()
    }

    fn from_lines(rows: usize, cols: usize, lines: Vec<RankVector>, orientation: Orientation) -> Self {
        let mut ranks = vec![0; rows * cols];
        for (k, line) in lines.iter().enumerate() {
            for (t, &r) in line.ranks().iter().enumerate() {
                let (i, j) = match orientation {
                    Orientation::WithinColumns => (t, k),
                    Orientation::WithinRows => (k, t),
                };
                ranks[i * cols + j] = r;
            }
        }
        RankMatrix {
            rows,
            cols,
            ranks,
            orientation,
        }
    }
}

fn table_shape(table: &[Vec<f64>]) -> Result<(usize, usize)> {
    let rows = table.len();
    let cols = table.first().map_or(0, Vec::len);
    if rows == 0 || cols == 0 {
        return Err(Error::Empty);
    }
    if let Some(bad) = table.iter().find(|r| r.len() != cols) {
        return Err(Error::DimensionMismatch {
            expected: cols,
            got: bad.len(),
        });
    }
    Ok((rows, cols))
}

/// Ranks each column (or row) of a real table with the first method.
pub fn rank_matrix(table: &[Vec<f64>], orientation: Orientation) -> Result<RankMatrix> {
    let (rows, cols) = table_shape(table)?;
    let lines = match orientation {
        Orientation::WithinColumns => (0..cols)
            .map(|j| rank_vector(&table.iter().map(|r| r[j]).collect::<Vec<_>>()))
            .collect::<Result<Vec<_>>>()?,
        Orientation::WithinRows => table.iter().map(|r| rank_vector(r)).collect::<Result<Vec<_>>>()?,
    };
    Ok(RankMatrix::from_lines(rows, cols, lines, orientation))
}

/// Rank matrix of a pairwise matrix, comparing judgments exactly.
pub fn rank_pairwise(matrix: &PairwiseMatrix, orientation: Orientation) -> RankMatrix {
    let n = matrix.n();
    let lines = (0..n)
        .map(|k| {
            let line: Vec<Cell> = match orientation {
                Orientation::WithinColumns => matrix.column_cells(k),
                Orientation::WithinRows => matrix.row_cells(k).to_vec(),
            };
            rank_cells(&line).expect("n >= 1")
        })
        .collect();
    RankMatrix::from_lines(n, n, lines, orientation)
}

/// `S` for `sums` of `m` rankings over `n` items, exactly.
fn spread(sums: &[usize], n: usize, m: usize) -> Rational64 {
    let center = (m * (n + 1)) as i64;
    let four_s: i64 = sums.iter().map(|&r| (2 * r as i64 - center).pow(2)).sum();
    Rational64::new(four_s, 4)
}

fn s_max(n: usize, m: usize) -> Rational64 {
    let (n, m) = (n as i64, m as i64);
    Rational64::new(m * m * n * (n * n - 1), 12)
}

fn to_f64(r: Rational64) -> f64 {
    *r.numer() as f64 / *r.denom() as f64
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Concordance {
    /// Items ranked (rows of the table).
    pub n: usize,
    /// Number of rankings (columns of the table).
    pub m: usize,
    #[serde(serialize_with = "ser_ratio")]
    pub s: Rational64,
    #[serde(serialize_with = "ser_ratio")]
    pub s_max: Rational64,
    pub k: f64,
}

impl Concordance {
    pub fn k_exact(&self) -> Rational64 {
        self.s / self.s_max
    }
}

fn ser_ratio<S: serde::Serializer>(r: &Rational64, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_f64(to_f64(*r))
}

fn concordance_of(ranks: &RankMatrix) -> Result<Concordance> {
    let (n, m) = (ranks.rows, ranks.cols);
    if n <= 1 {
        return Err(Error::TooSmall { n, min: 2 });
    }
    let s = spread(&ranks.row_sums(), n, m);
    let s_max = s_max(n, m);
    Ok(Concordance {
        n,
        m,
        s,
        s_max,
        k: to_f64(s / s_max),
    })
}

/// Concordance of the `m` column rankings of an `n x m` table.
pub fn kendall_w(table: &[Vec<f64>]) -> Result<Concordance> {
    concordance_of(&rank_matrix(table, Orientation::WithinColumns)?)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SingleConcordance {
    #[serde(serialize_with = "ser_ratio")]
    pub s_rows: Rational64,
    #[serde(serialize_with = "ser_ratio")]
    pub s_cols: Rational64,
    #[serde(serialize_with = "ser_ratio")]
    pub s_max: Rational64,
    pub k: f64,
}

impl SingleConcordance {
    pub fn k_exact(&self) -> Rational64 {
        (self.s_rows + self.s_cols) / (self.s_max * 2)
    }
}

/// `K(A) = (S^r + S^c) / (2 S_max)` with `S_max = n^3 (n^2 - 1) / 12`.
pub fn kendall_single(matrix: &PairwiseMatrix) -> Result<SingleConcordance> {
    let n = matrix.n();
    if n <= 1 {
        return Err(Error::TooSmall { n, min: 2 });
    }
    let by_cols = rank_pairwise(matrix, Orientation::WithinColumns);
    let by_rows = rank_pairwise(matrix, Orientation::WithinRows);
    let s_cols = spread(&by_cols.row_sums(), n, n);
    let s_rows = spread(&by_rows.column_sums(), n, n);
    let s_max = s_max(n, n);
    let k = to_f64((s_rows + s_cols) / (s_max * 2));
    Ok(SingleConcordance {
        s_rows,
        s_cols,
        s_max,
        k,
    })
}

pub fn pd_single(matrix: &PairwiseMatrix) -> Result<f64> {
    Ok(1.0 - kendall_single(matrix)?.k)
}

/// Possibility degree from the alternative-by-criterion block; the
/// criteria weights themselves are not ranked.
pub fn pd_weights(table: &WeightTable) -> Result<f64> {
    Ok(1.0 - kendall_w(table.alt_weights())?.k)
}

/// Mixing weights over the components of the global possibility degree.
#[derive(Clone, Debug, PartialEq, Serialize, serde::Deserialize)]
pub struct ReversalWeights {
    /// One per criterion's alternative matrix.
    pub nu_alt: Vec<f64>,
    pub nu_c: f64,
    pub nu_w: f64,
}

impl ReversalWeights {
    pub fn new(nu_alt: Vec<f64>, nu_c: f64, nu_w: f64) -> Result<Self> {
        let w = ReversalWeights { nu_alt, nu_c, nu_w };
        w.check()?;
        Ok(w)
    }

    pub fn check(&self) -> Result<()> {
        let all = self.nu_alt.iter().chain([&self.nu_c, &self.nu_w]);
        let mut sum = 0.0;
        for &v in all {
            if !(0.0..=1.0).contains(&v) {
                return Err(Error::WeightRange(v));
            }
            sum += v;
        }
        if (sum - 1.0).abs() > WEIGHT_SUM_TOL {
            return Err(Error::WeightSum(sum));
        }
        Ok(())
    }

    /// `nu_c = nu_w = 1/2` when every alternative matrix is approximately
    /// consistent; otherwise uniform over the components whose possibility
    /// degree is nonzero.
    pub fn default_for(all_alt_consistent: bool, pd_alt: &[f64], pd_c: f64, pd_w: f64) -> Self {
        let m = pd_alt.len();
        if all_alt_consistent {
            return ReversalWeights {
                nu_alt: vec![0.0; m],
                nu_c: 0.5,
                nu_w: 0.5,
            };
        }
        let active = |p: f64| p > 0.0;
        let mut count = pd_alt.iter().filter(|&&p| active(p)).count();
        count += active(pd_c) as usize + active(pd_w) as usize;
        if count == 0 {
            let u = 1.0 / (m + 2) as f64;
            return ReversalWeights {
                nu_alt: vec![u; m],
                nu_c: u,
                nu_w: u,
            };
        }
        let u = 1.0 / count as f64;
        let pick = |p: f64| if active(p) { u } else { 0.0 };
        ReversalWeights {
            nu_alt: pd_alt.iter().map(|&p| pick(p)).collect(),
            nu_c: pick(pd_c),
            nu_w: pick(pd_w),
        }
    }
}

/// Convex combination of the per-matrix, criteria and structural degrees.
pub fn pd_global(pd_alt: &[f64], pd_c: f64, pd_w: f64, weights: &ReversalWeights) -> Result<f64> {
    weights.check()?;
    if weights.nu_alt.len() != pd_alt.len() {
        return Err(Error::DimensionMismatch {
            expected: pd_alt.len(),
            got: weights.nu_alt.len(),
        });
    }
    let alt: f64 = pd_alt.iter().zip(&weights.nu_alt).map(|(p, nu)| p * nu).sum();
    Ok(alt + weights.nu_c * pd_c + weights.nu_w * pd_w)
}
