//! Pairwise comparison matrices that need not be reciprocal.
//!
//! A matrix is admissible when every entry is positive, the diagonal is 1
//! and each mirrored pair satisfies `0 < a_ij * a_ji <= 1`. The product
//! `theta_ij = a_ij * a_ji` measures how far a pair departs from the
//! reciprocal case; its mean over unordered pairs is the symmetry-breaking
//! degree (SBD) of the matrix.

use serde::Serialize;

use crate::cell::Cell;
use crate::error::{AdmissibilityReport, Error, Result, Violation, ViolationKind};

/// Relative tolerance for the unit-diagonal and product-bound rules.
pub const ADMISSIBILITY_TOL: f64 = 1e-9;

/// Default labels `x1, x2, ...`.
pub fn default_labels(n: usize) -> Vec<String> {
    (1..=n).map(|i| format!("x{i}")).collect()
}

#[derive(Clone, Debug, PartialEq)]
pub struct PairwiseMatrix {
    labels: Vec<String>,
    cells: Vec<Cell>,
}

impl PairwiseMatrix {
    /// Checks admissibility and builds the matrix, or reports every
    /// violated cell.
    pub fn validate(labels: Vec<String>, rows: Vec<Vec<Cell>>) -> Result<Self> {
        Self::validate_min(labels, rows, 2)
    }

    /// Convenience for literals in code and tests; labels default to `x1..xn`.
    pub fn from_f64_rows(rows: &[&[f64]]) -> Result<Self> {
        let rows: Vec<Vec<Cell>> = rows
            .iter()
            .map(|r| r.iter().map(|&v| Cell::from(v)).collect())
            .collect();
        Self::validate(default_labels(rows.len()), rows)
    }

    /// Parses each entry as judgment text (`"3/2"`, `"3.8"`).
    pub fn from_text_rows(labels: Vec<String>, rows: &[&[&str]]) -> Result<Self> {
        let mut parsed = Vec::with_capacity(rows.len());
        for (i, r) in rows.iter().enumerate() {
            let mut row = Vec::with_capacity(r.len());
            for (j, t) in r.iter().enumerate() {
                row.push(
                    t.parse::<Cell>()
                        .map_err(|source| Error::Cell { row: i, col: j, source })?,
                );
            }
            parsed.push(row);
        }
        Self::validate(labels, parsed)
    }

    /// The `1x1` matrix `[1]`, used for the criteria level of a
    /// single-criterion hierarchy.
    pub fn unit(label: impl Into<String>) -> Self {
        PairwiseMatrix {
            labels: vec![label.into()],
            cells: vec![Cell::ONE],
        }
    }

    pub(crate) fn validate_min(labels: Vec<String>, rows: Vec<Vec<Cell>>, min: usize) -> Result<Self> {
        let n = rows.len();
        let cells = flatten_square(rows)?;
        if n < min {
            return Err(Error::TooSmall { n, min });
        }
        check_labels(&labels, n)?;
        let report = admissibility(n, &cells);
        if !report.violations.is_empty() {
            return Err(Error::Inadmissible(report));
        }
        Ok(PairwiseMatrix { labels, cells })
    }

    /// Repairs pairs with `a_ij * a_ji > 1` by the mirror map
    /// `a_ij <- 1/a_ji, a_ji <- 1/a_ij`, which sends `theta` to `1/theta`.
    /// Pairs that are already admissible are left untouched.
    pub fn mirror_normalize(labels: Vec<String>, rows: Vec<Vec<Cell>>) -> Result<Self> {
        let n = rows.len();
        let mut cells = flatten_square(rows)?;
        let non_positive: Vec<Violation> = cells
            .iter()
            .enumerate()
            .filter(|(_, c)| !(c.value() > 0.0))
            .map(|(k, c)| Violation {
                row: k / n,
                col: k % n,
                kind: ViolationKind::NonPositive { value: c.value() },
            })
            .collect();
        if !non_positive.is_empty() {
            return Err(Error::Inadmissible(AdmissibilityReport {
                violations: non_positive,
            }));
        }
        for i in 0..n {
            for j in i + 1..n {
                let (a, b) = (cells[i * n + j], cells[j * n + i]);
                if a.value() * b.value() > 1.0 + ADMISSIBILITY_TOL {
                    cells[i * n + j] = b.recip();
                    cells[j * n + i] = a.recip();
                }
            }
        }
        let rows = cells.chunks(n.max(1)).map(<[Cell]>::to_vec).collect();
        Self::validate(labels, rows)
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.labels.len()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.cells[i * self.n() + j].value()
    }

    #[inline]
    pub fn cell(&self, i: usize, j: usize) -> &Cell {
        &self.cells[i * self.n() + j]
    }

    pub fn row_cells(&self, i: usize) -> &[Cell] {
        let n = self.n();
        &self.cells[i * n..(i + 1) * n]
    }

    pub fn column_cells(&self, j: usize) -> Vec<Cell> {
        (0..self.n()).map(|i| *self.cell(i, j)).collect()
    }

    pub fn rows(&self) -> Vec<Vec<Cell>> {
        self.cells.chunks(self.n()).map(<[Cell]>::to_vec).collect()
    }

    pub fn to_f64_rows(&self) -> Vec<Vec<f64>> {
        self.cells
            .chunks(self.n())
            .map(|r| r.iter().map(Cell::value).collect())
            .collect()
    }

    pub fn with_labels(mut self, labels: Vec<String>) -> Result<Self> {
        check_labels(&labels, self.n())?;
        self.labels = labels;
        Ok(self)
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    /// `theta_ij = a_ij * a_ji`.
    pub fn theta(&self) -> ThetaMatrix {
        let n = self.n();
        let mut entries = vec![1.0; n * n];
        for i in 0..n {
            for j in i + 1..n {
                let t = self.pair_product(i, j);
                entries[i * n + j] = t;
                entries[j * n + i] = t;
            }
        }
        ThetaMatrix { n, entries }
    }

    /// Mean of `theta_ij` over the strict upper triangle. Equals 1 exactly
    /// for multiplicative reciprocal matrices.
    pub fn sbd(&self) -> Result<f64> {
        mean_upper(self.n(), |i, j| self.pair_product(i, j))
    }

    /// `a_ij * a_ji`, computed exactly when both judgments are rational.
    pub fn pair_product(&self, i: usize, j: usize) -> f64 {
        self.cell(i, j).mul(self.cell(j, i)).value()
    }

    /// True when every pair is reciprocal within [`ADMISSIBILITY_TOL`].
    pub fn is_reciprocal(&self) -> bool {
        let n = self.n();
        (0..n).all(|i| (i + 1..n).all(|j| (self.pair_product(i, j) - 1.0).abs() <= ADMISSIBILITY_TOL))
    }

    /// Interval form: `[a_ij, 1/a_ji]` per cell.
    pub fn to_interval(&self) -> IntervalMatrix {
        let n = self.n();
        let lower = self.cells.clone();
        let upper = (0..n * n).map(|k| self.cells[(k % n) * n + k / n].recip()).collect();
        IntervalMatrix { n, lower, upper }
    }

    /// Returns the matrix with every cell inside `[1/rho, rho]`, or the
    /// offending cells.
    pub fn homogeneity_check(&self, rho: f64) -> Result<HomogeneityVerdict> {
        if !(rho >= 1.0) || !rho.is_finite() {
            return Err(Error::InvalidRho(rho));
        }
        let n = self.n();
        let hi = rho * (1.0 + ADMISSIBILITY_TOL);
        let lo = (1.0 / rho) * (1.0 - ADMISSIBILITY_TOL);
        let mut violations = Vec::new();
        for i in 0..n {
            for j in 0..n {
                let a = self.get(i, j);
                if a > hi || a < lo {
                    violations.push(CellValue {
                        row: i,
                        col: j,
                        value: a,
                    });
                }
            }
        }
        Ok(HomogeneityVerdict {
            rho,
            homogeneous: violations.is_empty(),
            violations,
        })
    }

    /// Smallest `rho` for which the matrix is homogeneous.
    pub fn homogeneity_bound(&self) -> f64 {
        self.cells
            .iter()
            .map(|c| c.value().max(1.0 / c.value()))
            .fold(1.0, f64::max)
    }
}

fn flatten_square(rows: Vec<Vec<Cell>>) -> Result<Vec<Cell>> {
    let n = rows.len();
    if n == 0 {
        return Err(Error::Empty);
    }
    let mut cells = Vec::with_capacity(n * n);
    for (i, r) in rows.into_iter().enumerate() {
        if r.len() != n {
            return Err(Error::NotSquare {
                row: i,
                len: r.len(),
                expected: n,
            });
        }
        cells.extend(r);
    }
    Ok(cells)
}

fn check_labels(labels: &[String], n: usize) -> Result<()> {
    if labels.len() != n {
        return Err(Error::LabelCount {
            expected: n,
            got: labels.len(),
        });
    }
    for (k, l) in labels.iter().enumerate() {
        if labels[..k].contains(l) {
            return Err(Error::DuplicateLabel(l.clone()));
        }
    }
    Ok(())
}

fn admissibility(n: usize, cells: &[Cell]) -> AdmissibilityReport {
    let mut violations = Vec::new();
    for (k, c) in cells.iter().enumerate() {
        let v = c.value();
        if !(v > 0.0) || !v.is_finite() {
            violations.push(Violation {
                row: k / n,
                col: k % n,
                kind: ViolationKind::NonPositive { value: v },
            });
        }
    }
    for i in 0..n {
        let d = cells[i * n + i].value();
        if (d - 1.0).abs() > ADMISSIBILITY_TOL {
            violations.push(Violation {
                row: i,
                col: i,
                kind: ViolationKind::UnitDiagonal { value: d },
            });
        }
        for j in i + 1..n {
            let theta = cells[i * n + j].value() * cells[j * n + i].value();
            if theta > 1.0 + ADMISSIBILITY_TOL {
                violations.push(Violation {
                    row: i,
                    col: j,
                    kind: ViolationKind::ProductBound { theta },
                });
            }
        }
    }
    violations.sort_by_key(|v| (v.row, v.col));
    AdmissibilityReport { violations }
}

fn mean_upper(n: usize, f: impl Fn(usize, usize) -> f64) -> Result<f64> {
    if n < 2 {
        return Err(Error::TooSmall { n, min: 2 });
    }
    let sum: f64 = (0..n)
        .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
        .map(|(i, j)| f(i, j))
        .sum();
    Ok(2.0 * sum / (n * (n - 1)) as f64)
}

/// Symmetric matrix of pair products `a_ij * a_ji` with unit diagonal.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ThetaMatrix {
    n: usize,
    entries: Vec<f64>,
}

impl ThetaMatrix {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.entries[i * self.n + j]
    }

    pub fn rows(&self) -> Vec<Vec<f64>> {
        self.entries.chunks(self.n).map(<[f64]>::to_vec).collect()
    }
}

/// Matrix of positive closed intervals `[lower_ij, upper_ij]` coupled by
/// `lower_ij * upper_ji = 1`.
#[derive(Clone, Debug, PartialEq)]
pub struct IntervalMatrix {
    n: usize,
    lower: Vec<Cell>,
    upper: Vec<Cell>,
}

impl IntervalMatrix {
    pub fn new(lower: Vec<Vec<Cell>>, upper: Vec<Vec<Cell>>) -> Result<Self> {
        let n = lower.len();
        let lower = flatten_square(lower)?;
        let upper = flatten_square(upper)?;
        if upper.len() != n * n {
            return Err(Error::DimensionMismatch {
                expected: n * n,
                got: upper.len(),
            });
        }
        let bad = |row, col, reason| Err(Error::InvalidInterval { row, col, reason });
        for i in 0..n {
            for j in 0..n {
                let (lo, hi) = (lower[i * n + j].value(), upper[i * n + j].value());
                if !(lo > 0.0) {
                    return bad(i, j, "lower bound is not positive");
                }
                if lo > hi * (1.0 + ADMISSIBILITY_TOL) {
                    return bad(i, j, "lower bound exceeds upper bound");
                }
                if i == j && ((lo - 1.0).abs() > ADMISSIBILITY_TOL || (hi - 1.0).abs() > ADMISSIBILITY_TOL) {
                    return bad(i, j, "diagonal interval is not [1,1]");
                }
                let coupling = lo * upper[j * n + i].value();
                if (coupling - 1.0).abs() > ADMISSIBILITY_TOL {
                    return bad(i, j, "lower_ij * upper_ji != 1");
                }
            }
        }
        Ok(IntervalMatrix { n, lower, upper })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn lower(&self, i: usize, j: usize) -> &Cell {
        &self.lower[i * self.n + j]
    }

    pub fn upper(&self, i: usize, j: usize) -> &Cell {
        &self.upper[i * self.n + j]
    }

    /// Width `upper - lower`; zero exactly where the pair is reciprocal.
    pub fn width(&self, i: usize, j: usize) -> f64 {
        self.upper(i, j).value() - self.lower(i, j).value()
    }

    /// Point matrix taken from the lower bounds.
    pub fn to_pairwise(&self, labels: Vec<String>) -> Result<PairwiseMatrix> {
        let rows = self.lower.chunks(self.n).map(<[Cell]>::to_vec).collect();
        PairwiseMatrix::validate(labels, rows)
    }

    /// Mean of `lower_ij * lower_ji` over unordered pairs.
    pub fn uncertainty_index(&self) -> Result<f64> {
        mean_upper(self.n, |i, j| self.lower(i, j).mul(self.lower(j, i)).value())
    }

    pub fn lower_rows(&self) -> Vec<Vec<Cell>> {
        self.lower.chunks(self.n).map(<[Cell]>::to_vec).collect()
    }

    pub fn upper_rows(&self) -> Vec<Vec<Cell>> {
        self.upper.chunks(self.n).map(<[Cell]>::to_vec).collect()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct CellValue {
    pub row: usize,
    pub col: usize,
    pub value: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct HomogeneityVerdict {
    pub rho: f64,
    pub homogeneous: bool,
    pub violations: Vec<CellValue>,
}
