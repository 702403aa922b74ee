//! Priority vectors from the principal right eigenvector.
//!
//! Every admissible matrix is strictly positive, so the Perron root is
//! simple and dominant and plain power iteration converges from any
//! positive start. Under symmetry breaking the Perron root may fall
//! below `n`.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::pcm::PairwiseMatrix;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PowerIteration {
    /// Stop when successive iterates differ by less than this in the
    /// max norm and the eigenvalue estimate moved by less than this.
    pub tol: f64,
    pub max_iter: usize,
}

impl Default for PowerIteration {
    fn default() -> Self {
        PowerIteration {
            tol: 1e-12,
            max_iter: 10_000,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PriorityVector {
    pub weights: Vec<f64>,
    pub lambda_max: f64,
    /// `|A w - lambda w|_inf` at the returned iterate.
    pub residual: f64,
    pub iterations: usize,
    pub converged: bool,
}

pub fn principal_eigen(matrix: &PairwiseMatrix, opts: PowerIteration) -> Result<PriorityVector> {
    let n = matrix.n();
    principal_eigen_from(matrix, vec![1.0 / n as f64; n], opts)
}

/// Power iteration from a caller-supplied positive start vector.
pub fn principal_eigen_from(matrix: &PairwiseMatrix, start: Vec<f64>, opts: PowerIteration) -> Result<PriorityVector> {
    let n = matrix.n();
    if !(opts.tol > 0.0) {
        return Err(Error::IterationSettings("tol must be positive"));
    }
    if opts.max_iter == 0 {
        return Err(Error::IterationSettings("max_iter must be at least 1"));
    }
    if start.len() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            got: start.len(),
        });
    }
    if start.iter().any(|&v| !(v > 0.0)) {
        return Err(Error::IterationSettings("start vector must be strictly positive"));
    }
    let a = matrix.to_f64_rows();
    let norm: f64 = start.iter().sum();
    let mut w: Vec<f64> = start.into_iter().map(|v| v / norm).collect();
    let mut lambda = f64::NAN;
    let mut next = vec![0.0; n];
    let mut converged = false;
    let mut iterations = 0;
    while iterations < opts.max_iter {
        iterations += 1;
        mat_vec(&a, &w, &mut next);
        // w sums to 1, so the 1-norm of A w is the growth factor.
        let growth: f64 = next.iter().sum();
        next.iter_mut().for_each(|v| *v /= growth);
        let step = w.iter().zip(&next).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max);
        let settled = (growth - lambda).abs() < opts.tol;
        std::mem::swap(&mut w, &mut next);
        lambda = growth;
        if step < opts.tol && settled {
            converged = true;
            break;
        }
    }
    mat_vec(&a, &w, &mut next);
    let residual = next
        .iter()
        .zip(&w)
        .map(|(aw, wi)| (aw - lambda * wi).abs())
        .fold(0.0, f64::max);
    Ok(PriorityVector {
        weights: w,
        lambda_max: lambda,
        residual,
        iterations,
        converged,
    })
}

fn mat_vec(a: &[Vec<f64>], x: &[f64], out: &mut [f64]) {
    for (o, row) in out.iter_mut().zip(a) {
        *o = row.iter().zip(x).map(|(r, v)| r * v).sum();
    }
}

/// Labels sorted by descending weight, ties kept in original order.
pub fn rank_alternatives(weights: &[f64], labels: &[String]) -> Result<Vec<String>> {
    Ok(ranking_order(weights, labels.len())?
        .into_iter()
        .map(|i| labels[i].clone())
        .collect())
}

/// Indices sorted by descending weight, ties kept in original order.
pub fn ranking_order(weights: &[f64], n: usize) -> Result<Vec<usize>> {
    if weights.len() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            got: weights.len(),
        });
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| weights[b].total_cmp(&weights[a]));
    Ok(order)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RsbDecomposition {
    /// `epsilon_ij = a_ij * w_j / w_i`, row-major.
    pub epsilon: Vec<Vec<f64>>,
    /// Largest of `|epsilon_ij - sqrt(a_ij a_ji)|` and `|epsilon_ij - epsilon_ji|`.
    pub residual: f64,
}

/// Checks how well `a_ij = epsilon_ij * w_i / w_j` holds with a symmetric
/// `epsilon_ij = sqrt(a_ij a_ji)` for the given weights.
pub fn rsb_decomposition(matrix: &PairwiseMatrix, weights: &[f64]) -> Result<RsbDecomposition> {
    let n = matrix.n();
    if weights.len() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            got: weights.len(),
        });
    }
    if let Some(i) = weights.iter().position(|&w| !(w > 0.0)) {
        return Err(Error::ZeroWeight(i));
    }
    let epsilon: Vec<Vec<f64>> = (0..n)
        .map(|i| (0..n).map(|j| matrix.get(i, j) * weights[j] / weights[i]).collect())
        .collect();
    let mut residual: f64 = 0.0;
    #[allow(clippy::needless_range_loop)]
    for i in 0..n {
        for j in 0..n {
            let sym = matrix.pair_product(i, j).sqrt();
            residual = residual
                .max((epsilon[i][j] - sym).abs())
                .max((epsilon[i][j] - epsilon[j][i]).abs());
        }
    }
    Ok(RsbDecomposition { epsilon, residual })
}
