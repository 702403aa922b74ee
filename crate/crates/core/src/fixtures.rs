//! Reference matrices used by the unit tests.

use crate::pcm::{default_labels, PairwiseMatrix};

fn labels(names: &[&str]) -> Vec<String> {
    names.iter().map(|s| s.to_string()).collect()
}

fn matrix(names: &[&str], rows: &[&[&str]]) -> PairwiseMatrix {
    PairwiseMatrix::from_text_rows(labels(names), rows).unwrap()
}

const X5: [&str; 5] = ["x1", "x2", "x3", "x4", "x5"];

pub fn a1() -> PairwiseMatrix {
    matrix(
        &X5,
        &[
            &["1", "9", "2", "3", "5"],
            &["1/9", "1", "1/5", "1/3", "1/2"],
            &["1/2", "5", "1", "3/2", "3"],
            &["1/3", "3", "2/3", "1", "3/2"],
            &["1/5", "2", "1/3", "2/3", "1"],
        ],
    )
}

pub fn a1m() -> PairwiseMatrix {
    matrix(
        &X5,
        &[
            &["1", "8", "2", "3", "5"],
            &["1/9", "1", "1/5", "1/3", "1/2"],
            &["1/2", "5", "1", "3/2", "3"],
            &["1/3", "3", "2/3", "1", "3/2"],
            &["1/5", "2", "1/3", "2/3", "1"],
        ],
    )
}

pub fn a1_sigma() -> PairwiseMatrix {
    matrix(
        &["x1", "x3", "x4", "x5", "x2"],
        &[
            &["1", "2", "3", "5", "8"],
            &["1/2", "1", "3/2", "3", "5"],
            &["1/3", "2/3", "1", "3/2", "3"],
            &["1/5", "1/3", "2/3", "1", "2"],
            &["1/9", "1/5", "1/3", "1/2", "1"],
        ],
    )
}

pub fn a2() -> PairwiseMatrix {
    matrix(
        &X5,
        &[
            &["1", "9", "2", "3", "5"],
            &["1/9", "1", "1/5", "1/3", "1/2"],
            &["1/4", "5", "1", "3/2", "3"],
            &["1/3", "3", "2/3", "1", "3/2"],
            &["1/5", "2", "1/3", "2/3", "1"],
        ],
    )
}

pub fn a2m() -> PairwiseMatrix {
    matrix(
        &X5,
        &[
            &["1", "1/9", "2", "3", "5"],
            &["9", "1", "1/5", "1/3", "1/2"],
            &["1/4", "5", "1", "3/2", "3"],
            &["1/3", "3", "2/3", "1", "3/2"],
            &["1/5", "2", "1/3", "2/3", "1"],
        ],
    )
}

pub fn table1() -> PairwiseMatrix {
    matrix(
        &["Prestige", "Price", "MPG", "Comfort"],
        &[
            &["1", "1/4", "1/3", "1/2"],
            &["4", "1", "3", "3/2"],
            &["3", "1/3", "1", "1/3"],
            &["2", "2/3", "3", "1"],
        ],
    )
}

pub fn table6() -> PairwiseMatrix {
    matrix(
        &["Price", "Comfort", "MPG", "Prestige"],
        &[
            &["1", "3/2", "3", "3.8"],
            &["2/3", "1", "3", "1.5"],
            &["1/3", "1/3", "1", "2.8"],
            &["1/4", "1/2", "1/3", "1"],
        ],
    )
}

/// `a_ij = w_i / w_j` for integer weights.
pub fn ratio_matrix(weights: &[i64]) -> PairwiseMatrix {
    use crate::cell::Cell;
    use num_rational::Rational64;
    let rows = weights
        .iter()
        .map(|&wi| {
            weights
                .iter()
                .map(|&wj| Cell::from_ratio(Rational64::new(wi, wj)))
                .collect()
        })
        .collect();
    PairwiseMatrix::validate(default_labels(weights.len()), rows).unwrap()
}
