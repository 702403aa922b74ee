//! Generators and property checks shared by the property tests and the
//! acceptance suite.
#![allow(dead_code)]

use ahp_core::hierarchy::{Action, HierarchyModel, Selector, WeightTable};
use ahp_core::pcm::default_labels;
use ahp_core::{
    apply_permutation, canonical_permutation, is_approx_consistent, is_consistent, kendall_single, kendall_w,
    principal_eigen, rank_alternatives, synthesize, Cell, PairwiseMatrix, Permutation, PowerIteration,
};
use num_rational::Rational64;
use proptest::prelude::*;
use proptest::test_runner::TestRunner;

/// Cases per suite.
pub const CASES: u32 = 256;

pub fn runner() -> TestRunner {
    TestRunner::new(ProptestConfig {
        cases: CASES,
        ..ProptestConfig::default()
    })
}

pub fn r(p: i64, q: i64) -> Rational64 {
    Rational64::new(p, q)
}

pub fn build(rows: Vec<Vec<Rational64>>) -> PairwiseMatrix {
    let n = rows.len();
    let cells = rows
        .into_iter()
        .map(|row| row.into_iter().map(Cell::from_ratio).collect())
        .collect();
    PairwiseMatrix::validate(default_labels(n), cells).unwrap()
}

pub fn judgment() -> impl Strategy<Value = Rational64> {
    (1i64..=9, 1i64..=9).prop_map(|(p, q)| r(p, q))
}

/// Upper triangle from `upper`, lower triangle `shrink * (1 / a_ij)`.
pub fn assemble(n: usize, upper: &[Rational64], shrink: &[Rational64]) -> Vec<Vec<Rational64>> {
    let mut a = vec![vec![r(1, 1); n]; n];
    let mut k = 0;
    #[allow(clippy::needless_range_loop)]
    for i in 0..n {
        for j in i + 1..n {
            a[i][j] = upper[k];
            a[j][i] = shrink[k] / upper[k];
            k += 1;
        }
    }
    a
}

pub fn pairs(n: usize) -> usize {
    n * (n - 1) / 2
}

prop_compose! {
    pub fn reciprocal()(n in 2usize..=6)
        (upper in prop::collection::vec(judgment(), pairs(n)), n in Just(n)) -> PairwiseMatrix {
        build(assemble(n, &upper, &vec![r(1, 1); pairs(n)]))
    }
}

prop_compose! {
    /// Arbitrary admissible matrix; each pair's product is one of `k/10`.
    pub fn admissible()(n in 2usize..=6)
        (upper in prop::collection::vec(judgment(), pairs(n)),
         shrink in prop::collection::vec((1i64..=10).prop_map(|k| r(k, 10)), pairs(n)),
         n in Just(n)) -> PairwiseMatrix {
        build(assemble(n, &upper, &shrink))
    }
}

prop_compose! {
    /// Ratio matrix of shuffled powers of two with a symmetric damping of
    /// each pair by at most 10%; always approximately consistent.
    pub fn damped_ratio()(n in 2usize..=6)
        (weights in Just((0..n as u32).map(|k| 1i64 << k).collect::<Vec<_>>()).prop_shuffle(),
         damping in prop::collection::vec(prop::sample::select(vec![r(9, 10), r(19, 20), r(1, 1)]), pairs(n)),
         n in Just(n)) -> PairwiseMatrix {
        let mut a = vec![vec![r(1, 1); n]; n];
        let mut k = 0;
        for i in 0..n {
            for j in i + 1..n {
                a[i][j] = r(weights[i], weights[j]) * damping[k];
                a[j][i] = r(weights[j], weights[i]) * damping[k];
                k += 1;
            }
        }
        build(a)
    }
}

prop_compose! {
    /// `a_ij = w_i / w_j`; repeated weights give exact ties.
    pub fn ratio()(weights in prop::collection::vec(1i64..=12, 2..=6)) -> PairwiseMatrix {
        build(weights.iter().map(|&a| weights.iter().map(|&b| r(a, b)).collect()).collect())
    }
}

pub fn permutation(n: usize) -> impl Strategy<Value = Permutation> {
    Just((0..n).collect::<Vec<_>>())
        .prop_shuffle()
        .prop_map(|map| Permutation::new(map).unwrap())
}

/// Ranks with ties broken toward the earlier index; written independently
/// of the library.
pub fn oracle_ranks(v: &[f64]) -> Vec<usize> {
    let mut idx: Vec<usize> = (0..v.len()).collect();
    idx.sort_by(|&a, &b| v[a].partial_cmp(&v[b]).unwrap().then(a.cmp(&b)));
    let mut ranks = vec![0; v.len()];
    for (k, &i) in idx.iter().enumerate() {
        ranks[i] = k + 1;
    }
    ranks
}

pub fn tie_free(m: &PairwiseMatrix) -> bool {
    let n = m.n();
    (0..n).all(|a| (0..n).all(|b| (b + 1..n).all(|c| m.cell(a, b) != m.cell(a, c) && m.cell(b, a) != m.cell(c, a))))
}

pub fn eigen(m: &PairwiseMatrix) -> (f64, Vec<f64>) {
    let pv = principal_eigen(m, PowerIteration::default()).unwrap();
    assert!(pv.converged);
    (pv.lambda_max, pv.weights)
}

pub fn delete(m: &PairwiseMatrix, k: usize) -> PairwiseMatrix {
    let keep: Vec<usize> = (0..m.n()).filter(|&i| i != k).collect();
    let rows = keep
        .iter()
        .map(|&i| keep.iter().map(|&j| *m.cell(i, j)).collect())
        .collect();
    let labels = keep.iter().map(|&i| m.labels()[i].clone()).collect();
    PairwiseMatrix::validate(labels, rows).unwrap()
}

pub fn sbd_is_one_for_reciprocal(runner: &mut TestRunner) -> Result<(), String> {
    runner
        .run(&reciprocal(), |m| {
            prop_assert!(m.is_reciprocal());
            prop_assert_eq!(m.sbd().unwrap(), 1.0);
            Ok(())
        })
        .map_err(|e| e.to_string())
}

pub fn sbd_below_one_iff_some_pair_breaks(runner: &mut TestRunner) -> Result<(), String> {
    runner
        .run(&admissible(), |m| {
            let sbd = m.sbd().unwrap();
            prop_assert!(sbd > 0.0 && sbd <= 1.0);
            let n = m.n();
            let mut max_dev: f64 = 0.0;
            for i in 0..n {
                for j in 0..n {
                    let theta = m.cell(i, j).mul(m.cell(j, i));
                    max_dev = max_dev.max((theta.value() - 1.0).abs());
                }
            }
            prop_assert_eq!(sbd == 1.0, max_dev == 0.0);
            prop_assert_eq!(m.is_reciprocal(), max_dev == 0.0);
            Ok(())
        })
        .map_err(|e| e.to_string())
}

pub fn interval_round_trip(runner: &mut TestRunner) -> Result<(), String> {
    runner
        .run(&admissible(), |m| {
            let iv = m.to_interval();
            let back = iv.to_pairwise(m.labels().to_vec()).unwrap();
            for i in 0..m.n() {
                for j in 0..m.n() {
                    let (a, b) = (m.get(i, j), back.get(i, j));
                    prop_assert!(((a - b) / a).abs() < 1e-12);
                }
            }
            prop_assert_eq!(&back, &m);
            prop_assert!((iv.uncertainty_index().unwrap() - m.sbd().unwrap()).abs() < 1e-12);
            Ok(())
        })
        .map_err(|e| e.to_string())
}

pub fn theta_is_symmetric_with_unit_diagonal(runner: &mut TestRunner) -> Result<(), String> {
    runner
        .run(&admissible(), |m| {
            let t = m.theta();
            for i in 0..m.n() {
                prop_assert_eq!(t.get(i, i), 1.0);
                for j in 0..m.n() {
                    prop_assert_eq!(t.get(i, j), t.get(j, i));
                    prop_assert!(t.get(i, j) > 0.0 && t.get(i, j) <= 1.0);
                }
            }
            Ok(())
        })
        .map_err(|e| e.to_string())
}

pub fn consistent_implies_approximately_consistent(runner: &mut TestRunner) -> Result<(), String> {
    runner
        .run(&ratio(), |m| {
            prop_assert!(is_consistent(&m, 1e-9));
            prop_assert!(is_approx_consistent(&m));
            Ok(())
        })
        .map_err(|e| e.to_string())
}

pub fn canonical_form_is_monotone(runner: &mut TestRunner) -> Result<(), String> {
    runner
        .run(
            &damped_ratio().prop_flat_map(|m| {
                let n = m.n();
                (Just(m), permutation(n))
            }),
            |(m, sigma)| {
                // Scramble first so the canonical order is not the input order.
                let m = apply_permutation(&m, &sigma).unwrap();
                prop_assert!(is_approx_consistent(&m));
                let canon = apply_permutation(&m, &canonical_permutation(&m).unwrap()).unwrap();
                prop_assert!(is_approx_consistent(&canon));
                let n = canon.n();
                for i in 0..n {
                    for j in 0..n - 1 {
                        prop_assert!(canon.get(i, j) <= canon.get(i, j + 1));
                        prop_assert!(canon.get(j, i) >= canon.get(j + 1, i));
                    }
                }
                Ok(())
            },
        )
        .map_err(|e| e.to_string())
}

pub fn approximate_consistency_survives_permutation(runner: &mut TestRunner) -> Result<(), String> {
    runner
        .run(
            &admissible().prop_flat_map(|m| {
                let n = m.n();
                (Just(m), permutation(n))
            }),
            |(m, sigma)| {
                // Tie-breaking by index is not permutation invariant.
                prop_assume!(tie_free(&m));
                let pm = apply_permutation(&m, &sigma).unwrap();
                prop_assert_eq!(is_approx_consistent(&m), is_approx_consistent(&pm));
                Ok(())
            },
        )
        .map_err(|e| e.to_string())
}

pub fn eigen_pairs_are_permutation_equivariant(runner: &mut TestRunner) -> Result<(), String> {
    runner
        .run(
            &admissible().prop_flat_map(|m| {
                let n = m.n();
                (Just(m), permutation(n))
            }),
            |(m, sigma)| {
                let (l1, w1) = eigen(&m);
                let (l2, w2) = eigen(&apply_permutation(&m, &sigma).unwrap());
                prop_assert!((l1 - l2).abs() < 1e-9);
                for (a, b) in sigma.apply(&w1).iter().zip(&w2) {
                    prop_assert!((a - b).abs() < 1e-9);
                }
                Ok(())
            },
        )
        .map_err(|e| e.to_string())
}

pub fn single_concordance_is_one_iff_approximately_consistent(runner: &mut TestRunner) -> Result<(), String> {
    runner
        .run(&prop_oneof![ratio(), damped_ratio(), admissible()], |m| {
            prop_assume!(tie_free(&m));
            let k = kendall_single(&m).unwrap().k_exact();
            prop_assert_eq!(k == Rational64::from_integer(1), is_approx_consistent(&m));
            Ok(())
        })
        .map_err(|e| e.to_string())
}

pub fn weight_concordance_is_one_iff_columns_agree(runner: &mut TestRunner) -> Result<(), String> {
    runner
        .run(
            &(2usize..=5, 1usize..=4).prop_flat_map(|(n, m)| {
                // Small integer weights so identical rankings occur often.
                prop::collection::vec(prop::collection::vec(1u32..=3, m), n)
            }),
            |table| {
                let m = table[0].len();
                let cols: Vec<Vec<f64>> = (0..m)
                    .map(|j| {
                        let sum: u32 = table.iter().map(|r| r[j]).sum();
                        table.iter().map(|r| r[j] as f64 / sum as f64).collect()
                    })
                    .collect();
                let w: Vec<Vec<f64>> = (0..table.len()).map(|i| cols.iter().map(|c| c[i]).collect()).collect();
                let agree = cols.windows(2).all(|p| oracle_ranks(&p[0]) == oracle_ranks(&p[1]));
                let k = kendall_w(&w).unwrap().k_exact();
                prop_assert_eq!(k == Rational64::from_integer(1), agree);
                Ok(())
            },
        )
        .map_err(|e| e.to_string())
}

pub fn deletion_keeps_approximate_consistency_and_order(runner: &mut TestRunner) -> Result<(), String> {
    runner
        .run(
            &damped_ratio().prop_filter("n >= 3", |m| m.n() >= 3).prop_flat_map(|m| {
                let n = m.n();
                (Just(m), 0..n)
            }),
            |(m, k)| {
                let d = delete(&m, k);
                prop_assert!(is_approx_consistent(&d));
                let (_, w) = eigen(&m);
                let before: Vec<String> = rank_alternatives(&w, m.labels())
                    .unwrap()
                    .into_iter()
                    .filter(|l| *l != m.labels()[k])
                    .collect();
                let (_, wd) = eigen(&d);
                prop_assert_eq!(rank_alternatives(&wd, d.labels()).unwrap(), before);
                Ok(())
            },
        )
        .map_err(|e| e.to_string())
}

pub fn concordant_deletion_keeps_final_order(runner: &mut TestRunner) -> Result<(), String> {
    runner
        .run(
            &(3usize..=6, 2usize..=4).prop_flat_map(|(n, m)| {
                (
                    Just((0..n).collect::<Vec<_>>()).prop_shuffle(),
                    prop::collection::vec(prop::collection::btree_set(1i64..=50, n), m),
                    prop::collection::vec(1i64..=9, m),
                    0..n,
                    0..m,
                )
            }),
            |(order, cols, crit, del_alt, del_crit)| {
                let n = order.len();
                let m = cols.len();
                // Column j gives alternative order[k] the k-th largest weight.
                let raw: Vec<Vec<i64>> = cols
                    .iter()
                    .map(|set| {
                        let desc: Vec<i64> = set.iter().rev().copied().collect();
                        let mut col = vec![0; n];
                        for (k, &i) in order.iter().enumerate() {
                            col[i] = desc[k];
                        }
                        col
                    })
                    .collect();
                let cell = |v: i64| Cell::from_ratio(Rational64::from_integer(v));
                let alt_cells: Vec<Vec<Cell>> = (0..n).map(|i| (0..m).map(|j| cell(raw[j][i])).collect()).collect();
                let crit_cells: Vec<Cell> = crit.iter().map(|&v| cell(v)).collect();
                let crit_labels: Vec<String> = (1..=m).map(|j| format!("C{j}")).collect();
                let model =
                    HierarchyModel::from_weight_cells("g", crit_labels, default_labels(n), &crit_cells, &alt_cells)
                        .unwrap();

                // Independent synthesis from the raw integers.
                let omega = |alts: &[usize], crits: &[usize]| -> Vec<f64> {
                    let ct: f64 = crits.iter().map(|&j| crit[j] as f64).sum();
                    alts.iter()
                        .map(|&i| {
                            crits
                                .iter()
                                .map(|&j| {
                                    let s: f64 = alts.iter().map(|&a| raw[j][a] as f64).sum();
                                    crit[j] as f64 / ct * raw[j][i] as f64 / s
                                })
                                .sum()
                        })
                        .collect()
                };
                let all_alts: Vec<usize> = (0..n).collect();
                let all_crits: Vec<usize> = (0..m).collect();
                let full = omega(&all_alts, &all_crits);
                let labels = default_labels(n);
                let expect = rank_alternatives(&full, &labels).unwrap();
                prop_assert_eq!(&model.evaluate().unwrap().ranking, &expect);

                let report = model
                    .what_if(&Action::DeleteAlternative {
                        alternative: Selector::Position(del_alt + 1),
                    })
                    .unwrap();
                prop_assert!(report.equilibrium);
                prop_assert!(report.ranking_preserved);
                let survivors: Vec<String> = expect.iter().filter(|l| **l != labels[del_alt]).cloned().collect();
                prop_assert_eq!(&report.ranking_after, &survivors);

                if m >= 2 {
                    let report = model
                        .what_if(&Action::DeleteCriterion {
                            criterion: Selector::Position(del_crit + 1),
                        })
                        .unwrap();
                    prop_assert!(report.equilibrium);
                    prop_assert_eq!(&report.ranking_after, &expect);
                    let kept: Vec<usize> = (0..m).filter(|&j| j != del_crit).collect();
                    prop_assert_eq!(
                        rank_alternatives(&omega(&all_alts, &kept), &labels).unwrap(),
                        expect.clone()
                    );
                }

                // The synthesized vector matches the independent computation.
                let eval = model.evaluate().unwrap();
                for (a, b) in eval.final_weights.iter().zip(&full) {
                    prop_assert!((a - b).abs() < 1e-9);
                }
                let table = WeightTable::new(
                    eval.weight_table.criteria().to_vec(),
                    labels.clone(),
                    eval.weight_table.criteria_weights().to_vec(),
                    eval.weight_table.alt_weights().to_vec(),
                )
                .unwrap();
                prop_assert_eq!(synthesize(&table), eval.final_weights);
                Ok(())
            },
        )
        .map_err(|e| e.to_string())
}

pub type Suite = fn(&mut TestRunner) -> Result<(), String>;

pub const SUITES: &[(&str, Suite)] = &[
    ("sbd_is_one_for_reciprocal", sbd_is_one_for_reciprocal),
    ("sbd_below_one_iff_some_pair_breaks", sbd_below_one_iff_some_pair_breaks),
    ("interval_round_trip", interval_round_trip),
    (
        "theta_is_symmetric_with_unit_diagonal",
        theta_is_symmetric_with_unit_diagonal,
    ),
    (
        "consistent_implies_approximately_consistent",
        consistent_implies_approximately_consistent,
    ),
    ("canonical_form_is_monotone", canonical_form_is_monotone),
    (
        "approximate_consistency_survives_permutation",
        approximate_consistency_survives_permutation,
    ),
    (
        "eigen_pairs_are_permutation_equivariant",
        eigen_pairs_are_permutation_equivariant,
    ),
    (
        "single_concordance_is_one_iff_approximately_consistent",
        single_concordance_is_one_iff_approximately_consistent,
    ),
    (
        "weight_concordance_is_one_iff_columns_agree",
        weight_concordance_is_one_iff_columns_agree,
    ),
    (
        "deletion_keeps_approximate_consistency_and_order",
        deletion_keeps_approximate_consistency_and_order,
    ),
    (
        "concordant_deletion_keeps_final_order",
        concordant_deletion_keeps_final_order,
    ),
];
