//! Plain-text tables. Numbers are shown to four decimals.

use std::fmt::Write as _;

use ahp_core::{AnalysisReport, Cell, Evaluation, MatrixReport, PdSummary, TheoremBasis, WhatIfReport};

pub fn num(x: f64) -> String {
    format!("{x:.4}")
}

fn yes_no(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

fn width<'a>(labels: impl IntoIterator<Item = &'a String>, min: usize) -> usize {
    labels
        .into_iter()
        .map(|l| l.chars().count())
        .max()
        .unwrap_or(0)
        .max(min)
}

pub fn analysis(report: &AnalysisReport) -> String {
    let mut s = String::new();
    for (k, m) in report.matrices.iter().enumerate() {
        if k > 0 {
            s.push('\n');
        }
        matrix(&mut s, m);
    }
    if let Some(eval) = &report.hierarchy {
        s.push('\n');
        hierarchy(&mut s, eval);
    }
    s
}

fn matrix(s: &mut String, m: &MatrixReport) {
    writeln!(s, "== {} ({n}x{n})", m.name, n = m.n).unwrap();
    let ac = &m.approximate_consistency;
    writeln!(s, "SBD                 {}", m.sbd.map_or("n/a".into(), num)).unwrap();
    writeln!(s, "reciprocal          {}", yes_no(m.reciprocal)).unwrap();
    writeln!(s, "consistent          {}", yes_no(m.consistent)).unwrap();
    writeln!(s, "approx. consistent  {}", yes_no(ac.approximately_consistent)).unwrap();
    if let Some(w) = &ac.witness {
        writeln!(s, "  witness: {w}").unwrap();
    }
    let p = &m.priorities;
    writeln!(s, "lambda_max          {}", num(p.lambda_max)).unwrap();
    if !p.converged {
        writeln!(s, "  power iteration stopped after {} iterations", p.iterations).unwrap();
    }
    match &m.kendall {
        Some(k) => writeln!(
            s,
            "K                   {}  (S^r {}, S^c {}, S_max {})",
            num(k.k),
            k.s_rows,
            k.s_cols,
            k.s_max
        )
        .unwrap(),
        None => writeln!(s, "K                   n/a").unwrap(),
    }
    writeln!(s, "p_d                 {}", num(m.pd)).unwrap();
    s.push('\n');
    let w = width(&m.labels, 11);
    writeln!(s, "{:<w$}  weight  rank", "alternative").unwrap();
    for (label, x) in m.labels.iter().zip(&p.weights) {
        let rank = m.ranking.iter().position(|r| r == label).map_or(0, |i| i + 1);
        writeln!(s, "{label:<w$}  {}  {rank:>4}", num(*x)).unwrap();
    }
    writeln!(s, "ranking: {}", m.ranking.join(" > ")).unwrap();
}

fn hierarchy(s: &mut String, eval: &Evaluation) {
    let table = &eval.weight_table;
    writeln!(s, "== hierarchy: {}", eval.goal).unwrap();
    let w = width(table.alternatives(), 8);
    let cols: Vec<usize> = table.criteria().iter().map(|c| c.chars().count().max(6)).collect();
    write!(s, "{:<w$}", "").unwrap();
    for (c, cw) in table.criteria().iter().zip(&cols) {
        write!(s, "  {c:>cw$}").unwrap();
    }
    writeln!(s, "   final").unwrap();
    write!(s, "{:<w$}", "criteria").unwrap();
    for (x, cw) in table.criteria_weights().iter().zip(&cols) {
        write!(s, "  {:>cw$}", num(*x)).unwrap();
    }
    writeln!(s).unwrap();
    for ((label, row), fin) in table
        .alternatives()
        .iter()
        .zip(table.alt_weights())
        .zip(&eval.final_weights)
    {
        write!(s, "{label:<w$}").unwrap();
        for (x, cw) in row.iter().zip(&cols) {
            write!(s, "  {:>cw$}", num(*x)).unwrap();
        }
        writeln!(s, "  {}", num(*fin)).unwrap();
    }
    writeln!(s, "ranking: {}", eval.ranking.join(" > ")).unwrap();
    pd(s, &eval.pd);
}

fn pd(s: &mut String, pd: &PdSummary) {
    let alt: Vec<String> = pd.alternatives.iter().map(|x| num(*x)).collect();
    writeln!(s, "p_d alternatives    [{}]", alt.join(", ")).unwrap();
    writeln!(s, "p_d criteria        {}", num(pd.criteria)).unwrap();
    writeln!(s, "p_d weights         {}", num(pd.weights)).unwrap();
    writeln!(s, "p_d global          {}", num(pd.global)).unwrap();
    let nu: Vec<String> = pd.nu.nu_alt.iter().map(|x| num(*x)).collect();
    writeln!(
        s,
        "nu                  alt [{}], c {}, w {}",
        nu.join(", "),
        num(pd.nu.nu_c),
        num(pd.nu.nu_w)
    )
    .unwrap();
}

pub fn what_if(r: &WhatIfReport) -> String {
    let mut s = String::new();
    writeln!(s, "== {}", r.action).unwrap();
    writeln!(s, "before: {}", r.ranking_before.join(" > ")).unwrap();
    writeln!(s, "after:  {}", r.ranking_after.join(" > ")).unwrap();
    writeln!(s, "order preserved     {}", yes_no(r.ranking_preserved)).unwrap();
    writeln!(s, "equilibrium         {}", yes_no(r.equilibrium)).unwrap();
    let basis = match &r.theorem_basis {
        TheoremBasis::ApproxConsistentDeletion => "deletion from an approximately consistent matrix".to_string(),
        TheoremBasis::ApproxConsistentAddition => "addition keeping approximate consistency".to_string(),
        TheoremBasis::ConcordantDeletion => "deletion under concordant criteria".to_string(),
        TheoremBasis::ConcordantAddition => "addition under concordant criteria".to_string(),
        TheoremBasis::NoGuarantee { reason } => format!("none ({reason})"),
    };
    writeln!(s, "guarantee           {basis}").unwrap();
    writeln!(
        s,
        "p_d global          {} -> {}",
        num(r.pd_summary.global),
        num(r.pd_after.global)
    )
    .unwrap();
    s
}

pub fn intervals(labels: &[String], lower: &[Vec<Cell>], upper: &[Vec<Cell>]) -> String {
    let cells: Vec<Vec<String>> = lower
        .iter()
        .zip(upper)
        .map(|(lo, hi)| {
            lo.iter()
                .zip(hi)
                .map(|(a, b)| format!("[{}, {}]", a.to_text(), b.to_text()))
                .collect()
        })
        .collect();
    let w = width(labels, 0);
    let cw = cells
        .iter()
        .flatten()
        .map(|c| c.chars().count())
        .max()
        .unwrap_or(0)
        .max(width(labels, 0));
    let mut s = String::new();
    write!(s, "{:<w$}", "").unwrap();
    for l in labels {
        write!(s, "  {l:>cw$}").unwrap();
    }
    writeln!(s).unwrap();
    for (l, row) in labels.iter().zip(&cells) {
        write!(s, "{l:<w$}").unwrap();
        for c in row {
            write!(s, "  {c:>cw$}").unwrap();
        }
        writeln!(s).unwrap();
    }
    s
}
