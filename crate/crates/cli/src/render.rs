//! Text renderings.

use std::fmt::Write;

use qybt_core::lattice::SolutionLattice;
use qybt_core::oracle::OracleReport;
use qybt_core::Matrix;

fn idx(i: &[usize]) -> String {
    i.iter().map(usize::to_string).collect::<Vec<_>>().join(",")
}

/// JSON, or a text entry list followed by a dense grid when the matrix is
/// small enough.
pub fn matrix(m: &Matrix, text: bool) -> String {
    if !text {
        return serde_json::to_string_pretty(&m.to_json()).expect("matrix serializes");
    }
    let mut out = format!(
        "dim {}, legs {}, {} nonzero entries\n",
        m.dim(),
        m.legs(),
        m.nnz()
    );
    for (row, col, v) in m.iter() {
        let _ = writeln!(out, "  ({}) -> ({}): {v}", idx(&row), idx(&col));
    }
    if m.dim() <= 3 && m.legs() == 2 {
        out.push_str(&grid(m));
    }
    out
}

fn grid(m: &Matrix) -> String {
    let n = m.dim();
    let labels: Vec<Vec<usize>> = (1..=n)
        .flat_map(|i| (1..=n).map(move |j| vec![i, j]))
        .collect();
    let cells: Vec<Vec<String>> = labels
        .iter()
        .map(|r| labels.iter().map(|c| m.entry(r, c).to_string()).collect())
        .collect();
    let width = cells.iter().flatten().map(String::len).max().unwrap_or(1);
    let mut out = String::from("\n");
    let _ = write!(out, "{:>5} ", "");
    for c in &labels {
        let _ = write!(out, " {:>width$}", idx(c));
    }
    out.push('\n');
    for (r, row) in labels.iter().zip(&cells) {
        let _ = write!(out, "{:>5} ", idx(r));
        for cell in row {
            let _ = write!(out, " {cell:>width$}");
        }
        out.push('\n');
    }
    out
}

pub fn lattice(lat: &SolutionLattice) -> String {
    let free: Vec<&str> = lat.free.iter().map(|v| v.name()).collect();
    let mut out = format!(
        "rank {} (relation rank {}), free: {}\n",
        lat.rank,
        lat.relation_rank,
        free.join(" ")
    );
    for (v, m) in &lat.assignment {
        let _ = writeln!(out, "  {v} = {m}");
    }
    out
}

pub fn oracle(rep: &OracleReport) -> String {
    let verdict = if rep.passed { "passed" } else { "FAILED" };
    let mut out = format!(
        "{}: {verdict} at {} points (seed {}), {} failing\n",
        rep.system,
        rep.trials,
        rep.seed,
        rep.failures.len()
    );
    for f in &rep.failures {
        let point: Vec<String> = f.point.iter().map(|(k, v)| format!("{k}={v}")).collect();
        let _ = writeln!(
            out,
            "  trial {} (seed {}): {} components, at {}",
            f.trial,
            f.seed,
            f.violations.len(),
            point.join(" ")
        );
    }
    out
}
