//! JSON and markdown renderings of a run.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use crate::config::OutputFormat;
use crate::discrete::ClassificationTable;
use crate::error::{Error, Result};
use crate::modes::Census;
use crate::report::Expectation;
use crate::suites::RunReport;

pub const JSON_FILE: &str = "report.json";
pub const MARKDOWN_FILE: &str = "report.md";

/// Pretty JSON with struct field order as declared, so output is stable.
pub fn to_json(report: &RunReport) -> String {
    let mut s = serde_json::to_string_pretty(report).expect("report serializes");
    s.push('\n');
    s
}

fn mark(v: Option<bool>) -> &'static str {
    match v {
        Some(true) => "✓",
        Some(false) => "✗",
        None => "?",
    }
}

pub fn classification_markdown(table: &ClassificationTable) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "| system | {} |", table.columns.join(" | "));
    let _ = writeln!(out, "|---|{}", "---|".repeat(table.columns.len()));
    for row in &table.rows {
        let cells: Vec<&str> = table
            .columns
            .iter()
            .map(|c| mark(row.verdicts.iter().find(|(o, _)| o == c).and_then(|x| x.1)))
            .collect();
        let _ = writeln!(out, "| {} | {} |", row_title(&row.label), cells.join(" | "));
    }
    out
}

fn row_title(label: &str) -> String {
    match label {
        "unconstrained" => "Dirac equation alone".into(),
        other => format!("Dirac equation + {other} condition"),
    }
}

pub fn census_markdown(census: &Census) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "| mask | projector | rank | ker dim | condition |");
    let _ = writeln!(out, "|---|---|---|---|---|");
    for e in &census.entries {
        let _ = writeln!(
            out,
            "| {:04b} | {} | {} | {} | {} |",
            e.mask, e.projector, e.projector_rank, e.solution_dim, e.condition_form
        );
    }
    let _ = writeln!(out);
    let _ = writeln!(out, "| projector rank | 1 | 2 | 3 | total | with unconstrained |");
    let _ = writeln!(out, "|---|---|---|---|---|---|");
    let _ = writeln!(
        out,
        "| conditions | {} | {} | {} | {} | {} |",
        census.by_rank[0], census.by_rank[1], census.by_rank[2], census.nontrivial, census.with_unconstrained
    );
    out
}

pub fn to_markdown(report: &RunReport) -> String {
    let mut out = String::new();
    let c = &report.config;
    let _ = writeln!(out, "# zeromass verification report\n");
    let _ = writeln!(
        out,
        "seed {}, {} samples, tol_exact {:e}, tol_fd {:e}, fd_step {:e}, |p| in [{}, {}]\n",
        c.seed, c.samples, c.tol_exact, c.tol_fd, c.fd_step, c.momentum_min, c.momentum_max
    );
    let _ = writeln!(out, "**{}**\n", if report.ok { "PASS" } else { "FAIL" });
    let _ = writeln!(
        out,
        "| suite | checks | passed | expected failures | mismatches | status |"
    );
    let _ = writeln!(out, "|---|---|---|---|---|---|");
    for s in &report.suites {
        let sm = s.summary();
        let _ = writeln!(
            out,
            "| {} | {} | {} | {} | {} | {} |",
            s.suite,
            sm.total,
            sm.passed,
            sm.expected_failures,
            sm.mismatches,
            if s.all_ok() { "ok" } else { "FAIL" }
        );
    }
    if let Some(t) = &report.extras.classification {
        let _ = writeln!(out, "\n## C, P, T classification\n");
        out.push_str(&classification_markdown(t));
    }
    if let Some(cs) = &report.extras.census {
        let _ = writeln!(out, "\n## Subsidiary conditions\n");
        out.push_str(&census_markdown(cs));
    }
    let controls: Vec<_> = report
        .suites
        .iter()
        .flat_map(|s| {
            s.checks
                .iter()
                .filter(|c| c.expect == Expectation::Fail)
                .map(move |c| (s, c))
        })
        .collect();
    if !controls.is_empty() {
        let _ = writeln!(out, "\n## Negative controls\n");
        let _ = writeln!(out, "| suite | check | residual | tol | failed as expected |");
        let _ = writeln!(out, "|---|---|---|---|---|");
        for (s, c) in controls {
            let _ = writeln!(
                out,
                "| {} | {} | {:.3e} | {:.1e} | {} |",
                s.suite,
                c.name,
                c.residual,
                c.tol,
                if c.pass { "no" } else { "yes" }
            );
        }
    }
    let bad: Vec<_> = report
        .suites
        .iter()
        .flat_map(|s| s.mismatches().map(move |c| (s, c)))
        .collect();
    if !bad.is_empty() {
        let _ = writeln!(out, "\n## Unexpected outcomes\n");
        for (s, c) in bad {
            let _ = writeln!(
                out,
                "- {}: {} (residual {:.3e}, tol {:.1e})",
                s.suite, c.name, c.residual, c.tol
            );
        }
    }
    out
}

fn write_file(path: &Path, text: &str) -> Result<()> {
    std::fs::write(path, text).map_err(|e| Error::Io {
        path: path.display().to_string(),
        message: e.to_string(),
    })
}

/// Write the requested renderings into `dir`, returning the paths written.
pub fn emit(report: &RunReport, format: OutputFormat, dir: &Path) -> Result<Vec<PathBuf>> {
    std::fs::create_dir_all(dir).map_err(|e| Error::Io {
        path: dir.display().to_string(),
        message: e.to_string(),
    })?;
    let mut written = Vec::new();
    if format.json() {
        let p = dir.join(JSON_FILE);
        write_file(&p, &to_json(report))?;
        written.push(p);
    }
    if format.markdown() {
        let p = dir.join(MARKDOWN_FILE);
        write_file(&p, &to_markdown(report))?;
        written.push(p);
    }
    Ok(written)
}
