//! Human-readable run reports: per-check verdict lines plus the summary
//! table enumerating every acceptance criterion and its owning experiment.

use crate::experiments::{CriterionResult, ExperimentOutcome, CRITERIA};

pub fn verdict_line(result: &CriterionResult) -> String {
    let verdict = if result.passed { "PASS" } else { "FAIL" };
    let tag = match result.criterion {
        Some(id) => format!("criterion {id:2}"),
        None => "supplement  ".to_string(),
    };
    format!(
        "{tag} {verdict} {} — {} (tolerance {}) [{:.1}s]",
        result.label, result.detail, result.tolerance, result.elapsed_s
    )
}

/// The full text report for a set of experiment runs.
pub fn render(seed: u64, workers: usize, outcomes: &[ExperimentOutcome]) -> String {
    let mut out = String::new();
    out.push_str(&format!(
        "cuelab experiment report (seed {seed}, {workers} worker{})\n\n",
        if workers == 1 { "" } else { "s" }
    ));
    for outcome in outcomes {
        out.push_str(&format!("== {} ==\n", outcome.name));
        for result in &outcome.results {
            out.push_str(&verdict_line(result));
            out.push('\n');
        }
        for (name, _) in &outcome.artifacts {
            out.push_str(&format!("wrote {name}\n"));
        }
        out.push('\n');
    }
    out.push_str("== acceptance criteria ==\n");
    let mut passed = 0;
    let mut failed = 0;
    for (id, label, owner) in CRITERIA {
        let result = outcomes
            .iter()
            .flat_map(|o| &o.results)
            .find(|r| r.criterion == Some(id));
        let status = match result {
            Some(r) if r.passed => {
                passed += 1;
                "PASS"
            }
            Some(_) => {
                failed += 1;
                "FAIL"
            }
            None => "not run",
        };
        out.push_str(&format!("{id:2}. {label:32} [{owner}] {status}\n"));
    }
    out.push_str(&format!("\n{passed} passed, {failed} failed\n"));
    out
}
