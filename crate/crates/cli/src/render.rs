//! Markdown output.

use std::fmt::Write as _;

use troforge::closure::ClosureSummary;
use troforge::envelope::EnvelopeSummary;
use troforge::grids::AxiomReport;
use troforge::radical::RadicalSummary;

use crate::SweepRow;

fn blocks(b: &[(usize, usize)]) -> String {
    if b.is_empty() {
        return "0".into();
    }
    b.iter().map(|(n, m)| format!("M_{n},{m}")).collect::<Vec<_>>().join(" + ")
}

fn verdict(pass: bool) -> &'static str {
    if pass {
        "pass"
    } else {
        "FAIL"
    }
}

pub fn envelope(r: &EnvelopeSummary) -> String {
    let mut s = format!("## {}\n\n", r.spec);
    let _ = writeln!(s, "| factor dim | envelope dim | blocks | expected | theta residual | verdict |");
    let _ = writeln!(s, "|---|---|---|---|---|---|");
    let _ = writeln!(
        s,
        "| {} | {} | {} | {} | {:.2e} | {} |",
        r.factor_dim,
        r.envelope_dim,
        blocks(&r.blocks),
        blocks(&r.expected),
        r.theta_residual,
        verdict(r.pass)
    );
    let _ = writeln!(s, "\n| check | result | detail |\n|---|---|---|");
    for c in &r.checks {
        let _ = writeln!(s, "| {} | {} | {} |", c.name, verdict(c.pass), c.detail);
    }
    let _ = write!(s, "\nseed {}", r.seed);
    s
}

pub fn axioms(r: &AxiomReport) -> String {
    let mut s = format!(
        "## {} grid: {}\n\n{} triples checked, max residual {:.2e}\n",
        r.kind,
        verdict(r.passed),
        r.checked,
        r.max_residual
    );
    for v in &r.violations {
        let _ = write!(s, "\n- {} (residual {:.2e})", v.describe(), v.residual);
    }
    s
}

pub fn closure(c: &ClosureSummary, b: &[(usize, usize)], theta_residual: f64, universal: bool) -> String {
    format!(
        "| dim | blocks | iterations | generators | longest word | theta residual | word reversal |\n\
         |---|---|---|---|---|---|---|\n\
         | {} | {} | {} | {} | {} | {:.2e} | {} |",
        c.dim,
        blocks(b),
        c.iterations,
        c.generator_count,
        c.max_word_len,
        theta_residual,
        if universal { "consistent" } else { "inconsistent" }
    )
}

pub fn sweep(rows: &[SweepRow]) -> String {
    let mut s = String::from("| factor | factor dim | envelope dim | blocks | expected | verdict |\n|---|---|---|---|---|---|\n");
    for row in rows {
        match row {
            SweepRow::Report(r) => {
                let _ = writeln!(
                    s,
                    "| {} | {} | {} | {} | {} | {} |",
                    r.spec,
                    r.factor_dim,
                    r.envelope_dim,
                    blocks(&r.blocks),
                    blocks(&r.expected),
                    verdict(r.pass)
                );
            }
            SweepRow::Error { spec, error } => {
                let _ = writeln!(s, "| {spec} | | | {error} | | FAIL |");
            }
        }
    }
    s.trim_end().to_string()
}

pub fn radical(r: &RadicalSummary) -> String {
    let mut s = format!(
        "| blocks | radical | radical dim | abelian quotient |\n|---|---|---|---|\n| {} | {} | {} | {} |\n",
        blocks(&r.blocks),
        blocks(&r.radical_blocks),
        r.radical_dim,
        r.abelian_dim
    );
    if let Some(q) = r.sequence {
        let _ = write!(
            s,
            "\n0 -> {} -> {} -> {} -> 0: {}",
            q.left,
            q.middle,
            q.right,
            if q.exact { "exact" } else { "NOT exact" }
        );
        if let Some(c) = q.middle_closure {
            let _ = write!(s, " (middle by closure: {c})");
        }
    }
    s
}
