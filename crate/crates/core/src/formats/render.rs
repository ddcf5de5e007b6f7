//! Plain-text reports: the per-instance table and the postulate report.

use std::fmt::Write;

use super::text::print_circuit;
use crate::circuit::{Circuit, VarTable};
use crate::classifier::{classify_mono, fact_formula, theory_verdict, Classifier, Verdict};
use crate::error::Result;
use crate::rectify::{classify_rectified, RectificationResult};
use crate::semantics::Enumerator;
use crate::verify::{PostulateReport, Status, Witness};

/// One row per instance: word, `Σ(x)`, `T(x)`, `F(T, x)` and the rectified
/// class. Classes print as the label name or its negation with `!`; `T` and
/// `F` stand for true and false.
pub fn render_table(
    clf: &Classifier,
    t: &Circuit,
    result: &RectificationResult,
    en: &Enumerator,
) -> Result<String> {
    let problem = clf.problem();
    let y = problem.label()?;
    let name = problem.table().name(y);
    let class = |positive: bool| {
        if positive {
            name.to_string()
        } else {
            format!("!{name}")
        }
    };
    let mut out = String::from("x sigma theory facts rectified\n");
    for x in problem.instances(en)? {
        let verdict = match theory_verdict(t, &x, problem, en)? {
            Verdict::Positive => class(true),
            Verdict::Negative => class(false),
            Verdict::Unconstrained => "T".to_string(),
            Verdict::Contradictory => "F".to_string(),
        };
        let fact = fact_formula(t, &x, problem, en)?;
        let facts = match fact.term().literals().next() {
            None => "T".to_string(),
            Some(lit) => class(lit.positive),
        };
        writeln!(
            out,
            "{} {} {} {} {}",
            x.word(),
            class(classify_mono(clf, &x, en)?),
            verdict,
            facts,
            class(classify_rectified(result, &x)?)
        )
        .expect("writing to a String");
    }
    Ok(out)
}

pub fn render_report(report: &PostulateReport, table: &VarTable) -> String {
    let mut out = String::new();
    for o in &report.outcomes {
        let _ = write!(out, "{} ", o.postulate);
        match &o.status {
            Status::Pass => {
                let _ = writeln!(out, "pass ({} checked)", o.checked);
            }
            Status::Fail(witnesses) => {
                let _ = write!(out, "FAIL ({} checked):", o.checked);
                for w in witnesses {
                    match w {
                        Witness::Instance(word) => {
                            let _ = write!(out, " {word}");
                        }
                        Witness::Inputs { sigma, theory } => {
                            let _ = write!(
                                out,
                                " [sigma {} theory {}]",
                                print_circuit(sigma, table),
                                print_circuit(theory, table)
                            );
                        }
                    }
                }
                out.push('\n');
            }
        }
    }
    out.push_str(if report.all_passed() {
        "all postulates hold\n"
    } else {
        "postulate violations found\n"
    });
    out
}
