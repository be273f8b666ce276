use std::fmt::Write as _;

use qgames_core::classify::{Classification, ProfileEvidence, ProfileSource};
use qgames_core::game::{sig6, BimatrixGame, MixedStrategy};
use qgames_core::nash::{Equilibrium, EquilibriumKind};
use serde_json::{json, Value};

use crate::document::{state_to_json, Format};

/// A command result in both output formats.
#[derive(Debug, Clone, PartialEq)]
pub struct Report {
    pub json: Value,
    pub table: String,
}

impl Report {
    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Json => format!(
                "{}\n",
                serde_json::to_string_pretty(&self.json).expect("JSON values serialize")
            ),
            Format::Table => self.table.clone(),
        }
    }
}

pub(crate) fn game_section(title: &str, g: &BimatrixGame) -> String {
    format!("{title} ({}x{}):\n{g}", g.n_rows(), g.n_cols())
}

pub(crate) fn strategy_text(s: &MixedStrategy, labels: &[String]) -> String {
    let support = s.support(qgames_core::NASH_TOLERANCE);
    if let [i] = support.as_slice() {
        return labels[*i].clone();
    }
    support
        .iter()
        .map(|&i| format!("{} {}", sig6(s[i]), labels[i]))
        .collect::<Vec<_>>()
        .join(" + ")
}

pub(crate) fn equilibrium_json(g: &BimatrixGame, eq: &Equilibrium) -> Value {
    let names = |support: Vec<usize>, labels: &[String]| -> Vec<String> {
        support.into_iter().map(|i| labels[i].clone()).collect()
    };
    json!({
        "kind": match eq.kind {
            EquilibriumKind::Pure => "pure",
            EquilibriumKind::Mixed => "mixed",
        },
        "s1": eq.s1.probs(),
        "s2": eq.s2.probs(),
        "support1": names(eq.support1(), g.row_labels()),
        "support2": names(eq.support2(), g.col_labels()),
        "payoff": [eq.payoff.p1, eq.payoff.p2],
    })
}

pub(crate) fn equilibria_table(title: &str, g: &BimatrixGame, eqs: &[Equilibrium]) -> String {
    let mut out = format!("{title}: {}\n", eqs.len());
    for eq in eqs {
        let kind = match eq.kind {
            EquilibriumKind::Pure => "pure ",
            EquilibriumKind::Mixed => "mixed",
        };
        let _ = writeln!(
            out,
            "  {kind}  ({}, {})  payoff ({}, {})",
            strategy_text(&eq.s1, g.row_labels()),
            strategy_text(&eq.s2, g.col_labels()),
            sig6(eq.payoff.p1),
            sig6(eq.payoff.p2)
        );
    }
    out
}

fn source_name(source: ProfileSource) -> String {
    match source {
        ProfileSource::Mandatory(k) => format!("mandatory {}", k + 1),
        ProfileSource::Random(k) => format!("random {}", k + 1),
        ProfileSource::Custom => "custom".into(),
    }
}

fn evidence_json(e: &ProfileEvidence) -> Value {
    json!({
        "source": source_name(e.source),
        "t1": e.t1.probs(),
        "t2": e.t2.probs(),
        "mixture": e.mixture.weights(),
        "equivalent_state": state_to_json(&e.equivalent_state),
        "separability_defect": e.defect,
    })
}

pub(crate) fn classification_report(
    c: &Classification,
    labels1: &[String],
    labels2: &[String],
) -> Report {
    match c {
        Classification::Classical { profiles_checked } => Report {
            json: json!({"classification": "Classical", "profiles_checked": profiles_checked}),
            table: format!("Classical ({profiles_checked} profiles checked, all separable)\n"),
        },
        Classification::NonClassical {
            witness,
            violations,
            profiles_checked,
        } => {
            let mut table = format!(
                "NonClassical ({} of {profiles_checked} profiles non-separable)\nwitness ({}):\n",
                violations.len(),
                source_name(witness.source)
            );
            let _ = writeln!(table, "  player 1: {}", strategy_text(&witness.t1, labels1));
            let _ = writeln!(table, "  player 2: {}", strategy_text(&witness.t2, labels2));
            let weights: Vec<String> = witness.mixture.weights().iter().map(|w| sig6(*w)).collect();
            let _ = writeln!(table, "  diagonal: [{}]", weights.join(", "));
            let _ = writeln!(table, "  separability defect: {}", sig6(witness.defect));
            Report {
                json: json!({
                    "classification": "NonClassical",
                    "profiles_checked": profiles_checked,
                    "witness": evidence_json(witness),
                    "violations": violations.iter().map(evidence_json).collect::<Vec<_>>(),
                }),
                table,
            }
        }
    }
}
