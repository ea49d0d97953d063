//! Per-utterance traces of a derivation, as line-oriented text or JSON.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::discourse::{Derivation, Transition, Violation};
use crate::fragment::detokenize;

/// How an utterance's first box joined the program before it.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", tag = "join")]
pub enum Join {
    /// The discourse-initial utterance.
    Initial,
    Merged,
    /// Kept apart by `;` because these registers would be reassigned.
    Sequenced {
        conflicts: Vec<String>,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TraceRecord {
    pub utterance: usize,
    pub text: String,
    pub composed: String,
    pub resolved: String,
    pub transition: Transition,
    pub violations: Vec<Violation>,
    pub join: Join,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Trace {
    pub records: Vec<TraceRecord>,
    pub program: String,
}

impl Trace {
    pub fn new(d: &Derivation) -> Trace {
        let records = d
            .utterances
            .iter()
            .map(|u| {
                let join = match d.junctions.iter().find(|j| j.utterance == u.number) {
                    None => Join::Initial,
                    Some(j) if j.merged => Join::Merged,
                    Some(j) => Join::Sequenced {
                        conflicts: j.conflicts.iter().map(|r| r.to_string()).collect(),
                    },
                };
                TraceRecord {
                    utterance: u.number,
                    text: detokenize(&u.tokens),
                    composed: u.composed.to_string(),
                    resolved: u.resolved.to_string(),
                    transition: u.transition,
                    violations: u.violations.clone(),
                    join,
                }
            })
            .collect();
        Trace {
            records,
            program: d.program.to_string(),
        }
    }

    /// Line-oriented rendering. The summary form has one line per
    /// utterance; the detailed form adds the composed and resolved terms.
    pub fn to_text(&self, detailed: bool) -> String {
        let mut out = String::new();
        for r in &self.records {
            let violations = if r.violations.is_empty() {
                "none".to_string()
            } else {
                r.violations
                    .iter()
                    .map(|v| v.to_string())
                    .collect::<Vec<_>>()
                    .join(", ")
            };
            let join = match &r.join {
                Join::Initial => "initial".to_string(),
                Join::Merged => "merged".to_string(),
                Join::Sequenced { conflicts } => {
                    format!("sequenced ({} reassigned)", conflicts.join(", "))
                }
            };
            if detailed {
                let _ = writeln!(out, "utterance {}: {}", r.utterance, r.text);
                let _ = writeln!(out, "  composed: {}", r.composed);
                let _ = writeln!(out, "  resolved: {}", r.resolved);
                let _ = writeln!(out, "  transition: {}", r.transition);
                let _ = writeln!(out, "  violations: {violations}");
                let _ = writeln!(out, "  join: {join}");
            } else {
                let _ = writeln!(
                    out,
                    "utterance {}: {} | {} | violations: {violations} | {join}",
                    r.utterance, r.text, r.transition
                );
            }
        }
        let _ = writeln!(out, "program: {}", self.program);
        out
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("trace serializes")
    }

    pub fn from_json(src: &str) -> Result<Trace, serde_json::Error> {
        serde_json::from_str(src)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::discourse::{derive_text, DeriveOptions};

    fn trace(src: &str) -> Trace {
        Trace::new(&derive_text(src, &DeriveOptions::default()).unwrap())
    }

    #[test]
    fn records_transitions_and_joins() {
        let t = trace("Tom_1* PRES_2 love his_* cat_3.\nJohn_4* does_2 too.");
        assert_eq!(t.records[0].join, Join::Initial);
        assert_eq!(t.records[1].transition, Transition::Shift);
        assert_eq!(
            t.records[1].join,
            Join::Sequenced {
                conflicts: vec!["u_0".into(), "u_3".into()]
            }
        );
        let text = t.to_text(false);
        assert!(text.contains("utterance 2: John_4* does_2 too | Shift | violations: none | sequenced (u_0, u_3 reassigned)"));
        assert!(t
            .to_text(true)
            .contains("  composed: [u_0, u_4 | u_0 = u_4, u_4 = John] ; P_2(u_4)"));
    }

    #[test]
    fn json_round_trips() {
        let t = trace("A_1* farmer walks.\nHe_* laughed.");
        let json = t.to_json();
        let back = Trace::from_json(&json).unwrap();
        assert_eq!(back, t);
        assert_eq!(back.to_json(), json);
        assert_eq!(back.to_text(true), t.to_text(true));
    }
}
