//! The two centering constraints.
//!
//! An utterance after the first must have a center: it either makes
//! something the center with a starred NP or INFL, or contains a proform
//! that refers to the center. If an utterance contains pronouns, some
//! proform in it must refer to the center.
//!
//! A proform refers to the center when it resolves to register 0, to the
//! register the center is linked to after the utterance, or to a property
//! or dynamic individual whose definition reads register 0 (such a value
//! is re-evaluated relative to whatever the center is). Indexicals are not
//! counted as pronouns.

use std::fmt;

use serde::{Deserialize, Serialize};

use super::{DiscourseState, UtteranceSummary};
use crate::drt::Register;
use crate::fragment::{ProformClass, ProformUse};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CenteringPolicy {
    /// Violations are recorded and derivation continues.
    #[default]
    Warn,
    /// The first violation aborts the derivation.
    Strict,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Violation {
    NoCenter,
    NoPronounOnCenter,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Violation::NoCenter => "NoCenter",
            Violation::NoPronounOnCenter => "NoPronounOnCenter",
        })
    }
}

fn mentions_center(t: &crate::typelogic::Term) -> bool {
    t.registers().iter().any(Register::is_center)
}

pub(crate) fn refers_to_center(p: &ProformUse, ds: &DiscourseState) -> bool {
    let r = p.register;
    r.is_center() || Some(r) == ds.center_link || ds.definition(r).is_some_and(mentions_center)
}

/// Checks `u` against the state after it was processed.
pub fn check_centering_constraints(u: &UtteranceSummary, ds: &DiscourseState) -> Vec<Violation> {
    let mut out = Vec::new();
    let anaphoric: Vec<&ProformUse> = u
        .proforms
        .iter()
        .filter(|p| p.class != ProformClass::Indexical)
        .collect();
    let on_center = anaphoric.iter().any(|p| refers_to_center(p, ds));
    if u.number > 1 && u.center_intro.is_none() && !on_center {
        out.push(Violation::NoCenter);
    }
    let has_pronoun = anaphoric
        .iter()
        .any(|p| matches!(p.class, ProformClass::Pronoun | ProformClass::Possessive));
    if has_pronoun && !on_center {
        out.push(Violation::NoPronounOnCenter);
    }
    out
}
