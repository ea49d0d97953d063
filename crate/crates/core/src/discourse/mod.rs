//! Discourse processing with a center.
//!
//! Index 0 of the context holds the discourse center. A starred NP or
//! INFL re-introduces register 0 and equates it with its own register;
//! when the equated register changes from one utterance to the next the
//! center has shifted. Proforms are resolved by index against what the
//! discourse has introduced, and properties or dynamic individuals picked
//! up by ellipsis and paycheck pronouns are unfolded in the context of the
//! utterance that uses them.

mod constraints;
mod derive;
mod readings;

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::drt::{Condition, Drs, Register, RegisterKind};
use crate::fragment::ProformUse;
use crate::typelogic::Term;

pub use constraints::{check_centering_constraints, CenteringPolicy, Violation};
pub use derive::{
    derive_discourse, derive_text, lookup_definition, parse_discourse, Derivation, DeriveError,
    DeriveMode, DeriveOptions, Junction, MergeRule, NoDefinition, UtteranceRecord,
};
pub use readings::{enumerate_readings, Reading, Readings, ReadingsError, Site};

/// What can tell whether a register is available for reference.
pub trait Accessible {
    fn is_introduced(&self, r: Register) -> bool;
    /// The register currently equated with the center.
    fn center_link(&self) -> Option<Register>;
}

#[derive(Debug, Clone, PartialEq, Eq, Error, Serialize, Deserialize)]
pub enum ResolveError {
    #[error("no antecedent for {kind} index {index}")]
    UnresolvedAnaphor { kind: RegisterKind, index: u32 },
    #[error("index {index} names a {found}, not a {expected}")]
    KindMismatch {
        index: u32,
        expected: RegisterKind,
        found: RegisterKind,
    },
}

const KINDS: [RegisterKind; 3] = [
    RegisterKind::Entity,
    RegisterKind::Property,
    RegisterKind::DynamicIndividual,
];

/// `dr(ant(·))`: the register of the antecedent with this index. Index 0
/// asks for the center, whose kind is that of the register it is linked to.
pub fn resolve_anaphor(
    kind: RegisterKind,
    index: u32,
    ds: &impl Accessible,
) -> Result<Register, ResolveError> {
    if index == 0 {
        return match ds.center_link() {
            Some(link) if link.kind == kind => Ok(Register::new(kind, 0)),
            Some(link) => Err(ResolveError::KindMismatch {
                index,
                expected: kind,
                found: link.kind,
            }),
            None => Err(ResolveError::UnresolvedAnaphor { kind, index }),
        };
    }
    let r = Register::new(kind, index);
    if ds.is_introduced(r) {
        return Ok(r);
    }
    match KINDS
        .iter()
        .find(|&&k| ds.is_introduced(Register::new(k, index)))
    {
        Some(&found) => Err(ResolveError::KindMismatch {
            index,
            expected: kind,
            found,
        }),
        None => Err(ResolveError::UnresolvedAnaphor { kind, index }),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Transition {
    Establish,
    Continuation,
    Shift,
}

impl fmt::Display for Transition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Transition::Establish => "Establish",
            Transition::Continuation => "Continuation",
            Transition::Shift => "Shift",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Introduction {
    /// Utterance number, from 1.
    pub utterance: usize,
    /// The most recent defining equation's right-hand side.
    pub definition: Option<Term>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct UtteranceSummary {
    pub number: usize,
    pub transition: Transition,
    /// The register equated with the center by this utterance, if any.
    pub center_intro: Option<Register>,
    pub center_link: Option<Register>,
    pub proforms: Vec<ProformUse>,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct DiscourseState {
    pub introduced: BTreeMap<Register, Introduction>,
    pub center_link: Option<Register>,
    pub history: Vec<UtteranceSummary>,
}

impl Accessible for DiscourseState {
    fn is_introduced(&self, r: Register) -> bool {
        self.introduced.contains_key(&r)
    }

    fn center_link(&self) -> Option<Register> {
        self.center_link
    }
}

impl DiscourseState {
    pub fn new() -> DiscourseState {
        DiscourseState::default()
    }

    pub fn definition(&self, r: Register) -> Option<&Term> {
        self.introduced.get(&r)?.definition.as_ref()
    }

    /// Definitions of property and dynamic-individual registers.
    pub fn definitions(&self) -> BTreeMap<Register, Term> {
        self.introduced
            .iter()
            .filter(|(r, _)| r.kind != RegisterKind::Entity)
            .filter_map(|(r, i)| Some((*r, i.definition.clone()?)))
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error, Serialize, Deserialize)]
pub enum DiscourseError {
    #[error("{0} is introduced twice in one utterance")]
    DoubleIntroduction(Register),
    #[error("utterance term is not a box program: {0}")]
    NotABox(String),
}

/// Top-level boxes of an utterance term; anything else in the chain (an
/// unsubstituted application) is skipped.
pub(crate) fn top_boxes(t: &Term) -> Vec<&Drs> {
    t.seq_items()
        .into_iter()
        .filter_map(|i| match i {
            Term::BoxLit(d) => Some(d),
            _ => None,
        })
        .collect()
}

/// Records what the utterance introduces and classifies its transition.
pub fn process_utterance(
    ds: &DiscourseState,
    t: &Term,
    proforms: Vec<ProformUse>,
) -> Result<(DiscourseState, Transition), DiscourseError> {
    let number = ds.history.len() + 1;
    let mut next = ds.clone();
    let mut seen: Vec<Register> = Vec::new();
    let mut center_intro = None;
    for d in top_boxes(t) {
        for r in &d.universe {
            if seen.contains(r) {
                return Err(DiscourseError::DoubleIntroduction(*r));
            }
            seen.push(*r);
            next.introduced.insert(
                *r,
                Introduction {
                    utterance: number,
                    definition: None,
                },
            );
        }
        for c in &d.conditions {
            if let Condition::Eq(r, rhs) = c {
                if let Some(i) = next.introduced.get_mut(r) {
                    i.definition = Some(rhs.clone());
                }
                if r.is_center() {
                    if let Term::Reg(link) = rhs {
                        if link.kind == r.kind && !link.is_center() {
                            center_intro = Some(*link);
                        }
                    }
                }
            }
        }
    }
    if let Some(link) = center_intro {
        next.center_link = Some(link);
    }
    // A center set for the first time is established, not shifted to.
    let transition =
        if ds.history.is_empty() || ds.center_link.is_none() && next.center_link.is_some() {
            Transition::Establish
        } else if next.center_link == ds.center_link {
            Transition::Continuation
        } else {
            Transition::Shift
        };
    next.history.push(UtteranceSummary {
        number,
        transition,
        center_intro,
        center_link: next.center_link,
        proforms,
    });
    Ok((next, transition))
}

#[cfg(test)]
mod tests;
