use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::constraints::{check_centering_constraints, CenteringPolicy, Violation};
use super::{process_utterance, top_boxes, DiscourseError, DiscourseState, Transition};
use crate::drt::{merge, BoxProgram, Condition, Drs, NotMergeable, Register, RegisterKind};
use crate::fragment::{
    compose_tree, later_pronoun_targets, parse_utterance, tokenize, ComposeError, ComposeOptions,
    LexError, Lexicon, ParseError, ProformUse, Token,
};
use crate::typelogic::{beta_reduce, Term};

/// How genitives are read.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum DeriveMode {
    /// A genitive whose possessed index is picked up by a later pronoun
    /// introduces a dynamic individual.
    #[default]
    AsAnnotated,
    /// Only the plain extensional rules.
    StrictAnnotations,
}

/// Rule used to join adjacent boxes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum MergeRule {
    #[default]
    Conservative,
    /// Mutation hook: merge even when the second box reassigns a register.
    IgnoreReassignment,
}

impl MergeRule {
    pub fn apply(self, k1: &Drs, k2: &Drs) -> Result<Drs, NotMergeable> {
        match self {
            MergeRule::Conservative => merge(k1, k2),
            MergeRule::IgnoreReassignment => {
                let mut out = k1.clone();
                for r in &k2.universe {
                    if !out.universe.contains(r) {
                        out.universe.push(*r);
                    }
                }
                out.conditions.extend(k2.conditions.iter().cloned());
                Ok(out)
            }
        }
    }
}

#[derive(Debug, Clone, Default)]
pub struct DeriveOptions {
    pub mode: DeriveMode,
    pub policy: CenteringPolicy,
    pub merge: MergeRule,
    pub lexicon: Lexicon,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DeriveError {
    #[error("utterance {utterance}: {source}")]
    Lex { utterance: usize, source: LexError },
    #[error("utterance {utterance}: {source}")]
    Parse {
        utterance: usize,
        source: ParseError,
    },
    #[error("utterance {utterance}: {source}")]
    Compose {
        utterance: usize,
        source: ComposeError,
    },
    #[error("utterance {utterance}: {source}")]
    Discourse {
        utterance: usize,
        source: DiscourseError,
    },
    #[error("utterance {utterance}: definitions of {register} do not terminate")]
    CyclicDefinition {
        utterance: usize,
        register: Register,
    },
    #[error("utterance {utterance}: {register} is used but never defined")]
    Undefined {
        utterance: usize,
        register: Register,
    },
    #[error("utterance {utterance}: centering violated: {}", violations.iter().map(|v| v.to_string()).collect::<Vec<_>>().join(", "))]
    Constraint {
        utterance: usize,
        violations: Vec<Violation>,
    },
    #[error("empty discourse")]
    Empty,
}

impl DeriveError {
    pub fn utterance(&self) -> Option<usize> {
        match self {
            DeriveError::Lex { utterance, .. }
            | DeriveError::Parse { utterance, .. }
            | DeriveError::Compose { utterance, .. }
            | DeriveError::Discourse { utterance, .. }
            | DeriveError::CyclicDefinition { utterance, .. }
            | DeriveError::Undefined { utterance, .. }
            | DeriveError::Constraint { utterance, .. } => Some(*utterance),
            DeriveError::Empty => None,
        }
    }
}

/// Outcome of joining one utterance's boxes to the preceding discourse.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Junction {
    /// The utterance on the right of the boundary, from 1.
    pub utterance: usize,
    pub merged: bool,
    pub conflicts: Vec<Register>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct UtteranceRecord {
    pub number: usize,
    pub tokens: Vec<Token>,
    /// The composed term, before definitions are unfolded.
    pub composed: Term,
    /// After unfolding and β-reduction, with adjacent boxes merged.
    pub resolved: Term,
    pub transition: Transition,
    pub violations: Vec<Violation>,
    pub proforms: Vec<ProformUse>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Derivation {
    pub program: BoxProgram,
    pub utterances: Vec<UtteranceRecord>,
    /// One per utterance after the first.
    pub junctions: Vec<Junction>,
    pub state: DiscourseState,
}

impl Derivation {
    pub fn transitions(&self) -> Vec<Transition> {
        self.utterances.iter().map(|u| u.transition).collect()
    }

    pub fn violations(&self) -> impl Iterator<Item = (usize, &Violation)> {
        self.utterances
            .iter()
            .flat_map(|u| u.violations.iter().map(move |v| (u.number, v)))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("no definition of {0}")]
pub struct NoDefinition(pub Register);

/// The most recent `r = t` among the derivation's utterances.
pub fn lookup_definition(r: Register, d: &Derivation) -> Result<Term, NoDefinition> {
    for u in d.utterances.iter().rev() {
        for b in top_boxes(&u.resolved).into_iter().rev() {
            for c in b.conditions.iter().rev() {
                if let Condition::Eq(lhs, rhs) = c {
                    if *lhs == r {
                        return Ok(rhs.clone());
                    }
                }
            }
        }
    }
    Err(NoDefinition(r))
}

/// Splits a `.disc` source into tokenized utterances: one per line, `#`
/// comments and blank lines ignored.
pub fn parse_discourse(source: &str) -> Result<Vec<Vec<Token>>, DeriveError> {
    source
        .lines()
        .map(|l| l.split('#').next().unwrap_or("").trim())
        .filter(|l| !l.is_empty())
        .enumerate()
        .map(|(k, line)| {
            tokenize(line).map_err(|source| DeriveError::Lex {
                utterance: k + 1,
                source,
            })
        })
        .collect()
}

pub fn derive_text(source: &str, opts: &DeriveOptions) -> Result<Derivation, DeriveError> {
    derive_discourse(&parse_discourse(source)?, opts)
}

const STEP_LIMIT: usize = 1000;

struct Unfolder<'a> {
    env: &'a BTreeMap<Register, Term>,
    steps: usize,
    stuck: Option<Register>,
    undefined: Option<Register>,
}

impl Unfolder<'_> {
    /// Replaces every property or dynamic-individual register outside a
    /// defining equation by its value.
    fn unfold(&mut self, t: &Term) -> Term {
        match t {
            Term::Reg(r) if r.kind != RegisterKind::Entity => match self.env.get(r) {
                Some(v) => {
                    self.steps += 1;
                    if self.steps > STEP_LIMIT {
                        self.stuck.get_or_insert(*r);
                        return t.clone();
                    }
                    self.unfold(v)
                }
                None => {
                    self.undefined.get_or_insert(*r);
                    t.clone()
                }
            },
            Term::BoxLit(d) => Term::boxed(Drs::new(
                d.universe.clone(),
                d.conditions
                    .iter()
                    .map(|c| match c {
                        Condition::Eq(..) => c.clone(),
                        other => other.map_terms(&mut |x| self.unfold(x)),
                    })
                    .collect(),
            )),
            other => other.map_children(&mut |c| self.unfold(c)),
        }
    }
}

fn record_definitions(d: &Drs, env: &mut BTreeMap<Register, Term>) {
    for (r, rhs) in d.definitions() {
        if r.kind != RegisterKind::Entity {
            env.insert(r, rhs.clone());
        }
    }
}

/// Unfolds definitions left to right through an utterance's chain. Each
/// box's own definitions take effect before its conditions are unfolded.
fn resolve_utterance(
    t: &Term,
    env: &mut BTreeMap<Register, Term>,
    utterance: usize,
) -> Result<Term, DeriveError> {
    let mut out = Vec::new();
    let mut queue: Vec<Term> = t.seq_items().into_iter().cloned().rev().collect();
    let mut rounds = 0;
    while let Some(item) = queue.pop() {
        rounds += 1;
        if let Term::BoxLit(d) = &item {
            record_definitions(d, env);
        }
        let mut u = Unfolder {
            env,
            steps: 0,
            stuck: None,
            undefined: None,
        };
        let unfolded = beta_reduce(&u.unfold(&item));
        if let Some(register) = u.stuck {
            return Err(DeriveError::CyclicDefinition {
                utterance,
                register,
            });
        }
        if let Some(register) = u.undefined {
            return Err(DeriveError::Undefined {
                utterance,
                register,
            });
        }
        let items = unfolded.seq_items();
        if items.len() > 1 {
            if rounds > STEP_LIMIT {
                return Err(DeriveError::CyclicDefinition {
                    utterance,
                    register: Register::property(0),
                });
            }
            queue.extend(items.into_iter().cloned().rev());
            continue;
        }
        out.push(unfolded);
    }
    Ok(Term::seq_all(out))
}

fn simplify(t: &Term, rule: MergeRule) -> Term {
    crate::drt::simplify_with(t, &|a: &Drs, b: &Drs| rule.apply(a, b))
}

/// Greedy left-to-right merge of the discourse's boxes. At an utterance
/// boundary the incoming box is also kept apart when its universe
/// reintroduces a register that any earlier utterance already uses, so
/// every reassignment of the context stays visible as a `;`.
fn join_utterances(
    boxes: Vec<Drs>,
    first_box_of: &[usize],
    rule: MergeRule,
) -> (Vec<Drs>, Vec<Option<NotMergeable>>) {
    let mut out: Vec<Drs> = Vec::new();
    let mut joins = Vec::new();
    let mut earlier: BTreeSet<Register> = BTreeSet::new();
    let mut seen: BTreeSet<Register> = BTreeSet::new();
    for (i, d) in boxes.into_iter().enumerate() {
        let boundary = i > 0 && first_box_of.contains(&i);
        if boundary {
            earlier.extend(seen.iter().copied());
        }
        seen.extend(d.universe.iter().copied());
        seen.extend(d.condition_registers());
        let Some(acc) = out.last_mut() else {
            out.push(d);
            continue;
        };
        let reassigned: Vec<Register> = d
            .universe
            .iter()
            .copied()
            .filter(|r| earlier.contains(r))
            .collect();
        let result = if boundary && rule == MergeRule::Conservative && !reassigned.is_empty() {
            Err(NotMergeable {
                conflicts: reassigned,
            })
        } else {
            rule.apply(acc, &d)
        };
        match result {
            Ok(m) => {
                *acc = m;
                joins.push(None);
            }
            Err(e) => {
                joins.push(Some(e));
                out.push(d);
            }
        }
    }
    (out, joins)
}

pub fn derive_discourse(
    utterances: &[Vec<Token>],
    opts: &DeriveOptions,
) -> Result<Derivation, DeriveError> {
    if utterances.is_empty() {
        return Err(DeriveError::Empty);
    }
    let targets = match opts.mode {
        DeriveMode::AsAnnotated => later_pronoun_targets(utterances, &opts.lexicon),
        DeriveMode::StrictAnnotations => vec![BTreeSet::new(); utterances.len()],
    };
    let mut ds = DiscourseState::new();
    let mut records = Vec::new();
    let mut all_boxes: Vec<Drs> = Vec::new();
    let mut first_box_of: Vec<usize> = Vec::new();
    for (k, tokens) in utterances.iter().enumerate() {
        let number = k + 1;
        let tree = parse_utterance(tokens, &opts.lexicon).map_err(|source| DeriveError::Parse {
            utterance: number,
            source,
        })?;
        let copts = ComposeOptions {
            dynamic_genitives: targets[k].clone(),
        };
        let composed = compose_tree(&tree, &ds, &opts.lexicon, &copts).map_err(|source| {
            DeriveError::Compose {
                utterance: number,
                source,
            }
        })?;
        let mut env = ds.definitions();
        let resolved = resolve_utterance(&composed.term, &mut env, number)?;
        let resolved = simplify(&resolved, opts.merge);
        let boxes = BoxProgram::from_term(&resolved).map_err(|e| DeriveError::Discourse {
            utterance: number,
            source: DiscourseError::NotABox(e.0),
        })?;
        let (next, transition) = process_utterance(&ds, &resolved, composed.proforms.clone())
            .map_err(|source| DeriveError::Discourse {
                utterance: number,
                source,
            })?;
        let summary = next.history.last().expect("summary just pushed");
        let violations = check_centering_constraints(summary, &next);
        if opts.policy == CenteringPolicy::Strict && !violations.is_empty() {
            return Err(DeriveError::Constraint {
                utterance: number,
                violations,
            });
        }
        ds = next;
        first_box_of.push(all_boxes.len());
        all_boxes.extend(boxes.into_boxes());
        records.push(UtteranceRecord {
            number,
            tokens: tokens.clone(),
            composed: composed.term,
            resolved,
            transition,
            violations,
            proforms: composed.proforms,
        });
    }
    let (merged, joins) = join_utterances(all_boxes, &first_box_of, opts.merge);
    let junctions = first_box_of
        .iter()
        .enumerate()
        .skip(1)
        .map(|(k, &first)| {
            let j = &joins[first - 1];
            Junction {
                utterance: k + 1,
                merged: j.is_none(),
                conflicts: j.as_ref().map(|e| e.conflicts.clone()).unwrap_or_default(),
            }
        })
        .collect();
    Ok(Derivation {
        program: BoxProgram::from_boxes(merged),
        utterances: records,
        junctions,
        state: ds,
    })
}
