//! Syntax-driven composition of parse trees into terms.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::discourse::{resolve_anaphor, Accessible, ResolveError};
use crate::drt::{Condition, Drs, Register, RegisterKind};
use crate::fragment::grammar::{Label, ParseTree};
use crate::fragment::lexicon::{self, LexMode, Lexicon, LexiconError, WordClass, HOLE};
use crate::fragment::token::Token;
use crate::typelogic::{beta_reduce, substitute, Term};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ComposeError {
    #[error(transparent)]
    Lexicon(#[from] LexiconError),
    #[error("token {position}: {source}")]
    Resolve {
        position: usize,
        source: ResolveError,
    },
    #[error("token {position}: {message}")]
    Structure { position: usize, message: String },
}

#[derive(Debug, Clone, Default)]
pub struct ComposeOptions {
    /// Possessed indices whose genitive should introduce a dynamic
    /// individual instead of a plain one.
    pub dynamic_genitives: BTreeSet<u32>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ProformClass {
    Pronoun,
    /// The possessor of `his`/`its`.
    Possessive,
    Indexical,
    Ellipsis,
}

/// A resolved anaphoric token.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProformUse {
    pub token: Token,
    pub class: ProformClass,
    pub register: Register,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Composed {
    pub term: Term,
    pub proforms: Vec<ProformUse>,
}

/// Context threaded through one utterance: the discourse so far plus what
/// the utterance has introduced up to the current word.
struct Scope<'a, A: Accessible> {
    outer: &'a A,
    local: BTreeSet<Register>,
    center: Option<Option<Register>>,
}

impl<A: Accessible> Accessible for Scope<'_, A> {
    fn is_introduced(&self, r: Register) -> bool {
        self.local.contains(&r) || self.outer.is_introduced(r)
    }

    fn center_link(&self) -> Option<Register> {
        match self.center {
            Some(c) => c,
            None => self.outer.center_link(),
        }
    }
}

struct Composer<'a, A: Accessible> {
    lex: &'a Lexicon,
    opts: &'a ComposeOptions,
    scope: Scope<'a, A>,
    hoisted: Vec<Term>,
    proforms: Vec<ProformUse>,
}

fn tok(tree: &ParseTree) -> &Token {
    tree.token.as_ref().expect("leaf without token")
}

fn structure<T>(t: &Token, message: &str) -> Result<T, ComposeError> {
    Err(ComposeError::Structure {
        position: t.position,
        message: message.to_string(),
    })
}

impl<A: Accessible> Composer<'_, A> {
    fn introduce(&mut self, r: Register, center: bool) {
        self.scope.local.insert(r);
        if center {
            self.scope.local.insert(Register::new(r.kind, 0));
            self.scope.center = Some(Some(r));
        }
    }

    fn resolve(&self, t: &Token, kind: RegisterKind) -> Result<Register, ComposeError> {
        let index = if t.star { 0 } else { t.index.unwrap_or(0) };
        resolve_anaphor(kind, index, &self.scope).map_err(|source| ComposeError::Resolve {
            position: t.position,
            source,
        })
    }

    fn record(&mut self, t: &Token, class: ProformClass, register: Register) {
        self.proforms.push(ProformUse {
            token: t.clone(),
            class,
            register,
        });
    }

    fn utterance(&mut self, tree: &ParseTree) -> Result<Term, ComposeError> {
        let clauses: Vec<&ParseTree> = tree
            .children
            .iter()
            .filter(|c| c.label == Label::S)
            .collect();
        if clauses.is_empty() {
            return self.clause(tree);
        }
        if let Some(first) = tree.children.first().filter(|c| c.label == Label::Conn) {
            let cond = self.lex.lookup(tok(first), LexMode::Plain)?;
            let p = self.clause(clauses[0])?;
            let q = self.clause(clauses[1])?;
            return Ok(Term::apps(cond, [p, q]));
        }
        let mut acc = self.clause(clauses[0])?;
        let mut pending = None;
        for c in &tree.children[1..] {
            if c.label == Label::Conn {
                pending = Some(self.lex.lookup(tok(c), LexMode::Plain)?);
            } else {
                let next = self.clause(c)?;
                acc = Term::apps(
                    pending.take().expect("connective between clauses"),
                    [acc, next],
                );
            }
        }
        Ok(acc)
    }

    fn clause(&mut self, s: &ParseTree) -> Result<Term, ComposeError> {
        let subject = self.np(&s.children[0])?;
        let spine = &s.children[1];
        let negated = s.child(Label::Neg).is_some();
        let property = match spine.label {
            Label::Infl => {
                let vp = self.vp(s.child(Label::VP).expect("INFL clause has a VP"))?;
                let vp = if negated {
                    Term::app(lexicon::negation(), vp)
                } else {
                    vp
                };
                self.infl(tok(spine), vp)?
            }
            Label::Vpe => {
                let p = self.ellipsis(tok(spine))?;
                if negated {
                    Term::app(lexicon::negation(), p)
                } else {
                    p
                }
            }
            Label::InflV => {
                let t = tok(spine);
                let verb = self.lex.lookup(t, LexMode::Plain)?;
                let vp = match s.children.get(2).filter(|c| c.label == Label::NP) {
                    Some(obj) => Term::app(verb, self.np(obj)?),
                    None => verb,
                };
                if t.index.is_some() {
                    self.infl(t, vp)?
                } else {
                    vp
                }
            }
            _ => return structure(tok(spine), "clause without INFL"),
        };
        Ok(Term::app(subject, property))
    }

    fn infl(&mut self, t: &Token, vp: Term) -> Result<Term, ComposeError> {
        let n = t.index.expect("indexed INFL");
        let template = self.lex.infl(n, t.star);
        self.introduce(Register::property(n), t.star);
        Ok(Term::app(template, vp))
    }

    fn ellipsis(&mut self, t: &Token) -> Result<Term, ComposeError> {
        let r = self.resolve(t, RegisterKind::Property)?;
        self.record(t, ProformClass::Ellipsis, r);
        Ok(Term::reg(r))
    }

    fn vp(&mut self, vp: &ParseTree) -> Result<Term, ComposeError> {
        let verb_tok = tok(&vp.children[0]);
        let verb = self.lex.lookup(verb_tok, LexMode::Plain)?;
        match vp.children.len() {
            1 => Ok(verb),
            2 => {
                let obj = self.np(&vp.children[1])?;
                Ok(Term::app(verb, obj))
            }
            _ => {
                let obj = self.np(&vp.children[1])?;
                let complement = self.ellipsis(tok(&vp.children[2]))?;
                Ok(Term::apps(verb, [obj, complement]))
            }
        }
    }

    /// Indexicals introduce their referent on first mention. The
    /// introduction is hoisted to the front of the utterance so that a
    /// property defined around the mention does not re-introduce it.
    fn indexical(&mut self, t: &Token, constant: &str) -> Result<Register, ComposeError> {
        let Some(n) = t.index.filter(|&n| n > 0) else {
            return structure(t, "indexicals need a positive index");
        };
        let r = Register::entity(n);
        if self.scope.is_introduced(r) {
            if t.star {
                self.hoisted.push(Term::boxed(Drs::new(
                    vec![Register::entity(0)],
                    vec![Condition::eq(Register::entity(0), Term::reg(r))],
                )));
                self.introduce(r, true);
            }
            self.record(t, ProformClass::Indexical, r);
            return Ok(r);
        }
        let mut universe = vec![r];
        let mut conds = vec![Condition::eq(r, Term::entity(constant))];
        if t.star {
            universe.insert(0, Register::entity(0));
            conds.insert(0, Condition::eq(Register::entity(0), Term::reg(r)));
        }
        self.hoisted.push(Term::boxed(Drs::new(universe, conds)));
        self.introduce(r, t.star);
        Ok(r)
    }

    fn np(&mut self, np: &ParseTree) -> Result<Term, ComposeError> {
        let head = &np.children[0];
        let t = tok(head);
        match head.label {
            Label::Det => {
                let mode = if t.star {
                    LexMode::Starred
                } else {
                    LexMode::Plain
                };
                let det = self.lex.lookup(t, mode)?;
                let noun = self.lex.lookup(tok(&np.children[1]), LexMode::Plain)?;
                self.introduce(
                    Register::entity(t.index.expect("indexed determiner")),
                    t.star,
                );
                Ok(Term::app(det, noun))
            }
            Label::Name => {
                let mode = if t.star {
                    LexMode::Starred
                } else {
                    LexMode::Plain
                };
                let q = self.lex.lookup(t, mode)?;
                self.introduce(Register::entity(t.index.expect("indexed name")), t.star);
                Ok(q)
            }
            Label::Pron => match self.lex.classify(t) {
                Some(WordClass::Indexical(c)) => {
                    let r = self.indexical(t, c)?;
                    Ok(fill(lexicon::pronoun(), r))
                }
                _ => {
                    if !t.star {
                        let x = Register::dynamic(t.index.expect("annotated pronoun"));
                        if self.scope.is_introduced(x) {
                            self.record(t, ProformClass::Pronoun, x);
                            return Ok(Term::reg(x));
                        }
                    }
                    let r = self.resolve(t, RegisterKind::Entity)?;
                    self.record(t, ProformClass::Pronoun, r);
                    Ok(fill(lexicon::pronoun(), r))
                }
            },
            Label::Gen => {
                let possessor = match self.lex.classify(t) {
                    Some(WordClass::Genitive(Some(c))) => self.indexical(t, c)?,
                    _ => {
                        let r = self.resolve(t, RegisterKind::Entity)?;
                        self.record(t, ProformClass::Possessive, r);
                        r
                    }
                };
                let noun_tok = tok(&np.children[1]);
                let m = noun_tok.index.expect("indexed possessed noun");
                let dynamic = self.opts.dynamic_genitives.contains(&m);
                let mode = if dynamic {
                    LexMode::Dynamic
                } else {
                    LexMode::Plain
                };
                let template = self.lex.lookup(&Token::indexed("his", m, false), mode)?;
                let mut noun = self
                    .lex
                    .lookup(&Token::word(&noun_tok.surface), LexMode::Plain)?;
                if let Some(complement) = np.children.get(2) {
                    let c = self.clause(complement)?;
                    noun = Term::app(noun, c);
                }
                self.introduce(Register::entity(m), false);
                if dynamic {
                    self.introduce(Register::dynamic(m), false);
                }
                Ok(Term::app(fill(template, possessor), noun))
            }
            _ => structure(t, "unexpected noun phrase"),
        }
    }
}

fn fill(template: Term, r: Register) -> Term {
    substitute(&template, HOLE, &Term::reg(r))
}

/// Composes one utterance against the discourse context `ds`. The result
/// is β-normal; property and dynamic-individual registers remain
/// unsubstituted.
pub fn compose_tree<A: Accessible>(
    tree: &ParseTree,
    ds: &A,
    lexicon: &Lexicon,
    opts: &ComposeOptions,
) -> Result<Composed, ComposeError> {
    let mut c = Composer {
        lex: lexicon,
        opts,
        scope: Scope {
            outer: ds,
            local: BTreeSet::new(),
            center: None,
        },
        hoisted: Vec::new(),
        proforms: Vec::new(),
    };
    let main = c.utterance(tree)?;
    let mut items = std::mem::take(&mut c.hoisted);
    items.push(main);
    let term = beta_reduce(&Term::seq_all(items));
    debug_assert!(term.free_vars().is_empty(), "open term {term}");
    Ok(Composed {
        term,
        proforms: c.proforms,
    })
}

/// Which possessed indices are picked up by a pronoun in a later
/// utterance. Under the dynamic genitive rule exactly these introduce a
/// dynamic individual.
pub fn later_pronoun_targets(utterances: &[Vec<Token>], lexicon: &Lexicon) -> Vec<BTreeSet<u32>> {
    let mut out = vec![BTreeSet::new(); utterances.len()];
    let mut seen = BTreeSet::new();
    for (k, utt) in utterances.iter().enumerate().rev() {
        out[k] = seen.clone();
        for t in utt {
            if lexicon.classify(t) == Some(WordClass::Pronoun) && !t.star {
                seen.extend(t.index);
            }
        }
    }
    out
}
