//! Strict and sloppy readings of a proform embedded in an antecedent.
//!
//! In `C1 … [XP … [YP] …] … C2 … XP'` the embedded proform YP is sloppy
//! when it is annotated as the center, so that re-evaluating XP at XP'
//! reads whatever the center then is. Its strict reading annotates it with
//! the register C1 that the center was linked to in the antecedent.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::derive::{derive_discourse, Derivation, DeriveError, DeriveOptions};
use crate::drt::{Register, RegisterKind};
use crate::fragment::{parse_utterance, Label, Lexicon, ParseTree, Token, WordClass};

/// A token address: utterance and token number, both from 1.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Site {
    pub utterance: usize,
    pub token: usize,
}

impl fmt::Display for Site {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.utterance, self.token)
    }
}

impl FromStr for Site {
    type Err = String;

    fn from_str(s: &str) -> Result<Site, String> {
        let (u, t) = s.split_once(':').ok_or("expected U:T")?;
        let parse = |x: &str| x.trim().parse::<usize>().ok().filter(|&n| n > 0);
        match (parse(u), parse(t)) {
            (Some(utterance), Some(token)) => Ok(Site { utterance, token }),
            _ => Err("utterance and token numbers start at 1".into()),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ReadingsError {
    #[error("site {0} is outside the discourse")]
    OutOfRange(Site),
    #[error("site {0} is not an anaphoric site")]
    NotAnAnaphoricSite(Site),
    #[error(transparent)]
    Derive(#[from] DeriveError),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Reading {
    /// The sloppy variable as annotated for this reading, e.g. `his_*`.
    pub annotation: String,
    pub derivation: Derivation,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Readings {
    pub site: Site,
    /// Address of the sloppy variable YP.
    pub variable: Site,
    /// Register controlling YP in the antecedent utterance.
    pub controller: Option<Register>,
    pub sloppy: Reading,
    pub strict: Reading,
    /// No proform or embedding is involved: both readings are the input.
    pub trivial: bool,
    /// The antecedent is picked up as a plain individual, so it is not
    /// re-evaluated and only the strict reading is available.
    pub strict_only: bool,
}

impl Readings {
    pub fn pairs(&self) -> Vec<(&str, &Derivation)> {
        vec![
            (self.sloppy.annotation.as_str(), &self.sloppy.derivation),
            (self.strict.annotation.as_str(), &self.strict.derivation),
        ]
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum XpKind {
    Property,
    Nominal,
}

struct Antecedent {
    utterance: usize,
    kind: XpKind,
    index: u32,
    leaves: Vec<(Label, Token)>,
}

fn labeled_leaves(t: &ParseTree) -> Vec<(Label, Token)> {
    let mut out = Vec::new();
    fn go(t: &ParseTree, out: &mut Vec<(Label, Token)>) {
        if let Some(tok) = &t.token {
            out.push((t.label, tok.clone()));
        }
        for c in &t.children {
            go(c, out);
        }
    }
    go(t, &mut out);
    out
}

fn antecedents(t: &ParseTree, utterance: usize, out: &mut Vec<Antecedent>) {
    if t.label == Label::S {
        if let Some(spine) = t.children.get(1) {
            let index = spine.token.as_ref().and_then(|k| k.index);
            match (spine.label, index) {
                (Label::Infl, Some(n)) => {
                    let mut leaves: Vec<(Label, Token)> =
                        t.child(Label::Neg).map(labeled_leaves).unwrap_or_default();
                    leaves.extend(t.child(Label::VP).map(labeled_leaves).unwrap_or_default());
                    out.push(Antecedent {
                        utterance,
                        kind: XpKind::Property,
                        index: n,
                        leaves,
                    });
                }
                (Label::InflV, Some(n)) => {
                    let mut leaves = labeled_leaves(spine);
                    leaves.extend(t.children.get(2).map(labeled_leaves).unwrap_or_default());
                    out.push(Antecedent {
                        utterance,
                        kind: XpKind::Property,
                        index: n,
                        leaves,
                    });
                }
                _ => {}
            }
        }
    }
    if t.label == Label::NP && t.children.first().is_some_and(|c| c.label == Label::Gen) {
        if let Some(m) = t
            .children
            .get(1)
            .and_then(|n| n.token.as_ref())
            .and_then(|k| k.index)
        {
            out.push(Antecedent {
                utterance,
                kind: XpKind::Nominal,
                index: m,
                leaves: labeled_leaves(t),
            });
        }
    }
    for c in &t.children {
        antecedents(c, utterance, out);
    }
}

fn is_proform(label: Label, tok: &Token, lex: &Lexicon) -> bool {
    match label {
        Label::Vpe => true,
        Label::Pron => lex.classify(tok) == Some(WordClass::Pronoun),
        Label::Gen => lex.classify(tok) == Some(WordClass::Genitive(None)),
        _ => false,
    }
}

/// Which antecedent kind a proform can pick up, and by which index.
fn target(label: Label, tok: &Token) -> Option<(XpKind, u32)> {
    let index = tok.index.filter(|_| !tok.star)?;
    match label {
        Label::Vpe => Some((XpKind::Property, index)),
        Label::Pron => Some((XpKind::Nominal, index)),
        _ => None,
    }
}

fn star_annotation(tok: &Token) -> String {
    tok.reannotated(Some(0), true).to_string()
}

pub fn enumerate_readings(
    utterances: &[Vec<Token>],
    site: Site,
    opts: &DeriveOptions,
) -> Result<Readings, ReadingsError> {
    let lex = &opts.lexicon;
    let tokens_at = |s: Site| {
        utterances
            .get(s.utterance.wrapping_sub(1))
            .and_then(|u| u.get(s.token.wrapping_sub(1)))
    };
    tokens_at(site).ok_or(ReadingsError::OutOfRange(site))?;
    let base = derive_discourse(utterances, opts)?;

    let mut xps = Vec::new();
    let mut proforms: Vec<(Site, Label, Token)> = Vec::new();
    for (k, toks) in utterances.iter().enumerate() {
        let tree = parse_utterance(toks, lex).map_err(|source| DeriveError::Parse {
            utterance: k + 1,
            source,
        })?;
        antecedents(&tree, k + 1, &mut xps);
        for (label, tok) in labeled_leaves(&tree) {
            if is_proform(label, &tok, lex) {
                let s = Site {
                    utterance: k + 1,
                    token: tok.position + 1,
                };
                proforms.push((s, label, tok));
            }
        }
    }
    let (_, site_label, site_tok) = proforms
        .iter()
        .find(|(s, _, _)| *s == site)
        .cloned()
        .ok_or(ReadingsError::NotAnAnaphoricSite(site))?;

    let later = |a: Site, b: Site| (b.utterance, b.token) > (a.utterance, a.token);
    let contains = |xp: &Antecedent, s: Site| {
        xp.utterance == s.utterance && xp.leaves.iter().any(|(_, t)| t.position + 1 == s.token)
    };
    let xp_start = |xp: &Antecedent| Site {
        utterance: xp.utterance,
        token: xp
            .leaves
            .iter()
            .map(|(_, t)| t.position + 1)
            .min()
            .unwrap_or(1),
    };
    let referrer = |xp: &Antecedent| {
        proforms
            .iter()
            .filter(|(s, _, _)| later(xp_start(xp), *s) && !contains(xp, *s))
            .find(|(_, l, t)| target(*l, t) == Some((xp.kind, xp.index)))
    };

    // YP is the site itself if it sits inside a referenced antecedent,
    // otherwise the proform embedded in the site's own antecedent.
    let mut found = None;
    for xp in xps.iter().filter(|xp| contains(xp, site)) {
        if let Some(r) = referrer(xp) {
            found = Some((site, site_tok.clone(), xp, r.0));
            break;
        }
    }
    if found.is_none() {
        if let Some(t) = target(site_label, &site_tok) {
            let antecedent = xps.iter().rev().find(|xp| {
                (xp.kind, xp.index) == t && later(xp_start(xp), site) && !contains(xp, site)
            });
            if let Some(xp) = antecedent {
                let embedded = xp.leaves.iter().find(|(l, tok)| is_proform(*l, tok, lex));
                if let Some((_, tok)) = embedded {
                    let yp = Site {
                        utterance: xp.utterance,
                        token: tok.position + 1,
                    };
                    found = Some((yp, tok.clone(), xp, site));
                }
            }
        }
    }

    let Some((yp_site, yp_tok, xp, referring)) = found else {
        let annotation = site_tok.to_string();
        return Ok(Readings {
            site,
            variable: site,
            controller: None,
            sloppy: Reading {
                annotation: annotation.clone(),
                derivation: base.clone(),
            },
            strict: Reading {
                annotation,
                derivation: base,
            },
            trivial: true,
            strict_only: false,
        });
    };

    let yp_kind = if yp_tok_is_vpe(&proforms, yp_site) {
        RegisterKind::Property
    } else {
        RegisterKind::Entity
    };
    let controller = if yp_tok.star {
        base.state
            .history
            .get(xp.utterance - 1)
            .and_then(|h| h.center_link)
            .filter(|r| r.kind == yp_kind)
    } else {
        yp_tok.index.map(|n| Register::new(yp_kind, n))
    };
    let Some(c1) = controller else {
        return Err(ReadingsError::NotAnAnaphoricSite(site));
    };

    let with = |tok: Token| {
        let mut copy = utterances.to_vec();
        copy[yp_site.utterance - 1][yp_site.token - 1] = tok;
        copy
    };
    let sloppy_tok = yp_tok.reannotated(Some(0), true);
    let strict_tok = yp_tok.reannotated(Some(c1.index), false);
    let sloppy = derive_discourse(&with(sloppy_tok.clone()), opts)?;
    let strict = derive_discourse(&with(strict_tok.clone()), opts)?;

    let strict_only = sloppy
        .utterances
        .get(referring.utterance - 1)
        .and_then(|u| {
            u.proforms
                .iter()
                .find(|p| p.token.position + 1 == referring.token)
        })
        .is_some_and(|p| p.register.kind == RegisterKind::Entity);

    Ok(Readings {
        site,
        variable: yp_site,
        controller: Some(c1),
        sloppy: Reading {
            annotation: star_annotation(&yp_tok),
            derivation: sloppy,
        },
        strict: Reading {
            annotation: strict_tok.to_string(),
            derivation: strict,
        },
        trivial: false,
        strict_only,
    })
}

fn yp_tok_is_vpe(proforms: &[(Site, Label, Token)], s: Site) -> bool {
    proforms.iter().any(|(p, l, _)| *p == s && *l == Label::Vpe)
}
