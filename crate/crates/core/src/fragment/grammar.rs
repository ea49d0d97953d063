//! Recursive-descent parser for utterances of the fragment.
//!
//! ```text
//! Utterance := "if" Clause "then"? Clause | Clause (Conn Clause)*
//! Clause    := NP INFL "NOT"? VP | NP INFL ("too" | "NOT")? | NP V_infl NP?
//! VP        := V_intr | V_tr NP | V_ctrl NP INFL
//! NP        := Name | Pron | Det N | Gen N | Gen N_compl Clause
//! ```
//!
//! An INFL with no verb phrase after it is an ellipsis site. Every
//! clause has exactly one INFL on its spine.

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::fragment::lexicon::{Lexicon, WordClass};
use crate::fragment::token::Token;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Label {
    S,
    NP,
    VP,
    Infl,
    /// INFL at an ellipsis site.
    Vpe,
    /// A verb carrying its own inflection (`walks`).
    InflV,
    V,
    N,
    Det,
    Gen,
    Name,
    Pron,
    Neg,
    Too,
    Conn,
}

impl Label {
    fn as_str(self) -> &'static str {
        match self {
            Label::S => "S",
            Label::NP => "NP",
            Label::VP => "VP",
            Label::Infl | Label::Vpe => "INFL",
            Label::InflV => "INFL+V",
            Label::V => "V",
            Label::N => "N",
            Label::Det => "Det",
            Label::Gen => "Gen",
            Label::Name => "Name",
            Label::Pron => "Pron",
            Label::Neg => "Neg",
            Label::Too => "Too",
            Label::Conn => "Conn",
        }
    }

    pub fn is_infl(self) -> bool {
        matches!(self, Label::Infl | Label::Vpe | Label::InflV)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ParseTree {
    pub label: Label,
    pub token: Option<Token>,
    pub children: Vec<ParseTree>,
}

impl ParseTree {
    fn leaf(label: Label, token: &Token) -> ParseTree {
        ParseTree {
            label,
            token: Some(token.clone()),
            children: vec![],
        }
    }

    fn node(label: Label, children: Vec<ParseTree>) -> ParseTree {
        ParseTree {
            label,
            token: None,
            children,
        }
    }

    pub fn child(&self, label: Label) -> Option<&ParseTree> {
        self.children.iter().find(|c| c.label == label)
    }

    pub fn leaves(&self) -> Vec<&Token> {
        let mut out = Vec::new();
        fn go<'a>(t: &'a ParseTree, out: &mut Vec<&'a Token>) {
            if let Some(tok) = &t.token {
                out.push(tok);
            }
            for c in &t.children {
                go(c, out);
            }
        }
        go(self, &mut out);
        out
    }

    /// Clauses in the tree, outermost first.
    pub fn clauses(&self) -> Vec<&ParseTree> {
        let mut out = Vec::new();
        fn go<'a>(t: &'a ParseTree, out: &mut Vec<&'a ParseTree>) {
            if t.label == Label::S && !t.children.iter().any(|c| c.label == Label::S) {
                out.push(t);
            }
            for c in &t.children {
                go(c, out);
            }
        }
        go(self, &mut out);
        out
    }
}

impl fmt::Display for ParseTree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label.as_str())?;
        if let Some(tok) = &self.token {
            let surface = if matches!(self.label, Label::Det) {
                tok.lower()
            } else {
                tok.surface.clone()
            };
            write!(f, "({surface}")?;
            if let Some(n) = tok.index {
                write!(f, ",{n}")?;
            }
            if tok.star {
                f.write_str(",*")?;
            }
            if self.label == Label::Vpe {
                f.write_str(",VPE")?;
            }
            return f.write_str(")");
        }
        f.write_str("(")?;
        for (k, c) in self.children.iter().enumerate() {
            if k > 0 {
                f.write_str(",")?;
            }
            write!(f, "{c}")?;
        }
        f.write_str(")")
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("parse error at token {position}: expected {expected}")]
pub struct ParseError {
    pub position: usize,
    pub expected: String,
}

struct Parser<'a> {
    toks: &'a [Token],
    pos: usize,
    lex: &'a Lexicon,
}

impl<'a> Parser<'a> {
    fn peek(&self) -> Option<&'a Token> {
        self.toks.get(self.pos)
    }

    fn class(&self) -> Option<WordClass> {
        self.peek().and_then(|t| self.lex.classify(t))
    }

    fn fail<T>(&self, expected: &str) -> Result<T, ParseError> {
        let expected = match self.peek() {
            Some(t) if self.lex.classify(t).is_none() => {
                format!("{expected} (unknown word `{}`)", t.surface)
            }
            _ => expected.to_string(),
        };
        Err(ParseError {
            position: self.pos,
            expected,
        })
    }

    fn bump(&mut self) -> &'a Token {
        let t = &self.toks[self.pos];
        self.pos += 1;
        t
    }

    fn at_clause_end(&self) -> bool {
        matches!(
            self.class(),
            None | Some(WordClass::Conn) | Some(WordClass::Then)
        ) && {
            // an unknown word is not a clause end
            self.peek().is_none_or(|t| self.lex.classify(t).is_some())
        }
    }

    fn need_index(&self, what: &str) -> Result<(), ParseError> {
        match self.peek() {
            Some(t) if t.index.is_some() => Ok(()),
            _ => self.fail(what),
        }
    }

    fn utterance(&mut self) -> Result<ParseTree, ParseError> {
        if self.class() == Some(WordClass::If) && !self.peek().is_some_and(|t| t.bracketed) {
            let conn = ParseTree::leaf(Label::Conn, self.bump());
            let antecedent = self.clause()?;
            if self.class() == Some(WordClass::Then) {
                self.pos += 1;
            }
            let consequent = self.clause()?;
            return Ok(ParseTree::node(
                Label::S,
                vec![conn, antecedent, consequent],
            ));
        }
        let first = self.clause()?;
        let mut parts = vec![first];
        while self.class() == Some(WordClass::Conn) {
            parts.push(ParseTree::leaf(Label::Conn, self.bump()));
            parts.push(self.clause()?);
        }
        Ok(if parts.len() == 1 {
            parts.pop().unwrap()
        } else {
            ParseTree::node(Label::S, parts)
        })
    }

    fn clause(&mut self) -> Result<ParseTree, ParseError> {
        let subject = self.np()?;
        let mut children = vec![subject];
        match self.class() {
            Some(WordClass::Infl) => {
                let infl = self.bump();
                let negated = self.class() == Some(WordClass::Neg);
                let neg = negated.then(|| ParseTree::leaf(Label::Neg, self.bump()));
                if self.starts_vp() {
                    if infl.index.is_none() {
                        return Err(ParseError {
                            position: self.pos - 1 - usize::from(negated),
                            expected: "an indexed INFL".into(),
                        });
                    }
                    children.push(ParseTree::leaf(Label::Infl, infl));
                    children.extend(neg);
                    children.push(self.vp()?);
                } else {
                    if infl.index.is_none() {
                        return Err(ParseError {
                            position: self.pos - 1 - usize::from(negated),
                            expected: "an indexed ellipsis site".into(),
                        });
                    }
                    children.push(ParseTree::leaf(Label::Vpe, infl));
                    children.extend(neg);
                    if !negated && self.class() == Some(WordClass::Too) {
                        children.push(ParseTree::leaf(Label::Too, self.bump()));
                    }
                }
            }
            Some(WordClass::Inflected(base)) => {
                children.push(ParseTree::leaf(Label::InflV, self.bump()));
                match self.lex.base_class(&base) {
                    Some(WordClass::Transitive(_)) => children.push(self.np()?),
                    Some(WordClass::Intransitive(_)) => {}
                    _ => return self.fail("a simple verb"),
                }
            }
            _ => return self.fail("INFL or an inflected verb"),
        }
        if !self.at_clause_end() {
            return self.fail("end of clause");
        }
        Ok(ParseTree::node(Label::S, children))
    }

    fn starts_vp(&self) -> bool {
        matches!(
            self.class(),
            Some(WordClass::Intransitive(_) | WordClass::Transitive(_) | WordClass::Control(_))
        )
    }

    fn vp(&mut self) -> Result<ParseTree, ParseError> {
        let class = self.class();
        let v = ParseTree::leaf(Label::V, self.bump());
        match class {
            Some(WordClass::Intransitive(_)) => Ok(ParseTree::node(Label::VP, vec![v])),
            Some(WordClass::Transitive(_)) => {
                let obj = self.np()?;
                Ok(ParseTree::node(Label::VP, vec![v, obj]))
            }
            Some(WordClass::Control(_)) => {
                let obj = self.np()?;
                if self.class() != Some(WordClass::Infl)
                    || self.peek().is_some_and(|t| t.index.is_none())
                {
                    return self.fail("an indexed ellipsis site after the object");
                }
                let site = ParseTree::leaf(Label::Vpe, self.bump());
                Ok(ParseTree::node(Label::VP, vec![v, obj, site]))
            }
            _ => unreachable!("starts_vp checked the class"),
        }
    }

    fn np(&mut self) -> Result<ParseTree, ParseError> {
        match self.class() {
            Some(WordClass::Det) => {
                self.need_index("an indexed determiner")?;
                let det = ParseTree::leaf(Label::Det, self.bump());
                if !matches!(self.class(), Some(WordClass::Noun(_))) {
                    return self.fail("a noun");
                }
                if self.peek().is_some_and(|t| t.index.is_some() || t.star) {
                    return self.fail("an unannotated noun after the determiner");
                }
                let n = ParseTree::leaf(Label::N, self.bump());
                Ok(ParseTree::node(Label::NP, vec![det, n]))
            }
            Some(WordClass::Genitive(_)) => {
                let gen_tok = self.bump();
                if gen_tok.index.is_none() {
                    self.pos -= 1;
                    return self.fail("an annotated possessive");
                }
                let gen = ParseTree::leaf(Label::Gen, gen_tok);
                match self.class() {
                    Some(WordClass::Noun(_)) => {
                        self.need_index("an indexed noun")?;
                        let n = ParseTree::leaf(Label::N, self.bump());
                        Ok(ParseTree::node(Label::NP, vec![gen, n]))
                    }
                    Some(WordClass::ComplementNoun(_)) => {
                        self.need_index("an indexed noun")?;
                        let n = ParseTree::leaf(Label::N, self.bump());
                        let complement = self.clause()?;
                        Ok(ParseTree::node(Label::NP, vec![gen, n, complement]))
                    }
                    _ => self.fail("a noun"),
                }
            }
            Some(WordClass::Pronoun | WordClass::Indexical(_)) => {
                let t = self.peek().unwrap();
                if t.index.is_none() && !t.star {
                    return self.fail("an annotated pronoun");
                }
                Ok(ParseTree::node(
                    Label::NP,
                    vec![ParseTree::leaf(Label::Pron, self.bump())],
                ))
            }
            Some(WordClass::Name) => {
                self.need_index("an indexed name")?;
                Ok(ParseTree::node(
                    Label::NP,
                    vec![ParseTree::leaf(Label::Name, self.bump())],
                ))
            }
            _ => self.fail("a noun phrase"),
        }
    }
}

pub fn parse_utterance(tokens: &[Token], lexicon: &Lexicon) -> Result<ParseTree, ParseError> {
    if tokens.is_empty() {
        return Err(ParseError {
            position: 0,
            expected: "an utterance".into(),
        });
    }
    let mut p = Parser {
        toks: tokens,
        pos: 0,
        lex: lexicon,
    };
    let tree = p.utterance()?;
    if p.pos != tokens.len() {
        return p.fail("end of utterance");
    }
    Ok(tree)
}
