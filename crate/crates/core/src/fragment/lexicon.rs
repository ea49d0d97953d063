//! Word classes and the term templates they denote.
//!
//! Templates that depend on context contain the hole `δ`, a free variable
//! standing for the antecedent's discourse referent. Composition replaces
//! it with the register found in the context.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::drt::{Condition, Drs, Register};
use crate::fragment::token::Token;
use crate::typelogic::{Term, Type};

/// Name of the antecedent hole in anaphoric templates.
pub const HOLE: &str = "δ";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum LexMode {
    Plain,
    Starred,
    Anaphoric,
    Dynamic,
}

impl fmt::Display for LexMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            LexMode::Plain => "plain",
            LexMode::Starred => "starred",
            LexMode::Anaphoric => "anaphoric",
            LexMode::Dynamic => "dynamic",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum WordClass {
    Det,
    /// Proper names are an open class: any capitalized word not listed.
    Name,
    Pronoun,
    /// `I`, `me`, `you`, denoting the named constant.
    Indexical(&'static str),
    /// `his`, `its`: possessor is a pronoun. `my`, `your`: an indexical.
    Genitive(Option<&'static str>),
    Noun(String),
    /// A noun taking a clausal complement, like `belief-that`.
    ComplementNoun(String),
    Intransitive(String),
    Transitive(String),
    /// `want NP to`: subject-control verb with an elided complement.
    Control(String),
    /// An inflected verb form, listed with its base.
    Inflected(String),
    Infl,
    Neg,
    Too,
    Conn,
    If,
    Then,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LexiconError {
    #[error("unknown word `{0}`")]
    UnknownWord(String),
    #[error("`{word}` has no {mode} entry")]
    ModeUnavailable { word: String, mode: LexMode },
    #[error("`{0}` needs an index")]
    MissingIndex(String),
}

#[derive(Debug, Clone)]
pub struct Lexicon {
    words: BTreeMap<String, WordClass>,
    /// Mutation hook for golden tests: starred NPs leave out `u_0 = u_n`.
    pub drop_center_equation: bool,
}

const NOUNS: &[&str] = &[
    "farmer", "cat", "dog", "donkey", "paycheck", "man", "woman", "book", "car",
];
const COMPLEMENT_NOUNS: &[(&str, &str)] = &[("belief-that", "belief"), ("fear-that", "fear")];
const INTRANSITIVE: &[&str] = &[
    "walk", "laugh", "drink", "gamble", "bark", "sleep", "run", "smile", "sing", "leave",
];
const TRANSITIVE: &[&str] = &[
    "love", "spend", "save", "help", "kiss", "conceal", "see", "like", "own", "beat", "feed",
];
const IRREGULAR: &[(&str, &str)] = &[
    ("spent", "spend"),
    ("drank", "drink"),
    ("saw", "see"),
    ("ran", "run"),
    ("sang", "sing"),
    ("left", "leave"),
    ("fed", "feed"),
];
const INFL: &[&str] = &[
    "pres", "past", "will", "do", "does", "did", "should", "would", "can", "could", "must",
    "might", "to",
];

fn regular_forms(base: &str) -> Vec<String> {
    let third = if base.ends_with('s')
        || base.ends_with("sh")
        || base.ends_with("ch")
        || base.ends_with('x')
    {
        format!("{base}es")
    } else {
        format!("{base}s")
    };
    let past = if base.ends_with('e') {
        format!("{base}d")
    } else {
        format!("{base}ed")
    };
    vec![third, past]
}

impl Default for Lexicon {
    fn default() -> Lexicon {
        Lexicon::standard()
    }
}

impl Lexicon {
    pub fn standard() -> Lexicon {
        let mut words = BTreeMap::new();
        for d in ["a", "an"] {
            words.insert(d.to_string(), WordClass::Det);
        }
        for p in ["he", "him", "she", "her", "it"] {
            words.insert(p.to_string(), WordClass::Pronoun);
        }
        words.insert("i".into(), WordClass::Indexical("I"));
        words.insert("me".into(), WordClass::Indexical("I"));
        words.insert("you".into(), WordClass::Indexical("You"));
        words.insert("his".into(), WordClass::Genitive(None));
        words.insert("its".into(), WordClass::Genitive(None));
        words.insert("my".into(), WordClass::Genitive(Some("I")));
        words.insert("your".into(), WordClass::Genitive(Some("You")));
        for n in NOUNS {
            words.insert(n.to_string(), WordClass::Noun(n.to_string()));
        }
        for (w, pred) in COMPLEMENT_NOUNS {
            words.insert(w.to_string(), WordClass::ComplementNoun(pred.to_string()));
        }
        let mut verbs: Vec<&str> = Vec::new();
        for v in INTRANSITIVE {
            words.insert(v.to_string(), WordClass::Intransitive(v.to_string()));
            verbs.push(v);
        }
        for v in TRANSITIVE {
            words.insert(v.to_string(), WordClass::Transitive(v.to_string()));
            verbs.push(v);
        }
        words.insert("want".into(), WordClass::Control("want".into()));
        verbs.push("want");
        for v in verbs {
            for form in regular_forms(v) {
                words
                    .entry(form)
                    .or_insert_with(|| WordClass::Inflected(v.to_string()));
            }
        }
        for (form, base) in IRREGULAR {
            words.insert(form.to_string(), WordClass::Inflected(base.to_string()));
        }
        for i in INFL {
            words.insert(i.to_string(), WordClass::Infl);
        }
        words.insert("not".into(), WordClass::Neg);
        words.insert("too".into(), WordClass::Too);
        words.insert("and".into(), WordClass::Conn);
        words.insert("if".into(), WordClass::If);
        words.insert("then".into(), WordClass::Then);
        Lexicon {
            words,
            drop_center_equation: false,
        }
    }

    pub fn infl(&self, n: u32, starred: bool) -> Term {
        infl(n, starred)
    }

    fn starred_variant(&self, t: Term) -> Term {
        if !self.drop_center_equation {
            return t;
        }
        let center = Register::entity(0);
        strip_center_equation(&t, center)
    }

    pub fn insert(&mut self, word: &str, class: WordClass) {
        self.words.insert(word.to_lowercase(), class);
    }

    pub fn words(&self) -> impl Iterator<Item = (&str, &WordClass)> {
        self.words.iter().map(|(w, c)| (w.as_str(), c))
    }

    /// Bracketed connectives are always connectives; capitalized words
    /// outside the closed classes are names.
    pub fn classify(&self, tok: &Token) -> Option<WordClass> {
        if tok.bracketed {
            return Some(WordClass::Conn);
        }
        if let Some(c) = self.words.get(&tok.lower()) {
            return Some(c.clone());
        }
        tok.surface
            .chars()
            .next()
            .filter(char::is_ascii_uppercase)
            .map(|_| WordClass::Name)
    }

    /// The class a verb form belongs to once inflection is stripped.
    pub fn base_class(&self, base: &str) -> Option<WordClass> {
        match self.words.get(base)? {
            WordClass::Inflected(b) => self.words.get(b).cloned(),
            c => Some(c.clone()),
        }
    }

    /// Instantiates the entry for `tok` in the requested mode.
    ///
    /// Genitives read the token's index as the index of the possessed
    /// object; the possessor is left as the hole.
    pub fn lookup(&self, tok: &Token, mode: LexMode) -> Result<Term, LexiconError> {
        let class = self
            .classify(tok)
            .ok_or_else(|| LexiconError::UnknownWord(tok.surface.clone()))?;
        let unavailable = || LexiconError::ModeUnavailable {
            word: tok.surface.clone(),
            mode,
        };
        let index = || {
            tok.index
                .ok_or_else(|| LexiconError::MissingIndex(tok.surface.clone()))
        };
        use LexMode::*;
        Ok(match (&class, mode) {
            (WordClass::Det, Plain) => indefinite(index()?, false),
            (WordClass::Det, Starred) => self.starred_variant(indefinite(index()?, true)),
            (WordClass::Name, Plain) => name(&tok.surface, index()?, false),
            (WordClass::Name, Starred) => self.starred_variant(name(&tok.surface, index()?, true)),
            (WordClass::Indexical(c), Plain) => name(c, index()?, false),
            (WordClass::Indexical(c), Starred) => self.starred_variant(name(c, index()?, true)),
            (WordClass::Pronoun | WordClass::Indexical(_), Anaphoric) => pronoun(),
            (WordClass::Pronoun, Dynamic) => Term::var(HOLE, Type::quantifier()),
            (WordClass::Genitive(_), Plain) => genitive(index()?),
            (WordClass::Genitive(_), Dynamic) => dynamic_genitive(index()?),
            (WordClass::Noun(p), Plain) => one_place(p),
            (WordClass::ComplementNoun(p), Plain) => complement_noun(p),
            (WordClass::Intransitive(p), Plain) => one_place(p),
            (WordClass::Transitive(p), Plain) => transitive(p),
            (WordClass::Control(p), Plain) => control(p),
            (WordClass::Inflected(base), Plain) => {
                return self.lookup(
                    &Token {
                        surface: base.clone(),
                        ..tok.clone()
                    },
                    Plain,
                )
            }
            (WordClass::Infl, Plain) => infl(index()?, false),
            (WordClass::Infl, Starred) => infl(index()?, true),
            (WordClass::Infl, Anaphoric) => Term::var(HOLE, Type::property()),
            (WordClass::Neg, Plain) => negation(),
            (WordClass::Conn, Plain) => conjunction(),
            (WordClass::If, Plain) => conditional(),
            _ => return Err(unavailable()),
        })
    }
}

fn strip_center_equation(t: &Term, center: Register) -> Term {
    match t {
        Term::BoxLit(d) => Term::boxed(Drs::new(
            d.universe.clone(),
            d.conditions
                .iter()
                .filter(|c| !matches!(c, Condition::Eq(r, _) if *r == center))
                .cloned()
                .collect(),
        )),
        other => other.map_children(&mut |c| strip_center_equation(c, center)),
    }
}

fn e() -> Type {
    Type::Entity
}

fn var(name: &str, ty: Type) -> Term {
    Term::var(name, ty)
}

fn u(n: u32) -> Term {
    Term::reg(Register::entity(n))
}

fn atom_box(pred: &str, args: Vec<Term>) -> Term {
    Term::boxed(Drs::new(vec![], vec![Condition::atom(pred, args)]))
}

/// `λP₁λP₂.([u_n | …] ; P₁(u_n) ; P₂(u_n))`, with the center equation when
/// starred.
pub fn indefinite(n: u32, starred: bool) -> Term {
    let intro = introduction(n, starred, vec![]);
    Term::lam(
        "P1",
        Type::property(),
        Term::lam(
            "P2",
            Type::property(),
            Term::seq_all(vec![
                intro,
                Term::app(var("P1", Type::property()), u(n)),
                Term::app(var("P2", Type::property()), u(n)),
            ]),
        ),
    )
}

fn introduction(n: u32, starred: bool, mut conds: Vec<Condition>) -> Term {
    let mut universe = vec![Register::entity(n)];
    if starred {
        universe.insert(0, Register::entity(0));
        conds.insert(0, Condition::eq(Register::entity(0), u(n)));
    }
    Term::boxed(Drs::new(universe, conds))
}

/// `λP.([u_n | u_n = c] ; P(u_n))`.
pub fn name(constant: &str, n: u32, starred: bool) -> Term {
    let intro = introduction(
        n,
        starred,
        vec![Condition::eq(Register::entity(n), Term::entity(constant))],
    );
    Term::lam(
        "P",
        Type::property(),
        Term::seq(intro, Term::app(var("P", Type::property()), u(n))),
    )
}

/// `λP.P(δ)`.
pub fn pronoun() -> Term {
    Term::lam(
        "P",
        Type::property(),
        Term::app(var("P", Type::property()), var(HOLE, e())),
    )
}

/// `λP₁λP₂.([u_m | of(u_m, δ)] ; P₁(u_m) ; P₂(u_m))`.
pub fn genitive(m: u32) -> Term {
    let body = possessed(m, "P2");
    Term::lam(
        "P1",
        Type::property(),
        Term::lam("P2", Type::property(), body),
    )
}

fn possessed(m: u32, last: &str) -> Term {
    Term::seq_all(vec![
        Term::boxed(Drs::new(
            vec![Register::entity(m)],
            vec![Condition::atom("of", vec![u(m), var(HOLE, e())])],
        )),
        Term::app(var("P1", Type::property()), u(m)),
        Term::app(var(last, Type::property()), u(m)),
    ])
}

/// `λP₁λP₂.([x_m | x_m = λP.([u_m | of(u_m, δ)] ; P₁(u_m) ; P(u_m))] ; x_m(P₂))`.
pub fn dynamic_genitive(m: u32) -> Term {
    let x = Register::dynamic(m);
    let value = Term::lam("P", Type::property(), possessed(m, "P"));
    let intro = Term::boxed(Drs::new(vec![x], vec![Condition::eq(x, value)]));
    Term::lam(
        "P1",
        Type::property(),
        Term::lam(
            "P2",
            Type::property(),
            Term::seq(intro, Term::app(Term::reg(x), var("P2", Type::property()))),
        ),
    )
}

/// `λv.[ | p(v)]`.
pub fn one_place(pred: &str) -> Term {
    Term::lam("v", e(), atom_box(pred, vec![var("v", e())]))
}

/// `λSλv.[ | p(v, S)]` for nouns with a clausal complement.
pub fn complement_noun(pred: &str) -> Term {
    Term::lam(
        "S",
        Type::box_type(),
        Term::lam(
            "v",
            e(),
            atom_box(pred, vec![var("v", e()), var("S", Type::box_type())]),
        ),
    )
}

/// `λQλv.Q(λu.[ | p(v, u)])`.
pub fn transitive(pred: &str) -> Term {
    Term::lam(
        "Q",
        Type::quantifier(),
        Term::lam(
            "v",
            e(),
            Term::app(
                var("Q", Type::quantifier()),
                Term::lam("u", e(), atom_box(pred, vec![var("v", e()), var("u", e())])),
            ),
        ),
    )
}

/// `λQλRλv.[ | p(v, Q(R))]`: the object NP applied to the complement
/// property gives the wanted box.
pub fn control(pred: &str) -> Term {
    let wanted = Term::app(var("Q", Type::quantifier()), var("R", Type::property()));
    Term::lam(
        "Q",
        Type::quantifier(),
        Term::lam(
            "R",
            Type::property(),
            Term::lam("v", e(), atom_box(pred, vec![var("v", e()), wanted])),
        ),
    )
}

/// `λPλx.([P_n | P_n = P] ; P(x))`; the starred variant also makes P_n the
/// center.
pub fn infl(n: u32, starred: bool) -> Term {
    let pn = Register::property(n);
    let mut universe = vec![pn];
    let mut conds = vec![Condition::eq(pn, var("P", Type::property()))];
    if starred {
        universe.insert(0, Register::property(0));
        conds.insert(0, Condition::eq(Register::property(0), Term::reg(pn)));
    }
    Term::lam(
        "P",
        Type::property(),
        Term::lam(
            "x",
            e(),
            Term::seq(
                Term::boxed(Drs::new(universe, conds)),
                Term::app(var("P", Type::property()), var("x", e())),
            ),
        ),
    )
}

/// `λPλx.[ | NOT(P(x))]`.
pub fn negation() -> Term {
    let body = Term::app(var("P", Type::property()), var("x", e()));
    Term::lam(
        "P",
        Type::property(),
        Term::lam(
            "x",
            e(),
            Term::boxed(Drs::new(vec![], vec![Condition::Not(body)])),
        ),
    )
}

/// `λpλq.(p ; q)`.
pub fn conjunction() -> Term {
    let b = Type::box_type();
    Term::lam(
        "p",
        b.clone(),
        Term::lam("q", b.clone(), Term::seq(var("p", b.clone()), var("q", b))),
    )
}

/// `λpλq.[ | p ⇒ q]`.
pub fn conditional() -> Term {
    let b = Type::box_type();
    Term::lam(
        "p",
        b.clone(),
        Term::lam(
            "q",
            b.clone(),
            Term::boxed(Drs::new(
                vec![],
                vec![Condition::Imp(var("p", b.clone()), var("q", b))],
            )),
        ),
    )
}
