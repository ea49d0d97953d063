//! Golden derivations for the bundled example discourses.
//!
//! Derived and expected programs are compared after canonicalization:
//! adjacent boxes are merged unless the second reintroduces a register
//! already introduced or read freely earlier in the program,
//! universes are sorted by (kind, index), conditions are sorted by their
//! rendering, register equations put the smaller register on the left,
//! and bound variables are renamed by binder depth.

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::discourse::{derive_text, DeriveOptions, MergeRule};
use crate::drt::text::{parse_program, SyntaxError};
use crate::drt::{merge_liberal, simplify_with, BoxProgram, Condition, Drs, Register};
use crate::fragment::Lexicon;
use crate::typelogic::Term;

fn canon_term(t: &Term, env: &mut Vec<(String, String)>) -> Term {
    match t {
        Term::Var(x, ty) => match env.iter().rev().find(|(old, _)| old == x) {
            Some((_, new)) => Term::Var(new.clone(), ty.clone()),
            None => t.clone(),
        },
        Term::Lam(x, ty, body) => {
            let name = format!("z{}", env.len() + 1);
            env.push((x.clone(), name.clone()));
            let body = canon_term(body, env);
            env.pop();
            Term::lam(name, ty.clone(), body)
        }
        Term::App(f, a) => Term::app(canon_term(f, env), canon_term(a, env)),
        Term::BoxLit(d) => Term::BoxLit(canon_drs(d, env)),
        Term::Const(..) | Term::Reg(_) => t.clone(),
    }
}

fn canon_drs(d: &Drs, env: &mut Vec<(String, String)>) -> Drs {
    let mut universe = d.universe.clone();
    universe.sort();
    let mut conditions: Vec<Condition> = d
        .conditions
        .iter()
        .map(|c| match c.map_terms(&mut |t| canon_term(t, env)) {
            Condition::Eq(r, Term::Reg(s)) if s.kind == r.kind && s < r => {
                Condition::Eq(s, Term::Reg(r))
            }
            other => other,
        })
        .collect();
    conditions.sort_by_cached_key(|c| crate::drt::text::render_condition(c, &Default::default()));
    conditions.dedup();
    Drs {
        universe,
        conditions,
    }
}

/// Canonical form of a program, used for golden comparison.
pub fn canonicalize(p: &BoxProgram) -> BoxProgram {
    let flat = simplify_with(&p.to_term(), &merge_liberal);
    let boxes: Vec<Drs> = match BoxProgram::from_term(&flat) {
        Ok(q) => q.into_boxes(),
        Err(_) => p.boxes().into_iter().cloned().collect(),
    };
    let mut merged: Vec<Drs> = Vec::new();
    let mut earlier: BTreeSet<Register> = BTreeSet::new();
    for d in boxes {
        let reassigns = d.universe.iter().any(|r| earlier.contains(r));
        earlier.extend(d.universe.iter().copied());
        earlier.extend(d.conditions.iter().flat_map(|c| c.free_registers()));
        match merged.last_mut() {
            Some(acc) if !reassigns => match merge_liberal(acc, &d) {
                Ok(m) => *acc = m,
                Err(_) => merged.push(d),
            },
            _ => merged.push(d),
        }
    }
    BoxProgram::from_boxes(
        merged
            .iter()
            .map(|d| canon_drs(d, &mut Vec::new()))
            .collect(),
    )
}

/// Perturbations of the engine that the golden suite must detect.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Mutation {
    #[default]
    None,
    /// Starred NPs no longer equate the center with their register.
    DropCenterEquation,
    /// Junctions merge even where a register is reintroduced.
    IgnoreReassignment,
}

impl Mutation {
    pub fn options(self) -> DeriveOptions {
        let mut opts = DeriveOptions::default();
        match self {
            Mutation::None => {}
            Mutation::DropCenterEquation => {
                let mut lexicon = Lexicon::standard();
                lexicon.drop_center_equation = true;
                opts.lexicon = lexicon;
            }
            Mutation::IgnoreReassignment => opts.merge = MergeRule::IgnoreReassignment,
        }
        opts
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ExpectationError {
    #[error("line {line}: {message}")]
    Format { line: usize, message: String },
    #[error("line {line}: {source}")]
    Program { line: usize, source: SyntaxError },
}

/// Stored expectations for one discourse.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Expectation {
    pub transitions: Vec<String>,
    pub program: BoxProgram,
    /// Fragments that must appear verbatim in the rendered derivation.
    pub quotes: Vec<String>,
}

/// Reads an expectation file of `key: value` lines with keys
/// `transitions`, `program` (once each) and `quote` (any number).
pub fn parse_expectation(src: &str) -> Result<Expectation, ExpectationError> {
    let mut transitions = None;
    let mut program = None;
    let mut quotes = Vec::new();
    for (k, raw) in src.lines().enumerate() {
        let line = k + 1;
        let text = raw.trim();
        if text.is_empty() || text.starts_with('#') {
            continue;
        }
        let Some((key, value)) = text.split_once(':') else {
            return Err(ExpectationError::Format {
                line,
                message: "expected `key: value`".into(),
            });
        };
        let value = value.trim();
        match key.trim() {
            "transitions" => {
                transitions = Some(value.split_whitespace().map(String::from).collect())
            }
            "program" => {
                program = Some(
                    parse_program(value)
                        .map_err(|source| ExpectationError::Program { line, source })?,
                )
            }
            "quote" => quotes.push(value.to_string()),
            other => {
                return Err(ExpectationError::Format {
                    line,
                    message: format!("unknown key `{other}`"),
                })
            }
        }
    }
    let missing = |what: &str| ExpectationError::Format {
        line: 0,
        message: format!("missing `{what}`"),
    };
    Ok(Expectation {
        transitions: transitions.ok_or_else(|| missing("transitions"))?,
        program: program.ok_or_else(|| missing("program"))?,
        quotes,
    })
}

#[derive(Debug, Clone, Copy)]
pub struct GoldenCase {
    pub name: &'static str,
    pub source: &'static str,
    pub expect: &'static str,
}

macro_rules! case {
    ($name:literal) => {
        GoldenCase {
            name: $name,
            source: include_str!(concat!("../corpus/", $name, ".disc")),
            expect: include_str!(concat!("../corpus/", $name, ".expect")),
        }
    };
}

/// The bundled example discourses.
pub fn corpus() -> Vec<GoldenCase> {
    vec![
        case!("farmer"),
        case!("tom_john"),
        case!("tom_john_center"),
        case!("tom_john_accessible"),
        case!("sloppy_cat"),
        case!("paycheck"),
        case!("help_kiss"),
        case!("belief"),
    ]
}

/// Models separating the two readings of a discourse's sloppy variable:
/// the sloppy reading is satisfiable only in `sloppy_model`, the strict
/// reading only in `strict_model`.
#[derive(Debug, Clone, Copy)]
pub struct WitnessPair {
    pub case: &'static str,
    pub site: &'static str,
    pub sloppy_model: &'static str,
    pub strict_model: &'static str,
}

pub fn witness_pairs() -> Vec<WitnessPair> {
    vec![
        WitnessPair {
            case: "sloppy_cat",
            site: "1:4",
            sloppy_model: include_str!("../corpus/models/sloppy_cat_sloppy.model"),
            strict_model: include_str!("../corpus/models/sloppy_cat_strict.model"),
        },
        WitnessPair {
            case: "paycheck",
            site: "1:4",
            sloppy_model: include_str!("../corpus/models/paycheck_sloppy.model"),
            strict_model: include_str!("../corpus/models/paycheck_strict.model"),
        },
    ]
}

pub fn case_named(name: &str) -> Option<GoldenCase> {
    corpus().into_iter().find(|c| c.name == name)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CaseResult {
    pub name: String,
    pub mismatches: Vec<String>,
}

impl CaseResult {
    pub fn passed(&self) -> bool {
        self.mismatches.is_empty()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GoldenReport {
    pub mutation: Mutation,
    pub cases: Vec<CaseResult>,
}

impl GoldenReport {
    pub fn all_passed(&self) -> bool {
        self.cases.iter().all(CaseResult::passed)
    }

    pub fn case(&self, name: &str) -> Option<&CaseResult> {
        self.cases.iter().find(|c| c.name == name)
    }
}

impl fmt::Display for GoldenReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in &self.cases {
            if c.passed() {
                writeln!(f, "PASS {}", c.name)?;
            } else {
                writeln!(f, "FAIL {}", c.name)?;
                for m in &c.mismatches {
                    writeln!(f, "  {m}")?;
                }
            }
        }
        let passed = self.cases.iter().filter(|c| c.passed()).count();
        write!(f, "{passed}/{} golden derivations match", self.cases.len())
    }
}

pub fn check_case(case: &GoldenCase, opts: &DeriveOptions) -> CaseResult {
    let mut mismatches = Vec::new();
    let expect = match parse_expectation(case.expect) {
        Ok(e) => e,
        Err(e) => {
            return CaseResult {
                name: case.name.into(),
                mismatches: vec![format!("bad expectation: {e}")],
            }
        }
    };
    match derive_text(case.source, opts) {
        Err(e) => mismatches.push(format!("derivation failed: {e}")),
        Ok(d) => {
            let transitions: Vec<String> = d.transitions().iter().map(|t| t.to_string()).collect();
            if transitions != expect.transitions {
                mismatches.push(format!(
                    "transitions: expected {}, got {}",
                    expect.transitions.join(" "),
                    transitions.join(" ")
                ));
            }
            let got = canonicalize(&d.program);
            let want = canonicalize(&expect.program);
            if got != want {
                mismatches.push(format!("program: expected {want}, got {got}"));
            }
            let rendered = d.program.to_string();
            for q in &expect.quotes {
                if !rendered.contains(q.as_str()) {
                    mismatches.push(format!("missing `{q}`"));
                }
            }
        }
    }
    CaseResult {
        name: case.name.into(),
        mismatches,
    }
}

pub fn run_golden(mutation: Mutation) -> GoldenReport {
    let opts = mutation.options();
    GoldenReport {
        mutation,
        cases: corpus().iter().map(|c| check_case(c, &opts)).collect(),
    }
}
