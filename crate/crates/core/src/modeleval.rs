//! Finite first-order models and brute-force evaluation of box programs.
//!
//! A box denotes a relation between states. Here a state is a total
//! assignment of domain entities to the entity registers in play, and
//! [`Evaluator::eval`] returns every output state reachable from an input
//! state by enumerating the values of the box's new registers.
//!
//! Property and dynamic-individual registers are not assigned. Programs
//! that still use them must first be passed through [`first_order`], which
//! drops their (already substituted) definitions.

use std::cell::Cell;
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use thiserror::Error;

use crate::drt::{BoxProgram, Condition, Drs, Register, RegisterKind};
use crate::typelogic::Term;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EvalError {
    #[error("box is not first-order: {0}")]
    NonFirstOrderBox(String),
    #[error("unknown symbol `{0}`")]
    UnknownSymbol(String),
    #[error("intensional atom `{0}` cannot be evaluated")]
    IntensionalAtom(String),
    #[error("predicate `{pred}` has arity {expected}, applied to {found} arguments")]
    ArityMismatch {
        pred: String,
        expected: usize,
        found: usize,
    },
    #[error("register {0} has no value in the input state")]
    UnassignedRegister(Register),
    /// Raised only inside [`equivalent_on_all_models`], when evaluation
    /// reads a fact the search has not fixed yet.
    #[error("fact {pred}{args:?} is not decided")]
    Undecided { pred: String, args: Vec<usize> },
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("model format error on line {line}: {message}")]
pub struct ModelFormatError {
    pub line: usize,
    pub message: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Relation {
    /// `None` for a relation declared empty without tuples.
    pub arity: Option<usize>,
    pub tuples: BTreeSet<Vec<usize>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Model {
    domain: Vec<String>,
    constants: BTreeMap<String, usize>,
    predicates: BTreeMap<String, Relation>,
}

impl Model {
    pub fn new<S: Into<String>>(domain: impl IntoIterator<Item = S>) -> Model {
        Model {
            domain: domain.into_iter().map(Into::into).collect(),
            ..Model::default()
        }
    }

    /// A model over `n` anonymous entities `e0`, `e1`, …
    pub fn with_size(n: usize) -> Model {
        Model::new((0..n).map(|k| format!("e{k}")))
    }

    pub fn domain(&self) -> &[String] {
        &self.domain
    }

    pub fn size(&self) -> usize {
        self.domain.len()
    }

    pub fn entity(&self, name: &str) -> Option<usize> {
        self.domain.iter().position(|d| d == name)
    }

    pub fn constant(&self, name: &str) -> Option<usize> {
        self.constants.get(name).copied()
    }

    pub fn constants(&self) -> &BTreeMap<String, usize> {
        &self.constants
    }

    pub fn predicates(&self) -> &BTreeMap<String, Relation> {
        &self.predicates
    }

    pub fn set_constant(&mut self, name: impl Into<String>, entity: usize) {
        assert!(entity < self.domain.len(), "constant outside the domain");
        self.constants.insert(name.into(), entity);
    }

    /// Declares a predicate of the given arity with no tuples.
    pub fn declare(&mut self, name: impl Into<String>, arity: usize) {
        self.predicates.entry(name.into()).or_default().arity = Some(arity);
    }

    pub fn add_tuple(&mut self, name: impl Into<String>, tuple: Vec<usize>) {
        assert!(
            tuple.iter().all(|&e| e < self.domain.len()),
            "tuple outside the domain"
        );
        let rel = self.predicates.entry(name.into()).or_default();
        debug_assert!(rel.arity.is_none_or(|a| a == tuple.len()));
        rel.arity = Some(tuple.len());
        rel.tuples.insert(tuple);
    }

    pub fn with_constant(mut self, name: &str, entity: &str) -> Model {
        let e = self.entity(entity).expect("unknown entity");
        self.set_constant(name, e);
        self
    }

    pub fn with_fact(mut self, pred: &str, entities: &[&str]) -> Model {
        let tuple = entities
            .iter()
            .map(|e| self.entity(e).expect("unknown entity"))
            .collect();
        self.add_tuple(pred, tuple);
        self
    }

    pub fn holds(&self, pred: &str, args: &[usize]) -> Result<bool, EvalError> {
        let rel = self
            .predicates
            .get(pred)
            .ok_or_else(|| EvalError::UnknownSymbol(pred.to_string()))?;
        if let Some(arity) = rel.arity {
            if arity != args.len() {
                return Err(EvalError::ArityMismatch {
                    pred: pred.to_string(),
                    expected: arity,
                    found: args.len(),
                });
            }
        }
        Ok(rel.tuples.contains(args))
    }
}

impl fmt::Display for Model {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "domain: {}", self.domain.join(" "))?;
        for (name, &e) in &self.constants {
            writeln!(f, "const {name} = {}", self.domain[e])?;
        }
        for (name, rel) in &self.predicates {
            let tuples: Vec<String> = rel
                .tuples
                .iter()
                .map(|t| {
                    let names: Vec<&str> = t.iter().map(|&e| self.domain[e].as_str()).collect();
                    format!("({})", names.join(","))
                })
                .collect();
            writeln!(f, "pred {name} = {{{}}}", tuples.join(", "))?;
        }
        Ok(())
    }
}

/// Parses the line-oriented model format:
///
/// ```text
/// # comment
/// domain: a b c
/// const Tom = a
/// pred love = {(a,b), (b,b)}
/// ```
///
/// Statements may also be separated by `;` on a single line.
pub fn load_model(source: &str) -> Result<Model, ModelFormatError> {
    let mut model: Option<Model> = None;
    for (lineno, raw) in source.lines().enumerate() {
        let line = lineno + 1;
        let content = raw.split('#').next().unwrap_or("");
        for stmt in content.split(';').map(str::trim).filter(|s| !s.is_empty()) {
            let err = |message: String| ModelFormatError { line, message };
            if let Some(rest) = stmt.strip_prefix("domain:") {
                if model.is_some() {
                    return Err(err("domain declared twice".into()));
                }
                let names: Vec<&str> = rest.split_whitespace().collect();
                if names.is_empty() {
                    return Err(err("empty domain".into()));
                }
                let unique: BTreeSet<&str> = names.iter().copied().collect();
                if unique.len() != names.len() {
                    return Err(err("duplicate entity in domain".into()));
                }
                model = Some(Model::new(names));
                continue;
            }
            let m = model
                .as_mut()
                .ok_or_else(|| err("`domain:` must come first".into()))?;
            if let Some(rest) = stmt.strip_prefix("const ") {
                let (name, value) = rest
                    .split_once('=')
                    .ok_or_else(|| err("expected `const NAME = entity`".into()))?;
                let (name, value) = (name.trim(), value.trim());
                if name.is_empty() {
                    return Err(err("missing constant name".into()));
                }
                let e = m
                    .entity(value)
                    .ok_or_else(|| err(format!("`{value}` is not in the domain")))?;
                m.set_constant(name, e);
            } else if let Some(rest) = stmt.strip_prefix("pred ") {
                let (name, body) = rest
                    .split_once('=')
                    .ok_or_else(|| err("expected `pred NAME = {...}`".into()))?;
                let name = name.trim();
                let body = body.trim();
                let inner = body
                    .strip_prefix('{')
                    .and_then(|b| b.strip_suffix('}'))
                    .ok_or_else(|| err("tuple set must be enclosed in braces".into()))?;
                if m.predicates.contains_key(name) {
                    return Err(err(format!("predicate `{name}` defined twice")));
                }
                let tuples = parse_tuples(inner).map_err(err)?;
                let mut arity = None;
                let mut rel = Relation::default();
                for tuple in tuples {
                    if *arity.get_or_insert(tuple.len()) != tuple.len() {
                        return Err(err(format!("inconsistent arity in `{name}`")));
                    }
                    let mut ids = Vec::new();
                    for e in tuple {
                        ids.push(
                            m.entity(&e)
                                .ok_or_else(|| err(format!("`{e}` is not in the domain")))?,
                        );
                    }
                    rel.tuples.insert(ids);
                }
                rel.arity = arity;
                m.predicates.insert(name.to_string(), rel);
            } else {
                return Err(err(format!("unrecognized statement `{stmt}`")));
            }
        }
    }
    model.ok_or(ModelFormatError {
        line: source.lines().count().max(1),
        message: "missing `domain:`".into(),
    })
}

fn parse_tuples(inner: &str) -> Result<Vec<Vec<String>>, String> {
    let mut out = Vec::new();
    let mut rest = inner.trim();
    while !rest.is_empty() {
        let tuple;
        if let Some(after) = rest.strip_prefix('(') {
            let close = after.find(')').ok_or("unclosed tuple")?;
            tuple = after[..close]
                .split(',')
                .map(|s| s.trim().to_string())
                .collect::<Vec<_>>();
            rest = after[close + 1..].trim_start();
        } else {
            let end = rest.find(',').unwrap_or(rest.len());
            tuple = vec![rest[..end].trim().to_string()];
            rest = &rest[end..];
        }
        if tuple.iter().any(|s| s.is_empty()) {
            return Err("empty tuple component".into());
        }
        out.push(tuple);
        rest = rest.trim_start();
        if let Some(r) = rest.strip_prefix(',') {
            rest = r.trim_start();
            if rest.is_empty() {
                return Err("trailing comma".into());
            }
        } else if !rest.is_empty() {
            return Err(format!("unexpected `{rest}`"));
        }
    }
    Ok(out)
}

/// Assignment of entities to entity registers.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct EvalState(pub BTreeMap<Register, usize>);

impl EvalState {
    pub fn get(&self, r: &Register) -> Option<usize> {
        self.0.get(r).copied()
    }

    pub fn set(&mut self, r: Register, e: usize) {
        self.0.insert(r, e);
    }

    pub fn display<'a>(&'a self, model: &'a Model) -> impl fmt::Display + 'a {
        StateDisplay(self, model)
    }
}

struct StateDisplay<'a>(&'a EvalState, &'a Model);

impl fmt::Display for StateDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .0
             .0
            .iter()
            .map(|(r, &e)| format!("{r}={}", self.1.domain[e]))
            .collect();
        write!(f, "{{{}}}", parts.join(", "))
    }
}

/// Every state over `inventory`, in lexicographic order.
pub fn all_states(inventory: &BTreeSet<Register>, model: &Model) -> Vec<EvalState> {
    let regs: Vec<Register> = inventory.iter().copied().collect();
    let mut out = vec![EvalState::default()];
    for r in regs {
        out = out
            .into_iter()
            .flat_map(|s| {
                (0..model.size()).map(move |e| {
                    let mut s = s.clone();
                    s.set(r, e);
                    s
                })
            })
            .collect();
    }
    out
}

/// Entity registers occurring anywhere in the program.
pub fn inventory(p: &BoxProgram) -> BTreeSet<Register> {
    p.registers()
        .into_iter()
        .filter(|r| r.kind == RegisterKind::Entity)
        .collect()
}

/// Drops property and dynamic-individual registers from universes together
/// with their defining equations. Fails if such a register is still used
/// anywhere else.
pub fn first_order(p: &BoxProgram) -> Result<BoxProgram, EvalError> {
    let boxes: Vec<Drs> = p
        .boxes()
        .into_iter()
        .map(|d| {
            Drs::new(
                d.universe
                    .iter()
                    .copied()
                    .filter(|r| r.kind == RegisterKind::Entity)
                    .collect(),
                d.conditions
                    .iter()
                    .filter(|c| !matches!(c, Condition::Eq(r, _) if r.kind != RegisterKind::Entity))
                    .cloned()
                    .collect(),
            )
        })
        .collect();
    let out = BoxProgram::from_boxes(boxes);
    if let Some(r) = out
        .registers()
        .into_iter()
        .find(|r| r.kind != RegisterKind::Entity)
    {
        return Err(EvalError::NonFirstOrderBox(format!("{r} is still in use")));
    }
    Ok(out)
}

/// Evaluator over one model; counts the candidate output states it
/// enumerates.
pub struct Evaluator<'m> {
    model: &'m Model,
    candidates: Cell<u64>,
    /// When set, atoms are read from here instead of the model.
    decided: Option<&'m Facts>,
}

type Facts = BTreeMap<(String, Vec<usize>), bool>;

impl<'m> Evaluator<'m> {
    pub fn new(model: &'m Model) -> Evaluator<'m> {
        Evaluator {
            model,
            candidates: Cell::new(0),
            decided: None,
        }
    }

    /// Candidate states enumerated so far.
    pub fn candidates(&self) -> u64 {
        self.candidates.get()
    }

    pub fn eval(
        &self,
        p: &BoxProgram,
        input: &EvalState,
    ) -> Result<BTreeSet<EvalState>, EvalError> {
        match p {
            BoxProgram::Single(d) => self.eval_box(d, input),
            BoxProgram::Seq(a, b) => {
                let mut out = BTreeSet::new();
                for k in self.eval(a, input)? {
                    out.extend(self.eval(b, &k)?);
                }
                Ok(out)
            }
        }
    }

    fn eval_term(&self, t: &Term, input: &EvalState) -> Result<BTreeSet<EvalState>, EvalError> {
        let p = BoxProgram::from_term(t).map_err(|e| EvalError::NonFirstOrderBox(e.0))?;
        self.eval(&p, input)
    }

    pub fn eval_box(&self, d: &Drs, input: &EvalState) -> Result<BTreeSet<EvalState>, EvalError> {
        let mut new: Vec<Register> = Vec::new();
        for r in &d.universe {
            if r.kind != RegisterKind::Entity {
                return Err(EvalError::NonFirstOrderBox(format!("{r} in universe")));
            }
            if !new.contains(r) {
                new.push(*r);
            }
        }
        let n = self.model.size();
        let mut out = BTreeSet::new();
        let mut digits = vec![0usize; new.len()];
        loop {
            let mut j = input.clone();
            for (r, &e) in new.iter().zip(&digits) {
                j.set(*r, e);
            }
            self.candidates.set(self.candidates.get() + 1);
            if self.conditions_hold(&d.conditions, &j)? {
                out.insert(j);
            }
            // Odometer over |domain|^|new|.
            let mut pos = 0;
            loop {
                if pos == digits.len() {
                    return Ok(out);
                }
                digits[pos] += 1;
                if digits[pos] < n {
                    break;
                }
                digits[pos] = 0;
                pos += 1;
            }
        }
    }

    fn conditions_hold(&self, conds: &[Condition], j: &EvalState) -> Result<bool, EvalError> {
        for c in conds {
            if !self.holds(c, j)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    fn value(&self, t: &Term, j: &EvalState) -> Result<usize, EvalError> {
        match t {
            Term::Reg(r) if r.kind == RegisterKind::Entity => {
                j.get(r).ok_or(EvalError::UnassignedRegister(*r))
            }
            Term::Const(name, _) => self
                .model
                .constant(name)
                .ok_or_else(|| EvalError::UnknownSymbol(name.clone())),
            other => Err(EvalError::NonFirstOrderBox(format!(
                "`{other}` is not an entity term"
            ))),
        }
    }

    pub fn holds(&self, c: &Condition, j: &EvalState) -> Result<bool, EvalError> {
        match c {
            Condition::Atom(p, args) => {
                let mut vals = Vec::with_capacity(args.len());
                for a in args {
                    if matches!(a, Term::BoxLit(_)) || a.as_seq().is_some() {
                        return Err(EvalError::IntensionalAtom(p.clone()));
                    }
                    vals.push(self.value(a, j)?);
                }
                let in_model = self.model.holds(p, &vals)?;
                match self.decided {
                    None => Ok(in_model),
                    Some(facts) => match facts.get(&(p.clone(), vals)) {
                        Some(&b) => Ok(b),
                        None => Err(EvalError::Undecided {
                            pred: p.clone(),
                            args: args
                                .iter()
                                .map(|a| self.value(a, j))
                                .collect::<Result<_, _>>()?,
                        }),
                    },
                }
            }
            Condition::Eq(r, rhs) => {
                if r.kind != RegisterKind::Entity {
                    return Err(EvalError::NonFirstOrderBox(format!("definition of {r}")));
                }
                let lhs = j.get(r).ok_or(EvalError::UnassignedRegister(*r))?;
                Ok(lhs == self.value(rhs, j)?)
            }
            Condition::Imp(a, b) => {
                for k in self.eval_term(a, j)? {
                    if self.eval_term(b, &k)?.is_empty() {
                        return Ok(false);
                    }
                }
                Ok(true)
            }
            Condition::Not(a) => Ok(self.eval_term(a, j)?.is_empty()),
        }
    }
}

pub fn eval_box(
    p: &BoxProgram,
    m: &Model,
    i: &EvalState,
) -> Result<BTreeSet<EvalState>, EvalError> {
    Evaluator::new(m).eval(p, i)
}

/// True iff some input state over the program's registers has an output.
pub fn satisfiable(p: &BoxProgram, m: &Model) -> Result<bool, EvalError> {
    let ev = Evaluator::new(m);
    for i in all_states(&inventory(p), m) {
        if !ev.eval(p, &i)?.is_empty() {
            return Ok(true);
        }
    }
    Ok(false)
}

/// True iff both programs relate every input state to the same outputs.
pub fn check_equivalence(p1: &BoxProgram, p2: &BoxProgram, m: &Model) -> Result<bool, EvalError> {
    let mut regs = inventory(p1);
    regs.extend(inventory(p2));
    let ev = Evaluator::new(m);
    for i in all_states(&regs, m) {
        if ev.eval(p1, &i)? != ev.eval(p2, &i)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Constants and predicate arities a set of programs needs from a model.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Signature {
    pub constants: BTreeSet<String>,
    pub predicates: BTreeMap<String, usize>,
}

impl Signature {
    pub fn of<'a>(programs: impl IntoIterator<Item = &'a BoxProgram>) -> Signature {
        let mut sig = Signature::default();
        for p in programs {
            p.to_term().visit(&mut |t| match t {
                Term::Const(name, ty) if *ty == crate::typelogic::Type::Entity => {
                    sig.constants.insert(name.clone());
                }
                Term::BoxLit(d) => {
                    for c in &d.conditions {
                        if let Condition::Atom(pred, args) = c {
                            sig.predicates.insert(pred.clone(), args.len());
                        }
                    }
                }
                _ => {}
            });
        }
        sig
    }
}

/// Outcome of [`equivalent_on_all_models`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AllModels {
    /// Partial models examined; every full model extends exactly one.
    pub leaves: u64,
    pub counterexample: Option<Model>,
}

/// Decides whether two first-order programs agree on every model with at
/// most `max_domain` entities interpreting their signature.
///
/// Models are not listed one by one. The search fixes constants eagerly
/// and fixes a fact only when evaluation reads it, so each leaf stands for
/// all full models that agree on the facts read there.
pub fn equivalent_on_all_models(
    p1: &BoxProgram,
    p2: &BoxProgram,
    max_domain: usize,
) -> Result<AllModels, EvalError> {
    let sig = Signature::of([p1, p2]);
    let mut regs = inventory(p1);
    regs.extend(inventory(p2));
    let constants: Vec<&String> = sig.constants.iter().collect();
    let mut leaves = 0;
    for n in 1..=max_domain {
        let mut base = Model::with_size(n);
        for (pred, &arity) in &sig.predicates {
            base.declare(pred.clone(), arity);
        }
        let combos = n.pow(constants.len() as u32);
        for code in 0..combos {
            let mut m = base.clone();
            let mut rest = code;
            for c in &constants {
                m.set_constant(c.as_str(), rest % n);
                rest /= n;
            }
            let states = all_states(&regs, &m);
            let mut stack: Vec<Facts> = vec![Facts::new()];
            while let Some(facts) = stack.pop() {
                let ev = Evaluator {
                    decided: Some(&facts),
                    ..Evaluator::new(&m)
                };
                let agree = states.iter().try_fold(true, |ok, i| {
                    Ok::<_, EvalError>(ok && ev.eval(p1, i)? == ev.eval(p2, i)?)
                });
                match agree {
                    Err(EvalError::Undecided { pred, args }) => {
                        for b in [false, true] {
                            let mut next = facts.clone();
                            next.insert((pred.clone(), args.clone()), b);
                            stack.push(next);
                        }
                    }
                    Err(e) => return Err(e),
                    Ok(agree) => {
                        leaves += 1;
                        if !agree {
                            let mut witness = m.clone();
                            for ((pred, args), b) in facts {
                                if b {
                                    witness.add_tuple(pred, args);
                                }
                            }
                            return Ok(AllModels {
                                leaves,
                                counterexample: Some(witness),
                            });
                        }
                    }
                }
            }
        }
    }
    Ok(AllModels {
        leaves,
        counterexample: None,
    })
}
