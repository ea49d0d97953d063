//! Linearized DRT boxes.
//!
//! A [`Drs`] is a universe of registers plus a list of conditions. Boxes
//! abbreviate relations between states; [`unabbreviate`] spells the
//! relation out as a type-logic term. Sequencing is relation composition,
//! and [`merge`] collapses two sequenced boxes into one when no register
//! is reassigned.

pub mod text;

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::typelogic::{fresh_name, Term, Type};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum RegisterKind {
    Entity,
    Property,
    DynamicIndividual,
}

impl RegisterKind {
    pub fn prefix(self) -> &'static str {
        match self {
            RegisterKind::Entity => "u",
            RegisterKind::Property => "P",
            RegisterKind::DynamicIndividual => "x",
        }
    }

    /// The type of the register's value at a state.
    pub fn value_type(self) -> Type {
        match self {
            RegisterKind::Entity => Type::Entity,
            RegisterKind::Property => Type::property(),
            RegisterKind::DynamicIndividual => Type::quantifier(),
        }
    }
}

impl fmt::Display for RegisterKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = match self {
            RegisterKind::Entity => "entity",
            RegisterKind::Property => "property",
            RegisterKind::DynamicIndividual => "dynamic individual",
        };
        f.write_str(name)
    }
}

/// An indexed discourse marker: `u_n`, `P_n` or `x_n`. Index 0 is the
/// discourse center.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Register {
    pub kind: RegisterKind,
    pub index: u32,
}

impl Register {
    pub const fn new(kind: RegisterKind, index: u32) -> Register {
        Register { kind, index }
    }

    pub const fn entity(index: u32) -> Register {
        Register::new(RegisterKind::Entity, index)
    }

    pub const fn property(index: u32) -> Register {
        Register::new(RegisterKind::Property, index)
    }

    pub const fn dynamic(index: u32) -> Register {
        Register::new(RegisterKind::DynamicIndividual, index)
    }

    pub fn is_center(&self) -> bool {
        self.index == 0
    }

    pub fn value_type(&self) -> Type {
        self.kind.value_type()
    }

    /// `s → value`, the register as a function from states.
    pub fn full_type(&self) -> Type {
        Type::arrow(Type::State, self.value_type())
    }
}

impl fmt::Display for Register {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}_{}", self.kind.prefix(), self.index)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Condition {
    /// `pred(args)`; arguments are entity terms or, for attitude verbs,
    /// box terms.
    Atom(String, Vec<Term>),
    /// `r = t`.
    Eq(Register, Term),
    /// `K ⇒ K'`.
    Imp(Term, Term),
    /// `NOT(K)`.
    Not(Term),
}

impl Condition {
    pub fn atom(pred: impl Into<String>, args: Vec<Term>) -> Condition {
        Condition::Atom(pred.into(), args)
    }

    pub fn eq(lhs: Register, rhs: impl Into<Term>) -> Condition {
        Condition::Eq(lhs, rhs.into())
    }

    pub fn terms(&self) -> Vec<&Term> {
        match self {
            Condition::Atom(_, args) => args.iter().collect(),
            Condition::Eq(_, t) | Condition::Not(t) => vec![t],
            Condition::Imp(a, b) => vec![a, b],
        }
    }

    pub fn map_terms(&self, f: &mut impl FnMut(&Term) -> Term) -> Condition {
        match self {
            Condition::Atom(p, args) => {
                Condition::Atom(p.clone(), args.iter().map(&mut *f).collect())
            }
            Condition::Eq(r, t) => Condition::Eq(*r, f(t)),
            Condition::Imp(a, b) => {
                let a = f(a);
                Condition::Imp(a, f(b))
            }
            Condition::Not(t) => Condition::Not(f(t)),
        }
    }

    /// Like [`Condition::map_terms`] but visits subterms right to left.
    pub fn map_terms_rev(&self, f: &mut impl FnMut(&Term) -> Term) -> Condition {
        match self {
            Condition::Atom(p, args) => {
                let mut out: Vec<Term> = args.iter().rev().map(&mut *f).collect();
                out.reverse();
                Condition::Atom(p.clone(), out)
            }
            Condition::Imp(a, b) => {
                let b = f(b);
                Condition::Imp(f(a), b)
            }
            _ => self.map_terms(f),
        }
    }

    /// Registers occurring anywhere in the condition, including the left
    /// side of an equation and inside embedded boxes.
    pub fn occurring_registers(&self) -> BTreeSet<Register> {
        let mut out = BTreeSet::new();
        if let Condition::Eq(r, _) = self {
            out.insert(*r);
        }
        for t in self.terms() {
            out.extend(t.registers());
        }
        out
    }

    /// Registers read by the condition that are not introduced by an
    /// embedded box before the read.
    pub fn free_registers(&self) -> BTreeSet<Register> {
        let mut out = BTreeSet::new();
        if let Condition::Eq(r, _) = self {
            out.insert(*r);
        }
        for t in self.terms() {
            out.extend(free_registers(t));
        }
        out
    }
}

/// A linearized box `[universe | conditions]`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
pub struct Drs {
    pub universe: Vec<Register>,
    pub conditions: Vec<Condition>,
}

impl Drs {
    pub fn new(universe: Vec<Register>, conditions: Vec<Condition>) -> Drs {
        Drs {
            universe,
            conditions,
        }
    }

    pub fn empty() -> Drs {
        Drs::default()
    }

    pub fn terms(&self) -> impl Iterator<Item = &Term> {
        self.conditions.iter().flat_map(|c| c.terms())
    }

    pub fn map_terms(&self, f: &mut impl FnMut(&Term) -> Term) -> Drs {
        Drs {
            universe: self.universe.clone(),
            conditions: self.conditions.iter().map(|c| c.map_terms(f)).collect(),
        }
    }

    /// Registers occurring in any condition.
    pub fn condition_registers(&self) -> BTreeSet<Register> {
        self.conditions
            .iter()
            .flat_map(|c| c.occurring_registers())
            .collect()
    }

    /// A register listed twice in the universe, if any.
    pub fn duplicate_register(&self) -> Option<Register> {
        let mut seen = BTreeSet::new();
        self.universe.iter().copied().find(|r| !seen.insert(*r))
    }

    /// Definitions `r = t` among the conditions, in order.
    pub fn definitions(&self) -> impl Iterator<Item = (Register, &Term)> {
        self.conditions.iter().filter_map(|c| match c {
            Condition::Eq(r, t) => Some((*r, t)),
            _ => None,
        })
    }
}

impl fmt::Display for Drs {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&text::render_box(self, &Default::default()))
    }
}

/// Registers introduced by a box term (its top-level universes).
pub fn introduced_registers(t: &Term) -> BTreeSet<Register> {
    match t.as_seq() {
        Some((l, r)) => {
            let mut out = introduced_registers(l);
            out.extend(introduced_registers(r));
            out
        }
        None => match t {
            Term::BoxLit(d) => d.universe.iter().copied().collect(),
            _ => BTreeSet::new(),
        },
    }
}

/// Free registers of a term: registers read without a preceding
/// introduction inside the same embedded box chain.
pub fn free_registers(t: &Term) -> BTreeSet<Register> {
    if let Some((l, r)) = t.as_seq() {
        let mut out = free_registers(l);
        let intro = introduced_registers(l);
        out.extend(free_registers(r).into_iter().filter(|x| !intro.contains(x)));
        return out;
    }
    match t {
        Term::Reg(r) => BTreeSet::from([*r]),
        Term::Var(..) | Term::Const(..) => BTreeSet::new(),
        Term::Lam(_, _, b) => free_registers(b),
        Term::App(f, a) => {
            let mut out = free_registers(f);
            out.extend(free_registers(a));
            out
        }
        Term::BoxLit(d) => {
            let universe: BTreeSet<Register> = d.universe.iter().copied().collect();
            d.conditions
                .iter()
                .flat_map(|c| c.free_registers())
                .filter(|r| !universe.contains(r))
                .collect()
        }
    }
}

/// A sequence of boxes joined by `;`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum BoxProgram {
    Single(Drs),
    Seq(Box<BoxProgram>, Box<BoxProgram>),
}

/// A box term that is not a chain of box literals.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("not a box program: `{0}`")]
pub struct NotABoxProgram(pub String);

impl BoxProgram {
    /// Left-nested sequence of a nonempty list of boxes.
    pub fn from_boxes(boxes: Vec<Drs>) -> BoxProgram {
        let mut iter = boxes.into_iter();
        let first = BoxProgram::Single(iter.next().unwrap_or_default());
        iter.fold(first, |acc, d| sequence(acc, BoxProgram::Single(d)))
    }

    pub fn from_term(t: &Term) -> Result<BoxProgram, NotABoxProgram> {
        let boxes = t
            .seq_items()
            .into_iter()
            .map(|item| match item {
                Term::BoxLit(d) => Ok(d.clone()),
                other => Err(NotABoxProgram(other.to_string())),
            })
            .collect::<Result<Vec<_>, _>>()?;
        Ok(BoxProgram::from_boxes(boxes))
    }

    pub fn to_term(&self) -> Term {
        match self {
            BoxProgram::Single(d) => Term::BoxLit(d.clone()),
            BoxProgram::Seq(a, b) => Term::seq(a.to_term(), b.to_term()),
        }
    }

    pub fn boxes(&self) -> Vec<&Drs> {
        match self {
            BoxProgram::Single(d) => vec![d],
            BoxProgram::Seq(a, b) => {
                let mut out = a.boxes();
                out.extend(b.boxes());
                out
            }
        }
    }

    pub fn into_boxes(self) -> Vec<Drs> {
        match self {
            BoxProgram::Single(d) => vec![d],
            BoxProgram::Seq(a, b) => {
                let mut out = a.into_boxes();
                out.extend(b.into_boxes());
                out
            }
        }
    }

    /// Merges adjacent boxes left to right wherever [`merge`] succeeds.
    pub fn merge_greedy(&self) -> BoxProgram {
        let (boxes, _) = merge_chain(self.boxes().into_iter().cloned().collect());
        BoxProgram::from_boxes(boxes)
    }

    pub fn registers(&self) -> BTreeSet<Register> {
        self.to_term().registers()
    }
}

impl From<Drs> for BoxProgram {
    fn from(d: Drs) -> BoxProgram {
        BoxProgram::Single(d)
    }
}

impl fmt::Display for BoxProgram {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&text::render_program(self, &Default::default()))
    }
}

pub fn sequence(k1: BoxProgram, k2: BoxProgram) -> BoxProgram {
    BoxProgram::Seq(Box::new(k1), Box::new(k2))
}

/// Merge failure: registers of the second box's universe that the first
/// box already uses.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct NotMergeable {
    pub conflicts: Vec<Register>,
}

impl fmt::Display for NotMergeable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let regs: Vec<String> = self.conflicts.iter().map(|r| r.to_string()).collect();
        write!(f, "not mergeable: {} reassigned", regs.join(", "))
    }
}

/// Merging Lemma: `[U | C] ; [U' | C']` becomes `[U U' | C C']` unless a
/// register of `U'` already occurs in the first box, in its universe or
/// anywhere in its conditions.
pub fn merge(k1: &Drs, k2: &Drs) -> Result<Drs, NotMergeable> {
    let used: BTreeSet<Register> = k1
        .universe
        .iter()
        .copied()
        .chain(k1.condition_registers())
        .collect();
    merge_avoiding(k1, k2, &used)
}

/// Variant of [`merge`] that only blocks on registers *free* in the first
/// box, so a register introduced and consumed entirely inside an embedded
/// definition does not count. Semantically sound as well; used for
/// canonical comparison.
pub fn merge_liberal(k1: &Drs, k2: &Drs) -> Result<Drs, NotMergeable> {
    let used: BTreeSet<Register> = k1
        .universe
        .iter()
        .copied()
        .chain(k1.conditions.iter().flat_map(|c| c.free_registers()))
        .collect();
    merge_avoiding(k1, k2, &used)
}

fn merge_avoiding(k1: &Drs, k2: &Drs, used: &BTreeSet<Register>) -> Result<Drs, NotMergeable> {
    let conflicts: Vec<Register> = k2
        .universe
        .iter()
        .copied()
        .filter(|r| used.contains(r))
        .collect();
    if !conflicts.is_empty() {
        return Err(NotMergeable { conflicts });
    }
    let mut universe = k1.universe.clone();
    universe.extend(k2.universe.iter().copied());
    let mut conditions = k1.conditions.clone();
    conditions.extend(k2.conditions.iter().cloned());
    Ok(Drs {
        universe,
        conditions,
    })
}

/// Greedy left-to-right merge of a box list. The second component has one
/// entry per input junction: `None` where the boxes merged, the failure
/// where they stayed sequenced.
pub fn merge_chain(boxes: Vec<Drs>) -> (Vec<Drs>, Vec<Option<NotMergeable>>) {
    merge_chain_with(boxes, merge)
}

pub fn merge_chain_with(
    boxes: Vec<Drs>,
    merge_fn: impl Fn(&Drs, &Drs) -> Result<Drs, NotMergeable>,
) -> (Vec<Drs>, Vec<Option<NotMergeable>>) {
    let mut out: Vec<Drs> = Vec::new();
    let mut junctions = Vec::new();
    for d in boxes {
        match out.last_mut() {
            None => out.push(d),
            Some(acc) => match merge_fn(acc, &d) {
                Ok(m) => {
                    *acc = m;
                    junctions.push(None);
                }
                Err(e) => {
                    junctions.push(Some(e));
                    out.push(d);
                }
            },
        }
    }
    (out, junctions)
}

/// Merges adjacent box literals in every `;` chain of the term, including
/// chains nested inside λ-bodies and definitions.
pub fn simplify_chains(t: &Term) -> Term {
    simplify_with(t, &merge)
}

pub(crate) fn simplify_with(
    t: &Term,
    merge_fn: &impl Fn(&Drs, &Drs) -> Result<Drs, NotMergeable>,
) -> Term {
    if t.as_seq().is_some() {
        let items: Vec<Term> = t
            .seq_items()
            .into_iter()
            .map(|i| simplify_with(i, merge_fn))
            .collect();
        let mut out: Vec<Term> = Vec::new();
        for item in items {
            if let (Some(Term::BoxLit(acc)), Term::BoxLit(d)) = (out.last_mut(), &item) {
                if let Ok(m) = merge_fn(acc, d) {
                    *acc = m;
                    continue;
                }
            }
            out.push(item);
        }
        return Term::seq_all(out);
    }
    t.map_children(&mut |c| simplify_with(c, merge_fn))
}

// ---------------------------------------------------------------------------
// Unabbreviation

fn truth2() -> Type {
    Type::arrow(Type::Truth, Type::arrow(Type::Truth, Type::Truth))
}

fn and(a: Term, b: Term) -> Term {
    Term::apps(Term::constant("∧", truth2()), [a, b])
}

fn implies(a: Term, b: Term) -> Term {
    Term::apps(Term::constant("→", truth2()), [a, b])
}

fn neg(a: Term) -> Term {
    Term::app(
        Term::constant("¬", Type::arrow(Type::Truth, Type::Truth)),
        a,
    )
}

fn quant(name: &str, var: String, body: Term) -> Term {
    let ty = Type::arrow(Type::arrow(Type::State, Type::Truth), Type::Truth);
    Term::app(Term::constant(name, ty), Term::lam(var, Type::State, body))
}

fn equals(ty: Type, a: Term, b: Term) -> Term {
    Term::apps(
        Term::constant("=", Type::arrow(ty.clone(), Type::arrow(ty, Type::Truth))),
        [a, b],
    )
}

/// The constant `[u⃗]` with `i[u⃗]j` true iff `j` differs from `i` at most
/// on the listed registers.
pub fn update_relation(universe: &[Register]) -> Term {
    let names: Vec<String> = universe.iter().map(|r| r.to_string()).collect();
    Term::constant(format!("[{}]", names.join(",")), Type::box_type())
}

struct Unabbrev {
    used: BTreeSet<String>,
}

impl Unabbrev {
    fn state(&mut self, base: &str) -> String {
        let name = if self.used.contains(base) {
            fresh_name(base, &self.used)
        } else {
            base.to_string()
        };
        self.used.insert(name.clone());
        name
    }

    /// `λi.λj.(i[U]j ∧ C₁ ∧ …)` with conditions read at `j`.
    fn drs(&mut self, d: &Drs, env: &mut Vec<(String, Type)>) -> Term {
        let i = self.state("i");
        let j = self.state("j");
        let (vi, vj) = (Term::var(&i, Type::State), Term::var(&j, Type::State));
        let mut body = Term::apps(update_relation(&d.universe), [vi, vj.clone()]);
        for c in &d.conditions {
            let c = self.condition(c, &vj, env);
            body = and(body, c);
        }
        Term::lam(i, Type::State, Term::lam(j, Type::State, body))
    }

    fn condition(&mut self, c: &Condition, at: &Term, env: &mut Vec<(String, Type)>) -> Term {
        match c {
            Condition::Atom(p, args) => {
                let mut arg_types = Vec::new();
                let mut out = Vec::new();
                for a in args {
                    let ty = local_type(a, env);
                    out.push(self.at_state(a, at, env));
                    arg_types.push(ty);
                }
                let ty = arg_types
                    .into_iter()
                    .rev()
                    .fold(Type::Truth, |acc, a| Type::arrow(a, acc));
                Term::apps(Term::constant(p.clone(), ty), out)
            }
            Condition::Eq(r, rhs) => equals(
                r.value_type(),
                Term::app(Term::reg(*r), at.clone()),
                self.at_state(rhs, at, env),
            ),
            Condition::Imp(a, b) => {
                let ka = self.box_term(a, env);
                let kb = self.box_term(b, env);
                let k = self.state("k");
                let l = self.state("l");
                let vk = Term::var(&k, Type::State);
                let vl = Term::var(&l, Type::State);
                let inner = quant("∃", l, Term::apps(kb, [vk.clone(), vl]));
                quant("∀", k, implies(Term::apps(ka, [at.clone(), vk]), inner))
            }
            Condition::Not(a) => {
                let ka = self.box_term(a, env);
                let k = self.state("k");
                let vk = Term::var(&k, Type::State);
                neg(quant("∃", k, Term::apps(ka, [at.clone(), vk])))
            }
        }
    }

    /// Unabbreviates a box-typed term into an explicit relation.
    fn box_term(&mut self, t: &Term, env: &mut Vec<(String, Type)>) -> Term {
        if let Some((l, r)) = t.as_seq() {
            let kl = self.box_term(l, env);
            let kr = self.box_term(r, env);
            let i = self.state("i");
            let j = self.state("j");
            let k = self.state("k");
            let (vi, vj, vk) = (
                Term::var(&i, Type::State),
                Term::var(&j, Type::State),
                Term::var(&k, Type::State),
            );
            let body = quant(
                "∃",
                k,
                and(Term::apps(kl, [vi, vk.clone()]), Term::apps(kr, [vk, vj])),
            );
            return Term::lam(i, Type::State, Term::lam(j, Type::State, body));
        }
        match t {
            Term::BoxLit(d) => self.drs(d, env),
            _ => {
                // A box-valued application such as P_2(u_3): registers are
                // read at the input state.
                let i = self.state("i");
                let j = self.state("j");
                let vi = Term::var(&i, Type::State);
                let vj = Term::var(&j, Type::State);
                let body = Term::apps(self.at_state(t, &vi, env), [vi.clone(), vj]);
                Term::lam(i, Type::State, Term::lam(j, Type::State, body))
            }
        }
    }

    /// Makes register reads explicit at state `at`.
    fn at_state(&mut self, t: &Term, at: &Term, env: &mut Vec<(String, Type)>) -> Term {
        if t.as_seq().is_some() || matches!(t, Term::BoxLit(_)) {
            return self.box_term(t, env);
        }
        match t {
            Term::Reg(r) => Term::app(Term::reg(*r), at.clone()),
            Term::Var(..) | Term::Const(..) => t.clone(),
            Term::Lam(x, ty, b) => {
                env.push((x.clone(), ty.clone()));
                let body = self.at_state(b, at, env);
                env.pop();
                Term::lam(x.clone(), ty.clone(), body)
            }
            Term::App(f, a) => {
                let f = self.at_state(f, at, env);
                let a = self.at_state(a, at, env);
                Term::app(f, a)
            }
            Term::BoxLit(_) => unreachable!(),
        }
    }
}

fn local_type(t: &Term, env: &[(String, Type)]) -> Type {
    let mut tenv = crate::typelogic::TypeEnv::new();
    for (n, ty) in env {
        tenv = tenv.with(n.clone(), ty.clone());
    }
    crate::typelogic::type_of(t, &tenv).unwrap_or(Type::Entity)
}

/// Spells a box out as a type-logic relation between states.
pub fn unabbreviate(b: &Drs) -> Term {
    let mut used = BTreeSet::new();
    for t in b.terms() {
        used.extend(t.all_var_names());
    }
    Unabbrev { used }.drs(b, &mut Vec::new())
}

/// Unabbreviates any closed box term, including `;` chains.
pub fn unabbreviate_term(t: &Term) -> Term {
    Unabbrev {
        used: t.all_var_names(),
    }
    .box_term(t, &mut Vec::new())
}
