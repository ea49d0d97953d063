//! Random well-typed terms for property tests.
//!
//! Binder names are drawn from the same small pool as the free variables,
//! so substitution regularly meets a binder that would capture.
#![allow(dead_code)]

use centering::typelogic::{Term, Type, TypeEnv};
use centering::{Condition, Drs, Register};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub const MAX_DEPTH: usize = 6;

/// Free variables every generated term may use.
pub fn free_vars() -> Vec<(String, Type)> {
    vec![
        ("x".into(), Type::Entity),
        ("y".into(), Type::Entity),
        ("P".into(), Type::property()),
        ("K".into(), Type::box_type()),
    ]
}

pub fn env() -> TypeEnv {
    free_vars()
        .into_iter()
        .fold(TypeEnv::new(), |e, (n, t)| e.with(n, t))
}

const BINDERS: &[&str] = &["x", "y", "z", "P", "Q", "K"];
const CONSTANTS: &[&str] = &["Tom", "John"];
const PREDICATES: &[&str] = &["walk", "love", "of"];

pub fn types() -> Vec<Type> {
    vec![
        Type::Entity,
        Type::box_type(),
        Type::property(),
        Type::quantifier(),
        Type::arrow(Type::Entity, Type::property()),
    ]
}

pub struct TermGen {
    rng: ChaCha8Rng,
    scope: Vec<(String, Type)>,
}

impl TermGen {
    pub fn new(seed: u64) -> TermGen {
        TermGen {
            rng: ChaCha8Rng::seed_from_u64(seed),
            scope: free_vars(),
        }
    }

    /// A term of a randomly chosen type, at most [`MAX_DEPTH`] deep.
    pub fn any(&mut self) -> (Term, Type) {
        loop {
            let ty = types().choose(&mut self.rng).unwrap().clone();
            let t = self.term(&ty, MAX_DEPTH);
            if depth(&t) <= MAX_DEPTH {
                return (t, ty);
            }
        }
    }

    fn var_of(&mut self, ty: &Type) -> Option<Term> {
        // Innermost binding of each name wins, as in the type checker.
        let mut names: Vec<&String> = Vec::new();
        for (n, _) in self.scope.iter().rev() {
            if !names.contains(&n) {
                names.push(n);
            }
        }
        let visible: Vec<Term> = names
            .into_iter()
            .filter_map(|n| {
                let (_, t) = self.scope.iter().rev().find(|(m, _)| m == n)?;
                (t == ty).then(|| Term::var(n.clone(), t.clone()))
            })
            .collect();
        visible.choose(&mut self.rng).cloned()
    }

    pub fn term(&mut self, ty: &Type, depth: usize) -> Term {
        if depth > 2 && self.rng.gen_bool(0.5) {
            let arg_ty = if self.rng.gen_bool(0.6) {
                Type::Entity
            } else {
                Type::property()
            };
            let f = self.term(&Type::arrow(arg_ty.clone(), ty.clone()), depth - 1);
            let a = self.term(&arg_ty, depth - 1);
            return Term::app(f, a);
        }
        if self.rng.gen_bool(0.2) {
            if let Some(v) = self.var_of(ty) {
                return v;
            }
        }
        match ty {
            Type::Arrow(a, b) if !ty.is_box() => {
                let name = BINDERS.choose(&mut self.rng).unwrap().to_string();
                self.scope.push((name.clone(), (**a).clone()));
                let body = self.term(b, depth.saturating_sub(1).max(1));
                self.scope.pop();
                Term::lam(name, (**a).clone(), body)
            }
            Type::Entity => {
                if self.rng.gen_bool(0.5) {
                    Term::entity(*CONSTANTS.choose(&mut self.rng).unwrap())
                } else {
                    Term::reg(Register::entity(self.rng.gen_range(0..3)))
                }
            }
            _ if ty.is_box() => {
                if depth > 1 && self.rng.gen_bool(0.2) {
                    return Term::seq(self.term(ty, depth - 1), self.term(ty, depth - 1));
                }
                self.drs(depth)
            }
            _ => self
                .var_of(ty)
                .expect("generator only asks for supported types"),
        }
    }

    fn drs(&mut self, depth: usize) -> Term {
        let universe: Vec<Register> = (0..3)
            .filter(|_| self.rng.gen_bool(0.3))
            .map(Register::entity)
            .collect();
        let n = if depth > 1 {
            self.rng.gen_range(1..4)
        } else {
            0
        };
        let conditions = (0..n).map(|_| self.condition(depth - 1)).collect();
        Term::boxed(Drs::new(universe, conditions))
    }

    fn condition(&mut self, depth: usize) -> Condition {
        match self.rng.gen_range(0..5) {
            0 if depth > 1 => Condition::Not(self.term(&Type::box_type(), depth)),
            1 if depth > 1 => Condition::Imp(
                self.term(&Type::box_type(), depth),
                self.term(&Type::box_type(), depth),
            ),
            2 => Condition::eq(
                Register::entity(self.rng.gen_range(0..3)),
                self.term(&Type::Entity, depth),
            ),
            _ => {
                let pred = *PREDICATES.choose(&mut self.rng).unwrap();
                let arity = if pred == "walk" { 1 } else { 2 };
                let args = (0..arity)
                    .map(|_| self.term(&Type::Entity, depth))
                    .collect();
                Condition::atom(pred, args)
            }
        }
    }
}

/// Nesting depth, counting each application, abstraction, box and
/// condition as one level.
pub fn depth(t: &Term) -> usize {
    match t {
        Term::Var(..) | Term::Const(..) | Term::Reg(_) => 0,
        Term::Lam(_, _, b) => 1 + depth(b),
        Term::App(f, a) => 1 + depth(f).max(depth(a)),
        Term::BoxLit(d) => {
            1 + d
                .conditions
                .iter()
                .map(|c| c.terms().into_iter().map(depth).max().unwrap_or(0))
                .max()
                .unwrap_or(0)
        }
    }
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Signature of the random first-order boxes: two unary predicates, one
/// binary predicate, one constant.
pub const UNARY: &[&str] = &["p", "q"];
pub const BINARY: &str = "r";

fn entity_term(rng: &mut ChaCha8Rng, regs: u32) -> Term {
    if rng.gen_bool(0.15) {
        Term::entity("Tom")
    } else {
        Term::reg(Register::entity(rng.gen_range(1..=regs)))
    }
}

/// A first-order box over registers `u_1..u_regs`.
pub fn first_order_box(rng: &mut ChaCha8Rng, regs: u32, nested: bool) -> Drs {
    let universe = (1..=regs)
        .filter(|_| rng.gen_bool(0.4))
        .map(Register::entity)
        .collect();
    let n = rng.gen_range(0..=2);
    let conditions = (0..n)
        .map(|_| match rng.gen_range(0..6) {
            0 => Condition::eq(
                Register::entity(rng.gen_range(1..=regs)),
                entity_term(rng, regs),
            ),
            1 if nested => Condition::Not(Term::boxed(first_order_box(rng, regs, false))),
            2 => Condition::atom(BINARY, vec![entity_term(rng, regs), entity_term(rng, regs)]),
            _ => Condition::atom(*UNARY.choose(rng).unwrap(), vec![entity_term(rng, regs)]),
        })
        .collect();
    Drs::new(universe, conditions)
}

/// A random model over `n` entities for the first-order signature.
pub fn small_model(rng: &mut ChaCha8Rng, n: usize) -> centering::modeleval::Model {
    let mut m = centering::modeleval::Model::with_size(n);
    m.set_constant("Tom", rng.gen_range(0..n));
    for p in UNARY {
        m.declare(*p, 1);
        for a in 0..n {
            if rng.gen_bool(0.5) {
                m.add_tuple(*p, vec![a]);
            }
        }
    }
    m.declare(BINARY, 2);
    for a in 0..n {
        for b in 0..n {
            if rng.gen_bool(0.4) {
                m.add_tuple(BINARY, vec![a, b]);
            }
        }
    }
    m
}
