//! Simply-typed lambda calculus over the base types `s` (states), `e`
//! (entities) and `t` (truth values).
//!
//! Terms are the common currency of meanings. DRT boxes appear as
//! [`Term::BoxLit`] leaves and discourse registers as [`Term::Reg`] leaves;
//! registers are never bound by a λ, so substitution and reduction leave
//! them untouched.
//!
//! Two typing conventions are supported. In the *abbreviated* convention
//! (the default) a register denotes its value at the current state, so
//! `u_1 : e` and box literals have type `s → s → t`. In the *explicit*
//! convention, used for unabbreviated type-logic formulas, a register is a
//! function from states, `u_1 : s → e`.

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::drt::{Condition, Drs, Register};

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Type {
    State,
    Entity,
    Truth,
    Arrow(Box<Type>, Box<Type>),
}

impl Type {
    pub fn arrow(from: Type, to: Type) -> Type {
        Type::Arrow(Box::new(from), Box::new(to))
    }

    /// `s → s → t`, the type of a box.
    pub fn box_type() -> Type {
        Type::arrow(Type::State, Type::arrow(Type::State, Type::Truth))
    }

    /// `e → (s → s → t)`, the type of a dynamic property.
    pub fn property() -> Type {
        Type::arrow(Type::Entity, Type::box_type())
    }

    /// `(e → box) → box`, the type of a noun-phrase meaning and of a
    /// dynamic individual.
    pub fn quantifier() -> Type {
        Type::arrow(Type::property(), Type::box_type())
    }

    pub fn is_box(&self) -> bool {
        *self == Type::box_type()
    }

    pub fn split_arrow(&self) -> Option<(&Type, &Type)> {
        match self {
            Type::Arrow(a, b) => Some((a, b)),
            _ => None,
        }
    }
}

impl fmt::Display for Type {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Type::State => write!(f, "s"),
            Type::Entity => write!(f, "e"),
            Type::Truth => write!(f, "t"),
            Type::Arrow(a, b) => {
                if a.split_arrow().is_some() {
                    write!(f, "({a}) → {b}")
                } else {
                    write!(f, "{a} → {b}")
                }
            }
        }
    }
}

/// Name of the sequencing constant `;`.
pub const SEQ: &str = ";";

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Term {
    Var(String, Type),
    Const(String, Type),
    Lam(String, Type, Box<Term>),
    App(Box<Term>, Box<Term>),
    BoxLit(Drs),
    Reg(Register),
}

impl Term {
    pub fn var(name: impl Into<String>, ty: Type) -> Term {
        Term::Var(name.into(), ty)
    }

    pub fn constant(name: impl Into<String>, ty: Type) -> Term {
        Term::Const(name.into(), ty)
    }

    /// An entity-denoting constant such as `Tom`.
    pub fn entity(name: impl Into<String>) -> Term {
        Term::Const(name.into(), Type::Entity)
    }

    pub fn lam(name: impl Into<String>, ty: Type, body: Term) -> Term {
        Term::Lam(name.into(), ty, Box::new(body))
    }

    pub fn app(fun: Term, arg: Term) -> Term {
        Term::App(Box::new(fun), Box::new(arg))
    }

    pub fn apps(fun: Term, args: impl IntoIterator<Item = Term>) -> Term {
        args.into_iter().fold(fun, Term::app)
    }

    pub fn reg(r: Register) -> Term {
        Term::Reg(r)
    }

    pub fn boxed(d: Drs) -> Term {
        Term::BoxLit(d)
    }

    pub fn seq_const() -> Term {
        Term::Const(
            SEQ.to_string(),
            Type::arrow(
                Type::box_type(),
                Type::arrow(Type::box_type(), Type::box_type()),
            ),
        )
    }

    /// `left ; right`.
    pub fn seq(left: Term, right: Term) -> Term {
        Term::apps(Term::seq_const(), [left, right])
    }

    /// Right-nested sequence of a nonempty list of box terms.
    pub fn seq_all(items: Vec<Term>) -> Term {
        let mut iter = items.into_iter().rev();
        let last = iter.next().expect("seq_all of an empty list");
        iter.fold(last, |acc, t| Term::seq(t, acc))
    }

    /// Splits `a ; b` into its two halves.
    pub fn as_seq(&self) -> Option<(&Term, &Term)> {
        if let Term::App(f, right) = self {
            if let Term::App(g, left) = &**f {
                if let Term::Const(name, _) = &**g {
                    if name == SEQ {
                        return Some((left, right));
                    }
                }
            }
        }
        None
    }

    /// Flattens nested sequencing into its left-to-right items.
    pub fn seq_items(&self) -> Vec<&Term> {
        let mut out = Vec::new();
        fn go<'a>(t: &'a Term, out: &mut Vec<&'a Term>) {
            match t.as_seq() {
                Some((l, r)) => {
                    go(l, out);
                    go(r, out);
                }
                None => out.push(t),
            }
        }
        go(self, &mut out);
        out
    }

    /// Head and arguments of an application spine.
    pub fn spine(&self) -> (&Term, Vec<&Term>) {
        let mut args = Vec::new();
        let mut head = self;
        while let Term::App(f, a) = head {
            args.push(&**a);
            head = f;
        }
        args.reverse();
        (head, args)
    }

    pub fn free_vars(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.collect_free_vars(&mut Vec::new(), &mut out);
        out
    }

    fn collect_free_vars(&self, bound: &mut Vec<String>, out: &mut BTreeSet<String>) {
        match self {
            Term::Var(n, _) => {
                if !bound.contains(n) {
                    out.insert(n.clone());
                }
            }
            Term::Const(..) | Term::Reg(_) => {}
            Term::Lam(x, _, b) => {
                bound.push(x.clone());
                b.collect_free_vars(bound, out);
                bound.pop();
            }
            Term::App(f, a) => {
                f.collect_free_vars(bound, out);
                a.collect_free_vars(bound, out);
            }
            Term::BoxLit(d) => {
                for t in d.terms() {
                    t.collect_free_vars(bound, out);
                }
            }
        }
    }

    /// Every variable name occurring anywhere, bound or free.
    pub fn all_var_names(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.visit(&mut |t| match t {
            Term::Var(n, _) | Term::Lam(n, _, _) => {
                out.insert(n.clone());
            }
            _ => {}
        });
        out
    }

    /// Every register occurring anywhere, including inside nested boxes
    /// and definitions.
    pub fn registers(&self) -> BTreeSet<Register> {
        let mut out = BTreeSet::new();
        self.visit(&mut |t| match t {
            Term::Reg(r) => {
                out.insert(*r);
            }
            Term::BoxLit(d) => {
                out.extend(d.universe.iter().copied());
                for c in &d.conditions {
                    if let Condition::Eq(r, _) = c {
                        out.insert(*r);
                    }
                }
            }
            _ => {}
        });
        out
    }

    /// Pre-order traversal of all subterms, descending into boxes.
    pub fn visit(&self, f: &mut impl FnMut(&Term)) {
        f(self);
        match self {
            Term::Lam(_, _, b) => b.visit(f),
            Term::App(g, a) => {
                g.visit(f);
                a.visit(f);
            }
            Term::BoxLit(d) => {
                for t in d.terms() {
                    t.visit(f);
                }
            }
            _ => {}
        }
    }

    pub fn size(&self) -> usize {
        let mut n = 0;
        self.visit(&mut |_| n += 1);
        n
    }

    /// Applies `f` to every immediate subterm, rebuilding the node.
    pub fn map_children(&self, f: &mut impl FnMut(&Term) -> Term) -> Term {
        match self {
            Term::Var(..) | Term::Const(..) | Term::Reg(_) => self.clone(),
            Term::Lam(x, ty, b) => Term::Lam(x.clone(), ty.clone(), Box::new(f(b))),
            Term::App(g, a) => Term::App(Box::new(f(g)), Box::new(f(a))),
            Term::BoxLit(d) => Term::BoxLit(d.map_terms(f)),
        }
    }
}

impl From<Drs> for Term {
    fn from(d: Drs) -> Term {
        Term::BoxLit(d)
    }
}

impl From<Register> for Term {
    fn from(r: Register) -> Term {
        Term::Reg(r)
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&crate::drt::text::render_term(self, &Default::default()))
    }
}

// ---------------------------------------------------------------------------
// Typing

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TypeError {
    #[error("type mismatch at `{location}`: expected {expected}, found {found}")]
    TypeMismatch {
        location: String,
        expected: Type,
        found: Type,
    },
    #[error("`{location}` is applied but has non-function type {found}")]
    NotAFunction { location: String, found: Type },
    #[error("unbound variable `{0}`")]
    UnboundVariable(String),
}

/// Typing environment: declared free variables plus the register
/// convention in force.
#[derive(Debug, Clone, Default)]
pub struct TypeEnv {
    vars: Vec<(String, Type)>,
    explicit_states: bool,
}

impl TypeEnv {
    pub fn new() -> TypeEnv {
        TypeEnv::default()
    }

    /// Environment for unabbreviated formulas, where registers take a state
    /// argument.
    pub fn explicit() -> TypeEnv {
        TypeEnv {
            vars: Vec::new(),
            explicit_states: true,
        }
    }

    pub fn with(mut self, name: impl Into<String>, ty: Type) -> TypeEnv {
        self.vars.push((name.into(), ty));
        self
    }

    fn lookup(&self, name: &str) -> Option<&Type> {
        self.vars
            .iter()
            .rev()
            .find(|(n, _)| n == name)
            .map(|(_, t)| t)
    }

    fn register_type(&self, r: &Register) -> Type {
        if self.explicit_states {
            r.full_type()
        } else {
            r.value_type()
        }
    }
}

pub fn type_of(t: &Term, env: &TypeEnv) -> Result<Type, TypeError> {
    let mut env = env.clone();
    infer(t, &mut env)
}

fn infer(t: &Term, env: &mut TypeEnv) -> Result<Type, TypeError> {
    match t {
        Term::Var(n, ty) => match env.lookup(n) {
            Some(declared) if declared == ty => Ok(ty.clone()),
            Some(declared) => Err(TypeError::TypeMismatch {
                location: n.clone(),
                expected: declared.clone(),
                found: ty.clone(),
            }),
            None => Err(TypeError::UnboundVariable(n.clone())),
        },
        Term::Const(_, ty) => Ok(ty.clone()),
        Term::Reg(r) => Ok(env.register_type(r)),
        Term::Lam(x, ty, body) => {
            env.vars.push((x.clone(), ty.clone()));
            let body_ty = infer(body, env);
            env.vars.pop();
            Ok(Type::arrow(ty.clone(), body_ty?))
        }
        Term::App(f, a) => {
            let fty = infer(f, env)?;
            let aty = infer(a, env)?;
            match fty {
                Type::Arrow(dom, cod) => {
                    if *dom == aty {
                        Ok(*cod)
                    } else {
                        Err(TypeError::TypeMismatch {
                            location: t.to_string(),
                            expected: *dom,
                            found: aty,
                        })
                    }
                }
                other => Err(TypeError::NotAFunction {
                    location: f.to_string(),
                    found: other,
                }),
            }
        }
        Term::BoxLit(d) => {
            check_box(d, env)?;
            Ok(Type::box_type())
        }
    }
}

fn check_box(d: &Drs, env: &mut TypeEnv) -> Result<(), TypeError> {
    // Conditions inside a box literal always use the abbreviated convention.
    let saved = env.explicit_states;
    env.explicit_states = false;
    let result = d
        .conditions
        .iter()
        .try_for_each(|c| check_condition(c, env));
    env.explicit_states = saved;
    result
}

fn expect(t: &Term, want: &Type, env: &mut TypeEnv) -> Result<(), TypeError> {
    let found = infer(t, env)?;
    if &found == want {
        Ok(())
    } else {
        Err(TypeError::TypeMismatch {
            location: t.to_string(),
            expected: want.clone(),
            found,
        })
    }
}

fn check_condition(c: &Condition, env: &mut TypeEnv) -> Result<(), TypeError> {
    match c {
        Condition::Atom(_, args) => {
            for a in args {
                let ty = infer(a, env)?;
                if ty != Type::Entity && !ty.is_box() {
                    return Err(TypeError::TypeMismatch {
                        location: a.to_string(),
                        expected: Type::Entity,
                        found: ty,
                    });
                }
            }
            Ok(())
        }
        Condition::Eq(r, rhs) => expect(rhs, &r.value_type(), env),
        Condition::Imp(a, b) => {
            expect(a, &Type::box_type(), env)?;
            expect(b, &Type::box_type(), env)
        }
        Condition::Not(a) => expect(a, &Type::box_type(), env),
    }
}

// ---------------------------------------------------------------------------
// Substitution

/// A name based on `base` that does not occur in `avoid`: `base'1`,
/// `base'2`, ... The smallest free suffix is used.
pub fn fresh_name(base: &str, avoid: &BTreeSet<String>) -> String {
    let stem = base.split('\'').next().unwrap_or(base);
    let stem = if stem.is_empty() { "v" } else { stem };
    (1..)
        .map(|k| format!("{stem}'{k}"))
        .find(|cand| !avoid.contains(cand))
        .expect("unbounded search")
}

/// Capture-avoiding substitution of `s` for the free variable `v` in `t`.
pub fn substitute(t: &Term, v: &str, s: &Term) -> Term {
    let fv_s = s.free_vars();
    subst(t, v, s, &fv_s)
}

fn subst(t: &Term, v: &str, s: &Term, fv_s: &BTreeSet<String>) -> Term {
    match t {
        Term::Var(n, _) if n == v => s.clone(),
        Term::Lam(x, ty, body) => {
            if x == v {
                return t.clone();
            }
            let body_fv = body.free_vars();
            if !body_fv.contains(v) {
                return t.clone();
            }
            if fv_s.contains(x) {
                let mut avoid = fv_s.clone();
                avoid.extend(body.all_var_names());
                avoid.insert(v.to_string());
                let y = fresh_name(x, &avoid);
                let renamed = subst(
                    body,
                    x,
                    &Term::Var(y.clone(), ty.clone()),
                    &BTreeSet::from([y.clone()]),
                );
                Term::Lam(y, ty.clone(), Box::new(subst(&renamed, v, s, fv_s)))
            } else {
                Term::Lam(x.clone(), ty.clone(), Box::new(subst(body, v, s, fv_s)))
            }
        }
        _ => t.map_children(&mut |c| subst(c, v, s, fv_s)),
    }
}

// ---------------------------------------------------------------------------
// Reduction

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Strategy {
    /// Normal order: contract the leftmost-outermost redex first.
    LeftmostOutermost,
    /// Applicative order from the right: arguments before functions,
    /// innermost redexes before enclosing ones.
    RightmostInnermost,
}

/// β-normal form under the leftmost-outermost strategy.
pub fn beta_reduce(t: &Term) -> Term {
    normalize(t, Strategy::LeftmostOutermost)
}

pub fn normalize(t: &Term, strategy: Strategy) -> Term {
    match strategy {
        Strategy::LeftmostOutermost => nf_outer(t),
        Strategy::RightmostInnermost => nf_inner(t),
    }
}

fn whnf(t: &Term) -> Term {
    match t {
        Term::App(f, a) => {
            let f = whnf(f);
            match f {
                Term::Lam(x, _, body) => whnf(&substitute(&body, &x, a)),
                f => Term::App(Box::new(f), a.clone()),
            }
        }
        _ => t.clone(),
    }
}

fn nf_outer(t: &Term) -> Term {
    match t {
        Term::App(..) => match whnf(t) {
            Term::App(f, a) => Term::App(Box::new(nf_outer(&f)), Box::new(nf_outer(&a))),
            other => nf_outer(&other),
        },
        _ => t.map_children(&mut nf_outer),
    }
}

fn nf_inner(t: &Term) -> Term {
    match t {
        Term::App(f, a) => {
            let a = nf_inner(a);
            let f = nf_inner(f);
            match f {
                Term::Lam(x, _, body) => nf_inner(&substitute(&body, &x, &a)),
                f => Term::App(Box::new(f), Box::new(a)),
            }
        }
        Term::BoxLit(d) => {
            // Visit conditions right to left; the result is the same box.
            let mut conds: Vec<Condition> = d
                .conditions
                .iter()
                .rev()
                .map(|c| c.map_terms_rev(&mut nf_inner))
                .collect();
            conds.reverse();
            Term::BoxLit(Drs::new(d.universe.clone(), conds))
        }
        _ => t.map_children(&mut nf_inner),
    }
}

pub fn is_normal(t: &Term) -> bool {
    let mut normal = true;
    t.visit(&mut |s| {
        if let Term::App(f, _) = s {
            if matches!(**f, Term::Lam(..)) {
                normal = false;
            }
        }
    });
    normal
}

// ---------------------------------------------------------------------------
// α-equivalence

pub fn alpha_eq(t1: &Term, t2: &Term) -> bool {
    alpha(t1, t2, &mut Vec::new(), &mut Vec::new())
}

fn bound_index(stack: &[String], name: &str) -> Option<usize> {
    stack.iter().rev().position(|n| n == name)
}

fn alpha(a: &Term, b: &Term, sa: &mut Vec<String>, sb: &mut Vec<String>) -> bool {
    match (a, b) {
        (Term::Var(x, tx), Term::Var(y, ty)) => {
            tx == ty
                && match (bound_index(sa, x), bound_index(sb, y)) {
                    (Some(i), Some(j)) => i == j,
                    (None, None) => x == y,
                    _ => false,
                }
        }
        (Term::Const(x, tx), Term::Const(y, ty)) => x == y && tx == ty,
        (Term::Reg(x), Term::Reg(y)) => x == y,
        (Term::Lam(x, tx, bx), Term::Lam(y, ty, by)) => {
            if tx != ty {
                return false;
            }
            sa.push(x.clone());
            sb.push(y.clone());
            let r = alpha(bx, by, sa, sb);
            sa.pop();
            sb.pop();
            r
        }
        (Term::App(f1, a1), Term::App(f2, a2)) => alpha(f1, f2, sa, sb) && alpha(a1, a2, sa, sb),
        (Term::BoxLit(d1), Term::BoxLit(d2)) => {
            d1.universe == d2.universe
                && d1.conditions.len() == d2.conditions.len()
                && d1
                    .conditions
                    .iter()
                    .zip(&d2.conditions)
                    .all(|(c1, c2)| alpha_condition(c1, c2, sa, sb))
        }
        _ => false,
    }
}

fn alpha_condition(
    c1: &Condition,
    c2: &Condition,
    sa: &mut Vec<String>,
    sb: &mut Vec<String>,
) -> bool {
    match (c1, c2) {
        (Condition::Atom(p, xs), Condition::Atom(q, ys)) => {
            p == q && xs.len() == ys.len() && xs.iter().zip(ys).all(|(x, y)| alpha(x, y, sa, sb))
        }
        (Condition::Eq(r1, t1), Condition::Eq(r2, t2)) => r1 == r2 && alpha(t1, t2, sa, sb),
        (Condition::Imp(a1, b1), Condition::Imp(a2, b2)) => {
            alpha(a1, a2, sa, sb) && alpha(b1, b2, sa, sb)
        }
        (Condition::Not(a1), Condition::Not(a2)) => alpha(a1, a2, sa, sb),
        _ => false,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::drt::Drs;

    fn walk(x: Term) -> Term {
        Term::boxed(Drs::new(vec![], vec![Condition::atom("walk", vec![x])]))
    }

    #[test]
    fn var_types_by_axiom() {
        let env = TypeEnv::new().with("i", Type::State);
        assert_eq!(type_of(&Term::var("i", Type::State), &env), Ok(Type::State));
    }

    #[test]
    fn applied_property_is_a_box() {
        let t = Term::app(
            Term::lam("x", Type::Entity, walk(Term::var("x", Type::Entity))),
            Term::entity("Tom"),
        );
        assert_eq!(type_of(&t, &TypeEnv::new()), Ok(Type::box_type()));
    }

    #[test]
    fn argument_clash_is_a_mismatch() {
        let t = Term::app(
            Term::constant("walk", Type::arrow(Type::Entity, Type::Truth)),
            Term::var("i", Type::State),
        );
        let env = TypeEnv::new().with("i", Type::State);
        assert!(matches!(
            type_of(&t, &env),
            Err(TypeError::TypeMismatch { .. })
        ));
    }

    #[test]
    fn registers_follow_the_convention() {
        let u1 = Term::reg(Register::entity(1));
        assert_eq!(type_of(&u1, &TypeEnv::new()), Ok(Type::Entity));
        assert_eq!(
            type_of(&u1, &TypeEnv::explicit()),
            Ok(Type::arrow(Type::State, Type::Entity))
        );
        let p2 = Term::reg(Register::property(2));
        assert_eq!(type_of(&p2, &TypeEnv::new()), Ok(Type::property()));
        let x3 = Term::reg(Register::dynamic(3));
        assert_eq!(type_of(&x3, &TypeEnv::new()), Ok(Type::quantifier()));
    }

    #[test]
    fn substitute_identity_case() {
        let t = Term::entity("Tom");
        assert_eq!(substitute(&Term::var("x", Type::Entity), "x", &t), t);
    }

    #[test]
    fn substitute_avoids_capture() {
        let lam = Term::lam("y", Type::Entity, Term::var("x", Type::Entity));
        let out = substitute(&lam, "x", &Term::var("y", Type::Entity));
        match &out {
            Term::Lam(bound, _, body) => {
                assert_ne!(bound, "y");
                assert_eq!(**body, Term::var("y", Type::Entity));
            }
            other => panic!("expected a lambda, got {other}"),
        }
        assert!(out.free_vars().contains("y"));
    }

    #[test]
    fn substitute_property_into_box_template() {
        // λx.P(x) with P := λu'.[ | love(v, u')] reduces to λx.[ | love(v, x)].
        let e = Type::Entity;
        let t = Term::lam(
            "x",
            e.clone(),
            Term::app(Term::var("P", Type::property()), Term::var("x", e.clone())),
        );
        let love = Term::lam(
            "u'",
            e.clone(),
            Term::boxed(Drs::new(
                vec![],
                vec![Condition::atom(
                    "love",
                    vec![Term::var("v", e.clone()), Term::var("u'", e.clone())],
                )],
            )),
        );
        let out = beta_reduce(&substitute(&t, "P", &love));
        let expected = Term::lam(
            "x",
            e.clone(),
            Term::boxed(Drs::new(
                vec![],
                vec![Condition::atom(
                    "love",
                    vec![Term::var("v", e.clone()), Term::var("x", e)],
                )],
            )),
        );
        assert!(alpha_eq(&out, &expected), "{out}");
    }

    #[test]
    fn beta_reduces_into_box() {
        let e = Type::Entity;
        let save = |a: Term| {
            Term::boxed(Drs::new(
                vec![],
                vec![Condition::atom(
                    "save",
                    vec![a, Term::reg(Register::entity(3))],
                )],
            ))
        };
        let t = Term::app(
            Term::lam("v", e.clone(), save(Term::var("v", e))),
            Term::reg(Register::entity(4)),
        );
        assert_eq!(beta_reduce(&t), save(Term::reg(Register::entity(4))));
        let nf = beta_reduce(&t);
        assert_eq!(beta_reduce(&nf), nf);
    }

    #[test]
    fn alpha_equivalence_basics() {
        let e = Type::Entity;
        assert!(alpha_eq(
            &Term::lam("x", e.clone(), Term::var("x", e.clone())),
            &Term::lam("y", e.clone(), Term::var("y", e.clone()))
        ));
        assert!(!alpha_eq(
            &Term::lam("x", e.clone(), Term::reg(Register::entity(1))),
            &Term::lam("y", e.clone(), Term::reg(Register::entity(2)))
        ));
        assert!(!alpha_eq(
            &Term::lam("x", e.clone(), Term::var("z", e.clone())),
            &Term::lam("z", e.clone(), Term::var("z", e))
        ));
    }

    #[test]
    fn fresh_names_skip_used_suffixes() {
        let avoid: BTreeSet<String> = ["y", "y'1"].iter().map(|s| s.to_string()).collect();
        assert_eq!(fresh_name("y", &avoid), "y'2");
        assert_eq!(fresh_name("y'1", &BTreeSet::new()), "y'1");
    }

    #[test]
    fn seq_items_flatten_both_nestings() {
        let a = Term::boxed(Drs::empty());
        let b = Term::reg(Register::entity(1));
        let left = Term::seq(Term::seq(a.clone(), b.clone()), a.clone());
        let right = Term::seq(a.clone(), Term::seq(b.clone(), a.clone()));
        assert_eq!(left.seq_items(), right.seq_items());
        assert_eq!(Term::seq_all(vec![a.clone(), b, a]), right);
    }
}
