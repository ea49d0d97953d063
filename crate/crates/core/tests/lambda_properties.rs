mod common;

use std::collections::BTreeSet;

use centering::typelogic::{
    alpha_eq, beta_reduce, is_normal, normalize, substitute, type_of, Strategy, Term, Type,
};
use common::TermGen;
use proptest::prelude::*;

fn config() -> ProptestConfig {
    ProptestConfig::with_cases(300)
}

proptest! {
    #![proptest_config(config())]

    #[test]
    fn generated_terms_are_well_typed_and_shallow(seed in any::<u64>()) {
        let (t, ty) = TermGen::new(seed).any();
        prop_assert_eq!(type_of(&t, &common::env()), Ok(ty));
        prop_assert!(common::depth(&t) <= common::MAX_DEPTH);
    }

    #[test]
    fn reduction_preserves_types(seed in any::<u64>()) {
        let (t, ty) = TermGen::new(seed).any();
        let nf = beta_reduce(&t);
        prop_assert_eq!(type_of(&nf, &common::env()), Ok(ty));
        prop_assert!(is_normal(&nf), "{}", nf);
    }

    #[test]
    fn strategies_reach_the_same_normal_form(seed in any::<u64>()) {
        let (t, _) = TermGen::new(seed).any();
        let a = normalize(&t, Strategy::LeftmostOutermost);
        let b = normalize(&t, Strategy::RightmostInnermost);
        prop_assert!(alpha_eq(&a, &b), "{} vs {}", a, b);
    }

    #[test]
    fn reduction_never_frees_or_captures(seed in any::<u64>()) {
        let (t, _) = TermGen::new(seed).any();
        let nf = beta_reduce(&t);
        prop_assert!(nf.free_vars().is_subset(&t.free_vars()), "{} -> {}", t, nf);
    }

    /// fv(t[x:=s]) = fv(t) - {x}, plus fv(s) when x occurs free in t.
    #[test]
    fn substitution_respects_free_variables(seed in any::<u64>(), var in 0usize..4) {
        let mut g = TermGen::new(seed);
        let (t, _) = g.any();
        let (x, ty) = common::free_vars()[var].clone();
        let s = g.term(&ty, 3);
        let out = substitute(&t, &x, &s);
        let mut expected: BTreeSet<String> = t.free_vars();
        let occurs = expected.remove(&x);
        if occurs {
            expected.extend(s.free_vars());
        }
        prop_assert_eq!(out.free_vars(), expected, "{}[{}:={}] = {}", t, x, s, out);
        prop_assert_eq!(type_of(&out, &common::env()), type_of(&t, &common::env()));
    }

    #[test]
    fn alpha_equivalence_is_reflexive_under_renaming(seed in any::<u64>()) {
        let (t, ty) = TermGen::new(seed).any();
        let renamed = Term::app(Term::lam("fresh'", ty.clone(), Term::var("fresh'", ty)), t.clone());
        prop_assert!(alpha_eq(&beta_reduce(&renamed), &beta_reduce(&t)));
    }
}

#[test]
fn capture_is_avoided_in_a_classic_case() {
    // (λx.λy.x) y  must not become  λy.y
    let e = Type::Entity;
    let k = Term::lam(
        "x",
        e.clone(),
        Term::lam("y", e.clone(), Term::var("x", e.clone())),
    );
    let t = beta_reduce(&Term::app(k, Term::var("y", e.clone())));
    assert_eq!(t.free_vars(), BTreeSet::from(["y".to_string()]));
    assert!(!alpha_eq(&t, &Term::lam("y", e.clone(), Term::var("y", e))));
}
