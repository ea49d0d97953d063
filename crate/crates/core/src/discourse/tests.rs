use super::*;
use crate::drt::text::parse_box;
use crate::fragment::{tokenize, ProformClass};

const FARMER: &str = "A_1* farmer walks.\nHe_* laughed.";
const TOM_JOHN: &str = "Tom_1* PRES_2 walk.\nJohn_3* does_2 too.";
const SLOPPY_CAT: &str = "Tom_1* PRES_2 love his_* cat_3.\nJohn_4* does_2 too.";
const PAYCHECK: &str = "Smith_1* PAST_2 spend his_* paycheck_3.\nJones_4* PAST_5 save it_3.";
const HELP_KISS: &str = "I_1 WILL_2* help you_3 [if] you_3 PRES_4 want me_1 to_*.\n\
                         I_1 WILL_5* kiss you_3 [even if] you_3 DO_4 NOT.";

fn derive(src: &str) -> Derivation {
    derive_text(src, &DeriveOptions::default()).unwrap()
}

fn last_box(d: &Derivation) -> String {
    d.program.boxes().last().unwrap().to_string()
}

struct Fixed(Vec<Register>, Option<Register>);

impl Accessible for Fixed {
    fn is_introduced(&self, r: Register) -> bool {
        self.0.contains(&r)
    }
    fn center_link(&self) -> Option<Register> {
        self.1
    }
}

#[test]
fn resolves_by_index_and_kind() {
    let ctx = Fixed(
        vec![
            Register::entity(0),
            Register::entity(1),
            Register::property(2),
        ],
        Some(Register::entity(1)),
    );
    assert_eq!(
        resolve_anaphor(RegisterKind::Entity, 0, &ctx),
        Ok(Register::entity(0))
    );
    assert_eq!(
        resolve_anaphor(RegisterKind::Property, 2, &ctx),
        Ok(Register::property(2))
    );
    assert_eq!(
        resolve_anaphor(RegisterKind::Entity, 7, &ctx),
        Err(ResolveError::UnresolvedAnaphor {
            kind: RegisterKind::Entity,
            index: 7
        })
    );
    assert_eq!(
        resolve_anaphor(RegisterKind::Entity, 2, &ctx),
        Err(ResolveError::KindMismatch {
            index: 2,
            expected: RegisterKind::Entity,
            found: RegisterKind::Property
        })
    );
    assert!(matches!(
        resolve_anaphor(RegisterKind::Property, 0, &ctx),
        Err(ResolveError::KindMismatch { .. })
    ));
    assert!(resolve_anaphor(RegisterKind::Entity, 7, &DiscourseState::new()).is_err());
}

#[test]
fn farmer_discourse_merges_into_one_box() {
    let d = derive(FARMER);
    assert_eq!(
        d.program.to_string(),
        "[u_0, u_1 | u_0 = u_1, farmer(u_1), walk(u_1), laugh(u_0)]"
    );
    assert_eq!(
        d.transitions(),
        [Transition::Establish, Transition::Continuation]
    );
    assert!(d.junctions[0].merged);
    assert_eq!(d.violations().count(), 0);
    assert_eq!(d.utterances[1].proforms[0].register, Register::entity(0));
}

#[test]
fn ellipsis_applies_the_stored_property() {
    let d = derive(TOM_JOHN);
    assert_eq!(
        d.utterances[1].composed.to_string(),
        "[u_0, u_3 | u_0 = u_3, u_3 = John] ; P_2(u_3)"
    );
    let expected = parse_box("[u_0, u_3 | u_0 = u_3, u_3 = John, walk(u_3)]").unwrap();
    assert_eq!(d.program.boxes()[1], &expected);
    assert_eq!(d.transitions(), [Transition::Establish, Transition::Shift]);
    assert_eq!(
        d.junctions[0],
        Junction {
            utterance: 2,
            merged: false,
            conflicts: vec![Register::entity(0)]
        }
    );
    let walk = lookup_definition(Register::property(2), &d).unwrap();
    assert_eq!(walk.to_string(), "λv.[ | walk(v)]");
    assert_eq!(
        lookup_definition(Register::property(9), &d),
        Err(NoDefinition(Register::property(9)))
    );
}

#[test]
fn sloppy_cat_reevaluates_the_center() {
    let d = derive(SLOPPY_CAT);
    assert_eq!(
        last_box(&d),
        "[u_0, u_4, u_3 | u_0 = u_4, u_4 = John, of(u_3, u_0), cat(u_3), love(u_4, u_3)]"
    );
    assert_eq!(d.transitions()[1], Transition::Shift);
    assert!(!d.junctions[0].merged);
    assert_eq!(d.violations().count(), 0);
}

#[test]
fn paycheck_pronoun_reevaluates_the_dynamic_individual() {
    let d = derive(PAYCHECK);
    let x3 = lookup_definition(Register::dynamic(3), &d).unwrap();
    assert_eq!(
        x3.to_string(),
        "λP.([u_3 | of(u_3, u_0), paycheck(u_3)] ; P(u_3))"
    );
    let last = last_box(&d);
    for part in [
        "u_0 = u_4",
        "u_4 = Jones",
        "of(u_3, u_0)",
        "paycheck(u_3)",
        "save(u_4, u_3)",
    ] {
        assert!(last.contains(part), "{last}");
    }
    let it = &d.utterances[1].proforms[0];
    assert_eq!(
        (it.class, it.register),
        (ProformClass::Pronoun, Register::dynamic(3))
    );
    assert_eq!(d.violations().count(), 0);
}

#[test]
fn plain_genitive_gives_an_ordinary_pronoun() {
    let opts = DeriveOptions {
        mode: DeriveMode::StrictAnnotations,
        ..DeriveOptions::default()
    };
    let d = derive_text(PAYCHECK, &opts).unwrap();
    assert_eq!(d.utterances[1].proforms[0].register, Register::entity(3));
    assert!(last_box(&d).contains("save(u_4, u_3)"));
    assert!(!last_box(&d).contains("of("));
}

#[test]
fn help_kiss_shifts_a_property_center() {
    let d = derive(HELP_KISS);
    let p4 = lookup_definition(Register::property(4), &d).unwrap();
    assert_eq!(p4.to_string(), "λv.[ | want(v, P_0(u_1))]");
    let first = d.program.boxes()[0].to_string();
    assert!(first.contains("want(u_3, help(u_1, u_3))"), "{first}");
    assert!(last_box(&d).contains("NOT([ | want(u_3, kiss(u_1, u_3))])"));
    assert_eq!(d.transitions(), [Transition::Establish, Transition::Shift]);
    assert_eq!(d.junctions[0].conflicts, vec![Register::property(0)]);
}

#[test]
fn transitions_follow_the_center_link() {
    let d =
        derive("Tom_1* PRES_2 walk.\nhe_* PRES_3 laugh.\nJohn_4* does_3 too.\nhe_* does_2 too.");
    assert_eq!(
        d.transitions(),
        [
            Transition::Establish,
            Transition::Continuation,
            Transition::Shift,
            Transition::Continuation
        ]
    );
    let single = derive("Tom_1 PRES_2 walk.");
    assert_eq!(single.transitions(), [Transition::Establish]);
    assert_eq!(single.state.center_link, None);
}

#[test]
fn double_introductions_are_rejected() {
    let err = derive_text("Tom_1* PRES_2 love a_3* cat.", &DeriveOptions::default()).unwrap_err();
    assert!(matches!(
        err,
        DeriveError::Discourse {
            utterance: 1,
            source: DiscourseError::DoubleIntroduction(_)
        }
    ));
    assert!(derive_text("Tom_1 PRES_2 love John_1.", &DeriveOptions::default()).is_err());
}

#[test]
fn unresolved_and_mismatched_anaphors() {
    let err = derive_text("he_7 PRES_2 walk.", &DeriveOptions::default()).unwrap_err();
    assert!(matches!(err, DeriveError::Compose { utterance: 1, .. }));
    let err = derive_text(
        "Tom_1 PRES_2 walk.\nJohn_3 PRES_4 love it_2.",
        &DeriveOptions::default(),
    )
    .unwrap_err();
    assert!(err.to_string().contains("property"), "{err}");
    assert!(derive_text(
        "Tom_1 PRES_2 walk.\nJohn_3 does_1 too.",
        &DeriveOptions::default()
    )
    .is_err());
}

#[test]
fn old_center_stays_accessible_after_a_shift() {
    let d = derive(&format!("{TOM_JOHN}\nHe_1 PAST_9 laugh."));
    assert_eq!(d.utterances[2].proforms[0].register, Register::entity(1));
    assert!(last_box(&d).contains("laugh(u_1)"));
    assert_eq!(
        lookup_definition(Register::entity(1), &d)
            .unwrap()
            .to_string(),
        "Tom"
    );
}

#[test]
fn constraint_examples() {
    let ok = derive(TOM_JOHN);
    assert!(ok.utterances[1].violations.is_empty());

    let no_center = derive("A_1 farmer walks.\nA_2 dog barks.");
    assert_eq!(no_center.utterances[1].violations, [Violation::NoCenter]);

    let off_center =
        derive("A_1* farmer PAST_3 own a_2 dog.\nTom_4* PAST_5 see him_1 [and] he_2 barks.");
    assert_eq!(
        off_center.utterances[1].violations,
        [Violation::NoPronounOnCenter]
    );

    let strict = DeriveOptions {
        policy: CenteringPolicy::Strict,
        ..DeriveOptions::default()
    };
    let err = derive_text("A_1 farmer walks.\nA_2 dog barks.", &strict).unwrap_err();
    assert_eq!(
        err,
        DeriveError::Constraint {
            utterance: 2,
            violations: vec![Violation::NoCenter]
        }
    );
}

#[test]
fn ignoring_reassignment_merges_across_a_shift() {
    let opts = DeriveOptions {
        merge: MergeRule::IgnoreReassignment,
        ..DeriveOptions::default()
    };
    let d = derive_text(TOM_JOHN, &opts).unwrap();
    assert!(d.junctions[0].merged);
    assert_eq!(d.program.boxes().len(), 1);
}

#[test]
fn derivation_is_deterministic() {
    for src in [FARMER, SLOPPY_CAT, PAYCHECK, HELP_KISS] {
        assert_eq!(derive(src), derive(src));
    }
}

fn utterances(src: &str) -> Vec<Vec<crate::fragment::Token>> {
    src.lines().map(|l| tokenize(l).unwrap()).collect()
}

#[test]
fn sloppy_cat_readings() {
    let r = enumerate_readings(
        &utterances(SLOPPY_CAT),
        "1:4".parse().unwrap(),
        &DeriveOptions::default(),
    )
    .unwrap();
    assert_eq!(r.sloppy.annotation, "his_*");
    assert_eq!(r.strict.annotation, "his_1");
    assert_eq!(r.controller, Some(Register::entity(1)));
    assert!(!r.trivial && !r.strict_only);
    assert!(last_box(&r.sloppy.derivation).contains("of(u_3, u_0)"));
    let strict = last_box(&r.strict.derivation);
    assert!(
        strict.contains("of(u_3, u_1)") && strict.contains("love(u_4, u_3)"),
        "{strict}"
    );
    // asking at the ellipsis site finds the same variable
    let r2 = enumerate_readings(
        &utterances(SLOPPY_CAT),
        "2:2".parse().unwrap(),
        &DeriveOptions::default(),
    )
    .unwrap();
    assert_eq!(r2.variable, r.variable);
    assert_eq!(r2.strict.derivation, r.strict.derivation);
}

#[test]
fn paycheck_readings() {
    let toks = utterances(PAYCHECK);
    let r = enumerate_readings(&toks, "2:4".parse().unwrap(), &DeriveOptions::default()).unwrap();
    assert_eq!(r.variable, "1:4".parse().unwrap());
    assert!(!r.strict_only);
    assert!(last_box(&r.strict.derivation).contains("of(u_3, u_1)"));
    let opts = DeriveOptions {
        mode: DeriveMode::StrictAnnotations,
        ..DeriveOptions::default()
    };
    let r = enumerate_readings(&toks, "2:4".parse().unwrap(), &opts).unwrap();
    assert!(r.strict_only);
}

#[test]
fn help_kiss_readings() {
    let toks = utterances(HELP_KISS);
    let r = enumerate_readings(&toks, "2:7".parse().unwrap(), &DeriveOptions::default()).unwrap();
    assert_eq!(r.variable, "1:10".parse().unwrap());
    assert_eq!(r.controller, Some(Register::property(2)));
    assert_eq!(r.strict.annotation, "to_2");
    assert!(last_box(&r.sloppy.derivation).contains("NOT([ | want(u_3, kiss(u_1, u_3))])"));
    assert!(last_box(&r.strict.derivation).contains("NOT([ | want(u_3, help(u_1, u_3))])"));
}

#[test]
fn trivial_and_invalid_sites() {
    let toks = utterances(FARMER);
    let r = enumerate_readings(&toks, "2:1".parse().unwrap(), &DeriveOptions::default()).unwrap();
    assert!(r.trivial);
    assert_eq!(r.sloppy.derivation, r.strict.derivation);
    assert!(matches!(
        enumerate_readings(&toks, "1:2".parse().unwrap(), &DeriveOptions::default()),
        Err(ReadingsError::NotAnAnaphoricSite(_))
    ));
    assert!(matches!(
        enumerate_readings(&toks, "5:1".parse().unwrap(), &DeriveOptions::default()),
        Err(ReadingsError::OutOfRange(_))
    ));
    assert!("0:1".parse::<Site>().is_err());
    assert!("x".parse::<Site>().is_err());
}
