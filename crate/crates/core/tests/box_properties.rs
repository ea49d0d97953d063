mod common;

use std::collections::BTreeSet;

use centering::drt::text::{parse_box, parse_program};
use centering::drt::{merge, sequence};
use centering::golden::canonicalize;
use centering::modeleval::{all_states, check_equivalence, inventory, EvalState, Evaluator};
use centering::{BoxProgram, Register};
use proptest::prelude::*;

fn config() -> ProptestConfig {
    ProptestConfig::with_cases(300)
}

fn pair(seed: u64) -> (BoxProgram, BoxProgram, centering::modeleval::Model) {
    let mut rng = common::rng(seed);
    let a = common::first_order_box(&mut rng, 3, true);
    let b = common::first_order_box(&mut rng, 3, true);
    let n = 1 + (seed % 3) as usize;
    let m = common::small_model(&mut rng, n);
    (a.into(), b.into(), m)
}

/// States over every register either program can touch, so outputs are
/// compared on the same inventory.
fn states(ps: &[&BoxProgram], m: &centering::modeleval::Model) -> Vec<EvalState> {
    let mut regs: BTreeSet<Register> = BTreeSet::new();
    for p in ps {
        regs.extend(inventory(p));
    }
    all_states(&regs, m)
}

proptest! {
    #![proptest_config(config())]

    #[test]
    fn defined_merges_are_equivalent_to_sequencing(seed in any::<u64>()) {
        let (a, b, m) = pair(seed);
        let (BoxProgram::Single(da), BoxProgram::Single(db)) = (&a, &b) else { unreachable!() };
        match merge(da, db) {
            Ok(merged) => {
                let seq = sequence(a.clone(), b.clone());
                prop_assert!(check_equivalence(&merged.into(), &seq, &m).unwrap());
            }
            Err(e) => {
                let used: BTreeSet<Register> = da.universe.iter().copied().chain(da.condition_registers()).collect();
                prop_assert!(e.conflicts.iter().all(|r| used.contains(r) && db.universe.contains(r)));
            }
        }
    }

    #[test]
    fn intersecting_universes_never_merge(seed in any::<u64>()) {
        let (a, b, _) = pair(seed);
        let (BoxProgram::Single(da), BoxProgram::Single(db)) = (&a, &b) else { unreachable!() };
        if da.universe.iter().any(|r| db.universe.contains(r)) {
            prop_assert!(merge(da, db).is_err());
        }
    }

    /// Outputs differ from the input only on the box's universe.
    #[test]
    fn updates_are_local(seed in any::<u64>()) {
        let (a, _, m) = pair(seed);
        let BoxProgram::Single(d) = &a else { unreachable!() };
        let ev = Evaluator::new(&m);
        for i in states(&[&a], &m) {
            for j in ev.eval(&a, &i).unwrap() {
                for (r, v) in &i.0 {
                    if !d.universe.contains(r) {
                        prop_assert_eq!(j.get(r), Some(*v));
                    }
                }
            }
        }
    }

    /// ⟦K₁ ; K₂⟧ relates i to j iff some k has ⟨i,k⟩ ∈ ⟦K₁⟧ and ⟨k,j⟩ ∈ ⟦K₂⟧.
    #[test]
    fn sequencing_composes_relations(seed in any::<u64>()) {
        let (a, b, m) = pair(seed);
        let seq = sequence(a.clone(), b.clone());
        let ev = Evaluator::new(&m);
        for i in states(&[&a, &b], &m) {
            let direct: BTreeSet<EvalState> = ev
                .eval(&a, &i)
                .unwrap()
                .into_iter()
                .flat_map(|k| ev.eval(&b, &k).unwrap())
                .collect();
            prop_assert_eq!(ev.eval(&seq, &i).unwrap(), direct);
        }
    }

    #[test]
    fn enumeration_cost_is_bounded_by_the_universe(seed in any::<u64>()) {
        let (a, _, m) = pair(seed);
        let BoxProgram::Single(d) = &a else { unreachable!() };
        let i = states(&[&a], &m).remove(0);
        let ev = Evaluator::new(&m);
        ev.eval(&a, &i).unwrap();
        let top = (m.size() as u64).pow(d.universe.len() as u32);
        // Negated sub-boxes are enumerated once per surviving candidate.
        let nested = d.conditions.len() as u64 * m.size().pow(3) as u64;
        prop_assert!(ev.candidates() >= top && ev.candidates() <= top * (1 + nested));
    }

    #[test]
    fn boxes_render_and_parse_back(seed in any::<u64>()) {
        let (a, b, _) = pair(seed);
        let BoxProgram::Single(d) = &a else { unreachable!() };
        prop_assert_eq!(&parse_box(&d.to_string()).unwrap(), d);
        let p = sequence(a.clone(), b.clone());
        prop_assert_eq!(parse_program(&p.to_string()).unwrap(), p);
    }

    #[test]
    fn canonical_form_is_idempotent_and_equivalent(seed in any::<u64>()) {
        let (a, b, m) = pair(seed);
        let p = sequence(a, b);
        let c = canonicalize(&p);
        prop_assert_eq!(canonicalize(&c), c.clone());
        prop_assert!(check_equivalence(&p, &c, &m).unwrap(), "{} vs {}", p, c);
    }
}
