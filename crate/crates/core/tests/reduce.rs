mod support;

use proptest::prelude::*;
use slco::cs::{explore, ExploreLimits};
use slco::lts::{cs_to_lts, Lts};
use slco::reduce::{bisimulation_partition, equivalent, hide_labels, reduce, HideSpec, Relation};
use support::{arb_lts, bisim, load};

const RELATIONS: [Relation; 2] = [Relation::Strong, Relation::Branching];

fn check_reduction(l: &Lts, r: Relation) -> Result<(), TestCaseError> {
    let q = reduce(l, r).unwrap();
    prop_assert!(equivalent(l, &q, r).unwrap());
    prop_assert!(bisim::equivalent(l, &q, r), "oracle rejects quotient");
    let rel = bisim::maximal(&q, r);
    for (s, row) in rel.iter().enumerate() {
        for (t, &related) in row.iter().enumerate() {
            prop_assert!(s == t || !related, "states {} and {} of the quotient are related", s, t);
        }
    }
    prop_assert!(q.num_states <= l.num_states);
    Ok(())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn reduction_is_sound_and_minimal(l in arb_lts(8, 3, 16)) {
        for r in RELATIONS {
            check_reduction(&l, r)?;
        }
    }

    #[test]
    fn partition_matches_oracle(l in arb_lts(8, 3, 16)) {
        for r in RELATIONS {
            let p = bisimulation_partition(&l, r);
            let rel = bisim::maximal(&l, r);
            for (s, row) in rel.iter().enumerate() {
                for (t, &related) in row.iter().enumerate() {
                    prop_assert_eq!(p.block_of(s) == p.block_of(t), related, "{} {} under {}", s, t, r);
                }
            }
        }
    }

    #[test]
    fn equivalence_matches_oracle(a in arb_lts(5, 2, 8), b in arb_lts(5, 2, 8)) {
        for r in RELATIONS {
            prop_assert_eq!(equivalent(&a, &b, r).unwrap(), bisim::equivalent(&a, &b, r));
        }
    }

    #[test]
    fn strong_implies_branching(a in arb_lts(5, 2, 8), b in arb_lts(5, 2, 8)) {
        if equivalent(&a, &b, Relation::Strong).unwrap() {
            prop_assert!(equivalent(&a, &b, Relation::Branching).unwrap());
        }
    }

    #[test]
    fn reduce_is_idempotent(l in arb_lts(8, 3, 16)) {
        for r in RELATIONS {
            let once = reduce(&l, r).unwrap();
            prop_assert_eq!(reduce(&once, r).unwrap(), once);
        }
    }

    #[test]
    fn hiding_everything_keeps_shape(l in arb_lts(8, 3, 16)) {
        let h = hide_labels(&l, &HideSpec::keep(Vec::<String>::new()));
        prop_assert_eq!(h.num_states, l.num_states);
        prop_assert_eq!(h.transitions.len(), l.transitions.len());
        prop_assert!(h.labels().is_empty());
    }
}

#[test]
fn running_example_receives_v_twice() {
    let l = cs_to_lts(&explore(&load("running_example"), ExploreLimits::default()).unwrap());
    let h = hide_labels(&l, &HideSpec::keep(["receiving V()"]));
    let q = reduce(&h, Relation::Branching).unwrap();
    let expected = Lts::new(4, 0)
        .with_finals([3])
        .with_transition(0, Some("receiving V()"), 1)
        .with_transition(1, Some("receiving V()"), 2)
        .with_transition(2, None, 3);
    assert_eq!(q, expected);
}

#[test]
fn deadlock_sink_never_merges_with_final() {
    let l = cs_to_lts(&explore(&load("deadlock"), ExploreLimits::default()).unwrap());
    for r in RELATIONS {
        for hidden in [HideSpec::keep(Vec::<String>::new()), HideSpec::hide(Vec::<String>::new())] {
            let h = hide_labels(&l, &hidden);
            let p = bisimulation_partition(&h, r);
            let sink = (0..h.num_states)
                .find(|&s| !h.is_final(s) && h.transitions.iter().all(|t| t.source != s))
                .unwrap();
            for &f in &h.finals {
                assert_ne!(p.block_of(sink), p.block_of(f));
            }
        }
    }
}

#[test]
fn cycles_of_tau_collapse() {
    let l = Lts::new(4, 0)
        .with_transition(0, None, 1)
        .with_transition(1, None, 2)
        .with_transition(2, None, 0)
        .with_transition(2, Some("a"), 3);
    let q = reduce(&l, Relation::Branching).unwrap();
    assert_eq!(q, Lts::new(2, 0).with_transition(0, Some("a"), 1));
}
