mod common;

use proptest::prelude::*;
use wsts_core::devtool::oracle::{accepted_words, bounded_inclusion_counterexample, is_subword};
use wsts_core::devtool::{random_nfa, seeded};
use wsts_core::included;

const AB: [&str; 2] = ["a", "b"];

fn subwords_one_shorter(u: &[String]) -> Vec<Vec<String>> {
    (0..u.len())
        .map(|i| {
            u.iter()
                .enumerate()
                .filter(|&(j, _)| j != i)
                .map(|(_, s)| s.clone())
                .collect()
        })
        .collect()
}

proptest! {
    #![proptest_config(common::config(200))]

    #[test]
    fn closure_is_downward_closed(seed in any::<u64>()) {
        let a = random_nfa(&mut seeded(seed), 5, &AB).subword_closure();
        for u in accepted_words(&a, 8) {
            for v in subwords_one_shorter(&u) {
                prop_assert!(is_subword(&v, &u));
                prop_assert!(a.accepts(&v).unwrap(), "{:?} accepted but not {:?}", u, v);
            }
        }
    }

    #[test]
    fn closure_is_idempotent(seed in any::<u64>()) {
        let once = random_nfa(&mut seeded(seed), 5, &AB).subword_closure();
        let twice = once.subword_closure();
        prop_assert!(included(&once, &twice).unwrap());
        prop_assert!(included(&twice, &once).unwrap());
    }

    #[test]
    fn inclusion_is_a_preorder(seed in any::<u64>()) {
        let mut rng = seeded(seed);
        let a = random_nfa(&mut rng, 4, &AB);
        let b = random_nfa(&mut rng, 4, &AB);
        let c = random_nfa(&mut rng, 4, &AB);
        prop_assert!(included(&a, &a).unwrap());
        if included(&a, &b).unwrap() && included(&b, &c).unwrap() {
            prop_assert!(included(&a, &c).unwrap());
            prop_assert!(bounded_inclusion_counterexample(&a, &c, 8).is_none());
        }
    }
}
