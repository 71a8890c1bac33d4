mod common;

use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::Rng;
use wsts_core::devtool::oracle::reachability_graph;
use wsts_core::devtool::{random_effect_automaton, random_marking, random_net, seeded, NetParams};
use wsts_core::liveness::displacement_is_positive;
use wsts_core::{
    build_ikm_tree, exists_positive_sequence, is_positive_word, repeatedly_coverable, IdealVec,
    IkmOptions,
};

proptest! {
    #![proptest_config(common::config(200))]

    #[test]
    fn positivity_ignores_letter_order(seed in any::<u64>()) {
        let mut rng = seeded(seed);
        let net = random_net(&mut rng, &NetParams::PETRI);
        let labels: Vec<String> = net.labels().map(String::from).collect();
        let len = rng.gen_range(1..=6);
        let mut w: Vec<String> = (0..len).map(|_| labels.choose(&mut rng).unwrap().clone()).collect();
        let before = is_positive_word(&net, &w).unwrap();
        w.shuffle(&mut rng);
        prop_assert_eq!(is_positive_word(&net, &w).unwrap(), before);
    }

    #[test]
    fn witnesses_are_valid(seed in any::<u64>()) {
        let ea = random_effect_automaton(&mut seeded(seed), 4, 3);
        if let Some(w) = exists_positive_sequence(&ea).unwrap() {
            prop_assert!(!w.word.is_empty());
            prop_assert!(ea.nfa().accepts(&w.word).unwrap());
            prop_assert!(displacement_is_positive(&ea.displacement(&w.word).unwrap()));
        }
    }

    #[test]
    fn repeated_cover_implies_cover(seed in any::<u64>()) {
        let mut rng = seeded(seed);
        let net = random_net(&mut rng, &NetParams::PETRI);
        let x0 = random_marking(&mut rng, net.dimension(), 3);
        let y = random_marking(&mut rng, net.dimension(), 3);
        if repeatedly_coverable(&net, &x0, &y).unwrap() {
            let tree = build_ikm_tree(&net, IdealVec::from_marking(&x0), &IkmOptions::default()).unwrap();
            prop_assert!(tree.coverable(&y).unwrap());
        }
    }
}

#[test]
fn bounded_nets_agree_with_lasso_detection() {
    let mut rng = seeded(0xb0b);
    for _ in 0..50 {
        let net = random_net(&mut rng, &NetParams::BOUNDED);
        let x0 = random_marking(&mut rng, net.dimension(), 3);
        let y = random_marking(&mut rng, net.dimension(), 2);
        let graph = reachability_graph(&net, &x0, 100_000).unwrap();
        assert_eq!(
            repeatedly_coverable(&net, &x0, &y).unwrap(),
            graph.lasso_covers(&y),
            "net {net} x0 {x0} y {y}"
        );
    }
}
