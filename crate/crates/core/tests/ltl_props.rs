mod common;

use proptest::prelude::*;
use wsts_core::devtool::oracle::reachability_graph;
use wsts_core::devtool::{random_formula, random_marking, random_net, seeded, NetParams};
use wsts_core::ltl::{build_product, LtlOptions, ProductIdeal};
use wsts_core::{
    build_ikm_tree, ltl_to_buchi, model_check_ltl, repeatedly_coverable, EffectiveCompletion,
    Ideal, IdealVec, IkmOptions, LtlFormula, Marking, NetModel,
};

use common::{random_ideal, strictly_below, strictness_expected};

fn relabel(net: &NetModel, names: &[&str]) -> NetModel {
    let mut ts = net.transitions().to_vec();
    for (t, n) in ts.iter_mut().zip(names) {
        t.label = n.to_string();
    }
    NetModel::new(net.dimension(), ts).unwrap()
}

proptest! {
    #![proptest_config(common::config(80))]

    #[test]
    fn product_completion_is_deterministic_and_monotone(seed in any::<u64>()) {
        let mut rng = seeded(seed);
        let net = relabel(&random_net(&mut rng, &NetParams { max_transitions: 2, ..NetParams::OMEGA }), &["a", "b"]);
        let atoms: Vec<&str> = net.labels().collect();
        let phi = random_formula(&mut rng, 5, &atoms);
        let b = ltl_to_buchi(&phi, net.labels().map(String::from)).unwrap();
        let p = build_product(&b, &net).unwrap();
        let v = random_ideal(&mut rng, net.dimension(), 5);
        for control in 0..b.num_states() {
            let big = ProductIdeal { control, ideal: v.clone() };
            let small = strictly_below(&mut rng, &v).map(|u| ProductIdeal { control, ideal: u });
            for label in p.alphabet() {
                let s1 = p.successor(&big, &label).unwrap();
                prop_assert_eq!(&s1, &p.successor(&big, &label).unwrap());
                if let Some(s) = &s1 {
                    prop_assert_eq!(s.control, label.target);
                }
                if let Some(small) = &small {
                    if let Some(ps) = p.successor(small, &label).unwrap() {
                        let pb = s1.clone();
                        prop_assert!(pb.is_some());
                        let pb = pb.unwrap();
                        if strictness_expected(&net, &label.letter, &small.ideal, &big.ideal) {
                            prop_assert!(ps.is_strict_subset(&pb));
                        } else {
                            prop_assert!(ps.is_subset(&pb));
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn formula_and_negation_never_both_hold_with_infinite_traces(seed in any::<u64>()) {
        let mut rng = seeded(seed);
        let net = relabel(&random_net(&mut rng, &NetParams { max_transitions: 2, max_dim: 2, ..NetParams::BOUNDED }), &["a", "b"]);
        let x0 = random_marking(&mut rng, net.dimension(), 3);
        let atoms: Vec<&str> = net.labels().collect();
        let phi = random_formula(&mut rng, 5, &atoms);
        let graph = reachability_graph(&net, &x0, 10_000).unwrap();
        let opts = LtlOptions::default();
        let pos = model_check_ltl(&net, &x0, &phi, &opts).unwrap().holds();
        let neg = model_check_ltl(&net, &x0, &LtlFormula::not(phi.clone()), &opts).unwrap().holds();
        if graph.has_cycle() {
            prop_assert!(!(pos && neg), "{} and its negation both hold", phi);
        } else {
            prop_assert!(pos && neg);
        }
    }
}

#[test]
fn product_tree_ideals_are_pairs() {
    let net = NetModel::vas(2, &[("a", &[1, -1]), ("b", &[-1, 2])]).unwrap();
    // the automaton the checker builds for `G F a & F b`; the un-negated
    // formula yields a product tree of several million nodes
    let b = ltl_to_buchi(
        &"!(G F a & F b)".parse().unwrap(),
        net.labels().map(String::from),
    )
    .unwrap();
    let p = build_product(&b, &net).unwrap();
    let root = p.initial_ideal("(1,1)".parse().unwrap());
    let tree = build_ikm_tree(&p, root, &IkmOptions::default()).unwrap();
    for n in tree.nodes() {
        assert!(n.ideal.control < b.num_states());
        assert_eq!(n.ideal.ideal.dim(), 2);
    }
}

#[test]
fn always_eventually_matches_repeated_coverability() {
    let mut rng = seeded(42);
    for _ in 0..40 {
        let net = relabel(
            &random_net(
                &mut rng,
                &NetParams {
                    max_transitions: 1,
                    ..NetParams::PETRI
                },
            ),
            &["a"],
        );
        let x0 = random_marking(&mut rng, net.dimension(), 3);
        let holds = model_check_ltl(&net, &x0, &"G F a".parse().unwrap(), &LtlOptions::default())
            .unwrap()
            .holds();
        // with one letter every infinite trace is a^ω, so G F a holds always;
        // its negation is violated exactly when an infinite trace exists
        assert!(holds);
        let infinite = repeatedly_coverable(&net, &x0, &Marking::zero(net.dimension())).unwrap();
        let neg = model_check_ltl(
            &net,
            &x0,
            &"F G !a".parse().unwrap(),
            &LtlOptions::default(),
        )
        .unwrap()
        .holds();
        assert_eq!(neg, !infinite, "net {net} x0 {x0}");
        let _ = IdealVec::from_marking(&x0);
    }
}
