mod common;

use std::collections::BTreeSet;

use proptest::prelude::*;
use wsts_core::devtool::oracle::{box_points, reachability_graph};
use wsts_core::devtool::{random_marking, random_net, seeded, NetParams};
use wsts_core::{backward_coverable, Ideal, IdealVec, Marking, NetModel, OmegaNat};

use common::{random_ideal, strictly_below, strictness_expected};

proptest! {
    #![proptest_config(common::config(200))]

    #[test]
    fn completion_is_strong_strict_monotone(seed in any::<u64>()) {
        let mut rng = seeded(seed);
        let net = random_net(&mut rng, &NetParams::OMEGA);
        let v = random_ideal(&mut rng, net.dimension(), 6);
        if let Some(u) = strictly_below(&mut rng, &v) {
            prop_assert!(u.is_strict_subset(&v));
            for label in net.labels() {
                if let Some(pu) = net.post_ideal(&u, label).unwrap() {
                    let pv = net.post_ideal(&v, label).unwrap();
                    prop_assert!(pv.is_some(), "{label} enabled on {u} but not on {v}");
                    let pv = pv.unwrap();
                    if strictness_expected(&net, label, &u, &v) {
                        prop_assert!(pu.is_strict_subset(&pv), "{label}: {pu} not strictly below {pv}");
                    } else {
                        prop_assert!(pu.is_subset(&pv));
                    }
                }
            }
        }
    }

    #[test]
    fn level_never_drops(seed in any::<u64>()) {
        let mut rng = seeded(seed);
        let net = random_net(&mut rng, &NetParams::OMEGA);
        let v = random_ideal(&mut rng, net.dimension(), 6);
        for label in net.labels() {
            if let Some(p) = net.post_ideal(&v, label).unwrap() {
                prop_assert!(p.level() >= v.level());
            }
        }
    }

    #[test]
    fn completion_matches_concrete_steps_on_boxes(seed in any::<u64>()) {
        let mut rng = seeded(seed);
        let net = random_net(&mut rng, &NetParams { max_dim: 3, ..NetParams::OMEGA });
        let v = random_ideal(&mut rng, net.dimension(), 4);
        let bound = 4;
        let max_guard = net.transitions().iter().flat_map(|t| t.guard.iter().copied()).max().unwrap_or(0);
        let max_out = net
            .transitions()
            .iter()
            .flat_map(|t| t.output.iter().filter_map(|o| o.finite()))
            .max()
            .unwrap_or(0);
        let wide = bound + max_guard + max_out;
        let sources: Vec<Marking> = box_points(net.dimension(), wide)
            .into_iter()
            .filter(|y| v.contains(y).unwrap())
            .collect();
        for label in net.labels() {
            let post = net.post_ideal(&v, label).unwrap();
            let mut concrete: BTreeSet<Marking> = BTreeSet::new();
            for y in &sources {
                concrete.extend(net.post_concrete(y, label, bound).unwrap());
            }
            for x in box_points(net.dimension(), bound) {
                let by_ideal = post.as_ref().is_some_and(|p| p.contains(&x).unwrap());
                let by_runs = concrete.iter().any(|z| x.leq(z).unwrap());
                prop_assert_eq!(by_ideal, by_runs, "label {} from {} at {}", label, v, x);
            }
        }
    }

    #[test]
    fn backward_matches_exhaustive_search_on_bounded_nets(seed in any::<u64>()) {
        let mut rng = seeded(seed);
        let net = random_net(&mut rng, &NetParams::BOUNDED);
        let x0 = random_marking(&mut rng, net.dimension(), 3);
        let y = random_marking(&mut rng, net.dimension(), 3);
        let graph = reachability_graph(&net, &x0, 100_000).unwrap();
        let expected = graph.markings.iter().any(|m| y.leq(m).unwrap());
        prop_assert_eq!(backward_coverable(&net, &x0, &y).unwrap(), expected);
    }
}

#[test]
fn omega_entries_absorb_guards() {
    let v = IdealVec::new(vec![OmegaNat::Omega, OmegaNat::Fin(2)]).unwrap();
    let net = NetModel::vas(2, &[("t", &[-3, 1])]).unwrap();
    let post = net.post_ideal(&v, "t").unwrap().unwrap();
    assert_eq!(post.to_string(), "(w,3)");
}
