use wsts_bench::{effect_automata, pipeline, shipped, shuttle};
use wsts_core::{build_ikm_tree, IdealVec, IkmOptions};

#[test]
fn shipped_nets_load_and_terminate() {
    for (name, net, x0) in shipped() {
        let tree =
            build_ikm_tree(&net, IdealVec::from_marking(&x0), &IkmOptions::default()).unwrap();
        assert!(tree.len() > 1, "{name}");
    }
}

#[test]
fn pipeline_reaches_full_omega() {
    for d in 2..=5 {
        let (net, x0) = pipeline(d);
        let tree =
            build_ikm_tree(&net, IdealVec::from_marking(&x0), &IkmOptions::default()).unwrap();
        let clover = tree.clover();
        assert_eq!(clover.ideals().len(), 1);
        assert_eq!(clover.ideals()[0].level(), d);
    }
}

#[test]
fn shuttle_is_bounded() {
    let (net, x0) = shuttle(4);
    let tree = build_ikm_tree(&net, IdealVec::from_marking(&x0), &IkmOptions::default()).unwrap();
    assert_eq!(tree.clover().ideals().len(), 5);
    assert_eq!(tree.stats().accelerations, 0);
}

#[test]
fn effect_automata_are_seeded() {
    assert_eq!(effect_automata(1, 3).len(), 3);
}
