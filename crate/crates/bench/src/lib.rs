//! Workloads shared by the criterion benches.

use wsts_core::devtool::{random_effect_automaton, seeded};
use wsts_core::{EffectAutomaton, Marking, NetModel};

pub const SHIPPED: [(&str, &str, &str); 7] = [
    (
        "increment",
        include_str!("../../../nets/increment.net"),
        "(0)",
    ),
    (
        "decrement",
        include_str!("../../../nets/decrement.net"),
        "(5)",
    ),
    (
        "transfer",
        include_str!("../../../nets/transfer.net"),
        "(0,5)",
    ),
    (
        "mutex",
        include_str!("../../../nets/mutex.net"),
        "(1,0,1,0,1)",
    ),
    (
        "producer_consumer",
        include_str!("../../../nets/producer_consumer.net"),
        "(1,0,1)",
    ),
    ("spawn", include_str!("../../../nets/spawn.net"), "(1,0,0)"),
    (
        "alternate",
        include_str!("../../../nets/alternate.net"),
        "(1,0)",
    ),
];

pub fn shipped() -> Vec<(&'static str, NetModel, Marking)> {
    SHIPPED
        .iter()
        .map(|(name, text, init)| {
            (
                *name,
                text.parse().expect("shipped net"),
                init.parse().expect("shipped marking"),
            )
        })
        .collect()
}

/// A pipeline of `d` places: `g` feeds place 0 and `m{i}` moves a token from
/// place `i` to place `i+1`. Every place is unbounded, and the tree must
/// accelerate once per place.
pub fn pipeline(d: usize) -> (NetModel, Marking) {
    let mut text = format!("dim {d}\n");
    let unit = |i: usize| {
        (0..d)
            .map(|j| if i == j { "1" } else { "0" })
            .collect::<Vec<_>>()
            .join(",")
    };
    let zero = vec!["0"; d].join(",");
    text.push_str(&format!("g | {zero} | {}\n", unit(0)));
    for i in 0..d - 1 {
        text.push_str(&format!("m{i} | {} | {}\n", unit(i), unit(i + 1)));
    }
    (text.parse().expect("pipeline net"), Marking::zero(d))
}

/// `k` tokens shared by two places: `a` moves right and `b` moves left. The
/// tree is bounded and has one node per split of the tokens and path.
pub fn shuttle(k: u64) -> (NetModel, Marking) {
    let net = NetModel::vas(2, &[("a", &[-1, 1]), ("b", &[1, -1])]).expect("shuttle net");
    (net, Marking::new(vec![k, 0]))
}

pub fn effect_automata(seed: u64, count: usize) -> Vec<EffectAutomaton<String>> {
    let mut rng = seeded(seed);
    (0..count)
        .map(|_| random_effect_automaton(&mut rng, 4, 3))
        .collect()
}
