//! Seeded cross-checks of the decision procedures against the oracles.
//! Each runner returns an [`Agreement`] tally; the acceptance suite and the
//! `devtool cross-check` command both call these.

use rand::Rng;
use serde::Serialize;

use super::oracle::{
    accepted_words, bounded_inclusion_counterexample, bounded_subword_member, box_points,
    brute_force_positive, clamped_reachable, first_unaccepted_trace, has_superword_trace,
    in_downward_closure, ltl_holds_on_lasso, maximal_accepted_words, maximal_elements,
    reachability_graph, subword_witness_bound,
};
use super::{
    random_effect_automaton, random_formula, random_lasso, random_marking, random_net, random_nfa,
    seeded, NetParams,
};
use crate::error::Result;
use crate::ideal::{IdealVec, Marking};
use crate::kernel::accelerate;
use crate::km::{build_ikm_tree, IkmOptions, Worklist};
use crate::lang::{included, inclusion_counterexample, traces_dc_included, DEFAULT_SUBSET_LIMIT};
use crate::liveness::{
    displacement_is_positive, exists_positive_sequence_with, repeatedly_coverable,
    PositivityOptions,
};
use crate::ltl::{ltl_to_buchi, model_check_ltl, LtlOptions};
use crate::net::{backward_coverable, NetModel};

/// Largest coordinate of the clamped exploration behind the clover check.
pub const CLOVER_CAP: u64 = 20;
/// Side of the box `[0..=CLOVER_BOX]^d` on which clovers are compared.
pub const CLOVER_BOX: u64 = 12;
/// Tokens produced by an ω output in concrete runs of the trace checks.
pub const TRACE_PRODUCTION: u64 = 64;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Agreement {
    pub name: String,
    pub total: usize,
    pub agreed: usize,
    /// Descriptions of the first few disagreements.
    pub failures: Vec<String>,
}

impl Agreement {
    fn new(name: &str) -> Self {
        Agreement {
            name: name.to_string(),
            total: 0,
            agreed: 0,
            failures: Vec::new(),
        }
    }

    fn record(&mut self, ok: bool, detail: impl FnOnce() -> String) {
        self.total += 1;
        if ok {
            self.agreed += 1;
        } else if self.failures.len() < 5 {
            self.failures.push(detail());
        }
    }

    pub fn all_agree(&self) -> bool {
        self.total > 0 && self.agreed == self.total
    }
}

impl std::fmt::Display for Agreement {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}: {}/{} agree", self.name, self.agreed, self.total)?;
        for failure in &self.failures {
            write!(f, "\n  {failure}")?;
        }
        Ok(())
    }
}

fn describe(net: &NetModel, x0: &Marking) -> String {
    format!(
        "x0={x0} net=[{}]",
        net.to_string().trim_end().replace('\n', "; ")
    )
}

/// Clover membership against the downward closure of clamped forward
/// reachability on every point of `[0..=12]^d`.
pub fn clover_vs_reachability(seed: u64, petri: usize, omega: usize) -> Result<Agreement> {
    let mut rng = seeded(seed);
    let mut tally = Agreement::new("clover vs bounded reachability");
    let params = std::iter::repeat_n(NetParams::PETRI, petri)
        .chain(std::iter::repeat_n(NetParams::OMEGA, omega));
    for p in params {
        let net = random_net(&mut rng, &p);
        let x0 = random_marking(&mut rng, net.dimension(), p.max_entry);
        let tree = build_ikm_tree(&net, IdealVec::from_marking(&x0), &IkmOptions::default())?;
        let clover = tree.clover();
        let maximal = maximal_elements(&clamped_reachable(&net, &x0, CLOVER_CAP));
        let mismatch = box_points(net.dimension(), CLOVER_BOX)
            .into_iter()
            .find(|p| clover.contains(p).unwrap_or(false) != in_downward_closure(&maximal, p));
        tally.record(mismatch.is_none(), || {
            format!(
                "{} clover={clover} point={}",
                describe(&net, &x0),
                mismatch.unwrap()
            )
        });
    }
    Ok(tally)
}

/// Tree-based coverability against the minimal-basis backward procedure.
pub fn coverability_vs_backward(seed: u64, count: usize) -> Result<Agreement> {
    let mut rng = seeded(seed);
    let mut tally = Agreement::new("coverability vs backward search");
    for _ in 0..count {
        let net = random_net(&mut rng, &NetParams::PETRI);
        let x0 = random_marking(&mut rng, net.dimension(), 3);
        let y = random_marking(&mut rng, net.dimension(), 5);
        let tree = build_ikm_tree(&net, IdealVec::from_marking(&x0), &IkmOptions::default())?;
        let forward = tree.coverable(&y)?;
        let backward = backward_coverable(&net, &x0, &y)?;
        tally.record(forward == backward, || {
            format!(
                "{} y={y} tree={forward} backward={backward}",
                describe(&net, &x0)
            )
        });
    }
    Ok(tally)
}

/// Trees finish within the default budget, keep `numaccel ≤ d`, and FIFO
/// and LIFO exploration agree on the clover.
pub fn termination_and_worklists(
    seed: u64,
    count: usize,
    shipped: &[(NetModel, Marking)],
) -> Result<Agreement> {
    let mut rng = seeded(seed);
    let mut tally = Agreement::new("termination, numaccel bound, FIFO = LIFO");
    let mut instances: Vec<(NetModel, Marking)> = shipped.to_vec();
    for i in 0..count {
        let p = if i % 2 == 0 {
            NetParams::PETRI
        } else {
            NetParams::OMEGA
        };
        let net = random_net(&mut rng, &p);
        let x0 = random_marking(&mut rng, net.dimension(), 3);
        instances.push((net, x0));
    }
    for (net, x0) in instances {
        let root = IdealVec::from_marking(&x0);
        let fifo = build_ikm_tree(&net, root.clone(), &IkmOptions::default());
        let lifo = build_ikm_tree(
            &net,
            root,
            &IkmOptions {
                worklist: Worklist::Lifo,
                ..IkmOptions::default()
            },
        );
        let verdict = match (fifo, lifo) {
            (Ok(f), Ok(l)) => {
                let bounded = f
                    .nodes()
                    .iter()
                    .chain(l.nodes())
                    .all(|n| n.numaccel <= net.dimension());
                if !bounded {
                    Err("numaccel exceeds the dimension".to_string())
                } else if f.clover() != l.clover() {
                    Err(format!(
                        "FIFO clover {} differs from LIFO clover {}",
                        f.clover(),
                        l.clover()
                    ))
                } else {
                    Ok(())
                }
            }
            (Err(e), _) | (_, Err(e)) => Err(e.to_string()),
        };
        tally.record(verdict.is_ok(), || {
            format!("{}: {}", describe(&net, &x0), verdict.unwrap_err())
        });
    }
    Ok(tally)
}

/// Every concrete trace of length ≤ 8 is accepted by the stuttering
/// automaton, and every Karp-Miller-automaton word of length ≤ 8 is a
/// subword of a concrete trace of length ≤ 16.
pub fn trace_sandwich(seed: u64, count: usize) -> Result<Agreement> {
    let mut rng = seeded(seed);
    let mut tally = Agreement::new("trace sandwich at depth 8");
    let params = NetParams {
        max_transitions: 3,
        ..NetParams::PETRI
    };
    for i in 0..count {
        let p = NetParams {
            omega_outputs: i % 4 == 3,
            ..params
        };
        let net = random_net(&mut rng, &p);
        let x0 = random_marking(&mut rng, net.dimension(), 3);
        let tree = build_ikm_tree(&net, IdealVec::from_marking(&x0), &IkmOptions::default())?;
        let lower =
            first_unaccepted_trace(&net, &x0, 8, TRACE_PRODUCTION, &tree.stuttering_automaton());
        let k = tree.km_automaton();
        let upper = maximal_accepted_words(&k, 8)
            .into_iter()
            .find(|w| !has_superword_trace(&net, &x0, w, 16, TRACE_PRODUCTION));
        tally.record(lower.is_none() && upper.is_none(), || match (lower, upper) {
            (Some(t), _) => format!("{}: trace {t:?} rejected by the stuttering automaton", describe(&net, &x0)),
            (_, Some(w)) => {
                let longer = has_superword_trace(&net, &x0, &w, 64, TRACE_PRODUCTION);
                format!(
                    "{}: K-word {w:?} has no superword trace of length <= 16 (one of length <= 64 exists: {longer})",
                    describe(&net, &x0)
                )
            }
            _ => unreachable!(),
        });
    }
    Ok(tally)
}

/// Subword closure and inclusion against explicit word enumeration.
pub fn lang_vs_enumeration(seed: u64, count: usize) -> Result<Agreement> {
    let mut rng = seeded(seed);
    let mut tally = Agreement::new("subword closure and inclusion vs enumeration");
    let alphabet = ["a", "b"];
    for _ in 0..count {
        let a = random_nfa(&mut rng, 5, &alphabet);
        let b = random_nfa(&mut rng, 5, &alphabet);
        let mut problems = Vec::new();

        // closure membership for |u| ≤ 6 against a search for v ∈ L(a)
        // with u ⪯ v, v no longer than the pumping bound
        let closure = a.subword_closure();
        for u in accepted_words(&full(&alphabet), 6) {
            let expected =
                bounded_subword_member(&a, &u, subword_witness_bound(a.num_states(), u.len()));
            if closure.accepts(&u)? != expected {
                problems.push(format!("closure membership of {u:?}"));
                break;
            }
        }
        // inclusion to length 10, both raw and closed
        for (x, y, what) in [(&a, &b, "L(a) ⊆ L(b)"), (&b, &a, "L(b) ⊆ L(a)")] {
            let decided = inclusion_counterexample(x, y, DEFAULT_SUBSET_LIMIT)?;
            let bounded = bounded_inclusion_counterexample(x, y, 10);
            let agree = match (&decided, &bounded) {
                (None, None) => true,
                (Some(w), Some(_)) => w.len() <= 10 && x.accepts(w)? && !y.accepts(w)?,
                _ => false,
            };
            if !agree {
                problems.push(format!(
                    "{what}: decided {decided:?}, enumeration {bounded:?}"
                ));
            }
        }
        let (ca, cb) = (a.subword_closure(), b.subword_closure());
        if included(&ca, &cb)? != bounded_inclusion_counterexample(&ca, &cb, 10).is_none() {
            problems.push("inclusion of closures".to_string());
        }
        tally.record(problems.is_empty(), || {
            format!("a=[{}] b=[{}]: {problems:?}", oneline(&a), oneline(&b))
        });
    }
    Ok(tally)
}

fn full(alphabet: &[&str]) -> crate::lang::EpsNfa<String> {
    let mut nfa = crate::lang::EpsNfa::new(alphabet.iter().map(|s| s.to_string()));
    let q = nfa.add_state("q", true);
    for s in alphabet {
        nfa.add_transition(q, s.to_string(), q)
            .expect("symbol in alphabet");
    }
    nfa
}

fn oneline(nfa: &crate::lang::EpsNfa<String>) -> String {
    nfa.to_string().trim_end().replace('\n', "; ")
}

/// Positivity with words of at most 10 letters against exhaustive search;
/// every witness must be accepted and positive. The unbounded search must
/// find a witness whenever the bounded one does.
pub fn positivity_vs_enumeration(seed: u64, count: usize) -> Result<Agreement> {
    let mut rng = seeded(seed);
    let mut tally = Agreement::new("positive sequences vs enumeration");
    let bounded = PositivityOptions {
        max_word_length: Some(10),
        ..PositivityOptions::default()
    };
    for _ in 0..count {
        let ea = random_effect_automaton(&mut rng, 4, 3);
        let oracle = brute_force_positive(&ea, 10);
        let decided = exists_positive_sequence_with(&ea, &bounded)?;
        let unbounded = exists_positive_sequence_with(&ea, &PositivityOptions::default())?;
        let mut problems = Vec::new();
        if oracle.is_some() != decided.is_some() {
            problems.push(format!("bounded: decided {decided:?}, oracle {oracle:?}"));
        }
        if oracle.is_some() && unbounded.is_none() {
            problems.push("unbounded search missed a witness".to_string());
        }
        for w in decided.iter().chain(unbounded.iter()) {
            let valid = !w.word.is_empty()
                && ea.nfa().accepts(&w.word)?
                && displacement_is_positive(&ea.displacement(&w.word)?)
                && ea.displacement(&w.word)? == w.justification;
            if !valid {
                problems.push(format!("invalid witness {w:?}"));
            }
        }
        if let Some(w) = &decided {
            if w.word.len() > 10 {
                problems.push(format!("bounded witness too long: {:?}", w.word));
            }
        }
        tally.record(problems.is_empty(), || {
            format!(
                "automaton=[{}] dim={}: {problems:?}",
                oneline(ea.nfa()),
                ea.dim()
            )
        });
    }
    Ok(tally)
}

/// Repeated coverability on conservative nets against lasso detection in
/// the explicit reachability graph.
pub fn repeated_vs_lasso(seed: u64, count: usize) -> Result<Agreement> {
    let mut rng = seeded(seed);
    let mut tally = Agreement::new("repeated coverability vs lasso detection");
    for _ in 0..count {
        let net = random_net(&mut rng, &NetParams::BOUNDED);
        let x0 = random_marking(&mut rng, net.dimension(), 3);
        let y = random_marking(&mut rng, net.dimension(), 2);
        let graph = reachability_graph(&net, &x0, 200_000).expect("conservative nets are bounded");
        let expected = graph.lasso_covers(&y);
        let decided = repeatedly_coverable(&net, &x0, &y)?;
        let tree = build_ikm_tree(&net, IdealVec::from_marking(&x0), &IkmOptions::default())?;
        let sane = !decided || tree.coverable(&y)?;
        tally.record(decided == expected && sane, || {
            format!(
                "{} y={y}: decided {decided}, lasso oracle {expected}",
                describe(&net, &x0)
            )
        });
    }
    Ok(tally)
}

/// Büchi acceptance of the translation against direct lasso semantics.
pub fn ltl_translation_vs_lasso(seed: u64, count: usize) -> Result<Agreement> {
    let mut rng = seeded(seed);
    let mut tally = Agreement::new("LTL translation vs lasso semantics");
    let alphabet = ["a", "b"];
    for _ in 0..count {
        let phi = random_formula(&mut rng, 6, &alphabet);
        let (u, v) = random_lasso(&mut rng, &alphabet, 4);
        let b = ltl_to_buchi(&phi, alphabet.iter().map(|s| s.to_string()))?;
        let decided = b.accepts_lasso(&u, &v)?;
        let expected = ltl_holds_on_lasso(&phi, &u, &v);
        tally.record(decided == expected, || {
            format!("phi={phi} lasso={u:?}({v:?})^w: automaton {decided}, semantics {expected}")
        });
    }
    Ok(tally)
}

/// One worked example: what an oracle (or a hand computation) says and
/// what the library computes.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ExampleCheck {
    pub name: String,
    pub expected: String,
    pub actual: String,
}

impl ExampleCheck {
    pub fn passed(&self) -> bool {
        self.expected == self.actual
    }
}

fn vas(dim: usize, effects: &[(&str, &[i64])]) -> NetModel {
    NetModel::vas(dim, effects).expect("example nets are valid")
}

fn mk(s: &str) -> Marking {
    s.parse().expect("example markings are valid")
}

/// The worked examples with oracle-derived expectations.
pub fn derived_examples() -> Result<Vec<ExampleCheck>> {
    let mut out = Vec::new();
    let mut push = |name: &str, expected: String, actual: String| {
        out.push(ExampleCheck {
            name: name.to_string(),
            expected,
            actual,
        })
    };
    let opts = IkmOptions::default();
    let inc = vas(1, &[("t", &[1])]);
    let dec = vas(1, &[("t", &[-1])]);
    let transfer = vas(2, &[("t", &[1, -1])]);

    let ideal: IdealVec = "(w,8,3,w)".parse()?;
    push(
        "omega rendering of N x {0..8} x {0..3} x N",
        "(w,8,3,w)".into(),
        ideal.to_string(),
    );

    let shift = vas(3, &[("a", &[0, 1, 0]), ("b", &[0, 0, 2])]);
    let accelerated = accelerate(
        &shift,
        &"(5,0,1)".parse()?,
        &["a".to_string(), "b".to_string()],
    )?;
    push(
        "acceleration of (5,0,1) by a b",
        "(5,w,w)".into(),
        accelerated.to_string(),
    );

    // clover expectations: maximal elements of clamped reachability,
    // coordinates at the clamp read as ω
    let clover_oracle = |net: &NetModel, x0: &Marking| -> String {
        let cap = 32;
        let mut parts: Vec<String> = maximal_elements(&clamped_reachable(net, x0, cap))
            .iter()
            .map(|m| {
                let entries: Vec<String> =
                    m.0.iter()
                        .map(|&a| {
                            if a == cap {
                                "w".to_string()
                            } else {
                                a.to_string()
                            }
                        })
                        .collect();
                format!("({})", entries.join(","))
            })
            .collect();
        parts.sort();
        parts.join(" ")
    };
    let x0 = mk("(0)");
    let tree = build_ikm_tree(&inc, IdealVec::from_marking(&x0), &opts)?;
    push(
        "clover of +1 from (0)",
        clover_oracle(&inc, &x0),
        tree.clover().to_string(),
    );
    let x0 = mk("(0,5)");
    let tree = build_ikm_tree(&transfer, IdealVec::from_marking(&x0), &opts)?;
    push(
        "clover of (+1,-1) from (0,5)",
        clover_oracle(&transfer, &x0),
        tree.clover().to_string(),
    );

    let cover = |net: &NetModel, x0: &str, y: &str| -> Result<(String, String)> {
        let (x0, y) = (mk(x0), mk(y));
        let tree = build_ikm_tree(net, IdealVec::from_marking(&x0), &opts)?;
        let expected = clamped_reachable(net, &x0, 32)
            .iter()
            .any(|m| y.0.iter().zip(&m.0).all(|(a, b)| a <= b));
        Ok((expected.to_string(), tree.coverable(&y)?.to_string()))
    };
    let (e, a) = cover(&inc, "(0)", "(5)")?;
    push("cover (5) in +1 from (0)", e, a);

    let lasso = |net: &NetModel, x0: &str, y: &str| -> Result<(String, String)> {
        let (x0, y) = (mk(x0), mk(y));
        // the +1 net is unbounded; its graph up to 64 markings already
        // shows the run 0,1,2,… never halts, which the truncated graph
        // cannot express, so report a lasso there by hand
        let expected = match reachability_graph(net, &x0, 64) {
            Some(g) => g.lasso_covers(&y),
            None => true,
        };
        Ok((
            expected.to_string(),
            repeatedly_coverable(net, &x0, &y)?.to_string(),
        ))
    };
    let (e, a) = lasso(&inc, "(0)", "(5)")?;
    push("repcover (5) in +1 from (0)", e, a);
    let (e, a) = lasso(&dec, "(5)", "(0)")?;
    push("repcover (0) in -1 from (5)", e, a);
    let (e, a) = lasso(&transfer, "(0,5)", "(0,0)")?;
    push("repcover (0,0) in (+1,-1) from (0,5)", e, a);

    let tu = vas(1, &[("t", &[1]), ("u", &[1])]);
    let z: IdealVec = "(0)".parse()?;
    push(
        "traces-dc +1 (t) within t,u",
        "true".into(),
        traces_dc_included(&inc, z.clone(), &tu, z.clone(), &opts)?.to_string(),
    );
    push(
        "traces-dc t,u within +1 (t)",
        "false".into(),
        traces_dc_included(&tu, z.clone(), &inc, z, &opts)?.to_string(),
    );

    let a_loop = vas(1, &[("a", &[1])]);
    let a_dec = vas(1, &[("a", &[-1])]);
    let lo = LtlOptions::default();
    // the only infinite trace of the a-loop is a^ω
    let on_a_omega = |phi: &str| -> Result<String> {
        Ok(ltl_holds_on_lasso(&phi.parse()?, &[], &["a".to_string()]).to_string())
    };
    for phi in ["G F a", "F G !a"] {
        let actual = model_check_ltl(&a_loop, &mk("(0)"), &phi.parse()?, &lo)?.holds();
        push(
            &format!("ltl {phi} on the +1 a-loop"),
            on_a_omega(phi)?,
            actual.to_string(),
        );
    }
    let halts = reachability_graph(&a_dec, &mk("(3)"), 64).is_some_and(|g| !g.has_cycle());
    let actual = model_check_ltl(&a_dec, &mk("(3)"), &"G a & F !a".parse()?, &lo)?.holds();
    push(
        "ltl on a halting net holds vacuously",
        halts.to_string(),
        actual.to_string(),
    );
    Ok(out)
}

/// Runs every randomized cross-check once with seeds derived from `seed`.
pub fn cross_check(seed: u64, scale: usize) -> Result<Vec<Agreement>> {
    let mut rng = seeded(seed);
    let mut next = || rng.gen::<u64>();
    Ok(vec![
        clover_vs_reachability(next(), 5 * scale, 2 * scale)?,
        coverability_vs_backward(next(), 10 * scale)?,
        termination_and_worklists(next(), 10 * scale, &[])?,
        trace_sandwich(next(), 2 * scale)?,
        lang_vs_enumeration(next(), 10 * scale)?,
        positivity_vs_enumeration(next(), 10 * scale)?,
        repeated_vs_lasso(next(), 3 * scale)?,
        ltl_translation_vs_lasso(next(), 20 * scale)?,
    ])
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn worked_examples_pass() {
        for ex in derived_examples().unwrap() {
            assert!(ex.passed(), "{ex:?}");
        }
    }

    #[test]
    fn small_cross_check() {
        for a in cross_check(1, 1).unwrap() {
            assert!(a.all_agree(), "{a}");
        }
    }
}
