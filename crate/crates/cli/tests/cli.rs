use std::fs;
use std::path::PathBuf;
use std::process::{Command, Output};

fn nets() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../nets")
}

fn net(name: &str) -> String {
    nets().join(format!("{name}.net")).display().to_string()
}

fn scratch(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join(name)
}

fn verify(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_wsts-verify"))
        .args(args)
        .env_remove("WSTS_VERIFY_BUDGET")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

#[test]
fn clover_of_increment_is_omega() {
    let o = verify(&["clover", "--net", &net("increment"), "--init", "(0)"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "(w)\n");
}

#[test]
fn clover_of_transfer_has_six_ideals() {
    let o = verify(&["clover", "--net", &net("transfer"), "--init", "(0,5)"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "(0,5)\n(1,4)\n(2,3)\n(3,2)\n(4,1)\n(5,0)\n");
}

#[test]
fn invalid_net_is_an_error() {
    let bad = scratch("bad.net");
    fs::write(&bad, "dim 2\nt | 1 | 1,1\n").unwrap();
    let o = verify(&["clover", "--net", bad.to_str().unwrap(), "--init", "(0,0)"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("guard has length 1"), "{}", stderr(&o));
}

#[test]
fn cover_verdicts_and_exit_codes() {
    let yes = verify(&[
        "cover",
        "--net",
        &net("increment"),
        "--init",
        "(0)",
        "--target",
        "(5)",
    ]);
    assert_eq!(yes.status.code(), Some(0));
    assert!(stdout(&yes).starts_with("coverable: true"));
    let no = verify(&[
        "cover",
        "--net",
        &net("mutex"),
        "--init",
        "(1,0,1,0,1)",
        "--target",
        "(0,1,0,1,0)",
    ]);
    assert_eq!(no.status.code(), Some(1));
    let bad = verify(&[
        "cover",
        "--net",
        &net("increment"),
        "--init",
        "(0)",
        "--target",
        "(1,1)",
    ]);
    assert_eq!(bad.status.code(), Some(2));
}

#[test]
fn repcover_prints_witness_only_on_success() {
    let no = verify(&[
        "repcover",
        "--net",
        &net("decrement"),
        "--init",
        "(5)",
        "--target",
        "(0)",
    ]);
    assert_eq!(no.status.code(), Some(1));
    assert_eq!(stdout(&no), "repeatedly coverable: false\n");
    let yes = verify(&[
        "repcover",
        "--net",
        &net("increment"),
        "--init",
        "(0)",
        "--target",
        "(5)",
    ]);
    assert_eq!(yes.status.code(), Some(0));
    assert!(stdout(&yes).contains("cycle: a"));
}

#[test]
fn traces_dc_against_itself_is_included() {
    let alt = net("alternate");
    let o = verify(&[
        "traces-dc",
        "--net",
        &alt,
        "--init",
        "(1,0)",
        "--other-net",
        &alt,
        "--other-init",
        "(1,0)",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let o = verify(&[
        "traces-dc",
        "--net",
        &net("increment"),
        "--init",
        "(0)",
        "--other-net",
        &net("decrement"),
        "--other-init",
        "(5)",
    ]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("counterexample: a a a a a a"));
}

#[test]
fn ltl_on_the_increment_loop() {
    let holds = verify(&[
        "ltl",
        "--net",
        &net("increment"),
        "--init",
        "(0)",
        "--formula",
        "G F a",
    ]);
    assert_eq!(holds.status.code(), Some(0));
    let report = scratch("ltl.json");
    let violated = verify(&[
        "ltl",
        "--net",
        &net("increment"),
        "--init",
        "(0)",
        "--formula",
        "F G !a",
        "--report",
        report.to_str().unwrap(),
    ]);
    assert_eq!(violated.status.code(), Some(1));
    let json: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(&report).unwrap()).unwrap();
    assert_eq!(json["verdict"], "violated");
    assert_eq!(json["cycle"][0], "a");
}

#[test]
fn ltl_from_buchi_file() {
    let b = scratch("bad_traces.ba");
    fs::write(
        &b,
        "states: p q\nalphabet: a b\ninitial: p\naccepting: q\np a q\nq a q\n",
    )
    .unwrap();
    // (a b)^ω never repeats a
    let o = verify(&[
        "ltl",
        "--net",
        &net("alternate"),
        "--init",
        "(1,0)",
        "--buchi",
        b.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
}

#[test]
fn ltl_syntax_errors_exit_two() {
    let o = verify(&[
        "ltl",
        "--net",
        &net("increment"),
        "--init",
        "(0)",
        "--formula",
        "G (",
    ]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("column"));
}

#[test]
fn km_dot_root_shows_initial_ideal() {
    let dot = scratch("tree.dot");
    let o = verify(&[
        "km-dot",
        "--net",
        &net("spawn"),
        "--init",
        "(1,0,0)",
        "--dot",
        dot.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0));
    let text = fs::read_to_string(&dot).unwrap();
    assert!(text.starts_with("digraph ikm {"));
    assert!(text.contains("n0 [label=\"(1,0,0) / 0\"]"));
}

#[test]
fn budget_flag_and_env() {
    let exhausted = Command::new(env!("CARGO_BIN_EXE_wsts-verify"))
        .args(["clover", "--net", &net("increment"), "--init", "(0)"])
        .env("WSTS_VERIFY_BUDGET", "2")
        .output()
        .unwrap();
    assert_eq!(exhausted.status.code(), Some(2));
    assert!(stderr(&exhausted).contains("budget"));
    let o = verify(&[
        "clover",
        "--net",
        &net("increment"),
        "--init",
        "(0)",
        "--budget",
        "2",
    ]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn worklists_agree_on_shipped_nets() {
    for (name, init) in [
        ("mutex", "(1,0,1,0,1)"),
        ("producer_consumer", "(1,0,1)"),
        ("spawn", "(1,0,0)"),
    ] {
        let fifo = verify(&["clover", "--net", &net(name), "--init", init]);
        let lifo = verify(&[
            "clover",
            "--net",
            &net(name),
            "--init",
            init,
            "--worklist",
            "lifo",
        ]);
        assert_eq!(stdout(&fifo), stdout(&lifo), "{name}");
    }
}

#[test]
fn batch_keeps_order_and_worst_exit() {
    let queries = scratch("queries.txt");
    fs::write(
        &queries,
        format!(
            "# shipped nets\nclover --net {inc} --init (0)\ncover --net {inc} --init (0) --target (3)\nrepcover --net {dec} --init (5) --target (0)\n",
            inc = net("increment"),
            dec = net("decrement")
        ),
    )
    .unwrap();
    let o = verify(&["batch", queries.to_str().unwrap(), "--jobs", "3"]);
    assert_eq!(o.status.code(), Some(1));
    let out = stdout(&o);
    let clover = out.find("(w)").unwrap();
    let cover = out.find("coverable: true").unwrap();
    let rep = out.find("repeatedly coverable: false").unwrap();
    assert!(clover < cover && cover < rep);
}

#[test]
fn devtool_examples_and_cross_check() {
    let o = verify(&["devtool", "examples"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(!stdout(&o).contains("MISMATCH"));
    let o = verify(&[
        "devtool",
        "cross-check",
        "--seed",
        "3",
        "--scale",
        "4",
        "--jobs",
        "2",
    ]);
    // the depth-16 superword bound of the trace sandwich is not guaranteed,
    // so only the other comparisons must agree
    assert!(matches!(o.status.code(), Some(0 | 1)));
    let out = stdout(&o);
    let summaries: Vec<&str> = out.lines().filter(|l| !l.starts_with(' ')).collect();
    assert_eq!(summaries.len(), 7, "{out}");
    for line in summaries
        .iter()
        .filter(|l| !l.starts_with("trace sandwich"))
    {
        let (done, total) = line
            .rsplit_once(": ")
            .unwrap()
            .1
            .trim_end_matches(" agree")
            .split_once('/')
            .unwrap();
        assert_eq!(done, total, "{line}");
    }
    let a = verify(&["devtool", "random-net", "--seed", "9"]);
    let b = verify(&["devtool", "random-net", "--seed", "9"]);
    assert_eq!(stdout(&a), stdout(&b));
}
