use std::fs;
use std::path::Path;

use anyhow::{bail, Context};
use rayon::prelude::*;
use serde::Serialize;
use wsts_core::liveness::PositivityOptions;
use wsts_core::ltl::{check_buchi, LtlOptions};
use wsts_core::{
    build_ikm_tree, lang, load_net, model_check_ltl, BuchiAutomaton, Displacement, IdealVec,
    IkmTree, LtlFormula, LtlVerdict, Marking, NetModel, TreeStats,
};

use crate::{devtool, Cli, Command, Query, EXIT_ERROR};
use clap::Parser;

/// What a command prints, and the exit code it maps to.
#[derive(Debug, Default)]
pub struct Outcome {
    pub text: String,
    pub code: u8,
    pub error: Option<String>,
}

impl Outcome {
    pub fn verdict(positive: bool, text: String) -> Self {
        Outcome {
            text,
            code: if positive { 0 } else { 1 },
            error: None,
        }
    }

    fn failure(err: anyhow::Error) -> Self {
        Outcome {
            text: String::new(),
            code: EXIT_ERROR,
            error: Some(format!("{err:#}")),
        }
    }
}

pub fn execute(command: Command) -> Outcome {
    run(command).unwrap_or_else(Outcome::failure)
}

fn run(command: Command) -> anyhow::Result<Outcome> {
    match command {
        Command::Clover { query, dot } => clover(&query, dot.as_deref()),
        Command::Cover { query, target, dot } => cover(&query, &target, dot.as_deref()),
        Command::Repcover { query, target } => repcover(&query, &target),
        Command::TracesDc {
            query,
            other_net,
            other_init,
        } => traces_dc(&query, &other_net, &other_init),
        Command::Ltl {
            query,
            formula,
            buchi,
        } => ltl(&query, formula.as_deref(), buchi.as_deref()),
        Command::KmDot { query, dot } => km_dot(&query, dot.as_deref()),
        Command::Batch { file, jobs } => batch(&file, jobs),
        Command::Devtool { command } => devtool::run(command),
    }
}

fn read_net(path: &Path) -> anyhow::Result<NetModel> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    load_net(&text).with_context(|| format!("loading {}", path.display()))
}

fn marking(text: &str, net: &NetModel, what: &str) -> anyhow::Result<Marking> {
    let m: Marking = text
        .parse()
        .with_context(|| format!("parsing {what} {text:?}"))?;
    if m.dim() != net.dimension() {
        bail!(
            "{what} {m} has dimension {} but the net has dimension {}",
            m.dim(),
            net.dimension()
        );
    }
    Ok(m)
}

fn load(query: &Query) -> anyhow::Result<(NetModel, Marking)> {
    let net = read_net(&query.net)?;
    let x0 = marking(&query.init, &net, "initial marking")?;
    Ok((net, x0))
}

fn tree(query: &Query, net: &NetModel, x0: &Marking) -> anyhow::Result<IkmTree<IdealVec, String>> {
    Ok(build_ikm_tree(
        net,
        IdealVec::from_marking(x0),
        &query.ikm_options(),
    )?)
}

fn write_report(query: &Query, report: &impl Serialize) -> anyhow::Result<()> {
    if let Some(path) = &query.report {
        let json = serde_json::to_string_pretty(report)?;
        fs::write(path, json + "\n").with_context(|| format!("writing {}", path.display()))?;
    }
    Ok(())
}

fn write_dot(path: Option<&Path>, t: &IkmTree<IdealVec, String>) -> anyhow::Result<()> {
    if let Some(path) = path {
        fs::write(path, t.to_dot()).with_context(|| format!("writing {}", path.display()))?;
    }
    Ok(())
}

fn render_displacement(d: &[Displacement]) -> String {
    let parts: Vec<String> = d
        .iter()
        .map(|x| match x {
            Displacement::Finite(n) => format!("{n:+}"),
            Displacement::OmegaOutput => "w".to_string(),
        })
        .collect();
    format!("({})", parts.join(","))
}

#[derive(Serialize)]
struct CloverReport {
    clover: Vec<String>,
    stats: TreeStats,
}

fn clover(query: &Query, dot: Option<&Path>) -> anyhow::Result<Outcome> {
    let (net, x0) = load(query)?;
    let t = tree(query, &net, &x0)?;
    write_dot(dot, &t)?;
    let clover: Vec<String> = t
        .clover()
        .ideals()
        .iter()
        .map(ToString::to_string)
        .collect();
    write_report(
        query,
        &CloverReport {
            clover: clover.clone(),
            stats: t.stats(),
        },
    )?;
    Ok(Outcome::verdict(true, clover.join("\n") + "\n"))
}

#[derive(Serialize)]
struct CoverReport {
    coverable: bool,
    target: String,
    covering_ideal: Option<String>,
    tree_path: Option<Vec<String>>,
    stats: TreeStats,
}

fn cover(query: &Query, target: &str, dot: Option<&Path>) -> anyhow::Result<Outcome> {
    let (net, x0) = load(query)?;
    let y = marking(target, &net, "target")?;
    let t = tree(query, &net, &x0)?;
    write_dot(dot, &t)?;
    let mut hit = None;
    for n in t.nodes() {
        if n.ideal.contains(&y)? {
            hit = Some(n);
            break;
        }
    }
    let report = CoverReport {
        coverable: hit.is_some(),
        target: y.to_string(),
        covering_ideal: hit.map(|n| n.ideal.to_string()),
        tree_path: hit.map(|n| t.path_word(n.id)),
        stats: t.stats(),
    };
    write_report(query, &report)?;
    let text = match hit {
        Some(n) => format!(
            "coverable: true\nnode: {} {}\ntree path: {}\n",
            n.id,
            n.ideal,
            t.path_word(n.id).join(" ")
        ),
        None => "coverable: false\n".to_string(),
    };
    Ok(Outcome::verdict(report.coverable, text))
}

#[derive(Serialize)]
struct RepcoverReport {
    repeatedly_coverable: bool,
    target: String,
    node_ideal: Option<String>,
    prefix: Option<Vec<String>>,
    cycle: Option<Vec<String>>,
    displacement: Option<Vec<Displacement>>,
}

fn repcover(query: &Query, target: &str) -> anyhow::Result<Outcome> {
    let (net, x0) = load(query)?;
    let y = marking(target, &net, "target")?;
    let found = wsts_core::liveness::find_repeated_cover_in_net(
        &net,
        &x0,
        &y,
        &query.ikm_options(),
        &PositivityOptions::default(),
    )?;
    let report = RepcoverReport {
        repeatedly_coverable: found.is_some(),
        target: y.to_string(),
        node_ideal: found.as_ref().map(|w| w.ideal.to_string()),
        prefix: found.as_ref().map(|w| w.prefix.clone()),
        cycle: found.as_ref().map(|w| w.positive.word.clone()),
        displacement: found.as_ref().map(|w| w.positive.justification.clone()),
    };
    write_report(query, &report)?;
    let text = match &found {
        Some(w) => format!(
            "repeatedly coverable: true\nnode: {} {}\nprefix: {}\ncycle: {}\ndisplacement: {}\n",
            w.node,
            w.ideal,
            w.prefix.join(" "),
            w.positive.word.join(" "),
            render_displacement(&w.positive.justification)
        ),
        None => "repeatedly coverable: false\n".to_string(),
    };
    Ok(Outcome::verdict(found.is_some(), text))
}

#[derive(Serialize)]
struct TracesReport {
    included: bool,
    counterexample: Option<Vec<String>>,
}

fn traces_dc(query: &Query, other_net: &Path, other_init: &str) -> anyhow::Result<Outcome> {
    let (net, x0) = load(query)?;
    let other = read_net(other_net)?;
    let x1 = marking(other_init, &other, "other initial marking")?;
    let cex = lang::traces_dc_counterexample(
        &net,
        IdealVec::from_marking(&x0),
        &other,
        IdealVec::from_marking(&x1),
        &query.ikm_options(),
    )?;
    let report = TracesReport {
        included: cex.is_none(),
        counterexample: cex.clone(),
    };
    write_report(query, &report)?;
    let text = match &cex {
        None => "included: true\n".to_string(),
        Some(w) if w.is_empty() => "included: false\ncounterexample: ε\n".to_string(),
        Some(w) => format!("included: false\ncounterexample: {}\n", w.join(" ")),
    };
    Ok(Outcome::verdict(cex.is_none(), text))
}

#[derive(Serialize)]
struct LtlReport<'a> {
    property: String,
    #[serde(flatten)]
    verdict: &'a LtlVerdict,
}

fn ltl(query: &Query, formula: Option<&str>, buchi: Option<&Path>) -> anyhow::Result<Outcome> {
    let (net, x0) = load(query)?;
    let options = LtlOptions {
        ikm: query.ikm_options(),
        positivity: PositivityOptions::default(),
    };
    let (property, verdict) = match (formula, buchi) {
        (Some(text), None) => {
            let phi: LtlFormula = text
                .parse()
                .with_context(|| format!("parsing formula {text:?}"))?;
            (phi.to_string(), model_check_ltl(&net, &x0, &phi, &options)?)
        }
        (None, Some(path)) => {
            let text =
                fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
            let b: BuchiAutomaton = text
                .parse()
                .with_context(|| format!("loading {}", path.display()))?;
            (
                format!("no trace accepted by {}", path.display()),
                check_buchi(&net, &x0, &b, &options)?,
            )
        }
        _ => bail!("exactly one of --formula and --buchi is required"),
    };
    write_report(
        query,
        &LtlReport {
            property: property.clone(),
            verdict: &verdict,
        },
    )?;
    let text = match &verdict {
        LtlVerdict::Holds => format!("{property}: holds\n"),
        LtlVerdict::Violated(v) => format!(
            "{property}: violated\naccepting state: {}\nnode: {}\nprefix: {}\ncycle: {}\ndisplacement: {}\n",
            v.accepting_state,
            v.node_ideal,
            v.prefix.join(" "),
            v.cycle.join(" "),
            render_displacement(&v.justification)
        ),
    };
    Ok(Outcome::verdict(verdict.holds(), text))
}

fn km_dot(query: &Query, dot: Option<&Path>) -> anyhow::Result<Outcome> {
    let (net, x0) = load(query)?;
    let t = tree(query, &net, &x0)?;
    write_report(query, &t.export())?;
    match dot {
        Some(_) => {
            write_dot(dot, &t)?;
            Ok(Outcome::verdict(true, format!("{} nodes\n", t.len())))
        }
        None => Ok(Outcome::verdict(true, t.to_dot())),
    }
}

fn batch(file: &Path, jobs: usize) -> anyhow::Result<Outcome> {
    let text = fs::read_to_string(file).with_context(|| format!("reading {}", file.display()))?;
    let lines: Vec<&str> = text
        .lines()
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with('#'))
        .collect();
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs.max(1))
        .build()?;
    let outcomes: Vec<Outcome> =
        pool.install(|| lines.par_iter().map(|line| batch_line(line)).collect());
    let mut out = Outcome::default();
    for (line, o) in lines.iter().zip(&outcomes) {
        out.text.push_str(&format!("== {line}\n"));
        out.text.push_str(&o.text);
        if let Some(e) = &o.error {
            out.text.push_str(&format!("error: {e}\n"));
        }
        out.code = out.code.max(o.code);
    }
    Ok(out)
}

fn batch_line(line: &str) -> Outcome {
    let args = std::iter::once("wsts-verify").chain(line.split_whitespace());
    match Cli::try_parse_from(args) {
        Ok(Cli {
            command: Command::Batch { .. },
        }) => Outcome::failure(anyhow::anyhow!("batch files cannot nest")),
        Ok(cli) => execute(cli.command),
        Err(e) => {
            let message = e.to_string();
            let message = message.trim_end();
            Outcome::failure(anyhow::anyhow!(
                "{}",
                message.strip_prefix("error: ").unwrap_or(message)
            ))
        }
    }
}
