use clap::Subcommand;
use rayon::prelude::*;
use wsts_core::devtool::check::{
    clover_vs_reachability, coverability_vs_backward, derived_examples, lang_vs_enumeration,
    ltl_translation_vs_lasso, positivity_vs_enumeration, repeated_vs_lasso, trace_sandwich,
    Agreement,
};
use wsts_core::devtool::{random_marking, random_net, seeded, NetParams};

use crate::commands::Outcome;

#[derive(Subcommand, Debug)]
pub enum DevCommand {
    /// Print a seeded random net and initial marking.
    RandomNet {
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Allow ω outputs.
        #[arg(long)]
        omega: bool,
    },
    /// Recompute the worked examples and compare them with their oracles.
    Examples,
    /// Run every library-versus-oracle comparison.
    CrossCheck {
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Instances per comparison.
        #[arg(long, default_value_t = 20)]
        scale: usize,
        #[arg(long, default_value_t = 1)]
        jobs: usize,
    },
}

pub fn run(command: DevCommand) -> anyhow::Result<Outcome> {
    match command {
        DevCommand::RandomNet { seed, omega } => {
            let mut rng = seeded(seed);
            let params = if omega {
                NetParams::OMEGA
            } else {
                NetParams::PETRI
            };
            let net = random_net(&mut rng, &params);
            let x0 = random_marking(&mut rng, net.dimension(), params.max_entry);
            Ok(Outcome::verdict(
                true,
                format!("# seed {seed}; init {x0}\n{net}"),
            ))
        }
        DevCommand::Examples => {
            let examples = derived_examples()?;
            let mut text = String::new();
            for e in &examples {
                let mark = if e.passed() { "ok" } else { "MISMATCH" };
                text.push_str(&format!(
                    "{mark:8} {}: expected {} got {}\n",
                    e.name, e.expected, e.actual
                ));
            }
            Ok(Outcome::verdict(examples.iter().all(|e| e.passed()), text))
        }
        DevCommand::CrossCheck { seed, scale, jobs } => {
            type Runner = fn(u64, usize) -> wsts_core::Result<Agreement>;
            let runners: [Runner; 7] = [
                |s, n| clover_vs_reachability(s, n, n / 2),
                coverability_vs_backward,
                trace_sandwich,
                lang_vs_enumeration,
                positivity_vs_enumeration,
                repeated_vs_lasso,
                ltl_translation_vs_lasso,
            ];
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(jobs.max(1))
                .build()?;
            let results: Vec<wsts_core::Result<Agreement>> = pool.install(|| {
                runners
                    .par_iter()
                    .enumerate()
                    .map(|(i, r)| r(seed.wrapping_add(i as u64), scale))
                    .collect()
            });
            let mut text = String::new();
            let mut all = true;
            for r in results {
                let a = r?;
                all &= a.all_agree();
                text.push_str(&format!("{a}\n"));
            }
            Ok(Outcome::verdict(all, text))
        }
    }
}
