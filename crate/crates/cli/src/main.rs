//! Command-line front end: load an algebra from a JSON table file, parse
//! congruence specifications, and compute commutators, commutator tables,
//! congruence lattices, witness chains, and centrality checks.
//!
//! Results go to stdout, diagnostics to stderr. Exit codes: 0 success,
//! 1 usage or parse error, 2 semantic error (non-congruence specification,
//! size cap), 3 internal invariant violation. A closed stdout (downstream
//! `head` exiting) ends the run quietly with status 0.

use std::collections::HashMap;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use serde_json::json;

use commutator_kit::algebra::PairAlgebra;
use commutator_kit::commutator::{
    commutator, commutator_checked, lfp_by_meet, CommutatorError, DeltaContext,
};
use commutator_kit::congruence::{cg, con_lattice, replay, WitnessChain};
use commutator_kit::relations::{PairSet, Partition, Tolerance};
use commutator_kit::{parse_algebra, FiniteAlgebra};

/// Writes one result line to stdout. A broken pipe means the consumer has
/// seen all it wants, so the run ends quietly; any other write failure is
/// an environment problem, reported on stderr.
fn out_line(args: std::fmt::Arguments) {
    let mut stdout = std::io::stdout().lock();
    let res = stdout.write_fmt(args).and_then(|()| stdout.write_all(b"\n"));
    if let Err(e) = res {
        if e.kind() == std::io::ErrorKind::BrokenPipe {
            std::process::exit(0);
        }
        eprintln!("error: cannot write to stdout: {e}");
        std::process::exit(3);
    }
}

macro_rules! out {
    ($($arg:tt)*) => { out_line(format_args!($($arg)*)) };
}

#[derive(Parser)]
#[command(
    name = "commutator",
    version,
    about = "Congruence lattices and term-condition commutators of finite algebras"
)]
struct Cli {
    #[command(subcommand)]
    command: CliCommand,
}

#[derive(Args)]
struct Common {
    /// Algebra file: JSON with "size" and operation tables
    #[arg(long, value_name = "PATH")]
    algebra: PathBuf,

    /// Output format
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
}

#[derive(Args)]
struct CongruencePair {
    /// Partition text for alpha, e.g. "0 2|1 3"
    #[arg(long, value_name = "SPEC")]
    alpha: String,

    /// Partition text for beta
    #[arg(long, value_name = "SPEC")]
    beta: String,

    /// Treat the specs as generating pairs and close them to congruences
    #[arg(long)]
    generate: bool,
}

#[derive(Subcommand)]
enum CliCommand {
    /// Compute the commutator [alpha, beta]
    Compute {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        pair: CongruencePair,
        /// Cross-check against the tolerance-meet fixed point (small universes)
        #[arg(long)]
        oracle: bool,
    },
    /// Print the commutator of every pair of congruences
    Table {
        #[command(flatten)]
        common: Common,
        /// Compute table cells on a thread pool; output is identical
        #[arg(long)]
        parallel: bool,
    },
    /// List the congruence lattice in canonical order
    Con {
        #[command(flatten)]
        common: Common,
    },
    /// Derive a replayable chain showing (x, y) is in [alpha, beta]
    Witness {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        pair: CongruencePair,
        x: usize,
        y: usize,
    },
    /// Decide the centrality condition C(alpha, beta; gamma)
    Check {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        pair: CongruencePair,
        /// Partition text for gamma
        #[arg(long, value_name = "SPEC")]
        gamma: String,
    },
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

enum Verb {
    Compute { oracle: bool },
    Table { parallel: bool },
    Con,
    Witness { x: usize, y: usize },
    Check,
}

/// Everything a run needs, assembled from the command line and environment.
struct RunConfig {
    command: Verb,
    algebra_path: PathBuf,
    alpha_spec: Option<String>,
    beta_spec: Option<String>,
    gamma_spec: Option<String>,
    output_format: Format,
    generate: bool,
    debug_asserts: bool,
}

impl RunConfig {
    fn from_cli(cli: Cli) -> Self {
        let debug_asserts = std::env::var("COMMUTATOR_KIT_DEBUG")
            .map(|v| v == "1")
            .unwrap_or(false);
        let (command, common, alpha, beta, gamma, generate) = match cli.command {
            CliCommand::Compute {
                common,
                pair,
                oracle,
            } => (
                Verb::Compute { oracle },
                common,
                Some(pair.alpha),
                Some(pair.beta),
                None,
                pair.generate,
            ),
            CliCommand::Table { common, parallel } => {
                (Verb::Table { parallel }, common, None, None, None, false)
            }
            CliCommand::Con { common } => (Verb::Con, common, None, None, None, false),
            CliCommand::Witness { common, pair, x, y } => (
                Verb::Witness { x, y },
                common,
                Some(pair.alpha),
                Some(pair.beta),
                None,
                pair.generate,
            ),
            CliCommand::Check {
                common,
                pair,
                gamma,
            } => (
                Verb::Check,
                common,
                Some(pair.alpha),
                Some(pair.beta),
                Some(gamma),
                pair.generate,
            ),
        };
        RunConfig {
            command,
            algebra_path: common.algebra,
            alpha_spec: alpha,
            beta_spec: beta,
            gamma_spec: gamma,
            output_format: common.format,
            generate,
            debug_asserts,
        }
    }
}

enum CliError {
    Usage(String),
    Semantic(String),
    Internal(String),
}

impl CliError {
    fn code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 1,
            CliError::Semantic(_) => 2,
            CliError::Internal(_) => 3,
        }
    }

    fn message(&self) -> &str {
        match self {
            CliError::Usage(m) | CliError::Semantic(m) | CliError::Internal(m) => m,
        }
    }
}

impl From<CommutatorError> for CliError {
    fn from(e: CommutatorError) -> Self {
        match e {
            CommutatorError::InternalInvariant(_) => CliError::Internal(e.to_string()),
            _ => CliError::Semantic(e.to_string()),
        }
    }
}

fn main() {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = match e.kind() {
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            e.print().expect("console is writable");
            std::process::exit(code);
        }
    };
    match run(&RunConfig::from_cli(cli)) {
        Ok(()) => {}
        Err(e) => {
            eprintln!("error: {}", e.message());
            std::process::exit(e.code());
        }
    }
}

fn run(config: &RunConfig) -> Result<(), CliError> {
    let algebra = load_algebra(&config.algebra_path)?;
    match config.command {
        Verb::Compute { oracle } => run_compute(config, &algebra, oracle),
        Verb::Table { parallel } => run_table(config, &algebra, parallel),
        Verb::Con => run_con(config, &algebra),
        Verb::Witness { x, y } => run_witness(config, &algebra, x, y),
        Verb::Check => run_check(config, &algebra),
    }
}

fn load_algebra(path: &PathBuf) -> Result<FiniteAlgebra, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Usage(format!("cannot read {}: {e}", path.display())))?;
    parse_algebra(&text).map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))
}

/// Parses a partition spec; with `--generate` the blocks are taken as pairs
/// to collapse and closed to the least congruence containing them.
fn congruence_spec(
    config: &RunConfig,
    algebra: &FiniteAlgebra,
    name: &str,
    spec: &str,
) -> Result<Partition, CliError> {
    let p = Partition::parse(spec, algebra.size)
        .map_err(|e| CliError::Usage(format!("--{name} {spec:?}: {e}")))?;
    if !config.generate {
        return Ok(p);
    }
    let seed = PairSet::from_pairs(algebra.size, p.nontrivial_pairs())
        .map_err(|e| CliError::Internal(format!("--{name}: {e}")))?;
    cg(algebra, &seed).map_err(|e| CliError::Internal(format!("--{name}: {e}")))
}

fn alpha_beta(
    config: &RunConfig,
    algebra: &FiniteAlgebra,
) -> Result<(Partition, Partition), CliError> {
    let alpha_spec = config.alpha_spec.as_deref().expect("clap requires --alpha");
    let beta_spec = config.beta_spec.as_deref().expect("clap requires --beta");
    Ok((
        congruence_spec(config, algebra, "alpha", alpha_spec)?,
        congruence_spec(config, algebra, "beta", beta_spec)?,
    ))
}

fn compute_commutator(
    config: &RunConfig,
    algebra: &FiniteAlgebra,
    alpha: &Partition,
    beta: &Partition,
) -> Result<Partition, CliError> {
    let result = if config.debug_asserts {
        commutator_checked(algebra, alpha, beta)
    } else {
        commutator(algebra, alpha, beta)
    };
    result.map_err(CliError::from)
}

fn tolerance_json(t: &Tolerance) -> serde_json::Value {
    match t.to_partition() {
        Ok(p) => serde_json::to_value(&p).expect("partitions serialize"),
        Err(_) => json!({ "pairs": t.nontrivial_pairs() }),
    }
}

fn tolerance_text(t: &Tolerance) -> String {
    match t.to_partition() {
        Ok(p) => p.to_string(),
        Err(_) => t
            .nontrivial_pairs()
            .iter()
            .map(|(x, y)| format!("({x}, {y})"))
            .collect::<Vec<_>>()
            .join(" "),
    }
}

fn run_compute(config: &RunConfig, algebra: &FiniteAlgebra, oracle: bool) -> Result<(), CliError> {
    let (alpha, beta) = alpha_beta(config, algebra)?;
    let result = compute_commutator(config, algebra, &alpha, &beta)?;
    let oracle_part = if oracle {
        let meet = lfp_by_meet(algebra, &alpha, &beta).map_err(CliError::from)?;
        let agrees = meet.is_transitive()
            && meet.to_partition().map_err(|e| CliError::Internal(e.to_string()))? == result;
        Some((meet, agrees))
    } else {
        None
    };
    match config.output_format {
        Format::Text => {
            out!("{result}");
            if let Some((meet, agrees)) = &oracle_part {
                out!("oracle meet: {}", tolerance_text(meet));
                out!("oracle: {}", if *agrees { "AGREE" } else { "DISAGREE" });
            }
        }
        Format::Json => {
            let mut doc = json!({ "commutator": result });
            if let Some((meet, agrees)) = &oracle_part {
                doc["oracle"] = json!({
                    "meet": tolerance_json(meet),
                    "verdict": if *agrees { "AGREE" } else { "DISAGREE" },
                });
            }
            out!("{doc}");
        }
    }
    if let Some((_, false)) = oracle_part {
        return Err(CliError::Internal(
            "oracle meet disagrees with the computed commutator".into(),
        ));
    }
    Ok(())
}

fn lattice_positions(con: &[Partition]) -> HashMap<Vec<usize>, usize> {
    con.iter()
        .enumerate()
        .map(|(i, p)| (p.as_reps().to_vec(), i))
        .collect()
}

fn run_table(config: &RunConfig, algebra: &FiniteAlgebra, parallel: bool) -> Result<(), CliError> {
    let con = con_lattice(algebra).map_err(|e| CliError::Semantic(e.to_string()))?;
    let position = lattice_positions(&con);
    let row = |alpha: &Partition| -> Result<Vec<usize>, CliError> {
        con.iter()
            .map(|beta| {
                let c = compute_commutator(config, algebra, alpha, beta)?;
                position.get(c.as_reps()).copied().ok_or_else(|| {
                    CliError::Internal(format!("commutator {c} is not in the congruence lattice"))
                })
            })
            .collect()
    };
    let cells: Vec<Vec<usize>> = if parallel {
        con.par_iter().map(row).collect::<Result<_, _>>()?
    } else {
        con.iter().map(row).collect::<Result<_, _>>()?
    };
    match config.output_format {
        Format::Text => {
            for (i, p) in con.iter().enumerate() {
                out!("C{i} = {p}");
            }
            out!("[Ci, Cj], rows i, columns j:");
            for r in &cells {
                let line: Vec<String> = r.iter().map(|c| format!("C{c}")).collect();
                out!("{}", line.join(" "));
            }
        }
        Format::Json => {
            out!("{}", json!({ "congruences": con, "cells": cells }));
        }
    }
    Ok(())
}

fn run_con(config: &RunConfig, algebra: &FiniteAlgebra) -> Result<(), CliError> {
    let con = con_lattice(algebra).map_err(|e| CliError::Semantic(e.to_string()))?;
    match config.output_format {
        Format::Text => {
            for p in &con {
                out!("{p}");
            }
        }
        Format::Json => {
            out!("{}", json!({ "congruences": con }));
        }
    }
    Ok(())
}

fn base_pair(pair: &PairAlgebra, index: usize) -> String {
    let (x, y) = pair.pair(index);
    format!("({x}, {y})")
}

fn render_chain_text(chain: &WitnessChain, pair: &PairAlgebra) {
    out!("start {}", base_pair(pair, chain.endpoints.0));
    for (i, link) in chain.links.iter().enumerate() {
        let (gu, gv) = link.generator;
        let mut line = format!(
            "  {}: {} -> {}  by {}~{}",
            i + 1,
            base_pair(pair, link.from),
            base_pair(pair, link.to),
            base_pair(pair, gu),
            base_pair(pair, gv),
        );
        if !link.translations.is_empty() {
            let steps: Vec<String> = link
                .translations
                .iter()
                .map(|t| {
                    let fixed: Vec<String> =
                        t.fixed_args.iter().map(|&f| base_pair(pair, f)).collect();
                    format!(
                        "{}[pos {}](fixed {})",
                        pair.induced().ops[t.op_index].name,
                        t.position,
                        fixed.join(", ")
                    )
                })
                .collect();
            line.push_str(&format!("  under {}", steps.join(" then ")));
        }
        out!("{line}");
    }
    out!("end {}", base_pair(pair, chain.endpoints.1));
}

fn run_witness(
    config: &RunConfig,
    algebra: &FiniteAlgebra,
    x: usize,
    y: usize,
) -> Result<(), CliError> {
    for v in [x, y] {
        if v >= algebra.size {
            return Err(CliError::Usage(format!(
                "element {v} is out of range for a universe of size {}",
                algebra.size
            )));
        }
    }
    let (alpha, beta) = alpha_beta(config, algebra)?;
    let ctx = DeltaContext::new(algebra, &alpha, &beta).map_err(CliError::from)?;
    let chain = ctx.witness(x, y).map_err(CliError::from)?;
    if let Err(e) = replay(ctx.pair_algebra().induced(), &chain, ctx.generators()) {
        return Err(CliError::Internal(format!(
            "derived chain fails replay: {e}"
        )));
    }
    match config.output_format {
        Format::Text => {
            out!("witness for ({x}, {y}) in [alpha, beta]:");
            render_chain_text(&chain, ctx.pair_algebra());
            out!("replay: valid");
        }
        Format::Json => {
            let doc = json!({
                "pair": [x, y],
                "pair_universe": ctx.pair_algebra().universe(),
                "chain": chain,
                "replay_valid": true,
            });
            out!("{doc}");
        }
    }
    Ok(())
}

fn run_check(config: &RunConfig, algebra: &FiniteAlgebra) -> Result<(), CliError> {
    let (alpha, beta) = alpha_beta(config, algebra)?;
    let gamma_spec = config.gamma_spec.as_deref().expect("clap requires --gamma");
    let gamma = congruence_spec(config, algebra, "gamma", gamma_spec)?;
    let ctx = DeltaContext::new(algebra, &alpha, &beta).map_err(CliError::from)?;
    let holds = ctx.term_condition_holds(&gamma).map_err(CliError::from)?;
    match config.output_format {
        Format::Text => out!("C(alpha,beta;gamma): {holds}"),
        Format::Json => out!("{}", json!({ "holds": holds })),
    }
    Ok(())
}
