//! Command-line front end: parse a framework or network, compile it into a
//! general allocator, and query labelings, stability, blocks, and influence.

use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use argalloc::blocks::{compose_splitter, pairwise_influence, solve_block, validate_splitter};
use argalloc::error::Error;
use argalloc::framework::{
    enumerate_complete_labelings, grounded_labeling, instantiation_set, is_complete_allocator,
    Allocator, ArgumentationFramework, Labeling, Network,
};
use argalloc::io::{
    allocator_json, labeling_json, labelings_json, parse_adfx, parse_apx, parse_splitter_json,
    parse_tgf, to_dot,
};
use argalloc::solver::{order_strategy, solve, FreshSupply, OrderStrategy};
use argalloc::stability::{enumerate_stable, to_dimacs, stable_condition, SAT_VAR_BOUND};

#[derive(Parser)]
#[command(name = "argalloc", version, about = "Compiles argumentation frameworks into three-valued allocator expressions")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum OrderKind {
    /// Declaration order.
    Input,
    /// Feedback-vertex-set heuristic.
    Fvs,
    /// Exhaustive minimum-arity search (small frameworks only).
    Exhaustive,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Args)]
struct CommonOpts {
    /// Framework or network file (.tgf, .apx, .adfx).
    input: PathBuf,
    #[arg(long, value_enum, default_value = "input")]
    order: OrderKind,
    /// Keep the plain refinement form (no fresh-variable elision).
    #[arg(long)]
    no_elide: bool,
    #[arg(long, value_enum, default_value = "text")]
    format: Format,
    /// Variable bound for exhaustive equivalence checks.
    #[arg(long, default_value_t = 12)]
    max_equiv_vars: usize,
    /// Argument bound for the exhaustive labeling oracle.
    #[arg(long, default_value_t = 12)]
    max_oracle_args: usize,
    /// Reserved for randomized strategies; recorded for reproducibility.
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Subcommand)]
enum Command {
    /// Compile the input into a general allocator.
    Compile(CommonOpts),
    /// Enumerate all complete labelings by brute force.
    Labelings(CommonOpts),
    /// Compute the grounded labeling.
    Grounded(CommonOpts),
    /// Enumerate the stable labelings via the binary encoding.
    Stable(CommonOpts),
    /// Compile, then check completeness and generality against the oracle.
    Verify(CommonOpts),
    /// Solve each block of a splitter file separately.
    SplitSolve {
        #[command(flatten)]
        common: CommonOpts,
        #[arg(long)]
        splitter: PathBuf,
    },
    /// Solve and compose all blocks of a splitter into a global allocator.
    Compose {
        #[command(flatten)]
        common: CommonOpts,
        #[arg(long)]
        splitter: PathBuf,
    },
    /// Refine the completeness equations of two arguments against each other.
    Influence {
        #[command(flatten)]
        common: CommonOpts,
        /// The two arguments, comma-separated: `--pair a,b`.
        #[arg(long)]
        pair: String,
    },
    /// Compare the arity reached by the order strategies.
    AritySearch(CommonOpts),
    /// Dump the attack graph in DOT format.
    Dot(CommonOpts),
    /// Export the stable condition of the compiled allocator as DIMACS CNF.
    Dimacs(CommonOpts),
}

struct Loaded {
    network: Network,
    af: Option<ArgumentationFramework>,
}

fn load(path: &Path) -> Result<Loaded, Error> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::Usage(format!("cannot read {}: {e}", path.display())))?;
    let ext = path
        .extension()
        .and_then(|e| e.to_str())
        .unwrap_or("")
        .to_ascii_lowercase();
    match ext.as_str() {
        "tgf" => {
            let af = parse_tgf(&text)?;
            Ok(Loaded {
                network: Network::from_af(&af),
                af: Some(af),
            })
        }
        "apx" => {
            let af = parse_apx(&text)?;
            Ok(Loaded {
                network: Network::from_af(&af),
                af: Some(af),
            })
        }
        "adfx" | "adf" => {
            let network = parse_adfx(&text)?;
            let af = network.as_af();
            Ok(Loaded { network, af })
        }
        other => Err(Error::Usage(format!(
            "unrecognized input extension `.{other}` (expected .tgf, .apx, or .adfx)"
        ))),
    }
}

fn pick_order(network: &Network, kind: OrderKind) -> Result<Vec<String>, Error> {
    let strategy = match kind {
        OrderKind::Input => OrderStrategy::Input,
        OrderKind::Fvs => OrderStrategy::FvsHeuristic,
        OrderKind::Exhaustive => OrderStrategy::MinArityExhaustive,
    };
    order_strategy(network, strategy)
}

fn compile(common: &CommonOpts, loaded: &Loaded) -> Result<Allocator, Error> {
    let order = pick_order(&loaded.network, common.order)?;
    let mut supply = FreshSupply::global();
    solve(&loaded.network, &order, &mut supply, !common.no_elide)
}

fn allocator_text(e: &Allocator) -> String {
    let mut out = String::new();
    for (arg, expr) in e.iter() {
        out.push_str(&format!("{arg} = {expr}\n"));
    }
    out
}

fn labeling_text(l: &Labeling) -> String {
    let parts: Vec<String> = l
        .iter()
        .map(|(arg, label)| format!("{arg}:{}", label.name()))
        .collect();
    parts.join(" ")
}

enum Outcome {
    Done(Value, String),
    /// `verify` found the compiled allocator wanting.
    VerificationFailed(Value, String),
}

fn allocator_stats(e: &Allocator) -> Value {
    json!({"nodes": e.total_node_count(), "arity": e.arity()})
}

fn run(command: &Command) -> Result<Outcome, Error> {
    match command {
        Command::Compile(common) => {
            let loaded = load(&common.input)?;
            let e = compile(common, &loaded)?;
            let stats = allocator_stats(&e);
            Ok(Outcome::Done(
                json!({"allocator": allocator_json(&e), "stats": stats}),
                allocator_text(&e),
            ))
        }
        Command::Labelings(common) => {
            let loaded = load(&common.input)?;
            let ls = enumerate_complete_labelings(&loaded.network, common.max_oracle_args)?;
            let text = ls
                .iter()
                .map(labeling_text)
                .collect::<Vec<_>>()
                .join("\n");
            Ok(Outcome::Done(
                json!({"count": ls.len(), "labelings": labelings_json(&ls)}),
                format!("{} complete labeling(s)\n{text}\n", ls.len()),
            ))
        }
        Command::Grounded(common) => {
            let loaded = load(&common.input)?;
            let g = grounded_labeling(&loaded.network, common.max_oracle_args)?;
            Ok(Outcome::Done(
                labeling_json(&g),
                format!("{}\n", labeling_text(&g)),
            ))
        }
        Command::Stable(common) => {
            let loaded = load(&common.input)?;
            let e = compile(common, &loaded)?;
            let stable = enumerate_stable(&e, SAT_VAR_BOUND)?;
            let ls: Vec<Labeling> = stable.into_iter().collect();
            let text = ls
                .iter()
                .map(labeling_text)
                .collect::<Vec<_>>()
                .join("\n");
            Ok(Outcome::Done(
                json!({"count": ls.len(), "labelings": labelings_json(&ls)}),
                format!("{} stable labeling(s)\n{text}\n", ls.len()),
            ))
        }
        Command::Verify(common) => {
            let loaded = load(&common.input)?;
            let e = compile(common, &loaded)?;
            let complete = is_complete_allocator(&loaded.network, &e, common.max_equiv_vars)?;
            let reachable = instantiation_set(&e, common.max_equiv_vars)?;
            let oracle = enumerate_complete_labelings(&loaded.network, common.max_oracle_args)?;
            let general = complete
                && reachable == oracle.iter().cloned().collect::<std::collections::BTreeSet<_>>();
            let result = json!({
                "complete": complete,
                "general": general,
                "labelings": oracle.len(),
            });
            let text = format!(
                "complete: {complete}, general: {general}, labelings: {}\n",
                oracle.len()
            );
            if general {
                Ok(Outcome::Done(result, text))
            } else {
                Ok(Outcome::VerificationFailed(result, text))
            }
        }
        Command::SplitSolve { common, splitter } => {
            let loaded = load(&common.input)?;
            let blocks = parse_splitter_json(&read(splitter)?)?;
            if let Some(af) = &loaded.af {
                let violations = validate_splitter(af, &blocks);
                if !violations.is_empty() {
                    return Err(Error::Usage(format!(
                        "invalid splitter: {}",
                        violations.join("; ")
                    )));
                }
            }
            let mut results = Vec::new();
            let mut text = String::new();
            for (i, block) in blocks.iter().enumerate() {
                let mut supply = FreshSupply::for_block(i);
                let local = solve_block(block, &mut supply)?;
                text.push_str(&format!("block {i}:\n{}", allocator_text(&local)));
                results.push(json!({
                    "actual": block.actual(),
                    "variable": block.variable(),
                    "allocator": allocator_json(&local),
                }));
            }
            Ok(Outcome::Done(json!({"blocks": results}), text))
        }
        Command::Compose { common, splitter } => {
            let loaded = load(&common.input)?;
            let af = loaded.af.as_ref().ok_or_else(|| {
                Error::Usage("composition needs an attack-shaped input".into())
            })?;
            let blocks = parse_splitter_json(&read(splitter)?)?;
            let e = compose_splitter(af, &blocks)?;
            Ok(Outcome::Done(allocator_json(&e), allocator_text(&e)))
        }
        Command::Influence { common, pair } => {
            let loaded = load(&common.input)?;
            let (a, b) = pair
                .split_once(',')
                .ok_or_else(|| Error::Usage("--pair expects `a,b`".into()))?;
            let (a, b) = (a.trim(), b.trim());
            let (first, second) = pairwise_influence(&loaded.network, a, b)?;
            Ok(Outcome::Done(
                json!({"pair": [a, b], "influence": {a: first.to_string(), b: second.to_string()}}),
                format!("{a} = {first}\n{b} = {second}\n"),
            ))
        }
        Command::AritySearch(common) => {
            let loaded = load(&common.input)?;
            let mut entries = Vec::new();
            let mut text = String::new();
            for (name, strategy) in [
                ("input", OrderStrategy::Input),
                ("fvs", OrderStrategy::FvsHeuristic),
                ("exhaustive", OrderStrategy::MinArityExhaustive),
            ] {
                match order_strategy(&loaded.network, strategy) {
                    Ok(order) => {
                        let mut supply = FreshSupply::global();
                        let e = solve(&loaded.network, &order, &mut supply, !common.no_elide)?;
                        text.push_str(&format!(
                            "{name}: arity {} (order {})\n",
                            e.arity(),
                            order.join(",")
                        ));
                        entries.push(json!({
                            "strategy": name,
                            "order": order,
                            "arity": e.arity(),
                        }));
                    }
                    Err(Error::Capacity(reason)) => {
                        text.push_str(&format!("{name}: skipped ({reason})\n"));
                        entries.push(json!({"strategy": name, "skipped": reason}));
                    }
                    Err(other) => return Err(other),
                }
            }
            Ok(Outcome::Done(json!({"strategies": entries}), text))
        }
        Command::Dot(common) => {
            let loaded = load(&common.input)?;
            let af = loaded
                .af
                .as_ref()
                .ok_or_else(|| Error::Usage("DOT export needs an attack-shaped input".into()))?;
            let dot = to_dot(af);
            Ok(Outcome::Done(json!({"dot": dot}), dot))
        }
        Command::Dimacs(common) => {
            let loaded = load(&common.input)?;
            let e = compile(common, &loaded)?;
            let cnf = to_dimacs(&stable_condition(&e));
            Ok(Outcome::Done(json!({"dimacs": cnf}), cnf))
        }
    }
}

fn read(path: &Path) -> Result<String, Error> {
    std::fs::read_to_string(path)
        .map_err(|e| Error::Usage(format!("cannot read {}: {e}", path.display())))
}

fn common_of(command: &Command) -> &CommonOpts {
    match command {
        Command::Compile(c)
        | Command::Labelings(c)
        | Command::Grounded(c)
        | Command::Stable(c)
        | Command::Verify(c)
        | Command::AritySearch(c)
        | Command::Dot(c)
        | Command::Dimacs(c) => c,
        Command::SplitSolve { common, .. }
        | Command::Compose { common, .. }
        | Command::Influence { common, .. } => common,
    }
}

fn command_name(command: &Command) -> &'static str {
    match command {
        Command::Compile(_) => "compile",
        Command::Labelings(_) => "labelings",
        Command::Grounded(_) => "grounded",
        Command::Stable(_) => "stable",
        Command::Verify(_) => "verify",
        Command::SplitSolve { .. } => "split-solve",
        Command::Compose { .. } => "compose",
        Command::Influence { .. } => "influence",
        Command::AritySearch(_) => "arity-search",
        Command::Dot(_) => "dot",
        Command::Dimacs(_) => "dimacs",
    }
}

fn error_code(e: &Error) -> u8 {
    match e {
        Error::Parse { .. } | Error::Namespace(_) => 2,
        Error::Capacity(_) => 3,
        _ => 1,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let common = common_of(&cli.command);
    let name = command_name(&cli.command);
    let input = common.input.display().to_string();
    let json_mode = common.format == Format::Json;
    let started = Instant::now();

    match run(&cli.command) {
        Ok(outcome) => {
            let (result, text, code) = match outcome {
                Outcome::Done(result, text) => (result, text, ExitCode::SUCCESS),
                Outcome::VerificationFailed(result, text) => (result, text, ExitCode::from(4)),
            };
            if json_mode {
                let envelope = json!({
                    "command": name,
                    "input": input,
                    "result": result,
                    "stats": {
                        "wall_ms": started.elapsed().as_millis() as u64,
                        "seed": common.seed,
                    },
                });
                println!("{}", serde_json::to_string_pretty(&envelope).unwrap());
            } else {
                print!("{text}");
            }
            code
        }
        Err(e) => {
            let code = error_code(&e);
            if json_mode {
                let envelope = json!({
                    "command": name,
                    "input": input,
                    "error": {"code": code, "message": e.to_string()},
                });
                println!("{}", serde_json::to_string_pretty(&envelope).unwrap());
            } else {
                eprintln!("error: {e}");
            }
            ExitCode::from(code)
        }
    }
}
