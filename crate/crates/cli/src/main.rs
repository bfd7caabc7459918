use std::fs;
use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use epsilon_core::ars::{check_klop_theorem, ArsError, FiniteArs, Node};
use epsilon_core::check::{check_corpus, check_formula, shrink, CheckConfig, CorpusReport};
use epsilon_core::exec::Exec;
use epsilon_core::gen::{corpus, GenConfig};
use epsilon_core::strategy::{
    derivation_length_stats, nested_existentials, normalize_with, trace_json, trace_text, Fuse,
    Strategy, StrategyError,
};
use epsilon_core::syntax::Formula;
use epsilon_core::textio::parse_formula;

const EXIT_INPUT: u8 = 1;
const EXIT_FUSE: u8 = 2;
const EXIT_VIOLATION: u8 = 3;
const EXIT_CONDITION: u8 = 4;
const EXIT_FALSIFIED: u8 = 5;

/// Trace lines shown when a fuse blows.
const PREFIX_LINES: usize = 20;

#[derive(Parser)]
#[command(
    name = "epsilon",
    version,
    about = "Quantifier elimination with Hilbert's epsilon operator"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Eliminate all quantifiers from one formula.
    Normalize(NormalizeArgs),
    /// Fuzz random formulas across all strategies and the full reduction graph.
    CheckConfluence(ConfluenceArgs),
    /// Check the well-foundedness theorem's conditions on a finite system.
    ArsCheck(ArsArgs),
    /// Innermost and outermost derivation lengths on ∃x₁…∃xₙ. R(x₁,…,xₙ).
    Stats(StatsArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum StrategyName {
    Innermost,
    Outermost,
    Random,
    Parallel,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Args)]
#[group(required = true, multiple = false)]
struct Input {
    /// Formula given inline.
    #[arg(short = 'e', long = "expr")]
    expr: Option<String>,
    /// Read the formula from a file.
    #[arg(short = 'f', long = "file")]
    file: Option<PathBuf>,
}

#[derive(Args)]
struct NormalizeArgs {
    #[command(flatten)]
    input: Input,
    #[arg(long, value_enum, default_value = "innermost")]
    strategy: StrategyName,
    /// Required with `--strategy random`.
    #[arg(long)]
    seed: Option<u64>,
    /// Maximum number of steps.
    #[arg(long, default_value_t = Fuse::default().max_steps)]
    fuse: usize,
    /// Maximum number of constructed formula and term nodes.
    #[arg(long, default_value_t = Fuse::default().max_nodes)]
    node_fuse: u64,
    #[arg(long)]
    trace: bool,
    #[arg(long, value_enum, default_value = "text")]
    format: Format,
}

#[derive(Args)]
struct ConfluenceArgs {
    #[arg(long, default_value_t = 1000)]
    count: usize,
    /// Upper bound on generated tree size.
    #[arg(long, default_value_t = GenConfig::default().max_size)]
    size: usize,
    #[arg(long, default_value_t = 42)]
    seed: u64,
    #[arg(long, default_value_t = GenConfig::default().max_quantifiers)]
    max_quantifiers: usize,
    #[arg(long, default_value_t = GenConfig::default().max_depth)]
    max_depth: usize,
    #[arg(long, default_value_t = GenConfig::default().quantifier_prob)]
    quantifier_prob: f64,
    #[arg(long, default_value_t = GenConfig::default().vacuous_prob)]
    vacuous_prob: f64,
    /// Reduction graphs with more nodes are skipped.
    #[arg(long, default_value_t = CheckConfig::default().graph_bound)]
    graph_bound: usize,
    #[arg(long, default_value_t = Fuse::default().max_steps)]
    fuse: usize,
    #[arg(long, default_value_t = Fuse::default().max_nodes)]
    node_fuse: u64,
    /// Also run the theorem checker on every exported reduction graph.
    #[arg(long)]
    bridge: bool,
    /// Stay on one thread.
    #[arg(long)]
    sequential: bool,
    #[arg(long, value_enum, default_value = "text")]
    format: Format,
}

#[derive(Args)]
struct ArsArgs {
    /// System file: node count, then `0 u v` or `1 u v` per edge.
    file: PathBuf,
    /// Source node a.
    #[arg(long)]
    source: Node,
    /// Normal form a′.
    #[arg(long)]
    nf: Node,
    #[arg(long, value_enum, default_value = "text")]
    format: Format,
}

#[derive(Args)]
struct StatsArgs {
    /// Largest n.
    #[arg(long, default_value_t = 8)]
    max_n: usize,
    #[arg(long, value_enum, default_value = "text")]
    format: Format,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(EXIT_INPUT)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    let code = match cli.command {
        Command::Normalize(a) => normalize(a),
        Command::CheckConfluence(a) => check_confluence(a),
        Command::ArsCheck(a) => ars_check(a),
        Command::Stats(a) => stats(a),
    };
    match code {
        Ok(()) => ExitCode::SUCCESS,
        Err(c) => ExitCode::from(c),
    }
}

fn fail(msg: impl std::fmt::Display) -> u8 {
    eprintln!("error: {msg}");
    EXIT_INPUT
}

fn read_formula(input: &Input) -> Result<Formula, u8> {
    let text = match (&input.expr, &input.file) {
        (Some(e), _) => e.clone(),
        (None, Some(path)) => {
            fs::read_to_string(path).map_err(|e| fail(format!("{}: {e}", path.display())))?
        }
        (None, None) => unreachable!("clap enforces one input"),
    };
    parse_formula(text.trim()).map_err(fail)
}

fn print_json(v: &serde_json::Value) {
    // A closed pipe is not worth a panic.
    let _ = writeln!(
        io::stdout(),
        "{}",
        serde_json::to_string_pretty(v).expect("values are plain JSON")
    );
}

fn normalize(a: NormalizeArgs) -> Result<(), u8> {
    let strategy = match (a.strategy, a.seed) {
        (StrategyName::Innermost, _) => Strategy::LeftmostInnermost,
        (StrategyName::Outermost, _) => Strategy::LeftmostOutermost,
        (StrategyName::Parallel, _) => Strategy::ParallelOutermost,
        (StrategyName::Random, Some(s)) => Strategy::Random(s),
        (StrategyName::Random, None) => return Err(fail("--strategy random needs --seed")),
    };
    let f = read_formula(&a.input)?;
    let fuse = Fuse {
        max_steps: a.fuse,
        max_nodes: a.node_fuse,
    };
    match normalize_with(&f, strategy, fuse) {
        Ok(t) => {
            if a.format == Format::Json {
                print_json(&trace_json(&t));
            } else {
                if a.trace {
                    print!("{}", trace_text(&t));
                }
                println!("{}", t.final_formula);
                println!("steps: {}", t.step_count());
            }
            Ok(())
        }
        Err(StrategyError::FuseExceeded {
            partial,
            steps,
            nodes,
            ..
        }) => {
            eprintln!("fuse exceeded after {steps} steps and {nodes} nodes ({strategy}); the rule system terminates on every formula, so this only means the limit is too small");
            eprintln!("formula: {f}");
            let text = trace_text(&partial);
            for line in text.lines().take(PREFIX_LINES) {
                eprintln!("{line}");
            }
            if text.lines().count() > PREFIX_LINES {
                eprintln!("...");
            }
            Err(EXIT_FUSE)
        }
        Err(e) => Err(fail(e)),
    }
}

fn check_confluence(a: ConfluenceArgs) -> Result<(), u8> {
    let gen = GenConfig {
        max_size: a.size,
        max_quantifiers: a.max_quantifiers,
        max_depth: a.max_depth,
        quantifier_prob: a.quantifier_prob,
        vacuous_prob: a.vacuous_prob,
        ..GenConfig::default()
    };
    for (name, p) in [
        ("quantifier-prob", a.quantifier_prob),
        ("vacuous-prob", a.vacuous_prob),
    ] {
        if !(0.0..=1.0).contains(&p) {
            return Err(fail(format!("--{name} must lie in [0, 1]")));
        }
    }
    let cfg = CheckConfig {
        seed: a.seed,
        fuse: Fuse {
            max_steps: a.fuse,
            max_nodes: a.node_fuse,
        },
        graph_bound: a.graph_bound,
        bridge: a.bridge,
    };
    let exec = if a.sequential {
        Exec::Sequential
    } else {
        Exec::default()
    };
    let formulas = corpus(a.seed, a.count, &gen, exec);
    let report = check_corpus(&formulas, &cfg, exec);
    let bad = report.reports.iter().position(|r| !r.ok());
    let minimized = bad.map(|i| shrink(&formulas[i], |g| !check_formula(g, &cfg).ok()));

    if a.format == Format::Json {
        let mut v = serde_json::to_value(&report).expect("report serializes");
        if let (Some(i), Some(m)) = (bad, &minimized) {
            v["counterexample"] = json!({ "index": i, "minimized": m.to_string() });
        }
        print_json(&v);
    } else {
        print_summary(&report);
        if let (Some(i), Some(m)) = (bad, &minimized) {
            println!();
            println!("first violation: formula {i}: {}", formulas[i]);
            for v in &report.reports[i].violations {
                println!("  {v:?}");
            }
            println!("minimized: {m}");
            for v in check_formula(m, &cfg).violations {
                println!("  {v:?}");
            }
        }
    }
    if bad.is_some() {
        Err(EXIT_VIOLATION)
    } else {
        Ok(())
    }
}

fn print_summary(report: &CorpusReport) {
    let s = &report.summary;
    println!("formulas            {}", s.formulas);
    let hist: Vec<String> = s
        .quantifier_histogram
        .iter()
        .map(usize::to_string)
        .collect();
    println!("quantifiers 0..9+   {}", hist.join(" "));
    println!("graphs checked      {}", s.graphs_checked);
    println!("graphs skipped      {}", s.graphs_skipped);
    println!("largest graph       {}", s.max_graph_nodes);
    println!();
    println!("{:<28} {:>10}", "strategy", "steps");
    for (name, steps) in &s.total_steps {
        println!("{name:<28} {steps:>10}");
    }
    println!();
    println!("violations          {}", s.violating_formulas);
}

fn ars_check(a: ArsArgs) -> Result<(), u8> {
    let text =
        fs::read_to_string(&a.file).map_err(|e| fail(format!("{}: {e}", a.file.display())))?;
    let sys = FiniteArs::parse(&text).map_err(fail)?;
    let report = check_klop_theorem(&sys, a.source, a.nf).map_err(fail)?;
    if a.format == Format::Json {
        print_json(&serde_json::to_value(&report).expect("report serializes"));
    } else {
        print!("{report}");
    }
    if !report.is_consistent() {
        let err = ArsError::TheoremFalsified {
            system: sys.to_text(),
            a: a.source,
            a_prime: a.nf,
        };
        eprintln!("error: {err}");
        return Err(EXIT_FALSIFIED);
    }
    if report.all_conditions() {
        Ok(())
    } else {
        Err(EXIT_CONDITION)
    }
}

fn stats(a: StatsArgs) -> Result<(), u8> {
    let rows =
        derivation_length_stats(nested_existentials, a.max_n, Fuse::default()).map_err(fail)?;
    if a.format == Format::Json {
        // Outermost counts outgrow every JSON number type, so they go out as strings.
        let rows: Vec<_> = rows
            .iter()
            .map(|r| json!({ "n": r.n, "strategy": r.strategy.to_string(), "steps": r.steps.to_string(), "epsDepth": r.eps_depth }))
            .collect();
        print_json(&json!(rows));
    } else {
        println!(
            "{:>3} {:<10} {:>24} {:>6}",
            "n", "strategy", "steps", "depth"
        );
        for r in rows {
            println!(
                "{:>3} {:<10} {:>24} {:>6}",
                r.n,
                r.strategy.to_string(),
                r.steps.to_string(),
                r.eps_depth
            );
        }
    }
    Ok(())
}
