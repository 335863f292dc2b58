use std::collections::BTreeSet;
use std::ffi::OsString;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use nested_backdoor::dimacs::{emit_dimacs, parse_dimacs};
use nested_backdoor::families::{generate_family_by_name, seeded_random_formula};
use nested_backdoor::solve::{obtain_backdoor, witnesses, DEFAULT_BACKDOOR_MAX};
use nested_backdoor::{
    is_nested, solve, CnfFormula, SearchMode, SolveOptions, SolveReport, Status, Variable, Witness,
};
use serde_json::json;

const SUBCOMMANDS: &[&str] = &[
    "solve",
    "check-nested",
    "find-backdoor",
    "gen",
    "help",
    "-h",
    "--help",
    "-V",
    "--version",
];

#[derive(Parser)]
#[command(
    name = "nested-backdoor-sat",
    version,
    about = "SAT and model counting via strong backdoors to nested formulas"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Decide satisfiability, optionally counting models (the default command)
    Solve(SolveArgs),
    /// Report whether the formula is nested
    CheckNested(CheckArgs),
    /// Search for a strong backdoor set to the nested class
    FindBackdoor(SearchArgs),
    /// Print a generated formula in DIMACS format
    Gen(GenArgs),
}

#[derive(Args)]
struct SearchArgs {
    /// DIMACS CNF input
    file: PathBuf,
    /// Largest backdoor size to search for
    #[arg(long, value_name = "K", default_value_t = DEFAULT_BACKDOOR_MAX)]
    backdoor_max: usize,
    /// Use exhaustive search for a smallest backdoor
    #[arg(long, conflicts_with = "approx")]
    exact: bool,
    /// Use the approximation driver (size up to 2^K - 1)
    #[arg(long)]
    approx: bool,
    #[arg(long)]
    json: bool,
}

impl SearchArgs {
    fn mode(&self) -> SearchMode {
        if self.exact {
            SearchMode::Exact
        } else if self.approx {
            SearchMode::Approx
        } else {
            SearchMode::Branching
        }
    }
}

#[derive(Args)]
struct SolveArgs {
    #[command(flatten)]
    search: SearchArgs,
    /// Compute the exact number of models
    #[arg(long)]
    count: bool,
    /// Use this strong backdoor, e.g. "1 5 9"
    #[arg(long, value_name = "IDS", allow_hyphen_values = true)]
    backdoor: Option<String>,
    /// Only report whether the formula is nested
    #[arg(long)]
    is_nested: bool,
    /// Include nesting evidence or an obstruction in the report
    #[arg(long)]
    emit_witness: bool,
}

#[derive(Args)]
struct CheckArgs {
    file: PathBuf,
    #[arg(long)]
    emit_witness: bool,
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct GenArgs {
    /// grid, grid_plus_x, disjoint_union or random
    family: String,
    /// Family size; the number of variables for random
    n: usize,
    /// Number of clauses (random only)
    #[arg(long, default_value_t = 8)]
    clauses: usize,
    /// Maximum clause length (random only)
    #[arg(long, default_value_t = 3)]
    max_len: usize,
    /// Draw a nested formula (random only)
    #[arg(long)]
    nested: bool,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

fn main() -> ExitCode {
    let mut argv: Vec<OsString> = std::env::args_os().collect();
    if let Some(first) = argv.get(1) {
        if !SUBCOMMANDS.iter().any(|s| first == *s) {
            argv.insert(1, "solve".into());
        }
    }
    let cli = Cli::parse_from(argv);
    match run(cli.command) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

fn run(command: Command) -> Result<u8> {
    match command {
        Command::Solve(args) if args.is_nested => check_nested(&CheckArgs {
            file: args.search.file,
            emit_witness: args.emit_witness,
            json: args.search.json,
        }),
        Command::Solve(args) => run_solve(&args),
        Command::CheckNested(args) => check_nested(&args),
        Command::FindBackdoor(args) => find_backdoor(&args),
        Command::Gen(args) => {
            print!("{}", emit_dimacs(&generate(&args)?));
            Ok(0)
        }
    }
}

fn read_formula(path: &Path) -> Result<CnfFormula> {
    let text =
        fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))?;
    parse_dimacs(&text).with_context(|| format!("{}", path.display()))
}

fn parse_backdoor(text: &str) -> Result<BTreeSet<Variable>> {
    text.split(|c: char| c.is_whitespace() || c == ',')
        .filter(|t| !t.is_empty())
        .map(|t| match t.parse::<u32>() {
            Ok(v) if v > 0 => Ok(Variable(v)),
            _ => bail!("invalid variable `{t}` in --backdoor"),
        })
        .collect()
}

fn generate(args: &GenArgs) -> Result<CnfFormula> {
    if args.family == "random" {
        let vars = u32::try_from(args.n).context("too many variables")?;
        if vars == 0 {
            bail!("random formulas need at least one variable");
        }
        return Ok(seeded_random_formula(
            args.seed,
            vars,
            args.clauses,
            args.max_len,
            args.nested,
        ));
    }
    Ok(generate_family_by_name(&args.family, args.n)?)
}

fn run_solve(args: &SolveArgs) -> Result<u8> {
    let f = read_formula(&args.search.file)?;
    let options = SolveOptions {
        count: args.count,
        backdoor: args.backdoor.as_deref().map(parse_backdoor).transpose()?,
        backdoor_max: args.search.backdoor_max,
        mode: args.search.mode(),
        emit_witness: args.emit_witness,
    };
    let report = solve(&f, &options)?;
    if args.search.json {
        println!("{}", serde_json::to_string_pretty(&report)?);
    } else {
        print_report(&report, options.backdoor_max);
    }
    Ok(exit_code(report.status))
}

fn exit_code(status: Status) -> u8 {
    match status {
        Status::BudgetExceeded => 1,
        Status::Sat | Status::Unsat => 0,
    }
}

fn print_report(report: &SolveReport, backdoor_max: usize) {
    match report.status {
        Status::Sat => println!("s SATISFIABLE"),
        Status::Unsat => println!("s UNSATISFIABLE"),
        Status::BudgetExceeded => {
            println!("s UNKNOWN");
            println!("c budget exceeded: no strong backdoor of size <= {backdoor_max} found");
        }
    }
    if let Some(b) = &report.backdoor {
        println!("c backdoor: {}", join_ids(b));
    }
    println!("c mode: {}", report.mode);
    if let Some(n) = &report.count {
        println!("c count: {n}");
    }
    for w in &report.witnesses {
        print_witness(w);
    }
    println!("c time: {:.1} ms", report.timings.total_ms);
}

fn join_ids(ids: &[u32]) -> String {
    if ids.is_empty() {
        return "(empty)".to_string();
    }
    ids.iter().map(u32::to_string).collect::<Vec<_>>().join(" ")
}

fn print_witness(w: &Witness) {
    match w {
        Witness::Nested {
            decomposition_width,
            order,
        } => {
            println!("c witness: nested, incidence treewidth <= {decomposition_width}");
            if let Some(order) = order {
                println!("c nesting order: {}", join_ids(order));
            }
        }
        Witness::Obstruction { record, .. } => {
            for line in record.lines() {
                println!("c witness: {line}");
            }
        }
        Witness::Kuratowski { edges } => {
            let parts: Vec<String> = edges.iter().map(|(u, v)| format!("{u}-{v}")).collect();
            println!("c witness: kuratowski subgraph {}", parts.join(" "));
        }
    }
}

fn check_nested(args: &CheckArgs) -> Result<u8> {
    let f = read_formula(&args.file)?;
    let nested = is_nested(&f);
    let ws = if args.emit_witness {
        witnesses(&f)?
    } else {
        Vec::new()
    };
    if args.json {
        let out = json!({ "nested": nested, "witnesses": ws });
        println!("{}", serde_json::to_string_pretty(&out)?);
    } else {
        println!("{}", if nested { "nested" } else { "not nested" });
        ws.iter().for_each(print_witness);
    }
    Ok(0)
}

fn find_backdoor(args: &SearchArgs) -> Result<u8> {
    let f = read_formula(&args.file)?;
    let options = SolveOptions {
        backdoor_max: args.backdoor_max,
        mode: args.mode(),
        ..SolveOptions::default()
    };
    let found = obtain_backdoor(&f, &options)?;
    if args.json {
        let out = match &found {
            Some(r) => json!({
                "status": "found",
                "backdoor": r.ids(),
                "bound": r.bound_claim,
                "mode": mode_name(options.mode),
            }),
            None => json!({
                "status": "budget-exceeded",
                "bound": args.backdoor_max,
                "mode": mode_name(options.mode),
            }),
        };
        println!("{}", serde_json::to_string_pretty(&out)?);
    } else {
        match &found {
            Some(r) => println!("backdoor: {}", join_ids(&r.ids())),
            None => println!(
                "budget exceeded: no strong backdoor of size <= {} found",
                args.backdoor_max
            ),
        }
    }
    Ok(if found.is_some() { 0 } else { 1 })
}

fn mode_name(mode: SearchMode) -> &'static str {
    match mode {
        SearchMode::Branching => "branching",
        SearchMode::Exact => "exact",
        SearchMode::Approx => "approx",
    }
}
