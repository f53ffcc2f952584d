//! Command-line front end for the `linca` library.
//!
//! Exit codes: 0 on success, 1 when a verification suite fails, 2 on
//! invalid input (including argument parsing).

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use linca::ca::{Boundary, CaConfig};
use linca::derivative::constant_jacobian;
use linca::deviant::analyze;
use linca::gf2::BitVec;
use linca::rule::{nearest_affine, nearest_linear, Nearest, Rule};
use linca::verify::{criterion_id, criterion_names, run_all, run_criterion, CriterionReport};
use linca::window::{minimal_matrix_set_cached, ZeroWindowMode};

#[derive(Parser)]
#[command(
    name = "linca",
    version,
    about = "Characterize 1-D binary cellular automata through sets of GF(2) matrices"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Inspect a rule: truth table, ANF, classification, nearest rules
    Rule {
        #[command(subcommand)]
        action: RuleAction,
    },
    /// Evolve a state for a number of steps
    Evolve(EvolveArgs),
    /// Export the state-transition diagram of a uniform CA
    Std(StdArgs),
    /// Decompose a rule relative to its nearest linear rule
    Deviant(DeviantArgs),
    /// Print the minimal window matrix set of a rule
    Matrices {
        /// Rule number (0..=255)
        #[arg(long)]
        rule: u8,
    },
    /// Run verification suites
    Verify {
        /// Suite name or "all"
        #[arg(long, default_value = "all")]
        suite: String,
    },
}

#[derive(Subcommand)]
enum RuleAction {
    /// Print everything known about one rule
    Info {
        /// Rule number (0..=255)
        id: u8,
    },
}

#[derive(clap::Args)]
struct EvolveArgs {
    /// Rule number (0..=255)
    #[arg(long)]
    rule: u8,
    /// Initial state as a binary string, leftmost bit first
    #[arg(long)]
    state: String,
    /// Number of steps
    #[arg(long, default_value_t = 1)]
    steps: usize,
    /// Boundary condition (defaults to nb; the windowed method implies pb)
    #[arg(long)]
    boundary: Option<BoundaryArg>,
    /// Evolution method
    #[arg(long, value_enum, default_value_t = MethodArg::Direct)]
    method: MethodArg,
    /// Expected cell count (checked against the state length)
    #[arg(long)]
    n: Option<usize>,
    /// With the windowed method, print per-window products
    #[arg(long)]
    trace: bool,
}

#[derive(clap::Args)]
struct StdArgs {
    /// Rule number (0..=255)
    #[arg(long)]
    rule: u8,
    /// Cell count
    #[arg(long)]
    n: usize,
    #[arg(long, value_enum, default_value_t = BoundaryArg::Nb)]
    boundary: BoundaryArg,
    #[arg(long, value_enum, default_value_t = FormatArg::Dot)]
    format: FormatArg,
    /// Write to a file instead of stdout
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(clap::Args)]
struct DeviantArgs {
    /// Rule number (0..=255)
    #[arg(long)]
    rule: u8,
    /// Cell count
    #[arg(long)]
    n: usize,
    #[arg(long, value_enum, default_value_t = BoundaryArg::Nb)]
    boundary: BoundaryArg,
    /// Write to a file instead of stdout
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum BoundaryArg {
    Nb,
    Pb,
}

impl From<BoundaryArg> for Boundary {
    fn from(b: BoundaryArg) -> Boundary {
        match b {
            BoundaryArg::Nb => Boundary::Null,
            BoundaryArg::Pb => Boundary::Periodic,
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum MethodArg {
    Direct,
    Jacobian,
    Windowed,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum FormatArg {
    Dot,
    Json,
}

enum Failure {
    Invalid(String),
    Verify,
}

fn invalid(msg: impl Into<String>) -> Failure {
    Failure::Invalid(msg.into())
}

impl From<linca::Error> for Failure {
    fn from(e: linca::Error) -> Failure {
        Failure::Invalid(e.to_string())
    }
}

fn main() -> ExitCode {
    // Die quietly when stdout closes early (e.g. piped into `head`).
    #[cfg(unix)]
    unsafe {
        libc::signal(libc::SIGPIPE, libc::SIG_DFL);
    }
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Verify) => ExitCode::from(1),
        Err(Failure::Invalid(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}

fn run(cli: Cli) -> Result<(), Failure> {
    match cli.command {
        Command::Rule {
            action: RuleAction::Info { id },
        } => rule_info(Rule::new(id)),
        Command::Evolve(args) => evolve(args),
        Command::Std(args) => std_export(args),
        Command::Deviant(args) => deviant(args),
        Command::Matrices { rule } => matrices(Rule::new(rule)),
        Command::Verify { suite } => verify(&suite),
    }
}

fn witness_list(n: &Nearest) -> String {
    n.witnesses
        .iter()
        .map(|r| r.id().to_string())
        .collect::<Vec<_>>()
        .join(", ")
}

fn rule_info(rule: Rule) -> Result<(), Failure> {
    println!("Rule {}", rule.id());
    println!(
        "  binary: {} (output for input 111 first)",
        rule.table_string()
    );
    let table: Vec<String> = (0..8u8)
        .map(|v| format!("{v:03b}\u{2192}{}", rule.truth_bit(v) as u8))
        .collect();
    println!("  truth table: {}", table.join(" "));
    println!("  anf: {}", rule.anf_string());
    println!("  degree: {}", rule.degree());
    println!("  parity: {}", if rule.is_odd() { "odd" } else { "even" });
    println!("  linear: {}", if rule.is_linear() { "yes" } else { "no" });
    println!("  affine: {}", if rule.is_affine() { "yes" } else { "no" });
    let lin = nearest_linear(rule);
    println!(
        "  nearest linear: {} (distance {})",
        witness_list(&lin),
        lin.distance
    );
    let aff = nearest_affine(rule);
    println!(
        "  nearest affine: {} (distance {})",
        witness_list(&aff),
        aff.distance
    );
    Ok(())
}

fn evolve(args: EvolveArgs) -> Result<(), Failure> {
    let state: BitVec = args.state.parse()?;
    if let Some(n) = args.n {
        if n != state.len() {
            return Err(invalid(format!(
                "state has {} bits but --n is {n}",
                state.len()
            )));
        }
    }
    let rule = Rule::new(args.rule);
    let boundary = match (args.method, args.boundary) {
        (MethodArg::Windowed, Some(BoundaryArg::Nb)) => {
            return Err(invalid(
                "the windowed method works on periodic boundaries only",
            ))
        }
        (MethodArg::Windowed, _) => Boundary::Periodic,
        (_, b) => b.unwrap_or(BoundaryArg::Nb).into(),
    };
    if args.trace && args.method != MethodArg::Windowed {
        return Err(invalid("--trace applies to the windowed method only"));
    }

    let ca = CaConfig::uniform(rule, state.len(), boundary)?;
    println!("{state}");
    match args.method {
        MethodArg::Direct => {
            let mut s = state;
            for _ in 0..args.steps {
                s = ca.step(&s)?;
                println!("{s}");
            }
        }
        MethodArg::Jacobian => {
            let j = constant_jacobian(&ca).ok_or_else(|| {
                invalid(format!(
                    "the jacobian method needs an affine rule; rule {rule} is not affine"
                ))
            })?;
            // Affine step: J*s xor the image of the zero state.
            let offset = ca.step(&BitVec::zeros(state.len()))?;
            let mut s = state;
            for _ in 0..args.steps {
                s = j.mul_vec(&s)?.xor(&offset);
                println!("{s}");
            }
        }
        MethodArg::Windowed => {
            let set = minimal_matrix_set_cached(rule);
            let mut s = state;
            for _ in 0..args.steps {
                let (next, steps) = set.evolve_trace(&s)?;
                if args.trace {
                    for w in &steps {
                        println!(
                            "# window {} \u{2192} {} (cells {}-{})",
                            w.window,
                            w.product,
                            w.cells[0] + 1,
                            w.cells[1] + 1
                        );
                    }
                }
                s = next;
                println!("{s}");
            }
        }
    }
    Ok(())
}

fn emit(output: Option<PathBuf>, text: &str) -> Result<(), Failure> {
    match output {
        Some(path) => fs::write(&path, text)
            .map_err(|e| invalid(format!("cannot write {}: {e}", path.display()))),
        None => {
            println!("{text}");
            Ok(())
        }
    }
}

fn std_export(args: StdArgs) -> Result<(), Failure> {
    let ca = CaConfig::uniform(Rule::new(args.rule), args.n, args.boundary.into())?;
    let graph = ca.build_std()?;
    let text = match args.format {
        FormatArg::Dot => graph.to_dot(),
        FormatArg::Json => {
            serde_json::to_string_pretty(&graph.to_json()).expect("graph JSON always serializes")
        }
    };
    emit(args.output, &text)
}

fn deviant(args: DeviantArgs) -> Result<(), Failure> {
    let report = analyze(Rule::new(args.rule), args.n, args.boundary.into())?;
    let text =
        serde_json::to_string_pretty(&report.to_json()).expect("report JSON always serializes");
    emit(args.output, &text)
}

fn matrices(rule: Rule) -> Result<(), Failure> {
    let set = minimal_matrix_set_cached(rule);
    let zero_note = match set.zero_mode() {
        ZeroWindowMode::ZeroMatrix => "any matrix, output 0000",
        ZeroWindowMode::Complement => "complement mode, output 1111",
    };
    println!(
        "rule {} ({}): minimal set of {} matrices (zero window: {zero_note})",
        rule.id(),
        rule.anf_string(),
        set.members().len()
    );
    for (i, m) in set.members().iter().enumerate() {
        println!("M{}", i + 1);
        println!("{m}");
    }
    println!("assignment:");
    for w in 0..16u64 {
        let window = BitVec::new(4, w);
        let label = match set.assignment(w) {
            Some(i) => format!("M{}", i + 1),
            None => "C".to_string(),
        };
        println!(
            "  {window} \u{2192} {} via {label}",
            set.window_result(&window)
        );
    }
    Ok(())
}

fn print_report(report: &CriterionReport) {
    println!(
        "criterion {:2} ({}): {} \u{2014} {}",
        report.id,
        report.name,
        if report.passed { "PASS" } else { "FAIL" },
        report.detail
    );
}

fn verify(suite: &str) -> Result<(), Failure> {
    let reports = if suite == "all" {
        run_all()
    } else {
        let id = criterion_id(suite).ok_or_else(|| {
            invalid(format!(
                "unknown suite {suite:?}; available: all, {}",
                criterion_names().join(", ")
            ))
        })?;
        vec![run_criterion(id)]
    };
    let passed = reports.iter().filter(|r| r.passed).count();
    for report in &reports {
        print_report(report);
    }
    println!("passed {passed}/{}", reports.len());
    if passed == reports.len() {
        Ok(())
    } else {
        Err(Failure::Verify)
    }
}
