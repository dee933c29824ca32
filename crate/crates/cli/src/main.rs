use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use tmreduce::cooklevin::{decode, reduce, report_counts, verify_tableau, ReductionOutput, Tableau};
use tmreduce::dpll::solve;
use tmreduce::formats::{
    emit_derivation, emit_dimacs_annotated, emit_presentation, emit_solution, emit_varmap, parse_dimacs,
    parse_machine, parse_presentation,
};
use tmreduce::machine::{run, split_instructions, Configuration, Machine, MachineError, Verdict};
use tmreduce::postmarkov::{
    build_calculus, divides_q0v, equivalent_within, phi, Bounds, EquivalenceVerdict, Presentation, Word,
};

/// Process exit codes, disjoint by cause.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum ExitStatus {
    Positive = 0,
    Negative = 1,
    Input = 3,
}

impl ExitStatus {
    fn verdict(positive: bool) -> ExitStatus {
        if positive {
            ExitStatus::Positive
        } else {
            ExitStatus::Negative
        }
    }
}

/// Bad files, bad words, violated preconditions on the inputs.
struct InputError(String);

impl<E: std::fmt::Display> From<E> for InputError {
    fn from(e: E) -> Self {
        InputError(e.to_string())
    }
}

type CmdResult = Result<ExitStatus, InputError>;

#[derive(Parser)]
#[command(name = "tmreduce", version, about = "Turing machines to SAT and to semigroup word problems")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a deterministic machine and print its trace.
    Simulate {
        machine: PathBuf,
        /// Input word: one symbol per character, or space-separated names.
        input: String,
        #[arg(long, default_value_t = 10_000)]
        max_steps: u64,
    },
    /// Write the CNF formula of a time-bounded run, plus its variable map.
    Reduce {
        machine: PathBuf,
        input: String,
        #[command(flatten)]
        bound: StepBound,
        #[arg(long)]
        out: PathBuf,
        #[arg(long)]
        varmap: PathBuf,
    },
    /// Solve a DIMACS file.
    Solve { dimacs: PathBuf },
    /// Reduce, solve, decode and verify in one go.
    Prove {
        machine: PathBuf,
        input: String,
        #[command(flatten)]
        bound: StepBound,
    },
    /// Associative calculus of a machine.
    #[command(subcommand)]
    Semigroup(SemigroupCommand),
}

#[derive(Args)]
struct StepBound {
    /// Step bound; the tableau has p+1 rows and 2p+2 cells.
    #[arg(long, value_parser = clap::value_parser!(u32).range(1..))]
    p: u32,
}

#[derive(Args)]
struct SearchBounds {
    /// Longest word the search may visit [default: longer word + 4].
    #[arg(long)]
    max_len: Option<usize>,
    #[arg(long, default_value_t = Bounds::DEFAULT_MAX_VISITED)]
    max_visited: usize,
}

impl SearchBounds {
    fn resolve(&self, a: &Word, b: &Word) -> Bounds {
        let default = Bounds::for_words(a, b);
        Bounds {
            max_len: self.max_len.unwrap_or(default.max_len),
            max_visited: self.max_visited,
        }
    }
}

#[derive(Subcommand)]
enum SemigroupCommand {
    /// Write the presentation of a machine's calculus.
    Build {
        machine: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
    /// Search for a derivation between two words.
    Equiv {
        presentation: PathBuf,
        w1: String,
        w2: String,
        #[command(flatten)]
        bounds: SearchBounds,
    },
    /// Search for `a v == q0 v`.
    Divides {
        presentation: PathBuf,
        a: String,
        #[command(flatten)]
        bounds: SearchBounds,
    },
    /// Number of the word `q1 0 1^x v`.
    Phi { presentation: PathBuf, x: usize },
}

fn read(path: &Path) -> Result<String, InputError> {
    fs::read_to_string(path).map_err(|e| InputError(format!("{}: {e}", path.display())))
}

fn write(path: &Path, text: &str) -> Result<(), InputError> {
    fs::write(path, text).map_err(|e| InputError(format!("{}: {e}", path.display())))
}

fn load_machine(path: &Path) -> Result<Machine, InputError> {
    parse_machine(&read(path)?).map_err(|e| InputError(format!("{}:{e}", path.display())))
}

fn load_presentation(path: &Path) -> Result<Presentation, InputError> {
    parse_presentation(&read(path)?).map_err(|e| InputError(format!("{}:{e}", path.display())))
}

/// Cells of the window separated by spaces, the scanned one in brackets.
fn render_tape(m: &Machine, c: &Configuration, lo: i64, hi: i64) -> String {
    (lo..=hi)
        .map(|j| {
            let name = m.symbol_name(c.read(j));
            if j == c.head {
                format!("[{name}]")
            } else {
                name.to_owned()
            }
        })
        .collect::<Vec<_>>()
        .join(" ")
}

fn configuration_line(m: &Machine, c: &Configuration) -> String {
    let (lo, hi) = c.window();
    format!(
        "t={} state={} head={} cells {lo}..{hi}: {}",
        c.time,
        m.state_name(c.state),
        c.head,
        render_tape(m, c, lo, hi)
    )
}

fn simulate(machine: &Path, input: &str, max_steps: u64) -> CmdResult {
    let m = load_machine(machine)?;
    let x = m.parse_input(input)?;
    let r = match run(&m, &x, max_steps) {
        Ok(r) => r,
        Err(e @ MachineError::UndefinedTransition { .. }) => {
            eprintln!("machine is stuck: {e}");
            return Ok(ExitStatus::Negative);
        }
        Err(e) => return Err(e.into()),
    };
    for c in &r.trace {
        println!("{}", configuration_line(&m, c));
    }
    println!(
        "{}",
        match r.verdict {
            Verdict::Accepted => "accepted",
            Verdict::Rejected => "rejected",
            Verdict::Timeout => "timeout",
        }
    );
    Ok(ExitStatus::verdict(r.verdict == Verdict::Accepted))
}

fn reduction(machine: &Path, input: &str, p: u32) -> Result<ReductionOutput, InputError> {
    let m = load_machine(machine)?;
    let x = m.parse_input(input)?;
    Ok(reduce(&m, &x, p)?)
}

fn cmd_reduce(machine: &Path, input: &str, p: u32, out: &Path, varmap: &Path) -> CmdResult {
    let r = reduction(machine, input, p)?;
    write(out, &emit_dimacs_annotated(&r.formula, &r.group_comments()))?;
    write(varmap, &emit_varmap(&r.catalog))?;
    println!("{}", report_counts(&r));
    Ok(ExitStatus::Positive)
}

fn cmd_solve(path: &Path) -> CmdResult {
    let f = parse_dimacs(&read(path)?).map_err(|e| InputError(format!("{}:{e}", path.display())))?;
    let result = solve(&f);
    print!("{}", emit_solution(result.model()));
    let s = result.stats();
    eprintln!(
        "decisions {} propagations {} conflicts {}",
        s.decisions, s.propagations, s.conflicts
    );
    Ok(ExitStatus::verdict(result.is_sat()))
}

fn render_tableau(t: &Tableau, m: &Machine) -> String {
    let (lo, hi) = (-(t.p as i64), t.p as i64 + 1);
    let mut out = String::new();
    let _ = writeln!(out, "cells {lo}..{hi}");
    for i in 0..t.rows.len() {
        let c = t.configuration(i);
        let _ = writeln!(out, "{i:>3} {:<8} {}", m.state_name(c.state), render_tape(m, &c, lo, hi));
    }
    out
}

fn cmd_prove(machine: &Path, input: &str, p: u32) -> CmdResult {
    let r = reduction(machine, input, p)?;
    let result = solve(&r.formula);
    let Some(model) = result.model() else {
        println!("UNSATISFIABLE: no accepting computation within {p} steps");
        return Ok(ExitStatus::Negative);
    };
    let tableau = decode(model, &r).map_err(|e| InputError(format!("solver model does not decode: {e}")))?;
    verify_tableau(&tableau, &r.machine, &r.input)
        .map_err(|e| InputError(format!("decoded tableau rejected by the verifier: {e}")))?;
    print!("{}", render_tableau(&tableau, &r.machine));
    println!("SATISFIABLE: accepting computation verified");
    Ok(ExitStatus::Positive)
}

fn print_search(verdict: &EquivalenceVerdict, p: &Presentation) -> ExitStatus {
    match verdict {
        EquivalenceVerdict::Equivalent(d) => {
            print!("{}", emit_derivation(d, p));
            ExitStatus::Positive
        }
        EquivalenceVerdict::NotFoundWithinBounds { visited } => {
            println!("NOT-FOUND within bounds ({visited} words visited)");
            ExitStatus::Negative
        }
    }
}

fn semigroup(cmd: &SemigroupCommand) -> CmdResult {
    match cmd {
        SemigroupCommand::Build { machine, out } => {
            let mut m = load_machine(machine)?;
            if !m.is_split() {
                eprintln!("splitting combined print-and-move instructions");
                m = split_instructions(&m);
            }
            let p = build_calculus(&m)?;
            write(out, &emit_presentation(&p))?;
            println!("{} generators, {} relations", p.generators().len(), p.relations().len());
            Ok(ExitStatus::Positive)
        }
        SemigroupCommand::Equiv { presentation, w1, w2, bounds } => {
            let p = load_presentation(presentation)?;
            let (a, b) = (p.parse_word(w1)?, p.parse_word(w2)?);
            Ok(print_search(&equivalent_within(&a, &b, &p, bounds.resolve(&a, &b)), &p))
        }
        SemigroupCommand::Divides { presentation, a, bounds } => {
            let p = load_presentation(presentation)?;
            let a = p.parse_word(a)?;
            let with_v = a.concat(&p.parse_word("v")?);
            let target = p.parse_word("q0 v")?;
            let verdict = divides_q0v(&a, &p, bounds.resolve(&with_v, &target))?;
            Ok(print_search(&verdict, &p))
        }
        SemigroupCommand::Phi { presentation, x } => {
            let p = load_presentation(presentation)?;
            println!("{}", phi(*x, &p)?);
            Ok(ExitStatus::Positive)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Simulate { machine, input, max_steps } => simulate(machine, input, *max_steps),
        Command::Reduce { machine, input, bound, out, varmap } => cmd_reduce(machine, input, bound.p, out, varmap),
        Command::Solve { dimacs } => cmd_solve(dimacs),
        Command::Prove { machine, input, bound } => cmd_prove(machine, input, bound.p),
        Command::Semigroup(cmd) => semigroup(cmd),
    };
    let status = result.unwrap_or_else(|InputError(msg)| {
        eprintln!("error: {msg}");
        ExitStatus::Input
    });
    ExitCode::from(status as u8)
}
