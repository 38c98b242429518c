//! The `rwka` command-line tool.
//!
//! Exit codes: 0 for accept / pass / no mismatches, 1 for reject / loop /
//! fail / mismatches, 2 for usage and input errors.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};

use anyhow::{anyhow, bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use indexmap::IndexSet;

use rwka_core::check::{check_reversibility_mfa, check_reversibility_wk, check_strong_reversibility};
use rwka_core::engine::{MfaEngine, WkEngine};
use rwka_core::format::serialize_machine;
use rwka_core::oracle::{differential_compare_par, enumerate_block_strings, enumerate_words};
use rwka_core::symbol::render_word;
use rwka_core::{
    dfa_accepts, dfa_to_rwka, mfa2_to_swk, parse_machine, swk_to_mfa2, theorem2_member, validate, CheckReport,
    ClassicalDfa, DiffReport, Machine, RunOptions, RunOutcome, Symbol, Word,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    Text,
    Tsv,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Requirement {
    /// Structural validation only.
    Valid,
    /// Validation plus conditions C1 and C2.
    Reversible,
    /// Reversible with an injective complementarity relation (wk only).
    Strong,
}

#[derive(Debug, Parser)]
#[command(name = "rwka", version, about = "Reversible Watson-Crick automata toolkit")]
pub struct Cli {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = OutputFormat::Text)]
    pub format: OutputFormat,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Validate a machine and run the reversibility checks that apply to it.
    Check {
        file: PathBuf,
        /// Which checks decide the exit code (default: reversible, or valid for dfa).
        #[arg(long, value_enum)]
        require: Option<Requirement>,
    },
    /// Decide acceptance of an upper word, or run on a fixed lower strand.
    Run {
        file: PathBuf,
        /// Upper-strand word (or tape word for mfa/dfa).
        word: String,
        /// Lower strand for a single deterministic run (wk only).
        #[arg(long)]
        lower: Option<String>,
        /// Print every applied transition.
        #[arg(long)]
        trace: bool,
    },
    /// Compile a DFA into a reversible Watson-Crick automaton.
    FromDfa {
        file: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Translate a strongly reversible Watson-Crick automaton into a 2-head automaton.
    ToMfa {
        file: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Translate a reversible 2-head automaton into a strongly reversible Watson-Crick automaton.
    FromMfa {
        file: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Compare two acceptors on every word up to a length bound.
    Compare {
        file_a: PathBuf,
        file_b: Option<PathBuf>,
        /// `theorem2` or `dfa:FILE`, instead of a second machine.
        #[arg(long, conflicts_with = "file_b")]
        oracle: Option<String>,
        #[arg(long)]
        max_len: usize,
        /// Sweep well-formed block strings over {a, b, *, %} instead of all words.
        #[arg(long)]
        blocks: bool,
        #[arg(long, default_value_t = 3, requires = "blocks")]
        max_blocks: usize,
    },
    /// Print the accepted words up to a length bound.
    Enumerate {
        file: PathBuf,
        #[arg(long)]
        max_len: usize,
    },
}

/// Runs the tool on `args` (including the program name) with the process streams.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let stdout = io::stdout();
    let stderr = io::stderr();
    run(args, &mut stdout.lock(), &mut stderr.lock())
}

/// Runs the tool writing to the given streams and returns the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            let _ = if e.use_stderr() {
                err.write_all(text.as_bytes())
            } else {
                out.write_all(text.as_bytes())
            };
            return code;
        }
    };
    match execute(&cli, out) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e:#}");
            2
        }
    }
}

fn execute(cli: &Cli, out: &mut dyn Write) -> Result<i32> {
    let tsv = cli.format == OutputFormat::Tsv;
    let text = match &cli.command {
        Command::Check { file, require } => return check(&parse(file)?, *require, tsv, out),
        Command::Run {
            file,
            word,
            lower,
            trace,
        } => return run_word(&load(file)?, word, lower.as_deref(), *trace, tsv, out),
        Command::FromDfa { file, output } => {
            let Machine::Dfa(dfa) = load(file)? else {
                bail!("{}: expected a dfa file", file.display());
            };
            let m = dfa_to_rwka(&dfa)?;
            emit(&serialize_machine(&Machine::Wk(m)), output.as_deref())?
        }
        Command::ToMfa { file, output } => {
            let Machine::Wk(wk) = load(file)? else {
                bail!("{}: expected a wk file", file.display());
            };
            let m = swk_to_mfa2(&wk)?;
            emit(&serialize_machine(&Machine::Mfa(m)), output.as_deref())?
        }
        Command::FromMfa { file, output } => {
            let Machine::Mfa(mfa) = load(file)? else {
                bail!("{}: expected an mfa file", file.display());
            };
            let m = mfa2_to_swk(&mfa)?;
            emit(&serialize_machine(&Machine::Wk(m)), output.as_deref())?
        }
        Command::Compare {
            file_a,
            file_b,
            oracle,
            max_len,
            blocks,
            max_blocks,
        } => {
            return compare(
                file_a,
                file_b.as_deref(),
                oracle.as_deref(),
                *max_len,
                blocks.then_some(*max_blocks),
                tsv,
                out,
            )
        }
        Command::Enumerate { file, max_len } => enumerate(&load(file)?, *max_len, tsv)?,
    };
    out.write_all(text.as_bytes())?;
    Ok(0)
}

fn parse(path: &Path) -> Result<Machine> {
    let text = fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))?;
    parse_machine(&text).map_err(|e| anyhow!("{}:{e}", path.display()))
}

/// Parses and validates; structural problems are input errors.
fn load(path: &Path) -> Result<Machine> {
    let m = parse(path)?;
    let report = validate(&m);
    if !report.passed() {
        bail!("{}: invalid machine: {report}", path.display());
    }
    Ok(m)
}

fn emit(text: &str, output: Option<&Path>) -> Result<String> {
    match output {
        Some(path) => {
            fs::write(path, text).with_context(|| format!("cannot write {}", path.display()))?;
            Ok(String::new())
        }
        None => Ok(text.to_string()),
    }
}

fn check(m: &Machine, require: Option<Requirement>, tsv: bool, out: &mut dyn Write) -> Result<i32> {
    let mut rows: Vec<(&str, Option<CheckReport>)> = vec![("valid", Some(validate(m)))];
    match m {
        Machine::Wk(wk) => {
            rows.push(("reversible", Some(check_reversibility_wk(wk))));
            rows.push(("strongly-reversible", Some(check_strong_reversibility(wk))));
        }
        Machine::Mfa(mfa) => {
            rows.push(("reversible", Some(check_reversibility_mfa(mfa))));
            rows.push(("strongly-reversible", None));
        }
        Machine::Dfa(_) => {
            rows.push(("reversible", None));
            rows.push(("strongly-reversible", None));
        }
    }
    let require = require.unwrap_or(match m {
        Machine::Dfa(_) => Requirement::Valid,
        _ => Requirement::Reversible,
    });
    let needed = match require {
        Requirement::Valid => 1,
        Requirement::Reversible => 2,
        Requirement::Strong => 3,
    };
    if rows[..needed].iter().any(|(_, r)| r.is_none()) {
        bail!("requirement {require:?} does not apply to a {} machine", m.kind());
    }
    let mut text = String::new();
    for (name, report) in &rows {
        match (report, tsv) {
            (None, true) => writeln!(text, "{name}\tn/a")?,
            (None, false) => writeln!(text, "{name}: n/a")?,
            (Some(r), true) => {
                writeln!(text, "{name}\t{}", if r.passed() { "pass" } else { "fail" })?;
                for v in &r.violations {
                    writeln!(text, "violation\t{name}\t{}\t{}", v.rule, v.note)?;
                }
            }
            (Some(r), false) => writeln!(text, "{name}: {r}")?,
        }
    }
    out.write_all(text.as_bytes())?;
    let passed = rows[..needed]
        .iter()
        .all(|(_, r)| r.as_ref().is_some_and(CheckReport::passed));
    Ok(if passed { 0 } else { 1 })
}

/// Parses a command-line word: one symbol per character when every symbol in
/// `alphabet` is a single character, otherwise comma-separated tokens.
fn parse_word(text: &str, alphabet: &IndexSet<Symbol>) -> Result<Word> {
    let single = alphabet.iter().all(|s| s.as_str().chars().count() == 1);
    let pieces: Vec<String> = if single && !text.contains(',') {
        text.chars().filter(|c| !c.is_whitespace()).map(String::from).collect()
    } else {
        text.split(|c: char| c == ',' || c.is_whitespace())
            .filter(|t| !t.is_empty())
            .map(String::from)
            .collect()
    };
    pieces
        .into_iter()
        .map(|t| Symbol::new(t.clone()).map_err(|e| anyhow!("bad symbol {t:?} in word {text:?}: {e}")))
        .collect()
}

fn format_word(w: &[Symbol], alphabet: &IndexSet<Symbol>) -> String {
    if alphabet.iter().all(|s| s.as_str().chars().count() == 1) {
        render_word(w, "")
    } else {
        render_word(w, ",")
    }
}

fn run_word(m: &Machine, word: &str, lower: Option<&str>, trace: bool, tsv: bool, out: &mut dyn Write) -> Result<i32> {
    let w1 = parse_word(word, m.input_alphabet())?;
    let opts = RunOptions { trace };
    let mut text = String::new();
    let accepted = match (m, lower) {
        (Machine::Wk(wk), Some(lower)) => {
            let w2 = parse_word(lower, &wk.lower_alphabet())?;
            let outcome = WkEngine::new(wk).run(&w1, &w2, opts)?;
            report_run(&outcome, tsv, &mut text)?;
            outcome.verdict.is_accept()
        }
        (Machine::Wk(wk), None) => {
            let engine = WkEngine::new(wk);
            let ex = engine.accepts(&w1)?;
            let verdict = if ex.accepted { "accept" } else { "reject" };
            if tsv {
                writeln!(text, "verdict\t{verdict}")?;
                if let Some(w2) = &ex.witness_lower {
                    writeln!(text, "witness\t{}", render_word(w2, " "))?;
                }
                writeln!(text, "explored\t{}", ex.explored)?;
            } else {
                writeln!(text, "{verdict}")?;
                if let Some(w2) = &ex.witness_lower {
                    writeln!(text, "witness: {}", render_word(w2, " "))?;
                }
            }
            if trace {
                if let Some(w2) = &ex.witness_lower {
                    let outcome = engine.run(&w1, w2, RunOptions::traced())?;
                    write_trace(&outcome, tsv, &mut text)?;
                }
            }
            ex.accepted
        }
        (_, Some(_)) => bail!("--lower only applies to wk machines"),
        (Machine::Mfa(mfa), None) => {
            let outcome = MfaEngine::new(mfa).run(&w1, opts)?;
            report_run(&outcome, tsv, &mut text)?;
            outcome.verdict.is_accept()
        }
        (Machine::Dfa(dfa), None) => {
            let accepted = dfa_accepts(dfa, &w1)?;
            let verdict = if accepted { "accept" } else { "reject" };
            if tsv {
                writeln!(text, "verdict\t{verdict}")?;
            } else {
                writeln!(text, "{verdict}")?;
            }
            accepted
        }
    };
    out.write_all(text.as_bytes())?;
    Ok(if accepted { 0 } else { 1 })
}

fn report_run(outcome: &RunOutcome, tsv: bool, text: &mut String) -> Result<()> {
    if tsv {
        writeln!(text, "verdict\t{}", outcome.verdict)?;
        writeln!(text, "final\t{}", outcome.final_config)?;
        writeln!(text, "steps\t{}", outcome.steps)?;
    } else {
        writeln!(text, "{}", outcome.verdict)?;
        writeln!(text, "final: {} after {} step(s)", outcome.final_config, outcome.steps)?;
    }
    write_trace(outcome, tsv, text)
}

fn write_trace(outcome: &RunOutcome, tsv: bool, text: &mut String) -> Result<()> {
    for (i, step) in outcome.trace.iter().enumerate() {
        if tsv {
            writeln!(text, "step\t{}\t{}\t{}", i + 1, step.config, step.entry)?;
        } else {
            writeln!(text, "{:>4}  {}  {}", i + 1, step.config, step.entry)?;
        }
    }
    Ok(())
}

/// A machine or oracle viewed as a word acceptor.
enum Acceptor<'m> {
    Wk(WkEngine<'m>),
    Mfa(MfaEngine<'m>),
    Dfa(&'m ClassicalDfa),
    Theorem2,
}

impl<'m> Acceptor<'m> {
    fn of(m: &'m Machine) -> Self {
        match m {
            Machine::Wk(wk) => Acceptor::Wk(WkEngine::new(wk)),
            Machine::Mfa(mfa) => Acceptor::Mfa(MfaEngine::new(mfa)),
            Machine::Dfa(dfa) => Acceptor::Dfa(dfa),
        }
    }

    fn accepts(&self, w: &[Symbol]) -> Result<bool, String> {
        match self {
            Acceptor::Wk(e) => e.accepts(w).map(|x| x.accepted).map_err(|e| e.to_string()),
            Acceptor::Mfa(e) => e
                .run(w, RunOptions::default())
                .map(|o| o.verdict.is_accept())
                .map_err(|e| e.to_string()),
            Acceptor::Dfa(d) => dfa_accepts(d, w).map_err(|e| e.to_string()),
            Acceptor::Theorem2 => Ok(theorem2_member(w)),
        }
    }
}

fn compare(
    file_a: &Path,
    file_b: Option<&Path>,
    oracle: Option<&str>,
    max_len: usize,
    max_blocks: Option<usize>,
    tsv: bool,
    out: &mut dyn Write,
) -> Result<i32> {
    let a = load(file_a)?;
    let b = match (file_b, oracle) {
        (Some(path), None) => Some(load(path)?),
        (None, Some("theorem2")) => None,
        (None, Some(spec)) => match spec.strip_prefix("dfa:") {
            Some(path) => {
                let m = load(Path::new(path))?;
                if !matches!(m, Machine::Dfa(_)) {
                    bail!("{path}: expected a dfa file");
                }
                Some(m)
            }
            None => bail!("unknown oracle {spec:?}; expected `theorem2` or `dfa:FILE`"),
        },
        (None, None) => bail!("compare needs a second file or --oracle"),
        (Some(_), Some(_)) => unreachable!("rejected by the argument parser"),
    };
    let acceptor_a = Acceptor::of(&a);
    let acceptor_b = b.as_ref().map_or(Acceptor::Theorem2, Acceptor::of);

    let words: Vec<Word> = match max_blocks {
        Some(n) => enumerate_block_strings(max_len, n).collect(),
        None => {
            let alphabet: Vec<Symbol> = a.input_alphabet().iter().cloned().collect();
            if let Some(b) = &b {
                let theirs: IndexSet<&Symbol> = b.input_alphabet().iter().collect();
                let ours: IndexSet<&Symbol> = alphabet.iter().collect();
                if theirs != ours {
                    bail!("the two machines have different input alphabets");
                }
            }
            enumerate_words(&alphabet, max_len).collect()
        }
    };
    let report: DiffReport = differential_compare_par(|w| acceptor_a.accepts(w), |w| acceptor_b.accepts(w), &words)?;
    let text = if tsv { report.to_tsv() } else { report.to_string() };
    out.write_all(text.as_bytes())?;
    Ok(if report.is_clean() { 0 } else { 1 })
}

fn enumerate(m: &Machine, max_len: usize, tsv: bool) -> Result<String> {
    let acceptor = Acceptor::of(m);
    let alphabet: Vec<Symbol> = m.input_alphabet().iter().cloned().collect();
    let mut text = String::new();
    for w in enumerate_words(&alphabet, max_len) {
        if acceptor.accepts(&w).map_err(|e| anyhow!(e))? {
            let shown = format_word(&w, m.input_alphabet());
            if tsv || !w.is_empty() {
                writeln!(text, "{shown}")?;
            } else {
                writeln!(text, "ε")?;
            }
        }
    }
    Ok(text)
}
