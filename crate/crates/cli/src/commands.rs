use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use gssc_core::axioms::{check_unanimous, find_dictator_bruteforce, find_manipulation, ManipulationWitness};
use gssc_core::enumerator::{enumerate_scfs, AxiomSet, SearchConfig, SearchError};
use gssc_core::lemma::{find_dictator_via_proof, verify_trace, LemmaOutcome, Witness};
use gssc_core::prefcore::{Alternative, Dims, LinearOrder, Profile, ScfTable};
use gssc_core::rules::{build_table_in, RuleKind, RuleSpec};
use thiserror::Error;

use crate::formats::{self, parse_table, parse_trace, write_table, write_trace, FormatError};

/// Property holds or command succeeded.
pub const EXIT_OK: i32 = 0;
/// Property refuted; a witness was printed.
pub const EXIT_REFUTED: i32 = 1;
/// Usage, input-format or internal error.
pub const EXIT_ERROR: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "gssc", version, about = "Check, generate and enumerate finite social choice tables")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Report unanimity, strategy-proofness and dictatorship of a table.
    Check { table: PathBuf },
    /// Find the dictator of a table.
    Dictator {
        table: PathBuf,
        #[arg(long, value_enum, default_value_t = Method::Proof)]
        method: Method,
        /// Where to write the proof trace (proof method only).
        #[arg(long)]
        trace_out: Option<PathBuf>,
    },
    /// Enumerate every table satisfying the chosen axioms.
    Enumerate(EnumerateArgs),
    /// Write the table of a named rule.
    Gen(GenArgs),
    /// Print the first manipulation of a table, or "strategy-proof".
    Manipulate { table: PathBuf },
    /// Check a proof trace against a table.
    VerifyTrace { table: PathBuf, trace: PathBuf },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Method {
    Proof,
    Brute,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Axiom {
    Unm,
    Stp,
}

#[derive(Debug, Args)]
pub struct EnumerateArgs {
    pub m: usize,
    pub n: usize,
    #[arg(long, value_enum, value_delimiter = ',', default_values_t = [Axiom::Unm, Axiom::Stp])]
    pub axioms: Vec<Axiom>,
    /// Directory for one table file per solution.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Stop after this many solutions.
    #[arg(long)]
    pub limit: Option<usize>,
    #[arg(long, default_value_t = 1)]
    pub workers: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum RuleName {
    Dictatorship,
    Constant,
    Plurality,
    Borda,
    Random,
}

#[derive(Debug, Args)]
pub struct GenArgs {
    pub rule: RuleName,
    #[arg(short, default_value_t = 3)]
    pub m: usize,
    #[arg(short, default_value_t = 2)]
    pub n: usize,
    /// Dictator voter for `dictatorship`.
    #[arg(short = 'd', long)]
    pub dictator: Option<usize>,
    /// Winning alternative for `constant`.
    #[arg(short = 'a', long)]
    pub alt: Option<u8>,
    /// Required for `random`.
    #[arg(long)]
    pub seed: Option<u64>,
    /// Force common-top profiles to their top (`random` only).
    #[arg(long)]
    pub unanimous: bool,
    /// Output path; stdout when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{path}: {err}")]
    Format { path: String, err: FormatError },
    #[error("{path}: {err}")]
    Io { path: String, err: io::Error },
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Internal(String),
    #[error("output: {0}")]
    Output(#[from] io::Error),
}

/// Runs a parsed command, writing the report to `out` and diagnostics to
/// `err`. Returns the process exit status.
pub fn run(cli: &Cli, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    let result = match &cli.command {
        Command::Check { table } => cmd_check(table, out),
        Command::Dictator { table, method, trace_out } => {
            cmd_dictator(table, *method, trace_out.as_deref(), out)
        }
        Command::Enumerate(args) => cmd_enumerate(args, out),
        Command::Gen(args) => cmd_gen(args, out),
        Command::Manipulate { table } => cmd_manipulate(table, out),
        Command::VerifyTrace { table, trace } => cmd_verify_trace(table, trace, out),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            EXIT_ERROR
        }
    }
}

fn read(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|err| CliError::Io { path: path.display().to_string(), err })
}

fn write_file(path: &Path, text: &str) -> Result<(), CliError> {
    fs::write(path, text).map_err(|err| CliError::Io { path: path.display().to_string(), err })
}

pub fn load_table(path: &Path) -> Result<ScfTable, CliError> {
    parse_table(&read(path)?).map_err(|err| CliError::Format { path: path.display().to_string(), err })
}

/// Human-readable lines for a witness: the triple, then the profiles.
pub fn describe_witness(f: &ScfTable, w: &Witness) -> Vec<String> {
    let mut lines = vec![w.to_string()];
    match w {
        Witness::Manipulation(mw) => lines.extend(describe_manipulation(f, mw)),
        Witness::Unanimity(v) => {
            if let Ok(x) = Profile::from_index(v.profile_index, f.dims()) {
                lines.push(format!("  profile {x} -> {}", v.outcome));
            }
        }
    }
    lines
}

fn describe_manipulation(f: &ScfTable, w: &ManipulationWitness) -> Option<String> {
    let x = Profile::from_index(w.profile_index, f.dims()).ok()?;
    let o = LinearOrder::from_index(w.misreport_order_index, f.m()).ok()?;
    Some(format!(
        "  sincere {x} -> {}; voter {} reports {o} -> {}, preferred under {}",
        w.sincere_outcome,
        w.voter,
        w.manipulated_outcome,
        x.order(w.voter)
    ))
}

pub fn cmd_check(path: &Path, out: &mut dyn Write) -> Result<i32, CliError> {
    let f = load_table(path)?;
    let unm = check_unanimous(&f);
    let stp = find_manipulation(&f);
    let dt = find_dictator_bruteforce(&f);
    let status = |ok: bool| if ok { "ok" } else { "fail" };
    let dt_text = dt.map_or("none".to_string(), |d| format!("voter {d}"));
    writeln!(out, "UNM: {}, STP: {}, DT: {dt_text}", status(unm.is_none()), status(stp.is_none()))?;
    if let Some(v) = unm {
        for line in describe_witness(&f, &Witness::Unanimity(v)) {
            writeln!(out, "{line}")?;
        }
    }
    if let Some(w) = stp {
        for line in describe_witness(&f, &Witness::Manipulation(w)) {
            writeln!(out, "{line}")?;
        }
    }
    Ok(if unm.is_none() && stp.is_none() { EXIT_OK } else { EXIT_REFUTED })
}

pub fn cmd_dictator(
    path: &Path,
    method: Method,
    trace_out: Option<&Path>,
    out: &mut dyn Write,
) -> Result<i32, CliError> {
    let f = load_table(path)?;
    let brute = find_dictator_bruteforce(&f);
    match method {
        Method::Brute => match brute {
            Some(d) => {
                writeln!(out, "dictator: voter {d}")?;
                Ok(EXIT_OK)
            }
            None => {
                writeln!(out, "no dictator")?;
                let w = check_unanimous(&f)
                    .map(Witness::Unanimity)
                    .or_else(|| find_manipulation(&f).map(Witness::Manipulation));
                if let Some(w) = w {
                    for line in describe_witness(&f, &w) {
                        writeln!(out, "{line}")?;
                    }
                }
                Ok(EXIT_REFUTED)
            }
        },
        Method::Proof => {
            let outcome = find_dictator_via_proof(&f).map_err(|e| CliError::Internal(e.to_string()))?;
            match outcome {
                LemmaOutcome::Proved { conclusion, trace } => {
                    writeln!(out, "dictator: voter {conclusion}")?;
                    writeln!(out, "trace: {} steps", trace.len())?;
                    if let Some(p) = trace_out {
                        write_file(p, &write_trace(&trace))?;
                    }
                    if brute != Some(conclusion) {
                        writeln!(out, "brute force disagrees: {brute:?}")?;
                        return Ok(EXIT_REFUTED);
                    }
                    Ok(EXIT_OK)
                }
                LemmaOutcome::Refuted(w) => {
                    writeln!(out, "no dictator")?;
                    for line in describe_witness(&f, &w) {
                        writeln!(out, "{line}")?;
                    }
                    Ok(EXIT_REFUTED)
                }
            }
        }
    }
}

pub fn solution_file_name(ordinal: usize) -> String {
    format!("solution-{ordinal:04}.gssc")
}

pub fn cmd_enumerate(args: &EnumerateArgs, out: &mut dyn Write) -> Result<i32, CliError> {
    let axioms = AxiomSet {
        unm: args.axioms.contains(&Axiom::Unm),
        stp: args.axioms.contains(&Axiom::Stp),
    };
    let cfg = SearchConfig::new(args.m, args.n, axioms)
        .with_limit(args.limit)
        .with_workers(args.workers);
    if let Some(dir) = &args.out {
        fs::create_dir_all(dir)
            .map_err(|err| CliError::Io { path: dir.display().to_string(), err })?;
    }
    let mut dictators = Vec::new();
    let mut others = 0usize;
    let mut failure = None;
    let stats = enumerate_scfs(&cfg, |f| {
        match find_dictator_bruteforce(&f) {
            Some(d) => dictators.push(d),
            None => others += 1,
        }
        if let Some(dir) = &args.out {
            let ordinal = dictators.len() + others;
            if let Err(e) = write_file(&dir.join(solution_file_name(ordinal)), &write_table(&f)) {
                failure = Some(e);
                return std::ops::ControlFlow::Break(());
            }
        }
        std::ops::ControlFlow::Continue(())
    })
    .map_err(|e| match e {
        SearchError::TooLarge { .. } | SearchError::NoAxioms | SearchError::Pref(_) => {
            CliError::Usage(format!("refused: {e}"))
        }
        SearchError::Lemma(e) => CliError::Internal(e.to_string()),
    })?;
    if let Some(e) = failure {
        return Err(e);
    }
    dictators.sort_unstable();
    let list: Vec<String> = dictators.iter().map(|d| d.to_string()).collect();
    let plural = if stats.solutions_found == 1 { "solution" } else { "solutions" };
    write!(out, "{} {plural}; dictators {{{}}}", stats.solutions_found, list.join(","))?;
    if others > 0 {
        write!(out, "; {others} non-dictatorial")?;
    }
    writeln!(out)?;
    writeln!(out, "stats: {}", serde_json::to_string(&stats).expect("stats serialize"))?;
    Ok(EXIT_OK)
}

pub fn cmd_gen(args: &GenArgs, out: &mut dyn Write) -> Result<i32, CliError> {
    let kind = match args.rule {
        RuleName::Dictatorship => RuleKind::Dictatorship(
            args.dictator.ok_or_else(|| CliError::Usage("dictatorship needs --dictator".into()))?,
        ),
        RuleName::Constant => RuleKind::Constant(Alternative(
            args.alt.ok_or_else(|| CliError::Usage("constant needs --alt".into()))?,
        )),
        RuleName::Plurality => RuleKind::Plurality,
        RuleName::Borda => RuleKind::Borda,
        RuleName::Random => RuleKind::Random {
            seed: args.seed.ok_or_else(|| CliError::Usage("random needs --seed".into()))?,
            unanimous: args.unanimous,
        },
    };
    let guard = formats::size_guard().map_err(|e| CliError::Usage(e.to_string()))?;
    let dims = Dims::with_guard(args.m, args.n, guard).map_err(|e| CliError::Usage(e.to_string()))?;
    let f = build_table_in(RuleSpec::new(kind, args.m, args.n), dims)
        .map_err(|e| CliError::Usage(e.to_string()))?;
    let text = write_table(&f);
    match &args.out {
        Some(p) => write_file(p, &text)?,
        None => out.write_all(text.as_bytes())?,
    }
    Ok(EXIT_OK)
}

pub fn cmd_manipulate(path: &Path, out: &mut dyn Write) -> Result<i32, CliError> {
    let f = load_table(path)?;
    match find_manipulation(&f) {
        Some(w) => {
            for line in describe_witness(&f, &Witness::Manipulation(w)) {
                writeln!(out, "{line}")?;
            }
            Ok(EXIT_REFUTED)
        }
        None => {
            writeln!(out, "strategy-proof")?;
            Ok(EXIT_OK)
        }
    }
}

pub fn cmd_verify_trace(table: &Path, trace: &Path, out: &mut dyn Write) -> Result<i32, CliError> {
    let f = load_table(table)?;
    let t = parse_trace(&read(trace)?)
        .map_err(|err| CliError::Format { path: trace.display().to_string(), err })?;
    match verify_trace(&f, &t) {
        Ok(()) => {
            writeln!(out, "trace ok: {} {} steps; {}", t.lemma, t.len(), t.conclusion)?;
            Ok(EXIT_OK)
        }
        Err(e) if e.step == usize::MAX => {
            writeln!(out, "trace rejected: {}", e.reason)?;
            Ok(EXIT_REFUTED)
        }
        Err(e) => {
            writeln!(out, "trace rejected at step {}: {}", e.step, e.reason)?;
            Ok(EXIT_REFUTED)
        }
    }
}
