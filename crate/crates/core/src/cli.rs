//! Command-line front end for the `factorlab` binary.
//!
//! Exit codes: 0 when every outcome matches its expectation, 1 on a
//! definite mismatch, 2 when the only mismatches are unknown verdicts over
//! the tolerance, 64 on a usage error.

use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use thiserror::Error;

use crate::calculi::{
    self, catalog, demo, run_entry, CatalogEntry, Expected, Observed, RunConfig, Suite, SuiteKind,
    DEMOS,
};
use crate::factor::{search_counterexample, Bounds, SwapCheck};
use crate::gen::{enumerate, CorpusSpec, Grammar};
use crate::rewrite::{Calculus, Rule};
use crate::term::{ContextClass, FIX_Y, FIX_Z};

pub const EXIT_OK: i32 = 0;
pub const EXIT_MISMATCH: i32 = 1;
pub const EXIT_UNKNOWN: i32 = 2;
pub const EXIT_USAGE: i32 = 64;

/// Environment variable that replaces the default search budget.
pub const BUDGET_ENV: &str = "FACTORLAB_BUDGET";

#[derive(Parser, Debug)]
#[command(
    name = "factorlab",
    version,
    about = "Bounded checks of factorization for extended λ-calculi"
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand, Debug)]
enum Cmd {
    /// List the built-in calculi with their suites and expected outcomes.
    List(ListArgs),
    /// Run catalog suites and compare with their expected outcomes.
    Check(CheckArgs),
    /// Replay a fixture transcript.
    Demo(DemoArgs),
    /// Scan a corpus for failing peaks of a swap, smallest term first.
    Search(SearchArgs),
    /// Print a generated corpus, one term per line.
    Corpus(CorpusArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Class {
    Head,
    Left,
    Weak,
}

impl From<Class> for ContextClass {
    fn from(c: Class) -> ContextClass {
        match c {
            Class::Head => ContextClass::Head,
            Class::Left => ContextClass::Left,
            Class::Weak => ContextClass::Weak,
        }
    }
}

#[derive(Args, Debug)]
struct Output {
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Write the report here (atomically) instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct BoundArgs {
    #[arg(long)]
    max_size: Option<usize>,
    #[arg(long, default_value_t = 4)]
    seq_depth: usize,
    #[arg(long, default_value_t = 6)]
    path_bound: usize,
    /// Explored-state cap per search [default: 100000, or $FACTORLAB_BUDGET].
    #[arg(long)]
    budget: Option<usize>,
    #[arg(long, default_value_t = 0)]
    unknown_tolerance: usize,
    /// Sample a random corpus with this seed instead of enumerating.
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long, default_value_t = 200)]
    samples: usize,
}

#[derive(Args, Debug)]
struct ListArgs {
    #[arg(long)]
    calculus: Option<String>,
    #[command(flatten)]
    output: Output,
}

#[derive(Args, Debug)]
struct CheckArgs {
    /// Catalog entry; all entries when omitted.
    #[arg(long, conflicts_with = "calculus_file")]
    calculus: Option<String>,
    /// JSON calculus definition to check instead of a catalog entry.
    #[arg(long)]
    calculus_file: Option<PathBuf>,
    #[arg(long)]
    suite: Option<String>,
    #[arg(long, value_enum)]
    essential: Option<Class>,
    #[command(flatten)]
    bounds: BoundArgs,
    #[command(flatten)]
    output: Output,
}

#[derive(Args, Debug)]
struct DemoArgs {
    /// Demo name; all demos when omitted.
    name: Option<String>,
    #[command(flatten)]
    output: Output,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Kind {
    StrongPostponement,
    LinearSwap,
    RootLinearSwap,
    LinearPostponement1,
    LinearPostponement2,
}

#[derive(Args, Debug)]
struct SearchArgs {
    #[arg(long, value_enum, default_value_t = Kind::RootLinearSwap)]
    kind: Kind,
    /// Rules of the first (non-essential) step, comma separated.
    #[arg(long, default_value = "beta")]
    first: String,
    /// Rules of the second (essential or root) step, comma separated.
    #[arg(long)]
    second: String,
    #[arg(long, value_enum, default_value_t = Class::Head)]
    essential: Class,
    #[arg(long, default_value = "y,z")]
    free_vars: String,
    #[command(flatten)]
    bounds: BoundArgs,
    #[command(flatten)]
    output: Output,
}

#[derive(Args, Debug)]
struct CorpusArgs {
    #[arg(long)]
    calculus: String,
    #[arg(long)]
    max_size: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long, default_value_t = 200)]
    samples: usize,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Error)]
enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("cannot write output: {0}")]
    Io(#[from] io::Error),
}

impl CliError {
    fn code(&self) -> i32 {
        match self {
            CliError::Usage(_) => EXIT_USAGE,
            CliError::Io(_) => EXIT_MISMATCH,
        }
    }
}

fn usage(msg: impl Into<String>) -> CliError {
    CliError::Usage(msg.into())
}

/// Parses `args` (program name first) and runs the command.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => EXIT_OK,
                _ => EXIT_USAGE,
            };
            let text = e.render().to_string();
            let _ = if code == EXIT_OK {
                write!(out, "{text}")
            } else {
                write!(err, "{text}")
            };
            return code;
        }
    };
    let result = match cli.cmd {
        Cmd::List(a) => cmd_list(&a, out),
        Cmd::Check(a) => cmd_check(&a, out),
        Cmd::Demo(a) => cmd_demo(&a, out),
        Cmd::Search(a) => cmd_search(&a, out),
        Cmd::Corpus(a) => cmd_corpus(&a, out),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "factorlab: {e}");
            e.code()
        }
    }
}

fn bounds_from(a: &BoundArgs) -> Result<Bounds, CliError> {
    let env_budget = match std::env::var(BUDGET_ENV) {
        Ok(v) => Some(v.trim().parse::<usize>().map_err(|_| {
            usage(format!(
                "{BUDGET_ENV} must be a positive integer, got `{v}`"
            ))
        })?),
        Err(_) => None,
    };
    let b = Bounds {
        path_bound: a.path_bound,
        seq_depth: a.seq_depth,
        budget: a.budget.or(env_budget).unwrap_or(Bounds::default().budget),
        unknown_tolerance: a.unknown_tolerance,
        ..Bounds::default()
    };
    if b.path_bound == 0
        || b.seq_depth == 0
        || b.budget == 0
        || a.max_size == Some(0)
        || a.samples == 0
    {
        return Err(usage("bounds must be positive"));
    }
    Ok(b)
}

fn config_from(a: &BoundArgs) -> Result<RunConfig, CliError> {
    Ok(RunConfig {
        max_size: a.max_size,
        bounds: bounds_from(a)?,
        seed: a.seed,
        samples: a.samples,
    })
}

/// Writes to a sibling temporary file, then renames over the target.
fn write_atomic(path: &Path, data: &str) -> io::Result<()> {
    let dir = path
        .parent()
        .filter(|p| !p.as_os_str().is_empty())
        .unwrap_or(Path::new("."));
    let name = path
        .file_name()
        .map(|n| n.to_string_lossy().into_owned())
        .unwrap_or_default();
    let tmp = dir.join(format!(".{name}.tmp{}", std::process::id()));
    fs::write(&tmp, data)?;
    fs::rename(&tmp, path)
}

fn emit(
    output: &Output,
    text: String,
    json: impl FnOnce() -> String,
    out: &mut dyn Write,
) -> Result<(), CliError> {
    let body = match output.format {
        Format::Text => text,
        Format::Json => {
            let mut j = json();
            j.push('\n');
            j
        }
    };
    match &output.out {
        Some(p) => write_atomic(p, &body)?,
        None => out.write_all(body.as_bytes())?,
    }
    Ok(())
}

fn to_json<T: Serialize>(v: &T) -> String {
    serde_json::to_string_pretty(v).expect("reports serialize")
}

fn expected_label(s: &Suite) -> String {
    match (s.expected, s.fails_at) {
        (Expected::Pass, _) => "expected pass".into(),
        (Expected::Fail, Some(n)) => format!("expected FAIL at sub-check {n}"),
        (Expected::Fail, None) => "expected FAIL".into(),
    }
}

fn find_entry(name: &str) -> Result<CatalogEntry, CliError> {
    calculi::entry(name).ok_or_else(|| {
        let names: Vec<String> = catalog().into_iter().map(|e| e.name).collect();
        usage(format!(
            "unknown calculus `{name}` (known: {})",
            names.join(", ")
        ))
    })
}

fn cmd_list(a: &ListArgs, out: &mut dyn Write) -> Result<i32, CliError> {
    let entries = match &a.calculus {
        Some(n) => vec![find_entry(n)?],
        None => catalog(),
    };
    let mut text = String::new();
    for e in &entries {
        let rules: Vec<&str> = e.calculus.rules.iter().map(|r| r.name()).collect();
        text.push_str(&format!(
            "{}  rules={}  {}\n",
            e.name,
            rules.join(","),
            e.anchor
        ));
        text.push_str(&format!(
            "  corpus: {}; confluence: {}\n",
            e.corpus.describe(),
            e.confluence
        ));
        for s in &e.suites {
            text.push_str(&format!(
                "  {} {} {}: {} ({})\n",
                e.name,
                s.essential,
                s.id,
                s.anchor,
                expected_label(s)
            ));
        }
    }
    emit(&a.output, text, || to_json(&entries), out)?;
    Ok(EXIT_OK)
}

fn adhoc_entry(path: &Path) -> Result<CatalogEntry, CliError> {
    let cal = Calculus::load(path).map_err(|e| usage(e.to_string()))?;
    let constants: Vec<&str> = cal.constants.iter().map(String::as_str).collect();
    let corpus = CorpusSpec::for_calculus(&cal, 7, &["y", "z"]).with_constants(&constants);
    let e = cal.essential;
    let suite = |id: &str, kind: SuiteKind| Suite {
        id: id.to_string(),
        essential: e,
        kind,
        expected: Expected::Pass,
        fails_at: None,
        anchor: "user calculus".into(),
    };
    Ok(CatalogEntry {
        name: cal.name.clone(),
        anchor: format!("calculus file {}", path.display()),
        corpus,
        fixtures: Vec::new(),
        suites: vec![
            suite("shape-preservation", SuiteKind::ShapePreservation),
            suite("factorization-oracle", SuiteKind::FactorizationOracle),
        ],
        confluence: "not checked".into(),
        calculus: cal,
    })
}

#[derive(Serialize)]
struct CheckOutput<'a> {
    command: &'static str,
    config: &'a RunConfig,
    results: &'a [calculi::SuiteResult],
}

fn cmd_check(a: &CheckArgs, out: &mut dyn Write) -> Result<i32, CliError> {
    let cfg = config_from(&a.bounds)?;
    let entries = match (&a.calculus, &a.calculus_file) {
        (Some(n), _) => vec![find_entry(n)?],
        (None, Some(p)) => vec![adhoc_entry(p)?],
        (None, None) => catalog(),
    };
    let essential = a.essential.map(ContextClass::from);
    let mut results = Vec::new();
    for e in &entries {
        let rs = run_entry(e, a.suite.as_deref(), essential, &cfg)
            .map_err(|err| usage(err.to_string()))?;
        results.extend(rs);
    }
    if results.is_empty() {
        return Err(usage("no suite matches the selection"));
    }
    let mut text = String::new();
    for r in &results {
        text.push_str(&r.line());
        text.push('\n');
        for rep in &r.reports {
            text.push_str(&format!("         {}\n", rep.summary_line()));
            if !r.matches {
                if let Some(c) = rep.counterexamples.first() {
                    text.push_str(&format!(
                        "           first counterexample: {} ({})\n",
                        c.source, c.note
                    ));
                }
            }
        }
        if let Some(s) = &r.summary {
            text.push_str(&format!("         verdict: {}\n", s.verdict));
        }
    }
    let code = if results.iter().all(|r| r.matches) {
        EXIT_OK
    } else if results
        .iter()
        .all(|r| r.matches || r.observed == Observed::Unknown)
    {
        EXIT_UNKNOWN
    } else {
        EXIT_MISMATCH
    };
    let json = || {
        to_json(&CheckOutput {
            command: "check",
            config: &cfg,
            results: &results,
        })
    };
    emit(&a.output, text, json, out)?;
    Ok(code)
}

fn cmd_demo(a: &DemoArgs, out: &mut dyn Write) -> Result<i32, CliError> {
    let names: Vec<&str> = match &a.name {
        Some(n) => vec![n.as_str()],
        None => DEMOS.to_vec(),
    };
    let mut transcripts = Vec::new();
    for n in names {
        transcripts.push(demo(n).map_err(|e| usage(format!("{e} (known: {})", DEMOS.join(", "))))?);
    }
    let text: String = transcripts.iter().map(|t| t.to_string()).collect();
    emit(&a.output, text, || to_json(&transcripts), out)?;
    Ok(if transcripts.iter().all(|t| t.ok()) {
        EXIT_OK
    } else {
        EXIT_MISMATCH
    })
}

fn parse_rules(s: &str) -> Result<Vec<Rule>, CliError> {
    let rules = s
        .split(',')
        .filter(|x| !x.trim().is_empty())
        .map(|x| Rule::from_name(x.trim()).map_err(|e| usage(e.to_string())))
        .collect::<Result<Vec<_>, _>>()?;
    if rules.is_empty() {
        return Err(usage("empty rule list"));
    }
    Ok(rules)
}

fn search_check(
    kind: Kind,
    first: &[Rule],
    second: &[Rule],
    e: ContextClass,
    bound: usize,
) -> SwapCheck {
    let mut all = first.to_vec();
    all.extend_from_slice(second);
    let cal = Calculus::new("search", &all, e);
    match kind {
        Kind::StrongPostponement => SwapCheck::strong_postponement(&cal, bound),
        Kind::LinearSwap => SwapCheck::linear_swap(first, second, e, bound),
        Kind::RootLinearSwap => SwapCheck::root_linear_swap(first, second, e, bound),
        Kind::LinearPostponement1 => SwapCheck::linear_postponement1(&cal, bound),
        Kind::LinearPostponement2 => SwapCheck::linear_postponement2(&cal),
    }
}

fn cmd_search(a: &SearchArgs, out: &mut dyn Write) -> Result<i32, CliError> {
    let cfg = config_from(&a.bounds)?;
    let first = parse_rules(&a.first)?;
    let second = parse_rules(&a.second)?;
    let e = ContextClass::from(a.essential);
    let check = search_check(a.kind, &first, &second, e, cfg.bounds.path_bound);
    let rules: Vec<Rule> = first.iter().chain(&second).copied().collect();
    let grammar = if rules.contains(&Rule::Oplus) {
        Grammar::Oplus
    } else {
        Grammar::Lambda
    };
    let free: Vec<&str> = a
        .free_vars
        .split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .collect();
    let mut spec = CorpusSpec::exhaustive(cfg.max_size.unwrap_or(7), &free, grammar);
    let consts: Vec<&str> = [(Rule::Y, FIX_Y), (Rule::Z, FIX_Z)]
        .iter()
        .filter(|(r, _)| rules.contains(r))
        .map(|(_, c)| *c)
        .collect();
    spec = spec.with_constants(&consts);
    if let Some(seed) = cfg.seed {
        spec = spec.random(seed, cfg.samples);
    }
    let corpus = enumerate(&spec).map_err(|err| usage(err.to_string()))?;
    let mut rep = search_counterexample(
        &check,
        &corpus,
        cfg.bounds.budget,
        cfg.bounds.evidence_limit,
    );
    rep.corpus = spec.describe();
    rep.calculus = rules.iter().map(|r| r.name()).collect::<Vec<_>>().join("+");
    let mut text = format!("{}\n{}\n", check.describe(), rep.summary_line());
    match rep
        .counterexamples
        .iter()
        .find(|c| !c.note.starts_with("unknown"))
    {
        Some(c) => {
            text.push_str(&format!(
                "smallest failing term (size {}): {}\n",
                c.size, c.source
            ));
            for s in &c.peak {
                text.push_str(&format!("  →{} at {} gives {}\n", s.rule, s.at, s.target));
            }
        }
        None => text.push_str("no failing peak found\n"),
    }
    emit(&a.output, text, || to_json(&rep), out)?;
    Ok(EXIT_OK)
}

fn cmd_corpus(a: &CorpusArgs, out: &mut dyn Write) -> Result<i32, CliError> {
    let entry = find_entry(&a.calculus)?;
    let cfg = RunConfig {
        max_size: a.max_size,
        seed: a.seed,
        samples: a.samples,
        ..RunConfig::default()
    };
    if a.max_size == Some(0) || a.samples == 0 {
        return Err(usage("bounds must be positive"));
    }
    let corpus = calculi::build_corpus(&entry, &cfg).map_err(|err| usage(err.to_string()))?;
    let mut buf = Vec::new();
    crate::gen::dump(&corpus, &mut buf)?;
    let text = String::from_utf8(buf).expect("terms print as UTF-8");
    match &a.out {
        Some(p) => write_atomic(p, &text)?,
        None => out.write_all(text.as_bytes())?,
    }
    Ok(EXIT_OK)
}
