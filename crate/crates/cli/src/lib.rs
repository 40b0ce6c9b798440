//! Command implementations behind the `wordeq` binary. Each command writes
//! its report to the given writer and returns the process exit code.

use std::collections::BTreeSet;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::{Duration, Instant};

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use wordeq::graph::{build_with, verdict, Budget, BuildOptions, FoldMode, Verdict};
use wordeq::oracle::{benchmark_families, brute_solutions};
use wordeq::solutions::{enumerate_solutions, min_witness};
use wordeq::word::{system_letters, Equation, Letter};
use wordeq::{parse_program, parse_system, serialize_system, verify, Scheme};

pub const EXIT_SAT: i32 = 0;
pub const EXIT_UNSAT: i32 = 1;
pub const EXIT_UNKNOWN: i32 = 2;
pub const EXIT_ERROR: i32 = 3;

#[derive(Debug, Parser)]
#[command(
    name = "wordeq",
    version,
    about = "Word equation solver based on narrowing and folding"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Decide satisfiability and print a witness program on SAT.
    Solve(SolveArgs),
    /// Print every solution with values up to a length bound.
    Enumerate(EnumerateArgs),
    /// Check a narrowing program against a system.
    Verify(VerifyArgs),
    /// Write the solution graph in Graphviz format.
    Dot(DotArgs),
    /// Brute-force the solutions with values up to a length bound.
    Oracle(OracleArgs),
    /// Solve every .eq file in a directory and write a CSV report.
    Bench(BenchArgs),
    /// Write the fifty generated benchmark systems as .eq files.
    Generate(GenerateArgs),
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum SchemeArg {
    Base,
    Split,
    Count,
}

impl From<SchemeArg> for Scheme {
    fn from(s: SchemeArg) -> Scheme {
        match s {
            SchemeArg::Base => Scheme::Base,
            SchemeArg::Split => Scheme::Split,
            SchemeArg::Count => Scheme::Count,
        }
    }
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum FoldArg {
    Ancestor,
    Memo,
}

#[derive(Debug, Args)]
pub struct BuildArgs {
    #[arg(long, value_enum, default_value = "count")]
    pub scheme: SchemeArg,
    #[arg(long, default_value_t = 1_000_000)]
    pub max_nodes: usize,
    #[arg(long, default_value_t = 10_000)]
    pub max_depth: usize,
    /// Fold onto ancestors only, or also onto any finished node.
    #[arg(long, value_enum, default_value = "ancestor")]
    pub fold: FoldArg,
}

impl BuildArgs {
    fn options(&self) -> Result<BuildOptions> {
        Ok(BuildOptions {
            budget: Budget::new(self.max_nodes, self.max_depth)?,
            fold: match self.fold {
                FoldArg::Ancestor => FoldMode::Ancestor,
                FoldArg::Memo => FoldMode::Memo,
            },
            ..BuildOptions::new(self.scheme.into())
        })
    }
}

#[derive(Debug, Args)]
pub struct SolveArgs {
    pub file: PathBuf,
    #[command(flatten)]
    pub build: BuildArgs,
    /// Stop at the first T leaf.
    #[arg(long)]
    pub early_stop: bool,
    #[arg(long)]
    pub timeout_ms: Option<u64>,
}

#[derive(Debug, Args)]
pub struct EnumerateArgs {
    pub file: PathBuf,
    #[command(flatten)]
    pub build: BuildArgs,
    #[arg(long, default_value_t = 2)]
    pub max_len: usize,
    #[arg(long, default_value_t = 24)]
    pub max_path: usize,
    /// Letters for free variables, e.g. `AB`. Defaults to the input's letters.
    #[arg(long)]
    pub alphabet: Option<String>,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    pub eq_file: PathBuf,
    pub nar_file: PathBuf,
    #[arg(long, value_enum, default_value = "count")]
    pub scheme: SchemeArg,
}

#[derive(Debug, Args)]
pub struct DotArgs {
    pub file: PathBuf,
    #[command(flatten)]
    pub build: BuildArgs,
    /// Drop nodes that cannot reach a T leaf.
    #[arg(long)]
    pub prune: bool,
    #[arg(short = 'o', long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct OracleArgs {
    pub file: PathBuf,
    #[arg(long, default_value_t = 3)]
    pub max_len: usize,
    #[arg(long)]
    pub alphabet: Option<String>,
}

#[derive(Debug, Args)]
pub struct BenchArgs {
    pub dir: PathBuf,
    #[command(flatten)]
    pub build: BuildArgs,
    #[arg(long, default_value_t = 10_000)]
    pub timeout_ms: u64,
    /// CSV destination; standard output when absent.
    #[arg(long)]
    pub csv: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct GenerateArgs {
    pub dir: PathBuf,
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
}

pub fn run(cli: Cli, out: &mut dyn Write) -> Result<i32> {
    match cli.command {
        Command::Solve(a) => solve(&a, out),
        Command::Enumerate(a) => enumerate(&a, out),
        Command::Verify(a) => verify_cmd(&a, out),
        Command::Dot(a) => dot(&a, out),
        Command::Oracle(a) => oracle(&a, out),
        Command::Bench(a) => bench(&a, out),
        Command::Generate(a) => generate(&a, out),
    }
}

fn read_system(path: &Path) -> Result<Vec<Equation>> {
    let text =
        fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))?;
    parse_system(&text).with_context(|| format!("{}", path.display()))
}

fn alphabet(flag: Option<&str>, system: &[Equation]) -> Result<BTreeSet<Letter>> {
    match flag {
        None => Ok(system_letters(system)),
        Some(s) => s
            .chars()
            .filter(|c| !c.is_whitespace() && *c != ',')
            .map(|c| Letter::new(c).map_err(Into::into))
            .collect(),
    }
}

pub fn verdict_code(v: Verdict) -> i32 {
    match v {
        Verdict::Sat => EXIT_SAT,
        Verdict::Unsat => EXIT_UNSAT,
        Verdict::Unknown(_) => EXIT_UNKNOWN,
    }
}

fn solve(a: &SolveArgs, out: &mut dyn Write) -> Result<i32> {
    let system = read_system(&a.file)?;
    let start = Instant::now();
    let opts = BuildOptions {
        early_stop: a.early_stop,
        deadline: a.timeout_ms.map(|ms| start + Duration::from_millis(ms)),
        ..a.build.options()?
    };
    let outcome = build_with(&system, opts)?;
    let elapsed = start.elapsed();
    let v = verdict(&outcome);
    writeln!(out, "{v}")?;
    if let Verdict::Unknown(reason) = v {
        writeln!(out, "reason: {reason}")?;
    }
    writeln!(out, "nodes: {}", outcome.graph.len())?;
    writeln!(out, "depth: {}", outcome.graph.max_depth())?;
    writeln!(out, "time_ms: {}", elapsed.as_millis())?;
    if let Some(w) = min_witness(&outcome.graph) {
        writeln!(out, "witness:")?;
        if !w.is_empty() {
            writeln!(out, "{w}")?;
        }
    }
    Ok(verdict_code(v))
}

fn enumerate(a: &EnumerateArgs, out: &mut dyn Write) -> Result<i32> {
    let system = read_system(&a.file)?;
    let letters = alphabet(a.alphabet.as_deref(), &system)?;
    let outcome = build_with(&system, a.build.options()?)?;
    for s in enumerate_solutions(&outcome.graph, a.max_len, a.max_path, &letters) {
        writeln!(out, "{s}")?;
    }
    Ok(verdict_code(verdict(&outcome)))
}

fn verify_cmd(a: &VerifyArgs, out: &mut dyn Write) -> Result<i32> {
    let system = read_system(&a.eq_file)?;
    let text = fs::read_to_string(&a.nar_file)
        .with_context(|| format!("cannot read {}", a.nar_file.display()))?;
    let program = parse_program(&text).with_context(|| format!("{}", a.nar_file.display()))?;
    let scheme: Scheme = a.scheme.into();
    if scheme == Scheme::Base && system.len() != 1 {
        bail!(
            "the base scheme takes exactly one equation, got {}",
            system.len()
        );
    }
    let accepted = verify(&program, &system, scheme);
    writeln!(out, "{}", if accepted { "T" } else { "F" })?;
    Ok(if accepted { 0 } else { 1 })
}

fn dot(a: &DotArgs, out: &mut dyn Write) -> Result<i32> {
    let system = read_system(&a.file)?;
    let outcome = build_with(&system, a.build.options()?)?;
    let graph = if a.prune {
        outcome.graph.pruned()
    } else {
        outcome.graph
    };
    let text = graph.to_dot();
    match &a.output {
        Some(path) => {
            fs::write(path, text).with_context(|| format!("cannot write {}", path.display()))?
        }
        None => out.write_all(text.as_bytes())?,
    }
    Ok(0)
}

fn oracle(a: &OracleArgs, out: &mut dyn Write) -> Result<i32> {
    let system = read_system(&a.file)?;
    let letters = alphabet(a.alphabet.as_deref(), &system)?;
    let found = brute_solutions(&system, &letters, a.max_len);
    for s in &found {
        writeln!(out, "{s}")?;
    }
    Ok(if found.is_empty() { 1 } else { 0 })
}

/// One CSV row of a bench run.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BenchRow {
    pub file: String,
    pub scheme: Scheme,
    pub result: String,
    pub nodes: usize,
    pub depth: usize,
    pub time_ms: u128,
}

fn bench_file(path: &Path, base: BuildOptions, timeout: Duration) -> BenchRow {
    let file = path.file_name().map_or_else(
        || path.display().to_string(),
        |n| n.to_string_lossy().into_owned(),
    );
    let error = |file: String| BenchRow {
        file,
        scheme: base.scheme,
        result: "ERROR".to_string(),
        nodes: 0,
        depth: 0,
        time_ms: 0,
    };
    let Ok(system) = read_system(path) else {
        return error(file);
    };
    let start = Instant::now();
    let opts = BuildOptions {
        deadline: Some(start + timeout),
        ..base
    };
    match build_with(&system, opts) {
        Ok(outcome) => BenchRow {
            file,
            scheme: base.scheme,
            result: verdict(&outcome).to_string(),
            nodes: outcome.graph.len(),
            depth: outcome.graph.max_depth(),
            time_ms: start.elapsed().as_millis(),
        },
        Err(_) => error(file),
    }
}

/// Solves every `.eq` file of `dir` in parallel; rows follow file name order.
pub fn bench_dir(dir: &Path, opts: BuildOptions, timeout: Duration) -> Result<Vec<BenchRow>> {
    let mut files: Vec<PathBuf> = fs::read_dir(dir)
        .with_context(|| format!("cannot read directory {}", dir.display()))?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|x| x == "eq"))
        .collect();
    files.sort();
    Ok(files
        .par_iter()
        .map(|p| bench_file(p, opts, timeout))
        .collect())
}

fn bench(a: &BenchArgs, out: &mut dyn Write) -> Result<i32> {
    let rows = bench_dir(
        &a.dir,
        a.build.options()?,
        Duration::from_millis(a.timeout_ms),
    )?;
    let sink: Box<dyn Write + '_> = match &a.csv {
        Some(path) => Box::new(
            fs::File::create(path).with_context(|| format!("cannot write {}", path.display()))?,
        ),
        None => Box::new(&mut *out),
    };
    let mut w = csv::Writer::from_writer(sink);
    w.write_record(["file", "scheme", "result", "nodes", "depth", "time_ms"])?;
    for r in &rows {
        w.write_record([
            r.file.clone(),
            r.scheme.to_string(),
            r.result.clone(),
            r.nodes.to_string(),
            r.depth.to_string(),
            r.time_ms.to_string(),
        ])?;
    }
    w.flush()?;
    Ok(0)
}

fn generate(a: &GenerateArgs, out: &mut dyn Write) -> Result<i32> {
    fs::create_dir_all(&a.dir).with_context(|| format!("cannot create {}", a.dir.display()))?;
    let instances = benchmark_families(a.seed);
    for inst in &instances {
        let path = a.dir.join(format!("{}.eq", inst.name));
        fs::write(&path, serialize_system(&inst.system) + "\n")
            .with_context(|| format!("cannot write {}", path.display()))?;
    }
    writeln!(
        out,
        "wrote {} files to {}",
        instances.len(),
        a.dir.display()
    )?;
    Ok(0)
}
