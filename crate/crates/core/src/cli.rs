//! Command-line surface.
//!
//! Exit codes: 0 success, 1 I/O failure or records that fail verification,
//! 2 invalid input, 3 workload above the leaf budget.

use std::fs::File;
use std::io::{BufReader, BufWriter, Write};
use std::ops::RangeInclusive;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};

use crate::bounds::BoundSet;
use crate::equation::{CoefficientSet, NormalizedEquation};
use crate::parametric::{
    enumerate_families, offset_envelope, unit_pool, verify_family, FamilyRecord,
};
use crate::record::{
    read_lines, write_lines, BoundsLine, ConfigLine, HeaderLine, JsonInt, Line, TOOL_VERSION,
};
use crate::search::{
    canonical_key, estimate_leaves, reproduce_example, search_equations, unit_patterns,
    with_workers, SolutionRecord,
};
use crate::sequence::{SequenceParams, SequenceTable};
use crate::{BigInt, Error};

pub const DEFAULT_BUDGET: u64 = 4_000_000_000;

#[derive(Debug, Parser)]
#[command(
    name = "sixterm",
    version,
    about = "Six-term equations over balancing-like sequences"
)]
pub struct Cli {
    /// Worker threads (default: available parallelism).
    #[arg(long, global = true)]
    pub workers: Option<usize>,
    /// Write JSON Lines results to this file.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Keep only solutions of the two-sided form with strictly decreasing indices per side.
    #[arg(long, global = true)]
    pub strict: bool,
    /// Refuse runs whose estimated leaf count exceeds this.
    #[arg(long, global = true, default_value_t = DEFAULT_BUDGET)]
    pub budget: u64,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Print x[0..=n] and y[0..=n].
    Seq {
        #[arg(long = "A")]
        a: u64,
        #[arg(long)]
        n: usize,
    },
    /// Print every cap for a size parameter.
    Bounds {
        #[arg(long = "X", default_value_t = 1)]
        x: u64,
    },
    /// Sporadic search for one equation.
    Search(SearchArgs),
    /// Enumerate parametric families.
    Families(FamilyArgs),
    /// Re-check every record of a results file.
    Verify {
        #[arg(long = "in")]
        input: PathBuf,
    },
    /// Sweep A in [3, 308] over all {0, +-1} coefficient patterns.
    Repro,
}

#[derive(Debug, Args)]
pub struct SearchArgs {
    /// Two-sided coefficients C1..C6.
    #[arg(long, value_parser = parse_six, allow_hyphen_values = true, conflicts_with = "raw")]
    pub coeffs: Option<Six>,
    /// The case n1 = n4: merge the leading terms.
    #[arg(long, requires = "coeffs")]
    pub collide: bool,
    /// Single-sided coefficients A1..A6, used as given.
    #[arg(long, value_parser = parse_six, allow_hyphen_values = true)]
    pub raw: Option<Six>,
    /// A single value of A.
    #[arg(long = "A", conflicts_with = "a_range")]
    pub a: Option<u64>,
    /// Inclusive range `lo..hi`.
    #[arg(long = "A-range", value_parser = parse_range)]
    pub a_range: Option<Span>,
    /// Size parameter; must not be below max |C|.
    #[arg(long = "X")]
    pub x: Option<u64>,
}

#[derive(Debug, Args)]
pub struct FamilyArgs {
    /// Inclusive range `lo..hi` (default: [3, 308 X]).
    #[arg(long = "A-range", value_parser = parse_range)]
    pub a_range: Option<Span>,
    #[arg(long = "X", default_value_t = 1)]
    pub x: u64,
    /// Coefficient tuple (3 to 6 entries); repeatable. Default: every {-1, 1} tuple.
    #[arg(long, value_parser = parse_list, allow_hyphen_values = true)]
    pub coeffs: Vec<List>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Six(pub [i64; 6]);

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct List(pub Vec<i64>);

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Span(pub u64, pub u64);

fn parse_list(s: &str) -> Result<List, String> {
    s.split(',')
        .map(|t| t.trim().parse::<i64>().map_err(|e| format!("{t:?}: {e}")))
        .collect::<Result<Vec<_>, _>>()
        .map(List)
}

fn parse_six(s: &str) -> Result<Six, String> {
    let List(v) = parse_list(s)?;
    let arr: [i64; 6] = v
        .try_into()
        .map_err(|v: Vec<i64>| format!("expected 6 comma-separated integers, got {}", v.len()))?;
    Ok(Six(arr))
}

fn parse_range(s: &str) -> Result<Span, String> {
    let (lo, hi) = s
        .split_once("..=")
        .or_else(|| s.split_once(".."))
        .ok_or_else(|| format!("expected lo..hi, got {s:?}"))?;
    let lo = lo.trim().parse().map_err(|e| format!("{lo:?}: {e}"))?;
    let hi = hi.trim().parse().map_err(|e| format!("{hi:?}: {e}"))?;
    Ok(Span(lo, hi))
}

/// Validated run settings.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RunConfig {
    pub command: RunCommand,
    pub workers: usize,
    pub out: Option<PathBuf>,
    pub strict: bool,
    pub budget: u64,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RunCommand {
    Seq {
        a: u64,
        n: usize,
    },
    Bounds {
        x: u64,
    },
    Search {
        equation: NormalizedEquation,
        /// Present when built from two-sided coefficients.
        original: Option<([i64; 6], bool)>,
        a_range: Option<RangeInclusive<u64>>,
    },
    Families {
        a_range: Option<RangeInclusive<u64>>,
        x: u64,
        pool: Vec<Vec<i64>>,
    },
    Verify {
        input: PathBuf,
    },
    Repro,
}

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("invalid input: {0}")]
    Validation(String),
    #[error(
        "estimated workload of {estimate} leaves exceeds the budget of {budget} (raise --budget)"
    )]
    Budget { estimate: u128, budget: u64 },
    #[error("cannot write {path}: {msg}")]
    Output { path: String, msg: String },
    #[error("cannot read {path}: {msg}")]
    Input { path: String, msg: String },
    #[error("{failed} of {total} records failed verification")]
    VerificationFailed { failed: usize, total: usize },
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Validation(_) => 2,
            CliError::Budget { .. } => 3,
            CliError::Output { .. }
            | CliError::Input { .. }
            | CliError::VerificationFailed { .. } => 1,
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Validation(e.to_string())
    }
}

fn default_workers() -> usize {
    std::thread::available_parallelism()
        .map(|n| n.get())
        .unwrap_or(1)
}

impl RunConfig {
    pub fn from_cli(cli: Cli) -> Result<Self, CliError> {
        let workers = cli.workers.unwrap_or_else(default_workers);
        if workers == 0 {
            return Err(CliError::Validation("--workers must be positive".into()));
        }
        if cli.budget == 0 {
            return Err(CliError::Validation("--budget must be positive".into()));
        }
        let span = |s: Option<Span>| s.map(|Span(lo, hi)| lo..=hi);
        let command = match cli.command {
            Command::Seq { a, n } => {
                SequenceParams::new(a)?;
                RunCommand::Seq { a, n }
            }
            Command::Bounds { x } => RunCommand::Bounds { x },
            Command::Search(args) => {
                let (equation, original) = match (args.coeffs, args.raw) {
                    (Some(Six(c)), None) => {
                        let set = CoefficientSet::new(c)?;
                        let eq = set.normalize(args.collide)?;
                        let eq = match args.x {
                            Some(x) if x < eq.size() => {
                                return Err(CliError::Validation(format!(
                                    "--X {x} is below max |C| = {}",
                                    eq.size()
                                )))
                            }
                            Some(x) => eq.with_size(x)?,
                            None => eq,
                        };
                        (eq, Some((c, args.collide)))
                    }
                    (None, Some(Six(c))) => {
                        let eq = NormalizedEquation::from_coefficients(c)?;
                        let eq = match args.x {
                            Some(x) => eq.with_size(x)?,
                            None => eq,
                        };
                        (eq, None)
                    }
                    _ => {
                        return Err(CliError::Validation(
                            "search needs exactly one of --coeffs or --raw".into(),
                        ))
                    }
                };
                let a_range = match (args.a, args.a_range) {
                    (Some(a), _) => Some(a..=a),
                    (None, r) => span(r),
                };
                RunCommand::Search {
                    equation,
                    original,
                    a_range,
                }
            }
            Command::Families(args) => {
                let pool = if args.coeffs.is_empty() {
                    unit_pool()
                } else {
                    args.coeffs.into_iter().map(|List(v)| v).collect()
                };
                RunCommand::Families {
                    a_range: span(args.a_range),
                    x: args.x,
                    pool,
                }
            }
            Command::Verify { input } => RunCommand::Verify { input },
            Command::Repro => RunCommand::Repro,
        };
        Ok(Self {
            command,
            workers,
            out: cli.out,
            strict: cli.strict,
            budget: cli.budget,
        })
    }

    fn echo(&self, name: &str) -> ConfigLine {
        ConfigLine {
            command: name.to_string(),
            strict: self.strict,
            budget: JsonInt(self.budget.into()),
            ..Default::default()
        }
    }
}

fn ints(v: &[i64]) -> Vec<JsonInt> {
    v.iter().map(|&c| JsonInt(c.into())).collect()
}

fn range_echo(r: &RangeInclusive<u64>) -> [JsonInt; 2] {
    [JsonInt((*r.start()).into()), JsonInt((*r.end()).into())]
}

/// Opens the output file before any work so an unwritable path fails fast.
fn open_output(path: &Option<PathBuf>) -> Result<Option<(File, PathBuf)>, CliError> {
    path.as_ref()
        .map(|p| {
            File::create(p)
                .map(|f| (f, p.clone()))
                .map_err(|e| CliError::Output {
                    path: p.display().to_string(),
                    msg: e.to_string(),
                })
        })
        .transpose()
}

fn finish_output(file: Option<(File, PathBuf)>, lines: &[Line]) -> Result<(), CliError> {
    if let Some((f, path)) = file {
        write_lines(BufWriter::new(f), lines).map_err(|e| CliError::Output {
            path: path.display().to_string(),
            msg: e.to_string(),
        })?;
    }
    Ok(())
}

fn check_budget(estimate: u128, budget: u64) -> Result<(), CliError> {
    if estimate > budget as u128 {
        return Err(CliError::Budget { estimate, budget });
    }
    Ok(())
}

fn check_range(r: &RangeInclusive<u64>, cap: u64) -> Result<(), CliError> {
    if *r.start() < 3 || *r.end() > cap || r.start() > r.end() {
        return Err(CliError::Validation(format!(
            "A range [{}, {}] is outside [3, {cap}]",
            r.start(),
            r.end()
        )));
    }
    Ok(())
}

/// Human-readable relation, e.g. `x[2] = x[1] + x[1] + x[1]`.
pub fn render_relation(rec: &SolutionRecord) -> String {
    let (_, terms) = canonical_key(rec);
    let side = |positive: bool| -> String {
        let parts: Vec<String> = terms
            .iter()
            .filter(|(_, c)| (*c > 0) == positive)
            .map(|&(m, c)| match c.unsigned_abs() {
                1 => format!("x[{m}]"),
                k => format!("{k}*x[{m}]"),
            })
            .collect();
        if parts.is_empty() {
            "0".into()
        } else {
            parts.join(" + ")
        }
    };
    format!("{} = {}", side(true), side(false))
}

fn join<T: ToString>(v: &[T]) -> String {
    v.iter()
        .map(ToString::to_string)
        .collect::<Vec<_>>()
        .join(", ")
}

/// Executes `config`, writing the summary to `stdout`.
pub fn run<W: Write>(config: &RunConfig, stdout: &mut W) -> Result<(), CliError> {
    let out_err = |e: std::io::Error| CliError::Output {
        path: "<stdout>".into(),
        msg: e.to_string(),
    };
    match &config.command {
        RunCommand::Seq { a, n } => {
            let table = SequenceTable::<BigInt>::build(SequenceParams::new(*a)?, *n)?;
            writeln!(stdout, "A = {a}, n = {n}").map_err(out_err)?;
            writeln!(stdout, "x[{n}] = {}", table.x()[*n]).map_err(out_err)?;
            writeln!(stdout, "x: {}", join_plain(table.x())).map_err(out_err)?;
            writeln!(stdout, "y: {}", join_plain(table.y())).map_err(out_err)?;
            Ok(())
        }
        RunCommand::Bounds { x } => {
            let file = open_output(&config.out)?;
            let b = BoundSet::for_size(*x)?;
            writeln!(stdout, "X = {x}").map_err(out_err)?;
            writeln!(stdout, "a_cap = {}", b.a_cap).map_err(out_err)?;
            writeln!(stdout, "sporadic caps (m1..m6) = ({})", join(&b.sporadic))
                .map_err(out_err)?;
            writeln!(stdout, "form 1 caps (l, k, j, i) = ({})", join(&b.form1)).map_err(out_err)?;
            writeln!(stdout, "form 2 caps (m, l, k, j, i) = ({})", join(&b.form2))
                .map_err(out_err)?;
            let mut echo = config.echo("bounds");
            echo.x = Some(JsonInt((*x).into()));
            finish_output(file, &[header(echo, &b, vec![])])
        }
        RunCommand::Search {
            equation,
            original,
            a_range,
        } => {
            let b = BoundSet::for_size(equation.size())?;
            let range = a_range.clone().unwrap_or(3..=b.a_cap);
            check_range(&range, b.a_cap)?;
            check_budget(estimate_leaves(&b, &range, 1), config.budget)?;
            let file = open_output(&config.out)?;
            let coeffs = equation.coefficients();
            let found = with_workers(config.workers, || {
                search_equations(&[coeffs], &b, range.clone(), config.strict)
            })?;
            writeln!(
                stdout,
                "equation ({}) with X = {}, A in [{}, {}]",
                join(&coeffs),
                equation.size(),
                range.start(),
                range.end()
            )
            .map_err(out_err)?;
            writeln!(
                stdout,
                "caps m1..m6 = ({}); a_cap = {}",
                join(&b.sporadic),
                b.a_cap
            )
            .map_err(out_err)?;
            for r in &found {
                writeln!(
                    stdout,
                    "A={} m=({}) {}",
                    r.a,
                    join(&r.indices),
                    render_relation(r)
                )
                .map_err(out_err)?;
            }
            writeln!(stdout, "solutions: {}", found.len()).map_err(out_err)?;
            let mut echo = config.echo("search");
            match original {
                Some((c, collide)) => {
                    echo.coefficients = Some(ints(c));
                    echo.collide = Some(*collide);
                }
                None => echo.coefficients = Some(ints(&coeffs)),
            }
            echo.a_range = Some(range_echo(&range));
            echo.x = Some(JsonInt(equation.size().into()));
            let mut lines = vec![header(echo, &b, vec![])];
            lines.extend(found.iter().map(|r| Line::solution(r, equation.size())));
            finish_output(file, &lines)
        }
        RunCommand::Families { a_range, x, pool } => {
            let b = BoundSet::for_size(*x)?;
            let range = a_range.clone().unwrap_or(3..=b.a_cap);
            check_range(&range, b.a_cap)?;
            let mut per_a = 0u128;
            for c in pool {
                let env = offset_envelope(*x, c.len())?;
                per_a += offset_tuple_count(&env);
            }
            let shards = (range.end() + 1 - range.start()) as u128;
            check_budget(per_a * shards, config.budget)?;
            let file = open_output(&config.out)?;
            let found = with_workers(config.workers, || {
                enumerate_families(range.clone(), pool, *x)
            })?;
            writeln!(
                stdout,
                "families: A in [{}, {}], {} coefficient tuples, X = {x}",
                range.start(),
                range.end(),
                pool.len()
            )
            .map_err(out_err)?;
            writeln!(
                stdout,
                "offset envelope (m, l, k, j, i) = ({})",
                join(&b.form2)
            )
            .map_err(out_err)?;
            for f in &found {
                writeln!(
                    stdout,
                    "A={} offsets=({}) coefficients=({})",
                    f.a,
                    join(&f.offsets),
                    join(&f.coefficients)
                )
                .map_err(out_err)?;
            }
            writeln!(stdout, "families found: {}", found.len()).map_err(out_err)?;
            let mut echo = config.echo("families");
            echo.a_range = Some(range_echo(&range));
            echo.x = Some(JsonInt((*x).into()));
            echo.pool = Some(pool.iter().map(|c| ints(c)).collect());
            let mut lines = vec![header(echo, &b, vec![])];
            lines.extend(found.iter().map(|f| Line::family(f, *x)));
            finish_output(file, &lines)
        }
        RunCommand::Verify { input } => verify_file(input, stdout),
        RunCommand::Repro => {
            let b = BoundSet::for_size(1)?;
            let patterns = unit_patterns();
            check_budget(
                estimate_leaves(&b, &(3..=b.a_cap), patterns.len()),
                config.budget,
            )?;
            let file = open_output(&config.out)?;
            let report = with_workers(config.workers, || reproduce_example(config.strict))?;
            let notes = vec![
                "loop extents follow the caps (m6 <= 2, m5 <= 7, m4 <= 12, m3 <= 17, m2 <= 23, m1 <= 26); \
                 in particular m3 stops at 17, not 24"
                    .to_string(),
                "records are deduplicated by their nonzero terms at positive index".to_string(),
            ];
            writeln!(
                stdout,
                "repro: A in [3, {}], {} coefficient patterns, X = 1",
                b.a_cap,
                patterns.len()
            )
            .map_err(out_err)?;
            writeln!(stdout, "caps m1..m6 = ({})", join(&b.sporadic)).map_err(out_err)?;
            for n in &notes {
                writeln!(stdout, "note: {n}").map_err(out_err)?;
            }
            for r in &report.records {
                writeln!(
                    stdout,
                    "A={} m=({}) a=({}) {}",
                    r.a,
                    join(&r.indices),
                    join(&r.coefficients),
                    render_relation(r)
                )
                .map_err(out_err)?;
            }
            writeln!(
                stdout,
                "hits: {} raw, {} distinct",
                report.raw_hits,
                report.records.len()
            )
            .map_err(out_err)?;
            let verdict = if report.reference_found {
                "PASS"
            } else {
                "FAIL"
            };
            writeln!(
                stdout,
                "{verdict} A=5 x[2] = x[1] + x[1] + x[1] + x[1] + x[1]"
            )
            .map_err(out_err)?;
            let mut echo = config.echo("repro");
            echo.a_range = Some(range_echo(&(3..=b.a_cap)));
            echo.x = Some(JsonInt(1));
            let mut lines = vec![header(echo, &b, notes)];
            lines.extend(report.records.iter().map(|r| Line::solution(r, 1)));
            finish_output(file, &lines)
        }
    }
}

fn join_plain(v: &[BigInt]) -> String {
    v.iter()
        .map(ToString::to_string)
        .collect::<Vec<_>>()
        .join(",")
}

fn header(config: ConfigLine, b: &BoundSet, notes: Vec<String>) -> Line {
    Line::Header(Box::new(HeaderLine {
        tool_version: TOOL_VERSION.to_string(),
        config,
        bounds: BoundsLine::from(b),
        notes,
    }))
}

/// Strictly decreasing positive offsets under `env`, one per entry.
fn offset_tuple_count(env: &[u32]) -> u128 {
    fn go(env: &[u32], below: u32) -> u128 {
        let Some((&cap, rest)) = env.split_first() else {
            return 1;
        };
        let need = rest.len() as u32 + 1;
        let hi = cap.min(below.saturating_sub(1));
        (need..=hi).map(|e| go(rest, e)).sum()
    }
    go(env, u32::MAX)
}

fn verify_file<W: Write>(path: &Path, stdout: &mut W) -> Result<(), CliError> {
    let in_err = |msg: String| CliError::Input {
        path: path.display().to_string(),
        msg,
    };
    let f = File::open(path).map_err(|e| in_err(e.to_string()))?;
    let lines = read_lines(BufReader::new(f)).map_err(|e| in_err(e.to_string()))?;
    let mut total = 0;
    let mut failed = 0;
    for (i, line) in lines.iter().enumerate() {
        let ok = match line {
            Line::Header(_) => continue,
            Line::Solution(s) => {
                let (rec, x) = s.to_record(i + 1).map_err(|e| in_err(e.to_string()))?;
                solution_holds(&rec, x)?
            }
            Line::Family(f) => {
                let (rec, x) = f.to_record(i + 1).map_err(|e| in_err(e.to_string()))?;
                family_holds(&rec, x)?
            }
        };
        total += 1;
        if !ok {
            failed += 1;
            writeln!(stdout, "FAIL line {}", i + 1).ok();
        }
    }
    writeln!(stdout, "verified {} of {total} records", total - failed).ok();
    if failed > 0 {
        return Err(CliError::VerificationFailed { failed, total });
    }
    Ok(())
}

fn solution_holds(rec: &SolutionRecord, x: u64) -> Result<bool, CliError> {
    let b = BoundSet::for_size(x)?;
    if rec.a < 3 || rec.a > b.a_cap {
        return Ok(false);
    }
    if rec.indices.iter().zip(&b.sporadic).any(|(m, cap)| m > cap) {
        return Ok(false);
    }
    Ok(rec.verify()?)
}

fn family_holds(rec: &FamilyRecord, x: u64) -> Result<bool, CliError> {
    let b = BoundSet::for_size(x)?;
    if rec.a < 3 || rec.a > b.a_cap {
        return Ok(false);
    }
    let env = offset_envelope(x, rec.offsets.len())?;
    if rec.offsets.iter().zip(&env).any(|(e, cap)| e > cap) {
        return Ok(false);
    }
    let poly = rec.polynomial::<BigInt>()?;
    Ok(poly.is_gamma_root(rec.a)? && verify_family(rec, 20)?)
}
