//! Command-line verbs. Everything here writes through the given streams so the
//! commands can run in-process.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use dsrg_core::dsrg::{
    verify_algebraic, verify_combinatorial, verify_sampled, DsrgParams, VerifyReport,
};
use dsrg_core::family::{
    check_seed_contract, check_structure, family_params, FamilyBuilder, FamilySpec,
    FULL_PRODUCT_LIMIT,
};
use dsrg_core::search::{
    search_pair_with, search_seed_with, Control, PairSearchProblem, Progress, SearchBudget,
    SearchObserver, SearchOutcome, SearchStats, SeedSearchConfig, DEFAULT_SEED_CEILING,
};
use dsrg_core::{BinaryMatrix, Error as CoreError};
use serde_json::json;

use crate::catalog;
use crate::format::{self, FormatError, MatrixFormat};
use crate::manifest::{manifest_path, RunManifest};
use crate::parallel::{default_threads, verify_algebraic_parallel, THREADS_ENV};

/// Process exit codes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExitStatus {
    Ok = 0,
    VerificationFailed = 1,
    InputError = 2,
    Infeasible = 3,
    InfeasiblePrecheck = 4,
    Exhausted = 5,
}

impl ExitStatus {
    pub fn code(self) -> i32 {
        self as i32
    }
}

const EXIT_CODES: &str = "\
Exit status:
  0  ok
  1  verification failed
  2  input error (bad arguments, unreadable or malformed files, unsupported parameters)
  3  infeasible (the search space was exhausted without a solution)
  4  infeasible by precheck (necessary conditions rule the parameters out)
  5  exhausted (node or time budget ran out)";

/// Samples used when a term is too large for full verification.
pub const DEFAULT_SAMPLES: u64 = 100_000;

#[derive(Debug, Parser)]
#[command(
    name = "dsrg",
    version,
    about = "Build, verify and search directed strongly regular graph families"
)]
#[command(after_help = EXIT_CODES)]
pub struct Cli {
    /// Worker threads for full verification.
    #[arg(long, global = true, env = THREADS_ENV)]
    pub threads: Option<usize>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Print the parameters of family terms grown from a seed.
    Params(ParamsArgs),
    /// Search for a seed adjacency matrix A1.
    SearchSeed(SearchSeedArgs),
    /// Search for the blocky pair (B1, C1) completing a seed.
    SearchPair(SearchPairArgs),
    /// Check a matrix against DSRG parameters.
    Verify(VerifyArgs),
    /// Check a seed triple (A1, B1, C1) against the full seed contract.
    VerifyPair(VerifyPairArgs),
    /// Write family terms A_1..A_N and verify each.
    Build(BuildArgs),
    /// Convert a matrix file between the text and binary formats.
    Convert(ConvertArgs),
}

#[derive(Debug, Args)]
pub struct ParamsArgs {
    /// Seed parameters v k t lambda (mu = t).
    #[arg(num_args = 4, value_names = ["V", "K", "T", "LAMBDA"], required_unless_present = "family")]
    pub seed: Vec<usize>,
    /// Use a catalogued seed (1-11) instead.
    #[arg(long, conflicts_with = "seed")]
    pub family: Option<usize>,
    /// Family levels to print.
    #[arg(long = "n", value_delimiter = ',', default_value = "2")]
    pub levels: Vec<usize>,
    /// Also print the closed form of the n-th term.
    #[arg(long)]
    pub formula: bool,
}

#[derive(Debug, Args)]
pub struct FullParams {
    /// Parameters v k t lambda mu.
    #[arg(num_args = 5, value_names = ["V", "K", "T", "LAMBDA", "MU"], required_unless_present = "family")]
    pub params: Vec<usize>,
    /// Use a catalogued seed (1-11) instead.
    #[arg(long, conflicts_with = "params")]
    pub family: Option<usize>,
}

#[derive(Debug, Args)]
pub struct BudgetArgs {
    #[arg(long, default_value_t = SearchBudget::default().max_nodes)]
    pub max_nodes: u64,
    #[arg(long)]
    pub max_seconds: Option<f64>,
    #[arg(long, default_value_t = 0)]
    pub rng_seed: u64,
    /// Fixed value order without restarts; `--deterministic false` enables randomized restarts.
    #[arg(long, default_value_t = true, action = clap::ArgAction::Set, num_args = 0..=1, default_missing_value = "true")]
    pub deterministic: bool,
    /// Print progress lines to stderr.
    #[arg(long)]
    pub progress: bool,
}

impl BudgetArgs {
    fn budget(&self) -> SearchBudget {
        SearchBudget {
            max_nodes: self.max_nodes,
            max_wall_seconds: self.max_seconds,
            rng_seed: self.rng_seed,
            deterministic: self.deterministic,
        }
    }

    fn record(&self, m: &mut RunManifest) {
        m.set("budget.max_nodes", self.max_nodes);
        if let Some(s) = self.max_seconds {
            m.set("budget.max_seconds", s);
        }
        m.set("rng_seed", self.rng_seed);
        m.set("deterministic", self.deterministic);
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FormatArg {
    Text,
    Binary,
}

impl From<FormatArg> for MatrixFormat {
    fn from(f: FormatArg) -> Self {
        match f {
            FormatArg::Text => MatrixFormat::Text,
            FormatArg::Binary => MatrixFormat::Binary,
        }
    }
}

fn output_format(explicit: Option<FormatArg>, path: &Path) -> MatrixFormat {
    explicit
        .map(Into::into)
        .unwrap_or_else(|| MatrixFormat::from_extension(path))
}

#[derive(Debug, Args)]
pub struct SearchSeedArgs {
    #[command(flatten)]
    pub params: FullParams,
    #[arg(long)]
    pub out: PathBuf,
    /// Output format; defaults by extension (.bin is binary).
    #[arg(long, value_enum)]
    pub format: Option<FormatArg>,
    #[command(flatten)]
    pub budget: BudgetArgs,
    /// Largest order the seed search accepts (at most 64).
    #[arg(long, default_value_t = DEFAULT_SEED_CEILING)]
    pub ceiling: usize,
}

#[derive(Debug, Args)]
pub struct SeedPairParams {
    /// Use t and lambda of a catalogued seed (1-11).
    #[arg(long, conflicts_with_all = ["t", "lambda"])]
    pub family: Option<usize>,
    #[arg(long, required_unless_present = "family")]
    pub t: Option<usize>,
    #[arg(long, required_unless_present = "family")]
    pub lambda: Option<usize>,
}

impl SeedPairParams {
    /// `v` and `k` come from the seed matrix, `mu = t`.
    fn resolve(&self, a1: &BinaryMatrix) -> Result<DsrgParams, CliError> {
        let (t, lambda) = match self.family {
            Some(n) => {
                let p = catalog_family(n)?;
                (p.t, p.lambda)
            }
            None => (self.t.unwrap_or_default(), self.lambda.unwrap_or_default()),
        };
        let v = a1.rows();
        let k = a1.row_sum(0) as usize;
        let p = DsrgParams::new(v, k, t, lambda, t)?;
        if let Some(n) = self.family {
            let expected = catalog_family(n)?;
            if expected != p {
                return Err(CliError::Input(format!(
                    "seed matrix has order {v} and degree {k}, family {n} is {expected}"
                )));
            }
        }
        Ok(p)
    }
}

#[derive(Debug, Args)]
pub struct SearchPairArgs {
    /// Seed adjacency matrix A1.
    #[arg(long)]
    pub seed: PathBuf,
    #[command(flatten)]
    pub params: SeedPairParams,
    #[arg(long)]
    pub out_b: PathBuf,
    #[arg(long)]
    pub out_c: PathBuf,
    #[arg(long, value_enum)]
    pub format: Option<FormatArg>,
    /// Search even if the feasibility precheck rejects the parameters.
    #[arg(long)]
    pub force: bool,
    #[command(flatten)]
    pub budget: BudgetArgs,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum VerifyModeArg {
    /// Every entry of A^2 plus all degrees.
    Full,
    /// Path counting over neighbour lists.
    Combinatorial,
    /// All degrees plus randomly drawn entries (needs mu = t).
    Sampled,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[arg(long)]
    pub matrix: PathBuf,
    #[command(flatten)]
    pub params: FullParams,
    /// With --family, check against the parameters of the n-th term.
    #[arg(long = "n", requires = "family")]
    pub level: Option<usize>,
    #[arg(long, value_enum, default_value = "full")]
    pub mode: VerifyModeArg,
    #[arg(long, default_value_t = DEFAULT_SAMPLES)]
    pub samples: u64,
    #[arg(long, default_value_t = 0)]
    pub rng_seed: u64,
    /// Print the report as JSON.
    #[arg(long)]
    pub json: bool,
}

#[derive(Debug, Args)]
pub struct VerifyPairArgs {
    #[arg(long)]
    pub seed: PathBuf,
    #[arg(long)]
    pub b: PathBuf,
    #[arg(long)]
    pub c: PathBuf,
    #[command(flatten)]
    pub params: SeedPairParams,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum BuildVerify {
    /// Full check up to order 8192, sampled above; structural checks always.
    Full,
    /// Sampled check of every term; structural checks always.
    Sampled,
    /// Structural checks only.
    Structural,
}

#[derive(Debug, Args)]
pub struct BuildArgs {
    /// Seed adjacency matrix A1 (omit with --family to use the bundled fixture).
    #[arg(long, requires_all = ["b", "c"])]
    pub seed: Option<PathBuf>,
    #[arg(long)]
    pub b: Option<PathBuf>,
    #[arg(long)]
    pub c: Option<PathBuf>,
    /// Catalogued family (1-11).
    #[arg(long, conflicts_with_all = ["t", "lambda"])]
    pub family: Option<usize>,
    #[arg(long, required_unless_present = "family")]
    pub t: Option<usize>,
    #[arg(long, required_unless_present = "family")]
    pub lambda: Option<usize>,
    /// Last family level to write.
    #[arg(long = "n")]
    pub levels: usize,
    /// Output directory.
    #[arg(long)]
    pub out: PathBuf,
    #[arg(long, value_enum, default_value = "full")]
    pub verify: BuildVerify,
    #[arg(long, default_value_t = DEFAULT_SAMPLES)]
    pub samples: u64,
    #[arg(long, default_value_t = 0)]
    pub rng_seed: u64,
    /// Row block kept by the truncation in the C recurrence.
    #[arg(long, default_value_t = 0)]
    pub alpha_block: usize,
    #[arg(long, value_enum, default_value = "text")]
    pub format: FormatArg,
}

#[derive(Debug, Args)]
pub struct ConvertArgs {
    pub input: PathBuf,
    pub output: PathBuf,
    /// Target format; defaults by output extension (.bin is binary).
    #[arg(long, value_enum)]
    pub to: Option<FormatArg>,
}

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Input(String),
    #[error("{path}: {source}")]
    File { path: PathBuf, source: FormatError },
    #[error(transparent)]
    Core(#[from] CoreError),
    #[error("{0}")]
    Io(#[from] std::io::Error),
}

/// Streams and settings shared by all verbs.
pub struct Context<'a> {
    pub out: &'a mut dyn Write,
    pub err: &'a mut dyn Write,
    pub threads: usize,
    pub command_line: String,
}

fn catalog_family(n: usize) -> Result<DsrgParams, CliError> {
    catalog::family(n).ok_or_else(|| {
        CliError::Input(format!(
            "family must be 1-{}, got {n}",
            catalog::SEEDS.len()
        ))
    })
}

impl FullParams {
    fn resolve(&self) -> Result<DsrgParams, CliError> {
        match self.family {
            Some(n) => catalog_family(n),
            None => {
                let p = &self.params;
                Ok(DsrgParams::new(p[0], p[1], p[2], p[3], p[4])?)
            }
        }
    }
}

fn read_input(path: &Path) -> Result<(BinaryMatrix, Vec<u8>), CliError> {
    let wrap = |source| CliError::File {
        path: path.to_path_buf(),
        source,
    };
    let bytes = fs::read(path).map_err(|e| wrap(FormatError::Io(e)))?;
    if !bytes.starts_with(format::BINARY_MAGIC) && bytes.len() as u64 > format::TEXT_LIMIT_BYTES {
        return Err(wrap(FormatError::TextTooLarge {
            bytes: bytes.len() as u64,
            limit: format::TEXT_LIMIT_BYTES,
        }));
    }
    let (m, _) = format::parse_matrix(&bytes).map_err(wrap)?;
    Ok((m, bytes))
}

fn write_output(path: &Path, m: &BinaryMatrix, format: MatrixFormat) -> Result<Vec<u8>, CliError> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(dir)?;
    }
    format::write_matrix(path, m, format).map_err(|source| CliError::File {
        path: path.to_path_buf(),
        source,
    })
}

/// Wall clock for budgets and optional progress lines.
struct Clock<'a> {
    start: Instant,
    err: Option<&'a mut dyn Write>,
}

impl SearchObserver for Clock<'_> {
    fn progress(&mut self, p: &Progress) -> Control {
        if let Some(err) = self.err.as_deref_mut() {
            let _ = writeln!(
                err,
                "nodes {} depth {} best {} restarts {} ({:.1}s)",
                p.nodes,
                p.depth,
                p.best_depth,
                p.restarts,
                self.start.elapsed().as_secs_f64()
            );
        }
        Control::Continue
    }

    fn elapsed_seconds(&self) -> Option<f64> {
        Some(self.start.elapsed().as_secs_f64())
    }
}

fn record_stats(m: &mut RunManifest, stats: &SearchStats) {
    m.set("nodes", stats.nodes);
    m.set("restarts", stats.restarts);
    m.set("best_depth", stats.best_depth);
}

fn tuple(p: &DsrgParams) -> String {
    format!("{} {} {} {} {}", p.v, p.k, p.t, p.lambda, p.mu)
}

fn describe_outcome<T>(
    ctx: &mut Context<'_>,
    outcome: &SearchOutcome<T>,
    m: &mut RunManifest,
) -> ExitStatus {
    match outcome {
        SearchOutcome::Found(_) => ExitStatus::Ok,
        SearchOutcome::Exhausted(stats) => {
            record_stats(m, stats);
            let _ = writeln!(ctx.out, "exhausted after {} nodes", stats.nodes);
            ExitStatus::Exhausted
        }
        SearchOutcome::Infeasible(stats) => {
            record_stats(m, stats);
            let _ = writeln!(
                ctx.out,
                "infeasible: search space exhausted after {} nodes",
                stats.nodes
            );
            ExitStatus::Infeasible
        }
        SearchOutcome::PrecheckFailed(violations) => {
            for v in violations {
                let _ = writeln!(ctx.out, "precheck: {v}");
            }
            ExitStatus::InfeasiblePrecheck
        }
    }
}

fn finish_manifest(
    m: &mut RunManifest,
    status: ExitStatus,
    start: Instant,
    path: &Path,
) -> Result<(), CliError> {
    m.set("status", status_name(status));
    m.set(
        "wall_seconds",
        format!("{:.3}", start.elapsed().as_secs_f64()),
    );
    m.write(path)?;
    Ok(())
}

pub fn status_name(status: ExitStatus) -> &'static str {
    match status {
        ExitStatus::Ok => "ok",
        ExitStatus::VerificationFailed => "verification-failed",
        ExitStatus::InputError => "input-error",
        ExitStatus::Infeasible => "infeasible",
        ExitStatus::InfeasiblePrecheck => "infeasible-precheck",
        ExitStatus::Exhausted => "exhausted",
    }
}

fn cmd_params(ctx: &mut Context<'_>, args: &ParamsArgs) -> Result<ExitStatus, CliError> {
    let seed = match args.family {
        Some(n) => catalog_family(n)?,
        None => DsrgParams::new(
            args.seed[0],
            args.seed[1],
            args.seed[2],
            args.seed[3],
            args.seed[2],
        )?,
    };
    if seed.t <= seed.lambda {
        writeln!(
            ctx.out,
            "t must exceed lambda, got t = {} and lambda = {}",
            seed.t, seed.lambda
        )?;
        return Ok(ExitStatus::InfeasiblePrecheck);
    }
    for &n in &args.levels {
        writeln!(ctx.out, "{}", tuple(&family_params(&seed, n)?))?;
    }
    if args.formula {
        let (v, k, t, l) = (seed.v, seed.k, seed.t, seed.lambda);
        writeln!(
            ctx.out,
            "(2^(n-1) ({v} + (2^(n+1) - 4) {t}), {k} + (2^n - 2) {t}, {t}, {l}, {t})"
        )?;
        if v == 2 * k && k == t + l {
            let s = t - l;
            writeln!(
                ctx.out,
                "= (2^n ({t} 2^n - {s}), {t} 2^n - {s}, {t}, {l}, {t})"
            )?;
        }
    }
    Ok(ExitStatus::Ok)
}

fn cmd_search_seed(ctx: &mut Context<'_>, args: &SearchSeedArgs) -> Result<ExitStatus, CliError> {
    let start = Instant::now();
    let p = args.params.resolve()?;
    let mut manifest = RunManifest::new(&ctx.command_line);
    manifest.set("params", tuple(&p));
    args.budget.record(&mut manifest);
    let config = SeedSearchConfig {
        ceiling: args.ceiling,
    };
    let outcome = {
        let mut clock = Clock {
            start,
            err: args.budget.progress.then_some(&mut *ctx.err),
        };
        search_seed_with(&p, &args.budget.budget(), &config, &mut clock)?
    };
    let status = describe_outcome(ctx, &outcome, &mut manifest);
    if let SearchOutcome::Found(sol) = &outcome {
        record_stats(&mut manifest, &sol.stats);
        // never trust the search: re-check before writing
        if !verify_algebraic(&sol.a1, &p)?.ok {
            return Err(CliError::Input(format!(
                "internal error: search returned a matrix failing {p}"
            )));
        }
        let bytes = write_output(&args.out, &sol.a1, output_format(args.format, &args.out))?;
        manifest.output("a1", &args.out, &bytes);
        writeln!(
            ctx.out,
            "found {p} after {} nodes: {}",
            sol.stats.nodes,
            args.out.display()
        )?;
    }
    finish_manifest(&mut manifest, status, start, &manifest_path(&args.out))?;
    Ok(status)
}

/// First failed clause of the definition, for error messages.
fn first_failure(report: &VerifyReport) -> String {
    report
        .failures
        .first()
        .map(ToString::to_string)
        .unwrap_or_else(|| "unknown failure".into())
}

fn load_seed(
    path: &Path,
    params: &SeedPairParams,
    manifest: &mut RunManifest,
) -> Result<(BinaryMatrix, DsrgParams), CliError> {
    let (a1, bytes) = read_input(path)?;
    manifest.input("a1", path, &bytes);
    if !a1.is_square() {
        return Err(CliError::Input(format!(
            "{}: seed matrix is {}x{}, not square",
            path.display(),
            a1.rows(),
            a1.cols()
        )));
    }
    let p = params.resolve(&a1)?;
    let report = verify_algebraic(&a1, &p)?;
    if !report.ok {
        return Err(CliError::Input(format!(
            "{}: not a DSRG with parameters {p} ({} failures; first: {})",
            path.display(),
            report.total_failures,
            first_failure(&report)
        )));
    }
    Ok((a1, p))
}

fn cmd_search_pair(ctx: &mut Context<'_>, args: &SearchPairArgs) -> Result<ExitStatus, CliError> {
    let start = Instant::now();
    let mut manifest = RunManifest::new(&ctx.command_line);
    let (a1, p) = load_seed(&args.seed, &args.params, &mut manifest)?;
    manifest.set("params", tuple(&p));
    manifest.set("force", args.force);
    args.budget.record(&mut manifest);
    let problem = PairSearchProblem::new(a1, p)?.with_force(args.force);
    let outcome = {
        let mut clock = Clock {
            start,
            err: args.budget.progress.then_some(&mut *ctx.err),
        };
        search_pair_with(&problem, &args.budget.budget(), &mut clock)?
    };
    let status = describe_outcome(ctx, &outcome, &mut manifest);
    if let SearchOutcome::Found(sol) = &outcome {
        record_stats(&mut manifest, &sol.stats);
        let b = write_output(
            &args.out_b,
            &sol.b1,
            output_format(args.format, &args.out_b),
        )?;
        let c = write_output(
            &args.out_c,
            &sol.c1,
            output_format(args.format, &args.out_c),
        )?;
        manifest.output("b1", &args.out_b, &b);
        manifest.output("c1", &args.out_c, &c);
        writeln!(
            ctx.out,
            "found B1 {}x{} and C1 {}x{} after {} nodes",
            sol.b1.rows(),
            sol.b1.cols(),
            sol.c1.rows(),
            sol.c1.cols(),
            sol.stats.nodes
        )?;
    }
    finish_manifest(&mut manifest, status, start, &manifest_path(&args.out_b))?;
    Ok(status)
}

fn report_json(report: &VerifyReport, p: &DsrgParams) -> serde_json::Value {
    json!({
        "ok": report.ok,
        "mode": report.mode.to_string(),
        "params": [p.v, p.k, p.t, p.lambda, p.mu],
        "total_failures": report.total_failures,
        "samples_checked": report.samples_checked,
        "failures": report.failures.iter().map(|f| json!({
            "i": f.i,
            "j": f.j,
            "expected": f.expected,
            "got": f.got,
            "message": f.to_string(),
        })).collect::<Vec<_>>(),
    })
}

fn print_report(out: &mut dyn Write, label: &str, report: &VerifyReport) -> std::io::Result<()> {
    if report.ok {
        write!(out, "{label}: ok ({})", report.mode)?;
        if report.samples_checked > 0 {
            write!(out, ", {} samples", report.samples_checked)?;
        }
        writeln!(out)
    } else {
        writeln!(
            out,
            "{label}: FAILED ({}), {} failures",
            report.mode, report.total_failures
        )?;
        for f in &report.failures {
            writeln!(out, "  {f}")?;
        }
        if report.total_failures > report.failures.len() as u64 {
            writeln!(
                out,
                "  ... {} more",
                report.total_failures - report.failures.len() as u64
            )?;
        }
        Ok(())
    }
}

fn cmd_verify(ctx: &mut Context<'_>, args: &VerifyArgs) -> Result<ExitStatus, CliError> {
    let base = args.params.resolve()?;
    let p = match args.level {
        Some(n) => family_params(&base, n)?,
        None => base,
    };
    let (a, _) = read_input(&args.matrix)?;
    let report = match args.mode {
        VerifyModeArg::Full => verify_algebraic_parallel(&a, &p, ctx.threads)?,
        VerifyModeArg::Combinatorial => verify_combinatorial(&a, &p)?,
        VerifyModeArg::Sampled => verify_sampled(&a, &p, args.samples, args.rng_seed)?,
    };
    if args.json {
        writeln!(ctx.out, "{}", report_json(&report, &p))?;
    } else {
        print_report(ctx.out, &format!("{} {p}", args.matrix.display()), &report)?;
    }
    Ok(if report.ok {
        ExitStatus::Ok
    } else {
        ExitStatus::VerificationFailed
    })
}

fn cmd_verify_pair(ctx: &mut Context<'_>, args: &VerifyPairArgs) -> Result<ExitStatus, CliError> {
    let (a1, _) = read_input(&args.seed)?;
    let (b1, _) = read_input(&args.b)?;
    let (c1, _) = read_input(&args.c)?;
    if !a1.is_square() {
        return Err(CliError::Input(format!(
            "{}: seed matrix is not square",
            args.seed.display()
        )));
    }
    let p = args.params.resolve(&a1)?;
    match check_seed_contract(&p, &a1, &b1, &c1) {
        Ok(()) => {
            writeln!(ctx.out, "seed contract holds for {p}")?;
            Ok(ExitStatus::Ok)
        }
        Err(CoreError::SeedContract(clause)) => {
            writeln!(ctx.out, "seed contract violated: {clause}")?;
            Ok(ExitStatus::VerificationFailed)
        }
        Err(e) => Err(e.into()),
    }
}

/// The seed triple for `build`: files if given, else the catalogue fixture.
fn build_inputs(
    args: &BuildArgs,
    manifest: &mut RunManifest,
) -> Result<(DsrgParams, [BinaryMatrix; 3]), CliError> {
    match (&args.seed, &args.b, &args.c) {
        (Some(a), Some(b), Some(c)) => {
            let mut load = |name: &str, path: &Path| -> Result<BinaryMatrix, CliError> {
                let (m, bytes) = read_input(path)?;
                manifest.input(name, path, &bytes);
                Ok(m)
            };
            let (a1, b1, c1) = (load("a1", a)?, load("b1", b)?, load("c1", c)?);
            if !a1.is_square() {
                return Err(CliError::Input(format!(
                    "{}: seed matrix is not square",
                    a.display()
                )));
            }
            let params = SeedPairParams {
                family: args.family,
                t: args.t,
                lambda: args.lambda,
            };
            Ok((params.resolve(&a1)?, [a1, b1, c1]))
        }
        (None, None, None) => {
            let n = args
                .family
                .ok_or_else(|| CliError::Input("give --seed, --b and --c, or --family".into()))?;
            let p = catalog_family(n)?;
            let fixture = catalog::fixture(n).ok_or_else(|| {
                CliError::Input(format!(
                    "no bundled seed for family {n} {p}; supply --seed, --b and --c"
                ))
            })?;
            manifest.set("fixture", format!("family {n}"));
            Ok((p, fixture))
        }
        _ => Err(CliError::Input(
            "--seed, --b and --c must be given together".into(),
        )),
    }
}

fn cmd_build(ctx: &mut Context<'_>, args: &BuildArgs) -> Result<ExitStatus, CliError> {
    let start = Instant::now();
    if args.levels == 0 {
        return Err(CliError::Input("--n must be at least 1".into()));
    }
    let mut manifest = RunManifest::new(&ctx.command_line);
    let (p, [a1, b1, c1]) = build_inputs(args, &mut manifest)?;
    manifest.set("params", tuple(&p));
    manifest.set("levels", args.levels);
    manifest.set("verify", format!("{:?}", args.verify).to_lowercase());
    manifest.set("samples", args.samples);
    manifest.set("rng_seed", args.rng_seed);
    manifest.set("alpha_block", args.alpha_block);
    let spec = FamilySpec::new(p, a1, b1, c1)?.with_alpha_block(args.alpha_block);
    fs::create_dir_all(&args.out)?;
    let format: MatrixFormat = args.format.into();

    let mut builder = FamilyBuilder::new(&spec);
    let mut status = ExitStatus::Ok;
    for n in 1..=args.levels {
        if n > 1 {
            builder.advance().map_err(|e| level_error(n, e))?;
        }
        let term = builder.term()?;
        let path = args.out.join(format!("A{n}.{}", format.extension()));
        let bytes = write_output(&path, &term.a_n, format)?;
        manifest.output(&format!("A{n}"), &path, &bytes);
        manifest.set(&format!("term.{n}.params"), tuple(&term.params));

        let mut reports = Vec::new();
        match args.verify {
            BuildVerify::Full if term.order() <= FULL_PRODUCT_LIMIT => reports.push(
                verify_algebraic_parallel(&term.a_n, &term.params, ctx.threads)?,
            ),
            BuildVerify::Full | BuildVerify::Sampled => reports.push(verify_sampled(
                &term.a_n,
                &term.params,
                args.samples,
                args.rng_seed,
            )?),
            BuildVerify::Structural => {}
        }
        reports.push(check_structure(&spec, n).map_err(|e| level_error(n, e))?);
        let mut summary = Vec::new();
        for r in &reports {
            summary.push(format!("{} {}", r.mode, if r.ok { "ok" } else { "FAILED" }));
            if !r.ok {
                status = ExitStatus::VerificationFailed;
                print_report(ctx.out, &format!("A{n}"), r)?;
            }
        }
        manifest.set(&format!("term.{n}.verify"), summary.join(", "));
        writeln!(
            ctx.out,
            "A{n}  order {}  {}  {}",
            term.order(),
            term.params,
            summary.join(", ")
        )?;
    }
    finish_manifest(
        &mut manifest,
        status,
        start,
        &args.out.join("build.manifest"),
    )?;
    Ok(status)
}

fn level_error(n: usize, e: CoreError) -> CliError {
    CliError::Input(format!("cannot build A{n}: {e}"))
}

fn cmd_convert(ctx: &mut Context<'_>, args: &ConvertArgs) -> Result<ExitStatus, CliError> {
    let start = Instant::now();
    let mut manifest = RunManifest::new(&ctx.command_line);
    let (m, bytes) = read_input(&args.input)?;
    manifest.input("matrix", &args.input, &bytes);
    let format = output_format(args.to, &args.output);
    let written = write_output(&args.output, &m, format)?;
    manifest.output("matrix", &args.output, &written);
    writeln!(
        ctx.out,
        "{}x{} matrix written as {:?}",
        m.rows(),
        m.cols(),
        format
    )?;
    finish_manifest(
        &mut manifest,
        ExitStatus::Ok,
        start,
        &manifest_path(&args.output),
    )?;
    Ok(ExitStatus::Ok)
}

pub fn execute(ctx: &mut Context<'_>, command: &Command) -> Result<ExitStatus, CliError> {
    match command {
        Command::Params(a) => cmd_params(ctx, a),
        Command::SearchSeed(a) => cmd_search_seed(ctx, a),
        Command::SearchPair(a) => cmd_search_pair(ctx, a),
        Command::Verify(a) => cmd_verify(ctx, a),
        Command::VerifyPair(a) => cmd_verify_pair(ctx, a),
        Command::Build(a) => cmd_build(ctx, a),
        Command::Convert(a) => cmd_convert(ctx, a),
    }
}

/// Parses `args` (program name first) and runs the command.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> ExitStatus
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let args: Vec<OsString> = args.into_iter().map(Into::into).collect();
    let cli = match Cli::try_parse_from(&args) {
        Ok(cli) => cli,
        Err(e) => {
            if e.use_stderr() {
                let _ = write!(err, "{}", e.render());
                return ExitStatus::InputError;
            }
            let _ = write!(out, "{}", e.render());
            return ExitStatus::Ok;
        }
    };
    let command_line = args
        .iter()
        .skip(1)
        .map(|a| a.to_string_lossy())
        .collect::<Vec<_>>()
        .join(" ");
    let threads = cli
        .threads
        .filter(|&t| t > 0)
        .unwrap_or_else(default_threads);
    let mut ctx = Context {
        out,
        err,
        threads,
        command_line,
    };
    match execute(&mut ctx, &cli.command) {
        Ok(status) => status,
        Err(e) => {
            let _ = writeln!(ctx.err, "error: {e}");
            ExitStatus::InputError
        }
    }
}
