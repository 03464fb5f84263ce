//! Command-line front end for `cyclosrg`.
//!
//! Three subcommands:
//!
//! * `compute` prints the critical group of `G(p, ℓ, t)`;
//! * `verify` runs one of the verification suites (`srg`, `stickelberger`,
//!   `blocks`, `walks`, or `all`);
//! * `table` lists the `p`-multiplicities of `G(p, 3, t)` for several `p`.
//!
//! Exit codes: 0 on success, 1 for usage and bound errors, 2 when two
//! computations that must agree do not.

pub mod report;

use std::ffi::OsString;
use std::fs::File;
use std::io::BufWriter;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use cyclosrg::critgroup::{self, Check};
use cyclosrg::galois::{self, GaloisRing, JacobiContext};
use cyclosrg::{ell3, graph, Bounds, FieldTable, Method, Params};
use serde_json::{json, Value};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Core(#[from] cyclosrg::Error),
    #[error("cannot write {path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error("malformed result JSON: {0}")]
    Json(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Core(e) if e.is_mismatch() => 2,
            _ => 1,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Text,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum MethodArg {
    Formula,
    Bruteforce,
    Both,
}

impl From<MethodArg> for Method {
    fn from(m: MethodArg) -> Method {
        match m {
            MethodArg::Formula => Method::Formula,
            MethodArg::Bruteforce => Method::Bruteforce,
            MethodArg::Both => Method::Both,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Suite {
    Srg,
    Stickelberger,
    Blocks,
    Walks,
    All,
}

#[derive(Debug, Parser)]
#[command(name = "cyclosrg", version, about = "Sandpile groups of the cyclotomic strongly regular graphs G(p, ell, t)")]
pub struct Cli {
    /// Output format.
    #[arg(long, value_enum, default_value = "json", global = true)]
    pub format: Format,
    /// Worker threads (default: available parallelism).
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct GraphArgs {
    #[arg(long)]
    pub p: u64,
    #[arg(long)]
    pub ell: u64,
    #[arg(long)]
    pub t: u32,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Compute the critical group.
    Compute {
        #[command(flatten)]
        graph: GraphArgs,
        #[arg(long, value_enum, default_value = "formula")]
        method: MethodArg,
        /// Write the Laplacian, one row per line, entries in decimal.
        #[arg(long, value_name = "PATH")]
        export_laplacian: Option<PathBuf>,
    },
    /// Run a verification suite.
    Verify {
        #[command(flatten)]
        graph: GraphArgs,
        #[arg(long, value_enum, default_value = "all")]
        which: Suite,
        /// Galois ring precision N (default: v_p(uv) + 4).
        #[arg(long)]
        precision: Option<u32>,
        /// Seed for sampled checks on large fields.
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Tabulate p-multiplicities of G(p, 3, t) for a list of primes.
    Table {
        #[arg(long, default_value_t = 3)]
        ell: u64,
        #[arg(long)]
        t: u32,
        #[arg(long, value_delimiter = ',', required = true)]
        p_list: Vec<u64>,
    },
}

/// A validated request: parameters are checked before any work starts.
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub task: Task,
    pub format: Format,
    pub bounds: Bounds,
    pub threads: Option<usize>,
}

#[derive(Debug, Clone)]
pub enum Task {
    Compute { params: Params, method: Method, export_laplacian: Option<PathBuf> },
    Verify { params: Params, which: Suite, precision: Option<u32>, seed: u64 },
    Table { t: u32, primes: Vec<u64> },
}

impl RunConfig {
    pub fn from_cli(cli: Cli, bounds: Bounds) -> Result<Self, CliError> {
        let params = |g: GraphArgs| Params::new(g.p, g.ell, g.t);
        let task = match cli.command {
            Command::Compute { graph, method, export_laplacian } => {
                Task::Compute { params: params(graph)?, method: method.into(), export_laplacian }
            }
            Command::Verify { graph, which, precision, seed } => {
                let params = params(graph)?;
                if which == Suite::Walks && params.ell != 3 {
                    return Err(CliError::Usage("the walks suite needs ell = 3".into()));
                }
                Task::Verify { params, which, precision, seed }
            }
            Command::Table { ell, t, p_list } => {
                if ell != 3 {
                    return Err(CliError::Usage("table supports ell = 3 only".into()));
                }
                if p_list.is_empty() {
                    return Err(CliError::Usage("--p-list must name at least one prime".into()));
                }
                for &p in &p_list {
                    Params::new(p, 3, t)?;
                    ell3::Digits::new(p)?;
                }
                Task::Table { t, primes: p_list }
            }
        };
        if cli.threads == Some(0) {
            return Err(CliError::Usage("--threads must be positive".into()));
        }
        Ok(RunConfig { task, format: cli.format, bounds, threads: cli.threads })
    }
}

/// What a run printed and how it ended.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub stdout: String,
    pub stderr: String,
    pub code: i32,
}

impl Outcome {
    fn failed(e: &CliError, stdout: String) -> Self {
        Outcome { stdout, stderr: format!("error: {e}\n"), code: e.exit_code() }
    }
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I, bounds: Bounds) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            return match e.use_stderr() {
                true => Outcome { stdout: String::new(), stderr: text, code: 1 },
                false => Outcome { stdout: text, stderr: String::new(), code: 0 },
            };
        }
    };
    match RunConfig::from_cli(cli, bounds) {
        Ok(config) => execute(&config),
        Err(e) => Outcome::failed(&e, String::new()),
    }
}

pub fn execute(config: &RunConfig) -> Outcome {
    let go = || match &config.task {
        Task::Compute { params, method, export_laplacian } => {
            compute(params, *method, export_laplacian.as_deref(), config)
        }
        Task::Verify { params, which, precision, seed } => verify(params, *which, *precision, *seed, config),
        Task::Table { t, primes } => table(*t, primes, config.format),
    };
    match config.threads {
        Some(n) => match rayon::ThreadPoolBuilder::new().num_threads(n).build() {
            Ok(pool) => pool.install(go),
            Err(e) => Outcome::failed(&CliError::Usage(format!("cannot start {n} threads: {e}")), String::new()),
        },
        None => go(),
    }
}

fn render(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("serializable");
    s.push('\n');
    s
}

fn compute(params: &Params, method: Method, export: Option<&std::path::Path>, config: &RunConfig) -> Outcome {
    if let Some(path) = export {
        let written = FieldTable::build(params, config.bounds.max_field_q).map_err(CliError::from).and_then(|f| {
            let file = File::create(path).map_err(|source| CliError::Io { path: path.into(), source })?;
            graph::laplacian(&f)
                .write_rows(BufWriter::new(file))
                .map_err(|source| CliError::Io { path: path.into(), source })
        });
        if let Err(e) = written {
            return Outcome::failed(&e, String::new());
        }
    }
    match critgroup::critical_group(params, method, &config.bounds) {
        Ok(r) => {
            let stdout = match config.format {
                Format::Json => render(&report::result_to_json(&r)),
                Format::Text => report::result_to_text(&r),
            };
            Outcome { stdout, stderr: String::new(), code: 0 }
        }
        Err(e) => Outcome::failed(&e.into(), String::new()),
    }
}

fn suite_steps(params: &Params, which: Suite) -> Vec<Suite> {
    match which {
        Suite::All if params.ell == 3 => vec![Suite::Srg, Suite::Stickelberger, Suite::Blocks, Suite::Walks],
        Suite::All => vec![Suite::Srg, Suite::Stickelberger, Suite::Blocks],
        one => vec![one],
    }
}

fn run_step(
    params: &Params,
    step: Suite,
    precision: Option<u32>,
    seed: u64,
    bounds: &Bounds,
    field: &mut Option<FieldTable>,
) -> Result<Check, CliError> {
    let pass = |name: &str, detail: String| Check { name: name.into(), passed: true, detail };
    if step == Suite::Walks {
        ell3::threshold_rules_check(params.p)?;
        ell3::transfer_matrix_check(params.p)?;
        let walks = ell3::walk_oracle(params.p, params.t)?;
        let recursion = ell3::c_poly(params.p, params.t)?;
        let trace = ell3::digraph::transfer_trace(params.p, 2 * params.t)?;
        if walks != recursion || trace != recursion {
            return Err(cyclosrg::Error::Mismatch(format!(
                "closed walks {walks}, transfer trace {trace}, recursion {recursion}"
            ))
            .into());
        }
        return Ok(pass("walks", format!("closed walks of length {} match C({})", 2 * params.t, 2 * params.t)));
    }
    if field.is_none() {
        *field = Some(FieldTable::build(params, bounds.max_field_q)?);
    }
    let f = field.as_ref().expect("just built");
    let n = precision.unwrap_or_else(|| GaloisRing::default_precision(params));
    match step {
        Suite::Srg => Ok(pass("srg", graph::verify_srg(f)?.to_string())),
        Suite::Stickelberger => {
            let ctx = JacobiContext::new(f, n)?;
            let r = galois::stickelberger_check(&ctx, seed)?;
            let how = if r.exhaustive { "all" } else { "sampled" };
            Ok(pass("stickelberger", format!("{how} {} pairs agree at precision {n}", r.checked)))
        }
        Suite::Blocks => {
            let ctx = JacobiContext::new(f, n)?;
            let blocks = galois::block_multiplicities(&ctx)?;
            let formula = critgroup::formula_p_part(params, bounds)?;
            if blocks != formula {
                return Err(cyclosrg::Error::Mismatch(format!("blocks give {blocks}, closed form gives {formula}")).into());
            }
            Ok(pass("blocks", format!("{} blocks match; {blocks}", f.subgroup_order())))
        }
        Suite::Walks | Suite::All => unreachable!("expanded by suite_steps"),
    }
}

fn verify(params: &Params, which: Suite, precision: Option<u32>, seed: u64, config: &RunConfig) -> Outcome {
    let mut checks = Vec::new();
    let mut field = None;
    let mut failure = None;
    for step in suite_steps(params, which) {
        match run_step(params, step, precision, seed, &config.bounds, &mut field) {
            Ok(c) => checks.push(c),
            Err(e) => {
                let name = format!("{step:?}").to_lowercase();
                checks.push(Check { name, passed: false, detail: e.to_string() });
                failure = Some(e);
                break;
            }
        }
    }
    let stdout = match config.format {
        Format::Json => render(&json!({
            "schema": report::SCHEMA,
            "params": report::params_json(params),
            "checks": checks.iter().map(report::check_json).collect::<Vec<_>>(),
        })),
        Format::Text => report::checks_to_text(&params.to_string(), &checks),
    };
    match failure {
        Some(e) => Outcome::failed(&e, stdout),
        None => Outcome { stdout, stderr: String::new(), code: 0 },
    }
}

fn table(t: u32, primes: &[u64], format: Format) -> Outcome {
    let mut rows = Vec::new();
    for &p in primes {
        match ell3::theorem_e3(p, t) {
            Ok(m) => rows.push((p, m)),
            Err(e) => return Outcome::failed(&e.into(), String::new()),
        }
    }
    let stdout = match format {
        Format::Json => render(&json!({
            "schema": report::SCHEMA,
            "ell": 3,
            "t": t,
            "rows": rows
                .iter()
                .map(|(p, m)| json!({"p": p, "p_multiplicities": report::multiplicities_json(m)}))
                .collect::<Vec<_>>(),
        })),
        Format::Text => rows.iter().map(|(p, m)| format!("p = {p}: {m}\n")).collect(),
    };
    Outcome { stdout, stderr: String::new(), code: 0 }
}
