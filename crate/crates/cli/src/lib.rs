//! Command-line driver: generate or load a dual matrix, classify it, solve
//! it, cross-check against the dense oracle, and reproduce results tables.

pub mod record;

use std::fs::File;
use std::io::{self, Write};
use std::path::PathBuf;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use rayon::prelude::*;
use serde::Serialize;

use dual_perron::io::{matrix_to_json, read_matrix, write_trace_csv};
use dual_perron::oracle::{fd_check, lambda_d_oracle, spectrum, FD_STEP};
use dual_perron::{classify, generate, solve, DualMatrix, Error, ExampleId, ExampleSpec, Flag, SolverConfig};

use record::{render_table, RunRecord, TableRow};

/// Verification tolerances: `|Δλ_s| ≤ LS·ρ(A_s)`, `|Δλ_d| ≤ LD·(1 + |λ_d|)`,
/// finite-difference discrepancy `≤ FD·max(1, ρ(A_s))`.
pub const VERIFY_TOL_LAMBDA_S: f64 = 1e-8;
pub const VERIFY_TOL_LAMBDA_D: f64 = 1e-6;
pub const VERIFY_TOL_FD: f64 = 1e-5;

/// Seeds averaged by `table` for the random family.
pub const TABLE_SEEDS: u64 = 10;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error(transparent)]
    Core(#[from] Error),
    #[error("{0}")]
    Usage(String),
    #[error("i/o error: {0}")]
    Io(#[from] io::Error),
    #[error("iteration budget exhausted without convergence")]
    NotConverged,
    #[error("verification failed")]
    VerifyFailed,
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Core(e) => match e {
                Error::Parse(_)
                | Error::BadSpec(_)
                | Error::InvalidConfig(_)
                | Error::NonFinite(_)
                | Error::NotSquare { .. }
                | Error::DimensionMismatch { .. }
                | Error::NonPositiveVector(_)
                | Error::TooLarge { .. } => 2,
                Error::StructureViolation(_) => 3,
                _ => 1,
            },
            CliError::Io(_) => 2,
            CliError::NotConverged => 4,
            CliError::VerifyFailed => 5,
        }
    }
}

#[derive(Debug, Parser)]
#[command(name = "dual-perron", version, about = "Perron eigenpairs of dual number matrices")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run the Collatz iteration and print the eigenpair record.
    Solve {
        #[command(flatten)]
        input: InputArgs,
        #[command(flatten)]
        solver: SolverArgs,
        /// Write the per-iteration bounds as CSV.
        #[arg(long)]
        trace_out: Option<PathBuf>,
        #[arg(long)]
        json: bool,
    },
    /// Report irreducibility, period, primitivity and rate constants.
    Classify {
        #[command(flatten)]
        input: InputArgs,
        /// Shift used for the rate constants.
        #[arg(long, default_value_t = 1.0)]
        shift: f64,
        #[arg(long)]
        json: bool,
    },
    /// Cross-check the solver against the dense eigensolver oracle (n <= 200).
    Verify {
        #[command(flatten)]
        input: InputArgs,
        #[command(flatten)]
        solver: SolverArgs,
        #[arg(long)]
        json: bool,
    },
    /// Reproduce a results table over examples and sizes.
    Table {
        /// Comma-separated example ids.
        #[arg(long, value_delimiter = ',', default_value = "ex51,ex52,ex53,ex54")]
        examples: Vec<ExampleId>,
        /// Comma-separated sizes.
        #[arg(long, value_delimiter = ',', default_value = "10,100")]
        sizes: Vec<usize>,
        #[command(flatten)]
        solver: SolverArgs,
        #[arg(long)]
        json: bool,
    },
    /// Print the matrix as a JSON document.
    Dump {
        #[command(flatten)]
        input: InputArgs,
    },
}

#[derive(Debug, Args)]
#[group(required = true, multiple = false, id = "source")]
pub struct InputSource {
    /// Built-in example: ex1, ex2, ex51, ex52, ex53, ex54 (or 5.1 ... 5.4).
    #[arg(long)]
    pub example: Option<ExampleId>,
    /// JSON matrix file; `-` reads stdin.
    #[arg(long)]
    pub file: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct InputArgs {
    #[command(flatten)]
    pub source: InputSource,
    /// Order of a scalable example.
    #[arg(long, default_value_t = 10)]
    pub n: usize,
    /// Seed of the random example.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Example 2 parameters a,b,c,d.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub params: Option<Vec<f64>>,
}

#[derive(Debug, Args)]
pub struct SolverArgs {
    #[arg(long, default_value_t = 2000)]
    pub max_iter: usize,
    #[arg(long, default_value_t = 1e-8)]
    pub delta1: f64,
    #[arg(long, default_value_t = 1e-12)]
    pub delta2: f64,
    #[arg(long, default_value_t = 1.0)]
    pub shift: f64,
}

impl SolverArgs {
    pub fn config(&self) -> SolverConfig {
        SolverConfig { k_max: self.max_iter, delta1: self.delta1, delta2: self.delta2, rho: self.shift, x0: None }
    }
}

impl InputArgs {
    /// The matrix and a label for it.
    pub fn load(&self) -> Result<(DualMatrix, String), CliError> {
        if let Some(path) = &self.source.file {
            let a = if path.as_os_str() == "-" {
                read_matrix(io::stdin().lock())?
            } else {
                read_matrix(File::open(path)?)?
            };
            return Ok((a, path.display().to_string()));
        }
        let id = self.source.example.expect("clap enforces one source");
        if self.params.is_some() && id != ExampleId::Ex2 {
            return Err(CliError::Usage("--params only applies to ex2".into()));
        }
        let spec = match id {
            ExampleId::Ex2 => {
                let p = self.params.clone().unwrap_or_else(|| vec![1.0; 4]);
                let p: [f64; 4] = p
                    .try_into()
                    .map_err(|v: Vec<f64>| CliError::Usage(format!("--params needs 4 values, got {}", v.len())))?;
                ExampleSpec::ex2(p)
            }
            ExampleId::Ex54 => ExampleSpec::ex54(self.n, self.seed),
            _ => ExampleSpec::new(id, self.n),
        };
        let label = if id.is_fixed_size() { id.to_string() } else { format!("{id} (n={})", spec.n) };
        Ok((generate(&spec)?, label))
    }
}

fn timed_solve(a: &DualMatrix, cfg: &SolverConfig) -> Result<(dual_perron::PerronResult, f64), Error> {
    let t = Instant::now();
    let r = solve(a, cfg)?;
    Ok((r, t.elapsed().as_secs_f64()))
}

#[derive(Debug, Serialize)]
pub struct VerifyReport {
    pub source: String,
    pub n: usize,
    pub lambda_s: f64,
    pub lambda_d: f64,
    pub oracle_lambda_s: f64,
    pub oracle_lambda_d: f64,
    pub delta_lambda_s: f64,
    pub delta_lambda_d: f64,
    pub fd_discrepancy: f64,
    pub tol_lambda_s: f64,
    pub tol_lambda_d: f64,
    pub tol_fd: f64,
    pub pass: bool,
}

impl VerifyReport {
    fn render(&self) -> String {
        let line = |name: &str, v: f64, tol: f64| {
            format!("{name:<14}{v:>12.3e}  (tol {tol:.1e}) {}\n", if v <= tol { "ok" } else { "EXCEEDED" })
        };
        let mut out = format!("source        {}\nn             {}\n", self.source, self.n);
        out.push_str(&format!("solver        {:.12}+{:.12}ε\n", self.lambda_s, self.lambda_d));
        out.push_str(&format!("oracle        {:.12}+{:.12}ε\n", self.oracle_lambda_s, self.oracle_lambda_d));
        out.push_str(&line("|dlambda_s|", self.delta_lambda_s, self.tol_lambda_s));
        out.push_str(&line("|dlambda_d|", self.delta_lambda_d, self.tol_lambda_d));
        out.push_str(&line("fd check", self.fd_discrepancy, self.tol_fd));
        out.push_str(if self.pass { "verify: PASS\n" } else { "verify: FAIL\n" });
        out
    }
}

pub fn verify(a: &DualMatrix, source: String, cfg: &SolverConfig) -> Result<VerifyReport, CliError> {
    let report = spectrum(a.standard())?;
    let r = solve(a, cfg)?;
    let l = r.lambda.ok_or(CliError::NotConverged)?;
    let oracle_d = lambda_d_oracle(a, &report);
    let rho = report.perron_value;
    let fd = fd_check(a, &report, FD_STEP)?;
    let mut v = VerifyReport {
        source,
        n: a.n(),
        lambda_s: l.standard,
        lambda_d: l.dual,
        oracle_lambda_s: rho,
        oracle_lambda_d: oracle_d,
        delta_lambda_s: (l.standard - rho).abs(),
        delta_lambda_d: (l.dual - oracle_d).abs(),
        fd_discrepancy: fd,
        tol_lambda_s: VERIFY_TOL_LAMBDA_S * rho,
        tol_lambda_d: VERIFY_TOL_LAMBDA_D * (1.0 + l.dual.abs()),
        tol_fd: VERIFY_TOL_FD * rho.max(1.0),
        pass: false,
    };
    v.pass = v.delta_lambda_s <= v.tol_lambda_s && v.delta_lambda_d <= v.tol_lambda_d && v.fd_discrepancy <= v.tol_fd;
    Ok(v)
}

/// Table rows in the order `examples × sizes`; cells run concurrently.
pub fn table(examples: &[ExampleId], sizes: &[usize], cfg: &SolverConfig) -> Result<Vec<TableRow>, CliError> {
    let mut cells = Vec::new();
    for &id in examples {
        if id.is_fixed_size() {
            cells.push((id, 2));
        } else {
            cells.extend(sizes.iter().map(|&n| (id, n)));
        }
    }
    cells
        .par_iter()
        .map(|&(id, n)| {
            let specs: Vec<ExampleSpec> = match id {
                ExampleId::Ex54 => (0..TABLE_SEEDS).map(|s| ExampleSpec::ex54(n, s)).collect(),
                _ => vec![ExampleSpec::new(id, n)],
            };
            let mut records = Vec::with_capacity(specs.len());
            for spec in &specs {
                let a = generate(spec)?;
                let (r, secs) = timed_solve(&a, cfg)?;
                if r.flag == Flag::NotConverged {
                    return Err(CliError::NotConverged);
                }
                records.push(RunRecord::new(id.to_string(), n, &r, secs));
            }
            Ok(TableRow::average(id.label().to_string(), n, &records))
        })
        .collect()
}

fn json_line(out: &mut impl Write, value: &impl Serialize) -> Result<(), CliError> {
    let text = serde_json::to_string_pretty(value).map_err(|e| CliError::Usage(e.to_string()))?;
    writeln!(out, "{text}")?;
    Ok(())
}

/// Executes one command, writing its normal output to `out`.
pub fn run(cli: &Cli, out: &mut impl Write) -> Result<(), CliError> {
    match &cli.command {
        Command::Solve { input, solver, trace_out, json } => {
            let (a, source) = input.load()?;
            let (r, secs) = timed_solve(&a, &solver.config())?;
            if let Some(path) = trace_out {
                write_trace_csv(File::create(path)?, &r.trace)?;
            }
            let rec = RunRecord::new(source, a.n(), &r, secs);
            if *json {
                json_line(out, &rec)?;
            } else {
                write!(out, "{}", rec.render())?;
            }
            if r.flag == Flag::NotConverged {
                return Err(CliError::NotConverged);
            }
        }
        Command::Classify { input, shift, json } => {
            let (a, _) = input.load()?;
            let report = classify(a.standard(), *shift)?;
            if *json {
                json_line(out, &report)?;
            } else {
                write!(out, "{}", report.render())?;
            }
        }
        Command::Verify { input, solver, json } => {
            let (a, source) = input.load()?;
            let report = verify(&a, source, &solver.config())?;
            if *json {
                json_line(out, &report)?;
            } else {
                write!(out, "{}", report.render())?;
            }
            if !report.pass {
                return Err(CliError::VerifyFailed);
            }
        }
        Command::Table { examples, sizes, solver, json } => {
            let rows = table(examples, sizes, &solver.config())?;
            if *json {
                json_line(out, &rows)?;
            } else {
                write!(out, "{}", render_table(&rows))?;
            }
        }
        Command::Dump { input } => {
            let (a, _) = input.load()?;
            writeln!(out, "{}", matrix_to_json(&a))?;
        }
    }
    Ok(())
}
