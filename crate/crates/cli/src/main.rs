//! `grazing`: ray tables, beam fields, grazing-amplitude sweeps and the
//! verification suites, as CSV or JSON.
//!
//! Exit codes: 0 success, 1 usage, 2 numerical failure (non-convergence or a
//! failed verification check), 3 I/O.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

mod commands;
mod grid;
mod table;

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use grazing::grazing::Method;
use grazing::ray_beam::RayParams;
use grazing::verify::Suite;

use table::Table;

/// Environment variable read when `--threads` is absent.
const THREADS_ENV: &str = "GRAZING_THREADS";

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Numerical(String),
    Io(String),
}

impl CliError {
    fn code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 1,
            CliError::Numerical(_) => 2,
            CliError::Io(_) => 3,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Usage(m) => write!(f, "usage error: {m}"),
            CliError::Numerical(m) => write!(f, "numerical failure: {m}"),
            CliError::Io(m) => write!(f, "i/o error: {m}"),
        }
    }
}

#[derive(Parser, Debug)]
#[command(name = "grazing", version, about = "Grazing Gaussian beam lab")]
struct Cli {
    #[command(flatten)]
    common: Common,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct Common {
    /// Output file; standard output when absent.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Output format (CSV by default, JSON for `verify`).
    #[arg(long, value_enum, global = true)]
    format: Option<Format>,
    /// Worker threads; falls back to $GRAZING_THREADS, then to all cores.
    #[arg(long, global = true)]
    threads: Option<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Rays of the reduced flow.
    #[command(subcommand)]
    Ray(RayCommand),
    /// The Gaussian beam.
    #[command(subcommand)]
    Beam(BeamCommand),
    /// The reflected wave on the central ray.
    #[command(subcommand)]
    Graze(GrazeCommand),
    /// Run a verification suite (airy, beam, appendix1, appendix2,
    /// appendix3, closedform or all).
    Verify { suite: String },
}

#[derive(Subcommand, Debug)]
enum RayCommand {
    /// Tabulate a ray against y. Without initial data the central ray.
    Trace {
        /// y values: list `a,b,c` or range `lo:hi:step`.
        #[arg(long, default_value = "-2:2:0.5", allow_hyphen_values = true)]
        y: String,
        #[arg(long, allow_hyphen_values = true)]
        x0: Option<f64>,
        #[arg(long, allow_hyphen_values = true)]
        t0: Option<f64>,
        #[arg(long, allow_hyphen_values = true)]
        xi0: Option<f64>,
        #[arg(long, allow_hyphen_values = true)]
        tau0: Option<f64>,
    },
}

#[derive(Subcommand, Debug)]
enum BeamCommand {
    /// Beam field on the product grid x * y * t for each k.
    Field {
        #[arg(long, allow_hyphen_values = true)]
        x: String,
        #[arg(long, allow_hyphen_values = true)]
        y: String,
        #[arg(long, allow_hyphen_values = true)]
        t: String,
        #[arg(long)]
        k: String,
    },
    /// Beam on its own central ray (independent of k).
    OnRay {
        #[arg(long)]
        x: String,
    },
}

#[derive(Subcommand, Debug)]
enum GrazeCommand {
    /// w on the central ray for every (x, k, method).
    W {
        #[arg(long)]
        x: String,
        #[arg(long)]
        k: Option<String>,
        /// Comma-separated: closed, u-integral, z-integral, spectral.
        #[arg(long, default_value = "closed,u-integral")]
        method: String,
        /// Absolute tolerance; each route has its own default.
        #[arg(long)]
        tol: Option<f64>,
    },
    /// |v|, |w| and |v - w| of the reflected beam on the ray.
    Reflected {
        #[arg(long, default_value = "1e-4,1e-3,1e-2,0.1,0.5,1,2,4")]
        x: String,
    },
}

enum Report {
    Table(Table),
    Verification(Vec<grazing::verify::VerificationReport>, bool),
}

fn values(s: &str) -> Result<Vec<f64>, CliError> {
    grid::parse_values(s).map_err(|e| CliError::Usage(e.to_string()))
}

fn methods(s: &str) -> Result<Vec<Method>, CliError> {
    s.split(',')
        .map(|m| m.trim().parse::<Method>().map_err(|e| CliError::Usage(e.to_string())))
        .collect()
}

fn thread_budget(flag: Option<usize>) -> Result<Option<usize>, CliError> {
    let n = match flag {
        Some(n) => Some(n),
        None => match std::env::var(THREADS_ENV) {
            Ok(v) => Some(
                v.trim()
                    .parse()
                    .map_err(|_| CliError::Usage(format!("{THREADS_ENV} must be a positive integer, got {v:?}")))?,
            ),
            Err(_) => None,
        },
    };
    match n {
        Some(0) => Err(CliError::Usage("thread count must be positive".into())),
        n => Ok(n),
    }
}

fn run(cli: Cli) -> Result<bool, CliError> {
    if let Some(n) = thread_budget(cli.common.threads)? {
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| CliError::Usage(format!("cannot size the thread pool: {e}")))?;
    }

    let (report, failed) = match cli.command {
        Command::Ray(RayCommand::Trace { y, x0, t0, xi0, tau0 }) => {
            let params = if [x0, t0, xi0, tau0].iter().any(Option::is_some) {
                let c = RayParams::<f64>::central();
                Some(RayParams {
                    x0: x0.unwrap_or(c.x0),
                    t0: t0.unwrap_or(c.t0),
                    xi0: xi0.unwrap_or(c.xi0),
                    tau0: tau0.unwrap_or(c.tau0),
                })
            } else {
                None
            };
            (Report::Table(commands::ray_trace(&values(&y)?, params)), false)
        }
        Command::Beam(BeamCommand::Field { x, y, t, k }) => (
            Report::Table(commands::beam_grid(
                &values(&x)?,
                &values(&y)?,
                &values(&t)?,
                &values(&k)?,
            )?),
            false,
        ),
        Command::Beam(BeamCommand::OnRay { x }) => (Report::Table(commands::beam_ray(&values(&x)?)?), false),
        Command::Graze(GrazeCommand::W { x, k, method, tol }) => {
            let ks = match k {
                Some(k) => values(&k)?,
                None => Vec::new(),
            };
            let (t, failed) = commands::graze_w(&values(&x)?, &ks, &methods(&method)?, tol)?;
            (Report::Table(t), failed)
        }
        Command::Graze(GrazeCommand::Reflected { x }) => {
            (Report::Table(commands::graze_reflected(&values(&x)?)?), false)
        }
        Command::Verify { suite } => {
            let suites = if suite == "all" {
                Suite::ALL.to_vec()
            } else {
                vec![suite.parse::<Suite>().map_err(|e| CliError::Usage(e.to_string()))?]
            };
            let reports = commands::verify_suites(&suites)?;
            let failed = reports.iter().any(|r| !r.overall);
            (Report::Verification(reports, suite == "all"), failed)
        }
    };

    let format = cli.common.format.unwrap_or(match report {
        Report::Verification(..) => Format::Json,
        Report::Table(_) => Format::Csv,
    });
    write_report(&report, format, cli.common.out.as_deref())?;
    Ok(failed)
}

fn write_report(report: &Report, format: Format, out: Option<&std::path::Path>) -> Result<(), CliError> {
    let target = out.map_or_else(|| "standard output".to_owned(), |p| p.display().to_string());
    let io_err = |e: &dyn std::fmt::Display| CliError::Io(format!("{target}: {e}"));
    let mut sink: Box<dyn Write> = match out {
        Some(p) => Box::new(BufWriter::new(File::create(p).map_err(|e| io_err(&e))?)),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    };
    match (report, format) {
        (Report::Table(t), Format::Csv) => t.write_csv(&mut sink).map_err(|e| io_err(&e))?,
        (Report::Table(t), Format::Json) => {
            serde_json::to_writer_pretty(&mut sink, &t.to_json()).map_err(|e| io_err(&e))?;
            writeln!(sink).map_err(|e| io_err(&e))?;
        }
        (Report::Verification(r, _), Format::Csv) => commands::verification_table(r)
            .write_csv(&mut sink)
            .map_err(|e| io_err(&e))?,
        (Report::Verification(r, all), Format::Json) => {
            let res = if *all {
                serde_json::to_writer_pretty(&mut sink, r)
            } else {
                serde_json::to_writer_pretty(&mut sink, &r[0])
            };
            res.map_err(|e| io_err(&e))?;
            writeln!(sink).map_err(|e| io_err(&e))?;
        }
    }
    sink.flush().map_err(|e| io_err(&e))
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(false) => ExitCode::SUCCESS,
        Ok(true) => {
            eprintln!("numerical failure: see the status column or the failed checks");
            ExitCode::from(2)
        }
        Err(e) => {
            eprintln!("{e}");
            ExitCode::from(e.code())
        }
    }
}
