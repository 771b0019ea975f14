//! Command-line front end. All numeric CSV fields use 17 significant
//! digits so identical runs produce identical bytes.

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};

use crate::error::{domain, Error};
use crate::floatsys::FloatSystem;
use crate::quadrature::QuadratureConfig;
use crate::range::{frontier_search, FrontierKind};
use crate::recursion::{log_i, log_k, log_k_scaled};
use crate::student::{error_report, Method, Precision};

pub const EXIT_OK: i32 = 0;
pub const EXIT_IO: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_DOMAIN: i32 = 3;
pub const EXIT_CONVERGENCE: i32 = 4;

#[derive(Debug, Parser)]
#[command(name = "logbessel", version, about = "Log-domain modified Bessel K and overflow analysis")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Evaluate log K, scaled log K or log I on a grid of (nu, z).
    Eval(EvalArgs),
    /// Trace overflow or underflow frontiers against the analytic bounds.
    RegionMap(RegionMapArgs),
    /// Student-t density by characteristic-function inversion.
    StudentDemo(StudentArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Function {
    Logk,
    LogkScaled,
    Logi,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Output {
    Text,
    Csv,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum KindArg {
    Overflow,
    Underflow,
}

#[derive(Debug, clap::Args)]
pub struct EvalArgs {
    /// Orders, comma separated.
    #[arg(long, required = true, value_delimiter = ',', allow_negative_numbers = true)]
    pub nu: Vec<f64>,
    /// Arguments, comma separated.
    #[arg(long, required = true, value_delimiter = ',', allow_negative_numbers = true)]
    pub z: Vec<f64>,
    #[arg(long, value_enum, default_value = "logk")]
    pub function: Function,
    #[arg(long, value_enum, default_value = "text")]
    pub output: Output,
}

#[derive(Debug, clap::Args)]
pub struct RegionMapArgs {
    /// single, double or custom:P,L,U
    #[arg(long, default_value = "double")]
    pub float_system: String,
    #[arg(long, value_enum, default_value = "overflow")]
    pub kind: KindArg,
    #[arg(long, default_value_t = 0.01, allow_negative_numbers = true)]
    pub z_min: f64,
    #[arg(long, default_value_t = 100.0, allow_negative_numbers = true)]
    pub z_max: f64,
    #[arg(long, default_value_t = 50)]
    pub z_steps: usize,
    /// Order grid for the underflow kind.
    #[arg(long, default_value_t = 1.0, allow_negative_numbers = true)]
    pub nu_min: f64,
    #[arg(long, default_value_t = 100.0, allow_negative_numbers = true)]
    pub nu_max: f64,
    #[arg(long, default_value_t = 50)]
    pub nu_steps: usize,
    /// Write CSV here instead of standard output.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, clap::Args)]
pub struct StudentArgs {
    #[arg(long, value_delimiter = ',', default_value = "1,10,100,1000,10000")]
    pub nu_list: Vec<f64>,
    #[arg(long, default_value_t = -5.0, allow_negative_numbers = true)]
    pub x_min: f64,
    #[arg(long, default_value_t = 5.0, allow_negative_numbers = true)]
    pub x_max: f64,
    #[arg(long, default_value_t = 101)]
    pub x_steps: usize,
    /// direct, logdirect, logrec
    #[arg(long, value_delimiter = ',', default_value = "direct,logdirect,logrec")]
    pub methods: Vec<String>,
    /// single emulates binary32 evaluation of the characteristic function.
    #[arg(long, default_value = "double")]
    pub float_system: String,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

/// A failure with its exit status.
#[derive(Debug)]
pub struct CliError {
    pub code: i32,
    pub message: String,
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::Domain { .. } => EXIT_DOMAIN,
            Error::NoConvergence { .. } | Error::Bracket { .. } => EXIT_CONVERGENCE,
        };
        CliError {
            code,
            message: e.to_string(),
        }
    }
}

impl From<io::Error> for CliError {
    fn from(e: io::Error) -> Self {
        CliError {
            code: EXIT_IO,
            message: e.to_string(),
        }
    }
}

/// Format with 17 significant digits.
pub fn fmt_num(x: f64) -> String {
    if x.is_finite() {
        format!("{x:.16e}")
    } else {
        format!("{x}")
    }
}

/// `steps` points from `lo` to `hi`, evenly spaced.
pub fn linear_grid(lo: f64, hi: f64, steps: usize) -> Vec<f64> {
    match steps {
        0 => Vec::new(),
        1 => vec![lo],
        _ => (0..steps)
            .map(|i| {
                if i == steps - 1 {
                    hi
                } else {
                    lo + (hi - lo) * i as f64 / (steps - 1) as f64
                }
            })
            .collect(),
    }
}

/// `steps` points from `lo` to `hi`, evenly spaced in logarithm.
pub fn log_grid(lo: f64, hi: f64, steps: usize) -> Vec<f64> {
    linear_grid(lo.ln(), hi.ln(), steps)
        .into_iter()
        .enumerate()
        .map(|(i, v)| match i {
            0 => lo,
            _ if i == steps - 1 => hi,
            _ => v.exp(),
        })
        .collect()
}

fn grid_args(op: &'static str, lo: f64, hi: f64, steps: usize, positive: bool) -> Result<(), CliError> {
    if steps == 0 || !lo.is_finite() || !hi.is_finite() || lo > hi || (steps > 1 && lo == hi) {
        return Err(domain(op, format!("invalid grid [{lo}, {hi}] with {steps} steps")).into());
    }
    if positive && !(lo > 0.0) {
        return Err(domain(op, format!("grid must be positive, got lower end {lo}")).into());
    }
    Ok(())
}

fn open_out<'a>(path: &Option<PathBuf>, stdout: &'a mut dyn Write) -> io::Result<Box<dyn Write + 'a>> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(File::create(p)?)),
        None => Box::new(stdout),
    })
}

fn run_eval(a: &EvalArgs, out: &mut dyn Write) -> Result<(), CliError> {
    let f = match a.function {
        Function::Logk => log_k,
        Function::LogkScaled => log_k_scaled,
        Function::Logi => log_i,
    };
    let mut rows = Vec::with_capacity(a.nu.len() * a.z.len());
    for &nu in &a.nu {
        for &z in &a.z {
            rows.push((nu, z, f(nu, z)?));
        }
    }
    match a.output {
        Output::Csv => {
            writeln!(out, "nu,z,value")?;
            for (nu, z, v) in rows {
                writeln!(out, "{},{},{}", fmt_num(nu), fmt_num(z), fmt_num(v))?;
            }
        }
        Output::Text => {
            let label = match a.function {
                Function::Logk => "log K",
                Function::LogkScaled => "log K~",
                Function::Logi => "log I",
            };
            for (nu, z, v) in rows {
                writeln!(out, "{label}_{nu}({z}) = {}", fmt_num(v))?;
            }
        }
    }
    Ok(())
}

fn run_region_map(a: &RegionMapArgs, stdout: &mut dyn Write) -> Result<(), CliError> {
    let sys: FloatSystem = a.float_system.parse()?;
    let (kind, grid, header) = match a.kind {
        KindArg::Overflow => {
            grid_args("region-map", a.z_min, a.z_max, a.z_steps, true)?;
            (
                FrontierKind::Overflow,
                log_grid(a.z_min, a.z_max, a.z_steps),
                "z,nu_sufficient,nu_empirical,nu_necessary",
            )
        }
        KindArg::Underflow => {
            grid_args("region-map", a.nu_min, a.nu_max, a.nu_steps, true)?;
            if a.nu_min < 1.0 {
                return Err(domain("region-map", format!("underflow map needs nu >= 1, got {}", a.nu_min)).into());
            }
            (
                FrontierKind::Underflow,
                log_grid(a.nu_min, a.nu_max, a.nu_steps),
                "nu,z_sufficient,z_empirical,z_necessary",
            )
        }
    };
    let curve = frontier_search(sys, kind, &grid)?;
    let mut out = open_out(&a.out, stdout)?;
    writeln!(out, "{header}")?;
    for s in &curve.samples {
        writeln!(
            out,
            "{},{},{},{}",
            fmt_num(s.at),
            fmt_num(s.sufficient),
            fmt_num(s.empirical),
            fmt_num(s.necessary)
        )?;
    }
    out.flush()?;
    Ok(())
}

fn run_student(a: &StudentArgs, stdout: &mut dyn Write, stderr: &mut dyn Write) -> Result<(), CliError> {
    let precision = match a.float_system.as_str() {
        "double" => Precision::Double,
        "single" => Precision::Single,
        other => {
            return Err(domain("student-demo", format!("float system `{other}` not supported (single or double)")).into())
        }
    };
    let methods = a
        .methods
        .iter()
        .map(|m| m.trim().parse::<Method>())
        .collect::<Result<Vec<_>, _>>()?;
    grid_args("student-demo", a.x_min, a.x_max, a.x_steps, false)?;
    let xs = linear_grid(a.x_min, a.x_max, a.x_steps);
    let cfg = QuadratureConfig::from_env();
    let rows = error_report(&a.nu_list, &xs, &methods, precision, &cfg)?;
    let mut out = open_out(&a.out, stdout)?;
    writeln!(out, "nu,x,method,pdf_gilpelaez,pdf_closed,abs_error,overflow_flag")?;
    for r in &rows {
        writeln!(
            out,
            "{},{},{},{},{},{},{}",
            fmt_num(r.nu),
            fmt_num(r.x),
            r.method,
            fmt_num(r.pdf_gilpelaez),
            fmt_num(r.pdf_closed),
            fmt_num(r.abs_error),
            r.overflow_flag as u8
        )?;
    }
    out.flush()?;
    let unconverged = rows.iter().filter(|r| !r.converged).count();
    if unconverged > 0 {
        writeln!(
            stderr,
            "warning: {unconverged} of {} integrals did not reach tolerance within {} subintervals",
            rows.len(),
            cfg.max_subdivisions
        )?;
    }
    Ok(())
}

/// Execute a parsed command. Warnings go to `stderr`.
pub fn execute(cli: &Cli, stdout: &mut dyn Write, stderr: &mut dyn Write) -> Result<(), CliError> {
    match &cli.command {
        Command::Eval(a) => run_eval(a, stdout),
        Command::RegionMap(a) => run_region_map(a, stdout),
        Command::StudentDemo(a) => run_student(a, stdout, stderr),
    }
}

/// Parse `args` (including the program name), run, and return the exit
/// status. Diagnostics go to `stderr`.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let _ = if e.use_stderr() {
                write!(stderr, "{e}")
            } else {
                write!(stdout, "{e}")
            };
            return code;
        }
    };
    match execute(&cli, stdout, stderr) {
        Ok(()) => EXIT_OK,
        Err(e) => {
            let _ = writeln!(stderr, "error: {}", e.message);
            e.code
        }
    }
}
