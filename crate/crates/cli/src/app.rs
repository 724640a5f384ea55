//! Argument parsing and dispatch.

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

use crate::commands::{self, Keys};
use crate::output::{emit, Table};
use crate::selftest::selftest;
use crate::settings::{read_config_file, CliError, CliResult, Settings};

pub const CONFIG_ENV: &str = "REGULAB_CONFIG";

#[derive(Debug, Parser)]
#[command(name = "regulab", version, about = "Regulator dependence of renormalized energy densities")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args, Default)]
pub struct OutputArgs {
    /// csv or json
    #[arg(long, global = true)]
    pub format: Option<String>,
    /// Output file; standard output when omitted
    #[arg(long, global = true)]
    pub out: Option<String>,
    /// `key = value` config file; defaults to $REGULAB_CONFIG
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
}

#[derive(Debug, Args, Default)]
pub struct RegulatorArgs {
    #[arg(long, allow_hyphen_values = true)]
    pub eps0: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    pub eps1: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    pub tau: Option<String>,
    /// p0,p1,ptau[,c0,c1,ctau]: eps0 = c0 s^p0, eps1 = c1 s^p1, tau = ctau s^ptau
    #[arg(long)]
    pub path: Option<String>,
    /// Comma-separated, strictly decreasing s values
    #[arg(long = "s-schedule")]
    pub s_schedule: Option<String>,
}

impl RegulatorArgs {
    fn pairs(&self) -> Vec<(&'static str, Option<String>)> {
        vec![
            ("eps0", self.eps0.clone()),
            ("eps1", self.eps1.clone()),
            ("tau", self.tau.clone()),
            ("path", self.path.clone()),
            ("s-schedule", self.s_schedule.clone()),
        ]
    }
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Static square well: renormalized energy density over an x grid
    WellEnergy {
        #[arg(long, allow_hyphen_values = true)]
        lambda: Option<String>,
        /// Half-width of the well
        #[arg(long)]
        a: Option<String>,
        #[command(flatten)]
        reg: RegulatorArgs,
        /// x grid as start:stop:count
        #[arg(long, allow_hyphen_values = true)]
        grid: Option<String>,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Step potential: mode-regularized density, optionally against point splitting
    StepEnergy {
        #[arg(long, allow_hyphen_values = true)]
        lambda: Option<String>,
        #[arg(long)]
        mass: Option<String>,
        #[command(flatten)]
        reg: RegulatorArgs,
        /// t grid as start:stop:count
        #[arg(long)]
        grid: Option<String>,
        /// Also compute the point-split density, D-term and residual
        #[arg(long)]
        compare: bool,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Classify the s -> 0 limit of a regulator-dependent expression along a path
    LimitScan {
        /// ratio239, rstatic317, dterm616 or flanagan-delta
        #[arg(long)]
        expr: Option<String>,
        #[arg(long)]
        path: Option<String>,
        #[arg(long = "s-schedule")]
        s_schedule: Option<String>,
        #[arg(long, allow_hyphen_values = true)]
        lambda: Option<String>,
        /// Conformal map V(v) for flanagan-delta
        #[arg(long = "V", allow_hyphen_values = true)]
        map: Option<String>,
        /// Evaluation point for flanagan-delta
        #[arg(long = "v", allow_hyphen_values = true)]
        at: Option<String>,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Point-split correction under a conformal map V(v)
    Flanagan {
        #[arg(long = "V", allow_hyphen_values = true)]
        map: Option<String>,
        /// v grid as start:stop:count
        #[arg(long, allow_hyphen_values = true)]
        grid: Option<String>,
        #[arg(long)]
        tau: Option<String>,
        /// taylor, tau_first or pointsplit
        #[arg(long)]
        mode: Option<String>,
        /// vbar - v in pointsplit mode
        #[arg(long, allow_hyphen_values = true)]
        split: Option<String>,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Right-hand side of the spatial quantum inequality for a weight rho(x)
    QiBound {
        #[arg(long, allow_hyphen_values = true)]
        rho: Option<String>,
        /// lo,hi
        #[arg(long, allow_hyphen_values = true)]
        support: Option<String>,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Run the oracle checks and print one line per check
    Selftest {
        #[command(flatten)]
        output: OutputArgs,
    },
}

fn load_config(output: &OutputArgs) -> CliResult<BTreeMap<String, String>> {
    let path = output
        .config
        .clone()
        .or_else(|| std::env::var_os(CONFIG_ENV).map(PathBuf::from));
    match path {
        Some(p) => read_config_file(&p),
        None => Ok(BTreeMap::new()),
    }
}

fn settings(keys: Keys, output: &OutputArgs, mut flags: Vec<(&'static str, Option<String>)>) -> CliResult<Settings> {
    let config = load_config(output)?;
    flags.push(("format", output.format.clone()));
    flags.push(("out", output.out.clone()));
    Settings::resolve(keys, &config, &flags)
}

fn write(table: &Table, s: &Settings) -> CliResult<()> {
    let run = s.run_config()?;
    emit(&table.render(run.output_format), run.output_path.as_deref())
}

/// Runs one invocation and returns the process exit code.
pub fn run_cli(cli: Cli) -> CliResult<()> {
    match cli.command {
        Command::WellEnergy { lambda, a, reg, grid, output } => {
            let mut flags = vec![("lambda", lambda), ("a", a), ("grid", grid)];
            flags.extend(reg.pairs());
            let s = settings(commands::WELL_KEYS, &output, flags)?;
            write(&commands::well_energy(&s)?, &s)
        }
        Command::StepEnergy { lambda, mass, reg, grid, compare, output } => {
            let mut flags = vec![
                ("lambda", lambda),
                ("mass", mass),
                ("grid", grid),
                ("compare", compare.then(|| "true".to_string())),
            ];
            flags.extend(reg.pairs());
            let s = settings(commands::STEP_KEYS, &output, flags)?;
            write(&commands::step_energy(&s)?, &s)
        }
        Command::LimitScan { expr, path, s_schedule, lambda, map, at, output } => {
            let flags = vec![
                ("expr", expr),
                ("path", path),
                ("s-schedule", s_schedule),
                ("lambda", lambda),
                ("V", map),
                ("v", at),
            ];
            let s = settings(commands::SCAN_KEYS, &output, flags)?;
            write(&commands::limit_scan(&s)?, &s)
        }
        Command::Flanagan { map, grid, tau, mode, split, output } => {
            let flags = vec![("V", map), ("grid", grid), ("tau", tau), ("mode", mode), ("split", split)];
            let s = settings(commands::FLANAGAN_KEYS, &output, flags)?;
            write(&commands::flanagan(&s)?, &s)
        }
        Command::QiBound { rho, support, output } => {
            let s = settings(commands::QI_KEYS, &output, vec![("rho", rho), ("support", support)])?;
            write(&commands::qi_bound(&s)?, &s)
        }
        Command::Selftest { output } => {
            let s = settings(commands::SELFTEST_KEYS, &output, vec![])?;
            let run = s.run_config()?;
            let (table, ok) = selftest(s.resolved(), &run.quadrature)?;
            write(&table, &s)?;
            if ok {
                Ok(())
            } else {
                Err(CliError {
                    code: 3,
                    message: "selftest: one or more checks failed".into(),
                })
            }
        }
    }
}

/// Parses `args` and runs; returns the exit code after reporting any error on stderr.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    match run_cli(cli) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            e.code
        }
    }
}
