use clap::{Parser, Subcommand, ValueEnum};
use nosig_cli::commands::{self, CliError, Execution, Which, EXIT_INPUT};
use nosig_cli::report::Format;
use nosig_core::analysis::RealizationMethod;
use nosig_core::scenario::DEFAULT_ENUMERATION_CAP;
use std::collections::BTreeMap;
use std::path::PathBuf;
use std::process::ExitCode;

/// Exact No-Signalling and hidden-variable analysis of measurement tables.
///
/// Exit codes: 0 property holds, 1 property fails or infeasible, 2 input error,
/// 3 enumeration cap exceeded.
#[derive(Debug, Parser)]
#[command(name = "nosig", version)]
struct Cli {
    /// Report format.
    #[arg(long, global = true, value_enum, default_value_t = FormatArg::Human)]
    format: FormatArg,
    /// Write the command's file here: the realized model for `realize`, the
    /// document for `generate`, the report otherwise.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Largest number of global assignments any analysis may enumerate.
    #[arg(long, global = true, default_value_t = DEFAULT_ENUMERATION_CAP)]
    enumeration_cap: usize,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum FormatArg {
    Human,
    Machine,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum MethodArg {
    Any,
    MinNegativity,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum WhichArg {
    Lambda,
    Parameter,
    Both,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Decide No-Signalling for an empirical model file.
    CheckNs { model: PathBuf },
    /// Build a Lambda-Independent canonical realization of an empirical model.
    Realize {
        model: PathBuf,
        #[arg(long, value_enum, default_value_t = MethodArg::MinNegativity)]
        method: MethodArg,
        /// Only accept a nonnegative (local) realization.
        #[arg(long)]
        require_nonneg: bool,
    },
    /// Check Lambda- and/or Parameter-Independence of an schv or general model.
    CheckIndependence {
        model: PathBuf,
        #[arg(long, value_enum, default_value_t = WhichArg::Both)]
        which: WhichArg,
    },
    /// Compare D, rank L, and the boundary basis rank for a scenario file.
    Dimension { scenario: PathBuf },
    /// Emit a scenario or model from a registered generator.
    Generate {
        name: String,
        #[arg(long)]
        parties: Option<String>,
        #[arg(long)]
        settings: Option<String>,
        #[arg(long)]
        outcomes: Option<String>,
        #[arg(long)]
        measurements: Option<String>,
        #[arg(long)]
        seed: Option<String>,
        /// Base scenario for random generators: bell or triangle.
        #[arg(long)]
        base: Option<String>,
        /// Perturb random No-Signalling tables toward the boundary (true or false).
        #[arg(long)]
        perturb: Option<String>,
    },
}

fn dispatch(cli: &Cli, echo: Vec<String>) -> Result<Execution, CliError> {
    let cap = cli.enumeration_cap;
    match &cli.command {
        Command::CheckNs { model } => commands::check_ns(echo, model, cap),
        Command::Realize { model, method, require_nonneg } => {
            let method = match method {
                MethodArg::Any => RealizationMethod::SolveAny,
                MethodArg::MinNegativity => RealizationMethod::MinNegativity,
            };
            commands::realize(echo, model, method, *require_nonneg, cap)
        }
        Command::CheckIndependence { model, which } => {
            let which = match which {
                WhichArg::Lambda => Which::Lambda,
                WhichArg::Parameter => Which::Parameter,
                WhichArg::Both => Which::Both,
            };
            commands::check_independence(echo, model, which, cap)
        }
        Command::Dimension { scenario } => commands::dimension(echo, scenario, cap),
        Command::Generate { name, parties, settings, outcomes, measurements, seed, base, perturb } => {
            let params: BTreeMap<String, String> = [
                ("parties", parties),
                ("settings", settings),
                ("outcomes", outcomes),
                ("measurements", measurements),
                ("seed", seed),
                ("base", base),
                ("perturb", perturb),
            ]
            .into_iter()
            .filter_map(|(k, v)| v.clone().map(|v| (k.to_string(), v)))
            .collect();
            commands::generate(echo, name, params)
        }
    }
}

fn write_file(path: &PathBuf, text: &str) -> Result<(), CliError> {
    std::fs::write(path, text).map_err(|e| CliError::input(format!("{}: {e}", path.display())))
}

fn run(cli: &Cli, echo: Vec<String>) -> Result<i32, CliError> {
    let format = match cli.format {
        FormatArg::Human => Format::Human,
        FormatArg::Machine => Format::Machine,
    };
    let exec = dispatch(cli, echo)?;
    let rendered = exec.report.render(format);
    let is_generate = matches!(cli.command, Command::Generate { .. });
    match (&cli.out, exec.artifact) {
        (Some(out), Some(artifact)) => {
            write_file(out, &artifact)?;
            print!("{rendered}");
        }
        (None, Some(artifact)) if is_generate => print!("{artifact}"),
        (None, Some(artifact)) => {
            print!("{rendered}");
            if format == Format::Human {
                print!("model:\n{artifact}");
            }
        }
        (Some(out), None) => write_file(out, &rendered)?,
        (None, None) => print!("{rendered}"),
    }
    Ok(exec.report.exit_status)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INPUT } else { 0 };
            let _ = e.print();
            return ExitCode::from(code as u8);
        }
    };
    let echo: Vec<String> = std::env::args().skip(1).collect();
    let code = match run(&cli, echo) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            e.code
        }
    };
    ExitCode::from(code as u8)
}
