use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use num_complex::Complex64 as C64;
use stirap_core::{ChannelModel, QubitState};

use stirap_cli::commands::{self, Protocol, Written};
use stirap_cli::config::ExperimentConfig;
use stirap_cli::error::{CliError, CliResult};
use stirap_cli::output::to_json_bytes;

/// STIRAP single-photon emission, absorption and state-transfer simulations.
///
/// Exit codes: 0 success, 1 configuration or validation error, 2 infeasible
/// pulse design, 3 numerical failure.
#[derive(Debug, Parser)]
#[command(name = "stirap", version)]
struct Cli {
    /// TOML experiment configuration; built-in defaults are used for
    /// anything it leaves out.
    #[arg(long, global = true)]
    config: Option<PathBuf>,

    /// Output directory (overrides `output.dir`).
    #[arg(long, global = true)]
    out_dir: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum ProtocolArg {
    Simple,
    Polarization,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Design the emission schedule; writes schedule.csv, target.csv and
    /// adiabaticity.json.
    Design {
        /// Re-emit an existing schedule CSV instead of designing one.
        #[arg(long)]
        schedule: Option<PathBuf>,
    },
    /// Population traces for several Ω/Γ plus the ideal trace.
    Fig3 {
        /// Comma-separated Ω/Γ values (overrides `sweeps.fig3_omegas`).
        #[arg(long)]
        omegas: Option<String>,
    },
    /// Absorption success probability against Ω/Γ.
    Fig4 {
        /// Comma-separated Ω/Γ values (overrides `sweeps.fig4_omegas`).
        #[arg(long)]
        omegas: Option<String>,
        /// Channel amplitude as `re,im` (overrides `channel.alpha`).
        #[arg(long, allow_hyphen_values = true)]
        alpha: Option<String>,
    },
    /// State transfer through one of the two protocols; prints the outcome
    /// JSON and writes transfer_<protocol>.json.
    Transfer {
        #[arg(long, value_enum)]
        protocol: ProtocolArg,
        /// Qubit amplitude on |g1⟩ (or |0⟩) as `re,im`.
        #[arg(long, allow_hyphen_values = true)]
        a: Option<String>,
        /// Qubit amplitude on |g2⟩ (or |1⟩) as `re,im`.
        #[arg(long, allow_hyphen_values = true)]
        b: Option<String>,
        /// Channel amplitude as `re,im`.
        #[arg(long, allow_hyphen_values = true)]
        alpha: Option<String>,
    },
    /// Peak |h⟩ population of the emitter against Ω/Γ.
    Hscan {
        /// Comma-separated Ω/Γ values (overrides `sweeps.hscan_omegas`).
        #[arg(long)]
        omegas: Option<String>,
    },
    /// Print the adiabaticity report of the designed (or given) schedule.
    Validate {
        /// Schedule CSV to check instead of the designed one.
        #[arg(long)]
        schedule: Option<PathBuf>,
        /// Pass threshold for the margin ratio (overrides
        /// `adiabaticity.threshold`).
        #[arg(long)]
        threshold: Option<f64>,
    },
}

fn parse_list(text: &str) -> CliResult<Vec<f64>> {
    if text.trim().is_empty() {
        return Ok(Vec::new());
    }
    text.split(',')
        .map(|s| {
            s.trim()
                .parse::<f64>()
                .map_err(|e| CliError::Config(format!("bad number {s:?}: {e}")))
        })
        .collect()
}

fn parse_complex(text: &str) -> CliResult<C64> {
    match parse_list(text)?.as_slice() {
        [re] => Ok(C64::new(*re, 0.0)),
        [re, im] => Ok(C64::new(*re, *im)),
        _ => Err(CliError::Config(format!("expected `re,im`, got {text:?}"))),
    }
}

fn omegas_or(arg: &Option<String>, default: &[f64]) -> CliResult<Vec<f64>> {
    match arg {
        Some(text) => parse_list(text),
        None => Ok(default.to_vec()),
    }
}

fn channel_with(config: &ExperimentConfig, alpha: &Option<String>) -> CliResult<ChannelModel> {
    let base = config.channel_model()?;
    let channel = match alpha {
        Some(text) => base.with_alpha(parse_complex(text)?),
        None => base,
    };
    channel.validate()?;
    Ok(channel)
}

fn report_written(written: &Written) {
    for path in &written.0 {
        println!("{}", path.display());
    }
}

fn print_json(bytes: &[u8]) -> CliResult<()> {
    std::io::stdout()
        .write_all(bytes)
        .map_err(|e| CliError::io(Path::new("<stdout>"), e))
}

fn run(cli: Cli) -> CliResult<()> {
    let config = match &cli.config {
        Some(path) => ExperimentConfig::load(path)?,
        None => ExperimentConfig::default(),
    };
    let dir = cli
        .out_dir
        .clone()
        .unwrap_or_else(|| config.output.dir.clone());
    match &cli.command {
        Command::Design { schedule } => {
            report_written(&commands::design(&config, &dir, schedule.as_deref())?);
        }
        Command::Fig3 { omegas } => {
            let omegas = omegas_or(omegas, &config.sweeps.fig3_omegas)?;
            report_written(&commands::fig3(&config, &dir, &omegas)?);
        }
        Command::Fig4 { omegas, alpha } => {
            let omegas = omegas_or(omegas, &config.sweeps.fig4_omegas)?;
            let channel = channel_with(&config, alpha)?;
            report_written(&commands::fig4(&config, &dir, &omegas, &channel)?);
        }
        Command::Transfer {
            protocol,
            a,
            b,
            alpha,
        } => {
            // normalization is checked by the command, after overrides
            let [ar, ai] = config.qubit.a;
            let [br, bi] = config.qubit.b;
            let qubit = QubitState {
                a: a.as_deref()
                    .map(parse_complex)
                    .transpose()?
                    .unwrap_or(C64::new(ar, ai)),
                b: b.as_deref()
                    .map(parse_complex)
                    .transpose()?
                    .unwrap_or(C64::new(br, bi)),
            };
            let protocol = match protocol {
                ProtocolArg::Simple => Protocol::Simple,
                ProtocolArg::Polarization => Protocol::Polarization,
            };
            let channel = channel_with(&config, alpha)?;
            let (report, _) = commands::transfer(&config, &dir, protocol, &qubit, &channel)?;
            print_json(&to_json_bytes(&report))?;
        }
        Command::Hscan { omegas } => {
            let omegas = omegas_or(omegas, &config.sweeps.hscan_omegas)?;
            report_written(&commands::hscan(&config, &dir, &omegas)?);
        }
        Command::Validate {
            schedule,
            threshold,
        } => {
            let threshold = threshold.unwrap_or(config.adiabaticity.threshold);
            let report = commands::validate(&config, schedule.as_deref(), threshold)?;
            print_json(&to_json_bytes(&report))?;
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
