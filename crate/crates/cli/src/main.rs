use clap::{Parser, Subcommand};
use neqcp::stats::TvMode;
use neqcp_cli::{execute, load_config, Axis, CliError, Format, Mode, SweepRequest, EXIT_CONFIG};
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "neqcp", version, about = "Nonequilibrium Casimir-Polder force on a moving atom above a Drude metal")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate the force decomposition along a velocity axis.
    Sweep {
        /// JSON configuration ({} for the reference parameters).
        #[arg(long)]
        config: PathBuf,
        /// `ttilde:START:STOP:N`, `beta:START:STOP:N` or `beta=V1,V2,...`;
        /// defaults to the sweep given in the configuration.
        #[arg(long)]
        axis: Option<String>,
        /// Comma-separated: breakdown, lte, bare_ds, thermal_analogue, teff_profile.
        #[arg(long, default_value = "breakdown")]
        modes: String,
        #[arg(long)]
        out: PathBuf,
        #[arg(long, default_value = "csv")]
        format: String,
        #[arg(long)]
        workers: Option<usize>,
        /// Overrides settings.tv_mode.
        #[arg(long = "tv-mode")]
        tv_mode: Option<String>,
    },
}

fn request(command: Command) -> Result<(SweepRequest, PathBuf, Format), CliError> {
    let Command::Sweep { config, axis, modes, out, format, workers, tv_mode } = command;
    let mut cfg = load_config(&config)?;
    if let Some(m) = tv_mode {
        cfg.settings.tv_mode = TvMode::parse(&m).ok_or_else(|| CliError::Validation(format!("--tv-mode: unknown mode {m:?}")))?;
    }
    let axis = match axis {
        Some(spec) => Axis::parse(&spec)?,
        None => cfg.sweep.clone().ok_or_else(|| CliError::Validation("no --axis given and the configuration has no sweep".into()))?,
    };
    let format = Format::parse(&format).ok_or_else(|| CliError::Validation(format!("--format must be csv or json, got {format:?}")))?;
    if workers == Some(0) {
        return Err(CliError::Validation("--workers must be at least 1".into()));
    }
    let modes = Mode::parse_list(&modes)?;
    Ok((SweepRequest { config: cfg, axis, modes, workers }, out, format))
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_CONFIG } else { 0 };
            let _ = e.print();
            return ExitCode::from(code as u8);
        }
    };
    let result = request(cli.command).and_then(|(req, out, format)| execute(&req, &out, format));
    match result {
        Ok(code) => {
            if code != 0 {
                eprintln!("neqcp: sweep finished with flagged or failed rows (exit {code})");
            }
            ExitCode::from(code as u8)
        }
        Err(e) => {
            eprintln!("neqcp: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
