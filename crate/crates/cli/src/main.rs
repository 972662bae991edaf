use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use rauzy::Exec;
use rauzy_cli::commands::{self, Outcome};
use rauzy_cli::config::ColorBy;
use rauzy_cli::{CliError, CliResult, Config};

#[derive(Parser, Debug)]
#[command(
    name = "rauzy",
    version,
    about = "Exact pair correlations and window geometry of quadratic Pisot substitution tilings"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// JSON configuration file; flags below override its fields.
    #[arg(long, short, global = true)]
    config: Option<PathBuf>,
    /// Preset name (ssm, sigma, fibonacci).
    #[arg(long, global = true, conflicts_with = "rule")]
    preset: Option<String>,
    /// Substitution rule, e.g. "a -> bba; b -> ab".
    #[arg(long, global = true)]
    rule: Option<String>,
    /// Legal two-letter seed such as "a|a".
    #[arg(long, global = true)]
    seed: Option<String>,
    #[arg(long, global = true)]
    patch_level: Option<usize>,
    #[arg(long, global = true)]
    sample_cap: Option<usize>,
    #[arg(long, short, global = true)]
    output_dir: Option<PathBuf>,
    #[arg(long, global = true)]
    color_by: Option<ColorArg>,
    /// Worker threads; 1 runs sequentially.
    #[arg(long, global = true, env = "RAUZY_THREADS")]
    threads: Option<usize>,
}

#[derive(Subcommand, Debug, Clone, Copy)]
enum Command {
    /// Inflation data, eigen-data, window measures and boundary dimension.
    Analyze,
    /// The solved self-consistent core as CSV.
    Core,
    /// Sampled (cross) covariograms as CSV and SVG.
    Covariogram,
    /// Window approximants as CSV and SVG.
    Windows,
    /// Overlap-algorithm report for the window boundary.
    Hausdorff,
    /// Residual, property and oracle suites; nonzero exit on any violation.
    Check,
    /// Patch-frequency comparison; nonzero exit above tolerance.
    Oracle,
}

#[derive(ValueEnum, Debug, Clone, Copy)]
enum ColorArg {
    Pair,
    Parity,
}

fn config(cli: &Cli) -> CliResult<Config> {
    let mut cfg = match &cli.config {
        Some(p) => Config::load(p)?,
        None => Config::default(),
    };
    if let Some(s) = cli.preset.as_ref().or(cli.rule.as_ref()) {
        cfg.substitution = s.clone();
    }
    if let Some(s) = &cli.seed {
        cfg.seed = Some(s.clone());
    }
    if let Some(k) = cli.patch_level {
        cfg.patch_level = Some(k);
    }
    if let Some(c) = cli.sample_cap {
        cfg.sample_cap = c;
    }
    if let Some(d) = &cli.output_dir {
        cfg.output_dir = d.clone();
    }
    if let Some(c) = cli.color_by {
        cfg.plot.color_by = match c {
            ColorArg::Pair => ColorBy::Pair,
            ColorArg::Parity => ColorBy::Parity,
        };
    }
    Ok(cfg)
}

fn executor(threads: Option<usize>) -> CliResult<Exec> {
    match threads {
        Some(0) => Err(CliError::Config("threads must be at least 1".into())),
        Some(1) => Ok(Exec::Sequential),
        Some(n) => {
            #[cfg(feature = "parallel")]
            rayon::ThreadPoolBuilder::new()
                .num_threads(n)
                .build_global()
                .map_err(|e| CliError::Config(e.to_string()))?;
            let _ = n;
            Ok(Exec::default())
        }
        None => Ok(Exec::default()),
    }
}

fn run(cli: &Cli) -> CliResult<Outcome> {
    let exec = executor(cli.threads)?;
    let setup = config(cli)?.resolve()?;
    match cli.command {
        Command::Analyze => commands::cmd_analyze(&setup),
        Command::Core => commands::cmd_core(&setup),
        Command::Covariogram => commands::cmd_covariogram(&setup, exec),
        Command::Windows => commands::cmd_windows(&setup, exec),
        Command::Hausdorff => commands::cmd_hausdorff(&setup),
        Command::Check => commands::cmd_check(&setup, exec),
        Command::Oracle => commands::cmd_oracle(&setup, exec),
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    match run(&cli) {
        Ok(out) => {
            // a closed pipe downstream is not an error of the run
            let _ = writeln!(
                io::stdout(),
                "{}",
                serde_json::to_string_pretty(&out.report).expect("reports serialise")
            );
            for f in &out.files {
                log::info!("wrote {}", f.display());
            }
            if out.passed {
                ExitCode::SUCCESS
            } else {
                eprintln!("{:?} failed; see the report above", cli.command);
                ExitCode::from(1)
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
