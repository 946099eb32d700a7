//! Command-line front end: one subcommand per experiment.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use semcom::experiments::{emit, load_config_with_seed, run_command, Command, ExperimentConfig, Format};

#[derive(Parser)]
#[command(name = "semcom", version, about = "Equilibria and information limits of strategic semantic communication")]
struct Cli {
    #[command(subcommand)]
    command: Sub,
}

#[derive(Subcommand)]
enum Sub {
    /// Channel capacity and rate budget.
    Capacity(Common),
    /// Rate-distortion curves: Hamming baseline and semantic matrices.
    Rdcurve(Common),
    /// Optimal (optimistic) Stackelberg equilibrium.
    Ose(Common),
    /// Robust (pessimistic) Stackelberg equilibrium.
    Rse(Common),
    /// All Nash equilibria within the enumeration caps.
    Ne(Common),
    /// Ordering audit over seeded random instances.
    #[command(name = "audit-theorem2")]
    AuditTheorem2(Common),
    /// Scalar game where the robust value exceeds every Nash value.
    Counterexample(Common),
    /// Sweep of the three-symbol game over (alpha, beta).
    Table1(Common),
    /// Print the effective configuration with defaults applied.
    ShowConfig(Common),
}

#[derive(Args)]
struct Common {
    /// TOML configuration; built-in defaults when omitted.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Output file; standard output when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Output format; overrides `[output] format`.
    #[arg(long, value_enum)]
    format: Option<FormatArg>,
    /// Overrides the config seed.
    #[arg(long)]
    seed: Option<u64>,
}

#[derive(Clone, Copy, ValueEnum)]
enum FormatArg {
    Csv,
    Json,
}

fn config(c: &Common) -> semcom::Result<ExperimentConfig> {
    match &c.config {
        Some(p) => load_config_with_seed(p, c.seed),
        None => {
            let cfg = ExperimentConfig {
                seed: c.seed,
                ..ExperimentConfig::default()
            };
            cfg.validate()?;
            Ok(cfg)
        }
    }
}

fn run(cli: Cli) -> semcom::Result<()> {
    let (cmd, common) = match &cli.command {
        Sub::Capacity(c) => (Some(Command::Capacity), c),
        Sub::Rdcurve(c) => (Some(Command::RdCurve), c),
        Sub::Ose(c) => (Some(Command::Ose), c),
        Sub::Rse(c) => (Some(Command::Rse), c),
        Sub::Ne(c) => (Some(Command::Ne), c),
        Sub::AuditTheorem2(c) => (Some(Command::AuditTheorem2), c),
        Sub::Counterexample(c) => (Some(Command::Counterexample), c),
        Sub::Table1(c) => (Some(Command::Table1), c),
        Sub::ShowConfig(c) => (None, c),
    };
    let cfg = config(common)?;
    let Some(cmd) = cmd else {
        print!("{}", cfg.to_toml());
        return Ok(());
    };
    let format = match (common.format, &cfg.output.format) {
        (Some(FormatArg::Csv), _) => Format::Csv,
        (Some(FormatArg::Json), _) => Format::Json,
        (None, Some(f)) => Format::parse(f)?,
        (None, None) => Format::Csv,
    };
    let out = common.out.clone().or_else(|| cfg.output.path.as_ref().map(PathBuf::from));
    let table = run_command(cmd, &cfg)?;
    emit(&table, format, out.as_deref())
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            let report = serde_json::json!({ "error": { "kind": e.kind(), "message": e.to_string() } });
            eprintln!("{report}");
            ExitCode::FAILURE
        }
    }
}
