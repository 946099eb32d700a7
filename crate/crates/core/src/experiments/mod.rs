//! Configuration, experiment drivers and table emission behind the `semcom` binary.

pub mod config;
pub mod emit;
pub mod runs;

pub use config::{load_config, load_config_with_seed, parse_config, ExperimentConfig, SCHEMA_VERSION};
pub use emit::{emit, format_float, parse_rendered, render, Cell, Format, Table};
pub use runs::{
    run_capacity, run_counterexample, run_equilibrium, run_random_audit, run_rd_comparison, run_table1_sweep,
    AuditSummary, RdComparison, ResultRow, SweepResult, Target,
};

use crate::equilibria::EquilibriumKind;
use crate::error::Result;

/// One experiment per subcommand.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Command {
    Capacity,
    RdCurve,
    Ose,
    Rse,
    Ne,
    AuditTheorem2,
    Counterexample,
    Table1,
}

impl Command {
    pub const ALL: [Command; 8] = [
        Command::Capacity,
        Command::RdCurve,
        Command::Ose,
        Command::Rse,
        Command::Ne,
        Command::AuditTheorem2,
        Command::Counterexample,
        Command::Table1,
    ];

    /// Subcommand name.
    pub fn name(self) -> &'static str {
        match self {
            Command::Capacity => "capacity",
            Command::RdCurve => "rdcurve",
            Command::Ose => "ose",
            Command::Rse => "rse",
            Command::Ne => "ne",
            Command::AuditTheorem2 => "audit-theorem2",
            Command::Counterexample => "counterexample",
            Command::Table1 => "table1",
        }
    }
}

fn table_of(columns: &[&str], rows: impl IntoIterator<Item = Vec<Cell>>) -> Table {
    let mut t = Table::new(columns);
    rows.into_iter().for_each(|r| t.push(r));
    t
}

/// Runs one experiment and returns its table with the standard metadata.
pub fn run_command(cmd: Command, cfg: &ExperimentConfig) -> Result<Table> {
    let mut table = match cmd {
        Command::Capacity => table_of(&runs::CAPACITY_COLUMNS, [run_capacity(cfg)?.cells()]),
        Command::RdCurve => {
            let rd = run_rd_comparison(cfg)?;
            let mut t = table_of(&runs::RD_COLUMNS, rd.rows.iter().map(|r| r.cells()));
            t.set_meta("normalization", &rd.normalization);
            t.set_meta("curves", rd.curves.join(" "));
            t
        }
        Command::Ose | Command::Rse | Command::Ne => {
            let kind = match cmd {
                Command::Ose => EquilibriumKind::Ose,
                Command::Rse => EquilibriumKind::Rse,
                _ => EquilibriumKind::Ne,
            };
            let rows = run_equilibrium(cfg, kind)?;
            let mut t = table_of(&runs::RESULT_COLUMNS, rows.iter().map(|r| r.cells()));
            let target = match Target::from_config(cfg)? {
                Target::Game(_) => "game",
                Target::Chain(_) => "chain",
            };
            t.set_meta("target", target);
            t
        }
        Command::AuditTheorem2 => {
            let s = run_random_audit(cfg)?;
            let mut t = table_of(&runs::AUDIT_COLUMNS, [s.cells()]);
            for (i, msg) in &s.failures {
                t.set_meta(&format!("failure.{i}"), msg);
            }
            t
        }
        Command::Counterexample => {
            let (a, witnesses) = run_counterexample(cfg)?;
            let row = vec![
                a.resolution.into(),
                a.rse_value.into(),
                crate::scalar::rse_value(a.resolution)?.g_star.into(),
                a.rse_grid_value.into(),
                a.max_ne_value.into(),
                a.min_ne_value.into(),
                a.max_ne_grid_value.into(),
                a.separation.into(),
                witnesses.into(),
            ];
            table_of(&runs::COUNTEREXAMPLE_COLUMNS, [row])
        }
        Command::Table1 => {
            let r = run_table1_sweep(cfg)?;
            let mut t = table_of(&runs::RESULT_COLUMNS, r.rows.iter().map(|r| r.cells()));
            t.set_meta("grid_points", r.grid_points);
            t.set_meta("kinds", cfg.sweep.kinds.join(" "));
            t.set_meta("failures", r.failures.len());
            for (i, f) in r.failures.iter().enumerate() {
                t.set_meta(
                    &format!("failure.{i}"),
                    format!("alpha={} beta={} kind={}: {}", format_float(f.alpha), format_float(f.beta), f.kind, f.message),
                );
            }
            t
        }
    };
    let mut meta = emit::standard_metadata(cmd.name(), cfg.seed, &cfg.to_toml());
    meta.append(&mut table.metadata);
    table.metadata = meta;
    Ok(table)
}
