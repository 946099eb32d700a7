//! Config text in, table out: the same path the `semcom` binary takes.

use semcom::experiments::{parse_config, parse_rendered, render, run_command, Command, Format};

const CONFIG: &str = r#"
schema_version = 1
seed = 11

[sweep]
alpha_values = [1.0, 3.0]
beta_values = [1.0, 1.2]
kinds = ["ose", "rse", "ne_min"]

[audit]
instances = 20
"#;

fn main() -> semcom::Result<()> {
    let cfg = parse_config(CONFIG)?;
    cfg.validate()?;
    let table = run_command(Command::Table1, &cfg)?;
    let csv = render(&table, Format::Csv);
    print!("{csv}");

    let json = render(&table, Format::Json);
    assert_eq!(parse_rendered(&csv, Format::Csv)?, parse_rendered(&json, Format::Json)?);

    let audit = run_command(Command::AuditTheorem2, &cfg)?;
    print!("{}", render(&audit, Format::Csv));
    Ok(())
}
