//! CSV tables and the `.meta` sidecar.

use std::io::Write;

use crate::commands::{Command, Table};
use crate::config::RunConfig;

pub fn write_csv<W: Write>(table: &Table, out: W) -> csv::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(&table.header)?;
    for row in &table.rows {
        w.write_record(row)?;
    }
    w.flush()?;
    Ok(())
}

/// The sidecar: run facts as comments, then every resolved key. Stripped of
/// comments it is a valid config file that reproduces the run.
pub fn meta(command: Command, config: &RunConfig, table: &Table) -> String {
    let mut s = String::new();
    s.push_str(&format!("# command = {}\n", command.name()));
    s.push_str(&format!("# version = {}\n", env!("CARGO_PKG_VERSION")));
    s.push_str(&format!("# rows = {}\n", table.rows.len()));
    s.push_str(&format!("# r_max_used = {}\n", table.r_max_used));
    s.push_str(&format!("# failed_cells = {}\n", table.failed_cells));
    for (k, v) in config.raw.resolved() {
        if !v.is_empty() {
            s.push_str(&format!("{k} = {v}\n"));
        }
    }
    s
}
