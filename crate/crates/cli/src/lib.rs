//! Command-line front end for `qdecoherence`: parameter sweeps written as
//! CSV, each with a `.meta` sidecar holding the resolved configuration.

pub mod commands;
pub mod config;
pub mod label;
pub mod output;

pub use commands::{run, Command, Failure, Table};
pub use config::{RawConfig, RunConfig};

/// Remaining arguments and `(key, value)` overrides.
pub type SplitArgs = (Vec<String>, Vec<(String, String)>);

/// Splits config-key flags (`--geometry.N 8`, `--temperature_K=4`) from the
/// rest of the argument list.
pub fn split_overrides(args: Vec<String>) -> Result<SplitArgs, config::ConfigError> {
    let mut rest = Vec::new();
    let mut overrides = Vec::new();
    let mut it = args.into_iter();
    while let Some(arg) = it.next() {
        let Some(flag) = arg.strip_prefix("--") else {
            rest.push(arg);
            continue;
        };
        let (key, inline) = match flag.split_once('=') {
            Some((k, v)) => (k.to_string(), Some(v.to_string())),
            None => (flag.to_string(), None),
        };
        if !config::is_key(&key) {
            rest.push(arg);
            continue;
        }
        let value = match inline.or_else(|| it.next()) {
            Some(v) => v,
            None => {
                return Err(config::ConfigError { line: None, key: Some(key), message: "flag needs a value".into() })
            }
        };
        overrides.push((key, value));
    }
    Ok((rest, overrides))
}
