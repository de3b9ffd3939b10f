//! TOML config files: keys are long flag names (kebab or snake case), either
//! at the top level or in a table named after the subcommand. A value is used
//! only when the flag was not given on the command line or via environment.
//! Top-level keys that belong to other subcommands are ignored.

use std::ffi::OsString;
use std::path::Path;

use clap::parser::ValueSource;
use clap::{ArgAction, ArgMatches, Command};

use crate::error::CliError;

fn scalar(key: &str, v: &toml::Value) -> Result<String, CliError> {
    match v {
        toml::Value::String(s) => Ok(s.clone()),
        toml::Value::Integer(i) => Ok(i.to_string()),
        toml::Value::Float(f) if f.is_infinite() && *f > 0.0 => Ok("inf".into()),
        toml::Value::Float(f) => Ok(f.to_string()),
        toml::Value::Boolean(b) => Ok(b.to_string()),
        toml::Value::Array(items) => {
            Ok(items.iter().map(|x| scalar(key, x)).collect::<Result<Vec<_>, _>>()?.join(","))
        }
        _ => Err(CliError::usage(format!("config key {key:?} must be a scalar or an array of scalars"))),
    }
}

/// Appends flags from `path` that the command line left unset, returning the
/// argument vector to reparse.
pub fn merge(
    path: &Path,
    mut argv: Vec<OsString>,
    root: &Command,
    matches: &ArgMatches,
) -> Result<Vec<OsString>, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::usage(format!("cannot read config {}: {e}", path.display())))?;
    let table: toml::Table =
        toml::from_str(&text).map_err(|e| CliError::usage(format!("bad config {}: {e}", path.display())))?;
    let Some((name, sub_matches)) = matches.subcommand() else {
        return Ok(argv);
    };
    let sub = root.find_subcommand(name).expect("matched subcommand exists");

    let mut entries: Vec<(String, &toml::Value, bool)> = Vec::new();
    for (key, value) in &table {
        match value {
            toml::Value::Table(t) if key == name => {
                entries.extend(t.iter().map(|(k, v)| (k.clone(), v, false)));
            }
            toml::Value::Table(_) => {
                if root.find_subcommand(key).is_none() {
                    return Err(CliError::usage(format!("unknown config table [{key}]")));
                }
            }
            _ => entries.push((key.clone(), value, true)),
        }
    }

    for (key, value, top_level) in entries {
        let long = key.replace('_', "-");
        if long == "config" {
            return Err(CliError::usage("config files cannot name another config file"));
        }
        let has_long = |a: &clap::Arg| a.get_long() == Some(long.as_str());
        let Some(arg) = sub.get_arguments().chain(root.get_arguments()).find(|a| has_long(a)) else {
            if top_level && root.get_subcommands().any(|c| c.get_arguments().any(has_long)) {
                continue;
            }
            return Err(CliError::usage(format!("unknown config key {key:?} for {name}")));
        };
        let id = arg.get_id().as_str();
        let explicit = matches!(
            sub_matches.value_source(id).or_else(|| matches.value_source(id)),
            Some(ValueSource::CommandLine | ValueSource::EnvVariable)
        );
        if explicit {
            continue;
        }
        let text = scalar(&key, value)?;
        match arg.get_action() {
            ArgAction::SetTrue => {
                if text == "true" {
                    argv.push(format!("--{long}").into());
                }
            }
            _ => argv.push(format!("--{long}={text}").into()),
        }
    }
    Ok(argv)
}
