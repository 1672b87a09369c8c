//! `--config` files: `key=value` lines naming long flags of the chosen
//! subcommand. Values are spliced into the argument list unless the same
//! flag was given on the command line, so flags always win.

use std::ffi::OsString;
use std::path::PathBuf;

use flr_core::io::parse_key_values;

fn config_path(args: &[OsString]) -> Option<PathBuf> {
    let mut iter = args.iter();
    while let Some(arg) = iter.next() {
        let s = arg.to_string_lossy();
        if s == "--config" {
            return iter.next().map(PathBuf::from);
        }
        if let Some(path) = s.strip_prefix("--config=") {
            return Some(PathBuf::from(path));
        }
    }
    None
}

fn has_flag(args: &[OsString], flag: &str) -> bool {
    let eq = format!("{flag}=");
    args.iter().any(|a| {
        let s = a.to_string_lossy();
        s == flag || s.starts_with(&eq)
    })
}

/// Returns `args` extended with the settings of the config file, if any.
pub fn merge_config(args: Vec<OsString>) -> Result<Vec<OsString>, String> {
    let Some(path) = config_path(&args) else {
        return Ok(args);
    };
    let text = std::fs::read_to_string(&path)
        .map_err(|e| format!("cannot read config {}: {e}", path.display()))?;
    let settings = parse_key_values(&text).map_err(|e| format!("{}: {e}", path.display()))?;
    let mut merged = args.clone();
    for (key, value) in settings {
        let key = key.replace('_', "-");
        if key == "config" {
            return Err(format!("{}: a config file cannot include another", path.display()));
        }
        let flag = format!("--{key}");
        if has_flag(&args, &flag) {
            continue;
        }
        match value.as_str() {
            "true" => merged.push(flag.into()),
            "false" => {}
            _ => merged.push(format!("{flag}={value}").into()),
        }
    }
    Ok(merged)
}
