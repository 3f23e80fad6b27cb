use std::path::{Path, PathBuf};

use firefront::scenario::output::write_text;
use serde_json::{json, Value};

use crate::CliError;

pub const OUT_DIR_ENV: &str = "FIREFRONT_OUT_DIR";

/// `--out` when given, else `$FIREFRONT_OUT_DIR/<subcommand>/<label>` with
/// `out` as the base and a UTC timestamp standing in for a missing label.
pub fn resolve(out: Option<&Path>, subcommand: &str, label: Option<&str>) -> PathBuf {
    if let Some(dir) = out {
        return dir.to_path_buf();
    }
    let base = std::env::var_os(OUT_DIR_ENV).map_or_else(|| PathBuf::from("out"), PathBuf::from);
    let label = label.map_or_else(
        || chrono::Utc::now().format("%Y%m%dT%H%M%S%.3fZ").to_string(),
        String::from,
    );
    base.join(subcommand).join(label)
}

/// Writes `meta.json` echoing the command line that produced the directory.
pub fn write_meta(dir: &Path, subcommand: &str, flags: Value) -> Result<(), CliError> {
    let meta = json!({
        "tool": "firefront",
        "version": env!("CARGO_PKG_VERSION"),
        "subcommand": subcommand,
        "flags": flags,
    });
    let text = serde_json::to_string_pretty(&meta).expect("json values serialize") + "\n";
    write_text(dir.join("meta.json"), &text)?;
    Ok(())
}
