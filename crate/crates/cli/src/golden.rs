//! Golden files for derived constants: written once with `--bless`, compared
//! on every later run.

use std::fs;
use std::path::{Path, PathBuf};

use serde_json::Value;

use crate::report::{CheckReport, Status};
use crate::suite::SuiteError;

/// Environment variable naming the default golden directory.
pub const GOLDEN_DIR_ENV: &str = "MULTILOOP_GOLDEN_DIR";

/// `(check name, derived key)` pairs under golden control.
pub const GOLDEN_KEYS: [(&str, &str); 3] = [("trace", "alpha"), ("jacobi", "bracket_x1y1"), ("hanany", "constant")];

/// `<dir>/<check>_r<r>_<key>.json`.
pub fn golden_path(dir: &Path, report: &CheckReport, key: &str) -> PathBuf {
    let r = report.params.get("r").map(|v| v.to_string()).unwrap_or_default();
    dir.join(format!("{}_r{}_{}.json", report.name, r, key))
}

fn io_err(path: &Path) -> impl FnOnce(std::io::Error) -> SuiteError + '_ {
    move |source| SuiteError::Io { path: path.to_path_buf(), source }
}

/// Blesses or enforces every golden value present in passing reports and
/// records the result under `golden_<key>`: `blessed`, `enforced` or
/// `unenforced` (no file yet). A mismatch fails the report.
pub fn apply(reports: &mut [CheckReport], dir: &Path, bless: bool) -> Result<(), SuiteError> {
    if bless {
        fs::create_dir_all(dir).map_err(io_err(dir))?;
    }
    for rep in reports.iter_mut().filter(|r| r.status == Status::Pass) {
        for (name, key) in GOLDEN_KEYS {
            if rep.name != name {
                continue;
            }
            let Some(value) = rep.derived.get(key).cloned() else { continue };
            let path = golden_path(dir, rep, key);
            let tag = format!("golden_{key}");
            if bless {
                let mut text = serde_json::to_string_pretty(&value).expect("json value");
                text.push('\n');
                fs::write(&path, text).map_err(io_err(&path))?;
                rep.derived.insert(tag, Value::from("blessed"));
            } else if path.exists() {
                let text = fs::read_to_string(&path).map_err(io_err(&path))?;
                match serde_json::from_str::<Value>(&text) {
                    Ok(expected) if expected == value => {
                        rep.derived.insert(tag, Value::from("enforced"));
                    }
                    Ok(expected) => {
                        rep.fail(format!("golden mismatch for {key} ({}): expected {expected}, got {value}", path.display()));
                    }
                    Err(e) => rep.fail(format!("unreadable golden file {}: {e}", path.display())),
                }
            } else {
                rep.derived.insert(tag, Value::from("unenforced"));
            }
        }
    }
    Ok(())
}
