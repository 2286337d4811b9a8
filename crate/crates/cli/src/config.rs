//! Flat `key = value` configuration files mirroring the command-line flags.

use std::path::Path;

use crate::suite::{SuiteConfig, SuiteError};

/// Applies every setting of `text` to `config`. Blank lines and lines
/// starting with `#` are ignored.
pub fn apply_config(config: &mut SuiteConfig, text: &str) -> Result<(), SuiteError> {
    for (i, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (key, value) = line
            .split_once('=')
            .ok_or_else(|| SuiteError::Config { line: i + 1, message: format!("expected key = value, got `{line}`") })?;
        config
            .set(key.trim(), value.trim())
            .map_err(|e| SuiteError::Config { line: i + 1, message: e.to_string() })?;
    }
    Ok(())
}

pub fn load_config(config: &mut SuiteConfig, path: &Path) -> Result<(), SuiteError> {
    let text = std::fs::read_to_string(path).map_err(|source| SuiteError::Io { path: path.to_path_buf(), source })?;
    apply_config(config, &text)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::report::Format;
    use crate::suite::Check;

    #[test]
    fn settings_apply_in_order() {
        let mut c = SuiteConfig::default();
        apply_config(&mut c, "# suite\nr = 2..4\nchecks = starlet, poifo\n\nformat = json\nflavored = false\n").unwrap();
        assert_eq!((c.r_min, c.r_max), (2, 4));
        assert_eq!(c.checks.iter().copied().collect::<Vec<_>>(), [Check::Starlet, Check::Poifo]);
        assert_eq!(c.format, Format::Json);
        assert!(!c.flavored);
    }

    #[test]
    fn errors_carry_line_numbers() {
        let mut c = SuiteConfig::default();
        let err = apply_config(&mut c, "r = 2\nnonsense\n").unwrap_err();
        assert!(matches!(err, SuiteError::Config { line: 2, .. }));
        let err = apply_config(&mut c, "truncate = many\n").unwrap_err();
        assert!(err.to_string().contains("line 1"));
    }
}
