//! Flat `key=value` config files with dotted sections
//! (`risk.alpha=1`). Command-line flags always override file values.

use std::collections::BTreeMap;

use crate::error::{Result, SimError};

pub type ConfigMap = BTreeMap<String, String>;

/// Parse `key=value` lines; `#` starts a comment, blank lines are skipped.
pub fn parse_config(text: &str) -> Result<ConfigMap> {
    let mut map = ConfigMap::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let Some((key, value)) = line.split_once('=') else {
            return Err(SimError::Config(format!(
                "line {}: expected key=value, got `{line}`",
                lineno + 1
            )));
        };
        let key = key.trim();
        if key.is_empty() {
            return Err(SimError::Config(format!("line {}: empty key", lineno + 1)));
        }
        map.insert(key.to_string(), value.trim().to_string());
    }
    Ok(map)
}

pub fn load_config(path: &std::path::Path) -> Result<ConfigMap> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| SimError::Config(format!("cannot read {}: {e}", path.display())))?;
    parse_config(&text)
}

fn parse_value<T: std::str::FromStr>(key: &str, raw: &str) -> Result<T> {
    raw.parse()
        .map_err(|_| SimError::Config(format!("config key `{key}`: cannot parse `{raw}`")))
}

/// Flag value if given, else config value, else the default.
pub fn resolve<T: std::str::FromStr + Copy>(
    flag: Option<T>,
    map: &ConfigMap,
    key: &str,
    default: Option<T>,
) -> Result<T> {
    if let Some(v) = flag {
        return Ok(v);
    }
    if let Some(raw) = map.get(key) {
        return parse_value(key, raw);
    }
    default.ok_or_else(|| SimError::Config(format!("missing required parameter `{key}`")))
}

/// As [`resolve`] for string-typed values.
pub fn resolve_str(
    flag: Option<&str>,
    map: &ConfigMap,
    key: &str,
    default: Option<&str>,
) -> Result<String> {
    if let Some(v) = flag {
        return Ok(v.to_string());
    }
    if let Some(raw) = map.get(key) {
        return Ok(raw.clone());
    }
    default
        .map(|s| s.to_string())
        .ok_or_else(|| SimError::Config(format!("missing required parameter `{key}`")))
}

/// Comma-separated float list.
pub fn parse_f64_list(raw: &str) -> Result<Vec<f64>> {
    raw.split(',')
        .map(|s| {
            s.trim()
                .parse()
                .map_err(|_| SimError::Config(format!("cannot parse `{s}` as a number")))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_dotted_sections_and_comments() {
        let text = "# experiment\nrisk.alpha = 1.0\nrisk.theta=1\nsim.grid_n=16384 # power of two\n\nseed=42\n";
        let map = parse_config(text).unwrap();
        assert_eq!(map.get("risk.alpha").unwrap(), "1.0");
        assert_eq!(map.get("sim.grid_n").unwrap(), "16384");
        assert_eq!(map.get("seed").unwrap(), "42");
        assert_eq!(map.len(), 4);
    }

    #[test]
    fn rejects_malformed_lines() {
        assert!(parse_config("just a line").is_err());
        assert!(parse_config("=3").is_err());
    }

    #[test]
    fn flags_override_file_values() {
        let map = parse_config("risk.alpha=1.5").unwrap();
        let v: f64 = resolve(Some(0.5), &map, "risk.alpha", None).unwrap();
        assert_eq!(v, 0.5);
        let v: f64 = resolve(None, &map, "risk.alpha", None).unwrap();
        assert_eq!(v, 1.5);
        let v: f64 = resolve(None, &map, "risk.c", Some(1.0)).unwrap();
        assert_eq!(v, 1.0);
        assert!(resolve::<f64>(None, &map, "risk.c", None).is_err());
    }

    #[test]
    fn float_lists() {
        assert_eq!(parse_f64_list("1, 2.5,3").unwrap(), vec![1.0, 2.5, 3.0]);
        assert!(parse_f64_list("1,x").is_err());
    }
}
