//! Flat `key=value` experiment configuration with per-command defaults.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use crate::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Source {
    Default,
    File,
    CommandLine,
}

/// Every key a command accepts, with its default.
pub fn defaults(command: &str) -> Option<Vec<(&'static str, &'static str)>> {
    let common = [("seed", "1"), ("out", "")];
    let model = [
        ("d", "2"),
        ("kernel", "polynomial_tail"),
        ("alpha", "4"),
        ("trunc-M", "-"),
        ("blob-R", "-"),
        ("norm", "one"),
        ("rho", "1"),
        ("half-width", "10"),
        ("sampler", "auto"),
    ];
    let specific: &[(&str, &str)] = match command {
        "sample" => &[("palm", "false"), ("boundary", "free")],
        "percolate" => &[("replicas", "20"), ("rhos", "0.25,0.5,1,2"), ("boundary", "free")],
        "walk" => &[("replicas", "10"), ("horizon", "1000"), ("radii", "2,4"), ("escape-walks", "20000")],
        "resistance-profile" => &[("replicas", "10"), ("radii", "2,4,8"), ("max-attempts", "100")],
        "cutsets" => &[("replicas", "20"), ("radii", "2,4,6,8"), ("quantile", "0.9"), ("contrast", "false")],
        "renormalize" => &[
            ("replicas", "4"),
            ("epsilon", "0.1"),
            ("beta", "3"),
            ("max-k", "3"),
            ("mode", "long_range"),
            ("lambda1", "1"),
            ("mu1", "0.5"),
            ("p-c", "0.5"),
            ("z", "4"),
        ],
        "lrp" => &[
            ("replicas", "10"),
            ("side", "10"),
            ("lambda", "1"),
            ("mu", "1"),
            ("k-max", "-"),
            ("z", "4"),
        ],
        "integrals" => &[("truncation", "4"), ("tol", "1e-6"), ("gap", "1")],
        "threshold" => &[
            ("replicas", "50"),
            ("target", "0.5"),
            ("rho-lo", "0.05"),
            ("rho-hi", "4"),
            ("rel-width", "0.05"),
            ("boundary", "free"),
        ],
        _ => return None,
    };
    let mut out: Vec<(&str, &str)> = common.to_vec();
    if command != "lrp" {
        out.extend(model);
    }
    if command == "integrals" || command == "lrp" {
        out.retain(|(k, _)| !matches!(*k, "rho" | "half-width" | "sampler"));
    }
    if command == "lrp" {
        out.extend([("d", "2"), ("alpha", "3")]);
    }
    out.extend_from_slice(specific);
    Some(out)
}

#[derive(Debug, Clone)]
pub struct Config {
    command: String,
    values: BTreeMap<String, (String, Source)>,
}

/// Parses `key=value` lines. Blank lines and `#` comments are skipped, a
/// trailing `# ...` is dropped, and reading stops at a `[section]` line.
pub fn parse_pairs(text: &str) -> Result<Vec<(String, String)>, CliError> {
    let mut out = Vec::new();
    for (n, raw) in text.lines().enumerate() {
        let line = raw.split(" #").next().unwrap_or("").trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        if line.starts_with('[') {
            break;
        }
        let (k, v) = line
            .split_once('=')
            .ok_or_else(|| CliError::Config(format!("line {}: expected key=value, got {raw:?}", n + 1)))?;
        out.push((k.trim().to_string(), v.trim().to_string()));
    }
    Ok(out)
}

impl Config {
    pub fn resolve(command: &str, file: &[(String, String)], cli: &[(String, String)]) -> Result<Config, CliError> {
        let table = defaults(command).ok_or_else(|| CliError::Config(format!("unknown command {command:?}")))?;
        let mut values: BTreeMap<String, (String, Source)> =
            table.iter().map(|(k, v)| (k.to_string(), (v.to_string(), Source::Default))).collect();
        values.get_mut("out").expect("out key").0 = format!("rcm-out/{command}");
        for (layer, source) in [(file, Source::File), (cli, Source::CommandLine)] {
            for (k, v) in layer {
                if k == "command" {
                    if v != command {
                        return Err(CliError::Config(format!("config is for command {v:?}, not {command:?}")));
                    }
                    continue;
                }
                match values.get_mut(k) {
                    Some(slot) => *slot = (v.clone(), source),
                    None => return Err(CliError::Config(format!("key {k:?} is not used by {command}"))),
                }
            }
        }
        Ok(Config { command: command.to_string(), values })
    }

    pub fn command(&self) -> &str {
        &self.command
    }

    pub fn raw(&self, key: &str) -> &str {
        &self.values.get(key).unwrap_or_else(|| panic!("key {key} not declared for {}", self.command)).0
    }

    pub fn get<T: FromStr>(&self, key: &str) -> Result<T, CliError> {
        let raw = self.raw(key);
        raw.parse().map_err(|_| CliError::Config(format!("bad value for {key}: {raw:?}")))
    }

    /// `None` when the value is `-`.
    pub fn optional<T: FromStr>(&self, key: &str) -> Result<Option<T>, CliError> {
        if self.raw(key) == "-" {
            Ok(None)
        } else {
            self.get(key).map(Some)
        }
    }

    pub fn list<T: FromStr>(&self, key: &str) -> Result<Vec<T>, CliError> {
        self.raw(key)
            .split(',')
            .map(|v| v.trim().parse().map_err(|_| CliError::Config(format!("bad entry {v:?} in {key}"))))
            .collect()
    }

    pub fn entries(&self) -> impl Iterator<Item = (&str, &str, Source)> {
        self.values.iter().map(|(k, (v, s))| (k.as_str(), v.as_str(), *s))
    }
}

impl fmt::Display for Config {
    /// Manifest form: every resolved key, defaults marked.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "command={}", self.command)?;
        for (k, v, s) in self.entries() {
            if s == Source::Default {
                writeln!(f, "{k}={v} # default")?;
            } else {
                writeln!(f, "{k}={v}")?;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pairs(xs: &[(&str, &str)]) -> Vec<(String, String)> {
        xs.iter().map(|(k, v)| (k.to_string(), v.to_string())).collect()
    }

    #[test]
    fn layers_and_defaults() {
        let file = pairs(&[("alpha", "4.5"), ("rho", "2")]);
        let cli = pairs(&[("rho", "3")]);
        let c = Config::resolve("cutsets", &file, &cli).unwrap();
        assert_eq!(c.get::<f64>("alpha").unwrap(), 4.5);
        assert_eq!(c.get::<f64>("rho").unwrap(), 3.0);
        assert_eq!(c.list::<f64>("radii").unwrap(), vec![2.0, 4.0, 6.0, 8.0]);
        assert_eq!(c.raw("out"), "rcm-out/cutsets");
        let text = c.to_string();
        assert!(text.contains("alpha=4.5\n"));
        assert!(text.contains("replicas=20 # default\n"));
    }

    #[test]
    fn manifest_parses_back() {
        let c = Config::resolve("walk", &pairs(&[("horizon", "50")]), &[]).unwrap();
        let mut text = c.to_string();
        text.push_str("[artifacts]\nwalks.csv sha256=abc\n");
        let again = Config::resolve("walk", &parse_pairs(&text).unwrap(), &[]).unwrap();
        assert_eq!(again.to_string().replace(" # default", ""), text.split("[artifacts]").next().unwrap().replace(" # default", ""));
    }

    #[test]
    fn rejects_unknown_keys_and_commands() {
        assert!(Config::resolve("walk", &pairs(&[("epsilon", "0.1")]), &[]).is_err());
        assert!(Config::resolve("fly", &[], &[]).is_err());
        assert!(Config::resolve("walk", &pairs(&[("command", "lrp")]), &[]).is_err());
        assert!(parse_pairs("novalue\n").is_err());
    }
}
