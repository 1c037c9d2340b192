//! `key = value` configuration files whose keys mirror long flags.

use std::collections::BTreeMap;
use std::fmt::Display;
use std::path::Path;
use std::str::FromStr;

use crate::CliError;

#[derive(Debug, Clone, PartialEq)]
pub struct Entry {
    pub value: String,
    pub line: usize,
}

/// Parsed configuration; keys are normalized to the hyphenated flag form.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct ConfigFile {
    entries: BTreeMap<String, Entry>,
}

impl ConfigFile {
    pub fn parse(text: &str) -> Result<Self, CliError> {
        let mut entries = BTreeMap::new();
        for (i, raw) in text.lines().enumerate() {
            let line = i + 1;
            let content = raw.split('#').next().unwrap_or("").trim();
            if content.is_empty() {
                continue;
            }
            let (key, value) = content.split_once('=').ok_or_else(|| {
                CliError::Usage(format!(
                    "config line {line}: expected `key = value`, got `{content}`"
                ))
            })?;
            let key = key.trim().replace('_', "-");
            if key.is_empty() || !key.chars().all(|c| c.is_ascii_alphanumeric() || c == '-') {
                return Err(CliError::Usage(format!(
                    "config line {line}: invalid key `{}`",
                    key
                )));
            }
            let value = unquote(value.trim()).to_string();
            if let Some(prev) = entries.insert(key.clone(), Entry { value, line }) {
                return Err(CliError::Usage(format!(
                    "config line {line}: key `{key}` already set on line {}",
                    prev.line
                )));
            }
        }
        Ok(ConfigFile { entries })
    }

    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Usage(format!("cannot read config {}: {e}", path.display())))?;
        Self::parse(&text)
    }

    pub fn get(&self, key: &str) -> Option<&Entry> {
        self.entries.get(key)
    }

    /// Fails on the first key not in `known`.
    pub fn check_keys<'k>(
        &self,
        command: &str,
        known: impl IntoIterator<Item = &'k str> + Clone,
    ) -> Result<(), CliError> {
        let mut by_line: Vec<_> = self.entries.iter().collect();
        by_line.sort_by_key(|(_, e)| e.line);
        for (key, entry) in by_line {
            if !known.clone().into_iter().any(|k| k == key) {
                return Err(CliError::Usage(format!(
                    "config line {}: unknown key `{key}` for `{command}`",
                    entry.line
                )));
            }
        }
        Ok(())
    }
}

fn unquote(v: &str) -> &str {
    v.strip_prefix('"')
        .and_then(|s| s.strip_suffix('"'))
        .unwrap_or(v)
}

/// Resolves option values: command line first, then config file, then default.
#[derive(Debug, Clone, Copy)]
pub struct Resolver<'a> {
    config: Option<&'a ConfigFile>,
}

impl<'a> Resolver<'a> {
    pub fn new(config: Option<&'a ConfigFile>) -> Self {
        Resolver { config }
    }

    fn raw(&self, key: &str, cli: &Option<String>) -> Option<(String, String)> {
        if let Some(v) = cli {
            return Some((v.clone(), format!("--{key}")));
        }
        let e = self.config?.get(key)?;
        Some((e.value.clone(), format!("config line {} (`{key}`)", e.line)))
    }

    pub fn opt<T>(&self, key: &str, cli: &Option<String>) -> Result<Option<T>, CliError>
    where
        T: FromStr,
        T::Err: Display,
    {
        self.raw(key, cli)
            .map(|(v, origin)| {
                v.trim()
                    .parse::<T>()
                    .map_err(|e| CliError::Usage(format!("{origin}: invalid value `{v}`: {e}")))
            })
            .transpose()
    }

    pub fn get<T>(&self, key: &str, cli: &Option<String>, default: T) -> Result<T, CliError>
    where
        T: FromStr,
        T::Err: Display,
    {
        Ok(self.opt(key, cli)?.unwrap_or(default))
    }

    /// Comma-separated list; an empty list is rejected.
    pub fn list<T>(
        &self,
        key: &str,
        cli: &Option<String>,
        default: &[T],
    ) -> Result<Vec<T>, CliError>
    where
        T: FromStr + Clone,
        T::Err: Display,
    {
        let Some((v, origin)) = self.raw(key, cli) else {
            return Ok(default.to_vec());
        };
        let items = v
            .split(',')
            .map(|t| {
                t.trim().parse::<T>().map_err(|e| {
                    CliError::Usage(format!("{origin}: invalid item `{}`: {e}", t.trim()))
                })
            })
            .collect::<Result<Vec<_>, _>>()?;
        if items.is_empty() {
            return Err(CliError::Usage(format!("{origin}: empty list")));
        }
        Ok(items)
    }

    /// Switch flags: present on the command line, or `true`/`false` in the file.
    pub fn flag(&self, key: &str, cli: bool) -> Result<bool, CliError> {
        if cli {
            return Ok(true);
        }
        self.get(key, &None, false)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_comments_quotes_and_underscores() {
        let cfg =
            ConfigFile::parse("# sweep\n\nlambda = 0.001 # think rate\nn_max=\"12\"\n").unwrap();
        assert_eq!(
            cfg.get("lambda").unwrap(),
            &Entry {
                value: "0.001".into(),
                line: 3
            }
        );
        assert_eq!(cfg.get("n-max").unwrap().value, "12");
    }

    #[test]
    fn empty_file_has_no_entries() {
        assert_eq!(ConfigFile::parse("").unwrap(), ConfigFile::default());
    }

    #[test]
    fn parse_errors_carry_line_numbers() {
        let err = ConfigFile::parse("n = 4\n\nlambda 0.1\n").unwrap_err();
        assert!(err.to_string().contains("line 3"), "{err}");
        let err = ConfigFile::parse("n = 4\nn = 5\n").unwrap_err();
        assert!(err.to_string().contains("line 2"), "{err}");
        assert_eq!(err.exit_code(), 2);
    }

    #[test]
    fn unknown_key_is_named() {
        let cfg = ConfigFile::parse("n = 4\nlamda = 0.1\n").unwrap();
        let err = cfg.check_keys("solve", ["n", "lambda"]).unwrap_err();
        assert!(err.to_string().contains("`lamda`"), "{err}");
        assert!(err.to_string().contains("line 2"), "{err}");
    }

    #[test]
    fn command_line_wins_over_file() {
        let cfg = ConfigFile::parse("lambda = 0.001\n").unwrap();
        let r = Resolver::new(Some(&cfg));
        assert_eq!(r.get("lambda", &Some("0.002".into()), 0.5).unwrap(), 0.002);
        assert_eq!(r.get("lambda", &None, 0.5).unwrap(), 0.001);
        assert_eq!(r.get("n", &None, 4usize).unwrap(), 4);
    }

    #[test]
    fn bad_file_value_reports_line() {
        let cfg = ConfigFile::parse("\nlambda = fast\n").unwrap();
        let err = Resolver::new(Some(&cfg))
            .get("lambda", &None, 0.1)
            .unwrap_err();
        assert!(err.to_string().contains("config line 2"), "{err}");
    }

    #[test]
    fn lists() {
        let r = Resolver::new(None);
        let v: Vec<f64> = r.list("p-list", &Some("0.8, 0.9".into()), &[]).unwrap();
        assert_eq!(v, vec![0.8, 0.9]);
        assert!(r
            .list::<f64>("p-list", &Some("0.8,,0.9".into()), &[])
            .is_err());
        assert_eq!(r.list("p-list", &None, &[1.0]).unwrap(), vec![1.0]);
    }
}
