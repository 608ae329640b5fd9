//! Flat `key = value` run configuration, also accepting the
//! `params['key'] = value` spelling.

use std::collections::HashSet;
use std::path::Path;

use thiserror::Error;

use crate::dynamics::Flavor;
use crate::fitness::Target;
use crate::ga::{ConfigError, GAConfig, MixingMethod, MutationMethod};

pub const KEYS: [&str; 16] = [
    "map_type",
    "degree",
    "population",
    "generations",
    "survival",
    "reset_survival",
    "reset_interval",
    "normalize_orbit",
    "bound",
    "mixing_method",
    "mutation_rate",
    "mutation_method",
    "target",
    "orbit_target",
    "orbit_weights",
    "seed",
];

#[derive(Debug, Error)]
pub enum ConfigFileError {
    #[error("line {line}: {message}")]
    Parse {
        line: usize,
        key: Option<String>,
        message: String,
    },
    #[error(transparent)]
    Validation(#[from] ConfigError),
    #[error("cannot read config: {0}")]
    Io(#[from] std::io::Error),
}

fn parse_error(line: usize, key: Option<&str>, message: String) -> ConfigFileError {
    ConfigFileError::Parse {
        line,
        key: key.map(str::to_string),
        message,
    }
}

// Drops a trailing `#` comment that is not inside quotes.
fn strip_comment(line: &str) -> &str {
    let mut quote = None;
    for (i, c) in line.char_indices() {
        match (quote, c) {
            (None, '\'' | '"') => quote = Some(c),
            (Some(q), _) if c == q => quote = None,
            (None, '#') => return &line[..i],
            _ => {}
        }
    }
    line
}

fn unquote(s: &str) -> &str {
    let s = s.trim();
    for q in ['\'', '"'] {
        if s.len() >= 2 && s.starts_with(q) && s.ends_with(q) {
            return &s[1..s.len() - 1];
        }
    }
    s
}

fn parse_key(lhs: &str) -> Option<String> {
    let lhs = lhs.trim();
    let key = match lhs.strip_prefix("params[") {
        Some(rest) => unquote(rest.strip_suffix(']')?),
        None => lhs,
    };
    let ok = !key.is_empty() && key.chars().all(|c| c.is_ascii_alphanumeric() || c == '_');
    ok.then(|| key.to_string())
}

fn is_none(v: &str) -> bool {
    matches!(v.trim(), "None" | "none" | "null")
}

/// Parses configuration text; unspecified keys keep the defaults.
pub fn parse_config_str(text: &str) -> Result<GAConfig, ConfigFileError> {
    let mut config = GAConfig::default();
    let mut seen = HashSet::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let content = strip_comment(raw).trim();
        if content.is_empty() {
            continue;
        }
        let (lhs, rhs) = content
            .split_once('=')
            .ok_or_else(|| parse_error(line, None, format!("expected `key = value`, got `{content}`")))?;
        let key = parse_key(lhs).ok_or_else(|| parse_error(line, None, format!("malformed key `{}`", lhs.trim())))?;
        if !KEYS.contains(&key.as_str()) {
            return Err(parse_error(line, Some(&key), format!("unknown key `{key}`")));
        }
        if !seen.insert(key.clone()) {
            return Err(parse_error(line, Some(&key), format!("duplicate key `{key}`")));
        }
        let bad = |what: &str| {
            parse_error(
                line,
                Some(&key),
                format!("`{key}` expects {what}, got `{}`", rhs.trim()),
            )
        };
        let value = unquote(rhs);
        let int = || value.parse::<i64>().map_err(|_| bad("an integer"));
        let uint = || value.parse::<usize>().map_err(|_| bad("a non-negative integer"));
        let float = || value.parse::<f64>().map_err(|_| bad("a number"));
        match key.as_str() {
            "map_type" => config.map_type = Flavor::parse(value).ok_or_else(|| bad("'polynomial' or 'rational'"))?,
            "degree" => config.degree = uint()?,
            "population" => config.population = uint()?,
            "generations" => config.generations = uint()?,
            "survival" => config.survival = float()?,
            "reset_survival" => config.reset_survival = float()?,
            "reset_interval" => config.reset_interval = uint()?,
            "normalize_orbit" => {
                config.normalize_orbit = match value {
                    "True" | "true" => true,
                    "False" | "false" => false,
                    _ => return Err(bad("True or False")),
                }
            }
            "bound" => config.bound = int()?,
            "mixing_method" => {
                config.mixing_method = MixingMethod::parse(value).ok_or_else(|| bad("'crossover' or 'permutation'"))?
            }
            "mutation_rate" => config.mutation_rate = float()?,
            "mutation_method" => {
                config.mutation_method = MutationMethod::parse(value).ok_or_else(|| bad("'all' or 'single'"))?
            }
            "target" => {
                config.target =
                    Target::parse(value).ok_or_else(|| bad("'height_ratio', 'preperiodic', 'cycle' or 'tail'"))?
            }
            "orbit_target" => config.orbit_target = if is_none(value) { None } else { Some(float()?) },
            "orbit_weights" => {
                config.orbit_weights = if is_none(value) {
                    None
                } else {
                    let inner = value
                        .strip_prefix(['(', '['])
                        .and_then(|v| v.strip_suffix([')', ']']))
                        .ok_or_else(|| bad("a pair like (5,1)"))?;
                    let parts: Vec<f64> = inner
                        .split(',')
                        .map(|p| p.trim().parse::<f64>())
                        .collect::<Result<_, _>>()
                        .map_err(|_| bad("a pair like (5,1)"))?;
                    match parts[..] {
                        [a, b] => Some((a, b)),
                        _ => return Err(bad("a pair like (5,1)")),
                    }
                }
            }
            "seed" => config.seed = value.parse::<u64>().map_err(|_| bad("a non-negative integer"))?,
            _ => unreachable!("key checked against KEYS"),
        }
    }
    config.validate()?;
    Ok(config)
}

pub fn parse_config(path: impl AsRef<Path>) -> Result<GAConfig, ConfigFileError> {
    parse_config_str(&std::fs::read_to_string(path)?)
}

/// Renders a configuration in the same format `parse_config_str` reads.
pub fn render_config(c: &GAConfig) -> String {
    let opt = |v: Option<String>| v.unwrap_or_else(|| "None".to_string());
    let flavor = match c.map_type {
        Flavor::Polynomial => "polynomial",
        Flavor::Rational => "rational",
    };
    let mixing = match c.mixing_method {
        MixingMethod::Crossover => "crossover",
        MixingMethod::Permutation => "permutation",
    };
    let mutation = match c.mutation_method {
        MutationMethod::All => "all",
        MutationMethod::Single => "single",
    };
    let lines = [
        format!("map_type = '{flavor}'"),
        format!("degree = {}", c.degree),
        format!("population = {}", c.population),
        format!("generations = {}", c.generations),
        format!("survival = {}", c.survival),
        format!("reset_survival = {}", c.reset_survival),
        format!("reset_interval = {}", c.reset_interval),
        format!("normalize_orbit = {}", if c.normalize_orbit { "True" } else { "False" }),
        format!("bound = {}", c.bound),
        format!("mixing_method = '{mixing}'"),
        format!("mutation_rate = {}", c.mutation_rate),
        format!("mutation_method = '{mutation}'"),
        format!("target = '{}'", c.target),
        format!("orbit_target = {}", opt(c.orbit_target.map(|t| t.to_string()))),
        format!(
            "orbit_weights = {}",
            opt(c.orbit_weights.map(|(a, b)| format!("({a},{b})")))
        ),
        format!("seed = {}", c.seed),
    ];
    lines.join("\n") + "\n"
}
