//! Experiment configuration: flat `key = value` files plus command-line overrides.
//!
//! A config file may contain `[section]` headers. Keys before the first header and keys in
//! the section named after the subcommand apply; other sections are skipped, so one file can
//! hold settings for several subcommands.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use circnet_core::corpus::corpus;
use circnet_core::{DataMeasure, SignPattern, Signal};

use crate::error::{LabError, Result};
use crate::formats;

/// Keys accepted by every subcommand.
pub const COMMON_KEYS: &[&str] = &["out", "seed", "threads"];

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub command: String,
    pub params: BTreeMap<String, String>,
    /// Directory the config file was read from; relative paths in the file resolve here.
    pub base_dir: PathBuf,
}

/// Parses INI-style text into the keys that apply to `command`.
pub fn parse_ini(text: &str, command: &str, src: &str) -> Result<BTreeMap<String, String>> {
    let mut out = BTreeMap::new();
    let mut active = true;
    for (i, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') || line.starts_with(';') {
            continue;
        }
        if let Some(name) = line.strip_prefix('[').and_then(|l| l.strip_suffix(']')) {
            active = name.trim() == command;
            continue;
        }
        let (k, v) = line.split_once('=').ok_or_else(|| LabError::Parse {
            path: src.to_string(),
            line: i + 1,
            msg: "expected `key = value`".into(),
        })?;
        if active {
            out.insert(k.trim().to_string(), v.trim().to_string());
        }
    }
    Ok(out)
}

impl ExperimentConfig {
    /// Merges the config file (if any) with overrides; later sources win. Unknown keys are
    /// rejected.
    pub fn build(
        command: &str,
        allowed: &[&str],
        file: Option<&Path>,
        overrides: impl IntoIterator<Item = (&'static str, Option<String>)>,
    ) -> Result<Self> {
        let mut params = BTreeMap::new();
        let mut base_dir = PathBuf::from(".");
        if let Some(path) = file {
            let text = formats::read_text(path)?;
            params = parse_ini(&text, command, &path.display().to_string())?;
            if let Some(p) = path.parent() {
                base_dir = p.to_path_buf();
            }
        }
        for (k, v) in overrides {
            if let Some(v) = v {
                params.insert(k.to_string(), v);
            }
        }
        for k in params.keys() {
            if !allowed.contains(&k.as_str()) && !COMMON_KEYS.contains(&k.as_str()) {
                return Err(LabError::config(format!("unknown key `{k}` for `{command}`")));
            }
        }
        Ok(ExperimentConfig { command: command.to_string(), params, base_dir })
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.params.get(key).map(String::as_str)
    }

    fn parse<T: std::str::FromStr>(&self, key: &str, what: &str) -> Result<Option<T>> {
        match self.get(key) {
            None => Ok(None),
            Some(v) => v
                .parse()
                .map(Some)
                .map_err(|_| LabError::config(format!("`{key}` must be {what}, got `{v}`"))),
        }
    }

    pub fn f64_or(&self, key: &str, default: f64) -> Result<f64> {
        let v = self.parse::<f64>(key, "a number")?.unwrap_or(default);
        if !v.is_finite() {
            return Err(LabError::config(format!("`{key}` must be finite")));
        }
        Ok(v)
    }

    pub fn opt_f64(&self, key: &str) -> Result<Option<f64>> {
        match self.parse::<f64>(key, "a number")? {
            Some(v) if !v.is_finite() => Err(LabError::config(format!("`{key}` must be finite"))),
            v => Ok(v),
        }
    }

    /// A number in `(lo, hi]`.
    pub fn f64_in(&self, key: &str, default: f64, lo: f64, hi: f64) -> Result<f64> {
        let v = self.f64_or(key, default)?;
        if !(v > lo && v <= hi) {
            return Err(LabError::config(format!("`{key}` = {v} must lie in ({lo}, {hi}]")));
        }
        Ok(v)
    }

    pub fn positive(&self, key: &str, default: f64) -> Result<f64> {
        self.f64_in(key, default, 0.0, f64::MAX)
    }

    pub fn usize_or(&self, key: &str, default: usize) -> Result<usize> {
        Ok(self.parse::<usize>(key, "a non-negative integer")?.unwrap_or(default))
    }

    pub fn usize_at_least(&self, key: &str, default: usize, min: usize) -> Result<usize> {
        let v = self.usize_or(key, default)?;
        if v < min {
            return Err(LabError::config(format!("`{key}` = {v} must be at least {min}")));
        }
        Ok(v)
    }

    pub fn u64_or(&self, key: &str, default: u64) -> Result<u64> {
        Ok(self.parse::<u64>(key, "a non-negative integer")?.unwrap_or(default))
    }

    pub fn bool_or(&self, key: &str, default: bool) -> Result<bool> {
        match self.get(key) {
            None => Ok(default),
            Some("true" | "yes" | "1") => Ok(true),
            Some("false" | "no" | "0") => Ok(false),
            Some(v) => Err(LabError::config(format!("`{key}` must be true or false, got `{v}`"))),
        }
    }

    fn list<T: std::str::FromStr>(&self, key: &str, what: &str) -> Result<Option<Vec<T>>> {
        let Some(v) = self.get(key) else { return Ok(None) };
        let items: Vec<T> = v
            .split(',')
            .map(str::trim)
            .filter(|s| !s.is_empty())
            .map(|s| {
                s.parse().map_err(|_| LabError::config(format!("`{key}`: `{s}` is not {what}")))
            })
            .collect::<Result<_>>()?;
        if items.is_empty() {
            return Err(LabError::config(format!("`{key}` is an empty list")));
        }
        Ok(Some(items))
    }

    pub fn f64_list_or(&self, key: &str, default: &[f64]) -> Result<Vec<f64>> {
        let v = self.list::<f64>(key, "a number")?.unwrap_or_else(|| default.to_vec());
        if v.iter().any(|x| !x.is_finite()) {
            return Err(LabError::config(format!("`{key}` must contain finite numbers")));
        }
        Ok(v)
    }

    pub fn usize_list_or(&self, key: &str, default: &[usize]) -> Result<Vec<usize>> {
        Ok(self.list::<usize>(key, "a non-negative integer")?.unwrap_or_else(|| default.to_vec()))
    }

    pub fn seed(&self) -> Result<u64> {
        self.u64_or("seed", 0)
    }

    pub fn threads(&self) -> Result<Option<usize>> {
        match self.parse::<usize>("threads", "a positive integer")? {
            Some(0) => Err(LabError::config("`threads` must be at least 1")),
            t => Ok(t),
        }
    }

    pub fn out_dir(&self) -> PathBuf {
        self.get("out")
            .map(PathBuf::from)
            .unwrap_or_else(|| PathBuf::from("circnet-out").join(&self.command))
    }

    /// Resolves a path from the config relative to the config file's directory.
    pub fn path(&self, value: &str) -> PathBuf {
        let p = Path::new(value);
        if p.is_absolute() || p.exists() {
            p.to_path_buf()
        } else {
            self.base_dir.join(p)
        }
    }

    /// The target: `corpus:NAME`, a `.pwt` file, or inline pieces separated by `;`.
    /// With `normalize` set the target is scaled to unit L² norm.
    pub fn target(&self, default: &str, normalize: bool) -> Result<Signal> {
        let spec = self.get("target").unwrap_or(default);
        let y = resolve_target(self, spec)?;
        if self.bool_or("normalize", normalize)? {
            let n = y.norm();
            if n == 0.0 {
                return Err(LabError::config("cannot normalize the zero target"));
            }
            return Ok(y.scale(1.0 / n));
        }
        Ok(y)
    }

    /// `alternating` (default, needs `m`), `positive`, or an explicit list like `1,-1,1`.
    pub fn signs(&self, m_default: usize) -> Result<SignPattern> {
        let m = self.usize_at_least("m", m_default, 1)?;
        let spec = self.get("signs").unwrap_or("alternating");
        let s = match spec {
            "alternating" => SignPattern::alternating(m)?,
            "positive" => SignPattern::all_positive(m)?,
            list => {
                let a = list
                    .split(',')
                    .map(|t| match t.trim() {
                        "1" | "+1" | "+" => Ok(1),
                        "-1" | "-" => Ok(-1),
                        o => Err(LabError::config(format!("`signs`: `{o}` is not ±1"))),
                    })
                    .collect::<Result<Vec<i8>>>()?;
                if self.get("m").is_some() && a.len() != m {
                    return Err(LabError::config(format!("`signs` has {} entries, m = {m}", a.len())));
                }
                SignPattern::new(a)?
            }
        };
        Ok(s)
    }

    /// `uniform` (default) or a file of `angle weight` lines.
    pub fn measure(&self) -> Result<DataMeasure> {
        match self.get("measure") {
            None | Some("uniform") => Ok(DataMeasure::Uniform),
            Some(f) => {
                let p = self.path(f);
                if !p.is_file() {
                    return Err(LabError::config(format!("measure file {} not found", p.display())));
                }
                formats::parse_measure(&formats::read_text(&p)?, f)
            }
        }
    }
}

fn resolve_target(cfg: &ExperimentConfig, spec: &str) -> Result<Signal> {
    if let Some(name) = spec.strip_prefix("corpus:") {
        return corpus()
            .into_iter()
            .find(|t| t.name == name)
            .map(|t| t.signal)
            .ok_or_else(|| {
                let names: Vec<&str> = corpus().iter().map(|t| t.name).collect();
                LabError::config(format!("unknown corpus target `{name}` (have {})", names.join(", ")))
            });
    }
    let p = cfg.path(spec);
    if p.is_file() {
        return Ok(formats::parse_pwt(&formats::read_text(&p)?, spec)?.into());
    }
    let looks_inline = spec.contains(';') || spec.split_whitespace().count() == 5;
    if looks_inline {
        let text = spec.replace(';', "\n");
        return Ok(formats::parse_pwt(&text, "inline target")?.into());
    }
    Err(LabError::config(format!("target file {} not found", p.display())))
}
