//! Run configuration: flags override the file named by `SELFAFFINE_CONFIG`,
//! which overrides the defaults.
//!
//! The file holds one `key = value` per line; blank lines and lines starting
//! with `#` are skipped. Keys: `depth`, `point_budget`, `raster_size`, `jobs`,
//! `output_dir`.

use std::path::{Path, PathBuf};

use crate::error::CliError;

pub const CONFIG_ENV: &str = "SELFAFFINE_CONFIG";

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RunConfig {
    pub depth: u32,
    pub point_budget: u64,
    pub raster_size: u32,
    pub jobs: usize,
    pub output_dir: PathBuf,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            depth: selfaffine_core::extremal::DEFAULT_DEPTH,
            point_budget: selfaffine_core::geometry::DEFAULT_POINT_BUDGET,
            raster_size: selfaffine_core::render::DEFAULT_RASTER_SIZE,
            jobs: std::thread::available_parallelism().map_or(1, |n| n.get()),
            output_dir: PathBuf::from("."),
        }
    }
}

/// Values given on the command line; `None` falls through to the file.
#[derive(Debug, Clone, Default)]
pub struct Overrides {
    pub depth: Option<u32>,
    pub point_budget: Option<u64>,
    pub raster_size: Option<u32>,
    pub jobs: Option<usize>,
    pub output_dir: Option<PathBuf>,
}

fn positive<T: std::str::FromStr + PartialOrd + Default>(
    key: &str,
    value: &str,
) -> Result<T, CliError> {
    match value.parse::<T>() {
        Ok(v) if v > T::default() => Ok(v),
        _ => Err(CliError::Invalid(format!(
            "config {key}: expected a positive integer, got {value:?}"
        ))),
    }
}

impl RunConfig {
    /// Applies a config file's text on top of `self`.
    pub fn apply_text(mut self, text: &str) -> Result<Self, CliError> {
        for (lineno, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| {
                CliError::Invalid(format!("config line {}: expected key = value", lineno + 1))
            })?;
            let (key, value) = (key.trim(), value.trim());
            match key {
                "depth" => self.depth = positive(key, value)?,
                "point_budget" => self.point_budget = positive(key, value)?,
                "raster_size" => self.raster_size = positive(key, value)?,
                "jobs" => self.jobs = positive(key, value)?,
                "output_dir" => self.output_dir = PathBuf::from(value),
                other => {
                    return Err(CliError::Invalid(format!(
                        "config line {}: unknown key {other:?}",
                        lineno + 1
                    )))
                }
            }
        }
        Ok(self)
    }

    pub fn apply_file(self, path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path).map_err(|e| {
            CliError::Invalid(format!("cannot read config {}: {e}", path.display()))
        })?;
        self.apply_text(&text)
    }

    pub fn apply_overrides(mut self, o: &Overrides) -> Result<Self, CliError> {
        let nonzero = |key: &str, v: u64| {
            if v == 0 {
                Err(CliError::Invalid(format!("--{key} must be positive")))
            } else {
                Ok(())
            }
        };
        if let Some(v) = o.depth {
            nonzero("depth", v.into())?;
            self.depth = v;
        }
        if let Some(v) = o.point_budget {
            nonzero("point-budget", v)?;
            self.point_budget = v;
        }
        if let Some(v) = o.raster_size {
            nonzero("raster-size", v.into())?;
            self.raster_size = v;
        }
        if let Some(v) = o.jobs {
            nonzero("jobs", v as u64)?;
            self.jobs = v;
        }
        if let Some(v) = &o.output_dir {
            self.output_dir = v.clone();
        }
        Ok(self)
    }

    /// Defaults, then the file from `env_path` (if set), then `overrides`.
    pub fn resolve(env_path: Option<&Path>, overrides: &Overrides) -> Result<Self, CliError> {
        let mut cfg = Self::default();
        if let Some(path) = env_path {
            cfg = cfg.apply_file(path)?;
        }
        cfg.apply_overrides(overrides)
    }

    pub fn from_env(overrides: &Overrides) -> Result<Self, CliError> {
        let path = std::env::var_os(CONFIG_ENV).map(PathBuf::from);
        Self::resolve(path.as_deref(), overrides)
    }

    pub fn ensure_output_dir(&self) -> Result<(), CliError> {
        std::fs::create_dir_all(&self.output_dir).map_err(|e| {
            CliError::Io(format!(
                "cannot create output directory {}: {e}",
                self.output_dir.display()
            ))
        })
    }

    pub fn pool(&self) -> Result<rayon::ThreadPool, CliError> {
        rayon::ThreadPoolBuilder::new()
            .num_threads(self.jobs)
            .build()
            .map_err(|e| CliError::Io(format!("cannot start worker pool: {e}")))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn precedence_is_flags_then_file_then_defaults() {
        let cfg = RunConfig::default()
            .apply_text("# comment\ndepth = 8\nraster_size=64\n\noutput_dir = out\n")
            .unwrap()
            .apply_overrides(&Overrides {
                depth: Some(5),
                ..Overrides::default()
            })
            .unwrap();
        assert_eq!(cfg.depth, 5);
        assert_eq!(cfg.raster_size, 64);
        assert_eq!(cfg.point_budget, 1_000_000);
        assert_eq!(cfg.output_dir, PathBuf::from("out"));
    }

    #[test]
    fn rejects_bad_lines() {
        for text in ["depth = 0", "depth = x", "colour = red", "depth"] {
            assert!(RunConfig::default().apply_text(text).is_err(), "{text}");
        }
    }
}
