use std::fs;
use std::path::{Path, PathBuf};

use crate::benchmark::Benchmark;
use crate::error::{Error, Result};
use crate::mesh::{MeshFamily, MeshKind};
use crate::simulation::{SimOptions, TimeStep};

/// Settings shared by all subcommands.
///
/// Every field has a `key = value` spelling (the long flag name without dashes),
/// so a config file and the command line can be merged key by key.
#[derive(Clone, Debug, PartialEq)]
pub struct RunConfig {
    pub mesh_family: MeshKind,
    /// Cells per side on level 0.
    pub base_divisions: usize,
    /// Number of refinement levels; single runs use the finest one.
    pub levels: usize,
    pub perturbation: f64,
    pub tau: TimeStep,
    pub t_final: f64,
    pub damping: f64,
    pub benchmark: Benchmark,
    pub out_dir: PathBuf,
    /// Write a field snapshot every this many steps; 0 disables snapshots.
    pub snapshot_every: usize,
    pub mesh_file: Option<PathBuf>,
    pub dump_matrices: bool,
    pub assert: bool,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            mesh_family: MeshKind::StructuredTriangle,
            base_divisions: 8,
            levels: 4,
            perturbation: 0.2,
            tau: TimeStep::Fixed(0.001),
            t_final: 2.0,
            damping: 0.0,
            benchmark: Benchmark::PlaneWave,
            out_dir: PathBuf::from("out"),
            snapshot_every: 0,
            mesh_file: None,
            dump_matrices: false,
            assert: false,
        }
    }
}

pub const KEYS: &[&str] = &[
    "mesh-family",
    "base-divisions",
    "levels",
    "perturbation",
    "tau",
    "T",
    "damping",
    "benchmark",
    "out-dir",
    "snapshot-every",
    "mesh-file",
    "dump-matrices",
    "assert",
];

impl RunConfig {
    /// Defaults overridden by `pairs` in order; a later pair wins over an earlier one.
    pub fn from_pairs<K: AsRef<str>, V: AsRef<str>>(pairs: impl IntoIterator<Item = (K, V)>) -> Result<Self> {
        let mut cfg = Self::default();
        for (k, v) in pairs {
            cfg.set(k.as_ref(), v.as_ref())?;
        }
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn set(&mut self, key: &str, value: &str) -> Result<()> {
        let value = value.trim();
        let bad = |what: &str| Error::Config(format!("{key}: expected {what}, got '{value}'"));
        let num = |what: &str| value.parse::<f64>().map_err(|_| bad(what));
        let count = |what: &str| value.parse::<usize>().map_err(|_| bad(what));
        let flag = || match value {
            "true" | "yes" | "1" | "" => Ok(true),
            "false" | "no" | "0" => Ok(false),
            _ => Err(bad("a boolean")),
        };
        match key.trim() {
            "mesh-family" => self.mesh_family = value.parse()?,
            "base-divisions" => self.base_divisions = count("a cell count")?,
            "levels" => self.levels = count("a level count")?,
            "perturbation" => self.perturbation = num("a number")?,
            "tau" => {
                self.tau = if value == "auto" { TimeStep::Auto } else { TimeStep::Fixed(num("a number or 'auto'")?) }
            }
            "T" => self.t_final = num("a number")?,
            "damping" => self.damping = num("a number")?,
            "benchmark" => self.benchmark = value.parse()?,
            "out-dir" => self.out_dir = PathBuf::from(value),
            "snapshot-every" => self.snapshot_every = count("a step count")?,
            "mesh-file" => self.mesh_file = (!value.is_empty()).then(|| PathBuf::from(value)),
            "dump-matrices" => self.dump_matrices = flag()?,
            "assert" => self.assert = flag()?,
            other => return Err(Error::Config(format!("unknown key '{other}'"))),
        }
        Ok(())
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.t_final > 0.0) {
            return Err(Error::Config(format!("T must be positive, got {}", self.t_final)));
        }
        if let TimeStep::Fixed(t) = self.tau {
            if !(t > 0.0) {
                return Err(Error::Config(format!("tau must be positive or 'auto', got {t}")));
            }
        }
        if self.levels == 0 {
            return Err(Error::Config("levels must be at least 1".into()));
        }
        if self.base_divisions == 0 {
            return Err(Error::Config("base-divisions must be at least 1".into()));
        }
        if !(self.damping >= 0.0) {
            return Err(Error::Config(format!("damping must be non-negative, got {}", self.damping)));
        }
        Ok(())
    }

    pub fn family(&self) -> MeshFamily {
        MeshFamily { perturbation: self.perturbation, ..MeshFamily::unit_square(self.mesh_family, self.base_divisions) }
    }

    pub fn sim_options(&self) -> SimOptions {
        SimOptions {
            benchmark: self.benchmark,
            tau: self.tau,
            t_final: self.t_final,
            damping: self.damping,
            ..SimOptions::default()
        }
    }
}

/// Parses `key = value` lines; blank lines and lines starting with `#` are skipped.
pub fn parse_config(text: &str) -> Result<Vec<(String, String)>> {
    let mut out = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (k, v) = line
            .split_once('=')
            .ok_or_else(|| Error::Parse { line: i + 1, msg: format!("expected 'key = value', got '{line}'") })?;
        let k = k.trim();
        if !KEYS.contains(&k) {
            return Err(Error::Parse { line: i + 1, msg: format!("unknown key '{k}'") });
        }
        out.push((k.to_string(), v.trim().to_string()));
    }
    Ok(out)
}

pub fn read_config(path: &Path) -> Result<Vec<(String, String)>> {
    parse_config(&fs::read_to_string(path)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn later_pairs_win() {
        let cfg = RunConfig::from_pairs([("tau", "0.01"), ("levels", "2"), ("tau", "auto")]).unwrap();
        assert_eq!(cfg.tau, TimeStep::Auto);
        assert_eq!(cfg.levels, 2);
    }

    #[test]
    fn config_text() {
        let pairs = parse_config("# sweep\nmesh-family = quad\n\nT=1.5\ndump-matrices = true\n").unwrap();
        let cfg = RunConfig::from_pairs(pairs).unwrap();
        assert_eq!(cfg.mesh_family, MeshKind::StructuredQuad);
        assert_eq!(cfg.t_final, 1.5);
        assert!(cfg.dump_matrices);
    }

    #[test]
    fn invalid_values_are_rejected() {
        assert!(matches!(parse_config("tau 0.1"), Err(Error::Parse { line: 1, .. })));
        assert!(matches!(parse_config("x\ncolour = red"), Err(Error::Parse { line: 1, .. })));
        assert!(parse_config("colour = red").is_err());
        assert!(RunConfig::from_pairs([("T", "-1")]).is_err());
        assert!(RunConfig::from_pairs([("tau", "0")]).is_err());
        assert!(RunConfig::from_pairs([("levels", "0")]).is_err());
        assert!(RunConfig::from_pairs([("benchmark", "sine")]).is_err());
    }
}
