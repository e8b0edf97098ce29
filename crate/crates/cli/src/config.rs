//! Experiment configuration: defaults, `key=value` config files, validation.

use std::collections::BTreeMap;
use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use pnn::NetworkKind;

use crate::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Command {
    Sweep,
    DpnnBench,
    IdentifyBench,
    TheoryTable,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::Sweep => "sweep",
            Command::DpnnBench => "dpnn-bench",
            Command::IdentifyBench => "identify-bench",
            Command::TheoryTable => "theory",
        }
    }

    fn sweepable(self) -> &'static [SweepVar] {
        use SweepVar::*;
        match self {
            Command::Sweep => &[Q, M, A, B],
            Command::DpnnBench => &[K, M, A, C],
            Command::IdentifyBench => &[M, B, Q],
            Command::TheoryTable => &[N, Q, M, A, B, K],
        }
    }
}

/// A parameter that can be varied over a grid.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SweepVar {
    N,
    Q,
    M,
    A,
    B,
    K,
    C,
}

impl FromStr for SweepVar {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self, CliError> {
        Ok(match s {
            "N" | "n" => SweepVar::N,
            "q" | "Q" => SweepVar::Q,
            "M" | "m" => SweepVar::M,
            "a" => SweepVar::A,
            "b" => SweepVar::B,
            "k" => SweepVar::K,
            "c" => SweepVar::C,
            other => return Err(CliError::Config(format!("unknown sweep variable `{other}`"))),
        })
    }
}

impl fmt::Display for SweepVar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            SweepVar::N => "N",
            SweepVar::Q => "q",
            SweepVar::M => "M",
            SweepVar::A => "a",
            SweepVar::B => "b",
            SweepVar::K => "k",
            SweepVar::C => "c",
        };
        f.write_str(s)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub command: Command,
    pub n: usize,
    pub q: u32,
    pub m: usize,
    /// When set, M is `round(load * N)` at every grid point.
    pub load: Option<f64>,
    pub a: f64,
    pub b: f64,
    pub kind: NetworkKind,
    pub k: u32,
    pub c: f64,
    pub trials: usize,
    pub max_sweeps: usize,
    pub seed: u64,
    pub sweep: Option<SweepVar>,
    pub grid: Vec<f64>,
    pub threads: usize,
    pub out: Option<PathBuf>,
}

impl ExperimentConfig {
    pub fn new(command: Command) -> Self {
        Self {
            command,
            n: 200,
            q: 16,
            m: 400,
            load: None,
            a: 0.0,
            b: 0.0,
            kind: NetworkKind::Pnn2,
            k: 0,
            c: 0.0,
            trials: 100,
            max_sweeps: 50,
            seed: 1,
            sweep: None,
            grid: Vec::new(),
            threads: 1,
            out: None,
        }
    }

    /// Pattern count after applying `load`.
    pub fn patterns(&self) -> usize {
        match self.load {
            Some(load) => (load * self.n as f64).round() as usize,
            None => self.m,
        }
    }

    /// Sets one field from its textual `key` and `value`.
    pub fn set(&mut self, key: &str, value: &str) -> Result<(), CliError> {
        fn parse<T: FromStr>(key: &str, value: &str) -> Result<T, CliError> {
            value.trim().parse().map_err(|_| CliError::Config(format!("bad value `{value}` for `{key}`")))
        }
        match key {
            "N" | "n" => self.n = parse(key, value)?,
            "q" => self.q = parse(key, value)?,
            "M" | "m" => self.m = parse(key, value)?,
            "load" => self.load = Some(parse(key, value)?),
            "a" => self.a = parse(key, value)?,
            "b" => self.b = parse(key, value)?,
            "kind" => self.kind = value.trim().parse().map_err(|e: pnn::Error| CliError::Config(e.to_string()))?,
            "k" => self.k = parse(key, value)?,
            "c" => self.c = parse(key, value)?,
            "trials" => self.trials = parse(key, value)?,
            "max_sweeps" | "max-sweeps" => self.max_sweeps = parse(key, value)?,
            "seed" => self.seed = parse(key, value)?,
            "sweep" => self.sweep = Some(value.trim().parse()?),
            "grid" => self.grid = parse_grid(value)?,
            "threads" => self.threads = parse(key, value)?,
            "out" => self.out = Some(PathBuf::from(value.trim())),
            other => return Err(CliError::Config(format!("unknown config key `{other}`"))),
        }
        Ok(())
    }

    /// Applies every `key=value` line of a config file. Blank lines and lines
    /// starting with `#` are skipped.
    pub fn apply_file(&mut self, path: &Path) -> Result<(), CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Config(format!("cannot read {}: {e}", path.display())))?;
        for (key, value) in parse_key_values(&text)? {
            self.set(&key, &value)?;
        }
        Ok(())
    }

    /// This configuration with the sweep variable set to `value`.
    pub fn at(&self, var: SweepVar, value: f64) -> Result<Self, CliError> {
        let mut c = self.clone();
        let whole = |v: f64| -> Result<u64, CliError> {
            if v >= 0.0 && v.fract() == 0.0 {
                Ok(v as u64)
            } else {
                Err(CliError::Config(format!("{var} = {v} must be a non-negative integer")))
            }
        };
        match var {
            SweepVar::N => c.n = whole(value)? as usize,
            SweepVar::Q => c.q = whole(value)? as u32,
            SweepVar::M => {
                c.m = whole(value)? as usize;
                c.load = None;
            }
            SweepVar::A => c.a = value,
            SweepVar::B => c.b = value,
            SweepVar::K => c.k = whole(value)? as u32,
            SweepVar::C => c.c = value,
        }
        Ok(c)
    }

    /// Grid points in order; a single point when nothing is swept.
    pub fn points(&self) -> Result<Vec<Self>, CliError> {
        match self.sweep {
            None => Ok(vec![self.clone()]),
            Some(var) => self.grid.iter().map(|&v| self.at(var, v)).collect(),
        }
    }

    /// Checks everything the command needs before any work starts.
    pub fn validate(&self) -> Result<(), CliError> {
        let fail = |msg: String| Err(CliError::Config(msg));
        if let Some(var) = self.sweep {
            if !self.command.sweepable().contains(&var) {
                return fail(format!("`{}` cannot sweep {var}", self.command.name()));
            }
        }
        if self.command != Command::TheoryTable && self.trials == 0 {
            return fail("trials must be at least 1".into());
        }
        if self.max_sweeps == 0 {
            return fail("max_sweeps must be at least 1".into());
        }
        if self.threads == 0 {
            return fail("threads must be at least 1".into());
        }
        if let Some(load) = self.load {
            if !(load > 0.0) {
                return fail(format!("load = {load} must be positive"));
            }
        }
        for p in self.points()? {
            p.validate_point()?;
        }
        Ok(())
    }

    fn validate_point(&self) -> Result<(), CliError> {
        let fail = |msg: String| Err(CliError::Config(msg));
        for (name, v) in [("a", self.a), ("b", self.b)] {
            if !(0.0..=1.0).contains(&v) {
                return fail(format!("{name} = {v} is not a probability"));
            }
        }
        if !(0.0..1.0).contains(&self.c) {
            return fail(format!("c = {} must lie in [0, 1)", self.c));
        }
        if self.n == 0 || self.q == 0 || self.patterns() == 0 {
            return fail(format!("N = {}, q = {}, M = {} must be positive", self.n, self.q, self.patterns()));
        }
        match self.command {
            Command::Sweep => {
                if self.kind == NetworkKind::Pnn3 {
                    if self.q < 2 {
                        return fail("pnn3 needs q >= 2".into());
                    }
                    if self.a != 0.0 {
                        return fail("pnn3 states carry no sign; a must be 0".into());
                    }
                }
            }
            Command::DpnnBench => {
                if self.k > pnn::dpnn::MAX_K {
                    return fail(format!("k = {} exceeds {}", self.k, pnn::dpnn::MAX_K));
                }
                let fragment = self.k as usize + 1;
                if !self.n.is_multiple_of(fragment) {
                    return fail(format!("N = {} is not divisible by k + 1 = {fragment}", self.n));
                }
                if self.a >= 0.5 {
                    return fail(format!("a = {} must be below 0.5", self.a));
                }
            }
            Command::IdentifyBench => {
                if self.q < 2 {
                    return fail("the identifier needs q >= 2".into());
                }
                if self.a != 0.0 {
                    return fail("identification uses level noise only; a must be 0".into());
                }
            }
            Command::TheoryTable => {}
        }
        Ok(())
    }
}

/// Parses a comma-separated grid; the empty string is an empty grid.
pub fn parse_grid(text: &str) -> Result<Vec<f64>, CliError> {
    text.split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|s| s.parse::<f64>().map_err(|_| CliError::Config(format!("bad grid value `{s}`"))))
        .collect()
}

/// Flat `key=value` lines; later keys win.
pub fn parse_key_values(text: &str) -> Result<BTreeMap<String, String>, CliError> {
    let mut map = BTreeMap::new();
    for (no, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (key, value) =
            line.split_once('=').ok_or_else(|| CliError::Config(format!("line {}: expected key=value", no + 1)))?;
        map.insert(key.trim().to_string(), value.trim().to_string());
    }
    Ok(map)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn key_value_files() {
        let map = parse_key_values("# comment\nN = 300\n\nq=8\nq=4\n").unwrap();
        assert_eq!(map["N"], "300");
        assert_eq!(map["q"], "4");
        assert!(parse_key_values("oops").is_err());
    }

    #[test]
    fn grids() {
        assert_eq!(parse_grid("4, 8,16").unwrap(), vec![4.0, 8.0, 16.0]);
        assert!(parse_grid("").unwrap().is_empty());
        assert!(parse_grid("4,x").is_err());
    }

    #[test]
    fn validation() {
        let mut c = ExperimentConfig::new(Command::Sweep);
        assert!(c.validate().is_ok());
        c.trials = 0;
        assert!(c.validate().is_err());
        c.trials = 10;
        c.sweep = Some(SweepVar::K);
        assert!(c.validate().is_err());
        c.sweep = Some(SweepVar::Q);
        c.grid = vec![4.0, 2.5];
        assert!(c.validate().is_err());
        c.grid = vec![4.0, 8.0];
        assert!(c.validate().is_ok());

        let mut d = ExperimentConfig::new(Command::DpnnBench);
        d.n = 800;
        d.k = 4;
        assert!(d.validate().is_ok());
        d.k = 6;
        assert!(d.validate().is_err());

        let mut t = ExperimentConfig::new(Command::TheoryTable);
        t.trials = 0;
        assert!(t.validate().is_ok());
    }

    #[test]
    fn load_sets_pattern_count() {
        let mut c = ExperimentConfig::new(Command::Sweep);
        c.set("load", "2").unwrap();
        c.set("N", "150").unwrap();
        assert_eq!(c.patterns(), 300);
        let p = c.at(SweepVar::M, 7.0).unwrap();
        assert_eq!(p.patterns(), 7);
        assert!(c.set("bogus", "1").is_err());
    }
}
