//! Run configuration: defaults, named presets, `key = value` files and
//! command-line overrides, applied in that order.

use std::f64::consts::{FRAC_PI_2, PI};
use std::fmt::{self, Write as _};
use std::path::{Path, PathBuf};
use std::str::FromStr;

use treeqst_core::MAX_GENERATIONS;

use crate::error::{CliError, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    Fidelity,
    Success,
    Concurrence,
    EdSuccess,
    Amplitudes,
    Verify,
}

impl Mode {
    pub const ALL: [Mode; 6] = [
        Mode::Fidelity,
        Mode::Success,
        Mode::Concurrence,
        Mode::EdSuccess,
        Mode::Amplitudes,
        Mode::Verify,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Mode::Fidelity => "fidelity",
            Mode::Success => "success",
            Mode::Concurrence => "concurrence",
            Mode::EdSuccess => "ed-success",
            Mode::Amplitudes => "amplitudes",
            Mode::Verify => "verify",
        }
    }
}

impl FromStr for Mode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        Mode::ALL
            .into_iter()
            .find(|m| m.name() == s)
            .ok_or_else(|| {
                format!(
                    "unknown mode `{s}` (expected one of: {})",
                    Mode::ALL.map(Mode::name).join(", ")
                )
            })
    }
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Csv,
    Json,
}

impl FromStr for Format {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "csv" => Ok(Format::Csv),
            "json" => Ok(Format::Json),
            _ => Err(format!("unknown format `{s}` (expected csv or json)")),
        }
    }
}

impl fmt::Display for Format {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Format::Csv => "csv",
            Format::Json => "json",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Preset {
    Fig2a,
    Fig2c,
    Fig3a,
    Fig3c,
}

impl Preset {
    pub const ALL: [Preset; 4] = [Preset::Fig2a, Preset::Fig2c, Preset::Fig3a, Preset::Fig3c];

    pub fn name(self) -> &'static str {
        match self {
            Preset::Fig2a => "fig2a",
            Preset::Fig2c => "fig2c",
            Preset::Fig3a => "fig3a",
            Preset::Fig3c => "fig3c",
        }
    }

    /// Fidelity presets sweep `p` on a 4-generation and an 8-generation tree;
    /// concurrence presets do the same for a maximally entangled input.
    pub fn layer(self) -> ConfigLayer {
        let (mode, generations) = match self {
            Preset::Fig2a => (Mode::Fidelity, 4),
            Preset::Fig2c => (Mode::Fidelity, 8),
            Preset::Fig3a => (Mode::Concurrence, 4),
            Preset::Fig3c => (Mode::Concurrence, 8),
        };
        ConfigLayer {
            mode: Some(mode),
            generations: Some(generations),
            nu: Some(1.0),
            lambda: Some(0.5),
            gamma: Some(1.0),
            omega0: Some(0.0),
            tmax: Some(20.0),
            steps: Some(201),
            p: Some(vec![0.0, 0.2, 0.6, 0.99]),
            theta: Some(FRAC_PI_2),
            phi: Some(0.0),
            ..ConfigLayer::default()
        }
    }
}

impl FromStr for Preset {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        Preset::ALL
            .into_iter()
            .find(|p| p.name() == s)
            .ok_or_else(|| {
                format!(
                    "unknown preset `{s}` (expected one of: {})",
                    Preset::ALL.map(Preset::name).join(", ")
                )
            })
    }
}

/// A fully resolved, validated run.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub mode: Mode,
    pub generations: u32,
    /// Receiving site, 1-based.
    pub site: usize,
    pub nu: f64,
    pub lambda: f64,
    pub gamma: f64,
    pub omega0: f64,
    pub tmax: f64,
    pub steps: usize,
    pub p: Vec<f64>,
    pub theta: f64,
    pub phi: f64,
    pub format: Format,
    pub out: Option<PathBuf>,
    pub seed: u64,
}

impl Default for RunConfig {
    fn default() -> Self {
        ConfigLayer::default()
            .resolve()
            .expect("built-in defaults are valid")
    }
}

impl RunConfig {
    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(CliError::Config(msg));
        if !(1..=MAX_GENERATIONS).contains(&self.generations) {
            return bad(format!(
                "generations = {} is outside 1..={MAX_GENERATIONS}",
                self.generations
            ));
        }
        let last = (1usize << self.generations) - 1;
        if !(1..=last).contains(&self.site) {
            return bad(format!(
                "site = {} is not in the tree; with generations = {} use 1..={last}",
                self.site, self.generations
            ));
        }
        positive("nu", self.nu)?;
        positive("lambda", self.lambda)?;
        positive("tmax", self.tmax)?;
        if !(self.gamma >= 0.0 && self.gamma.is_finite()) {
            return bad(format!("gamma = {} must be finite and >= 0", self.gamma));
        }
        if !self.omega0.is_finite() {
            return bad(format!("omega0 = {} must be finite", self.omega0));
        }
        if self.steps < 2 {
            return bad(format!("steps = {} must be at least 2", self.steps));
        }
        if self.p.is_empty() && self.mode != Mode::Amplitudes && self.mode != Mode::Verify {
            return bad("p needs at least one weak-measurement strength".into());
        }
        if let Some(p) = self.p.iter().find(|p| !(0.0..1.0).contains(*p)) {
            return bad(format!("p = {p} must lie in [0, 1)"));
        }
        if !(0.0..=PI).contains(&self.theta) {
            return bad(format!("theta = {} must lie in [0, pi]", self.theta));
        }
        if !self.phi.is_finite() {
            return bad(format!("phi = {} must be finite", self.phi));
        }
        Ok(())
    }

    /// Output sample times `t_k = tmax k / (steps - 1)`.
    pub fn times(&self) -> Vec<f64> {
        let last = (self.steps - 1) as f64;
        (0..self.steps)
            .map(|k| self.tmax * k as f64 / last)
            .collect()
    }

    /// `key = value` text that [`ConfigLayer::parse`] reads back to the same
    /// configuration.
    pub fn to_config_string(&self) -> String {
        let mut s = String::new();
        let p: Vec<String> = self.p.iter().map(f64::to_string).collect();
        let _ = writeln!(s, "mode = {}", self.mode);
        let _ = writeln!(s, "generations = {}", self.generations);
        let _ = writeln!(s, "site = {}", self.site);
        let _ = writeln!(s, "nu = {}", self.nu);
        let _ = writeln!(s, "lambda = {}", self.lambda);
        let _ = writeln!(s, "gamma = {}", self.gamma);
        let _ = writeln!(s, "omega0 = {}", self.omega0);
        let _ = writeln!(s, "tmax = {}", self.tmax);
        let _ = writeln!(s, "steps = {}", self.steps);
        let _ = writeln!(s, "p = {}", p.join(", "));
        let _ = writeln!(s, "theta = {}", self.theta);
        let _ = writeln!(s, "phi = {}", self.phi);
        let _ = writeln!(s, "format = {}", self.format);
        if let Some(out) = &self.out {
            let _ = writeln!(s, "out = {}", out.display());
        }
        let _ = writeln!(s, "seed = {}", self.seed);
        s
    }
}

fn positive(name: &str, v: f64) -> Result<()> {
    if v > 0.0 && v.is_finite() {
        Ok(())
    } else {
        Err(CliError::Config(format!(
            "{name} = {v} must be finite and > 0"
        )))
    }
}

/// Partial configuration from one source. Later layers win.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct ConfigLayer {
    pub preset: Option<Preset>,
    pub mode: Option<Mode>,
    pub generations: Option<u32>,
    pub site: Option<usize>,
    pub nu: Option<f64>,
    pub lambda: Option<f64>,
    pub gamma: Option<f64>,
    pub omega0: Option<f64>,
    pub tmax: Option<f64>,
    pub steps: Option<usize>,
    pub p: Option<Vec<f64>>,
    pub theta: Option<f64>,
    pub phi: Option<f64>,
    pub format: Option<Format>,
    pub out: Option<PathBuf>,
    pub seed: Option<u64>,
}

impl ConfigLayer {
    /// Parse `key = value` lines; `#` starts a comment, blank lines are
    /// ignored, `p` takes a comma-separated list.
    pub fn parse(text: &str, origin: &str) -> Result<Self> {
        let mut layer = ConfigLayer::default();
        let mut seen: Vec<String> = Vec::new();
        for (idx, raw) in text.lines().enumerate() {
            let syntax = |message: String| CliError::ConfigSyntax {
                path: origin.to_string(),
                line: idx + 1,
                message,
            };
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| syntax(format!("expected `key = value`, got `{line}`")))?;
            let key = key.trim();
            let value = value.trim();
            if seen.iter().any(|k| k == key) {
                return Err(syntax(format!("`{key}` is set twice")));
            }
            seen.push(key.to_string());
            layer.set(key, value).map_err(syntax)?;
        }
        Ok(layer)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|source| CliError::Read {
            path: path.to_path_buf(),
            source,
        })?;
        Self::parse(&text, &path.display().to_string())
    }

    fn set(&mut self, key: &str, value: &str) -> Result<(), String> {
        fn num<T: FromStr>(key: &str, v: &str) -> Result<T, String> {
            v.parse()
                .map_err(|_| format!("`{key}` expects a number, got `{v}`"))
        }
        match key {
            "preset" => self.preset = Some(value.parse()?),
            "mode" => self.mode = Some(value.parse()?),
            "generations" => self.generations = Some(num(key, value)?),
            "site" => self.site = Some(num(key, value)?),
            "nu" => self.nu = Some(num(key, value)?),
            "lambda" => self.lambda = Some(num(key, value)?),
            "gamma" => self.gamma = Some(num(key, value)?),
            "omega0" => self.omega0 = Some(num(key, value)?),
            "tmax" => self.tmax = Some(num(key, value)?),
            "steps" => self.steps = Some(num(key, value)?),
            "p" => {
                let list = value
                    .split(',')
                    .map(str::trim)
                    .filter(|s| !s.is_empty())
                    .map(|s| num(key, s))
                    .collect::<Result<Vec<f64>, String>>()?;
                self.p = Some(list);
            }
            "theta" => self.theta = Some(num(key, value)?),
            "phi" => self.phi = Some(num(key, value)?),
            "format" => self.format = Some(value.parse()?),
            "out" => self.out = Some(PathBuf::from(value)),
            "seed" => self.seed = Some(num(key, value)?),
            _ => return Err(format!("unknown key `{key}`")),
        }
        Ok(())
    }

    /// Overlay `other` on top of `self`.
    pub fn merge(mut self, other: ConfigLayer) -> Self {
        macro_rules! take {
            ($($f:ident),*) => {$( if other.$f.is_some() { self.$f = other.$f; } )*};
        }
        take!(
            preset,
            mode,
            generations,
            site,
            nu,
            lambda,
            gamma,
            omega0,
            tmax,
            steps,
            p,
            theta,
            phi,
            format,
            out,
            seed
        );
        self
    }

    /// Fill gaps from the built-in defaults (and from `preset` if one is
    /// named), then validate.
    pub fn resolve(self) -> Result<RunConfig> {
        let base = match self.preset {
            Some(preset) => Preset::Fig2a.layer().merge(preset.layer()),
            None => Preset::Fig2a.layer(),
        };
        let l = base.merge(self);
        let generations = l.generations.unwrap_or(4);
        let site = l
            .site
            .unwrap_or_else(|| 1usize << generations.saturating_sub(1).min(31));
        let config = RunConfig {
            mode: l.mode.unwrap_or(Mode::Fidelity),
            generations,
            site,
            nu: l.nu.unwrap_or(1.0),
            lambda: l.lambda.unwrap_or(0.5),
            gamma: l.gamma.unwrap_or(1.0),
            omega0: l.omega0.unwrap_or(0.0),
            tmax: l.tmax.unwrap_or(20.0),
            steps: l.steps.unwrap_or(201),
            p: l.p.unwrap_or_default(),
            theta: l.theta.unwrap_or(FRAC_PI_2),
            phi: l.phi.unwrap_or(0.0),
            format: l.format.unwrap_or(Format::Csv),
            out: l.out,
            seed: l.seed.unwrap_or(0),
        };
        config.validate()?;
        Ok(config)
    }
}
