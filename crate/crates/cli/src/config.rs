//! Flat typed key-value run configuration.
//!
//! Grammar: one `key = value` pair per line; `#` starts a comment; blank
//! lines ignored. Values are typed per key (int, float, float triple
//! `a,b,c`, or word). Unknown and duplicate keys are rejected, every
//! numeric field is validated against the domain of the experiment it
//! feeds, and `serialize` emits a canonical document that parses back to
//! the identical configuration.

use dqlg_core::emit::fmt_f64;

use crate::error::{CliError, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Command {
    Oracle,
    Modes,
    Dilation,
    Evolve,
    Dispersion,
    Generator,
}

impl Command {
    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "oracle" => Ok(Command::Oracle),
            "modes" => Ok(Command::Modes),
            "dilation" => Ok(Command::Dilation),
            "evolve" => Ok(Command::Evolve),
            "dispersion" => Ok(Command::Dispersion),
            "generator" => Ok(Command::Generator),
            other => Err(CliError::Config(format!(
                "key `command`: `{other}` not one of oracle|modes|dilation|evolve|dispersion|generator"
            ))),
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Command::Oracle => "oracle",
            Command::Modes => "modes",
            Command::Dilation => "dilation",
            Command::Evolve => "evolve",
            Command::Dispersion => "dispersion",
            Command::Generator => "generator",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BranchChoice {
    PositiveEnergy,
    Unprojected,
}

impl BranchChoice {
    fn parse(s: &str) -> Result<Self> {
        match s {
            "positive-energy" => Ok(BranchChoice::PositiveEnergy),
            "unprojected" => Ok(BranchChoice::Unprojected),
            other => Err(CliError::Config(format!(
                "key `branch`: `{other}` not one of positive-energy|unprojected"
            ))),
        }
    }

    fn name(&self) -> &'static str {
        match self {
            BranchChoice::PositiveEnergy => "positive-energy",
            BranchChoice::Unprojected => "unprojected",
        }
    }
}

/// Fully validated run configuration with all defaults materialized.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub command: Command,
    pub epsilon: f64,
    pub dims: u8,
    pub l: usize,
    pub t: usize,
    pub ea0: f64,
    pub ea: [f64; 3],
    pub ea_file: Option<String>,
    pub k0: [f64; 3],
    pub width: f64,
    pub branch: BranchChoice,
    pub steps: usize,
    pub seed: u64,
    pub n: usize,
    pub x_min: f64,
    pub x_max: f64,
    pub x_count: usize,
    pub k_count: usize,
    pub k_max: f64,
}

impl RunConfig {
    pub fn defaults(command: Command) -> Self {
        RunConfig {
            command,
            epsilon: 0.5,
            dims: 1,
            l: 64,
            t: 64,
            ea0: 0.0,
            ea: [0.0; 3],
            ea_file: None,
            k0: [0.0; 3],
            width: 8.0,
            branch: BranchChoice::PositiveEnergy,
            steps: 100,
            seed: 0,
            n: 6,
            x_min: 1e-3,
            x_max: 1.0,
            x_count: 1000,
            k_count: 64,
            k_max: 0.3,
        }
    }

    /// Canonical serialized form; `parse` of this text reproduces `self`.
    pub fn serialize(&self) -> String {
        let triple =
            |v: &[f64; 3]| format!("{},{},{}", fmt_f64(v[0]), fmt_f64(v[1]), fmt_f64(v[2]));
        let mut out = String::new();
        out.push_str(&format!("command = {}\n", self.command.name()));
        out.push_str(&format!("epsilon = {}\n", fmt_f64(self.epsilon)));
        out.push_str(&format!("dims = {}\n", self.dims));
        out.push_str(&format!("l = {}\n", self.l));
        out.push_str(&format!("t = {}\n", self.t));
        out.push_str(&format!("ea0 = {}\n", fmt_f64(self.ea0)));
        out.push_str(&format!("ea = {}\n", triple(&self.ea)));
        if let Some(path) = &self.ea_file {
            out.push_str(&format!("ea_file = {path}\n"));
        }
        out.push_str(&format!("k0 = {}\n", triple(&self.k0)));
        out.push_str(&format!("width = {}\n", fmt_f64(self.width)));
        out.push_str(&format!("branch = {}\n", self.branch.name()));
        out.push_str(&format!("steps = {}\n", self.steps));
        out.push_str(&format!("seed = {}\n", self.seed));
        out.push_str(&format!("n = {}\n", self.n));
        out.push_str(&format!("x_min = {}\n", fmt_f64(self.x_min)));
        out.push_str(&format!("x_max = {}\n", fmt_f64(self.x_max)));
        out.push_str(&format!("x_count = {}\n", self.x_count));
        out.push_str(&format!("k_count = {}\n", self.k_count));
        out.push_str(&format!("k_max = {}\n", fmt_f64(self.k_max)));
        out
    }
}

fn parse_f64(key: &str, v: &str) -> Result<f64> {
    v.parse::<f64>()
        .map_err(|_| CliError::Config(format!("key `{key}`: `{v}` is not a float")))
}

fn parse_usize(key: &str, v: &str) -> Result<usize> {
    v.parse::<usize>()
        .map_err(|_| CliError::Config(format!("key `{key}`: `{v}` is not a non-negative integer")))
}

fn parse_triple(key: &str, v: &str) -> Result<[f64; 3]> {
    let parts: Vec<&str> = v.split(',').map(str::trim).collect();
    if parts.len() != 3 {
        return Err(CliError::Config(format!(
            "key `{key}`: `{v}` is not a comma-separated float triple"
        )));
    }
    Ok([
        parse_f64(key, parts[0])?,
        parse_f64(key, parts[1])?,
        parse_f64(key, parts[2])?,
    ])
}

/// Parse a configuration document. `cli_command` supplies the command when
/// the document omits it; if both are present they must agree.
pub fn parse_config(text: &str, cli_command: Option<Command>) -> Result<RunConfig> {
    let mut seen: Vec<String> = Vec::new();
    let mut pairs: Vec<(String, String)> = Vec::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = match raw.find('#') {
            Some(i) => &raw[..i],
            None => raw,
        }
        .trim();
        if line.is_empty() {
            continue;
        }
        let (key, value) = line.split_once('=').ok_or_else(|| {
            CliError::Config(format!("line {}: expected `key = value`", lineno + 1))
        })?;
        let key = key.trim().to_string();
        let value = value.trim().to_string();
        if seen.contains(&key) {
            return Err(CliError::Config(format!("key `{key}` given twice")));
        }
        seen.push(key.clone());
        pairs.push((key, value));
    }

    let mut doc_command: Option<Command> = None;
    let mut cfg = RunConfig::defaults(cli_command.unwrap_or(Command::Dilation));
    for (key, value) in &pairs {
        match key.as_str() {
            "command" => doc_command = Some(Command::parse(value)?),
            "epsilon" => cfg.epsilon = parse_f64(key, value)?,
            "dims" => {
                cfg.dims = parse_usize(key, value)? as u8;
            }
            "l" => cfg.l = parse_usize(key, value)?,
            "t" => cfg.t = parse_usize(key, value)?,
            "ea0" => cfg.ea0 = parse_f64(key, value)?,
            "ea" => cfg.ea = parse_triple(key, value)?,
            "ea_file" => cfg.ea_file = Some(value.clone()),
            "k0" => cfg.k0 = parse_triple(key, value)?,
            "width" => cfg.width = parse_f64(key, value)?,
            "branch" => cfg.branch = BranchChoice::parse(value)?,
            "steps" => cfg.steps = parse_usize(key, value)?,
            "seed" => {
                cfg.seed = value
                    .parse::<u64>()
                    .map_err(|_| CliError::Config(format!("key `seed`: `{value}` is not a u64")))?;
            }
            "n" => cfg.n = parse_usize(key, value)?,
            "x_min" => cfg.x_min = parse_f64(key, value)?,
            "x_max" => cfg.x_max = parse_f64(key, value)?,
            "x_count" => cfg.x_count = parse_usize(key, value)?,
            "k_count" => cfg.k_count = parse_usize(key, value)?,
            "k_max" => cfg.k_max = parse_f64(key, value)?,
            other => {
                return Err(CliError::Config(format!("unknown key `{other}`")));
            }
        }
    }

    cfg.command = match (doc_command, cli_command) {
        (Some(doc), Some(cli)) if doc != cli => {
            return Err(CliError::Config(format!(
                "key `command`: document says `{}` but the subcommand is `{}`",
                doc.name(),
                cli.name()
            )));
        }
        (Some(doc), _) => doc,
        (None, Some(cli)) => cli,
        (None, None) => {
            return Err(CliError::Config(
                "key `command` missing (no subcommand given either)".into(),
            ));
        }
    };

    validate(&cfg)?;
    Ok(cfg)
}

fn validate(cfg: &RunConfig) -> Result<()> {
    let fail = |key: &str, value: String, domain: &str| -> Result<()> {
        Err(CliError::Config(format!(
            "key `{key}`: {value} outside domain {domain}"
        )))
    };
    if !(0.0..=1.0).contains(&cfg.epsilon) || !cfg.epsilon.is_finite() {
        return fail("epsilon", cfg.epsilon.to_string(), "[0, 1]");
    }
    if cfg.dims != 1 && cfg.dims != 3 {
        return fail("dims", cfg.dims.to_string(), "{1, 3}");
    }
    if cfg.l == 0 || !cfg.l.is_multiple_of(2) {
        return fail("l", cfg.l.to_string(), "even positive integers");
    }
    if cfg.dims == 3 && cfg.l > 32 && matches!(cfg.command, Command::Evolve | Command::Modes) {
        return fail("l", cfg.l.to_string(), "<= 32 for 3D grids");
    }
    if cfg.t == 0 {
        return fail("t", cfg.t.to_string(), "positive integers");
    }
    if !cfg.ea0.is_finite() || cfg.ea.iter().any(|v| !v.is_finite()) {
        return fail("ea", "non-finite".into(), "finite reals");
    }
    if cfg.k0.iter().any(|v| !v.is_finite()) {
        return fail("k0", "non-finite".into(), "finite reals");
    }
    if !cfg.width.is_finite() || cfg.width <= 0.0 {
        return fail("width", cfg.width.to_string(), "positive reals");
    }
    if cfg.n == 0 {
        return fail("n", cfg.n.to_string(), "positive integers");
    }
    match cfg.command {
        Command::Oracle => {
            let bound = if cfg.dims == 3 {
                dqlg_core::path::MAX_BCC_STEPS
            } else {
                dqlg_core::path::MAX_AXIS_STEPS
            };
            if cfg.n > bound {
                return fail(
                    "n",
                    cfg.n.to_string(),
                    if cfg.dims == 3 {
                        "<= 6 in 3D"
                    } else {
                        "<= 24 in 1D"
                    },
                );
            }
        }
        Command::Dilation => {
            if !cfg.x_min.is_finite() || cfg.x_min <= 0.0 || cfg.x_min > 1.0 {
                return fail("x_min", cfg.x_min.to_string(), "(0, 1]");
            }
            if !cfg.x_max.is_finite() || cfg.x_max <= 0.0 || cfg.x_max > 1.0 {
                return fail("x_max", cfg.x_max.to_string(), "(0, 1]");
            }
            if cfg.x_min > cfg.x_max {
                return fail("x_min", cfg.x_min.to_string(), "<= x_max");
            }
            if cfg.x_count == 0 {
                return fail("x_count", cfg.x_count.to_string(), "positive integers");
            }
        }
        Command::Generator => {
            if !cfg.k_max.is_finite() || cfg.k_max <= 0.0 {
                return fail("k_max", cfg.k_max.to_string(), "positive reals");
            }
            let e_top = (cfg.k_max * cfg.k_max + cfg.epsilon * cfg.epsilon).sqrt();
            if e_top > 1.0 {
                return fail(
                    "k_max",
                    format!(
                        "{} (E' = {e_top:.3} at epsilon = {})",
                        cfg.k_max, cfg.epsilon
                    ),
                    "sqrt(k_max^2 + epsilon^2) <= 1",
                );
            }
            if cfg.k_count == 0 {
                return fail("k_count", cfg.k_count.to_string(), "positive integers");
            }
        }
        Command::Dispersion | Command::Modes => {
            if cfg.k_count == 0 {
                return fail("k_count", cfg.k_count.to_string(), "positive integers");
            }
        }
        Command::Evolve => {}
    }
    Ok(())
}
