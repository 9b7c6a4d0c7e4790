use std::fmt;
use std::path::{Path, PathBuf};

use super::registry::registry;
use crate::bounds::{BoundSettings, BoundVariant};
use crate::nondim::U0Choice;
use crate::solver::{InitialCondition, PhysicalParams};
use crate::spectral::DEFAULT_DEALIAS_FRACTION;
use crate::{Error, Result};

/// Resolution used when none is given: 128 in two dimensions, 48 in three.
pub fn desk_resolution(dim: usize) -> usize {
    if dim == 2 {
        128
    } else {
        48
    }
}

/// Every key accepted in a configuration file or as a `key=value` override.
pub const CONFIG_KEYS: [&str; 27] = [
    "label",
    "registry",
    "d",
    "n",
    "dt",
    "t_end",
    "nu",
    "alpha",
    "beta",
    "lambda",
    "box_length",
    "dealias_fraction",
    "ic",
    "seed",
    "cfl_max",
    "output_dir",
    "sample_every",
    "snapshot_every",
    "spectra_every",
    "n_max",
    "m_max",
    "u0_modes",
    "transient_skip",
    "full_resolution",
    "bound_constant",
    "bound_variant",
    "resume",
];

/// Complete description of a run.
#[derive(Clone, Debug, PartialEq)]
pub struct RunConfig {
    pub label: String,
    pub registry: Option<String>,
    pub dim: usize,
    /// Points per side; `None` picks the desk resolution, or the registry
    /// resolution when `full_resolution` is set.
    pub n: Option<usize>,
    pub dt: f64,
    pub t_end: f64,
    pub params: PhysicalParams,
    pub dealias_fraction: f64,
    pub ic: InitialCondition,
    pub seed: u64,
    pub cfl_max: f64,
    pub output_dir: PathBuf,
    pub sample_every: u64,
    /// Steps between checkpoints; 0 writes only the final one.
    pub snapshot_every: u64,
    /// Steps between spectra samples; 0 disables them.
    pub spectra_every: u64,
    pub n_max: u32,
    pub m_max: u32,
    pub u0_modes: Vec<U0Choice>,
    /// Dimensional time before which a second set of averages ignores
    /// samples.
    pub transient_skip: f64,
    pub full_resolution: bool,
    pub bounds: BoundSettings,
    pub resume: Option<PathBuf>,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            label: "run".into(),
            registry: None,
            dim: 2,
            n: None,
            dt: 1e-3,
            t_end: 1.0,
            params: PhysicalParams::default(),
            dealias_fraction: DEFAULT_DEALIAS_FRACTION,
            ic: InitialCondition::RandomLowK {
                k_max: 4.0,
                energy: 0.5,
            },
            seed: 0,
            cfl_max: 1.0,
            output_dir: PathBuf::from("output"),
            sample_every: 10,
            snapshot_every: 0,
            spectra_every: 100,
            n_max: 4,
            m_max: 16,
            u0_modes: U0Choice::ALL.to_vec(),
            transient_skip: 0.0,
            full_resolution: false,
            bounds: BoundSettings::default(),
            resume: None,
        }
    }
}

fn parse<T: std::str::FromStr>(key: &str, value: &str) -> Result<T> {
    value
        .trim()
        .parse()
        .map_err(|_| Error::Config(format!("invalid value '{value}' for key '{key}'")))
}

fn parse_bool(key: &str, value: &str) -> Result<bool> {
    match value.trim() {
        "true" | "yes" | "1" | "on" => Ok(true),
        "false" | "no" | "0" | "off" => Ok(false),
        _ => Err(Error::Config(format!(
            "invalid boolean '{value}' for key '{key}'"
        ))),
    }
}

/// Parses `key = value` lines; `#` starts a comment, blank lines are
/// skipped and unknown keys are rejected.
pub fn parse_key_values(text: &str) -> Result<Vec<(String, String)>> {
    let mut out = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (k, v) = line.split_once('=').ok_or_else(|| {
            Error::Config(format!(
                "line {}: expected 'key = value', got '{raw}'",
                i + 1
            ))
        })?;
        let k = k.trim();
        check_key(k)?;
        out.push((k.to_string(), v.trim().to_string()));
    }
    Ok(out)
}

fn check_key(key: &str) -> Result<()> {
    if CONFIG_KEYS.contains(&key) {
        Ok(())
    } else {
        Err(Error::Config(format!(
            "unknown key '{key}'; accepted keys: {}",
            CONFIG_KEYS.join(", ")
        )))
    }
}

impl RunConfig {
    /// Builds a configuration from layers of overrides, lowest priority
    /// first. A `registry` key in any layer (the last one wins) applies the
    /// registered run before the layers themselves.
    pub fn resolve(layers: &[Vec<(String, String)>]) -> Result<Self> {
        let mut cfg = RunConfig::default();
        let label = layers
            .iter()
            .flatten()
            .rfind(|(k, _)| k == "registry")
            .map(|(_, v)| v.clone());
        if let Some(label) = label {
            cfg.apply_registry(&label)?;
        }
        for (k, v) in layers.iter().flatten() {
            cfg.set(k, v)?;
        }
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn from_file(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::resolve(&[parse_key_values(&text)?])
    }

    /// Copies a registered run's dimension, time step and coefficients,
    /// with `λ = 1` and `L = 2π`.
    pub fn apply_registry(&mut self, label: &str) -> Result<()> {
        let e = registry(label)?;
        self.registry = Some(e.label.to_string());
        self.label = e.label.to_string();
        self.dim = e.dim;
        self.dt = e.dt;
        self.params = PhysicalParams {
            lambda: 1.0,
            alpha: e.alpha,
            beta: e.beta,
            nu: e.nu,
            box_length: 2.0 * std::f64::consts::PI,
        };
        Ok(())
    }

    pub fn set(&mut self, key: &str, value: &str) -> Result<()> {
        check_key(key)?;
        match key {
            "label" => self.label = value.trim().to_string(),
            "registry" => self.registry = Some(registry(value)?.label.to_string()),
            "d" => self.dim = parse(key, value)?,
            "n" => self.n = Some(parse(key, value)?),
            "dt" => self.dt = parse(key, value)?,
            "t_end" => self.t_end = parse(key, value)?,
            "nu" => self.params.nu = parse(key, value)?,
            "alpha" => self.params.alpha = parse(key, value)?,
            "beta" => self.params.beta = parse(key, value)?,
            "lambda" => self.params.lambda = parse(key, value)?,
            "box_length" => self.params.box_length = parse(key, value)?,
            "dealias_fraction" => self.dealias_fraction = parse(key, value)?,
            "ic" => self.ic = value.parse()?,
            "seed" => self.seed = parse(key, value)?,
            "cfl_max" => self.cfl_max = parse(key, value)?,
            "output_dir" => self.output_dir = PathBuf::from(value.trim()),
            "sample_every" => self.sample_every = parse(key, value)?,
            "snapshot_every" => self.snapshot_every = parse(key, value)?,
            "spectra_every" => self.spectra_every = parse(key, value)?,
            "n_max" => self.n_max = parse(key, value)?,
            "m_max" => self.m_max = parse(key, value)?,
            "u0_modes" => {
                self.u0_modes = value
                    .split(',')
                    .filter(|s| !s.trim().is_empty())
                    .map(str::parse)
                    .collect::<Result<_>>()?
            }
            "transient_skip" => self.transient_skip = parse(key, value)?,
            "full_resolution" => self.full_resolution = parse_bool(key, value)?,
            "bound_constant" => self.bounds.constant = parse(key, value)?,
            "bound_variant" => {
                self.bounds.variant = match value.trim() {
                    "leading" => BoundVariant::LeadingOrder,
                    "full" => BoundVariant::Full,
                    other => {
                        return Err(Error::Config(format!(
                            "bound_variant must be 'leading' or 'full', got '{other}'"
                        )))
                    }
                }
            }
            "resume" => {
                self.resume = match value.trim() {
                    "" => None,
                    p => Some(PathBuf::from(p)),
                }
            }
            _ => unreachable!("key list and match arms agree"),
        }
        Ok(())
    }

    /// Points per side after applying the desk/full resolution rule.
    pub fn resolution(&self) -> usize {
        match (self.n, self.full_resolution, &self.registry) {
            (Some(n), _, _) => n,
            (None, true, Some(label)) => registry(label)
                .map(|e| e.n)
                .unwrap_or(desk_resolution(self.dim)),
            _ => desk_resolution(self.dim),
        }
    }

    /// Number of steps to reach `t_end`.
    pub fn total_steps(&self) -> u64 {
        let exact = self.t_end / self.dt;
        let rounded = exact.round();
        if (exact - rounded).abs() <= 1e-9 * exact.max(1.0) {
            rounded as u64
        } else {
            exact.ceil() as u64
        }
    }

    pub fn validate(&self) -> Result<()> {
        self.params.validate()?;
        if self.dim != 2 && self.dim != 3 {
            return Err(Error::Config(format!("d must be 2 or 3, got {}", self.dim)));
        }
        if !(self.dt.is_finite() && self.dt > 0.0) {
            return Err(Error::Config(format!(
                "dt must be positive, got {}",
                self.dt
            )));
        }
        if !(self.t_end.is_finite() && self.t_end >= 0.0) {
            return Err(Error::Config(format!(
                "t_end must be nonnegative, got {}",
                self.t_end
            )));
        }
        if self.sample_every == 0 {
            return Err(Error::Config("sample_every must be at least 1".into()));
        }
        if self.cfl_max.is_nan() || self.cfl_max <= 0.0 {
            return Err(Error::Config(format!(
                "cfl_max must be positive, got {}",
                self.cfl_max
            )));
        }
        if self.transient_skip.is_nan() || self.transient_skip < 0.0 {
            return Err(Error::Config("transient_skip must be nonnegative".into()));
        }
        if !(self.bounds.constant.is_finite() && self.bounds.constant > 0.0) {
            return Err(Error::Config("bound_constant must be positive".into()));
        }
        if self.m_max == 0 {
            return Err(Error::Config("m_max must be at least 1".into()));
        }
        if self.label.is_empty() || self.label.contains(['/', '\\']) {
            return Err(Error::Config(format!(
                "label '{}' is not a valid name",
                self.label
            )));
        }
        let n = self.resolution();
        let full = self
            .registry
            .as_deref()
            .and_then(|l| registry(l).ok())
            .map(|e| e.n);
        if !self.full_resolution && full == Some(n) && n > desk_resolution(self.dim) {
            return Err(Error::Config(format!(
                "resolution {n} is the full table resolution; set full_resolution = true to run it"
            )));
        }
        crate::spectral::Grid::new(self.dim, n, self.params.box_length, self.dealias_fraction)?;
        Ok(())
    }

    /// Key-value pairs that [`RunConfig::resolve`] turns back into this
    /// configuration.
    pub fn to_key_values(&self) -> Vec<(String, String)> {
        let p = &self.params;
        let mut kv: Vec<(&str, String)> = vec![
            ("label", self.label.clone()),
            ("d", self.dim.to_string()),
            ("n", self.resolution().to_string()),
            ("dt", format!("{:e}", self.dt)),
            ("t_end", format!("{:e}", self.t_end)),
            ("nu", format!("{:e}", p.nu)),
            ("alpha", format!("{:e}", p.alpha)),
            ("beta", format!("{:e}", p.beta)),
            ("lambda", format!("{:e}", p.lambda)),
            ("box_length", format!("{:e}", p.box_length)),
            ("dealias_fraction", format!("{:e}", self.dealias_fraction)),
            ("ic", self.ic.to_string()),
            ("seed", self.seed.to_string()),
            ("cfl_max", format!("{:e}", self.cfl_max)),
            ("output_dir", self.output_dir.display().to_string()),
            ("sample_every", self.sample_every.to_string()),
            ("snapshot_every", self.snapshot_every.to_string()),
            ("spectra_every", self.spectra_every.to_string()),
            ("n_max", self.n_max.to_string()),
            ("m_max", self.m_max.to_string()),
            (
                "u0_modes",
                self.u0_modes
                    .iter()
                    .map(|m| m.to_string())
                    .collect::<Vec<_>>()
                    .join(","),
            ),
            ("transient_skip", format!("{:e}", self.transient_skip)),
            ("full_resolution", self.full_resolution.to_string()),
            ("bound_constant", format!("{:e}", self.bounds.constant)),
            (
                "bound_variant",
                match self.bounds.variant {
                    BoundVariant::LeadingOrder => "leading".into(),
                    BoundVariant::Full => "full".into(),
                },
            ),
        ];
        if let Some(r) = &self.resume {
            kv.push(("resume", r.display().to_string()));
        }
        kv.into_iter().map(|(k, v)| (k.to_string(), v)).collect()
    }
}

impl fmt::Display for RunConfig {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(r) = &self.registry {
            writeln!(f, "# registered run {r}")?;
        }
        for (k, v) in self.to_key_values() {
            writeln!(f, "{k} = {v}")?;
        }
        Ok(())
    }
}
