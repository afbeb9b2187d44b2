//! Experiment configuration: flat `key = value` text with `[section]`
//! headers. No structured-format dependency, trivially diffable, and the
//! canonical serialization round-trips through the parser unchanged.

use std::fmt;

use mfjump_core::gamma::GammaError;
use mfjump_core::sde;
use mfjump_core::GammaSpec;

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    // [gamma]
    pub gamma_breakpoints: Vec<(f64, f64)>,
    pub epsilon: f64,
    // [run]
    pub horizon: f64,
    pub z_max: Option<f64>,
    pub u_min: Option<f64>,
    pub seed: u64,
    pub start_value: f64,
    pub grid_resolution: usize,
    // [regularity]
    pub j_lo: i32,
    pub j_hi: i32,
    pub j_window: usize,
    pub delta_cap: f64,
    pub h_cap: f64,
    // [spectrum]
    pub interval: (f64, f64),
    pub h_max: f64,
    pub h_count: usize,
    pub coarse_j: u32,
    pub bin_width: f64,
    pub local_t: Vec<f64>,
    // [tangent]
    pub alpha_levels: Vec<f64>,
    pub tangent_n: usize,
    pub t0: f64,
    pub tangent_z_base: f64,
    // [output]
    pub out_dir: String,
}

impl Default for ExperimentConfig {
    /// The stock configuration: index rising linearly from 0.5 and
    /// plateauing at 0.9 from state 1.6 on, horizon 3, mark cutoff 2^20.
    fn default() -> Self {
        ExperimentConfig {
            gamma_breakpoints: vec![(0.0, 0.5), (1.6, 0.9)],
            epsilon: 0.05,
            horizon: 3.0,
            z_max: Some(1048576.0),
            u_min: None,
            seed: 20110613,
            start_value: 0.0,
            grid_resolution: 10000,
            j_lo: 6,
            j_hi: 14,
            j_window: 4,
            delta_cap: 16.0,
            h_cap: 16.0,
            interval: (0.0, 3.0),
            h_max: 2.5,
            h_count: 200,
            coarse_j: 14,
            bin_width: 0.05,
            local_t: Vec::new(),
            alpha_levels: vec![0.1, 0.01, 0.001],
            tangent_n: 1000,
            t0: 0.0,
            tangent_z_base: 100.0,
            out_dir: "out".to_string(),
        }
    }
}

#[derive(Debug)]
pub enum ConfigError {
    Syntax { line: usize, text: String },
    UnknownKey { section: String, key: String },
    BadValue { key: String, value: String },
    BothZMaxAndUMin,
    Gamma(GammaError),
    Invalid(String),
}

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ConfigError::Syntax { line, text } => {
                write!(f, "config line {line}: cannot parse '{text}'")
            }
            ConfigError::UnknownKey { section, key } => {
                write!(f, "unknown config key [{section}] {key}")
            }
            ConfigError::BadValue { key, value } => {
                write!(f, "bad value for {key}: '{value}'")
            }
            ConfigError::BothZMaxAndUMin => {
                write!(f, "z_max and u_min are mutually exclusive; set one")
            }
            ConfigError::Gamma(e) => write!(f, "invalid gamma spec: {e}"),
            ConfigError::Invalid(msg) => write!(f, "{msg}"),
        }
    }
}

impl std::error::Error for ConfigError {}

impl From<GammaError> for ConfigError {
    fn from(e: GammaError) -> Self {
        ConfigError::Gamma(e)
    }
}

fn parse_f64(key: &str, v: &str) -> Result<f64, ConfigError> {
    v.trim()
        .parse::<f64>()
        .ok()
        .filter(|x| x.is_finite())
        .ok_or_else(|| ConfigError::BadValue { key: key.to_string(), value: v.to_string() })
}

fn parse_list(key: &str, v: &str) -> Result<Vec<f64>, ConfigError> {
    if v.trim().is_empty() {
        return Ok(Vec::new());
    }
    v.split(',').map(|p| parse_f64(key, p)).collect()
}

fn parse_pairs(key: &str, v: &str) -> Result<Vec<(f64, f64)>, ConfigError> {
    v.split(',')
        .map(|p| {
            let (y, g) = p
                .split_once(':')
                .ok_or_else(|| ConfigError::BadValue { key: key.to_string(), value: p.to_string() })?;
            Ok((parse_f64(key, y)?, parse_f64(key, g)?))
        })
        .collect()
}

fn parse_pair(key: &str, v: &str) -> Result<(f64, f64), ConfigError> {
    let (a, b) = v
        .split_once(':')
        .ok_or_else(|| ConfigError::BadValue { key: key.to_string(), value: v.to_string() })?;
    Ok((parse_f64(key, a)?, parse_f64(key, b)?))
}

impl ExperimentConfig {
    /// Parse from the flat text format. Unknown keys are errors so typos
    /// cannot silently fall back to defaults.
    pub fn parse(text: &str) -> Result<Self, ConfigError> {
        let mut cfg = ExperimentConfig::default();
        // distinguish "explicitly set" for the mutually exclusive pair
        let mut saw_z_max = false;
        let mut saw_u_min = false;
        let mut section = String::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            if let Some(name) = line.strip_prefix('[').and_then(|s| s.strip_suffix(']')) {
                section = name.trim().to_string();
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or(ConfigError::Syntax { line: lineno + 1, text: line.to_string() })?;
            let key = key.trim();
            let value = value.trim();
            match (section.as_str(), key) {
                ("gamma", "breakpoints") => cfg.gamma_breakpoints = parse_pairs(key, value)?,
                ("gamma", "epsilon") => cfg.epsilon = parse_f64(key, value)?,
                ("run", "horizon") => cfg.horizon = parse_f64(key, value)?,
                ("run", "z_max") => {
                    cfg.z_max = Some(parse_f64(key, value)?);
                    saw_z_max = true;
                }
                ("run", "u_min") => {
                    cfg.u_min = Some(parse_f64(key, value)?);
                    saw_u_min = true;
                }
                ("run", "seed") => {
                    cfg.seed = value.parse::<u64>().map_err(|_| ConfigError::BadValue {
                        key: key.to_string(),
                        value: value.to_string(),
                    })?;
                }
                ("run", "start_value") => cfg.start_value = parse_f64(key, value)?,
                ("run", "grid_resolution") => {
                    cfg.grid_resolution = parse_usize(key, value)?;
                }
                ("regularity", "j_lo") => cfg.j_lo = parse_i32(key, value)?,
                ("regularity", "j_hi") => cfg.j_hi = parse_i32(key, value)?,
                ("regularity", "j_window") => cfg.j_window = parse_usize(key, value)?,
                ("regularity", "delta_cap") => cfg.delta_cap = parse_f64(key, value)?,
                ("regularity", "h_cap") => cfg.h_cap = parse_f64(key, value)?,
                ("spectrum", "interval") => cfg.interval = parse_pair(key, value)?,
                ("spectrum", "h_max") => cfg.h_max = parse_f64(key, value)?,
                ("spectrum", "h_count") => cfg.h_count = parse_usize(key, value)?,
                ("spectrum", "coarse_j") => {
                    cfg.coarse_j = value.parse::<u32>().map_err(|_| ConfigError::BadValue {
                        key: key.to_string(),
                        value: value.to_string(),
                    })?;
                }
                ("spectrum", "bin_width") => cfg.bin_width = parse_f64(key, value)?,
                ("spectrum", "local_t") => cfg.local_t = parse_list(key, value)?,
                ("tangent", "alpha_levels") => cfg.alpha_levels = parse_list(key, value)?,
                ("tangent", "n") => cfg.tangent_n = parse_usize(key, value)?,
                ("tangent", "t0") => cfg.t0 = parse_f64(key, value)?,
                ("tangent", "z_base") => cfg.tangent_z_base = parse_f64(key, value)?,
                ("output", "dir") => cfg.out_dir = value.to_string(),
                _ => {
                    return Err(ConfigError::UnknownKey {
                        section: section.clone(),
                        key: key.to_string(),
                    })
                }
            }
        }
        if saw_z_max && saw_u_min {
            return Err(ConfigError::BothZMaxAndUMin);
        }
        if saw_u_min {
            cfg.z_max = None;
        }
        cfg.validate()?;
        Ok(cfg)
    }

    /// Canonical serialization; `parse` of the output reproduces `self`.
    pub fn serialize(&self) -> String {
        let mut s = String::new();
        s.push_str("[gamma]\n");
        let bps: Vec<String> =
            self.gamma_breakpoints.iter().map(|(y, g)| format!("{y}:{g}")).collect();
        s.push_str(&format!("breakpoints = {}\n", bps.join(",")));
        s.push_str(&format!("epsilon = {}\n\n", self.epsilon));
        s.push_str("[run]\n");
        s.push_str(&format!("horizon = {}\n", self.horizon));
        match (self.z_max, self.u_min) {
            (_, Some(u)) => s.push_str(&format!("u_min = {u}\n")),
            (Some(z), None) => s.push_str(&format!("z_max = {z}\n")),
            (None, None) => {}
        }
        s.push_str(&format!("seed = {}\n", self.seed));
        s.push_str(&format!("start_value = {}\n", self.start_value));
        s.push_str(&format!("grid_resolution = {}\n\n", self.grid_resolution));
        s.push_str("[regularity]\n");
        s.push_str(&format!("j_lo = {}\n", self.j_lo));
        s.push_str(&format!("j_hi = {}\n", self.j_hi));
        s.push_str(&format!("j_window = {}\n", self.j_window));
        s.push_str(&format!("delta_cap = {}\n", self.delta_cap));
        s.push_str(&format!("h_cap = {}\n\n", self.h_cap));
        s.push_str("[spectrum]\n");
        s.push_str(&format!("interval = {}:{}\n", self.interval.0, self.interval.1));
        s.push_str(&format!("h_max = {}\n", self.h_max));
        s.push_str(&format!("h_count = {}\n", self.h_count));
        s.push_str(&format!("coarse_j = {}\n", self.coarse_j));
        s.push_str(&format!("bin_width = {}\n", self.bin_width));
        if !self.local_t.is_empty() {
            let ts: Vec<String> = self.local_t.iter().map(|t| t.to_string()).collect();
            s.push_str(&format!("local_t = {}\n", ts.join(",")));
        }
        s.push('\n');
        s.push_str("[tangent]\n");
        let levels: Vec<String> = self.alpha_levels.iter().map(|a| a.to_string()).collect();
        s.push_str(&format!("alpha_levels = {}\n", levels.join(",")));
        s.push_str(&format!("n = {}\n", self.tangent_n));
        s.push_str(&format!("t0 = {}\n", self.t0));
        s.push_str(&format!("z_base = {}\n\n", self.tangent_z_base));
        s.push_str("[output]\n");
        s.push_str(&format!("dir = {}\n", self.out_dir));
        s
    }

    /// Build and validate the gamma spec described by this config.
    pub fn gamma(&self) -> Result<GammaSpec, ConfigError> {
        Ok(GammaSpec::new(self.gamma_breakpoints.clone(), self.epsilon)?)
    }

    /// Mark cutoff: explicit `z_max`, or derived from the jump floor.
    pub fn effective_z_max(&self) -> Result<f64, ConfigError> {
        match (self.z_max, self.u_min) {
            (Some(z), None) => Ok(z),
            (None, Some(u)) => sde::z_max_for_jump_floor(u, self.epsilon)
                .map_err(|e| ConfigError::Invalid(e.to_string())),
            (Some(_), Some(_)) => Err(ConfigError::BothZMaxAndUMin),
            (None, None) => Err(ConfigError::Invalid("one of z_max or u_min required".into())),
        }
    }

    /// Exponent grid `{k * h_max / h_count : k = 1..=h_count}`.
    pub fn h_grid(&self) -> Vec<f64> {
        let step = self.h_max / self.h_count as f64;
        (1..=self.h_count).map(|k| k as f64 * step).collect()
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        self.gamma()?;
        let z = self.effective_z_max()?;
        if z < 0.0 {
            return Err(ConfigError::Invalid(format!("z_max must be nonnegative, got {z}")));
        }
        if !(self.horizon > 0.0) || !self.horizon.is_finite() {
            return Err(ConfigError::Invalid(format!(
                "horizon must be positive, got {}",
                self.horizon
            )));
        }
        if self.start_value < 0.0 || !self.start_value.is_finite() {
            return Err(ConfigError::Invalid("start_value must be nonnegative".into()));
        }
        if self.grid_resolution == 0 {
            return Err(ConfigError::Invalid("grid_resolution must be positive".into()));
        }
        if self.j_lo >= self.j_hi {
            return Err(ConfigError::Invalid(format!(
                "need j_lo < j_hi, got [{}, {}]",
                self.j_lo, self.j_hi
            )));
        }
        if self.j_window == 0 {
            return Err(ConfigError::Invalid("j_window must be positive".into()));
        }
        if !(self.delta_cap > 1.0) {
            return Err(ConfigError::Invalid("delta_cap must exceed 1".into()));
        }
        if !(self.h_cap > 0.0) {
            return Err(ConfigError::Invalid("h_cap must be positive".into()));
        }
        let (a, b) = self.interval;
        if !(a >= 0.0 && a < b && b <= self.horizon) {
            return Err(ConfigError::Invalid(format!(
                "interval must satisfy 0 <= a < b <= horizon, got {a}:{b}"
            )));
        }
        if self.h_count == 0 || !(self.h_max > 0.0) {
            return Err(ConfigError::Invalid("h grid must be nonempty".into()));
        }
        if self.coarse_j < 4 || self.coarse_j > 30 {
            return Err(ConfigError::Invalid("coarse_j must lie in [4, 30]".into()));
        }
        if !(self.bin_width > 0.0) {
            return Err(ConfigError::Invalid("bin_width must be positive".into()));
        }
        for &t in &self.local_t {
            if !(t > 0.0 && t < self.horizon) {
                return Err(ConfigError::Invalid(format!(
                    "local_t entries must lie strictly inside (0, horizon), got {t}"
                )));
            }
        }
        if self.alpha_levels.is_empty() {
            return Err(ConfigError::Invalid("alpha_levels must be nonempty".into()));
        }
        for pair in self.alpha_levels.windows(2) {
            if pair[1] >= pair[0] {
                return Err(ConfigError::Invalid(
                    "alpha_levels must be strictly decreasing".into(),
                ));
            }
        }
        for &a in &self.alpha_levels {
            if !(a > 0.0 && a <= 1.0) {
                return Err(ConfigError::Invalid(format!(
                    "alpha levels must lie in (0, 1], got {a}"
                )));
            }
        }
        if self.tangent_n == 0 {
            return Err(ConfigError::Invalid("tangent n must be positive".into()));
        }
        if !(self.t0 >= 0.0 && self.t0 <= self.horizon) {
            return Err(ConfigError::Invalid(format!(
                "t0 must lie in [0, horizon], got {}",
                self.t0
            )));
        }
        if self.tangent_z_base < 0.0 {
            return Err(ConfigError::Invalid("tangent z_base must be nonnegative".into()));
        }
        if self.out_dir.is_empty() {
            return Err(ConfigError::Invalid("output dir must be nonempty".into()));
        }
        Ok(())
    }
}

fn parse_usize(key: &str, v: &str) -> Result<usize, ConfigError> {
    v.trim()
        .parse::<usize>()
        .map_err(|_| ConfigError::BadValue { key: key.to_string(), value: v.to_string() })
}

fn parse_i32(key: &str, v: &str) -> Result<i32, ConfigError> {
    v.trim()
        .parse::<i32>()
        .map_err(|_| ConfigError::BadValue { key: key.to_string(), value: v.to_string() })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_round_trips() {
        let cfg = ExperimentConfig::default();
        cfg.validate().unwrap();
        let text = cfg.serialize();
        let parsed = ExperimentConfig::parse(&text).unwrap();
        assert_eq!(cfg, parsed);
        // twice more for idempotence
        assert_eq!(parsed.serialize(), text);
    }

    #[test]
    fn parse_overrides_and_comments() {
        let text = "# comment\n[run]\nhorizon = 1.5\nseed = 9\n\n[gamma]\nbreakpoints = 0:0.4,2:0.6\n[spectrum]\ninterval = 0:1.5\n";
        let cfg = ExperimentConfig::parse(text).unwrap();
        assert_eq!(cfg.horizon, 1.5);
        assert_eq!(cfg.seed, 9);
        assert_eq!(cfg.gamma_breakpoints, vec![(0.0, 0.4), (2.0, 0.6)]);
    }

    #[test]
    fn rejects_unknown_keys_and_bad_values() {
        assert!(matches!(
            ExperimentConfig::parse("[run]\nbogus = 1\n"),
            Err(ConfigError::UnknownKey { .. })
        ));
        assert!(matches!(
            ExperimentConfig::parse("[run]\nhorizon = abc\n"),
            Err(ConfigError::BadValue { .. })
        ));
        assert!(matches!(
            ExperimentConfig::parse("no equals sign here"),
            Err(ConfigError::Syntax { .. })
        ));
        assert!(matches!(
            ExperimentConfig::parse("[run]\nz_max = 10\nu_min = 0.001\n"),
            Err(ConfigError::BothZMaxAndUMin)
        ));
    }

    #[test]
    fn u_min_replaces_z_max() {
        let cfg = ExperimentConfig::parse("[run]\nu_min = 0.0001\n").unwrap();
        assert_eq!(cfg.z_max, None);
        let z = cfg.effective_z_max().unwrap();
        // z = u^-(1-eps) - 1 with eps = 0.05
        let expected = (0.0001f64).powf(-0.95) - 1.0;
        assert!((z - expected).abs() < 1e-9 * expected);
        // round-trip keeps u_min
        let text = cfg.serialize();
        assert!(text.contains("u_min = 0.0001"));
        assert_eq!(ExperimentConfig::parse(&text).unwrap(), cfg);
    }

    #[test]
    fn h_grid_hits_boundaries() {
        let cfg = ExperimentConfig::default();
        let grid = cfg.h_grid();
        assert_eq!(grid.len(), 200);
        assert_eq!(grid[159], 2.0);
        assert_eq!(grid[199], 2.5);
    }

    #[test]
    fn validation_catches_interval_and_levels() {
        let mut cfg = ExperimentConfig::default();
        cfg.interval = (2.0, 1.0);
        assert!(cfg.validate().is_err());
        let mut cfg = ExperimentConfig::default();
        cfg.alpha_levels = vec![0.01, 0.1];
        assert!(cfg.validate().is_err());
        let mut cfg = ExperimentConfig::default();
        cfg.gamma_breakpoints = vec![(0.0, 0.99)];
        assert!(cfg.validate().is_err());
    }
}
