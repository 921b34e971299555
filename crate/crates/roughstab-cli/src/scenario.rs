//! Scenario files: line-oriented `key = value` text with `#` comments.
//!
//! ```text
//! name   = demo
//! system = motivational-2d          # or example-1d, custom-linear
//! driver = oscillatory(3,4,100)     # oscillatory-limit(b1,b2), wiener(seed,cells), none
//! T      = 1.0
//! h      = 1e-3
//! x0     = 1,1
//! lyapunov = quadratic              # optional candidate
//! out    = runs/demo
//! etas   = 1,10,100                 # converge / compare sweep
//! seeds  = 0..100                   # compare ensemble
//! grid   = 24,40,1e-3,10            # directions, shells, r_min, r_max
//! bound  = 1e6
//! ```
//!
//! `custom-linear` additionally takes `n = <dim>` and row-major matrices
//! `A0 = -7 0; 0 1`, `A1 = ...` for each channel.

use crate::CliError;
use roughstab::dynamics::VectorFieldSystem;
use roughstab::lyapunov::GridSpec;
use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

#[derive(Debug, Clone, PartialEq)]
pub enum SystemSpec {
    Motivational2d,
    Example1d,
    CustomLinear { dim: usize, matrices: Vec<Vec<f64>> },
}

impl SystemSpec {
    pub fn build(&self) -> Result<VectorFieldSystem, CliError> {
        match self {
            SystemSpec::Motivational2d => Ok(roughstab::systems::motivational_2d()),
            SystemSpec::Example1d => Ok(roughstab::systems::example_1d()),
            SystemSpec::CustomLinear { dim, matrices } => {
                VectorFieldSystem::linear(*dim, matrices.clone())
                    .map_err(|e| CliError::Config(format!("custom system: {e}")))
            }
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            SystemSpec::Motivational2d => "motivational-2d",
            SystemSpec::Example1d => "example-1d",
            SystemSpec::CustomLinear { .. } => "custom-linear",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum DriverSpec {
    Oscillatory { b1: f64, b2: f64, eta: u32 },
    OscillatoryLimit { b1: f64, b2: f64 },
    Wiener { seed: u64, cells: usize },
    None,
}

impl DriverSpec {
    pub fn describe(&self) -> String {
        match self {
            DriverSpec::Oscillatory { b1, b2, eta } => format!("oscillatory({b1},{b2},{eta})"),
            DriverSpec::OscillatoryLimit { b1, b2 } => format!("oscillatory-limit({b1},{b2})"),
            DriverSpec::Wiener { seed, cells } => format!("wiener({seed},{cells})"),
            DriverSpec::None => "none".into(),
        }
    }

    /// Amplitude pair of the oscillatory family, if this driver has one.
    pub fn oscillatory_amplitudes(&self) -> Option<(f64, f64)> {
        match self {
            DriverSpec::Oscillatory { b1, b2, .. } => Some((*b1, *b2)),
            DriverSpec::OscillatoryLimit { b1, b2 } => Some((*b1, *b2)),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Scenario {
    pub name: String,
    pub system: SystemSpec,
    pub driver: DriverSpec,
    pub horizon: f64,
    pub step: f64,
    pub x0: Vec<f64>,
    pub lyapunov: Option<String>,
    pub out: PathBuf,
    pub etas: Vec<u32>,
    pub seeds: Vec<u64>,
    pub grid: GridSpec,
    pub state_bound: f64,
}

impl Default for Scenario {
    fn default() -> Self {
        Self {
            name: "default".into(),
            system: SystemSpec::Motivational2d,
            driver: DriverSpec::Oscillatory {
                b1: 3.0,
                b2: 4.0,
                eta: 100,
            },
            horizon: 1.0,
            step: 1e-3,
            x0: vec![1.0, 1.0],
            lyapunov: None,
            out: PathBuf::from("runs/default"),
            etas: vec![1, 10, 100],
            seeds: (0..100).collect(),
            grid: GridSpec::default(),
            state_bound: roughstab::dynamics::DEFAULT_STATE_BOUND,
        }
    }
}

impl Scenario {
    pub fn from_file(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Config(format!("cannot read scenario {}: {e}", path.display())))?;
        Self::parse(&text)
    }

    pub fn parse(text: &str) -> Result<Self, CliError> {
        let mut map: BTreeMap<String, String> = BTreeMap::new();
        for (idx, raw) in text.lines().enumerate() {
            let line = match raw.find('#') {
                Some(p) => &raw[..p],
                None => raw,
            }
            .trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| {
                CliError::Config(format!("scenario line {}: expected `key = value`", idx + 1))
            })?;
            map.insert(key.trim().to_string(), value.trim().to_string());
        }

        let mut s = Scenario::default();
        if let Some(name) = map.get("name") {
            s.name = name.clone();
            s.out = PathBuf::from(format!("runs/{name}"));
        }
        if let Some(sys) = map.get("system") {
            s.system = match sys.as_str() {
                "motivational-2d" => SystemSpec::Motivational2d,
                "example-1d" => SystemSpec::Example1d,
                "custom-linear" => {
                    let dim = parse_num::<usize>(&map, "n")?
                        .ok_or_else(|| CliError::Config("custom-linear needs `n = <dim>`".into()))?;
                    let mut matrices = Vec::new();
                    for ch in 0.. {
                        match map.get(&format!("A{ch}")) {
                            Some(m) => matrices.push(parse_matrix(m, dim)?),
                            None => break,
                        }
                    }
                    if matrices.is_empty() {
                        return Err(CliError::Config(
                            "custom-linear needs at least `A0 = ...`".into(),
                        ));
                    }
                    SystemSpec::CustomLinear { dim, matrices }
                }
                other => {
                    return Err(CliError::Config(format!("unknown system `{other}`")));
                }
            };
            // defaults that depend on the system
            if s.system == SystemSpec::Example1d {
                s.x0 = vec![1.0];
                s.etas = vec![10, 100];
            }
            if let SystemSpec::CustomLinear { dim, .. } = &s.system {
                s.x0 = vec![1.0; *dim];
            }
        }
        if let Some(d) = map.get("driver") {
            s.driver = parse_driver(d)?;
        }
        if let Some(v) = parse_num::<f64>(&map, "T")? {
            s.horizon = v;
        }
        if let Some(v) = parse_num::<f64>(&map, "h")? {
            s.step = v;
        }
        if let Some(v) = map.get("x0") {
            s.x0 = parse_f64_list(v)?;
        }
        if let Some(v) = map.get("lyapunov") {
            if v != "quadratic" {
                return Err(CliError::Config(format!(
                    "unknown lyapunov candidate `{v}` (built-in: quadratic)"
                )));
            }
            s.lyapunov = Some(v.clone());
        }
        if let Some(v) = map.get("out") {
            s.out = PathBuf::from(v);
        }
        if let Some(v) = map.get("etas") {
            s.etas = parse_f64_list(v)?
                .into_iter()
                .map(|e| e as u32)
                .collect();
        }
        if let Some(v) = map.get("seeds") {
            s.seeds = parse_seed_list(v)?;
        }
        if let Some(v) = map.get("grid") {
            s.grid = parse_grid(v)?;
        }
        if let Some(v) = parse_num::<f64>(&map, "bound")? {
            s.state_bound = v;
        }
        s.validate()?;
        Ok(s)
    }

    pub fn validate(&self) -> Result<(), CliError> {
        if !(self.horizon > 0.0) || !(self.step > 0.0) {
            return Err(CliError::Config(format!(
                "need T > 0 and h > 0, got T = {}, h = {}",
                self.horizon, self.step
            )));
        }
        let system = self.system.build()?;
        if self.x0.len() != system.state_dim() {
            return Err(CliError::Config(format!(
                "x0 has {} entries but the system state dimension is {}",
                self.x0.len(),
                system.state_dim()
            )));
        }
        match &self.driver {
            DriverSpec::Oscillatory { eta, .. } if *eta == 0 => {
                return Err(CliError::Config("oscillatory eta must be >= 1".into()));
            }
            DriverSpec::Wiener { cells, .. } if *cells == 0 => {
                return Err(CliError::Config("wiener cells must be >= 1".into()));
            }
            _ => {}
        }
        Ok(())
    }

    /// Text echo written back into the manifest.
    pub fn echo(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!("name = {}\n", self.name));
        out.push_str(&format!("system = {}\n", self.system.name()));
        out.push_str(&format!("driver = {}\n", self.driver.describe()));
        out.push_str(&format!("T = {}\n", self.horizon));
        out.push_str(&format!("h = {}\n", self.step));
        let x0: Vec<String> = self.x0.iter().map(|v| v.to_string()).collect();
        out.push_str(&format!("x0 = {}\n", x0.join(",")));
        if let Some(l) = &self.lyapunov {
            out.push_str(&format!("lyapunov = {l}\n"));
        }
        out
    }
}

pub fn parse_grid(text: &str) -> Result<GridSpec, CliError> {
    let parts: Vec<&str> = text.split(',').map(str::trim).collect();
    if parts.len() != 4 {
        return Err(CliError::Config(format!(
            "grid spec needs `directions,shells,r_min,r_max`, got `{text}`"
        )));
    }
    let directions = parts[0]
        .parse()
        .map_err(|e| CliError::Config(format!("grid directions: {e}")))?;
    let shells = parts[1]
        .parse()
        .map_err(|e| CliError::Config(format!("grid shells: {e}")))?;
    let r_min: f64 = parts[2]
        .parse()
        .map_err(|e| CliError::Config(format!("grid r_min: {e}")))?;
    let r_max: f64 = parts[3]
        .parse()
        .map_err(|e| CliError::Config(format!("grid r_max: {e}")))?;
    Ok(GridSpec {
        directions,
        shells,
        r_min,
        r_max,
        ..GridSpec::default()
    })
}

fn parse_num<T: std::str::FromStr>(
    map: &BTreeMap<String, String>,
    key: &str,
) -> Result<Option<T>, CliError>
where
    T::Err: std::fmt::Display,
{
    match map.get(key) {
        Some(v) => v
            .parse::<T>()
            .map(Some)
            .map_err(|e| CliError::Config(format!("bad `{key}` value `{v}`: {e}"))),
        None => Ok(None),
    }
}

fn parse_driver(text: &str) -> Result<DriverSpec, CliError> {
    if text == "none" {
        return Ok(DriverSpec::None);
    }
    let (name, args) = match text.split_once('(') {
        Some((n, rest)) => {
            let rest = rest
                .strip_suffix(')')
                .ok_or_else(|| CliError::Config(format!("driver `{text}`: missing `)`")))?;
            (n.trim(), parse_f64_list(rest)?)
        }
        None => (text.trim(), Vec::new()),
    };
    match (name, args.as_slice()) {
        ("oscillatory", [b1, b2, eta]) => Ok(DriverSpec::Oscillatory {
            b1: *b1,
            b2: *b2,
            eta: *eta as u32,
        }),
        ("oscillatory-limit", [b1, b2]) => Ok(DriverSpec::OscillatoryLimit { b1: *b1, b2: *b2 }),
        ("wiener", [seed, cells]) => Ok(DriverSpec::Wiener {
            seed: *seed as u64,
            cells: *cells as usize,
        }),
        _ => Err(CliError::Config(format!(
            "unknown driver `{text}`; expected oscillatory(b1,b2,eta), \
             oscillatory-limit(b1,b2), wiener(seed,cells), or none"
        ))),
    }
}

fn parse_f64_list(text: &str) -> Result<Vec<f64>, CliError> {
    text.split(',')
        .map(|p| {
            p.trim()
                .parse::<f64>()
                .map_err(|e| CliError::Config(format!("bad number `{p}`: {e}")))
        })
        .collect()
}

fn parse_seed_list(text: &str) -> Result<Vec<u64>, CliError> {
    if let Some((a, b)) = text.split_once("..") {
        let start: u64 = a
            .trim()
            .parse()
            .map_err(|e| CliError::Config(format!("bad seed range start: {e}")))?;
        let end: u64 = b
            .trim()
            .parse()
            .map_err(|e| CliError::Config(format!("bad seed range end: {e}")))?;
        if end <= start {
            return Err(CliError::Config(format!("empty seed range `{text}`")));
        }
        return Ok((start..end).collect());
    }
    text.split(',')
        .map(|p| {
            p.trim()
                .parse::<u64>()
                .map_err(|e| CliError::Config(format!("bad seed `{p}`: {e}")))
        })
        .collect()
}

fn parse_matrix(text: &str, dim: usize) -> Result<Vec<f64>, CliError> {
    let mut out = Vec::with_capacity(dim * dim);
    for row in text.split(';') {
        for entry in row.split_whitespace() {
            out.push(
                entry
                    .parse::<f64>()
                    .map_err(|e| CliError::Config(format!("bad matrix entry `{entry}`: {e}")))?,
            );
        }
    }
    if out.len() != dim * dim {
        return Err(CliError::Config(format!(
            "matrix `{text}` has {} entries, expected {}",
            out.len(),
            dim * dim
        )));
    }
    Ok(out)
}
