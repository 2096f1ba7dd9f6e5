//! Scenario configuration: flat key=value files merged with command-line overrides.

use crate::bounds::BoundKind;
use crate::channels::FdScheme;
use crate::conic_ir::WeightMatrix;
use crate::error::{Error, Result};
use std::collections::BTreeMap;
use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Scenario {
    /// depolarized qubit rotation, noise = p
    OneParam,
    /// d-dimensional bit flip with probability theta, noise = theta
    Pauli,
    /// SU(2) rotation of spin j with depolarizing noise p
    Su2,
    /// collective field sensing on n qubits, noise = gamma
    FieldSensing,
    /// Choi matrix and derivatives read from a JSON file
    CustomChoi,
}

impl Scenario {
    pub fn name(self) -> &'static str {
        match self {
            Scenario::OneParam => "one-param",
            Scenario::Pauli => "pauli",
            Scenario::Su2 => "su2",
            Scenario::FieldSensing => "field-sensing",
            Scenario::CustomChoi => "custom-choi",
        }
    }
}

impl FromStr for Scenario {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Ok(match s.trim() {
            "one-param" => Scenario::OneParam,
            "pauli" => Scenario::Pauli,
            "su2" => Scenario::Su2,
            "field-sensing" => Scenario::FieldSensing,
            "custom-choi" => Scenario::CustomChoi,
            other => {
                return Err(Error::Config(format!(
                    "unknown scenario '{other}' (one-param, pauli, su2, field-sensing, custom-choi)"
                )))
            }
        })
    }
}

/// start:stop:step, stop included within 1e-12. A single number is a one-point grid.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Grid {
    pub start: f64,
    pub stop: f64,
    pub step: f64,
}

impl Grid {
    pub fn point(x: f64) -> Self {
        Grid {
            start: x,
            stop: x,
            step: 1.0,
        }
    }

    pub fn values(&self) -> Vec<f64> {
        let mut out = Vec::new();
        let mut k = 0usize;
        loop {
            let x = self.start + k as f64 * self.step;
            if x > self.stop + 1e-12 {
                break;
            }
            // snap the last point onto stop
            out.push(if (x - self.stop).abs() <= 1e-12 { self.stop } else { x });
            k += 1;
        }
        out
    }
}

impl FromStr for Grid {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let parts: Vec<&str> = s.split(':').map(str::trim).collect();
        let num = |t: &str| {
            t.parse::<f64>()
                .ok()
                .filter(|v| v.is_finite())
                .ok_or_else(|| Error::Config(format!("'{t}' is not a number")))
        };
        let g = match parts.as_slice() {
            [x] => Grid::point(num(x)?),
            [a, b, c] => Grid {
                start: num(a)?,
                stop: num(b)?,
                step: num(c)?,
            },
            _ => return Err(Error::Config(format!("grid '{s}' is not start:stop:step"))),
        };
        if !(g.step > 0.0) {
            return Err(Error::Config(format!("grid step must be positive, got {}", g.step)));
        }
        if g.stop < g.start - 1e-12 {
            return Err(Error::Config(format!("grid '{s}' is empty")));
        }
        Ok(g)
    }
}

impl fmt::Display for Grid {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}:{}", self.start, self.stop, self.step)
    }
}

/// One requested column of bounds.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum BoundSpec {
    /// J_k
    Channel(BoundKind),
    /// J1ext:m
    Extension(usize),
    /// S_k with the maximally entangled probe
    Sym(BoundKind),
    /// S_k with the 3D-GHZ probe (field sensing only)
    Ghz(BoundKind),
}

impl BoundSpec {
    pub fn label(&self) -> String {
        match self {
            BoundSpec::Channel(k) => k.channel_label(),
            BoundSpec::Extension(m) => format!("J1ext:{m}"),
            BoundSpec::Sym(k) => format!("Ssym{}", k.index()),
            BoundSpec::Ghz(k) => format!("S3d{}", k.index()),
        }
    }

    /// Column order: J2..J5, J1ext by level, Ssym2..5, S3d2..5.
    pub fn order(&self) -> (usize, usize) {
        match self {
            BoundSpec::Channel(k) => (0, k.index()),
            BoundSpec::Extension(m) => (1, *m),
            BoundSpec::Sym(k) => (2, k.index()),
            BoundSpec::Ghz(k) => (3, k.index()),
        }
    }
}

impl FromStr for BoundSpec {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim();
        let kind = |rest: &str| {
            rest.parse::<usize>()
                .ok()
                .and_then(BoundKind::from_index)
                .ok_or_else(|| Error::Config(format!("unknown bound '{t}'")))
        };
        if let Some(m) = t.strip_prefix("J1ext:") {
            let m: usize = m.parse().map_err(|_| Error::Config(format!("bad extension level in '{t}'")))?;
            if m < 2 {
                return Err(Error::Config(format!("extension level must be >= 2 in '{t}'")));
            }
            return Ok(BoundSpec::Extension(m));
        }
        if let Some(r) = t.strip_prefix("Ssym") {
            return Ok(BoundSpec::Sym(kind(r)?));
        }
        if let Some(r) = t.strip_prefix("S3d") {
            return Ok(BoundSpec::Ghz(kind(r)?));
        }
        if let Some(r) = t.strip_prefix('J') {
            return Ok(BoundSpec::Channel(kind(r)?));
        }
        Err(Error::Config(format!("unknown bound '{t}'")))
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum Weight {
    Identity,
    Matrix(Vec<f64>),
}

impl Weight {
    pub fn resolve(&self, d: usize) -> Result<WeightMatrix> {
        match self {
            Weight::Identity => Ok(WeightMatrix::identity(d)),
            Weight::Matrix(v) => WeightMatrix::new(d, v.clone()),
        }
    }
}

impl FromStr for Weight {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s == "identity" || s == "I" {
            return Ok(Weight::Identity);
        }
        let v = s
            .split(',')
            .map(|x| x.trim().parse::<f64>())
            .collect::<std::result::Result<Vec<_>, _>>()
            .map_err(|_| Error::Config(format!("weight '{s}' is neither 'identity' nor a comma-separated list")))?;
        Ok(Weight::Matrix(v))
    }
}

#[derive(Clone, Debug)]
pub struct ScenarioConfig {
    pub scenario: Scenario,
    /// qubit count (field sensing) or dimension (pauli)
    pub n: usize,
    /// spin (su2)
    pub j: f64,
    pub noise: Grid,
    pub bounds: Vec<BoundSpec>,
    pub weight: Weight,
    pub fd: FdScheme,
    /// solver gap and feasibility tolerance
    pub tol: f64,
    pub jobs: usize,
    pub out: Option<PathBuf>,
    pub choi: Option<PathBuf>,
}

impl Default for ScenarioConfig {
    fn default() -> Self {
        ScenarioConfig {
            scenario: Scenario::OneParam,
            n: 2,
            j: 0.5,
            noise: Grid::point(0.0),
            bounds: vec![BoundSpec::Channel(BoundKind::Sld)],
            weight: Weight::Identity,
            fd: FdScheme::default(),
            tol: 1e-8,
            jobs: std::thread::available_parallelism().map(|n| n.get()).unwrap_or(1),
            out: None,
            choi: None,
        }
    }
}

pub const KEYS: [&str; 15] = [
    "scenario", "n", "j", "noise", "p", "gamma", "theta", "bounds", "weight", "fd-scheme", "fd-step", "tol", "jobs",
    "out", "choi",
];

/// A value and where it came from.
#[derive(Clone, Debug, PartialEq)]
pub struct Entry {
    pub value: String,
    pub line: Option<usize>,
}

/// Raw key=value pairs before validation.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct RawConfig {
    pub entries: BTreeMap<String, Entry>,
}

impl RawConfig {
    /// Blank lines and lines starting with '#' are skipped.
    pub fn parse(text: &str) -> Result<Self> {
        let mut entries = BTreeMap::new();
        for (i, line) in text.lines().enumerate() {
            let ln = i + 1;
            let t = line.trim();
            if t.is_empty() || t.starts_with('#') {
                continue;
            }
            let (k, v) = t
                .split_once('=')
                .ok_or_else(|| Error::Config(format!("line {ln}: expected key=value, got '{t}'")))?;
            let k = k.trim().replace('_', "-");
            if !KEYS.contains(&k.as_str()) {
                return Err(Error::Config(format!("line {ln}: unknown key '{k}'")));
            }
            if entries.contains_key(&k) {
                return Err(Error::Config(format!("line {ln}: key '{k}' given twice")));
            }
            entries.insert(
                k,
                Entry {
                    value: v.trim().to_string(),
                    line: Some(ln),
                },
            );
        }
        Ok(RawConfig { entries })
    }

    pub fn set(&mut self, key: &str, value: impl Into<String>) -> Result<()> {
        if !KEYS.contains(&key) {
            return Err(Error::Config(format!("unknown key '{key}'")));
        }
        self.entries.insert(
            key.to_string(),
            Entry {
                value: value.into(),
                line: None,
            },
        );
        Ok(())
    }

    /// Later values win.
    pub fn merge(&mut self, other: RawConfig) {
        self.entries.extend(other.entries);
    }

    pub fn build(&self) -> Result<ScenarioConfig> {
        let mut c = ScenarioConfig::default();
        let field = |key: &str, e: &Entry, err: Error| -> Error {
            let msg = match err {
                Error::Config(m) => m,
                other => other.to_string(),
            };
            match e.line {
                Some(l) => Error::Config(format!("line {l}: field '{key}': {msg}")),
                None => Error::Config(format!("field '{key}': {msg}")),
            }
        };
        let mut noise_key: Option<&str> = None;
        for (k, e) in &self.entries {
            let v = e.value.as_str();
            let r: Result<()> = (|| {
                match k.as_str() {
                    "scenario" => c.scenario = v.parse()?,
                    "n" => {
                        c.n = v
                            .parse()
                            .ok()
                            .filter(|&n| n >= 1)
                            .ok_or_else(|| Error::Config(format!("'{v}' is not a positive integer")))?
                    }
                    "j" => {
                        c.j = v
                            .parse::<f64>()
                            .ok()
                            .filter(|j| *j > 0.0 && (2.0 * j - (2.0 * j).round()).abs() < 1e-12)
                            .ok_or_else(|| Error::Config(format!("'{v}' is not a positive half-integer")))?
                    }
                    "noise" | "p" | "gamma" | "theta" => {
                        if let Some(prev) = noise_key {
                            return Err(Error::Config(format!("conflicts with '{prev}'")));
                        }
                        noise_key = Some(k.as_str());
                        c.noise = v.parse()?;
                    }
                    "bounds" => {
                        let b = v.split(',').map(|s| s.parse()).collect::<Result<Vec<BoundSpec>>>()?;
                        if b.is_empty() {
                            return Err(Error::Config("empty bound list".into()));
                        }
                        c.bounds = b;
                    }
                    "weight" => c.weight = v.parse()?,
                    "fd-scheme" => {
                        let h = match c.fd {
                            FdScheme::Central(h) | FdScheme::Forward(h) => h,
                        };
                        c.fd = match v {
                            "central" => FdScheme::Central(h),
                            "forward" => FdScheme::Forward(h),
                            _ => return Err(Error::Config(format!("'{v}' is not central|forward"))),
                        }
                    }
                    "fd-step" | "tol" | "jobs" | "out" | "choi" => {}
                    _ => return Err(Error::Config("unknown key".into())),
                }
                Ok(())
            })();
            r.map_err(|err| field(k, e, err))?;
        }
        // keys that depend on others
        if let Some(e) = self.entries.get("fd-step") {
            let h: f64 = e
                .value
                .parse()
                .ok()
                .filter(|h: &f64| *h > 0.0 && h.is_finite())
                .ok_or_else(|| field("fd-step", e, Error::Config(format!("'{}' is not a positive number", e.value))))?;
            c.fd = match c.fd {
                FdScheme::Central(_) => FdScheme::Central(h),
                FdScheme::Forward(_) => FdScheme::Forward(h),
            };
        }
        if let Some(e) = self.entries.get("tol") {
            c.tol = e
                .value
                .parse()
                .ok()
                .filter(|t: &f64| *t > 0.0 && *t < 1.0)
                .ok_or_else(|| field("tol", e, Error::Config(format!("'{}' is not in (0,1)", e.value))))?;
        }
        if let Some(e) = self.entries.get("jobs") {
            c.jobs = e
                .value
                .parse()
                .ok()
                .filter(|&j: &usize| j >= 1)
                .ok_or_else(|| field("jobs", e, Error::Config(format!("'{}' is not a positive integer", e.value))))?;
        }
        if let Some(e) = self.entries.get("out") {
            c.out = Some(PathBuf::from(&e.value));
        }
        if let Some(e) = self.entries.get("choi") {
            c.choi = Some(PathBuf::from(&e.value));
        }
        c.validate()?;
        Ok(c)
    }
}

impl ScenarioConfig {
    pub fn validate(&self) -> Result<()> {
        if self.scenario == Scenario::CustomChoi && self.choi.is_none() {
            return Err(Error::Config("scenario custom-choi needs 'choi' (path to a JSON file)".into()));
        }
        if self.scenario != Scenario::FieldSensing {
            if let Some(b) = self.bounds.iter().find(|b| matches!(b, BoundSpec::Ghz(_))) {
                return Err(Error::Config(format!("{} needs scenario field-sensing", b.label())));
            }
        }
        if self.scenario == Scenario::Pauli && self.n < 2 {
            return Err(Error::Config("pauli needs n >= 2".into()));
        }
        if self.scenario == Scenario::CustomChoi && self.noise.values().len() != 1 {
            return Err(Error::Config("custom-choi has no noise parameter; give a single noise value".into()));
        }
        if self.noise.values().is_empty() {
            return Err(Error::Config("noise grid is empty".into()));
        }
        Ok(())
    }

    /// Number of parameters of the scenario's channel family (custom: unknown until loaded).
    pub fn params(&self) -> Option<usize> {
        match self.scenario {
            Scenario::OneParam | Scenario::Pauli => Some(1),
            Scenario::Su2 | Scenario::FieldSensing => Some(3),
            Scenario::CustomChoi => None,
        }
    }
}
