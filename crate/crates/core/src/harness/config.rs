//! Flat `key = value` experiment configuration.

use std::fmt::{self, Write as _};
use std::path::{Path, PathBuf};
use std::str::FromStr;

use super::records::OutputFormat;
use crate::error::{Error, Result};
use crate::hamiltonians::{MfimParams, XxzParams};
use crate::sampler::SamplingPath;
use crate::sectors::{Direction, Frame};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExperimentKind {
    Mean,
    VarianceConvergence,
    Histogram,
    CsykSweep,
    XxzSweep,
    MfimSweep,
    MixedCharge,
    AsymptoticCollapse,
    SelfAveraging,
    PeCheck,
}

impl ExperimentKind {
    pub const ALL: [ExperimentKind; 10] = [
        ExperimentKind::Mean,
        ExperimentKind::VarianceConvergence,
        ExperimentKind::Histogram,
        ExperimentKind::CsykSweep,
        ExperimentKind::XxzSweep,
        ExperimentKind::MfimSweep,
        ExperimentKind::MixedCharge,
        ExperimentKind::AsymptoticCollapse,
        ExperimentKind::SelfAveraging,
        ExperimentKind::PeCheck,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            ExperimentKind::Mean => "mean",
            ExperimentKind::VarianceConvergence => "variance-convergence",
            ExperimentKind::Histogram => "histogram",
            ExperimentKind::CsykSweep => "csyk-sweep",
            ExperimentKind::XxzSweep => "xxz-sweep",
            ExperimentKind::MfimSweep => "mfim-sweep",
            ExperimentKind::MixedCharge => "mixed-charge",
            ExperimentKind::AsymptoticCollapse => "asymptotic-collapse",
            ExperimentKind::SelfAveraging => "self-averaging",
            ExperimentKind::PeCheck => "pe-check",
        }
    }
}

impl fmt::Display for ExperimentKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ExperimentKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| Error::Config(format!("unknown experiment kind '{s}'")))
    }
}

/// Parses `z`, `x`, `y` or `n(nx,ny,nz)`; the latter must be a unit vector.
pub fn parse_frame(s: &str) -> Result<Frame> {
    match s.trim() {
        "z" => Ok(Frame::Z),
        "x" => Ok(Frame::X),
        "y" => Ok(Frame::Y),
        t => {
            let inner = t
                .strip_prefix("n(")
                .and_then(|r| r.strip_suffix(')'))
                .ok_or_else(|| Error::Config(format!("bad frame '{t}' (z, x, y or n(nx,ny,nz))")))?;
            let v: Vec<f64> = parse_list(inner)?;
            if v.len() != 3 {
                return Err(Error::Config(format!("frame '{t}' needs three components")));
            }
            Direction::new(v[0], v[1], v[2])
                .map(Frame::Tilted)
                .map_err(|e| Error::Config(e.to_string()))
        }
    }
}

fn parse_scalar<T: FromStr>(key: &str, v: &str) -> Result<T> {
    v.trim()
        .parse()
        .map_err(|_| Error::Config(format!("bad value '{v}' for key '{key}'")))
}

fn parse_list<T: FromStr>(v: &str) -> Result<Vec<T>> {
    v.split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|s| s.parse().map_err(|_| Error::Config(format!("bad list entry '{s}'"))))
        .collect()
}

fn join<T: fmt::Display>(v: &[T]) -> String {
    v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",")
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub kind: ExperimentKind,
    pub n_qubits: usize,
    pub charges: Vec<i64>,
    pub frame: Frame,
    pub thetas: Vec<f64>,
    /// System-size grid for collapse and self-averaging runs.
    pub sizes: Vec<usize>,
    /// Charge-density grid `s = q/L` for collapse runs.
    pub densities: Vec<f64>,
    pub samples: usize,
    pub realizations: usize,
    pub seed: u64,
    /// `|E/L| < window`.
    pub window: Option<f64>,
    /// Central spectral fraction; used when `window` is unset.
    pub fraction: Option<f64>,
    pub path: SamplingPath,
    pub xxz: XxzParams,
    pub mfim: MfimParams,
    /// Lifts the sampling cap from `L ≤ 12` to `L ≤ 14`.
    pub allow_large: bool,
    pub threads: Option<usize>,
    pub output: Option<PathBuf>,
    pub format: OutputFormat,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        Self {
            kind: ExperimentKind::Mean,
            n_qubits: 8,
            charges: vec![0],
            frame: Frame::Z,
            thetas: vec![],
            sizes: vec![],
            densities: vec![],
            samples: 1000,
            realizations: 10,
            seed: 0,
            window: None,
            fraction: None,
            path: SamplingPath::Direct,
            xxz: XxzParams::reference_conserving(),
            mfim: MfimParams::reference(),
            allow_large: false,
            threads: None,
            output: None,
            format: OutputFormat::Csv,
        }
    }
}

impl ExperimentConfig {
    pub fn new(kind: ExperimentKind) -> Self {
        Self {
            kind,
            ..Self::default()
        }
    }

    /// Sets one key from its textual value.
    pub fn set(&mut self, key: &str, value: &str) -> Result<()> {
        let v = value.trim();
        let opt = |v: &str| -> Result<Option<f64>> {
            if v.is_empty() {
                Ok(None)
            } else {
                parse_scalar(key, v).map(Some)
            }
        };
        match key {
            "kind" => self.kind = v.parse()?,
            "L" => self.n_qubits = parse_scalar(key, v)?,
            "q" => self.charges = parse_list(v)?,
            "frame" => self.frame = parse_frame(v)?,
            "theta" => self.thetas = parse_list(v)?,
            "sizes" => self.sizes = parse_list(v)?,
            "s" => self.densities = parse_list(v)?,
            "samples" => self.samples = parse_scalar(key, v)?,
            "realizations" => self.realizations = parse_scalar(key, v)?,
            "seed" => self.seed = parse_scalar(key, v)?,
            "window" => self.window = opt(v)?,
            "fraction" => self.fraction = opt(v)?,
            "path" => {
                self.path = match v {
                    "direct" => SamplingPath::Direct,
                    "projection" => SamplingPath::Projection,
                    _ => return Err(Error::Config(format!("bad sampling path '{v}'"))),
                }
            }
            "j1" => self.xxz.j1 = parse_scalar(key, v)?,
            "delta" => self.xxz.delta = parse_scalar(key, v)?,
            "j2" => self.xxz.j2 = parse_scalar(key, v)?,
            "h_b" => self.xxz.h_b = parse_scalar(key, v)?,
            "h_x" => self.xxz.h_x = parse_scalar(key, v)?,
            "g" => self.mfim.g = parse_scalar(key, v)?,
            "h" => self.mfim.h = parse_scalar(key, v)?,
            "h1" => self.mfim.h1 = parse_scalar(key, v)?,
            "h_l" => self.mfim.h_l = parse_scalar(key, v)?,
            "allow_large" => self.allow_large = parse_scalar(key, v)?,
            "threads" => self.threads = if v.is_empty() { None } else { Some(parse_scalar(key, v)?) },
            "out" => self.output = (!v.is_empty()).then(|| PathBuf::from(v)),
            "format" => self.format = v.parse()?,
            _ => return Err(Error::Config(format!("unknown key '{key}'"))),
        }
        Ok(())
    }

    /// Applies `key = value` lines on top of `self`; `#` starts a comment.
    pub fn apply_text(&mut self, text: &str) -> Result<()> {
        for (n, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (k, v) = line
                .split_once('=')
                .ok_or_else(|| Error::Config(format!("line {}: expected key = value", n + 1)))?;
            self.set(k.trim(), v)
                .map_err(|e| Error::Config(format!("line {}: {e}", n + 1)))?;
        }
        Ok(())
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut c = Self::default();
        c.apply_text(text)?;
        Ok(c)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Config(format!("cannot read config '{}': {e}", path.display())))?;
        Self::parse(&text)
    }

    /// Serialized form; [`ExperimentConfig::parse`] inverts it exactly.
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let mut kv = |k: &str, v: String| {
            let _ = writeln!(s, "{k} = {v}");
        };
        kv("kind", self.kind.to_string());
        kv("L", self.n_qubits.to_string());
        kv("q", join(&self.charges));
        kv("frame", self.frame.to_string());
        kv("theta", join(&self.thetas));
        kv("sizes", join(&self.sizes));
        kv("s", join(&self.densities));
        kv("samples", self.samples.to_string());
        kv("realizations", self.realizations.to_string());
        kv("seed", self.seed.to_string());
        kv("window", self.window.map(|w| w.to_string()).unwrap_or_default());
        kv("fraction", self.fraction.map(|w| w.to_string()).unwrap_or_default());
        kv(
            "path",
            match self.path {
                SamplingPath::Direct => "direct".into(),
                SamplingPath::Projection => "projection".into(),
            },
        );
        kv("j1", self.xxz.j1.to_string());
        kv("delta", self.xxz.delta.to_string());
        kv("j2", self.xxz.j2.to_string());
        kv("h_b", self.xxz.h_b.to_string());
        kv("h_x", self.xxz.h_x.to_string());
        kv("g", self.mfim.g.to_string());
        kv("h", self.mfim.h.to_string());
        kv("h1", self.mfim.h1.to_string());
        kv("h_l", self.mfim.h_l.to_string());
        kv("allow_large", self.allow_large.to_string());
        kv("threads", self.threads.map(|t| t.to_string()).unwrap_or_default());
        kv(
            "out",
            self.output.as_ref().map(|p| p.display().to_string()).unwrap_or_default(),
        );
        kv("format", self.format.to_string());
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip_is_exact() {
        let mut c = ExperimentConfig::new(ExperimentKind::MixedCharge);
        c.charges = vec![-2, 0, 4];
        c.thetas = vec![0.1, std::f64::consts::PI / 7.0, 1e-17];
        c.frame = Frame::Tilted(Direction::from_theta(0.3));
        c.window = Some(0.25);
        c.xxz.h_x = 0.75;
        c.threads = Some(3);
        c.output = Some("runs/out.csv".into());
        c.format = OutputFormat::Json;
        let back = ExperimentConfig::parse(&c.to_text()).unwrap();
        assert_eq!(back, c);
        assert_eq!(back.thetas[1].to_bits(), c.thetas[1].to_bits());
        assert_eq!(ExperimentConfig::parse(&ExperimentConfig::default().to_text()).unwrap(), ExperimentConfig::default());
    }

    #[test]
    fn comments_and_errors() {
        let c = ExperimentConfig::parse("# header\nkind = csyk-sweep  # trailing\n\nL=6\nq = 0, 2\n").unwrap();
        assert_eq!(c.kind, ExperimentKind::CsykSweep);
        assert_eq!(c.n_qubits, 6);
        assert_eq!(c.charges, vec![0, 2]);
        assert!(matches!(ExperimentConfig::parse("L = eight"), Err(Error::Config(_))));
        assert!(matches!(ExperimentConfig::parse("colour = red"), Err(Error::Config(_))));
        assert!(matches!(ExperimentConfig::parse("just text"), Err(Error::Config(_))));
        assert!(parse_frame("n(1,1,0)").is_err());
        assert_eq!(parse_frame("n(0,0,1)").unwrap(), Frame::Tilted(Direction::Z));
    }
}
