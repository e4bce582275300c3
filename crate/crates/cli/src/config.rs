//! Run configuration: defaults, then the key=value file named by MSF_CONFIG,
//! then command-line flags.

use std::fmt;
use std::path::{Path, PathBuf};

use msf_core::dirac::DiracConfig;
use msf_core::landau::FieldConfig;
use msf_core::specfun::SeriesControl;

pub const CONFIG_ENV: &str = "MSF_CONFIG";

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

impl fmt::Display for Format {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Format::Csv => "csv",
            Format::Json => "json",
        })
    }
}

#[derive(Debug)]
pub struct UsageError(pub String);

impl fmt::Display for UsageError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

/// Every knob of a run. Defaults: μ = 0, l₀ = 0, γ = 1, ϑ = +1, M = 1,
/// per-check tolerances, 200 quadrature nodes, rel_tol 1e−14, max_terms 10⁶.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub mu: f64,
    pub l0: i64,
    pub gamma: f64,
    pub vartheta: i8,
    pub mass: f64,
    /// Replaces every check's own tolerance when set.
    pub tol: Option<f64>,
    pub nodes: usize,
    pub rel_tol: f64,
    pub max_terms: usize,
    pub out: Option<PathBuf>,
    pub format: Option<Format>,
    pub record_timing: bool,
}

impl Default for RunConfig {
    fn default() -> Self {
        let ctl = SeriesControl::default();
        Self {
            mu: 0.0,
            l0: 0,
            gamma: 1.0,
            vartheta: 1,
            mass: 1.0,
            tol: None,
            nodes: msf_core::quadrature::DEFAULT_NODES,
            rel_tol: ctl.rel_tol,
            max_terms: ctl.max_terms,
            out: None,
            format: None,
            record_timing: false,
        }
    }
}

/// Command-line values; `None` leaves the file or default value in place.
#[derive(Debug, Clone, Default, clap::Args)]
pub struct Overrides {
    /// Fractional flux μ ∈ [0, 1)
    #[arg(long)]
    pub mu: Option<f64>,
    /// Integer flux l₀
    #[arg(long, allow_negative_numbers = true)]
    pub l0: Option<i64>,
    /// Field strength γ > 0
    #[arg(long)]
    pub gamma: Option<f64>,
    /// Self-adjoint extension ±1
    #[arg(long, allow_negative_numbers = true)]
    pub vartheta: Option<i8>,
    /// Dirac mass M ≥ 0
    #[arg(long)]
    pub mass: Option<f64>,
    /// Tolerance applied to every check instead of its own
    #[arg(long)]
    pub tol: Option<f64>,
    /// Gauss–Laguerre node count
    #[arg(long)]
    pub nodes: Option<usize>,
    /// Series truncation tolerance
    #[arg(long)]
    pub rel_tol: Option<f64>,
    /// Series term limit
    #[arg(long)]
    pub max_terms: Option<usize>,
    /// Output file (stdout when absent)
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub format: Option<Format>,
    /// Record wall time in reports (makes them run-dependent)
    #[arg(long)]
    pub record_timing: bool,
}

fn parse<T: std::str::FromStr>(key: &str, v: &str) -> Result<T, UsageError> {
    v.parse().map_err(|_| UsageError(format!("config key {key}: cannot parse {v:?}")))
}

impl RunConfig {
    /// Applies one `key = value` pair.
    pub fn set(&mut self, key: &str, value: &str) -> Result<(), UsageError> {
        match key {
            "mu" => self.mu = parse(key, value)?,
            "l0" => self.l0 = parse(key, value)?,
            "gamma" => self.gamma = parse(key, value)?,
            "vartheta" => self.vartheta = parse(key, value)?,
            "mass" => self.mass = parse(key, value)?,
            "tol" => self.tol = Some(parse(key, value)?),
            "nodes" => self.nodes = parse(key, value)?,
            "rel_tol" => self.rel_tol = parse(key, value)?,
            "max_terms" => self.max_terms = parse(key, value)?,
            "out" => self.out = Some(PathBuf::from(value)),
            "format" => {
                self.format = Some(match value {
                    "csv" => Format::Csv,
                    "json" => Format::Json,
                    _ => return Err(UsageError(format!("config key format: expected csv or json, got {value:?}"))),
                })
            }
            "record_timing" => self.record_timing = parse(key, value)?,
            _ => return Err(UsageError(format!("unknown config key {key:?}"))),
        }
        Ok(())
    }

    /// Flat text: one `key = value` per line, `#` starts a comment.
    pub fn apply_text(&mut self, text: &str, origin: &str) -> Result<(), UsageError> {
        for (n, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let Some((k, v)) = line.split_once('=') else {
                return Err(UsageError(format!("{origin}:{}: expected key = value", n + 1)));
            };
            self.set(k.trim(), v.trim()).map_err(|e| UsageError(format!("{origin}:{}: {e}", n + 1)))?;
        }
        Ok(())
    }

    pub fn apply_file(&mut self, path: &Path) -> Result<(), UsageError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| UsageError(format!("cannot read config {}: {e}", path.display())))?;
        self.apply_text(&text, &path.display().to_string())
    }

    pub fn apply_overrides(&mut self, o: &Overrides) {
        macro_rules! take {
            ($($f:ident),*) => { $( if let Some(v) = o.$f.clone() { self.$f = v; } )* };
        }
        take!(mu, l0, gamma, vartheta, mass, nodes, rel_tol, max_terms);
        if o.tol.is_some() {
            self.tol = o.tol;
        }
        if o.out.is_some() {
            self.out = o.out.clone();
        }
        if o.format.is_some() {
            self.format = o.format;
        }
        if o.record_timing {
            self.record_timing = true;
        }
    }

    /// Defaults, then $MSF_CONFIG if set, then the flags.
    pub fn resolve(o: &Overrides) -> Result<Self, UsageError> {
        let mut c = Self::default();
        if let Some(p) = std::env::var_os(CONFIG_ENV) {
            c.apply_file(Path::new(&p))?;
        }
        c.apply_overrides(o);
        c.validate()?;
        Ok(c)
    }

    pub fn validate(&self) -> Result<(), UsageError> {
        self.field()?;
        self.dirac()?;
        self.series()?;
        if self.nodes < 8 {
            return Err(UsageError(format!("nodes must be at least 8, got {}", self.nodes)));
        }
        if let Some(t) = self.tol {
            if !(t >= 0.0) {
                return Err(UsageError(format!("tol must be >= 0, got {t}")));
            }
        }
        Ok(())
    }

    pub fn field(&self) -> Result<FieldConfig, UsageError> {
        FieldConfig::new(self.gamma, self.l0, self.mu).map_err(|e| UsageError(e.to_string()))
    }

    pub fn dirac(&self) -> Result<DiracConfig, UsageError> {
        DiracConfig::new(self.field()?, self.mass, self.vartheta).map_err(|e| UsageError(e.to_string()))
    }

    pub fn series(&self) -> Result<SeriesControl, UsageError> {
        SeriesControl::new(self.rel_tol, self.max_terms).map_err(|e| UsageError(e.to_string()))
    }

    /// The tolerance a check runs at.
    pub fn tolerance(&self, own: f64) -> f64 {
        self.tol.unwrap_or(own)
    }

    /// (key, value) echo of every knob, in a fixed order.
    pub fn echo(&self) -> Vec<(&'static str, String)> {
        vec![
            ("mu", format!("{}", self.mu)),
            ("l0", format!("{}", self.l0)),
            ("gamma", format!("{}", self.gamma)),
            ("vartheta", format!("{}", self.vartheta)),
            ("mass", format!("{}", self.mass)),
            ("tol", self.tol.map_or("per-check".into(), |t| format!("{t:e}"))),
            ("nodes", format!("{}", self.nodes)),
            ("rel_tol", format!("{:e}", self.rel_tol)),
            ("max_terms", format!("{}", self.max_terms)),
        ]
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn file_then_flags() {
        let mut c = RunConfig::default();
        c.apply_text("# comment\nmu = 0.25\nnodes=120  # trailing\n\nformat = csv\n", "t").unwrap();
        assert_eq!(c.mu, 0.25);
        assert_eq!(c.nodes, 120);
        assert_eq!(c.format, Some(Format::Csv));
        let o = Overrides { mu: Some(0.5), ..Default::default() };
        c.apply_overrides(&o);
        assert_eq!(c.mu, 0.5);
        assert_eq!(c.nodes, 120);
    }

    #[test]
    fn bad_input_is_a_usage_error() {
        let mut c = RunConfig::default();
        assert!(c.apply_text("nope = 1", "t").is_err());
        assert!(c.apply_text("mu 0.3", "t").is_err());
        assert!(c.apply_text("mu = x", "t").is_err());
        c.mu = 1.5;
        assert!(c.validate().is_err());
        c.mu = 0.0;
        c.vartheta = 0;
        assert!(c.validate().is_err());
    }
}
