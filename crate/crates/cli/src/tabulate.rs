//! Grid tabulation of states, coherent-state densities, weights, the propagator
//! and the spectrum.

use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use msf_core::completeness::{propagator_closed, weight_fn, KernelParams, WeightSpec};
use msf_core::cs::{CSExpansion, CSLabel};
use msf_core::landau::{energy_nonrel, resolve_qnums, stationary_state, Branch, FieldConfig};

use crate::config::{Format, RunConfig, UsageError};
use crate::report::{csv_number, Params};

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Target {
    State,
    CsDensity,
    Weight,
    Kernel,
    Spectrum,
}

impl Target {
    fn name(self) -> &'static str {
        match self {
            Target::State => "state",
            Target::CsDensity => "cs-density",
            Target::Weight => "weight",
            Target::Kernel => "kernel",
            Target::Spectrum => "spectrum",
        }
    }
}

/// Per-target arguments. Grids are `start:stop:step` (inclusive) or a single value.
#[derive(Debug, Clone, Default, clap::Args)]
pub struct TabArgs {
    /// Branch index 0 or 1 (cs-density)
    #[arg(long)]
    pub j: Option<u8>,
    /// Angular label (state, kernel)
    #[arg(long, allow_negative_numbers = true)]
    pub l: Option<i64>,
    /// Radial label (state)
    #[arg(long)]
    pub m: Option<usize>,
    #[arg(long, default_value = "0")]
    pub theta: String,
    #[arg(long, default_value = "0:8:0.5")]
    pub rho: String,
    /// Second radial grid (kernel)
    #[arg(long, default_value = "0:8:0.5")]
    pub rhop: String,
    #[arg(long, default_value = "0:4:0.5")]
    pub u: String,
    #[arg(long, default_value = "0:4:0.5")]
    pub v: String,
    /// Imaginary time of the propagator (kernel)
    #[arg(long)]
    pub tau: Option<f64>,
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    pub dtheta: f64,
    /// Coherent-state label, "re,im"
    #[arg(long, default_value = "0,0", allow_hyphen_values = true)]
    pub z1: String,
    #[arg(long, default_value = "0,0", allow_hyphen_values = true)]
    pub z2: String,
    #[arg(long, default_value_t = 5)]
    pub lmax: i64,
    #[arg(long, default_value_t = 5)]
    pub mmax: usize,
}

/// Grid points from `start:stop:step` or a single number.
pub fn parse_grid(spec: &str) -> Result<Vec<f64>, UsageError> {
    let bad = || UsageError(format!("malformed grid {spec:?}: expected start:stop:step or a number"));
    let parts: Vec<&str> = spec.split(':').collect();
    let num = |s: &str| s.trim().parse::<f64>().ok().filter(|x| x.is_finite()).ok_or_else(bad);
    match parts.as_slice() {
        [x] => Ok(vec![num(x)?]),
        [a, b, h] => {
            let (a, b, h) = (num(a)?, num(b)?, num(h)?);
            if !(h > 0.0) || b < a {
                return Err(bad());
            }
            let n = ((b - a) / h + 1e-9).floor();
            if n > 1e7 {
                return Err(UsageError(format!("grid {spec:?} has more than 10^7 points")));
            }
            Ok((0..=n as usize).map(|k| a + k as f64 * h).collect())
        }
        _ => Err(bad()),
    }
}

fn parse_complex(spec: &str) -> Result<Complex64, UsageError> {
    let bad = || UsageError(format!("malformed complex number {spec:?}: expected re,im"));
    let (re, im) = spec.split_once(',').ok_or_else(bad)?;
    let re: f64 = re.trim().parse().map_err(|_| bad())?;
    let im: f64 = im.trim().parse().map_err(|_| bad())?;
    Ok(Complex64::new(re, im))
}

pub struct Table {
    pub target: &'static str,
    pub params: Params,
    pub axes: Vec<&'static str>,
    pub values: Vec<&'static str>,
    pub rows: Vec<Vec<f64>>,
}

#[derive(Serialize)]
struct JsonTable<'a> {
    meta: JsonMeta<'a>,
    records: Vec<Params>,
}

#[derive(Serialize)]
struct JsonMeta<'a> {
    tool: &'static str,
    version: &'static str,
    target: &'a str,
    config: Params,
    parameters: &'a Params,
    rows: usize,
}

impl Table {
    pub fn render(&self, format: Format, cfg: &RunConfig) -> String {
        let columns: Vec<&str> = self.axes.iter().chain(&self.values).copied().collect();
        match format {
            Format::Csv => {
                let mut s = columns.join(",");
                s.push('\n');
                for r in &self.rows {
                    s.push_str(&r.iter().map(|&x| csv_number(x)).collect::<Vec<_>>().join(","));
                    s.push('\n');
                }
                s
            }
            Format::Json => {
                let mut config = Params::default();
                for (k, v) in cfg.echo() {
                    config = config.with(k, v.as_str());
                }
                let records = self
                    .rows
                    .iter()
                    .map(|r| Params(columns.iter().zip(r).map(|(c, &x)| (c.to_string(), x.into())).collect()))
                    .collect();
                let t = JsonTable {
                    meta: JsonMeta {
                        tool: "msf",
                        version: env!("CARGO_PKG_VERSION"),
                        target: self.target,
                        config,
                        parameters: &self.params,
                        rows: self.rows.len(),
                    },
                    records,
                };
                let mut s = serde_json::to_string_pretty(&t).expect("table serializes");
                s.push('\n');
                s
            }
        }
    }
}

pub enum TabError {
    Usage(UsageError),
    Compute(msf_core::MsfError),
}

impl From<UsageError> for TabError {
    fn from(e: UsageError) -> Self {
        TabError::Usage(e)
    }
}

impl From<msf_core::MsfError> for TabError {
    fn from(e: msf_core::MsfError) -> Self {
        TabError::Compute(e)
    }
}

fn need<T>(v: Option<T>, flag: &str, target: Target) -> Result<T, UsageError> {
    v.ok_or_else(|| UsageError(format!("target {} needs --{flag}", target.name())))
}

/// Evaluates `f` over the cartesian product of two axes, first axis outermost.
fn grid2<F>(xs: &[f64], ys: &[f64], f: F) -> msf_core::Result<Vec<Vec<f64>>>
where
    F: Fn(f64, f64) -> msf_core::Result<Vec<f64>> + Sync,
{
    let pts: Vec<(f64, f64)> = xs.iter().flat_map(|&x| ys.iter().map(move |&y| (x, y))).collect();
    pts.par_iter()
        .map(|&(x, y)| {
            let mut row = vec![x, y];
            row.extend(f(x, y)?);
            Ok(row)
        })
        .collect()
}

fn nonneg(grid: &[f64], name: &str) -> Result<(), UsageError> {
    if grid.iter().any(|&x| x < 0.0) {
        return Err(UsageError(format!("--{name} must be non-negative")));
    }
    Ok(())
}

pub fn tabulate(target: Target, a: &TabArgs, cfg: &RunConfig) -> Result<Table, TabError> {
    let f: FieldConfig = cfg.field()?;
    let mut params = Params::default();
    let (axes, values, rows) = match target {
        Target::State => {
            let l = need(a.l, "l", target)?;
            let m = need(a.m, "m", target)?;
            let (th, rho) = (parse_grid(&a.theta)?, parse_grid(&a.rho)?);
            nonneg(&rho, "rho")?;
            let q = resolve_qnums(Branch::of(l), l, m, &f)?;
            params = params.with("l", l).with("m", m);
            let rows = grid2(&th, &rho, |t, r| {
                let v = stationary_state(&q, t, r, &f)?;
                Ok(vec![v.re, v.im])
            })?;
            (vec!["theta", "rho"], vec!["re", "im"], rows)
        }
        Target::CsDensity => {
            let j = Branch::from_index(need(a.j, "j", target)?).map_err(|e| UsageError(e.to_string()))?;
            let label = CSLabel::new(parse_complex(&a.z1)?, parse_complex(&a.z2)?)?;
            let (th, rho) = (parse_grid(&a.theta)?, parse_grid(&a.rho)?);
            nonneg(&rho, "rho")?;
            let cs = CSExpansion::new(j, &label, f.mu, cfg.series()?)?;
            params = params.with("j", j.index() as i64).with("z1", a.z1.as_str()).with("z2", a.z2.as_str());
            let rows = grid2(&th, &rho, |t, r| {
                let v = cs.eval(t, r, &f)?;
                Ok(vec![v.re, v.im, v.norm_sqr()])
            })?;
            (vec!["theta", "rho"], vec!["re", "im", "density"], rows)
        }
        Target::Weight => {
            let (u, v) = (parse_grid(&a.u)?, parse_grid(&a.v)?);
            nonneg(&u, "u")?;
            nonneg(&v, "v")?;
            let rows = grid2(&u, &v, |u, v| {
                Ok(vec![
                    weight_fn(WeightSpec { j: Branch::J0, mu: f.mu }, u, v)?,
                    weight_fn(WeightSpec { j: Branch::J1, mu: f.mu }, u, v)?,
                ])
            })?;
            (vec!["u", "v"], vec!["w0", "w1"], rows)
        }
        Target::Kernel => {
            let l = need(a.l, "l", target)?;
            let tau = need(a.tau, "tau", target)?;
            let (rho, rhop) = (parse_grid(&a.rho)?, parse_grid(&a.rhop)?);
            nonneg(&rho, "rho")?;
            nonneg(&rhop, "rhop")?;
            let k = KernelParams::wick(l, tau, f)?;
            params = params.with("l", l).with("tau", tau).with("dtheta", a.dtheta);
            let rows = grid2(&rho, &rhop, |r, rp| {
                let v = propagator_closed(&k, a.dtheta, r, rp)?;
                Ok(vec![v.re, v.im])
            })?;
            (vec!["rho", "rho_p"], vec!["re", "im"], rows)
        }
        Target::Spectrum => {
            if a.lmax < 0 {
                return Err(UsageError("--lmax must be non-negative".into()).into());
            }
            let f0 = FieldConfig { mu: 0.0, ..f };
            params = params.with("lmax", a.lmax).with("mmax", a.mmax);
            let mut rows = Vec::new();
            for l in -a.lmax..=a.lmax {
                for m in 0..=a.mmax {
                    let j = Branch::of(l);
                    let q = resolve_qnums(j, l, m, &f)?;
                    let q0 = resolve_qnums(j, l, m, &f0)?;
                    rows.push(vec![
                        l as f64,
                        m as f64,
                        j.index() as f64,
                        q.n1,
                        q.n2,
                        energy_nonrel(&q, &f),
                        energy_nonrel(&q0, &f0),
                    ]);
                }
            }
            (vec!["l", "m"], vec!["j", "n1", "n2", "energy", "energy_mu0"], rows)
        }
    };
    Ok(Table { target: target.name(), params, axes, values, rows })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grids() {
        assert_eq!(parse_grid("0:1:0.5").unwrap(), vec![0.0, 0.5, 1.0]);
        assert_eq!(parse_grid("2.5").unwrap(), vec![2.5]);
        assert_eq!(parse_grid("0:4:0.5").unwrap().len(), 9);
        for bad in ["", "1:2", "0:1:0", "1:0:0.1", "a:1:0.1", "0:1:-1", "0:1:0.1:2", "nan"] {
            assert!(parse_grid(bad).is_err(), "{bad}");
        }
    }

    #[test]
    fn complex_labels() {
        assert_eq!(parse_complex("0.5,-1").unwrap(), Complex64::new(0.5, -1.0));
        assert!(parse_complex("0.5").is_err());
    }
}
