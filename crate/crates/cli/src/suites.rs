//! The verification suites. Each maps to identities of one library module and
//! returns one record per check; `all` runs every suite.

use std::f64::consts::PI;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use msf_core::completeness::{
    delta_limit_error, g_closed, g_matrix, moment_check, propagator_closed, propagator_series, unity_reconstruction,
    weight_fn, weight_half_closed, KernelParams, WeightSpec,
};
use msf_core::cs::{cs_normalization, mm_superpose, CSLabel};
use msf_core::dirac::cs::{rel_cs, RelCsForm};
use msf_core::dirac::embed::{embed_3p1, energy_3p1, h4_residual, lower_fraction, spin_residual};
use msf_core::dirac::kernel::{green_kernel_rel, kernel_delta_limit_error};
use msf_core::dirac::{
    dirac_spinor, hamiltonian_residual, rel_energy, resolve_rel, sigma_p_squared_check, Charge, DiracConfig,
    RelQuantumNumbers,
};
use msf_core::landau::{gram_matrix, resolve_qnums, Branch, FieldConfig};
use msf_core::quadrature::RuleCache;
use msf_core::radial::inner_product_components;
use msf_core::specfun::SeriesControl;

use crate::config::RunConfig;
use crate::report::{CheckRecord, Params};

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Suite {
    Orthonormality,
    CsNormalization,
    Weights,
    Moments,
    GMatrix,
    Unity,
    Propagator,
    MmLimit,
    Dirac,
    RelCs,
    #[value(name = "embed-3p1")]
    Embed3p1,
    KernelRel,
    All,
}

impl Suite {
    pub fn name(self) -> &'static str {
        match self {
            Suite::Orthonormality => "orthonormality",
            Suite::CsNormalization => "cs-normalization",
            Suite::Weights => "weights",
            Suite::Moments => "moments",
            Suite::GMatrix => "g-matrix",
            Suite::Unity => "unity",
            Suite::Propagator => "propagator",
            Suite::MmLimit => "mm-limit",
            Suite::Dirac => "dirac",
            Suite::RelCs => "rel-cs",
            Suite::Embed3p1 => "embed-3p1",
            Suite::KernelRel => "kernel-rel",
            Suite::All => "all",
        }
    }

    const EACH: [Suite; 12] = [
        Suite::Orthonormality,
        Suite::CsNormalization,
        Suite::Weights,
        Suite::Moments,
        Suite::GMatrix,
        Suite::Unity,
        Suite::Propagator,
        Suite::MmLimit,
        Suite::Dirac,
        Suite::RelCs,
        Suite::Embed3p1,
        Suite::KernelRel,
    ];
}

/// Node count of the tensor rules behind the G-matrix and unity checks; their
/// integrands are polynomial against the rule weight, so 40 nodes are exact.
const TENSOR_NODES: usize = 40;

fn check<F>(cfg: &RunConfig, name: &str, params: Params, own_tol: f64, f: F) -> CheckRecord
where
    F: FnOnce() -> msf_core::Result<f64>,
{
    let tol = cfg.tolerance(own_tol);
    match f() {
        Ok(e) => CheckRecord::new(name, params, e, tol),
        Err(e) => CheckRecord::errored(name, params, tol, e),
    }
}

pub fn verify_suite(cfg: &RunConfig, suite: Suite) -> Vec<CheckRecord> {
    match suite {
        Suite::All => Suite::EACH
            .iter()
            .flat_map(|&s| {
                verify_suite(cfg, s).into_iter().map(move |mut r| {
                    r.name = format!("{}/{}", s.name(), r.name);
                    r
                })
            })
            .collect(),
        Suite::Orthonormality => orthonormality(cfg),
        Suite::CsNormalization => cs_normalization_suite(cfg),
        Suite::Weights => weights(cfg),
        Suite::Moments => moments(cfg),
        Suite::GMatrix => g_matrix_suite(cfg),
        Suite::Unity => unity(cfg),
        Suite::Propagator => propagator(cfg),
        Suite::MmLimit => mm_limit(cfg),
        Suite::Dirac => dirac(cfg),
        Suite::RelCs => rel_cs_suite(cfg),
        Suite::Embed3p1 => embed(cfg),
        Suite::KernelRel => kernel_rel(cfg),
    }
}

fn field(cfg: &RunConfig) -> FieldConfig {
    cfg.field().expect("validated config")
}

fn series(cfg: &RunConfig) -> SeriesControl {
    cfg.series().expect("validated config")
}

fn orthonormality(cfg: &RunConfig) -> Vec<CheckRecord> {
    let f = field(cfg);
    let cache = RuleCache::new(cfg.nodes);
    let ls: Vec<i64> = (-10..=10).collect();
    ls.par_iter()
        .map(|&l| {
            check(cfg, "gram-identity", Params::default().with("l", l).with("m_max", 10usize), 1e-10, || {
                let states: Vec<_> =
                    (0..=10).map(|m| resolve_qnums(Branch::of(l), l, m, &f)).collect::<msf_core::Result<_>>()?;
                let g = gram_matrix(&states, &f, &cache)?;
                let mut worst = 0.0f64;
                for (a, row) in g.iter().enumerate() {
                    for (b, v) in row.iter().enumerate() {
                        let want = if a == b { 1.0 } else { 0.0 };
                        worst = worst.max((v - want).norm());
                    }
                }
                Ok(worst)
            })
        })
        .collect()
}

fn cs_normalization_suite(cfg: &RunConfig) -> Vec<CheckRecord> {
    let ctl = series(cfg);
    let mu = cfg.mu;
    let grid: Vec<(f64, f64)> = (0..=9).flat_map(|u| (0..=9).map(move |v| (u as f64, v as f64))).collect();
    grid.par_iter()
        .map(|&(u, v)| {
            let p = Params::default().with("mu", mu).with("u", u).with("v", v);
            check(cfg, "n0-plus-n1-vs-exp", p, 1e-10, || {
                let n = cs_normalization(Branch::J0, u, v, mu, ctl)? + cs_normalization(Branch::J1, u, v, mu, ctl)?;
                let e = (u + v).exp();
                Ok((n - e).abs() / e)
            })
        })
        .collect()
}

fn weights(cfg: &RunConfig) -> Vec<CheckRecord> {
    let grid: Vec<(f64, f64)> = (0..=9).flat_map(|u| (0..=9).map(move |v| (u as f64, v as f64))).collect();
    let mut out: Vec<CheckRecord> = grid
        .par_iter()
        .flat_map_iter(|&(u, v)| {
            [Branch::J0, Branch::J1].map(|j| {
                let p = Params::default().with("j", j.index() as i64).with("u", u).with("v", v);
                check(cfg, "erf-vs-series", p, 1e-12, || {
                    let s = weight_fn(WeightSpec { j, mu: 0.5 }, u, v)?;
                    let c = weight_half_closed(j, u, v)?;
                    Ok((s - c).abs())
                })
            })
        })
        .collect();
    out.extend(
        grid.par_iter()
            .map(|&(u, v)| {
                check(cfg, "zero-flux-sum", Params::default().with("u", u).with("v", v), 1e-10, || {
                    let w = weight_fn(WeightSpec { j: Branch::J0, mu: 0.0 }, u, v)?
                        + weight_fn(WeightSpec { j: Branch::J1, mu: 0.0 }, u, v)?;
                    Ok((w * PI * PI - 1.0).abs())
                })
            })
            .collect::<Vec<_>>(),
    );
    out
}

fn moments(cfg: &RunConfig) -> Vec<CheckRecord> {
    (1..=50)
        .map(|k| {
            let n = -0.9 + 12.9 * k as f64 / 50.0;
            check(cfg, "gamma-moment", Params::default().with("n", n), 1e-10, || {
                let (_, g, err) = moment_check(n)?;
                Ok(err / g)
            })
        })
        .collect()
}

fn branch_ls(j: Branch, reach: i64) -> Vec<i64> {
    match j {
        Branch::J0 => (-reach..=-1).collect(),
        Branch::J1 => (0..=reach).collect(),
    }
}

fn g_matrix_suite(cfg: &RunConfig) -> Vec<CheckRecord> {
    let cache = RuleCache::new(TENSOR_NODES);
    let mu = cfg.mu;
    let mut cases = Vec::new();
    for j in [Branch::J0, Branch::J1] {
        for l in branch_ls(j, 4) {
            for m in 0..=6usize {
                cases.push((j, l, m));
            }
        }
    }
    let mut out: Vec<CheckRecord> = cases
        .par_iter()
        .map(|&(j, l, m)| {
            let p = Params::default().with("mu", mu).with("l", l).with("m", m);
            check(cfg, "diagonal-vs-gamma", p, 1e-9, || {
                let g = g_matrix(m, m, l, l, mu, j, &cache)?;
                let c = g_closed(m, l, mu, j)?;
                Ok((g - c).abs() / c)
            })
        })
        .collect();
    for &(j, l, m) in &cases {
        let p = Params::default().with("l", l).with("m", m);
        out.push(check(cfg, "off-diagonal-zero", p, 0.0, || {
            let k = if j == Branch::J0 { l - 1 } else { l + 1 };
            Ok(g_matrix(m, m + 1, l, l, mu, j, &cache)?.abs().max(g_matrix(m, m, l, k, mu, j, &cache)?.abs()))
        }));
    }
    out
}

fn unity(cfg: &RunConfig) -> Vec<CheckRecord> {
    let cache = RuleCache::new(TENSOR_NODES);
    let mu = cfg.mu;
    [Branch::J0, Branch::J1]
        .par_iter()
        .map(|&j| {
            let p = Params::default().with("mu", mu).with("j", j.index() as i64).with("reach", 4usize);
            check(cfg, "reconstructed-gram", p, 1e-6, || {
                let f = FieldConfig::new(1.0, 0, mu)?;
                let mut basis = Vec::new();
                for l in branch_ls(j, 4) {
                    for m in 0..=4 {
                        basis.push(resolve_qnums(j, l, m, &f)?);
                    }
                }
                let g = unity_reconstruction(&basis, mu, j, &cache, 2)?;
                let mut worst = 0.0f64;
                for (a, row) in g.iter().enumerate() {
                    for (b, v) in row.iter().enumerate() {
                        worst = worst.max((v - if a == b { 1.0 } else { 0.0 }).abs());
                    }
                }
                Ok(worst)
            })
        })
        .collect()
}

fn gaussian_bump(x: f64) -> f64 {
    (-(x - 2.0) * (x - 2.0)).exp()
}

/// Largest ratio of consecutive errors; below 1 means strictly decreasing.
fn worst_ratio(errs: &[f64]) -> f64 {
    errs.windows(2).map(|w| w[1] / w[0]).fold(0.0, f64::max)
}

fn propagator(cfg: &RunConfig) -> Vec<CheckRecord> {
    let f = field(cfg);
    let ctl = series(cfg);
    let mut cases = Vec::new();
    for l in -2..=2 {
        for tau in [0.05, 0.1, 0.2, 0.5, 1.0] {
            for (r, rp) in [(0.5, 1.2), (2.0, 1.5)] {
                cases.push((l, tau, r, rp));
            }
        }
    }
    let mut out: Vec<CheckRecord> = cases
        .par_iter()
        .map(|&(l, tau, r, rp)| {
            let p = Params::default().with("l", l).with("tau", tau).with("rho", r).with("rho_p", rp);
            check(cfg, "series-vs-closed", p, 1e-8, || {
                let k = KernelParams::wick(l, tau, f)?;
                let a = propagator_closed(&k, 0.3, r, rp)?;
                let b = propagator_series(&k, 0.3, r, rp, ctl)?;
                Ok((a - b).norm() / b.norm())
            })
        })
        .collect();
    let taus = [0.2, 0.1, 0.05, 0.02];
    out.extend(
        (-1..=1)
            .collect::<Vec<i64>>()
            .par_iter()
            .map(|&l| {
                check(cfg, "delta-limit-monotone", Params::default().with("l", l), 1.0, || {
                    let errs = taus
                        .iter()
                        .map(|&t| delta_limit_error(l, t, &f, 0.0, 2.0, gaussian_bump, 12.0))
                        .collect::<msf_core::Result<Vec<_>>>()?;
                    Ok(worst_ratio(&errs))
                })
            })
            .collect::<Vec<_>>(),
    );
    out
}

/// The zero-flux superposition is the Gaussian √(γ/2π) exp(z₁z₂ − ρ/2 − √ρe^{iθ}z₁ + √ρe^{−iθ}z₂).
fn mm_limit(cfg: &RunConfig) -> Vec<CheckRecord> {
    let ctl = series(cfg);
    let f = FieldConfig { mu: 0.0, l0: 0, gamma: cfg.gamma };
    let mut rng = ChaCha8Rng::seed_from_u64(20_240_601);
    let mut polar = |r: f64| Complex64::from_polar(rng.gen_range(0.0..r), rng.gen_range(-PI..PI));
    let samples: Vec<(Complex64, Complex64)> = (0..20).map(|_| (polar(1.5), polar(1.5))).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let points: Vec<(f64, f64)> = (0..20).map(|_| (rng.gen_range(0.0..2.0 * PI), rng.gen_range(0.0..6.0))).collect();
    samples
        .iter()
        .zip(&points)
        .map(|(&(z1, z2), &(theta, rho))| {
            let p = Params::default()
                .with("theta", theta)
                .with("rho", rho)
                .with("abs_z1", z1.norm())
                .with("abs_z2", z2.norm());
            check(cfg, "superposition-vs-gaussian", p, 1e-10, || {
                let lab = CSLabel::new(z1, z2)?;
                let a = mm_superpose(&lab, theta, rho, &f, ctl)?;
                let e = Complex64::new(0.0, theta).exp();
                let sr = rho.sqrt();
                let b = (z1 * z2 - rho / 2.0 - e * z1 * sr + e.conj() * z2 * sr).exp() * (f.gamma / (2.0 * PI)).sqrt();
                Ok((a - b).norm() / b.norm())
            })
        })
        .collect()
}

fn dirac_config(cfg: &RunConfig, vartheta: i8) -> msf_core::Result<DiracConfig> {
    DiracConfig::new(field(cfg), cfg.mass, vartheta)
}

// l ∈ [−2, 2] around l₀, m ∈ {0, 1}, both charges with σ = charge; combinations outside
// the Laguerre domain (μ = 0 with ϑ = −1 at l = 0) are left out
fn dirac_sample(dc: &DiracConfig) -> Vec<(RelQuantumNumbers, Charge)> {
    let mut out = Vec::new();
    for l in -2..=2 {
        for m in 0..2 {
            for ch in [Charge::Particle, Charge::Antiparticle] {
                if let Ok(q) = resolve_rel(dc.branch_of(l), l, m, ch.spin_up(), dc) {
                    out.push((q, ch));
                }
            }
        }
    }
    out
}

fn dirac(cfg: &RunConfig) -> Vec<CheckRecord> {
    let cache = RuleCache::new(cfg.nodes);
    let mut out = Vec::new();
    for vt in [1i8, -1] {
        let p = || Params::default().with("mu", cfg.mu).with("vartheta", vt as i64).with("mass", cfg.mass);
        let built = dirac_config(cfg, vt).and_then(|dc| {
            let built = dirac_sample(&dc)
                .into_par_iter()
                .filter_map(|(q, ch)| match dirac_spinor(&q, &dc, ch, &cache) {
                    Ok(s) => Some(Ok(((q, ch), s))),
                    // massless zero modes have no spinor
                    Err(msf_core::MsfError::ZeroNorm(_)) if dc.mass == 0.0 => None,
                    Err(e) => Some(Err(e)),
                })
                .collect::<msf_core::Result<Vec<_>>>()?;
            let (states, spinors): (Vec<_>, Vec<_>) = built.into_iter().unzip();
            Ok((dc, states, spinors))
        });
        let (dc, states, spinors) = match built {
            Ok(b) => b,
            Err(e) => {
                out.push(CheckRecord::errored("spinor-construction", p(), 0.0, e));
                continue;
            }
        };
        out.push(check(cfg, "spinor-orthonormality", p().with("states", states.len()), 1e-8, || {
            let rows = spinors
                .par_iter()
                .enumerate()
                .map(|(i, a)| {
                    let mut w = 0.0f64;
                    for (k, b) in spinors.iter().enumerate() {
                        let g = a.inner_d(b, &dc.cfg, &cache)?;
                        w = w.max((g - if i == k { 1.0 } else { 0.0 }).norm());
                    }
                    Ok(w)
                })
                .collect::<msf_core::Result<Vec<f64>>>()?;
            Ok(rows.into_iter().fold(0.0, f64::max))
        }));
        out.push(check(cfg, "hamiltonian-residual", p(), 1e-5, || {
            let r = states
                .par_iter()
                .zip(&spinors)
                .map(|((q, ch), s)| hamiltonian_residual(s, ch.sign() * rel_energy(q, &dc), &dc, &cache))
                .collect::<msf_core::Result<Vec<f64>>>()?;
            Ok(r.into_iter().fold(0.0, f64::max))
        }));
        out.push(check(cfg, "sigma-p-squared", p(), 1e-6, || {
            let mut worst = 0.0f64;
            for l in -2..=2 {
                for sigma in [1i8, -1] {
                    for m in [0usize, 3] {
                        let Ok(q) = resolve_rel(dc.branch_of(l), l, m, sigma, &dc) else {
                            continue;
                        };
                        let (ray, res) = sigma_p_squared_check(&q, &dc, &cache)?;
                        let e2 = q.e_perp2(&dc.cfg);
                        worst = worst.max((ray - e2).abs() / e2.max(1.0)).max(res);
                    }
                }
            }
            Ok(worst)
        }));
    }
    out
}

fn rel_cs_suite(cfg: &RunConfig) -> Vec<CheckRecord> {
    let cache = RuleCache::new(cfg.nodes);
    let ctl = series(cfg);
    let a = CSLabel { z1: Complex64::new(0.5, 0.3), z2: Complex64::new(0.4, -0.2) };
    let b = CSLabel { z1: Complex64::new(-0.2, 0.4), z2: Complex64::new(0.6, 0.1) };
    let mut cases = Vec::new();
    for form in [RelCsForm::Series, RelCsForm::Operator] {
        for ch in [Charge::Particle, Charge::Antiparticle] {
            for j in [Branch::J0, Branch::J1] {
                cases.push((form, ch, j));
            }
        }
    }
    cases
        .par_iter()
        .flat_map_iter(|&(form, ch, j)| {
            let p = Params::default()
                .with("mu", cfg.mu)
                .with("vartheta", cfg.vartheta as i64)
                .with("form", if form == RelCsForm::Series { "series" } else { "operator" })
                .with("charge", if ch == Charge::Particle { "+" } else { "-" })
                .with("j", j.index() as i64);
            let built = dirac_config(cfg, cfg.vartheta).and_then(|dc| {
                Ok((rel_cs(j, &a, &dc, ch, ctl, &cache, form)?, rel_cs(j, &b, &dc, ch, ctl, &cache, form)?))
            });
            match built {
                Err(e) => vec![CheckRecord::errored("construction", p, 0.0, e)],
                Ok((sa, sb)) => vec![
                    check(cfg, "unit-norm", p.clone(), 1e-7, || Ok((sa.norm_by_quadrature(&cache)? - 1.0).abs())),
                    check(cfg, "overlap-dual-evaluation", p, 1e-7, || {
                        Ok((sa.overlap_quadrature(&sb, &cache)? - sa.overlap_closed(&sb)?).norm())
                    }),
                ],
            }
        })
        .collect()
}

/// Least-squares slope of log₁₀ y against log₁₀ x.
fn log_slope(xs: &[f64], ys: &[f64]) -> f64 {
    let lx: Vec<f64> = xs.iter().map(|x| x.log10()).collect();
    let ly: Vec<f64> = ys.iter().map(|y| y.log10()).collect();
    let n = lx.len() as f64;
    let (mx, my) = (lx.iter().sum::<f64>() / n, ly.iter().sum::<f64>() / n);
    let sxy: f64 = lx.iter().zip(&ly).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = lx.iter().map(|x| (x - mx) * (x - mx)).sum();
    sxy / sxx
}

fn embed(cfg: &RunConfig) -> Vec<CheckRecord> {
    let cache = RuleCache::new(cfg.nodes);
    let mut out = Vec::new();
    let dc = match dirac_config(cfg, cfg.vartheta) {
        Ok(d) => d,
        Err(e) => return vec![CheckRecord::errored("configuration", Params::default(), 0.0, e)],
    };
    let p3 = 0.7;
    for (l, m) in [(-1i64, 0usize), (1, 1)] {
        for ch in [Charge::Particle, Charge::Antiparticle] {
            for s in [1i8, -1] {
                let p = Params::default()
                    .with("l", l)
                    .with("m", m)
                    .with("charge", if ch == Charge::Particle { "+" } else { "-" })
                    .with("s", s as i64)
                    .with("p3", p3);
                let built = resolve_rel(dc.branch_of(l), l, m, ch.spin_up(), &dc)
                    .and_then(|q| Ok((q, embed_3p1(&q, ch, s, p3, &dc, &cache)?)));
                match built {
                    // zero modes have no opposite-spin partner
                    Err(msf_core::MsfError::ZeroNorm(_)) => continue,
                    Err(e) => out.push(CheckRecord::errored("construction", p, 0.0, e)),
                    Ok((q, psi)) => {
                        out.push(check(cfg, "spin-z-residual", p.clone(), 1e-5, || {
                            spin_residual(&psi, s, p3, &dc, &cache)
                        }));
                        out.push(check(cfg, "hamiltonian-residual", p.clone(), 1e-5, || {
                            h4_residual(&psi, ch.sign() * energy_3p1(&q, &dc, p3), p3, &dc, &cache)
                        }));
                        out.push(check(cfg, "unit-norm", p, 1e-10, || Ok((psi.norm(&dc.cfg, &cache)? - 1.0).abs())));
                    }
                }
            }
        }
    }
    let masses = [10.0, 100.0, 1000.0];
    let l = -1;
    out.push(check(cfg, "lower-block-slope", Params::default().with("p3", 0.5), 0.05, || {
        let q = resolve_rel(dc.branch_of(l), l, 1, 1, &dc)?;
        let fr = masses
            .iter()
            .map(|&mm| {
                let d = dc.with_mass(mm)?;
                lower_fraction(&embed_3p1(&q, Charge::Particle, 1, 0.5, &d, &cache)?, &d.cfg, &cache)
            })
            .collect::<msf_core::Result<Vec<_>>>()?;
        Ok((log_slope(&masses, &fr) + 1.0).abs())
    }));
    out.push(check(cfg, "small-component-slope", Params::default().with("p3", 0.0), 0.05, || {
        let q = resolve_rel(dc.branch_of(l), l, 1, 1, &dc)?;
        let fr = masses
            .iter()
            .map(|&mm| {
                let d = dc.with_mass(mm)?;
                let psi = dirac_spinor(&q, &d, Charge::Particle, &cache)?;
                Ok(inner_product_components(&psi.lower, &psi.lower, &d.cfg, &cache)?.re.sqrt())
            })
            .collect::<msf_core::Result<Vec<_>>>()?;
        Ok((log_slope(&masses, &fr) + 1.0).abs())
    }));
    out
}

fn kernel_rel(cfg: &RunConfig) -> Vec<CheckRecord> {
    let mut out = Vec::new();
    let dc = match dirac_config(cfg, cfg.vartheta) {
        Ok(d) => d,
        Err(e) => return vec![CheckRecord::errored("configuration", Params::default(), 0.0, e)],
    };
    let s = Complex64::new(0.3, -0.4);
    for sigma in [1i8, -1] {
        for l in -2..=2 {
            let p = Params::default().with("sigma", sigma as i64).with("l", l);
            out.push(check(cfg, "projector-structure", p, 0.0, || {
                let k = green_kernel_rel(sigma, l, &dc, s, 0.2, 0.1, 1.0, 1.5)?;
                let on = if sigma > 0 { k[0][0] } else { k[1][1] };
                let off = if sigma > 0 { k[1][1] } else { k[0][0] };
                if on.norm() == 0.0 {
                    return Ok(1.0);
                }
                Ok(off.norm().max(k[0][1].norm()).max(k[1][0].norm()))
            }));
        }
    }
    let taus = [0.2, 0.1, 0.05, 0.02];
    for (sigma, l) in [(1i8, -1i64), (-1, 0), (1, 0), (1, 2)] {
        let p = Params::default().with("sigma", sigma as i64).with("l", l);
        out.push(check(cfg, "delta-limit-monotone", p, 1.0, || {
            let errs = taus
                .iter()
                .map(|&t| kernel_delta_limit_error(sigma, l, &dc, t, 0.0, 2.0, gaussian_bump, 12.0))
                .collect::<msf_core::Result<Vec<_>>>()?;
            Ok(worst_ratio(&errs))
        }));
    }
    out
}
