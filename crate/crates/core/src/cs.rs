//! Coherent states Φ^{(j)}_{z₁,z₂} built from the stationary states with
//! amplitudes z₁^{n₁} z₂^{n₂} / √(Γ(1+n₁)Γ(1+n₂)).
//!
//! Non-integer powers use the principal logarithm, z^n = exp(n Log z) with
//! arg z ∈ (−π, π]; conjugated amplitudes are conj(z^n), so overlaps built from
//! the closed form carry exactly the same phase as coefficient contractions.
//!
//! A label component that vanishes on a branch where its smallest exponent is
//! positive (z₂ = 0 on j=0; z₁ = 0 on j=1 with μ > 0) leaves every amplitude zero.
//! The state is then defined as the limit |z| → 0 along the positive axis,
//! which keeps only the terms of minimal exponent in that variable.

use num_complex::Complex64;
use std::f64::consts::PI;

use crate::error::{domain, MsfError, Result};
use crate::landau::{resolve_qnums, Branch, FieldConfig, QuantumNumbers};
use crate::quadrature::RuleCache;
use crate::radial::{inner_product_components, Component, RadialFn};
use crate::specfun::{laguerre_fn_table, ln_gamma, q_sum, q_sum_complex, SeriesControl};

/// Number of consecutive negligible l-blocks that ends the l-sum. A block is
/// negligible when its amplitude is below rel_tol relative to the state.
const QUIET_BLOCKS: usize = 3;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CSLabel {
    pub z1: Complex64,
    pub z2: Complex64,
}

impl CSLabel {
    pub fn new(z1: Complex64, z2: Complex64) -> Result<Self> {
        let finite = |z: Complex64| z.re.is_finite() && z.im.is_finite();
        if !finite(z1) || !finite(z2) {
            return domain(format!("coherent-state label must be finite, got ({z1}, {z2})"));
        }
        Ok(Self { z1, z2 })
    }

    /// u = |z₁|².
    pub fn u(&self) -> f64 {
        self.z1.norm_sqr()
    }

    /// v = |z₂|².
    pub fn v(&self) -> f64 {
        self.z2.norm_sqr()
    }
}

/// True when the label sits on the z → 0 limit of branch j.
pub fn is_zero_limit(j: Branch, label: &CSLabel, mu: f64) -> bool {
    is_zero_limit_with(label, branch_mins(j, mu))
}

/// A vanishing component whose smallest exponent is nonzero.
pub(crate) fn is_zero_limit_with(label: &CSLabel, mins: (f64, f64)) -> bool {
    let zero = Complex64::new(0.0, 0.0);
    (label.z1 == zero && mins.0 != 0.0) || (label.z2 == zero && mins.1 != 0.0)
}

fn ln_pow(z: Complex64, n: f64, n_min: f64, limit: bool) -> Option<Complex64> {
    if z == Complex64::new(0.0, 0.0) {
        if n == 0.0 || (limit && (n - n_min).abs() < 1e-12) {
            Some(Complex64::new(0.0, 0.0))
        } else {
            None
        }
    } else {
        Some(z.ln() * n)
    }
}

fn branch_mins(j: Branch, mu: f64) -> (f64, f64) {
    match j {
        Branch::J0 => (0.0, 1.0 - mu),
        Branch::J1 => (mu, 0.0),
    }
}

/// ln of z₁^{n₁} z₂^{n₂} / √(Γ(1+n₁)Γ(1+n₂)); `None` for an exactly vanishing amplitude.
pub(crate) fn ln_amplitude(
    n1: f64,
    n2: f64,
    label: &CSLabel,
    mins: (f64, f64),
    limit: bool,
) -> Result<Option<Complex64>> {
    let (Some(a), Some(b)) = (ln_pow(label.z1, n1, mins.0, limit), ln_pow(label.z2, n2, mins.1, limit)) else {
        return Ok(None);
    };
    let g = 0.5 * (ln_gamma(1.0 + n1)? + ln_gamma(1.0 + n2)?);
    Ok(Some(a + b - g))
}

fn ln_coefficient(q: &QuantumNumbers, label: &CSLabel, mu: f64, limit: bool) -> Result<Option<Complex64>> {
    ln_amplitude(q.n1, q.n2, label, branch_mins(q.j, mu), limit)
}

/// Amplitude z₁^{n₁} z₂^{n₂} / √(Γ(1+n₁)Γ(1+n₂)) of the stationary state q.
pub fn cs_coefficient(q: &QuantumNumbers, label: &CSLabel, mu: f64) -> Result<Complex64> {
    Ok(ln_coefficient(q, label, mu, false)?.map_or(Complex64::new(0.0, 0.0), |c| c.exp()))
}

/// One l-block of a coherent state: the inner m-sum.
#[derive(Debug, Clone)]
pub struct CSBlock {
    pub l: i64,
    pub coeffs: Vec<Complex64>,
    pub tail_bound: f64,
}

impl CSBlock {
    fn weight(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm_sqr()).sum()
    }
}

fn field_for(mu: f64) -> Result<FieldConfig> {
    FieldConfig::new(1.0, 0, mu)
}

/// The m-sum of one l-block for an arbitrary exponent lattice; `exps(m)` gives
/// (n₁, n₂), both rising by one per step in m.
pub(crate) fn lattice_block(
    l: i64,
    label: &CSLabel,
    ctl: SeriesControl,
    mins: (f64, f64),
    limit: bool,
    exps: &dyn Fn(usize) -> Result<(f64, f64)>,
) -> Result<CSBlock> {
    let mut coeffs = Vec::new();
    let mut sum = 0.0;
    let mut prev_ln = f64::NEG_INFINITY;
    for m in 0..ctl.max_terms {
        let (n1, n2) = exps(m)?;
        let Some(lc) = ln_amplitude(n1, n2, label, mins, limit)? else {
            if m == 0 {
                return Ok(CSBlock { l, coeffs: vec![Complex64::new(0.0, 0.0)], tail_bound: 0.0 });
            }
            // powers of a zero component: everything past here vanishes
            return Ok(CSBlock { l, coeffs, tail_bound: 0.0 });
        };
        let c = lc.exp();
        let ln_w = 2.0 * lc.re;
        coeffs.push(c);
        sum += c.norm_sqr();
        if m > 0 {
            // |c_{m+1}|²/|c_m|² = uv / ((n₁+1)(n₂+1)) decreases with m
            let r = label.u() * label.v() / ((n1 + 1.0) * (n2 + 1.0));
            if r < 1.0 && ln_w <= prev_ln {
                // amplitudes, not weights, set pointwise accuracy
                let tail = ln_w.exp() * r / (1.0 - r);
                if tail <= ctl.rel_tol * ctl.rel_tol * sum || sum == 0.0 {
                    return Ok(CSBlock { l, coeffs, tail_bound: tail });
                }
            }
        }
        prev_ln = ln_w;
    }
    Err(MsfError::Truncation { what: "coherent-state m-sum", terms: ctl.max_terms, tail: f64::NAN })
}

/// All l-blocks from `l_start` in steps of `step` until three consecutive blocks
/// are negligible; returns the blocks and Σ|coeff|².
pub(crate) fn lattice_blocks(
    l_start: i64,
    step: i64,
    label: &CSLabel,
    ctl: SeriesControl,
    mins: (f64, f64),
    limit: bool,
    exps: &dyn Fn(i64, usize) -> Result<(f64, f64)>,
) -> Result<(Vec<CSBlock>, f64)> {
    let mut l = l_start;
    let mut blocks = Vec::new();
    let mut total = 0.0;
    let mut quiet = 0;
    for _ in 0..ctl.max_terms {
        let b = lattice_block(l, label, ctl, mins, limit, &|m| exps(l, m))?;
        let w = b.weight();
        total += w;
        blocks.push(b);
        if w <= ctl.rel_tol * ctl.rel_tol * total {
            quiet += 1;
            if quiet >= QUIET_BLOCKS {
                return Ok((blocks, total));
            }
        } else {
            quiet = 0;
        }
        l += step;
    }
    Err(MsfError::Truncation { what: "coherent-state l-sum", terms: ctl.max_terms, tail: f64::NAN })
}

fn branch_block(j: Branch, l: i64, label: &CSLabel, mu: f64, ctl: SeriesControl, limit: bool) -> Result<CSBlock> {
    let cfg = field_for(mu)?;
    lattice_block(l, label, ctl, branch_mins(j, mu), limit, &|m| {
        let q = resolve_qnums(j, l, m, &cfg)?;
        Ok((q.n1, q.n2))
    })
}

/// The inner m-sum Φ^{(j),l}: coefficients through the truncation point.
pub fn cs_branch(j: Branch, l: i64, label: &CSLabel, mu: f64, ctl: SeriesControl) -> Result<CSBlock> {
    if Branch::of(l) != j {
        return domain(format!("l = {l} is outside the range of branch j = {j}"));
    }
    branch_block(j, l, label, mu, ctl, is_zero_limit(j, label, mu))
}

/// A truncated coherent state on one branch.
#[derive(Debug, Clone)]
pub struct CSExpansion {
    pub j: Branch,
    pub label: CSLabel,
    pub mu: f64,
    pub blocks: Vec<CSBlock>,
    pub ctl: SeriesControl,
    /// Σ|coeff|², which is N_j away from the zero limit.
    pub norm_const: f64,
    pub zero_limit: bool,
}

impl CSExpansion {
    pub fn new(j: Branch, label: &CSLabel, mu: f64, ctl: SeriesControl) -> Result<Self> {
        Self::build(j, label, mu, ctl, is_zero_limit(j, label, mu))
    }

    /// The plain series without the zero-limit convention (a vanishing branch stays zero).
    pub fn raw(j: Branch, label: &CSLabel, mu: f64, ctl: SeriesControl) -> Result<Self> {
        if is_zero_limit(j, label, mu) {
            return Ok(Self { j, label: *label, mu, blocks: Vec::new(), ctl, norm_const: 0.0, zero_limit: false });
        }
        Self::build(j, label, mu, ctl, false)
    }

    fn build(j: Branch, label: &CSLabel, mu: f64, ctl: SeriesControl, limit: bool) -> Result<Self> {
        let cfg = field_for(mu)?;
        let (start, step) = if j == Branch::J0 { (-1, -1) } else { (0, 1) };
        let (blocks, total) = lattice_blocks(start, step, label, ctl, branch_mins(j, mu), limit, &|l, m| {
            let q = resolve_qnums(j, l, m, &cfg)?;
            Ok((q.n1, q.n2))
        })?;
        Ok(Self { j, label: *label, mu, blocks, ctl, norm_const: total, zero_limit: limit })
    }

    pub fn coeff(&self, l: i64, m: usize) -> Complex64 {
        self.blocks.iter().find(|b| b.l == l).and_then(|b| b.coeffs.get(m).copied()).unwrap_or(Complex64::new(0.0, 0.0))
    }

    fn check_cfg(&self, cfg: &FieldConfig) -> Result<()> {
        if (cfg.mu - self.mu).abs() > 0.0 {
            return Err(MsfError::Usage(format!("expansion built for mu = {}, field has {}", self.mu, cfg.mu)));
        }
        Ok(())
    }

    /// Unnormalized Σ_l Σ_m c φ at a point.
    pub fn eval_raw(&self, theta: f64, rho: f64, cfg: &FieldConfig) -> Result<Complex64> {
        self.check_cfg(cfg)?;
        let mut acc = Complex64::new(0.0, 0.0);
        for b in &self.blocks {
            acc += block_component(self.j, b, cfg).eval(theta, rho);
        }
        Ok(acc)
    }

    /// Normalized Φ^{(j)}_{z₁,z₂}(θ, ρ).
    pub fn eval(&self, theta: f64, rho: f64, cfg: &FieldConfig) -> Result<Complex64> {
        if self.norm_const == 0.0 {
            return Err(MsfError::ZeroNorm("coherent state with vanishing series".into()));
        }
        Ok(self.eval_raw(theta, rho, cfg)? / self.norm_const.sqrt())
    }

    /// The l-blocks as radial components (unnormalized).
    pub fn components(&self, cfg: &FieldConfig) -> Result<Vec<Component>> {
        self.check_cfg(cfg)?;
        Ok(self.blocks.iter().map(|b| block_component(self.j, b, cfg)).collect())
    }

    /// (Φ, Φ)_⊥ by quadrature of every l-block, divided by the norm constant.
    pub fn norm_by_quadrature(&self, cfg: &FieldConfig, cache: &RuleCache) -> Result<f64> {
        let mut s = 0.0;
        for c in self.components(cfg)? {
            s += inner_product_components(&c, &c, cfg, cache)?.re;
        }
        Ok(s / self.norm_const)
    }
}

fn block_component(j: Branch, b: &CSBlock, cfg: &FieldConfig) -> Component {
    let alpha = (b.l as f64 + cfg.mu).abs();
    let sign = if j == Branch::J1 && b.l % 2 != 0 { -1.0 } else { 1.0 };
    let nc = cfg.norm_const() * sign;
    let coeffs = b.coeffs.clone();
    let mmax = coeffs.len().saturating_sub(1);
    let profile = RadialFn::new(alpha / 2.0, move |rho| match laguerre_fn_table(alpha, mmax, rho) {
        Ok(t) => coeffs.iter().zip(&t).map(|(c, &f)| c * f).sum::<Complex64>() * nc,
        Err(_) => Complex64::new(f64::NAN, f64::NAN),
    });
    Component::new(b.l - cfg.l0, profile)
}

/// Normalized Φ^{(j)} at a point.
pub fn cs_state(
    j: Branch,
    label: &CSLabel,
    theta: f64,
    rho: f64,
    cfg: &FieldConfig,
    ctl: SeriesControl,
) -> Result<Complex64> {
    CSExpansion::new(j, label, cfg.mu, ctl)?.eval(theta, rho, cfg)
}

/// N₀ = Q_{1−μ}(√u, √v), N₁ = Q_μ(√v, √u).
pub fn cs_normalization(j: Branch, u: f64, v: f64, mu: f64, ctl: SeriesControl) -> Result<f64> {
    if !(u >= 0.0) || !(v >= 0.0) {
        return domain(format!("cs_normalization needs u, v >= 0, got ({u}, {v})"));
    }
    let q = match j {
        Branch::J0 => q_sum(1.0 - mu, u.sqrt(), v.sqrt(), ctl)?,
        Branch::J1 => q_sum(mu, v.sqrt(), u.sqrt(), ctl)?,
    };
    Ok(q.value)
}

// conj(Log a) + Log b, with −∞ real part when either vanishes
pub(crate) fn ln_conj_product(a: Complex64, b: Complex64) -> Complex64 {
    if a == Complex64::new(0.0, 0.0) || b == Complex64::new(0.0, 0.0) {
        Complex64::new(f64::NEG_INFINITY, 0.0)
    } else {
        a.ln().conj() + b.ln()
    }
}

/// R^{(j)}(a, b) = Σ conj(c_a) c_b, summed in closed form as a complex Q series.
pub fn cs_kernel(j: Branch, a: &CSLabel, b: &CSLabel, mu: f64, ctl: SeriesControl) -> Result<Complex64> {
    let p1 = a.z1.conj() * b.z1;
    let p2 = a.z2.conj() * b.z2;
    let q = match j {
        Branch::J0 => q_sum_complex(1.0 - mu, p1 * p2, ln_conj_product(a.z2, b.z2), ctl)?,
        Branch::J1 => q_sum_complex(mu, p1 * p2, ln_conj_product(a.z1, b.z1), ctl)?,
    };
    Ok(q.value)
}

/// (Φ^{(j)}_a, Φ^{(j)}_b)_⊥ = R^{(j)}/√(N_a N_b).
pub fn cs_overlap(j: Branch, a: &CSLabel, b: &CSLabel, mu: f64, ctl: SeriesControl) -> Result<Complex64> {
    if is_zero_limit(j, a, mu) || is_zero_limit(j, b, mu) {
        let ea = CSExpansion::new(j, a, mu, ctl)?;
        let eb = CSExpansion::new(j, b, mu, ctl)?;
        return contract_overlap(&ea, &eb);
    }
    let r = cs_kernel(j, a, b, mu, ctl)?;
    let na = cs_normalization(j, a.u(), a.v(), mu, ctl)?;
    let nb = cs_normalization(j, b.u(), b.v(), mu, ctl)?;
    Ok(r / (na * nb).sqrt())
}

/// Overlap by direct contraction of coefficients; zero across branches.
pub fn contract_overlap(a: &CSExpansion, b: &CSExpansion) -> Result<Complex64> {
    if a.j != b.j {
        return Ok(Complex64::new(0.0, 0.0));
    }
    if a.norm_const == 0.0 || b.norm_const == 0.0 {
        return Err(MsfError::ZeroNorm("overlap with a vanishing coherent state".into()));
    }
    let mut s = Complex64::new(0.0, 0.0);
    for ba in &a.blocks {
        if let Some(bb) = b.blocks.iter().find(|x| x.l == ba.l) {
            s += ba.coeffs.iter().zip(&bb.coeffs).map(|(x, y)| x.conj() * y).sum::<Complex64>();
        }
    }
    Ok(s / (a.norm_const * b.norm_const).sqrt())
}

/// The zero-flux superposition √N₀Φ^{(0)} + √N₁Φ^{(1)}, i.e. the sum of both
/// unnormalized series. Requires μ = 0 and l₀ = 0.
pub fn mm_superpose(label: &CSLabel, theta: f64, rho: f64, cfg: &FieldConfig, ctl: SeriesControl) -> Result<Complex64> {
    if cfg.mu != 0.0 || cfg.l0 != 0 {
        return domain(format!("mm_superpose needs mu = 0 and l0 = 0, got ({}, {})", cfg.mu, cfg.l0));
    }
    let e0 = CSExpansion::raw(Branch::J0, label, 0.0, ctl)?;
    let e1 = CSExpansion::raw(Branch::J1, label, 0.0, ctl)?;
    Ok(e0.eval_raw(theta, rho, cfg)? + e1.eval_raw(theta, rho, cfg)?)
}

/// W₀⁰ + W₁⁰ = π^{−2} e^{−(u+v)} (N₀ + N₁) at μ = 0.
pub fn mm_weight_sum(u: f64, v: f64) -> Result<f64> {
    let ctl = SeriesControl::default();
    let n = cs_normalization(Branch::J0, u, v, 0.0, ctl)? + cs_normalization(Branch::J1, u, v, 0.0, ctl)?;
    Ok((-(u + v)).exp() * n / (PI * PI))
}
