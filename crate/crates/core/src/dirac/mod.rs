//! (2+1)-dimensional Dirac states in the magnetic-solenoid field.
//!
//! H = σ·P⊥ + Mσ³ with σ·P⊥ = [[0, P₋], [P₊, 0]]. Stationary spinors are built
//! from the scalar solutions u = φ v_σ of (σ·P⊥)² u = E⊥² u as
//! ψ = σ³(±Π₀ − σ·P⊥)u + Mu, with Π₀ = √(M² + (σ·P⊥)²) applied spectrally.
//! Only the ξ = +1 sector is built; [`sigma2_map`] carries outputs to ξ = −1.
//!
//! The extension ϑ = ±1 decides which l = 0 radial function may be irregular:
//! j=0 holds l ≤ −(1−ϑ)/2 and j=1 holds l ≥ (1+ϑ)/2.

pub mod cs;
pub mod embed;
pub mod kernel;

use num_complex::Complex64;
use std::f64::consts::PI;
use std::fmt;

use crate::error::{domain, MsfError, Result};
use crate::landau::{Branch, FieldConfig};
use crate::quadrature::RuleCache;
use crate::radial::{inner_product_components, p_minus, p_plus, Component, RadialFn};
use crate::specfun::laguerre_fn_table;

/// Relative residual allowed when expanding a component in the basis for Π₀.
pub const PI0_EXPANSION_TOL: f64 = 1e-6;
const PI0_MIN_TERMS: usize = 8;
const PI0_MAX_TERMS: usize = 256;

/// Field, mass and self-adjoint extension ϑ.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DiracConfig {
    pub cfg: FieldConfig,
    pub mass: f64,
    pub vartheta: i8,
}

impl DiracConfig {
    pub fn new(cfg: FieldConfig, mass: f64, vartheta: i8) -> Result<Self> {
        if !(mass >= 0.0) || !mass.is_finite() {
            return domain(format!("mass must be finite and >= 0, got {mass}"));
        }
        if vartheta != 1 && vartheta != -1 {
            return domain(format!("vartheta must be +1 or -1, got {vartheta}"));
        }
        Ok(Self { cfg, mass, vartheta })
    }

    pub fn with_mass(&self, mass: f64) -> Result<Self> {
        Self::new(self.cfg, mass, self.vartheta)
    }

    /// The branch holding l under this extension.
    pub fn branch_of(&self, l: i64) -> Branch {
        if l <= -(1 - self.vartheta as i64) / 2 {
            Branch::J0
        } else {
            Branch::J1
        }
    }

    /// First l of branch j; the branch runs away from zero from here.
    pub fn l_start(&self, j: Branch) -> i64 {
        match j {
            Branch::J0 => -(1 - self.vartheta as i64) / 2,
            Branch::J1 => (1 + self.vartheta as i64) / 2,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Charge {
    Particle,
    Antiparticle,
}

impl Charge {
    pub fn sign(self) -> f64 {
        match self {
            Charge::Particle => 1.0,
            Charge::Antiparticle => -1.0,
        }
    }

    pub fn opposite(self) -> Self {
        match self {
            Charge::Particle => Charge::Antiparticle,
            Charge::Antiparticle => Charge::Particle,
        }
    }

    /// The σ carried by the "spin up" states of this charge.
    pub fn spin_up(self) -> i8 {
        match self {
            Charge::Particle => 1,
            Charge::Antiparticle => -1,
        }
    }
}

impl fmt::Display for Charge {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(if *self == Charge::Particle { "+" } else { "-" })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RelQuantumNumbers {
    pub j: Branch,
    pub l: i64,
    pub m: usize,
    pub sigma: i8,
    pub l_sigma: i64,
    pub n1: f64,
    pub n2: f64,
}

impl RelQuantumNumbers {
    /// Laguerre order of the radial function; in (−1, 0) for the irregular l = 0 profiles.
    pub fn alpha(&self) -> f64 {
        match self.j {
            Branch::J0 => self.n2 - self.n1,
            Branch::J1 => self.n1 - self.n2,
        }
    }

    /// Angular index l_σ − l₀ of the scalar function.
    pub fn angular(&self, cfg: &FieldConfig) -> i64 {
        self.l_sigma - cfg.l0
    }

    /// E⊥² = 2γ(n₁ + (1+σ)/2).
    pub fn e_perp2(&self, cfg: &FieldConfig) -> f64 {
        2.0 * cfg.gamma * (self.n1 + if self.sigma > 0 { 1.0 } else { 0.0 })
    }

    fn phase(&self) -> f64 {
        if self.j == Branch::J1 && self.l_sigma.rem_euclid(2) == 1 {
            -1.0
        } else {
            1.0
        }
    }
}

/// (n₁, n₂) for branch j, l, m and spin σ under the extension in `dc`.
pub fn resolve_rel(j: Branch, l: i64, m: usize, sigma: i8, dc: &DiracConfig) -> Result<RelQuantumNumbers> {
    if sigma != 1 && sigma != -1 {
        return domain(format!("sigma must be +1 or -1, got {sigma}"));
    }
    if dc.branch_of(l) != j {
        return domain(format!("l = {l} is outside branch j = {j} for vartheta = {}", dc.vartheta));
    }
    let l_sigma = l - (1 + sigma as i64) / 2;
    let (mf, ls, mu) = (m as f64, l_sigma as f64, dc.cfg.mu);
    let (n1, n2) = match j {
        Branch::J0 => (mf, mf - ls - mu),
        Branch::J1 => (mf + ls + mu, mf),
    };
    if !(n1 > -1.0) || !(n2 > -1.0) || !(n1 - n2).abs().is_finite() {
        return domain(format!("(n1, n2) = ({n1}, {n2}) leaves the Laguerre domain"));
    }
    let q = RelQuantumNumbers { j, l, m, sigma, l_sigma, n1, n2 };
    if !(q.alpha() > -1.0) {
        return domain(format!("Laguerre order {} <= -1 for l = {l}, sigma = {sigma}", q.alpha()));
    }
    Ok(q)
}

/// E = √(M² + E⊥²).
pub fn rel_energy(q: &RelQuantumNumbers, dc: &DiracConfig) -> f64 {
    (dc.mass * dc.mass + q.e_perp2(&dc.cfg)).sqrt()
}

/// Radial part of φ, exponent α/2 at the origin.
pub fn rel_basis_profile(q: &RelQuantumNumbers, dc: &DiracConfig) -> RadialFn {
    let alpha = q.alpha();
    let m = q.m;
    let c = dc.cfg.norm_const() * q.phase();
    RadialFn::new(alpha / 2.0, move |rho| {
        let v = laguerre_fn_table(alpha, m, rho).map(|t| t[m]).unwrap_or(f64::NAN);
        Complex64::new(c * v, 0.0)
    })
}

pub fn rel_basis_component(q: &RelQuantumNumbers, dc: &DiracConfig) -> Component {
    Component::new(q.angular(&dc.cfg), rel_basis_profile(q, dc))
}

/// φ^{(j)}_{n₁,n₂}(θ, ρ) with angular index l_σ − l₀.
pub fn rel_basis_fn(q: &RelQuantumNumbers, dc: &DiracConfig, theta: f64, rho: f64) -> Result<Complex64> {
    let radial = laguerre_fn_table(q.alpha(), q.m, rho)?[q.m];
    let ang = Complex64::new(0.0, q.angular(&dc.cfg) as f64 * theta).exp();
    Ok(ang * (dc.cfg.norm_const() * q.phase() * radial))
}

/// Two components with angular indices J − ½ (upper) and J + ½ (lower).
#[derive(Debug, Clone)]
pub struct Spinor2 {
    pub upper: Component,
    pub lower: Component,
}

impl Spinor2 {
    pub fn new(upper: Component, lower: Component) -> Result<Self> {
        if lower.angular != upper.angular + 1 {
            return Err(MsfError::Usage(format!(
                "spinor needs lower angular index = upper + 1, got {} and {}",
                upper.angular, lower.angular
            )));
        }
        Ok(Self { upper, lower })
    }

    /// u = φ v_σ.
    pub fn basis(q: &RelQuantumNumbers, dc: &DiracConfig) -> Self {
        let c = rel_basis_component(q, dc);
        if q.sigma > 0 {
            let a = c.angular;
            Self { upper: c, lower: Component::zero(a + 1) }
        } else {
            let a = c.angular;
            Self { upper: Component::zero(a - 1), lower: c }
        }
    }

    /// Total angular momentum −i∂_θ + σ³/2, the same on both components.
    pub fn total_angular_momentum(&self) -> f64 {
        self.upper.angular as f64 + 0.5
    }

    pub fn eval(&self, theta: f64, rho: f64) -> [Complex64; 2] {
        [self.upper.eval(theta, rho), self.lower.eval(theta, rho)]
    }

    pub fn scale(&self, c: Complex64) -> Self {
        Self { upper: self.upper.scale(c), lower: self.lower.scale(c) }
    }

    pub fn add(&self, other: &Spinor2) -> Result<Self> {
        Ok(Self { upper: self.upper.add(&other.upper)?, lower: self.lower.add(&other.lower)? })
    }

    pub fn sub(&self, other: &Spinor2) -> Result<Self> {
        self.add(&other.scale(Complex64::new(-1.0, 0.0)))
    }

    pub fn sigma3(&self) -> Self {
        Self { upper: self.upper.clone(), lower: self.lower.scale(Complex64::new(-1.0, 0.0)) }
    }

    pub fn is_zero(&self) -> bool {
        self.upper.profile.is_zero() && self.lower.profile.is_zero()
    }

    /// (ψ, ψ')_D: the ⊥ product summed over components.
    pub fn inner_d(&self, other: &Spinor2, cfg: &FieldConfig, cache: &RuleCache) -> Result<Complex64> {
        Ok(inner_product_components(&self.upper, &other.upper, cfg, cache)?
            + inner_product_components(&self.lower, &other.lower, cfg, cache)?)
    }

    pub fn norm_d(&self, cfg: &FieldConfig, cache: &RuleCache) -> Result<f64> {
        Ok(self.inner_d(self, cfg, cache)?.re.max(0.0).sqrt())
    }
}

/// σ² ψ, which maps ξ = +1 solutions at p₀ to ξ = −1 solutions at −p₀.
/// The components swap places, so the angular bookkeeping is returned per slot.
pub fn sigma2_map(s: &Spinor2) -> (Component, Component) {
    (s.lower.scale(Complex64::new(0.0, -1.0)), s.upper.scale(Complex64::new(0.0, 1.0)))
}

/// σ·P⊥ ψ = (P₋ψ_lower, P₊ψ_upper).
pub fn apply_sigma_p(s: &Spinor2, dc: &DiracConfig) -> Spinor2 {
    Spinor2 { upper: p_minus(&s.lower, &dc.cfg), lower: p_plus(&s.upper, &dc.cfg) }
}

/// H ψ = σ·P⊥ ψ + Mσ³ψ.
pub fn apply_hamiltonian(s: &Spinor2, dc: &DiracConfig) -> Result<Spinor2> {
    apply_sigma_p(s, dc).add(&s.sigma3().scale(Complex64::new(dc.mass, 0.0)))
}

// Multiply a component by E in the basis of spin σ: expand, scale, resum.
fn spectral_component(c: &Component, sigma: i8, dc: &DiracConfig, cache: &RuleCache) -> Result<Component> {
    if c.profile.is_zero() {
        return Ok(c.clone());
    }
    let cfg = &dc.cfg;
    let l = c.angular + cfg.l0 + (1 + sigma as i64) / 2;
    let q0 = resolve_rel(dc.branch_of(l), l, 0, sigma, dc)?;
    let alpha = q0.alpha();
    let beta = c.profile.exponent;
    let nc = cfg.norm_const() * q0.phase();
    let w = 2.0 * PI / cfg.gamma;
    let rule_c = cache.rule(alpha / 2.0 + beta)?;
    let rule_r = cache.rule(2.0 * beta)?;
    let vals_c: Vec<Complex64> = rule_c.nodes.iter().map(|&x| c.profile.eval(x)).collect();
    let vals_r: Vec<Complex64> = rule_r.nodes.iter().map(|&x| c.profile.eval(x)).collect();
    let norm2: f64 = w * rule_r.reduced.iter().zip(&vals_r).map(|(&wt, v)| wt * v.norm_sqr()).sum::<f64>();
    let mut n = PI0_MIN_TERMS;
    let mut residual = f64::INFINITY;
    while n <= PI0_MAX_TERMS {
        let mut coef = vec![Complex64::new(0.0, 0.0); n];
        for ((&x, &wt), v) in rule_c.nodes.iter().zip(&rule_c.reduced).zip(&vals_c) {
            let t = laguerre_fn_table(alpha, n - 1, x)?;
            for (cm, tm) in coef.iter_mut().zip(&t) {
                *cm += v * (wt * nc * tm);
            }
        }
        coef.iter_mut().for_each(|cm| *cm *= w);
        let mut r2 = 0.0;
        for ((&x, &wt), v) in rule_r.nodes.iter().zip(&rule_r.reduced).zip(&vals_r) {
            let t = laguerre_fn_table(alpha, n - 1, x)?;
            let approx: Complex64 = coef.iter().zip(&t).map(|(cm, tm)| cm * (nc * tm)).sum();
            r2 += wt * (v - approx).norm_sqr();
        }
        residual = (w * r2 / norm2).sqrt();
        if residual <= PI0_EXPANSION_TOL {
            let scaled: Vec<Complex64> = coef
                .iter()
                .enumerate()
                .map(|(m, cm)| {
                    let e2 = dc.mass * dc.mass + q0.e_perp2(cfg) + 2.0 * cfg.gamma * m as f64;
                    cm * (e2.sqrt() * nc)
                })
                .collect();
            let mmax = n - 1;
            let profile = RadialFn::new(alpha / 2.0, move |rho| match laguerre_fn_table(alpha, mmax, rho) {
                Ok(t) => scaled.iter().zip(&t).map(|(cm, tm)| cm * tm).sum(),
                Err(_) => Complex64::new(f64::NAN, f64::NAN),
            });
            return Ok(Component::new(c.angular, profile));
        }
        n *= 2;
    }
    Err(MsfError::Expansion { residual, tol: PI0_EXPANSION_TOL })
}

/// Π₀(M) ψ: each component expanded in the basis of its spin (upper ↔ σ=+1,
/// lower ↔ σ=−1) by quadrature, every mode multiplied by its E.
pub fn apply_pi0(s: &Spinor2, dc: &DiracConfig, cache: &RuleCache) -> Result<Spinor2> {
    Ok(Spinor2 {
        upper: spectral_component(&s.upper, 1, dc, cache)?,
        lower: spectral_component(&s.lower, -1, dc, cache)?,
    })
}

/// σ³(±Π₀ − σ·P⊥)u + Mu, unnormalized.
pub fn dirac_spinor_raw(q: &RelQuantumNumbers, dc: &DiracConfig, charge: Charge, cache: &RuleCache) -> Result<Spinor2> {
    let u = Spinor2::basis(q, dc);
    let pi0 = apply_pi0(&u, dc, cache)?.scale(Complex64::new(charge.sign(), 0.0));
    let inner = pi0.sub(&apply_sigma_p(&u, dc))?;
    inner.sigma3().add(&u.scale(Complex64::new(dc.mass, 0.0)))
}

/// ‖raw spinor‖²_D = 2E(E ± σM) for a unit u.
pub fn raw_norm_sqr(q: &RelQuantumNumbers, dc: &DiracConfig, charge: Charge) -> f64 {
    let e = rel_energy(q, dc);
    2.0 * e * (e + charge.sign() * q.sigma as f64 * dc.mass)
}

// positive real value at the smallest node of the a=0 rule, on the first component that carries weight
fn fix_phase(s: &Spinor2, cfg: &FieldConfig, cache: &RuleCache) -> Result<Spinor2> {
    let x0 = cache.rule(0.0)?.nodes.iter().copied().fold(f64::INFINITY, f64::min);
    let nu = inner_product_components(&s.upper, &s.upper, cfg, cache)?.re;
    let nl = inner_product_components(&s.lower, &s.lower, cfg, cache)?.re;
    let total = nu + nl;
    let pick = if nu > 1e-16 * total { &s.upper } else { &s.lower };
    let v = pick.profile.eval(x0);
    if v.norm() == 0.0 || !v.norm().is_finite() {
        return Ok(s.clone());
    }
    Ok(s.scale(v.conj() / v.norm()))
}

/// Normalized stationary spinor with eigenvalue ±E.
pub fn dirac_spinor(q: &RelQuantumNumbers, dc: &DiracConfig, charge: Charge, cache: &RuleCache) -> Result<Spinor2> {
    let e = rel_energy(q, dc);
    if raw_norm_sqr(q, dc, charge) <= 1e-12 * 2.0 * e * e || e == 0.0 {
        return Err(MsfError::ZeroNorm(format!(
            "charge {charge}, sigma = {}, n1 = {}: the operator string annihilates u",
            q.sigma, q.n1
        )));
    }
    let raw = dirac_spinor_raw(q, dc, charge, cache)?;
    let norm = raw.norm_d(&dc.cfg, cache)?;
    fix_phase(&raw.scale(Complex64::new(1.0 / norm, 0.0)), &dc.cfg, cache)
}

/// ‖Hψ − λψ‖_D / (|λ| ‖ψ‖_D).
pub fn hamiltonian_residual(s: &Spinor2, lambda: f64, dc: &DiracConfig, cache: &RuleCache) -> Result<f64> {
    let d = apply_hamiltonian(s, dc)?.sub(&s.scale(Complex64::new(lambda, 0.0)))?;
    Ok(d.norm_d(&dc.cfg, cache)? / (lambda.abs() * s.norm_d(&dc.cfg, cache)?))
}

/// Rayleigh quotient of (σ·P⊥)² on u and the relative residual against E⊥²
/// (absolute when E⊥ = 0).
pub fn sigma_p_squared_check(q: &RelQuantumNumbers, dc: &DiracConfig, cache: &RuleCache) -> Result<(f64, f64)> {
    let u = Spinor2::basis(q, dc);
    let w = apply_sigma_p(&apply_sigma_p(&u, dc), dc);
    let cfg = &dc.cfg;
    let uu = u.inner_d(&u, cfg, cache)?.re;
    let rayleigh = u.inner_d(&w, cfg, cache)?.re / uu;
    let e2 = q.e_perp2(cfg);
    let d = w.sub(&u.scale(Complex64::new(e2, 0.0)))?.norm_d(cfg, cache)?;
    let scale = if e2 > 0.0 { e2 * uu.sqrt() } else { uu.sqrt() };
    Ok((rayleigh, d / scale))
}
