//! Non-relativistic stationary states in the magnetic-solenoid field.
//!
//! Two branches: j=0 holds l < 0 with (n₁, n₂) = (m, m−l−μ), j=1 holds l ≥ 0
//! with (n₁, n₂) = (m+l+μ, m). Energies are γ(n₁ + ½).

use num_complex::Complex64;
use std::f64::consts::PI;
use std::fmt;
use std::sync::Arc;

use crate::error::{domain, MsfError, Result};
use crate::quadrature::{Quadrature, RuleCache};
use crate::radial::{inner_product_components, p_minus, p_plus, Component, RadialFn};
use crate::specfun::laguerre_fn_table;

/// Field strength γ and flux Φ = Φ₀(l₀ + μ).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FieldConfig {
    pub gamma: f64,
    pub l0: i64,
    pub mu: f64,
}

impl FieldConfig {
    pub fn new(gamma: f64, l0: i64, mu: f64) -> Result<Self> {
        if !(gamma > 0.0) || !gamma.is_finite() {
            return domain(format!("gamma must be positive and finite, got {gamma}"));
        }
        if !(0.0..1.0).contains(&mu) {
            return domain(format!("mu must lie in [0, 1), got {mu}"));
        }
        Ok(Self { gamma, l0, mu })
    }

    /// √(γ/2π), the normalization making the states unit under (·,·)_⊥.
    pub fn norm_const(&self) -> f64 {
        (self.gamma / (2.0 * PI)).sqrt()
    }
}

impl Default for FieldConfig {
    fn default() -> Self {
        Self { gamma: 1.0, l0: 0, mu: 0.0 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Branch {
    J0,
    J1,
}

impl Branch {
    pub fn from_index(j: u8) -> Result<Self> {
        match j {
            0 => Ok(Branch::J0),
            1 => Ok(Branch::J1),
            _ => domain(format!("branch index must be 0 or 1, got {j}")),
        }
    }

    pub fn index(self) -> u8 {
        match self {
            Branch::J0 => 0,
            Branch::J1 => 1,
        }
    }

    /// The branch whose l-range contains `l`.
    pub fn of(l: i64) -> Self {
        if l < 0 {
            Branch::J0
        } else {
            Branch::J1
        }
    }
}

impl fmt::Display for Branch {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.index())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuantumNumbers {
    pub j: Branch,
    pub l: i64,
    pub m: usize,
    pub n1: f64,
    pub n2: f64,
}

impl QuantumNumbers {
    /// Laguerre order α = |l + μ| of the radial function.
    pub fn alpha(&self) -> f64 {
        (self.n1 - self.n2).abs()
    }

    /// Angular index l − l₀.
    pub fn angular(&self, cfg: &FieldConfig) -> i64 {
        self.l - cfg.l0
    }

    // e^{−iπl} on branch 1
    fn phase(&self) -> f64 {
        match self.j {
            Branch::J0 => 1.0,
            Branch::J1 if self.l % 2 == 0 => 1.0,
            Branch::J1 => -1.0,
        }
    }
}

pub fn resolve_qnums(j: Branch, l: i64, m: usize, cfg: &FieldConfig) -> Result<QuantumNumbers> {
    let mf = m as f64;
    let (n1, n2) = match j {
        Branch::J0 if l < 0 => (mf, mf - l as f64 - cfg.mu),
        Branch::J1 if l >= 0 => (mf + l as f64 + cfg.mu, mf),
        _ => return domain(format!("l = {l} is outside the range of branch j = {j}")),
    };
    Ok(QuantumNumbers { j, l, m, n1, n2 })
}

pub fn energy_nonrel(q: &QuantumNumbers, cfg: &FieldConfig) -> f64 {
    cfg.gamma * (q.n1 + 0.5)
}

/// Radial profile N·phase·I(ρ) of φ^{(j)}, exponent α/2 at the origin.
pub fn radial_profile(q: &QuantumNumbers, cfg: &FieldConfig) -> RadialFn {
    let alpha = q.alpha();
    let m = q.m;
    let c = cfg.norm_const() * q.phase();
    RadialFn::new(alpha / 2.0, move |rho| {
        let v = laguerre_fn_table(alpha, m, rho).map(|t| t[m]).unwrap_or(f64::NAN);
        Complex64::new(c * v, 0.0)
    })
}

pub fn state_component(q: &QuantumNumbers, cfg: &FieldConfig) -> Component {
    Component::new(q.angular(cfg), radial_profile(q, cfg))
}

/// φ^{(j)}_{n₁,n₂}(θ, ρ).
pub fn stationary_state(q: &QuantumNumbers, theta: f64, rho: f64, cfg: &FieldConfig) -> Result<Complex64> {
    let radial = laguerre_fn_table(q.alpha(), q.m, rho)?[q.m];
    let ang = Complex64::new(0.0, q.angular(cfg) as f64 * theta).exp();
    Ok(ang * (cfg.norm_const() * q.phase() * radial))
}

/// The zero-flux state φ^L_{m,l}: branch chosen by the sign of l. Requires μ = 0.
pub fn landau_state(m: usize, l: i64, theta: f64, rho: f64, cfg: &FieldConfig) -> Result<Complex64> {
    if cfg.mu != 0.0 {
        return domain(format!("landau_state needs mu = 0, got {}", cfg.mu));
    }
    stationary_state(&resolve_qnums(Branch::of(l), l, m, cfg)?, theta, rho, cfg)
}

/// Radial samples with one angular index on a shared Gauss–Laguerre grid.
/// Sample values are the plain profile; the grid's reduced weights integrate them.
#[derive(Debug, Clone)]
pub struct GridFunction {
    pub angular: i64,
    pub exponent: f64,
    pub values: Vec<Complex64>,
    pub grid: Arc<Quadrature>,
}

impl GridFunction {
    pub fn sample(component: &Component, grid: Arc<Quadrature>) -> Self {
        let values = grid.nodes.iter().map(|&x| component.profile.eval(x)).collect();
        Self { angular: component.angular, exponent: component.profile.exponent, values, grid }
    }

    pub fn from_state(q: &QuantumNumbers, cfg: &FieldConfig, grid: Arc<Quadrature>) -> Self {
        Self::sample(&state_component(q, cfg), grid)
    }
}

fn same_grid(a: &Arc<Quadrature>, b: &Arc<Quadrature>) -> bool {
    Arc::ptr_eq(a, b) || (a.a == b.a && a.nodes == b.nodes)
}

/// (f, g)_⊥ = (1/γ)∫dρ∫dθ f*g with the angle done analytically.
pub fn inner_product_perp(f: &GridFunction, g: &GridFunction, cfg: &FieldConfig) -> Result<Complex64> {
    if !same_grid(&f.grid, &g.grid) {
        return Err(MsfError::Usage("grid functions live on different grids".into()));
    }
    if f.angular != g.angular {
        return Ok(Complex64::new(0.0, 0.0));
    }
    let a = f.exponent + g.exponent;
    if !(a > -1.0) {
        return Err(MsfError::NotIntegrable(a));
    }
    if f.grid.a > a + 1e-9 {
        return Err(MsfError::Usage(format!("grid exponent {} exceeds the integrand exponent {a}", f.grid.a)));
    }
    let s: Complex64 = f.values.iter().zip(&g.values).zip(&f.grid.reduced).map(|((x, y), &w)| x.conj() * y * w).sum();
    Ok(s * (2.0 * PI / cfg.gamma))
}

/// Gram matrix of the given states under (·,·)_⊥; one grid per angular index.
pub fn gram_matrix(states: &[QuantumNumbers], cfg: &FieldConfig, cache: &RuleCache) -> Result<Vec<Vec<Complex64>>> {
    let mut samples = Vec::with_capacity(states.len());
    for q in states {
        samples.push(GridFunction::from_state(q, cfg, cache.rule(q.alpha())?));
    }
    let n = states.len();
    let mut g = vec![vec![Complex64::new(0.0, 0.0); n]; n];
    for a in 0..n {
        for b in a..n {
            if samples[a].angular != samples[b].angular {
                continue;
            }
            let v = inner_product_perp(&samples[a], &samples[b], cfg)?;
            g[a][b] = v;
            g[b][a] = v.conj();
        }
    }
    Ok(g)
}

/// Ĥ⊥ = ½(P₋P₊ − γ) applied by finite differences.
pub fn apply_h_perp(c: &Component, cfg: &FieldConfig) -> Result<Component> {
    let pp = p_minus(&p_plus(c, cfg), cfg);
    Ok(Component::new(c.angular, pp.profile.add(&c.profile.scale(Complex64::new(-cfg.gamma, 0.0))))
        .scale(Complex64::new(0.5, 0.0)))
}

/// ‖Ĥ⊥φ − Eφ‖ / ‖Eφ‖ under (·,·)_⊥.
pub fn eigen_residual(q: &QuantumNumbers, cfg: &FieldConfig, cache: &RuleCache) -> Result<f64> {
    let phi = state_component(q, cfg);
    let e = energy_nonrel(q, cfg);
    let h = apply_h_perp(&phi, cfg)?;
    let diff = h.add(&phi.scale(Complex64::new(-e, 0.0)))?;
    let num = inner_product_components(&diff, &diff, cfg, cache)?.re;
    let den = e * e * inner_product_components(&phi, &phi, cfg, cache)?.re;
    Ok((num.max(0.0) / den).sqrt())
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn quantum_number_examples() {
        let c = FieldConfig::new(1.0, 0, 0.3).unwrap();
        let q = resolve_qnums(Branch::J0, -1, 0, &c).unwrap();
        assert_eq!(q.n1, 0.0);
        assert_relative_eq!(q.n2, 0.7, epsilon = 1e-15);
        let c0 = FieldConfig::new(1.0, 0, 0.0).unwrap();
        let q = resolve_qnums(Branch::J1, 0, 2, &c0).unwrap();
        assert_eq!((q.n1, q.n2), (2.0, 2.0));
        let ch = FieldConfig::new(1.0, 0, 0.5).unwrap();
        let q = resolve_qnums(Branch::J1, 3, 1, &ch).unwrap();
        assert_eq!((q.n1, q.n2), (4.5, 1.0));
        assert!(resolve_qnums(Branch::J0, 0, 0, &ch).is_err());
        assert!(resolve_qnums(Branch::J1, -1, 0, &ch).is_err());
        assert!(FieldConfig::new(1.0, 0, 1.0).is_err());
        assert!(FieldConfig::new(0.0, 0, 0.1).is_err());
    }

    #[test]
    fn energies() {
        let g = 1.7;
        let c0 = FieldConfig::new(g, 0, 0.0).unwrap();
        assert_relative_eq!(energy_nonrel(&resolve_qnums(Branch::J1, 0, 0, &c0).unwrap(), &c0), g / 2.0);
        let c = FieldConfig::new(g, 0, 0.25).unwrap();
        assert_relative_eq!(energy_nonrel(&resolve_qnums(Branch::J0, -2, 1, &c).unwrap(), &c), 1.5 * g);
        let c = FieldConfig::new(g, 0, 0.5).unwrap();
        assert_relative_eq!(energy_nonrel(&resolve_qnums(Branch::J1, 1, 0, &c).unwrap(), &c), 2.0 * g);
    }

    #[test]
    fn state_values() {
        let c = FieldConfig::new(1.0, 2, 0.4).unwrap();
        let q = resolve_qnums(Branch::J0, -1, 0, &c).unwrap();
        assert_eq!(stationary_state(&q, 0.3, 0.0, &c).unwrap(), Complex64::new(0.0, 0.0));
        // ground state at μ=0: √(γ/2π) e^{−ρ/2}
        let c0 = FieldConfig::new(2.0, 0, 0.0).unwrap();
        let q = resolve_qnums(Branch::J1, 0, 0, &c0).unwrap();
        let v = stationary_state(&q, 1.1, 0.8, &c0).unwrap();
        assert_relative_eq!(v.re, (1.0 / PI).sqrt() * (-0.4f64).exp(), max_relative = 1e-14);
        assert_eq!(v.im, 0.0);
    }

    #[test]
    fn unit_norm_and_orthogonality() {
        let cache = RuleCache::default();
        let c = FieldConfig::new(1.3, -1, 0.5).unwrap();
        let q = resolve_qnums(Branch::J1, 2, 1, &c).unwrap();
        let f = GridFunction::from_state(&q, &c, cache.rule(q.alpha()).unwrap());
        assert_relative_eq!(inner_product_perp(&f, &f, &c).unwrap().re, 1.0, epsilon = 1e-12);
        let q2 = resolve_qnums(Branch::J1, 3, 1, &c).unwrap();
        let g = GridFunction::from_state(&q2, &c, cache.rule(q.alpha()).unwrap());
        assert_eq!(inner_product_perp(&f, &g, &c).unwrap(), Complex64::new(0.0, 0.0));
        let other = GridFunction::from_state(&q2, &c, cache.rule(q2.alpha()).unwrap());
        assert!(matches!(inner_product_perp(&f, &other, &c), Err(MsfError::Usage(_))));
    }

    #[test]
    fn gram_is_identity() {
        let cache = RuleCache::default();
        let c = FieldConfig::new(1.0, 0, 0.3).unwrap();
        let mut states = Vec::new();
        for l in -6..=6i64 {
            for m in 0..=6 {
                states.push(resolve_qnums(Branch::of(l), l, m, &c).unwrap());
            }
        }
        let g = gram_matrix(&states, &c, &cache).unwrap();
        for (a, row) in g.iter().enumerate() {
            for (b, v) in row.iter().enumerate() {
                let d = if a == b { 1.0 } else { 0.0 };
                assert!((v - d).norm() < 1e-10, "{a},{b}: {v}");
            }
        }
    }

    #[test]
    fn hamiltonian_residual() {
        let cache = RuleCache::new(120);
        for &mu in &[0.0, 0.3, 0.9] {
            let c = FieldConfig::new(1.4, 1, mu).unwrap();
            for &(l, m) in &[(-3i64, 0usize), (-1, 2), (0, 0), (0, 3), (2, 1), (5, 4)] {
                let q = resolve_qnums(Branch::of(l), l, m, &c).unwrap();
                let r = eigen_residual(&q, &c, &cache).unwrap();
                assert!(r < 1e-6, "mu={mu} l={l} m={m}: {r}");
            }
        }
    }

    #[test]
    fn zero_flux_union_and_continuity() {
        // every integer l lands in exactly one branch
        let c0 = FieldConfig::new(1.0, 0, 0.0).unwrap();
        for l in -20..=20 {
            let ok: Vec<_> =
                [Branch::J0, Branch::J1].iter().filter(|&&j| resolve_qnums(j, l, 0, &c0).is_ok()).collect();
            assert_eq!(ok.len(), 1);
        }
        // single-valued at μ=0 and the μ→0⁺ limit is continuous
        for &(l, m) in &[(-2i64, 1usize), (0, 2), (3, 0)] {
            let a = landau_state(m, l, 0.4, 1.3, &c0).unwrap();
            let b = landau_state(m, l, 0.4 + 2.0 * PI, 1.3, &c0).unwrap();
            assert!((a - b).norm() < 1e-13);
            let cs = FieldConfig::new(1.0, 0, 1e-9).unwrap();
            let near = stationary_state(&resolve_qnums(Branch::of(l), l, m, &cs).unwrap(), 0.4, 1.3, &cs).unwrap();
            assert!((a - near).norm() < 1e-8);
        }
        assert!(landau_state(0, 0, 0.0, 1.0, &FieldConfig::new(1.0, 0, 0.2).unwrap()).is_err());
    }
}
