//! (3+1) states with momentum p₃ along the field, built from (2+1) spinors of
//! mass M̃ = √(M² + p₃²).
//!
//! Representation: β = diag(σ³, −σ³), α_{x,y} = diag(σ_{x,y}, σ_{x,y}),
//! α_z = offdiag(σ³, σ³), Σ_z = diag(σ³, σ³). Then
//! H = [[σ·P⊥ + Mσ³, p₃σ³], [p₃σ³, σ·P⊥ − Mσ³]] and, with ψ̃ of mass M̃,
//!
//!   s = +1:  ((M̃+M) ψ̃_±,  p₃ ψ̃_±)
//!   s = −1:  (p₃ σ³ψ̃_∓,  −(M̃+M) σ³ψ̃_∓)
//!
//! where ψ̃_∓ is the opposite-charge state with the same |E|. Both are eigenvectors
//! of H with eigenvalue ±E and of S_z = (HΣ_z + Σ_zH)/2M̃ with eigenvalue s.

use num_complex::Complex64;

use super::{apply_sigma_p, dirac_spinor, resolve_rel, Charge, DiracConfig, RelQuantumNumbers, Spinor2};
use crate::error::{domain, MsfError, Result};
use crate::landau::FieldConfig;
use crate::quadrature::RuleCache;

#[derive(Debug, Clone)]
pub struct Spinor4 {
    pub top: Spinor2,
    pub bottom: Spinor2,
}

impl Spinor4 {
    pub fn eval(&self, theta: f64, rho: f64) -> [Complex64; 4] {
        let [a, b] = self.top.eval(theta, rho);
        let [c, d] = self.bottom.eval(theta, rho);
        [a, b, c, d]
    }

    pub fn scale(&self, c: Complex64) -> Self {
        Self { top: self.top.scale(c), bottom: self.bottom.scale(c) }
    }

    pub fn add(&self, other: &Spinor4) -> Result<Self> {
        Ok(Self { top: self.top.add(&other.top)?, bottom: self.bottom.add(&other.bottom)? })
    }

    pub fn sub(&self, other: &Spinor4) -> Result<Self> {
        self.add(&other.scale(Complex64::new(-1.0, 0.0)))
    }

    pub fn inner(&self, other: &Spinor4, cfg: &FieldConfig, cache: &RuleCache) -> Result<Complex64> {
        Ok(self.top.inner_d(&other.top, cfg, cache)? + self.bottom.inner_d(&other.bottom, cfg, cache)?)
    }

    pub fn norm(&self, cfg: &FieldConfig, cache: &RuleCache) -> Result<f64> {
        Ok(self.inner(self, cfg, cache)?.re.max(0.0).sqrt())
    }

    /// Σ_z ψ.
    pub fn sigma_z(&self) -> Self {
        Self { top: self.top.sigma3(), bottom: self.bottom.sigma3() }
    }
}

/// M̃ = √(M² + p₃²).
pub fn effective_mass(dc: &DiracConfig, p3: f64) -> f64 {
    dc.mass.hypot(p3)
}

/// E = √(M² + p₃² + E⊥²).
pub fn energy_3p1(q: &RelQuantumNumbers, dc: &DiracConfig, p3: f64) -> f64 {
    (dc.mass * dc.mass + p3 * p3 + q.e_perp2(&dc.cfg)).sqrt()
}

/// The opposite-spin state of equal E⊥ at the same j and l. On j=0 this shifts
/// m by +1 going from σ=+1 to σ=−1; the zero modes have no partner.
pub fn spin_partner(q: &RelQuantumNumbers, dc: &DiracConfig) -> Result<RelQuantumNumbers> {
    let sigma = -q.sigma;
    let base = resolve_rel(q.j, q.l, 0, sigma, dc)?;
    // E⊥² equal: n₁' + (1+σ')/2 = n₁ + (1+σ)/2
    let target = q.n1 + if q.sigma > 0 { 1.0 } else { -1.0 };
    let m = target - base.n1;
    let mr = m.round();
    if (m - mr).abs() > 1e-9 || mr < 0.0 {
        return Err(MsfError::ZeroNorm(format!(
            "no opposite-spin partner for j = {}, l = {}, m = {} (a zero mode)",
            q.j, q.l, q.m
        )));
    }
    resolve_rel(q.j, q.l, mr as usize, sigma, dc)
}

/// The 4-spinor from a (2+1) pair of mass M̃: `base.0` carries the charge and
/// spin of the state, `base.1` is its opposite-charge partner of equal |E|.
pub fn embed_3p1_from(
    base: (&Spinor2, &Spinor2),
    s: i8,
    p3: f64,
    dc: &DiracConfig,
    cache: &RuleCache,
) -> Result<Spinor4> {
    let mt = effective_mass(dc, p3);
    let a = Complex64::new(mt + dc.mass, 0.0);
    let b = Complex64::new(p3, 0.0);
    let raw = match s {
        1 => Spinor4 { top: base.0.scale(a), bottom: base.0.scale(b) },
        -1 => {
            let chi = base.1.sigma3();
            Spinor4 { top: chi.scale(b), bottom: chi.scale(-a) }
        }
        _ => return domain(format!("spin projection s must be +1 or -1, got {s}")),
    };
    let n = raw.norm(&dc.cfg, cache)?;
    if !(n > 1e-300) {
        return Err(MsfError::ZeroNorm(format!("M = {}, p3 = {p3}: both factors vanish", dc.mass)));
    }
    Ok(raw.scale(Complex64::new(1.0 / n, 0.0)))
}

/// Normalized (3+1) state with charge, spin projection s and momentum p₃.
pub fn embed_3p1(
    q: &RelQuantumNumbers,
    charge: Charge,
    s: i8,
    p3: f64,
    dc: &DiracConfig,
    cache: &RuleCache,
) -> Result<Spinor4> {
    let dt = dc.with_mass(effective_mass(dc, p3))?;
    match s {
        1 => {
            let psi = dirac_spinor(q, &dt, charge, cache)?;
            embed_3p1_from((&psi, &psi), 1, p3, dc, cache)
        }
        -1 => {
            let partner = spin_partner(q, dc)?;
            let chi = dirac_spinor(&partner, &dt, charge.opposite(), cache)?;
            embed_3p1_from((&chi, &chi), -1, p3, dc, cache)
        }
        _ => domain(format!("spin projection s must be +1 or -1, got {s}")),
    }
}

/// H ψ for the (3+1) Hamiltonian at momentum p₃.
pub fn apply_h4(psi: &Spinor4, p3: f64, dc: &DiracConfig) -> Result<Spinor4> {
    let m = Complex64::new(dc.mass, 0.0);
    let p = Complex64::new(p3, 0.0);
    let top = apply_sigma_p(&psi.top, dc).add(&psi.top.sigma3().scale(m))?.add(&psi.bottom.sigma3().scale(p))?;
    let bottom = apply_sigma_p(&psi.bottom, dc).sub(&psi.bottom.sigma3().scale(m))?.add(&psi.top.sigma3().scale(p))?;
    Ok(Spinor4 { top, bottom })
}

/// S_z ψ = (HΣ_z + Σ_zH)ψ / 2M̃, every operator applied on the grid.
pub fn apply_spin_z(psi: &Spinor4, p3: f64, dc: &DiracConfig) -> Result<Spinor4> {
    let mt = effective_mass(dc, p3);
    if mt == 0.0 {
        return domain("S_z needs M^2 + p3^2 > 0");
    }
    let a = apply_h4(&psi.sigma_z(), p3, dc)?;
    let b = apply_h4(psi, p3, dc)?.sigma_z();
    Ok(a.add(&b)?.scale(Complex64::new(0.5 / mt, 0.0)))
}

/// ‖S_z ψ − sψ‖ / ‖ψ‖.
pub fn spin_residual(psi: &Spinor4, s: i8, p3: f64, dc: &DiracConfig, cache: &RuleCache) -> Result<f64> {
    let d = apply_spin_z(psi, p3, dc)?.sub(&psi.scale(Complex64::new(s as f64, 0.0)))?;
    Ok(d.norm(&dc.cfg, cache)? / psi.norm(&dc.cfg, cache)?)
}

/// ‖Hψ − λψ‖ / (|λ| ‖ψ‖).
pub fn h4_residual(psi: &Spinor4, lambda: f64, p3: f64, dc: &DiracConfig, cache: &RuleCache) -> Result<f64> {
    let d = apply_h4(psi, p3, dc)?.sub(&psi.scale(Complex64::new(lambda, 0.0)))?;
    Ok(d.norm(&dc.cfg, cache)? / (lambda.abs() * psi.norm(&dc.cfg, cache)?))
}

/// ‖bottom‖/‖ψ‖ for a normalized state.
pub fn lower_fraction(psi: &Spinor4, cfg: &FieldConfig, cache: &RuleCache) -> Result<f64> {
    Ok(psi.bottom.norm_d(cfg, cache)? / psi.norm(cfg, cache)?)
}
