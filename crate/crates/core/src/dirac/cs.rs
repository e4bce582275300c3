//! Relativistic coherent states for spin-up particles and antiparticles.
//!
//! A charge ± state uses the spin σ = ±1 throughout. The series form sums the
//! normalized stationary spinors with the scalar amplitudes z₁^{n₁}z₂^{n₂}/√(Γ(1+n₁)Γ(1+n₂)),
//! the (n₁, n₂) lattice now following l_σ. The operator form applies
//! σ³(±Π₀ − σ·P⊥) + M to the scalar coherent state, i.e. sums the unnormalized
//! spinors, and its norm picks up 2E(E+M) per mode.

use num_complex::Complex64;

use super::{
    dirac_spinor, dirac_spinor_raw, raw_norm_sqr, resolve_rel, Charge, DiracConfig, RelQuantumNumbers, Spinor2,
};
use crate::cs::{is_zero_limit_with, lattice_blocks, ln_conj_product, CSLabel};
use crate::error::{MsfError, Result};
use crate::landau::Branch;
use crate::quadrature::RuleCache;
use crate::specfun::{q_sum_complex, SeriesControl};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RelCsForm {
    /// Normalized spinors with scalar amplitudes.
    Series,
    /// The operator string applied to the scalar coherent state.
    Operator,
}

/// All terms of one l.
#[derive(Debug, Clone)]
pub struct RelBlock {
    pub l: i64,
    pub terms: Vec<(RelQuantumNumbers, Complex64)>,
    /// Σ_m c_m ψ_m, not yet divided by √M.
    pub spinor: Spinor2,
}

#[derive(Debug, Clone)]
pub struct RelCoherentState {
    pub j: Branch,
    pub label: CSLabel,
    pub charge: Charge,
    pub form: RelCsForm,
    pub dc: DiracConfig,
    pub blocks: Vec<RelBlock>,
    /// The normalization M_{j,±} from the diagonal of the overlap formula.
    pub norm_const: f64,
    pub zero_limit: bool,
    /// Massless zero modes left out of a series-form state.
    pub dropped_zero_modes: bool,
    ctl: SeriesControl,
}

// smallest (n₁, n₂) of the lattice: the m = 0 state of the first l
fn lattice_mins(j: Branch, charge: Charge, dc: &DiracConfig) -> Result<(f64, f64)> {
    let q = resolve_rel(j, dc.l_start(j), 0, charge.spin_up(), dc)?;
    Ok((q.n1, q.n2))
}

/// Amplitude z₁^{n₁}z₂^{n₂}/√(Γ(1+n₁)Γ(1+n₂)) of a relativistic state.
pub fn rel_cs_coefficient(q: &RelQuantumNumbers, label: &CSLabel) -> Result<Complex64> {
    let mins = (q.n1, q.n2);
    Ok(crate::cs::ln_amplitude(q.n1, q.n2, label, mins, false)?.map_or(Complex64::new(0.0, 0.0), |c| c.exp()))
}

/// Σ conj(c_a) c_b over the whole lattice in closed form.
pub fn rel_cs_kernel(
    j: Branch,
    a: &CSLabel,
    b: &CSLabel,
    charge: Charge,
    dc: &DiracConfig,
    ctl: SeriesControl,
) -> Result<Complex64> {
    let (min1, min2) = lattice_mins(j, charge, dc)?;
    let p = a.z1.conj() * b.z1 * a.z2.conj() * b.z2;
    let q = match j {
        Branch::J0 => q_sum_complex(min2, p, ln_conj_product(a.z2, b.z2), ctl)?,
        Branch::J1 => q_sum_complex(min1, p, ln_conj_product(a.z1, b.z1), ctl)?,
    };
    Ok(q.value)
}

/// Ψ^{(j)}_{±,z₁,z₂} truncated by the same rules as the scalar series.
pub fn rel_cs(
    j: Branch,
    label: &CSLabel,
    dc: &DiracConfig,
    charge: Charge,
    ctl: SeriesControl,
    cache: &RuleCache,
    form: RelCsForm,
) -> Result<RelCoherentState> {
    let sigma = charge.spin_up();
    let mins = lattice_mins(j, charge, dc)?;
    let limit = is_zero_limit_with(label, mins);
    let step = if j == Branch::J0 { -1 } else { 1 };
    let (cs_blocks, _) = lattice_blocks(dc.l_start(j), step, label, ctl, mins, limit, &|l, m| {
        let q = resolve_rel(j, l, m, sigma, dc)?;
        Ok((q.n1, q.n2))
    })?;
    let mut blocks = Vec::with_capacity(cs_blocks.len());
    let mut weight = 0.0;
    let mut dropped = false;
    for b in cs_blocks {
        let mut terms = Vec::new();
        let mut acc: Option<Spinor2> = None;
        for (m, &c) in b.coeffs.iter().enumerate() {
            if c == Complex64::new(0.0, 0.0) {
                continue;
            }
            let q = resolve_rel(j, b.l, m, sigma, dc)?;
            let psi = match form {
                RelCsForm::Series => match dirac_spinor(&q, dc, charge, cache) {
                    Ok(psi) => {
                        weight += c.norm_sqr();
                        psi
                    }
                    // massless zero modes carry no spinor of either charge
                    Err(MsfError::ZeroNorm(_)) if dc.mass == 0.0 => {
                        dropped = true;
                        continue;
                    }
                    Err(e) => return Err(e),
                },
                RelCsForm::Operator => {
                    weight += c.norm_sqr() * raw_norm_sqr(&q, dc, charge);
                    dirac_spinor_raw(&q, dc, charge, cache)?
                }
            };
            let term = psi.scale(c);
            acc = Some(match acc {
                None => term,
                Some(s) => s.add(&term)?,
            });
            terms.push((q, c));
        }
        if let Some(spinor) = acc {
            blocks.push(RelBlock { l: b.l, terms, spinor });
        }
    }
    let norm_const = if form == RelCsForm::Series && !limit && !dropped {
        rel_cs_kernel(j, label, label, charge, dc, ctl)?.re
    } else {
        weight
    };
    if !(norm_const > 0.0) {
        return Err(MsfError::ZeroNorm("relativistic coherent state with vanishing series".into()));
    }
    Ok(RelCoherentState {
        j,
        label: *label,
        charge,
        form,
        dc: *dc,
        blocks,
        norm_const,
        zero_limit: limit,
        dropped_zero_modes: dropped,
        ctl,
    })
}

impl RelCoherentState {
    // whether the closed Q-type sum describes the series
    fn closed_norm(&self) -> bool {
        !self.zero_limit && !self.dropped_zero_modes
    }

    pub fn eval(&self, theta: f64, rho: f64) -> [Complex64; 2] {
        let mut out = [Complex64::new(0.0, 0.0); 2];
        for b in &self.blocks {
            let v = b.spinor.eval(theta, rho);
            out[0] += v[0];
            out[1] += v[1];
        }
        let s = self.norm_const.sqrt();
        [out[0] / s, out[1] / s]
    }

    /// (Ψ, Ψ)_D by quadrature of every block.
    pub fn norm_by_quadrature(&self, cache: &RuleCache) -> Result<f64> {
        let mut s = 0.0;
        for b in &self.blocks {
            s += b.spinor.inner_d(&b.spinor, &self.dc.cfg, cache)?.re;
        }
        Ok(s / self.norm_const)
    }

    fn check_pair(&self, other: &RelCoherentState) -> Result<()> {
        if self.dc != other.dc || self.form != other.form {
            return Err(MsfError::Usage("overlap of coherent states built on different configurations".into()));
        }
        Ok(())
    }

    /// (Ψ_a, Ψ_b)_D by spinor quadrature.
    pub fn overlap_quadrature(&self, other: &RelCoherentState, cache: &RuleCache) -> Result<Complex64> {
        self.check_pair(other)?;
        let mut s = Complex64::new(0.0, 0.0);
        for a in &self.blocks {
            if let Some(b) = other.blocks.iter().find(|b| b.l == a.l) {
                s += a.spinor.inner_d(&b.spinor, &self.dc.cfg, cache)?;
            }
        }
        Ok(s / (self.norm_const * other.norm_const).sqrt())
    }

    /// The overlap formula: the closed Q-type sum for the series form,
    /// 2(Φ, Π₀(Π₀+M)Φ')_⊥ evaluated mode by mode for the operator form.
    /// Zero across branches and across charges.
    pub fn overlap_closed(&self, other: &RelCoherentState) -> Result<Complex64> {
        self.check_pair(other)?;
        if self.j != other.j || self.charge != other.charge {
            return Ok(Complex64::new(0.0, 0.0));
        }
        let norm = (self.norm_const * other.norm_const).sqrt();
        if self.form == RelCsForm::Series && self.closed_norm() && other.closed_norm() {
            let r = rel_cs_kernel(self.j, &self.label, &other.label, self.charge, &self.dc, self.ctl)?;
            return Ok(r / norm);
        }
        let mut s = Complex64::new(0.0, 0.0);
        for a in &self.blocks {
            let Some(b) = other.blocks.iter().find(|b| b.l == a.l) else { continue };
            for (qa, ca) in &a.terms {
                let Some((_, cb)) = b.terms.iter().find(|(qb, _)| qb.m == qa.m) else { continue };
                let w = match self.form {
                    RelCsForm::Series => 1.0,
                    RelCsForm::Operator => raw_norm_sqr(qa, &self.dc, self.charge),
                };
                s += ca.conj() * cb * w;
            }
        }
        Ok(s / norm)
    }
}
