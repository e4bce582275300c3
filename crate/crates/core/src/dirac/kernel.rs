//! Proper-time kernel f_{σ,l} = A_{σ,l}(s) B_{σ,l}(s) Ξ_σ of the relativistic
//! Green function, Ξ_± = (1 ± σ³)/2.
//!
//! A = γ/(8π^{3/2} s^{1/2} sin γs) exp{iπ/4 − iM²s + i(l_σ−l₀)Δθ − i(l_σ+σ+μ)γs
//!       − iΔt²/(4s) + (i/2)(ρ+ρ') cot γs},
//! B = I_ν(z), z = e^{−iπ/2}√(ρρ')/sin γs.
//!
//! ν = |l_σ+μ| for l ≠ 0; at l = 0 the extension decides, ν = ±((1+σ)/2 − μ) for
//! ϑ = ±1, which is negative for the irregular profile. In every case ν is the
//! Laguerre order of the corresponding basis functions.

use num_complex::Complex64;
use std::cell::RefCell;
use std::f64::consts::PI;

use super::{resolve_rel, DiracConfig};
use crate::error::{domain, MsfError, Result};
use crate::quadrature::composite_gl;
use crate::specfun::{bessel_i_repr, laguerre_fn_table, SeriesControl};

fn check_sigma(sigma: i8) -> Result<()> {
    if sigma != 1 && sigma != -1 {
        return domain(format!("sigma must be +1 or -1, got {sigma}"));
    }
    Ok(())
}

/// Bessel index of B_{σ,l}.
pub fn kernel_bessel_order(sigma: i8, l: i64, dc: &DiracConfig) -> f64 {
    let half = if sigma > 0 { 1.0 } else { 0.0 };
    let mu = dc.cfg.mu;
    if l != 0 {
        let ls = l as f64 - half;
        (ls + mu).abs()
    } else if dc.vartheta > 0 {
        half - mu
    } else {
        mu - half
    }
}

fn sin_gs(s: Complex64, gamma: f64) -> Result<Complex64> {
    let sg = (s * gamma).sin();
    if s.norm() == 0.0 || sg.norm() < 1e-14 * (s * gamma).norm().max(1.0) {
        return Err(MsfError::Singular(format!("proper time s = {s} sits on a zero of sin(gamma s)")));
    }
    Ok(sg)
}

/// Everything in A·B except the time factor e^{iπ/4}(2√π s^{1/2})^{−1}e^{−iΔt²/4s}.
pub fn kernel_radial_factor(
    sigma: i8,
    l: i64,
    dc: &DiracConfig,
    s: Complex64,
    dtheta: f64,
    rho: f64,
    rho_p: f64,
) -> Result<Complex64> {
    check_sigma(sigma)?;
    if rho < 0.0 || rho_p < 0.0 {
        return domain("kernel needs rho, rho' >= 0");
    }
    let cfg = &dc.cfg;
    let sg = sin_gs(s, cfg.gamma)?;
    let i = Complex64::new(0.0, 1.0);
    let l_sigma = l - (1 + sigma as i64) / 2;
    let shift = l_sigma as f64 + sigma as f64 + cfg.mu;
    let ln_a = Complex64::new((cfg.gamma / (4.0 * PI)).ln(), (l_sigma - cfg.l0) as f64 * dtheta)
        - sg.ln()
        - i * dc.mass * dc.mass * s
        - i * shift * cfg.gamma * s
        + i * 0.5 * (rho + rho_p) * ((s * cfg.gamma).cos() / sg);
    let z = -i * (rho * rho_p).sqrt() / sg;
    let b = bessel_i_repr(kernel_bessel_order(sigma, l, dc), z)?;
    Ok(b.mantissa * (ln_a + b.log_scale).exp())
}

/// e^{iπ/4}(2√π s^{1/2})^{−1} e^{−iΔt²/(4s)}, which tends to δ(Δt) along s = −iτ.
pub fn kernel_time_factor(s: Complex64, dt: f64) -> Result<Complex64> {
    if s.norm() == 0.0 {
        return Err(MsfError::Singular("proper time s = 0".into()));
    }
    let i = Complex64::new(0.0, 1.0);
    Ok((i * PI / 4.0 - i * dt * dt / (4.0 * s)).exp() / (2.0 * PI.sqrt() * s.sqrt()))
}

/// f_{σ,l}(s) as a 2×2 matrix: A·B on the diagonal slot selected by σ.
#[allow(clippy::too_many_arguments)]
pub fn green_kernel_rel(
    sigma: i8,
    l: i64,
    dc: &DiracConfig,
    s: Complex64,
    dtheta: f64,
    dt: f64,
    rho: f64,
    rho_p: f64,
) -> Result<[[Complex64; 2]; 2]> {
    let v = kernel_time_factor(s, dt)? * kernel_radial_factor(sigma, l, dc, s, dtheta, rho, rho_p)?;
    let zero = Complex64::new(0.0, 0.0);
    Ok(if sigma > 0 { [[v, zero], [zero, zero]] } else { [[zero, zero], [zero, v]] })
}

/// i(γ/2π) e^{i(l_σ−l₀)Δθ − iM²s} Σ_m e^{−iE⊥²s} I_m(ρ) I_m(ρ') over the basis of
/// spin σ at this l; converges for Im s < 0.
#[allow(clippy::too_many_arguments)]
pub fn kernel_mode_sum(
    sigma: i8,
    l: i64,
    dc: &DiracConfig,
    s: Complex64,
    dtheta: f64,
    rho: f64,
    rho_p: f64,
    ctl: SeriesControl,
) -> Result<Complex64> {
    if !(s.im < 0.0) {
        return domain(format!("the mode sum needs Im s < 0, got {s}"));
    }
    let cfg = &dc.cfg;
    let q0 = resolve_rel(dc.branch_of(l), l, 0, sigma, dc)?;
    let alpha = q0.alpha();
    let r = (2.0 * cfg.gamma * s.im).exp();
    let pref = Complex64::new(0.0, cfg.gamma / (2.0 * PI))
        * Complex64::new(0.0, q0.angular(cfg) as f64 * dtheta).exp()
        * (Complex64::new(0.0, -dc.mass * dc.mass) * s).exp();
    let mut m_max = ((ctl.rel_tol * 1e-3).ln() / r.ln()).ceil().max(8.0) as usize;
    loop {
        if m_max > ctl.max_terms {
            return Err(MsfError::Truncation { what: "relativistic mode sum", terms: ctl.max_terms, tail: f64::NAN });
        }
        let ta = laguerre_fn_table(alpha, m_max, rho)?;
        let tb = laguerre_fn_table(alpha, m_max, rho_p)?;
        let mut acc = Complex64::new(0.0, 0.0);
        for m in 0..=m_max {
            let e2 = q0.e_perp2(cfg) + 2.0 * cfg.gamma * m as f64;
            acc += (Complex64::new(0.0, -e2) * s).exp() * (ta[m] * tb[m]);
        }
        let base = (q0.e_perp2(cfg) * s.im).exp();
        let tail = base * r.powf(m_max as f64 + 1.0) / (1.0 - r);
        if tail <= ctl.rel_tol * acc.norm() || acc.norm() == 0.0 && tail < 1e-300 {
            return Ok(pref * acc);
        }
        m_max *= 2;
    }
}

/// ∫₀^hi dρ' K(ρ, ρ') g(ρ') for the radial factor at s = −iτ.
#[allow(clippy::too_many_arguments)]
pub fn smear_kernel_radial<G: Fn(f64) -> f64>(
    sigma: i8,
    l: i64,
    dc: &DiracConfig,
    tau: f64,
    dtheta: f64,
    rho: f64,
    g: G,
    hi: f64,
) -> Result<Complex64> {
    if !(tau > 0.0) {
        return domain(format!("tau must be positive, got {tau}"));
    }
    let s = Complex64::new(0.0, -tau);
    let width = (rho.max(0.1) * (dc.cfg.gamma * tau).sinh()).sqrt();
    let panels = ((hi / (width / 2.0).max(1e-3)).ceil() as usize).clamp(64, 20_000);
    let err = RefCell::new(None);
    let v = composite_gl(0.0, hi, panels, 16, |x| match kernel_radial_factor(sigma, l, dc, s, dtheta, rho, x) {
        Ok(k) => k * g(x),
        Err(e) => {
            err.borrow_mut().get_or_insert(e);
            Complex64::new(0.0, 0.0)
        }
    });
    match err.into_inner() {
        Some(e) => Err(e),
        None => Ok(v),
    }
}

/// |smeared radial factor − i(γ/2π) e^{i(l_σ−l₀)Δθ} g(ρ)|.
#[allow(clippy::too_many_arguments)]
pub fn kernel_delta_limit_error<G: Fn(f64) -> f64 + Copy>(
    sigma: i8,
    l: i64,
    dc: &DiracConfig,
    tau: f64,
    dtheta: f64,
    rho: f64,
    g: G,
    hi: f64,
) -> Result<f64> {
    let v = smear_kernel_radial(sigma, l, dc, tau, dtheta, rho, g, hi)?;
    let l_sigma = l - (1 + sigma as i64) / 2;
    let target = Complex64::new(0.0, dc.cfg.gamma / (2.0 * PI))
        * Complex64::new(0.0, (l_sigma - dc.cfg.l0) as f64 * dtheta).exp()
        * g(rho);
    Ok((v - target).norm())
}
