//! Resolution of unity for the coherent states and the radial propagator.
//!
//! The four-dimensional z-integrals reduce to (u, v) = (|z₁|², |z₂|²) integrals
//! once the phase integrals are done: ∫d²z = π∫du after the angle, and the angle
//! integrals of the amplitude products give Kronecker deltas.

use num_complex::Complex64;
use std::cell::RefCell;
use std::f64::consts::PI;

use crate::cs::cs_normalization;
use crate::error::{domain, MsfError, Result};
use crate::landau::{resolve_qnums, Branch, FieldConfig, GridFunction, QuantumNumbers};
use crate::quadrature::{composite_gl, exp_sinh, RuleCache};
use crate::specfun::{bessel_i, bessel_i_repr, erf, laguerre_fn_table, ln_gamma, q_sum, SeriesControl};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WeightSpec {
    pub j: Branch,
    pub mu: f64,
}

/// W₀ = π^{−2} e^{−(u+v)} Q_{1−μ}(√u, √v), W₁ = π^{−2} e^{−(u+v)} Q_μ(√v, √u).
pub fn weight_fn(spec: WeightSpec, u: f64, v: f64) -> Result<f64> {
    if !(u >= 0.0) || !(v >= 0.0) {
        return domain(format!("weight_fn needs u, v >= 0, got ({u}, {v})"));
    }
    let ctl = SeriesControl::default();
    let q = match spec.j {
        Branch::J0 => q_sum(1.0 - spec.mu, u.sqrt(), v.sqrt(), ctl)?,
        Branch::J1 => q_sum(spec.mu, v.sqrt(), u.sqrt(), ctl)?,
    };
    Ok((q.ln_value - u - v).exp() / (PI * PI))
}

/// W_j at μ = ½: [erf(√u+√v) ∓ erf(√u−√v)] / (2π²), minus for j=0.
pub fn weight_half_closed(j: Branch, u: f64, v: f64) -> Result<f64> {
    if !(u >= 0.0) || !(v >= 0.0) {
        return domain(format!("weight_half_closed needs u, v >= 0, got ({u}, {v})"));
    }
    let (a, b) = (u.sqrt(), v.sqrt());
    let s = match j {
        Branch::J0 => -1.0,
        Branch::J1 => 1.0,
    };
    Ok((erf(a + b) + s * erf(a - b)) / (2.0 * PI * PI))
}

/// ∫₀^∞ x^n e^{−x} dx by the exp-sinh rule against Γ(1+n).
/// Returns (quadrature value, Γ value, absolute discrepancy).
pub fn moment_check(n: f64) -> Result<(f64, f64, f64)> {
    if !(n > -1.0) {
        return domain(format!("moment_check needs n > -1, got {n}"));
    }
    let quad = exp_sinh(|lx| n * lx - lx.exp(), 1.0 / 64.0);
    let gamma = ln_gamma(1.0 + n)?.exp();
    Ok((quad, gamma, (quad - gamma).abs()))
}

fn split_exponent(p: f64) -> (f64, i32) {
    let k = p.floor();
    (p - k, k as i32)
}

/// π²∫∫ u^p v^q (W_j/N_j) du dv by tensor Gauss–Laguerre with the fractional parts
/// of p, q in the rule and the integer parts as polynomial factors.
fn weighted_moment(j: Branch, mu: f64, p: f64, q: f64, cache: &RuleCache) -> Result<f64> {
    let (ap, kp) = split_exponent(p);
    let (aq, kq) = split_exponent(q);
    let ru = cache.rule(ap)?;
    let rv = cache.rule(aq)?;
    let spec = WeightSpec { j, mu };
    let ctl = SeriesControl::default();
    let mut acc = 0.0;
    for (&u, &wu) in ru.nodes.iter().zip(&ru.weights) {
        for (&v, &wv) in rv.nodes.iter().zip(&rv.weights) {
            let w = weight_fn(spec, u, v)?;
            let n = cs_normalization(j, u, v, mu, ctl)?;
            // W/N carries e^{−u−v}, which the rule weights already hold
            let ratio = PI * PI * w / n * (u + v).exp();
            acc += wu * wv * u.powi(kp) * v.powi(kq) * ratio;
        }
    }
    Ok(acc)
}

/// Exponents (n₁, n₂) of the squared amplitude of state (l, m).
fn exponents(j: Branch, l: i64, m: usize, mu: f64) -> Result<QuantumNumbers> {
    resolve_qnums(j, l, m, &FieldConfig::new(1.0, 0, mu)?)
}

/// G(m, n; l, k) = ∫d²z₁d²z₂ W_j/N_j · conj(amplitude_{l,m}) amplitude_{k,n} ·Γ(1+n₁)Γ(1+n₂)-unnormalized;
/// the angle integrals give δ_{mn}δ_{lk}, the rest is done by quadrature.
pub fn g_matrix(m: usize, n: usize, l: i64, k: i64, mu: f64, j: Branch, cache: &RuleCache) -> Result<f64> {
    if Branch::of(l) != j || Branch::of(k) != j {
        return domain(format!("l = {l}, k = {k} not both on branch j = {j}"));
    }
    if m != n || l != k {
        return Ok(0.0);
    }
    let q = exponents(j, l, m, mu)?;
    weighted_moment(j, mu, q.n1, q.n2, cache)
}

/// Closed form Γ(1+n₁)Γ(1+n₂) of the diagonal G entries.
pub fn g_closed(m: usize, l: i64, mu: f64, j: Branch) -> Result<f64> {
    let q = exponents(j, l, m, mu)?;
    Ok((ln_gamma(1.0 + q.n1)? + ln_gamma(1.0 + q.n2)?).exp())
}

/// ⟨φ_a| ∫dν W_j |Φ⟩⟨Φ| |φ_b⟩ for the given branch-j states.
///
/// ⟨φ_a|Φ_z⟩ = N_j^{−½} Σ_m c_m(z) (φ_a, φ_{l,m})_⊥ with the overlaps by radial
/// quadrature; after the phase integrals only |c_m|² survive, each integrated
/// against W_j/N_j by [`g_matrix`]. The m-sum runs `extra_m` beyond the basis.
pub fn unity_reconstruction(
    basis: &[QuantumNumbers],
    mu: f64,
    j: Branch,
    cache: &RuleCache,
    extra_m: usize,
) -> Result<Vec<Vec<f64>>> {
    let cfg = FieldConfig::new(1.0, 0, mu)?;
    for q in basis {
        if q.j != j || (q.n1 - exponents(j, q.l, q.m, mu)?.n1).abs() > 1e-12 {
            return Err(MsfError::Usage(format!("state (l={}, m={}) is not a branch-{j} state at mu={mu}", q.l, q.m)));
        }
    }
    let n = basis.len();
    let mut out = vec![vec![0.0; n]; n];
    let m_top = basis.iter().map(|q| q.m).max().unwrap_or(0) + extra_m;
    let mut ls: Vec<i64> = basis.iter().map(|q| q.l).collect();
    ls.sort_unstable();
    ls.dedup();
    for l in ls {
        let idx: Vec<usize> = (0..n).filter(|&i| basis[i].l == l).collect();
        let alpha = basis[idx[0]].alpha();
        let grid = cache.rule(alpha)?;
        let full: Vec<GridFunction> = (0..=m_top)
            .map(|m| Ok(GridFunction::from_state(&resolve_qnums(j, l, m, &cfg)?, &cfg, grid.clone())))
            .collect::<Result<_>>()?;
        // T_m = π²∫∫(W/N)|c_m|² = G(m,m;l,l)/(Γ(1+n₁)Γ(1+n₂))
        let mut t = Vec::with_capacity(m_top + 1);
        for m in 0..=m_top {
            t.push(g_matrix(m, m, l, l, mu, j, cache)? / g_closed(m, l, mu, j)?);
        }
        let mut overlaps = Vec::with_capacity(idx.len());
        for &i in &idx {
            let a = &full[basis[i].m];
            let row: Vec<Complex64> =
                full.iter().map(|f| crate::landau::inner_product_perp(a, f, &cfg)).collect::<Result<_>>()?;
            overlaps.push(row);
        }
        for (x, &a) in idx.iter().enumerate() {
            for (y, &b) in idx.iter().enumerate() {
                let s: Complex64 = (0..=m_top).map(|m| overlaps[x][m] * overlaps[y][m].conj() * t[m]).sum();
                out[a][b] = s.re;
            }
        }
    }
    Ok(out)
}

/// One angular channel of the propagator at complex time difference Δt.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KernelParams {
    pub j: Branch,
    pub l: i64,
    pub delta_t: Complex64,
    pub cfg: FieldConfig,
}

impl KernelParams {
    pub fn new(l: i64, delta_t: Complex64, cfg: FieldConfig) -> Result<Self> {
        if delta_t.im > 0.0 {
            return domain(format!("kernel needs Im dt <= 0, got {delta_t}"));
        }
        Ok(Self { j: Branch::of(l), l, delta_t, cfg })
    }

    /// Wick-rotated Δt = −iτ.
    pub fn wick(l: i64, tau: f64, cfg: FieldConfig) -> Result<Self> {
        if !(tau > 0.0) {
            return domain(format!("tau must be positive, got {tau}"));
        }
        Self::new(l, Complex64::new(0.0, -tau), cfg)
    }

    fn alpha(&self) -> f64 {
        (self.l as f64 + self.cfg.mu).abs()
    }
}

/// Closed (Hille–Hardy) form of the channel kernel
/// (γ/4π) exp[i(l−l₀)Δθ − iγ(l+μ)Δt/2 + (i/2)(ρ+ρ')cot φ − ln sin φ] I_ν(√(ρρ')/(i sin φ)),
/// φ = γΔt/2, ν = |l+μ|; principal branches, continuous from the Wick axis.
pub fn propagator_closed(p: &KernelParams, dtheta: f64, rho: f64, rho_p: f64) -> Result<Complex64> {
    if rho < 0.0 || rho_p < 0.0 {
        return domain("propagator needs rho, rho' >= 0");
    }
    let cfg = &p.cfg;
    let phi = p.delta_t * (cfg.gamma / 2.0);
    let s = phi.sin();
    if s.norm() < 1e-300 || s.norm() < 1e-14 * phi.norm().max(1.0) {
        return Err(MsfError::Singular(format!("sin(gamma dt / 2) vanishes at dt = {}", p.delta_t)));
    }
    let i = Complex64::new(0.0, 1.0);
    let lmu = p.l as f64 + cfg.mu;
    let ln_pref = Complex64::new((cfg.gamma / (4.0 * PI)).ln(), (p.l - cfg.l0) as f64 * dtheta)
        - i * cfg.gamma * lmu * p.delta_t / 2.0
        + i * 0.5 * (rho + rho_p) * (phi.cos() / s)
        - s.ln();
    let z = (rho * rho_p).sqrt() / (i * s);
    let b = bessel_i_repr(p.alpha(), z)?;
    Ok(b.mantissa * (ln_pref + b.log_scale).exp())
}

/// i Σ_m e^{−iE_{n₁}Δt} φ(x) φ*(x') for Im Δt < 0, truncated with a tail bound
/// from |I_{m+α,m}| ≤ 1 and the geometric factor e^{γ Im Δt}.
pub fn propagator_series(p: &KernelParams, dtheta: f64, rho: f64, rho_p: f64, ctl: SeriesControl) -> Result<Complex64> {
    if !(p.delta_t.im < 0.0) {
        return domain(format!("the mode sum needs Im dt < 0, got {}", p.delta_t));
    }
    let cfg = &p.cfg;
    let alpha = p.alpha();
    let r = (cfg.gamma * p.delta_t.im).exp();
    let pref = Complex64::new(0.0, cfg.gamma / (2.0 * PI)) * Complex64::new(0.0, (p.l - cfg.l0) as f64 * dtheta).exp();
    let shift = match p.j {
        Branch::J0 => 0.0,
        Branch::J1 => p.l as f64 + cfg.mu,
    };
    let mut m_max = ((ctl.rel_tol * 1e-3).ln() / r.ln()).ceil().max(8.0) as usize;
    loop {
        if m_max > ctl.max_terms {
            return Err(MsfError::Truncation { what: "propagator mode sum", terms: ctl.max_terms, tail: f64::NAN });
        }
        let ta = laguerre_fn_table(alpha, m_max, rho)?;
        let tb = laguerre_fn_table(alpha, m_max, rho_p)?;
        let mut s = Complex64::new(0.0, 0.0);
        for m in 0..=m_max {
            let e = cfg.gamma * (m as f64 + shift + 0.5);
            s += (Complex64::new(0.0, -e) * p.delta_t).exp() * (ta[m] * tb[m]);
        }
        let base = (cfg.gamma * (shift + 0.5) * p.delta_t.im).exp();
        let tail = base * r.powf(m_max as f64 + 1.0) / (1.0 - r);
        if tail <= ctl.rel_tol * s.norm() || s.norm() == 0.0 && tail < 1e-300 {
            return Ok(pref * s);
        }
        m_max *= 2;
    }
}

/// Smearing panels: composite Gauss–Legendre fine enough for the kernel width.
fn radial_panels(tau_width: f64, hi: f64) -> usize {
    ((hi / tau_width.max(1e-3)).ceil() as usize).clamp(64, 20_000)
}

/// ∫₀^∞ dρ' K(ρ, ρ') g(ρ') for a test function concentrated below `hi`.
pub fn smear_radial<G: Fn(f64) -> f64>(p: &KernelParams, dtheta: f64, rho: f64, g: G, hi: f64) -> Result<Complex64> {
    // width of the kernel peak ~ √(ρ sinh γτ)
    let tau = -p.delta_t.im;
    let width = (rho.max(0.1) * (p.cfg.gamma * tau).sinh()).sqrt();
    let panels = radial_panels(width / 2.0, hi);
    let err = RefCell::new(None);
    let v = composite_gl(0.0, hi, panels, 16, |x| match propagator_closed(p, dtheta, rho, x) {
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

/// |smeared kernel − i(γ/2π)e^{i(l−l₀)Δθ} g(ρ)| along Δt = −iτ.
pub fn delta_limit_error<G: Fn(f64) -> f64 + Copy>(
    l: i64,
    tau: f64,
    cfg: &FieldConfig,
    dtheta: f64,
    rho: f64,
    g: G,
    hi: f64,
) -> Result<f64> {
    let p = KernelParams::wick(l, tau, *cfg)?;
    let v = smear_radial(&p, dtheta, rho, g, hi)?;
    let target =
        Complex64::new(0.0, cfg.gamma / (2.0 * PI)) * Complex64::new(0.0, (l - cfg.l0) as f64 * dtheta).exp() * g(rho);
    Ok((v - target).norm())
}

/// Full kernel smeared in both θ' (against h(θ') = e^{cos θ'}) and ρ' (against g),
/// assembled from the angular channels. Fourier coefficients of h are I_L(1), so
/// the τ → 0 limit is iγ h(θ) g(ρ). Returns (smeared value, limit value).
pub fn smear_angular_radial<G: Fn(f64) -> f64 + Copy>(
    tau: f64,
    cfg: &FieldConfig,
    theta: f64,
    rho: f64,
    g: G,
    hi: f64,
    l_span: i64,
) -> Result<(Complex64, Complex64)> {
    let mut acc = Complex64::new(0.0, 0.0);
    for big_l in -l_span..=l_span {
        let l = big_l + cfg.l0;
        let p = KernelParams::wick(l, tau, *cfg)?;
        let radial = smear_radial(&p, 0.0, rho, g, hi)?;
        let h_l = bessel_i(big_l as f64, Complex64::new(1.0, 0.0))?;
        acc += radial * h_l * 2.0 * PI * Complex64::new(0.0, big_l as f64 * theta).exp();
    }
    let limit = Complex64::new(0.0, cfg.gamma) * theta.cos().exp() * g(rho);
    Ok((acc, limit))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn weight_examples() {
        let w = weight_half_closed(Branch::J0, 1.0, 1.0).unwrap();
        assert_relative_eq!(w, erf(2.0) / (2.0 * PI * PI), max_relative = 1e-15);
        assert_relative_eq!(w, 0.050_423_6, max_relative = 1e-5);
        assert_eq!(
            weight_half_closed(Branch::J0, 2.0, 2.0).unwrap(),
            weight_half_closed(Branch::J1, 2.0, 2.0).unwrap()
        );
        assert_relative_eq!(
            weight_half_closed(Branch::J0, 0.0, 2.0).unwrap(),
            erf(2f64.sqrt()) / (PI * PI),
            max_relative = 1e-15
        );
        let spec = WeightSpec { j: Branch::J0, mu: 0.3 };
        assert_eq!(weight_fn(spec, 1.5, 0.0).unwrap(), 0.0);
    }

    #[test]
    fn series_weight_matches_erf_form() {
        for &(u, v) in &[(0.0, 0.0), (0.5, 2.0), (3.0, 3.0), (9.0, 0.1), (7.5, 8.5)] {
            for j in [Branch::J0, Branch::J1] {
                let a = weight_fn(WeightSpec { j, mu: 0.5 }, u, v).unwrap();
                let b = weight_half_closed(j, u, v).unwrap();
                assert!((a - b).abs() <= 1e-12 * b.abs().max(1e-3), "{j} {u} {v}: {a} vs {b}");
            }
        }
    }

    #[test]
    fn moments() {
        let (q, g, e) = moment_check(0.0).unwrap();
        assert_relative_eq!(q, 1.0, max_relative = 1e-13);
        assert_eq!(g, 1.0);
        assert!(e < 1e-12);
        let (_, g, e) = moment_check(2.5).unwrap();
        assert_relative_eq!(g, 3.323_350_970_447_843, max_relative = 1e-14);
        assert!(e < 1e-11);
        let (q, _, _) = moment_check(2.7).unwrap();
        assert_relative_eq!(q, ln_gamma(3.7).unwrap().exp(), max_relative = 1e-12);
    }

    #[test]
    fn g_matrix_examples() {
        let cache = RuleCache::new(40);
        let v = g_matrix(1, 1, -1, -1, 0.5, Branch::J0, &cache).unwrap();
        assert_relative_eq!(v, ln_gamma(2.5).unwrap().exp(), max_relative = 1e-10);
        assert_relative_eq!(v, 1.329_340_388_179_137, max_relative = 1e-10);
        let v = g_matrix(0, 0, -1, -1, 0.0, Branch::J0, &cache).unwrap();
        assert_relative_eq!(v, 1.0, max_relative = 1e-10);
        assert_eq!(g_matrix(1, 2, -1, -1, 0.5, Branch::J0, &cache).unwrap(), 0.0);
        assert_eq!(g_matrix(1, 1, 2, 3, 0.5, Branch::J1, &cache).unwrap(), 0.0);
        assert!(g_matrix(0, 0, 0, 0, 0.5, Branch::J0, &cache).is_err());
    }

    #[test]
    fn unity_small_block() {
        let cache = RuleCache::new(40);
        let cfg = FieldConfig::new(1.0, 0, 0.5).unwrap();
        let basis: Vec<_> = [(1i64, 0usize), (1, 2), (2, 1)]
            .iter()
            .map(|&(l, m)| resolve_qnums(Branch::J1, l, m, &cfg).unwrap())
            .collect();
        let g = unity_reconstruction(&basis, 0.5, Branch::J1, &cache, 2).unwrap();
        for (a, row) in g.iter().enumerate() {
            for (b, v) in row.iter().enumerate() {
                let d = if a == b { 1.0 } else { 0.0 };
                assert!((v - d).abs() < 1e-9, "{a},{b}: {v}");
            }
        }
        assert_eq!(g[0][2], 0.0);
    }

    #[test]
    fn closed_kernel_matches_mode_sum() {
        let cfg = FieldConfig::new(1.0, 0, 0.3).unwrap();
        let p = KernelParams::new(-1, Complex64::new(0.0, -0.2), cfg).unwrap();
        let a = propagator_closed(&p, 0.7, 1.0, 2.0).unwrap();
        let b = propagator_series(&p, 0.7, 1.0, 2.0, SeriesControl::default()).unwrap();
        assert!((a - b).norm() <= 1e-10 * b.norm(), "{a} vs {b}");
        // off the Wick axis
        let cfg = FieldConfig::new(1.3, 2, 0.6).unwrap();
        let p = KernelParams::new(3, Complex64::new(0.4, -0.5), cfg).unwrap();
        let a = propagator_closed(&p, -0.4, 0.6, 2.5).unwrap();
        let b = propagator_series(&p, -0.4, 0.6, 2.5, SeriesControl::default()).unwrap();
        assert!((a - b).norm() <= 1e-10 * b.norm(), "{a} vs {b}");
    }

    #[test]
    fn first_mode_is_single_product() {
        // with one mode only the m=0 product survives
        let cfg = FieldConfig::new(1.0, 0, 0.3).unwrap();
        let q = resolve_qnums(Branch::J1, 2, 0, &cfg).unwrap();
        let p = KernelParams::wick(2, 40.0, cfg).unwrap();
        let s = propagator_series(&p, 0.0, 1.0, 1.5, SeriesControl::default()).unwrap();
        let e = crate::landau::energy_nonrel(&q, &cfg);
        let a = crate::landau::stationary_state(&q, 0.0, 1.0, &cfg).unwrap();
        let b = crate::landau::stationary_state(&q, 0.0, 1.5, &cfg).unwrap();
        let one = Complex64::new(0.0, 1.0) * (-e * 40.0f64).exp() * a * b.conj();
        assert!((s - one).norm() < 1e-12 * one.norm());
        assert!(propagator_series(
            &KernelParams::new(2, Complex64::new(1.0, 0.0), cfg).unwrap(),
            0.0,
            1.0,
            1.0,
            SeriesControl::default()
        )
        .is_err());
    }

    #[test]
    fn singular_times_rejected() {
        let cfg = FieldConfig::new(2.0, 0, 0.3).unwrap();
        let p = KernelParams::new(1, Complex64::new(PI, 0.0), cfg).unwrap();
        assert!(matches!(propagator_closed(&p, 0.0, 1.0, 1.0), Err(MsfError::Singular(_))));
    }

    #[test]
    fn delta_limit_shrinks() {
        let cfg = FieldConfig::new(1.0, 0, 0.3).unwrap();
        let g = |x: f64| (-(x - 2.0) * (x - 2.0)).exp();
        let mut prev = f64::INFINITY;
        for &tau in &[0.2, 0.1, 0.05, 0.02] {
            let e = delta_limit_error(-1, tau, &cfg, 0.4, 2.0, g, 12.0).unwrap();
            assert!(e < prev, "tau {tau}: {e} >= {prev}");
            prev = e;
        }
        // the error is first order in τ: one Richardson step removes it
        let at = |tau: f64| smear_radial(&KernelParams::wick(-1, tau, cfg).unwrap(), 0.4, 2.0, g, 12.0).unwrap();
        let extrap = at(0.01) * 2.0 - at(0.02);
        let target = Complex64::new(0.0, 1.0 / (2.0 * PI)) * Complex64::new(0.0, -0.4).exp() * g(2.0);
        assert!((extrap - target).norm() < 1e-2 * target.norm(), "{extrap} vs {target}");
    }

    #[test]
    fn angular_smearing_limit() {
        let cfg = FieldConfig::new(1.0, 1, 0.3).unwrap();
        let g = |x: f64| (-(x - 2.0) * (x - 2.0)).exp();
        let (v1, lim) = smear_angular_radial(0.04, &cfg, 0.5, 2.0, g, 12.0, 14).unwrap();
        let (v2, _) = smear_angular_radial(0.02, &cfg, 0.5, 2.0, g, 12.0, 14).unwrap();
        assert!((v2 - lim).norm() < (v1 - lim).norm());
        let extrap = v2 * 2.0 - v1;
        assert!((extrap - lim).norm() < 3e-2 * lim.norm(), "{extrap} vs {lim}");
    }
}
