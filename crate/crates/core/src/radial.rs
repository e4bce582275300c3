//! Radial profiles with a definite angular index, and the first-order operators
//! P_± = P_x ± iP_y of a charge in the magnetic-solenoid field acting on them.
//!
//! A profile is a closure in ρ together with its leading exponent β at the
//! origin (profile ~ ρ^β). The exponent fixes the Gauss–Laguerre rule used for
//! inner products, so quadrature stays exact for e^{−ρ}ρ^a × polynomial.

use num_complex::Complex64;
use std::f64::consts::PI;
use std::fmt;
use std::sync::Arc;

use crate::error::{MsfError, Result};
use crate::landau::FieldConfig;
use crate::quadrature::RuleCache;

type Profile = Arc<dyn Fn(f64) -> Complex64 + Send + Sync>;

/// A complex radial profile f(ρ) ~ ρ^exponent near the origin; `None` is the zero function.
#[derive(Clone)]
pub struct RadialFn {
    f: Option<Profile>,
    pub exponent: f64,
}

impl fmt::Debug for RadialFn {
    fn fmt(&self, fm: &mut fmt::Formatter<'_>) -> fmt::Result {
        fm.debug_struct("RadialFn").field("zero", &self.f.is_none()).field("exponent", &self.exponent).finish()
    }
}

impl RadialFn {
    pub fn new<F>(exponent: f64, f: F) -> Self
    where
        F: Fn(f64) -> Complex64 + Send + Sync + 'static,
    {
        Self { f: Some(Arc::new(f)), exponent }
    }

    pub fn zero() -> Self {
        Self { f: None, exponent: f64::INFINITY }
    }

    pub fn is_zero(&self) -> bool {
        self.f.is_none()
    }

    pub fn eval(&self, rho: f64) -> Complex64 {
        match &self.f {
            Some(f) => f(rho),
            None => Complex64::new(0.0, 0.0),
        }
    }

    pub fn scale(&self, c: Complex64) -> Self {
        match &self.f {
            None => Self::zero(),
            Some(_) if c == Complex64::new(0.0, 0.0) => Self::zero(),
            Some(f) => {
                let f = f.clone();
                Self::new(self.exponent, move |r| c * f(r))
            }
        }
    }

    pub fn add(&self, other: &RadialFn) -> Self {
        match (&self.f, &other.f) {
            (None, _) => other.clone(),
            (_, None) => self.clone(),
            (Some(a), Some(b)) => {
                let (a, b) = (a.clone(), b.clone());
                Self::new(self.exponent.min(other.exponent), move |r| a(r) + b(r))
            }
        }
    }
}

// 9-point central first-derivative stencil
const STENCIL: [f64; 4] = [4.0 / 5.0, -1.0 / 5.0, 4.0 / 105.0, -1.0 / 280.0];

/// Step in t = ln ρ; small enough to resolve e^{−ρ/2} at large ρ.
pub fn log_step(rho: f64) -> f64 {
    0.01f64.min(0.1 / rho)
}

/// ρ f'(ρ) = df/d(ln ρ) by the order-8 central stencil on a logarithmic grid.
/// Stencil points stay strictly positive, so irregular profiles are safe.
pub fn log_derivative(f: &RadialFn, rho: f64) -> Complex64 {
    let h = log_step(rho);
    let mut acc = Complex64::new(0.0, 0.0);
    for (k, c) in STENCIL.iter().enumerate() {
        let s = (k + 1) as f64 * h;
        acc += (f.eval(rho * s.exp()) - f.eval(rho * (-s).exp())) * *c;
    }
    acc / h
}

/// A radial profile carrying the angular factor e^{iLθ}, L = l − l₀.
#[derive(Clone, Debug)]
pub struct Component {
    pub angular: i64,
    pub profile: RadialFn,
}

impl Component {
    pub fn new(angular: i64, profile: RadialFn) -> Self {
        Self { angular, profile }
    }

    pub fn zero(angular: i64) -> Self {
        Self { angular, profile: RadialFn::zero() }
    }

    pub fn eval(&self, theta: f64, rho: f64) -> Complex64 {
        if self.profile.is_zero() {
            return Complex64::new(0.0, 0.0);
        }
        Complex64::new(0.0, self.angular as f64 * theta).exp() * self.profile.eval(rho)
    }

    pub fn scale(&self, c: Complex64) -> Self {
        Self { angular: self.angular, profile: self.profile.scale(c) }
    }

    pub fn add(&self, other: &Component) -> Result<Self> {
        if self.profile.is_zero() {
            return Ok(other.clone());
        }
        if other.profile.is_zero() {
            return Ok(self.clone());
        }
        if self.angular != other.angular {
            return Err(MsfError::Usage(format!(
                "cannot add components with angular indices {} and {}",
                self.angular, other.angular
            )));
        }
        Ok(Self { angular: self.angular, profile: self.profile.add(&other.profile) })
    }
}

fn ladder(c: &Component, field: &FieldConfig, raise: bool) -> Component {
    let shift = if raise { 1 } else { -1 };
    if c.profile.is_zero() {
        return Component::zero(c.angular + shift);
    }
    // c_eff = l + μ for the angular index of the input
    let ceff = (c.angular + field.l0) as f64 + field.mu;
    let beta = c.profile.exponent;
    let sign = if raise { -1.0 } else { 1.0 };
    let cancels = if raise { (beta - ceff / 2.0).abs() < 1e-9 } else { (beta + ceff / 2.0).abs() < 1e-9 };
    let exponent = if cancels { beta + 0.5 } else { beta - 0.5 };
    let k = (2.0 * field.gamma).sqrt();
    let f = c.profile.clone();
    let profile = RadialFn::new(exponent, move |rho| {
        let sr = rho.sqrt();
        let d = log_derivative(&f, rho) / sr;
        let v = f.eval(rho) * (ceff / (2.0 * sr) + sr / 2.0);
        Complex64::new(0.0, -k) * (d + v * sign)
    });
    Component::new(c.angular + shift, profile)
}

/// P_+ = P_x + iP_y: raises the angular index by one.
pub fn p_plus(c: &Component, field: &FieldConfig) -> Component {
    ladder(c, field, true)
}

/// P_− = P_x − iP_y: lowers the angular index by one.
pub fn p_minus(c: &Component, field: &FieldConfig) -> Component {
    ladder(c, field, false)
}

/// (f, g)_⊥ = (1/γ)∫dρ∫dθ f* g with the angle done analytically.
pub fn inner_product_components(
    f: &Component,
    g: &Component,
    field: &FieldConfig,
    cache: &RuleCache,
) -> Result<Complex64> {
    if f.angular != g.angular || f.profile.is_zero() || g.profile.is_zero() {
        return Ok(Complex64::new(0.0, 0.0));
    }
    let a = f.profile.exponent + g.profile.exponent;
    if !(a > -1.0) {
        return Err(MsfError::NotIntegrable(a));
    }
    let rule = cache.rule(a)?;
    let mut acc = Complex64::new(0.0, 0.0);
    for (&x, &w) in rule.nodes.iter().zip(&rule.reduced) {
        if w == 0.0 {
            continue;
        }
        acc += f.profile.eval(x).conj() * g.profile.eval(x) * w;
    }
    Ok(acc * (2.0 * PI / field.gamma))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn derivative_of_smooth_profiles() {
        let f = RadialFn::new(0.75, |r: f64| Complex64::new((-r / 2.0).exp() * r.powf(0.75), 0.0));
        for &r in &[1e-3f64, 0.3, 2.0, 40.0, 300.0] {
            let exact = (-r / 2.0).exp() * r.powf(0.75) * (0.75 - r / 2.0);
            let d = log_derivative(&f, r);
            assert!((d.re - exact).abs() <= 1e-11 * exact.abs().max(1e-300), "{r}: {} vs {exact}", d.re);
        }
    }

    #[test]
    fn zero_profiles_propagate() {
        let field = FieldConfig::new(1.0, 0, 0.3).unwrap();
        let z = Component::zero(2);
        assert!(p_plus(&z, &field).profile.is_zero());
        assert_eq!(p_minus(&z, &field).angular, 1);
        let one = Component::new(2, RadialFn::new(0.0, |_| Complex64::new(1.0, 0.0)));
        assert!(one.add(&Component::new(3, RadialFn::new(0.0, |_| Complex64::new(1.0, 0.0)))).is_err());
    }
}
