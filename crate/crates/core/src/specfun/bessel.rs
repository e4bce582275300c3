//! Modified Bessel function of the first kind I_ν(z), real order, complex argument.
//!
//! Power series for small |z|, the two-exponential large-argument expansion
//! otherwise. Values are carried as mantissa × e^{scale} internally so that the
//! scaled variant never overflows. Near the imaginary axis the series cancels
//! (I_ν(iy) = i^ν J_ν(y)); accuracy there degrades roughly like e^{|Im z|}·ε.

use num_complex::Complex64;
use std::f64::consts::PI;

use super::gamma::{gamma_sign, ln_gamma};
use crate::error::{domain, MsfError, Result};

const RESCALE: f64 = 1e250;
const ASYMPTOTIC_MIN: f64 = 20.0;

/// A value represented as `mantissa * exp(log_scale)`.
#[derive(Debug, Clone, Copy)]
pub(crate) struct Scaled {
    pub mantissa: Complex64,
    pub log_scale: f64,
}

impl Scaled {
    pub fn value(self) -> Complex64 {
        if self.mantissa == Complex64::new(0.0, 0.0) {
            return self.mantissa;
        }
        self.mantissa * self.log_scale.exp()
    }
}

fn is_neg_integer(nu: f64) -> bool {
    nu < 0.0 && nu == nu.floor()
}

/// Σ_k q^k / (k! Γ(ν+k+1)); ν+1 must not be a pole.
pub(crate) fn entire_series(nu: f64, q: Complex64) -> Result<Scaled> {
    let lg = ln_gamma(nu + 1.0)?;
    let mut term = Complex64::new(gamma_sign(nu + 1.0), 0.0);
    let mut sum = term;
    let mut log_scale = -lg;
    let qn = q.norm();
    let mut k = 0usize;
    loop {
        let kf = k as f64;
        let denom = (kf + 1.0) * (nu + kf + 1.0);
        term *= q / denom;
        sum += term;
        k += 1;
        if term.norm() > RESCALE {
            term /= RESCALE;
            sum /= RESCALE;
            log_scale += RESCALE.ln();
        }
        let decreasing = denom.abs() > qn;
        if decreasing && term.norm() <= 1e-17 * sum.norm() {
            break;
        }
        if term == Complex64::new(0.0, 0.0) {
            break;
        }
        if k > 100_000 {
            return Err(MsfError::Truncation { what: "Bessel power series", terms: k, tail: term.norm() / sum.norm() });
        }
    }
    Ok(Scaled { mantissa: sum, log_scale })
}

// Large-|z| expansion for Re z >= 0; None when the series stops converging
// before reaching machine precision.
fn asymptotic_right(nu: f64, z: Complex64) -> Option<Scaled> {
    let mu4 = 4.0 * nu * nu;
    let mut a = Complex64::new(1.0, 0.0);
    let mut s1 = a;
    let mut s2 = a;
    let mut prev = f64::INFINITY;
    let mut converged = false;
    for k in 1..200 {
        let kf = k as f64;
        let two_k_m1 = 2.0 * kf - 1.0;
        a *= (mu4 - two_k_m1 * two_k_m1) / (8.0 * kf) / z;
        let n = a.norm();
        if n == 0.0 {
            converged = true;
            break;
        }
        if n > prev {
            break;
        }
        prev = n;
        if k % 2 == 1 {
            s1 -= a;
        } else {
            s1 += a;
        }
        s2 += a;
        if n < 1e-17 {
            converged = true;
            break;
        }
    }
    if !converged {
        return None;
    }
    let root = (z * 2.0 * PI).sqrt();
    // e^{z} split as e^{Re z} e^{i Im z}
    let mut mant = Complex64::new(0.0, z.im).exp() / root * s1;
    if z.im != 0.0 {
        let sgn = z.im.signum();
        let phase = Complex64::new(0.0, sgn) * Complex64::new(0.0, sgn * nu * PI).exp();
        mant += phase * (-z - z.re).exp() / root * s2;
    }
    Some(Scaled { mantissa: mant, log_scale: z.re })
}

pub(crate) fn bessel_i_repr(nu: f64, z: Complex64) -> Result<Scaled> {
    if !nu.is_finite() || !z.re.is_finite() || !z.im.is_finite() {
        return domain("bessel_i needs finite order and argument");
    }
    let nu = if is_neg_integer(nu) { -nu } else { nu };
    if z == Complex64::new(0.0, 0.0) {
        let v = if nu == 0.0 {
            1.0
        } else if nu > 0.0 {
            0.0
        } else {
            return Err(MsfError::Singular(format!("I_{nu}(0) diverges")));
        };
        return Ok(Scaled { mantissa: Complex64::new(v, 0.0), log_scale: 0.0 });
    }
    if z.norm() >= ASYMPTOTIC_MIN {
        let (w, phase) = if z.re >= 0.0 {
            (z, Complex64::new(1.0, 0.0))
        } else {
            // I_ν(w e^{±iπ}) = e^{±iπν} I_ν(w)
            let sgn = if z.im >= 0.0 { 1.0 } else { -1.0 };
            (-z, Complex64::new(0.0, sgn * PI * nu).exp())
        };
        if let Some(s) = asymptotic_right(nu, w) {
            return Ok(Scaled { mantissa: s.mantissa * phase, log_scale: s.log_scale });
        }
    }
    let core = entire_series(nu, z * z / 4.0)?;
    let lp = (z / 2.0).ln() * nu;
    Ok(Scaled { mantissa: core.mantissa * Complex64::new(0.0, lp.im).exp(), log_scale: core.log_scale + lp.re })
}

/// Principal-branch I_ν(z).
pub fn bessel_i(nu: f64, z: Complex64) -> Result<Complex64> {
    let s = bessel_i_repr(nu, z)?;
    let v = s.value();
    if !v.re.is_finite() || !v.im.is_finite() {
        return domain(format!("I_{nu}({z}) overflows; use bessel_i_scaled"));
    }
    Ok(v)
}

/// e^{−|Re z|} I_ν(z).
pub fn bessel_i_scaled(nu: f64, z: Complex64) -> Result<Complex64> {
    let s = bessel_i_repr(nu, z)?;
    Ok(Scaled { mantissa: s.mantissa, log_scale: s.log_scale - z.re.abs() }.value())
}

/// ln I_ν(x) for real x > 0 where I_ν(x) > 0 (ν > −1 or integer ν).
pub fn ln_bessel_i_real(nu: f64, x: f64) -> Result<f64> {
    if !(x > 0.0) {
        return domain(format!("ln_bessel_i_real needs x > 0, got {x}"));
    }
    let s = bessel_i_repr(nu, Complex64::new(x, 0.0))?;
    if s.mantissa.re <= 0.0 {
        return domain(format!("I_{nu}({x}) is not positive"));
    }
    Ok(s.mantissa.re.ln() + s.log_scale)
}

/// ln E_ν(w) with E_ν(w) = Σ_k w^k/(k!Γ(ν+k+1)) = w^{−ν/2} I_ν(2√w), for w ≥ 0 and ν > −1.
pub fn ln_entire_i(nu: f64, w: f64) -> Result<f64> {
    if !(w >= 0.0) || !(nu > -1.0) {
        return domain(format!("ln_entire_i needs w >= 0 and nu > -1, got ({nu}, {w})"));
    }
    if w == 0.0 {
        return Ok(-ln_gamma(nu + 1.0)?);
    }
    if w < 100.0 {
        let s = entire_series(nu, Complex64::new(w, 0.0))?;
        return Ok(s.mantissa.re.ln() + s.log_scale);
    }
    Ok(ln_bessel_i_real(nu, 2.0 * w.sqrt())? - 0.5 * nu * w.ln())
}

/// E_ν(q) for complex q, ν+1 not a pole.
pub(crate) fn entire_i_complex(nu: f64, q: Complex64) -> Result<Scaled> {
    if q.norm() < 100.0 || is_neg_integer(nu + 1.0) {
        return entire_series(nu, q);
    }
    let r = q.sqrt();
    let s = bessel_i_repr(nu, r * 2.0)?;
    let lp = -r.ln() * nu;
    Ok(Scaled { mantissa: s.mantissa * Complex64::new(0.0, lp.im).exp(), log_scale: s.log_scale + lp.re })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    // naive defining series, plain summation
    fn naive(nu: f64, z: Complex64) -> Complex64 {
        let q = z * z / 4.0;
        let mut term = Complex64::new(1.0 / ln_gamma(nu + 1.0).unwrap().exp() * gamma_sign(nu + 1.0), 0.0);
        let mut s = term;
        for k in 0..400 {
            term *= q / ((k as f64 + 1.0) * (nu + k as f64 + 1.0));
            s += term;
        }
        s * (z / 2.0).powf(nu)
    }

    // I_n(z) = (1/π)∫_0^π e^{z cos t} cos(nt) dt, periodic trapezoid (spectrally accurate)
    fn integral_integer(n: i32, x: f64) -> f64 {
        let npts = 4000;
        let h = PI / npts as f64;
        let mut s = 0.0;
        for i in 0..=npts {
            let t = i as f64 * h;
            let w = if i == 0 || i == npts { 0.5 } else { 1.0 };
            s += w * ((x * (t.cos() - 1.0)).exp() * (n as f64 * t).cos());
        }
        s * h / PI
    }

    #[test]
    fn small_values() {
        assert_eq!(bessel_i(0.0, c(0.0, 0.0)).unwrap(), c(1.0, 0.0));
        assert_relative_eq!(bessel_i(0.0, c(1.0, 0.0)).unwrap().re, 1.266_065_877_752_008_4, max_relative = 1e-15);
        for &x in &[0.1, 1.0, 7.5, 19.0, 25.0, 60.0] {
            let h = (2.0 / (PI * x)).sqrt();
            assert_relative_eq!(bessel_i(0.5, c(x, 0.0)).unwrap().re, h * x.sinh(), max_relative = 1e-13);
            assert_relative_eq!(bessel_i(-0.5, c(x, 0.0)).unwrap().re, h * x.cosh(), max_relative = 1e-13);
        }
    }

    #[test]
    fn series_agreement_small_modulus() {
        let zs = [c(0.3, 0.0), c(2.0, 1.0), c(-3.0, 0.5), c(0.0, 4.0), c(6.0, -7.0), c(9.5, 2.0), c(-4.0, -8.0)];
        for &nu in &[0.0, 0.3, 1.0, 2.7, -0.4, -1.5, 5.5] {
            for &z in &zs {
                let a = bessel_i(nu, z).unwrap();
                let b = naive(nu, z);
                assert!((a - b).norm() <= 1e-12 * b.norm().max(1e-300), "nu={nu} z={z}: {a} vs {b}");
            }
        }
    }

    #[test]
    fn asymptotic_region_integer_orders() {
        for &n in &[0, 1, 3, 7] {
            for &x in &[20.5, 35.0, 80.0] {
                let scaled = bessel_i_scaled(n as f64, c(x, 0.0)).unwrap().re;
                assert_relative_eq!(scaled, integral_integer(n, x), max_relative = 1e-12);
            }
        }
        // negative integer order equals positive
        assert_relative_eq!(
            bessel_i(-3.0, c(2.0, 0.0)).unwrap().re,
            bessel_i(3.0, c(2.0, 0.0)).unwrap().re,
            max_relative = 1e-15
        );
    }

    #[test]
    fn continuity_across_switch() {
        for &nu in &[0.0, 0.25, 2.5, -0.75] {
            for &x in &[ASYMPTOTIC_MIN, 27.0] {
                let z = c(x, 0.0);
                let a = asymptotic_right(nu, z).unwrap().value();
                let b = entire_series(nu, z * z / 4.0).unwrap().value() * (z / 2.0).powf(nu);
                assert!((a - b).norm() < 1e-14 * a.norm(), "{nu} {x}: {a} vs {b}");
            }
        }
        // left half plane, reflection branch
        let nu = 0.3;
        for &z in &[c(-22.0, 3.0), c(-22.0, -3.0)] {
            let a = bessel_i_scaled(nu, z).unwrap();
            let b = naive(nu, z) * (-z.re.abs()).exp();
            assert!((a - b).norm() < 1e-10 * b.norm(), "{z}: {a} vs {b}");
        }
    }

    #[test]
    fn entire_form() {
        // E_{1/2}(w) = sinh(2√w)/(√π √w)
        for &w in &[0.01f64, 1.0, 50.0, 150.0, 900.0] {
            let r = w.sqrt();
            let expect = (2.0 * r).sinh() / (PI.sqrt() * r);
            assert_relative_eq!(ln_entire_i(0.5, w).unwrap(), expect.ln(), max_relative = 1e-13);
        }
        assert_relative_eq!(ln_entire_i(2.0, 0.0).unwrap(), -(2.0f64.ln()), max_relative = 1e-15);
        let q = c(130.0, 40.0);
        let a = entire_i_complex(0.7, q).unwrap().value();
        let b = entire_series(0.7, q).unwrap().value();
        assert!((a - b).norm() < 1e-11 * b.norm());
    }

    #[test]
    fn log_real_large_argument() {
        let v = ln_bessel_i_real(1.0, 2000.0).unwrap();
        let approx = 2000.0 - 0.5 * (2.0 * PI * 2000.0f64).ln() + (1.0 - 3.0 / 16000.0f64).ln();
        assert!((v - approx).abs() < 1e-7);
    }
}
