//! Log-gamma by the Lanczos approximation with g = 671/128 (14 terms).

use num_complex::Complex64;
use std::f64::consts::PI;

use crate::error::{domain, Result};

const G_SHIFT: f64 = 671.0 / 128.0;
const C0: f64 = 0.999_999_999_999_997_1;
#[allow(clippy::excessive_precision)]
const COF: [f64; 14] = [
    57.156_235_665_862_923_5,
    -59.597_960_355_475_491_2,
    14.136_097_974_741_747_1,
    -0.491_913_816_097_620_199,
    0.339_946_499_848_118_887e-4,
    0.465_236_289_270_485_756e-4,
    -0.983_744_753_048_795_646e-4,
    0.158_088_703_224_912_494e-3,
    -0.210_264_441_724_104_883e-3,
    0.217_439_618_115_212_643e-3,
    -0.164_318_106_536_763_890e-3,
    0.844_182_239_838_527_433e-4,
    -0.261_908_384_015_814_087e-4,
    0.368_991_826_595_316_234e-5,
];
const SQRT_2PI: f64 = 2.506_628_274_631_000_5;

fn is_pole(x: f64) -> bool {
    x <= 0.0 && x == x.floor()
}

// valid for x > 0
fn lanczos_real(x: f64) -> f64 {
    let t = x + G_SHIFT;
    let mut ser = C0;
    let mut y = x;
    for c in COF {
        y += 1.0;
        ser += c / y;
    }
    (x + 0.5) * t.ln() - t + (SQRT_2PI * ser / x).ln()
}

fn lanczos_complex(z: Complex64) -> Complex64 {
    let t = z + G_SHIFT;
    let mut ser = Complex64::new(C0, 0.0);
    let mut y = z;
    for c in COF {
        y += 1.0;
        ser += c / y;
    }
    (z + 0.5) * t.ln() - t + (ser * SQRT_2PI / z).ln()
}

/// ln|Γ(x)| for real x off the poles.
pub fn ln_gamma(x: f64) -> Result<f64> {
    if !x.is_finite() || is_pole(x) {
        return domain(format!("ln_gamma pole or non-finite argument {x}"));
    }
    if x >= 0.5 {
        Ok(lanczos_real(x))
    } else {
        // Γ(x)Γ(1−x) = π / sin(πx)
        let s = (PI * x).sin().abs();
        Ok(PI.ln() - s.ln() - lanczos_real(1.0 - x))
    }
}

/// Sign of Γ(x) for real x off the poles.
pub fn gamma_sign(x: f64) -> f64 {
    if x > 0.0 || is_pole(x) || (x.floor() as i64) % 2 == 0 {
        1.0
    } else {
        -1.0
    }
}

/// 1/Γ(x); zero at the poles.
pub fn rgamma(x: f64) -> f64 {
    if is_pole(x) {
        return 0.0;
    }
    match ln_gamma(x) {
        Ok(lg) => gamma_sign(x) * (-lg).exp(),
        Err(_) => 0.0,
    }
}

/// Principal-branch log Γ(z) for complex z off the non-positive real axis poles.
pub fn ln_gamma_complex(z: Complex64) -> Result<Complex64> {
    if !z.re.is_finite() || !z.im.is_finite() || (z.im == 0.0 && is_pole(z.re)) {
        return domain(format!("ln_gamma pole or non-finite argument {z}"));
    }
    if z.im == 0.0 {
        if z.re > 0.0 {
            return Ok(Complex64::new(lanczos_real(z.re), 0.0));
        }
        let lg = ln_gamma(z.re)?;
        let im = if gamma_sign(z.re) < 0.0 { PI } else { 0.0 };
        return Ok(Complex64::new(lg, im));
    }
    if z.re >= 0.5 {
        Ok(lanczos_complex(z))
    } else {
        let s = (z * PI).sin();
        let w = Complex64::new(PI, 0.0).ln() - s.ln() - lanczos_complex(1.0 - z);
        // bring the imaginary part onto the branch continuous from the right half plane
        Ok(fix_branch(z, w))
    }
}

// The reflection formula fixes ln Γ only modulo 2πi. The principal branch is the
// analytic continuation from the positive axis, whose imaginary part for Re z < 1/2
// is recovered from the shifted evaluation ln Γ(z) = ln Γ(z+n) − Σ ln(z+k).
fn fix_branch(z: Complex64, w: Complex64) -> Complex64 {
    let n = (0.5 - z.re).ceil().max(0.0) as usize + 1;
    let mut acc = lanczos_complex(z + n as f64);
    for k in 0..n {
        acc -= (z + k as f64).ln();
    }
    let k = ((acc.im - w.im) / (2.0 * PI)).round();
    Complex64::new(w.re, w.im + 2.0 * PI * k)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    // Stirling series with upward shift; independent of the Lanczos coefficients
    fn stirling_ln_gamma(x: f64) -> f64 {
        let mut shift = 0.0;
        let mut y = x;
        while y < 30.0 {
            shift += y.ln();
            y += 1.0;
        }
        let y2 = y * y;
        let series = 1.0 / (12.0 * y) - 1.0 / (360.0 * y * y2) + 1.0 / (1260.0 * y2 * y2 * y)
            - 1.0 / (1680.0 * y2 * y2 * y2 * y)
            + 1.0 / (1188.0 * y2 * y2 * y2 * y2 * y);
        (y - 0.5) * y.ln() - y + 0.5 * (2.0 * PI).ln() + series - shift
    }

    #[test]
    fn factorials() {
        assert!(ln_gamma(1.0).unwrap().abs() < 1e-15);
        assert_relative_eq!(ln_gamma(5.0).unwrap(), 24f64.ln(), max_relative = 1e-14);
        let mut f = 1.0f64;
        for n in 1..=30 {
            f *= n as f64;
            assert_relative_eq!(ln_gamma(n as f64 + 1.0).unwrap().exp(), f, max_relative = 1e-13);
        }
    }

    #[test]
    fn half_integer_and_stirling() {
        // Γ(3.5) = 15√π/8
        let g35 = 15.0 * PI.sqrt() / 8.0;
        assert_relative_eq!(ln_gamma(3.5).unwrap().exp(), g35, max_relative = 1e-14);
        assert_relative_eq!(g35, 3.323_350_970_447_843, max_relative = 1e-15);
        for i in 1..200 {
            let x = 0.07 * i as f64 + 0.01;
            assert_relative_eq!(ln_gamma(x).unwrap(), stirling_ln_gamma(x), epsilon = 6e-14, max_relative = 1e-14);
        }
    }

    #[test]
    fn reflection_and_sign() {
        // Γ(−0.5) = −2√π
        assert_relative_eq!(ln_gamma(-0.5).unwrap(), (2.0 * PI.sqrt()).ln(), max_relative = 1e-14);
        assert_eq!(gamma_sign(-0.5), -1.0);
        assert_eq!(gamma_sign(-1.5), 1.0);
        assert_relative_eq!(rgamma(-0.5), -1.0 / (2.0 * PI.sqrt()), max_relative = 1e-14);
        assert_eq!(rgamma(-3.0), 0.0);
        assert!(ln_gamma(0.0).is_err());
        assert!(ln_gamma(-2.0).is_err());
    }

    #[test]
    fn complex_matches_real_and_recurrence() {
        for &x in &[0.3, 1.7, 4.2, 11.5] {
            let c = ln_gamma_complex(Complex64::new(x, 0.0)).unwrap();
            assert_relative_eq!(c.re, ln_gamma(x).unwrap(), epsilon = 1e-14);
        }
        // Γ(z+1) = zΓ(z) on both sides of Re z = 1/2
        for &(a, b) in &[(0.3, 0.8), (-1.7, 2.5), (2.2, -3.1), (-4.4, -0.6)] {
            let z = Complex64::new(a, b);
            let lhs = ln_gamma_complex(z + 1.0).unwrap();
            let rhs = ln_gamma_complex(z).unwrap() + z.ln();
            assert!((lhs - rhs).norm() < 1e-12, "{z}: {lhs} vs {rhs}");
        }
        // |Γ(iy)|² = π / (y sinh πy)
        let y = 1.3;
        let g = ln_gamma_complex(Complex64::new(0.0, y)).unwrap();
        assert_relative_eq!((2.0 * g.re).exp(), PI / (y * (PI * y).sinh()), max_relative = 1e-13);
    }
}
