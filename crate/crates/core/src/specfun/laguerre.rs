//! Associated Laguerre polynomials of real order and the Laguerre functions
//! I_{m+α,m}(ρ) = √(m!/Γ(1+m+α)) e^{−ρ/2} ρ^{α/2} L_m^α(ρ).

use super::gamma::ln_gamma;
use crate::error::{domain, MsfError, Result};

const RESCALE: f64 = 1e150;

fn check_order(alpha: f64) -> Result<()> {
    if !(alpha > -1.0) || !alpha.is_finite() {
        return domain(format!("Laguerre order {alpha} must be finite and > -1"));
    }
    Ok(())
}

/// L_m^α(ρ) by the ascending three-term recurrence.
pub fn laguerre_poly(m: usize, alpha: f64, rho: f64) -> Result<f64> {
    check_order(alpha)?;
    if rho < 0.0 {
        return domain(format!("laguerre_poly needs rho >= 0, got {rho}"));
    }
    let mut prev = 1.0;
    if m == 0 {
        return Ok(prev);
    }
    let mut cur = 1.0 + alpha - rho;
    for k in 1..m {
        let kf = k as f64;
        let next = ((2.0 * kf + 1.0 + alpha - rho) * cur - (kf + alpha) * prev) / (kf + 1.0);
        prev = cur;
        cur = next;
    }
    Ok(cur)
}

/// All Laguerre functions I_{k+α,k}(ρ) for k = 0..=m_max in one pass.
///
/// Runs the orthonormal recurrence p_k = √(k!/Γ(1+k+α)) L_k^α, then applies the
/// weight in log form so that neither factor overflows on its own.
pub fn laguerre_fn_table(alpha: f64, m_max: usize, rho: f64) -> Result<Vec<f64>> {
    check_order(alpha)?;
    if !(rho >= 0.0) || !rho.is_finite() {
        return domain(format!("laguerre_fn needs finite rho >= 0, got {rho}"));
    }
    let mut out = vec![0.0; m_max + 1];
    if rho == 0.0 {
        if alpha > 0.0 {
            return Ok(out);
        }
        if alpha < 0.0 {
            return Err(MsfError::Singular(format!("Laguerre function of order {alpha} diverges at rho = 0")));
        }
        // L_k^0(0) = 1 and the normalization is 1
        out.iter_mut().for_each(|v| *v = 1.0);
        return Ok(out);
    }
    let ln_pref = -0.5 * rho + 0.5 * alpha * rho.ln() - 0.5 * ln_gamma(alpha + 1.0)?;
    let mut log_scale = 0.0;
    let mut prev = 0.0;
    let mut cur = 1.0;
    out[0] = ln_pref.exp();
    for k in 0..m_max {
        let kf = k as f64;
        let next = ((2.0 * kf + 1.0 + alpha - rho) * cur - (kf * (kf + alpha)).sqrt() * prev)
            / ((kf + 1.0) * (kf + 1.0 + alpha)).sqrt();
        prev = cur;
        cur = next;
        if cur.abs() > RESCALE {
            cur /= RESCALE;
            prev /= RESCALE;
            log_scale += RESCALE.ln();
        }
        out[k + 1] = cur * (ln_pref + log_scale).exp();
    }
    Ok(out)
}

/// I_{n,m}(ρ) with α = n − m.
pub fn laguerre_fn(n: f64, m: usize, rho: f64) -> Result<f64> {
    let alpha = n - m as f64;
    Ok(laguerre_fn_table(alpha, m, rho)?[m])
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    // explicit sum L_m^α(x) = Σ_k (−1)^k C(m+α, m−k) x^k / k!
    fn explicit_poly(m: usize, alpha: f64, x: f64) -> f64 {
        let mut s = 0.0;
        for k in 0..=m {
            let mut binom = 1.0;
            // C(m+α, m−k) = Π_{i=1}^{m−k} (k+α+i)/i
            for i in 1..=(m - k) {
                binom *= (k as f64 + alpha + i as f64) / i as f64;
            }
            let mut xk = 1.0;
            for i in 1..=k {
                xk *= x / i as f64;
            }
            s += if k % 2 == 0 { binom * xk } else { -binom * xk };
        }
        s
    }

    #[test]
    fn closed_forms() {
        assert_eq!(laguerre_poly(0, 0.7, 3.3).unwrap(), 1.0);
        assert_relative_eq!(laguerre_poly(1, 0.7, 3.3).unwrap(), 1.0 + 0.7 - 3.3, max_relative = 1e-15);
        assert_relative_eq!(laguerre_poly(2, 0.5, 1.0).unwrap(), -0.125, max_relative = 1e-14);
    }

    #[test]
    fn poly_matches_explicit_sum() {
        for &alpha in &[-0.6, 0.0, 0.3, 2.5] {
            for m in 0..12 {
                for &x in &[0.05, 0.9, 3.7, 8.0] {
                    let a = laguerre_poly(m, alpha, x).unwrap();
                    let b = explicit_poly(m, alpha, x);
                    assert!((a - b).abs() <= 1e-11 * (1.0 + b.abs()), "m={m} a={alpha} x={x}: {a} vs {b}");
                }
            }
        }
    }

    #[test]
    fn function_matches_definition() {
        for &alpha in &[-0.4, 0.0, 0.7, 3.0] {
            for m in 0..10 {
                for &x in &[0.2f64, 1.5, 6.0] {
                    let lg_m = ln_gamma(m as f64 + 1.0).unwrap();
                    let lg_n = ln_gamma(m as f64 + 1.0 + alpha).unwrap();
                    let direct = (0.5 * (lg_m - lg_n)).exp()
                        * (-x / 2.0).exp()
                        * x.powf(alpha / 2.0)
                        * explicit_poly(m, alpha, x);
                    let v = laguerre_fn(m as f64 + alpha, m, x).unwrap();
                    assert!((v - direct).abs() < 1e-12, "{alpha} {m} {x}: {v} vs {direct}");
                }
            }
        }
        assert_relative_eq!(laguerre_fn(0.0, 0, 2.3).unwrap(), (-1.15f64).exp(), max_relative = 1e-15);
        assert_eq!(laguerre_fn(0.6, 0, 0.0).unwrap(), 0.0);
        assert_eq!(laguerre_fn(3.0, 3, 0.0).unwrap(), 1.0);
        assert!(laguerre_fn(-0.5, 0, 0.0).is_err());
        assert!(laguerre_fn(1.0, 3, 1.0).is_err());
    }

    #[test]
    fn large_degree_stays_finite() {
        let t = laguerre_fn_table(0.3, 2000, 4000.0).unwrap();
        assert!(t.iter().all(|v| v.is_finite() && v.abs() < 1.0));
        let t = laguerre_fn_table(0.0, 400, 1e-3).unwrap();
        assert!(t.iter().all(|v| v.is_finite()));
    }
}
