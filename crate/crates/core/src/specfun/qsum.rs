//! The Bessel series Q_ν(u,v) = Σ_{l≥0} (v/u)^{ν+l} I_{ν+l}(2uv).
//!
//! Evaluated in the entire form Σ_l v^{2(ν+l)} E_{ν+l}(u²v²), where
//! E_ν(w) = Σ_k w^k/(k!Γ(ν+k+1)), so u = 0 is an ordinary point.

use num_complex::Complex64;

use super::bessel::{entire_i_complex, ln_entire_i};
use crate::error::{domain, MsfError, Result};

/// Truncation controls for the infinite sums.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SeriesControl {
    pub rel_tol: f64,
    pub max_terms: usize,
}

impl Default for SeriesControl {
    fn default() -> Self {
        Self { rel_tol: 1e-14, max_terms: 1_000_000 }
    }
}

impl SeriesControl {
    pub fn new(rel_tol: f64, max_terms: usize) -> Result<Self> {
        if !(rel_tol > 0.0) || max_terms < 1 {
            return domain(format!("invalid series control ({rel_tol}, {max_terms})"));
        }
        Ok(Self { rel_tol, max_terms })
    }
}

/// A converged sum with its truncation record.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QSum<T> {
    pub value: T,
    /// ln of the value (real sums only; −∞ for a zero sum).
    pub ln_value: f64,
    pub terms: usize,
    pub tail_bound: f64,
}

// Running log-sum-exp accumulator for positive terms.
#[derive(Debug, Clone, Copy)]
pub(crate) struct LogSum {
    scale: f64,
    acc: f64,
}

impl LogSum {
    pub fn new() -> Self {
        Self { scale: f64::NEG_INFINITY, acc: 0.0 }
    }
    pub fn add(&mut self, ln_t: f64) {
        if ln_t == f64::NEG_INFINITY {
            return;
        }
        if ln_t > self.scale {
            self.acc = self.acc * (self.scale - ln_t).exp() + 1.0;
            self.scale = ln_t;
        } else {
            self.acc += (ln_t - self.scale).exp();
        }
    }
    pub fn ln(&self) -> f64 {
        if self.scale == f64::NEG_INFINITY {
            f64::NEG_INFINITY
        } else {
            self.scale + self.acc.ln()
        }
    }
}

// Geometric tail estimate from the last two log-terms; None while terms still grow
// or the ratio has not started to shrink.
pub(crate) fn geometric_tail(ln_prev: f64, ln_cur: f64, last_ratio: &mut f64) -> Option<f64> {
    let r = (ln_cur - ln_prev).exp();
    let ok = r < 1.0 && r <= *last_ratio * (1.0 + 1e-12);
    *last_ratio = r;
    if ok {
        Some(ln_cur.exp() * r / (1.0 - r))
    } else {
        None
    }
}

/// Q_ν(u, v) for real u, v ≥ 0 and ν > −1.
pub fn q_sum(nu: f64, u: f64, v: f64, ctl: SeriesControl) -> Result<QSum<f64>> {
    if !(u >= 0.0) || !(v >= 0.0) || !u.is_finite() || !v.is_finite() {
        return domain(format!("q_sum needs finite u, v >= 0, got ({u}, {v})"));
    }
    if !(nu > -1.0) {
        return domain(format!("q_sum needs nu > -1, got {nu}"));
    }
    if v == 0.0 {
        // only a vanishing total order survives: v^0 E_0(0) = 1
        return if nu == 0.0 {
            Ok(QSum { value: 1.0, ln_value: 0.0, terms: 1, tail_bound: 0.0 })
        } else if nu > 0.0 {
            Ok(QSum { value: 0.0, ln_value: f64::NEG_INFINITY, terms: 1, tail_bound: 0.0 })
        } else {
            domain(format!("Q_{nu}(u, 0) diverges for negative order"))
        };
    }
    let w = (u * v) * (u * v);
    let ln_v2 = 2.0 * v.ln();
    let mut acc = LogSum::new();
    let mut prev = f64::NEG_INFINITY;
    let mut ratio = f64::INFINITY;
    let mut l = 0usize;
    loop {
        let order = nu + l as f64;
        let t = order * ln_v2 + ln_entire_i(order, w)?;
        acc.add(t);
        l += 1;
        if l > 1 {
            if let Some(tail) = geometric_tail(prev, t, &mut ratio) {
                let ln_sum = acc.ln();
                if tail <= ctl.rel_tol * ln_sum.exp() || (tail.ln() - ln_sum) <= ctl.rel_tol.ln() {
                    return Ok(QSum { value: ln_sum.exp(), ln_value: ln_sum, terms: l, tail_bound: tail });
                }
            }
        }
        prev = t;
        if l >= ctl.max_terms {
            return Err(MsfError::Truncation { what: "q_sum", terms: l, tail: (t - acc.ln()).exp() });
        }
    }
}

/// Σ_l e^{(ν+l) ln_b} E_{ν+l}(ab) for complex arguments.
///
/// `ln_b` fixes the branch of the non-integer powers of b; `ab` is the product
/// a·b (the inner series is entire in it). Convergence is judged against the
/// positive majorant Σ |b|^{ν+l} E_{ν+l}(|ab|).
pub fn q_sum_complex(nu: f64, ab: Complex64, ln_b: Complex64, ctl: SeriesControl) -> Result<QSum<Complex64>> {
    if !(nu > -1.0) {
        return domain(format!("q_sum_complex needs nu > -1, got {nu}"));
    }
    if ln_b.re == f64::NEG_INFINITY {
        return if nu == 0.0 {
            let e = entire_i_complex(0.0, ab)?.value();
            Ok(QSum { value: e, ln_value: e.norm().ln(), terms: 1, tail_bound: 0.0 })
        } else if nu > 0.0 {
            Ok(QSum { value: Complex64::new(0.0, 0.0), ln_value: f64::NEG_INFINITY, terms: 1, tail_bound: 0.0 })
        } else {
            domain(format!("complex Q of order {nu} diverges at b = 0"))
        };
    }
    let wabs = ab.norm();
    let mut sum = Complex64::new(0.0, 0.0);
    let mut major = LogSum::new();
    let mut prev = f64::NEG_INFINITY;
    let mut ratio = f64::INFINITY;
    let mut l = 0usize;
    loop {
        let order = nu + l as f64;
        let e = entire_i_complex(order, ab)?;
        let lp = ln_b * order;
        sum += e.mantissa * (lp + e.log_scale).exp();
        let t = order * ln_b.re + ln_entire_i(order, wabs)?;
        major.add(t);
        l += 1;
        if l > 1 {
            if let Some(tail) = geometric_tail(prev, t, &mut ratio) {
                let floor = 1e-18 * major.ln().exp();
                if tail <= ctl.rel_tol * sum.norm() || tail <= floor {
                    return Ok(QSum { value: sum, ln_value: sum.norm().ln(), terms: l, tail_bound: tail });
                }
            }
        }
        prev = t;
        if l >= ctl.max_terms {
            return Err(MsfError::Truncation { what: "q_sum_complex", terms: l, tail: (t - major.ln()).exp() });
        }
    }
}
