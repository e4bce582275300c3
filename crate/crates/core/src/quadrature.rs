//! Quadrature rules on the half-line.
//!
//! Generalized Gauss–Laguerre rules for ∫₀^∞ e^{−ρ}ρ^a f(ρ) dρ, built from the
//! eigenvalues of the Jacobi matrix (implicit QL), polished by Newton steps on the
//! orthonormal recurrence, with Christoffel weights from the same recurrence.
//! Also a double-exponential rule and composite Gauss–Legendre panels.

use std::collections::HashMap;
use std::sync::{Arc, Mutex};

use crate::error::{domain, MsfError, Result};
use crate::specfun::ln_gamma;

pub const DEFAULT_NODES: usize = 200;

/// A generalized Gauss–Laguerre rule.
///
/// `weights` integrate against e^{−ρ}ρ^a; `reduced` integrate plain integrands
/// that already carry the e^{−ρ}ρ^a behaviour (reduced = weights·e^{ρ}ρ^{−a}).
#[derive(Debug, Clone)]
pub struct Quadrature {
    pub a: f64,
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
    pub reduced: Vec<f64>,
}

impl Quadrature {
    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// Σ wᵢ f(ρᵢ) ≈ ∫ e^{−ρ}ρ^a f(ρ) dρ.
    pub fn integrate_weighted<F: Fn(f64) -> f64>(&self, f: F) -> f64 {
        self.nodes.iter().zip(&self.weights).map(|(&x, &w)| w * f(x)).sum()
    }

    /// Σ ŵᵢ f(ρᵢ) ≈ ∫ f(ρ) dρ.
    pub fn integrate<F: Fn(f64) -> f64>(&self, f: F) -> f64 {
        self.nodes.iter().zip(&self.reduced).map(|(&x, &w)| w * f(x)).sum()
    }

    /// k-th moment Σ wᵢ ρᵢ^k, which should equal Γ(a+1+k).
    pub fn moment(&self, k: u32) -> f64 {
        self.integrate_weighted(|x| x.powi(k as i32))
    }
}

// Eigenvalues of a symmetric tridiagonal matrix (diagonal d, sub-diagonal e[1..]),
// implicit QL with Wilkinson shifts. Returns the eigenvalues unsorted.
fn tridiagonal_eigenvalues(mut d: Vec<f64>, mut e: Vec<f64>) -> Result<Vec<f64>> {
    let n = d.len();
    for i in 1..n {
        e[i - 1] = e[i];
    }
    e[n - 1] = 0.0;
    for l in 0..n {
        let mut iter = 0;
        loop {
            let mut m = l;
            while m + 1 < n {
                let dd = d[m].abs() + d[m + 1].abs();
                if e[m].abs() <= f64::EPSILON * dd {
                    break;
                }
                m += 1;
            }
            if m == l {
                break;
            }
            iter += 1;
            if iter > 60 {
                return Err(MsfError::Truncation { what: "tridiagonal QL", terms: iter, tail: e[l].abs() });
            }
            let mut g = (d[l + 1] - d[l]) / (2.0 * e[l]);
            let mut r = g.hypot(1.0);
            g = d[m] - d[l] + e[l] / (g + r.copysign(g));
            let (mut s, mut c, mut p) = (1.0, 1.0, 0.0);
            let mut early = false;
            let mut i = m;
            while i > l {
                i -= 1;
                let f = s * e[i];
                let b = c * e[i];
                r = f.hypot(g);
                e[i + 1] = r;
                if r == 0.0 {
                    d[i + 1] -= p;
                    e[m] = 0.0;
                    early = true;
                    break;
                }
                s = f / r;
                c = g / r;
                g = d[i + 1] - p;
                r = (d[i] - g) * s + 2.0 * c * b;
                p = s * r;
                d[i + 1] = g + p;
                g = c * r - b;
            }
            if early {
                continue;
            }
            d[l] -= p;
            e[l] = g;
            e[m] = 0.0;
        }
    }
    Ok(d)
}

// Orthonormal polynomials p_0..p_n at x (up to a common scale), returning
// (p_{n−1}, p_n, ln Σ_{k<n} p_k²) with the true normalization p_0 = 1/√Γ(a+1).
fn recurrence_at(a: f64, n: usize, x: f64, ln_g: f64) -> (f64, f64, f64) {
    const RESCALE: f64 = 1e100;
    let mut prev = 0.0;
    let mut cur = 1.0;
    let mut sumsq = 0.0;
    let mut log_scale = 0.0;
    for k in 0..n {
        sumsq += cur * cur;
        let kf = k as f64;
        let next =
            ((2.0 * kf + 1.0 + a - x) * cur - (kf * (kf + a)).sqrt() * prev) / ((kf + 1.0) * (kf + 1.0 + a)).sqrt();
        prev = cur;
        cur = next;
        if cur.abs() > RESCALE {
            cur /= RESCALE;
            prev /= RESCALE;
            sumsq /= RESCALE * RESCALE;
            log_scale += RESCALE.ln();
        }
    }
    (prev, cur, sumsq.ln() + 2.0 * log_scale - ln_g)
}

/// Gauss–Laguerre rule with weight e^{−ρ}ρ^a and `n` nodes.
pub fn make_quadrature(a: f64, n: usize) -> Result<Quadrature> {
    if !(a > -1.0) || !a.is_finite() {
        return domain(format!("quadrature exponent {a} must be > -1"));
    }
    if n < 2 {
        return domain(format!("quadrature needs at least 2 nodes, got {n}"));
    }
    let d: Vec<f64> = (0..n).map(|k| 2.0 * k as f64 + 1.0 + a).collect();
    let e: Vec<f64> = (0..n).map(|k| ((k as f64) * (k as f64 + a)).sqrt()).collect();
    let mut nodes = tridiagonal_eigenvalues(d, e)?;
    nodes.sort_by(|x, y| x.total_cmp(y));
    let ln_g = ln_gamma(a + 1.0)?;
    let nf = n as f64;
    let c = (nf * (nf + a)).sqrt();
    let mut weights = Vec::with_capacity(n);
    let mut reduced = Vec::with_capacity(n);
    for x in nodes.iter_mut() {
        for _ in 0..3 {
            let (pm, pn, _) = recurrence_at(a, n, *x, ln_g);
            let denom = nf * pn - c * pm;
            if denom == 0.0 {
                break;
            }
            let step = *x * pn / denom;
            *x -= step;
            if step.abs() <= 1e-16 * *x {
                break;
            }
        }
        let (_, _, ln_sumsq) = recurrence_at(a, n, *x, ln_g);
        let ln_w = -ln_sumsq;
        weights.push(ln_w.exp());
        reduced.push((ln_w + *x - a * x.ln()).exp());
    }
    Ok(Quadrature { a, nodes, weights, reduced })
}

/// Thread-safe cache of rules keyed by exponent, fixed node count.
#[derive(Debug)]
pub struct RuleCache {
    n: usize,
    rules: Mutex<HashMap<(i64, usize), Arc<Quadrature>>>,
}

impl RuleCache {
    pub fn new(n: usize) -> Self {
        Self { n, rules: Mutex::new(HashMap::new()) }
    }

    pub fn nodes(&self) -> usize {
        self.n
    }

    pub fn rule(&self, a: f64) -> Result<Arc<Quadrature>> {
        self.rule_n(a, self.n)
    }

    pub fn rule_n(&self, a: f64, n: usize) -> Result<Arc<Quadrature>> {
        let key = ((a * 1e9).round() as i64, n);
        if let Some(q) = self.rules.lock().expect("rule cache poisoned").get(&key) {
            return Ok(q.clone());
        }
        let q = Arc::new(make_quadrature(a, n)?);
        self.rules.lock().expect("rule cache poisoned").insert(key, q.clone());
        Ok(q)
    }

    /// ∫₀^∞ f dρ for f ~ ρ^a near the origin and exponentially decaying,
    /// doubling the node count until two orders agree to `tol`.
    pub fn integrate_adaptive<F: Fn(f64) -> f64>(&self, a: f64, f: F, tol: f64) -> Result<f64> {
        let mut n = self.n;
        let mut prev = self.rule_n(a, n)?.integrate(&f);
        for _ in 0..4 {
            n *= 2;
            let cur = self.rule_n(a, n)?.integrate(&f);
            if (cur - prev).abs() <= tol * cur.abs().max(1e-300) {
                return Ok(cur);
            }
            prev = cur;
        }
        Err(MsfError::Truncation { what: "adaptive Gauss-Laguerre", terms: n, tail: (prev).abs() })
    }
}

impl Default for RuleCache {
    fn default() -> Self {
        Self::new(DEFAULT_NODES)
    }
}

/// ∫₀^∞ f(x) dx by the exp-sinh transform x = exp(π/2·sinh t), for integrands
/// given as a log: `ln_f(ln x)`. Suited to algebraic endpoint behaviour at 0 and
/// exponential decay at ∞.
pub fn exp_sinh<F: Fn(f64) -> f64>(ln_f: F, h: f64) -> f64 {
    let half_pi = std::f64::consts::FRAC_PI_2;
    let mut sum = 0.0;
    let kmax = (6.0 / h).ceil() as i64;
    let kmin = -(14.0 / h).ceil() as i64;
    for k in kmin..=kmax {
        let t = k as f64 * h;
        let ln_x = half_pi * t.sinh();
        let ln_jac = ln_x + (half_pi * t.cosh()).ln();
        let v = ln_f(ln_x) + ln_jac;
        if v > -745.0 {
            sum += v.exp();
        }
    }
    sum * h
}

/// Gauss–Legendre nodes and weights on [−1, 1].
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut x = vec![0.0; n];
    let mut w = vec![0.0; n];
    let nf = n as f64;
    for i in 0..n {
        let mut z = (std::f64::consts::PI * (i as f64 + 0.75) / (nf + 0.5)).cos();
        let mut dp = 1.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, z);
            for k in 2..=n {
                let kf = k as f64;
                let p2 = ((2.0 * kf - 1.0) * z * p1 - (kf - 1.0) * p0) / kf;
                p0 = p1;
                p1 = p2;
            }
            let pn = if n == 1 { z } else { p1 };
            let pm = if n == 1 { 1.0 } else { p0 };
            dp = nf * (z * pn - pm) / (z * z - 1.0);
            let dz = pn / dp;
            z -= dz;
            if dz.abs() < 1e-16 {
                break;
            }
        }
        x[i] = z;
        w[i] = 2.0 / ((1.0 - z * z) * dp * dp);
    }
    (x, w)
}

/// Composite Gauss–Legendre over [lo, hi] with `panels` panels of `order` nodes.
pub fn composite_gl<T, F>(lo: f64, hi: f64, panels: usize, order: usize, f: F) -> T
where
    T: std::ops::Add<Output = T> + std::ops::Mul<f64, Output = T> + Default,
    F: Fn(f64) -> T,
{
    let (x, w) = gauss_legendre(order);
    let h = (hi - lo) / panels as f64;
    let mut acc = T::default();
    for p in 0..panels {
        let mid = lo + (p as f64 + 0.5) * h;
        for (xi, wi) in x.iter().zip(&w) {
            acc = acc + f(mid + 0.5 * h * xi) * (0.5 * h * wi);
        }
    }
    acc
}
