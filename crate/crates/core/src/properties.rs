//! Randomized checks of identities that hold across modules.

use num_complex::Complex64;
use proptest::prelude::*;

use crate::completeness::{propagator_closed, weight_fn, KernelParams, WeightSpec};
use crate::cs::{cs_normalization, cs_overlap, CSLabel};
use crate::dirac::{rel_energy, resolve_rel, DiracConfig};
use crate::landau::{energy_nonrel, resolve_qnums, Branch, FieldConfig};
use crate::specfun::{bessel_i, erf, erfc, laguerre_poly, ln_gamma, q_sum, SeriesControl};

fn close(a: f64, b: f64, rel: f64) -> bool {
    (a - b).abs() <= rel * a.abs().max(b.abs()).max(1e-300)
}

fn label() -> impl Strategy<Value = CSLabel> {
    (0.0..2.0f64, -3.1..3.1f64, 0.05..2.0f64, -3.1..3.1f64).prop_map(|(r1, a1, r2, a2)| {
        CSLabel::new(Complex64::from_polar(r1, a1), Complex64::from_polar(r2, a2)).unwrap()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn laguerre_three_term_recurrence(alpha in -0.95..6.0f64, m in 1usize..25, x in 0.0..30.0f64) {
        let l0 = laguerre_poly(m - 1, alpha, x).unwrap();
        let l1 = laguerre_poly(m, alpha, x).unwrap();
        let l2 = laguerre_poly(m + 1, alpha, x).unwrap();
        let rhs = ((2 * m + 1) as f64 + alpha - x) * l1 - (m as f64 + alpha) * l0;
        let scale = l0.abs().max(l1.abs()).max(l2.abs()) * (m as f64 + alpha.abs() + x + 1.0);
        prop_assert!(((m + 1) as f64 * l2 - rhs).abs() <= 1e-12 * scale);
    }

    #[test]
    fn bessel_recurrence(nu in 0.1..8.0f64, x in 0.05..40.0f64) {
        let z = Complex64::new(x, 0.0);
        let lhs = bessel_i(nu - 1.0, z).unwrap() - bessel_i(nu + 1.0, z).unwrap();
        let rhs = bessel_i(nu, z).unwrap() * (2.0 * nu / x);
        prop_assert!((lhs - rhs).norm() <= 1e-12 * lhs.norm().max(rhs.norm()));
    }

    #[test]
    fn ln_gamma_recurrence(x in 0.05..150.0f64) {
        prop_assert!(close(ln_gamma(x + 1.0).unwrap(), ln_gamma(x).unwrap() + x.ln(), 1e-13)
            || (ln_gamma(x + 1.0).unwrap() - ln_gamma(x).unwrap() - x.ln()).abs() < 1e-14);
    }

    #[test]
    fn erf_complements_and_is_odd(x in -6.0..6.0f64) {
        prop_assert!((erf(x) + erfc(x) - 1.0).abs() < 1e-15);
        prop_assert_eq!(erf(-x), -erf(x));
        prop_assert!(erf(x).abs() <= 1.0);
    }

    #[test]
    fn q_sum_peels_its_first_term(nu in 0.0..3.0f64, u in 0.05..3.0f64, v in 0.0..3.0f64) {
        let ctl = SeriesControl::default();
        let q = q_sum(nu, u, v, ctl).unwrap().value;
        let q1 = q_sum(nu + 1.0, u, v, ctl).unwrap().value;
        let head = (v / u).powf(nu) * bessel_i(nu, Complex64::new(2.0 * u * v, 0.0)).unwrap().re;
        prop_assert!(close(q, head + q1, 1e-12));
    }

    #[test]
    fn zero_flux_normalization_is_exponential(u in 0.0..12.0f64, v in 0.0..12.0f64) {
        let ctl = SeriesControl::default();
        let n = cs_normalization(Branch::J0, u, v, 0.0, ctl).unwrap() + cs_normalization(Branch::J1, u, v, 0.0, ctl).unwrap();
        prop_assert!(close(n, (u + v).exp(), 1e-12));
    }

    #[test]
    fn weights_swap_under_flux_reflection(mu in 0.01..0.99f64, u in 0.0..8.0f64, v in 0.0..8.0f64) {
        let w0 = weight_fn(WeightSpec { j: Branch::J0, mu }, u, v).unwrap();
        let w1 = weight_fn(WeightSpec { j: Branch::J1, mu: 1.0 - mu }, v, u).unwrap();
        prop_assert!(close(w0, w1, 1e-12));
        prop_assert!(w0 >= 0.0);
    }

    #[test]
    fn cs_overlaps_are_bounded_and_hermitian(a in label(), b in label(), mu in 0.0..0.95f64, j1 in any::<bool>()) {
        let j = if j1 { Branch::J1 } else { Branch::J0 };
        let ctl = SeriesControl::default();
        let ab = cs_overlap(j, &a, &b, mu, ctl).unwrap();
        let ba = cs_overlap(j, &b, &a, mu, ctl).unwrap();
        let aa = cs_overlap(j, &a, &a, mu, ctl).unwrap();
        prop_assert!((aa - 1.0).norm() < 1e-10);
        prop_assert!(ab.norm() <= 1.0 + 1e-10);
        prop_assert!((ab - ba.conj()).norm() < 1e-10);
    }

    #[test]
    fn spectrum_orders(l in -20i64..20, m in 0usize..20, mu in 0.0..0.999f64, gamma in 0.1..5.0f64) {
        let f = FieldConfig::new(gamma, 0, mu).unwrap();
        let q = resolve_qnums(Branch::of(l), l, m, &f).unwrap();
        let e = energy_nonrel(&q, &f);
        prop_assert!(e >= gamma / 2.0);
        // the flux only lifts levels, by at most γ
        let q0 = resolve_qnums(Branch::of(l), l, m, &FieldConfig::new(gamma, 0, 0.0).unwrap()).unwrap();
        let e0 = energy_nonrel(&q0, &f);
        prop_assert!(e >= e0 - 1e-12 && e <= e0 + gamma + 1e-12);
    }

    #[test]
    fn relativistic_energy_shell(l in -6i64..6, m in 0usize..8, mu in 0.01..0.99f64, mass in 0.0..4.0f64, up in any::<bool>(), vt in any::<bool>()) {
        let dc = DiracConfig::new(FieldConfig::new(1.0, 0, mu).unwrap(), mass, if vt { 1 } else { -1 }).unwrap();
        let sigma = if up { 1 } else { -1 };
        let q = resolve_rel(dc.branch_of(l), l, m, sigma, &dc).unwrap();
        let e = rel_energy(&q, &dc);
        prop_assert!(e >= mass);
        prop_assert!(close(e * e, mass * mass + q.e_perp2(&dc.cfg), 1e-13));
    }

    #[test]
    fn wick_propagator_is_symmetric(l in -4i64..4, mu in 0.0..0.99f64, tau in 0.05..2.0f64, r in 0.0..6.0f64, rp in 0.0..6.0f64) {
        let k = KernelParams::wick(l, tau, FieldConfig::new(1.0, 0, mu).unwrap()).unwrap();
        let a = propagator_closed(&k, 0.0, r, rp).unwrap();
        let b = propagator_closed(&k, 0.0, rp, r).unwrap();
        prop_assert!((a - b).norm() <= 1e-12 * a.norm().max(1e-300));
    }
}
