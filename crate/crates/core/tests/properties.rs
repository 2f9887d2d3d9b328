use nalgebra::DMatrix;
use num_complex::Complex64;
use proptest::prelude::*;

use ngi_core::fock::generalized_laguerre;
use ngi_core::genfunc::{
    mixed_partial_at_zero, series_exp, DerivativeSpec, GeneratingExponent, TruncatedSeries,
    Truncation, XiPoly,
};
use ngi_core::{MomentIndex, NgOperation, NgTmsv, OperationKind};

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn exponent(
    dim: usize,
    entries: &[(f64, f64)],
    lin: &[(f64, f64)],
) -> GeneratingExponent<Complex64> {
    let quad = DMatrix::from_fn(dim, dim, |i, j| {
        let (lo, hi) = (i.min(j), i.max(j));
        let (re, im) = entries[lo * dim + hi];
        c(re, im)
    });
    let lin = lin[..dim].iter().map(|&(re, im)| c(re, im)).collect();
    GeneratingExponent::new(quad, lin, c(0.1, -0.2)).unwrap()
}

/// Central difference of order `k ≤ 2` in each listed variable.
fn central(e: &GeneratingExponent<Complex64>, orders: &[(usize, u32)], h: f64) -> Complex64 {
    let weights: [&[(f64, f64)]; 3] = [
        &[(0.0, 1.0)],
        &[(1.0, 0.5), (-1.0, -0.5)],
        &[(1.0, 1.0), (0.0, -2.0), (-1.0, 1.0)],
    ];
    let mut stencil = vec![(vec![c(0.0, 0.0); e.dim()], 1.0)];
    for &(v, k) in orders {
        let mut next = Vec::new();
        for (pt, w) in &stencil {
            for &(step, wk) in weights[k as usize] {
                let mut p = pt.clone();
                p[v] += c(step * h, 0.0);
                next.push((p, w * wk / h.powi(k as i32)));
            }
        }
        stencil = next;
    }
    stencil.iter().map(|(p, w)| e.eval_exp(p) * *w).sum()
}

/// Two Richardson steps on top of [`central`], leaving an `O(h⁶)` error.
fn finite_difference(e: &GeneratingExponent<Complex64>, orders: &[(usize, u32)]) -> Complex64 {
    let h = 0.08;
    let d = [h, h / 2.0, h / 4.0].map(|h| central(e, orders, h));
    let r1 = (d[1] * 4.0 - d[0]) / 3.0;
    let r2 = (d[2] * 4.0 - d[1]) / 3.0;
    (r2 * 16.0 - r1) / 15.0
}

fn small_complex() -> impl Strategy<Value = (f64, f64)> {
    (-0.8..0.8f64, -0.8..0.8f64)
}

fn laguerre_exponent(q: f64, p: f64) -> GeneratingExponent<Complex64> {
    let quad = DMatrix::from_row_slice(
        2,
        2,
        &[c(0.0, 0.0), c(0.25, 0.0), c(0.25, 0.0), c(0.0, 0.0)],
    );
    GeneratingExponent::new(quad, vec![c(q, p), -c(q, -p)], c(0.0, 0.0)).unwrap()
}

fn any_operation() -> impl Strategy<Value = NgOperation> {
    (
        0u32..=2,
        0u32..=2,
        0u32..=2,
        0u32..=2,
        0.05..1.0f64,
        0.05..1.0f64,
    )
        .prop_map(|(m1, m2, n1, n2, t1, t2)| NgOperation::custom(m1, m2, n1, n2, t1, t2).unwrap())
}

fn preset() -> impl Strategy<Value = NgOperation> {
    (0usize..6, 1u32..=2, 0.05..1.0f64)
        .prop_map(|(k, n, tau)| NgOperation::from_table(OperationKind::ALL[k], n, tau).unwrap())
}

fn series(dim: usize, coeffs: &[(f64, f64)], degree: u32) -> TruncatedSeries<Complex64> {
    let mut terms = Vec::new();
    let mut it = coeffs.iter();
    for a in 0..=2u32 {
        for b in 0..=2u32 {
            let mut e = vec![0; dim];
            e[0] = a;
            e[1] = b;
            if let Some(&(re, im)) = it.next() {
                terms.push((e, c(re, im)));
            }
        }
    }
    TruncatedSeries::from_terms(dim, Truncation::total_degree(degree), terms).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn mixed_partial_matches_finite_differences(
        dim in 1usize..=3,
        entries in prop::collection::vec(small_complex(), 9),
        lin in prop::collection::vec(small_complex(), 3),
        orders in prop::collection::vec(0u32..=2, 3),
    ) {
        let e = exponent(dim, &entries, &lin);
        let spec_orders: Vec<(usize, u32)> =
            (0..dim).map(|v| (v, orders[v])).filter(|&(_, k)| k > 0).collect();
        let spec = DerivativeSpec::new(spec_orders.clone(), c(1.0, 0.0)).unwrap();
        let exact = mixed_partial_at_zero(&e, &spec).unwrap();
        let fd = finite_difference(&e, &spec_orders);
        prop_assert!((exact - fd).norm() <= 1e-5 * exact.norm().max(1.0), "{exact} vs {fd}");
    }

    #[test]
    fn laguerre_pattern_reproduces_recurrence(q in -2.0..2.0f64, p in -2.0..2.0f64, n in 0u32..=3) {
        let got = mixed_partial_at_zero(&laguerre_exponent(q, p), &DerivativeSpec::laguerre(n)).unwrap();
        let want = generalized_laguerre(n as usize, 0.0, 2.0 * (q * q + p * p));
        prop_assert!((got.re - want).abs() <= 1e-12 * want.abs().max(1.0));
        prop_assert!(got.im.abs() <= 1e-12);
    }

    #[test]
    fn series_product_commutes(
        a in prop::collection::vec(small_complex(), 9),
        b in prop::collection::vec(small_complex(), 9),
        degree in 0u32..=5,
    ) {
        let (x, y) = (series(2, &a, degree), series(2, &b, degree));
        let (xy, yx) = (x.mul(&y).unwrap(), y.mul(&x).unwrap());
        prop_assert_eq!(xy.len(), yx.len());
        for (k, v) in xy.terms() {
            prop_assert!((*v - yx.coefficient(&k)).norm() <= 1e-15 * v.norm().max(1.0));
        }
    }

    #[test]
    fn truncation_is_sound(
        dim in 1usize..=3,
        entries in prop::collection::vec(small_complex(), 9),
        lin in prop::collection::vec(small_complex(), 3),
        low in 0u32..=4,
        extra in 0u32..=3,
    ) {
        let e = exponent(dim, &entries, &lin);
        let small = series_exp(&e, low).unwrap();
        let big = series_exp(&e, low + extra).unwrap();
        for (k, v) in small.terms() {
            prop_assert_eq!(*v, big.coefficient(&k));
        }
        for (k, _) in big.terms() {
            prop_assert!(k.iter().sum::<u32>() <= low + extra);
        }
    }

    #[test]
    fn mode_swap_leaves_scalars_unchanged(op in any_operation(), lambda in 0.05..0.8f64, phi in 0.01..1.5f64) {
        let a = NgTmsv::new(lambda, op).unwrap();
        let b = NgTmsv::new(lambda, op.swapped()).unwrap();
        let close = |x: f64, y: f64| (x - y).abs() <= 1e-10 * x.abs().max(1.0);
        prop_assert!(close(a.success_probability(), b.success_probability()));
        if a.success_probability() > 1e-12 {
            // Output-mode parity picks up (−1)^N; N is odd when the mode imbalance is.
            let imbalance = (op.m1 + op.n2) as i64 - (op.n1 + op.m2) as i64;
            let sign = if imbalance % 2 == 0 { 1.0 } else { -1.0 };
            prop_assert!(close(a.parity_expectation(phi).unwrap(), sign * b.parity_expectation(phi).unwrap()));
            prop_assert!(close(a.qfi().unwrap(), b.qfi().unwrap()));
            if let (Ok(x), Ok(y)) = (a.phase_sensitivity(phi), b.phase_sensitivity(phi)) {
                prop_assert!(close(x, y));
            }
        }
    }

    #[test]
    fn qcrb_bounds_sensitivity(op in preset(), lambda in 0.05..0.9f64, phi in 0.01..1.5f64) {
        let s = NgTmsv::new(lambda, op).unwrap();
        if let Ok(dphi) = s.phase_sensitivity(phi) {
            prop_assert!(dphi >= s.qcrb().unwrap() - 1e-9, "{} < {}", dphi, s.qcrb().unwrap());
        }
    }

    #[test]
    fn parity_is_bounded(op in any_operation(), lambda in 0.0..0.95f64, phi in -3.2..3.2f64) {
        let s = NgTmsv::new(lambda, op).unwrap();
        if s.success_probability() > 1e-12 {
            prop_assert!(s.parity_expectation(phi).unwrap().abs() <= 1.0 + 1e-9);
        }
    }

    #[test]
    fn report_invariants(op in preset(), lambda in 0.05..0.9f64, phi in 0.01..1.5f64) {
        let s = NgTmsv::new(lambda, op).unwrap();
        if let Ok(r) = s.report(phi) {
            prop_assert!((0.0..=1.0).contains(&r.p_success));
            prop_assert!(r.f_parity.abs() <= 1.0 + 1e-9);
            prop_assert!(r.delta_phi >= r.delta_phi_min - 1e-9);
        }
    }

    #[test]
    fn moment_normalization_is_exact(op in any_operation(), lambda in 0.0..0.9f64) {
        let s = NgTmsv::new(lambda, op).unwrap();
        if s.success_probability() > 1e-12 {
            prop_assert_eq!(s.moment(MomentIndex::new(0, 0, 0, 0)).unwrap(), 1.0);
        }
    }

    #[test]
    fn polynomial_laguerre_is_exact(n in 0u32..=3, q in -1.5..1.5f64, p in -1.5..1.5f64) {
        let zero = XiPoly::default();
        let quarter = XiPoly::constant(c(0.25, 0.0));
        let quad = DMatrix::from_row_slice(2, 2, &[zero.clone(), quarter.clone(), quarter, zero]);
        let i = XiPoly::constant(c(0.0, 1.0));
        let zp = XiPoly::var(0) + i.clone() * XiPoly::var(1);
        let zm = XiPoly::var(0) - i * XiPoly::var(1);
        let e = GeneratingExponent::new(quad, vec![zp, -zm], Complex64::new(0.0, 0.0)).unwrap();
        let poly = mixed_partial_at_zero(&e, &DerivativeSpec::laguerre(n)).unwrap();
        let got = poly.eval([q, p, 0.0, 0.0]);
        let want = generalized_laguerre(n as usize, 0.0, 2.0 * (q * q + p * p));
        prop_assert!((got.re - want).abs() <= 1e-12 * want.abs().max(1.0));
    }
}
