use proptest::prelude::*;
use qzeta_core::fseries::{check_f_identity, f_series, FKind, FSpec};
use qzeta_core::limits::{default_q_grid, mzv_reference, q_to_1_extrapolate};
use qzeta_core::qcore::{lbag, q_int, series_sum, StopScale};
use qzeta_core::qmzf::{convergence_margin, zeta_q, zeta_q_two_cont, zeta_q_two_series, MultiIndex};
use qzeta_core::sumformula::{
    check_sum_formula_qmzv, enumerate_i0, g_closed_form, g_value_recursive, interpolated_sum_depth2, GSpec,
};
use qzeta_core::{Complex64, QParam, TruncationPolicy};

fn q(v: f64) -> QParam {
    QParam::new(v).unwrap()
}

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn admissible_up_to(weight: u32) -> Vec<MultiIndex> {
    (2..=weight)
        .flat_map(|k| (1..k).flat_map(move |r| enumerate_i0(k, r).unwrap()))
        .collect()
}

#[test]
fn q_integer_brackets() {
    for qv in [0.1, 0.5, 0.9] {
        let qq = q(qv);
        for m in 1..=10_000u32 {
            let mf = m as f64;
            let v = q_int(mf, qq);
            assert!(v <= mf * (1.0 + 1e-15), "q={qv} m={m}");
            assert!(qv.powf(mf - 1.0) * mf <= v * (1.0 + 1e-15), "q={qv} m={m}");
        }
    }
}

#[test]
fn series_stopping_is_deterministic() {
    let p = TruncationPolicy::default();
    let terms = |k: usize| c((0.7f64).powi(k as i32) * (k as f64).sin(), 1.0 / (k * k * k) as f64);
    let a = series_sum(&p, terms);
    let b = series_sum(&p, terms);
    assert_eq!(a, b);
    assert_eq!(a.value.re.to_bits(), b.value.re.to_bits());
}

#[test]
fn limits_match_classical_values() {
    let p = TruncationPolicy::default();
    let grid = default_q_grid();
    for idx in admissible_up_to(5) {
        let got = q_to_1_extrapolate(&idx, &grid, &p).unwrap().extrapolated;
        let want = mzv_reference(&idx, 1_000_000).unwrap();
        assert!((got - want).norm() < 5e-4, "{:?}: {got} vs {want}", idx.entries());
    }
}

#[test]
fn values_increase_with_q() {
    let p = TruncationPolicy::default();
    let qs: Vec<f64> = (1..=9).map(|j| j as f64 / 10.0).collect();
    for idx in admissible_up_to(6) {
        let vals: Vec<f64> = qs.iter().map(|&v| zeta_q(&idx, q(v), &p).unwrap().value.re).collect();
        assert!(vals.windows(2).all(|w| w[0] < w[1]), "{:?}: {vals:?}", idx.entries());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn consecutive_q_integers_differ_by_power(qv in 0.05f64..0.95, m in 1u32..5000) {
        let qq = q(qv);
        let diff = q_int(m as f64, qq) - q_int(m as f64 - 1.0, qq);
        let want = qv.powi(m as i32 - 1);
        prop_assert!((diff - want).abs() <= 8.0 * f64::EPSILON * q_int(m as f64, qq));
    }

    #[test]
    fn q_floor_is_idempotent(qv in 0.05f64..0.95, frac in 0.0f64..0.999_999) {
        let qq = q(qv);
        let x = frac * qq.limit();
        let once = lbag(x, qq).unwrap();
        prop_assert_eq!(lbag(once, qq).unwrap(), once);
        prop_assert!(once <= x);
    }

    #[test]
    fn raising_real_parts_keeps_domain(
        entries in prop::collection::vec((-2.0f64..4.0, -2.0f64..2.0), 1..5),
        slot in 0usize..4,
        bump in 0.0f64..3.0,
        qv in 0.1f64..0.9,
    ) {
        let idx = MultiIndex::new(entries.iter().map(|&(a, b)| c(a, b)).collect()).unwrap();
        let before = convergence_margin(&idx, q(qv));
        let mut raised = idx.entries().to_vec();
        let j = slot % raised.len();
        raised[j].re += bump;
        let after = convergence_margin(&MultiIndex::new(raised).unwrap(), q(qv));
        prop_assert!(after.margin >= before.margin);
        prop_assert!(!before.in_domain || after.in_domain);
    }

    #[test]
    fn conjugate_symmetry(
        first in (0.5f64..3.0, -3.0f64..3.0),
        last in (2.5f64..5.0, -3.0f64..3.0),
        qv in 0.1f64..0.85,
    ) {
        let p = TruncationPolicy::default();
        let idx = MultiIndex::new(vec![c(first.0, first.1), c(last.0, last.1)]).unwrap();
        let z = zeta_q(&idx, q(qv), &p).unwrap().value;
        let zc = zeta_q(&idx.conj(), q(qv), &p).unwrap().value;
        prop_assert!((zc - z.conj()).norm() <= 1e-15 * z.norm().max(1.0));
    }

    #[test]
    fn strip_continuation_extends_direct_series(
        s_re in 2.6f64..5.0,
        s_im in -2.0f64..2.0,
        alpha in 1.5f64..6.0,
        qv in 0.2f64..0.8,
    ) {
        let p = TruncationPolicy::default();
        let (s, a) = (c(s_re, s_im), c(alpha, 0.0));
        let cont = zeta_q_two_cont(s, a, q(qv), &p).unwrap().value;
        let direct = zeta_q(&MultiIndex::new(vec![s - a, a]).unwrap(), q(qv), &p).unwrap().value;
        prop_assert!((cont - direct).norm() < 1e-8, "{cont} vs {direct}");
    }

    #[test]
    fn strip_quadrature_matches_double_series(
        s_re in 1.1f64..1.95,
        s_im in -1.0f64..1.0,
        alpha in 1.5f64..12.0,
        qv in 0.2f64..0.85,
    ) {
        let p = TruncationPolicy::default();
        let (s, a) = (c(s_re, s_im), c(alpha, 0.0));
        let quad = zeta_q_two_cont(s, a, q(qv), &p).unwrap().value;
        let series = zeta_q_two_series(s, a, q(qv), &p, StopScale::Mixed).unwrap().value;
        prop_assert!((quad - series).norm() < 1e-9 * quad.norm().max(1.0), "{quad} vs {series}");
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn sum_formula_holds(k in 3u32..=7, r_frac in 0.0f64..1.0, qv in 0.1f64..0.85) {
        let r = 1 + ((k - 1) as f64 * r_frac) as u32 % (k - 1);
        let rep = check_sum_formula_qmzv(k, r, q(qv), &TruncationPolicy::default()).unwrap();
        prop_assert!(rep.abs_diff < 1e-9, "k={k} r={r}: {}", rep.abs_diff);
    }

    #[test]
    fn interpolated_sum_matches_depth_one(s_re in 2.2f64..5.0, s_im in -3.0f64..3.0, qv in 0.2f64..0.8) {
        let p = TruncationPolicy::default();
        let s = c(s_re, s_im);
        let lhs = interpolated_sum_depth2(s, q(qv), &p).unwrap();
        let rhs = zeta_q(&MultiIndex::new(vec![s]).unwrap(), q(qv), &p).unwrap();
        let allowed = 1e-6f64.max(lhs.abs_error_estimate + rhs.abs_error_estimate);
        prop_assert!((lhs.value - rhs.value).norm() < allowed);
    }

    #[test]
    fn g_closed_form_matches_recursion(
        b in 2u32..=3,
        prefix in prop::collection::vec(1.0f64..3.0, 0..=1),
        extra in 2.2f64..4.0,
        qv in 0.2f64..0.6,
    ) {
        let p = TruncationPolicy::default();
        let spec = GSpec::new(b, prefix.iter().map(|&x| c(x, 0.0)).collect(), c(b as f64 + extra, 0.0));
        let closed = g_closed_form(&spec, q(qv), &p).unwrap().value;
        let rec = g_value_recursive(&spec, q(qv), &p).unwrap().value;
        prop_assert!((closed - rec).norm() < 1e-7, "{closed} vs {rec}");
    }

    #[test]
    fn f_series_positive_and_decreasing_in_cutoff(
        kind in 0u8..4,
        d in 1u32..=2,
        cutoff in 0u64..5,
        extra in 2.5f64..6.0,
        im in -2.0f64..2.0,
        qv in 0.2f64..0.85,
    ) {
        let p = TruncationPolicy::default();
        let kind = FKind::from_index(kind).unwrap();
        let sigma = d as f64 + extra;
        let at = |cut: u64, s: Complex64| f_series(&FSpec::new(kind, cut, s, d), q(qv), &p).unwrap().value;
        let here = at(cutoff, c(sigma, 0.0));
        let next = at(cutoff + 1, c(sigma, 0.0));
        prop_assert!(here.re > 0.0 && here.im == 0.0);
        prop_assert!(next.re <= here.re);
        prop_assert!(at(cutoff, c(sigma, im)).norm() <= here.re * (1.0 + 1e-12));
    }

    #[test]
    fn shifted_f_identity_holds(d in 1u32..=2, cutoff in 0u64..=5, extra in 3.2f64..6.0, im in -2.0f64..2.0, qv in 0.2f64..0.85) {
        let r = check_f_identity(cutoff, c(d as f64 + extra, im), d, q(qv), &TruncationPolicy::default()).unwrap();
        prop_assert!(r.report.abs_diff < 1e-9, "{}", r.report.abs_diff);
    }
}
