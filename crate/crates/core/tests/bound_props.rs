use gadc_core::bounds_classical::{
    c_beta_analytic, c_cov_ub, c_fil_ub, holevo_gadc, mutual_info_gadc, mutual_info_objective,
};
use gadc_core::bounds_quantum::{
    coherent_info_lb, dp_bounds, eps_close_deg_ubs, eps_deg_ubs, q_rmg_ub, rains_inner,
};
use gadc_core::bounds_twoway::{
    esq_ub, half_mi_ub, max_rains_analytic, squashed_cmi, SquashVariant, SquashedBoundConfig,
};
use gadc_core::gadc::GadcParams;
use gadc_core::mathcore::h2;
use proptest::prelude::*;

fn params() -> impl Strategy<Value = GadcParams> {
    (0.0..=1.0f64, 0.0..=1.0f64).prop_map(|(gamma, n)| GadcParams { gamma, n })
}

fn interior() -> impl Strategy<Value = GadcParams> {
    (0.02..0.98f64, 0.02..0.98f64).prop_map(|(gamma, n)| GadcParams { gamma, n })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn classical_quantities_reflection_invariant(p in params()) {
        let r = p.reflected();
        prop_assert!((holevo_gadc(p).unwrap().chi - holevo_gadc(r).unwrap().chi).abs() <= 1e-8);
        prop_assert!((c_beta_analytic(p) - c_beta_analytic(r)).abs() <= 1e-8);
        prop_assert!((mutual_info_gadc(p).unwrap() - mutual_info_gadc(r).unwrap()).abs() <= 1e-8);
    }

    #[test]
    fn mutual_info_objective_concave(p in params(), z1 in -1.0..=1.0f64, z2 in -1.0..=1.0f64) {
        let mid = mutual_info_objective(p, 0.5 * (z1 + z2));
        let avg = 0.5 * (mutual_info_objective(p, z1) + mutual_info_objective(p, z2));
        prop_assert!(mid - avg >= -1e-9);
    }

    #[test]
    fn unital_bounds_coincide(gamma in 0.0..=1.0f64) {
        let p = GadcParams { gamma, n: 0.5 };
        let chi = holevo_gadc(p).unwrap().chi;
        prop_assert!((c_cov_ub(p).unwrap() - chi).abs() <= 1e-8);
        prop_assert!((c_fil_ub(p).unwrap() - chi).abs() <= 1e-6);
    }

    #[test]
    fn analytic_quantum_bounds_reflection_invariant(p in params()) {
        let r = p.reflected();
        prop_assert!((coherent_info_lb(p).unwrap() - coherent_info_lb(r).unwrap()).abs() <= 1e-6);
        let (a, b) = (dp_bounds(p).unwrap(), dp_bounds(r).unwrap());
        for (i, j) in [(0, 3), (1, 2), (2, 1), (3, 0)] {
            prop_assert!((a[i] - b[j]).abs() <= 1e-6);
        }
        prop_assert!((q_rmg_ub(p.thermal()).unwrap() - q_rmg_ub(r.thermal()).unwrap()).abs() <= 1e-6);
        prop_assert!((max_rains_analytic(p).unwrap() - max_rains_analytic(r).unwrap()).abs() <= 1e-14);
    }

    #[test]
    fn esq_identity_squash_is_half_mi(p in interior(), v in prop::bool::ANY) {
        let variant = if v { SquashVariant::One } else { SquashVariant::Two };
        let cfg = SquashedBoundConfig::new(variant, [0.0, 0.0, 0.0, 0.0]).unwrap();
        let esq = esq_ub(p, &cfg).unwrap().value;
        prop_assert!((esq - half_mi_ub(p).unwrap()).abs() <= 1e-8);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(8))]

    #[test]
    fn degradability_bounds_reflection_invariant(gamma in 0.02..0.48f64, n in 0.0..=1.0f64) {
        let p = GadcParams { gamma, n };
        let (a, b) = (eps_deg_ubs(p).unwrap(), eps_deg_ubs(p.reflected()).unwrap());
        prop_assert!((a.q_ub - b.q_ub).abs() <= 1e-6);
        prop_assert!(a.p_ub >= a.q_ub);
        // The close-degradable bound is anchored at A_{γ,0}, so it is not
        // reflection symmetric; only its private/quantum ordering is checked.
        let c = eps_close_deg_ubs(p).unwrap();
        prop_assert!(c.p_ub >= c.q_ub);
    }
}

#[test]
fn rains_objective_concave_in_p() {
    let mut x = 0x9e37_79b9_7f4a_7c15u64;
    let mut next = || {
        x ^= x << 13;
        x ^= x >> 7;
        x ^= x << 17;
        (x >> 11) as f64 / (1u64 << 53) as f64
    };
    for _ in 0..50 {
        let p = GadcParams {
            gamma: next(),
            n: next(),
        };
        let (a, b) = (next(), next());
        let mid = rains_inner(p, 0.5 * (a + b)).value;
        let avg = 0.5 * (rains_inner(p, a).value + rains_inner(p, b).value);
        assert!(
            mid - avg >= -1e-6,
            "γ={} N={} p₁={} p₂={}: {} < {}",
            p.gamma,
            p.n,
            a,
            b,
            mid,
            avg
        );
    }
}

#[test]
fn squashed_cmi_continuous_in_p() {
    for &(g, n) in &[(0.1, 0.1), (0.3, 0.5), (0.6, 0.2), (0.9, 0.9)] {
        let p = GadcParams { gamma: g, n };
        for variant in [SquashVariant::One, SquashVariant::Two] {
            let cfg = SquashedBoundConfig::standard(variant);
            let vals: Vec<f64> = (0..=100)
                .map(|k| squashed_cmi(p, &cfg, k as f64 / 100.0).unwrap())
                .collect();
            assert!(vals.iter().all(|&v| v >= 0.0));
            // ½I(A;B|E) ≤ H(A) = h₂(p) pins the end samples.
            assert!(vals[1] <= h2(0.01) + 1e-12 && vals[99] <= h2(0.01) + 1e-12);
            for w in vals[1..100].windows(2) {
                assert!(
                    (w[1] - w[0]).abs() <= 0.05,
                    "γ={} N={}: jump {}",
                    g,
                    n,
                    w[1] - w[0]
                );
            }
        }
    }
}
