use eginoe::asymgap::ldp_estimate;
use eginoe::asymptotics::{cumulant, d_alpha, c_alpha, predict, CMethod, DMethod, Quantity, Regime};
use eginoe::genmatrix::build;
use eginoe::montecarlo::{count_real_eigenvalues, sample_matrix, substream, SamplerKind};
use eginoe::probabilities::{
    distribution, eigenvalue_remainder_bound, log_generating, log_p_zero_truncated, log_series_remainder,
    remainder_bound,
};
use eginoe::spectrum::{eigendecompose, trace_power, Spectrum};
use proptest::prelude::*;

fn spectrum(n: usize, tau: f64) -> Spectrum {
    eigendecompose(&build(n, tau).unwrap()).unwrap()
}

fn tau_strategy() -> impl Strategy<Value = f64> {
    -0.9f64..0.99
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 48, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn matrix_is_symmetric_with_unit_interval_spectrum(n in 1usize..24, tau in tau_strategy()) {
        let m = build(n, tau).unwrap();
        let d = m.to_dense();
        for j in 0..n {
            for k in 0..n {
                prop_assert_eq!(d[j * n + k].to_bits(), d[k * n + j].to_bits());
            }
        }
        let s = eigendecompose(&m).unwrap();
        prop_assert!(s.lambdas.windows(2).all(|w| w[0] >= w[1]));
        prop_assert!(s.max() < 1.0);
        prop_assert!(s.min() > -1e-12);
        let t1 = trace_power(&s, 1);
        prop_assert!((t1 - m.trace()).abs() <= 1e-12 * m.trace().abs().max(1.0));
    }

    #[test]
    fn probabilities_sum_to_one_and_match_generating_function(
        n in 1usize..24, tau in tau_strategy(), x in 0.0f64..2.0,
    ) {
        let s = spectrum(n, tau);
        let d = distribution(&s).unwrap();
        prop_assert!((d.total() - 1.0).abs() < 1e-10);
        prop_assert!(d.probs_f64().iter().all(|&p| p >= 0.0));
        let poly: f64 = d.probs_f64().iter().enumerate().map(|(k, p)| p * x.powi(k as i32)).sum();
        let g = log_generating(&s, x).unwrap().exp();
        prop_assert!(((g - poly) / poly).abs() < 1e-9, "{} vs {}", g, poly);
        prop_assert!(log_generating(&s, 1.0).unwrap().abs() < 1e-15);
    }

    #[test]
    fn count_variance_positive_below_one(n in 1usize..24, tau in -0.9f64..0.999) {
        let s = spectrum(n, tau);
        prop_assert!(cumulant(&s, 2).unwrap() > 0.0);
    }

    #[test]
    fn first_cumulant_is_twice_the_trace(n in 1usize..24, tau in tau_strategy()) {
        let s = spectrum(n, tau);
        prop_assert_eq!(cumulant(&s, 1).unwrap(), 2.0 * trace_power(&s, 1));
    }

    #[test]
    fn variance_matches_second_derivative_of_generating_function(n in 1usize..20, tau in tau_strategy()) {
        // Var(K) for K = 2k: 4 (g''(1) + g'(1)) with g = log of the pgf of k
        let s = spectrum(n, tau);
        let g = |x: f64| log_generating(&s, x).unwrap();
        let fd = |h: f64| {
            let d1 = (g(1.0 + h) - g(1.0 - h)) / (2.0 * h);
            let d2 = (g(1.0 + h) - 2.0 * g(1.0) + g(1.0 - h)) / (h * h);
            4.0 * (d2 + d1)
        };
        // one Richardson step removes the O(h^2) term
        let var = (4.0 * fd(5e-4) - fd(1e-3)) / 3.0;
        let k2 = cumulant(&s, 2).unwrap();
        prop_assert!((var - k2).abs() < 1e-6 * k2.max(1.0), "{} vs {}", var, k2);
    }

    #[test]
    fn remainder_bounded_and_truncation_monotone(l in 1e-6f64..0.999_999, k in 1usize..200) {
        let r = log_series_remainder(l, k);
        prop_assert!(r >= 0.0);
        prop_assert!(r <= eigenvalue_remainder_bound(l, k) * (1.0 + 1e-12));
    }

    #[test]
    fn truncated_log_decreases_towards_log_p_zero(n in 1usize..20, tau in tau_strategy(), k in 1usize..60) {
        let s = spectrum(n, tau);
        let a = log_p_zero_truncated(&s, k).unwrap();
        let b = log_p_zero_truncated(&s, k + 1).unwrap();
        let log_p = log_generating(&s, 0.0).unwrap();
        let slack = 1e-12 * log_p.abs().max(1.0);
        prop_assert!(b.truncated <= a.truncated + slack);
        prop_assert!(b.truncated + slack >= log_p);
        prop_assert!(a.remainder <= remainder_bound(&s, k).unwrap() + slack);
    }

    #[test]
    fn sampled_counts_have_the_parity_of_n(half in 1usize..12, tau in -1.0f64..=1.0, seed in any::<u64>()) {
        let big_n = 2 * half + (seed % 2) as usize;
        for kind in [SamplerKind::GoeAntisymmetric, SamplerKind::CorrelatedPairs] {
            let mut rng = substream(seed, 0);
            let a = sample_matrix(big_n, tau, kind, &mut rng).unwrap();
            let c = count_real_eigenvalues(&a, big_n).unwrap();
            prop_assert_eq!(c % 2, big_n % 2);
            prop_assert!(c <= big_n);
        }
    }

    #[test]
    fn interpolating_constants_decrease(a in 0.05f64..6.0, step in 0.05f64..2.0) {
        let b = a + step;
        prop_assert!(c_alpha(b, CMethod::Bessel).unwrap() < c_alpha(a, CMethod::Bessel).unwrap());
        let ra = d_alpha(a, DMethod::Series).unwrap() / c_alpha(a, CMethod::Bessel).unwrap();
        let rb = d_alpha(b, DMethod::Series).unwrap() / c_alpha(b, CMethod::Bessel).unwrap();
        prop_assert!(rb < ra, "{} -> {}: {} vs {}", a, b, ra, rb);
    }

    #[test]
    fn strong_rate_over_mean_coefficient_is_constant(tau in 0.0f64..0.99) {
        let r = Regime::Strong(tau);
        let ldp = predict(r, Quantity::LdpRate).unwrap().unwrap().value;
        let mean = predict(r, Quantity::MeanCount).unwrap().unwrap().value;
        let r0 = Regime::Strong(0.0);
        let ldp0 = predict(r0, Quantity::LdpRate).unwrap().unwrap().value;
        let mean0 = predict(r0, Quantity::MeanCount).unwrap().unwrap().value;
        prop_assert!((ldp / mean - ldp0 / mean0).abs() < 1e-12);
    }
}

#[test]
fn scaled_log_p_decreases_with_tau() {
    for n in [8usize, 32, 100] {
        let vals: Vec<f64> = [0.0, 0.25, 0.5, 0.75]
            .iter()
            .map(|&t| {
                let s = spectrum(n, t);
                ldp_estimate(&s, Regime::Strong(t), 50).unwrap().scaled_log_p
            })
            .collect();
        assert!(vals.windows(2).all(|w| w[1] < w[0]), "n={n}: {vals:?}");
    }
}
