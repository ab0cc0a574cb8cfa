//! Distributional checks for the stochastic oracle: exactness of the
//! rejection sampler, binomial marginals without suppression, and agreement
//! with the closed forms.

mod common;

use common::{pauli, rep_code_3};
use ddqec_core::code::{pauli_index, steane_code, DecoderMap, DecouplingGroup};
use ddqec_core::fidelity::{
    f_hybrid, f_ldd, f_qec, qed_only, NoiseParams, Strategy,
};
use ddqec_core::mc::{estimate, sample_error, McConfig};
use ddqec_core::wep::{compute_qed_weps, compute_weps};
use rand::SeedableRng;

fn params(p: f64, p_dd: f64, p_qec: f64, p_qed: f64) -> NoiseParams<f64> {
    NoiseParams::new(p, p_dd, p_qec, p_qed).unwrap()
}

#[test]
fn sampler_matches_renormalized_model_chi_square() {
    // n = 2, single-generator group, 10^6 draws: empirical counts over all
    // 16 Paulis against the rescaled model, chi-square with 15 degrees of
    // freedom at significance 1e-3 (critical value 37.697).
    let n = 2;
    let (p, p_dd) = (0.35, 0.4);
    let dd = DecouplingGroup::new(vec![pauli("XZ")]).unwrap();
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(12345);
    let draws = 1_000_000u64;
    let mut counts = [0u64; 16];
    for _ in 0..draws {
        let e = sample_error(&mut rng, n, p, Some((&dd, p_dd))).unwrap();
        counts[pauli_index(&e) as usize] += 1;
    }
    // Model: Pr(E) ~ (1-p)^(n-w) (p/3)^w, rescaled by p_dd if suppressed.
    let mut weights = [0f64; 16];
    for idx in 0..16u64 {
        let e = ddqec_core::code::pauli_from_index(n, idx);
        let w = e.weight();
        let base = (1.0 - p).powi(2 - w as i32) * (p / 3.0).powi(w as i32);
        let scale = if dd.suppresses(&e).unwrap() { p_dd } else { 1.0 };
        weights[idx as usize] = base * scale;
    }
    let total: f64 = weights.iter().sum();
    let mut chi2 = 0.0;
    for i in 0..16 {
        let expected = weights[i] / total * draws as f64;
        let diff = counts[i] as f64 - expected;
        chi2 += diff * diff / expected;
    }
    assert!(chi2 < 37.697, "chi-square statistic {chi2} exceeds the 1e-3 critical value");
}

#[test]
fn unsuppressed_draws_have_binomial_weights() {
    // p_dd = 1: plain i.i.d. depolarizing draws; weight histogram matches
    // binomial(n, w) 3^w proportions within 5 sigma.
    let n = 5;
    let p = 0.3;
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(77);
    let draws = 400_000u64;
    let mut weight_counts = [0u64; 6];
    for _ in 0..draws {
        let e = sample_error(&mut rng, n, p, None).unwrap();
        weight_counts[e.weight() as usize] += 1;
    }
    for w in 0..=n {
        let prob = binomial(n, w) as f64 * (p / 3.0).powi(w as i32) * 3f64.powi(w as i32)
            * (1.0 - p).powi((n - w) as i32);
        let expect = prob * draws as f64;
        let sigma = (prob * (1.0 - prob) * draws as f64).sqrt();
        let diff = (weight_counts[w] as f64 - expect).abs();
        assert!(diff <= 5.0 * sigma, "weight {w}: {diff} > 5 sigma ({sigma})");
    }
}

fn binomial(n: usize, w: usize) -> u64 {
    let mut v = 1u64;
    for i in 0..w {
        v = v * (n - i) as u64 / (i + 1) as u64;
    }
    v
}

#[test]
fn forced_decoder_failure_rate() {
    // p_qec = 1 on the repetition code at moderate noise: conditioned on a
    // nontrivial syndrome the fault rate is exactly 3/4 for k = 1. Estimate
    // the conditional rate through the LDD-only strategy.
    let code = rep_code_3();
    let dd = DecouplingGroup::new(vec![pauli("XXX")]).unwrap();
    let decoder = DecoderMap::min_weight(&code).unwrap();
    let config = McConfig {
        shots: 400_000,
        seed: 3,
        streams: 4,
        strategy: Strategy::LddOnly,
        params: params(0.25, 1.0, 1.0, 0.0),
    };
    let est = estimate(&config, &code, Some(&decoder), Some(&dd)).unwrap();
    let wep = compute_weps(&code, &decoder, &dd).unwrap();
    let expect = f_ldd(&wep, &config.params).unwrap();
    assert!((est.f_hat - expect).abs() <= 4.0 * est.f_stderr);
}

#[test]
fn steane_strategies_agree_with_closed_forms() {
    let code = steane_code();
    let decoder = DecoderMap::min_weight(&code).unwrap();
    let dd = DecouplingGroup::new(vec![pauli("XXXXXXX"), pauli("ZZZZZZZ")]).unwrap();
    let qec_wep = compute_weps(&code, &decoder, &dd).unwrap();
    let qed_wep = compute_qed_weps(&code, &dd).unwrap();
    let shots = 300_000;

    let pr = params(0.05, 0.1, 0.1, 0.0);
    let config = McConfig { shots, seed: 41, streams: 8, strategy: Strategy::Hybrid, params: pr.clone() };
    let est = estimate(&config, &code, Some(&decoder), Some(&dd)).unwrap();
    let expect = f_hybrid(&qec_wep, &pr).unwrap();
    assert!((est.f_hat - expect).abs() <= 4.0 * est.f_stderr, "hybrid");

    let pr = params(0.08, 1.0, 0.2, 0.0);
    let config = McConfig { shots, seed: 42, streams: 8, strategy: Strategy::QecOnly, params: pr.clone() };
    let est = estimate(&config, &code, Some(&decoder), None).unwrap();
    let expect = f_qec(&qec_wep, &pr).unwrap();
    assert!((est.f_hat - expect).abs() <= 4.0 * est.f_stderr, "qec_only");

    let pr = params(0.05, 1.0, 0.0, 0.02);
    let config = McConfig { shots, seed: 43, streams: 8, strategy: Strategy::QedOnly, params: pr.clone() };
    let est = estimate(&config, &code, None, None).unwrap();
    let expect = qed_only(&qed_wep, &pr).unwrap();
    assert!((est.f_hat - expect.fidelity).abs() <= 4.0 * est.f_stderr, "qed_only F");
    assert!(
        (est.pa_hat - expect.acceptance.unwrap()).abs() <= 4.0 * est.pa_stderr,
        "qed_only P_A"
    );
}

#[test]
fn qed_zero_acceptance_is_reported_not_thrown() {
    // p_qed = 1 forces random readout; with n - k large and few shots the
    // acceptance can be zero, which reports NaN fidelity.
    let code = steane_code();
    let config = McConfig {
        shots: 3,
        seed: 9,
        streams: 1,
        strategy: Strategy::QedOnly,
        params: params(0.0, 1.0, 0.0, 1.0),
    };
    let est = estimate(&config, &code, None, None).unwrap();
    if est.shots_accepted == 0 {
        assert!(est.f_hat.is_nan());
    }
}
