//! Small-p structure: series consistency with the leading-order extractors,
//! the linear-coefficient bounds, dressing search outcomes, and the QED
//! expansion oracle.

mod common;

use common::{code13, code13_decoder, code13_group, pauli};
use ddqec_core::asymptotics::{
    advantage_verdicts, certify_low_noise_advantage, find_dressing, ldd_linear_coeffs,
    qec_asymptotics, qed_asymptotics, suppressed_asymptotics, AsymptoticsError, DressingOutcome,
};
use ddqec_core::code::{steane_code, DecoderMap, DecouplingGroup, StabilizerCode};
use ddqec_core::fidelity::Strategy;
use ddqec_core::scalar::Scalar;
use ddqec_core::series::{affine_fit, series_infidelity, SeriesParams};
use ddqec_core::wep::{compute_qed_weps, compute_weps};
use num_rational::BigRational;

fn rat(n: i64, d: u64) -> BigRational {
    <BigRational as Scalar>::from_ratio(n, d)
}

#[test]
fn lemma3_series_consistency_steane() {
    // The exact QEC-only series must lead with alpha and a_count, and its
    // p_qec slope at z^1 must equal the extracted b coefficient.
    let code = steane_code();
    let decoder = DecoderMap::min_weight(&code).unwrap();
    let dd = DecouplingGroup::new(vec![pauli("XXXXXXX"), pauli("ZZZZZZZ")]).unwrap();
    let wep = compute_weps(&code, &decoder, &dd).unwrap();
    let (alpha, a_count, b) = qec_asymptotics(&wep, 1).unwrap();
    assert_eq!((alpha, a_count), (2, 147));

    let zero = SeriesParams::ideal();
    let s0 = series_infidelity(&wep, Strategy::QecOnly, &zero, 2).unwrap();
    assert_eq!(s0[0], rat(0, 1));
    assert_eq!(s0[1], rat(0, 1));
    assert_eq!(s0[2], rat(147, 1));

    // b = coefficient of p_qec * z: difference quotient at p_qec in {0, 1}.
    let mut one = SeriesParams::ideal();
    one.p_qec = rat(1, 1);
    let s1 = series_infidelity(&wep, Strategy::QecOnly, &one, 1).unwrap();
    assert_eq!(s1[1].clone() - s0[1].clone(), b);
    assert_eq!(b, rat(63, 4));
}

#[test]
fn lemma4_series_consistency() {
    // Linear term of the LDD-only series equals a (1 - p_dd) + b p_dd at
    // p_dd in {0, 1/2, 1}, exactly.
    let code = steane_code();
    let decoder = DecoderMap::min_weight(&code).unwrap();
    for gens in [["XXXXXXX", "ZZZZZZZ"], ["XXXIIII", "ZZZIIII"]] {
        let dd = DecouplingGroup::new(gens.iter().map(|s| pauli(s)).collect()).unwrap();
        let wep = compute_weps(&code, &decoder, &dd).unwrap();
        let (a, b) = ldd_linear_coeffs(&code, &dd);
        for p_dd in [rat(0, 1), rat(1, 2), rat(1, 1)] {
            let params = SeriesParams { p_dd: p_dd.clone(), p_qec: rat(0, 1), p_qed: rat(0, 1) };
            let s = series_infidelity(&wep, Strategy::LddOnly, &params, 1).unwrap();
            let expect = a.clone() * (rat(1, 1) - p_dd.clone()) + b.clone() * p_dd.clone();
            assert_eq!(s[1], expect);
        }
        // Nontrivial-code lower bound b >= 3k + 3/2.
        assert!(b >= rat(3, 1) + rat(3, 2));
    }
}

#[test]
fn code13_alpha_beta_and_series() {
    let code = code13();
    let dd = code13_group();
    let decoder = code13_decoder(&code, &dd);
    let wep = compute_weps(&code, &decoder, &dd).unwrap();

    let (alpha, a_count, _) = qec_asymptotics(&wep, 1).unwrap();
    assert_eq!((alpha, a_count), (2, 9));
    let (beta, b_count) = suppressed_asymptotics(&wep).unwrap();
    assert_eq!((beta, b_count), (3, 2544));

    // Hybrid series: 9 z^2 + (771 + 2265 p_dd) z^3, recovered by affine fit
    // over p_dd in {0, 1/2, 1}.
    let eval = |p_dd: BigRational| {
        let params = SeriesParams { p_dd, p_qec: rat(0, 1), p_qed: rat(0, 1) };
        series_infidelity(&wep, Strategy::Hybrid, &params, 3).unwrap()
    };
    let s0 = eval(rat(0, 1));
    let s1 = eval(rat(1, 1));
    let sh = eval(rat(1, 2));
    assert_eq!(s0[2], rat(9, 1));
    assert_eq!(s1[2], rat(9, 1));
    let (constant, slope) = affine_fit(&s0[3], &s1[3], &sh[3]).expect("cubic term affine in p_dd");
    assert_eq!(constant, rat(771, 1));
    assert_eq!(slope, rat(2265, 1));

    // QEC-only: 9 z^2 + 3036 z^3.
    let qec = series_infidelity(&wep, Strategy::QecOnly, &SeriesParams::ideal(), 3).unwrap();
    assert_eq!(qec[2], rat(9, 1));
    assert_eq!(qec[3], rat(3036, 1));
}

#[test]
fn code13_verdicts_and_dressing() {
    let code = code13();
    let dd = code13_group();
    let decoder = code13_decoder(&code, &dd);
    let wep = compute_weps(&code, &decoder, &dd).unwrap();

    let verdicts = advantage_verdicts(&code, &decoder, &dd, &wep).unwrap();
    assert!(!verdicts.part1_beta_equals_alpha);
    assert_eq!(verdicts.part2_applicable, Some(true));
    // d = 3 >= 2: alpha <= ceil(3/2) = 2 and every weight-2 uncorrectable
    // is detected.
    assert_eq!(verdicts.part3_checked, Some(true));
    assert_eq!(verdicts.part4_checked, Some(true));

    match find_dressing(&code, &decoder, &dd, &wep).unwrap() {
        DressingOutcome::Found { group, beta_after, .. } => {
            assert_eq!(beta_after, 2);
            // The dressed group still acts as the same logical pair.
            assert_eq!(
                code.logical_label(&group.generators()[0]).unwrap(),
                code.logical_label(&dd.generators()[0]).unwrap()
            );
            // Low-noise certification at the probe suppression strengths.
            let dressed_wep = compute_weps(&code, &decoder, &group).unwrap();
            let p0 = certify_low_noise_advantage(&dressed_wep, &[0.0, 0.5, 0.9]);
            assert!(p0.is_some_and(|p| p > 0.0));
        }
        DressingOutcome::NotFound => panic!("dressing must exist for the 13-qubit example"),
    }
}

#[test]
fn dressing_rejects_beta_equal_alpha() {
    let code = steane_code();
    let decoder = DecoderMap::min_weight(&code).unwrap();
    let dd = DecouplingGroup::new(vec![pauli("XXXXXXX"), pauli("ZZZZZZZ")]).unwrap();
    let wep = compute_weps(&code, &decoder, &dd).unwrap();
    assert!(matches!(
        find_dressing(&code, &decoder, &dd, &wep),
        Err(AsymptoticsError::DressingNotApplicable { alpha: 2, beta: 2 })
    ));
}

#[test]
fn dressing_not_found_when_all_minimal_uncorrectables_are_logical() {
    // A [[8,1]] code with one bare qubit: the 7-qubit block is a Steane code
    // whose logical Z has been promoted to a stabilizer, so qubit 0 carries
    // weight-1 logicals (d = 1) while every detected weight-1 error on the
    // block is corrected. All weight-alpha uncorrectables then have zero
    // syndrome and dressing cannot reach them.
    let embed = |s: &str| pauli(&format!("I{s}"));
    let steane = steane_code();
    let mut gens: Vec<_> = steane
        .stabilizer_gens()
        .iter()
        .map(|g| embed(&format!("{g}")))
        .collect();
    gens.push(embed("ZZZZZZZ"));
    let code = StabilizerCode::new(
        8,
        1,
        gens,
        vec![pauli("XIIIIIII")],
        vec![pauli("ZIIIIIII")],
    );
    assert!(code.validate().is_empty());
    assert_eq!(code.distance().unwrap(), 1);

    let decoder = DecoderMap::min_weight(&code).unwrap();
    let dd = DecouplingGroup::new(vec![embed("XXXXXXX"), embed("ZZZZZZZ")]).unwrap();
    let wep = compute_weps(&code, &decoder, &dd).unwrap();
    let (alpha, _, _) = qec_asymptotics(&wep, 1).unwrap();
    assert_eq!(alpha, 1);
    let (beta, _) = suppressed_asymptotics(&wep).unwrap();
    assert!(beta > alpha);
    assert!(matches!(
        find_dressing(&code, &decoder, &dd, &wep).unwrap(),
        DressingOutcome::NotFound
    ));
}

#[test]
fn weight1_stabilizer_count_bound() {
    // W_1(St) <= n - k on the corpus.
    use ddqec_core::code::random_code;
    use rand::SeedableRng;
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
    let mut corpus: Vec<StabilizerCode> = vec![steane_code(), code13(), common::rep_code_3()];
    corpus.push(random_code(5, 1, &mut rng));
    for code in &corpus {
        let st1 = (0..code.n())
            .flat_map(|q| {
                [
                    ddqec_core::PauliOperator::x_on(code.n(), q),
                    ddqec_core::PauliOperator::y_on(code.n(), q),
                    ddqec_core::PauliOperator::z_on(code.n(), q),
                ]
            })
            .filter(|p| {
                code.syndrome(p).unwrap().is_trivial() && code.logical_label(p).unwrap() == 0
            })
            .count();
        assert!(st1 <= code.n() - code.k());
    }
}

#[test]
fn qed_series_oracle_matches_lemma_coefficients() {
    // Exact series of the QED-only infidelity against the extracted
    // coefficients: c_d = a exactly at p_qed = 0, and at rational t > 0 the
    // z-linear coefficient satisfies c_1 (1 - (1 - 2^(k-n)) t) = coeff * t.
    let code = steane_code();
    let dd = DecouplingGroup::new(vec![pauli("XXXXXXX"), pauli("ZZZZZZZ")]).unwrap();
    let qed = compute_qed_weps(&code, &dd).unwrap();
    let asym = qed_asymptotics(&qed).unwrap();
    assert_eq!(asym.d, 3);
    assert_eq!(asym.infid_linear_coeff, rat(63, 256));

    let ideal = series_infidelity(&qed, Strategy::QedOnly, &SeriesParams::ideal(), 3).unwrap();
    assert_eq!(ideal[1], rat(0, 1));
    assert_eq!(ideal[2], rat(0, 1));
    assert_eq!(ideal[3], <BigRational as Scalar>::from_u64(asym.a_count));

    for t in [rat(1, 8), rat(1, 3), rat(2, 3)] {
        let params = SeriesParams { p_dd: rat(1, 1), p_qec: rat(0, 1), p_qed: t.clone() };
        let s = series_infidelity(&qed, Strategy::QedOnly, &params, 1).unwrap();
        let damping = rat(1, 1) - (rat(1, 1) - rat(1, 64)) * t.clone();
        assert_eq!(s[1].clone() * damping, asym.infid_linear_coeff.clone() * t);
    }
}

#[test]
fn bisection_certifies_part1_groups() {
    // Steane with the standard group has beta = alpha = 2, so a positive
    // advantage threshold must exist for the probe p_dd values.
    let code = steane_code();
    let decoder = DecoderMap::min_weight(&code).unwrap();
    let dd = DecouplingGroup::new(vec![pauli("XXXXXXX"), pauli("ZZZZZZZ")]).unwrap();
    let wep = compute_weps(&code, &decoder, &dd).unwrap();
    let verdicts = advantage_verdicts(&code, &decoder, &dd, &wep).unwrap();
    assert!(verdicts.part1_beta_equals_alpha);
    let p0 = certify_low_noise_advantage(&wep, &[0.0, 0.5, 0.9]).unwrap();
    assert!(p0 > 0.0 && p0 < 1.0);
}

#[test]
fn b_bound_holds_when_alpha_at_least_two() {
    // b >= 3k + 15/4 whenever alpha >= 2, on the corpus codes with their
    // logical-pair groups.
    let cases: Vec<(StabilizerCode, DecouplingGroup)> = vec![
        (
            steane_code(),
            DecouplingGroup::new(vec![pauli("XXXXXXX"), pauli("ZZZZZZZ")]).unwrap(),
        ),
        (code13(), code13_group()),
    ];
    for (code, dd) in cases {
        let decoder = DecoderMap::min_weight(&code).unwrap();
        let wep = compute_weps(&code, &decoder, &dd).unwrap();
        let (alpha, _, b) = qec_asymptotics(&wep, code.k()).unwrap();
        if alpha >= 2 {
            let bound = rat(3 * code.k() as i64, 1) + rat(15, 4);
            assert!(b >= bound, "b = {b} below bound for n = {}", code.n());
        }
    }
}

#[test]
fn logging_alpha_one_case() {
    // Distance-1 codes have alpha = 1; the extractor reports it without
    // asserting the alpha >= 2 bound.
    let code = StabilizerCode::trivial(1);
    let decoder = DecoderMap::min_weight(&code).unwrap();
    let dd = DecouplingGroup::full_pauli(1);
    let wep = compute_weps(&code, &decoder, &dd).unwrap();
    let (alpha, a, _) = qec_asymptotics(&wep, 1).unwrap();
    assert_eq!((alpha, a), (1, 3));
}
