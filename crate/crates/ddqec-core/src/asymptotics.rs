//! Small-`p` structure of the infidelities: leading uncorrectable weights and
//! counts, linear coefficients, low-noise advantage verdicts, and the
//! stabilizer-dressing search.

use core::fmt;

use num_rational::BigRational;

use crate::code::{pauli_from_index, DecoderMap, DecouplingGroup, StabilizerCode, SymplecticInfo};
use crate::fidelity::{infidelity_hybrid, infidelity_qec, NoiseParams};
use crate::pauli::PauliOperator;
use crate::scalar::{four_pow_neg_k, two_pow_k_minus_n, Scalar};
use crate::wep::{compute_weps, Setting, Tag, WepError, WepTable};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum AsymptoticsError {
    /// A tag vector that must have a nonzero entry was identically zero.
    EmptyTag(Tag),
    /// Suppressed uncorrectable errors cannot be absent for a valid
    /// nontrivial group and code; an all-zero tag means inconsistent inputs.
    InconsistentInputs(&'static str),
    /// The dressing search requires `beta > alpha`.
    DressingNotApplicable { alpha: u32, beta: u32 },
    /// Lemma precondition `d >= 2` failed.
    DistanceTooSmall { d: u32 },
    Wep(WepError),
}

impl fmt::Display for AsymptoticsError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AsymptoticsError::EmptyTag(tag) => write!(f, "tag {tag} is identically zero"),
            AsymptoticsError::InconsistentInputs(what) => {
                write!(f, "inconsistent inputs: {what}")
            }
            AsymptoticsError::DressingNotApplicable { alpha, beta } => {
                write!(f, "dressing requires beta > alpha, got alpha={alpha}, beta={beta}")
            }
            AsymptoticsError::DistanceTooSmall { d } => {
                write!(f, "requires distance >= 2, got d={d}")
            }
            AsymptoticsError::Wep(e) => write!(f, "{e}"),
        }
    }
}

impl core::error::Error for AsymptoticsError {}

impl From<WepError> for AsymptoticsError {
    fn from(e: WepError) -> Self {
        AsymptoticsError::Wep(e)
    }
}

fn leading(coeffs: &[u64]) -> Option<(u32, u64)> {
    coeffs
        .iter()
        .position(|&c| c > 0)
        .map(|w| (w as u32, coeffs[w]))
}

/// Leading QEC-only structure: `alpha` (minimal uncorrectable weight), its
/// count, and the linear recovery-failure coefficient `b`, the `z` slope of
/// `C - 4^-k D`.
pub fn qec_asymptotics(
    wep: &WepTable,
    k: usize,
) -> Result<(u32, u64, BigRational), AsymptoticsError> {
    let not_c = wep.coeffs(Tag::NotC)?;
    let (alpha, a_count) =
        leading(not_c).ok_or(AsymptoticsError::EmptyTag(Tag::NotC))?;
    let c1 = <BigRational as Scalar>::from_u64(wep.coeffs(Tag::C)?[1]);
    let d1 = <BigRational as Scalar>::from_u64(wep.coeffs(Tag::D)?[1]);
    let b = c1 - four_pow_neg_k::<BigRational>(k) * d1;
    if alpha >= 2 {
        // With all weight-1 errors corrected, b has the factored closed form.
        let st1 = <BigRational as Scalar>::from_u64(wep.coeffs(Tag::St)?[1]);
        let three_n = <BigRational as Scalar>::from_u64(3 * wep.n() as u64);
        let expect = (<BigRational as Scalar>::one() - four_pow_neg_k::<BigRational>(k))
            * (three_n - st1);
        debug_assert_eq!(b, expect);
    }
    Ok((alpha, a_count, b))
}

/// Leading suppressed-uncorrectable structure: `beta >= alpha` and its count.
pub fn suppressed_asymptotics(wep: &WepTable) -> Result<(u32, u64), AsymptoticsError> {
    let s_not_c = wep.coeffs(Tag::SNotC)?;
    leading(s_not_c).ok_or(AsymptoticsError::InconsistentInputs(
        "no suppressed uncorrectable errors; the group or code is degenerate",
    ))
}

/// Weight-1 membership counts used by the linear LDD coefficients.
struct Weight1Census {
    in_stabilizer: u64,
    in_zero_syndrome: u64,
    unsuppressed_nonstabilizer: u64,
    unsuppressed_detected: u64,
}

fn weight1_census(code: &StabilizerCode, dd: &DecouplingGroup) -> Weight1Census {
    let n = code.n();
    let mut census = Weight1Census {
        in_stabilizer: 0,
        in_zero_syndrome: 0,
        unsuppressed_nonstabilizer: 0,
        unsuppressed_detected: 0,
    };
    for q in 0..n {
        for p in [
            PauliOperator::x_on(n, q),
            PauliOperator::y_on(n, q),
            PauliOperator::z_on(n, q),
        ] {
            let zero_syn = code.syndrome(&p).unwrap().is_trivial();
            let stab = zero_syn && code.logical_label(&p).unwrap() == 0;
            let unsuppressed = !dd.suppresses(&p).unwrap();
            census.in_stabilizer += stab as u64;
            census.in_zero_syndrome += zero_syn as u64;
            census.unsuppressed_nonstabilizer += (unsuppressed && !stab) as u64;
            census.unsuppressed_detected += (unsuppressed && !zero_syn) as u64;
        }
    }
    census
}

/// Linear coefficients of the LDD-only infidelity: `1 - F = (a (1 - p_dd) +
/// b p_dd) z + O(z^2)`.
pub fn ldd_linear_coeffs(
    code: &StabilizerCode,
    dd: &DecouplingGroup,
) -> (BigRational, BigRational) {
    let census = weight1_census(code, dd);
    let fk = four_pow_neg_k::<BigRational>(code.k());
    let from = <BigRational as Scalar>::from_u64;
    let three_n = from(3 * code.n() as u64);
    let a = from(census.unsuppressed_nonstabilizer) - fk.clone() * from(census.unsuppressed_detected);
    let b = (three_n.clone() - from(census.in_stabilizer))
        - fk.clone() * (three_n - from(census.in_zero_syndrome));
    // With no weight-1 logicals both reduce to the (1 - 4^-k)-factored form.
    if census.in_zero_syndrome == census.in_stabilizer {
        let one = <BigRational as Scalar>::one();
        debug_assert_eq!(
            b.clone(),
            (one.clone() - fk.clone())
                * (from(3 * code.n() as u64) - from(census.in_stabilizer))
        );
        debug_assert_eq!(
            a.clone(),
            (one - fk) * from(census.unsuppressed_nonstabilizer)
        );
    }
    (a, b)
}

/// Structured verdicts for the four parts of the low-noise advantage
/// analysis.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AdvantageVerdicts {
    pub alpha: u32,
    pub a_count: u64,
    pub beta: u32,
    pub b_count: u64,
    /// Part 1: some minimum-weight uncorrectable error is suppressed.
    pub part1_beta_equals_alpha: bool,
    /// Part 2 applies: `beta > alpha` and a weight-`alpha` uncorrectable
    /// error with nonzero syndrome exists (so dressing can fix it).
    pub part2_applicable: Option<bool>,
    /// Part 3 (distance >= 2): `alpha <= ceil(d/2)` and every weight-alpha
    /// uncorrectable error is detected.
    pub part3_checked: Option<bool>,
    /// Part 4 (group = logical group, `beta > alpha`): nonzero-syndrome
    /// precondition holds.
    pub part4_checked: Option<bool>,
}

/// Evaluates the four advantage conditions for the given inputs.
pub fn advantage_verdicts(
    code: &StabilizerCode,
    decoder: &DecoderMap,
    dd: &DecouplingGroup,
    wep: &WepTable,
) -> Result<AdvantageVerdicts, AsymptoticsError> {
    let (alpha, a_count, _) = qec_asymptotics(wep, code.k())?;
    let (beta, b_count) = suppressed_asymptotics(wep)?;
    let part1 = beta == alpha;

    let l = wep.coeffs(Tag::L)?;
    let d = leading(l).map(|(w, _)| w);
    // Weight-alpha logicals are exactly the zero-syndrome uncorrectables.
    let alpha_all_detected = l[alpha as usize] == 0;
    let exists_detected_alpha =
        alpha_all_detected || find_detected_uncorrectable(code, decoder, alpha).is_some();

    let part2 = if beta > alpha { Some(exists_detected_alpha) } else { None };
    let part3 = match d {
        Some(d) if d >= 2 => Some(alpha <= d.div_ceil(2) && alpha_all_detected),
        _ => None,
    };
    let part4 = if dd.spans_logical_group(code) && beta > alpha {
        Some(alpha_all_detected)
    } else {
        None
    };
    Ok(AdvantageVerdicts {
        alpha,
        a_count,
        beta,
        b_count,
        part1_beta_equals_alpha: part1,
        part2_applicable: part2,
        part3_checked: part3,
        part4_checked: part4,
    })
}

/// First (by enumeration index) weight-`alpha` uncorrectable error with a
/// nonzero syndrome, if any.
fn find_detected_uncorrectable(
    code: &StabilizerCode,
    decoder: &DecoderMap,
    alpha: u32,
) -> Option<PauliOperator> {
    let info = SymplecticInfo::new(code);
    let mut recovery_label = alloc::vec![0u64; 1usize << code.syndrome_bits()];
    for (syn, rec) in decoder.entries() {
        recovery_label[syn.bits() as usize] = code.logical_label(rec).unwrap();
    }
    let total = 1u64 << (2 * code.n());
    for idx in 0..total {
        let (syn, label, w) = info.classify_index(idx);
        if w == alpha && syn != 0 && label != recovery_label[syn as usize] {
            return Some(pauli_from_index(code.n(), idx));
        }
    }
    None
}

/// Outcome of the stabilizer-dressing search.
#[derive(Clone, Debug)]
pub enum DressingOutcome {
    /// A dressed group achieving `beta' = alpha`, with the pieces used.
    Found {
        group: DecouplingGroup,
        error: PauliOperator,
        stabilizer: PauliOperator,
        generator_index: usize,
        beta_after: u32,
    },
    /// Every minimum-weight uncorrectable error has zero syndrome; dressing
    /// by stabilizers cannot change their suppression status.
    NotFound,
}

/// Dressing search: picks the first weight-`alpha` uncorrectable error with
/// nonzero syndrome, a stabilizer element anticommuting with it, and the
/// first group generator commuting with it, then replaces that generator by
/// its product with the stabilizer. All scans run in fixed enumeration order.
pub fn find_dressing(
    code: &StabilizerCode,
    decoder: &DecoderMap,
    dd: &DecouplingGroup,
    wep: &WepTable,
) -> Result<DressingOutcome, AsymptoticsError> {
    let (alpha, _, _) = qec_asymptotics(wep, code.k())?;
    let (beta, _) = suppressed_asymptotics(wep)?;
    if beta <= alpha {
        return Err(AsymptoticsError::DressingNotApplicable { alpha, beta });
    }
    let Some(error) = find_detected_uncorrectable(code, decoder, alpha) else {
        return Ok(DressingOutcome::NotFound);
    };

    // A set syndrome bit names an anticommuting stabilizer generator
    // directly; the combination scan is the fallback.
    let syn = code.syndrome(&error).unwrap();
    let stabilizer = if let Some(bit) = (0..syn.width()).find(|i| (syn.bits() >> i) & 1 == 1) {
        code.stabilizer_gens()[bit]
    } else {
        first_anticommuting_combination(code, &error)
            .ok_or(AsymptoticsError::InconsistentInputs("no stabilizer anticommutes"))?
    };

    // beta > alpha puts every weight-alpha uncorrectable in the unsuppressed
    // sector, so some generator (in fact all) commutes with it.
    let generator_index = dd
        .generators()
        .iter()
        .position(|g| error.commutes(g).unwrap())
        .ok_or(AsymptoticsError::InconsistentInputs(
            "weight-alpha error suppressed despite beta > alpha",
        ))?;
    let group = dd
        .dress_generator(generator_index, &stabilizer)
        .expect("index and size are valid by construction");

    let wep_after = compute_weps(code, decoder, &group)?;
    let (beta_after, _) = suppressed_asymptotics(&wep_after)?;
    debug_assert_eq!(beta_after, alpha);
    Ok(DressingOutcome::Found { group, error, stabilizer, generator_index, beta_after })
}

fn first_anticommuting_combination(
    code: &StabilizerCode,
    error: &PauliOperator,
) -> Option<PauliOperator> {
    let gens = code.stabilizer_gens();
    for combo in 1u64..(1u64 << gens.len()) {
        let mut s = PauliOperator::identity(code.n());
        for (i, g) in gens.iter().enumerate() {
            if (combo >> i) & 1 == 1 {
                s = s.multiply(g).unwrap();
            }
        }
        if !error.commutes(&s).unwrap() {
            return Some(s);
        }
    }
    None
}

/// Certifies the low-noise hybrid advantage by bisection: finds `z0 > 0`
/// such that the exact criterion holds at `z0` and at probe points below,
/// and the direct fidelity comparison agrees at the given `p_dd` values.
/// Returns the corresponding `p0 = 3 z0 / (1 + 3 z0)`.
pub fn certify_low_noise_advantage(
    wep: &WepTable,
    p_dd_probes: &[f64],
) -> Option<f64> {
    let mut z = 0.25f64;
    let floor = 1e-8;
    while z >= floor {
        let criterion = crate::fidelity::hyb_vs_qec_criterion(wep, &z);
        if matches!(criterion, Ok(ref c) if c.hybrid_wins) {
            // Verify at probe points below z and via direct comparison.
            let probes = [z, z / 2.0, z / 16.0, floor];
            let all_hold = probes.iter().all(|&zp| {
                let ok_criterion = matches!(
                    crate::fidelity::hyb_vs_qec_criterion(wep, &zp),
                    Ok(ref c) if c.hybrid_wins
                );
                let p = 3.0 * zp / (1.0 + 3.0 * zp);
                ok_criterion
                    && p_dd_probes.iter().all(|&p_dd| {
                        let params = NoiseParams::new(p, p_dd, 0.0, 0.0).unwrap();
                        match (infidelity_hybrid(wep, &params), infidelity_qec(wep, &params)) {
                            (Ok(h), Ok(q)) => h < q,
                            _ => false,
                        }
                    })
            });
            if all_hold {
                return Some(3.0 * z / (1.0 + 3.0 * z));
            }
        }
        z /= 2.0;
    }
    None
}

/// QED small-`z` structure: distance `d` (minimal nontrivial-logical
/// weight), its count, and the coefficient of `p_qed z` in the infidelity.
/// Also reports the rejection-probability coefficients: the constant
/// `(1 - 2^(k-n))` in `p_qed` and the slope `3n - W_1(St)` in `z`.
#[derive(Clone, Debug, PartialEq)]
pub struct QedAsymptotics {
    pub d: u32,
    pub a_count: u64,
    pub infid_linear_coeff: BigRational,
    pub reject_const_coeff: BigRational,
    pub reject_z_coeff: u64,
}

pub fn qed_asymptotics(
    wep: &WepTable,
) -> Result<QedAsymptotics, AsymptoticsError> {
    if wep.setting() != Setting::Qed {
        return Err(AsymptoticsError::Wep(WepError::MissingTag(Tag::StL)));
    }
    let (n, k) = (wep.n(), wep.k());
    let (d, a_count) =
        leading(wep.coeffs(Tag::L)?).ok_or(AsymptoticsError::EmptyTag(Tag::L))?;
    if d < 2 {
        return Err(AsymptoticsError::DistanceTooSmall { d });
    }
    let st1 = wep.coeffs(Tag::St)?[1];
    let one = <BigRational as Scalar>::one();
    let infid_linear_coeff = (one.clone() - four_pow_neg_k::<BigRational>(k))
        * two_pow_k_minus_n::<BigRational>(n, k)
        * <BigRational as Scalar>::from_u64(3 * n as u64 - st1);
    let reject_const_coeff = one - two_pow_k_minus_n::<BigRational>(n, k);
    Ok(QedAsymptotics {
        d,
        a_count,
        infid_linear_coeff,
        reject_const_coeff,
        reject_z_coeff: 3 * n as u64 - st1,
    })
}

/// Everything the asymptotics analysis produces for one (code, decoder,
/// group) triple, for serialization by the front end.
#[derive(Clone, Debug)]
pub struct AsymptoticsReport {
    pub alpha: u32,
    pub a_count: u64,
    pub beta: u32,
    pub b_count: u64,
    pub b_qec: BigRational,
    pub ldd_a: BigRational,
    pub ldd_b: BigRational,
    pub criterion_part1: bool,
    pub part2_applicable: Option<bool>,
    pub part3_checked: Option<bool>,
    pub part4_checked: Option<bool>,
    pub dressing_available: bool,
    pub qed: Option<QedAsymptotics>,
}

/// Runs the full analysis. The QED fields require a separate
/// detection-setting table and are skipped for distance-1 codes.
pub fn asymptotics_report(
    code: &StabilizerCode,
    decoder: &DecoderMap,
    dd: &DecouplingGroup,
    wep: &WepTable,
    wep_qed: Option<&WepTable>,
) -> Result<AsymptoticsReport, AsymptoticsError> {
    let (alpha, a_count, b_qec) = qec_asymptotics(wep, code.k())?;
    let (beta, b_count) = suppressed_asymptotics(wep)?;
    let (ldd_a, ldd_b) = ldd_linear_coeffs(code, dd);
    let verdicts = advantage_verdicts(code, decoder, dd, wep)?;
    let dressing_available = beta > alpha && verdicts.part2_applicable == Some(true);
    let qed = match wep_qed {
        Some(t) => match qed_asymptotics(t) {
            Ok(q) => Some(q),
            Err(AsymptoticsError::DistanceTooSmall { .. }) => None,
            Err(e) => return Err(e),
        },
        None => None,
    };
    Ok(AsymptoticsReport {
        alpha,
        a_count,
        beta,
        b_count,
        b_qec,
        ldd_a,
        ldd_b,
        criterion_part1: verdicts.part1_beta_equals_alpha,
        part2_applicable: verdicts.part2_applicable,
        part3_checked: verdicts.part3_checked,
        part4_checked: verdicts.part4_checked,
        dressing_available,
        qed,
    })
}
