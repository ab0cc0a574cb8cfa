//! Closed-form fidelities, acceptance probabilities, and comparison criteria
//! for the competing memory strategies.
//!
//! Each strategy's infidelity is a ratio of weight-enumerator combinations
//! evaluated at `z = p/(3-3p)`, with the suppression factor `p_DD`, the
//! recovery-failure rate `p_QEC`, and the detection-failure rate `p_QED`
//! entering affinely. Everything is generic over the numeric mode: `f64` for
//! speed, exact big rationals for the identity tests.
//!
//! Infidelities are computed directly from the uncorrectable-sector
//! enumerators rather than as `1 - F`, so tiny logical failure probabilities
//! keep full relative precision in `f64`.

use core::fmt;

use crate::scalar::{four_pow_neg_k, two_pow_k_minus_n, z_from_p, Scalar};
use crate::wep::{Setting, Tag, WepError, WepTable};

use alloc::string::String;

/// Error-model parameters. `z` is always derived from `p`, never stored.
#[derive(Clone, Debug, PartialEq)]
pub struct NoiseParams<T: Scalar> {
    /// Physical Pauli error probability, in `[0, 1)`.
    pub p: T,
    /// DD suppression factor, in `[0, 1]`; 1 means no suppression.
    pub p_dd: T,
    /// Recovery-failure probability, in `[0, 1]`.
    pub p_qec: T,
    /// Detection-failure probability, in `[0, 1]`.
    pub p_qed: T,
}

impl<T: Scalar> NoiseParams<T> {
    pub fn new(p: T, p_dd: T, p_qec: T, p_qed: T) -> Result<Self, FidelityError> {
        let zero = T::zero();
        let one = T::one();
        if p < zero || p >= one {
            return Err(FidelityError::Domain { parameter: "p", half_open: true });
        }
        for (name, v) in [("p_dd", &p_dd), ("p_qec", &p_qec), ("p_qed", &p_qed)] {
            if *v < zero || *v > one {
                return Err(FidelityError::Domain { parameter: name, half_open: false });
            }
        }
        Ok(NoiseParams { p, p_dd, p_qec, p_qed })
    }

    /// The WEP evaluation point `p / (3 - 3p)`.
    pub fn z(&self) -> T {
        z_from_p(&self.p)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FidelityError {
    Domain { parameter: &'static str, half_open: bool },
    MissingTag(Tag),
    /// A table of the wrong setting was supplied.
    WrongSetting { expected: Setting, actual: Setting },
    /// A ratio denominator evaluated to zero.
    DegenerateDenominator(&'static str),
}

impl fmt::Display for FidelityError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FidelityError::Domain { parameter, half_open } => {
                let range = if *half_open { "[0, 1)" } else { "[0, 1]" };
                write!(f, "parameter {parameter} outside {range}")
            }
            FidelityError::MissingTag(tag) => write!(f, "table does not carry tag {tag}"),
            FidelityError::WrongSetting { expected, actual } => {
                write!(f, "expected a {} table, got {}", expected.name(), actual.name())
            }
            FidelityError::DegenerateDenominator(what) => {
                write!(f, "degenerate denominator in {what}")
            }
        }
    }
}

impl core::error::Error for FidelityError {}

impl From<WepError> for FidelityError {
    fn from(e: WepError) -> Self {
        match e {
            WepError::MissingTag(tag) => FidelityError::MissingTag(tag),
            _ => FidelityError::DegenerateDenominator("wep evaluation"),
        }
    }
}

/// Memory-protection strategies, both settings.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Strategy {
    DdPhys,
    QecOnly,
    LddOnly,
    Hybrid,
    QedOnly,
    QedHybrid,
    QedLddOnly,
}

impl Strategy {
    pub fn name(&self) -> &'static str {
        match self {
            Strategy::DdPhys => "dd_phys",
            Strategy::QecOnly => "qec_only",
            Strategy::LddOnly => "ldd_only",
            Strategy::Hybrid => "hybrid",
            Strategy::QedOnly => "qed_only",
            Strategy::QedHybrid => "qed_hybrid",
            Strategy::QedLddOnly => "qed_ldd_only",
        }
    }

    pub fn from_name(name: &str) -> Option<Strategy> {
        [
            Strategy::DdPhys,
            Strategy::QecOnly,
            Strategy::LddOnly,
            Strategy::Hybrid,
            Strategy::QedOnly,
            Strategy::QedHybrid,
            Strategy::QedLddOnly,
        ]
        .into_iter()
        .find(|s| s.name() == name)
    }

    /// Whether the strategy reports an acceptance probability.
    pub fn is_postselected(&self) -> bool {
        matches!(self, Strategy::QedOnly | Strategy::QedHybrid)
    }

    /// Which table setting the strategy evaluates against (`None` for the
    /// unencoded DD baseline).
    pub fn setting(&self) -> Option<Setting> {
        match self {
            Strategy::DdPhys => None,
            Strategy::QecOnly | Strategy::LddOnly | Strategy::Hybrid => Some(Setting::Qec),
            Strategy::QedOnly | Strategy::QedHybrid | Strategy::QedLddOnly => Some(Setting::Qed),
        }
    }
}

impl fmt::Display for Strategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Evaluated figures of merit for one strategy at one parameter point.
#[derive(Clone, Debug, PartialEq)]
pub struct FidelityReport<T: Scalar> {
    pub strategy: Strategy,
    pub fidelity: T,
    /// Acceptance probability; `None` for strategies without postselection.
    pub acceptance: Option<T>,
    /// Unnormalized acceptance weight `Q` (detection setting only).
    pub acceptance_weight: Option<T>,
}

fn require_setting(wep: &WepTable, setting: Setting) -> Result<(), FidelityError> {
    if wep.setting() != setting {
        return Err(FidelityError::WrongSetting { expected: setting, actual: wep.setting() });
    }
    Ok(())
}

/// Physical-DD no-error probability on `k` unencoded qubits, closed form:
/// `(1-p)^k / ((1-p)^k + p_dd (1 - (1-p)^k))`.
pub fn f_dd_closed<T: Scalar>(p: &T, p_dd: &T, k: usize) -> Result<T, FidelityError> {
    if *p < T::zero() || *p >= T::one() {
        return Err(FidelityError::Domain { parameter: "p", half_open: true });
    }
    if *p_dd < T::zero() || *p_dd > T::one() {
        return Err(FidelityError::Domain { parameter: "p_dd", half_open: false });
    }
    let no_error = (T::one() - p.clone()).powi(k as u32);
    let denom = no_error.clone() + p_dd.clone() * (T::one() - no_error.clone());
    Ok(no_error / denom)
}

/// DD fidelity from enumerators: `(notS-St + p_dd S-St) / (notS + p_dd S)`.
/// Works on either setting's table (all four tags exist in both).
pub fn f_dd_general<T: Scalar>(
    wep: &WepTable,
    params: &NoiseParams<T>,
) -> Result<T, FidelityError> {
    let z = params.z();
    let num = wep.eval(Tag::NotSSt, &z)? + params.p_dd.clone() * wep.eval(Tag::SSt, &z)?;
    Ok(num / sector_denominator(wep, params, &z)?)
}

fn sector_denominator<T: Scalar>(
    wep: &WepTable,
    params: &NoiseParams<T>,
    z: &T,
) -> Result<T, FidelityError> {
    // notS contains the identity, so the denominator is >= 1 for z >= 0.
    let d = wep.eval(Tag::NotS, z)? + params.p_dd.clone() * wep.eval(Tag::S, z)?;
    debug_assert!(d > T::zero());
    Ok(d)
}

/// Hybrid LDD+QEC logical failure probability.
pub fn infidelity_hybrid<T: Scalar>(
    wep: &WepTable,
    params: &NoiseParams<T>,
) -> Result<T, FidelityError> {
    require_setting(wep, Setting::Qec)?;
    let z = params.z();
    let fk = four_pow_neg_k::<T>(wep.k());
    let unsup = wep.eval(Tag::NotSNotC, &z)?
        + params.p_qec.clone()
            * (wep.eval(Tag::NotSC, &z)? - fk.clone() * wep.eval(Tag::NotSD, &z)?);
    let sup = wep.eval(Tag::SNotC, &z)?
        + params.p_qec.clone() * (wep.eval(Tag::SC, &z)? - fk * wep.eval(Tag::SD, &z)?);
    Ok((unsup + params.p_dd.clone() * sup) / sector_denominator(wep, params, &z)?)
}

/// QEC-only logical failure probability: `(notC + p_qec (C - 4^-k D)) / A`.
pub fn infidelity_qec<T: Scalar>(
    wep: &WepTable,
    params: &NoiseParams<T>,
) -> Result<T, FidelityError> {
    require_setting(wep, Setting::Qec)?;
    let z = params.z();
    let fk = four_pow_neg_k::<T>(wep.k());
    let num = wep.eval(Tag::NotC, &z)?
        + params.p_qec.clone() * (wep.eval(Tag::C, &z)? - fk * wep.eval(Tag::D, &z)?);
    Ok(num / wep.eval(Tag::A, &z)?)
}

/// LDD-only logical failure probability (recovery skipped; a detected error
/// is randomly projected back, landing in the trivial class with
/// probability `4^-k`).
pub fn infidelity_ldd<T: Scalar>(
    wep: &WepTable,
    params: &NoiseParams<T>,
) -> Result<T, FidelityError> {
    let z = params.z();
    let fk = four_pow_neg_k::<T>(wep.k());
    let unsup =
        wep.eval(Tag::NotSSlashedSt, &z)? - fk.clone() * wep.eval(Tag::NotSD, &z)?;
    let sup = wep.eval(Tag::SSlashedSt, &z)? - fk * wep.eval(Tag::SD, &z)?;
    Ok((unsup + params.p_dd.clone() * sup) / sector_denominator(wep, params, &z)?)
}

pub fn f_hybrid<T: Scalar>(wep: &WepTable, params: &NoiseParams<T>) -> Result<T, FidelityError> {
    Ok(T::one() - infidelity_hybrid(wep, params)?)
}

pub fn f_qec<T: Scalar>(wep: &WepTable, params: &NoiseParams<T>) -> Result<T, FidelityError> {
    Ok(T::one() - infidelity_qec(wep, params)?)
}

pub fn f_ldd<T: Scalar>(wep: &WepTable, params: &NoiseParams<T>) -> Result<T, FidelityError> {
    Ok(T::one() - infidelity_ldd(wep, params)?)
}

/// Verdict of the exact hybrid-vs-QEC comparison at ideal recovery.
#[derive(Clone, Debug, PartialEq)]
pub struct HybVsQec<T: Scalar> {
    /// `S-notC(z) / S(z)`: uncorrectable fraction of the suppressed sector.
    pub suppressed_ratio: T,
    /// `notS-notC(z) / notS(z)`: same for the unsuppressed sector.
    pub unsuppressed_ratio: T,
    pub hybrid_wins: bool,
}

/// The exact criterion: at `p_qec = 0` and any `p_dd` in `[0,1)`, the hybrid
/// beats QEC-only iff the suppressed sector has the larger uncorrectable
/// fraction.
pub fn hyb_vs_qec_criterion<T: Scalar>(
    wep: &WepTable,
    z: &T,
) -> Result<HybVsQec<T>, FidelityError> {
    require_setting(wep, Setting::Qec)?;
    if *z <= T::zero() {
        return Err(FidelityError::Domain { parameter: "z", half_open: true });
    }
    let s = wep.eval(Tag::S, z)?;
    let not_s = wep.eval(Tag::NotS, z)?;
    if s <= T::zero() || not_s <= T::zero() {
        return Err(FidelityError::DegenerateDenominator("sector totals"));
    }
    let suppressed_ratio = wep.eval(Tag::SNotC, z)? / s;
    let unsuppressed_ratio = wep.eval(Tag::NotSNotC, z)? / not_s;
    Ok(HybVsQec {
        hybrid_wins: suppressed_ratio > unsuppressed_ratio,
        suppressed_ratio,
        unsuppressed_ratio,
    })
}

/// For `f(t) = (A + tB)/(C + tD)` with `C, D > 0` and `t` in `[0, 1)`:
/// `f(t) > f(1)` iff `A/C > B/D`.
pub fn fraction_compare<T: Scalar>(
    a: &T,
    b: &T,
    c: &T,
    d: &T,
    t: &T,
) -> Result<bool, FidelityError> {
    if *c <= T::zero() || *d <= T::zero() {
        return Err(FidelityError::DegenerateDenominator("fraction comparison"));
    }
    if *t < T::zero() || *t >= T::one() {
        return Err(FidelityError::Domain { parameter: "t", half_open: true });
    }
    let ft = (a.clone() + t.clone() * b.clone()) / (c.clone() + t.clone() * d.clone());
    let f1 = (a.clone() + b.clone()) / (c.clone() + d.clone());
    Ok(ft > f1)
}

/// Hybrid LDD+QED: conditional fidelity, acceptance probability, and the
/// unnormalized acceptance weight `Q`.
pub fn qed_hybrid<T: Scalar>(
    wep: &WepTable,
    params: &NoiseParams<T>,
) -> Result<FidelityReport<T>, FidelityError> {
    require_setting(wep, Setting::Qed)?;
    let z = params.z();
    let (n, k) = (wep.n(), wep.k());
    let fk = four_pow_neg_k::<T>(k);
    let tk = two_pow_k_minus_n::<T>(n, k);
    let p_qed = params.p_qed.clone();

    let total = sector_denominator(wep, params, &z)?;
    let undetected =
        wep.eval(Tag::NotSStL, &z)? + params.p_dd.clone() * wep.eval(Tag::SStL, &z)?;
    let q = (T::one() - p_qed.clone()) * undetected + tk.clone() * p_qed.clone() * total.clone();
    if q <= T::zero() {
        return Err(FidelityError::DegenerateDenominator("acceptance weight"));
    }

    let logical = wep.eval(Tag::NotSL, &z)? + params.p_dd.clone() * wep.eval(Tag::SL, &z)?;
    let detected = wep.eval(Tag::NotSD, &z)? + params.p_dd.clone() * wep.eval(Tag::SD, &z)?;
    let infid = ((T::one() - p_qed.clone() * (T::one() - tk.clone())) * logical
        + (T::one() - fk) * tk * p_qed * detected)
        / q.clone();
    Ok(FidelityReport {
        strategy: Strategy::QedHybrid,
        fidelity: T::one() - infid,
        acceptance: Some(q.clone() / total),
        acceptance_weight: Some(q),
    })
}

/// QED-only: the hybrid expressions with the sector split recombined.
pub fn qed_only<T: Scalar>(
    wep: &WepTable,
    params: &NoiseParams<T>,
) -> Result<FidelityReport<T>, FidelityError> {
    require_setting(wep, Setting::Qed)?;
    let z = params.z();
    let (n, k) = (wep.n(), wep.k());
    let fk = four_pow_neg_k::<T>(k);
    let tk = two_pow_k_minus_n::<T>(n, k);
    let p_qed = params.p_qed.clone();

    let all = wep.eval(Tag::A, &z)?;
    let q = (T::one() - p_qed.clone()) * wep.eval(Tag::StL, &z)?
        + tk.clone() * p_qed.clone() * all.clone();
    if q <= T::zero() {
        return Err(FidelityError::DegenerateDenominator("acceptance weight"));
    }
    let infid = ((T::one() - p_qed.clone() * (T::one() - tk.clone())) * wep.eval(Tag::L, &z)?
        + (T::one() - fk) * tk * p_qed * wep.eval(Tag::D, &z)?)
        / q.clone();
    Ok(FidelityReport {
        strategy: Strategy::QedOnly,
        fidelity: T::one() - infid,
        acceptance: Some(q.clone() / all),
        acceptance_weight: Some(q),
    })
}

/// LDD-only in the detection setting: no postselection, so acceptance is 1
/// and the fidelity coincides with the correction-setting LDD-only value.
pub fn qed_ldd_only<T: Scalar>(
    wep: &WepTable,
    params: &NoiseParams<T>,
) -> Result<FidelityReport<T>, FidelityError> {
    require_setting(wep, Setting::Qed)?;
    Ok(FidelityReport {
        strategy: Strategy::QedLddOnly,
        fidelity: T::one() - infidelity_ldd(wep, params)?,
        acceptance: Some(T::one()),
        acceptance_weight: None,
    })
}

/// Verdicts of the hybrid-vs-QED comparison at `p_qed = 0`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QedCriterion {
    /// `notS-L/notS-StL <= S-L/S-StL`: conditional fidelity does not drop.
    pub fidelity_ok: bool,
    /// `fidelity_ok` and the acceptance-weighted excess does not drop either.
    pub partial_order_ok: bool,
}

pub fn qed_criterion<T: Scalar>(
    wep: &WepTable,
    z: &T,
    k: usize,
) -> Result<QedCriterion, FidelityError> {
    require_setting(wep, Setting::Qed)?;
    if *z <= T::zero() {
        return Err(FidelityError::Domain { parameter: "z", half_open: true });
    }
    let not_s_stl = wep.eval(Tag::NotSStL, z)?;
    let s_stl = wep.eval(Tag::SStL, z)?;
    let not_s = wep.eval(Tag::NotS, z)?;
    let s = wep.eval(Tag::S, z)?;
    if not_s_stl <= T::zero() || s_stl <= T::zero() || not_s <= T::zero() || s <= T::zero() {
        return Err(FidelityError::DegenerateDenominator("qed criterion"));
    }
    let fidelity_ok =
        wep.eval(Tag::NotSL, z)? / not_s_stl.clone() <= wep.eval(Tag::SL, z)? / s_stl.clone();
    let fk = four_pow_neg_k::<T>(k);
    let lhs = (wep.eval(Tag::NotSSt, z)? - fk.clone() * not_s_stl) / not_s;
    let rhs = (wep.eval(Tag::SSt, z)? - fk * s_stl) / s;
    let partial_order_ok = fidelity_ok && lhs >= rhs;
    Ok(QedCriterion { fidelity_ok, partial_order_ok })
}

/// Partial order on (fidelity, acceptance) pairs: strategy 1 dominates iff
/// `F1 >= F2` and `PA1 (F1 - 4^-k) >= PA2 (F2 - 4^-k)`.
pub fn dominates<T: Scalar>(f1: &T, pa1: &T, f2: &T, pa2: &T, k: usize) -> bool {
    let fk = four_pow_neg_k::<T>(k);
    f1 >= f2 && pa1.clone() * (f1.clone() - fk.clone()) >= pa2.clone() * (f2.clone() - fk)
}

/// Relative advantage `R = log10(eps_comp / eps_hyb)`; positive means the
/// hybrid has the lower logical failure probability.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RelativeAdvantage {
    pub r: f64,
    /// Set when an infidelity was non-positive; `r` is then a signed
    /// infinity (or NaN when both vanish).
    pub degenerate: bool,
}

pub fn relative_advantage(eps_comp: f64, eps_hyb: f64) -> RelativeAdvantage {
    if eps_comp > 0.0 && eps_hyb > 0.0 {
        RelativeAdvantage { r: libm::log10(eps_comp / eps_hyb), degenerate: false }
    } else if eps_comp <= 0.0 && eps_hyb <= 0.0 {
        RelativeAdvantage { r: f64::NAN, degenerate: true }
    } else if eps_hyb <= 0.0 {
        RelativeAdvantage { r: f64::INFINITY, degenerate: true }
    } else {
        RelativeAdvantage { r: f64::NEG_INFINITY, degenerate: true }
    }
}

/// Evaluates one strategy end to end. `wep` must carry the strategy's
/// setting; `k_phys` is the logical qubit count used by `DdPhys`.
pub fn evaluate_strategy<T: Scalar>(
    strategy: Strategy,
    wep: Option<&WepTable>,
    params: &NoiseParams<T>,
    k_phys: usize,
) -> Result<FidelityReport<T>, FidelityError> {
    fn need(wep: Option<&WepTable>) -> Result<&WepTable, FidelityError> {
        wep.ok_or(FidelityError::MissingTag(Tag::A))
    }
    match strategy {
        Strategy::DdPhys => Ok(FidelityReport {
            strategy,
            fidelity: f_dd_closed(&params.p, &params.p_dd, k_phys)?,
            acceptance: None,
            acceptance_weight: None,
        }),
        Strategy::QecOnly => {
            let mut qec = params.clone();
            qec.p_dd = T::one();
            Ok(FidelityReport {
                strategy,
                fidelity: f_qec(need(wep)?, &qec)?,
                acceptance: None,
                acceptance_weight: None,
            })
        }
        Strategy::LddOnly => Ok(FidelityReport {
            strategy,
            fidelity: f_ldd(need(wep)?, params)?,
            acceptance: None,
            acceptance_weight: None,
        }),
        Strategy::Hybrid => Ok(FidelityReport {
            strategy,
            fidelity: f_hybrid(need(wep)?, params)?,
            acceptance: None,
            acceptance_weight: None,
        }),
        Strategy::QedOnly => {
            let mut qed = params.clone();
            qed.p_dd = T::one();
            qed_only(need(wep)?, &qed)
        }
        Strategy::QedHybrid => qed_hybrid(need(wep)?, params),
        Strategy::QedLddOnly => qed_ldd_only(need(wep)?, params),
    }
}

/// Renders a scalar for reports.
pub fn render_scalar<T: Scalar>(v: &T) -> String {
    v.render()
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::BigRational;

    fn r(num: i64, den: u64) -> BigRational {
        <BigRational as Scalar>::from_ratio(num, den)
    }

    #[test]
    fn dd_closed_limits() {
        assert_eq!(f_dd_closed(&0.0, &0.3, 5).unwrap(), 1.0);
        // p_dd = 1: plain (1-p)^k.
        let f = f_dd_closed(&0.2, &1.0, 3).unwrap();
        assert!((f - 0.8f64.powi(3)).abs() < 1e-15);
        // Perfect suppression: F = 1 for any p < 1.
        assert_eq!(f_dd_closed(&0.7, &0.0, 4).unwrap(), 1.0);
    }

    #[test]
    fn dd_closed_rejects_bad_domain() {
        assert!(f_dd_closed(&1.0, &0.5, 1).is_err());
        assert!(f_dd_closed(&0.5, &1.5, 1).is_err());
    }

    #[test]
    fn fraction_compare_examples() {
        let one = r(1, 1);
        let zero = r(0, 1);
        assert!(fraction_compare(&one, &zero, &one, &one, &zero).unwrap());
        // A = B, C = D: constant, never strictly greater.
        assert!(!fraction_compare(&one, &one, &one, &one, &r(1, 2)).unwrap());
    }

    #[test]
    fn dominance_examples() {
        // Reflexive.
        assert!(dominates(&0.9, &0.5, &0.9, &0.5, 1));
        // Perfect pair dominates anything.
        assert!(dominates(&1.0, &1.0, &0.99, &0.97, 1));
    }

    #[test]
    fn relative_advantage_examples() {
        assert_eq!(relative_advantage(1e-3, 1e-3).r, 0.0);
        assert!((relative_advantage(1e-2, 1e-3).r - 1.0).abs() < 1e-12);
        let d = relative_advantage(1e-3, 0.0);
        assert!(d.degenerate && d.r == f64::INFINITY);
        assert!(relative_advantage(0.0, 0.0).degenerate);
    }
}
