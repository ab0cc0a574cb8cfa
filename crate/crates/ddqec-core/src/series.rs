//! Exact low-order power series in `z` of the closed-form infidelities.
//!
//! Every strategy's infidelity is `N(z) / D(z)` with integer tag vectors and
//! rational parameters, and `D(0) != 0`, so the series coefficients follow
//! from exact rational polynomial division modulo `z^(order+1)`.

use alloc::vec::Vec;

use num_rational::BigRational;

use crate::fidelity::Strategy;
use crate::scalar::{four_pow_neg_k, two_pow_k_minus_n, Scalar};
use crate::wep::{Setting, Tag, WepError, WepTable};

/// Rational parameter values used by the series expansions. Only the fields
/// a strategy references enter its series.
#[derive(Clone, Debug)]
pub struct SeriesParams {
    pub p_dd: BigRational,
    pub p_qec: BigRational,
    pub p_qed: BigRational,
}

impl SeriesParams {
    pub fn ideal() -> Self {
        SeriesParams {
            p_dd: <BigRational as Scalar>::zero(),
            p_qec: <BigRational as Scalar>::zero(),
            p_qed: <BigRational as Scalar>::zero(),
        }
    }
}

/// Dense rational polynomial, index = power of `z`.
type Poly = Vec<BigRational>;

fn tag_poly(wep: &WepTable, tag: Tag, len: usize) -> Result<Poly, WepError> {
    let coeffs = wep.coeffs(tag)?;
    Ok((0..len)
        .map(|i| {
            coeffs
                .get(i)
                .map(|&c| <BigRational as Scalar>::from_u64(c))
                .unwrap_or_else(<BigRational as Scalar>::zero)
        })
        .collect())
}

fn axpy(dst: &mut Poly, scale: &BigRational, src: &Poly) {
    for (d, s) in dst.iter_mut().zip(src) {
        *d = d.clone() + scale.clone() * s.clone();
    }
}

/// Coefficients of `num / den` modulo `z^len`, requiring `den[0] != 0`.
fn divide_series(num: &Poly, den: &Poly, len: usize) -> Poly {
    assert!(!num_traits::Zero::is_zero(&den[0]), "series denominator must have a nonzero constant term");
    let mut out = Vec::with_capacity(len);
    for j in 0..len {
        let mut acc = num[j].clone();
        for i in 1..=j {
            acc = acc - den[i].clone() * &out[j - i];
        }
        out.push(acc / den[0].clone());
    }
    out
}

/// Exact series of the chosen strategy's infidelity `1 - F` in powers of
/// `z`, up to and including `z^order`.
///
/// `DdPhys` is not expressible from a table (its closed form is not a fixed
/// ratio of the table's tags on general codes); use the trivial-code table
/// with the LDD-only strategy instead.
pub fn series_infidelity(
    wep: &WepTable,
    strategy: Strategy,
    params: &SeriesParams,
    order: usize,
) -> Result<Vec<BigRational>, WepError> {
    assert!(order <= wep.n(), "series order must not exceed the qubit count");
    let len = order + 1;
    let one = <BigRational as Scalar>::one();
    let t = |tag| tag_poly(wep, tag, len);
    let fk = four_pow_neg_k::<BigRational>(wep.k());

    let (num, den) = match (strategy, wep.setting()) {
        (Strategy::Hybrid, Setting::Qec) => {
            // notS-notC + p_qec (notS-C - 4^-k notS-D)
            //   + p_dd [S-notC + p_qec (S-C - 4^-k S-D)]
            let mut num = t(Tag::NotSNotC)?;
            axpy(&mut num, &params.p_qec, &t(Tag::NotSC)?);
            axpy(&mut num, &(-(params.p_qec.clone() * fk.clone())), &t(Tag::NotSD)?);
            let mut sup = t(Tag::SNotC)?;
            axpy(&mut sup, &params.p_qec, &t(Tag::SC)?);
            axpy(&mut sup, &(-(params.p_qec.clone() * fk.clone())), &t(Tag::SD)?);
            axpy(&mut num, &params.p_dd, &sup);
            let mut den = t(Tag::NotS)?;
            axpy(&mut den, &params.p_dd, &t(Tag::S)?);
            (num, den)
        }
        (Strategy::QecOnly, Setting::Qec) => {
            let mut num = t(Tag::NotC)?;
            axpy(&mut num, &params.p_qec, &t(Tag::C)?);
            axpy(&mut num, &(-(params.p_qec.clone() * fk)), &t(Tag::D)?);
            (num, t(Tag::A)?)
        }
        (Strategy::LddOnly, _) | (Strategy::QedLddOnly, _) => {
            let mut num = t(Tag::NotSSlashedSt)?;
            axpy(&mut num, &(-fk.clone()), &t(Tag::NotSD)?);
            let mut sup = t(Tag::SSlashedSt)?;
            axpy(&mut sup, &(-fk), &t(Tag::SD)?);
            axpy(&mut num, &params.p_dd, &sup);
            let mut den = t(Tag::NotS)?;
            axpy(&mut den, &params.p_dd, &t(Tag::S)?);
            (num, den)
        }
        (Strategy::QedOnly, Setting::Qed) => {
            let tk = two_pow_k_minus_n::<BigRational>(wep.n(), wep.k());
            let scale = one.clone() - params.p_qed.clone() * (one.clone() - tk.clone());
            let mut num = t(Tag::L)?;
            for c in num.iter_mut() {
                *c = c.clone() * scale.clone();
            }
            axpy(
                &mut num,
                &((one.clone() - fk) * tk.clone() * params.p_qed.clone()),
                &t(Tag::D)?,
            );
            let mut den = t(Tag::StL)?;
            for c in den.iter_mut() {
                *c = c.clone() * (one.clone() - params.p_qed.clone());
            }
            axpy(&mut den, &(tk * params.p_qed.clone()), &t(Tag::A)?);
            (num, den)
        }
        (Strategy::QedHybrid, Setting::Qed) => {
            let tk = two_pow_k_minus_n::<BigRational>(wep.n(), wep.k());
            let scale = one.clone() - params.p_qed.clone() * (one.clone() - tk.clone());
            let mut logical = t(Tag::NotSL)?;
            axpy(&mut logical, &params.p_dd, &t(Tag::SL)?);
            for c in logical.iter_mut() {
                *c = c.clone() * scale.clone();
            }
            let mut detected = t(Tag::NotSD)?;
            axpy(&mut detected, &params.p_dd, &t(Tag::SD)?);
            let mut num = logical;
            axpy(
                &mut num,
                &((one.clone() - fk) * tk.clone() * params.p_qed.clone()),
                &detected,
            );
            let mut undetected = t(Tag::NotSStL)?;
            axpy(&mut undetected, &params.p_dd, &t(Tag::SStL)?);
            for c in undetected.iter_mut() {
                *c = c.clone() * (one.clone() - params.p_qed.clone());
            }
            let mut total = t(Tag::NotS)?;
            axpy(&mut total, &params.p_dd, &t(Tag::S)?);
            let mut den = undetected;
            axpy(&mut den, &(tk * params.p_qed.clone()), &total);
            (num, den)
        }
        (s, _) => {
            let _ = s;
            return Err(WepError::MissingTag(Tag::A));
        }
    };
    Ok(divide_series(&num, &den, len))
}

/// Recovers coefficients of an expression affine in one parameter from
/// evaluations at 0 and 1, checking consistency at 1/2: returns
/// `(constant, slope)` with `f(t) = constant + slope * t`.
pub fn affine_fit(
    at0: &BigRational,
    at1: &BigRational,
    at_half: &BigRational,
) -> Option<(BigRational, BigRational)> {
    let slope = at1.clone() - at0.clone();
    let two = <BigRational as Scalar>::from_u64(2);
    let predicted_half = at0.clone() + slope.clone() / two;
    if predicted_half == *at_half {
        Some((at0.clone(), slope))
    } else {
        None
    }
}
