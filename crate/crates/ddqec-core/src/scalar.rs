//! Numeric abstraction over the two evaluation modes: fast `f64` and exact
//! arbitrary-precision rationals.
//!
//! Every closed-form fidelity in this crate is a ratio of integer-coefficient
//! polynomials in `z` with parameters entering affinely, so the same code
//! evaluates both ways. Exact mode is what the reduction-identity tests rely
//! on: those identities hold exactly, and are tested exactly.

use core::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use alloc::string::String;
use alloc::string::ToString;

/// Arithmetic interface shared by `f64` and [`BigRational`].
pub trait Scalar:
    Clone
    + PartialOrd
    + PartialEq
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
{
    fn zero() -> Self;
    fn one() -> Self;
    fn from_u64(v: u64) -> Self;
    /// Exact in rational mode; best-effort in `f64`.
    fn from_ratio(num: i64, den: u64) -> Self;
    /// `self^exp` by repeated squaring.
    fn powi(&self, exp: u32) -> Self {
        let mut base = self.clone();
        let mut exp = exp;
        let mut acc = Self::one();
        while exp > 0 {
            if exp & 1 == 1 {
                acc = acc * base.clone();
            }
            base = base.clone() * base;
            exp >>= 1;
        }
        acc
    }
    fn is_zero(&self) -> bool {
        *self == Self::zero()
    }
    /// Decimal-ish rendering for reports ("num/den" in rational mode).
    fn render(&self) -> String;
}

impl Scalar for f64 {
    fn zero() -> Self {
        0.0
    }
    fn one() -> Self {
        1.0
    }
    fn from_u64(v: u64) -> Self {
        v as f64
    }
    fn from_ratio(num: i64, den: u64) -> Self {
        num as f64 / den as f64
    }
    fn render(&self) -> String {
        let mut s = alloc::format!("{self:e}");
        // Keep plain decimals plain.
        if self.abs() >= 1e-4 && self.abs() < 1e16 || *self == 0.0 {
            s = alloc::format!("{self}");
        }
        s
    }
}

impl Scalar for BigRational {
    fn zero() -> Self {
        Zero::zero()
    }
    fn one() -> Self {
        One::one()
    }
    fn from_u64(v: u64) -> Self {
        BigRational::from_integer(BigInt::from(v))
    }
    fn from_ratio(num: i64, den: u64) -> Self {
        BigRational::new(BigInt::from(num), BigInt::from(den))
    }
    fn render(&self) -> String {
        if self.denom().is_one() {
            self.numer().to_string()
        } else {
            alloc::format!("{}/{}", self.numer(), self.denom())
        }
    }
}

/// `p / (3 - 3p)`, the WEP evaluation point induced by the physical error
/// probability.
pub fn z_from_p<T: Scalar>(p: &T) -> T {
    let three = T::from_u64(3);
    p.clone() / (three * (T::one() - p.clone()))
}

/// `4^{-k}` exactly.
pub fn four_pow_neg_k<T: Scalar>(k: usize) -> T {
    T::one() / T::from_u64(1u64 << (2 * k))
}

/// `2^{k-n}` exactly (requires `k <= n`).
pub fn two_pow_k_minus_n<T: Scalar>(n: usize, k: usize) -> T {
    debug_assert!(k <= n);
    T::one() / T::from_u64(1u64 << (n - k))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn powi_matches_repeated_multiplication() {
        let x = 0.7f64;
        let mut acc = 1.0;
        for e in 0..10u32 {
            assert!((Scalar::powi(&x, e) - acc).abs() < 1e-12);
            acc *= x;
        }
    }

    #[test]
    fn rational_z() {
        let p = BigRational::from_ratio(1, 4);
        let z = z_from_p(&p);
        assert_eq!(z, BigRational::from_ratio(1, 9));
    }

    #[test]
    fn exact_constants() {
        assert_eq!(four_pow_neg_k::<BigRational>(1), BigRational::from_ratio(1, 4));
        assert_eq!(two_pow_k_minus_n::<BigRational>(7, 1), BigRational::from_ratio(1, 64));
    }
}
