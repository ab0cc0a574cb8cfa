//! Exact analysis of stabilizer-code quantum memories protected by
//! dynamical decoupling, error correction, error detection, and their hybrids.
//!
//! The crate models a single encode-wait-decode cycle under an effective Pauli
//! channel. Fidelities of the competing strategies are closed-form ratios of
//! weight enumerator polynomials (WEPs) of tagged Pauli subsets; this crate
//! computes those enumerators exactly by exhaustive classification of all
//! `4^n` phase-stripped Paulis and evaluates the resulting formulas in either
//! `f64` or exact big-rational arithmetic.
//!
//! Organization:
//! - [`pauli`]: phase-stripped Pauli arithmetic over the binary symplectic
//!   representation, plus F2 linear algebra on generator sets.
//! - [`code`]: stabilizer codes, syndrome/decoder machinery, decoupling
//!   groups, classification of errors, distance, stabilizer dressing.
//! - [`wep`]: the exhaustive enumeration engine and tagged coefficient tables.
//! - [`fidelity`]: strategy fidelities, acceptance probabilities, and the
//!   comparison criteria, generic over the numeric mode.
//! - [`series`]: exact low-order power series of the closed-form infidelities.
//! - [`asymptotics`]: small-`p` structure (alpha/beta, linear coefficients),
//!   advantage verdicts, and the stabilizer-dressing search.
//! - [`mc`]: a stochastic oracle simulating the cycle shot by shot.
//!
//! The crate is `no_std` (with `alloc`); IO, file formats, and parallel
//! drivers live in the companion CLI crate.

#![no_std]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod asymptotics;
pub mod code;
pub mod fidelity;
pub mod mc;
pub mod pauli;
pub mod scalar;
pub mod series;
pub mod wep;

pub use code::{
    Classification, DecoderMap, DecouplingGroup, StabilizerCode, Syndrome, Violation,
};
pub use pauli::{GeneratorSet, PauliError, PauliOperator};
pub use scalar::Scalar;
pub use wep::{Setting, Tag, WepTable};
