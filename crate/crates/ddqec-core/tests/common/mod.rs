//! Shared constructors for the integration tests.
#![allow(dead_code)]

use ddqec_core::code::{DecoderMap, DecouplingGroup, StabilizerCode};
use ddqec_core::pauli::parse_pauli;
use ddqec_core::wep::{AtomCounts, Class, Setting, WepTable};

pub fn pauli(s: &str) -> ddqec_core::PauliOperator {
    parse_pauli(s).unwrap()
}

/// The distance-3 13-qubit code used throughout the worked examples.
pub fn code13() -> StabilizerCode {
    StabilizerCode::new(
        13,
        1,
        [
            "IIIIZIZXXZIXI",
            "IIIXIIIYZYYYI",
            "IIIZYIYYIXIIY",
            "IXXXYZYIZZYZI",
            "IXXXZIXZXZZIX",
            "IXYZZXZXXXXZX",
            "IZZZIIZZYIIXY",
            "XXIZZIYZIIYIY",
            "XYZYYYXXYYZIY",
            "YXZZIYZZXZZZZ",
            "ZIZZXIZZZZXYI",
            "ZYYZIXIZZYIYY",
        ]
        .iter()
        .map(|s| pauli(s))
        .collect(),
        vec![pauli("XXXXXXXXXIIII")],
        vec![pauli("IIIYYYYZIXYXY")],
    )
}

pub fn code13_group() -> DecouplingGroup {
    DecouplingGroup::new(vec![pauli("IIIYYYYZIXYXY"), pauli("XXXXXXXXXIIII")]).unwrap()
}

/// The tuned decoder for [`code13`]: minimum weight, the six two-qubit block
/// errors corrected, tied weight-3 choices pinned to the reference counts.
pub fn code13_decoder(code: &StabilizerCode, dd: &DecouplingGroup) -> DecoderMap {
    let overrides: Vec<_> = ["IXZ", "IZX", "ZIX", "XIZ", "XZI", "ZXI"]
        .iter()
        .map(|s| pauli(&format!("{s}IIIIIIIIII")))
        .collect();
    let base = DecoderMap::min_weight(code)
        .unwrap()
        .with_overrides(code, &overrides)
        .unwrap();
    ddqec_core::code::tune_decoder_weight3(code, base, dd, 843, 2544).unwrap()
}

pub fn rep_code_3() -> StabilizerCode {
    StabilizerCode::new(
        3,
        1,
        vec![pauli("ZZI"), pauli("IZZ")],
        vec![pauli("XXX")],
        vec![pauli("ZII")],
    )
}

/// A synthetic table with the partition structure of a real one: random
/// nonnegative atom tallies whose per-weight totals equal `binom(n,w) 3^w`,
/// with the identity landing in the unsuppressed-stabilizer atom.
pub fn synthetic_table(n: usize, k: usize, setting: Setting, seed: u64) -> WepTable {
    use rand::Rng;
    use rand::SeedableRng;
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let mut atoms = AtomCounts::new(n);
    let binom = |n: usize, w: usize| -> u64 {
        let mut v = 1u64;
        for i in 0..w {
            v = v * (n - i) as u64 / (i + 1) as u64;
        }
        v
    };
    atoms.add(Class::Stabilizer, false, 0, 1);
    let classes = [
        Class::Stabilizer,
        Class::Corrected,
        Class::Logical,
        Class::Uncorrectable,
    ];
    for w in 1..=n {
        let mut remaining = binom(n, w) * 3u64.pow(w as u32);
        // Random split over the 8 atoms, last slot takes the remainder.
        for (i, class) in classes.iter().enumerate() {
            for (j, suppressed) in [false, true].into_iter().enumerate() {
                let last = i == classes.len() - 1 && j == 1;
                let take = if last { remaining } else { rng.random_range(0..=remaining) };
                atoms.add(*class, suppressed, w as u32, take);
                remaining -= take;
            }
        }
    }
    WepTable::from_atoms(n, k, setting, &atoms)
}
