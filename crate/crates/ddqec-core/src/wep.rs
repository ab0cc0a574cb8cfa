//! Exhaustive weight-enumerator computation over all `4^n` phase-stripped
//! Paulis.
//!
//! Every Pauli falls in exactly one of four classes — stabilizer, corrected
//! (nontrivial syndrome), zero-syndrome nontrivial logical, or detected
//! uncorrectable — and is either suppressed or unsuppressed by the decoupling
//! group. The engine tallies these eight disjoint atoms by weight in one
//! pass; every tagged enumerator is a union of atoms.
//!
//! The per-Pauli cost is kept to a handful of word operations: each qubit
//! letter contributes a precomputed XOR pattern of (syndrome, logical label,
//! suppression parity) bits packed into one machine word, and the scan walks
//! the base-4 index with incremental digit updates. Correctability is one
//! table lookup: an error is correctable iff its logical label equals that of
//! the recovery assigned to its syndrome.

use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;
use core::ops::Range;

use crate::code::{digit_masks, CodeError, DecoderMap, DecouplingGroup, StabilizerCode};
use crate::pauli::PauliError;
use crate::scalar::Scalar;

/// Which protocol family a table serves; decides the tag set.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Setting {
    Qec,
    Qed,
}

impl Setting {
    pub fn name(&self) -> &'static str {
        match self {
            Setting::Qec => "qec",
            Setting::Qed => "qed",
        }
    }
}

/// Disjoint classification of a single Pauli.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
#[repr(u8)]
pub enum Class {
    /// Zero syndrome, zero logical label.
    Stabilizer = 0,
    /// Nonzero syndrome, corrected to the trivial logical class.
    Corrected = 1,
    /// Zero syndrome, nonzero logical label.
    Logical = 2,
    /// Nonzero syndrome, ideal recovery leaves a nontrivial logical.
    Uncorrectable = 3,
}

/// WEP tags. Names follow the sector-split notation: the `NotS`/`S` prefixes
/// select the unsuppressed/suppressed sector.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Tag {
    A,
    St,
    SlashedSt,
    S,
    NotS,
    C,
    NotC,
    D,
    L,
    StL,
    NotSSt,
    SSt,
    NotSNotC,
    NotSC,
    SNotC,
    SC,
    NotSD,
    SD,
    NotCD,
    SSlashedSt,
    NotSSlashedSt,
    NotSL,
    SL,
    NotSStL,
    SStL,
}

impl Tag {
    pub fn name(&self) -> &'static str {
        match self {
            Tag::A => "A",
            Tag::St => "St",
            Tag::SlashedSt => "SlashedSt",
            Tag::S => "S",
            Tag::NotS => "notS",
            Tag::C => "C",
            Tag::NotC => "notC",
            Tag::D => "D",
            Tag::L => "L",
            Tag::StL => "StL",
            Tag::NotSSt => "notS-St",
            Tag::SSt => "S-St",
            Tag::NotSNotC => "notS-notC",
            Tag::NotSC => "notS-C",
            Tag::SNotC => "S-notC",
            Tag::SC => "S-C",
            Tag::NotSD => "notS-D",
            Tag::SD => "S-D",
            Tag::NotCD => "notC-D",
            Tag::SSlashedSt => "S-SlashedSt",
            Tag::NotSSlashedSt => "notS-SlashedSt",
            Tag::NotSL => "notS-L",
            Tag::SL => "S-L",
            Tag::NotSStL => "notS-StL",
            Tag::SStL => "S-StL",
        }
    }

    pub fn from_name(name: &str) -> Option<Tag> {
        QEC_TAGS
            .iter()
            .chain(QED_TAGS.iter())
            .copied()
            .find(|t| t.name() == name)
    }
}

impl fmt::Display for Tag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// The 20 tags of the error-correction setting, in serialization order.
pub const QEC_TAGS: [Tag; 20] = [
    Tag::A,
    Tag::St,
    Tag::SlashedSt,
    Tag::S,
    Tag::NotS,
    Tag::C,
    Tag::NotC,
    Tag::D,
    Tag::L,
    Tag::NotSSt,
    Tag::SSt,
    Tag::NotSNotC,
    Tag::NotSC,
    Tag::SNotC,
    Tag::SC,
    Tag::NotSD,
    Tag::SD,
    Tag::NotCD,
    Tag::SSlashedSt,
    Tag::NotSSlashedSt,
];

/// The 18 tags of the error-detection setting, in serialization order.
pub const QED_TAGS: [Tag; 18] = [
    Tag::A,
    Tag::St,
    Tag::SlashedSt,
    Tag::S,
    Tag::NotS,
    Tag::D,
    Tag::L,
    Tag::StL,
    Tag::NotSSt,
    Tag::SSt,
    Tag::NotSL,
    Tag::SL,
    Tag::NotSStL,
    Tag::SStL,
    Tag::NotSD,
    Tag::SD,
    Tag::SSlashedSt,
    Tag::NotSSlashedSt,
];

/// Per-weight tallies of the eight (class, sector) atoms.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AtomCounts {
    n: usize,
    /// `counts[atom * (n+1) + w]`, atom = class * 2 + suppressed.
    counts: Vec<u64>,
}

impl AtomCounts {
    pub fn new(n: usize) -> Self {
        AtomCounts { n, counts: alloc::vec![0; 8 * (n + 1)] }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn add(&mut self, class: Class, suppressed: bool, weight: u32, count: u64) {
        let atom = (class as usize) * 2 + suppressed as usize;
        self.counts[atom * (self.n + 1) + weight as usize] += count;
    }

    pub fn get(&self, class: Class, suppressed: bool, weight: u32) -> u64 {
        let atom = (class as usize) * 2 + suppressed as usize;
        self.counts[atom * (self.n + 1) + weight as usize]
    }

    /// Elementwise sum; partition-independent reduction for parallel scans.
    pub fn merge(&mut self, other: &AtomCounts) {
        assert_eq!(self.n, other.n);
        for (a, b) in self.counts.iter_mut().zip(&other.counts) {
            *a += b;
        }
    }

    fn atom_slice(&self, class: Class, suppressed: bool) -> &[u64] {
        let atom = (class as usize) * 2 + suppressed as usize;
        &self.counts[atom * (self.n + 1)..(atom + 1) * (self.n + 1)]
    }
}

/// Errors from table construction.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum WepError {
    /// `4^n` scan would exceed the supported budget.
    BudgetExceeded { n: usize },
    SizeMismatch { left: usize, right: usize },
    DecoderWidthMismatch { expected: usize, actual: usize },
    /// Packed record would not fit a machine word (cannot occur within the
    /// enumeration budget; kept as a guard).
    RecordOverflow { bits: usize },
    /// A formula needed a tag the table does not carry.
    MissingTag(Tag),
}

impl fmt::Display for WepError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            WepError::BudgetExceeded { n } => write!(
                f,
                "4^{n} enumeration exceeds the budget (n <= {})",
                crate::code::ENUMERATION_LIMIT
            ),
            WepError::SizeMismatch { left, right } => {
                write!(f, "qubit count mismatch: {left} vs {right}")
            }
            WepError::DecoderWidthMismatch { expected, actual } => {
                write!(f, "decoder width {actual} does not match syndrome width {expected}")
            }
            WepError::RecordOverflow { bits } => {
                write!(f, "packed classification record needs {bits} bits")
            }
            WepError::MissingTag(tag) => write!(f, "table does not carry tag {tag}"),
        }
    }
}

impl core::error::Error for WepError {}

impl From<CodeError> for WepError {
    fn from(e: CodeError) -> Self {
        match e {
            CodeError::BudgetExceeded { n } => WepError::BudgetExceeded { n },
            CodeError::DecoderWidthMismatch { expected, actual } => {
                WepError::DecoderWidthMismatch { expected, actual }
            }
            CodeError::DistanceUndefined => WepError::BudgetExceeded { n: 0 },
        }
    }
}

impl From<PauliError> for WepError {
    fn from(e: PauliError) -> Self {
        match e {
            PauliError::SizeMismatch { left, right } => WepError::SizeMismatch { left, right },
            _ => WepError::SizeMismatch { left: 0, right: 0 },
        }
    }
}

/// Single-pass classifier over the enumeration index space.
///
/// Construction precomputes, per qubit and letter, the packed XOR
/// contribution to (syndrome bits, logical-label bits, suppression parities),
/// plus the per-syndrome recovery label when a decoder is present.
pub struct Classifier {
    n: usize,
    syn_bits: u32,
    label_bits: u32,
    qubit_tbl: Vec<[u64; 4]>,
    syn_mask: u64,
    label_mask: u64,
    /// Logical label of `D(sigma)` per syndrome; empty when no decoder.
    recovery_label: Vec<u64>,
}

impl Classifier {
    pub fn new(
        code: &StabilizerCode,
        decoder: Option<&DecoderMap>,
        dd: &DecouplingGroup,
    ) -> Result<Self, WepError> {
        let n = code.n();
        if n > crate::code::ENUMERATION_LIMIT {
            return Err(WepError::BudgetExceeded { n });
        }
        if dd.qubits() != n {
            return Err(WepError::SizeMismatch { left: n, right: dd.qubits() });
        }
        let dd_basis = dd.reduced_basis();
        let syn_bits = code.syndrome_bits() as u32;
        let label_bits = 2 * code.k() as u32;
        let supp_bits = dd_basis.len() as u32;
        let total_bits = (syn_bits + label_bits + supp_bits) as usize;
        if total_bits > 64 {
            return Err(WepError::RecordOverflow { bits: total_bits });
        }

        let mut qubit_tbl = alloc::vec![[0u64; 4]; n];
        for q in 0..n {
            for d in 1u8..4 {
                let (x, z) = digit_masks(d);
                let mut rec = 0u64;
                for (i, s) in code.stabilizer_gens().iter().enumerate() {
                    let bit = (x & ((s.z_mask() >> q) & 1)) ^ (z & ((s.x_mask() >> q) & 1));
                    rec |= bit << i;
                }
                for i in 0..code.k() {
                    let lx = &code.logical_x()[i];
                    let lz = &code.logical_z()[i];
                    let bx = (x & ((lx.z_mask() >> q) & 1)) ^ (z & ((lx.x_mask() >> q) & 1));
                    let bz = (x & ((lz.z_mask() >> q) & 1)) ^ (z & ((lz.x_mask() >> q) & 1));
                    rec |= bx << (syn_bits + 2 * i as u32);
                    rec |= bz << (syn_bits + 2 * i as u32 + 1);
                }
                for (i, g) in dd_basis.iter().enumerate() {
                    let bit = (x & ((g.z_mask() >> q) & 1)) ^ (z & ((g.x_mask() >> q) & 1));
                    rec |= bit << (syn_bits + label_bits + i as u32);
                }
                qubit_tbl[q][d as usize] = rec;
            }
        }

        let recovery_label = match decoder {
            Some(dec) => {
                if dec.width() != code.syndrome_bits() {
                    return Err(WepError::DecoderWidthMismatch {
                        expected: code.syndrome_bits(),
                        actual: dec.width(),
                    });
                }
                let mut labels = alloc::vec![0u64; 1usize << syn_bits];
                for (syn, recovery) in dec.entries() {
                    labels[syn.bits() as usize] = code.logical_label(recovery)?;
                }
                labels
            }
            None => Vec::new(),
        };

        Ok(Classifier {
            n,
            syn_bits,
            label_bits,
            qubit_tbl,
            syn_mask: low_mask(syn_bits),
            label_mask: low_mask(label_bits),
            recovery_label,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Number of enumeration indices, `4^n`.
    pub fn total(&self) -> u64 {
        1u64 << (2 * self.n)
    }

    #[inline]
    fn classify_record(&self, rec: u64) -> (Class, bool) {
        let syn = rec & self.syn_mask;
        let label = (rec >> self.syn_bits) & self.label_mask;
        let suppressed = (rec >> (self.syn_bits + self.label_bits)) != 0;
        let class = if syn == 0 {
            if label == 0 {
                Class::Stabilizer
            } else {
                Class::Logical
            }
        } else if !self.recovery_label.is_empty()
            && label == self.recovery_label[syn as usize]
        {
            Class::Corrected
        } else {
            Class::Uncorrectable
        };
        (class, suppressed)
    }

    /// Class and weight of a single enumeration index (qubit 0 is the
    /// least-significant base-4 digit).
    pub fn class_of_index(&self, idx: u64) -> (Class, bool, u32) {
        let mut rec = 0u64;
        let mut w = 0u32;
        for q in 0..self.n {
            let d = ((idx >> (2 * q)) & 3) as usize;
            rec ^= self.qubit_tbl[q][d];
            w += (d != 0) as u32;
        }
        let (class, supp) = self.classify_record(rec);
        (class, supp, w)
    }

    /// Tallies every index in `range` into `acc`. Disjoint ranges may be
    /// scanned independently and merged; the result does not depend on the
    /// partitioning.
    pub fn accumulate(&self, range: Range<u64>, acc: &mut AtomCounts) {
        assert_eq!(acc.n, self.n);
        assert!(range.end <= self.total());
        if range.start >= range.end {
            return;
        }
        let n = self.n;
        let stride = n + 1;
        let counts = &mut acc.counts;

        // Seed digits/record/weight from the range start, then walk with
        // incremental base-4 carries: only changed digits touch the record.
        let mut digits = alloc::vec![0u8; n];
        let mut rec = 0u64;
        let mut w = 0u32;
        for q in 0..n {
            let d = ((range.start >> (2 * q)) & 3) as u8;
            digits[q] = d;
            rec ^= self.qubit_tbl[q][d as usize];
            w += (d != 0) as u32;
        }

        let mut remaining = range.end - range.start;
        loop {
            let (class, suppressed) = self.classify_record(rec);
            let atom = (class as usize) * 2 + suppressed as usize;
            counts[atom * stride + w as usize] += 1;

            remaining -= 1;
            if remaining == 0 {
                break;
            }
            for q in 0..n {
                let old = digits[q];
                let new = (old + 1) & 3;
                digits[q] = new;
                rec ^= self.qubit_tbl[q][old as usize] ^ self.qubit_tbl[q][new as usize];
                w = w + (old == 0) as u32 - (new == 0) as u32;
                if new != 0 {
                    break;
                }
            }
        }
    }
}

#[inline]
fn low_mask(bits: u32) -> u64 {
    if bits >= 64 {
        u64::MAX
    } else {
        (1u64 << bits) - 1
    }
}

/// Exact integer coefficient vectors for every tag of one setting.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WepTable {
    n: usize,
    k: usize,
    setting: Setting,
    tags: Vec<(Tag, Vec<u64>)>,
}

impl WepTable {
    /// Materializes the tag vectors of `setting` from atom tallies.
    pub fn from_atoms(n: usize, k: usize, setting: Setting, atoms: &AtomCounts) -> Self {
        assert_eq!(atoms.n, n);
        let u_st = atoms.atom_slice(Class::Stabilizer, false);
        let s_st = atoms.atom_slice(Class::Stabilizer, true);
        let u_c = atoms.atom_slice(Class::Corrected, false);
        let s_c = atoms.atom_slice(Class::Corrected, true);
        let u_l = atoms.atom_slice(Class::Logical, false);
        let s_l = atoms.atom_slice(Class::Logical, true);
        let u_n = atoms.atom_slice(Class::Uncorrectable, false);
        let s_n = atoms.atom_slice(Class::Uncorrectable, true);

        let sum = |parts: &[&[u64]]| -> Vec<u64> {
            let mut out = alloc::vec![0u64; n + 1];
            for part in parts {
                for (o, v) in out.iter_mut().zip(part.iter()) {
                    *o += v;
                }
            }
            out
        };

        let order: &[Tag] = match setting {
            Setting::Qec => &QEC_TAGS,
            Setting::Qed => &QED_TAGS,
        };
        let tags = order
            .iter()
            .map(|&tag| {
                let v = match tag {
                    Tag::A => sum(&[u_st, s_st, u_c, s_c, u_l, s_l, u_n, s_n]),
                    Tag::St => sum(&[u_st, s_st]),
                    Tag::SlashedSt => sum(&[u_c, s_c, u_l, s_l, u_n, s_n]),
                    Tag::S => sum(&[s_st, s_c, s_l, s_n]),
                    Tag::NotS => sum(&[u_st, u_c, u_l, u_n]),
                    Tag::C => sum(&[u_c, s_c]),
                    Tag::NotC => sum(&[u_l, s_l, u_n, s_n]),
                    Tag::D => sum(&[u_c, s_c, u_n, s_n]),
                    Tag::L => sum(&[u_l, s_l]),
                    Tag::StL => sum(&[u_st, s_st, u_l, s_l]),
                    Tag::NotSSt => sum(&[u_st]),
                    Tag::SSt => sum(&[s_st]),
                    Tag::NotSNotC => sum(&[u_l, u_n]),
                    Tag::NotSC => sum(&[u_c]),
                    Tag::SNotC => sum(&[s_l, s_n]),
                    Tag::SC => sum(&[s_c]),
                    Tag::NotSD => sum(&[u_c, u_n]),
                    Tag::SD => sum(&[s_c, s_n]),
                    Tag::NotCD => sum(&[u_n, s_n]),
                    Tag::SSlashedSt => sum(&[s_c, s_l, s_n]),
                    Tag::NotSSlashedSt => sum(&[u_c, u_l, u_n]),
                    Tag::NotSL => sum(&[u_l]),
                    Tag::SL => sum(&[s_l]),
                    Tag::NotSStL => sum(&[u_st, u_l]),
                    Tag::SStL => sum(&[s_st, s_l]),
                };
                (tag, v)
            })
            .collect();
        WepTable { n, k, setting, tags }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn setting(&self) -> Setting {
        self.setting
    }

    pub fn tags(&self) -> impl Iterator<Item = (Tag, &[u64])> {
        self.tags.iter().map(|(t, v)| (*t, v.as_slice()))
    }

    pub fn coeffs(&self, tag: Tag) -> Result<&[u64], WepError> {
        self.tags
            .iter()
            .find(|(t, _)| *t == tag)
            .map(|(_, v)| v.as_slice())
            .ok_or(WepError::MissingTag(tag))
    }

    /// Horner evaluation of one tag at `z`.
    pub fn eval<T: Scalar>(&self, tag: Tag, z: &T) -> Result<T, WepError> {
        Ok(eval_wep(self.coeffs(tag)?, z))
    }

    /// Rebuilds a table from explicit tag vectors (deserialization and
    /// synthetic test tables). Vectors must all have length `n + 1`.
    pub fn from_tag_vectors(
        n: usize,
        k: usize,
        setting: Setting,
        tags: Vec<(Tag, Vec<u64>)>,
    ) -> Self {
        debug_assert!(tags.iter().all(|(_, v)| v.len() == n + 1));
        WepTable { n, k, setting, tags }
    }

    /// Verifies every exact coefficientwise identity the tag system must
    /// satisfy. Returns the list of violated identities.
    pub fn check_identities(&self) -> Vec<String> {
        let mut bad = Vec::new();
        let get = |tag: Tag| self.coeffs(tag).unwrap();
        let sum2 = |a: &[u64], b: &[u64]| -> Vec<u64> {
            a.iter().zip(b).map(|(x, y)| x + y).collect()
        };
        let mut expect = |name: &str, lhs: Vec<u64>, rhs: &[u64]| {
            if lhs != rhs {
                bad.push(String::from(name));
            }
        };

        // A_w = binom(n, w) 3^w.
        let a_expected: Vec<u64> = (0..=self.n)
            .map(|w| binomial(self.n, w) * 3u64.pow(w as u32))
            .collect();
        expect("A = binom(n,w) 3^w", a_expected, get(Tag::A));

        expect("notS + S = A", sum2(get(Tag::NotS), get(Tag::S)), get(Tag::A));
        expect("notS-St + S-St = St", sum2(get(Tag::NotSSt), get(Tag::SSt)), get(Tag::St));
        expect("St + SlashedSt = A", sum2(get(Tag::St), get(Tag::SlashedSt)), get(Tag::A));

        match self.setting {
            Setting::Qec => {
                expect(
                    "notS-notC + S-notC = notC",
                    sum2(get(Tag::NotSNotC), get(Tag::SNotC)),
                    get(Tag::NotC),
                );
                expect("notS-C + S-C = C", sum2(get(Tag::NotSC), get(Tag::SC)), get(Tag::C));
                expect("notS-D + S-D = D", sum2(get(Tag::NotSD), get(Tag::SD)), get(Tag::D));
                expect(
                    "C + notC + St = A",
                    sum2(&sum2(get(Tag::C), get(Tag::NotC)), get(Tag::St)),
                    get(Tag::A),
                );
                expect("L + notC-D = notC", sum2(get(Tag::L), get(Tag::NotCD)), get(Tag::NotC));
                expect("C + notC-D = D", sum2(get(Tag::C), get(Tag::NotCD)), get(Tag::D));
                expect(
                    "notS-notC + notS-C = notS-SlashedSt",
                    sum2(get(Tag::NotSNotC), get(Tag::NotSC)),
                    get(Tag::NotSSlashedSt),
                );
                expect(
                    "S-notC + S-C = S-SlashedSt",
                    sum2(get(Tag::SNotC), get(Tag::SC)),
                    get(Tag::SSlashedSt),
                );
                let correctable: u64 = get(Tag::C).iter().chain(get(Tag::St)).sum();
                if correctable != 1u64 << (2 * (self.n - self.k)) {
                    bad.push(String::from("sum(C + St) = 4^(n-k)"));
                }
            }
            Setting::Qed => {
                expect(
                    "notS-StL = notS-St + notS-L",
                    sum2(get(Tag::NotSSt), get(Tag::NotSL)),
                    get(Tag::NotSStL),
                );
                expect(
                    "S-StL = S-St + S-L",
                    sum2(get(Tag::SSt), get(Tag::SL)),
                    get(Tag::SStL),
                );
                expect("StL + D = A", sum2(get(Tag::StL), get(Tag::D)), get(Tag::A));
            }
        }
        bad
    }
}

/// Horner evaluation of an integer coefficient vector at `z >= 0`. All
/// coefficients are non-negative, so the scheme is cancellation-free.
pub fn eval_wep<T: Scalar>(coeffs: &[u64], z: &T) -> T {
    let mut acc = T::zero();
    for &c in coeffs.iter().rev() {
        acc = acc * z.clone() + T::from_u64(c);
    }
    acc
}

pub(crate) fn binomial(n: usize, w: usize) -> u64 {
    if w > n {
        return 0;
    }
    let mut num = 1u64;
    for i in 0..w {
        num = num * (n - i) as u64 / (i + 1) as u64;
    }
    num
}

/// Exact QEC-setting table: all 20 tags of the correction analysis.
pub fn compute_weps(
    code: &StabilizerCode,
    decoder: &DecoderMap,
    dd: &DecouplingGroup,
) -> Result<WepTable, WepError> {
    let classifier = Classifier::new(code, Some(decoder), dd)?;
    let mut acc = AtomCounts::new(code.n());
    classifier.accumulate(0..classifier.total(), &mut acc);
    Ok(WepTable::from_atoms(code.n(), code.k(), Setting::Qec, &acc))
}

/// Exact QED-setting table: the 18 detection tags (no decoder involved).
pub fn compute_qed_weps(
    code: &StabilizerCode,
    dd: &DecouplingGroup,
) -> Result<WepTable, WepError> {
    let classifier = Classifier::new(code, None, dd)?;
    let mut acc = AtomCounts::new(code.n());
    classifier.accumulate(0..classifier.total(), &mut acc);
    Ok(WepTable::from_atoms(code.n(), code.k(), Setting::Qed, &acc))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::code::{steane_code, StabilizerCode};
    use crate::pauli::parse_pauli;
    use alloc::vec;

    fn full_group_1() -> DecouplingGroup {
        DecouplingGroup::full_pauli(1)
    }

    #[test]
    fn trivial_code_tags() {
        let code = StabilizerCode::trivial(1);
        let dec = DecoderMap::min_weight(&code).unwrap();
        let table = compute_weps(&code, &dec, &full_group_1()).unwrap();
        assert_eq!(table.coeffs(Tag::S).unwrap(), &[0, 3]);
        assert_eq!(table.coeffs(Tag::NotS).unwrap(), &[1, 0]);
        assert_eq!(table.coeffs(Tag::St).unwrap(), &[1, 0]);
        assert_eq!(table.coeffs(Tag::C).unwrap(), &[0, 0]);
        assert_eq!(table.coeffs(Tag::SC).unwrap(), &[0, 0]);
        assert_eq!(table.coeffs(Tag::NotSC).unwrap(), &[0, 0]);
        assert!(table.check_identities().is_empty());
    }

    #[test]
    fn steane_identities_hold() {
        let code = steane_code();
        let dec = DecoderMap::min_weight(&code).unwrap();
        let dd = DecouplingGroup::new(vec![
            parse_pauli("XXXXXXX").unwrap(),
            parse_pauli("ZZZZZZZ").unwrap(),
        ])
        .unwrap();
        let table = compute_weps(&code, &dec, &dd).unwrap();
        assert!(table.check_identities().is_empty());
        let qed = compute_qed_weps(&code, &dd).unwrap();
        assert!(qed.check_identities().is_empty());
        // Identity is the unique weight-0 undetected element.
        assert_eq!(qed.coeffs(Tag::StL).unwrap()[0], 1);
        // Distance 3: no nontrivial logicals below weight 3.
        let l = qed.coeffs(Tag::L).unwrap();
        assert_eq!(&l[0..3], &[0, 0, 0]);
        assert!(l[3] > 0);
    }

    #[test]
    fn qed_standard_group_kills_cross_tags() {
        // With the decoupling group equal to the logical Pauli group, every
        // nontrivial logical anticommutes with something (suppressed) and
        // every stabilizer commutes with everything (unsuppressed).
        let code = steane_code();
        let dd = DecouplingGroup::new(vec![
            parse_pauli("XXXXXXX").unwrap(),
            parse_pauli("ZZZZZZZ").unwrap(),
        ])
        .unwrap();
        let qed = compute_qed_weps(&code, &dd).unwrap();
        assert!(qed.coeffs(Tag::NotSL).unwrap().iter().all(|&c| c == 0));
        assert!(qed.coeffs(Tag::SSt).unwrap().iter().all(|&c| c == 0));
    }

    #[test]
    fn parallel_partitioning_is_deterministic() {
        let code = steane_code();
        let dec = DecoderMap::min_weight(&code).unwrap();
        let dd = DecouplingGroup::new(vec![
            parse_pauli("XIIYYZZ").unwrap(),
            parse_pauli("ZIIXXYY").unwrap(),
        ])
        .unwrap();
        let classifier = Classifier::new(&code, Some(&dec), &dd).unwrap();
        let total = classifier.total();

        let mut whole = AtomCounts::new(7);
        classifier.accumulate(0..total, &mut whole);

        for parts in [2u64, 3, 8] {
            let mut acc = AtomCounts::new(7);
            let step = total / parts;
            let mut lo = 0;
            for i in 0..parts {
                let hi = if i == parts - 1 { total } else { lo + step };
                let mut piece = AtomCounts::new(7);
                classifier.accumulate(lo..hi, &mut piece);
                acc.merge(&piece);
                lo = hi;
            }
            assert_eq!(acc, whole);
        }
    }

    #[test]
    fn eval_examples() {
        // (1 + 3z)^2 at z = 1.
        let a2 = vec![1u64, 6, 9];
        assert_eq!(eval_wep(&a2, &1.0f64), 16.0);
        assert_eq!(eval_wep(&a2, &0.0f64), 1.0);

        use num_rational::BigRational;
        let z = <BigRational as Scalar>::from_ratio(1, 9);
        let n = 2;
        let expect = <BigRational as Scalar>::from_ratio(4, 3).powi(n);
        let coeffs: Vec<u64> = (0..=n as usize)
            .map(|w| binomial(n as usize, w) * 3u64.pow(w as u32))
            .collect();
        assert_eq!(eval_wep(&coeffs, &z), expect);
    }

    #[test]
    fn class_of_index_agrees_with_classify() {
        let code = steane_code();
        let dec = DecoderMap::min_weight(&code).unwrap();
        let dd = DecouplingGroup::new(vec![parse_pauli("XXXIIII").unwrap()]).unwrap();
        let classifier = Classifier::new(&code, Some(&dec), &dd).unwrap();
        for idx in (0..classifier.total()).step_by(977) {
            let p = crate::code::pauli_from_index(7, idx);
            let c = code.classify(&dec, &dd, &p).unwrap();
            let (class, supp, w) = classifier.class_of_index(idx);
            assert_eq!(w, p.weight());
            assert_eq!(supp, c.is_suppressed);
            let expected = if c.is_stabilizer {
                Class::Stabilizer
            } else if c.is_zero_syndrome {
                Class::Logical
            } else if c.is_correctable {
                Class::Corrected
            } else {
                Class::Uncorrectable
            };
            assert_eq!(class, expected);
        }
    }
}
