//! Stabilizer codes, syndrome extraction, decoder tables, decoupling groups,
//! and per-error classification.
//!
//! A code is `n` qubits, `k` logical qubits, `n-k` commuting independent
//! stabilizer generators, and `k` symplectically paired logical X/Z
//! generators. A decoder is a total syndrome-to-recovery table with
//! `D(0) = I` and `syn(D(sigma)) = sigma`. A decoupling group suppresses
//! exactly the errors that anticommute with at least one of its generators.

use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use crate::pauli::{Eliminator, GeneratorSet, PauliError, PauliOperator};

/// Enumeration guard: operations that scan all `4^n` Paulis refuse larger n.
pub const ENUMERATION_LIMIT: usize = 16;

/// An `[[n, k]]` stabilizer code with explicit logical generators.
#[derive(Clone, Debug)]
pub struct StabilizerCode {
    n: usize,
    k: usize,
    stabilizer_gens: Vec<PauliOperator>,
    logical_x: Vec<PauliOperator>,
    logical_z: Vec<PauliOperator>,
}

/// A violated code invariant, reported as data by [`StabilizerCode::validate`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Violation {
    KOutOfRange { n: usize, k: usize },
    StabilizerCountMismatch { expected: usize, actual: usize },
    LogicalCountMismatch { expected: usize, actual_x: usize, actual_z: usize },
    QubitCountMismatch { which: String },
    StabilizersDoNotCommute { i: usize, j: usize },
    StabilizersDependent { rank: usize, expected: usize },
    LogicalAnticommutesStabilizer { logical: String, stabilizer_index: usize },
    LogicalPairingBroken { xi: usize, zj: usize, expected_anticommute: bool },
    LogicalsNotIndependent { rank: usize, expected: usize },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::KOutOfRange { n, k } => {
                write!(f, "k must satisfy 1 <= k <= n, got k={k}, n={n}")
            }
            Violation::StabilizerCountMismatch { expected, actual } => {
                write!(f, "expected {expected} stabilizer generators, got {actual}")
            }
            Violation::LogicalCountMismatch { expected, actual_x, actual_z } => write!(
                f,
                "expected {expected} logical X and Z generators, got {actual_x} X and {actual_z} Z"
            ),
            Violation::QubitCountMismatch { which } => {
                write!(f, "{which} acts on the wrong number of qubits")
            }
            Violation::StabilizersDoNotCommute { i, j } => {
                write!(f, "stabilizer generators {i} and {j} anticommute")
            }
            Violation::StabilizersDependent { rank, expected } => {
                write!(f, "stabilizer generators have rank {rank}, expected {expected}")
            }
            Violation::LogicalAnticommutesStabilizer { logical, stabilizer_index } => {
                write!(f, "logical {logical} anticommutes with stabilizer generator {stabilizer_index}")
            }
            Violation::LogicalPairingBroken { xi, zj, expected_anticommute } => {
                if *expected_anticommute {
                    write!(f, "logical_x[{xi}] must anticommute with logical_z[{zj}]")
                } else {
                    write!(f, "logical_x[{xi}] must commute with logical_z[{zj}]")
                }
            }
            Violation::LogicalsNotIndependent { rank, expected } => write!(
                f,
                "stabilizers and logicals have combined rank {rank}, expected {expected}"
            ),
        }
    }
}

impl StabilizerCode {
    /// Assembles a code without validating; call [`StabilizerCode::validate`]
    /// to obtain the violation report.
    pub fn new(
        n: usize,
        k: usize,
        stabilizer_gens: Vec<PauliOperator>,
        logical_x: Vec<PauliOperator>,
        logical_z: Vec<PauliOperator>,
    ) -> Self {
        StabilizerCode { n, k, stabilizer_gens, logical_x, logical_z }
    }

    /// The trivial code on `k` qubits: no stabilizers, single-qubit logicals.
    pub fn trivial(k: usize) -> Self {
        StabilizerCode {
            n: k,
            k,
            stabilizer_gens: Vec::new(),
            logical_x: (0..k).map(|q| PauliOperator::x_on(k, q)).collect(),
            logical_z: (0..k).map(|q| PauliOperator::z_on(k, q)).collect(),
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.k
    }

    /// Syndrome width `n - k`.
    pub fn syndrome_bits(&self) -> usize {
        self.n - self.k
    }

    pub fn stabilizer_gens(&self) -> &[PauliOperator] {
        &self.stabilizer_gens
    }

    pub fn logical_x(&self) -> &[PauliOperator] {
        &self.logical_x
    }

    pub fn logical_z(&self) -> &[PauliOperator] {
        &self.logical_z
    }

    /// Checks every code invariant; an empty report means the code is valid.
    pub fn validate(&self) -> Vec<Violation> {
        let mut report = Vec::new();
        if self.k < 1 || self.k > self.n {
            report.push(Violation::KOutOfRange { n: self.n, k: self.k });
            return report;
        }
        if self.stabilizer_gens.len() != self.n - self.k {
            report.push(Violation::StabilizerCountMismatch {
                expected: self.n - self.k,
                actual: self.stabilizer_gens.len(),
            });
        }
        if self.logical_x.len() != self.k || self.logical_z.len() != self.k {
            report.push(Violation::LogicalCountMismatch {
                expected: self.k,
                actual_x: self.logical_x.len(),
                actual_z: self.logical_z.len(),
            });
        }
        for (label, list) in [
            ("stabilizer generator", &self.stabilizer_gens),
            ("logical_x generator", &self.logical_x),
            ("logical_z generator", &self.logical_z),
        ] {
            for (i, p) in list.iter().enumerate() {
                if p.qubits() != self.n {
                    report.push(Violation::QubitCountMismatch {
                        which: alloc::format!("{label} {i}"),
                    });
                }
            }
        }
        if !report.is_empty() {
            // Structural problems make the remaining checks ill-posed.
            return report;
        }

        for i in 0..self.stabilizer_gens.len() {
            for j in (i + 1)..self.stabilizer_gens.len() {
                if !self.stabilizer_gens[i].commutes(&self.stabilizer_gens[j]).unwrap() {
                    report.push(Violation::StabilizersDoNotCommute { i, j });
                }
            }
        }
        let stab_set = GeneratorSet::new(self.n, self.stabilizer_gens.clone()).unwrap();
        if stab_set.rank() != self.n - self.k {
            report.push(Violation::StabilizersDependent {
                rank: stab_set.rank(),
                expected: self.n - self.k,
            });
        }

        for (name, list) in [("logical_x", &self.logical_x), ("logical_z", &self.logical_z)] {
            for (i, l) in list.iter().enumerate() {
                for (j, s) in self.stabilizer_gens.iter().enumerate() {
                    if !l.commutes(s).unwrap() {
                        report.push(Violation::LogicalAnticommutesStabilizer {
                            logical: alloc::format!("{name}[{i}]"),
                            stabilizer_index: j,
                        });
                    }
                }
            }
        }

        for i in 0..self.k {
            for j in 0..self.k {
                let anti = !self.logical_x[i].commutes(&self.logical_z[j]).unwrap();
                if anti != (i == j) {
                    report.push(Violation::LogicalPairingBroken {
                        xi: i,
                        zj: j,
                        expected_anticommute: i == j,
                    });
                }
            }
            for j in (i + 1)..self.k {
                if !self.logical_x[i].commutes(&self.logical_x[j]).unwrap() {
                    report.push(Violation::LogicalPairingBroken {
                        xi: i,
                        zj: j,
                        expected_anticommute: false,
                    });
                }
                if !self.logical_z[i].commutes(&self.logical_z[j]).unwrap() {
                    report.push(Violation::LogicalPairingBroken {
                        xi: j,
                        zj: i,
                        expected_anticommute: false,
                    });
                }
            }
        }

        let mut all = self.stabilizer_gens.clone();
        all.extend_from_slice(&self.logical_x);
        all.extend_from_slice(&self.logical_z);
        let combined = GeneratorSet::new(self.n, all).unwrap();
        if combined.rank() != self.n + self.k {
            report.push(Violation::LogicalsNotIndependent {
                rank: combined.rank(),
                expected: self.n + self.k,
            });
        }
        report
    }

    /// Syndrome of `e`: bit `i` is set iff `e` anticommutes with stabilizer
    /// generator `i`.
    pub fn syndrome(&self, e: &PauliOperator) -> Result<Syndrome, PauliError> {
        if e.qubits() != self.n {
            return Err(PauliError::SizeMismatch { left: self.n, right: e.qubits() });
        }
        let mut bits = 0u64;
        for (i, s) in self.stabilizer_gens.iter().enumerate() {
            bits |= (e.anticommutes_unchecked(s) as u64) << i;
        }
        Ok(Syndrome { bits, width: self.n - self.k })
    }

    /// Anticommutation pattern with the logical generators: bit `2i` for
    /// `logical_x[i]`, bit `2i+1` for `logical_z[i]`. For a zero-syndrome
    /// operator, a zero label is equivalent to stabilizer membership.
    pub fn logical_label(&self, e: &PauliOperator) -> Result<u64, PauliError> {
        if e.qubits() != self.n {
            return Err(PauliError::SizeMismatch { left: self.n, right: e.qubits() });
        }
        let mut label = 0u64;
        for i in 0..self.k {
            label |= (e.anticommutes_unchecked(&self.logical_x[i]) as u64) << (2 * i);
            label |= (e.anticommutes_unchecked(&self.logical_z[i]) as u64) << (2 * i + 1);
        }
        Ok(label)
    }

    /// Full classification of `e` with respect to a decoder and a decoupling
    /// group.
    pub fn classify(
        &self,
        decoder: &DecoderMap,
        dd: &DecouplingGroup,
        e: &PauliOperator,
    ) -> Result<Classification, PauliError> {
        let syndrome = self.syndrome(e)?;
        let label = self.logical_label(e)?;
        let recovery = decoder.recovery(&syndrome);
        let residual_label = label ^ self.logical_label(recovery)?;
        let suppressed = dd.suppresses(e)?;
        Ok(Classification {
            is_stabilizer: syndrome.is_trivial() && label == 0,
            is_zero_syndrome: syndrome.is_trivial(),
            is_correctable: residual_label == 0,
            is_suppressed: suppressed,
            logical_label: label,
        })
    }

    /// Minimum weight over nontrivial logical classes, i.e. over zero-syndrome
    /// Paulis with nonzero logical label. Requires `k >= 1` and fits within
    /// the enumeration budget.
    pub fn distance(&self) -> Result<u32, CodeError> {
        if self.k == 0 {
            return Err(CodeError::DistanceUndefined);
        }
        if self.n > ENUMERATION_LIMIT {
            return Err(CodeError::BudgetExceeded { n: self.n });
        }
        let scratch = SymplecticInfo::new(self);
        let total = 1u64 << (2 * self.n);
        let mut best: Option<u32> = None;
        for idx in 0..total {
            let (syn, label, w) = scratch.classify_index(idx);
            if syn == 0 && label != 0 && best.is_none_or(|b| w < b) {
                best = Some(w);
            }
        }
        // k >= 1 guarantees a nontrivial logical exists.
        Ok(best.expect("nontrivial logical class exists for k >= 1"))
    }
}

/// Errors from code-level constructions.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CodeError {
    /// `4^n` enumeration would exceed the supported budget.
    BudgetExceeded { n: usize },
    /// Distance is undefined for `k = 0`.
    DistanceUndefined,
    /// A decoder table was queried or built with inconsistent dimensions.
    DecoderWidthMismatch { expected: usize, actual: usize },
}

impl fmt::Display for CodeError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CodeError::BudgetExceeded { n } => {
                write!(f, "4^{n} enumeration exceeds the budget (n <= {ENUMERATION_LIMIT})")
            }
            CodeError::DistanceUndefined => write!(f, "distance is undefined for k = 0"),
            CodeError::DecoderWidthMismatch { expected, actual } => {
                write!(f, "decoder width {actual} does not match syndrome width {expected}")
            }
        }
    }
}

impl core::error::Error for CodeError {}

/// An `(n-k)`-bit syndrome. Bit `i` corresponds to the i-th stabilizer
/// generator; the string form renders bit 0 first (leftmost).
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct Syndrome {
    bits: u64,
    width: usize,
}

impl Syndrome {
    pub fn new(bits: u64, width: usize) -> Self {
        debug_assert!(width == 64 || bits < (1u64 << width));
        Syndrome { bits, width }
    }

    pub fn trivial(width: usize) -> Self {
        Syndrome { bits: 0, width }
    }

    pub fn bits(&self) -> u64 {
        self.bits
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn is_trivial(&self) -> bool {
        self.bits == 0
    }
}

impl fmt::Display for Syndrome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.width {
            write!(f, "{}", (self.bits >> i) & 1)?;
        }
        Ok(())
    }
}

impl fmt::Debug for Syndrome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Syndrome({self})")
    }
}

/// A complete syndrome-to-recovery table.
#[derive(Clone, Debug)]
pub struct DecoderMap {
    width: usize,
    table: Vec<PauliOperator>,
}

impl DecoderMap {
    /// Builds a decoder from a complete table indexed by syndrome bits.
    /// The caller is responsible for `D(0) = I` and `syn(D(s)) = s`;
    /// loaders verify those against the code.
    pub fn from_table(width: usize, table: Vec<PauliOperator>) -> Result<Self, CodeError> {
        if table.len() != 1usize << width {
            return Err(CodeError::DecoderWidthMismatch { expected: width, actual: table.len() });
        }
        Ok(DecoderMap { width, table })
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn entries(&self) -> impl Iterator<Item = (Syndrome, &PauliOperator)> {
        self.table
            .iter()
            .enumerate()
            .map(move |(bits, p)| (Syndrome::new(bits as u64, self.width), p))
    }

    pub fn recovery(&self, syndrome: &Syndrome) -> &PauliOperator {
        debug_assert_eq!(syndrome.width(), self.width);
        &self.table[syndrome.bits() as usize]
    }

    /// The minimum-weight decoder: for each syndrome, the minimum-weight
    /// Pauli with that syndrome, ties broken by the lexicographically
    /// smallest canonical string under I < X < Y < Z.
    pub fn min_weight(code: &StabilizerCode) -> Result<Self, CodeError> {
        if code.n() > ENUMERATION_LIMIT {
            return Err(CodeError::BudgetExceeded { n: code.n() });
        }
        let n = code.n();
        let width = code.syndrome_bits();
        let info = SymplecticInfo::new(code);
        let mut best_weight = alloc::vec![u32::MAX; 1usize << width];
        let mut table = alloc::vec![PauliOperator::identity(n); 1usize << width];

        // Traverse all Paulis in canonical-string lexicographic order (qubit 0
        // is the most significant digit), so the first strict improvement per
        // syndrome is the lex-smallest minimum-weight representative.
        let mut digits = alloc::vec![0u8; n];
        let mut syn = 0u64;
        let mut weight = 0u32;
        let total = 1u64 << (2 * n);
        for _ in 0..total {
            if weight < best_weight[syn as usize] {
                best_weight[syn as usize] = weight;
                let mut x = 0u64;
                let mut z = 0u64;
                for (q, &d) in digits.iter().enumerate() {
                    x |= ((d as u64) & 1) << q;
                    z |= ((d as u64) >> 1) << q;
                }
                table[syn as usize] = PauliOperator::from_masks(n, x, z).unwrap();
            }
            // Increment with qubit n-1 as the fastest digit.
            for q in (0..n).rev() {
                let old = digits[q];
                let new = (old + 1) & 3;
                digits[q] = new;
                syn ^= info.syndrome_contrib[q][old as usize]
                    ^ info.syndrome_contrib[q][new as usize];
                weight = weight + (old == 0) as u32 - (new == 0) as u32;
                if new != 0 {
                    break;
                }
            }
        }
        Ok(DecoderMap { width, table })
    }

    /// Replaces entries so that each listed error becomes the recovery for its
    /// own syndrome (and hence correctable).
    pub fn with_overrides(
        mut self,
        code: &StabilizerCode,
        overrides: &[PauliOperator],
    ) -> Result<Self, PauliError> {
        for e in overrides {
            let syn = code.syndrome(e)?;
            self.table[syn.bits() as usize] = *e;
        }
        Ok(self)
    }
}

/// Digit encoding used throughout the enumeration kernels:
/// 0 = I, 1 = X, 2 = Y, 3 = Z, with (x, z) bits (d & 1, d >> 1).
#[inline]
pub(crate) fn digit_masks(d: u8) -> (u64, u64) {
    ((d as u64) & 1, ((d as u64) >> 1) & 1)
}

/// Per-qubit syndrome/label parity contributions for fast classification.
pub(crate) struct SymplecticInfo {
    pub n: usize,
    /// `syndrome_contrib[q][d]`: XOR contribution of letter `d` at qubit `q`
    /// to the syndrome bits.
    pub syndrome_contrib: Vec<[u64; 4]>,
    /// Same for the 2k logical-label bits.
    pub label_contrib: Vec<[u64; 4]>,
}

impl SymplecticInfo {
    pub fn new(code: &StabilizerCode) -> Self {
        let n = code.n();
        let mut syndrome_contrib = alloc::vec![[0u64; 4]; n];
        let mut label_contrib = alloc::vec![[0u64; 4]; n];
        for q in 0..n {
            for d in 1u8..4 {
                let (x, z) = digit_masks(d);
                let mut syn = 0u64;
                for (i, s) in code.stabilizer_gens().iter().enumerate() {
                    let sx = (s.x_mask() >> q) & 1;
                    let sz = (s.z_mask() >> q) & 1;
                    syn |= ((x & sz) ^ (z & sx)) << i;
                }
                syndrome_contrib[q][d as usize] = syn;
                let mut label = 0u64;
                for i in 0..code.k() {
                    let lx = code.logical_x()[i];
                    let lz = code.logical_z()[i];
                    let ax = ((x & ((lx.z_mask() >> q) & 1)) ^ (z & ((lx.x_mask() >> q) & 1))) & 1;
                    let az = ((x & ((lz.z_mask() >> q) & 1)) ^ (z & ((lz.x_mask() >> q) & 1))) & 1;
                    label |= ax << (2 * i);
                    label |= az << (2 * i + 1);
                }
                label_contrib[q][d as usize] = label;
            }
        }
        SymplecticInfo { n, syndrome_contrib, label_contrib }
    }

    /// Classifies the Pauli with enumeration index `idx` (qubit 0 is the
    /// least-significant base-4 digit): returns (syndrome, label, weight).
    pub fn classify_index(&self, idx: u64) -> (u64, u64, u32) {
        let mut syn = 0u64;
        let mut label = 0u64;
        let mut w = 0u32;
        let mut rest = idx;
        for q in 0..self.n {
            let d = (rest & 3) as usize;
            rest >>= 2;
            syn ^= self.syndrome_contrib[q][d];
            label ^= self.label_contrib[q][d];
            w += (d != 0) as u32;
        }
        (syn, label, w)
    }
}

/// The Pauli with enumeration index `idx` on `n` qubits.
pub fn pauli_from_index(n: usize, idx: u64) -> PauliOperator {
    let mut x = 0u64;
    let mut z = 0u64;
    for q in 0..n {
        let d = ((idx >> (2 * q)) & 3) as u8;
        let (xb, zb) = digit_masks(d);
        x |= xb << q;
        z |= zb << q;
    }
    PauliOperator::from_masks(n, x, z).unwrap()
}

/// Enumeration index of `p` (inverse of [`pauli_from_index`]).
pub fn pauli_index(p: &PauliOperator) -> u64 {
    let mut idx = 0u64;
    for q in 0..p.qubits() {
        let x = (p.x_mask() >> q) & 1;
        let z = (p.z_mask() >> q) & 1;
        idx |= (x | (z << 1)) << (2 * q);
    }
    idx
}

/// A Pauli decoupling group given by its generator list. Errors that
/// anticommute with at least one generator are suppressed.
#[derive(Clone, Debug)]
pub struct DecouplingGroup {
    generators: Vec<PauliOperator>,
}

impl DecouplingGroup {
    /// Requires a non-empty generator list containing at least one
    /// non-identity element on a common register.
    pub fn new(generators: Vec<PauliOperator>) -> Result<Self, DecouplingGroupError> {
        let Some(first) = generators.first() else {
            return Err(DecouplingGroupError::Trivial);
        };
        let n = first.qubits();
        for g in &generators {
            if g.qubits() != n {
                return Err(DecouplingGroupError::SizeMismatch {
                    left: n,
                    right: g.qubits(),
                });
            }
        }
        if generators.iter().all(PauliOperator::is_identity) {
            return Err(DecouplingGroupError::Trivial);
        }
        Ok(DecouplingGroup { generators })
    }

    /// The full Pauli group on `k` qubits, generated by per-qubit X and Z.
    pub fn full_pauli(k: usize) -> Self {
        let mut generators = Vec::with_capacity(2 * k);
        for q in 0..k {
            generators.push(PauliOperator::x_on(k, q));
            generators.push(PauliOperator::z_on(k, q));
        }
        DecouplingGroup { generators }
    }

    pub fn qubits(&self) -> usize {
        self.generators[0].qubits()
    }

    pub fn generators(&self) -> &[PauliOperator] {
        &self.generators
    }

    /// Whether `e` is suppressed, i.e. anticommutes with some generator.
    pub fn suppresses(&self, e: &PauliOperator) -> Result<bool, PauliError> {
        if e.qubits() != self.qubits() {
            return Err(PauliError::SizeMismatch { left: self.qubits(), right: e.qubits() });
        }
        Ok(self.generators.iter().any(|g| e.anticommutes_unchecked(g) == 1))
    }

    /// Rank of the generators over F2; suppression depends only on this span.
    pub fn rank(&self) -> usize {
        GeneratorSet::new(self.qubits(), self.generators.clone()).unwrap().rank()
    }

    /// A maximal independent subset of the generators.
    pub fn reduced_basis(&self) -> Vec<PauliOperator> {
        GeneratorSet::new(self.qubits(), self.generators.clone())
            .unwrap()
            .independent_basis()
    }

    /// Whether the group span equals the span of the code's logical
    /// generators, i.e. the group is exactly the logical Pauli group.
    pub fn spans_logical_group(&self, code: &StabilizerCode) -> bool {
        if self.qubits() != code.n() {
            return false;
        }
        let mut logicals = code.logical_x().to_vec();
        logicals.extend_from_slice(code.logical_z());
        let logical_set = GeneratorSet::new(code.n(), logicals.clone()).unwrap();
        let group_set = GeneratorSet::new(code.n(), self.generators.clone()).unwrap();
        self.generators.iter().all(|g| logical_set.in_span(g).unwrap())
            && logicals.iter().all(|l| group_set.in_span(l).unwrap())
    }

    /// Replaces generator `index` by its product with `s`, leaving the rest
    /// unchanged. Dressing by a stabilizer changes the suppressed sector but
    /// not the logical action.
    pub fn dress_generator(
        &self,
        index: usize,
        s: &PauliOperator,
    ) -> Result<DecouplingGroup, DecouplingGroupError> {
        if index >= self.generators.len() {
            return Err(DecouplingGroupError::IndexOutOfRange {
                index,
                len: self.generators.len(),
            });
        }
        let dressed = self.generators[index]
            .multiply(s)
            .map_err(|_| DecouplingGroupError::SizeMismatch {
                left: self.qubits(),
                right: s.qubits(),
            })?;
        let mut generators = self.generators.clone();
        generators[index] = dressed;
        Ok(DecouplingGroup { generators })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum DecouplingGroupError {
    /// Empty generator list or all-identity generators.
    Trivial,
    SizeMismatch { left: usize, right: usize },
    IndexOutOfRange { index: usize, len: usize },
}

impl fmt::Display for DecouplingGroupError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DecouplingGroupError::Trivial => {
                write!(f, "decoupling group must have at least one non-identity generator")
            }
            DecouplingGroupError::SizeMismatch { left, right } => {
                write!(f, "qubit count mismatch: {left} vs {right}")
            }
            DecouplingGroupError::IndexOutOfRange { index, len } => {
                write!(f, "generator index {index} out of range for {len} generators")
            }
        }
    }
}

impl core::error::Error for DecouplingGroupError {}

/// Classification of one error with respect to a code, decoder, and
/// decoupling group.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Classification {
    pub is_stabilizer: bool,
    pub is_zero_syndrome: bool,
    pub is_correctable: bool,
    pub is_suppressed: bool,
    pub logical_label: u64,
}

/// Re-tunes the weight-3 class choices of a minimum-weight decoder until the
/// numbers of unsuppressed and suppressed uncorrectable weight-3 errors match
/// externally supplied targets (e.g. reference values published for a code).
///
/// Only syndromes whose chosen recovery class has minimum weight 3 are
/// touched, and only classes that also have minimum weight 3 are admissible,
/// so the decoder stays minimum-weight and its weight-0/1/2 behavior is
/// preserved exactly. The search is a deterministic seeded greedy walk; it
/// fails if the targets are unreachable within the move budget.
pub fn tune_decoder_weight3(
    code: &StabilizerCode,
    base: DecoderMap,
    dd: &DecouplingGroup,
    target_unsuppressed_w3: u64,
    target_suppressed_w3: u64,
) -> Result<DecoderMap, CodeError> {
    use rand::Rng;
    use rand::SeedableRng;

    let n = code.n();
    let k = code.k();
    let width = code.syndrome_bits();
    if base.width() != width {
        return Err(CodeError::DecoderWidthMismatch { expected: width, actual: base.width() });
    }
    let nsyn = 1usize << width;
    let nlabels = 1usize << (2 * k);

    // Per-(syndrome, label) tallies of weight-2 and sector-split weight-3
    // errors, plus one weight-3 representative per cell for rebuilding
    // recoveries after a class switch.
    let cell = |syn: usize, label: usize| syn * nlabels + label;
    let mut cnt2 = alloc::vec![0u32; nsyn * nlabels];
    let mut cnt3 = alloc::vec![[0u32; 2]; nsyn * nlabels];
    let mut rep3: Vec<Option<PauliOperator>> = alloc::vec![None; nsyn * nlabels];
    let mut visit = |p: PauliOperator| {
        let syn = code.syndrome(&p).unwrap().bits() as usize;
        let label = code.logical_label(&p).unwrap() as usize;
        match p.weight() {
            2 => cnt2[cell(syn, label)] += 1,
            3 => {
                let sector = dd.suppresses(&p).unwrap() as usize;
                cnt3[cell(syn, label)][sector] += 1;
                if rep3[cell(syn, label)].is_none() {
                    rep3[cell(syn, label)] = Some(p);
                }
            }
            _ => {}
        }
    };
    for_each_pauli_of_weight(n, 2, &mut visit);
    for_each_pauli_of_weight(n, 3, &mut visit);

    // Current class assignment and the free syndromes: those whose chosen
    // class has minimum weight exactly 3.
    let mut class = alloc::vec![0usize; nsyn];
    for (syn, recovery) in base.entries() {
        class[syn.bits() as usize] = code.logical_label(recovery).unwrap() as usize;
    }
    let weight1_syndromes: Vec<usize> = (0..n)
        .flat_map(|q| {
            [
                PauliOperator::x_on(n, q),
                PauliOperator::y_on(n, q),
                PauliOperator::z_on(n, q),
            ]
            .into_iter()
            .map(|p| code.syndrome(&p).unwrap().bits() as usize)
        })
        .collect();
    let mut free: Vec<usize> = Vec::new();
    for syn in 1..nsyn {
        if weight1_syndromes.contains(&syn) || cnt2[cell(syn, class[syn])] > 0 {
            continue;
        }
        if cnt3[cell(syn, class[syn])] == [0, 0] {
            continue;
        }
        // Admissible alternatives exist only where another class also has
        // minimum weight 3 (and no weight-2 elements).
        let alts = (0..nlabels)
            .filter(|&l| l != class[syn] && cnt2[cell(syn, l)] == 0 && cnt3[cell(syn, l)] != [0, 0])
            .count();
        if alts > 0 {
            free.push(syn);
        }
    }

    // Uncorrected weight-3 tallies for the current assignment.
    let mut current = [0i64; 2];
    for syn in 0..nsyn {
        for l in 0..nlabels {
            if l != class[syn] {
                current[0] += cnt3[cell(syn, l)][0] as i64;
                current[1] += cnt3[cell(syn, l)][1] as i64;
            }
        }
    }
    let target = [target_unsuppressed_w3 as i64, target_suppressed_w3 as i64];
    let mut delta = [target[0] - current[0], target[1] - current[1]];

    // Greedy descent on |delta|_1 over single class switches, with seeded
    // random kicks out of plateaus.
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(0x1357_9bdf);
    let mut steps = 0u32;
    while delta != [0, 0] {
        steps += 1;
        if steps > 1_000_000 {
            return Err(CodeError::BudgetExceeded { n });
        }
        let mut best: Option<(i64, usize, usize)> = None;
        for &syn in &free {
            let c = class[syn];
            let uc = cnt3[cell(syn, c)];
            for l in 0..nlabels {
                if l == c || cnt2[cell(syn, l)] > 0 || cnt3[cell(syn, l)] == [0, 0] {
                    continue;
                }
                let ul = cnt3[cell(syn, l)];
                // Switching c -> l adds the old class's counts to the
                // uncorrected side and removes the new class's.
                let d0 = uc[0] as i64 - ul[0] as i64;
                let d1 = uc[1] as i64 - ul[1] as i64;
                let score = (delta[0] - d0).abs() + (delta[1] - d1).abs();
                if best.is_none_or(|(s, _, _)| score < s) {
                    best = Some((score, syn, l));
                }
            }
        }
        let Some((score, syn, l)) = best else {
            return Err(CodeError::BudgetExceeded { n });
        };
        let here = delta[0].abs() + delta[1].abs();
        if score < here {
            let c = class[syn];
            delta[0] -= cnt3[cell(syn, c)][0] as i64 - cnt3[cell(syn, l)][0] as i64;
            delta[1] -= cnt3[cell(syn, c)][1] as i64 - cnt3[cell(syn, l)][1] as i64;
            class[syn] = l;
        } else {
            // Plateau: random admissible switch.
            let syn = free[rng.random_range(0..free.len())];
            let c = class[syn];
            let alts: Vec<usize> = (0..nlabels)
                .filter(|&l| {
                    l != c && cnt2[cell(syn, l)] == 0 && cnt3[cell(syn, l)] != [0, 0]
                })
                .collect();
            let l = alts[rng.random_range(0..alts.len())];
            delta[0] -= cnt3[cell(syn, c)][0] as i64 - cnt3[cell(syn, l)][0] as i64;
            delta[1] -= cnt3[cell(syn, c)][1] as i64 - cnt3[cell(syn, l)][1] as i64;
            class[syn] = l;
        }
    }

    // Rebuild recoveries for syndromes whose class changed.
    let mut table: Vec<PauliOperator> = base.entries().map(|(_, p)| *p).collect();
    for syn in 0..nsyn {
        let have = code.logical_label(&table[syn]).unwrap() as usize;
        if have != class[syn] {
            table[syn] = rep3[cell(syn, class[syn])]
                .expect("admissible classes always have a weight-3 representative");
        }
    }
    DecoderMap::from_table(width, table)
}

/// Calls `visit` on every Pauli of exactly the given weight, in ascending
/// support order with letters X < Y < Z varying fastest on the last position.
fn for_each_pauli_of_weight(n: usize, weight: usize, visit: &mut dyn FnMut(PauliOperator)) {
    let mut support = alloc::vec![0usize; weight];
    fn rec(
        n: usize,
        weight: usize,
        depth: usize,
        start: usize,
        support: &mut [usize],
        visit: &mut dyn FnMut(PauliOperator),
    ) {
        if depth == weight {
            let mut letters = alloc::vec![1u8; weight];
            loop {
                let mut x = 0u64;
                let mut z = 0u64;
                for (&q, &d) in support.iter().zip(letters.iter()) {
                    let (xb, zb) = digit_masks(d);
                    x |= xb << q;
                    z |= zb << q;
                }
                visit(PauliOperator::from_masks(n, x, z).unwrap());
                let mut i = weight;
                loop {
                    if i == 0 {
                        return;
                    }
                    i -= 1;
                    if letters[i] < 3 {
                        letters[i] += 1;
                        break;
                    }
                    letters[i] = 1;
                }
            }
        } else {
            for q in start..n {
                support[depth] = q;
                rec(n, weight, depth + 1, q + 1, support, visit);
            }
        }
    }
    if weight <= n {
        rec(n, weight, 0, 0, &mut support, visit);
    }
}

/// Finds, for each syndrome bit of a decoder table, the stabilizer element
/// whose anticommutation pattern reproduces that bit on every row. Returns
/// the per-bit elements in order, or `None` if some bit is realized by no
/// element of the group (the table is inconsistent with the group).
///
/// This recovers a generator ordering from a published decoding table when
/// the source lists the table but not the generators it was built against.
pub fn resolve_generator_ordering(
    group_generators: &[PauliOperator],
    rows: &[(Syndrome, PauliOperator)],
) -> Option<Vec<PauliOperator>> {
    let Some(first) = group_generators.first() else {
        return None;
    };
    let n = first.qubits();
    let width = rows.first().map(|(s, _)| s.width())?;
    // All 2^m elements of the group, m = generator count (assumed independent).
    let m = group_generators.len();
    let mut elements = Vec::with_capacity(1usize << m);
    for combo in 0..(1u64 << m) {
        let mut e = PauliOperator::identity(n);
        for (i, g) in group_generators.iter().enumerate() {
            if (combo >> i) & 1 == 1 {
                e = e.multiply(g).ok()?;
            }
        }
        elements.push(e);
    }
    let mut resolved = Vec::with_capacity(width);
    for bit in 0..width {
        let found = elements.iter().find(|s| {
            !s.is_identity()
                && rows.iter().all(|(syn, recovery)| {
                    recovery.anticommutes_unchecked(s) as u64 == (syn.bits() >> bit) & 1
                })
        })?;
        resolved.push(*found);
    }
    // The resolved elements must themselves be an independent generating set.
    let set = GeneratorSet::new(n, resolved.clone()).ok()?;
    if set.rank() != width {
        return None;
    }
    Some(resolved)
}

/// Deterministically samples a valid random `[[n, k]]` code: a commuting
/// independent stabilizer set completed with symplectically paired logicals.
pub fn random_code<R: rand::Rng>(n: usize, k: usize, rng: &mut R) -> StabilizerCode {
    assert!(k >= 1 && k <= n && n <= crate::pauli::MAX_QUBITS);
    loop {
        if let Some(code) = try_random_code(n, k, rng) {
            if code.validate().is_empty() {
                return code;
            }
        }
    }
}

fn try_random_code<R: rand::Rng>(n: usize, k: usize, rng: &mut R) -> Option<StabilizerCode> {
    let mask = if n == 64 { u64::MAX } else { (1u64 << n) - 1 };
    let mut stabs: Vec<PauliOperator> = Vec::new();
    let mut elim = Eliminator::new();
    let mut attempts = 0;
    while stabs.len() < n - k {
        attempts += 1;
        if attempts > 400 * n.max(1) {
            return None;
        }
        let p = PauliOperator::from_masks(n, rng.random::<u64>() & mask, rng.random::<u64>() & mask)
            .unwrap();
        if p.is_identity() || stabs.iter().any(|s| p.anticommutes_unchecked(s) == 1) {
            continue;
        }
        if elim.insert(p.symplectic_bits()) {
            stabs.push(p);
        }
    }
    // Complete logicals greedily: for each pair, an X with some anticommuting
    // partner among centralizer elements independent of what we have.
    let mut logical_x: Vec<PauliOperator> = Vec::new();
    let mut logical_z: Vec<PauliOperator> = Vec::new();
    let commutes_with_all = |p: &PauliOperator, list: &[PauliOperator]| {
        list.iter().all(|q| p.anticommutes_unchecked(q) == 0)
    };
    for _ in 0..k {
        let mut found = None;
        let mut attempts = 0;
        'outer: while attempts < 4000 {
            attempts += 1;
            let cand = PauliOperator::from_masks(
                n,
                rng.random::<u64>() & mask,
                rng.random::<u64>() & mask,
            )
            .unwrap();
            if cand.is_identity()
                || !commutes_with_all(&cand, &stabs)
                || !commutes_with_all(&cand, &logical_x)
                || !commutes_with_all(&cand, &logical_z)
            {
                continue;
            }
            let mut check = elim_clone_with(&stabs, &logical_x, &logical_z);
            if !check.insert(cand.symplectic_bits()) {
                continue;
            }
            // Partner: commutes with everything else, anticommutes with cand.
            for _ in 0..4000 {
                let partner = PauliOperator::from_masks(
                    n,
                    rng.random::<u64>() & mask,
                    rng.random::<u64>() & mask,
                )
                .unwrap();
                if partner.is_identity()
                    || partner.anticommutes_unchecked(&cand) == 0
                    || !commutes_with_all(&partner, &stabs)
                    || !commutes_with_all(&partner, &logical_x)
                    || !commutes_with_all(&partner, &logical_z)
                {
                    continue;
                }
                found = Some((cand, partner));
                break 'outer;
            }
        }
        let (x, z) = found?;
        logical_x.push(x);
        logical_z.push(z);
    }
    Some(StabilizerCode::new(n, k, stabs, logical_x, logical_z))
}

fn elim_clone_with(
    stabs: &[PauliOperator],
    lx: &[PauliOperator],
    lz: &[PauliOperator],
) -> Eliminator {
    let mut elim = Eliminator::new();
    for p in stabs.iter().chain(lx).chain(lz) {
        elim.insert(p.symplectic_bits());
    }
    elim
}

/// Parses a syndrome bit string ("100000": bit 0 first).
pub fn parse_syndrome(text: &str) -> Option<Syndrome> {
    let mut bits = 0u64;
    let mut width = 0usize;
    for ch in text.chars() {
        match ch {
            '0' => {}
            '1' => bits |= 1u64 << width,
            _ => return None,
        }
        width += 1;
        if width > 64 {
            return None;
        }
    }
    Some(Syndrome { bits, width })
}

/// Standard generators of the `[[7,1,3]]` Steane code together with the
/// conventional transversal logicals. The generator ordering here is the
/// textbook one; shipped data files may freeze a different ordering resolved
/// against a published decoding table.
pub fn steane_code() -> StabilizerCode {
    let parse = |s: &str| crate::pauli::parse_pauli(s).unwrap();
    StabilizerCode::new(
        7,
        1,
        alloc::vec![
            parse("IIIXXXX"),
            parse("IXXIIXX"),
            parse("XIXIXIX"),
            parse("IIIZZZZ"),
            parse("IZZIIZZ"),
            parse("ZIZIZIZ"),
        ],
        alloc::vec![parse("XXXXXXX")],
        alloc::vec![parse("ZZZZZZZ")],
    )
}

pub use crate::pauli::format_pauli as pauli_string;

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pauli::parse_pauli;
    use alloc::vec;

    fn rep_code_3() -> StabilizerCode {
        StabilizerCode::new(
            3,
            1,
            vec![parse_pauli("ZZI").unwrap(), parse_pauli("IZZ").unwrap()],
            vec![parse_pauli("XXX").unwrap()],
            vec![parse_pauli("ZII").unwrap()],
        )
    }

    #[test]
    fn steane_validates() {
        assert!(steane_code().validate().is_empty());
    }

    #[test]
    fn trivial_code_validates() {
        assert!(StabilizerCode::trivial(1).validate().is_empty());
        assert!(StabilizerCode::trivial(3).validate().is_empty());
    }

    #[test]
    fn anticommuting_stabilizers_reported() {
        let code = StabilizerCode::new(
            1,
            1,
            vec![parse_pauli("X").unwrap(), parse_pauli("Z").unwrap()],
            vec![parse_pauli("X").unwrap()],
            vec![parse_pauli("Z").unwrap()],
        );
        let report = code.validate();
        assert!(!report.is_empty());
    }

    #[test]
    fn k_zero_rejected() {
        let code = StabilizerCode::new(1, 0, vec![parse_pauli("Z").unwrap()], vec![], vec![]);
        assert!(code
            .validate()
            .iter()
            .any(|v| matches!(v, Violation::KOutOfRange { .. })));
    }

    #[test]
    fn syndrome_of_identity_is_trivial() {
        let code = steane_code();
        let syn = code.syndrome(&PauliOperator::identity(7)).unwrap();
        assert!(syn.is_trivial());
        assert_eq!(alloc::format!("{syn}"), "000000");
    }

    #[test]
    fn syndrome_is_linear() {
        let code = steane_code();
        let e1 = parse_pauli("XIYIZII").unwrap();
        let e2 = parse_pauli("IZZYIIX").unwrap();
        let s1 = code.syndrome(&e1).unwrap();
        let s2 = code.syndrome(&e2).unwrap();
        let s12 = code.syndrome(&e1.multiply(&e2).unwrap()).unwrap();
        assert_eq!(s12.bits(), s1.bits() ^ s2.bits());
    }

    #[test]
    fn syndrome_invariant_under_stabilizer_multiplication() {
        let code = steane_code();
        let e = parse_pauli("XYZIIII").unwrap();
        let s = code.stabilizer_gens()[2];
        let syn1 = code.syndrome(&e).unwrap();
        let syn2 = code.syndrome(&e.multiply(&s).unwrap()).unwrap();
        assert_eq!(syn1.bits(), syn2.bits());
    }

    #[test]
    fn logical_label_examples() {
        let code = steane_code();
        assert_eq!(code.logical_label(&PauliOperator::identity(7)).unwrap(), 0);
        // logical_x anticommutes only with logical_z -> bit 1.
        assert_eq!(code.logical_label(&code.logical_x()[0]).unwrap(), 0b10);
        for s in code.stabilizer_gens() {
            assert_eq!(code.logical_label(s).unwrap(), 0);
        }
    }

    #[test]
    fn min_weight_decoder_rep_code() {
        let code = rep_code_3();
        assert!(code.validate().is_empty());
        let dec = DecoderMap::min_weight(&code).unwrap();
        let xii = parse_pauli("XII").unwrap();
        let syn = code.syndrome(&xii).unwrap();
        assert_eq!(*dec.recovery(&syn), xii);
        // D(0) = I by construction.
        assert!(dec.recovery(&Syndrome::trivial(2)).is_identity());
    }

    #[test]
    fn min_weight_decoder_trivial_code() {
        let code = StabilizerCode::trivial(2);
        let dec = DecoderMap::min_weight(&code).unwrap();
        assert_eq!(dec.width(), 0);
        assert!(dec.recovery(&Syndrome::trivial(0)).is_identity());
    }

    #[test]
    fn min_weight_decoder_steane_covers_weight_one() {
        let code = steane_code();
        let dec = DecoderMap::min_weight(&code).unwrap();
        // Every weight-1 error must be its own syndrome's recovery: distance 3
        // makes the weight-1 representative unique.
        for q in 0..7 {
            for p in [
                PauliOperator::x_on(7, q),
                PauliOperator::y_on(7, q),
                PauliOperator::z_on(7, q),
            ] {
                let syn = code.syndrome(&p).unwrap();
                assert_eq!(*dec.recovery(&syn), p);
            }
        }
    }

    #[test]
    fn distance_examples() {
        assert_eq!(steane_code().distance().unwrap(), 3);
        assert_eq!(StabilizerCode::trivial(1).distance().unwrap(), 1);
        assert_eq!(rep_code_3().distance().unwrap(), 1);
    }

    #[test]
    fn classify_identity() {
        let code = steane_code();
        let dec = DecoderMap::min_weight(&code).unwrap();
        let dd = DecouplingGroup::new(vec![code.logical_x()[0], code.logical_z()[0]]).unwrap();
        let c = code.classify(&dec, &dd, &PauliOperator::identity(7)).unwrap();
        assert!(c.is_stabilizer && c.is_zero_syndrome && c.is_correctable);
        assert!(!c.is_suppressed);
        assert_eq!(c.logical_label, 0);
    }

    #[test]
    fn correctable_count_is_4_pow_n_minus_k() {
        let code = rep_code_3();
        let dec = DecoderMap::min_weight(&code).unwrap();
        let dd = DecouplingGroup::new(vec![code.logical_x()[0]]).unwrap();
        let mut count = 0u64;
        for idx in 0..(1u64 << (2 * 3)) {
            let p = pauli_from_index(3, idx);
            if code.classify(&dec, &dd, &p).unwrap().is_correctable {
                count += 1;
            }
        }
        assert_eq!(count, 4u64.pow(2));
    }

    #[test]
    fn classification_partition() {
        // Every Pauli falls in exactly one of stabilizer / corrected /
        // zero-syndrome logical / detected-uncorrectable.
        let code = rep_code_3();
        let dec = DecoderMap::min_weight(&code).unwrap();
        let dd = DecouplingGroup::new(vec![code.logical_x()[0]]).unwrap();
        for idx in 0..(1u64 << (2 * 3)) {
            let p = pauli_from_index(3, idx);
            let c = code.classify(&dec, &dd, &p).unwrap();
            let st = c.is_stabilizer;
            let corrected = c.is_correctable && !c.is_zero_syndrome;
            let logical = c.is_zero_syndrome && !c.is_stabilizer;
            let detected_uncorrectable = !c.is_correctable && !c.is_zero_syndrome;
            let classes =
                st as u8 + corrected as u8 + logical as u8 + detected_uncorrectable as u8;
            assert_eq!(classes, 1);
        }
    }

    #[test]
    fn dressing_is_involutive_and_label_preserving() {
        let code = steane_code();
        let dd = DecouplingGroup::new(vec![code.logical_x()[0], code.logical_z()[0]]).unwrap();
        let id = PauliOperator::identity(7);
        let unchanged = dd.dress_generator(0, &id).unwrap();
        assert_eq!(unchanged.generators(), dd.generators());

        let s = code.stabilizer_gens()[0];
        let once = dd.dress_generator(0, &s).unwrap();
        let twice = once.dress_generator(0, &s).unwrap();
        assert_eq!(twice.generators(), dd.generators());
        // Dressing by a stabilizer preserves the logical action.
        assert_eq!(
            code.logical_label(&once.generators()[0]).unwrap(),
            code.logical_label(&dd.generators()[0]).unwrap()
        );
        let w = once.generators()[0].weight();
        assert!(w == 3 || w == 11 - 2 * 4 || w <= 11);
    }

    #[test]
    fn pauli_index_round_trip() {
        for idx in 0..256u64 {
            let p = pauli_from_index(4, idx);
            assert_eq!(pauli_index(&p), idx);
        }
    }

    #[test]
    fn random_code_validates() {
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        let code = random_code(5, 1, &mut rng);
        assert!(code.validate().is_empty());
        assert_eq!(code.n(), 5);
        assert_eq!(code.k(), 1);
    }
}
