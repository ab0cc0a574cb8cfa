//! Phase-stripped Pauli operators in the binary symplectic representation.
//!
//! An n-qubit Pauli modulo global phase is a pair of n-bit masks: the X part
//! and the Z part. Multiplication is componentwise XOR, every element is an
//! involution, and commutation is the parity of the symplectic form. Letters
//! map per qubit as (x,z) = (0,0) I, (1,0) X, (1,1) Y, (0,1) Z.

use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

/// Largest supported qubit count; both masks live in a single `u64`.
pub const MAX_QUBITS: usize = 64;

/// An n-qubit Pauli operator with the global phase stripped.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PauliOperator {
    n: usize,
    x: u64,
    z: u64,
}

/// Errors from Pauli construction and arithmetic.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PauliError {
    /// Empty Pauli string.
    Empty,
    /// A character other than I/X/Y/Z, with its byte offset.
    BadLetter { offset: usize, letter: char },
    /// More qubits than the mask representation supports.
    TooManyQubits(usize),
    /// Two operands act on different qubit counts.
    SizeMismatch { left: usize, right: usize },
}

impl fmt::Display for PauliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PauliError::Empty => write!(f, "empty Pauli string"),
            PauliError::BadLetter { offset, letter } => {
                write!(f, "invalid Pauli letter {letter:?} at offset {offset}")
            }
            PauliError::TooManyQubits(n) => {
                write!(f, "{n} qubits exceeds the supported maximum of {MAX_QUBITS}")
            }
            PauliError::SizeMismatch { left, right } => {
                write!(f, "qubit count mismatch: {left} vs {right}")
            }
        }
    }
}

impl core::error::Error for PauliError {}

impl PauliOperator {
    /// The identity on `n` qubits.
    pub fn identity(n: usize) -> Self {
        debug_assert!(n >= 1 && n <= MAX_QUBITS);
        PauliOperator { n, x: 0, z: 0 }
    }

    /// Builds an operator from raw masks. Bits at positions `>= n` must be zero.
    pub fn from_masks(n: usize, x: u64, z: u64) -> Result<Self, PauliError> {
        if n == 0 || n > MAX_QUBITS {
            return Err(PauliError::TooManyQubits(n));
        }
        let valid = mask_lo(n);
        debug_assert!(x & !valid == 0 && z & !valid == 0);
        Ok(PauliOperator { n, x: x & valid, z: z & valid })
    }

    /// Single-qubit X placed at `qubit` within an `n`-qubit register.
    pub fn x_on(n: usize, qubit: usize) -> Self {
        debug_assert!(qubit < n);
        PauliOperator { n, x: 1 << qubit, z: 0 }
    }

    /// Single-qubit Z placed at `qubit` within an `n`-qubit register.
    pub fn z_on(n: usize, qubit: usize) -> Self {
        debug_assert!(qubit < n);
        PauliOperator { n, x: 0, z: 1 << qubit }
    }

    /// Single-qubit Y placed at `qubit` within an `n`-qubit register.
    pub fn y_on(n: usize, qubit: usize) -> Self {
        debug_assert!(qubit < n);
        PauliOperator { n, x: 1 << qubit, z: 1 << qubit }
    }

    pub fn qubits(&self) -> usize {
        self.n
    }

    pub fn x_mask(&self) -> u64 {
        self.x
    }

    pub fn z_mask(&self) -> u64 {
        self.z
    }

    pub fn is_identity(&self) -> bool {
        self.x == 0 && self.z == 0
    }

    /// Number of qubits on which the operator acts nontrivially.
    pub fn weight(&self) -> u32 {
        (self.x | self.z).count_ones()
    }

    /// Letter at `qubit` as one of `'I'`, `'X'`, `'Y'`, `'Z'`.
    pub fn letter(&self, qubit: usize) -> char {
        debug_assert!(qubit < self.n);
        match ((self.x >> qubit) & 1, (self.z >> qubit) & 1) {
            (0, 0) => 'I',
            (1, 0) => 'X',
            (1, 1) => 'Y',
            _ => 'Z',
        }
    }

    /// Product in the phase-stripped group: componentwise XOR of the masks.
    pub fn multiply(&self, other: &PauliOperator) -> Result<PauliOperator, PauliError> {
        if self.n != other.n {
            return Err(PauliError::SizeMismatch { left: self.n, right: other.n });
        }
        Ok(PauliOperator { n: self.n, x: self.x ^ other.x, z: self.z ^ other.z })
    }

    /// Whether the two operators commute, via the symplectic form:
    /// commute iff `popcount(x1 & z2) + popcount(z1 & x2)` is even.
    pub fn commutes(&self, other: &PauliOperator) -> Result<bool, PauliError> {
        if self.n != other.n {
            return Err(PauliError::SizeMismatch { left: self.n, right: other.n });
        }
        Ok(self.anticommutes_unchecked(other) == 0)
    }

    /// Symplectic-form parity with no size check: 1 means anticommute.
    #[inline]
    pub(crate) fn anticommutes_unchecked(&self, other: &PauliOperator) -> u32 {
        ((self.x & other.z).count_ones() ^ (self.z & other.x).count_ones()) & 1
    }

    /// The 2n-bit symplectic vector, X part in the low half.
    #[inline]
    pub(crate) fn symplectic_bits(&self) -> u128 {
        (self.x as u128) | ((self.z as u128) << MAX_QUBITS)
    }
}

impl fmt::Debug for PauliOperator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "PauliOperator({})", format_pauli(self))
    }
}

impl fmt::Display for PauliOperator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&format_pauli(self))
    }
}

/// Parses a Pauli string of letters I/X/Y/Z (case-insensitive). The leftmost
/// letter is qubit 0.
pub fn parse_pauli(text: &str) -> Result<PauliOperator, PauliError> {
    if text.is_empty() {
        return Err(PauliError::Empty);
    }
    let mut n = 0usize;
    let mut x = 0u64;
    let mut z = 0u64;
    for (offset, letter) in text.chars().enumerate() {
        if n == MAX_QUBITS {
            return Err(PauliError::TooManyQubits(text.chars().count()));
        }
        let (xb, zb) = match letter.to_ascii_uppercase() {
            'I' => (0u64, 0u64),
            'X' => (1, 0),
            'Y' => (1, 1),
            'Z' => (0, 1),
            _ => return Err(PauliError::BadLetter { offset, letter }),
        };
        x |= xb << n;
        z |= zb << n;
        n += 1;
    }
    Ok(PauliOperator { n, x, z })
}

/// Canonical uppercase string, qubit 0 leftmost. Inverse of [`parse_pauli`].
pub fn format_pauli(p: &PauliOperator) -> String {
    (0..p.n).map(|q| p.letter(q)).collect()
}

fn mask_lo(n: usize) -> u64 {
    if n >= 64 {
        u64::MAX
    } else {
        (1u64 << n) - 1
    }
}

/// An ordered list of Paulis on a common register, used as the carrier for
/// stabilizer, logical, and decoupling generator lists.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GeneratorSet {
    n: usize,
    members: Vec<PauliOperator>,
}

impl GeneratorSet {
    pub fn new(n: usize, members: Vec<PauliOperator>) -> Result<Self, PauliError> {
        for m in &members {
            if m.qubits() != n {
                return Err(PauliError::SizeMismatch { left: n, right: m.qubits() });
            }
        }
        Ok(GeneratorSet { n, members })
    }

    pub fn qubits(&self) -> usize {
        self.n
    }

    pub fn members(&self) -> &[PauliOperator] {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    /// F2 rank of the members viewed as 2n-bit symplectic vectors.
    pub fn rank(&self) -> usize {
        let mut elim = Eliminator::new();
        for m in &self.members {
            elim.insert(m.symplectic_bits());
        }
        elim.rank()
    }

    /// Whether `p` is an F2 combination of the members (phases ignored).
    pub fn in_span(&self, p: &PauliOperator) -> Result<bool, PauliError> {
        if p.qubits() != self.n {
            return Err(PauliError::SizeMismatch { left: self.n, right: p.qubits() });
        }
        let mut elim = Eliminator::new();
        for m in &self.members {
            elim.insert(m.symplectic_bits());
        }
        Ok(elim.reduce(p.symplectic_bits()) == 0)
    }

    /// A maximal independent subset of the members, in first-seen order.
    pub fn independent_basis(&self) -> Vec<PauliOperator> {
        let mut elim = Eliminator::new();
        let mut basis = Vec::new();
        for m in &self.members {
            if elim.insert(m.symplectic_bits()) {
                basis.push(*m);
            }
        }
        basis
    }
}

/// Incremental Gaussian elimination over F2 with pivots chosen
/// lowest-index-first, so reductions are deterministic.
pub(crate) struct Eliminator {
    /// Rows in echelon form, keyed by pivot position (trailing-zero index).
    rows: Vec<(u32, u128)>,
}

impl Eliminator {
    pub(crate) fn new() -> Self {
        Eliminator { rows: Vec::new() }
    }

    /// Reduces `v` against the stored rows; the remainder is zero exactly
    /// when `v` lies in the span.
    pub(crate) fn reduce(&self, mut v: u128) -> u128 {
        for &(pivot, row) in &self.rows {
            if (v >> pivot) & 1 == 1 {
                v ^= row;
            }
        }
        v
    }

    /// Inserts `v`; returns true if it enlarged the span.
    pub(crate) fn insert(&mut self, v: u128) -> bool {
        let rem = self.reduce(v);
        if rem == 0 {
            return false;
        }
        let pivot = rem.trailing_zeros();
        self.rows.push((pivot, rem));
        // Keep pivot order ascending so reduce() runs low bits first.
        self.rows.sort_unstable_by_key(|&(p, _)| p);
        true
    }

    pub(crate) fn rank(&self) -> usize {
        self.rows.len()
    }
}
