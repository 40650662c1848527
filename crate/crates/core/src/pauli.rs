//! Binary-symplectic Pauli operators.
//!
//! An `n`-qubit Pauli is stored as two bit masks: bit `q` of `x` is set where
//! the operator acts as X or Y, bit `q` of `z` where it acts as Z or Y.
//! Phases are not tracked.

use std::fmt;
use std::str::FromStr;

use crate::error::QecError;

/// Largest qubit count a [`PauliOperator`] can address.
pub const MAX_QUBITS: usize = 64;

/// Single-qubit Pauli letter.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Letter {
    I,
    X,
    Y,
    Z,
}

impl Letter {
    pub fn from_bits(x: bool, z: bool) -> Self {
        match (x, z) {
            (false, false) => Letter::I,
            (true, false) => Letter::X,
            (false, true) => Letter::Z,
            (true, true) => Letter::Y,
        }
    }

    pub fn as_char(self) -> char {
        match self {
            Letter::I => 'I',
            Letter::X => 'X',
            Letter::Y => 'Y',
            Letter::Z => 'Z',
        }
    }
}

/// Error class of a Pauli pattern: `j` non-identity positions, `i` of them
/// pure Z and `l` pure X (the remaining `j - i - l` are Y).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ErrorClass {
    pub j: usize,
    pub i: usize,
    pub l: usize,
}

impl ErrorClass {
    pub fn new(j: usize, i: usize, l: usize) -> Self {
        debug_assert!(i + l <= j);
        ErrorClass { j, i, l }
    }

    pub fn y_count(&self) -> usize {
        self.j - self.i - self.l
    }

    /// Letter label with X's first, then Z's, then Y's (`"XZY"`, `"ZZ"`, ...).
    pub fn label(&self) -> String {
        let mut s = String::with_capacity(self.j);
        s.extend(std::iter::repeat('X').take(self.l));
        s.extend(std::iter::repeat('Z').take(self.i));
        s.extend(std::iter::repeat('Y').take(self.y_count()));
        s
    }
}

impl fmt::Display for ErrorClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.label())
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct PauliOperator {
    n: usize,
    x: u64,
    z: u64,
}

#[inline]
fn width_mask(n: usize) -> u64 {
    if n == 64 {
        u64::MAX
    } else {
        (1u64 << n) - 1
    }
}

impl PauliOperator {
    pub fn identity(n: usize) -> Self {
        assert!(n <= MAX_QUBITS, "at most {MAX_QUBITS} qubits supported");
        PauliOperator { n, x: 0, z: 0 }
    }

    /// Builds an operator from masks; bits at or above `n` are rejected.
    pub fn from_masks(n: usize, x: u64, z: u64) -> Result<Self, QecError> {
        if n > MAX_QUBITS {
            return Err(QecError::TooManyQubits(n));
        }
        let m = width_mask(n);
        if x & !m != 0 || z & !m != 0 {
            return Err(QecError::MaskOutOfRange { n });
        }
        Ok(PauliOperator { n, x, z })
    }

    /// Single-letter operator acting on `qubit` (0-based).
    pub fn single(n: usize, qubit: usize, letter: Letter) -> Self {
        let mut p = Self::identity(n);
        p.set(qubit, letter);
        p
    }

    /// Operator with the same letter on every listed qubit.
    pub fn on(n: usize, qubits: &[usize], letter: Letter) -> Self {
        let mut p = Self::identity(n);
        for &q in qubits {
            p.set(q, letter);
        }
        p
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn x_mask(&self) -> u64 {
        self.x
    }

    pub fn z_mask(&self) -> u64 {
        self.z
    }

    pub fn support(&self) -> u64 {
        self.x | self.z
    }

    pub fn weight(&self) -> usize {
        self.support().count_ones() as usize
    }

    pub fn is_identity(&self) -> bool {
        self.x == 0 && self.z == 0
    }

    pub fn letter(&self, qubit: usize) -> Letter {
        assert!(qubit < self.n);
        Letter::from_bits(self.x >> qubit & 1 == 1, self.z >> qubit & 1 == 1)
    }

    pub fn set(&mut self, qubit: usize, letter: Letter) {
        assert!(qubit < self.n, "qubit {qubit} out of range for n={}", self.n);
        let bit = 1u64 << qubit;
        let (x, z) = match letter {
            Letter::I => (false, false),
            Letter::X => (true, false),
            Letter::Z => (false, true),
            Letter::Y => (true, true),
        };
        self.x = if x { self.x | bit } else { self.x & !bit };
        self.z = if z { self.z | bit } else { self.z & !bit };
    }

    fn check_dims(&self, other: &Self) -> Result<(), QecError> {
        if self.n != other.n {
            return Err(QecError::DimensionMismatch {
                expected: self.n,
                found: other.n,
            });
        }
        Ok(())
    }

    /// Product of two operators, phase discarded.
    pub fn multiply(&self, other: &Self) -> Result<Self, QecError> {
        self.check_dims(other)?;
        Ok(self.mul_unchecked(other))
    }

    #[inline]
    pub(crate) fn mul_unchecked(&self, other: &Self) -> Self {
        PauliOperator {
            n: self.n,
            x: self.x ^ other.x,
            z: self.z ^ other.z,
        }
    }

    pub fn commutes(&self, other: &Self) -> Result<bool, QecError> {
        self.check_dims(other)?;
        Ok(!self.anticommutes_unchecked(other))
    }

    #[inline]
    pub(crate) fn anticommutes_unchecked(&self, other: &Self) -> bool {
        ((self.x & other.z).count_ones() + (self.z & other.x).count_ones()) & 1 == 1
    }

    pub fn classify(&self) -> ErrorClass {
        let pure_z = (self.z & !self.x).count_ones() as usize;
        let pure_x = (self.x & !self.z).count_ones() as usize;
        ErrorClass::new(self.weight(), pure_z, pure_x)
    }

    /// Swaps X and Z on the qubits set in `mask` (Hadamard conjugation).
    pub fn hadamard(&self, mask: u64) -> Self {
        let mask = mask & width_mask(self.n);
        let swap = (self.x ^ self.z) & mask;
        PauliOperator {
            n: self.n,
            x: self.x ^ swap,
            z: self.z ^ swap,
        }
    }

    /// Qubit indices in the support, ascending.
    pub fn support_indices(&self) -> Vec<usize> {
        bits(self.support()).collect()
    }
}

/// Iterates set bit positions of `mask` in ascending order.
pub fn bits(mut mask: u64) -> impl Iterator<Item = usize> {
    std::iter::from_fn(move || {
        if mask == 0 {
            None
        } else {
            let b = mask.trailing_zeros() as usize;
            mask &= mask - 1;
            Some(b)
        }
    })
}

impl fmt::Display for PauliOperator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for q in 0..self.n {
            write!(f, "{}", self.letter(q).as_char())?;
        }
        Ok(())
    }
}

impl fmt::Debug for PauliOperator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Pauli({self})")
    }
}

impl FromStr for PauliOperator {
    type Err = QecError;

    /// Parses a string over `{I,X,Y,Z}`, qubit 0 leftmost.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let chars: Vec<char> = s.trim().chars().collect();
        if chars.len() > MAX_QUBITS {
            return Err(QecError::TooManyQubits(chars.len()));
        }
        let mut p = PauliOperator::identity(chars.len());
        for (q, c) in chars.into_iter().enumerate() {
            let letter = match c.to_ascii_uppercase() {
                'I' | '_' | '.' => Letter::I,
                'X' => Letter::X,
                'Y' => Letter::Y,
                'Z' => Letter::Z,
                other => return Err(QecError::BadPauliChar(other)),
            };
            p.set(q, letter);
        }
        Ok(p)
    }
}

impl serde::Serialize for PauliOperator {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> serde::Deserialize<'de> for PauliOperator {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn p(s: &str) -> PauliOperator {
        s.parse().unwrap()
    }

    #[test]
    fn single_qubit_products() {
        assert_eq!(p("X").multiply(&p("Z")).unwrap(), p("Y"));
        assert_eq!(p("Y").multiply(&p("Z")).unwrap(), p("X"));
        let a = p("XZYIZ");
        assert!(a.multiply(&a).unwrap().is_identity());
    }

    #[test]
    fn overlapping_supports() {
        let mut a = PauliOperator::identity(9);
        a.set(1, Letter::Z);
        a.set(2, Letter::Z);
        let mut b = PauliOperator::identity(9);
        b.set(2, Letter::Z);
        b.set(3, Letter::Z);
        assert_eq!(a.multiply(&b).unwrap(), p("IZIZIIIII"));
    }

    #[test]
    fn dimension_mismatch_is_an_error() {
        assert!(matches!(
            p("XX").multiply(&p("XXX")),
            Err(QecError::DimensionMismatch { .. })
        ));
        assert!(p("X").commutes(&p("ZZ")).is_err());
    }

    #[test]
    fn commutation() {
        assert!(!p("X").commutes(&p("Z")).unwrap());
        assert!(p("XI").commutes(&p("IZ")).unwrap());
        assert!(p("XX").commutes(&p("ZZ")).unwrap());
        assert!(!p("XY").commutes(&p("YY")).unwrap());
    }

    #[test]
    fn classify_examples() {
        // Z3 Y7 on 9 qubits (1-based labels)
        let e = p("IIZIIIYII");
        assert_eq!(e.classify(), ErrorClass::new(2, 1, 0));
        assert_eq!(p("XXIIX").classify(), ErrorClass::new(3, 0, 3));
        assert_eq!(PauliOperator::identity(5).classify(), ErrorClass::new(0, 0, 0));
    }

    #[test]
    fn classify_exhaustive_four_qubits() {
        for x in 0..16u64 {
            for z in 0..16u64 {
                let e = PauliOperator::from_masks(4, x, z).unwrap();
                let c = e.classify();
                let ys = (x & z).count_ones() as usize;
                assert_eq!(c.j, c.i + c.l + ys);
                assert_eq!(c.y_count(), ys);
            }
        }
    }

    #[test]
    fn labels() {
        assert_eq!(ErrorClass::new(2, 1, 1).label(), "XZ");
        assert_eq!(ErrorClass::new(3, 2, 0).label(), "ZZY");
        assert_eq!(ErrorClass::new(2, 0, 0).label(), "YY");
    }

    #[test]
    fn out_of_range_masks_rejected() {
        assert!(PauliOperator::from_masks(3, 0b1000, 0).is_err());
        assert!(PauliOperator::from_masks(64, u64::MAX, u64::MAX).is_ok());
    }

    #[test]
    fn render_and_parse() {
        let s = "IXYZZYXI";
        assert_eq!(p(s).to_string(), s);
        assert!("XQ".parse::<PauliOperator>().is_err());
    }

    fn arb_pauli(n: usize) -> impl Strategy<Value = PauliOperator> {
        let m = width_mask(n);
        (any::<u64>(), any::<u64>())
            .prop_map(move |(x, z)| PauliOperator::from_masks(n, x & m, z & m).unwrap())
    }

    proptest! {
        #[test]
        fn group_laws(a in arb_pauli(13), b in arb_pauli(13), c in arb_pauli(13)) {
            let ab = a.multiply(&b).unwrap();
            prop_assert_eq!(ab, b.multiply(&a).unwrap());
            prop_assert_eq!(ab.multiply(&c).unwrap(), a.multiply(&b.multiply(&c).unwrap()).unwrap());
            prop_assert_eq!(a.multiply(&PauliOperator::identity(13)).unwrap(), a);
        }

        #[test]
        fn commutation_is_symmetric_and_parity_additive(
            a in arb_pauli(25), b in arb_pauli(25), c in arb_pauli(25)
        ) {
            prop_assert_eq!(a.commutes(&b).unwrap(), b.commutes(&a).unwrap());
            let bc = b.multiply(&c).unwrap();
            let ab = a.commutes(&b).unwrap();
            let ac = a.commutes(&c).unwrap();
            prop_assert_eq!(a.commutes(&bc).unwrap(), !(ab ^ ac));
        }

        #[test]
        fn hadamard_is_an_involution_preserving_weight(a in arb_pauli(20), mask in any::<u64>()) {
            let h = a.hadamard(mask);
            prop_assert_eq!(h.weight(), a.weight());
            prop_assert_eq!(h.hadamard(mask), a);
        }
    }
}
