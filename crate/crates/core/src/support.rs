//! 0/1 vectors over cell indices, ordered componentwise.

use std::cmp::Ordering;
use std::fmt;

use crate::rational::Rational;

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct SupportVector {
    len: usize,
    words: Vec<u64>,
}

impl SupportVector {
    pub fn empty(len: usize) -> Self {
        SupportVector {
            len,
            words: vec![0; len.div_ceil(64)],
        }
    }

    pub fn full(len: usize) -> Self {
        let mut s = Self::empty(len);
        for i in 0..len {
            s.insert(i);
        }
        s
    }

    pub fn from_indices(len: usize, indices: impl IntoIterator<Item = usize>) -> Self {
        let mut s = Self::empty(len);
        for i in indices {
            s.insert(i);
        }
        s
    }

    pub fn from_bools(bits: &[bool]) -> Self {
        Self::from_indices(
            bits.len(),
            bits.iter().enumerate().filter(|(_, &b)| b).map(|(i, _)| i),
        )
    }

    /// The support of a vector: cells with a nonzero entry.
    pub fn of(values: &[Rational]) -> Self {
        Self::from_indices(
            values.len(),
            values
                .iter()
                .enumerate()
                .filter(|(_, v)| !v.is_zero())
                .map(|(i, _)| i),
        )
    }

    /// Parses a bitstring such as `0110`.
    pub fn parse_bits(bits: &str) -> Option<Self> {
        let mut s = Self::empty(bits.len());
        for (i, c) in bits.chars().enumerate() {
            match c {
                '1' => s.insert(i),
                '0' => {}
                _ => return None,
            }
        }
        Some(s)
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn contains(&self, i: usize) -> bool {
        i < self.len && self.words[i / 64] >> (i % 64) & 1 == 1
    }

    pub fn insert(&mut self, i: usize) {
        assert!(
            i < self.len,
            "index {i} out of range for support of length {}",
            self.len
        );
        self.words[i / 64] |= 1 << (i % 64);
    }

    pub fn remove(&mut self, i: usize) {
        if i < self.len {
            self.words[i / 64] &= !(1 << (i % 64));
        }
    }

    pub fn count(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.len).filter(move |&i| self.contains(i))
    }

    pub fn indices(&self) -> Vec<usize> {
        self.iter().collect()
    }

    pub fn complement(&self) -> Self {
        Self::from_indices(self.len, (0..self.len).filter(|&i| !self.contains(i)))
    }

    /// Componentwise disjunction.
    pub fn join(&self, other: &Self) -> Self {
        assert_eq!(self.len, other.len);
        SupportVector {
            len: self.len,
            words: self
                .words
                .iter()
                .zip(&other.words)
                .map(|(a, b)| a | b)
                .collect(),
        }
    }

    /// Componentwise conjunction.
    pub fn and(&self, other: &Self) -> Self {
        assert_eq!(self.len, other.len);
        SupportVector {
            len: self.len,
            words: self
                .words
                .iter()
                .zip(&other.words)
                .map(|(a, b)| a & b)
                .collect(),
        }
    }

    pub fn is_subset(&self, other: &Self) -> bool {
        self.len == other.len
            && self
                .words
                .iter()
                .zip(&other.words)
                .all(|(a, b)| a & !b == 0)
    }

    pub fn is_strict_subset(&self, other: &Self) -> bool {
        self.is_subset(other) && self != other
    }

    pub fn to_bits(&self) -> String {
        (0..self.len)
            .map(|i| if self.contains(i) { '1' } else { '0' })
            .collect()
    }

    /// Lexicographic order of the bitstrings; used for canonical output order.
    pub fn cmp_bits(&self, other: &Self) -> Ordering {
        self.to_bits().cmp(&other.to_bits())
    }
}

/// Componentwise order: `a <= b` iff every cell of `a` is in `b`.
impl PartialOrd for SupportVector {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        match (self.is_subset(other), other.is_subset(self)) {
            (true, true) => Some(Ordering::Equal),
            (true, false) => Some(Ordering::Less),
            (false, true) => Some(Ordering::Greater),
            (false, false) => None,
        }
    }
}

impl fmt::Debug for SupportVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "SupportVector({})", self.to_bits())
    }
}

impl fmt::Display for SupportVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_bits())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn order_and_lattice_ops() {
        let a = SupportVector::parse_bits("1100").unwrap();
        let b = SupportVector::parse_bits("0110").unwrap();
        assert_eq!(a.join(&b).to_bits(), "1110");
        assert_eq!(a.and(&b).to_bits(), "0100");
        assert_eq!(a.partial_cmp(&b), None);
        assert!(a < a.join(&b));
        assert_eq!(a.count(), 2);
        assert_eq!(a.complement().to_bits(), "0011");
    }

    #[test]
    fn wide_vectors() {
        let mut s = SupportVector::empty(130);
        s.insert(0);
        s.insert(64);
        s.insert(129);
        assert_eq!(s.indices(), vec![0, 64, 129]);
        assert_eq!(SupportVector::full(130).count(), 130);
        assert!(s.is_subset(&SupportVector::full(130)));
        assert!(!s.contains(130));
    }

    #[test]
    fn support_of_rationals() {
        let v = [Rational::ZERO, Rational::new(1, 2), Rational::new(-1, 3)];
        assert_eq!(SupportVector::of(&v).to_bits(), "011");
    }
}
