//! Commutative semirings in which empirical models take their values.

use std::fmt::Debug;

use crate::rational::Rational;

/// A commutative semiring `(R, +, 0, ·, 1)` with decidable equality.
pub trait Semiring: Clone + PartialEq + Debug {
    fn zero() -> Self;
    fn one() -> Self;
    fn plus(&self, other: &Self) -> Self;
    fn times(&self, other: &Self) -> Self;

    fn is_zero(&self) -> bool {
        *self == Self::zero()
    }

    fn sum<'a, I>(iter: I) -> Self
    where
        I: IntoIterator<Item = &'a Self>,
        Self: 'a,
    {
        iter.into_iter().fold(Self::zero(), |acc, x| acc.plus(x))
    }
}

/// Nonnegative rationals under ordinary arithmetic (probabilistic models).
impl Semiring for Rational {
    fn zero() -> Self {
        Rational::ZERO
    }
    fn one() -> Self {
        Rational::ONE
    }
    fn plus(&self, other: &Self) -> Self {
        self + other
    }
    fn times(&self, other: &Self) -> Self {
        self * other
    }
    fn is_zero(&self) -> bool {
        Rational::is_zero(self)
    }
}

/// Booleans with disjunction and conjunction (possibilistic models).
impl Semiring for bool {
    fn zero() -> Self {
        false
    }
    fn one() -> Self {
        true
    }
    fn plus(&self, other: &Self) -> Self {
        *self || *other
    }
    fn times(&self, other: &Self) -> Self {
        *self && *other
    }
}

/// The unique semiring homomorphism from the nonnegative rationals to the
/// booleans.
pub fn possibility(value: &Rational) -> bool {
    value.is_positive()
}
