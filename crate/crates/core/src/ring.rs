//! Commutative ring interface shared by matrices and charpoly code.
//!
//! Values carry their own context (field/ring descriptor), so zero and one
//! are derived from an existing element rather than from a type-level unit.

use crate::field::Elem;

pub trait Ring: Clone + PartialEq + std::fmt::Debug + Send + Sync {
    fn zero_like(&self) -> Self;
    fn one_like(&self) -> Self;
    fn add(&self, rhs: &Self) -> Self;
    fn sub(&self, rhs: &Self) -> Self;
    fn mul(&self, rhs: &Self) -> Self;
    fn neg(&self) -> Self;
    fn is_zero(&self) -> bool;
    /// Multiplicative inverse when the element is a unit.
    fn try_inv(&self) -> Option<Self>;
}

impl Ring for Elem {
    fn zero_like(&self) -> Self {
        self.field().zero()
    }
    fn one_like(&self) -> Self {
        self.field().one()
    }
    fn add(&self, rhs: &Self) -> Self {
        Elem::add(self, rhs)
    }
    fn sub(&self, rhs: &Self) -> Self {
        Elem::sub(self, rhs)
    }
    fn mul(&self, rhs: &Self) -> Self {
        Elem::mul(self, rhs)
    }
    fn neg(&self) -> Self {
        Elem::neg(self)
    }
    fn is_zero(&self) -> bool {
        Elem::is_zero(self)
    }
    fn try_inv(&self) -> Option<Self> {
        Elem::inv(self).ok()
    }
}

/// `k * one` for an integer `k`, in the ring of `sample`.
pub fn from_int<R: Ring>(sample: &R, k: i128) -> R {
    let one = sample.one_like();
    let mut acc = sample.zero_like();
    let mut b = if k < 0 { one.neg() } else { one };
    let mut n = k.unsigned_abs();
    while n > 0 {
        if n & 1 == 1 {
            acc = acc.add(&b);
        }
        b = b.add(&b);
        n >>= 1;
    }
    acc
}
