//! Exact coefficient arithmetic.
//!
//! Fields are context objects: an element carries no reference to the field
//! it lives in, every operation goes through the context. This keeps prime
//! field residues as plain `u64` and lets extension fields share one
//! reduction polynomial behind an `Arc`.

mod ext;
mod prime;
mod rational;

use std::fmt;
use std::hash::Hash;

use num_bigint::BigUint;
use rand::Rng;

pub use ext::{make_extension, ExtElem, ExtField};
pub use prime::{is_prime, PrimeField};
pub use rational::{Rational, Rationals};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ArithError {
    #[error("division by zero")]
    DivisionByZero,
    #[error("{0} is not a prime")]
    NotPrime(u64),
    #[error("extension degree must be at least 1")]
    ZeroDegree,
    #[error("mixed field contexts: {0} and {1}")]
    ContextMismatch(String, String),
    #[error("{value} has no image in {field}")]
    NotRepresentable { value: String, field: String },
    #[error("{from} does not embed into {into}")]
    NoEmbedding { from: String, into: String },
}

/// A field, given as a context object carrying whatever data the elements
/// need (modulus, reduction polynomial).
pub trait Field: Clone + fmt::Debug + PartialEq + Send + Sync + 'static {
    type Elem: Clone + PartialEq + Eq + Hash + Ord + fmt::Debug + Send + Sync + 'static;

    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn is_zero(&self, a: &Self::Elem) -> bool;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn neg(&self, a: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn inv(&self, a: &Self::Elem) -> Result<Self::Elem, ArithError>;
    fn from_i64(&self, n: i64) -> Self::Elem;
    fn from_rational(&self, r: &Rational) -> Result<Self::Elem, ArithError>;
    /// 0 for characteristic zero.
    fn characteristic(&self) -> u64;
    fn format_elem(&self, a: &Self::Elem) -> String;
    fn name(&self) -> String;

    fn is_one(&self, a: &Self::Elem) -> bool {
        *a == self.one()
    }

    fn div(&self, a: &Self::Elem, b: &Self::Elem) -> Result<Self::Elem, ArithError> {
        Ok(self.mul(a, &self.inv(b)?))
    }

    fn pow(&self, a: &Self::Elem, mut n: u64) -> Self::Elem {
        let mut base = a.clone();
        let mut acc = self.one();
        while n > 0 {
            if n & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            base = self.mul(&base, &base);
            n >>= 1;
        }
        acc
    }

    fn pow_big(&self, a: &Self::Elem, n: &BigUint) -> Self::Elem {
        let mut acc = self.one();
        for i in (0..n.bits()).rev() {
            acc = self.mul(&acc, &acc);
            if n.bit(i) {
                acc = self.mul(&acc, a);
            }
        }
        acc
    }

    /// `n` as an element of the field (the image of the integer `n`).
    fn from_u64(&self, n: u64) -> Self::Elem {
        self.from_i64(n as i64)
    }

    fn check_same(&self, other: &Self) -> Result<(), ArithError> {
        if self == other {
            Ok(())
        } else {
            Err(ArithError::ContextMismatch(self.name(), other.name()))
        }
    }
}

/// Finite fields `F_{p^e}`.
pub trait FiniteField: Field {
    fn prime(&self) -> u64;
    /// Degree over the prime field.
    fn degree(&self) -> usize;
    fn random_elem<R: Rng + ?Sized>(&self, rng: &mut R) -> Self::Elem;
    /// The same field presented as an extension of `F_p` (degree 1 for prime fields).
    fn as_ext(&self) -> ExtField;
    /// Image of `a` under the canonical embedding into a superfield.
    fn lift(&self, a: &Self::Elem, target: &ExtField) -> Result<ExtElem, ArithError>;

    fn order(&self) -> BigUint {
        BigUint::from(self.prime()).pow(self.degree() as u32)
    }

    /// `a^p`.
    fn frobenius(&self, a: &Self::Elem) -> Self::Elem {
        self.pow(a, self.prime())
    }

    /// The unique `b` with `b^p = a`.
    fn pth_root(&self, a: &Self::Elem) -> Self::Elem {
        let mut b = a.clone();
        for _ in 1..self.degree() {
            b = self.frobenius(&b);
        }
        b
    }

    /// All elements, in the field's canonical order. Only sensible for small fields.
    fn elements(&self) -> Vec<Self::Elem>;
}

/// A field element bundled with its context, for callers that want the
/// context checks done per operation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Value<F: Field> {
    pub field: F,
    pub elem: F::Elem,
}

impl<F: Field> Value<F> {
    pub fn new(field: &F, elem: F::Elem) -> Self {
        Value { field: field.clone(), elem }
    }

    fn same(&self, other: &Self) -> Result<(), ArithError> {
        self.field.check_same(&other.field)
    }

    pub fn try_add(&self, other: &Self) -> Result<Self, ArithError> {
        self.same(other)?;
        Ok(Value::new(&self.field, self.field.add(&self.elem, &other.elem)))
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self, ArithError> {
        self.same(other)?;
        Ok(Value::new(&self.field, self.field.sub(&self.elem, &other.elem)))
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self, ArithError> {
        self.same(other)?;
        Ok(Value::new(&self.field, self.field.mul(&self.elem, &other.elem)))
    }

    pub fn try_div(&self, other: &Self) -> Result<Self, ArithError> {
        self.same(other)?;
        Ok(Value::new(&self.field, self.field.div(&self.elem, &other.elem)?))
    }

    pub fn inverse(&self) -> Result<Self, ArithError> {
        Ok(Value::new(&self.field, self.field.inv(&self.elem)?))
    }
}

impl<F: Field> fmt::Display for Value<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.field.format_elem(&self.elem))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn mixed_contexts_are_rejected() {
        let f7 = PrimeField::new(7).unwrap();
        let f11 = PrimeField::new(11).unwrap();
        let a = Value::new(&f7, 3);
        let b = Value::new(&f11, 3);
        assert!(matches!(a.try_add(&b), Err(ArithError::ContextMismatch(_, _))));
        assert_eq!(a.inverse().unwrap().elem, 5);
        assert_eq!(Value::new(&f7, 0).inverse(), Err(ArithError::DivisionByZero));
        assert_eq!(a.try_div(&Value::new(&f7, 0)), Err(ArithError::DivisionByZero));
    }
}
