use num_integer::Integer;
use num_traits::ToPrimitive;
use rand::Rng;

use super::{make_extension, ArithError, ExtElem, ExtField, Field, FiniteField, Rational};

/// Deterministic trial division; census primes are small.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n < 4 {
        return true;
    }
    if n % 2 == 0 {
        return false;
    }
    let mut d = 3u64;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 2;
    }
    true
}

/// The prime field `F_p`. Elements are residues in `[0, p)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct PrimeField {
    p: u64,
}

impl PrimeField {
    pub fn new(p: u64) -> Result<Self, ArithError> {
        if !is_prime(p) || p >= 1 << 31 {
            return Err(ArithError::NotPrime(p));
        }
        Ok(PrimeField { p })
    }

    pub fn modulus(&self) -> u64 {
        self.p
    }

    pub fn reduce(&self, v: i64) -> u64 {
        v.rem_euclid(self.p as i64) as u64
    }

    /// Symmetric representative in `(-p/2, p/2]`.
    pub fn signed(&self, a: u64) -> i64 {
        if a > self.p / 2 {
            a as i64 - self.p as i64
        } else {
            a as i64
        }
    }
}

impl Field for PrimeField {
    type Elem = u64;

    fn zero(&self) -> u64 {
        0
    }

    fn one(&self) -> u64 {
        1
    }

    fn is_zero(&self, a: &u64) -> bool {
        *a == 0
    }

    fn add(&self, a: &u64, b: &u64) -> u64 {
        let s = a + b;
        if s >= self.p {
            s - self.p
        } else {
            s
        }
    }

    fn sub(&self, a: &u64, b: &u64) -> u64 {
        if a >= b {
            a - b
        } else {
            a + self.p - b
        }
    }

    fn neg(&self, a: &u64) -> u64 {
        if *a == 0 {
            0
        } else {
            self.p - a
        }
    }

    fn mul(&self, a: &u64, b: &u64) -> u64 {
        a * b % self.p
    }

    fn inv(&self, a: &u64) -> Result<u64, ArithError> {
        if *a == 0 {
            return Err(ArithError::DivisionByZero);
        }
        let (mut r0, mut r1) = (self.p as i64, *a as i64);
        let (mut t0, mut t1) = (0i64, 1i64);
        while r1 != 0 {
            let q = r0 / r1;
            (r0, r1) = (r1, r0 - q * r1);
            (t0, t1) = (t1, t0 - q * t1);
        }
        Ok(self.reduce(t0))
    }

    fn from_i64(&self, n: i64) -> u64 {
        self.reduce(n)
    }

    fn from_rational(&self, r: &Rational) -> Result<u64, ArithError> {
        let p = num_bigint::BigInt::from(self.p);
        let num = r.numer().mod_floor(&p).to_u64().unwrap_or(0);
        let den = r.denom().mod_floor(&p).to_u64().unwrap_or(0);
        if den == 0 {
            return Err(ArithError::NotRepresentable { value: r.to_string(), field: self.name() });
        }
        Ok(self.mul(&num, &self.inv(&den)?))
    }

    fn characteristic(&self) -> u64 {
        self.p
    }

    fn format_elem(&self, a: &u64) -> String {
        a.to_string()
    }

    fn name(&self) -> String {
        format!("F_{}", self.p)
    }
}

impl FiniteField for PrimeField {
    fn prime(&self) -> u64 {
        self.p
    }

    fn degree(&self) -> usize {
        1
    }

    fn random_elem<R: Rng + ?Sized>(&self, rng: &mut R) -> u64 {
        rng.gen_range(0..self.p)
    }

    fn as_ext(&self) -> ExtField {
        make_extension(self.p, 1).expect("prime checked at construction")
    }

    fn lift(&self, a: &u64, target: &ExtField) -> Result<ExtElem, ArithError> {
        if target.prime() != self.p {
            return Err(ArithError::NoEmbedding { from: self.name(), into: target.name() });
        }
        Ok(target.from_base(*a))
    }

    fn pth_root(&self, a: &u64) -> u64 {
        *a
    }

    fn elements(&self) -> Vec<u64> {
        (0..self.p).collect()
    }
}
