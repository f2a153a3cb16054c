use std::fmt;

use num_bigint::BigUint;

use crate::arith::{ArithError, Field};

/// Dense univariate polynomial over a field context, low degree first.
/// The coefficient vector never ends in a zero.
#[derive(Clone, PartialEq, Eq)]
pub struct UniPoly<F: Field> {
    field: F,
    coeffs: Vec<F::Elem>,
}

impl<F: Field> fmt::Debug for UniPoly<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_text("z"))
    }
}

impl<F: Field> UniPoly<F> {
    pub fn new(field: &F, coeffs: Vec<F::Elem>) -> Self {
        let mut p = UniPoly { field: field.clone(), coeffs };
        p.trim();
        p
    }

    pub fn from_i64(field: &F, coeffs: &[i64]) -> Self {
        Self::new(field, coeffs.iter().map(|&c| field.from_i64(c)).collect())
    }

    fn trim(&mut self) {
        while let Some(c) = self.coeffs.last() {
            if self.field.is_zero(c) {
                self.coeffs.pop();
            } else {
                break;
            }
        }
    }

    pub fn zero(field: &F) -> Self {
        UniPoly { field: field.clone(), coeffs: Vec::new() }
    }

    pub fn one(field: &F) -> Self {
        Self::constant(field, field.one())
    }

    pub fn constant(field: &F, c: F::Elem) -> Self {
        Self::new(field, vec![c])
    }

    /// `c * z^n`.
    pub fn monomial(field: &F, c: F::Elem, n: usize) -> Self {
        let mut coeffs = vec![field.zero(); n];
        coeffs.push(c);
        Self::new(field, coeffs)
    }

    pub fn x(field: &F) -> Self {
        Self::monomial(field, field.one(), 1)
    }

    /// `z - a`.
    pub fn linear(field: &F, a: &F::Elem) -> Self {
        Self::new(field, vec![field.neg(a), field.one()])
    }

    /// `prod (z - a_i)`.
    pub fn from_roots(field: &F, roots: &[F::Elem]) -> Self {
        roots.iter().fold(Self::one(field), |acc, a| acc.mul(&Self::linear(field, a)))
    }

    pub fn field(&self) -> &F {
        &self.field
    }

    pub fn coeffs(&self) -> &[F::Elem] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<F::Elem> {
        self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.len() <= 1
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn coeff(&self, i: usize) -> F::Elem {
        self.coeffs.get(i).cloned().unwrap_or_else(|| self.field.zero())
    }

    pub fn lead(&self) -> F::Elem {
        self.coeffs.last().cloned().unwrap_or_else(|| self.field.zero())
    }

    pub fn is_monic(&self) -> bool {
        self.coeffs.last().is_some_and(|c| self.field.is_one(c))
    }

    pub fn check_same(&self, other: &Self) -> Result<(), ArithError> {
        self.field.check_same(&other.field)
    }

    pub fn add(&self, other: &Self) -> Self {
        let f = &self.field;
        let n = self.coeffs.len().max(other.coeffs.len());
        let coeffs = (0..n).map(|i| f.add(&self.coeff(i), &other.coeff(i))).collect();
        Self::new(f, coeffs)
    }

    pub fn sub(&self, other: &Self) -> Self {
        let f = &self.field;
        let n = self.coeffs.len().max(other.coeffs.len());
        let coeffs = (0..n).map(|i| f.sub(&self.coeff(i), &other.coeff(i))).collect();
        Self::new(f, coeffs)
    }

    pub fn neg(&self) -> Self {
        let f = &self.field;
        UniPoly { field: f.clone(), coeffs: self.coeffs.iter().map(|c| f.neg(c)).collect() }
    }

    pub fn mul(&self, other: &Self) -> Self {
        let f = &self.field;
        if self.is_zero() || other.is_zero() {
            return Self::zero(f);
        }
        let mut out = vec![f.zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if f.is_zero(a) {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] = f.add(&out[i + j], &f.mul(a, b));
            }
        }
        Self::new(f, out)
    }

    pub fn scale(&self, c: &F::Elem) -> Self {
        let f = &self.field;
        Self::new(f, self.coeffs.iter().map(|a| f.mul(a, c)).collect())
    }

    pub fn pow(&self, n: u32) -> Self {
        let mut acc = Self::one(&self.field);
        for _ in 0..n {
            acc = acc.mul(self);
        }
        acc
    }

    pub fn try_add(&self, other: &Self) -> Result<Self, ArithError> {
        self.check_same(other)?;
        Ok(self.add(other))
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self, ArithError> {
        self.check_same(other)?;
        Ok(self.mul(other))
    }

    /// Scale to leading coefficient 1. The zero polynomial is returned unchanged.
    pub fn monic(&self) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        let inv = self.field.inv(&self.lead()).expect("nonzero lead");
        self.scale(&inv)
    }

    pub fn divrem(&self, divisor: &Self) -> Result<(Self, Self), ArithError> {
        let f = &self.field;
        let dd = divisor.degree().ok_or(ArithError::DivisionByZero)?;
        let mut rem = self.coeffs.clone();
        if rem.len() <= dd {
            return Ok((Self::zero(f), self.clone()));
        }
        let lead_inv = f.inv(&divisor.lead())?;
        let mut quot = vec![f.zero(); rem.len() - dd];
        for top in (dd..rem.len()).rev() {
            let c = f.mul(&rem[top], &lead_inv);
            if f.is_zero(&c) {
                continue;
            }
            for (j, dc) in divisor.coeffs.iter().enumerate() {
                let idx = top - dd + j;
                rem[idx] = f.sub(&rem[idx], &f.mul(&c, dc));
            }
            quot[top - dd] = c;
        }
        rem.truncate(dd);
        Ok((Self::new(f, quot), Self::new(f, rem)))
    }

    pub fn rem(&self, divisor: &Self) -> Result<Self, ArithError> {
        Ok(self.divrem(divisor)?.1)
    }

    /// Exact quotient; errors if the division leaves a remainder.
    pub fn div_exact(&self, divisor: &Self) -> Result<Self, PolyError> {
        let (q, r) = self.divrem(divisor)?;
        if !r.is_zero() {
            return Err(PolyError::NotDivisible);
        }
        Ok(q)
    }

    /// Monic gcd.
    pub fn gcd(&self, other: &Self) -> Result<Self, PolyError> {
        if self.is_zero() && other.is_zero() {
            return Err(PolyError::BothZero);
        }
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let r = a.rem(&b)?;
            a = b;
            b = r;
        }
        Ok(a.monic())
    }

    /// `(g, s, t)` with `g` monic and `s*self + t*other = g`.
    pub fn ext_gcd(&self, other: &Self) -> Result<(Self, Self, Self), PolyError> {
        let f = &self.field;
        if self.is_zero() && other.is_zero() {
            return Err(PolyError::BothZero);
        }
        let (mut r0, mut r1) = (self.clone(), other.clone());
        let (mut s0, mut s1) = (Self::one(f), Self::zero(f));
        let (mut t0, mut t1) = (Self::zero(f), Self::one(f));
        while !r1.is_zero() {
            let (q, r) = r0.divrem(&r1)?;
            let s = s0.sub(&q.mul(&s1));
            let t = t0.sub(&q.mul(&t1));
            r0 = r1;
            r1 = r;
            s0 = s1;
            s1 = s;
            t0 = t1;
            t1 = t;
        }
        let inv = f.inv(&r0.lead())?;
        Ok((r0.scale(&inv), s0.scale(&inv), t0.scale(&inv)))
    }

    pub fn derivative(&self) -> Self {
        let f = &self.field;
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, c)| f.mul(c, &f.from_u64(i as u64)))
            .collect();
        Self::new(f, coeffs)
    }

    /// The `s`-th Hasse derivative: `z^n -> binom(n, s) z^(n-s)`. Negative orders give zero.
    pub fn hasse(&self, s: i64) -> Self {
        let f = &self.field;
        if s < 0 {
            return Self::zero(f);
        }
        let s = s as usize;
        if s >= self.coeffs.len() {
            return Self::zero(f);
        }
        let p = f.characteristic();
        let coeffs = (s..self.coeffs.len())
            .map(|n| f.mul(&self.coeffs[n], &binomial_in(f, n as u64, s as u64, p)))
            .collect();
        Self::new(f, coeffs)
    }

    pub fn eval(&self, x: &F::Elem) -> F::Elem {
        let f = &self.field;
        self.coeffs.iter().rev().fold(f.zero(), |acc, c| f.add(&f.mul(&acc, x), c))
    }

    /// `self(z + a)`.
    pub fn shift(&self, a: &F::Elem) -> Self {
        let f = &self.field;
        let lin = Self::new(f, vec![a.clone(), f.one()]);
        self.coeffs.iter().rev().fold(Self::zero(f), |acc, c| acc.mul(&lin).add(&Self::constant(f, c.clone())))
    }

    /// `self(g(z))`.
    pub fn compose(&self, g: &Self) -> Self {
        let f = &self.field;
        self.coeffs.iter().rev().fold(Self::zero(f), |acc, c| acc.mul(g).add(&Self::constant(f, c.clone())))
    }

    /// Order of vanishing at `a`; `None` for the zero polynomial.
    pub fn order_at(&self, a: &F::Elem) -> Option<usize> {
        if self.is_zero() {
            return None;
        }
        let lin = Self::linear(&self.field, a);
        let mut cur = self.clone();
        let mut e = 0;
        loop {
            let (q, r) = cur.divrem(&lin).expect("linear divisor");
            if !r.is_zero() {
                return Some(e);
            }
            cur = q;
            e += 1;
        }
    }

    pub fn mul_mod(&self, other: &Self, m: &Self) -> Result<Self, ArithError> {
        self.mul(other).rem(m)
    }

    pub fn pow_mod(&self, n: &BigUint, m: &Self) -> Result<Self, ArithError> {
        let mut acc = Self::one(&self.field).rem(m)?;
        let base = self.rem(m)?;
        for i in (0..n.bits()).rev() {
            acc = acc.mul_mod(&acc, m)?;
            if n.bit(i) {
                acc = acc.mul_mod(&base, m)?;
            }
        }
        Ok(acc)
    }

    pub fn map<G: Field>(&self, target: &G, f: impl Fn(&F::Elem) -> G::Elem) -> UniPoly<G> {
        UniPoly::new(target, self.coeffs.iter().map(f).collect())
    }

    /// Key for a deterministic total order: degree first, then coefficients from the top.
    pub fn sort_key(&self) -> (usize, Vec<F::Elem>) {
        (self.coeffs.len(), self.coeffs.iter().rev().cloned().collect())
    }

    pub fn to_text(&self, var: &str) -> String {
        let f = &self.field;
        let mut parts: Vec<String> = Vec::new();
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if f.is_zero(c) {
                continue;
            }
            let cs = f.format_elem(c);
            let mono = match i {
                0 => String::new(),
                1 => var.to_string(),
                _ => format!("{var}^{i}"),
            };
            parts.push(match (cs.as_str(), mono.is_empty()) {
                (_, true) => cs,
                ("1", false) => mono,
                ("-1", false) => format!("-{mono}"),
                (_, false) if cs.contains(['+', ' ']) || cs[1..].contains('-') => format!("({cs})*{mono}"),
                (_, false) => format!("{cs}*{mono}"),
            });
        }
        if parts.is_empty() {
            return "0".to_string();
        }
        let mut out = parts[0].clone();
        for p in &parts[1..] {
            match p.strip_prefix('-') {
                Some(rest) => {
                    out.push_str(" - ");
                    out.push_str(rest);
                }
                None => {
                    out.push_str(" + ");
                    out.push_str(p);
                }
            }
        }
        out
    }
}

/// `binom(n, k)` as a field element, via Lucas' theorem in positive characteristic.
pub fn binomial_in<F: Field>(f: &F, n: u64, k: u64, p: u64) -> F::Elem {
    if k > n {
        return f.zero();
    }
    if p == 0 {
        let mut num = num_bigint::BigInt::from(1);
        let mut den = num_bigint::BigInt::from(1);
        for i in 0..k {
            num *= n - i;
            den *= i + 1;
        }
        let r = crate::arith::Rational::new(num, den).expect("nonzero");
        return f.from_rational(&r).expect("integer");
    }
    let (mut n, mut k) = (n, k);
    let mut acc = f.one();
    while n > 0 || k > 0 {
        let (ni, ki) = (n % p, k % p);
        if ki > ni {
            return f.zero();
        }
        let mut b = 1u64;
        for i in 0..ki {
            b = b * (ni - i) % p;
        }
        let mut d = 1u64;
        for i in 1..=ki {
            d = d * i % p;
        }
        let bf = f.from_u64(b);
        acc = f.mul(&acc, &f.div(&bf, &f.from_u64(d)).expect("unit mod p"));
        n /= p;
        k /= p;
    }
    acc
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum PolyError {
    #[error(transparent)]
    Arith(#[from] ArithError),
    #[error("gcd of two zero polynomials is undefined")]
    BothZero,
    #[error("zero polynomial has no factorization")]
    ZeroPolynomial,
    #[error("division is not exact")]
    NotDivisible,
    #[error("unknown variable {0:?}")]
    UnknownVariable(String),
    #[error("mismatched polynomial rings: {0}")]
    RingMismatch(String),
    #[error("profile must have total at least 1")]
    EmptyProfile,
    #[error("form is not homogeneous")]
    NotHomogeneous,
}
