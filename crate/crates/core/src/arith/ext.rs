use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, Mutex, OnceLock};

use num_integer::Integer;
use num_traits::ToPrimitive;
use rand::Rng;
use smallvec::SmallVec;

use super::{is_prime, ArithError, Field, FiniteField, PrimeField, Rational};
use crate::poly::{roots, UniPoly};

/// Coordinates of an extension field element in the power basis `1, t, .., t^(e-1)`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ExtElem(pub SmallVec<[u64; 4]>);

impl fmt::Debug for ExtElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.0.as_slice())
    }
}

struct ExtInner {
    p: u64,
    e: usize,
    /// Monic, length `e + 1`, low degree first.
    modulus: Vec<u64>,
}

/// `F_{p^e} = F_p[t]/(m(t))`.
#[derive(Clone)]
pub struct ExtField {
    inner: Arc<ExtInner>,
}

impl PartialEq for ExtField {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.inner, &other.inner)
            || (self.inner.p == other.inner.p && self.inner.modulus == other.inner.modulus)
    }
}

impl Eq for ExtField {}

impl fmt::Debug for ExtField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} mod {}", self.name(), self.modulus_string())
    }
}

fn ext_cache() -> &'static Mutex<HashMap<(u64, usize), ExtField>> {
    static CACHE: OnceLock<Mutex<HashMap<(u64, usize), ExtField>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

type EmbedKey = (u64, Vec<u64>, Vec<u64>);

fn embed_cache() -> &'static Mutex<HashMap<EmbedKey, ExtElem>> {
    static CACHE: OnceLock<Mutex<HashMap<EmbedKey, ExtElem>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

/// `F_{p^e}` presented by the smallest monic irreducible of degree `e`, where
/// monic polynomials are ordered by the integer `c_0 + c_1 p + .. + c_{e-1} p^(e-1)`.
/// Contexts are cached, so repeated calls return the same field.
pub fn make_extension(p: u64, e: usize) -> Result<ExtField, ArithError> {
    if !is_prime(p) || p >= 1 << 31 {
        return Err(ArithError::NotPrime(p));
    }
    if e == 0 {
        return Err(ArithError::ZeroDegree);
    }
    if let Some(f) = ext_cache().lock().unwrap().get(&(p, e)) {
        return Ok(f.clone());
    }
    let modulus = smallest_irreducible(p, e);
    let field = ExtField { inner: Arc::new(ExtInner { p, e, modulus }) };
    let mut cache = ext_cache().lock().unwrap();
    Ok(cache.entry((p, e)).or_insert(field).clone())
}

fn smallest_irreducible(p: u64, e: usize) -> Vec<u64> {
    let mut coeffs = vec![0u64; e];
    loop {
        let mut f = coeffs.clone();
        f.push(1);
        if fpx::is_irreducible(&f, p) {
            return f;
        }
        // increment the base-p counter, low digit first
        let mut i = 0;
        loop {
            coeffs[i] += 1;
            if coeffs[i] < p {
                break;
            }
            coeffs[i] = 0;
            i += 1;
            assert!(i < e, "irreducible polynomials of every degree exist");
        }
    }
}

impl ExtField {
    pub fn ext_degree(&self) -> usize {
        self.inner.e
    }

    /// Defining polynomial, low degree first.
    pub fn modulus(&self) -> &[u64] {
        &self.inner.modulus
    }

    pub fn modulus_string(&self) -> String {
        let m = &self.inner.modulus;
        let mut terms = Vec::new();
        for (i, &c) in m.iter().enumerate().rev() {
            if c == 0 {
                continue;
            }
            terms.push(monomial_text(c, i));
        }
        terms.join("+")
    }

    pub fn base(&self) -> PrimeField {
        PrimeField::new(self.inner.p).expect("checked prime")
    }

    pub fn from_base(&self, a: u64) -> ExtElem {
        let mut v: SmallVec<[u64; 4]> = SmallVec::from_elem(0, self.inner.e);
        v[0] = a % self.inner.p;
        ExtElem(v)
    }

    /// The class of `t`.
    pub fn generator(&self) -> ExtElem {
        let mut v: SmallVec<[u64; 4]> = SmallVec::from_elem(0, self.inner.e);
        if self.inner.e == 1 {
            v[0] = (self.inner.p - self.inner.modulus[0]) % self.inner.p;
        } else {
            v[1] = 1;
        }
        ExtElem(v)
    }

    pub fn from_coords(&self, coords: &[u64]) -> ExtElem {
        let mut v: SmallVec<[u64; 4]> = SmallVec::from_elem(0, self.inner.e);
        let reduced = fpx::rem(&coords.iter().map(|c| c % self.inner.p).collect::<Vec<_>>(), &self.inner.modulus, self.inner.p);
        for (i, c) in reduced.into_iter().enumerate() {
            v[i] = c;
        }
        ExtElem(v)
    }

    /// The field of absolute degree `e * d`.
    pub fn extend(&self, d: usize) -> Result<ExtField, ArithError> {
        make_extension(self.inner.p, self.inner.e * d)
    }

    /// Image of the generator `t` of `self` in `target`: the smallest root of
    /// `self`'s modulus in `target`. Cached per pair.
    pub fn embedding_root(&self, target: &ExtField) -> Result<ExtElem, ArithError> {
        let no = || ArithError::NoEmbedding { from: self.name(), into: target.name() };
        if self.inner.p != target.inner.p || target.inner.e % self.inner.e != 0 {
            return Err(no());
        }
        let key = (self.inner.p, self.inner.modulus.clone(), target.inner.modulus.clone());
        if let Some(r) = embed_cache().lock().unwrap().get(&key) {
            return Ok(r.clone());
        }
        let coeffs: Vec<ExtElem> = self.inner.modulus.iter().map(|&c| target.from_base(c)).collect();
        let m = UniPoly::new(target, coeffs);
        let rs = roots(&m).map_err(|_| no())?;
        let r = rs.into_iter().min().ok_or_else(no)?;
        embed_cache().lock().unwrap().insert(key, r.clone());
        Ok(r)
    }

    fn reduce_product(&self, prod: Vec<u64>) -> ExtElem {
        let p = self.inner.p;
        let e = self.inner.e;
        let m = &self.inner.modulus;
        let mut prod = prod;
        for i in (e..prod.len()).rev() {
            let c = prod[i];
            if c == 0 {
                continue;
            }
            prod[i] = 0;
            for j in 0..e {
                prod[i - e + j] = (prod[i - e + j] + (p - m[j]) * c) % p;
            }
        }
        let mut v: SmallVec<[u64; 4]> = SmallVec::from_elem(0, e);
        for (i, c) in prod.into_iter().take(e).enumerate() {
            v[i] = c;
        }
        ExtElem(v)
    }
}

fn monomial_text(c: u64, i: usize) -> String {
    match (c, i) {
        (c, 0) => c.to_string(),
        (1, 1) => "t".to_string(),
        (1, i) => format!("t^{i}"),
        (c, 1) => format!("{c}*t"),
        (c, i) => format!("{c}*t^{i}"),
    }
}

impl Field for ExtField {
    type Elem = ExtElem;

    fn zero(&self) -> ExtElem {
        ExtElem(SmallVec::from_elem(0, self.inner.e))
    }

    fn one(&self) -> ExtElem {
        self.from_base(1)
    }

    fn is_zero(&self, a: &ExtElem) -> bool {
        a.0.iter().all(|&c| c == 0)
    }

    fn add(&self, a: &ExtElem, b: &ExtElem) -> ExtElem {
        let p = self.inner.p;
        ExtElem(a.0.iter().zip(b.0.iter()).map(|(x, y)| (x + y) % p).collect())
    }

    fn sub(&self, a: &ExtElem, b: &ExtElem) -> ExtElem {
        let p = self.inner.p;
        ExtElem(a.0.iter().zip(b.0.iter()).map(|(x, y)| (x + p - y) % p).collect())
    }

    fn neg(&self, a: &ExtElem) -> ExtElem {
        let p = self.inner.p;
        ExtElem(a.0.iter().map(|x| (p - x) % p).collect())
    }

    fn mul(&self, a: &ExtElem, b: &ExtElem) -> ExtElem {
        let p = self.inner.p;
        let e = self.inner.e;
        if e == 1 {
            return ExtElem(SmallVec::from_elem(a.0[0] * b.0[0] % p, 1));
        }
        let mut prod = vec![0u64; 2 * e - 1];
        for (i, &x) in a.0.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in b.0.iter().enumerate() {
                prod[i + j] = (prod[i + j] + x * y) % p;
            }
        }
        self.reduce_product(prod)
    }

    fn inv(&self, a: &ExtElem) -> Result<ExtElem, ArithError> {
        if self.is_zero(a) {
            return Err(ArithError::DivisionByZero);
        }
        let inv = fpx::inverse_mod(&a.0, &self.inner.modulus, self.inner.p).ok_or(ArithError::DivisionByZero)?;
        Ok(self.from_coords(&inv))
    }

    fn from_i64(&self, n: i64) -> ExtElem {
        self.from_base(n.rem_euclid(self.inner.p as i64) as u64)
    }

    fn from_rational(&self, r: &Rational) -> Result<ExtElem, ArithError> {
        let p = num_bigint::BigInt::from(self.inner.p);
        let num = r.numer().mod_floor(&p).to_u64().unwrap_or(0);
        let den = r.denom().mod_floor(&p).to_u64().unwrap_or(0);
        if den == 0 {
            return Err(ArithError::NotRepresentable { value: r.to_string(), field: self.name() });
        }
        let base = self.base();
        Ok(self.from_base(base.mul(&num, &base.inv(&den)?)))
    }

    fn characteristic(&self) -> u64 {
        self.inner.p
    }

    fn format_elem(&self, a: &ExtElem) -> String {
        let mut terms = Vec::new();
        for (i, &c) in a.0.iter().enumerate().rev() {
            if c != 0 {
                terms.push(monomial_text(c, i));
            }
        }
        if terms.is_empty() {
            "0".to_string()
        } else {
            terms.join("+")
        }
    }

    fn name(&self) -> String {
        format!("F_{}^{}", self.inner.p, self.inner.e)
    }
}

impl FiniteField for ExtField {
    fn prime(&self) -> u64 {
        self.inner.p
    }

    fn degree(&self) -> usize {
        self.inner.e
    }

    fn random_elem<R: Rng + ?Sized>(&self, rng: &mut R) -> ExtElem {
        ExtElem((0..self.inner.e).map(|_| rng.gen_range(0..self.inner.p)).collect())
    }

    fn as_ext(&self) -> ExtField {
        self.clone()
    }

    fn lift(&self, a: &ExtElem, target: &ExtField) -> Result<ExtElem, ArithError> {
        if self == target {
            return Ok(a.clone());
        }
        let theta = self.embedding_root(target)?;
        // Horner in theta
        let mut acc = target.zero();
        for &c in a.0.iter().rev() {
            acc = target.add(&target.mul(&acc, &theta), &target.from_base(c));
        }
        Ok(acc)
    }

    fn elements(&self) -> Vec<ExtElem> {
        let (p, e) = (self.inner.p, self.inner.e);
        let total = (p as usize).pow(e as u32);
        let mut out = Vec::with_capacity(total);
        let mut cur: SmallVec<[u64; 4]> = SmallVec::from_elem(0, e);
        for _ in 0..total {
            out.push(ExtElem(cur.clone()));
            for c in cur.iter_mut() {
                *c += 1;
                if *c < p {
                    break;
                }
                *c = 0;
            }
        }
        out
    }
}

/// Dense polynomial helpers over `F_p` on raw coefficient vectors (low degree first).
mod fpx {
    pub fn trim(mut a: Vec<u64>) -> Vec<u64> {
        while a.last() == Some(&0) {
            a.pop();
        }
        a
    }

    fn inv_mod(a: u64, p: u64) -> u64 {
        let (mut r0, mut r1) = (p as i64, a as i64);
        let (mut t0, mut t1) = (0i64, 1i64);
        while r1 != 0 {
            let q = r0 / r1;
            (r0, r1) = (r1, r0 - q * r1);
            (t0, t1) = (t1, t0 - q * t1);
        }
        t0.rem_euclid(p as i64) as u64
    }

    pub fn rem(a: &[u64], m: &[u64], p: u64) -> Vec<u64> {
        let m = trim(m.to_vec());
        let mut r = trim(a.to_vec());
        let dm = m.len() - 1;
        let lead_inv = inv_mod(m[dm], p);
        while r.len() > dm {
            let top = r.len() - 1;
            let c = r[top] * lead_inv % p;
            for j in 0..=dm {
                r[top - dm + j] = (r[top - dm + j] + (p - c) * m[j] % p) % p;
            }
            r = trim(r);
        }
        r
    }

    fn divrem(a: &[u64], m: &[u64], p: u64) -> (Vec<u64>, Vec<u64>) {
        let mut r = trim(a.to_vec());
        let dm = m.len() - 1;
        if r.len() <= dm {
            return (vec![], r);
        }
        let mut q = vec![0u64; r.len() - dm];
        let lead_inv = inv_mod(m[dm], p);
        while r.len() > dm {
            let top = r.len() - 1;
            let c = r[top] * lead_inv % p;
            q[top - dm] = c;
            for j in 0..=dm {
                r[top - dm + j] = (r[top - dm + j] + (p - c) * m[j] % p) % p;
            }
            r = trim(r);
        }
        (trim(q), r)
    }

    fn mul(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
        if a.is_empty() || b.is_empty() {
            return vec![];
        }
        let mut out = vec![0u64; a.len() + b.len() - 1];
        for (i, &x) in a.iter().enumerate() {
            for (j, &y) in b.iter().enumerate() {
                out[i + j] = (out[i + j] + x * y) % p;
            }
        }
        trim(out)
    }

    fn sub(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
        let n = a.len().max(b.len());
        let out = (0..n)
            .map(|i| (a.get(i).copied().unwrap_or(0) + p - b.get(i).copied().unwrap_or(0)) % p)
            .collect();
        trim(out)
    }

    fn mulmod(a: &[u64], b: &[u64], m: &[u64], p: u64) -> Vec<u64> {
        rem(&mul(a, b, p), m, p)
    }

    fn powmod(a: &[u64], mut n: u64, m: &[u64], p: u64) -> Vec<u64> {
        let mut base = rem(a, m, p);
        let mut acc = vec![1u64];
        while n > 0 {
            if n & 1 == 1 {
                acc = mulmod(&acc, &base, m, p);
            }
            base = mulmod(&base, &base, m, p);
            n >>= 1;
        }
        acc
    }

    fn gcd(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
        let (mut a, mut b) = (trim(a.to_vec()), trim(b.to_vec()));
        while !b.is_empty() {
            let r = rem(&a, &b, p);
            a = b;
            b = r;
        }
        a
    }

    /// Inverse of `a` modulo `m`, if coprime.
    pub fn inverse_mod(a: &[u64], m: &[u64], p: u64) -> Option<Vec<u64>> {
        let (mut r0, mut r1) = (trim(m.to_vec()), rem(a, m, p));
        let (mut s0, mut s1): (Vec<u64>, Vec<u64>) = (vec![], vec![1]);
        while !r1.is_empty() {
            let (q, r) = divrem(&r0, &r1, p);
            let s = sub(&s0, &mul(&q, &s1, p), p);
            r0 = r1;
            r1 = r;
            s0 = s1;
            s1 = s;
        }
        if r0.len() != 1 {
            return None;
        }
        let c = inv_mod(r0[0], p);
        Some(trim(s0.iter().map(|x| x * c % p).collect()))
    }

    fn prime_divisors(mut n: usize) -> Vec<usize> {
        let mut out = Vec::new();
        let mut d = 2;
        while d * d <= n {
            if n % d == 0 {
                out.push(d);
                while n % d == 0 {
                    n /= d;
                }
            }
            d += 1;
        }
        if n > 1 {
            out.push(n);
        }
        out
    }

    /// Distinct-degree test: a monic `f` of degree `e` is irreducible iff it
    /// divides `x^(p^e) - x` and is coprime to `x^(p^(e/q)) - x` for every
    /// prime `q | e`.
    pub fn is_irreducible(f: &[u64], p: u64) -> bool {
        let e = f.len() - 1;
        if e == 1 {
            return true;
        }
        if f[0] == 0 {
            return false;
        }
        let x = vec![0u64, 1];
        let mut frob = vec![x.clone()];
        for i in 0..e {
            let next = powmod(&frob[i], p, f, p);
            frob.push(next);
        }
        if frob[e] != rem(&x, f, p) {
            return false;
        }
        prime_divisors(e).into_iter().all(|q| {
            let h = sub(&frob[e / q], &x, p);
            gcd(f, &h, p).len() == 1
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn f4_product() {
        let f = make_extension(2, 2).unwrap();
        assert_eq!(f.modulus(), &[1, 1, 1]);
        let t = f.generator();
        let t1 = f.add(&t, &f.one());
        assert_eq!(f.mul(&t, &t1), f.one());
    }

    #[test]
    fn degree_one_is_prime_field() {
        let f = make_extension(7, 1).unwrap();
        assert_eq!(f.elements().len(), 7);
        let a = f.from_base(3);
        assert_eq!(f.inv(&a).unwrap(), f.from_base(5));
    }

    #[test]
    fn f9_modulus_has_no_root() {
        let f = make_extension(3, 2).unwrap();
        let m = f.modulus();
        for x in 0..3u64 {
            assert_ne!((m[0] + m[1] * x + m[2] * x * x) % 3, 0);
        }
        assert_eq!(m, &[1, 0, 1]);
    }

    #[test]
    fn rejects_bad_input() {
        assert_eq!(make_extension(4, 2).unwrap_err(), ArithError::NotPrime(4));
        assert_eq!(make_extension(5, 0).unwrap_err(), ArithError::ZeroDegree);
    }

    #[test]
    fn inverses_in_f27() {
        let f = make_extension(3, 3).unwrap();
        for a in f.elements().into_iter().skip(1) {
            assert_eq!(f.mul(&a, &f.inv(&a).unwrap()), f.one());
        }
    }

    #[test]
    fn frobenius_fixes_prime_subfield() {
        let f = make_extension(5, 3).unwrap();
        for c in 0..5 {
            let a = f.from_base(c);
            assert_eq!(f.frobenius(&a), a);
        }
        let t = f.generator();
        assert_ne!(f.frobenius(&t), t);
        assert_eq!(f.pth_root(&f.frobenius(&t)), t);
    }

    #[test]
    fn embedding_is_a_homomorphism() {
        let small = make_extension(3, 2).unwrap();
        let big = make_extension(3, 4).unwrap();
        let els = small.elements();
        for a in &els {
            for b in els.iter().step_by(2) {
                let ab = small.lift(&small.mul(a, b), &big).unwrap();
                let la = small.lift(a, &big).unwrap();
                let lb = small.lift(b, &big).unwrap();
                assert_eq!(ab, big.mul(&la, &lb));
                let s = small.lift(&small.add(a, b), &big).unwrap();
                assert_eq!(s, big.add(&la, &lb));
            }
        }
        assert!(small.embedding_root(&make_extension(3, 3).unwrap()).is_err());
    }
}
